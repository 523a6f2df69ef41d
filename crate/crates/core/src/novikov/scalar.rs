//! Scalars of the Novikov field with F2 coefficients.
//!
//! A scalar is a finite formal sum of monomials T^a with real exponents and
//! implicit coefficient 1; addition is symmetric difference of exponent sets,
//! multiplication is the sumset with mod-2 multiplicities. Exponents compare
//! exactly as binary floats, so arithmetic is exact.

use std::fmt;

#[derive(Clone, PartialEq, Default)]
pub struct NovikovScalar {
    /// strictly increasing exponents
    terms: Vec<f64>,
}

impl fmt::Debug for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let body: Vec<String> = self.terms.iter().map(|a| format!("T^{a}")).collect();
        write!(f, "{}", body.join("+"))
    }
}

impl NovikovScalar {
    pub fn zero() -> Self {
        NovikovScalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        NovikovScalar::monomial(0.0)
    }

    pub fn monomial(a: f64) -> Self {
        NovikovScalar { terms: vec![a] }
    }

    pub fn from_exponents(mut exps: Vec<f64>) -> Self {
        exps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // cancel equal pairs mod 2
        let mut terms: Vec<f64> = Vec::with_capacity(exps.len());
        for e in exps {
            if terms.last() == Some(&e) {
                terms.pop();
            } else {
                terms.push(e);
            }
        }
        NovikovScalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[f64] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Valuation: the least exponent; None encodes +infinity for the zero
    /// scalar.
    pub fn valuation(&self) -> Option<f64> {
        self.terms.first().copied()
    }

    pub fn add(&self, other: &NovikovScalar) -> NovikovScalar {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j == other.terms.len()
                || (i < self.terms.len() && self.terms[i] < other.terms[j]);
            if take_left {
                out.push(self.terms[i]);
                i += 1;
            } else if i == self.terms.len() || other.terms[j] < self.terms[i] {
                out.push(other.terms[j]);
                j += 1;
            } else {
                i += 1;
                j += 1;
            }
        }
        NovikovScalar { terms: out }
    }

    pub fn mul(&self, other: &NovikovScalar) -> NovikovScalar {
        let mut exps = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &a in &self.terms {
            for &b in &other.terms {
                exps.push(a + b);
            }
        }
        NovikovScalar::from_exponents(exps)
    }

    pub fn shift(&self, a: f64) -> NovikovScalar {
        NovikovScalar { terms: self.terms.iter().map(|t| t + a).collect() }
    }

    /// Exact quotient self / divisor when the quotient is again a finite sum;
    /// None when divisor is zero or the long division does not terminate with
    /// remainder zero within the term budget.
    pub fn exact_div(&self, divisor: &NovikovScalar) -> Option<NovikovScalar> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(NovikovScalar::zero());
        }
        let dv = divisor.terms[0];
        let mut rem = self.clone();
        let mut quo: Vec<f64> = Vec::new();
        // each step strips the leading term of the remainder; a true finite
        // quotient has exactly term_count(quotient) steps
        let budget = 4 * (self.terms.len() + divisor.terms.len()) + 64;
        for _ in 0..budget {
            if rem.is_zero() {
                return Some(NovikovScalar::from_exponents(quo));
            }
            let q = rem.terms[0] - dv;
            quo.push(q);
            rem = rem.add(&divisor.shift(q));
        }
        None
    }
}
