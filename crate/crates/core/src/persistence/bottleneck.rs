//! Bottleneck distance between finite barcodes, diagonal included.

use super::Barcode;

fn expand(b: &Barcode) -> (Vec<(f64, f64)>, Vec<f64>) {
    let mut finite = Vec::new();
    let mut inf_starts = Vec::new();
    for bar in &b.bars {
        for _ in 0..bar.multiplicity {
            if bar.is_finite() {
                finite.push((bar.start, bar.end));
            } else {
                inf_starts.push(bar.start);
            }
        }
    }
    (finite, inf_starts)
}

fn cost(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn half_len(a: (f64, f64)) -> f64 {
    (a.1 - a.0) / 2.0
}

/// Perfect-matching feasibility at threshold delta, via the standard
/// construction: each side is augmented with diagonal copies of the other
/// side's bars, and diagonal copies match each other for free.
fn feasible(a: &[(f64, f64)], b: &[(f64, f64)], delta: f64) -> bool {
    let (m, n) = (a.len(), b.len());
    let tol = delta + 1e-12;
    // left: 0..m real a-bars, m..m+n diagonal slots for b
    // right: 0..n real b-bars, n..n+m diagonal slots for a
    let edge = |l: usize, r: usize| -> bool {
        match (l < m, r < n) {
            (true, true) => cost(a[l], b[r]) <= tol,
            (true, false) => r - n == l && half_len(a[l]) <= tol,
            (false, true) => l - m == r && half_len(b[r]) <= tol,
            (false, false) => true,
        }
    };
    let total = m + n;
    let mut match_r: Vec<Option<usize>> = vec![None; total];

    fn augment(
        l: usize,
        total: usize,
        edge: &dyn Fn(usize, usize) -> bool,
        match_r: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for r in 0..total {
            if !visited[r] && edge(l, r) {
                visited[r] = true;
                let prev = match_r[r];
                match_r[r] = Some(l);
                if prev.is_none() || augment(prev.unwrap(), total, edge, match_r, visited) {
                    return true;
                }
                match_r[r] = prev;
            }
        }
        false
    }

    for l in 0..total {
        let mut visited = vec![false; total];
        if !augment(l, total, &edge, &mut match_r, &mut visited) {
            return false;
        }
    }
    true
}

fn infinite_part_cost(mut sa: Vec<f64>, mut sb: Vec<f64>) -> f64 {
    sa.sort_by(|p, q| p.partial_cmp(q).unwrap());
    sb.sort_by(|p, q| p.partial_cmp(q).unwrap());
    sa.iter().zip(&sb).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// Bottleneck distance. Infinite when the infinite-bar counts differ;
/// infinite bars match among themselves at the cost of their sorted starts.
pub fn bottleneck_distance(x: &Barcode, y: &Barcode) -> f64 {
    let (fa, ia) = expand(x);
    let (fb, ib) = expand(y);
    if ia.len() != ib.len() {
        return f64::INFINITY;
    }
    let inf_cost = infinite_part_cost(ia, ib);

    let mut cands = vec![0.0];
    for &p in &fa {
        cands.push(half_len(p));
        for &q in &fb {
            cands.push(cost(p, q));
        }
    }
    for &q in &fb {
        cands.push(half_len(q));
    }
    cands.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cands.dedup();
    let mut lo = 0usize;
    let mut hi = cands.len() - 1;
    debug_assert!(feasible(&fa, &fb, cands[hi]));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&fa, &fb, cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cands[lo].max(inf_cost)
}

/// Brute-force optimal matching for small barcodes (≤ 8 finite bars each):
/// enumerate all partial injections of x's bars into y's bars, the rest
/// retiring to the diagonal.
pub fn bottleneck_distance_brute(x: &Barcode, y: &Barcode) -> f64 {
    let (fa, ia) = expand(x);
    let (fb, ib) = expand(y);
    if ia.len() != ib.len() {
        return f64::INFINITY;
    }
    let inf_cost = infinite_part_cost(ia, ib);
    assert!(fa.len() <= 8 && fb.len() <= 8, "brute-force matcher is for tiny barcodes");

    fn rec(fa: &[(f64, f64)], fb: &[(f64, f64)], used: &mut Vec<bool>, i: usize, acc: f64) -> f64 {
        if i == fa.len() {
            let mut total = acc;
            for (j, &u) in used.iter().enumerate() {
                if !u {
                    total = total.max(half_len(fb[j]));
                }
            }
            return total;
        }
        let mut best = rec(fa, fb, used, i + 1, acc.max(half_len(fa[i])));
        for j in 0..fb.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(rec(fa, fb, used, i + 1, acc.max(cost(fa[i], fb[j]))));
                used[j] = false;
            }
        }
        best
    }
    let mut used = vec![false; fb.len()];
    rec(&fa, &fb, &mut used, 0, 0.0).max(inf_cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::Bar;
    use crate::rng::Stream;

    fn bars(v: &[(f64, f64)]) -> Barcode {
        Barcode::from_bars(v.iter().map(|&(s, e)| Bar::new(s, e)).collect()).unwrap()
    }

    #[test]
    fn single_bar_shift() {
        let d = bottleneck_distance(&bars(&[(0.0, 2.0)]), &bars(&[(0.0, 2.5)]));
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn identity_is_zero() {
        let b = bars(&[(0.0, 2.0), (1.0, f64::INFINITY), (0.5, 0.75)]);
        assert_eq!(bottleneck_distance(&b, &b), 0.0);
    }

    #[test]
    fn diagonal_wins_for_short_bars() {
        let d = bottleneck_distance(&bars(&[(0.0, 1.0)]), &Barcode::default());
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mismatched_infinite_bars() {
        let d = bottleneck_distance(&bars(&[(0.0, f64::INFINITY)]), &Barcode::default());
        assert!(d.is_infinite());
    }

    #[test]
    fn agrees_with_brute_force_on_random_barcodes() {
        let mut rng = Stream::named(42, "test.bottleneck");
        for _ in 0..300 {
            let mk = |rng: &mut Stream, n: usize| {
                let mut v = Vec::new();
                for _ in 0..n {
                    let s = rng.dyadic(0.0, 4.0, 6);
                    let l = rng.dyadic(0.0, 3.0, 6) + 1.0 / 64.0;
                    v.push((s, s + l));
                }
                bars(&v)
            };
            let n1 = 1 + rng.below(5);
            let n2 = 1 + rng.below(5);
            let b1 = mk(&mut rng, n1);
            let b2 = mk(&mut rng, n2);
            let fast = bottleneck_distance(&b1, &b2);
            let brute = bottleneck_distance_brute(&b1, &b2);
            assert!(
                (fast - brute).abs() < 1e-9,
                "mismatch: fast {fast} brute {brute} for {b1:?} vs {b2:?}"
            );
        }
    }

    #[test]
    fn symmetry_and_triangle_inequality() {
        let mut rng = Stream::named(7, "test.bottleneck.metric");
        for _ in 0..100 {
            let mk = |rng: &mut Stream| {
                let n = 1 + rng.below(4);
                let mut v = Vec::new();
                for _ in 0..n {
                    let s = rng.dyadic(0.0, 4.0, 5);
                    v.push((s, s + rng.dyadic(0.0, 2.0, 5) + 0.25));
                }
                bars(&v)
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let c = mk(&mut rng);
            let dab = bottleneck_distance(&a, &b);
            assert!((dab - bottleneck_distance(&b, &a)).abs() < 1e-9);
            assert!(dab <= bottleneck_distance(&a, &c) + bottleneck_distance(&c, &b) + 1e-9);
        }
    }
}
