//! Column reduction of a filtered F2 complex.
//!
//! Generators are processed in increasing action, ties broken by insertion
//! order; the pivot of a column is its latest generator in that order. The
//! output pairing is a singular value decomposition: `d(x_i) = y_i`,
//! `d(z_j) = 0`, and every basis chain is triangular against the processing
//! order, hence orthogonal with respect to action.

use super::{Bar, Barcode, FilteredComplexF2};
use crate::error::Error;
use std::collections::HashMap;

/// Result of reducing a filtered complex.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// (y, x) generator index pairs with d(x) = y, including zero-length ones.
    pub pairs: Vec<(usize, usize)>,
    /// Unpaired generators carrying infinite bars.
    pub cycles: Vec<usize>,
    /// For each generator, the support (original indices) of its reduced
    /// basis chain x_i / z_j.
    pub basis: Vec<Vec<usize>>,
    pub barcode: Barcode,
}

pub fn reduce_filtered_complex(c: &FilteredComplexF2) -> Result<Reduction, Error> {
    c.validate()?;
    let n = c.len();
    // processing order: increasing (action, insertion index)
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (c.generators[a].action, a).partial_cmp(&(c.generators[b].action, b)).unwrap()
    });
    let mut pos = vec![0usize; n];
    for (p, &g) in order.iter().enumerate() {
        pos[g] = p;
    }

    // columns in position space, kept as sorted vecs of positions
    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(n);
    for &g in &order {
        let mut col: Vec<usize> = c.boundary[g].iter().map(|&j| pos[j]).collect();
        col.sort_unstable();
        cols.push(col);
    }
    // chain[j] = support of the basis vector with lead position j
    let mut chains: Vec<Vec<usize>> = (0..n).map(|j| vec![j]).collect();

    let mut pivot_owner: HashMap<usize, usize> = HashMap::new();
    let mut pairs_pos: Vec<(usize, usize)> = Vec::new();
    let mut cycles_pos: Vec<usize> = Vec::new();

    fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] < b[j]) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j] < a[i] {
                out.push(b[j]);
                j += 1;
            } else {
                i += 1;
                j += 1;
            }
        }
        out
    }

    for j in 0..n {
        let mut col = cols[j].clone();
        let mut chain = chains[j].clone();
        while let Some(&low) = col.last() {
            match pivot_owner.get(&low) {
                Some(&owner) => {
                    col = xor_sorted(&col, &cols[owner]);
                    chain = xor_sorted(&chain, &chains[owner]);
                }
                None => break,
            }
        }
        cols[j] = col;
        chains[j] = chain;
        match cols[j].last() {
            Some(&low) => {
                pivot_owner.insert(low, j);
                pairs_pos.push((low, j));
            }
            None => cycles_pos.push(j),
        }
    }

    // a killed position is not a cycle
    let killed: std::collections::HashSet<usize> = pairs_pos.iter().map(|&(y, _)| y).collect();
    let cycles_pos: Vec<usize> = cycles_pos.into_iter().filter(|p| !killed.contains(p)).collect();

    let act = |p: usize| c.generators[order[p]].action;
    let mut bars = Vec::new();
    for &(y, x) in &pairs_pos {
        if act(y) < act(x) {
            bars.push(Bar {
                start: act(y),
                end: act(x),
                multiplicity: 1,
                degree: c.generators[order[y]].degree,
            });
        }
    }
    for &z in &cycles_pos {
        bars.push(Bar {
            start: act(z),
            end: f64::INFINITY,
            multiplicity: 1,
            degree: c.generators[order[z]].degree,
        });
    }

    // map back to original generator indices
    let pairs: Vec<(usize, usize)> = pairs_pos.iter().map(|&(y, x)| (order[y], order[x])).collect();
    let cycles: Vec<usize> = cycles_pos.iter().map(|&p| order[p]).collect();
    let mut basis = vec![Vec::new(); n];
    for (p, chain) in chains.iter().enumerate() {
        basis[order[p]] = chain.iter().map(|&q| order[q]).collect();
    }

    Ok(Reduction { pairs, cycles, basis, barcode: Barcode::from_bars(bars)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::Generator;

    fn complex(gens: &[(&str, f64)], boundary: &[&[usize]]) -> FilteredComplexF2 {
        FilteredComplexF2::new(
            gens.iter()
                .map(|&(id, action)| Generator { id: id.into(), action, degree: None })
                .collect(),
            boundary.iter().map(|b| b.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_cycle_generator() {
        let c = complex(&[("z", 0.7)], &[&[]]);
        let r = reduce_filtered_complex(&c).unwrap();
        assert_eq!(r.barcode.multiset(), vec![(0.7, f64::INFINITY, 1)]);
    }

    #[test]
    fn single_pair() {
        // d(a) = b, A(a) = 5, A(b) = 0 -> one bar (0, 5]
        let c = complex(&[("a", 5.0), ("b", 0.0)], &[&[1], &[]]);
        let r = reduce_filtered_complex(&c).unwrap();
        assert_eq!(r.barcode.multiset(), vec![(0.0, 5.0, 1)]);
        assert_eq!(r.pairs.len(), 1);
        assert_eq!(r.cycles.len(), 0);
    }

    #[test]
    fn zero_length_pairs_are_dropped_from_barcode() {
        let c = complex(&[("b", 1.0), ("a", 1.0)], &[&[], &[0]]);
        let r = reduce_filtered_complex(&c).unwrap();
        assert!(r.barcode.bars.is_empty());
        assert_eq!(r.pairs.len(), 1);
    }

    #[test]
    fn empty_complex() {
        let c = complex(&[], &[]);
        let r = reduce_filtered_complex(&c).unwrap();
        assert!(r.barcode.bars.is_empty());
    }

    #[test]
    fn basis_is_triangular_hence_orthogonal() {
        // two independent cycles merged by an edge plus a higher cell
        let c = complex(
            &[("u", 0.0), ("v", 1.0), ("e", 2.0), ("f", 2.5), ("t", 3.0)],
            &[&[], &[], &[0, 1], &[0, 1], &[2, 3]],
        );
        let r = reduce_filtered_complex(&c).unwrap();
        // each basis chain's max-(action, idx) element is the generator itself
        for (g, chain) in r.basis.iter().enumerate() {
            let key = |i: usize| (c.generators[i].action, i);
            assert!(chain.iter().all(|&m| key(m) <= key(g)));
            assert!(chain.contains(&g));
        }
        // v merges into u at 2, f's cycle class is killed by t
        assert_eq!(
            r.barcode.multiset(),
            vec![(0.0, f64::INFINITY, 1), (1.0, 2.0, 1), (2.5, 3.0, 1)]
        );
    }
}
