//! Cohomology-ring models used as the "forms" side when checking the Morse data
//! of the built-in families: the exterior algebra of constant forms on a torus
//! and truncated polynomial rings `Q[x₁,…,x_r]/(x_i^{n_i+1})` for products of
//! projective spaces.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{coordinate_subsets, torus_id, TorusConvention};
use crate::complexes::{CochainComplex, DegreeChainMap};
use crate::ratlinalg::{Rational, RationalMatrix};

/// `dx_I ∧ dx_J` for ascending index lists: `None` if they overlap, otherwise
/// the sign and the ascending union.
pub fn wedge(i: &[usize], j: &[usize]) -> Option<(i64, Vec<usize>)> {
    if i.iter().any(|a| j.contains(a)) {
        return None;
    }
    // Moving each element of J left past the larger elements of I.
    let swaps: usize = j.iter().map(|b| i.iter().filter(|&&a| a > *b).count()).sum();
    let mut out: Vec<usize> = i.iter().chain(j).copied().collect();
    out.sort_unstable();
    Some((if swaps.is_multiple_of(2) { 1 } else { -1 }, out))
}

/// Constant-coefficient forms on `T^{2n}` with `d = 0` and the map `ω^{p+1}∧`,
/// where `ω = Σ dx_a ∧ dx_b` over the convention's pairs. The basis of each
/// degree is ordered like the torus generator ids, so under `P dx_I = q_I`
/// the matrices compare entry by entry with the Morse data.
pub fn exterior_torus(conv: TorusConvention, p: usize) -> DegreeChainMap {
    let n = conv.n;
    let mut basis: Vec<Vec<Vec<usize>>> = vec![Vec::new(); 2 * n + 1];
    for s in coordinate_subsets(n) {
        basis[s.len()].push(s);
    }
    for forms in &mut basis {
        forms.sort_by_key(|s| torus_id(s, n));
    }
    let omega: Vec<Vec<usize>> = conv.pairs().into_iter().map(|(a, b)| vec![a, b]).collect();
    let times_omega = |form: &BTreeMap<Vec<usize>, Rational>| {
        let mut out = BTreeMap::new();
        for (mono, c) in form {
            for w in &omega {
                if let Some((sign, prod)) = wedge(w, mono) {
                    let e = out.entry(prod).or_insert_with(Rational::zero);
                    *e += c * Rational::from_integer(sign.into());
                }
            }
        }
        out
    };
    let shift = 2 * p + 2;
    let maps = (0..=2 * n)
        .map(|k| {
            let rows = basis.get(k + shift).map_or(0, Vec::len);
            let mut m = RationalMatrix::zeros(rows, basis[k].len());
            for (col, mono) in basis[k].iter().enumerate() {
                let mut form = BTreeMap::from([(mono.clone(), Rational::one())]);
                for _ in 0..=p {
                    form = times_omega(&form);
                }
                for (prod, c) in form {
                    if let Some(row) = basis[k + shift].iter().position(|b| *b == prod) {
                        m[(row, col)] = c;
                    }
                }
            }
            m
        })
        .collect();
    let complex = CochainComplex::with_zero_differential(0, basis.iter().map(Vec::len).collect());
    DegreeChainMap::endomorphism(complex, shift as i32, maps).expect("model shapes")
}

/// `Q[x₁,…,x_r]/(x_i^{n_i+1})` with `deg x_i = 2`, `d = 0`, and multiplication
/// by `(Σ x_i)^{p+1}`: the cohomology ring of `CP^{n_1} × … × CP^{n_r}`.
pub fn truncated_polynomial(ns: &[usize], p: usize) -> DegreeChainMap {
    let top = ns.iter().sum::<usize>();
    let mut monomials: Vec<Vec<Vec<usize>>> = vec![Vec::new(); 2 * top + 1];
    let mut exps = vec![vec![]];
    for &n in ns {
        exps = exps
            .into_iter()
            .flat_map(|e: Vec<usize>| {
                (0..=n).map(move |a| {
                    let mut e = e.clone();
                    e.push(a);
                    e
                })
            })
            .collect();
    }
    for e in exps {
        monomials[2 * e.iter().sum::<usize>()].push(e);
    }
    let shift = 2 * p + 2;
    let maps = (0..=2 * top)
        .map(|k| {
            let rows = monomials.get(k + shift).map_or(0, Vec::len);
            let mut m = RationalMatrix::zeros(rows, monomials[k].len());
            for (col, mono) in monomials[k].iter().enumerate() {
                let mut poly = BTreeMap::from([(mono.clone(), Rational::one())]);
                for _ in 0..=p {
                    let mut next = BTreeMap::new();
                    for (e, c) in &poly {
                        for i in 0..ns.len() {
                            if e[i] < ns[i] {
                                let mut e2 = e.clone();
                                e2[i] += 1;
                                *next.entry(e2).or_insert_with(Rational::zero) += c;
                            }
                        }
                    }
                    poly = next;
                }
                for (e, c) in poly {
                    let row = monomials[k + shift].iter().position(|b| *b == e).expect("monomial in range");
                    m[(row, col)] = c;
                }
            }
            m
        })
        .collect();
    let complex = CochainComplex::with_zero_differential(0, monomials.iter().map(Vec::len).collect());
    DegreeChainMap::endomorphism(complex, shift as i32, maps).expect("model shapes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge(&[1, 2], &[3]), Some((1, vec![1, 2, 3])));
        assert_eq!(wedge(&[1, 3], &[2]), Some((-1, vec![1, 2, 3])));
        assert_eq!(wedge(&[3, 4], &[1]), Some((1, vec![1, 3, 4])));
        assert_eq!(wedge(&[1, 2], &[2]), None);
        assert_eq!(wedge(&[2], &[1]), Some((-1, vec![1, 2])));
    }

    #[test]
    fn projective_plane_model() {
        let phi = truncated_polynomial(&[2], 0);
        assert_eq!(phi.source().dims(), &[1, 0, 1, 0, 1]);
        assert_eq!(phi.induced_map_ranks().unwrap(), vec![1, 0, 1, 0, 0]);
    }

    #[test]
    fn four_torus_model_ranks() {
        let phi = exterior_torus(TorusConvention::adjacent(2), 0);
        assert_eq!(phi.source().dims(), &[1, 4, 6, 4, 1]);
        assert_eq!(phi.induced_map_ranks().unwrap(), vec![1, 4, 1, 0, 0]);
        let phi2 = exterior_torus(TorusConvention::adjacent(2), 1);
        assert_eq!(phi2.induced_map_ranks().unwrap(), vec![1, 0, 0, 0, 0]);
    }
}
