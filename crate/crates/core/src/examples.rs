//! Built-in Morse data: flat tori, complex projective spaces and synthetic
//! cohomology-level data such as the Cho-type manifold.

pub mod models;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Zero};

use crate::complexes::DegreeChainMap;
use crate::morse::{betti, morse_complex, DatumError, MorseDatum};
use crate::ratlinalg::{int, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExampleError {
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error("need n >= 1")]
    ZeroDimension,
    #[error("Lefschetz power p = {p} requires p <= n - 1 with n = {n}")]
    PowerTooLarge { n: usize, p: usize },
    #[error("omega map at degree {degree}: expected shape {expected:?}, found {found:?}")]
    Shape { degree: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("betti list of length {0} does not describe an even-dimensional manifold")]
    OddDimension(usize),
    #[error("datum is not perfect: m = {m:?}, b = {b:?}")]
    NotPerfect { m: Vec<usize>, b: Vec<usize> },
}

/// How the `2n` torus coordinates are grouped into symplectic pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pairing {
    /// `(1,2), (3,4), …`
    #[default]
    Adjacent,
    /// `(1,n+1), (2,n+2), …`
    Split,
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::Adjacent => "adjacent",
            Pairing::Split => "split",
        })
    }
}

impl FromStr for Pairing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adjacent" => Ok(Pairing::Adjacent),
            "split" => Ok(Pairing::Split),
            other => Err(format!("unknown pairing {other:?} (expected adjacent or split)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusConvention {
    pub n: usize,
    pub pairing: Pairing,
}

impl TorusConvention {
    pub fn new(n: usize, pairing: Pairing) -> Self {
        Self { n, pairing }
    }

    pub fn adjacent(n: usize) -> Self {
        Self::new(n, Pairing::Adjacent)
    }

    /// Symplectic pairs of 1-based coordinates, each ascending.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .map(|i| match self.pairing {
                Pairing::Adjacent => (2 * i - 1, 2 * i),
                Pairing::Split => (i, i + self.n),
            })
            .collect()
    }
}

/// Id of the torus generator `q_I` for an ascending 1-based coordinate set:
/// `q0` for the empty set, digits run together when `2n ≤ 9`, `_`-separated otherwise.
pub fn torus_id(coords: &[usize], n: usize) -> String {
    if coords.is_empty() {
        return "q0".to_string();
    }
    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    let sep = if 2 * n > 9 { "_" } else { "" };
    format!("q{}", parts.join(sep))
}

/// All subsets of `1..=2n`, as ascending lists.
pub(crate) fn coordinate_subsets(n: usize) -> Vec<Vec<usize>> {
    let dim = 2 * n;
    (0u64..1 << dim)
        .map(|mask| (1..=dim).filter(|&i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

/// Sign of the permutation sorting `(a, b, I…)` for a pair `a < b` disjoint from `I`.
fn pair_sign(a: usize, b: usize, coords: &[usize]) -> i64 {
    let seq: Vec<usize> = [a, b].into_iter().chain(coords.iter().copied()).collect();
    let inversions = (0..seq.len())
        .flat_map(|i| (i + 1..seq.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| seq[i] > seq[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The perfect Morse function `2 − ½ Σ cos 2πx_i` on `T^{2n}`: one critical point
/// `q_I` of index `|I|` per coordinate subset, `∂ = 0`, and
/// `c(ω) q_I = Σ_P ε(P, I) q_{I∪P}` over pairs `P` disjoint from `I`.
pub fn torus(conv: TorusConvention) -> Result<MorseDatum, ExampleError> {
    if conv.n == 0 {
        return Err(ExampleError::ZeroDimension);
    }
    let n = conv.n;
    let mut d = MorseDatum::new(format!("torus({n})"), 2 * n, 0);
    for coords in coordinate_subsets(n) {
        d.add_point(torus_id(&coords, n), coords.len());
    }
    for coords in coordinate_subsets(n) {
        for (a, b) in conv.pairs() {
            if coords.contains(&a) || coords.contains(&b) {
                continue;
            }
            let mut union = coords.clone();
            union.extend([a, b]);
            union.sort_unstable();
            d.add_cone(torus_id(&coords, n), torus_id(&union, n), int(pair_sign(a, b, &coords)));
        }
    }
    d.metadata.insert("family".into(), "torus".into());
    d.metadata.insert("pairing".into(), conv.pairing.to_string());
    d.metadata.insert("orientation".into(), "P dx_I = q_I".into());
    Ok(d.canonicalize())
}

/// `CP^n` with the Fubini–Study height function: `p_{2j}` of index `2j`, `∂ = 0`,
/// and `c(ω^{p+1}) p_{2j} = p_{2j+2p+2}`. The factor `π^{p+1}` is normalised
/// away and recorded in the metadata.
pub fn projective_space(n: usize, p: usize) -> Result<MorseDatum, ExampleError> {
    if n == 0 {
        return Err(ExampleError::ZeroDimension);
    }
    if p >= n {
        return Err(ExampleError::PowerTooLarge { n, p });
    }
    let id = |j: usize| format!("p{}", 2 * j);
    let mut d = MorseDatum::new(format!("CP{n}"), 2 * n, p);
    for j in 0..=n {
        d.add_point(id(j), 2 * j);
    }
    for j in 0..n.saturating_sub(p) {
        d.add_cone(id(j), id(j + p + 1), Rational::one());
    }
    d.metadata.insert("family".into(), "projective_space".into());
    d.metadata.insert("normalization".into(), format!("cone coefficients divided by pi^{}", p + 1));
    Ok(d.canonicalize())
}

/// The model complex standing in for differential forms: for a perfect datum
/// the Morse complex itself, with `∂ = 0`.
pub fn minimal_model(d: &MorseDatum) -> Result<DegreeChainMap, ExampleError> {
    let m = d.critical_counts();
    let b = betti(d)?;
    if m != b {
        return Err(ExampleError::NotPerfect { m, b });
    }
    Ok(morse_complex(d)?)
}

/// `[I_r 0; 0 0]` of the given shape.
pub fn truncated_identity(rows: usize, cols: usize, rank: usize) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(rows, cols);
    for i in 0..rank.min(rows).min(cols) {
        out[(i, i)] = Rational::one();
    }
    out
}

/// Perfect datum with `m_k = betti[k]`, `∂ = 0` and cone map `omega_maps[k]`
/// from degree `k` to `k + 2p + 2`; missing maps are zero. Ids are
/// `g{k}_{i}` with `i` zero-padded so that lexicographic order is numeric.
pub fn synthetic_from_ranks(
    betti: &[usize],
    omega_maps: &[RationalMatrix],
    p: usize,
) -> Result<MorseDatum, ExampleError> {
    if betti.len().is_multiple_of(2) {
        return Err(ExampleError::OddDimension(betti.len()));
    }
    let shift = 2 * p + 2;
    let dim = |k: usize| betti.get(k).copied().unwrap_or(0);
    let width = betti.iter().max().map_or(1, |&b| b.saturating_sub(1).to_string().len());
    let id = |k: usize, i: usize| format!("g{k}_{i:0width$}");
    let mut d = MorseDatum::new("synthetic", betti.len() - 1, p);
    for (k, &b) in betti.iter().enumerate() {
        for i in 0..b {
            d.add_point(id(k, i), k);
        }
    }
    for (k, map) in omega_maps.iter().enumerate() {
        let expected = (dim(k + shift), dim(k));
        if map.shape() != expected {
            return Err(ExampleError::Shape { degree: k, expected, found: map.shape() });
        }
        for i in 0..map.cols() {
            for j in 0..map.rows() {
                if !map[(j, i)].is_zero() {
                    d.add_cone(id(k, i), id(k + shift, j), map[(j, i)].clone());
                }
            }
        }
    }
    d.metadata.insert("family".into(), "synthetic".into());
    Ok(d.canonicalize())
}

/// Betti numbers of the Cho-type six-manifold, an `S²`-bundle over K3.
pub const CHO_BETTI: [usize; 7] = [1, 0, 23, 0, 23, 0, 1];

/// Synthetic Cho-type datum whose `ω: H² → H⁴` has the given rank (at most 23);
/// `ω: H⁰ → H²` and `ω: H⁴ → H⁶` are nonzero.
pub fn cho_synthetic(rank: usize) -> Result<MorseDatum, ExampleError> {
    if rank > 23 {
        return Err(ExampleError::Shape { degree: 2, expected: (23, 23), found: (rank, rank) });
    }
    let maps = [
        truncated_identity(23, 1, 1),
        RationalMatrix::zeros(0, 0),
        truncated_identity(23, 23, rank),
        RationalMatrix::zeros(0, 0),
        truncated_identity(1, 23, 1),
    ];
    let mut d = synthetic_from_ranks(&CHO_BETTI, &maps, 0)?;
    d.name = format!("cho(rank={rank})");
    d.metadata.insert("family".into(), "cho".into());
    d.metadata.insert("omega_rank_h2_h4".into(), rank.to_string());
    Ok(d)
}

/// Pairing `∫_{Ū(q_J)} dx_I` of constant monomial forms with closures of
/// unstable manifolds, in the id order of [`torus`]. Each unstable manifold is
/// the unit coordinate face spanned by `J`, so the matrix is the identity.
pub fn unstable_pairing_torus(conv: TorusConvention) -> RationalMatrix {
    RationalMatrix::identity(1 << (2 * conv.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::validate_datum;
    use alloc::vec;

    fn cone_of(d: &MorseDatum) -> Vec<Rational> {
        d.cone_map.iter().map(|e| e.coeff.clone()).collect()
    }

    fn image(d: &MorseDatum, from: &str) -> Vec<(String, Rational)> {
        d.cone_map.iter().filter(|e| e.from == from).map(|e| (e.to.clone(), e.coeff.clone())).collect()
    }

    #[test]
    fn four_torus_cone_map() {
        let d = torus(TorusConvention::adjacent(2)).unwrap();
        validate_datum(&d).unwrap();
        assert_eq!(d.critical_counts(), vec![1, 4, 6, 4, 1]);
        assert_eq!(image(&d, "q0"), vec![("q12".into(), int(1)), ("q34".into(), int(1))]);
        assert_eq!(image(&d, "q1"), vec![("q134".into(), int(1))]);
        assert_eq!(image(&d, "q3"), vec![("q123".into(), int(1))]);
        assert_eq!(image(&d, "q2"), vec![("q234".into(), int(1))]);
        assert!(image(&d, "q13").is_empty());
        assert_eq!(image(&d, "q12"), vec![("q1234".into(), int(1))]);
    }

    #[test]
    fn two_torus_cone_map() {
        let d = torus(TorusConvention::adjacent(1)).unwrap();
        assert_eq!(image(&d, "q0"), vec![("q12".into(), int(1))]);
        assert_eq!(cone_of(&d).len(), 1);
    }

    #[test]
    fn split_pairing_signs() {
        let d = torus(TorusConvention::new(2, Pairing::Split)).unwrap();
        validate_datum(&d).unwrap();
        // dx1∧dx3 ∧ dx2 = −dx1∧dx2∧dx3.
        assert_eq!(image(&d, "q2"), vec![("q123".into(), int(-1))]);
    }

    #[test]
    fn wide_tori_use_separators() {
        assert_eq!(torus_id(&[1, 10], 5), "q1_10");
        assert_eq!(torus_id(&[1, 2], 2), "q12");
        assert_eq!(torus_id(&[], 5), "q0");
    }

    #[test]
    fn projective_space_data() {
        let d = projective_space(3, 1).unwrap();
        assert_eq!(d.critical_counts(), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(d.cone_map.len(), 2);
        assert_eq!(d.cone_map[0].to, "p4");
        assert_eq!(projective_space(2, 2), Err(ExampleError::PowerTooLarge { n: 2, p: 2 }));
    }

    #[test]
    fn synthetic_shape_errors() {
        let bad = [RationalMatrix::zeros(1, 2)];
        assert!(matches!(synthetic_from_ranks(&[1, 0, 1], &bad, 0), Err(ExampleError::Shape { degree: 0, .. })));
        assert_eq!(synthetic_from_ranks(&[1, 1], &[], 0), Err(ExampleError::OddDimension(2)));
        let pt = synthetic_from_ranks(&[1], &[], 0).unwrap();
        assert_eq!(pt.critical_counts(), vec![1]);
    }

    #[test]
    fn synthetic_ids_sort_numerically() {
        let d = cho_synthetic(22).unwrap();
        let ids = &d.generators_by_index()[2];
        assert_eq!(ids[0], "g2_00");
        assert_eq!(ids[22], "g2_22");
        validate_datum(&d).unwrap();
    }

    #[test]
    fn minimal_model_rejects_non_perfect() {
        let d = torus(TorusConvention::adjacent(1)).unwrap();
        assert_eq!(minimal_model(&d).unwrap().source().dims(), &[1, 2, 1]);
        let s = crate::morse::stabilize(&d, 0, "s").unwrap();
        assert!(matches!(minimal_model(&s), Err(ExampleError::NotPerfect { .. })));
    }
}
