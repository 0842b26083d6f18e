//! Random cochain complexes, even-degree chain maps and Morse data with known
//! cohomology, for property tests and fuzzing.
//!
//! Each degree starts split as `B ⊕ H ⊕ C` with `d` mapping `C` isomorphically
//! onto the next `B`. A chain map is `ψ + d h + h d` where `ψ` acts only between
//! the `H` blocks, so `b_k = dim H^k` and the induced rank is `rank ψ_k`. Every
//! space is then conjugated by a random invertible matrix, which hides the
//! splitting without changing any of those numbers.

use alloc::format;
use alloc::vec::Vec;

use num_traits::One;
use rand::Rng;

use crate::complexes::{CochainComplex, DegreeChainMap};
use crate::morse::MorseDatum;
use crate::ratlinalg::{int, Rational, RationalMatrix};

/// Size limits for generated data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzShape {
    /// Number of degrees, starting at 0.
    pub degrees: usize,
    /// Upper bound for each of the `H` and `C` block sizes.
    pub max_block: usize,
    /// Entries of `h` and `ψ` are drawn from `-coeff..=coeff`.
    pub coeff: i64,
}

impl Default for FuzzShape {
    fn default() -> Self {
        Self { degrees: 5, max_block: 2, coeff: 2 }
    }
}

#[derive(Debug, Clone)]
struct Split {
    b: Vec<usize>,
    h: Vec<usize>,
    c: Vec<usize>,
}

impl Split {
    fn dim(&self, k: i32) -> usize {
        usize::try_from(k).ok().filter(|&k| k < self.h.len()).map_or(0, |k| self.b[k] + self.h[k] + self.c[k])
    }

    fn random<R: Rng + ?Sized>(rng: &mut R, shape: &FuzzShape) -> Self {
        let n = shape.degrees;
        let h: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=shape.max_block)).collect();
        let c: Vec<usize> =
            (0..n).map(|k| if k + 1 < n { rng.gen_range(0..=shape.max_block) } else { 0 }).collect();
        let b = (0..n).map(|k| if k == 0 { 0 } else { c[k - 1] }).collect();
        Self { b, h, c }
    }

    /// The split differential `C_k → B_{k+1}` as an identity block.
    fn differential(&self, k: usize) -> RationalMatrix {
        let mut d = RationalMatrix::zeros(self.dim(k as i32 + 1), self.dim(k as i32));
        for i in 0..self.c[k] {
            d[(i, self.b[k] + self.h[k] + i)] = Rational::one();
        }
        d
    }

    fn complex(&self) -> CochainComplex {
        let dims = (0..self.h.len()).map(|k| self.dim(k as i32)).collect();
        let diffs = (0..self.h.len().saturating_sub(1)).map(|k| self.differential(k)).collect();
        CochainComplex::new(0, dims, diffs).expect("split complex shapes")
    }
}

fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, coeff: i64) -> RationalMatrix {
    let data = (0..rows * cols).map(|_| int(rng.gen_range(-coeff..=coeff))).collect();
    RationalMatrix::from_vec(rows, cols, data)
}

/// Random invertible matrix `L·U` with unit-modulus diagonals, and its inverse.
fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (RationalMatrix, RationalMatrix) {
    let mut l = RationalMatrix::identity(n);
    let mut u = RationalMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = int(rng.gen_range(-1..=1));
            u[(j, i)] = int(rng.gen_range(-1..=1));
        }
        if rng.gen_bool(0.5) {
            u[(i, i)] = int(-1);
        }
    }
    let p = l.mul(&u);
    let inv = p.inverse().expect("triangular factors are invertible");
    (p, inv)
}

/// A chain map with its expected invariants.
#[derive(Debug, Clone)]
pub struct FuzzSample {
    pub map: DegreeChainMap,
    /// Betti numbers of the source complex, degree 0 first.
    pub source_betti: Vec<usize>,
    pub target_betti: Vec<usize>,
    /// Rank of the induced map on cohomology, per source degree.
    pub induced_ranks: Vec<usize>,
}

fn sample<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &FuzzShape,
    shift: i32,
    source: &Split,
    target: Option<&Split>,
) -> FuzzSample {
    let endo = target.is_none();
    let target = target.unwrap_or(source);
    let n = source.h.len();
    let s_complex = source.complex();
    let t_complex = target.complex();
    let mut ranks = Vec::with_capacity(n);
    // φ_k = ψ_k + d h_k + h_{k+1} d with h_k : S^k → T^{k+shift-1}.
    let hs: Vec<RationalMatrix> = (0..=n as i32)
        .map(|k| random_matrix(rng, target.dim(k + shift - 1), source.dim(k), shape.coeff))
        .collect();
    let mut maps = Vec::with_capacity(n);
    for k in 0..n as i32 {
        let kt = k + shift;
        let mut psi = RationalMatrix::zeros(target.dim(kt), source.dim(k));
        if let Ok(ku) = usize::try_from(kt) {
            if ku < target.h.len() {
                let block = random_matrix(rng, target.h[ku], source.h[k as usize], shape.coeff);
                ranks.push(block.rank());
                psi.set_block(target.b[ku], source.b[k as usize], &block);
            } else {
                ranks.push(0);
            }
        }
        let dh = t_complex.differential(kt - 1).mul(&hs[k as usize]);
        let hd = hs[k as usize + 1].mul(&s_complex.differential(k));
        maps.push(psi.add(&dh).add(&hd));
    }

    let ps: Vec<_> = (0..n).map(|k| random_invertible(rng, source.dim(k as i32))).collect();
    let qs: Vec<_> = if endo {
        ps.clone()
    } else {
        (0..target.h.len()).map(|k| random_invertible(rng, target.dim(k as i32))).collect()
    };
    let conj = |split: &Split, mats: &[(RationalMatrix, RationalMatrix)]| {
        let dims = (0..split.h.len()).map(|k| split.dim(k as i32)).collect();
        let diffs = (0..split.h.len().saturating_sub(1))
            .map(|k| mats[k + 1].0.mul(&split.differential(k)).mul(&mats[k].1))
            .collect();
        CochainComplex::new(0, dims, diffs).expect("conjugated shapes")
    };
    let s_new = conj(source, &ps);
    let t_new = conj(target, &qs);
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(k, m)| {
            let kt = k as i32 + shift;
            let left = usize::try_from(kt).ok().and_then(|i| qs.get(i)).map(|q| &q.0);
            let m = match left {
                Some(q) => q.mul(&m),
                None => m,
            };
            m.mul(&ps[k].1)
        })
        .collect();
    let map = DegreeChainMap::new(s_new, t_new, shift, maps).expect("chain map shapes");
    FuzzSample { map, source_betti: source.h.clone(), target_betti: target.h.clone(), induced_ranks: ranks }
}

/// Random chain map between two independent random complexes.
pub fn random_chain_map<R: Rng + ?Sized>(rng: &mut R, shape: &FuzzShape, shift: i32) -> FuzzSample {
    let source = Split::random(rng, shape);
    let target = Split::random(rng, shape);
    sample(rng, shape, shift, &source, Some(&target))
}

/// Random self chain map of one random complex.
pub fn random_endomorphism<R: Rng + ?Sized>(rng: &mut R, shape: &FuzzShape, shift: i32) -> FuzzSample {
    let split = Split::random(rng, shape);
    sample(rng, shape, shift, &split, None)
}

/// Random valid Morse datum on a `2n`-manifold with ids `g{k}_{i}`; degrees
/// `0..=2n` are all populated from a random self chain map of shift `2p+2`.
pub fn random_datum<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, max_block: usize, coeff: i64) -> MorseDatum {
    let shape = FuzzShape { degrees: 2 * n + 1, max_block, coeff };
    let s = random_endomorphism(rng, &shape, 2 * p as i32 + 2);
    datum_from_map(&s.map, &format!("random-{n}-{p}"), 2 * n, p)
}

/// Reads a self chain map on degrees `0..=manifold_dim` back as a Morse datum.
pub fn datum_from_map(map: &DegreeChainMap, name: &str, manifold_dim: usize, p: usize) -> MorseDatum {
    let c = map.source();
    let id = |k: i32, i: usize| format!("g{k}_{i:02}");
    let mut d = MorseDatum::new(name, manifold_dim, p);
    for k in c.degrees() {
        for i in 0..c.dim(k) {
            d.add_point(id(k, i), k as usize);
        }
    }
    for k in c.degrees() {
        let dk = c.differential(k);
        let ck = map.map_at(k);
        for i in 0..c.dim(k) {
            for j in 0..dk.rows() {
                if !num_traits::Zero::is_zero(&dk[(j, i)]) {
                    d.add_boundary(id(k, i), id(k + 1, j), dk[(j, i)].clone());
                }
            }
            for j in 0..ck.rows() {
                if !num_traits::Zero::is_zero(&ck[(j, i)]) {
                    d.add_cone(id(k, i), id(k + map.shift(), j), ck[(j, i)].clone());
                }
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_match_their_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let s = random_chain_map(&mut rng, &FuzzShape::default(), 2);
            assert_eq!(s.map.source().cohomology().unwrap().dims(), s.source_betti);
            assert_eq!(s.map.target().cohomology().unwrap().dims(), s.target_betti);
            assert_eq!(s.map.induced_map_ranks().unwrap(), s.induced_ranks);
        }
    }

    #[test]
    fn random_datum_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in 0..2 {
            let d = random_datum(&mut rng, 2, p, 2, 2);
            crate::morse::validate_datum(&d).unwrap();
        }
    }

    #[test]
    fn endomorphisms_share_one_complex() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let s = random_endomorphism(&mut rng, &FuzzShape::default(), 2);
            assert_eq!(s.map.source(), s.map.target());
            assert_eq!(s.map.induced_map_ranks().unwrap(), s.induced_ranks);
        }
    }
}
