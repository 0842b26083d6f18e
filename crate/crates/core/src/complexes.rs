//! Finite cochain complexes over the rationals, even-degree chain maps and
//! their mapping cones.
//!
//! Degrees live on a closed integer range `min_degree ..= max_degree`. Outside
//! that range every dimension is zero and every matrix is empty, so cone
//! indexing such as `k - shift + 1` never needs special cases.

use alloc::borrow::Cow;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_traits::Zero;

use crate::ratlinalg::{quotient_map, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("{what} at degree {degree}: expected shape {expected:?}, found {found:?}")]
    Shape { what: String, degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("d∘d ≠ 0 at degree {degree}: entry ({row}, {col}) of d_{{k+1}}·d_k is nonzero")]
    NotDifferential { degree: i32, row: usize, col: usize },
    #[error("chain-map identity fails at degree {degree}: entry ({row}, {col}) of d·φ − φ·d is nonzero")]
    NotChainMap { degree: i32, row: usize, col: usize },
    #[error("chain map shift must be even and positive, got {0}")]
    BadShift(i32),
}

/// A bounded cochain complex `C^k` with `d_k: C^k → C^{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex {
    min_degree: i32,
    dims: Vec<usize>,
    /// `differentials[i]` maps degree `min_degree + i` to the next degree.
    differentials: Vec<RationalMatrix>,
}

impl CochainComplex {
    /// Checks matrix shapes against `dims`; `d∘d = 0` is checked by [`validate`](Self::validate).
    pub fn new(
        min_degree: i32,
        dims: Vec<usize>,
        differentials: Vec<RationalMatrix>,
    ) -> Result<Self, ComplexError> {
        let expected_len = dims.len().saturating_sub(1);
        if differentials.len() != expected_len {
            return Err(ComplexError::Shape {
                what: "differential count".into(),
                degree: min_degree,
                expected: (expected_len, 0),
                found: (differentials.len(), 0),
            });
        }
        for (i, d) in differentials.iter().enumerate() {
            let expected = (dims[i + 1], dims[i]);
            if d.shape() != expected {
                return Err(ComplexError::Shape {
                    what: "differential".into(),
                    degree: min_degree + i as i32,
                    expected,
                    found: d.shape(),
                });
            }
        }
        Ok(Self { min_degree, dims, differentials })
    }

    /// Complex with the given dimensions and all differentials zero.
    pub fn with_zero_differential(min_degree: i32, dims: Vec<usize>) -> Self {
        let differentials = dims.windows(2).map(|w| RationalMatrix::zeros(w[1], w[0])).collect();
        Self { min_degree, dims, differentials }
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    /// Largest stored degree; `min_degree - 1` for an empty complex.
    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> RangeInclusive<i32> {
        self.min_degree..=self.max_degree()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn offset(&self, k: i32) -> Option<usize> {
        let i = k.checked_sub(self.min_degree)?;
        (i >= 0 && (i as usize) < self.dims.len()).then_some(i as usize)
    }

    pub fn dim(&self, k: i32) -> usize {
        self.offset(k).map_or(0, |i| self.dims[i])
    }

    /// `d_k : C^k → C^{k+1}`; a zero matrix of the right shape outside the stored range.
    pub fn differential(&self, k: i32) -> Cow<'_, RationalMatrix> {
        match self.offset(k) {
            Some(i) if i < self.differentials.len() => Cow::Borrowed(&self.differentials[i]),
            _ => Cow::Owned(RationalMatrix::zeros(self.dim(k + 1), self.dim(k))),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `Σ (−1)^k dim C^k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|k| sign(k) * self.dim(k) as i64).sum()
    }

    /// Confirms `d_{k+1} · d_k = 0` everywhere, or names the first failing degree
    /// and a nonzero entry of the composite.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for k in self.degrees() {
            let dd = self.differential(k + 1).mul(&self.differential(k));
            if let Some((row, col)) = dd.first_nonzero() {
                return Err(ComplexError::NotDifferential { degree: k, row, col });
            }
        }
        Ok(())
    }

    /// Cohomology with explicit cocycle, coboundary and representative bases.
    pub fn cohomology(&self) -> Result<CohomologyData, ComplexError> {
        self.validate()?;
        let degrees = self
            .degrees()
            .map(|k| {
                let cocycles = self.differential(k).nullspace_basis();
                let coboundaries = self.differential(k - 1).column_space_basis();
                // Extend a coboundary basis by cocycles; the cocycles picked up as
                // new pivots represent a basis of the quotient.
                let (_, pivots) = coboundaries.hcat(&cocycles).rref();
                let rep_cols: Vec<usize> = pivots
                    .into_iter()
                    .filter(|&p| p >= coboundaries.cols())
                    .map(|p| p - coboundaries.cols())
                    .collect();
                let representatives = cocycles.select_columns(&rep_cols);
                DegreeCohomology { cocycles, coboundaries, representatives }
            })
            .collect();
        Ok(CohomologyData { min_degree: self.min_degree, degrees })
    }
}

/// Cohomology of one degree: `H^k = Z^k / B^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCohomology {
    /// Columns span `ker d_k`.
    pub cocycles: RationalMatrix,
    /// Independent columns spanning `im d_{k-1}`.
    pub coboundaries: RationalMatrix,
    /// Cocycles whose classes form a basis of `H^k`.
    pub representatives: RationalMatrix,
}

impl DegreeCohomology {
    pub fn dim(&self) -> usize {
        self.representatives.cols()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyData {
    min_degree: i32,
    degrees: Vec<DegreeCohomology>,
}

impl CohomologyData {
    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn degree(&self, k: i32) -> Option<&DegreeCohomology> {
        let i = k.checked_sub(self.min_degree)?;
        usize::try_from(i).ok().and_then(|i| self.degrees.get(i))
    }

    /// `b_k`, zero outside the stored range.
    pub fn betti(&self, k: i32) -> usize {
        self.degree(k).map_or(0, DegreeCohomology::dim)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(DegreeCohomology::dim).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(i, d)| sign(self.min_degree + i as i32) * d.dim() as i64)
            .sum()
    }
}

/// Chain map `φ: S → T` raising degree by an even `shift`.
///
/// With an even shift the chain-map identity carries no sign:
/// `d_T · φ_k = φ_{k+1} · d_S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeChainMap {
    source: CochainComplex,
    target: CochainComplex,
    shift: i32,
    /// `maps[i]` acts on source degree `source.min_degree() + i`.
    maps: Vec<RationalMatrix>,
}

impl DegreeChainMap {
    pub fn new(
        source: CochainComplex,
        target: CochainComplex,
        shift: i32,
        maps: Vec<RationalMatrix>,
    ) -> Result<Self, ComplexError> {
        if shift <= 0 || shift % 2 != 0 {
            return Err(ComplexError::BadShift(shift));
        }
        if maps.len() != source.dims.len() {
            return Err(ComplexError::Shape {
                what: "chain map count".into(),
                degree: source.min_degree,
                expected: (source.dims.len(), 0),
                found: (maps.len(), 0),
            });
        }
        for (k, m) in source.degrees().zip(&maps) {
            let expected = (target.dim(k + shift), source.dim(k));
            if m.shape() != expected {
                return Err(ComplexError::Shape {
                    what: "chain map".into(),
                    degree: k,
                    expected,
                    found: m.shape(),
                });
            }
        }
        Ok(Self { source, target, shift, maps })
    }

    /// Self-map of `complex`.
    pub fn endomorphism(
        complex: CochainComplex,
        shift: i32,
        maps: Vec<RationalMatrix>,
    ) -> Result<Self, ComplexError> {
        Self::new(complex.clone(), complex, shift, maps)
    }

    pub fn source(&self) -> &CochainComplex {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// `φ_k : S^k → T^{k+shift}`; zero outside the source range.
    pub fn map_at(&self, k: i32) -> Cow<'_, RationalMatrix> {
        match self.source.offset(k) {
            Some(i) => Cow::Borrowed(&self.maps[i]),
            None => Cow::Owned(RationalMatrix::zeros(self.target.dim(k + self.shift), 0)),
        }
    }

    /// `λ·φ`.
    pub fn scaled(&self, lambda: &Rational) -> Self {
        Self { maps: self.maps.iter().map(|m| m.scaled(lambda)).collect(), ..self.clone() }
    }

    /// Chain-level ranks `v_k = rank φ_k` over the source degrees.
    pub fn chain_ranks(&self) -> Vec<usize> {
        self.maps.iter().map(RationalMatrix::rank).collect()
    }

    pub fn check_chain_map(&self) -> Result<(), ComplexError> {
        for k in self.source.degrees() {
            let lhs = self.target.differential(k + self.shift).mul(&self.map_at(k));
            let rhs = self.map_at(k + 1).mul(&self.source.differential(k));
            if let Some((row, col)) = lhs.sub(&rhs).first_nonzero() {
                return Err(ComplexError::NotChainMap { degree: k, row, col });
            }
        }
        Ok(())
    }

    /// Matrices of the induced maps `H^k(S) → H^{k+shift}(T)` in the
    /// representative bases of [`CochainComplex::cohomology`], one per source degree.
    pub fn induced_maps(&self) -> Result<Vec<RationalMatrix>, ComplexError> {
        self.check_chain_map()?;
        let hs = self.source.cohomology()?;
        let ht = self.target.cohomology()?;
        self.source
            .degrees()
            .map(|k| {
                let src = hs.degree(k).expect("degree in range");
                let k2 = k + self.shift;
                let (reps, cobs) = match ht.degree(k2) {
                    Some(d) => (d.representatives.clone(), d.coboundaries.clone()),
                    None => {
                        let n = self.target.dim(k2);
                        (RationalMatrix::zeros(n, 0), RationalMatrix::zeros(n, 0))
                    }
                };
                let split = reps.cols();
                quotient_map(&self.map_at(k), &src.representatives, &reps.hcat(&cobs), split).map_err(
                    |e| {
                        // The image of a cocycle left the cocycle space.
                        let witness = self.map_at(k).mul(&src.representatives).column(e.column);
                        let row = witness.iter().position(|x| !x.is_zero()).unwrap_or(0);
                        ComplexError::NotChainMap { degree: k, row, col: e.column }
                    },
                )
            })
            .collect()
    }

    /// `r_k`: rank of the induced map on cohomology, one per source degree.
    pub fn induced_map_ranks(&self) -> Result<Vec<usize>, ComplexError> {
        Ok(self.induced_maps()?.iter().map(RationalMatrix::rank).collect())
    }

    /// Degree range of the mapping cone.
    pub fn cone_degrees(&self) -> RangeInclusive<i32> {
        let s = self.shift - 1;
        let lo = self.target.min_degree.min(self.source.min_degree + s);
        let hi = self.target.max_degree().max(self.source.max_degree() + s);
        lo..=hi
    }

    /// `Cone^k = T^k ⊕ S^{k−shift+1}` with differential `[[d_T, φ], [0, −d_S]]`.
    pub fn mapping_cone(&self) -> Result<CochainComplex, ComplexError> {
        self.check_chain_map()?;
        let s = self.shift - 1;
        let range = self.cone_degrees();
        let lo = *range.start();
        let dims: Vec<usize> =
            range.clone().map(|k| self.target.dim(k) + self.source.dim(k - s)).collect();
        let mut differentials = Vec::with_capacity(dims.len().saturating_sub(1));
        for k in lo..*range.end() {
            let (t0, s0) = (self.target.dim(k), self.source.dim(k - s));
            let t1 = self.target.dim(k + 1);
            let mut d = RationalMatrix::zeros(t1 + self.source.dim(k + 1 - s), t0 + s0);
            d.set_block(0, 0, &self.target.differential(k));
            d.set_block(0, t0, &self.map_at(k - s));
            d.set_block(t1, t0, &self.source.differential(k - s).neg());
            differentials.push(d);
        }
        let cone = CochainComplex::new(lo, dims, differentials)?;
        debug_assert!(cone.validate().is_ok());
        Ok(cone)
    }

    /// Cone cohomology dimensions from `coker ⊕ ker` of the induced map, aligned
    /// with [`cone_degrees`](Self::cone_degrees):
    /// `dim_k = (b^T_k − r_{k−shift}) + (b^S_{k−shift+1} − r_{k−shift+1})`.
    pub fn cone_cohomology_by_decomposition(&self) -> Result<Vec<usize>, ComplexError> {
        let ranks = self.induced_map_ranks()?;
        let r = |k: i32| -> usize {
            k.checked_sub(self.source.min_degree)
                .and_then(|i| usize::try_from(i).ok())
                .and_then(|i| ranks.get(i).copied())
                .unwrap_or(0)
        };
        let bt = self.target.cohomology()?;
        let bs = self.source.cohomology()?;
        let s = self.shift;
        Ok(self
            .cone_degrees()
            .map(|k| (bt.betti(k) - r(k - s)) + (bs.betti(k - s + 1) - r(k - s + 1)))
            .collect())
    }
}

fn sign(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
