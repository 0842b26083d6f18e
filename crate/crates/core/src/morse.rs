//! Morse data and the cone Morse complex.
//!
//! A [`MorseDatum`] lists critical points with their indices, the Morse
//! differential `∂` as sparse flow-line counts, and the cone map `c` (standing
//! for `c(ω^{p+1})`) as sparse coefficients raising the index by `2p + 2`.
//! Within each index the generators are ordered lexicographically by id
//! before any matrix is assembled.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::complexes::{CochainComplex, ComplexError, DegreeChainMap};
use crate::ratlinalg::{Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CriticalPoint {
    pub id: String,
    pub index: usize,
}

/// One sparse coefficient: `coeff` times generator `to` in the image of `from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub from: String,
    pub to: String,
    pub coeff: Rational,
}

impl Entry {
    pub fn new(from: impl Into<String>, to: impl Into<String>, coeff: Rational) -> Self {
        Self { from: from.into(), to: to.into(), coeff }
    }
}

/// Which sparse map an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Boundary,
    ConeMap,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::Boundary => "boundary",
            MapKind::ConeMap => "cone_map",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatumError {
    #[error("manifold dimension must be even, got {0}")]
    OddDimension(usize),
    #[error("duplicate generator id {0:?}")]
    DuplicateId(String),
    #[error("generator {id:?} has index {index} outside 0..={max}")]
    IndexOutOfRange { id: String, index: usize, max: usize },
    #[error("{map} entry refers to unknown generator {id:?}")]
    UnknownId { map: MapKind, id: String },
    #[error("{map} entry {from:?} -> {to:?} goes from index {from_index} to {to_index}, expected a step of {step}")]
    Degree { map: MapKind, from: String, to: String, from_index: usize, to_index: usize, step: usize },
    #[error("{map} entry {from:?} -> {to:?} is listed twice")]
    DuplicateEntry { map: MapKind, from: String, to: String },
    #[error("∂∘∂ ≠ 0 on generator {witness:?} (index {degree})")]
    NotDifferential { degree: usize, witness: String },
    #[error("∂c ≠ c∂ on generator {witness:?} (index {degree})")]
    NotCommuting { degree: usize, witness: String },
    #[error("cannot stabilize at index {index}: need 0 <= index < {manifold_dim}")]
    StabilizeDegree { index: usize, manifold_dim: usize },
    #[error("product factors have different Lefschetz powers p = {0} and p = {1}")]
    PowerMismatch(usize, usize),
    #[error("datum is not perfect: m = {m:?}, b = {b:?}")]
    NotPerfect { m: Vec<usize>, b: Vec<usize> },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Critical points, Morse differential and cone map of a Morse function on a
/// closed symplectic manifold of dimension `manifold_dim = 2n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MorseDatum {
    pub name: String,
    pub manifold_dim: usize,
    /// Lefschetz power: the cone map stands for `c(ω^{p+1})`.
    pub p: usize,
    pub points: Vec<CriticalPoint>,
    pub boundary: Vec<Entry>,
    pub cone_map: Vec<Entry>,
    pub metadata: BTreeMap<String, String>,
}

impl MorseDatum {
    pub fn new(name: impl Into<String>, manifold_dim: usize, p: usize) -> Self {
        Self { name: name.into(), manifold_dim, p, ..Self::default() }
    }

    pub fn add_point(&mut self, id: impl Into<String>, index: usize) -> &mut Self {
        self.points.push(CriticalPoint { id: id.into(), index });
        self
    }

    pub fn add_boundary(&mut self, from: impl Into<String>, to: impl Into<String>, coeff: Rational) -> &mut Self {
        self.boundary.push(Entry::new(from, to, coeff));
        self
    }

    pub fn add_cone(&mut self, from: impl Into<String>, to: impl Into<String>, coeff: Rational) -> &mut Self {
        self.cone_map.push(Entry::new(from, to, coeff));
        self
    }

    /// Index step of the cone map, `2p + 2`.
    pub fn cone_shift(&self) -> usize {
        2 * self.p + 2
    }

    /// Generator ids per index `0..=manifold_dim`, each list sorted.
    pub fn generators_by_index(&self) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new(); self.manifold_dim + 1];
        for pt in &self.points {
            if let Some(slot) = out.get_mut(pt.index) {
                slot.push(pt.id.clone());
            }
        }
        for ids in &mut out {
            ids.sort();
        }
        out
    }

    /// `m_k`, the number of critical points of each index `0..=manifold_dim`.
    pub fn critical_counts(&self) -> Vec<usize> {
        self.generators_by_index().iter().map(Vec::len).collect()
    }

    /// Sorted points, entries sorted by `(from, to)` with zero coefficients dropped.
    pub fn canonicalize(&self) -> Self {
        let mut out = self.clone();
        out.points.sort_by(|a, b| (a.index, &a.id).cmp(&(b.index, &b.id)));
        for entries in [&mut out.boundary, &mut out.cone_map] {
            entries.retain(|e| !e.coeff.is_zero());
            entries.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
        }
        out
    }
}

struct Layout {
    /// id -> (index, position within that index)
    slots: BTreeMap<String, (usize, usize)>,
    by_index: Vec<Vec<String>>,
}

impl Layout {
    fn build(d: &MorseDatum) -> Result<Self, DatumError> {
        if !d.manifold_dim.is_multiple_of(2) {
            return Err(DatumError::OddDimension(d.manifold_dim));
        }
        let mut seen = BTreeSet::new();
        for pt in &d.points {
            if !seen.insert(pt.id.as_str()) {
                return Err(DatumError::DuplicateId(pt.id.clone()));
            }
            if pt.index > d.manifold_dim {
                return Err(DatumError::IndexOutOfRange {
                    id: pt.id.clone(),
                    index: pt.index,
                    max: d.manifold_dim,
                });
            }
        }
        let by_index = d.generators_by_index();
        let mut slots = BTreeMap::new();
        for (k, ids) in by_index.iter().enumerate() {
            for (i, id) in ids.iter().enumerate() {
                slots.insert(id.clone(), (k, i));
            }
        }
        Ok(Self { slots, by_index })
    }

    fn dims(&self) -> Vec<usize> {
        self.by_index.iter().map(Vec::len).collect()
    }

    fn lookup(&self, map: MapKind, id: &str) -> Result<(usize, usize), DatumError> {
        self.slots
            .get(id)
            .copied()
            .ok_or_else(|| DatumError::UnknownId { map, id: id.to_string() })
    }

    /// One matrix per source index `k`, of shape `m_{k+step} × m_k`.
    fn assemble(&self, map: MapKind, entries: &[Entry], step: usize) -> Result<Vec<RationalMatrix>, DatumError> {
        let dims = self.dims();
        let dim = |k: usize| dims.get(k).copied().unwrap_or(0);
        let mut mats: Vec<RationalMatrix> =
            (0..dims.len()).map(|k| RationalMatrix::zeros(dim(k + step), dim(k))).collect();
        let mut seen = BTreeSet::new();
        for e in entries {
            let (ki, i) = self.lookup(map, &e.from)?;
            let (kj, j) = self.lookup(map, &e.to)?;
            if kj != ki + step {
                return Err(DatumError::Degree {
                    map,
                    from: e.from.clone(),
                    to: e.to.clone(),
                    from_index: ki,
                    to_index: kj,
                    step,
                });
            }
            if !seen.insert((e.from.as_str(), e.to.as_str())) {
                return Err(DatumError::DuplicateEntry { map, from: e.from.clone(), to: e.to.clone() });
            }
            mats[ki][(j, i)] = e.coeff.clone();
        }
        Ok(mats)
    }
}

/// Builds the matrices without checking `∂² = 0` or `∂c = c∂`.
fn assemble(d: &MorseDatum) -> Result<(Layout, DegreeChainMap), DatumError> {
    let layout = Layout::build(d)?;
    let dims = layout.dims();
    let mut diffs = layout.assemble(MapKind::Boundary, &d.boundary, 1)?;
    diffs.pop();
    let maps = layout.assemble(MapKind::ConeMap, &d.cone_map, d.cone_shift())?;
    let complex = CochainComplex::new(0, dims, diffs)?;
    let phi = DegreeChainMap::endomorphism(complex, d.cone_shift() as i32, maps)?;
    Ok((layout, phi))
}

/// Checks ids, index constraints, `∂∘∂ = 0` and `∂c = c∂`, naming a witness
/// generator for the first failing index.
pub fn validate_datum(d: &MorseDatum) -> Result<(), DatumError> {
    let (layout, phi) = assemble(d)?;
    let witness = |k: i32, col: usize| layout.by_index[k as usize][col].clone();
    match phi.source().validate() {
        Err(ComplexError::NotDifferential { degree, col, .. }) => {
            return Err(DatumError::NotDifferential { degree: degree as usize, witness: witness(degree, col) });
        }
        Err(e) => return Err(e.into()),
        Ok(()) => {}
    }
    match phi.check_chain_map() {
        Err(ComplexError::NotChainMap { degree, col, .. }) => {
            Err(DatumError::NotCommuting { degree: degree as usize, witness: witness(degree, col) })
        }
        Err(e) => Err(e.into()),
        Ok(()) => Ok(()),
    }
}

/// The Morse complex in degrees `0..=manifold_dim` with the cone map as a
/// self chain map of shift `2p + 2`.
pub fn morse_complex(d: &MorseDatum) -> Result<DegreeChainMap, DatumError> {
    validate_datum(d)?;
    Ok(assemble(d)?.1)
}

/// The cone Morse complex: degree `k` is `C^k ⊕ C^{k−2p−1}` with differential
/// `[[∂, c], [0, −∂]]`.
pub fn cone_morse_complex(d: &MorseDatum) -> Result<CochainComplex, DatumError> {
    Ok(morse_complex(d)?.mapping_cone()?)
}

/// Betti numbers `b_k`, the cohomology dimensions of the Morse complex.
pub fn betti(d: &MorseDatum) -> Result<Vec<usize>, DatumError> {
    Ok(morse_complex(d)?.source().cohomology()?.dims())
}

/// Adds an acyclic pair `{label}_a` (index `k`) and `{label}_b` (index `k+1`)
/// with `∂a = b` and no cone-map coefficients.
pub fn stabilize(d: &MorseDatum, k: usize, label: &str) -> Result<MorseDatum, DatumError> {
    if k >= d.manifold_dim {
        return Err(DatumError::StabilizeDegree { index: k, manifold_dim: d.manifold_dim });
    }
    let a = format!("{label}_a");
    let b = format!("{label}_b");
    let mut out = d.clone();
    out.add_point(a.clone(), k).add_point(b.clone(), k + 1).add_boundary(a, b, Rational::one());
    out.metadata
        .entry("stabilized".to_string())
        .and_modify(|s| *s = format!("{s},{label}@{k}"))
        .or_insert_with(|| format!("{label}@{k}"));
    Layout::build(&out)?;
    Ok(out.canonicalize())
}

/// Product datum on `M₁ × M₂` with generators `"{a}*{b}"`,
/// `∂ = ∂₁⊗1 + (−1)^{|a|} 1⊗∂₂` and `c = c₁⊗1 + 1⊗c₂`.
pub fn product(d1: &MorseDatum, d2: &MorseDatum) -> Result<MorseDatum, DatumError> {
    if d1.p != d2.p {
        return Err(DatumError::PowerMismatch(d1.p, d2.p));
    }
    validate_datum(d1)?;
    validate_datum(d2)?;
    let pair = |a: &str, b: &str| format!("{a}*{b}");
    let mut out = MorseDatum::new(format!("{} x {}", d1.name, d2.name), d1.manifold_dim + d2.manifold_dim, d1.p);
    for a in &d1.points {
        for b in &d2.points {
            out.add_point(pair(&a.id, &b.id), a.index + b.index);
        }
    }
    let push = |entries: &mut Vec<Entry>, left: &[Entry], right: &[Entry], signed: bool| {
        for e in left {
            for b in &d2.points {
                entries.push(Entry::new(pair(&e.from, &b.id), pair(&e.to, &b.id), e.coeff.clone()));
            }
        }
        for a in &d1.points {
            for e in right {
                let coeff = if signed && a.index % 2 == 1 { -e.coeff.clone() } else { e.coeff.clone() };
                entries.push(Entry::new(pair(&a.id, &e.from), pair(&a.id, &e.to), coeff));
            }
        }
    };
    push(&mut out.boundary, &d1.boundary, &d2.boundary, true);
    push(&mut out.cone_map, &d1.cone_map, &d2.cone_map, false);
    out.metadata.insert("factors".to_string(), format!("{};{}", d1.name, d2.name));
    let out = out.canonicalize();
    validate_datum(&out)?;
    Ok(out)
}
