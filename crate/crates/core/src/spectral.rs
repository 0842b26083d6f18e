//! Witten-deformed cone Laplacian on the flat two-torus.
//!
//! The Morse function is `f = a(2 − ½cos 2πx − ½cos 2πy)` with `ω = dx∧dy`.
//! A cone form of degree `k` is a pair `(η, ξ)` with `η ∈ Ω^k`, `ξ ∈ Ω^{k−1}`,
//! and
//!
//! ```text
//! d_C  = [[d_t, ω∧], [0, −d_t]]        d_t  = d + t df∧
//! d_C* = [[d_t*, 0], [Λ, −d_t*]]       d_t* = d* + t ι_∇f
//! ```
//!
//! Coefficient functions are expanded in the real orthonormal basis
//! `{1, √2 cos 2πmx, √2 sin 2πmx}` in each variable with `m ≤ N`. Since
//! multiplication by `df` raises the band by exactly one, `A σ = (d_C σ, d_C* σ)`
//! is computed exactly in band `N+1` and the Galerkin matrix of
//! `‖d_C σ‖² + ‖d_C* σ‖²` is `AᵀA`.
//!
//! The reflections `x ↦ −x` and `y ↦ −y` (acting by pullback on `η` and minus
//! pullback on `ξ`) commute with `d_C`, so the matrix splits into four parity
//! blocks which are solved independently.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use libm::{ceil, cos, exp, fabs, sin, sqrt};

use crate::symeig::{jacobi_eigen, low_eigenpairs, SolverError};

/// Eigenvalues `≤ THRESHOLD` form the low cluster.
pub const THRESHOLD: f64 = 1.0;
/// Minimum `gap / max(low cluster)` for counts to be trusted.
pub const ADEQUACY_RATIO: f64 = 10.0;
/// Lower bound on the denominator of the cluster ratio.
pub const CLUSTER_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(
        "cluster not resolved at t = {t}, N = {cutoff}, degree {degree}: ratio {ratio:.3e} < {min}; try N >= {suggested}",
        min = ADEQUACY_RATIO
    )]
    Adequacy { t: f64, cutoff: usize, degree: usize, ratio: f64, suggested: usize },
    #[error("kind {kind} quasimode at an index-{index} point lives in degree {expected}, not {found}")]
    DegreeMismatch { kind: u8, index: usize, expected: usize, found: usize },
    #[error("need at least 3 t-values for a gap fit, got {0}")]
    TooFewPoints(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralProblem {
    pub t: f64,
    /// Fourier cutoff `N`: modes `m ≤ N` in each variable.
    pub cutoff: usize,
    /// Cone degree `0..=3`.
    pub degree: usize,
    /// `a` in `f = a(2 − ½cos 2πx − ½cos 2πy)`.
    pub morse_scale: f64,
    /// Use `−f` in place of `f`.
    pub reversed: bool,
}

impl SpectralProblem {
    pub fn new(t: f64, cutoff: usize, degree: usize) -> Self {
        Self { t, cutoff, degree, morse_scale: 1.0, reversed: false }
    }

    pub fn with_degree(&self, degree: usize) -> Self {
        Self { degree, ..*self }
    }

    pub fn reversed(&self) -> Self {
        Self { reversed: !self.reversed, ..*self }
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(SpectralError::InvalidProblem(format!("t must be positive, got {}", self.t)));
        }
        if self.cutoff < 2 {
            return Err(SpectralError::InvalidProblem(format!("cutoff must be at least 2, got {}", self.cutoff)));
        }
        if self.degree > 3 {
            return Err(SpectralError::InvalidProblem(format!("cone degree must be 0..=3, got {}", self.degree)));
        }
        if !(self.morse_scale > 0.0 && self.morse_scale.is_finite()) {
            return Err(SpectralError::InvalidProblem(format!(
                "morse scale must be positive, got {}",
                self.morse_scale
            )));
        }
        Ok(())
    }

    /// Coefficient of `sin 2π·` in `t ∂f`: `±t a π`.
    fn drift(&self) -> f64 {
        let s = if self.reversed { -1.0 } else { 1.0 };
        s * self.t * self.morse_scale * PI
    }

    /// Number of basis functions per component, `(2N+1)²`.
    pub fn component_size(&self) -> usize {
        (2 * self.cutoff + 1) * (2 * self.cutoff + 1)
    }

    pub fn size(&self) -> usize {
        components(self.degree).len() * self.component_size()
    }
}

/// Cutoff rule `N(t) = ⌈2√t⌉ + 6`.
pub fn default_cutoff(t: f64) -> usize {
    ceil(2.0 * sqrt(t)) as usize + 6
}

// ---------------------------------------------------------------------------
// One-variable basis

/// Index `0` is `1`, `2m−1` is `√2 cos 2πmx`, `2m` is `√2 sin 2πmx`.
pub fn basis_1d(i: usize, x: f64) -> f64 {
    if i == 0 {
        1.0
    } else {
        let m = i.div_ceil(2) as f64;
        if i % 2 == 1 {
            SQRT_2 * cos(2.0 * PI * m * x)
        } else {
            SQRT_2 * sin(2.0 * PI * m * x)
        }
    }
}

/// Whether basis function `i` is odd under `x ↦ −x`.
fn is_odd(i: usize) -> bool {
    i != 0 && i.is_multiple_of(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op1 {
    Id,
    /// `d/dx`
    D,
    /// Multiplication by `sin 2πx`.
    S,
}

/// Image of basis function `i` under a one-variable operator, as at most two
/// `(index, coefficient)` pairs.
pub fn apply_1d(op: Op1, i: usize) -> ([(usize, f64); 2], usize) {
    let none = [(0, 0.0); 2];
    match op {
        Op1::Id => ([(i, 1.0), (0, 0.0)], 1),
        Op1::D => {
            if i == 0 {
                return (none, 0);
            }
            let m = i.div_ceil(2);
            let w = 2.0 * PI * m as f64;
            if i % 2 == 1 {
                ([(2 * m, -w), (0, 0.0)], 1)
            } else {
                ([(2 * m - 1, w), (0, 0.0)], 1)
            }
        }
        Op1::S => {
            if i == 0 {
                return ([(2, FRAC_1_SQRT_2), (0, 0.0)], 1);
            }
            let m = i.div_ceil(2);
            if i % 2 == 1 {
                // √2 cos mθ sin θ = ½ sin_{m+1} − ½ sin_{m−1}
                if m >= 2 {
                    ([(2 * (m + 1), 0.5), (2 * (m - 1), -0.5)], 2)
                } else {
                    ([(2 * (m + 1), 0.5), (0, 0.0)], 1)
                }
            } else if m == 1 {
                ([(0, FRAC_1_SQRT_2), (3, -0.5)], 2)
            } else {
                // √2 sin mθ sin θ = ½ cos_{m−1} − ½ cos_{m+1}
                ([(2 * m - 3, 0.5), (2 * m + 1, -0.5)], 2)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Components and operators

/// One coefficient function of a cone form. `form` has bit 1 for `dx` and bit
/// 2 for `dy`; `theta` marks the `ξ` part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    pub theta: bool,
    pub form: u8,
}

impl Component {
    pub fn label(&self) -> &'static str {
        match (self.theta, self.form) {
            (false, 0) => "eta:1",
            (false, 1) => "eta:dx",
            (false, 2) => "eta:dy",
            (false, _) => "eta:dxdy",
            (true, 0) => "xi:1",
            (true, 1) => "xi:dx",
            (true, 2) => "xi:dy",
            (true, _) => "xi:dxdy",
        }
    }
}

fn forms_of_degree(k: usize) -> &'static [u8] {
    match k {
        0 => &[0],
        1 => &[1, 2],
        2 => &[3],
        _ => &[],
    }
}

/// Components of cone degree `k`: the `η` forms of degree `k`, then the `ξ`
/// forms of degree `k − 1`.
pub fn components(k: usize) -> Vec<Component> {
    let mut out: Vec<Component> = forms_of_degree(k).iter().map(|&form| Component { theta: false, form }).collect();
    if k >= 1 {
        out.extend(forms_of_degree(k - 1).iter().map(|&form| Component { theta: true, form }));
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct Term {
    coeff: f64,
    x: Op1,
    y: Op1,
}

type ScalarOp = Vec<Term>;

fn scaled(op: ScalarOp, c: f64) -> ScalarOp {
    op.into_iter().map(|t| Term { coeff: c * t.coeff, ..t }).collect()
}

fn identity() -> ScalarOp {
    vec![Term { coeff: 1.0, x: Op1::Id, y: Op1::Id }]
}

/// `σ_d ∂ + σ_f F` in one variable, `F` being multiplication by `t ∂f`.
fn first_order(along_x: bool, sd: f64, sf: f64, drift: f64) -> ScalarOp {
    let (d, s) = if along_x {
        ((Op1::D, Op1::Id), (Op1::S, Op1::Id))
    } else {
        ((Op1::Id, Op1::D), (Op1::Id, Op1::S))
    };
    vec![Term { coeff: sd, x: d.0, y: d.1 }, Term { coeff: sf * drift, x: s.0, y: s.1 }]
}

fn d_t(from: u8, to: u8, drift: f64) -> Option<ScalarOp> {
    match (from, to) {
        (0, 1) => Some(first_order(true, 1.0, 1.0, drift)),
        (0, 2) => Some(first_order(false, 1.0, 1.0, drift)),
        (1, 3) => Some(first_order(false, -1.0, -1.0, drift)),
        (2, 3) => Some(first_order(true, 1.0, 1.0, drift)),
        _ => None,
    }
}

fn d_t_star(from: u8, to: u8, drift: f64) -> Option<ScalarOp> {
    match (from, to) {
        (1, 0) => Some(first_order(true, -1.0, 1.0, drift)),
        (2, 0) => Some(first_order(false, -1.0, 1.0, drift)),
        (3, 1) => Some(first_order(false, 1.0, -1.0, drift)),
        (3, 2) => Some(first_order(true, -1.0, 1.0, drift)),
        _ => None,
    }
}

/// Block of `A` from input component `c_in` to output component `c_out`;
/// `up` selects `d_C` (degree `k+1`) or `d_C*` (degree `k−1`).
fn block(up: bool, c_out: Component, c_in: Component, drift: f64) -> Option<ScalarOp> {
    let (fo, fi) = (c_out.form, c_in.form);
    match (up, c_out.theta, c_in.theta) {
        (true, false, false) => d_t(fi, fo, drift),
        (true, false, true) => (fi == 0 && fo == 3).then(identity),
        (true, true, true) => d_t(fi, fo, drift).map(|op| scaled(op, -1.0)),
        (false, false, false) => d_t_star(fi, fo, drift),
        (false, true, false) => (fi == 3 && fo == 0).then(identity),
        (false, true, true) => d_t_star(fi, fo, drift).map(|op| scaled(op, -1.0)),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Sparse operator

/// `A` in compressed-row form. Rows index `(output component, i, j)` in band
/// `N+1`, columns `(input component, i, j)` in band `N`.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    pub rows: usize,
    pub cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseOperator {
    fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    /// `‖A c‖²` for a full coefficient vector.
    pub fn norm_sq_of_image(&self, c: &[f64]) -> f64 {
        (0..self.rows)
            .map(|r| {
                let s: f64 = self.row(r).map(|(j, v)| v * c[j]).sum();
                s * s
            })
            .sum()
    }

    /// Dense `AᵀA` restricted to the given columns, row-major.
    pub fn gram(&self, cols: &[usize]) -> Vec<f64> {
        let m = cols.len();
        let pos = self.positions(cols);
        let mut g = vec![0.0; m * m];
        let mut entries: Vec<(usize, f64)> = Vec::new();
        for r in 0..self.rows {
            entries.clear();
            entries.extend(self.row(r).filter_map(|(j, v)| pos[j].map(|p| (p, v))));
            for &(p1, v1) in &entries {
                for &(p2, v2) in &entries {
                    g[p1 * m + p2] += v1 * v2;
                }
            }
        }
        g
    }

    fn positions(&self, cols: &[usize]) -> Vec<Option<usize>> {
        let mut pos = vec![None; self.cols];
        for (p, &c) in cols.iter().enumerate() {
            pos[c] = Some(p);
        }
        pos
    }

    /// `A V` for vectors given on the selected columns; result is `rows × vs.len()` row-major.
    fn apply_restricted(&self, cols: &[usize], vs: &[Vec<f64>]) -> Vec<f64> {
        let pos = self.positions(cols);
        let r = vs.len();
        let mut w = vec![0.0; self.rows * r];
        for row in 0..self.rows {
            for (j, v) in self.row(row) {
                if let Some(p) = pos[j] {
                    for (k, vec) in vs.iter().enumerate() {
                        w[row * r + k] += v * vec[p];
                    }
                }
            }
        }
        w
    }
}

/// Assembles `A = (d_C, d_C*)` for the problem's degree.
pub fn assemble_operator(prob: &SpectralProblem) -> Result<SparseOperator, SpectralError> {
    prob.validate()?;
    let k = prob.degree;
    let n1 = 2 * prob.cutoff + 1;
    let n2 = n1 + 2;
    let drift = prob.drift();
    let inputs = components(k);
    let mut outputs: Vec<(bool, Component)> = Vec::new();
    if k < 3 {
        outputs.extend(components(k + 1).into_iter().map(|c| (true, c)));
    }
    if k > 0 {
        outputs.extend(components(k - 1).into_iter().map(|c| (false, c)));
    }
    let rows = outputs.len() * n2 * n2;
    let cols = inputs.len() * n1 * n1;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    for (oi, &(up, c_out)) in outputs.iter().enumerate() {
        for (ii, &c_in) in inputs.iter().enumerate() {
            let Some(op) = block(up, c_out, c_in, drift) else { continue };
            for i in 0..n1 {
                for j in 0..n1 {
                    let col = ii * n1 * n1 + i * n1 + j;
                    for term in &op {
                        let (xs, nx) = apply_1d(term.x, i);
                        let (ys, ny) = apply_1d(term.y, j);
                        for &(xo, xv) in &xs[..nx] {
                            for &(yo, yv) in &ys[..ny] {
                                let row = oi * n2 * n2 + xo * n2 + yo;
                                triplets.push((row, col, term.coeff * xv * yv));
                            }
                        }
                    }
                }
            }
        }
    }
    triplets.sort_by_key(|a| (a.0, a.1));
    let mut row_ptr = vec![0; rows + 1];
    let mut col_idx = Vec::with_capacity(triplets.len());
    let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
    let mut last: Option<(usize, usize)> = None;
    for (r, c, v) in triplets {
        if last == Some((r, c)) {
            *vals.last_mut().expect("previous entry") += v;
        } else {
            col_idx.push(c);
            vals.push(v);
            row_ptr[r + 1] += 1;
            last = Some((r, c));
        }
    }
    for r in 0..rows {
        row_ptr[r + 1] += row_ptr[r];
    }
    Ok(SparseOperator { rows, cols, row_ptr, col_idx, vals })
}

/// Column indices of the four parity blocks `(εx, εy)`.
pub fn parity_blocks(prob: &SpectralProblem) -> [Vec<usize>; 4] {
    let n1 = 2 * prob.cutoff + 1;
    let mut out: [Vec<usize>; 4] = Default::default();
    for (ci, c) in components(prob.degree).iter().enumerate() {
        let flip = |bit: u8| (c.form & bit != 0) ^ c.theta;
        for i in 0..n1 {
            for j in 0..n1 {
                let ox = is_odd(i) ^ flip(1);
                let oy = is_odd(j) ^ flip(2);
                out[(ox as usize) * 2 + oy as usize].push(ci * n1 * n1 + i * n1 + j);
            }
        }
    }
    out
}

/// The full Galerkin matrix `AᵀA`, row-major.
pub fn assemble_quadratic_form(prob: &SpectralProblem) -> Result<Vec<f64>, SpectralError> {
    let a = assemble_operator(prob)?;
    let all: Vec<usize> = (0..a.cols).collect();
    Ok(a.gram(&all))
}

/// Eigenvalues of one parity block; those `≤ THRESHOLD` are refined by
/// Rayleigh–Ritz on `‖A V y‖²`, which keeps tiny eigenvalues relatively accurate.
fn block_spectrum(a: &SparseOperator, cols: &[usize]) -> Result<Vec<f64>, SpectralError> {
    let m = cols.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let eig = low_eigenpairs(a.gram(cols), m, THRESHOLD)?;
    let r = eig.low_vectors.len();
    let mut values = eig.values;
    if r > 0 {
        let w = a.apply_restricted(cols, &eig.low_vectors);
        let mut b = vec![0.0; r * r];
        for row in 0..a.rows {
            let wr = &w[row * r..row * r + r];
            for p in 0..r {
                for q in 0..r {
                    b[p * r + q] += wr[p] * wr[q];
                }
            }
        }
        let (refined, _) = jacobi_eigen(b, r)?;
        values[..r].copy_from_slice(&refined);
        values.sort_by(f64::total_cmp);
    }
    Ok(values)
}

/// All eigenvalues of the problem, ascending, low cluster refined.
pub fn spectrum(prob: &SpectralProblem) -> Result<Vec<f64>, SpectralError> {
    let a = assemble_operator(prob)?;
    let mut values = Vec::with_capacity(a.cols);
    for cols in parity_blocks(prob) {
        values.extend(block_spectrum(&a, &cols)?);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// The smallest `count` eigenvalues.
pub fn low_spectrum(prob: &SpectralProblem, count: usize) -> Result<Vec<f64>, SpectralError> {
    prob.validate()?;
    if count > prob.size() {
        return Err(SpectralError::InvalidProblem(format!(
            "requested {count} eigenvalues of a {}-dimensional problem",
            prob.size()
        )));
    }
    let mut values = spectrum(prob)?;
    values.truncate(count);
    Ok(values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub problem: SpectralProblem,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub low_count: usize,
    /// First eigenvalue above the threshold, `∞` if there is none.
    pub gap: f64,
    /// `gap / max(largest low eigenvalue, CLUSTER_FLOOR)`, zero for an empty cluster.
    pub cluster_ratio: f64,
}

impl SpectralReport {
    pub fn low_cluster(&self) -> &[f64] {
        &self.eigenvalues[..self.low_count]
    }

    pub fn is_adequate(&self) -> bool {
        self.cluster_ratio >= ADEQUACY_RATIO
    }

    /// `Ok(low_count)` if the cluster is resolved, otherwise an adequacy error.
    pub fn checked_count(&self) -> Result<usize, SpectralError> {
        if self.is_adequate() {
            Ok(self.low_count)
        } else {
            Err(SpectralError::Adequacy {
                t: self.problem.t,
                cutoff: self.problem.cutoff,
                degree: self.problem.degree,
                ratio: self.cluster_ratio,
                suggested: default_cutoff(self.problem.t).max(self.problem.cutoff + 4),
            })
        }
    }
}

pub fn report(prob: &SpectralProblem) -> Result<SpectralReport, SpectralError> {
    let eigenvalues = spectrum(prob)?;
    let low_count = eigenvalues.iter().take_while(|&&x| x <= THRESHOLD).count();
    let gap = eigenvalues.get(low_count).copied().unwrap_or(f64::INFINITY);
    let cluster_ratio = if low_count == 0 {
        0.0
    } else {
        gap / eigenvalues[low_count - 1].max(CLUSTER_FLOOR)
    };
    Ok(SpectralReport { problem: *prob, eigenvalues, low_count, gap, cluster_ratio })
}

/// Low-cluster counts in cone degrees `0..=3`, each gated on adequacy.
pub fn cluster_counts(t: f64, cutoff: usize, morse_scale: f64) -> Result<[usize; 4], SpectralError> {
    let mut out = [0; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let prob = SpectralProblem { morse_scale, ..SpectralProblem::new(t, cutoff, k) };
        *slot = report(&prob)?.checked_count()?;
    }
    Ok(out)
}

/// Least-squares line through `(t, gap)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct GapFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// All `t` equal, so the slope is meaningless and set to zero.
    pub degenerate: bool,
}

impl GapFit {
    pub fn gap_at(&self, t: f64) -> Option<f64> {
        self.points.iter().find(|p| p.0 == t).map(|p| p.1)
    }
}

pub fn fit_gap(points: Vec<(f64, f64)>) -> Result<GapFit, SpectralError> {
    if points.len() < 3 {
        return Err(SpectralError::TooFewPoints(points.len()));
    }
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mg = points.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = points.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    let stg: f64 = points.iter().map(|p| (p.0 - mt) * (p.1 - mg)).sum();
    let degenerate = stt <= f64::EPSILON * mt * mt * n;
    let slope = if degenerate { 0.0 } else { stg / stt };
    Ok(GapFit { slope, intercept: mg - slope * mt, degenerate, points })
}

/// Smallest gap over the four degrees at `t`, requiring every degree to be adequate.
pub fn min_gap(t: f64, cutoff: usize, morse_scale: f64) -> Result<f64, SpectralError> {
    let mut gap = f64::INFINITY;
    for k in 0..4 {
        let prob = SpectralProblem { morse_scale, ..SpectralProblem::new(t, cutoff, k) };
        let rep = report(&prob)?;
        rep.checked_count()?;
        gap = gap.min(rep.gap);
    }
    Ok(gap)
}

/// Gap growth over `t_values` with cutoff `N(t)` given by `cutoff`.
pub fn gap_growth(
    t_values: &[f64],
    cutoff: impl Fn(f64) -> usize,
    morse_scale: f64,
) -> Result<GapFit, SpectralError> {
    if t_values.len() < 3 {
        return Err(SpectralError::TooFewPoints(t_values.len()));
    }
    let points = t_values
        .iter()
        .map(|&t| Ok((t, min_gap(t, cutoff(t), morse_scale)?)))
        .collect::<Result<Vec<_>, SpectralError>>()?;
    fit_gap(points)
}

// ---------------------------------------------------------------------------
// Quasimodes

/// Critical points of `f` on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusCritical {
    /// `(0, 0)`, index 0.
    Min,
    /// `(½, 0)`, index 1, unstable along `x`.
    SaddleX,
    /// `(0, ½)`, index 1, unstable along `y`.
    SaddleY,
    /// `(½, ½)`, index 2.
    Max,
}

impl TorusCritical {
    pub const ALL: [TorusCritical; 4] =
        [TorusCritical::Min, TorusCritical::SaddleX, TorusCritical::SaddleY, TorusCritical::Max];

    pub fn index(self) -> usize {
        match self {
            TorusCritical::Min => 0,
            TorusCritical::SaddleX | TorusCritical::SaddleY => 1,
            TorusCritical::Max => 2,
        }
    }

    pub fn position(self) -> (f64, f64) {
        match self {
            TorusCritical::Min => (0.0, 0.0),
            TorusCritical::SaddleX => (0.5, 0.0),
            TorusCritical::SaddleY => (0.0, 0.5),
            TorusCritical::Max => (0.5, 0.5),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TorusCritical::Min => "min",
            TorusCritical::SaddleX => "saddle-x",
            TorusCritical::SaddleY => "saddle-y",
            TorusCritical::Max => "max",
        }
    }
}

/// Which harmonic generator a quasimode approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasimodeKind {
    /// `(ζ, ι_Z ζ)` in cone degree equal to the index.
    First,
    /// `(−τ∧ζ, ζ)` in cone degree index + 1.
    Second,
}

impl QuasimodeKind {
    pub fn number(self) -> u8 {
        match self {
            QuasimodeKind::First => 1,
            QuasimodeKind::Second => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quasimode {
    /// Normalised coefficients in the problem's column order.
    pub coefficients: Vec<f64>,
    pub rayleigh: f64,
}

/// Smooth cutoff: 1 for `r ≤ 1/8`, 0 for `r ≥ 1/4`.
pub fn bump(r: f64) -> f64 {
    let psi = |u: f64| if u > 0.0 { exp(-1.0 / u) } else { 0.0 };
    let s = (r - 0.125) / 0.125;
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        psi(1.0 - s) / (psi(s) + psi(1.0 - s))
    }
}

fn wrap(u: f64) -> f64 {
    let w = u - libm::floor(u + 0.5);
    if w >= 0.5 {
        w - 1.0
    } else {
        w
    }
}

/// Component values of a local quasimode at a point; `sign` multiplies the
/// `ι_Z` term of a kind-1 mode at the maximum.
fn quasimode_fields(
    prob: &SpectralProblem,
    point: TorusCritical,
    kind: QuasimodeKind,
    iz_sign: f64,
    x: f64,
    y: f64,
) -> Vec<f64> {
    let (px, py) = point.position();
    let (xx, yy) = (wrap(x - px), wrap(y - py));
    let s2 = |u: f64| {
        let s = sin(PI * u);
        s * s
    };
    let g = exp(-prob.t * prob.morse_scale * (s2(xx) + s2(yy))) * bump(sqrt(xx * xx + yy * yy));
    use QuasimodeKind::*;
    use TorusCritical::*;
    match (kind, point) {
        (First, Min) => vec![g],
        (First, SaddleX) => vec![g, 0.0, 0.0],
        (First, SaddleY) => vec![0.0, g, 0.0],
        (First, Max) => vec![g, -0.5 * iz_sign * g * xx, -0.5 * iz_sign * g * yy],
        (Second, Min) => vec![0.5 * g * yy, -0.5 * g * xx, g],
        (Second, SaddleX) => vec![0.0, g, 0.0],
        (Second, SaddleY) => vec![0.0, 0.0, g],
        (Second, Max) => vec![g],
    }
}

/// Quadrature expansion of component fields on a `4N × 4N` trapezoid grid.
fn expand(prob: &SpectralProblem, field: impl Fn(f64, f64) -> Vec<f64>) -> Vec<f64> {
    let n1 = 2 * prob.cutoff + 1;
    let grid = 4 * prob.cutoff;
    let h = 1.0 / grid as f64;
    let ncomp = components(prob.degree).len();
    let phi: Vec<Vec<f64>> = (0..n1).map(|i| (0..grid).map(|p| basis_1d(i, p as f64 * h)).collect()).collect();
    let mut values = vec![vec![0.0; grid * grid]; ncomp];
    for p in 0..grid {
        for q in 0..grid {
            for (c, v) in field(p as f64 * h, q as f64 * h).into_iter().enumerate() {
                values[c][p * grid + q] = v;
            }
        }
    }
    let mut coeffs = vec![0.0; ncomp * n1 * n1];
    for (c, vals) in values.iter().enumerate() {
        // Transform along y, then along x.
        let mut half = vec![0.0; grid * n1];
        for p in 0..grid {
            for j in 0..n1 {
                half[p * n1 + j] = (0..grid).map(|q| vals[p * grid + q] * phi[j][q]).sum::<f64>() * h;
            }
        }
        for i in 0..n1 {
            for j in 0..n1 {
                coeffs[c * n1 * n1 + i * n1 + j] = (0..grid).map(|p| half[p * n1 + j] * phi[i][p]).sum::<f64>() * h;
            }
        }
    }
    coeffs
}

fn rayleigh_of(prob: &SpectralProblem, coeffs: Vec<f64>) -> Result<Quasimode, SpectralError> {
    let a = assemble_operator(prob)?;
    let norm_sq: f64 = coeffs.iter().map(|c| c * c).sum();
    let nrm = sqrt(norm_sq);
    let coefficients: Vec<f64> = coeffs.iter().map(|c| c / nrm).collect();
    let rayleigh = a.norm_sq_of_image(&coefficients);
    Ok(Quasimode { coefficients, rayleigh })
}

fn quasimode_with_sign(
    prob: &SpectralProblem,
    point: TorusCritical,
    kind: QuasimodeKind,
    iz_sign: f64,
) -> Result<Quasimode, SpectralError> {
    prob.validate()?;
    if prob.reversed {
        return Err(SpectralError::InvalidProblem("quasimodes are built for f, not −f".into()));
    }
    let expected = point.index() + if kind == QuasimodeKind::Second { 1 } else { 0 };
    if prob.degree != expected {
        return Err(SpectralError::DegreeMismatch {
            kind: kind.number(),
            index: point.index(),
            expected,
            found: prob.degree,
        });
    }
    let coeffs = expand(prob, |x, y| quasimode_fields(prob, point, kind, iz_sign, x, y));
    rayleigh_of(prob, coeffs)
}

/// Local quasimode of a harmonic cone form at `point`, with the Gaussian
/// replaced by the Morse profile `exp(−t a (sin²πX + sin²πY))` in chart
/// coordinates and cut off by [`bump`]. At the maximum the kind-1 mode is
/// `(g dX∧dY, −½ g (X dX + Y dY))`; at the minimum the kind-2 mode is
/// `(−½ g (X dY − Y dX), g)`.
pub fn quasimode(prob: &SpectralProblem, point: TorusCritical, kind: QuasimodeKind) -> Result<Quasimode, SpectralError> {
    quasimode_with_sign(prob, point, kind, 1.0)
}

/// The kind-1 mode at the maximum with the `ι_Z` term's sign reversed.
pub fn quasimode_flipped_iz(prob: &SpectralProblem) -> Result<Quasimode, SpectralError> {
    quasimode_with_sign(prob, TorusCritical::Max, QuasimodeKind::First, -1.0)
}

/// Largest `|G_ij − G_ji|`.
pub fn max_asymmetry(g: &[f64], n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max(fabs(g[i * n + j] - g[j * n + i]));
        }
    }
    worst
}
