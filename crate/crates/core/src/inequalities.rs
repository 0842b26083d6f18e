//! Rank bookkeeping for a Morse datum and the cone Morse inequalities.
//!
//! Notation: `m_k` counts critical points, `b_k` are Betti numbers, `v_k` is
//! the rank of the cone map on chains of degree `k`, `r_k` the rank of the
//! induced map on cohomology, and `b^ω_k` the cone cohomology dimensions. All
//! sequences are indexed from degree 0; the cone lives in degrees
//! `0..=2n+2p+1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::morse::{cone_morse_complex, morse_complex, DatumError, MorseDatum};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InequalityError {
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error("b^ω_{degree}: rank formula gives {formula}, cone cohomology gives {direct}")]
    Consistency { degree: usize, formula: usize, direct: usize },
    #[error("the defect polynomial is not divisible by (1+s): remainder {0}")]
    Remainder(i64),
    #[error("the Q(s) identity is only available for p = 0, got p = {0}")]
    UnsupportedPower(usize),
}

fn at(seq: &[usize], k: i64) -> i64 {
    usize::try_from(k).ok().and_then(|k| seq.get(k)).map_or(0, |&x| x as i64)
}

/// Slack in the comparison with the Morse–Bott inequalities of the circle bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseBottBounds {
    /// `m_k + m_{k−1} − b^ω_k`.
    pub weak: Vec<i64>,
    /// `m_k − Σ_{i≤k} (−1)^{k−i} b^ω_i`.
    pub strong: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport {
    pub name: alloc::string::String,
    pub manifold_dim: usize,
    pub p: usize,
    pub m: Vec<usize>,
    pub b: Vec<usize>,
    pub v: Vec<usize>,
    pub r: Vec<usize>,
    /// Cone cohomology dimensions, degrees `0..=2n+2p+1`.
    pub b_omega: Vec<usize>,
    /// Coefficients of `Q(s)` with trailing zeros removed; `None` for `p > 0`.
    pub q: Option<Vec<i64>>,
    pub weak_slack: Vec<i64>,
    pub strong_slack: Vec<i64>,
    /// Only for `p = 0`.
    pub morse_bott: Option<MorseBottBounds>,
    pub perfect: bool,
    pub machon_violations: Vec<usize>,
}

impl InequalityReport {
    /// True if any slack or `Q` coefficient is negative.
    pub fn has_negative(&self) -> bool {
        self.weak_slack.iter().chain(&self.strong_slack).any(|&x| x < 0)
            || self.q.as_ref().is_some_and(|q| q.iter().any(|&x| x < 0))
    }

    /// Cone degrees covered by the per-degree tables.
    pub fn cone_len(&self) -> usize {
        self.b_omega.len()
    }
}

/// `b^ω_k = b_k − r_{k−2p−2} + b_{k−2p−1} − r_{k−2p−1}` over degrees `0..len`.
pub fn b_omega_from_ranks(b: &[usize], r: &[usize], p: usize, len: usize) -> Vec<usize> {
    let s = 2 * p as i64 + 2;
    (0..len as i64)
        .map(|k| (at(b, k) - at(r, k - s) + at(b, k - s + 1) - at(r, k - s + 1)) as usize)
        .collect()
}

/// `m_k − v_{k−2p−2} + m_{k−2p−1} − v_{k−2p−1} − b^ω_k`.
pub fn weak_slack(m: &[usize], v: &[usize], b_omega: &[usize], p: usize) -> Vec<i64> {
    let s = 2 * p as i64 + 2;
    (0..b_omega.len() as i64)
        .map(|k| at(m, k) - at(v, k - s) + at(m, k - s + 1) - at(v, k - s + 1) - at(b_omega, k))
        .collect()
}

/// `Σ_{i=k−2p}^{k} (−1)^{k−i} m_i − v_{k−2p−1} − Σ_{i≤k} (−1)^{k−i} b^ω_i`.
pub fn strong_slack(m: &[usize], v: &[usize], b_omega: &[usize], p: usize) -> Vec<i64> {
    let two_p = 2 * p as i64;
    let mut out = Vec::with_capacity(b_omega.len());
    let mut alt_b = 0i64;
    for k in 0..b_omega.len() as i64 {
        alt_b = at(b_omega, k) - alt_b;
        let alt_m: i64 = (k - two_p..=k).map(|i| if (k - i) % 2 == 0 { at(m, i) } else { -at(m, i) }).sum();
        out.push(alt_m - at(v, k - two_p - 1) - alt_b);
    }
    out
}

/// Solves `(1+s)Σm_k s^k − (s+s²)Σv_k s^k = Σb^ω_k s^k + (1+s)Q(s)` for `Q`.
pub fn q_polynomial(m: &[usize], v: &[usize], b_omega: &[usize], p: usize) -> Result<Vec<i64>, InequalityError> {
    if p != 0 {
        return Err(InequalityError::UnsupportedPower(p));
    }
    let len = m.len().max(v.len() + 2).max(b_omega.len()) + 1;
    let defect: Vec<i64> = (0..len as i64)
        .map(|k| at(m, k) + at(m, k - 1) - at(v, k - 1) - at(v, k - 2) - at(b_omega, k))
        .collect();
    let mut q = Vec::with_capacity(len);
    let mut carry = 0i64;
    for d in defect {
        carry = d - carry;
        q.push(carry);
    }
    let remainder = q.pop().unwrap_or(0);
    if remainder != 0 {
        return Err(InequalityError::Remainder(remainder));
    }
    while q.last() == Some(&0) {
        q.pop();
    }
    Ok(q)
}

pub fn morse_bott_bounds(m: &[usize], b_omega: &[usize]) -> MorseBottBounds {
    let mut weak = Vec::with_capacity(b_omega.len());
    let mut strong = Vec::with_capacity(b_omega.len());
    let mut alt_b = 0i64;
    for k in 0..b_omega.len() as i64 {
        alt_b = at(b_omega, k) - alt_b;
        weak.push(at(m, k) + at(m, k - 1) - at(b_omega, k));
        strong.push(at(m, k) - alt_b);
    }
    MorseBottBounds { weak, strong }
}

/// Degrees where `b^ω_{n+p+1} ≤ m_{n−p}` fails.
fn machon_violations(manifold_dim: usize, p: usize, m: &[usize], b_omega: &[usize]) -> Vec<usize> {
    let n = (manifold_dim / 2) as i64;
    let k = n + p as i64 + 1;
    if at(b_omega, k) > at(m, n - p as i64) {
        vec![k as usize]
    } else {
        Vec::new()
    }
}

/// Full report for a valid datum. The cone cohomology is computed both from
/// the rank formula and directly from the cone complex, and the two must agree.
pub fn cone_report(d: &MorseDatum) -> Result<InequalityReport, InequalityError> {
    let phi = morse_complex(d)?;
    let m = d.critical_counts();
    let b = phi.source().cohomology().map_err(DatumError::from)?.dims();
    let v = phi.chain_ranks();
    let r = phi.induced_map_ranks().map_err(DatumError::from)?;
    let cone = cone_morse_complex(d)?;
    debug_assert_eq!(cone.min_degree(), 0);
    let direct = cone.cohomology().map_err(DatumError::from)?.dims();
    let b_omega = b_omega_from_ranks(&b, &r, d.p, direct.len());
    if let Some(k) = (0..direct.len()).find(|&k| direct[k] != b_omega[k]) {
        return Err(InequalityError::Consistency { degree: k, formula: b_omega[k], direct: direct[k] });
    }

    let q = if d.p == 0 {
        let q = q_polynomial(&m, &v, &b_omega, 0)?;
        let sum = |s: &[usize]| s.iter().sum::<usize>() as i64;
        assert_eq!(
            2 * sum(&m) - 2 * sum(&v),
            sum(&b_omega) + 2 * q.iter().sum::<i64>(),
            "Q(s) identity at s = 1"
        );
        Some(q)
    } else {
        None
    };
    let weak = weak_slack(&m, &v, &b_omega, d.p);
    let strong = strong_slack(&m, &v, &b_omega, d.p);
    let morse_bott = (d.p == 0).then(|| morse_bott_bounds(&m, &b_omega));
    let perfect = m == b;
    let machon_violations = machon_violations(d.manifold_dim, d.p, &m, &b_omega);
    Ok(InequalityReport {
        name: d.name.clone(),
        manifold_dim: d.manifold_dim,
        p: d.p,
        m,
        b,
        v,
        r,
        b_omega,
        q,
        weak_slack: weak,
        strong_slack: strong,
        morse_bott,
        perfect,
        machon_violations,
    })
}

/// Degrees violating `b^ω_{n+p+1} ≤ m_{n−p}`.
pub fn machon_check(d: &MorseDatum) -> Result<Vec<usize>, InequalityError> {
    Ok(cone_report(d)?.machon_violations)
}
