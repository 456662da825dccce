//! Aggregation over strata, Simpson reversals, and the sure-loss reading of
//! a reversal.
//!
//! Stratum success rates `p` (treatment) and `q` (control) are aggregated
//! with weights on the K-simplex. A reversal happens when `p > q` in every
//! stratum while the aggregated comparison goes the other way.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::credal::Sense;
use crate::error::{Error, Result};
use crate::TOL;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SimplexVector(Vec<f64>);

impl SimplexVector {
    pub fn new(weights: Vec<f64>) -> Result<SimplexVector> {
        if weights.is_empty() {
            return Err(Error::InvalidSimplex("no coordinates".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < -TOL) {
            return Err(Error::InvalidSimplex(format!("negative weight {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > TOL {
            return Err(Error::InvalidSimplex(format!("weights sum to {sum}")));
        }
        Ok(SimplexVector(
            weights.into_iter().map(|w| w.max(0.0)).collect(),
        ))
    }

    /// Indicator of stratum `k` among `dim`.
    pub fn unit(k: usize, dim: usize) -> Result<SimplexVector> {
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: k + 1,
            });
        }
        let mut w = vec![0.0; dim];
        w[k] = 1.0;
        Ok(SimplexVector(w))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpsonInstance {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub u: SimplexVector,
    #[serde(rename = "V")]
    pub v: Vec<SimplexVector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    p: Vec<f64>,
    q: Vec<f64>,
    u: Vec<f64>,
    #[serde(rename = "V")]
    v: Vec<Vec<f64>>,
}

impl SimpsonInstance {
    pub fn new(p: Vec<f64>, q: Vec<f64>, u: SimplexVector, v: Vec<SimplexVector>) -> Result<Self> {
        let k = p.len();
        for got in [q.len(), u.len()]
            .into_iter()
            .chain(v.iter().map(|x| x.len()))
        {
            if got != k {
                return Err(Error::DimensionMismatch { expected: k, got });
            }
        }
        if v.is_empty() {
            return Err(Error::InvalidSimplex("V is empty".into()));
        }
        if let Some(x) = p.iter().chain(&q).find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::OutOfRange {
                value: *x,
                range: "[0, 1]",
            });
        }
        Ok(SimpsonInstance { p, q, u, v })
    }

    pub fn from_json(text: &str) -> Result<SimpsonInstance> {
        let raw: RawInstance =
            serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
        let v = raw
            .v
            .into_iter()
            .map(SimplexVector::new)
            .collect::<Result<Vec<_>>>()?;
        SimpsonInstance::new(raw.p, raw.q, SimplexVector::new(raw.u)?, v)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SimpsonInstance> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))?;
        SimpsonInstance::from_json(&text)
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    /// `p_k − q_k > TOL` in every stratum.
    pub fn dominance(&self) -> bool {
        self.p.iter().zip(&self.q).all(|(p, q)| p - q > TOL)
    }
}

/// `pᵀw`.
pub fn aggregate(p: &[f64], w: &SimplexVector) -> Result<f64> {
    if p.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: w.len(),
        });
    }
    Ok(p.iter().zip(w.weights()).map(|(a, b)| a * b).sum())
}

/// Max-norm distance between the two rules is at most `tol`.
pub fn is_fair(u_obs: &SimplexVector, v_obs: &SimplexVector, tol: f64) -> Result<bool> {
    if u_obs.len() != v_obs.len() {
        return Err(Error::DimensionMismatch {
            expected: u_obs.len(),
            got: v_obs.len(),
        });
    }
    Ok(u_obs
        .weights()
        .iter()
        .zip(v_obs.weights())
        .all(|(a, b)| (a - b).abs() <= tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `pᵀu < inf_V qᵀv`.
    LossLow,
    /// `qᵀu > sup_V pᵀv`.
    LossHigh,
    None,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::LossLow => "loss_low",
            Direction::LossHigh => "loss_high",
            Direction::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Marginals {
    /// `pᵀu`
    pub p_bar: f64,
    /// `qᵀu`
    pub q_bar: f64,
    pub inf_qv: f64,
    pub sup_pv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpsonReport {
    pub dominance_ok: bool,
    pub reversal: bool,
    pub sure_loss: bool,
    pub direction: Direction,
    pub marginals: Marginals,
    /// Per element of `V`: whether the comparison against it alone reverses.
    pub witnesses: Vec<bool>,
    /// Some but not all elements of `V` reverse.
    pub partial: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sup` (or `inf`) of `λᵀw` over the box `q ≤ λ ≤ p`.
fn box_extreme(p: &[f64], q: &[f64], w: &[f64], sense: Sense) -> f64 {
    p.iter()
        .zip(q)
        .zip(w)
        .map(|((&pk, &qk), &wk)| {
            let take_p = (wk >= 0.0) == (sense == Sense::Max);
            if take_p {
                pk * wk
            } else {
                qk * wk
            }
        })
        .sum()
}

fn marginals(inst: &SimpsonInstance) -> Marginals {
    let u = inst.u.weights();
    Marginals {
        p_bar: dot(&inst.p, u),
        q_bar: dot(&inst.q, u),
        inf_qv: inst
            .v
            .iter()
            .map(|v| dot(&inst.q, v.weights()))
            .fold(f64::INFINITY, f64::min),
        sup_pv: inst
            .v
            .iter()
            .map(|v| dot(&inst.p, v.weights()))
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// The Simpson condition on aggregated rates.
fn simpson_condition(m: &Marginals) -> Direction {
    if m.p_bar < m.inf_qv - TOL {
        Direction::LossLow
    } else if m.q_bar > m.sup_pv + TOL {
        Direction::LossHigh
    } else {
        Direction::None
    }
}

/// The sure-loss condition on the box `Λ = {λ : q ≤ λ ≤ p}`: every
/// aggregate under `u` falls below (or above) every aggregate under `V`.
fn sure_loss_condition(inst: &SimpsonInstance) -> bool {
    let (p, q) = (&inst.p, &inst.q);
    let u = inst.u.weights();
    let sup_u = box_extreme(p, q, u, Sense::Max);
    let inf_u = box_extreme(p, q, u, Sense::Min);
    let inf_v = inst
        .v
        .iter()
        .map(|v| box_extreme(p, q, v.weights(), Sense::Min))
        .fold(f64::INFINITY, f64::min);
    let sup_v = inst
        .v
        .iter()
        .map(|v| box_extreme(p, q, v.weights(), Sense::Max))
        .fold(f64::NEG_INFINITY, f64::max);
    sup_u < inf_v - TOL || inf_u > sup_v + TOL
}

/// Reversal detection. Without strict dominance of `p` over `q` the
/// question does not apply and everything is reported false.
pub fn detect_reversal(inst: &SimpsonInstance) -> Result<SimpsonReport> {
    let m = marginals(inst);
    let dominance_ok = inst.dominance();
    let u = inst.u.weights();
    let witnesses: Vec<bool> = inst
        .v
        .iter()
        .map(|v| {
            dominance_ok
                && (dot(&inst.p, u) < dot(&inst.q, v.weights()) - TOL
                    || dot(&inst.q, u) > dot(&inst.p, v.weights()) + TOL)
        })
        .collect();
    if !dominance_ok {
        return Ok(SimpsonReport {
            dominance_ok,
            reversal: false,
            sure_loss: false,
            direction: Direction::None,
            marginals: m,
            witnesses,
            partial: false,
        });
    }
    let direction = simpson_condition(&m);
    let reversal = direction != Direction::None;
    let sure_loss = sure_loss_condition(inst);
    if reversal != sure_loss {
        return Err(Error::CrossCheckMismatch {
            what: "Simpson reversal vs sure loss",
            discrepancy: (m.p_bar - m.inf_qv).abs().min((m.q_bar - m.sup_pv).abs()),
        });
    }
    let hits = witnesses.iter().filter(|&&w| w).count();
    Ok(SimpsonReport {
        dominance_ok,
        reversal,
        sure_loss,
        direction,
        marginals: m,
        partial: !reversal && hits > 0,
        witnesses,
    })
}

/// Both sides of the equivalence: `(sure loss on Λ, Simpson reversal)`.
/// `None` when `p` does not strictly dominate `q`.
pub fn sure_loss_equivalence(inst: &SimpsonInstance) -> Option<(bool, bool)> {
    if !inst.dominance() {
        return None;
    }
    let rhs = simpson_condition(&marginals(inst)) != Direction::None;
    Some((sure_loss_condition(inst), rhs))
}

/// Optimum of `πᵀw` over `{π ∈ simplex : lo ≤ π ≤ hi}`.
///
/// Greedy: start from `lo` and spend the remaining mass `1 − Σlo` on the
/// coordinates in order of `w` (largest first when maximizing), ties by
/// index.
///
/// Errors: [`Error::EmptyAlup`] if `Σlo > 1` or `Σhi < 1`.
pub fn box_simplex_optimum(
    lo: &[f64],
    hi: &[f64],
    w: &[f64],
    sense: Sense,
) -> Result<(f64, Vec<f64>)> {
    let k = lo.len();
    for got in [hi.len(), w.len()] {
        if got != k {
            return Err(Error::DimensionMismatch { expected: k, got });
        }
    }
    let lower_sum: f64 = lo.iter().sum();
    let upper_sum: f64 = hi.iter().sum();
    if lower_sum > 1.0 + TOL || upper_sum < 1.0 - TOL {
        return Err(Error::EmptyAlup {
            lower_sum,
            upper_sum,
        });
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        let o = w[a].total_cmp(&w[b]);
        let o = if sense == Sense::Max { o.reverse() } else { o };
        o.then(a.cmp(&b))
    });
    let mut pi = lo.to_vec();
    let mut budget = (1.0 - lower_sum).max(0.0);
    for i in order {
        let add = (hi[i] - lo[i]).max(0.0).min(budget);
        pi[i] += add;
        budget -= add;
    }
    Ok((dot(&pi, w), pi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlupReport {
    pub sure_loss: bool,
    pub sup_u: f64,
    pub inf_u: f64,
    pub sup_v: f64,
    pub inf_v: f64,
}

/// Sure loss of the atomic lower/upper probability model
/// `{π : q ≤ π ≤ p}` with respect to itself: the aggregate under `u` lies
/// entirely below (or above) the aggregate under `v`.
///
/// Errors: [`Error::EmptyAlup`]; [`Error::InvalidSimplex`] if some
/// `q_k > p_k`.
pub fn alup_sure_loss(
    p: &[f64],
    q: &[f64],
    u: &SimplexVector,
    v: &SimplexVector,
) -> Result<AlupReport> {
    if let Some(k) = (0..p.len().min(q.len())).find(|&k| q[k] > p[k] + TOL) {
        return Err(Error::InvalidSimplex(format!(
            "lower bound {} exceeds upper bound {} in coordinate {k}",
            q[k], p[k]
        )));
    }
    let (u, v) = (u.weights(), v.weights());
    let sup_u = box_simplex_optimum(q, p, u, Sense::Max)?.0;
    let inf_u = box_simplex_optimum(q, p, u, Sense::Min)?.0;
    let sup_v = box_simplex_optimum(q, p, v, Sense::Max)?.0;
    let inf_v = box_simplex_optimum(q, p, v, Sense::Min)?.0;
    Ok(AlupReport {
        sure_loss: sup_u < inf_v - TOL || inf_u > sup_v + TOL,
        sup_u,
        inf_u,
        sup_v,
        inf_v,
    })
}
