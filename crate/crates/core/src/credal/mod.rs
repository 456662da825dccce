//! The credal set `{P : P(A) ≥ lower(A) for all A}` of a capacity.

mod lp;

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use lp::{Constraint, LinearProgram, Relation, Sense, Solution};

use crate::error::{Error, Result};
use crate::model::{Capacity, Event, ProbabilityInterval};
use crate::par::{self, Exec};
use crate::{TOL, VERTEX_TOL};

/// Vertex enumeration visits `n!` orderings.
pub const MAX_VERTEX_FRAME: usize = 8;

/// Random convex combinations drawn by [`independence_point_search`].
pub const INDEPENDENCE_SAMPLES: usize = 10_000;

const INDEPENDENCE_SEED: u64 = 0x696e_6465_7065_6e64;

#[derive(Debug)]
pub struct CredalSet {
    capacity: Capacity,
    constraints: Vec<(u32, f64)>,
    vertices: OnceLock<Vec<Vec<f64>>>,
}

impl CredalSet {
    /// Keeps one constraint per nonempty proper event with positive lower
    /// probability; the others are implied by `P ≥ 0`.
    pub fn new(capacity: Capacity) -> CredalSet {
        let full = capacity.frame().full().mask();
        let constraints = (1..full)
            .map(|m| (m, capacity.lower_mask(m)))
            .filter(|&(_, v)| v > TOL)
            .collect();
        CredalSet {
            capacity,
            constraints,
            vertices: OnceLock::new(),
        }
    }

    pub fn capacity(&self) -> &Capacity {
        &self.capacity
    }

    pub fn constraints(&self) -> &[(u32, f64)] {
        &self.constraints
    }

    /// Cached [`enumerate_vertices`].
    pub fn vertices(&self) -> Result<&[Vec<f64>]> {
        if let Some(v) = self.vertices.get() {
            return Ok(v);
        }
        let v = enumerate_vertices(&self.capacity)?;
        Ok(self.vertices.get_or_init(|| v))
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        if p.len() != self.capacity.n() || p.iter().any(|&x| x < -tol) {
            return false;
        }
        if (p.iter().sum::<f64>() - 1.0).abs() > tol {
            return false;
        }
        self.constraints
            .iter()
            .all(|&(m, lo)| mask_prob(p, m) >= lo - tol)
    }

    /// Optimizes `objective · P` over the credal set.
    pub fn optimize(&self, objective: &[f64], sense: Sense) -> Result<Solution> {
        let n = self.capacity.n();
        if objective.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: objective.len(),
            });
        }
        let mut lp = LinearProgram::new(objective.to_vec(), sense);
        lp.add(vec![1.0; n], Relation::Eq, 1.0)?;
        for &(m, lo) in &self.constraints {
            lp.add(indicator(n, m), Relation::Ge, lo)?;
        }
        lp.solve()
    }
}

pub(crate) fn mask_prob(p: &[f64], mask: u32) -> f64 {
    p.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, v)| v)
        .sum()
}

fn indicator(n: usize, mask: u32) -> Vec<f64> {
    (0..n)
        .map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 })
        .collect()
}

/// Probability vector of the `index`-th ordering (factorial number system).
fn permutation_vertex(c: &Capacity, index: usize) -> Vec<f64> {
    let n = c.n();
    let mut pool: Vec<usize> = (0..n).collect();
    let mut radix: usize = (1..n).product();
    let mut rest = index;
    let mut p = vec![0.0; n];
    let mut prefix = 0u32;
    let mut prev = 0.0;
    for k in (1..=n).rev() {
        let d = rest / radix.max(1);
        rest %= radix.max(1);
        if k > 1 {
            radix /= k - 1;
        }
        let w = pool.remove(d);
        prefix |= 1 << w;
        let cur = c.lower_mask(prefix);
        p[w] = (cur - prev).max(0.0);
        prev = cur;
    }
    p
}

fn dedup_vertices(mut vs: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    vs.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let dup = kept
            .iter()
            .rev()
            .take_while(|k| k[0] >= v[0] - VERTEX_TOL)
            .any(|k| max_dist(k, &v) <= VERTEX_TOL);
        if !dup {
            kept.push(v);
        }
    }
    kept
}

fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Extreme points of the core of a 2-monotone capacity: one candidate per
/// ordering of the outcomes, deduplicated at [`VERTEX_TOL`].
///
/// Errors: [`Error::NotTwoMonotone`], [`Error::FrameTooLarge`] past
/// [`MAX_VERTEX_FRAME`].
pub fn enumerate_vertices(c: &Capacity) -> Result<Vec<Vec<f64>>> {
    enumerate_vertices_with(c, Exec::default())
}

pub fn enumerate_vertices_with(c: &Capacity, exec: Exec) -> Result<Vec<Vec<f64>>> {
    if !c.kind().is_two_monotone() {
        return Err(Error::NotTwoMonotone);
    }
    let n = c.n();
    if n > MAX_VERTEX_FRAME {
        return Err(Error::FrameTooLarge {
            n,
            limit: MAX_VERTEX_FRAME,
        });
    }
    let count: usize = (1..=n).product();
    let all = par::map_range(exec, count, |k| permutation_vertex(c, k));
    Ok(dedup_vertices(all))
}

/// `[min P(a), max P(a)]` over the credal set.
///
/// Computed by linear programming; for 2-monotone capacities on small frames
/// the result is also compared with a scan of the vertices.
pub fn credal_bounds(c: &Capacity, a: Event) -> Result<ProbabilityInterval> {
    c.check_event(a)?;
    let set = CredalSet::new(c.clone());
    let obj = indicator(c.n(), a.mask());
    let lo = set.optimize(&obj, Sense::Min)?.value;
    let hi = set.optimize(&obj, Sense::Max)?.value;
    if c.kind().is_two_monotone() && c.n() <= MAX_VERTEX_FRAME {
        let (vlo, vhi) = set
            .vertices()?
            .iter()
            .map(|p| mask_prob(p, a.mask()))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                (l.min(v), h.max(v))
            });
        let d = (vlo - lo).abs().max((vhi - hi).abs());
        if d > VERTEX_TOL {
            return Err(Error::CrossCheckMismatch {
                what: "credal bounds: LP vs vertices",
                discrepancy: d,
            });
        }
    }
    ProbabilityInterval::new(lo, hi)
}

/// `[inf, sup]` of `P(num ∩ den) / P(den)` over credal `P` with `P(den) > 0`.
///
/// Solved by Charnes–Cooper homogenization: with `y = t·P` and `t = 1/P(den)`,
/// optimize `y(num ∩ den)` subject to `y(A) ≥ lower(A)·t`, `Σy = t`,
/// `y(den) = 1`. When `lower(den) = 0` this is the limit over the restricted
/// set `{P : P(den) > 0}`.
///
/// Errors: [`Error::ConditioningOnNull`] if `upper(den) ≤ TOL`.
pub fn fractional_bounds(c: &Capacity, num: Event, den: Event) -> Result<ProbabilityInterval> {
    c.check_event(num)?;
    c.check_event(den)?;
    if c.upper(den) <= TOL {
        return Err(Error::ConditioningOnNull);
    }
    let n = c.n();
    let target = num.mask() & den.mask();
    // variables: y_0..y_{n-1}, t
    let mut obj = indicator(n, target);
    obj.push(0.0);
    let build = |sense| -> Result<LinearProgram> {
        let mut lp = LinearProgram::new(obj.clone(), sense);
        let mut sum = vec![1.0; n + 1];
        sum[n] = -1.0;
        lp.add(sum, Relation::Eq, 0.0)?;
        let mut d = indicator(n, den.mask());
        d.push(0.0);
        lp.add(d, Relation::Eq, 1.0)?;
        let full = c.frame().full().mask();
        for m in 1..full {
            let lo = c.lower_mask(m);
            if lo > TOL {
                let mut row = indicator(n, m);
                row.push(-lo);
                lp.add(row, Relation::Ge, 0.0)?;
            }
        }
        Ok(lp)
    };
    // read the ratio off the optimal point; y(den) drifts from 1 when t is large
    let ratio = |sense| -> Result<f64> {
        let s = build(sense)?.solve()?;
        let y = &s.x[..n];
        let d = mask_prob(y, den.mask());
        Ok(if d > 0.0 {
            mask_prob(y, target) / d
        } else {
            s.value
        })
    };
    let lo = ratio(Sense::Min)?;
    let hi = ratio(Sense::Max)?;
    ProbabilityInterval::new(lo, hi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "point", rename_all = "snake_case")]
pub enum IndependenceSearch {
    Found(Vec<f64>),
    NotFound,
}

impl IndependenceSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, IndependenceSearch::Found(_))
    }
}

/// Looks for `P*` in the credal set with `P*(a ∩ b) = P*(a)·P*(b)`.
///
/// `f(P) = P(a∩b) − P(a)P(b)` is evaluated at the extreme points (vertex
/// enumeration when available, LP optima otherwise) and at
/// [`INDEPENDENCE_SAMPLES`] seeded convex combinations of them. A sign change
/// is refined by bisection along the segment. `Found` is always verified;
/// `NotFound` may be a miss.
pub fn independence_point_search(c: &Capacity, a: Event, b: Event) -> Result<IndependenceSearch> {
    independence_point_search_with(c, a, b, Exec::default())
}

pub fn independence_point_search_with(
    c: &Capacity,
    a: Event,
    b: Event,
    exec: Exec,
) -> Result<IndependenceSearch> {
    c.check_event(a)?;
    c.check_event(b)?;
    let set = CredalSet::new(c.clone());
    let base = extreme_points(&set)?;
    let (am, bm) = (a.mask(), b.mask());
    let f = |p: &[f64]| mask_prob(p, am & bm) - mask_prob(p, am) * mask_prob(p, bm);

    let values: Vec<f64> = base.iter().map(|p| f(p)).collect();
    if let Some(i) = values.iter().position(|v| v.abs() <= TOL) {
        return Ok(IndependenceSearch::Found(base[i].clone()));
    }
    let pos = values.iter().position(|&v| v > 0.0);
    let neg = values.iter().position(|&v| v < 0.0);
    if let (Some(i), Some(j)) = (pos, neg) {
        return Ok(IndependenceSearch::Found(bisect(&base[i], &base[j], &f)));
    }
    if base.len() < 2 {
        return Ok(IndependenceSearch::NotFound);
    }

    // all extreme points share a sign; try interior points
    let sign = values[0].signum();
    let n = c.n();
    let samples = par::map_range(exec, INDEPENDENCE_SAMPLES, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(
            INDEPENDENCE_SEED ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
        );
        let w: Vec<f64> = base
            .iter()
            .map(|_| -(1.0 - rng.gen::<f64>()).ln())
            .collect();
        let total: f64 = w.iter().sum();
        let mut p = vec![0.0; n];
        for (wi, v) in w.iter().zip(&base) {
            for (pi, vi) in p.iter_mut().zip(v) {
                *pi += wi / total * vi;
            }
        }
        let fv = f(&p);
        (p, fv)
    });
    for (p, fv) in samples {
        if fv.abs() <= TOL {
            return Ok(IndependenceSearch::Found(p));
        }
        if fv.signum() != sign {
            return Ok(IndependenceSearch::Found(bisect(&base[0], &p, &f)));
        }
    }
    Ok(IndependenceSearch::NotFound)
}

fn extreme_points(set: &CredalSet) -> Result<Vec<Vec<f64>>> {
    let c = set.capacity();
    if c.kind().is_two_monotone() && c.n() <= MAX_VERTEX_FRAME {
        return Ok(set.vertices()?.to_vec());
    }
    // LP optima of every singleton and its complement
    let n = c.n();
    let mut pts = Vec::new();
    for i in 0..n {
        let obj = indicator(n, 1 << i);
        for sense in [Sense::Min, Sense::Max] {
            pts.push(set.optimize(&obj, sense)?.x);
        }
    }
    Ok(dedup_vertices(pts))
}

fn bisect<F: Fn(&[f64]) -> f64>(p: &[f64], q: &[f64], f: &F) -> Vec<f64> {
    let at = |s: f64| -> Vec<f64> { p.iter().zip(q).map(|(x, y)| x + s * (y - x)).collect() };
    let (mut lo, mut hi) = (0.0, 1.0);
    let flo = f(p);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(&at(mid));
        if fm.abs() <= TOL * 1e-3 {
            return at(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}
