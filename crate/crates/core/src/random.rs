//! Seeded generators of random models, used by the property suites and the
//! benches.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::model::{Capacity, CapacityKind, Frame, MassFunction};
use crate::simpson::{SimplexVector, SimpsonInstance};
use crate::transforms::{belief_from_mass, is_k_monotone};

/// Flat Dirichlet draw of length `k`.
pub fn simplex<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Probability vector in which each outcome is zeroed with probability
/// `zero_prob` (at least one stays positive).
pub fn sparse_simplex<R: Rng>(rng: &mut R, k: usize, zero_prob: f64) -> Vec<f64> {
    let keep: Vec<bool> = (0..k).map(|_| !rng.gen_bool(zero_prob)).collect();
    let keep = if keep.iter().any(|&b| b) {
        keep
    } else {
        let mut v = vec![false; k];
        v[rng.gen_range(0..k)] = true;
        v
    };
    let w = simplex(rng, k);
    let w: Vec<f64> = w
        .iter()
        .zip(&keep)
        .map(|(x, &k)| if k { *x } else { 0.0 })
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Mass function with up to `max_focal` random focal sets.
pub fn random_mass<R: Rng>(rng: &mut R, frame: &Arc<Frame>, max_focal: usize) -> MassFunction {
    let full = frame.full().mask();
    let count = rng.gen_range(1..=max_focal.max(1));
    let weights = simplex(rng, count);
    let mut entries: BTreeMap<u32, f64> = BTreeMap::new();
    for w in weights {
        let mask = loop {
            let m = rng.gen::<u32>() & full;
            if m != 0 {
                break m;
            }
        };
        *entries.entry(mask).or_insert(0.0) += w;
    }
    let events: Vec<_> = entries
        .into_iter()
        .map(|(m, w)| (frame.event_from_mask(m).expect("mask inside frame"), w))
        .collect();
    MassFunction::new(frame.clone(), events).expect("valid random mass")
}

pub fn random_belief<R: Rng>(rng: &mut R, n: usize) -> Capacity {
    let f = Frame::numbered(n).expect("valid frame size");
    let max_focal = rng.gen_range(1..=2 * n);
    belief_from_mass(&random_mass(rng, &f, max_focal))
}

/// A 2-monotone capacity: a convex distortion `g(P(A))` of a random
/// probability (power `x^α` with non-integer `α > 1`, or a threshold
/// `max(0, x − δ)/(1 − δ)`), mixed with a random belief function.
pub fn random_two_monotone<R: Rng>(rng: &mut R, n: usize) -> Capacity {
    let f = Frame::numbered(n).expect("valid frame size");
    let p = sparse_simplex(rng, n, 0.15);
    let alpha = 1.0 + rng.gen_range(0.05..2.5);
    let delta = rng.gen_range(0.05..0.7);
    let threshold = rng.gen_bool(0.5);
    let g = move |x: f64| {
        if threshold {
            ((x - delta) / (1.0 - delta)).max(0.0)
        } else {
            x.powf(alpha)
        }
    };
    let mix = if rng.gen_bool(0.3) {
        0.0
    } else {
        rng.gen_range(0.0..0.7)
    };
    let bel = belief_from_mass(&random_mass(rng, &f, n + 2));
    let full = f.full().mask();
    let table: Vec<f64> = (0..=full)
        .map(|m| {
            if m == full {
                return 1.0;
            }
            let pa: f64 = (0..n).filter(|i| m & (1 << i) != 0).map(|i| p[i]).sum();
            (1.0 - mix) * g(pa.min(1.0)) + mix * bel.table()[m as usize]
        })
        .collect();
    Capacity::with_kind(f, table, CapacityKind::TwoMonotone)
        .expect("convex distortions are 2-monotone")
}

/// A capacity that is k-monotone: a belief function whose Möbius mass is
/// perturbed on one larger set, kept if it still passes the k-monotonicity
/// test. Falls back to the unperturbed belief function.
pub fn random_k_monotone<R: Rng>(rng: &mut R, n: usize, k: usize) -> Capacity {
    let f = Frame::numbered(n).expect("valid frame size");
    let full = f.full().mask();
    let base = belief_from_mass(&random_mass(rng, &f, 2 * n));
    if k == 2 && rng.gen_bool(0.5) {
        return random_two_monotone(rng, n);
    }
    for _ in 0..20 {
        let s = rng.gen::<u32>() & full;
        if (s.count_ones() as usize) <= k {
            continue;
        }
        let d = rng.gen_range(0.0..0.15);
        // move mass d from s onto its singletons so the total stays 1
        let table: Vec<f64> = (0..=full)
            .map(|m| {
                let mut v = base.table()[m as usize];
                if s & !m == 0 {
                    v -= d;
                }
                v += d * (m & s).count_ones() as f64 / s.count_ones() as f64;
                v
            })
            .collect();
        let Ok(c) = Capacity::from_lower(f.clone(), table) else {
            continue;
        };
        if is_k_monotone(&c, k).map(|r| r.holds).unwrap_or(false) {
            return c;
        }
    }
    base
}

/// Lower envelope of `count` random probabilities: coherent, often not
/// 2-monotone.
pub fn random_lower_envelope<R: Rng>(rng: &mut R, n: usize, count: usize) -> Capacity {
    let f = Frame::numbered(n).expect("valid frame size");
    let ps: Vec<Vec<f64>> = (0..count.max(1)).map(|_| simplex(rng, n)).collect();
    let full = f.full().mask();
    let table = (0..=full)
        .map(|m| {
            if m == full {
                return 1.0;
            }
            ps.iter()
                .map(|p| {
                    (0..n)
                        .filter(|i| m & (1 << i) != 0)
                        .map(|i| p[i])
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Capacity::from_lower(f, table).expect("envelopes are coherent")
}

/// Stratified rates with `p > q` in every stratum, a rule `u`, and a few
/// rules `V`. Half the draws skew `u` toward the weak strata and `V` toward
/// the strong ones so reversals are common.
pub fn random_simpson<R: Rng>(rng: &mut R, k: usize) -> SimpsonInstance {
    let q: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..0.9)).collect();
    let p: Vec<f64> = q
        .iter()
        .map(|&x| (x + rng.gen_range(0.001..0.1)).min(1.0))
        .collect();
    let skew = rng.gen_bool(0.5);
    let weighted = |rng: &mut R, favor_high: bool| {
        let mut w = simplex(rng, k);
        if skew {
            for (wi, qi) in w.iter_mut().zip(&q) {
                let t = if favor_high { *qi } else { 1.0 - qi };
                *wi *= (6.0 * t).exp();
            }
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
        }
        SimplexVector::new(w).expect("normalized weights")
    };
    let u = weighted(rng, false);
    let nv = rng.gen_range(1..=4);
    let v = (0..nv).map(|_| weighted(rng, true)).collect();
    SimpsonInstance::new(p, q, u, v).expect("consistent dimensions")
}
