//! Möbius and zeta transforms on the subset lattice, conjugate upper
//! probabilities and k-monotonicity testing.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Capacity, CapacityKind, Event, MassFunction};
use crate::TOL;

/// Collections are enumerated exhaustively up to this frame size.
pub const EXHAUSTIVE_MAX_N: usize = 5;

/// The exact local test for 2-monotonicity costs `O(n² 2^n)`; beyond this
/// frame size it is sampled.
pub const LOCAL_TWO_MONOTONE_MAX_N: usize = 16;

/// Number of random collections drawn when exhaustive testing is off.
pub const RANDOM_SAMPLES: usize = 100_000;

const SAMPLING_SEED: u64 = 0x6b6d_6f6e_6f74_6f6e;

/// In-place subset sums: `t[A] ← Σ_{B ⊆ A} t[B]`.
pub(crate) fn zeta_in_place(t: &mut [f64], n: usize) {
    debug_assert_eq!(t.len(), 1 << n);
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..t.len() {
            if mask & bit != 0 {
                t[mask] += t[mask ^ bit];
            }
        }
    }
}

/// Inverse of [`zeta_in_place`]: `t[A] ← Σ_{B ⊆ A} (−1)^{|A−B|} t[B]`.
pub(crate) fn mobius_in_place(t: &mut [f64], n: usize) {
    debug_assert_eq!(t.len(), 1 << n);
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..t.len() {
            if mask & bit != 0 {
                t[mask] -= t[mask ^ bit];
            }
        }
    }
}

/// Möbius transform of a belief function.
///
/// Masses in `[-TOL, 0)` are float noise and are clamped to zero; anything
/// more negative means the capacity is not totally monotone.
pub fn mobius(c: &Capacity) -> Result<MassFunction> {
    let n = c.n();
    let mut t = c.table().to_vec();
    mobius_in_place(&mut t, n);
    let mut entries = BTreeMap::new();
    for (mask, &v) in t.iter().enumerate().skip(1) {
        if v < -TOL {
            return Err(Error::NotABeliefFunction {
                mask: mask as u32,
                value: v,
            });
        }
        if v > 0.0 {
            entries.insert(mask as u32, v);
        }
    }
    Ok(MassFunction::from_raw(c.frame().clone(), entries))
}

/// Belief function `lower(A) = Σ_{B ⊆ A} m(B)` via the subset zeta transform.
pub fn belief_from_mass(m: &MassFunction) -> Capacity {
    let frame = m.frame().clone();
    let n = frame.n();
    let mut t = vec![0.0; 1 << n];
    for (&mask, &v) in m.raw_entries() {
        t[mask as usize] = v;
    }
    zeta_in_place(&mut t, n);
    let total = t[(1 << n) - 1];
    for v in t.iter_mut() {
        *v = (*v / total).clamp(0.0, 1.0);
    }
    let kind = if m.raw_entries().keys().all(|k| k.count_ones() == 1) {
        CapacityKind::Precise
    } else {
        CapacityKind::Belief
    };
    Capacity::from_parts_unchecked(frame, t, kind)
}

/// `upper(A) = 1 − lower(Aᶜ)`.
///
/// # Panics
/// If `a` belongs to another frame.
pub fn conjugate_upper(c: &Capacity, a: Event) -> f64 {
    1.0 - c.lower(a.complement())
}

/// A collection `{A_1..A_j}` of subsets of `superset` violating the
/// inclusion–exclusion inequality by `violation > TOL`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityWitness {
    pub superset: Event,
    pub collection: Vec<Event>,
    /// Right-hand side minus `lower(superset)`.
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub k_tested: usize,
    pub holds: bool,
    /// Whether every collection was checked (otherwise a seeded sample).
    pub exhaustive: bool,
    pub collections_checked: u64,
    pub witness: Option<MonotonicityWitness>,
}

/// Tests whether `c` is a Choquet capacity of order `k`:
/// `lower(A) ≥ Σ_{∅≠I⊆{1..j}} (−1)^{|I|−1} lower(∩_{i∈I} A_i)` for every
/// collection of `j ≤ k` subsets of `A`.
///
/// * `k = 2` uses the exact local criterion
///   `lower(S ∪ {i,j}) + lower(S) ≥ lower(S ∪ {i}) + lower(S ∪ {j})` for
///   frames up to [`LOCAL_TWO_MONOTONE_MAX_N`].
/// * `k ≥ 3` enumerates all collections of distinct nonempty events (with
///   `A` their union, which suffices by monotonicity) for frames up to
///   [`EXHAUSTIVE_MAX_N`].
/// * Otherwise [`RANDOM_SAMPLES`] collections are drawn from a fixed seed:
///   a random superset `A`, a size `j ∈ [2, k]`, and `j` distinct random
///   nonempty subsets of `A`.
pub fn is_k_monotone(c: &Capacity, k: usize) -> Result<MonotonicityReport> {
    let n = c.n();
    if k < 2 || k > n {
        return Err(Error::OutOfRange {
            value: k as f64,
            range: "2 <= k <= n",
        });
    }
    let table = c.table();
    let id = c.frame().id();
    let ev = |m: u32| Event::from_mask_unchecked(m, id);

    if k == 2 {
        let (found, exhaustive, checked) = two_monotone_search(n, table);
        return Ok(MonotonicityReport {
            k_tested: 2,
            holds: found.is_none(),
            exhaustive,
            collections_checked: checked,
            witness: found.map(|(s, a1, a2, v)| MonotonicityWitness {
                superset: ev(s),
                collection: vec![ev(a1), ev(a2)],
                violation: v,
            }),
        });
    }

    if n <= EXHAUSTIVE_MAX_N {
        let mut checked = 0u64;
        let mut witness = None;
        let count = (1u32 << n) - 1;
        let mut combo: Vec<u32> = Vec::with_capacity(k);
        'sizes: for j in 2..=k {
            let mut idx: Vec<u32> = (0..j as u32).collect();
            if j as u32 > count {
                break;
            }
            loop {
                combo.clear();
                combo.extend(idx.iter().map(|&i| i + 1));
                checked += 1;
                let union = combo.iter().fold(0u32, |acc, &m| acc | m);
                let rhs = inclusion_exclusion(table, &combo);
                let v = rhs - table[union as usize];
                if v > TOL {
                    witness = Some(MonotonicityWitness {
                        superset: ev(union),
                        collection: combo.iter().map(|&m| ev(m)).collect(),
                        violation: v,
                    });
                    break 'sizes;
                }
                if !next_combination(&mut idx, count) {
                    break;
                }
            }
        }
        return Ok(MonotonicityReport {
            k_tested: k,
            holds: witness.is_none(),
            exhaustive: true,
            collections_checked: checked,
            witness,
        });
    }

    let mut signed_mobius: Option<Vec<f64>> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED ^ k as u64);
    let full = id.full_mask();
    let mut witness = None;
    let mut checked = 0u64;
    let mut combo: Vec<u32> = Vec::with_capacity(k);
    while checked < RANDOM_SAMPLES as u64 {
        let a = rng.gen::<u32>() & full;
        if a.count_ones() < 2 {
            continue;
        }
        let j = rng.gen_range(2..=k);
        combo.clear();
        let mut attempts = 0;
        while combo.len() < j && attempts < 8 * j {
            attempts += 1;
            let s = rng.gen::<u32>() & a;
            if s != 0 && !combo.contains(&s) {
                combo.push(s);
            }
        }
        if combo.len() < 2 {
            continue;
        }
        checked += 1;
        let rhs = if combo.len() <= 12 {
            inclusion_exclusion(table, &combo)
        } else {
            let m = signed_mobius.get_or_insert_with(|| {
                let mut t = table.to_vec();
                mobius_in_place(&mut t, n);
                t
            });
            covered_mass(m, &combo)
        };
        let v = rhs - table[a as usize];
        if v > TOL {
            witness = Some(MonotonicityWitness {
                superset: ev(a),
                collection: combo.iter().map(|&m| ev(m)).collect(),
                violation: v,
            });
            break;
        }
    }
    Ok(MonotonicityReport {
        k_tested: k,
        holds: witness.is_none(),
        exhaustive: false,
        collections_checked: checked,
        witness,
    })
}

/// `Σ_{∅≠I} (−1)^{|I|−1} lower(∩_{i∈I} A_i)`.
fn inclusion_exclusion(table: &[f64], sets: &[u32]) -> f64 {
    let j = sets.len();
    let mut sum = 0.0;
    for sel in 1u32..(1 << j) {
        let mut inter = u32::MAX;
        for (i, &s) in sets.iter().enumerate() {
            if sel & (1 << i) != 0 {
                inter &= s;
            }
        }
        let term = table[inter as usize];
        if sel.count_ones() % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// Same quantity as [`inclusion_exclusion`] written through the signed
/// Möbius transform: the total mass of events contained in some `A_i`.
fn covered_mass(mobius: &[f64], sets: &[u32]) -> f64 {
    mobius
        .iter()
        .enumerate()
        .filter(|(b, _)| sets.iter().any(|&s| (*b as u32) & !s == 0))
        .map(|(_, v)| v)
        .sum()
}

fn next_combination(idx: &mut [u32], count: u32) -> bool {
    let j = idx.len();
    let mut i = j;
    while i > 0 {
        i -= 1;
        if idx[i] < count - (j - i) as u32 {
            idx[i] += 1;
            for t in i + 1..j {
                idx[t] = idx[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// First local supermodularity violation `(S∪{i,j}, S∪{i}, S∪{j}, amount)`.
pub(crate) fn two_monotone_violation(n: usize, table: &[f64]) -> Option<(u32, u32, u32, f64)> {
    two_monotone_search(n, table).0
}

fn local_gap(table: &[f64], s: u32, bi: u32, bj: u32) -> f64 {
    table[(s | bi) as usize] + table[(s | bj) as usize]
        - table[(s | bi | bj) as usize]
        - table[s as usize]
}

fn two_monotone_search(n: usize, table: &[f64]) -> (Option<(u32, u32, u32, f64)>, bool, u64) {
    let mut checked = 0u64;
    if n <= LOCAL_TWO_MONOTONE_MAX_N {
        for s in 0..(1u32 << n) {
            for i in 0..n {
                let bi = 1u32 << i;
                if s & bi != 0 {
                    continue;
                }
                for j in i + 1..n {
                    let bj = 1u32 << j;
                    if s & bj != 0 {
                        continue;
                    }
                    checked += 1;
                    let gap = local_gap(table, s, bi, bj);
                    if gap > TOL {
                        return (Some((s | bi | bj, s | bi, s | bj, gap)), true, checked);
                    }
                }
            }
        }
        return (None, true, checked);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
    let full = ((1u64 << n) - 1) as u32;
    while checked < RANDOM_SAMPLES as u64 {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let (bi, bj) = (1u32 << i, 1u32 << j);
        let s = rng.gen::<u32>() & full & !bi & !bj;
        checked += 1;
        let gap = local_gap(table, s, bi, bj);
        if gap > TOL {
            return (Some((s | bi | bj, s | bi, s | bj, gap)), false, checked);
        }
    }
    (None, false, checked)
}
