//! Independent oracles shared by the integration suites. Nothing here calls
//! the engine routes it is used to check.

#![allow(dead_code)]

use lowprob::{Capacity, Event, Frame, MassFunction, Partition};
use rand::Rng;

pub const TOL: f64 = 1e-9;

pub fn prob(p: &[f64], mask: u32) -> f64 {
    (0..p.len())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| p[i])
        .sum()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// One candidate extreme point per ordering, by prefix differences of the
/// lower table. Not deduplicated.
pub fn vertex_oracle(c: &Capacity) -> Vec<Vec<f64>> {
    let n = c.n();
    permutations(n)
        .into_iter()
        .map(|order| {
            let mut p = vec![0.0; n];
            let mut prefix = 0u32;
            let mut prev = 0.0;
            for w in order {
                prefix |= 1 << w;
                let cur = c.lower(c.event(prefix));
                p[w] = cur - prev;
                prev = cur;
            }
            p
        })
        .collect()
}

pub fn min_max<I: Iterator<Item = f64>>(it: I) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
        (l.min(v), h.max(v))
    })
}

/// Fagin–Halpern bounds straight from `lower` and `1 − lower(·ᶜ)`, with
/// `0/0` resolved to the value every admissible measure gives.
pub fn fh_oracle(c: &Capacity, a: Event, b: Event) -> (f64, f64) {
    let ab = a.intersect(b).unwrap();
    let acb = a.complement().intersect(b).unwrap();
    let up = |e: Event| 1.0 - c.lower(e.complement());
    let lo_den = c.lower(ab) + up(acb);
    let hi_den = up(ab) + c.lower(acb);
    let lo = if lo_den <= TOL {
        1.0
    } else {
        c.lower(ab) / lo_den
    };
    let hi = if hi_den <= TOL { 0.0 } else { up(ab) / hi_den };
    (lo, hi)
}

/// Belief and plausibility after Dempster conditioning, from the focal sets.
pub fn dempster_mass_oracle(m: &MassFunction, a: Event, b: Event) -> Option<(f64, f64)> {
    let (mut norm, mut bel, mut pl) = (0.0, 0.0, 0.0);
    for (f, v) in m.focal_sets() {
        let cut = f.mask() & b.mask();
        if cut == 0 {
            continue;
        }
        norm += v;
        if cut & !a.mask() == 0 {
            bel += v;
        }
        if cut & a.mask() != 0 {
            pl += v;
        }
    }
    (norm > TOL).then(|| (bel / norm, pl / norm))
}

/// Belief and plausibility after Geometric conditioning, from the focal sets.
pub fn geometric_mass_oracle(m: &MassFunction, a: Event, b: Event) -> Option<(f64, f64)> {
    let (mut norm, mut bel, mut pl) = (0.0, 0.0, 0.0);
    for (f, v) in m.focal_sets() {
        let fm = f.mask();
        if fm & !b.mask() != 0 {
            continue;
        }
        norm += v;
        if fm & !a.mask() == 0 {
            bel += v;
        }
        if fm & a.mask() != 0 {
            pl += v;
        }
    }
    (norm > TOL).then(|| (bel / norm, pl / norm))
}

/// Closed forms for "Clinton" given "Dem" in the election poll.
pub fn election_oracle(eps: f64, rule: &str) -> Option<(f64, f64)> {
    match rule {
        "gb" => Some((
            (0.1 - eps) / (0.6 + 4.0 * eps),
            (0.5 + 5.0 * eps) / (0.6 + 4.0 * eps),
        )),
        "dempster" => Some((
            (0.2 - 2.0 * eps) / (0.7 + 3.0 * eps),
            (0.5 + 5.0 * eps) / (0.7 + 3.0 * eps),
        )),
        "geometric" => (0.3 - 3.0 * eps > TOL).then_some((1.0 / 3.0, 2.0 / 3.0)),
        _ => unreachable!(),
    }
}

pub fn random_event<R: Rng>(rng: &mut R, frame: &Frame) -> Event {
    frame
        .event_from_mask(rng.gen::<u32>() & frame.full().mask())
        .unwrap()
}

/// Nonempty proper event (frames of size ≥ 2).
pub fn random_proper_event<R: Rng>(rng: &mut R, frame: &Frame) -> Event {
    loop {
        let e = random_event(rng, frame);
        if !e.is_empty() && !e.is_full() {
            return e;
        }
    }
}

/// Random partition into 2 or 3 nonempty blocks.
pub fn random_partition<R: Rng>(rng: &mut R, frame: &Frame) -> Partition {
    let n = frame.n();
    let k = rng.gen_range(2..=3.min(n));
    loop {
        let mut masks = vec![0u32; k];
        for i in 0..n {
            masks[rng.gen_range(0..k)] |= 1 << i;
        }
        if masks.iter().all(|&m| m != 0) {
            let blocks = masks
                .into_iter()
                .map(|m| frame.event_from_mask(m).unwrap())
                .collect();
            return Partition::new(blocks).unwrap();
        }
    }
}

pub fn contains(outer: (f64, f64), inner: (f64, f64), tol: f64) -> bool {
    outer.0 <= inner.0 + tol && inner.1 <= outer.1 + tol
}
