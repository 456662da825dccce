//! Worked models with closed-form answers: the three prisoners, the boxer
//! and the wrestler, the election poll, and the treatment comparison.
//!
//! Every closed form here is checked against the generic engine when it is
//! evaluated, so a disagreement surfaces as [`Error::CrossCheckMismatch`].

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Capacity, Event, Frame, MassFunction, Partition, ProbabilityInterval};
use crate::par::{self, Exec};
use crate::phenomena::{detect, Classification};
use crate::transforms::belief_from_mass;
use crate::updating::{condition, Rule};
use crate::TOL;

// ---------------------------------------------------------------------------
// Three prisoners

pub const PRISONER_LABELS: [&str; 4] = ["A-saysB", "A-saysC", "B-saysC", "C-saysB"];

/// Outcomes are (who lives, whom the guard names). Without `delta_b` the
/// guard's choice when A lives is left open: mass 1/3 on
/// `{A-saysB, A-saysC}`. With `delta_b = P(says B | A lives)` the model is
/// precise.
#[derive(Debug, Clone)]
pub struct PrisonersModel {
    pub frame: Arc<Frame>,
    pub mass: MassFunction,
    pub delta_b: Option<f64>,
}

impl PrisonersModel {
    pub fn new(delta_b: Option<f64>) -> Result<PrisonersModel> {
        let frame = Frame::new(PRISONER_LABELS)?;
        let third = 1.0 / 3.0;
        let mass = match delta_b {
            None => MassFunction::new(
                frame.clone(),
                [
                    (frame.event(&["A-saysB", "A-saysC"])?, third),
                    (frame.event(&["B-saysC"])?, third),
                    (frame.event(&["C-saysB"])?, third),
                ],
            )?,
            Some(d) => {
                check_range(d, 0.0, 1.0, "delta_b in [0, 1]")?;
                MassFunction::precise(frame.clone(), &[d * third, (1.0 - d) * third, third, third])?
            }
        };
        Ok(PrisonersModel {
            frame,
            mass,
            delta_b,
        })
    }

    pub fn capacity(&self) -> Capacity {
        belief_from_mass(&self.mass)
    }

    pub fn a_lives(&self) -> Event {
        self.frame
            .event(&["A-saysB", "A-saysC"])
            .expect("known labels")
    }

    pub fn says_b(&self) -> Event {
        self.frame
            .event(&["A-saysB", "C-saysB"])
            .expect("known labels")
    }

    pub fn says_c(&self) -> Event {
        self.frame
            .event(&["A-saysC", "B-saysC"])
            .expect("known labels")
    }

    pub fn partition(&self) -> Partition {
        Partition::new(vec![self.says_b(), self.says_c()]).expect("guard names B or C")
    }
}

fn check_range(x: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if !(lo..=hi).contains(&x) {
        return Err(Error::OutOfRange { value: x, range });
    }
    Ok(())
}

fn agree(what: &'static str, closed: f64, engine: f64) -> Result<()> {
    let d = (closed - engine).abs();
    if d > TOL {
        return Err(Error::CrossCheckMismatch {
            what,
            discrepancy: d,
        });
    }
    Ok(())
}

/// `P(A lives | guard says B) = δ_B / (1 + δ_B)`.
pub fn prisoners_posterior(delta_b: f64) -> Result<f64> {
    let closed = {
        check_range(delta_b, 0.0, 1.0, "delta_b in [0, 1]")?;
        delta_b / (1.0 + delta_b)
    };
    let m = PrisonersModel::new(Some(delta_b))?;
    let engine = condition(&m.capacity(), m.a_lives(), m.says_b(), Rule::Dempster)?;
    agree("prisoners posterior", closed, engine.interval.lo)?;
    Ok(closed)
}

/// `y = (1 − 2x)/(2 − 3x)`: the posterior given "says C" as a function of
/// the posterior `x` given "says B".
pub fn prisoners_curve(x: f64) -> Result<f64> {
    check_range(x, 0.0, 0.5, "x in [0, 1/2]")?;
    Ok((1.0 - 2.0 * x) / (2.0 - 3.0 * x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub delta_b: f64,
    pub x: f64,
    pub y: f64,
}

/// `steps` evenly spaced values of `δ_B` over `[0, 1]`, each conditioned
/// through the engine and checked against the curve.
pub fn prisoners_curve_points(steps: usize, exec: Exec) -> Result<Vec<CurvePoint>> {
    let grid = linspace(0.0, 1.0, steps)?;
    par::try_map_range(exec, grid.len(), |i| {
        let d = grid[i];
        let m = PrisonersModel::new(Some(d))?;
        let c = m.capacity();
        let x = condition(&c, m.a_lives(), m.says_b(), Rule::GeneralizedBayes)?
            .interval
            .lo;
        let y = condition(&c, m.a_lives(), m.says_c(), Rule::GeneralizedBayes)?
            .interval
            .lo;
        agree("prisoners posterior", d / (1.0 + d), x)?;
        agree("prisoners curve", prisoners_curve(x)?, y)?;
        Ok(CurvePoint { delta_b: d, x, y })
    })
}

/// `n` evenly spaced points from `lo` to `hi` inclusive; values within
/// `1e-15` of zero are snapped to zero.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::OutOfRange {
            value: 0.0,
            range: "steps >= 1",
        });
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let d = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let x = (lo * (d - i as f64) + hi * i as f64) / d;
            if x.abs() < 1e-15 {
                0.0
            } else {
                x
            }
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Election poll

pub const ELECTION_LABELS: [&str; 4] = ["C-Dem", "C-Rep", "T-Dem", "T-Rep"];
pub const EPS_MIN: f64 = -0.025;
pub const EPS_MAX: f64 = 0.1;
pub const ELECTION_STEPS: usize = 251;

/// Vote (Clinton or Trump) crossed with party (Dem or Rep). Eight focal sets
/// carry `0.1 − ε` each (the four cells, both candidate rows, both party
/// columns) and the whole frame carries `0.2 + 8ε`.
#[derive(Debug, Clone)]
pub struct ElectionModel {
    pub epsilon: f64,
    pub frame: Arc<Frame>,
    pub mass: MassFunction,
}

impl ElectionModel {
    pub fn new(epsilon: f64) -> Result<ElectionModel> {
        check_range(epsilon, EPS_MIN, EPS_MAX, "epsilon in [-0.025, 0.1]")?;
        let frame = Frame::new(ELECTION_LABELS)?;
        let w = 0.1 - epsilon;
        let mut entries: Vec<(Event, f64)> = ELECTION_LABELS
            .iter()
            .map(|l| Ok((frame.event(&[l])?, w)))
            .collect::<Result<_>>()?;
        for pair in [
            ["C-Dem", "C-Rep"],
            ["T-Dem", "T-Rep"],
            ["C-Dem", "T-Dem"],
            ["C-Rep", "T-Rep"],
        ] {
            entries.push((frame.event(&pair)?, w));
        }
        entries.push((frame.full(), 0.2 + 8.0 * epsilon));
        let mass = MassFunction::new(frame.clone(), entries)?;
        Ok(ElectionModel {
            epsilon,
            frame,
            mass,
        })
    }

    pub fn capacity(&self) -> Capacity {
        belief_from_mass(&self.mass)
    }

    pub fn clinton(&self) -> Event {
        self.frame.event(&["C-Dem", "C-Rep"]).expect("known labels")
    }

    pub fn dem(&self) -> Event {
        self.frame.event(&["C-Dem", "T-Dem"]).expect("known labels")
    }

    pub fn rep(&self) -> Event {
        self.frame.event(&["C-Rep", "T-Rep"]).expect("known labels")
    }

    pub fn partition(&self) -> Partition {
        Partition::new(vec![self.dem(), self.rep()]).expect("party partition")
    }
}

/// `[0.3 − 3ε, 0.7 + 3ε]`
pub fn election_prior(epsilon: f64) -> Result<ProbabilityInterval> {
    check_range(epsilon, EPS_MIN, EPS_MAX, "epsilon in [-0.025, 0.1]")?;
    ProbabilityInterval::new(0.3 - 3.0 * epsilon, 0.7 + 3.0 * epsilon)
}

/// Closed-form interval for "Clinton" given "Dem" (the same given "Rep").
pub fn election_closed_form(epsilon: f64, rule: Rule) -> Result<ProbabilityInterval> {
    check_range(epsilon, EPS_MIN, EPS_MAX, "epsilon in [-0.025, 0.1]")?;
    let e = epsilon;
    match rule {
        Rule::GeneralizedBayes => ProbabilityInterval::new(
            (0.1 - e) / (0.6 + 4.0 * e),
            (0.5 + 5.0 * e) / (0.6 + 4.0 * e),
        ),
        Rule::Dempster => ProbabilityInterval::new(
            (0.2 - 2.0 * e) / (0.7 + 3.0 * e),
            (0.5 + 5.0 * e) / (0.7 + 3.0 * e),
        ),
        Rule::Geometric => {
            if 0.3 - 3.0 * e <= TOL {
                return Err(Error::GeometricUndefined);
            }
            ProbabilityInterval::new(1.0 / 3.0, 2.0 / 3.0)
        }
    }
}

/// [`election_closed_form`], asserted equal to the engine.
pub fn election_intervals(epsilon: f64, rule: Rule) -> Result<ProbabilityInterval> {
    let m = ElectionModel::new(epsilon)?;
    let engine = condition(&m.capacity(), m.clinton(), m.dem(), rule);
    let closed = election_closed_form(epsilon, rule);
    match (closed, engine) {
        (Ok(c), Ok(r)) => {
            let d = c.distance(&r.interval);
            if d > TOL {
                return Err(Error::CrossCheckMismatch {
                    what: "election closed form vs engine",
                    discrepancy: d,
                });
            }
            Ok(c)
        }
        (Err(a), Err(b)) if a == b => Err(a),
        (Err(e), _) | (_, Err(e)) => Err(Error::CrossCheckMismatch {
            what: match e {
                Error::GeometricUndefined => "election applicability",
                _ => "election closed form vs engine",
            },
            discrepancy: f64::NAN,
        }),
    }
}

/// Root of `9ε² − 0.8ε − 0.01 = 0` inside the open parameter range, where
/// Dempster's bounds meet the prior bounds: `ε = −1/90`.
pub fn election_crossover() -> f64 {
    let (a, b, c) = (9.0_f64, -0.8_f64, -0.01_f64);
    let disc = (b * b - 4.0 * a * c).sqrt();
    // the other root, 0.1, is the end of the range
    (-b - disc) / (2.0 * a)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub rule: Rule,
    /// `None` where the rule is undefined.
    pub interval: Option<ProbabilityInterval>,
    /// Largest difference from the closed form; zero when both are undefined.
    pub error: f64,
}

/// Conditions "Clinton" on "Dem" at every grid point under every rule.
/// Rows are ordered by `ε`, then rule.
pub fn election_sweep(
    steps: usize,
    eps_min: f64,
    eps_max: f64,
    exec: Exec,
) -> Result<Vec<SweepRow>> {
    check_range(eps_min, EPS_MIN, EPS_MAX, "epsilon in [-0.025, 0.1]")?;
    check_range(eps_max, EPS_MIN, EPS_MAX, "epsilon in [-0.025, 0.1]")?;
    let grid = linspace(eps_min, eps_max, steps)?;
    let rows = par::try_map_range(exec, grid.len(), |i| {
        let e = grid[i];
        let m = ElectionModel::new(e)?;
        let c = m.capacity();
        Rule::ALL
            .iter()
            .map(|&rule| {
                let engine = condition(&c, m.clinton(), m.dem(), rule);
                let closed = election_closed_form(e, rule);
                let error = match (&engine, &closed) {
                    (Ok(r), Ok(iv)) => r.interval.distance(iv),
                    (Err(_), Err(_)) => 0.0,
                    _ => f64::INFINITY,
                };
                match engine {
                    Ok(r) => Ok(SweepRow {
                        epsilon: e,
                        rule,
                        interval: Some(r.interval),
                        error,
                    }),
                    Err(Error::GeometricUndefined) => Ok(SweepRow {
                        epsilon: e,
                        rule,
                        interval: None,
                        error,
                    }),
                    Err(err) => Err(err),
                }
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(rows.into_iter().flatten().collect())
}

/// Classification of "Clinton" across the party partition.
pub fn election_classification(epsilon: f64, rule: Rule) -> Result<Classification> {
    let m = ElectionModel::new(epsilon)?;
    Ok(detect(&m.capacity(), m.clinton(), &m.partition(), rule)?.classification)
}

/// Where `rule` switches between dilation and contraction: scans the
/// default grid with the detector, then bisects the bracketing cell to
/// `tol`.
pub fn election_switch_point(rule: Rule, tol: f64) -> Result<f64> {
    let grid = linspace(EPS_MIN, EPS_MAX, ELECTION_STEPS)?;
    // grid points where the rule is defined, with their dilation flag
    let mut flags = Vec::new();
    for &e in &grid {
        match election_classification(e, rule) {
            Ok(c) if c.dilates() || c.contracts() => flags.push((e, c.dilates())),
            Ok(_) | Err(Error::GeometricUndefined) => {}
            Err(err) => return Err(err),
        }
    }
    let (mut lo, mut hi, left) = flags
        .windows(2)
        .find(|w| w[0].1 != w[1].1)
        .map(|w| (w[0].0, w[1].0, w[0].1))
        .ok_or(Error::OutOfRange {
            value: f64::NAN,
            range: "a dilation/contraction switch in the parameter range",
        })?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let c = election_classification(mid, rule)?;
        if c.dilates() == left && (c.dilates() || c.contracts()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------------
// Boxer and wrestler

pub const BOXER_LABELS: [&str; 4] = ["x0y0", "x0y1", "x1y0", "x1y1"];

/// `X` and `Y` are the two fighters' outcomes; `X` is a fair coin and
/// nothing is known about `Y`.
pub fn boxer_model() -> MassFunction {
    let f = Frame::new(BOXER_LABELS).expect("valid labels");
    MassFunction::new(
        f.clone(),
        [
            (f.event(&["x1y0", "x1y1"]).expect("known labels"), 0.5),
            (f.event(&["x0y0", "x0y1"]).expect("known labels"), 0.5),
        ],
    )
    .expect("valid masses")
}

/// `(X=1, Y=1, X=Y)` on the boxer frame.
pub fn boxer_events(frame: &Frame) -> Result<(Event, Event, Event)> {
    Ok((
        frame.event(&["x1y0", "x1y1"])?,
        frame.event(&["x0y1", "x1y1"])?,
        frame.event(&["x0y0", "x1y1"])?,
    ))
}

// ---------------------------------------------------------------------------
// Treatment comparison

pub const TREATMENT_LABELS: [&str; 4] = ["A-B", "A-Bc", "Ac-B", "Ac-Bc"];

/// `A`: improvement under treatment, `B`: improvement under control, with
/// `P(A) = P(B) = 1/2` and nothing known about their dependence. Encoded by
/// the lower envelope of that credal set.
pub fn treatment_model() -> Capacity {
    let f = Frame::new(TREATMENT_LABELS).expect("valid labels");
    let a = 0b0011u32;
    let b = 0b0101u32;
    let full = 0b1111u32;
    Capacity::from_fn(f, |e| {
        let m = e.mask();
        if m == full {
            1.0
        } else if m.count_ones() == 3 {
            // 1 − max P(missing cell) = 1 − 1/2
            0.5
        } else if m == a || m == !a & full || m == b || m == !b & full {
            0.5
        } else {
            0.0
        }
    })
    .expect("coherent lower envelope")
}

/// `(A, B)` on the treatment frame.
pub fn treatment_events(c: &Capacity) -> (Event, Event) {
    (c.event(0b0011), c.event(0b0101))
}
