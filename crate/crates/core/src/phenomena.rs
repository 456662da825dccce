//! Dilation, contraction and sure loss of an event across a partition, and
//! the compound bet that turns sure loss into a guaranteed loss.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Capacity, Event, Partition, ProbabilityInterval};
use crate::par::{self, Exec};
use crate::updating::{condition, Rule};
use crate::TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Dilation,
    StrictDilation,
    Contraction,
    StrictContraction,
    SureLoss,
    SureGain,
    None,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Dilation => "dilation",
            Classification::StrictDilation => "strict_dilation",
            Classification::Contraction => "contraction",
            Classification::StrictContraction => "strict_contraction",
            Classification::SureLoss => "sure_loss",
            Classification::SureGain => "sure_gain",
            Classification::None => "none",
        }
    }

    /// Dilation, strict or not.
    pub fn dilates(self) -> bool {
        matches!(
            self,
            Classification::Dilation | Classification::StrictDilation
        )
    }

    /// Contraction, strict or not.
    pub fn contracts(self) -> bool {
        matches!(
            self,
            Classification::Contraction | Classification::StrictContraction
        )
    }
}

/// Extremes of the conditional bounds over the blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockExtremes {
    pub inf_lo: f64,
    pub sup_lo: f64,
    pub inf_hi: f64,
    pub sup_hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhenomenonReport {
    pub classification: Classification,
    pub rule: Rule,
    pub event: Event,
    pub prior: ProbabilityInterval,
    pub per_block: Vec<(Event, ProbabilityInterval)>,
    pub extremes: BlockExtremes,
}

/// Conditions `a` on every block of `part` and classifies the change
/// against the prior interval `[lower(a), upper(a)]`.
///
/// Order of tests: sure loss, sure gain, dilation, contraction. Equalities
/// hold within [`TOL`]; with both outer bounds equal the update is `None`.
/// Any block on which the rule is undefined aborts with that error.
pub fn detect(c: &Capacity, a: Event, part: &Partition, rule: Rule) -> Result<PhenomenonReport> {
    detect_with(c, a, part, rule, Exec::default())
}

pub fn detect_with(
    c: &Capacity,
    a: Event,
    part: &Partition,
    rule: Rule,
    exec: Exec,
) -> Result<PhenomenonReport> {
    c.check_event(a)?;
    let blocks = part.blocks();
    if let Some(b) = blocks.first() {
        c.check_event(*b)?;
    }
    let intervals = par::try_map_range(exec, blocks.len(), |i| {
        condition(c, a, blocks[i], rule).map(|r| r.interval)
    })?;
    let prior = c.interval(a);
    let extremes = BlockExtremes {
        inf_lo: intervals
            .iter()
            .map(|iv| iv.lo)
            .fold(f64::INFINITY, f64::min),
        sup_lo: intervals
            .iter()
            .map(|iv| iv.lo)
            .fold(f64::NEG_INFINITY, f64::max),
        inf_hi: intervals
            .iter()
            .map(|iv| iv.hi)
            .fold(f64::INFINITY, f64::min),
        sup_hi: intervals
            .iter()
            .map(|iv| iv.hi)
            .fold(f64::NEG_INFINITY, f64::max),
    };
    Ok(PhenomenonReport {
        classification: classify(&prior, &extremes),
        rule,
        event: a,
        prior,
        per_block: blocks.iter().copied().zip(intervals).collect(),
        extremes,
    })
}

fn classify(prior: &ProbabilityInterval, x: &BlockExtremes) -> Classification {
    if x.inf_lo > prior.hi + TOL {
        return Classification::SureLoss;
    }
    if x.sup_hi < prior.lo - TOL {
        return Classification::SureGain;
    }
    // each side: Some(strict) if the inequality holds, None if it fails
    let side = |a: f64, b: f64| {
        if a < b - TOL {
            Some(true)
        } else if a <= b + TOL {
            Some(false)
        } else {
            None
        }
    };
    let grade = |l: Option<bool>, r: Option<bool>, strict, weak| match (l, r) {
        (Some(true), Some(true)) => Some(strict),
        (Some(true), Some(false)) | (Some(false), Some(true)) => Some(weak),
        _ => None,
    };
    let dil = grade(
        side(x.sup_lo, prior.lo),
        side(prior.hi, x.inf_hi),
        Classification::StrictDilation,
        Classification::Dilation,
    );
    let con = grade(
        side(prior.lo, x.inf_lo),
        side(x.sup_hi, prior.hi),
        Classification::StrictContraction,
        Classification::Contraction,
    );
    dil.or(con).unwrap_or(Classification::None)
}

/// A bet costing `cost` that pays 1 if the outcome lies in `pays_on`. A
/// conditional bet is called off unless its block occurs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bet {
    pub cost: f64,
    #[serde(skip)]
    pub pays_on: Event,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DutchBook {
    /// Event the book is written on: `a`, or `aᶜ` when `a` shows sure gain.
    pub event: Event,
    pub complemented: bool,
    pub rule: Rule,
    pub s: f64,
    pub t: f64,
    /// Buy `event`ᶜ at `1 − t`.
    pub unconditional_bet: Bet,
    /// After block `B` occurs, buy `event` at `s`.
    pub conditional_bets: Vec<(Event, Bet)>,
    /// Net payoff, equal for every outcome.
    pub guaranteed_net: f64,
    /// Realized net payoff per outcome.
    pub payoffs: Vec<f64>,
}

/// Builds the two-stage book exploiting sure loss of `a`:
/// `t = upper(a) + gamma` and `s = inf_B lo(a|B) − gamma`, so each outcome
/// nets `t − s < 0`. A sure gain in `a` is handled as sure loss in `aᶜ`.
///
/// Errors: [`Error::NoSureLoss`] when neither applies or `gamma` lies
/// outside `(0, (inf_B lo − upper)/2)`.
pub fn dutch_book(
    c: &Capacity,
    a: Event,
    part: &Partition,
    rule: Rule,
    gamma: f64,
) -> Result<DutchBook> {
    let first = detect(c, a, part, rule)?;
    let (report, complemented) = match first.classification {
        Classification::SureLoss => (first, false),
        Classification::SureGain => (detect(c, a.complement(), part, rule)?, true),
        other => {
            return Err(Error::NoSureLoss(format!(
                "update classified as {}",
                other.as_str()
            )))
        }
    };
    if report.classification != Classification::SureLoss {
        return Err(Error::NoSureLoss(format!(
            "complement classified as {}",
            report.classification.as_str()
        )));
    }
    let gap = report.extremes.inf_lo - report.prior.hi;
    if !(gamma > 0.0 && gamma < gap / 2.0) {
        return Err(Error::NoSureLoss(format!(
            "gamma = {gamma} outside (0, {})",
            gap / 2.0
        )));
    }
    let event = report.event;
    let t = report.prior.hi + gamma;
    let s = report.extremes.inf_lo - gamma;
    let unconditional_bet = Bet {
        cost: 1.0 - t,
        pays_on: event.complement(),
    };
    let conditional_bets: Vec<(Event, Bet)> = part
        .blocks()
        .iter()
        .map(|&b| {
            (
                b,
                Bet {
                    cost: s,
                    pays_on: event,
                },
            )
        })
        .collect();
    let payoffs: Vec<f64> = (0..c.n())
        .map(|w| {
            let mut net = if unconditional_bet.pays_on.contains(w) {
                1.0
            } else {
                0.0
            } - unconditional_bet.cost;
            for (b, bet) in &conditional_bets {
                if b.contains(w) {
                    net += if bet.pays_on.contains(w) { 1.0 } else { 0.0 } - bet.cost;
                }
            }
            net
        })
        .collect();
    let guaranteed_net = t - s;
    if let Some(bad) = payoffs.iter().find(|&&p| (p - guaranteed_net).abs() > TOL) {
        return Err(Error::CrossCheckMismatch {
            what: "Dutch book payoff",
            discrepancy: (bad - guaranteed_net).abs(),
        });
    }
    Ok(DutchBook {
        event,
        complemented,
        rule,
        s,
        t,
        unconditional_bet,
        conditional_bets,
        guaranteed_net,
        payoffs,
    })
}
