//! Conditioning rules: generalized Bayes, Dempster and Geometric.
//!
//! Each rule is computed along two independent routes. Generalized Bayes
//! uses the Fagin–Halpern closed form on 2-monotone capacities, audited by
//! the fractional LP. Dempster and Geometric use the capacity formulas,
//! audited on belief functions by conditioning the mass function directly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::credal::fractional_bounds;
use crate::error::{Error, Result};
use crate::model::{Capacity, Event, MassFunction, ProbabilityInterval};
use crate::par::{self, Exec};
use crate::transforms::mobius;
use crate::TOL;

/// The LP audit of generalized Bayes is skipped past this frame size.
pub const LP_AUDIT_MAX_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    GeneralizedBayes,
    Dempster,
    Geometric,
}

impl Rule {
    pub const ALL: [Rule; 3] = [Rule::GeneralizedBayes, Rule::Dempster, Rule::Geometric];

    /// Short name used on the command line and in CSV output.
    pub fn short_name(self) -> &'static str {
        match self {
            Rule::GeneralizedBayes => "gb",
            Rule::Dempster => "dempster",
            Rule::Geometric => "geometric",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::GeneralizedBayes => "generalized_bayes",
            Rule::Dempster => "dempster",
            Rule::Geometric => "geometric",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rule> {
        match s {
            "gb" | "generalized_bayes" => Ok(Rule::GeneralizedBayes),
            "dempster" => Ok(Rule::Dempster),
            "geometric" => Ok(Rule::Geometric),
            other => Err(Error::ParseError(format!("unknown rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Lp,
    MassOperational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalResult {
    pub interval: ProbabilityInterval,
    pub rule: Rule,
    pub method: Method,
    /// The second route, when it ran.
    pub audit: Option<(Method, ProbabilityInterval)>,
    /// Set when the two routes disagree in a case where that is expected
    /// (generalized Bayes with `lower(b) = 0`).
    pub diagnostic: Option<String>,
    pub posterior_capacity: Option<Capacity>,
}

impl ConditionalResult {
    fn new(interval: ProbabilityInterval, rule: Rule, method: Method) -> ConditionalResult {
        ConditionalResult {
            interval,
            rule,
            method,
            audit: None,
            diagnostic: None,
            posterior_capacity: None,
        }
    }
}

fn check(c: &Capacity, a: Event, b: Event) -> Result<()> {
    c.check_event(a)?;
    c.check_event(b)
}

/// Agreement to `TOL`, widened by the rounding a ratio with denominator
/// `den` picks up from table entries computed as `1 − lower(·)`.
fn cross_check(
    what: &'static str,
    primary: &ProbabilityInterval,
    audit: &ProbabilityInterval,
    den: f64,
) -> Result<()> {
    let d = primary.distance(audit);
    if d > TOL + 16.0 * f64::EPSILON / den {
        return Err(Error::CrossCheckMismatch {
            what,
            discrepancy: d,
        });
    }
    Ok(())
}

/// Fagin–Halpern bounds from raw masks; `0/0` takes the value every
/// admissible `P` gives (lower end 1, upper end 0).
fn fagin_halpern(c: &Capacity, a: u32, b: u32) -> (f64, f64) {
    let ab = a & b;
    let acb = !a & b & c.frame().full().mask();
    let (l_ab, u_ab) = (c.lower_mask(ab), c.upper_mask(ab));
    let (l_acb, u_acb) = (c.lower_mask(acb), c.upper_mask(acb));
    let lo_den = l_ab + u_acb;
    let hi_den = u_ab + l_acb;
    let lo = if lo_den <= TOL { 1.0 } else { l_ab / lo_den };
    let hi = if hi_den <= TOL { 0.0 } else { u_ab / hi_den };
    (lo, hi)
}

/// Smaller of the two closed-form denominators that are in use.
fn fh_denominator(c: &Capacity, a: u32, b: u32) -> f64 {
    let acb = !a & b & c.frame().full().mask();
    let lo_den = c.lower_mask(a & b) + c.upper_mask(acb);
    let hi_den = c.upper_mask(a & b) + c.lower_mask(acb);
    [lo_den, hi_den]
        .into_iter()
        .filter(|&d| d > TOL)
        .fold(1.0, f64::min)
}

fn dempster_bounds(c: &Capacity, a: u32, b: u32) -> (f64, f64) {
    let full = c.frame().full().mask();
    let ub = c.upper_mask(b);
    (
        1.0 - c.upper_mask(!a & b & full) / ub,
        c.upper_mask(a & b) / ub,
    )
}

fn geometric_bounds(c: &Capacity, a: u32, b: u32) -> (f64, f64) {
    let full = c.frame().full().mask();
    let lb = c.lower_mask(b);
    (
        c.lower_mask(a & b) / lb,
        1.0 - c.lower_mask(!a & b & full) / lb,
    )
}

/// Generalized Bayes: `[inf, sup]` of `P(a|b)` over credal `P` with
/// `P(b) > 0`.
///
/// Errors: [`Error::ConditioningOnNull`] if `upper(b) ≤ TOL`.
pub fn gen_bayes(c: &Capacity, a: Event, b: Event) -> Result<ConditionalResult> {
    check(c, a, b)?;
    if c.upper(b) <= TOL {
        return Err(Error::ConditioningOnNull);
    }
    if !c.kind().is_two_monotone() {
        let iv = fractional_bounds(c, a, b)?;
        return Ok(ConditionalResult::new(
            iv,
            Rule::GeneralizedBayes,
            Method::Lp,
        ));
    }
    let (lo, hi) = fagin_halpern(c, a.mask(), b.mask());
    let iv = ProbabilityInterval::new(lo, hi)?;
    let mut r = ConditionalResult::new(iv, Rule::GeneralizedBayes, Method::ClosedForm);
    if c.n() <= LP_AUDIT_MAX_N {
        let lp = fractional_bounds(c, a, b)?;
        if c.lower(b) <= TOL {
            if iv.distance(&lp) > TOL {
                r.diagnostic = Some(format!(
                    "closed form [{}, {}] and restricted-set LP [{}, {}] differ with lower(b) = 0",
                    iv.lo, iv.hi, lp.lo, lp.hi
                ));
            }
        } else {
            cross_check(
                "generalized Bayes: closed form vs LP",
                &iv,
                &lp,
                fh_denominator(c, a.mask(), b.mask()),
            )?;
        }
        r.audit = Some((Method::Lp, lp));
    }
    Ok(r)
}

/// Dempster's rule: `hi = upper(a∩b)/upper(b)`, `lo = 1 − upper(aᶜ∩b)/upper(b)`.
///
/// Errors: [`Error::ConditioningOnNull`] if `upper(b) ≤ TOL`.
pub fn dempster(c: &Capacity, a: Event, b: Event) -> Result<ConditionalResult> {
    check(c, a, b)?;
    if c.upper(b) <= TOL {
        return Err(Error::ConditioningOnNull);
    }
    let (lo, hi) = dempster_bounds(c, a.mask(), b.mask());
    let iv = ProbabilityInterval::new(lo, hi)?;
    let mut r = ConditionalResult::new(iv, Rule::Dempster, Method::ClosedForm);
    if c.kind().is_belief() {
        let m = dempster_mass(&mobius(c)?, b)?;
        let audit = ProbabilityInterval::new(m.belief(a), m.plausibility(a))?;
        cross_check(
            "Dempster: formula vs mass conditioning",
            &iv,
            &audit,
            c.upper(b),
        )?;
        r.audit = Some((Method::MassOperational, audit));
    }
    Ok(r)
}

/// Dempster conditioning of a mass function: each focal set is cut down to
/// its intersection with `b`, then renormalized.
///
/// Errors: [`Error::ConditioningOnNull`] if no mass meets `b`.
pub fn dempster_mass(m: &MassFunction, b: Event) -> Result<MassFunction> {
    if b.frame_id() != m.frame().id() {
        return Err(Error::FrameMismatch);
    }
    let mut out: BTreeMap<u32, f64> = BTreeMap::new();
    let mut norm = 0.0;
    for (&c, &v) in m.raw_entries() {
        let cut = c & b.mask();
        if cut != 0 {
            *out.entry(cut).or_insert(0.0) += v;
            norm += v;
        }
    }
    if norm <= TOL {
        return Err(Error::ConditioningOnNull);
    }
    for v in out.values_mut() {
        *v /= norm;
    }
    Ok(MassFunction::from_raw(m.frame().clone(), out))
}

/// Geometric rule: `lo = lower(a∩b)/lower(b)`, `hi = 1 − lower(aᶜ∩b)/lower(b)`.
///
/// Errors: [`Error::GeometricUndefined`] if `lower(b) ≤ TOL`.
pub fn geometric(c: &Capacity, a: Event, b: Event) -> Result<ConditionalResult> {
    check(c, a, b)?;
    if c.lower(b) <= TOL {
        return Err(Error::GeometricUndefined);
    }
    let (lo, hi) = geometric_bounds(c, a.mask(), b.mask());
    let iv = ProbabilityInterval::new(lo, hi)?;
    let mut r = ConditionalResult::new(iv, Rule::Geometric, Method::ClosedForm);
    if c.kind().is_belief() {
        let m = geometric_mass(&mobius(c)?, b)?;
        let audit = ProbabilityInterval::new(m.belief(a), m.plausibility(a))?;
        cross_check(
            "Geometric: formula vs mass conditioning",
            &iv,
            &audit,
            c.lower(b),
        )?;
        r.audit = Some((Method::MassOperational, audit));
    }
    Ok(r)
}

/// Geometric conditioning of a mass function: keep the focal sets inside
/// `b` and renormalize.
///
/// Errors: [`Error::GeometricUndefined`] if no focal set lies inside `b`.
pub fn geometric_mass(m: &MassFunction, b: Event) -> Result<MassFunction> {
    if b.frame_id() != m.frame().id() {
        return Err(Error::FrameMismatch);
    }
    let kept: BTreeMap<u32, f64> = m
        .raw_entries()
        .iter()
        .filter(|(&c, _)| c & !b.mask() == 0)
        .map(|(&c, &v)| (c, v))
        .collect();
    let norm: f64 = kept.values().sum();
    if norm <= TOL {
        return Err(Error::GeometricUndefined);
    }
    Ok(MassFunction::from_raw(
        m.frame().clone(),
        kept.into_iter().map(|(c, v)| (c, v / norm)).collect(),
    ))
}

pub fn condition(c: &Capacity, a: Event, b: Event, rule: Rule) -> Result<ConditionalResult> {
    match rule {
        Rule::GeneralizedBayes => gen_bayes(c, a, b),
        Rule::Dempster => dempster(c, a, b),
        Rule::Geometric => geometric(c, a, b),
    }
}

/// [`condition`] plus the full posterior capacity given `b`.
pub fn condition_full(c: &Capacity, a: Event, b: Event, rule: Rule) -> Result<ConditionalResult> {
    let mut r = condition(c, a, b, rule)?;
    r.posterior_capacity = Some(posterior(c, b, rule)?);
    Ok(r)
}

/// Posterior lower probabilities `lower(A | b)` for every event `A`.
pub fn posterior(c: &Capacity, b: Event, rule: Rule) -> Result<Capacity> {
    posterior_with(c, b, rule, Exec::default())
}

pub fn posterior_with(c: &Capacity, b: Event, rule: Rule, exec: Exec) -> Result<Capacity> {
    let table = posterior_table_with(c, b, rule, exec)?;
    Capacity::from_lower(c.frame().clone(), table)
}

/// Raw posterior lower table, evaluated per event through the primary
/// route of each rule.
pub fn posterior_table_with(c: &Capacity, b: Event, rule: Rule, exec: Exec) -> Result<Vec<f64>> {
    c.check_event(b)?;
    let bm = b.mask();
    match rule {
        Rule::GeneralizedBayes | Rule::Dempster if c.upper(b) <= TOL => {
            return Err(Error::ConditioningOnNull)
        }
        Rule::Geometric if c.lower(b) <= TOL => return Err(Error::GeometricUndefined),
        _ => {}
    }
    let two_monotone = c.kind().is_two_monotone();
    par::try_map_range(exec, c.frame().num_events(), |m| {
        let m = m as u32;
        let lo = match rule {
            Rule::GeneralizedBayes if two_monotone => fagin_halpern(c, m, bm).0,
            Rule::GeneralizedBayes => fractional_bounds(c, c.event(m), b)?.lo,
            Rule::Dempster => dempster_bounds(c, m, bm).0,
            Rule::Geometric => geometric_bounds(c, m, bm).0,
        };
        Ok(lo.clamp(0.0, 1.0))
    })
}
