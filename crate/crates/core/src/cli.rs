//! Command-line front end. Every verb writes CSV with a header row.
//!
//! Exit codes: 0 on success, 1 on a domain error (the error name is printed
//! on stderr), 2 on a usage or input parse error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::casebook::{self, ElectionModel, PrisonersModel};
use crate::error::{Error, Result};
use crate::model::schema::{load_model, LoadedModel};
use crate::model::{Capacity, Event, Partition};
use crate::par::Exec;
use crate::phenomena::detect;
use crate::simpson::{detect_reversal, sure_loss_equivalence, SimpsonInstance};
use crate::transforms::belief_from_mass;
use crate::updating::{condition, Rule};

#[derive(Debug, Parser)]
#[command(
    name = "lowprob",
    version,
    about = "Finite-frame imprecise probability"
)]
struct Cli {
    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conditional interval of TARGET given GIVEN.
    Condition {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        given: String,
        /// gb, dempster or geometric; all three when omitted.
        #[arg(long)]
        rule: Option<Rule>,
    },
    /// Dilation, contraction or sure loss of TARGET across a partition.
    Detect {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        target: String,
        /// Blocks separated by `;`.
        #[arg(long)]
        partition: String,
        #[arg(long)]
        rule: Option<Rule>,
    },
    /// Election poll: "Clinton" given "Dem" over a grid of epsilon.
    SweepElection {
        #[arg(long, default_value_t = casebook::ELECTION_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = casebook::EPS_MIN, allow_negative_numbers = true)]
        eps_min: f64,
        #[arg(long, default_value_t = casebook::EPS_MAX, allow_negative_numbers = true)]
        eps_max: f64,
    },
    /// Three prisoners: posteriors given each guard answer as delta_b varies.
    PrisonersCurve {
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Simpson reversal and sure-loss audit of an instance file.
    Simpson {
        #[arg(long)]
        file: PathBuf,
    },
    /// Every worked model, one row per query.
    Casebook,
}

impl clap::builder::ValueParserFactory for Rule {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Rule>().map_err(|e| e.to_string()))
    }
}

/// `%.12g`.
pub fn fmt_g12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = trim_zeros(&format!("{:.*}", decimals, x));
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Runs one command line (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(csv) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, csv.as_bytes()),
                None => out.write_all(csv.as_bytes()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write output: {e}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", e.name());
            if matches!(e, Error::ParseError(_)) {
                2
            } else {
                1
            }
        }
    }
}

fn execute(cmd: &Command) -> Result<String> {
    match cmd {
        Command::Condition {
            model,
            target,
            given,
            rule,
        } => condition_csv(&load(model)?, target, given, *rule),
        Command::Detect {
            model,
            target,
            partition,
            rule,
        } => detect_csv(&load(model)?, target, partition, *rule),
        Command::SweepElection {
            steps,
            eps_min,
            eps_max,
        } => sweep_csv(*steps, *eps_min, *eps_max),
        Command::PrisonersCurve { steps } => curve_csv(*steps),
        Command::Simpson { file } => simpson_csv(&SimpsonInstance::load(file)?),
        Command::Casebook => casebook_csv(),
    }
}

fn load(path: &Path) -> Result<LoadedModel> {
    load_model(path)
}

fn rules(rule: Option<Rule>) -> Vec<Rule> {
    rule.map_or(Rule::ALL.to_vec(), |r| vec![r])
}

fn condition_csv(m: &LoadedModel, target: &str, given: &str, rule: Option<Rule>) -> Result<String> {
    let a = m.event(target)?;
    let b = m.event(given)?;
    let mut s = String::from("rule,lo,hi\n");
    for r in rules(rule) {
        let iv = condition(&m.capacity, a, b, r)?.interval;
        let _ = writeln!(s, "{},{},{}", r, fmt_g12(iv.lo), fmt_g12(iv.hi));
    }
    Ok(s)
}

fn parse_partition(m: &LoadedModel, text: &str) -> Result<(Partition, Vec<String>)> {
    let names: Vec<String> = text
        .split(';')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect();
    let blocks = names
        .iter()
        .map(|n| m.event(n))
        .collect::<Result<Vec<Event>>>()?;
    Ok((Partition::new(blocks)?, names))
}

fn detect_csv(
    m: &LoadedModel,
    target: &str,
    partition: &str,
    rule: Option<Rule>,
) -> Result<String> {
    let a = m.event(target)?;
    let (part, names) = parse_partition(m, partition)?;
    let mut s = String::from("rule,event,lo,hi,classification\n");
    for r in rules(rule) {
        let rep = detect(&m.capacity, a, &part, r)?;
        let cls = rep.classification.as_str();
        let _ = writeln!(
            s,
            "{r},{target},{},{},{cls}",
            fmt_g12(rep.prior.lo),
            fmt_g12(rep.prior.hi)
        );
        for (name, (_, iv)) in names.iter().zip(&rep.per_block) {
            let _ = writeln!(
                s,
                "{r},{target}|{name},{},{},{cls}",
                fmt_g12(iv.lo),
                fmt_g12(iv.hi)
            );
        }
    }
    Ok(s)
}

fn sweep_csv(steps: usize, eps_min: f64, eps_max: f64) -> Result<String> {
    let rows = casebook::election_sweep(steps, eps_min, eps_max, Exec::default())?;
    let mut s = String::from("epsilon,rule,lo,hi\n");
    for r in rows {
        let (lo, hi) = r.interval.map_or((f64::NAN, f64::NAN), |iv| (iv.lo, iv.hi));
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_g12(r.epsilon),
            r.rule,
            fmt_g12(lo),
            fmt_g12(hi)
        );
    }
    Ok(s)
}

fn curve_csv(steps: usize) -> Result<String> {
    let pts = casebook::prisoners_curve_points(steps, Exec::default())?;
    let mut s = String::from("delta_b,x,y\n");
    for p in pts {
        let _ = writeln!(
            s,
            "{},{},{}",
            fmt_g12(p.delta_b),
            fmt_g12(p.x),
            fmt_g12(p.y)
        );
    }
    Ok(s)
}

fn simpson_csv(inst: &SimpsonInstance) -> Result<String> {
    let r = detect_reversal(inst)?;
    let mut s = String::from("field,value\n");
    let mut row = |k: &str, v: String| {
        let _ = writeln!(s, "{k},{v}");
    };
    row("dominance_ok", r.dominance_ok.to_string());
    row("reversal", r.reversal.to_string());
    row("sure_loss", r.sure_loss.to_string());
    row("direction", r.direction.as_str().into());
    row("partial", r.partial.to_string());
    row("p_bar", fmt_g12(r.marginals.p_bar));
    row("q_bar", fmt_g12(r.marginals.q_bar));
    row("inf_qv", fmt_g12(r.marginals.inf_qv));
    row("sup_pv", fmt_g12(r.marginals.sup_pv));
    for (i, w) in r.witnesses.iter().enumerate() {
        row(&format!("witness_{i}"), w.to_string());
    }
    match sure_loss_equivalence(inst) {
        Some((lhs, rhs)) => {
            row("equivalence_lhs", lhs.to_string());
            row("equivalence_rhs", rhs.to_string());
        }
        None => row("equivalence", "not_applicable".into()),
    }
    Ok(s)
}

struct CaseQuery<'a> {
    case: &'a str,
    query: String,
    capacity: &'a Capacity,
    target: Event,
    given: Event,
    partition: Partition,
}

fn case_rows(s: &mut String, q: &CaseQuery) {
    for r in Rule::ALL {
        let (lo, hi) = match condition(q.capacity, q.target, q.given, r) {
            Ok(res) => (fmt_g12(res.interval.lo), fmt_g12(res.interval.hi)),
            Err(e) => (e.name().to_string(), e.name().to_string()),
        };
        let cls = match detect(q.capacity, q.target, &q.partition, r) {
            Ok(rep) => rep.classification.as_str().to_string(),
            Err(e) => e.name().to_string(),
        };
        let _ = writeln!(s, "{},{},{r},{lo},{hi},{cls}", q.case, q.query);
    }
}

fn casebook_csv() -> Result<String> {
    let mut s = String::from("case,query,rule,lo,hi,classification\n");

    let p = PrisonersModel::new(None)?;
    let pc = p.capacity();
    case_rows(
        &mut s,
        &CaseQuery {
            case: "prisoners",
            query: "A-lives|says-B".into(),
            capacity: &pc,
            target: p.a_lives(),
            given: p.says_b(),
            partition: p.partition(),
        },
    );

    let bm = casebook::boxer_model();
    let bc = belief_from_mass(&bm);
    let (x1, y1, same) = casebook::boxer_events(bm.frame())?;
    let bpart = Partition::binary(same)?;
    for (name, target) in [("X=1|X=Y", x1), ("Y=1|X=Y", y1)] {
        case_rows(
            &mut s,
            &CaseQuery {
                case: "boxer",
                query: name.into(),
                capacity: &bc,
                target,
                given: same,
                partition: bpart.clone(),
            },
        );
    }

    let e = ElectionModel::new(0.0)?;
    let ec = e.capacity();
    case_rows(
        &mut s,
        &CaseQuery {
            case: "election(eps=0)",
            query: "C|Dem".into(),
            capacity: &ec,
            target: e.clinton(),
            given: e.dem(),
            partition: e.partition(),
        },
    );
    for r in [Rule::Dempster, Rule::Geometric] {
        let x = casebook::election_switch_point(r, 1e-9)?;
        let _ = writeln!(
            s,
            "election,switch_point,{r},{},{},",
            fmt_g12(x),
            fmt_g12(x)
        );
    }

    let t = casebook::treatment_model();
    let (a, b) = casebook::treatment_events(&t);
    case_rows(
        &mut s,
        &CaseQuery {
            case: "treatment",
            query: "A|B".into(),
            capacity: &t,
            target: a,
            given: b,
            partition: Partition::binary(b)?,
        },
    );
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_formatting() {
        assert_eq!(fmt_g12(0.5), "0.5");
        assert_eq!(fmt_g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g12(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_g12(0.0), "0");
        assert_eq!(fmt_g12(-0.0), "0");
        assert_eq!(fmt_g12(1.0), "1");
        assert_eq!(fmt_g12(-0.025), "-0.025");
        assert_eq!(fmt_g12(-1.0 / 90.0), "-0.0111111111111");
        assert_eq!(fmt_g12(1e-7), "1e-07");
        assert_eq!(fmt_g12(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_g12(f64::NAN), "NaN");
    }

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["lowprob"]).0, 2);
        assert_eq!(run_str(&["lowprob", "frobnicate"]).0, 2);
        assert_eq!(run_str(&["lowprob", "casebook", "--bogus"]).0, 2);
        assert_eq!(
            run_str(&[
                "lowprob",
                "condition",
                "--model",
                "x",
                "--target",
                "a",
                "--given",
                "b",
                "--rule",
                "bayes"
            ])
            .0,
            2
        );
        let (code, out, _) = run_str(&["lowprob", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("sweep-election"));
    }

    #[test]
    fn missing_file_is_a_parse_error() {
        let (code, _, err) = run_str(&["lowprob", "simpson", "--file", "/nonexistent.json"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("ParseError"));
    }

    #[test]
    fn short_sweep() {
        let (code, out, _) = run_str(&["lowprob", "sweep-election", "--steps", "2"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "epsilon,rule,lo,hi");
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[6], "0.1,geometric,NaN,NaN");
    }
}
