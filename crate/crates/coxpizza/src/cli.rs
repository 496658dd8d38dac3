//! Command-line front end: build systems, run computations and verification
//! suites, and print text or JSON reports.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::complex::Arrangement;
use crate::conealg::Functional;
use crate::error::{Error, Result};
use crate::rootsys::group_bound_from_env;
use crate::twostruct::seed_two_structure;
use crate::verify::{self, all_parabolics, LambdaSpec, Options, Suite};
use crate::weighted::{parabolic_face, pizza, relative_weighted_sum, signed_two_structures};

#[derive(Parser, Debug)]
#[command(name = "coxpizza", version, about = "Exact computations on finite reflection arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Type string such as B3, I2(8) or A2xA1.
    #[arg(long = "type")]
    type_spec: String,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
    /// Largest group to enumerate (default from COXPIZZA_GROUP_BOUND, else 20000).
    #[arg(long)]
    group_bound: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, roots, group order and face counts.
    Describe(Common),
    /// Every 2-structure with its sign.
    TwoStructures(Common),
    /// ψ_{H/C}(B,λ) with C from a parabolic subset (default: the minimal face).
    WeightedSum {
        #[command(flatten)]
        common: Common,
        /// Coordinates "a,b,...", "random:k:seed", "on-ray:r" or "in-sector:r".
        #[arg(long)]
        lambda: String,
        /// Simple generator indices, 0-based, comma separated.
        #[arg(long)]
        parabolic: Option<String>,
    },
    /// Π(H), P(H) and P₀(H) in the open-face basis.
    Pizza(Common),
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated suites, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Functionals as for weighted-sum (default: random:25:42).
        #[arg(long)]
        lambda: Option<String>,
        /// "all", or subsets of 0-based generator indices separated by ';', e.g. "0,1;2".
        #[arg(long)]
        parabolic: Option<String>,
        /// Include per-suite timings in the report.
        #[arg(long)]
        timings: bool,
    },
}

/// "all" leaves out the type-A suite on systems it does not apply to.
fn parse_suites(s: &str, type_spec: &str) -> Result<Vec<Suite>> {
    if s == "all" {
        let type_a = verify::type_a_size(type_spec).is_ok();
        return Ok(Suite::ALL.into_iter().filter(|&x| x != Suite::TypeA || type_a).collect());
    }
    s.split(',').map(|x| x.trim().parse()).collect()
}

fn parse_subset(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::InvalidChoice(format!("generator index {x:?}"))))
        .collect()
}

fn parse_parabolics(s: &str, rank: usize) -> Result<Vec<Vec<usize>>> {
    let subsets =
        if s == "all" { all_parabolics(rank) } else { s.split(';').map(parse_subset).collect::<Result<_>>()? };
    for gens in &subsets {
        if let Some(&g) = gens.iter().find(|&&g| g >= rank) {
            return Err(Error::InvalidChoice(format!("generator {g} out of range for rank {rank}")));
        }
    }
    Ok(subsets)
}

enum Outcome {
    Pass,
    Fail,
}

/// Runs the command line and returns the process exit code: 0 when everything
/// requested passed, 1 when an identity failed, 2 on usage or input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn bound(c: &Common) -> usize {
    c.group_bound.unwrap_or_else(group_bound_from_env)
}

fn emit(
    out: &mut dyn Write,
    mode: Emit,
    value: &Value,
    text: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    let res = match mode {
        Emit::Json => writeln!(out, "{}", serde_json::to_string_pretty(value).expect("JSON values serialize")),
        Emit::Text => text(out),
    };
    res.map_err(|e| Error::InvalidChoice(format!("write failed: {e}")))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Describe(c) => {
            let arr = Arrangement::canonical(&c.type_spec, bound(&c))?;
            let mut v = verify::describe(&arr.rs, Some(&arr));
            v["seedTwoStructure"] = json!(seed_two_structure(&arr.rs)?.type_string());
            emit(out, c.emit, &v, |o| {
                writeln!(o, "type       {}", arr.rs.sys.name)?;
                writeln!(o, "rank       {}", arr.rs.rank())?;
                writeln!(o, "roots      {}", arr.rs.num_roots())?;
                writeln!(o, "group      {}", arr.group.len())?;
                writeln!(o, "faces      {}", arr.poset.len())?;
                writeln!(o, "chambers   {}", arr.poset.chambers().len())?;
                writeln!(o, "2-structs  {}", v["seedTwoStructure"].as_str().unwrap_or(""))
            })?;
            Ok(Outcome::Pass)
        }
        Command::TwoStructures(c) => {
            let arr = Arrangement::canonical(&c.type_spec, bound(&c))?;
            let signed = signed_two_structures(&arr.rs, &arr.group)?;
            let total: i64 = signed.iter().map(|(_, e)| i64::from(*e)).sum();
            let v = json!({
                "system": arr.rs.sys.name,
                "count": signed.len(),
                "sumOfSigns": total,
                "twoStructures": signed.iter().map(|(ts, e)| ts.to_json(Some(*e))).collect::<Vec<_>>(),
            });
            emit(out, c.emit, &v, |o| {
                for (ts, e) in &signed {
                    writeln!(o, "{:+} {} {:?}", e, ts.type_string(), ts.positives)?;
                }
                writeln!(o, "count {} sum of signs {}", signed.len(), total)
            })?;
            Ok(Outcome::Pass)
        }
        Command::WeightedSum { common: c, lambda, parabolic } => {
            let arr = Arrangement::canonical(&c.type_spec, bound(&c))?;
            let spec: LambdaSpec = lambda.parse()?;
            let gens = match &parabolic {
                Some(s) => parse_parabolics(s, arr.rs.rank())?.into_iter().next().unwrap_or_default(),
                None => Vec::new(),
            };
            let p = &arr.poset;
            let face = if parabolic.is_some() { parabolic_face(p, &arr.rs, &gens) } else { p.minimal() };
            let b = p.base_chamber();
            let mut rows = Vec::new();
            for l in verify::functionals(&arr, Some(&spec))? {
                let v = relative_weighted_sum(p, face, b, &Functional::new(l.clone()))?;
                rows.push((l, v));
            }
            let v = json!({
                "system": arr.rs.sys.name,
                "parabolic": gens,
                "values": rows.iter().map(|(l, v)| json!({ "lambda": verify::lambda_to_json(l), "value": v })).collect::<Vec<_>>(),
            });
            emit(out, c.emit, &v, |o| {
                for (l, v) in &rows {
                    let coords: Vec<String> = l.iter().map(|x| x.to_string()).collect();
                    if rows.len() == 1 {
                        writeln!(o, "{v}")?;
                    } else {
                        writeln!(o, "({}) {v}", coords.join(", "))?;
                    }
                }
                Ok(())
            })?;
            Ok(Outcome::Pass)
        }
        Command::Pizza(c) => {
            let arr = Arrangement::canonical(&c.type_spec, bound(&c))?;
            let pz = pizza(&arr.poset, arr.poset.base_chamber());
            let equal = pz.p == pz.p0;
            let v = json!({
                "system": arr.rs.sys.name,
                "faces": arr.poset.len(),
                "pi": pz.pi.to_json(),
                "p": pz.p.to_json(),
                "p0": pz.p0.to_json(),
                "pEqualsP0": equal,
            });
            emit(out, c.emit, &v, |o| {
                writeln!(o, "faces {}", arr.poset.len())?;
                writeln!(o, "pi  {}", pz.pi.to_json())?;
                writeln!(o, "p   {}", pz.p.to_json())?;
                writeln!(o, "p0  {}", pz.p0.to_json())?;
                writeln!(o, "p = p0: {equal}")
            })?;
            Ok(if equal { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Verify { common: c, suite, lambda, parabolic, timings } => {
            let suites = parse_suites(&suite, &c.type_spec)?;
            let mut opts = Options::new(bound(&c));
            opts.lambda = lambda.as_deref().map(str::parse).transpose()?;
            if let Some(s) = &parabolic {
                let rank = crate::rootsys::parse_type(&c.type_spec)?.rank();
                opts.parabolics = Some(parse_parabolics(s, rank)?);
            }
            let report = verify::run_suites(&c.type_spec, &suites, &opts)?;
            emit(out, c.emit, &report.to_json(timings), |o| {
                for s in &suites {
                    let mine: Vec<_> = report.checks.iter().filter(|ch| suite_of(&ch.name) == *s).collect();
                    let passed = mine.iter().filter(|ch| ch.pass).count();
                    writeln!(o, "{:<14} {}/{} passed", s.name(), passed, mine.len())?;
                }
                for f in report.failures() {
                    writeln!(
                        o,
                        "FAIL {} lhs={} rhs={} witness={}",
                        f.name,
                        f.lhs,
                        f.rhs,
                        f.witness.clone().unwrap_or(Value::Null)
                    )?;
                }
                if timings {
                    for (s, t) in &report.timings {
                        writeln!(o, "time {s} {t:.3}s")?;
                    }
                }
                Ok(())
            })?;
            Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

/// The suite that produces checks of a given name.
fn suite_of(check: &str) -> Suite {
    match check {
        "sum-of-signs" => Suite::SumOfSigns,
        "chamber-sign" => Suite::ChamberSigns,
        "pi-expansion" | "p-expansion" | "p-equals-p0" | "endomorphism" => Suite::MainTheorem,
        "second-main" => Suite::SecondMain,
        "gkm-herb" => Suite::GkmHerb,
        "type-a" | "type-a-arrangement" => Suite::TypeA,
        "coassociativity"
        | "counit"
        | "convolution-associativity"
        | "convolution-unit"
        | "groemer"
        | "psi-k-subdivision" => Suite::Coalgebra,
        "fiber-partition"
        | "linear-extension"
        | "condition-a"
        | "condition-a-by-rays"
        | "weak-order-ideal"
        | "strong-bruhat-ideal" => Suite::Shelling,
        _ => Suite::Tables,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("coxpizza").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sum_of_signs_on_b3() {
        let (code, out, _) = run_str(&["verify", "--type", "B3", "--suite", "sum-of-signs", "--emit", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["checks"][0]["lhs"], json!(1));
        assert_eq!(v["checks"][0]["pass"], json!(true));
        assert_eq!(v["timings"], json!({}));
    }

    #[test]
    fn fig_one_ray() {
        let (code, out, _) = run_str(&["weighted-sum", "--type", "I2(8)", "--lambda", "on-ray:6"]);
        assert_eq!((code, out.trim()), (0, "2"));
    }

    #[test]
    fn second_main_all_parabolics() {
        let (code, out, _) = run_str(&[
            "verify",
            "--type",
            "A3",
            "--suite",
            "second-main",
            "--parabolic",
            "all",
            "--lambda",
            "random:25:42",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("200/200"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["verify", "--type", "B3", "--suite", "bogus"]).0, 2);
        assert_eq!(run_str(&["verify", "--type", "Q9"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["weighted-sum", "--type", "A2", "--lambda", "1,2,3"]).0, 2);
    }

    #[test]
    fn all_suites_skip_type_a_outside_type_a() {
        assert_eq!(parse_suites("all", "B2").unwrap().len(), Suite::ALL.len() - 1);
        assert_eq!(parse_suites("all", "A2").unwrap().len(), Suite::ALL.len());
        let (code, out, _) = run_str(&["verify", "--type", "B2", "--lambda", "random:5:1"]);
        assert_eq!(code, 0, "{out}");
        assert!(!out.contains("type-a"));
    }

    #[test]
    fn json_is_deterministic() {
        let args =
            ["verify", "--type", "A2", "--suite", "gkm-herb,shelling", "--lambda", "random:5:7", "--emit", "json"];
        assert_eq!(run_str(&args).1, run_str(&args).1);
    }

    #[test]
    fn other_commands() {
        let (code, out, _) = run_str(&["describe", "--type", "B3"]);
        assert_eq!(code, 0);
        assert!(out.contains("group      48"));
        let (code, out, _) = run_str(&["two-structures", "--type", "A3", "--emit", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["sumOfSigns"], json!(1));
        assert_eq!(run_str(&["pizza", "--type", "A2"]).0, 0);
        let (code, out, _) = run_str(&["weighted-sum", "--type", "A3", "--lambda", "1,-1,2", "--parabolic", "0"]);
        assert_eq!(code, 0);
        assert!(out.trim().parse::<i64>().is_ok());
    }
}
