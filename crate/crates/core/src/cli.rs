//! The `patience` command line.
//!
//! Every subcommand prints one JSON document. Exit status: 0 when the
//! relation or property holds, 1 when it fails (the JSON carries the
//! witness), 2 on usage or input errors (a JSON error object on stderr).
//!
//! Sequence and family arguments take inline JSON, `@path` to read a file,
//! or `-` for stdin.

use std::ffi::OsString;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::deterioration::{decompose, ratio_trace};
use crate::dominance::{dominates, is_superior, tighten};
use crate::error::{Error, Result};
use crate::family::{DiscountFamily, Horizon};
use crate::oracle::{verify, Suite, TrialConfig};
use crate::patience::{
    compare_definitional, exponential_infinite_collapse, exponential_patience_threshold,
    gap_ratio_report, infinite_family_patience, is_more_patient, is_more_serene,
    monotone_ratio_check, patience_counterexample,
};
use crate::rational::Rational;
use crate::sequence::{weighted_sum, DiscountSequence, PrizeSequence, WeightSequence};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "patience",
    version,
    about = "Exact comparisons of discounters and prize sequences"
)]
struct Cli {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
}

#[derive(Args, Debug)]
struct DiscounterArgs {
    /// Sequence `{"T":..,"values":[..]}` or family `{"family":"exponential","a":".."}`.
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    /// Horizon for family inputs: a positive integer, or `inf` where allowed.
    #[arg(long)]
    horizon: Option<Horizon>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partial-sum dominance of x over y.
    Dominates(PairArgs),
    /// Superiority of x over y for every nonnegative decreasing weight sequence.
    Superior(PairArgs),
    /// Remove the excess of a dominating x.
    Tighten(PairArgs),
    /// Binary deteriorations leading from x to y; with alpha and beta, also the ratio trace.
    Chain {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, requires = "beta")]
        alpha: Option<String>,
        #[arg(long, requires = "alpha")]
        beta: Option<String>,
    },
    /// Weighted sum `--w --x`, or both patience ratios `--alpha --beta --x --y`.
    Eval {
        #[arg(long, conflicts_with_all = ["alpha", "beta", "y"], required_unless_present = "alpha")]
        w: Option<String>,
        #[arg(long)]
        x: String,
        #[arg(long, requires_all = ["beta", "y"])]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        horizon: Option<Horizon>,
    },
    /// Is alpha more serene than beta?
    Serene(DiscounterArgs),
    /// Is alpha more patient than beta?
    Patient(DiscounterArgs),
    /// A verified pair refuting patience of alpha over beta.
    Counterexample(DiscounterArgs),
    /// Exponential factor above which every discounter is more patient than `b`.
    Threshold {
        #[arg(long)]
        b: Rational,
        #[arg(long)]
        horizon: usize,
    },
    /// First index where exponential patience of `a` over `b` breaks at infinite horizon.
    Collapse {
        #[arg(long)]
        a: Rational,
        #[arg(long)]
        b: Rational,
        #[arg(long)]
        horizon: Option<Horizon>,
    },
    /// Seeded brute-force checks of the characterizations against their definitions.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        tmax: usize,
        #[arg(long, default_value_t = 6)]
        grid: u32,
        /// Definitional instances per discounter pair.
        #[arg(long, default_value_t = 10_000)]
        instances: usize,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the subcommand, reading `-`
/// arguments from `stdin`.
pub fn run_with_stdin<I, T>(argv: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        code: EXIT_HOLDS,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => error_outcome("usage", text.trim_end()),
            };
        }
    };
    let mut input = Input { stdin, used: false };
    let result = execute(cli.command, &mut input);
    match result {
        Ok((code, value)) => {
            let mut text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            text.push('\n');
            match cli.output {
                Some(path) => match std::fs::write(&path, &text) {
                    Ok(()) => Outcome {
                        code,
                        stdout: String::new(),
                        stderr: String::new(),
                    },
                    Err(e) => error_outcome("io", &format!("{path}: {e}")),
                },
                None => Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                },
            }
        }
        Err(e) => error_outcome(e.kind(), &e.to_string()),
    }
}

/// [`run_with_stdin`] on the process's stdin.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_stdin(argv, &mut std::io::stdin().lock())
}

fn error_outcome(kind: &str, message: &str) -> Outcome {
    let body = json!({ "error": { "kind": kind, "message": message } });
    Outcome {
        code: EXIT_ERROR,
        stdout: String::new(),
        stderr: format!("{body}\n"),
    }
}

struct Input<'a> {
    stdin: &'a mut dyn Read,
    used: bool,
}

impl Input<'_> {
    fn text(&mut self, arg: &str) -> Result<String> {
        if arg == "-" {
            if self.used {
                return Err(Error::InvalidInput(
                    "only one argument may read stdin".into(),
                ));
            }
            self.used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidInput(format!("reading stdin: {e}")))?;
            return Ok(s);
        }
        if let Some(path) = arg.strip_prefix('@') {
            return std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("{path}: {e}")));
        }
        Ok(arg.to_owned())
    }

    fn json(&mut self, arg: &str) -> Result<Value> {
        let text = self.text(arg)?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
    }

    fn parse<T: serde::de::DeserializeOwned>(&mut self, arg: &str) -> Result<T> {
        let value = self.json(arg)?;
        from_value(value)
    }

    /// A sequence, or a family realized at `horizon`.
    fn discounter(&mut self, arg: &str, horizon: Option<usize>) -> Result<DiscountSequence> {
        match self.family(arg)? {
            DiscountFamily::Explicit(seq) => match horizon {
                Some(h) if h != seq.horizon() => Err(Error::ExplicitHorizon {
                    stored: seq.horizon(),
                    requested: h,
                }),
                _ => Ok(seq),
            },
            family => match horizon {
                Some(h) => family.realize(h),
                None => Err(Error::Unsupported("family input needs --horizon".into())),
            },
        }
    }

    fn family(&mut self, arg: &str) -> Result<DiscountFamily> {
        let value = self.json(arg)?;
        if value.get("family").is_some() {
            from_value(value)
        } else {
            Ok(DiscountFamily::Explicit(from_value(value)?))
        }
    }
}

fn from_value<T: serde::de::DeserializeOwned>(value: Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn finite(horizon: Option<Horizon>) -> Result<Option<usize>> {
    match horizon {
        None => Ok(None),
        Some(Horizon::Finite(h)) => Ok(Some(h)),
        Some(Horizon::Infinite) => Err(Error::Unsupported(
            "--horizon inf is only accepted by `patient` on parametric families and by `collapse`"
                .into(),
        )),
    }
}

fn verdict_code(holds: bool) -> i32 {
    if holds {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn execute(command: Command, input: &mut Input<'_>) -> Result<(i32, Value)> {
    match command {
        Command::Dominates(p) => {
            let (x, y) = prizes(input, &p)?;
            let v = dominates(&x, &y)?;
            Ok((verdict_code(v.holds), to_json(&v)))
        }
        Command::Superior(p) => {
            let (x, y) = prizes(input, &p)?;
            let v = is_superior(&x, &y)?;
            Ok((verdict_code(v.holds), to_json(&v)))
        }
        Command::Tighten(p) => {
            let (x, y) = prizes(input, &p)?;
            let z = tighten(&x, &y)?;
            Ok((EXIT_HOLDS, json!({ "tightened": z })))
        }
        Command::Chain { pair, alpha, beta } => {
            let (x, y) = prizes(input, &pair)?;
            let chain = decompose(&x, &y)?;
            let mut out = json!({ "steps": &chain.steps, "sequences": chain.sequences()? });
            if let (Some(a), Some(b)) = (alpha, beta) {
                let h = Some(x.horizon());
                let (a, b) = (input.discounter(&a, h)?, input.discounter(&b, h)?);
                out["ratio_trace"] = to_json(&ratio_trace(&a, &b, &chain)?);
            }
            Ok((EXIT_HOLDS, out))
        }
        Command::Eval {
            w,
            x,
            alpha,
            beta,
            y,
            horizon,
        } => {
            let x: PrizeSequence = input.parse(&x)?;
            if let Some(w) = w {
                let w: WeightSequence = input.parse(&w)?;
                return Ok((EXIT_HOLDS, json!({ "value": weighted_sum(&w, &x)? })));
            }
            let (alpha, beta, y) = (
                alpha.expect("clap enforces"),
                beta.expect("clap enforces"),
                y.expect("clap enforces"),
            );
            let y: PrizeSequence = input.parse(&y)?;
            let h = finite(horizon)?.or(Some(x.horizon()));
            let (a, b) = (input.discounter(&alpha, h)?, input.discounter(&beta, h)?);
            let cmp = compare_definitional(&a, &b, &x, &y)?;
            let mut out = to_json(&cmp);
            out["gap"] = to_json(&cmp.gap());
            Ok((verdict_code(cmp.holds), out))
        }
        Command::Serene(d) => {
            let (a, b) = discounters(input, &d)?;
            let v = is_more_serene(&a, &b)?;
            Ok((verdict_code(v.holds), to_json(&v)))
        }
        Command::Patient(d) => {
            if d.horizon == Some(Horizon::Infinite) {
                let (fa, fb) = (input.family(&d.alpha)?, input.family(&d.beta)?);
                let v = infinite_family_patience(&fa, &fb)?;
                let mut out = to_json(&v);
                out["horizon"] = json!("inf");
                return Ok((verdict_code(v.holds), out));
            }
            let (a, b) = discounters(input, &d)?;
            let v = is_more_patient(&a, &b)?;
            let mut out = to_json(&v);
            out["monotone_ratio"] = json!(monotone_ratio_check(&a, &b)?);
            if a.horizon() >= 2 {
                out["gap_ratios"] = to_json(&gap_ratio_report(&a, &b)?);
            }
            Ok((verdict_code(v.holds), out))
        }
        Command::Counterexample(d) => {
            let (a, b) = discounters(input, &d)?;
            match patience_counterexample(&a, &b) {
                Ok(w) => {
                    let cmp = compare_definitional(&a, &b, &w.x, &w.y)?;
                    Ok((
                        EXIT_FAILS,
                        json!({
                            "holds": false,
                            "x": w.x,
                            "y": w.y,
                            "alpha_ratio": cmp.alpha_ratio,
                            "beta_ratio": cmp.beta_ratio,
                            "gap": cmp.gap(),
                        }),
                    ))
                }
                Err(Error::PatienceHolds) => Ok((EXIT_HOLDS, json!({ "holds": true }))),
                Err(e) => Err(e),
            }
        }
        Command::Threshold { b, horizon } => {
            let a_bar = exponential_patience_threshold(&b, horizon)?;
            Ok((EXIT_HOLDS, json!({ "b": b, "T": horizon, "a_bar": a_bar })))
        }
        Command::Collapse { a, b, horizon } => {
            if let Some(Horizon::Finite(h)) = horizon {
                return Err(Error::Unsupported(format!(
                    "collapse is an infinite-horizon statement; got --horizon {h}"
                )));
            }
            let t = exponential_infinite_collapse(&a, &b)?;
            Ok((
                verdict_code(t.is_none()),
                json!({ "a": a, "b": b, "holds": t.is_none(), "t": t }),
            ))
        }
        Command::Verify {
            suite,
            seed,
            trials,
            tmax,
            grid,
            instances,
        } => {
            if trials == 0 || tmax == 0 || grid == 0 {
                return Err(Error::InvalidInput(
                    "--trials, --tmax and --grid must be positive".into(),
                ));
            }
            let config = TrialConfig::new(seed, trials, tmax, grid);
            let report = verify(suite, &config, instances)?;
            Ok((verdict_code(report.passed), to_json(&report)))
        }
    }
}

fn prizes(input: &mut Input<'_>, p: &PairArgs) -> Result<(PrizeSequence, PrizeSequence)> {
    Ok((input.parse(&p.x)?, input.parse(&p.y)?))
}

fn discounters(
    input: &mut Input<'_>,
    d: &DiscounterArgs,
) -> Result<(DiscountSequence, DiscountSequence)> {
    let h = finite(d.horizon)?;
    Ok((
        input.discounter(&d.alpha, h)?,
        input.discounter(&d.beta, h)?,
    ))
}
