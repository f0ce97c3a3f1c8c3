//! Command-line front end. Exit codes: 0 success or all checks pass, 1 a
//! verification check failed, 2 usage or input error.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::autos::{self, AutomorphismSpec};
use crate::boxing::{bdim, runs};
use crate::error::Error;
use crate::monoid::{factorizations, ZeroSet};
use crate::proofsteps::{self, first_divergence, CaseTag};
use crate::report::Report;
use crate::search::{self, WindowMap, WindowUniverse};
use crate::setcore::{kfold, sumset, FinSet};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: u64 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(
    name = "pfin",
    version,
    about = "Exact computation in the finitary power monoid of the integers"
)]
pub struct CliConfig {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub output: OutputFormat,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Sample count for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// X + Y
    Sum {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// k-fold sum kX
    Kfold {
        #[arg(allow_hyphen_values = true)]
        x: String,
        k: u64,
    },
    /// Boxing dimension
    Bdim {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Maximal runs as [lo,hi] pairs
    Runs {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Nontrivial factorizations in the reduced monoid
    Factor {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Apply identity | negation | sigma0 | reversal(<spec>)
    Apply {
        auto: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Exhaustive automorphism search on the window [[-m, m]]
    SearchAutos {
        #[arg(long)]
        window: u32,
        #[arg(long, value_enum, default_value = "on")]
        prune: Toggle,
        /// Also run the unpruned oracle and compare.
        #[arg(long)]
        oracle: bool,
        /// Maximum number of maps listed in the output.
        #[arg(long, default_value_t = 100)]
        max_maps: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    Lemma21,
    Lemma22 {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
    Lemma23,
    /// Single induction-step witness for a pair (A, B)
    Theorem {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        case: u8,
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<i64>,
    },
}

enum Outcome {
    Done(Value, String),
    Checked(Value, String, bool),
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T, O, E>(argv: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    O: Write,
    E: Write,
{
    let cfg = match CliConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cfg) {
        Ok(outcome) => {
            let (value, plain, pass) = match outcome {
                Outcome::Done(v, p) => (v, p, true),
                Outcome::Checked(v, p, pass) => (v, p, pass),
            };
            let text = match cfg.output {
                OutputFormat::Json => serde_json::to_string(&value).expect("serializable"),
                OutputFormat::Plain => plain,
            };
            let _ = writeln!(out, "{text}");
            if pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn parse_set(s: &str) -> Result<FinSet, Error> {
    s.parse()
}

fn parse_zero_set(s: &str) -> Result<ZeroSet, Error> {
    ZeroSet::new(parse_set(s)?)
}

fn report_outcome(report: Report) -> Outcome {
    let plain = report
        .checks
        .iter()
        .map(|c| format!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name))
        .collect::<Vec<_>>()
        .join("\n");
    let pass = report.all_pass();
    Outcome::Checked(
        serde_json::to_value(&report).expect("serializable"),
        plain,
        pass,
    )
}

fn execute(cfg: &CliConfig) -> Result<Outcome, Error> {
    let samples = cfg.samples as usize;
    match &cfg.command {
        Command::Sum { x, y } => {
            let s = sumset(&parse_set(x)?, &parse_set(y)?)?;
            Ok(Outcome::Done(json!(s.to_string()), s.to_string()))
        }
        Command::Kfold { x, k } => {
            let s = kfold(&parse_set(x)?, *k)?;
            Ok(Outcome::Done(json!(s.to_string()), s.to_string()))
        }
        Command::Bdim { x } => {
            let d = bdim(&parse_set(x)?);
            Ok(Outcome::Done(json!(d), d.to_string()))
        }
        Command::Runs { x } => {
            let p = runs(&parse_set(x)?);
            let plain = p
                .runs
                .iter()
                .map(|(lo, hi)| format!("{lo}..{hi}"))
                .collect::<Vec<_>>()
                .join(" ");
            Ok(Outcome::Done(
                serde_json::to_value(&p).expect("serializable"),
                plain,
            ))
        }
        Command::Factor { x } => {
            let z = parse_zero_set(x)?;
            let fs = factorizations(&z)?;
            let atom = !z.is_identity() && fs.is_empty();
            let pairs: Vec<[String; 2]> = fs.iter().map(|f| f.pair()).collect();
            let mut plain = format!("{z} atom={atom}");
            for [l, r] in &pairs {
                plain.push_str(&format!("\n{l} + {r}"));
            }
            Ok(Outcome::Done(
                json!({"set": z.to_string(), "atom": atom, "factorizations": pairs}),
                plain,
            ))
        }
        Command::Apply { auto, x } => {
            let spec: AutomorphismSpec = auto.parse()?;
            let img = spec.apply(&parse_zero_set(x)?)?;
            Ok(Outcome::Done(json!(img.to_string()), img.to_string()))
        }
        Command::Verify { what } => match what {
            VerifyCommand::Lemma21 => Ok(report_outcome(autos::lemma21_suite(cfg.seed, samples)?)),
            VerifyCommand::Lemma22 { bound } => Ok(report_outcome(autos::lemma22_suite(*bound))),
            VerifyCommand::Lemma23 => Ok(report_outcome(autos::lemma23_suite(cfg.seed, samples)?)),
            VerifyCommand::Theorem { case, a, b, c } => {
                verify_theorem(*case, &parse_zero_set(a)?, &parse_zero_set(b)?, *c)
            }
        },
        Command::SearchAutos {
            window,
            prune,
            oracle,
            max_maps,
        } => search_autos(*window, *prune, *oracle, *max_maps),
    }
}

fn verify_theorem(case: u8, a: &ZeroSet, b: &ZeroSet, c: Option<i64>) -> Result<Outcome, Error> {
    let div = first_divergence(a, b)?
        .ok_or_else(|| Error::Divergence("A = B, there is no divergence to witness".into()))?;
    let expected = if case == 1 {
        CaseTag::CaseI
    } else {
        CaseTag::CaseII
    };
    if div.case != expected {
        return Err(Error::Divergence(format!(
            "first divergence at index {} is {:?}, not case {case}",
            div.v, div.case
        )));
    }
    // Case I wants a_v < b_v, case II a_v > b_v; otherwise argue with the
    // inverse map, i.e. swap the roles of A and B.
    let (ea, eb) = (runs(a).endpoints(), runs(b).endpoints());
    let swapped = match div.case {
        CaseTag::CaseI => ea[div.v] > eb[div.v],
        _ => ea[div.v] < eb[div.v],
    };
    let (first, second) = if swapped { (b, a) } else { (a, b) };
    let w = if case == 1 {
        proofsteps::case1_witness(first, second)?
    } else {
        proofsteps::case2_witness(first, second, c)?
    };
    let pass = w.pass();
    let plain = format!(
        "case {case}{}: helper {} ; witness {} in A+helper = {}, not in B+helper = {} : {}",
        if swapped { " (A and B swapped)" } else { "" },
        w.helper_set,
        w.witness_point,
        w.lhs,
        w.rhs,
        if pass { "PASS" } else { "FAIL" }
    );
    let value = json!({
        "case": case,
        "swapped": swapped,
        "A": first.to_string(),
        "B": second.to_string(),
        "v": w.v,
        "helper_set": w.helper_set.to_string(),
        "lhs": w.lhs.to_string(),
        "rhs": w.rhs.to_string(),
        "witness_point": w.witness_point,
        "params": w.params,
        "checks": w.checks,
        "pass": pass,
    });
    Ok(Outcome::Checked(value, plain, pass))
}

fn map_json(u: &WindowUniverse, w: &WindowMap) -> Value {
    let name = if w.is_identity() {
        Value::from("identity")
    } else if *w == WindowMap::negation(u) {
        Value::from("negation")
    } else {
        Value::Null
    };
    let moved: Vec<[String; 2]> = w
        .moved(u)
        .into_iter()
        .map(|(x, y)| [x.to_string(), y.to_string()])
        .collect();
    json!({"name": name, "moved": moved})
}

fn search_autos(m: u32, prune: Toggle, oracle: bool, max_maps: usize) -> Result<Outcome, Error> {
    let u = search::build_window(m)?;
    let mut value = serde_json::Map::new();
    value.insert("m".into(), json!(m));
    let mut pass = true;
    let listed: Vec<WindowMap>;
    let survivors: Value;
    match prune {
        Toggle::On => {
            let s = search::search_window(&u);
            let summary = s.summary();
            survivors = serde_json::to_value(&summary).expect("serializable")["survivors"].clone();
            value.insert("survivors".into(), survivors.clone());
            value.insert("core_maps".into(), json!(summary.core_maps));
            value.insert(
                "free_elements".into(),
                json!(s
                    .free
                    .iter()
                    .map(|&i| u.elements[i].to_string())
                    .collect::<Vec<_>>()),
            );
            listed = s.core_maps.clone();
            if oracle {
                let reference = search::oracle_window_automorphisms(&u)?;
                let agrees = s.expand()? == reference;
                pass &= agrees;
                value.insert(
                    "oracle".into(),
                    json!({"survivors": reference.len(), "agrees": agrees}),
                );
            }
        }
        Toggle::Off => {
            let all = search::oracle_window_automorphisms(&u)?;
            survivors = json!(all.len());
            value.insert("survivors".into(), survivors.clone());
            listed = all;
        }
    }
    let truncated = listed.len() > max_maps;
    value.insert(
        "maps".into(),
        Value::Array(
            listed
                .iter()
                .take(max_maps)
                .map(|w| map_json(&u, w))
                .collect(),
        ),
    );
    value.insert("maps_truncated".into(), json!(truncated));
    let plain = format!("m={m} survivors={survivors}");
    Ok(Outcome::Checked(Value::Object(value), plain, pass))
}
