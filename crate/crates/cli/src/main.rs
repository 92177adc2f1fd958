//! `relcomp`: command-line front end. Exit status 0 means every verdict
//! passed, 1 means some verdict failed, 2 means the invocation was unusable.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint as Nat;
use serde::Deserialize;
use serde_json::{json, Value};

use relcomp::machine::{assemble, eval_fuel, StepObservation};
use relcomp::oracle::Oracle;
use relcomp::oracle_spec::{parse_nat, parse_oracle};
use relcomp::permred::{reduction_from_iso, IsoData};
use relcomp::reducibility::{
    nat_json, range, refute_jump_reduction, verify_turing, verify_wtt, wtt_separation_demo, wtt_to_turing,
    JumpRefutation, PairOutput, TuringReduction, WttReduction,
};
use relcomp::relmachine::{eval_oracle, use_and_verify, Budget, UseError, UseVerdict};

/// Largest accepted machine input.
const INPUT_CAP: u64 = i64::MAX as u64;

#[derive(Parser)]
#[command(name = "relcomp", version, about = "Oracle computations and executable reducibility certificates")]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Config {
    /// Step budget per evaluation.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    fuel: u64,
    /// Query budget per evaluation; defaults to the fuel.
    #[arg(long, global = true)]
    max_queries: Option<u64>,
    /// Verify on the points 0..N.
    #[arg(long, global = true)]
    points: Option<u64>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a program (assembly file or decimal code) on an input.
    Run { prog: String, n: String },
    /// Run an oracle code; prints value, witness and use.
    OracleRun {
        code: String,
        #[arg(long)]
        oracle: String,
    },
    /// Check that agreement on the use list forces the same result.
    Use {
        code: String,
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        alt: String,
    },
    /// Verify a reduction certificate pointwise.
    Verify {
        #[arg(long)]
        reduction: String,
        #[arg(long)]
        src: String,
        #[arg(long)]
        tgt: String,
    },
    /// Compile a wtt certificate into a Turing certificate.
    CompileWtt { file: String },
    /// Refute a claimed reduction of the jump of an oracle to the oracle.
    JumpDemo {
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        candidate: String,
    },
    /// Diagonalise against a wtt pair and verify the Turing reduction of ζ to κ.
    WttSep {
        #[arg(long)]
        e0: String,
        #[arg(long)]
        e1: String,
    },
    /// Extract and verify a reduction from generator images.
    PermDemo {
        #[arg(long)]
        src: String,
        #[arg(long)]
        tgt: String,
        /// identity, shift-renaming or corrupted.
        #[arg(long)]
        iso: String,
    },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Certificate {
    Turing { reducer: String },
    Wtt { bound: String, evaluator: String },
}

/// Unusable invocation: exit 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Outcome = Result<bool, Usage>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("relcomp: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let c = &cli.cfg;
    if c.fuel == 0 || c.max_queries == Some(0) {
        return Err(Usage("fuel and query budgets must be at least 1".into()));
    }
    if c.points == Some(0) {
        return Err(Usage("--points must be at least 1".into()));
    }
    match &cli.cmd {
        Cmd::Run { prog, n } => run(c, prog, n),
        Cmd::OracleRun { code, oracle } => oracle_run(c, code, oracle),
        Cmd::Use { code, oracle, alt } => use_cmd(c, code, oracle, alt),
        Cmd::Verify { reduction, src, tgt } => verify(c, reduction, src, tgt),
        Cmd::CompileWtt { file } => compile_wtt(file),
        Cmd::JumpDemo { oracle, candidate } => jump_demo(c, oracle, candidate),
        Cmd::WttSep { e0, e1 } => wtt_sep(c, e0, e1),
        Cmd::PermDemo { src, tgt, iso } => perm_demo(c, src, tgt, iso),
    }
}

impl Config {
    fn budget(&self) -> Budget {
        Budget { fuel: self.fuel, max_queries: self.max_queries.unwrap_or(self.fuel) }
    }

    fn points(&self, default: u64) -> Vec<Nat> {
        range(self.points.unwrap_or(default))
    }
}

/// A decimal code, or a path to an assembly file.
fn load_program(arg: &str) -> Result<Nat, Usage> {
    if let Ok(code) = arg.parse::<Nat>() {
        return Ok(code);
    }
    let text = std::fs::read_to_string(Path::new(arg)).map_err(|e| Usage(format!("{arg}: {e}")))?;
    Ok(assemble(&text).map_err(|e| Usage(format!("{arg}: {e}")))?.code())
}

fn load_certificate(path: &str) -> Result<Certificate, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Usage(format!("{path}: {e}")))
}

fn code(s: &str) -> Result<Nat, Usage> {
    Ok(parse_nat(s)?)
}

fn oracle(spec: &str) -> Result<Oracle, Usage> {
    Ok(parse_oracle(spec)?)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialise"));
}

fn nats(v: &[Nat]) -> Value {
    Value::Array(v.iter().map(nat_json).collect())
}

fn run(c: &Config, prog: &str, n: &str) -> Outcome {
    let p = load_program(prog)?;
    let x: u64 = n.parse().map_err(|_| Usage(format!("input `{n}` is not a natural below 2^63")))?;
    if x > INPUT_CAP {
        return Err(Usage(format!("input {x} exceeds 2^63 - 1")));
    }
    match eval_fuel(&p, &Nat::from(x), c.fuel) {
        StepObservation::Halted { value, steps } => {
            if c.json {
                print_json(&json!({"halted": true, "value": nat_json(&value), "steps": steps}));
            } else {
                println!("{value}");
            }
            Ok(true)
        }
        StepObservation::OutOfFuel { .. } => {
            if c.json {
                print_json(&json!({"halted": false, "fuel": c.fuel}));
            } else {
                println!("no halt within {} steps", c.fuel);
            }
            Ok(false)
        }
    }
}

fn oracle_run(c: &Config, e: &str, spec: &str) -> Outcome {
    let e = load_program(e)?;
    let r = eval_oracle(&e, &oracle(spec)?, c.budget())?;
    let witness: Vec<Nat> = r.witness.0.iter().map(|&k| Nat::from(k)).collect();
    let used = r.use_list();
    if c.json {
        print_json(&json!({
            "value": r.value().map_or(Value::Null, nat_json),
            "witness": nats(&witness),
            "use": nats(&used),
            "queries": r.transcript.len(),
        }));
    } else {
        match r.value() {
            Some(v) => println!("value {v}"),
            None => println!("value diverged"),
        }
        println!("witness {}", nats(&witness));
        println!("use {}", nats(&used));
    }
    Ok(r.observation.is_converged())
}

fn use_cmd(c: &Config, e: &str, spec: &str, alt: &str) -> Outcome {
    let e = load_program(e)?;
    let report = match use_and_verify(&e, &oracle(spec)?, &oracle(alt)?, c.budget()) {
        Ok(r) => r,
        Err(UseError::BaseDiverged) => {
            println!("{}", json!({"verdict": "base_diverged"}));
            return Ok(false);
        }
        Err(UseError::Oracle(err)) => return Err(err.into()),
    };
    let out = json!({
        "verdict": report.verdict,
        "use": nats(&report.use_list),
        "value": nat_json(&report.base.value),
        "alt_value": report.alt.value().map_or(Value::Null, nat_json),
    });
    if c.json {
        print_json(&out);
    } else {
        println!("{}", out);
    }
    Ok(report.verdict != UseVerdict::Violation)
}

fn verify(c: &Config, path: &str, src: &str, tgt: &str) -> Outcome {
    let (src, tgt) = (oracle(src)?, oracle(tgt)?);
    let points = c.points(50);
    let report = match load_certificate(path)? {
        Certificate::Turing { reducer } => {
            let red = TuringReduction { reducer: code(&reducer)?, source: src.name().into(), target: tgt.name().into() };
            verify_turing(&red, &src, &tgt, &points, c.fuel)
        }
        Certificate::Wtt { bound, evaluator } => {
            let red = WttReduction { bound: code(&bound)?, evaluator: code(&evaluator)? };
            verify_wtt(&red, &src, &tgt, &points, c.fuel)
        }
    };
    print_json(&report.to_json());
    Ok(report.all_pass())
}

fn compile_wtt(path: &str) -> Outcome {
    let Certificate::Wtt { bound, evaluator } = load_certificate(path)? else {
        return Err(Usage(format!("{path}: not a wtt certificate")));
    };
    let red = wtt_to_turing(&WttReduction { bound: code(&bound)?, evaluator: code(&evaluator)? });
    print_json(&json!({"kind": "turing", "reducer": red.reducer.to_string()}));
    Ok(true)
}

fn jump_demo(c: &Config, spec: &str, candidate: &str) -> Outcome {
    let chi = oracle(spec)?;
    let reducer = match load_certificate(candidate) {
        Ok(Certificate::Turing { reducer }) => code(&reducer)?,
        Ok(Certificate::Wtt { .. }) => wtt_to_turing(&wtt_from(candidate)?).reducer,
        Err(_) => load_program(candidate)?,
    };
    let red = TuringReduction { reducer, source: format!("jump:{}", chi.name()), target: chi.name().into() };
    let out = match refute_jump_reduction(&red, &chi, c.fuel)? {
        JumpRefutation::Mismatch { index, claimed, jump_value } => json!({
            "refutation": "mismatch",
            "index": nat_json(&index),
            "claimed": nat_json(&claimed),
            "jump_value": nat_json(&jump_value),
            "refuted": claimed != jump_value,
        }),
        JumpRefutation::Divergence { index, stage, fuel } => json!({
            "refutation": "divergence",
            "index": nat_json(&index),
            "stage": stage,
            "fuel": fuel,
            "refuted": true,
        }),
    };
    print_json(&out);
    Ok(out["refuted"] == json!(true))
}

fn wtt_from(path: &str) -> Result<WttReduction, Usage> {
    match load_certificate(path)? {
        Certificate::Wtt { bound, evaluator } => Ok(WttReduction { bound: code(&bound)?, evaluator: code(&evaluator)? }),
        Certificate::Turing { .. } => Err(Usage(format!("{path}: not a wtt certificate"))),
    }
}

fn wtt_sep(c: &Config, e0: &str, e1: &str) -> Outcome {
    let (e0, e1) = (load_program(e0)?, load_program(e1)?);
    let r = wtt_separation_demo(&e0, &e1, c.fuel, &c.points(30))?;
    let pair_output = match &r.pair_output {
        PairOutput::Value(v) => json!({"kind": "value", "value": nat_json(v)}),
        PairOutput::BoundDiverges => json!({"kind": "bound_diverges"}),
        PairOutput::EvaluatorDiverges => json!({"kind": "evaluator_diverges"}),
    };
    print_json(&json!({
        "reducer": r.reduction.reducer.to_string(),
        "verification": r.verification.to_json(),
        "diagonal_point": nat_json(&r.diagonal_point),
        "zeta_at_diagonal": nat_json(&r.zeta_at_diagonal),
        "pair_output": pair_output,
        "refuted": r.refuted,
    }));
    Ok(r.verification.all_pass() && r.refuted)
}

fn perm_demo(c: &Config, src: &str, tgt: &str, preset: &str) -> Outcome {
    let (src, tgt) = (oracle(src)?, oracle(tgt)?);
    let iso = IsoData::preset(preset, tgt.name())
        .ok_or_else(|| Usage(format!("unknown iso preset `{preset}` (identity, shift-renaming, corrupted)")))?;
    let red = match reduction_from_iso(&iso, &tgt, c.fuel) {
        Ok(r) => TuringReduction { source: src.name().into(), ..r },
        Err(e) => {
            print_json(&json!({"error": e.to_string()}));
            return Ok(false);
        }
    };
    let report = verify_turing(&red, &src, &tgt, &c.points(30), c.fuel);
    print_json(&report.to_json());
    Ok(report.all_pass())
}
