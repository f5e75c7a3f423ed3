use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use projquot::cone::{canonicalize, project_semigroup, project_semigroup_general, CanonicalMode};
use projquot::intmat::IntMatrix;
use projquot::io::{matrix_json, parse_int_list, parse_matrix, parse_presentation, semigroup_json, strings};
use projquot::quotient::{construct_quotient, sum_quotients, verify_trace, ConstructConfig, ConstructionTrace};
use projquot::rank::{
    brute_force_quotient_search, necessary_condition_scan, primitive_fraction, primitive_limit,
    random_full_rank_fraction,
};
use projquot::semigroup::NumericalSemigroup;
use projquot::{Error, Result};

/// Numerical semigroups as quotients and as projections of cones.
#[derive(Parser)]
#[command(name = "projquot", version)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Total candidate matrices sampled by quotient construction.
    #[arg(long, global = true, default_value_t = 20_000)]
    budget: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize <gens>.
    Semigroup {
        #[arg(long)]
        gens: String,
        /// Integers to test for membership.
        #[arg(long)]
        contains: Option<String>,
    },
    /// Summarize <gens>/d.
    Quotient {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        d: String,
    },
    /// Write the sum of two quotients as a single quotient.
    Sum {
        /// First summand, e.g. `23,25/2`.
        #[arg(long)]
        left: String,
        /// Second summand.
        #[arg(long)]
        right: String,
        /// Where to write the construction trace, if one is produced.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// First coordinates (or `pi`) of the integer points of a cone.
    Project {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Linear map as an integer row vector; defaults to the first coordinate.
        #[arg(long)]
        pi: Option<String>,
    },
    /// Rewrite (M, pi) as d times a first-coordinate projection.
    Canonicalize {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        pi: String,
        /// `dimension` or `ray`.
        #[arg(long, default_value = "dimension")]
        mode: String,
    },
    /// Find a quotient presentation of s(M) for a square M.
    ConstructQuotient {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Replay a construction trace.
    VerifyTrace {
        #[arg(long)]
        trace: PathBuf,
    },
    /// Subset-sum obstruction to a smaller quotient rank.
    Scan {
        #[arg(long)]
        gens: String,
    },
    /// Exhaustive search for a k-quotient presentation.
    SearchQuotient {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        dmax: u64,
        /// Largest numerator; defaults to dmax times the conductor.
        #[arg(long)]
        amax: Option<u64>,
    },
    /// Monte-Carlo frequency experiments.
    Experiment {
        #[command(subcommand)]
        kind: Experiment,
    },
}

#[derive(Subcommand)]
enum Experiment {
    /// Fraction of random generator tuples certified full rank.
    FullRank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Fraction of random k x (k-1) matrices with primitive columns.
    Primitive {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
}

#[derive(Args)]
struct MatrixArg {
    /// Matrix as inline JSON rows, or a path to a JSON file.
    #[arg(long)]
    matrix: String,
}

impl MatrixArg {
    fn load(&self) -> Result<IntMatrix> {
        let path = Path::new(&self.matrix);
        if !self.matrix.trim_start().starts_with(['[', '{']) && path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            parse_matrix(&text)
        } else {
            parse_matrix(&self.matrix)
        }
    }
}

fn to_u64s(v: &[BigInt]) -> Result<Vec<u64>> {
    v.iter().map(|x| u64::try_from(x).map_err(|_| Error::NonPositiveGenerator(x.to_string()))).collect()
}

fn parse_bigint(text: &str) -> Result<BigInt> {
    text.trim().parse().map_err(|_| Error::Parse(format!("invalid integer {text:?}")))
}

fn write_trace(path: &Path, value: &ConstructionTrace) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))
}

fn trace_summary(t: &ConstructionTrace) -> Value {
    json!({
        "stable_r": t.stable_r.to_string(),
        "scale_q": t.scale_q.to_string(),
        "attempts": t.attempts.to_string(),
        "b": matrix_json(&t.b),
    })
}

/// Runs one command and returns `(inputs, outputs)`.
fn execute(cli: &Cli) -> Result<(Value, Value)> {
    let cfg = ConstructConfig { seed: cli.seed, budget: cli.budget, ..ConstructConfig::default() };
    Ok(match &cli.command {
        Command::Semigroup { gens, contains } => {
            let s = NumericalSemigroup::from_generators(&parse_int_list(gens)?)?;
            let mut out = semigroup_json(&s);
            if let Some(list) = contains {
                let ts = parse_int_list(list)?;
                out["contains"] = ts.iter().map(|t| (t.to_string(), json!(s.contains(t)))).collect();
            }
            (json!({ "gens": gens, "contains": contains }), out)
        }
        Command::Quotient { gens, d } => {
            let s = NumericalSemigroup::from_generators(&parse_int_list(gens)?)?;
            let q = s.quotient(&parse_bigint(d)?)?;
            (json!({ "gens": gens, "d": d }), semigroup_json(&q))
        }
        Command::Sum { left, right, trace } => {
            let (p1, p2) = (parse_presentation(left)?, parse_presentation(right)?);
            let (p, t) = sum_quotients(&p1, &p2, &cfg)?;
            if let (Some(path), Some(t)) = (trace, &t) {
                write_trace(path, t)?;
            }
            let out = json!({
                "presentation": p,
                "semigroup": semigroup_json(&p.realize()?),
                "construction": t.as_ref().map(trace_summary),
            });
            (json!({ "left": p1, "right": p2 }), out)
        }
        Command::Project { matrix, pi } => {
            let m = matrix.load()?;
            let s = match pi {
                Some(pi) => project_semigroup_general(&m, &parse_int_list(pi)?)?,
                None => project_semigroup(&m)?,
            };
            (json!({ "matrix": matrix_json(&m), "pi": pi }), semigroup_json(&s))
        }
        Command::Canonicalize { matrix, pi, mode } => {
            let m = matrix.load()?;
            let pi_v = parse_int_list(pi)?;
            let c = canonicalize(&m, &pi_v, mode.parse::<CanonicalMode>()?)?;
            let s = project_semigroup(&c.matrix)?.scaled(&c.d)?;
            let out = json!({
                "matrix": matrix_json(&c.matrix),
                "d": c.d.to_string(),
                "mode": c.mode.to_string(),
                "semigroup": semigroup_json(&s),
            });
            (json!({ "matrix": matrix_json(&m), "pi": strings(&pi_v), "mode": mode }), out)
        }
        Command::ConstructQuotient { matrix, trace } => {
            let m = matrix.load()?;
            let (p, t) = construct_quotient(&m, &cfg)?;
            if let Some(path) = trace {
                write_trace(path, &t)?;
            }
            let out = json!({
                "presentation": p,
                "semigroup": semigroup_json(&p.realize()?),
                "construction": trace_summary(&t),
            });
            (json!({ "matrix": matrix_json(&m), "budget": cli.budget.to_string() }), out)
        }
        Command::VerifyTrace { trace } => {
            let text = std::fs::read_to_string(trace).map_err(|e| Error::Parse(format!("{}: {e}", trace.display())))?;
            let t: ConstructionTrace =
                serde_json::from_str(&text).map_err(|e| Error::TraceRejected { code: "malformed-trace", detail: e.to_string() })?;
            let s = verify_trace(&t)?;
            let out = json!({ "verified": true, "presentation": t.result, "semigroup": semigroup_json(&s) });
            (json!({ "trace": trace }), out)
        }
        Command::Scan { gens } => {
            let cert = necessary_condition_scan(&to_u64s(&parse_int_list(gens)?)?);
            let dec = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>();
            let out = json!({
                "generators": dec(&cert.generators),
                "verdict": cert.verdict,
                "witness_subset": cert.witness_subset.as_ref().map(|w| w.iter().map(usize::to_string).collect::<Vec<_>>()),
                "witness_membership": cert.witness_membership.as_deref().map(dec),
            });
            (json!({ "gens": gens }), out)
        }
        Command::SearchQuotient { gens, k, dmax, amax } => {
            let s = NumericalSemigroup::from_generators(&parse_int_list(gens)?)?;
            let amax = match amax {
                Some(a) => *a,
                None => u64::try_from(s.conductor()).map_err(|_| Error::TableTooLarge { limit: u64::MAX })?.max(1) * dmax,
            };
            let found = brute_force_quotient_search(&s, *k, *dmax, amax)?;
            let inputs = json!({ "gens": gens, "k": k.to_string(), "dmax": dmax.to_string(), "amax": amax.to_string() });
            (inputs, json!({ "found": found }))
        }
        Command::Experiment { kind } => match kind {
            Experiment::FullRank { n, q, trials } => {
                let f = random_full_rank_fraction(*n, *q, *trials, cli.seed)?;
                let inputs = json!({ "experiment": "full-rank", "n": n.to_string(), "q": q.to_string(), "trials": trials.to_string() });
                (inputs, json!({ "hits": f.hits.to_string(), "trials": f.trials.to_string(), "fraction": f.value() }))
            }
            Experiment::Primitive { k, q, trials } => {
                let f = primitive_fraction(*k, *q, *trials, cli.seed)?;
                let inputs = json!({ "experiment": "primitive", "k": k.to_string(), "q": q.to_string(), "trials": trials.to_string() });
                let out = json!({
                    "hits": f.hits.to_string(),
                    "trials": f.trials.to_string(),
                    "fraction": f.value(),
                    "limit": primitive_limit(*k),
                });
                (inputs, out)
            }
        },
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Semigroup { .. } => "semigroup",
        Command::Quotient { .. } => "quotient",
        Command::Sum { .. } => "sum",
        Command::Project { .. } => "project",
        Command::Canonicalize { .. } => "canonicalize",
        Command::ConstructQuotient { .. } => "construct-quotient",
        Command::VerifyTrace { .. } => "verify-trace",
        Command::Scan { .. } => "scan",
        Command::SearchQuotient { .. } => "search-quotient",
        Command::Experiment { kind: Experiment::FullRank { .. } } => "experiment full-rank",
        Command::Experiment { kind: Experiment::Primitive { .. } } => "experiment primitive",
    }
}

fn error_report(code: &str, message: String) -> Value {
    json!({ "error": { "code": code, "message": message } })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            println!("{}", error_report("invalid-arguments", e.to_string().trim().to_string()));
            return ExitCode::from(2);
        }
    };
    if cli.threads > 0 {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let start = Instant::now();
    match execute(&cli) {
        Ok((inputs, outputs)) => {
            let report = json!({
                "command": command_name(&cli.command),
                "version": env!("CARGO_PKG_VERSION"),
                "seed": cli.seed.to_string(),
                "inputs": inputs,
                "outputs": outputs,
                "timing_ms": start.elapsed().as_millis() as u64,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", error_report(e.code(), e.to_string()));
            ExitCode::from(if matches!(e, Error::BudgetExhausted { .. }) { 3 } else { 2 })
        }
    }
}
