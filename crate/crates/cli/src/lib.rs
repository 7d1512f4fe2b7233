//! Command-line front end for the `bimatch` solvers.
//!
//! [`run`] is the whole program minus process plumbing, so tests drive it
//! with in-memory streams.

pub mod json;
pub mod svg;

use std::ffi::OsString;
use std::io::{Read, Write};

use bimatch::generators::{specified_decision, subset_sum_instance, three_dm_instance, DecisionMode};
use bimatch::polytope::multiobjective_polytope;
use bimatch::randomized::{support, ASubstitution};
use bimatch::{
    brute_force_solve, max_norm, maximize_convex, maximize_convex_variant, min_norm, randomized_solve, Error, Objective,
    ObjectiveKind, OracleCounter, PNorm, Projection, RandomizedConfig, RngHandle, Sense,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub use json::{InstanceFile, ResultFile};
pub use svg::render_polytope_svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SCALE_GUARD: i32 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("scale guard: {0}")]
    ScaleGuard(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::ScaleGuard(_) => EXIT_SCALE_GUARD,
            CliError::Failed(_) => EXIT_FAILURE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ScaleGuard { .. } => CliError::ScaleGuard(e.to_string()),
            Error::Exhausted
            | Error::FiberEmpty(_)
            | Error::NonIntegralVertex(_)
            | Error::EmptySupport
            | Error::TooFewVertices(_) => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bimatch", version, about = "Nonlinear bipartite matching solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Instance JSON; `-` or absent reads stdin.
    file: Option<String>,
}

#[derive(Debug, Args)]
struct SenseArg {
    /// Overrides the objective's sense.
    #[arg(long, value_parser = ["max", "min"])]
    sense: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact convex maximization through the vertices of the projected polytope.
    SolveConvex {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sense: SenseArg,
    },
    /// Exact convex maximization scanning fibers in order of objective value.
    SolveConvexVariant {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sense: SenseArg,
    },
    /// Approximate lp-norm minimization.
    MinNorm {
        #[command(flatten)]
        input: Input,
        /// Positive integer or `inf`; defaults to the objective's p.
        #[arg(long)]
        p: Option<String>,
    },
    /// Approximate lp-norm maximization.
    MaxNorm {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: Option<String>,
    },
    /// Randomized self-reduction through determinant interpolation.
    SolveRandom {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        seed: u64,
        /// Independent repetitions; defaults to n.
        #[arg(long)]
        trials: Option<usize>,
        /// Cap on interpolation nodes per support computation.
        #[arg(long)]
        cap_evals: Option<usize>,
        #[command(flatten)]
        sense: SenseArg,
    },
    /// Enumerate all n! matchings.
    BruteForce {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sense: SenseArg,
    },
    /// Grid bounds, feasible points and vertices of the projected polytope.
    Polytope {
        #[command(flatten)]
        input: Input,
        /// Also write an SVG view (d = 2 only).
        #[arg(long)]
        out: Option<String>,
    },
    /// Is there a perfect matching with the given projection?
    Decide {
        #[command(flatten)]
        input: Input,
        /// Comma-separated target, e.g. `2,4`.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Use one randomized support computation instead of enumeration.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cap_evals: Option<usize>,
    },
    /// Subset-sum instance: target a0, items a1..am.
    GenSubsetSum {
        #[arg(long, allow_hyphen_values = true)]
        a0: i64,
        /// Comma-separated items.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// 3-dimensional-matching instance from a 0/1 tensor.
    #[command(name = "gen-3dm")]
    Gen3dm {
        /// Tensor JSON (`x[i][j][k]`); `-` or absent reads stdin.
        file: Option<String>,
        /// Draw a uniform random n×n×n tensor instead.
        #[arg(long, requires = "seed")]
        random: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdin) {
        Ok(out) => {
            if stdout.write_all(out.as_bytes()).is_err() {
                return EXIT_FAILURE;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "bimatch: {e}");
            e.exit_code()
        }
    }
}

fn read_source(path: Option<&str>, stdin: &mut dyn Read) -> Result<String, CliError> {
    match path {
        None | Some("-") => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| CliError::Invalid(format!("input: cannot read stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Invalid(format!("input: cannot read {p}: {e}"))),
    }
}

fn load(input: &Input, stdin: &mut dyn Read) -> Result<InstanceFile, CliError> {
    json::parse_instance_file(&read_source(input.file.as_deref(), stdin)?)
}

fn objective_of(file: &InstanceFile, sense: &SenseArg) -> Result<Objective, CliError> {
    let o = file.objective.clone().ok_or_else(|| CliError::Invalid("objective: missing".into()))?;
    Ok(match sense.sense.as_deref() {
        Some(s) => o.with_sense(json::parse_sense(s, "--sense")?),
        None => o,
    })
}

fn norm_p(file: &InstanceFile, flag: Option<&str>) -> Result<PNorm, CliError> {
    if let Some(p) = flag {
        return json::parse_p(&Value::from(p.trim()), "--p");
    }
    match file.objective.as_ref().map(Objective::kind) {
        Some(ObjectiveKind::LpNorm(p)) => Ok(*p),
        _ => Err(CliError::Invalid("p: pass --p or give an lp_norm objective".into())),
    }
}

fn require_max(o: &Objective, command: &str) -> Result<(), CliError> {
    if o.sense() == Sense::Min {
        return Err(CliError::Invalid(format!(
            "objective.sense: {command} maximizes a convex objective; use min-norm, brute-force or solve-random for min"
        )));
    }
    Ok(())
}

fn emit(v: &Value) -> String {
    json::to_canonical_string(v)
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<String, CliError> {
    match command {
        Command::SolveConvex { input, sense } => {
            let file = load(&input, stdin)?;
            let obj = objective_of(&file, &sense)?;
            require_max(&obj, "solve-convex")?;
            let r = maximize_convex(&file.instance, &obj)?;
            Ok(emit(&convex_result(&obj, r).to_json()))
        }
        Command::SolveConvexVariant { input, sense } => {
            let file = load(&input, stdin)?;
            let obj = objective_of(&file, &sense)?;
            require_max(&obj, "solve-convex-variant")?;
            let r = maximize_convex_variant(&file.instance, &obj)?;
            Ok(emit(&convex_result(&obj, r).to_json()))
        }
        Command::MinNorm { input, p } => {
            let file = load(&input, stdin)?;
            let p = norm_p(&file, p.as_deref())?;
            let r = min_norm(&file.instance, p)?;
            let value = Objective::lp_norm(p, Sense::Min).value(&r.projection);
            Ok(emit(&norm_result("min-norm", value, r).to_json()))
        }
        Command::MaxNorm { input, p } => {
            let file = load(&input, stdin)?;
            let p = norm_p(&file, p.as_deref())?;
            let r = max_norm(&file.instance, p)?;
            let value = Objective::lp_norm(p, Sense::Max).value(&r.projection);
            Ok(emit(&norm_result("max-norm", value, r).to_json()))
        }
        Command::SolveRandom { input, seed, trials, cap_evals, sense } => {
            let file = load(&input, stdin)?;
            let obj = objective_of(&file, &sense)?;
            let trials = trials.unwrap_or(file.instance.n());
            let mut config = RandomizedConfig::default();
            if let Some(cap) = cap_evals {
                config.eval_cap = cap;
            }
            let mut rng = RngHandle::from_seed(seed);
            let r = randomized_solve(&file.instance, &obj, &mut rng, trials, &config)?;
            let result = ResultFile {
                value: Some(obj.value(&r.projection)),
                matching: r.matching,
                projection: r.projection,
                oracle_queries: r.oracle_queries,
                method: "randomized".into(),
                seed: Some(r.seed),
                fibers_tested: None,
                guaranteed_ratio: None,
            };
            Ok(emit(&result.to_json()))
        }
        Command::BruteForce { input, sense } => {
            let file = load(&input, stdin)?;
            let obj = objective_of(&file, &sense)?;
            let counter = OracleCounter::new();
            let (matching, projection) = brute_force_solve(&file.instance, &obj, &counter)?;
            let result = ResultFile {
                value: Some(obj.value(&projection)),
                matching,
                projection,
                oracle_queries: counter.queries(),
                method: "brute-force".into(),
                seed: None,
                fibers_tested: None,
                guaranteed_ratio: None,
            };
            Ok(emit(&result.to_json()))
        }
        Command::Polytope { input, out } => {
            let file = load(&input, stdin)?;
            let poly = multiobjective_polytope(&file.instance)?;
            let optimal = match &file.objective {
                Some(o) => o.best(poly.vertices.iter(), &OracleCounter::new())?.cloned(),
                None => None,
            };
            if let Some(path) = out {
                let doc = render_polytope_svg(&file.instance, file.objective.as_ref())?;
                std::fs::write(&path, doc).map_err(|e| CliError::Failed(format!("--out: cannot write {path}: {e}")))?;
            }
            let points = |s: &std::collections::BTreeSet<Projection>| -> Value {
                Value::Array(s.iter().map(|y| json::ints_to_json(y.coords())).collect())
            };
            let mut v = json!({
                "bounds": {
                    "lower": json::ints_to_json(&poly.bounds.lower),
                    "upper": json::ints_to_json(&poly.bounds.upper),
                },
                "grid_points": poly.bounds.size().to_string().parse::<u64>().map(Value::from)
                    .unwrap_or_else(|_| Value::from(poly.bounds.size().to_string())),
                "feasible": points(&poly.feasible),
                "vertices": points(&poly.vertices),
            });
            if let Some(y) = optimal {
                v["optimal_vertex"] = json::ints_to_json(y.coords());
            }
            Ok(emit(&v))
        }
        Command::Decide { input, target, seed, cap_evals } => {
            let file = load(&input, stdin)?;
            let target = Projection(json::parse_int_list(&target, "--target")?);
            let d = file.instance.d();
            if target.len() != d {
                return Err(CliError::Invalid(format!("--target: expected {d} values, found {}", target.len())));
            }
            let mode = match seed {
                Some(seed) => DecisionMode::Randomized { seed },
                None => DecisionMode::Exact,
            };
            if let (Some(cap), DecisionMode::Randomized { seed }) = (cap_evals, mode) {
                // The library decision uses the default cap; probe the
                // requested one first so oversized instances exit with the
                // scale-guard code.
                let shift = (-file.instance.min_weight()).max(num_bigint::BigInt::from(0));
                let probe = shifted(&file.instance, &shift);
                let mut rng = RngHandle::from_seed(seed);
                let n = probe.n() as u64;
                support(&probe, &ASubstitution::random(probe.n(), 2 * n * n, &mut rng), cap)?;
            }
            let decision = specified_decision(&file.instance, &target, mode)?;
            let mut v = json!({
                "decision": decision.as_str(),
                "target": json::ints_to_json(target.coords()),
                "mode": match mode { DecisionMode::Exact => "exact", DecisionMode::Randomized { .. } => "randomized" },
            });
            if let Some(seed) = seed {
                v["seed"] = seed.into();
            }
            Ok(emit(&v))
        }
        Command::GenSubsetSum { a0, a } => {
            let items: Vec<i64> = json::parse_int_list(&a, "--a")?
                .iter()
                .map(|v| i64::try_from(v).map_err(|_| CliError::Invalid(format!("--a: {v} does not fit in 64 bits"))))
                .collect::<Result<_, _>>()?;
            let (instance, target) = subset_sum_instance(a0, &items)?;
            Ok(emit(&generated(instance, target)))
        }
        Command::Gen3dm { file, random, seed } => {
            let x = match random {
                Some(n) => {
                    if n == 0 {
                        return Err(CliError::Invalid("--random: n must be at least 1".into()));
                    }
                    let mut rng = RngHandle::from_seed(seed.expect("clap enforces --seed"));
                    (0..n).map(|_| (0..n).map(|_| (0..n).map(|_| rng.draw(2) == 2).collect()).collect()).collect()
                }
                None => {
                    let text = read_source(file.as_deref(), stdin)?;
                    let v: Value = serde_json::from_str(&text)
                        .map_err(|e| CliError::Invalid(format!("input: malformed JSON: {e}")))?;
                    json::parse_tensor(&v)?
                }
            };
            let (instance, target) = three_dm_instance(&x)?;
            Ok(emit(&generated(instance, target)))
        }
    }
}

fn shifted(instance: &bimatch::Instance, shift: &num_bigint::BigInt) -> bimatch::Instance {
    let nested = instance
        .to_nested()
        .into_iter()
        .map(|w| w.into_iter().map(|row| row.into_iter().map(|v| v + shift).collect()).collect())
        .collect();
    bimatch::Instance::new(instance.n(), instance.d(), nested).expect("same shape")
}

/// Generated instances carry `min ‖y − u‖²`, which is zero exactly when the
/// target is attained.
fn generated(instance: bimatch::Instance, target: Projection) -> Value {
    let objective = Objective::new(ObjectiveKind::QuadraticDistance(target.0), Sense::Min);
    json::instance_file_to_json(&InstanceFile { instance, objective: Some(objective) })
}

fn convex_result(obj: &Objective, r: bimatch::ConvexSolveReport) -> ResultFile {
    ResultFile {
        value: Some(obj.value(&r.projection)),
        matching: r.matching,
        projection: r.projection,
        oracle_queries: r.oracle_queries,
        method: r.method.to_string(),
        seed: None,
        fibers_tested: Some(r.fibers_tested),
        guaranteed_ratio: None,
    }
}

fn norm_result(method: &str, value: num_rational::BigRational, r: bimatch::NormSolveReport) -> ResultFile {
    ResultFile {
        value: Some(value),
        matching: r.matching,
        projection: r.projection,
        oracle_queries: r.oracle_queries,
        method: method.into(),
        seed: None,
        fibers_tested: None,
        guaranteed_ratio: Some(r.guaranteed_ratio.to_string()),
    }
}
