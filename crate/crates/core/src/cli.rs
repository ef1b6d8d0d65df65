//! Command-line front end. Every command prints one JSON report.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigInt;
use serde_json::{json, Map, Value};

use crate::arrangement::{
    build_atoms, build_poset, count_faces_poset, count_regions_bruteforce, count_regions_poset, enumerate_cells,
    face_counts_bruteforce, is_simple,
};
use crate::bounds::{deep_lower, deep_upper, prior_bounds, shallow_formula, trivial_bound, DeepQuery, ShallowQuery};
use crate::budget::Budget;
use crate::construct::{
    construct_deep_lower, construct_deep_lower_with, construct_shallow_optimal, construct_shallow_optimal_nobias,
    count_regions_on_line, sample_generic, SampleOptions,
};
use crate::error::{Error, Result};
use crate::minkowski::{
    classify_vertices, duality_check, lift_layer, minkowski_sum, parse_point_sets, partial_sum_trivial_bound,
    point_sets_to_json, upper_vertex_identity,
};
use crate::network::{parse_network, serialize_network, BiasMode, Layer, Network};
use crate::rational::int;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_VIOLATION: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "tropic", version, about = "Exact linear-region and Minkowski-vertex counting for maxout networks")]
pub struct Cli {
    /// Worker threads for cell enumeration and vertex classification.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Render results as a table instead of JSON.
    #[arg(long, global = true)]
    pub table: bool,
    /// Cap on LP calls (overrides TROPIC_BUDGET_LP).
    #[arg(long, global = true)]
    pub budget_lp: Option<u64>,
    /// Cap on activation signatures visited by enumeration.
    #[arg(long, global = true)]
    pub budget_signatures: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate closed-form region bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Count regions or faces of a network file.
    #[command(subcommand)]
    Regions(RegionsCmd),
    /// Emit a network that attains a bound.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Draw a certified simple layer with integer parameters.
    Sample(SampleArgs),
    /// Dump the intersection poset of a one-layer network.
    Poset(NetworkArg),
    /// Minkowski sums and vertex classification.
    #[command(subcommand)]
    Minkowski(MinkowskiCmd),
    /// Run the randomized identity suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Debug)]
pub struct ShapeArgs {
    #[arg(long)]
    pub inputs: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub ranks: Vec<usize>,
    #[arg(long)]
    pub no_bias: bool,
}

impl ShapeArgs {
    fn mode(&self) -> BiasMode {
        if self.no_bias {
            BiasMode::NoBias
        } else {
            BiasMode::Bias
        }
    }
}

#[derive(Args, Debug)]
pub struct DeepArgs {
    #[arg(long)]
    pub inputs: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub widths: Vec<usize>,
    #[arg(long)]
    pub rank: usize,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCmd {
    Shallow(ShapeArgs),
    Deep {
        #[command(flatten)]
        shape: DeepArgs,
        #[arg(long)]
        no_bias: bool,
    },
    /// Earlier bounds for `units` units of equal rank.
    Prior {
        #[arg(long)]
        inputs: usize,
        #[arg(long)]
        units: usize,
        #[arg(long)]
        rank: usize,
    },
}

#[derive(Args, Debug)]
pub struct NetworkArg {
    #[arg(long)]
    pub network: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Pattern,
    Poset,
    Dual,
    All,
}

#[derive(Subcommand, Debug)]
pub enum RegionsCmd {
    Count {
        #[arg(long)]
        network: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: Method,
        /// Fail with exit code 4 unless the arrangement is simple.
        #[arg(long)]
        require_simple: bool,
    },
    /// Face numbers by cell enumeration and by the poset formula.
    Faces(NetworkArg),
    /// Every nonempty argmax cell with its signature.
    Cells(NetworkArg),
}

#[derive(Subcommand, Debug)]
pub enum ConstructCmd {
    ShallowMax {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, required = true)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    DeepLower {
        #[command(flatten)]
        shape: DeepArgs,
        /// Folded coordinates; defaults to the largest admissible choice.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, required = true)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, required = true)]
    pub seed: u64,
    #[arg(long, default_value_t = 12)]
    pub bound: i64,
    #[arg(long, default_value_t = 200)]
    pub retries: usize,
    /// Also require the homogenized layer to be simple.
    #[arg(long)]
    pub certify_lift: bool,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum MinkowskiCmd {
    /// Lifted point sets of every unit of a one-layer network.
    Lift {
        #[arg(long)]
        network: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    Sum {
        #[arg(long)]
        points: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Classify the points of a set, or of the sum of a family.
    Classify {
        #[arg(long)]
        points: PathBuf,
    },
    /// Region count against the vertex count of the lifted sum.
    Duality(NetworkArg),
    /// Upper vertices of the sum against the alternating partial-sum formula.
    UpperFaces {
        #[arg(long)]
        points: PathBuf,
    },
    /// Vertex counts of partial sums against the product bound.
    Partial {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        max_size: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    Identities {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, required = true)]
        seed: u64,
        /// Restrict to the named suites.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
}

#[derive(Clone, Debug, Default)]
pub struct Certificates {
    pub simple: Option<bool>,
    pub generic_orientation: Option<bool>,
    pub budget_hit: bool,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub results: Value,
    pub certificates: Certificates,
    pub wall_ms: u128,
    pub exit_code: i32,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "seed": self.seed,
            "results": self.results,
            "certificates": {
                "simple": self.certificates.simple,
                "generic_orientation": self.certificates.generic_orientation,
                "budget_hit": self.certificates.budget_hit,
            },
            "timings": { "wall_ms": self.wall_ms as u64 },
        })
    }

    pub fn render_table(&self) -> String {
        let mut rows: Vec<(String, String)> = Vec::new();
        flatten("", &self.results, &mut rows);
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Budget(_) => EXIT_BUDGET,
        Error::Precondition(_) | Error::Empty => EXIT_PRECONDITION,
        Error::Input(_) | Error::Parse { .. } | Error::Io(_) => EXIT_USAGE,
    }
}

fn kind(err: &Error) -> &'static str {
    match err {
        Error::Budget(_) => "budget",
        Error::Precondition(_) | Error::Empty => "precondition",
        Error::Input(_) | Error::Parse { .. } => "input",
        Error::Io(_) => "io",
    }
}

struct Ctx {
    budget: Budget,
    certificates: Certificates,
    seed: Option<u64>,
    exit_code: i32,
}

fn big(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<Network> {
    parse_network(&read(path)?)
}

fn single_layer(net: &Network) -> Result<&Layer> {
    match net.layers.as_slice() {
        [layer] => Ok(layer),
        _ => Err(Error::Precondition(format!(
            "this command needs a one-layer network, got {} layers",
            net.layers.len()
        ))),
    }
}

fn emit(value: Value, text: String, output: &Option<PathBuf>, key: &str) -> Result<Value> {
    match output {
        Some(path) => {
            std::fs::write(path, text + "\n")?;
            Ok(json!({ "written": path.display().to_string() }))
        }
        None => Ok(json!({ key: value })),
    }
}

fn simple_flag(layer: &Layer, ctx: &mut Ctx) -> Result<bool> {
    let arr = build_atoms(layer, &ctx.budget)?;
    let simple = is_simple(&arr, &ctx.budget)?.simple;
    ctx.certificates.simple = Some(simple);
    Ok(simple)
}

fn cmd_bounds(cmd: &BoundsCmd) -> Result<Value> {
    Ok(match cmd {
        BoundsCmd::Shallow(s) => {
            let v = shallow_formula(&ShallowQuery::new(s.inputs, &s.ranks, s.mode()));
            json!({ "regions_max": big(&v), "trivial": big(&trivial_bound(&s.ranks)), "bias": s.mode().as_str() })
        }
        BoundsCmd::Deep { shape, no_bias } => {
            let mode = if *no_bias { BiasMode::NoBias } else { BiasMode::Bias };
            let up = deep_upper(&DeepQuery::uniform(shape.inputs, &shape.widths, shape.rank, mode));
            let mut out = Map::new();
            out.insert("upper".into(), big(&up));
            match deep_lower(shape.inputs, &shape.widths, shape.rank, mode) {
                Ok(l) => {
                    out.insert("lower".into(), big(&l.value));
                    out.insert("lower_n".into(), json!(l.n));
                }
                Err(e) => {
                    out.insert("lower".into(), Value::Null);
                    out.insert("lower_note".into(), json!(e.to_string()));
                }
            }
            out.insert("bias".into(), json!(mode.as_str()));
            Value::Object(out)
        }
        BoundsCmd::Prior { inputs, units, rank } => {
            let p = prior_bounds(*inputs, *units, *rank);
            let ours = shallow_formula(&ShallowQuery::new(*inputs, &vec![*rank; *units], BiasMode::Bias));
            json!({ "prior_lower": big(&p.lower), "prior_upper": big(&p.upper), "regions_max": big(&ours) })
        }
    })
}

fn cmd_regions(cmd: &RegionsCmd, ctx: &mut Ctx) -> Result<Value> {
    match cmd {
        RegionsCmd::Count { network, method, require_simple } => {
            let net = load_network(network)?;
            if net.layers.len() > 1 {
                if net.input_dim != 1 || !matches!(method, Method::Pattern | Method::All) {
                    return Err(Error::Precondition(
                        "deep networks are counted exactly only with one input and the pattern method".into(),
                    ));
                }
                let r = count_regions_on_line(&net, &[int(0)], &[int(1)])?;
                return Ok(json!({ "pattern": r, "consistent": true }));
            }
            let layer = single_layer(&net)?;
            let simple = simple_flag(layer, ctx)?;
            if *require_simple && !simple {
                return Err(Error::Precondition("the arrangement is not simple".into()));
            }
            let mut out = Map::new();
            let mut counts = Vec::new();
            if matches!(method, Method::Pattern | Method::All) {
                let r = count_regions_bruteforce(layer, &ctx.budget)?;
                out.insert("pattern".into(), json!(r.regions));
                out.insert("bounded_regions".into(), json!(r.bounded_regions));
                counts.push(BigInt::from(r.regions));
            }
            if matches!(method, Method::Poset | Method::All) {
                let poset = build_poset(&build_atoms(layer, &ctx.budget)?, &ctx.budget)?;
                let r = count_regions_poset(&poset);
                out.insert("poset".into(), big(&r));
                counts.push(r);
            }
            if matches!(method, Method::Dual | Method::All) {
                let d = duality_check(layer, &ctx.budget)?;
                out.insert("dual".into(), json!(d.vertex_count));
                counts.push(BigInt::from(d.vertex_count));
            }
            let consistent = counts.windows(2).all(|w| w[0] == w[1]);
            out.insert("consistent".into(), json!(consistent));
            if !consistent {
                ctx.exit_code = EXIT_VIOLATION;
                out.insert("instance".into(), net.to_json());
            }
            Ok(Value::Object(out))
        }
        RegionsCmd::Faces(a) => {
            let net = load_network(&a.network)?;
            let layer = single_layer(&net)?;
            simple_flag(layer, ctx)?;
            let brute = face_counts_bruteforce(layer, &ctx.budget)?;
            let poset = build_poset(&build_atoms(layer, &ctx.budget)?, &ctx.budget)?;
            let formula = (0..=layer.input_dim)
                .map(|s| count_faces_poset(&poset, s).map(|v| big(&v)))
                .collect::<Result<Vec<_>>>()?;
            let consistent = brute.iter().zip(&formula).all(|(a, b)| json!(a) == *b);
            if !consistent {
                ctx.exit_code = EXIT_VIOLATION;
            }
            Ok(json!({ "enumerated": brute, "poset": formula, "consistent": consistent }))
        }
        RegionsCmd::Cells(a) => {
            let net = load_network(&a.network)?;
            let cells = enumerate_cells(single_layer(&net)?, &ctx.budget)?;
            Ok(json!({ "count": cells.len(), "cells": cells.iter().map(|c| c.to_json()).collect::<Vec<_>>() }))
        }
    }
}

fn cmd_construct(cmd: &ConstructCmd, ctx: &mut Ctx) -> Result<Value> {
    match cmd {
        ConstructCmd::ShallowMax { shape, seed, output } => {
            ctx.seed = Some(*seed);
            let layer = match shape.mode() {
                BiasMode::Bias => construct_shallow_optimal(shape.inputs, &shape.ranks, *seed)?,
                BiasMode::NoBias => construct_shallow_optimal_nobias(shape.inputs, &shape.ranks, *seed)?,
            };
            ctx.certificates.simple = Some(true);
            let net = Network::single(layer);
            let target = shallow_formula(&ShallowQuery::new(shape.inputs, &shape.ranks, shape.mode()));
            let mut out = emit(net.to_json(), serialize_network(&net), output, "network")?;
            out["regions_max"] = big(&target);
            Ok(out)
        }
        ConstructCmd::DeepLower { shape, n, seed, output } => {
            ctx.seed = Some(*seed);
            let net = match n {
                Some(n) => construct_deep_lower_with(*n, shape.inputs, &shape.widths, shape.rank, *seed)?,
                None => construct_deep_lower(shape.inputs, &shape.widths, shape.rank, *seed)?,
            };
            let lower = deep_lower(shape.inputs, &shape.widths, shape.rank, BiasMode::Bias)?;
            let mut out = emit(net.to_json(), serialize_network(&net), output, "network")?;
            out["lower"] = big(&lower.value);
            Ok(out)
        }
    }
}

fn cmd_sample(a: &SampleArgs, ctx: &mut Ctx) -> Result<Value> {
    ctx.seed = Some(a.seed);
    let opts = SampleOptions { bound: a.bound, retries: a.retries, certify_lift: a.certify_lift };
    let s = sample_generic(a.shape.inputs, &a.shape.ranks, a.shape.mode(), a.seed, &opts)?;
    ctx.certificates.simple = Some(true);
    ctx.certificates.generic_orientation = Some(a.certify_lift);
    let net = Network::single(s.layer);
    let mut out = emit(net.to_json(), serialize_network(&net), &a.output, "network")?;
    out["rejected"] = json!(s.rejected);
    Ok(out)
}

fn cmd_poset(a: &NetworkArg, ctx: &mut Ctx) -> Result<Value> {
    let net = load_network(&a.network)?;
    let layer = single_layer(&net)?;
    simple_flag(layer, ctx)?;
    let poset = build_poset(&build_atoms(layer, &ctx.budget)?, &ctx.budget)?;
    Ok(json!({ "regions": big(&count_regions_poset(&poset)), "poset": poset.to_json() }))
}

fn cmd_minkowski(cmd: &MinkowskiCmd, ctx: &mut Ctx) -> Result<Value> {
    match cmd {
        MinkowskiCmd::Lift { network, output } => {
            let net = load_network(network)?;
            let sets = lift_layer(single_layer(&net)?);
            let doc = point_sets_to_json(&sets);
            let text = serde_json::to_string_pretty(&doc).expect("json");
            emit(doc, text, output, "sets")
        }
        MinkowskiCmd::Sum { points, output } => {
            let sum = minkowski_sum(&parse_point_sets(&read(points)?)?)?;
            let text = serde_json::to_string_pretty(&sum.to_json()).expect("json");
            emit(sum.to_json(), text, output, "sum")
        }
        MinkowskiCmd::Classify { points } => {
            let sets = parse_point_sets(&read(points)?)?;
            let set = if sets.len() == 1 { sets.into_iter().next().unwrap() } else { minkowski_sum(&sets)? };
            let c = classify_vertices(&set, &ctx.budget)?;
            Ok(c.to_json(&set))
        }
        MinkowskiCmd::Duality(a) => {
            let net = load_network(&a.network)?;
            let d = duality_check(single_layer(&net)?, &ctx.budget)?;
            if !d.holds() {
                ctx.exit_code = EXIT_VIOLATION;
            }
            Ok(json!({ "regions": d.region_count, "vertices": d.vertex_count, "holds": d.holds() }))
        }
        MinkowskiCmd::UpperFaces { points } => {
            let sets = parse_point_sets(&read(points)?)?;
            let c = upper_vertex_identity(&sets, &ctx.budget)?;
            if !c.holds() {
                ctx.exit_code = EXIT_VIOLATION;
            }
            Ok(json!({ "lhs": big(&c.lhs), "rhs": big(&c.rhs), "holds": c.holds() }))
        }
        MinkowskiCmd::Partial { points, max_size } => {
            let sets = parse_point_sets(&read(points)?)?;
            let n = max_size.unwrap_or_else(|| sets.first().map_or(0, |s| s.ambient_dim.saturating_sub(1)));
            let r = partial_sum_trivial_bound(&sets, n, &ctx.budget)?;
            let all = r.values().all(|p| p.attained());
            let rows: Vec<Value> = r
                .iter()
                .map(|(s, p)| {
                    json!({ "subset": s.iter().map(|i| i + 1).collect::<Vec<_>>(), "actual": p.actual,
                            "trivial": big(&p.trivial) })
                })
                .collect();
            Ok(json!({ "all_attained": all, "subsets": rows }))
        }
    }
}

fn cmd_verify(cmd: &VerifyCmd, ctx: &mut Ctx) -> Result<Value> {
    let VerifyCmd::Identities { trials, seed, suite } = cmd;
    ctx.seed = Some(*seed);
    let names: Vec<String> =
        if suite.is_empty() { verify::SUITES.iter().map(|s| s.to_string()).collect() } else { suite.clone() };
    let mut results = Vec::new();
    for name in &names {
        results.push(verify::run_suite(name, *trials, *seed, &ctx.budget)?);
    }
    let all = results.iter().all(verify::SuiteResult::ok);
    if !all {
        ctx.exit_code = EXIT_VIOLATION;
    }
    Ok(json!({ "all_pass": all, "suites": results.iter().map(verify::SuiteResult::to_json).collect::<Vec<_>>() }))
}

fn dispatch(cli: &Cli, ctx: &mut Ctx) -> Result<Value> {
    match &cli.command {
        Command::Bounds(c) => cmd_bounds(c),
        Command::Regions(c) => cmd_regions(c, ctx),
        Command::Construct(c) => cmd_construct(c, ctx),
        Command::Sample(a) => cmd_sample(a, ctx),
        Command::Poset(a) => cmd_poset(a, ctx),
        Command::Minkowski(c) => cmd_minkowski(c, ctx),
        Command::Verify(c) => cmd_verify(c, ctx),
    }
}

/// Runs a parsed command and returns its report.
pub fn execute(cli: &Cli, argv: Vec<String>) -> RunReport {
    let start = Instant::now();
    let mut budget = match Budget::from_env() {
        Ok(b) => b,
        Err(e) => return failure(argv, &e, start),
    };
    if let Some(v) = cli.budget_lp {
        budget.lp_calls = v;
    }
    if let Some(v) = cli.budget_signatures {
        budget.signatures = v;
    }
    let mut ctx = Ctx { budget, certificates: Certificates::default(), seed: None, exit_code: EXIT_OK };
    let outcome = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| dispatch(cli, &mut ctx)),
            Err(e) => Err(Error::Input(format!("cannot start {j} workers: {e}"))),
        },
        None => dispatch(cli, &mut ctx),
    };
    match outcome {
        Ok(results) => RunReport {
            command: argv,
            seed: ctx.seed,
            results,
            certificates: ctx.certificates,
            wall_ms: start.elapsed().as_millis(),
            exit_code: ctx.exit_code,
        },
        Err(e) => {
            let mut r = failure(argv, &e, start);
            r.seed = ctx.seed;
            r.certificates.simple = ctx.certificates.simple;
            r.certificates.budget_hit = matches!(e, Error::Budget(_));
            r
        }
    }
}

fn failure(argv: Vec<String>, e: &Error, start: Instant) -> RunReport {
    RunReport {
        command: argv,
        seed: None,
        results: json!({ "error": { "kind": kind(e), "message": e.to_string() } }),
        certificates: Certificates { budget_hit: matches!(e, Error::Budget(_)), ..Certificates::default() },
        wall_ms: start.elapsed().as_millis(),
        exit_code: exit_code(e),
    }
}

/// Parses arguments, runs the command and returns `(exit code, stdout text)`.
pub fn run_to_string<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => return (e.exit_code(), e.render().to_string()),
    };
    let argv = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let report = execute(&cli, argv);
    let text = if cli.table {
        report.render_table()
    } else {
        serde_json::to_string_pretty(&report.to_json()).expect("json") + "\n"
    };
    (report.exit_code, text)
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let (code, text) = run_to_string(std::env::args_os());
    if code == EXIT_USAGE && !text.starts_with('{') {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    code
}
