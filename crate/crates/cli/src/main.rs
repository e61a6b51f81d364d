mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use impartial::io::{self, alpha_grid, parse_instance_file, Generator, GridMode, Instance};
use impartial::oracle::{
    check_impartial, opt_assignment, opt_k, run_tightness, AssignMechanism, Deviations,
    GenAssignMechanism, GenSelectMechanism, ImpartialitySpace, Mechanism, SelectMechanism,
    TopKMechanism, DEFAULT_NODE_BUDGET,
};
use impartial::{
    assign_k, build_partition_system, gen_assign, gen_select, is_conforming, select_k, Alpha,
    Error, InstanceTuple, PartitionDocument, PartitionSystem,
};

const BUDGET_ENV: &str = "IMPARTIAL_ORACLE_BUDGET";

#[derive(Parser)]
#[command(name = "impartial", version, about = "Impartial selection and assignment with weighted votes")]
struct Cli {
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select at most k agents.
    Select(SelectArgs),
    /// Assign agents to m jobs of capacity k.
    Assign(AssignArgs),
    /// Optimal selection or assignment by exhaustive search.
    Opt(OptArgs),
    /// Search for impartiality violations of a mechanism.
    Verify(VerifyArgs),
    /// Build the worst-case instance for (n, k) and measure selection on it.
    Tightness(SizeArgs),
    /// Print the canonical partition system for (n, k).
    Partitions(SizeArgs),
    /// Table of approximation guarantees over ranges of n and k.
    AlphaGrid(GridArgs),
    /// Write a generated instance.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct OracleArgs {
    /// Also compute the optimum and the achieved ratio.
    #[arg(long)]
    oracle: bool,

    /// Node budget for the optimal-assignment search.
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct SelectArgs {
    /// Instance file (.json or .csv).
    instance: PathBuf,
    /// Maximum number of selected agents; defaults to `k` from the file.
    #[arg(short)]
    k: Option<usize>,
    /// Partition system document to use instead of the canonical one.
    #[arg(long)]
    partition_file: Option<PathBuf>,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args)]
struct AssignArgs {
    /// Instance file holding one matrix per job.
    instance: PathBuf,
    /// Capacity of every job; defaults to `k` from the file.
    #[arg(short)]
    k: Option<usize>,
    #[arg(long)]
    partition_file: Option<PathBuf>,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args)]
struct OptArgs {
    instance: PathBuf,
    #[arg(short)]
    k: Option<usize>,
    /// Optimal assignment over all jobs instead of optimal selection.
    #[arg(long)]
    assignment: bool,
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MechanismKind {
    Select,
    GenSelect,
    Assign,
    GenAssign,
    /// The k highest column sums; not impartial.
    TopK,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    mechanism: MechanismKind,
    #[arg(short)]
    n: usize,
    #[arg(short)]
    k: usize,
    /// Number of jobs for assignment mechanisms.
    #[arg(short, default_value_t = 1)]
    m: usize,
    /// Base instance files; random ones are generated when none are given.
    #[arg(long = "instance")]
    instances: Vec<PathBuf>,
    /// Number of generated base instances.
    #[arg(long, default_value_t = 4)]
    count: usize,
    /// Largest weight in generated base instances.
    #[arg(long, default_value_t = 2)]
    max: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Deviation entries, tried in every combination on `support` agents.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 1.0, 2.0])]
    values: Vec<f64>,
    #[arg(long, default_value_t = 4)]
    support: usize,
    /// Use this many random deviation rows per agent instead of a grid.
    #[arg(long)]
    random_rows: Option<usize>,
    /// Largest entry of random deviation rows.
    #[arg(long, default_value_t = 10)]
    random_max: u64,
    /// Maximum number of mechanism evaluations.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct SizeArgs {
    #[arg(short)]
    n: usize,
    #[arg(short)]
    k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridFormat {
    Json,
    Tsv,
}

#[derive(Args)]
struct GridArgs {
    /// Range of n, as `LO..=HI`, `LO-HI` or a single value.
    #[arg(short, value_parser = parse_range)]
    n: (usize, usize),
    #[arg(short, value_parser = parse_range)]
    k: (usize, usize),
    /// Number of jobs; gives assignment guarantees.
    #[arg(short)]
    m: Option<usize>,
    #[arg(long, value_enum, default_value_t = GridFormat::Json)]
    format: GridFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorKind {
    UniformInt,
    UnweightedBernoulli,
    Tightness,
}

#[derive(Clone, Copy, ValueEnum)]
enum InstanceFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: GeneratorKind,
    #[arg(short)]
    n: usize,
    /// Selection size (tightness only).
    #[arg(short)]
    k: Option<usize>,
    #[arg(short, default_value_t = 1)]
    m: usize,
    /// Largest weight (uniform-int).
    #[arg(long, default_value_t = 10)]
    max: u64,
    /// Vote probability (unweighted-bernoulli).
    #[arg(short, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = InstanceFormat::Json)]
    format: InstanceFormat,
    /// Write JSON as sparse triplets.
    #[arg(long)]
    sparse: bool,
    /// Output file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once('-'))
        .unwrap_or((s, s));
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

/// A command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Applicability(_) | Error::BudgetExceeded { .. } => 2,
            Error::Parse { .. } | Error::Io(_) | Error::Json(_) | Error::InvalidMatrix(_) => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

/// Printed output plus the exit code it implies.
struct Outcome {
    json: serde_json::Value,
    /// Raw text printed verbatim in place of `json`.
    tsv: Option<String>,
    code: u8,
}

impl Outcome {
    fn ok<T: Serialize>(v: &T) -> Result<Self, Failure> {
        Self::with_code(v, 0)
    }

    fn with_code<T: Serialize>(v: &T, code: u8) -> Result<Self, Failure> {
        Ok(Outcome {
            json: serde_json::to_value(v).map_err(Error::from)?,
            tsv: None,
            code,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            if let Some(tsv) = &out.tsv {
                print!("{tsv}");
            } else if cli.pretty {
                print!("{}", table::render(&out.json));
            } else {
                println!("{}", out.json);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Select(args) => select(args),
        Command::Assign(args) => assign(args),
        Command::Opt(args) => opt(args),
        Command::Verify(args) => verify(args),
        Command::Tightness(SizeArgs { n, k }) => {
            let r = run_tightness(n, k)?;
            Outcome::with_code(&r, if r.pass { 0 } else { 1 })
        }
        Command::Partitions(SizeArgs { n, k }) => Outcome::ok(&build_partition_system(n, k)?.to_document()),
        Command::AlphaGrid(args) => {
            let mode = match args.m {
                Some(m) => GridMode::Assign { m },
                None => GridMode::Select,
            };
            let grid = alpha_grid(args.n.0..=args.n.1, args.k.0..=args.k.1, mode)?;
            let mut out = Outcome::ok(&grid)?;
            if let GridFormat::Tsv = args.format {
                out.tsv = Some(grid.to_tsv());
            }
            Ok(out)
        }
        Command::Generate(args) => generate(args),
    }
}

fn load(path: &Path, k: Option<usize>) -> Result<(Instance, usize), Failure> {
    let inst = parse_instance_file(path)?;
    let k = k
        .or(inst.k)
        .ok_or_else(|| usage("no -k given and the instance file has no \"k\""))?;
    Ok((inst, k))
}

fn load_partitions(path: &Path) -> Result<PartitionSystem, Failure> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    let doc: PartitionDocument = serde_json::from_str(&text).map_err(|e| {
        Failure::from(Error::Parse {
            location: format!("{}: line {}, column {}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })
    })?;
    Ok(PartitionSystem::from_document(doc)?)
}

fn below(ratio: Option<impartial::ScoreRatio>, alpha: &Alpha) -> bool {
    ratio.is_some_and(|r| !r.at_least(alpha))
}

fn select(args: SelectArgs) -> Result<Outcome, Failure> {
    let (inst, k) = load(&args.instance, args.k)?;
    let a = inst.matrix()?;
    let mut r = match &args.partition_file {
        Some(path) => select_k(a, k, &load_partitions(path)?)?,
        None if is_conforming(a.n(), k) => select_k(a, k, &build_partition_system(a.n(), k)?)?,
        None => gen_select(a, k)?,
    };
    if args.oracle.oracle {
        r = r.with_optimum(opt_k(a, k)?.1);
    }
    let code = if below(r.ratio, &r.alpha) { 1 } else { 0 };
    Outcome::with_code(&r, code)
}

fn assign(args: AssignArgs) -> Result<Outcome, Failure> {
    let (inst, k) = load(&args.instance, args.k)?;
    let t = &inst.tuple;
    let mut r = match &args.partition_file {
        Some(path) => assign_k(t, k, &load_partitions(path)?)?,
        None if is_conforming(t.n(), k) && t.m() * k <= t.n() && t.m() <= 2 * t.n() / k => {
            assign_k(t, k, &build_partition_system(t.n(), k)?)?
        }
        None => gen_assign(t, k)?,
    };
    if args.oracle.oracle {
        r = r.with_optimum(opt_assignment(t, k, args.oracle.budget)?.1);
    }
    let code = if below(r.ratio, &r.alpha) { 1 } else { 0 };
    Outcome::with_code(&r, code)
}

#[derive(Serialize)]
struct OptOutput<T: Serialize> {
    optimum: T,
    #[serde(serialize_with = "impartial::weights::serialize_score")]
    score: f64,
}

fn opt(args: OptArgs) -> Result<Outcome, Failure> {
    let (inst, k) = load(&args.instance, args.k)?;
    if args.assignment {
        let (asg, score) = opt_assignment(&inst.tuple, k, args.budget)?;
        Outcome::ok(&OptOutput { optimum: asg, score })
    } else {
        let (set, score) = opt_k(inst.matrix()?, k)?;
        Outcome::ok(&OptOutput { optimum: set, score })
    }
}

fn verify(args: VerifyArgs) -> Result<Outcome, Failure> {
    let (n, k, m) = (args.n, args.k, args.m);
    let mech: Box<dyn Mechanism> = match args.mechanism {
        MechanismKind::Select => Box::new(SelectMechanism::canonical(n, k)?),
        MechanismKind::GenSelect => Box::new(GenSelectMechanism::new(n, k)?),
        MechanismKind::Assign => Box::new(AssignMechanism::canonical(n, k)?),
        MechanismKind::GenAssign => Box::new(GenAssignMechanism::new(n, m, k)?),
        MechanismKind::TopK => Box::new(TopKMechanism { k }),
    };
    let jobs = match args.mechanism {
        MechanismKind::Assign | MechanismKind::GenAssign => m,
        _ => 1,
    };
    let instances = if args.instances.is_empty() {
        (0..args.count)
            .map(|c| {
                io::generate(
                    &Generator::UniformInt { n, max: args.max, m: jobs },
                    args.seed.wrapping_add(c as u64),
                )
            })
            .collect::<Result<Vec<InstanceTuple>, Error>>()?
    } else {
        args.instances
            .iter()
            .map(|p| Ok(parse_instance_file(p)?.tuple))
            .collect::<Result<Vec<_>, Failure>>()?
    };
    if let Some(t) = instances.iter().find(|t| t.n() != n || t.m() != jobs) {
        return Err(usage(format!(
            "base instance has n = {}, m = {}; expected n = {n}, m = {jobs}",
            t.n(),
            t.m()
        )));
    }
    let deviations = match args.random_rows {
        Some(count) => Deviations::Random {
            max: args.random_max,
            count,
            seed: args.seed,
        },
        None => Deviations::Grid {
            values: args.values,
            support: args.support,
        },
    };
    let space = ImpartialitySpace {
        instances,
        deviations,
        budget: args.budget,
    };
    let report = check_impartial(mech.as_ref(), &space)?;
    let code = if report.violation_count > 0 {
        1
    } else if report.budget_exhausted {
        2
    } else {
        0
    };
    #[derive(Serialize)]
    struct VerifyOutput<'a> {
        pass: bool,
        #[serde(flatten)]
        report: &'a impartial::oracle::ImpartialityReport,
    }
    Outcome::with_code(
        &VerifyOutput {
            pass: code == 0,
            report: &report,
        },
        code,
    )
}

fn generate(args: GenerateArgs) -> Result<Outcome, Failure> {
    let generator = match args.kind {
        GeneratorKind::UniformInt => Generator::UniformInt {
            n: args.n,
            max: args.max,
            m: args.m,
        },
        GeneratorKind::UnweightedBernoulli => Generator::UnweightedBernoulli {
            n: args.n,
            p: args.p,
            m: args.m,
        },
        GeneratorKind::Tightness => Generator::Tightness {
            n: args.n,
            k: args.k.ok_or_else(|| usage("tightness needs -k"))?,
        },
    };
    let tuple = io::generate(&generator, args.seed)?;
    let inst = Instance { tuple, k: args.k };
    let text = match args.format {
        InstanceFormat::Json => io::to_json(&inst, args.sparse)? + "\n",
        InstanceFormat::Csv => io::to_csv(&inst.tuple),
    };
    match &args.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(Error::from)?;
            Ok(Outcome {
                json: serde_json::json!({ "written": path.display().to_string() }),
                tsv: None,
                code: 0,
            })
        }
        None => Ok(Outcome {
            json: serde_json::Value::Null,
            tsv: Some(text),
            code: 0,
        }),
    }
}
