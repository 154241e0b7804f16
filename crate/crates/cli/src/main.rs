use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use regclique::{
    certify_characteristic_vector, disprove_local_max, enumerate_maximal_cliques, first_order_check,
    max_clique_exact, motzkin_straus_value, multistart, parse_dimacs, verify_conditions, Clique, Graph, GraphJson,
    OptimalityReportF64, RegularizerSpec, RunReportF64, SecondOrder, SolveOptions, Witness, ENUMERATION_LIMIT, TOL,
};

const SCHEMA_VERSION: u32 = 1;

/// Exit codes beyond 0 (success) and 1 (a verification did not pass).
const EXIT_INPUT: u8 = 2;
const EXIT_INVALID: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "regclique", version, about = "Maximum clique search via regularized Motzkin-Straus programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multistart local maximization on one graph.
    Solve(SolveArgs),
    /// Sample-based check of the convexity, curvature and symmetry conditions.
    VerifyReg(VerifyRegArgs),
    /// Certify or disprove local maximality of a clique's characteristic vector.
    VerifyPoint(VerifyPointArgs),
    /// Exact clique number and maximal cliques.
    Oracle(OracleArgs),
    /// Solve every instance in a directory under several regularizers.
    Bench(BenchArgs),
    /// Write the built-in test graphs.
    Fixtures { dir: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RegKind {
    None,
    Bomze,
    Pnorm,
    Exp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// `auto` or an explicit weight.
#[derive(Clone, Copy, Debug)]
struct Weight(Option<f64>);

fn parse_weight(s: &str) -> Result<Weight, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Weight(None));
    }
    s.parse::<f64>().map(|v| Weight(Some(v))).map_err(|_| format!("expected `auto` or a number, got `{s}`"))
}

#[derive(Args, Clone, Copy)]
struct PenaltyParams {
    /// Exponent of the p-norm penalty.
    #[arg(long, default_value_t = regclique::regularizer::DEFAULT_P)]
    p: f64,
    /// Shift of the p-norm penalty.
    #[arg(long, default_value_t = regclique::regularizer::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Weight of the p-norm penalty; `auto` is 0.99 of its upper bound.
    #[arg(long, default_value = "auto", value_parser = parse_weight)]
    alpha1: Weight,
    /// Rate of the exponential penalty.
    #[arg(long, default_value_t = regclique::regularizer::DEFAULT_BETA)]
    beta: f64,
    /// Weight of the exponential penalty; `auto` is 0.99 of its upper bound.
    #[arg(long, default_value = "auto", value_parser = parse_weight)]
    alpha2: Weight,
}

impl PenaltyParams {
    fn spec(&self, kind: RegKind) -> regclique::Result<RegularizerSpec> {
        let spec = match kind {
            RegKind::None => RegularizerSpec::None,
            RegKind::Bomze => RegularizerSpec::Bomze,
            RegKind::Pnorm => RegularizerSpec::Pnorm { p: self.p, epsilon: self.epsilon, alpha1: self.alpha1.0 },
            RegKind::Exp => RegularizerSpec::Exp { beta: self.beta, alpha2: self.alpha2.0 },
        };
        spec.resolved()
    }
}

#[derive(Args)]
struct RunParams {
    #[arg(long, default_value_t = 100)]
    starts: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Run trials on the rayon thread pool.
    #[arg(long)]
    parallel: bool,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    fw_gap_tol: f64,
    /// Zero all timing fields so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

impl RunParams {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            max_iters: self.max_iters,
            fw_gap_tol: self.fw_gap_tol,
            starts: self.starts,
            seed: self.seed,
            parallel: self.parallel,
            escape_saddles: true,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS `.clq` file, or graph JSON with a `.json` extension.
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = RegKind::Pnorm)]
    reg: RegKind,
    #[command(flatten)]
    penalty: PenaltyParams,
    #[command(flatten)]
    run: RunParams,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyRegArgs {
    #[arg(long, value_enum)]
    reg: RegKind,
    #[command(flatten)]
    penalty: PenaltyParams,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyPointArgs {
    graph: PathBuf,
    #[arg(long, value_enum)]
    reg: RegKind,
    #[command(flatten)]
    penalty: PenaltyParams,
    /// Comma-separated 1-based vertex ids.
    #[arg(long)]
    clique: String,
}

#[derive(Args)]
struct OracleArgs {
    graph: PathBuf,
    /// List every maximal clique.
    #[arg(long)]
    enumerate: bool,
    /// Allow --enumerate on graphs with more than 64 vertices.
    #[arg(long)]
    force: bool,
    /// Seconds allowed for the exact search.
    #[arg(long)]
    time_budget: Option<f64>,
}

#[derive(Args)]
struct BenchArgs {
    dir: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bomze,pnorm,exp")]
    regs: Vec<RegKind>,
    #[command(flatten)]
    penalty: PenaltyParams,
    #[command(flatten)]
    run: RunParams,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error carrying its process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        Failure { code: classify(&error), error }
    }
}

fn classify(error: &anyhow::Error) -> u8 {
    for cause in error.chain() {
        if let Some(e) = cause.downcast_ref::<regclique::Error>() {
            return match e {
                regclique::Error::Parse { .. } | regclique::Error::Json(_) | regclique::Error::Io(_) => EXIT_INPUT,
                regclique::Error::Numerical(_) => 1,
                _ => EXIT_INVALID,
            };
        }
        if cause.is::<io::Error>() || cause.is::<csv::Error>() || cause.is::<serde_json::Error>() {
            return EXIT_INPUT;
        }
    }
    1
}

fn invalid(msg: String) -> Failure {
    Failure { code: EXIT_INVALID, error: anyhow!(msg) }
}

type CmdResult = Result<u8, Failure>;

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let graph = if path.extension().is_some_and(|e| e == "json") {
        let doc: GraphJson = serde_json::from_reader(BufReader::new(file))
            .with_context(|| format!("cannot parse {}", path.display()))?;
        Graph::from_json(&doc)
    } else {
        parse_dimacs(BufReader::new(file))
    };
    graph.with_context(|| format!("cannot read graph from {}", path.display()))
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn output(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(mut w: impl Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

const TABLE_HEADER: [&str; 7] = ["instance", "reg", "max", "mean", "std", "cpu_time", "omitted_count"];

fn table_record(r: &RunReportF64) -> Vec<String> {
    vec![
        r.instance.clone(),
        r.regularizer.kind().to_string(),
        r.max.to_string(),
        format!("{:.2}", r.mean),
        format!("{:.2}", r.std),
        format!("{:.4}", r.cpu_time_mean),
        r.omitted_count.to_string(),
    ]
}

fn run_solve(graph: &Graph, name: &str, spec: RegularizerSpec, run: &RunParams) -> regclique::Result<RunReportF64> {
    let reg = spec.build::<f64>()?;
    let report = multistart(name, graph, &reg, spec, &run.options())?;
    Ok(if run.no_timing { report.without_timing() } else { report })
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let spec = a.penalty.spec(a.reg)?;
    a.run.options().validate()?;
    let graph = load_graph(&a.graph)?;
    let report = run_solve(&graph, &instance_name(&a.graph), spec, &a.run)?;
    let mut w = output(a.out.as_deref())?;
    match a.format {
        Format::Json => write_json(w, &report)?,
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(TABLE_HEADER)?;
            csv.write_record(table_record(&report))?;
            csv.flush()?;
            drop(csv);
            w.flush()?;
        }
    }
    Ok(0)
}

fn cmd_verify_reg(a: VerifyRegArgs) -> CmdResult {
    let spec = a.penalty.spec(a.reg)?;
    let reg = spec.build::<f64>()?;
    let report = verify_conditions(&reg, spec, a.dim, a.samples, a.seed)?;
    let passed = report.passed.all();
    write_json(io::stdout().lock(), &Versioned { schema_version: SCHEMA_VERSION, body: report })?;
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct PointReport {
    regularizer: RegularizerSpec,
    clique: Clique,
    certified: bool,
    report: OptimalityReportF64,
    witness: Option<Witness<f64>>,
}

fn cmd_verify_point(a: VerifyPointArgs) -> CmdResult {
    let spec = a.penalty.spec(a.reg)?;
    let reg = spec.build::<f64>()?;
    let graph = load_graph(&a.graph)?;
    let clique = Clique::parse_one_based(&graph, &a.clique)?;
    let tol = TOL.tight_generator;
    let (report, witness) = if spec == RegularizerSpec::None {
        // no curvature certificate without a strictly convex penalty; look for a disproof
        let x = graph.characteristic_vector::<f64>(&clique);
        let mut report = first_order_check(&graph, &reg, &x, tol)?;
        let witness =
            if report.first_order_ok { disprove_local_max(&graph, &reg, &x, None, tol)? } else { None };
        if let Some(w) = &witness {
            report.second_order = SecondOrder::Failed;
            report.ascent_direction = Some(w.direction.clone());
        }
        (report, witness)
    } else {
        (certify_characteristic_vector(&graph, &reg, &clique, tol)?, None)
    };
    let certified = report.first_order_ok && report.second_order == SecondOrder::Passed;
    let body = PointReport { regularizer: spec, clique, certified, report, witness };
    write_json(io::stdout().lock(), &Versioned { schema_version: SCHEMA_VERSION, body })?;
    Ok(if certified { 0 } else { 1 })
}

#[derive(Serialize)]
struct OracleReport {
    instance: String,
    n: usize,
    edge_count: usize,
    omega: usize,
    /// False when the time budget ran out; `omega` is then a lower bound.
    proven: bool,
    max_clique: Clique,
    ms_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    maximal_cliques: Option<Vec<Clique>>,
}

fn cmd_oracle(a: OracleArgs) -> CmdResult {
    let budget = match a.time_budget {
        Some(s) if !(s > 0.0 && s.is_finite()) => return Err(invalid(format!("time budget {s} must be positive"))),
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    let graph = load_graph(&a.graph)?;
    if a.enumerate && graph.n() > ENUMERATION_LIMIT && !a.force {
        return Err(invalid(format!(
            "refusing to enumerate maximal cliques of a {}-vertex graph (limit {ENUMERATION_LIMIT}); pass --force",
            graph.n()
        )));
    }
    let best = max_clique_exact(&graph, budget);
    let maximal_cliques = a.enumerate.then(|| enumerate_maximal_cliques(&graph));
    let body = OracleReport {
        instance: instance_name(&a.graph),
        n: graph.n(),
        edge_count: graph.edge_count(),
        omega: best.omega,
        proven: best.proven,
        ms_value: motzkin_straus_value(best.omega)?,
        max_clique: best.clique,
        maximal_cliques,
    };
    write_json(io::stdout().lock(), &Versioned { schema_version: SCHEMA_VERSION, body })?;
    if best.proven {
        Ok(0)
    } else {
        eprintln!("time budget exhausted; best clique found has size {}", best.omega);
        Ok(EXIT_BUDGET)
    }
}

fn instance_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("cannot list {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "clq" || e == "col") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    a.run.options().validate()?;
    let specs = a.regs.iter().map(|&k| a.penalty.spec(k)).collect::<regclique::Result<Vec<_>>>()?;
    let files = instance_files(&a.dir)?;
    let mut w = output(a.out.as_deref())?;
    let mut csv = csv::Writer::from_writer(&mut w);
    let mut header = TABLE_HEADER.to_vec();
    header.push("error");
    csv.write_record(&header)?;
    for path in files {
        let name = instance_name(&path);
        let graph = load_graph(&path);
        for &spec in &specs {
            let row = match &graph {
                Ok(g) => match run_solve(g, &name, spec, &a.run) {
                    Ok(report) => {
                        let mut rec = table_record(&report);
                        rec.push(String::new());
                        rec
                    }
                    Err(e) => error_record(&name, spec, &e.to_string()),
                },
                Err(e) => error_record(&name, spec, &format!("{e:#}")),
            };
            csv.write_record(&row)?;
            csv.flush()?;
        }
    }
    drop(csv);
    w.flush()?;
    Ok(0)
}

fn error_record(name: &str, spec: RegularizerSpec, msg: &str) -> Vec<String> {
    let mut rec = vec![name.to_string(), spec.kind().to_string()];
    rec.extend(std::iter::repeat_n(String::new(), 5));
    rec.push(msg.to_string());
    rec
}

fn cmd_fixtures(dir: PathBuf) -> CmdResult {
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let fixtures = [
        ("k3", Graph::complete(3)?, "triangle"),
        ("fig1", Graph::figure1(), "maximal cliques {1,2} {1,3,4} {2,5} {3,4,5}"),
        ("hamming8-4", Graph::hamming(8, 4)?, "binary words of length 8, adjacent at Hamming distance >= 4"),
    ];
    for (name, graph, comment) in fixtures {
        let clq = dir.join(format!("{name}.clq"));
        let mut w = BufWriter::new(File::create(&clq).with_context(|| format!("cannot create {}", clq.display()))?);
        graph.write_dimacs(&mut w, Some(comment))?;
        w.flush()?;
        let json = dir.join(format!("{name}.json"));
        write_json(File::create(&json).with_context(|| format!("cannot create {}", json.display()))?, &graph.to_json())?;
        println!("{}", clq.display());
        println!("{}", json.display());
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::VerifyReg(a) => cmd_verify_reg(a),
        Command::VerifyPoint(a) => cmd_verify_point(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Fixtures { dir } => cmd_fixtures(dir),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
