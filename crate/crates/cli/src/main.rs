use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use planarflow::dimacs::import_dimacs;
use planarflow::engine::{msms_max_flow, Config, MaxFlowRun};
use planarflow::generate::{generate, GenParams, Kind};
use planarflow::instance::{parse_raw, serialize_instance, Instance};
use planarflow::planar::{Capacity, DartGraph};
use planarflow::report::{run_bench, BenchPlan, RunReport};
use planarflow::solvers::{oracle_for_graph, BackendKind};

const EXIT_PARSE: u8 = 2;
const EXIT_AUDIT: u8 = 3;
const EXIT_ORACLE: u8 = 4;

#[derive(Parser)]
#[command(name = "planarflow", version, about = "Multiple-source multiple-sink max flow in planar graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file
    Solve(SolveArgs),
    /// Solve generated instances, compare with the oracle and run every audit
    Check(CheckArgs),
    /// Write a generated instance
    Gen(GenArgs),
    /// Time the solver over a range of sizes and print CSV
    Bench(BenchArgs),
    /// Convert a grid-shaped DIMACS max-flow file to the instance format
    Dimacs(DimacsArgs),
}

#[derive(Args)]
struct EngineArgs {
    /// key=value config file (backend, base_case, audit, trace, seed)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the backend (dinic, augment)
    #[arg(long)]
    backend: Option<String>,
    /// Override the base-case size
    #[arg(long)]
    base_case: Option<usize>,
}

impl EngineArgs {
    fn load(&self) -> Result<Config, String> {
        let mut config = match &self.config {
            Some(path) => Config::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?,
            None => Config::default(),
        };
        if let Some(name) = &self.backend {
            config.backend = BackendKind::by_name(name).ok_or_else(|| format!("unknown backend {name:?}"))?;
        }
        if let Some(b) = self.base_case {
            config.base_case = b;
        }
        Ok(config)
    }
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// Print the flow on every arc
    #[arg(long)]
    dump_flow: bool,
    /// Compare with the oracle
    #[arg(long)]
    oracle: bool,
    /// Run all audits
    #[arg(long)]
    audit: bool,
    /// Write one JSON trace record per executed step
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Solve each connected component separately
    #[arg(long)]
    components: bool,
    /// Print a JSON run report instead of the plain value
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value = "grid")]
    kind: Kind,
    /// Largest instance size; sizes are spread over 2..=n
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "grid")]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    cap_max: Capacity,
    #[arg(long, default_value_t = 0.05)]
    s_frac: f64,
    #[arg(long, default_value_t = 0.05)]
    t_frac: f64,
    /// Output file (stdout if absent)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance kinds, comma separated
    #[arg(long, value_delimiter = ',', default_value = "grid,tri")]
    kind: Vec<Kind>,
    /// Sizes, comma separated
    #[arg(long, value_delimiter = ',', default_value = "250,500,1000,2000,4000")]
    sizes: Vec<usize>,
    /// Instances per size and kind
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also check every value against the oracle
    #[arg(long)]
    oracle: bool,
    /// Write per-level piece data as CSV to this file
    #[arg(long)]
    levels: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct DimacsArgs {
    file: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Check(args) => check(args),
        Command::Gen(args) => gen(args),
        Command::Bench(args) => bench(args),
        Command::Dimacs(args) => dimacs(args),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

struct Failure(u8, String);

fn usage(message: String) -> Failure {
    Failure(1, message)
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| usage(e.to_string())),
    }
}

/// A solved component with its arcs in the numbering of the input file.
struct Solved {
    run: MaxFlowRun,
    oracle: Option<Capacity>,
    arcs: Vec<usize>,
}

fn solve(args: SolveArgs) -> Result<ExitCode, Failure> {
    let mut config = args.engine.load().map_err(usage)?;
    config.audit |= args.audit;
    config.trace |= args.trace.is_some();
    let text = read(&args.file).map_err(usage)?;
    let raw = parse_raw(&text).map_err(|e| Failure(EXIT_PARSE, e.to_string()))?;
    let total_arcs = raw.arcs.len();
    let parts: Vec<(Instance, Vec<usize>)> = if args.components {
        raw.components().map_err(|e| Failure(EXIT_PARSE, e.to_string()))?.into_iter().map(|c| (c.instance, c.arcs)).collect()
    } else {
        let inst = raw.into_instance().map_err(|e| Failure(EXIT_PARSE, e.to_string()))?;
        let arcs = (0..inst.graph.arc_count()).collect();
        vec![(inst, arcs)]
    };

    let start = Instant::now();
    let mut solved = Vec::new();
    for (inst, arcs) in parts {
        let run = msms_max_flow(&inst.graph, &inst.terminals, &config).map_err(|e| usage(format!("solver error: {e}")))?;
        let oracle = args.oracle.then(|| oracle_for_graph(&inst.graph, inst.terminals.sources(), inst.terminals.sinks()).0.value);
        solved.push(Solved { run, oracle, arcs });
    }
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let value: Capacity = solved.iter().map(|s| s.run.value).sum();
    let oracle: Option<Capacity> = args.oracle.then(|| solved.iter().filter_map(|s| s.oracle).sum());
    let failures: Vec<_> = solved.iter().flat_map(|s| s.run.failures.iter()).collect();

    if let Some(path) = &args.trace {
        let mut out = String::new();
        for (component, s) in solved.iter().enumerate() {
            for record in &s.run.trace {
                let mut json = serde_json::to_value(record).expect("trace record serializes");
                json["component"] = component.into();
                out.push_str(&json.to_string());
                out.push('\n');
            }
        }
        fs::write(path, out).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }

    if args.json {
        let reports: Vec<RunReport> = solved.iter().map(|s| RunReport::new(&s.run, s.oracle, wall_ms)).collect();
        println!("{}", serde_json::to_string_pretty(&reports).expect("report serializes"));
    } else {
        println!("value {value}");
        if let Some(o) = oracle {
            println!("oracle {o}");
        }
    }
    if args.dump_flow {
        let mut flow = vec![0; total_arcs];
        for s in &solved {
            for (local, &global) in s.arcs.iter().enumerate() {
                flow[global] = s.run.flow.arc_values()[local];
            }
        }
        let mut out = String::new();
        for (a, x) in flow.iter().enumerate() {
            out.push_str(&format!("f {} {x}\n", a + 1));
        }
        write_output(None, &out)?;
    }
    for f in &failures {
        eprintln!("audit failed: {} item {} at level {}: {}", f.check.name(), f.item, f.level, f.detail);
    }
    if oracle.is_some_and(|o| o != value) {
        return Err(Failure(EXIT_ORACLE, format!("value {value} differs from oracle {}", oracle.unwrap())));
    }
    if !failures.is_empty() {
        return Err(Failure(EXIT_AUDIT, format!("{} audit failures", failures.len())));
    }
    Ok(ExitCode::SUCCESS)
}

/// Instance `i` of a check run has `2 + (seed + i) * 7919 mod (n - 1)` nodes,
/// so any failure is reproducible from the seed and index alone.
fn check_size(n: usize, seed: u64, i: u64) -> usize {
    if n <= 2 {
        return 2;
    }
    2 + ((seed.wrapping_add(i)).wrapping_mul(7919) % (n as u64 - 1)) as usize
}

fn check(args: CheckArgs) -> Result<ExitCode, Failure> {
    let mut config = args.engine.load().map_err(usage)?;
    config.audit = true;
    let (mut mismatches, mut audit_failures) = (0, 0);
    for i in 0..args.count {
        let seed = args.seed + i;
        let n = check_size(args.n, args.seed, i);
        let mut params = GenParams::new(args.kind, n, seed);
        params.source_fraction = 0.1;
        params.sink_fraction = 0.1;
        let inst = generate(&params);
        let run = msms_max_flow(&inst.graph, &inst.terminals, &config).map_err(|e| usage(format!("seed {seed}, n {n}: solver error: {e}")))?;
        let oracle = oracle_for_graph(&inst.graph, inst.terminals.sources(), inst.terminals.sinks()).0.value;
        if oracle != run.value {
            mismatches += 1;
            println!("MISMATCH seed {seed} n {n}: value {} oracle {oracle}", run.value);
        }
        if !run.failures.is_empty() {
            audit_failures += 1;
            println!("AUDIT seed {seed} n {n}: {} failures, first {:?}", run.failures.len(), run.failures[0]);
        }
    }
    println!("checked {} {} instances (n <= {}, seed {}): {mismatches} oracle mismatches, {audit_failures} with audit failures", args.count, args.kind.name(), args.n, args.seed);
    if mismatches > 0 {
        return Ok(ExitCode::from(EXIT_ORACLE));
    }
    if audit_failures > 0 {
        return Ok(ExitCode::from(EXIT_AUDIT));
    }
    Ok(ExitCode::SUCCESS)
}

fn gen(args: GenArgs) -> Result<ExitCode, Failure> {
    if args.n < 2 || args.cap_max < 1 {
        return Err(usage("need n >= 2 and cap-max >= 1".into()));
    }
    let params = GenParams { kind: args.kind, n: args.n, seed: args.seed, cap_max: args.cap_max, source_fraction: args.s_frac, sink_fraction: args.t_frac };
    let text = serialize_instance(&generate(&params));
    write_output(args.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> Result<ExitCode, Failure> {
    let config = args.engine.load().map_err(usage)?;
    if args.sizes.iter().any(|&n| n < 2) {
        return Err(usage("sizes must be at least 2".into()));
    }
    let plan = BenchPlan { kinds: args.kind, sizes: args.sizes, seeds: args.seeds, seed: args.seed, config, oracle: args.oracle };
    let report = run_bench(&plan).map_err(|e| usage(format!("solver error: {e}")))?;
    print!("{}", report.csv());
    if let Some(path) = &args.levels {
        fs::write(path, report.levels_csv()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    if report.rows.iter().any(|r| r.oracle_ok == Some(false)) {
        return Ok(ExitCode::from(EXIT_ORACLE));
    }
    Ok(ExitCode::SUCCESS)
}

fn dimacs(args: DimacsArgs) -> Result<ExitCode, Failure> {
    let text = read(&args.file).map_err(usage)?;
    let inst = import_dimacs(&text).map_err(|e| Failure(EXIT_PARSE, e.to_string()))?;
    write_output(args.output.as_deref(), &serialize_instance(&inst))?;
    Ok(ExitCode::SUCCESS)
}
