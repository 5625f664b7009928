use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use zptoric::tables::parse_bundle;
use zptoric::{
    build_checks, bundled_tables, exact_distance, estimate_distance_with, global_fit, k_max, k_twisted, linear_fit,
    pareto_front, parse_poly, per_p_slopes, published_records, read_csv, read_json, run_search_with, stabilizer_range,
    svg_plot, verify_d, verify_k, write_csv, write_json, CodeInstance, CodeRecord, Dimension, DVerdict,
    EstimateOptions, ExactDistance, PrimeModulus, SearchControl, SearchSpace, TorusSpec,
};

const EXIT_INPUT: u8 = 1;
const EXIT_NO_LOGICALS: u8 = 2;
const EXIT_ORACLE: u8 = 3;
const EXIT_TABLE: u8 = 4;
const EXIT_INTERRUPTED: u8 = 130;

/// Failure with a fixed exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

#[derive(Parser)]
#[command(name = "zptoric", version, about = "Generalized Z_p toric codes on twisted tori")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Refuse to pick a random seed; every randomized command needs --seed.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// n, k (both oracles), check weight, stabilizer range and optionally d.
    Params(ParamsArgs),
    /// Largest k over all tori, or "infinite" without topological order.
    Kmax(PolyArgs),
    /// Search the weight-6 family over a range of n.
    Search(SearchArgs),
    /// Least-squares fits of k d^2 / n.
    Fit(FitArgs),
    /// Recompute the published tables.
    Tables(TablesArgs),
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    g: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistanceMode {
    Exact,
    Estimate,
    None,
}

#[derive(Args)]
struct ParamsArgs {
    #[command(flatten)]
    poly: PolyArgs,
    #[arg(long)]
    alpha: usize,
    #[arg(long)]
    beta: usize,
    #[arg(long, allow_hyphen_values = true)]
    gamma: i64,
    #[arg(long, value_enum, default_value = "none")]
    distance: DistanceMode,
    #[arg(long, default_value_t = 1000)]
    sets: usize,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest weight tried by the exact search (default: n).
    #[arg(long)]
    wmax: Option<usize>,
    /// Write H_X and H_Z as plain-text matrices into this directory.
    #[arg(long)]
    export_checks: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    /// Results file; JSON if the name ends in .json, CSV otherwise.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    prune_sets: usize,
    #[arg(long, default_value_t = 1000)]
    sets: usize,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    /// Checkpoint directory; completed tori are reused on restart.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Keep only records on the (n, k d^2 / n) Pareto front.
    #[arg(long)]
    pareto: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitMode {
    Global,
    PerP,
    SlopesVsLnp,
}

#[derive(Args)]
struct FitArgs {
    /// Results files (CSV, or JSON if the name ends in .json).
    #[arg(long, num_args = 1..)]
    input: Vec<PathBuf>,
    /// Fit the published rows of an instance bundle.
    #[arg(long)]
    bundle: Option<PathBuf>,
    /// Fit the published rows of the bundled tables.
    #[arg(long)]
    tables: bool,
    #[arg(long, value_enum, default_value = "global")]
    mode: FitMode,
    /// Restrict each prime to its Pareto-front records.
    #[arg(long)]
    pareto: bool,
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct TablesArgs {
    /// Instance bundle (default: the bundled tables).
    #[arg(long)]
    bundle: Option<PathBuf>,
    #[arg(long)]
    verify_k: bool,
    #[arg(long)]
    verify_d: bool,
    #[arg(long, default_value_t = 1000)]
    sets: usize,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Stop each estimate once it reaches the published distance.
    #[arg(long)]
    early_stop: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            log::error!("{e:#}");
            ExitCode::from(code)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(Exit(code, _)) = e.downcast_ref::<Exit>() {
        return *code;
    }
    match e.downcast_ref::<zptoric::Error>() {
        Some(zptoric::Error::NoLogicals) => EXIT_NO_LOGICALS,
        Some(zptoric::Error::Interrupted) => EXIT_INTERRUPTED,
        _ => EXIT_INPUT,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads(cli.threads)?;
    let det = cli.deterministic;
    match cli.command {
        Command::Params(a) => cmd_params(a, det),
        Command::Kmax(a) => cmd_kmax(a),
        Command::Search(a) => cmd_search(a, det),
        Command::Fit(a) => cmd_fit(a),
        Command::Tables(a) => cmd_tables(a, det),
    }
}

fn configure_threads(flag: Option<usize>) -> anyhow::Result<()> {
    let n = match (flag, std::env::var("QCF_THREADS")) {
        (Some(n), _) => Some(n),
        (None, Ok(v)) => Some(v.trim().parse::<usize>().with_context(|| format!("QCF_THREADS={v:?}"))?),
        (None, Err(_)) => None,
    };
    if let Some(n) = n {
        if n == 0 {
            bail!("thread count must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn resolve_seed(seed: Option<u64>, deterministic: bool) -> anyhow::Result<u64> {
    match (seed, deterministic) {
        (Some(s), _) => Ok(s),
        (None, true) => bail!("--deterministic requires --seed"),
        (None, false) => {
            let s = rand::random();
            log::info!("using random seed {s}");
            Ok(s)
        }
    }
}

fn instance(poly: &PolyArgs, alpha: usize, beta: usize, gamma: i64) -> anyhow::Result<CodeInstance> {
    let p = PrimeModulus::new(poly.p)?;
    let f = parse_poly(&poly.f, p).context("parsing --f")?;
    let g = parse_poly(&poly.g, p).context("parsing --g")?;
    Ok(CodeInstance::new(f, g, TorusSpec::new(p, alpha, beta, gamma)?)?)
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_params(a: ParamsArgs, det: bool) -> anyhow::Result<()> {
    let c = instance(&a.poly, a.alpha, a.beta, a.gamma)?;
    let n = c.n();
    let k = k_twisted(&c.f, &c.g, &c.torus)?;
    let checks = build_checks(&c);
    let k_oracle = checks.k();
    if let Some(dir) = &a.export_checks {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("hx.txt"), checks.h_x.to_text())?;
        fs::write(dir.join("hz.txt"), checks.h_z.to_text())?;
    }
    let mut out = json!({
        "n": n,
        "k": k,
        "k_oracle": k_oracle,
        "weight_max": checks.max_row_weight(),
        "range": stabilizer_range(&c),
    });
    if k != k_oracle {
        print_json(&out)?;
        return Err(Exit(EXIT_ORACLE, format!("oracle disagreement: groebner k={k}, rank k={k_oracle}")).into());
    }
    match a.distance {
        DistanceMode::None => {}
        _ if k == 0 => return Err(zptoric::Error::NoLogicals.into()),
        DistanceMode::Exact => match exact_distance(&c, a.wmax.unwrap_or(n)) {
            ExactDistance::Value(d) => out["d_exact"] = json!(d),
            ExactDistance::Exceeds(w) => {
                out["d_exact"] = Value::Null;
                out["d_exceeds"] = json!(w);
            }
        },
        DistanceMode::Estimate => {
            let seed = resolve_seed(a.seed, det)?;
            let est = estimate_distance_with(&checks, &EstimateOptions::new(a.sets, a.repeats, seed))?;
            out["d_upper"] = json!(est.d_upper);
            out["d_x_upper"] = json!(est.d_x_upper);
            out["d_z_upper"] = json!(est.d_z_upper);
            out["sets"] = json!(est.information_sets);
            out["repeats"] = json!(est.repeats);
            out["seed"] = json!(est.seed);
            out["converged"] = json!(est.converged);
        }
    }
    print_json(&out)
}

fn cmd_kmax(a: PolyArgs) -> anyhow::Result<()> {
    let p = PrimeModulus::new(a.p)?;
    let f = parse_poly(&a.f, p).context("parsing --f")?;
    let g = parse_poly(&a.g, p).context("parsing --g")?;
    let out = match k_max(&f, &g)? {
        Dimension::Finite(k) => json!({ "k_max": k, "topological_order": true }),
        Dimension::Infinite => json!({ "k_max": "infinite", "topological_order": false }),
    };
    print_json(&out)
}

fn cmd_search(a: SearchArgs, det: bool) -> anyhow::Result<()> {
    let mut space = SearchSpace::new(PrimeModulus::new(a.p)?, a.n_min, a.n_max)?;
    space.seed = resolve_seed(a.seed, det)?;
    space.prune.sets = a.prune_sets;
    space.full.sets = a.sets;
    space.full.repeats = a.repeats;
    let interrupt = Arc::new(AtomicBool::new(false));
    {
        let flag = interrupt.clone();
        ctrlc::set_handler(move || flag.store(true, Ordering::SeqCst))?;
    }
    let control = SearchControl {
        resume_dir: a.resume.clone(),
        interrupt: Some(interrupt),
    };
    let outcome = run_search_with(&space, &control).map_err(|e| {
        if matches!(e, zptoric::Error::Interrupted) && a.resume.is_some() {
            log::warn!("interrupted; completed tori are checkpointed, rerun with the same --resume to continue");
        }
        e
    })?;
    let s = outcome.stats;
    log::info!(
        "candidates {}, degenerate {}, duplicates {}, k=0 {}, no topological order {}, pruned {}, emitted {}",
        s.visited,
        s.degenerate,
        s.duplicates,
        s.zero_k,
        s.not_topological,
        s.pruned,
        s.confirmed
    );
    let records = if a.pareto { pareto_front(&outcome.records) } else { outcome.records };
    write_records(&a.out, &records)?;
    if s.failures > 0 {
        return Err(Exit(EXIT_ORACLE, format!("{} candidates failed confirmation", s.failures)).into());
    }
    Ok(())
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn write_records(path: &Path, records: &[CodeRecord]) -> anyhow::Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    if is_json(path) {
        write_json(records, file)?;
    } else {
        write_csv(records, file)?;
    }
    Ok(())
}

fn read_records(path: &Path) -> anyhow::Result<Vec<CodeRecord>> {
    let file = BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?);
    let records = if is_json(path) { read_json(file) } else { read_csv(file) };
    records.with_context(|| format!("reading {}", path.display()))
}

fn load_bundle(path: Option<&Path>) -> anyhow::Result<Vec<zptoric::InstanceFile>> {
    match path {
        None => Ok(bundled_tables()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(parse_bundle(&text).with_context(|| format!("parsing {}", p.display()))?)
        }
    }
}

fn cmd_fit(a: FitArgs) -> anyhow::Result<()> {
    let mut records = Vec::new();
    for path in &a.input {
        records.extend(read_records(path)?);
    }
    if let Some(b) = &a.bundle {
        records.extend(published_records(&load_bundle(Some(b))?));
    }
    if a.tables {
        records.extend(published_records(&bundled_tables()));
    }
    if records.is_empty() {
        bail!("no records; pass --input, --bundle or --tables");
    }
    if a.pareto {
        let mut primes: Vec<u32> = records.iter().map(|r| r.p).collect();
        primes.sort_unstable();
        primes.dedup();
        records = primes
            .into_iter()
            .flat_map(|p| pareto_front(&records.iter().filter(|r| r.p == p).cloned().collect::<Vec<_>>()))
            .collect();
    }
    log::info!("fitting {} records", records.len());
    let report = per_p_slopes(&records);
    let (out, series, labels) = match a.mode {
        FitMode::Global => {
            let fit = global_fit(&records)?;
            let pts = records.iter().map(|r| (r.n as f64 * (r.p as f64).ln(), r.kd2_over_n)).collect();
            (json!(fit), vec![("all".to_string(), pts, Some(fit))], ("n ln p", "k d^2 / n"))
        }
        FitMode::PerP => {
            if report.per_p.is_empty() {
                return Err(anyhow!(zptoric::Error::DegenerateInput("no prime has two distinct n".into())));
            }
            let entries: Vec<Value> = report.per_p.iter().map(|(p, f)| json!({ "p": p, "fit": f })).collect();
            let series = report
                .per_p
                .iter()
                .map(|(p, f)| {
                    let pts = records.iter().filter(|r| r.p == *p).map(|r| (r.n as f64, r.kd2_over_n)).collect();
                    (format!("p={p}"), pts, Some(*f))
                })
                .collect();
            (Value::Array(entries), series, ("n", "k d^2 / n"))
        }
        FitMode::SlopesVsLnp => {
            let pts: Vec<(f64, f64)> = report.per_p.iter().map(|(p, f)| ((*p as f64).ln(), f.slope)).collect();
            let fit = linear_fit(&pts)?;
            let out = json!({
                "per_p": report.per_p.iter().map(|(p, f)| json!({ "p": p, "fit": f })).collect::<Vec<_>>(),
                "slope_vs_ln_p": fit,
            });
            (out, vec![("slopes".to_string(), pts, Some(fit))], ("ln p", "slope"))
        }
    };
    if let Some(path) = &a.plot {
        fs::write(path, svg_plot("k d^2 / n", labels.0, labels.1, &series))?;
    }
    print_json(&out)
}

fn cmd_tables(a: TablesArgs, det: bool) -> anyhow::Result<()> {
    let rows = load_bundle(a.bundle.as_deref())?;
    let verify_k_rows = a.verify_k || !a.verify_d;
    let mut k_checks = Vec::new();
    let mut mismatches = 0;
    if verify_k_rows {
        for row in &rows {
            let c = verify_k(row).with_context(|| format!("row {}", row.label()))?;
            if !c.ok {
                log::error!("k mismatch on {}: groebner {}, rank {}, n {}", c.label, c.k_groebner, c.k_linalg, c.n);
                mismatches += 1;
            }
            k_checks.push(c);
        }
        log::info!("k: {} rows, {} matches", rows.len(), rows.len() - mismatches);
    }
    let mut d_checks = Vec::new();
    if a.verify_d {
        let seed = resolve_seed(a.seed, det)?;
        for row in &rows {
            let mut opts = EstimateOptions::new(a.sets, a.repeats, seed);
            if let (true, Some(pb)) = (a.early_stop, row.published) {
                opts = opts.with_target(pb.d);
            }
            let c = verify_d(row, &opts).with_context(|| format!("row {}", row.label()))?;
            log::info!("{}: d_upper {} ({:?})", c.label, c.d_upper, c.verdict);
            d_checks.push(c);
        }
    }
    let count = |v: DVerdict| d_checks.iter().filter(|c| c.verdict == v).count();
    let mut out = json!({ "rows": rows.len() });
    if verify_k_rows {
        out["k_matches"] = json!(rows.len() - mismatches);
        out["k_mismatches"] = json!(mismatches);
        out["k"] = json!(k_checks);
    }
    if a.verify_d {
        out["d_match"] = json!(count(DVerdict::Match));
        out["d_below"] = json!(count(DVerdict::Below));
        out["d_above"] = json!(count(DVerdict::Above));
        out["d"] = json!(d_checks);
    }
    print_json(&out)?;
    if mismatches > 0 {
        return Err(Exit(EXIT_TABLE, format!("{mismatches} rows disagree on n or k")).into());
    }
    Ok(())
}
