//! Command-line front end for the milling cost optimizer.
//!
//! Every subcommand prints one CSV table on stdout and a human-readable
//! summary on stderr. With `--out <dir>` the CSV, the summary, any per-run
//! GA histories, and a reproducibility manifest (the full effective
//! configuration plus the seed list) are also written as files.
//!
//! Exit codes: 0 success, 2 configuration error, 3 infeasible problem,
//! 4 I/O error.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use millopt_core::analysis::{
    dt_sweep, estimate_plan, sensitivity_sweep, ConstraintKind, Engine, EstimateMode, SweepOutcome,
};
use millopt_core::config::Settings;
use millopt_core::ga::{self, dominance, GaConfig, RunResult};
use millopt_core::lookup::PairTable;
use millopt_core::model::{Model, Plan};
use millopt_core::oracle;
use millopt_core::problem::{mm_to_tenths, tenths_to_mm};
use millopt_core::sizing;
use millopt_core::Error;

/// Published reference optima for the embedded dataset, in $/piece by total
/// stock (tenths of mm). Literature values for comparison only — never
/// recomputed here.
const REFERENCE_A: [(u32, f64); 2] = [(60, 1.4858), (80, 1.8523)];
const REFERENCE_B: [(u32, f64); 1] = [(80, 2.0086)];

/// A run counts as successful when its cost lands within this relative
/// distance of the exact optimum.
const SUCCESS_TOLERANCE: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(
    name = "millopt",
    version,
    about = "Minimum-cost cutting conditions for multi-pass face milling"
)]
struct Cli {
    /// Config file of `key = value` lines overriding the embedded dataset.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for the CSV, summary, manifest, and GA history files.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Base RNG seed, overriding the configured one.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the model-coefficient derivation and consistency report.
    Derive,
    /// Enumerate the feasible depth-of-cut allocations for a total stock.
    Table {
        /// Total stock to remove (mm, on the 0.1 mm grid).
        #[arg(long)]
        dt: f64,
    },
    /// Minimize unit cost with the genetic algorithm.
    Optimize {
        /// Total stock to remove (mm, on the 0.1 mm grid).
        #[arg(long)]
        dt: f64,
        /// Independent runs, seeded base, base+1, … (one CSV row each).
        #[arg(long, default_value_t = 1)]
        runs: u32,
        /// Population size (overrides the configured value).
        #[arg(long)]
        pop: Option<usize>,
        /// Generation count (overrides the configured value).
        #[arg(long)]
        gens: Option<usize>,
        /// Crossover probability (overrides the configured value).
        #[arg(long)]
        pc: Option<f64>,
        /// Per-bit mutation probability (overrides the configured value).
        #[arg(long)]
        pm: Option<f64>,
        /// Bits per real-valued decision variable (overrides the configured value).
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Exact per-allocation optima from the closed-form solver.
    Oracle {
        /// Total stock to remove (mm, on the 0.1 mm grid).
        #[arg(long)]
        dt: f64,
    },
    /// Optimal plan as a function of total stock.
    Sweep {
        /// First stock value (mm).
        #[arg(long)]
        from: f64,
        /// Last stock value (mm, inclusive).
        #[arg(long)]
        to: f64,
        /// Stock increment (mm).
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        /// Solver producing each row.
        #[arg(long, value_enum, default_value_t = EngineArg::Ga)]
        engine: EngineArg,
    },
    /// Optimal cost as a force or power limit is scaled.
    Sensitivity {
        /// Total stock to remove (mm, on the 0.1 mm grid).
        #[arg(long)]
        dt: f64,
        /// Which limit to scale.
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
        /// First multiplier.
        #[arg(long, default_value_t = 0.8)]
        from: f64,
        /// Last multiplier (inclusive).
        #[arg(long, default_value_t = 1.3)]
        to: f64,
        /// Multiplier increment.
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Solver producing each point.
        #[arg(long, value_enum, default_value_t = EngineArg::Oracle)]
        engine: EngineArg,
    },
    /// Closed-form plan estimate, no optimizer run.
    Estimate {
        /// Total stock to remove (mm, on the 0.1 mm grid).
        #[arg(long)]
        dt: f64,
        /// Also cap the rough feed by the power limit at the default speed.
        #[arg(long)]
        clip_power: bool,
        /// Try one more pass when the computed count has no allocation.
        #[arg(long)]
        allow_fallback: bool,
    },
    /// Schema-coverage table for choosing the population size.
    Popsize {
        /// Genome length in bits.
        #[arg(long, default_value_t = 65)]
        length: u32,
        /// Largest population evaluated.
        #[arg(long, default_value_t = 5000)]
        mu_max: u64,
    },
    /// Fraction of seeded runs reaching the exact optimum per mutation rate.
    SuccessRate {
        /// Total stock to remove (mm, on the 0.1 mm grid).
        #[arg(long)]
        dt: f64,
        /// Mutation probabilities to test (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "0.05")]
        pm: Vec<f64>,
        /// Seeded runs per mutation probability.
        #[arg(long, default_value_t = 20)]
        runs: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum EngineArg {
    Oracle,
    Ga,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum KindArg {
    Force,
    Power,
    Both,
}

/// Any failure the CLI can exit on, mapped to its exit code.
#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(std::io::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(Error::Config { .. }) | Failure::Core(Error::InvalidInput(_)) => 2,
            Failure::Core(_) => 3,
            Failure::Io(_) => 4,
        }
    }
}

/// Formats a float to fixed decimals, with lowercase `nan` for CSV use.
fn num(x: f64, decimals: usize) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.decimals$}")
    }
}

/// One subcommand's complete output: the primary CSV, the human summary,
/// and any extra files (name, contents) to place in the output directory.
struct Report {
    csv_name: &'static str,
    csv: String,
    summary: String,
    extra_files: Vec<(String, String)>,
    seeds: Vec<u64>,
}

impl Report {
    fn new(csv_name: &'static str) -> Self {
        Report {
            csv_name,
            csv: String::new(),
            summary: String::new(),
            extra_files: Vec::new(),
            seeds: Vec::new(),
        }
    }

    fn row(&mut self, line: &str) {
        self.csv.push_str(line);
        self.csv.push('\n');
    }

    fn note(&mut self, line: &str) {
        self.summary.push_str(line);
        self.summary.push('\n');
    }
}

/// Entry point shared by `main` and the tests: parses `args` (without the
/// program name), runs the subcommand, and returns the process exit code.
pub fn run_with_args(args: &[&str], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = std::iter::once("millopt").chain(args.iter().copied());
    let matches = Cli::command().color(clap::ColorChoice::Never).try_get_matches_from(argv);
    let cli = match matches {
        Ok(m) => match Cli::from_arg_matches(&m) {
            Ok(cli) => cli,
            Err(e) => {
                let _ = write!(err, "{e}");
                return 2;
            }
        },
        Err(e) => {
            // Help and version requests arrive here too; they are not errors.
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, args) {
        Ok(report) => match emit(&cli, &report, args, out, err) {
            Ok(()) => 0,
            Err(failure) => {
                let _ = writeln!(err, "error: {failure}");
                failure.exit_code()
            }
        },
        Err(failure) => {
            let _ = writeln!(err, "error: {failure}");
            failure.exit_code()
        }
    }
}

/// Loads the effective settings: embedded defaults, then the config file,
/// then command-line overrides.
fn load_settings(cli: &Cli) -> Result<Settings, Failure> {
    let mut settings = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Settings::from_str(&text)?
        }
        None => Settings::default(),
    };
    if let Some(seed) = cli.seed {
        settings.ga.seed = seed;
    }
    Ok(settings)
}

fn execute(cli: &Cli, _raw_args: &[&str]) -> Result<Report, Failure> {
    let settings = load_settings(cli)?;
    let model = Model::new(settings.problem.clone())?;
    match &cli.command {
        Command::Derive => cmd_derive(&model),
        Command::Table { dt } => cmd_table(&model, *dt),
        Command::Optimize { dt, runs, pop, gens, pc, pm, bits } => {
            let mut settings = settings.clone();
            if let Some(pop) = pop {
                settings.ga.pop_size = *pop;
            }
            if let Some(gens) = gens {
                settings.ga.generations = *gens;
            }
            if let Some(pc) = pc {
                settings.ga.p_c = *pc;
            }
            if let Some(pm) = pm {
                settings.ga.p_m = *pm;
            }
            if let Some(bits) = bits {
                settings.ga.bits = *bits;
            }
            cmd_optimize(&model, &settings, *dt, *runs)
        }
        Command::Oracle { dt } => cmd_oracle(&model, *dt),
        Command::Sweep { from, to, step, engine } => {
            cmd_sweep(&model, &settings, *from, *to, *step, *engine)
        }
        Command::Sensitivity { dt, kind, from, to, step, engine } => {
            cmd_sensitivity(&model, &settings, *dt, *kind, *from, *to, *step, *engine)
        }
        Command::Estimate { dt, clip_power, allow_fallback } => {
            cmd_estimate(&model, *dt, *clip_power, *allow_fallback)
        }
        Command::Popsize { length, mu_max } => cmd_popsize(*length, *mu_max),
        Command::SuccessRate { dt, pm, runs } => {
            cmd_success_rate(&model, &settings, *dt, pm, *runs)
        }
    }
}

/// Writes the report to the console streams and, with `--out`, to files.
fn emit(
    cli: &Cli,
    report: &Report,
    raw_args: &[&str],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    out.write_all(report.csv.as_bytes())?;
    err.write_all(report.summary.as_bytes())?;
    let Some(dir) = &cli.out else {
        return Ok(());
    };
    std::fs::create_dir_all(dir)?;
    let mut written: Vec<String> = vec![report.csv_name.to_string()];
    std::fs::write(dir.join(report.csv_name), &report.csv)?;
    for (name, contents) in &report.extra_files {
        std::fs::write(dir.join(name), contents)?;
        written.push(name.clone());
    }
    std::fs::write(dir.join("summary.txt"), &report.summary)?;
    written.push("summary.txt".to_string());
    written.push("manifest.txt".to_string());
    let manifest = manifest_text(cli, report, raw_args, &written)?;
    std::fs::write(dir.join("manifest.txt"), manifest)?;
    writeln!(err, "wrote {} file(s) to {}", written.len(), dir.display())?;
    Ok(())
}

/// The reproducibility manifest: invocation, seeds, produced files, and the
/// full effective configuration (parseable back as a config file).
fn manifest_text(
    cli: &Cli,
    report: &Report,
    raw_args: &[&str],
    written: &[String],
) -> Result<String, Failure> {
    let settings = load_settings(cli)?;
    let mut text = String::new();
    text.push_str(&format!("# invocation: millopt {}\n", raw_args.join(" ")));
    if !report.seeds.is_empty() {
        let seeds: Vec<String> = report.seeds.iter().map(u64::to_string).collect();
        text.push_str(&format!("# seeds: {}\n", seeds.join(",")));
    }
    text.push_str(&format!("# outputs: {}\n", written.join(", ")));
    text.push_str("# effective configuration:\n");
    text.push_str(&settings.manifest());
    Ok(text)
}

fn cmd_derive(model: &Model) -> Result<Report, Failure> {
    let mut report = Report::new("derive.csv");
    report.row("name,derived,supplied,rel_diff,flag");
    for row in &model.derivation().rows {
        let supplied = row.supplied.map(|v| format!("{v:.9e}")).unwrap_or_default();
        let rel = row.rel_diff.map(|v| format!("{v:.3e}")).unwrap_or_default();
        report.row(&format!("{},{:.9e},{},{},{}", row.name, row.derived, supplied, rel, row.flag));
    }
    let mode = match model.problem().coeff_mode {
        millopt_core::problem::CoeffMode::Derived => "derived",
        millopt_core::problem::CoeffMode::Supplied => "supplied",
    };
    report.note(&format!("active coefficient mode: {mode}"));
    let mismatches = model.derivation().rows.iter().filter(|r| r.flag == "mismatch").count();
    report.note(&format!(
        "{} coefficient(s) flagged as mismatched against supplied values",
        mismatches
    ));
    if let Some(warning) = &model.derivation().swap_warning {
        report.note(&format!("warning: {warning}"));
    }
    Ok(report)
}

fn cmd_table(model: &Model, dt: f64) -> Result<Report, Failure> {
    let dt_tenths = mm_to_tenths(dt, "dt")?;
    let table = PairTable::build(model.problem(), dt_tenths)?;
    let mut report = Report::new("table.csv");
    report.row("pair,ds_mm,dr_mm,n");
    for e in table.entries() {
        report.row(&format!(
            "{},{},{},{}",
            e.index,
            num(tenths_to_mm(e.ds_tenths), 1),
            num(tenths_to_mm(e.dr_tenths), 1),
            e.n
        ));
    }
    report.note(&format!(
        "{} feasible depth allocation(s) for d_t = {} mm",
        table.len(),
        num(dt, 1)
    ));
    Ok(report)
}

/// Runs the GA once per seed, in parallel, preserving seed order.
fn run_seeded(
    model: &Model,
    table: &PairTable,
    base: &GaConfig,
    seeds: &[u64],
) -> Result<Vec<RunResult>, Failure> {
    base.validate()?;
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let chunk_size = seeds.len().div_ceil(workers).max(1);
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .chunks(chunk_size)
            .map(|chunk| {
                scope.spawn(move || {
                    chunk
                        .iter()
                        .map(|&seed| {
                            let config = GaConfig { seed, ..base.clone() };
                            ga::run(model, table, &config)
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        let mut all = Vec::with_capacity(seeds.len());
        for handle in handles {
            all.extend(handle.join().expect("GA worker thread panicked")?);
        }
        Ok::<_, Error>(all)
    })?;
    Ok(results)
}

/// `dt,Vs,Vr,fs,fr,ds,dr,n,CV,UC,Ts,Tr` row for a plan.
fn plan_row(model: &Model, dt_tenths: u32, plan: &Plan, cv: f64, uc: f64) -> String {
    let t_s = model.tool_life(plan.v_s, plan.ds_mm(), plan.f_s).unwrap_or(f64::NAN);
    let t_r = model.tool_life(plan.v_r, plan.dr_mm(), plan.f_r).unwrap_or(f64::NAN);
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        num(tenths_to_mm(dt_tenths), 1),
        num(plan.v_s, 2),
        num(plan.v_r, 2),
        num(plan.f_s, 4),
        num(plan.f_r, 4),
        num(plan.ds_mm(), 1),
        num(plan.dr_mm(), 1),
        plan.n,
        num(cv, 6),
        num(uc, 4),
        num(t_s, 1),
        num(t_r, 1)
    )
}

fn describe_plan(plan: &Plan) -> String {
    format!(
        "d_s = {} mm, d_r = {} mm, n = {}, V_s = {} m/min, f_s = {} mm/tooth, \
         V_r = {} m/min, f_r = {} mm/tooth",
        num(plan.ds_mm(), 1),
        num(plan.dr_mm(), 1),
        plan.n,
        num(plan.v_s, 2),
        num(plan.f_s, 4),
        num(plan.v_r, 2),
        num(plan.f_r, 4)
    )
}

/// Literature-comparison summary lines for stocks with published optima.
fn reference_notes(report: &mut Report, dt_tenths: u32, uc: f64) {
    let mut compare = |label: &str, refs: &[(u32, f64)]| {
        if let Some((_, reference)) = refs.iter().find(|(t, _)| *t == dt_tenths) {
            let gain = (reference - uc) / uc * 100.0;
            let verdict = if gain >= 0.0 { "improves on" } else { "falls behind" };
            report.note(&format!(
                "{verdict} published {label} ({} $/piece) by {}%",
                num(*reference, 4),
                num(gain.abs(), 2)
            ));
        }
    };
    compare("reference A", &REFERENCE_A);
    compare("reference B", &REFERENCE_B);
}

fn cmd_optimize(model: &Model, settings: &Settings, dt: f64, runs: u32) -> Result<Report, Failure> {
    if runs == 0 {
        return Err(Error::InvalidInput("--runs must be at least 1".into()).into());
    }
    let dt_tenths = mm_to_tenths(dt, "dt")?;
    let table = PairTable::build(model.problem(), dt_tenths)?;
    let seeds: Vec<u64> = (0..u64::from(runs)).map(|k| settings.ga.seed + k).collect();
    let results = run_seeded(model, &table, &settings.ga, &seeds)?;

    let mut report = Report::new("optimize.csv");
    report.seeds = seeds;
    report.row("dt,Vs,Vr,fs,fr,ds,dr,n,CV,UC,Ts,Tr");
    for result in &results {
        let best = &result.best;
        report.row(&plan_row(model, dt_tenths, &best.plan, best.cv, best.uc));
        let converged = match result.convergence_gen {
            Some(g) => format!("converged at generation {g}"),
            None => "did not converge".to_string(),
        };
        report.note(&format!(
            "run seed {}: UC = {} $/piece, CV = {}, {}, {} evaluations",
            result.seed,
            num(best.uc, 4),
            num(best.cv, 6),
            converged,
            result.evaluations
        ));
        report.extra_files.push((format!("history_seed{}.csv", result.seed), history_csv(result)));
    }
    let overall =
        results.iter().map(|r| &r.best).min_by(|a, b| dominance(a, b)).expect("at least one run");
    report.note(&format!(
        "best of {} run(s): UC = {} $/piece with {}",
        results.len(),
        num(overall.uc, 4),
        describe_plan(&overall.plan)
    ));
    match oracle::global_optimum(model, &table) {
        Ok(exact) => {
            let gap = (overall.uc - exact.uc) / exact.uc * 100.0;
            report.note(&format!(
                "exact optimum: UC = {} $/piece at (d_s = {}, d_r = {}, n = {}); GA gap {}%",
                num(exact.uc, 4),
                num(tenths_to_mm(exact.entry.ds_tenths), 1),
                num(tenths_to_mm(exact.entry.dr_tenths), 1),
                exact.entry.n,
                num(gap, 3)
            ));
            if results.len() > 1 {
                let hits = results
                    .iter()
                    .filter(|r| {
                        r.best.is_feasible() && r.best.uc <= exact.uc * (1.0 + SUCCESS_TOLERANCE)
                    })
                    .count();
                report.note(&format!(
                    "success rate: {hits}/{} run(s) within {}% of the exact optimum ({}%)",
                    results.len(),
                    num(SUCCESS_TOLERANCE * 100.0, 2),
                    num(hits as f64 / results.len() as f64 * 100.0, 1)
                ));
            }
        }
        Err(e) => report.note(&format!("exact optimum unavailable: {e}")),
    }
    if overall.is_feasible() {
        reference_notes(&mut report, dt_tenths, overall.uc);
    }
    Ok(report)
}

fn history_csv(result: &RunResult) -> String {
    let mut text = String::from("gen,best,avg,gap\n");
    for s in &result.history {
        text.push_str(&format!(
            "{},{},{},{}\n",
            s.gen,
            num(s.best_uc, 6),
            num(s.mean_uc, 6),
            num(s.gap, 6)
        ));
    }
    text
}

fn cmd_oracle(model: &Model, dt: f64) -> Result<Report, Failure> {
    let dt_tenths = mm_to_tenths(dt, "dt")?;
    let table = PairTable::build(model.problem(), dt_tenths)?;
    let rows = oracle::enumerate_local_optima(model, &table)?;
    let best = rows
        .iter()
        .min_by(|a, b| a.uc.partial_cmp(&b.uc).unwrap())
        .expect("a non-empty table yields rows");
    let mut report = Report::new("oracle.csv");
    report.row("ds,dr,n,UCs,UCr,UC");
    for row in &rows {
        report.row(&format!(
            "{},{},{},{},{},{}",
            num(tenths_to_mm(row.entry.ds_tenths), 1),
            num(tenths_to_mm(row.entry.dr_tenths), 1),
            row.entry.n,
            num(row.finish.cost, 5),
            num(row.rough.cost, 5),
            num(row.uc, 4)
        ));
    }
    report.note(&format!(
        "global optimum (*): pair {} of {} — d_s = {} mm, d_r = {} mm, n = {}, UC = {} $/piece",
        best.entry.index,
        rows.len(),
        num(tenths_to_mm(best.entry.ds_tenths), 1),
        num(tenths_to_mm(best.entry.dr_tenths), 1),
        best.entry.n,
        num(best.uc, 4)
    ));
    report.note(&format!(
        "optimal conditions: V_s = {} m/min, f_s = {} mm/tooth, V_r = {} m/min, f_r = {} mm/tooth",
        num(best.finish.v, 2),
        num(best.finish.f, 4),
        num(best.rough.v, 2),
        num(best.rough.f, 4)
    ));
    Ok(report)
}

fn to_engine(arg: EngineArg, settings: &Settings) -> Engine {
    match arg {
        EngineArg::Oracle => Engine::Oracle,
        EngineArg::Ga => Engine::Ga(settings.ga.clone()),
    }
}

fn cmd_sweep(
    model: &Model,
    settings: &Settings,
    from: f64,
    to: f64,
    step: f64,
    engine: EngineArg,
) -> Result<Report, Failure> {
    let from_tenths = mm_to_tenths(from, "from")?;
    let to_tenths = mm_to_tenths(to, "to")?;
    let step_tenths = mm_to_tenths(step, "step")?;
    let outcomes = dt_sweep(
        model.problem(),
        from_tenths,
        to_tenths,
        step_tenths,
        &to_engine(engine, settings),
    )?;
    let mut report = Report::new("sweep.csv");
    if engine == EngineArg::Ga {
        report.seeds = vec![settings.ga.seed];
    }
    report.row("dt,n,ds,dr,fr,Vs,Vr,fs,UC,Ts,Tr");
    let mut solved = 0usize;
    let mut skipped = 0usize;
    for outcome in &outcomes {
        match outcome {
            SweepOutcome::Row(r) => {
                solved += 1;
                report.row(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    num(tenths_to_mm(r.dt_tenths), 1),
                    r.n,
                    num(tenths_to_mm(r.ds_tenths), 1),
                    num(tenths_to_mm(r.dr_tenths), 1),
                    num(r.f_r, 4),
                    num(r.v_s, 2),
                    num(r.v_r, 2),
                    num(r.f_s, 4),
                    num(r.uc, 4),
                    num(r.t_s, 1),
                    num(r.t_r, 1)
                ));
            }
            SweepOutcome::Infeasible { dt_tenths, reason } => {
                skipped += 1;
                report.note(&format!(
                    "d_t = {} mm: {reason} — row skipped",
                    num(tenths_to_mm(*dt_tenths), 1)
                ));
            }
        }
    }
    let engine_name = match engine {
        EngineArg::Oracle => "exact solver".to_string(),
        EngineArg::Ga => format!("genetic algorithm (seed {})", settings.ga.seed),
    };
    report.note(&format!(
        "swept {} stock value(s) with the {engine_name}: {solved} solved, {skipped} skipped",
        outcomes.len()
    ));
    Ok(report)
}

/// Inclusive multiplier ladder `from, from+step, …, to` built by index so
/// repeated addition cannot drift past the endpoint.
fn multiplier_ladder(from: f64, to: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidInput("--step must be positive".into()).into());
    }
    if to < from {
        return Err(Error::InvalidInput("--to must be at least --from".into()).into());
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + step * i as f64).collect())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sensitivity(
    model: &Model,
    settings: &Settings,
    dt: f64,
    kind: KindArg,
    from: f64,
    to: f64,
    step: f64,
    engine: EngineArg,
) -> Result<Report, Failure> {
    let dt_tenths = mm_to_tenths(dt, "dt")?;
    let multipliers = multiplier_ladder(from, to, step)?;
    let kinds: &[ConstraintKind] = match kind {
        KindArg::Force => &[ConstraintKind::Force],
        KindArg::Power => &[ConstraintKind::Power],
        KindArg::Both => &[ConstraintKind::Force, ConstraintKind::Power],
    };
    let mut report = Report::new("sensitivity.csv");
    if engine == EngineArg::Ga {
        report.seeds = vec![settings.ga.seed];
    }
    report.row("kind,multiplier,UC");
    let mut slopes = Vec::new();
    for &k in kinds {
        let sweep = sensitivity_sweep(
            model.problem(),
            dt_tenths,
            k,
            &multipliers,
            &to_engine(engine, settings),
        )?;
        for point in &sweep.points {
            let uc = point.uc.map(|u| num(u, 6)).unwrap_or_default();
            report.row(&format!("{},{},{}", k.name(), num(point.multiplier, 4), uc));
            if point.uc.is_none() {
                report.note(&format!(
                    "{} multiplier {}: no feasible plan — point reported empty",
                    k.name(),
                    num(point.multiplier, 4)
                ));
            }
        }
        let feasible = sweep.points.iter().filter(|p| p.uc.is_some()).count();
        match sweep.slope {
            Some(slope) => {
                report.note(&format!(
                    "{} limit: least-squares slope {} $/piece per unit multiplier over {} feasible point(s)",
                    k.name(),
                    num(slope, 6),
                    feasible
                ));
                slopes.push((k, slope));
            }
            None => report.note(&format!(
                "{} limit: slope undefined ({} feasible point(s))",
                k.name(),
                feasible
            )),
        }
    }
    if slopes.len() == 2 {
        let (first, second) = (&slopes[0], &slopes[1]);
        let (steeper, flatter) =
            if first.1.abs() >= second.1.abs() { (first, second) } else { (second, first) };
        report.note(&format!(
            "the optimum reacts more strongly to the {} limit than to the {} limit",
            steeper.0.name(),
            flatter.0.name()
        ));
    }
    Ok(report)
}

fn cmd_estimate(
    model: &Model,
    dt: f64,
    clip_power: bool,
    allow_fallback: bool,
) -> Result<Report, Failure> {
    let dt_tenths = mm_to_tenths(dt, "dt")?;
    let mode = if clip_power { EstimateMode::PowerClipped } else { EstimateMode::Nominal };
    let estimate = estimate_plan(model, dt_tenths, mode, allow_fallback)?;
    let mut report = Report::new("estimate.csv");
    report.row("dt,n,ds,dr,fs,fr,Vs,Vr,UC");
    let plan = &estimate.plan;
    report.row(&format!(
        "{},{},{},{},{},{},{},{},{}",
        num(tenths_to_mm(dt_tenths), 1),
        plan.n,
        num(plan.ds_mm(), 1),
        num(plan.dr_mm(), 1),
        num(plan.f_s, 4),
        num(plan.f_r, 4),
        num(plan.v_s, 2),
        num(plan.v_r, 2),
        num(estimate.uc, 4)
    ));
    for note in &estimate.notes {
        report.note(note);
    }
    report.note(&format!("estimated UC = {} $/piece", num(estimate.uc, 4)));
    if let Some(excess) = estimate.power_excess {
        report.note(&format!(
            "warning: the estimated plan exceeds the power limit by {} kW; \
             rerun with --clip-power for a strictly feasible plan",
            num(excess, 3)
        ));
    }
    let table = PairTable::build(model.problem(), dt_tenths)?;
    match oracle::global_optimum(model, &table) {
        Ok(exact) => {
            let gap = (estimate.uc - exact.uc) / exact.uc * 100.0;
            report.note(&format!(
                "exact optimum UC = {} $/piece; the estimate lands {}% away",
                num(exact.uc, 4),
                num(gap, 3)
            ));
        }
        Err(e) => report.note(&format!("exact optimum unavailable: {e}")),
    }
    Ok(report)
}

fn cmd_popsize(length: u32, mu_max: u64) -> Result<Report, Failure> {
    let mut report = Report::new("popsize.csv");
    report.row("mu,G");
    for mu in sizing::sizing_grid(mu_max) {
        let gain = sizing::population_gain(mu, length)?;
        report.row(&format!("{},{:.6e}", mu, gain));
    }
    let g_max = sizing::population_gain(mu_max, length)?;
    let recommended = sizing::recommend_population(length, mu_max)?;
    report.note(&format!(
        "genome length {length}: expected coverage gain tops out at G = {:.6e} for population {mu_max}",
        g_max
    ));
    report.note(&format!(
        "99.9% of that gain is first reached at population {recommended} (recommended size)"
    ));
    Ok(report)
}

fn cmd_success_rate(
    model: &Model,
    settings: &Settings,
    dt: f64,
    pm_grid: &[f64],
    runs: u32,
) -> Result<Report, Failure> {
    if runs == 0 {
        return Err(Error::InvalidInput("--runs must be at least 1".into()).into());
    }
    if pm_grid.is_empty() {
        return Err(Error::InvalidInput("--pm needs at least one value".into()).into());
    }
    let dt_tenths = mm_to_tenths(dt, "dt")?;
    let table = PairTable::build(model.problem(), dt_tenths)?;
    let exact = oracle::global_optimum(model, &table)?;
    let seeds: Vec<u64> = (0..u64::from(runs)).map(|k| settings.ga.seed + k).collect();
    let mut report = Report::new("success_rate.csv");
    report.seeds = seeds.clone();
    report.row("pm,runs,successes,success_pct");
    for &pm in pm_grid {
        let config = GaConfig { p_m: pm, ..settings.ga.clone() };
        let results = run_seeded(model, &table, &config, &seeds)?;
        let successes = results
            .iter()
            .filter(|r| {
                r.best.is_feasible() && (r.best.uc - exact.uc) / exact.uc <= SUCCESS_TOLERANCE
            })
            .count();
        let pct = successes as f64 / results.len() as f64 * 100.0;
        report.row(&format!("{},{},{},{}", pm, runs, successes, num(pct, 1)));
        report.note(&format!(
            "p_m = {pm}: {successes}/{runs} run(s) within 0.1% of the exact optimum ({}%)",
            num(pct, 1)
        ));
    }
    report.note(&format!(
        "exact optimum UC = {} $/piece at d_t = {} mm",
        num(exact.uc, 4),
        num(dt, 1)
    ));
    Ok(report)
}
