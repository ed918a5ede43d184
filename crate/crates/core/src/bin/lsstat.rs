use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lsstat::bootstrap::{self, BootstrapConfig, OrderMode};
use lsstat::deviation::{build_grid, deviation_field, DeviationField};
use lsstat::identify::{identify, DEFAULT_GAMMA};
use lsstat::mc::{run_mc, McExperiment};
use lsstat::models::{generate, ModelSpec};
use lsstat::report::{IdentifyPayload, OrderPayload, Payload, Report, TestPayload};
use lsstat::series::{load_csv, MultivariateSeries};
use lsstat::var::{self, AicPenalty, Estimator};
use lsstat::{linalg, rng, Result};

#[derive(Parser)]
#[command(name = "lsstat", version, about = "Bootstrap test for second-order stationarity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the stationarity test on a CSV series.
    Test(TestArgs),
    /// Find the largest sets of components that look jointly stationary.
    Identify(IdentifyArgs),
    /// Write a simulated series as CSV.
    Simulate(SimulateArgs),
    /// Monte Carlo rejection frequencies for a simulation model.
    Mc(McArgs),
    /// Whittle-AIC order selection for the sieve VAR.
    Order(OrderArgs),
}

#[derive(Args)]
struct InputArgs {
    /// CSV file, one row per time point, one column per component.
    #[arg(long)]
    input: PathBuf,
    /// Skip the first CSV line.
    #[arg(long)]
    header: bool,
    /// Do not subtract column means.
    #[arg(long)]
    no_center: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Sieve order: `auto` or a fixed integer.
    #[arg(long, default_value = "auto", value_parser = parse_order)]
    order: OrderChoice,
    /// Smallest order searched by `auto`.
    #[arg(long, default_value_t = 0)]
    pmin: usize,
    /// Largest order searched by `auto` (default min(T/10, 15)).
    #[arg(long)]
    pmax: Option<usize>,
    #[arg(long, default_value = "yw")]
    estimator: Estimator,
    /// AIC penalty: `akaike` (2π p d²/T), `order` (p/T) or `params` (p d²/T).
    #[arg(long, default_value = "akaike")]
    penalty: AicPenalty,
}

#[derive(Clone, Copy)]
enum OrderChoice {
    Auto,
    Fixed(usize),
}

fn parse_order(s: &str) -> std::result::Result<OrderChoice, String> {
    if s == "auto" {
        return Ok(OrderChoice::Auto);
    }
    s.parse()
        .map(OrderChoice::Fixed)
        .map_err(|_| format!("expected `auto` or a non-negative integer, got {s:?}"))
}

impl FitArgs {
    fn mode(&self) -> OrderMode {
        match self.order {
            OrderChoice::Auto => OrderMode::Auto {
                p_min: self.pmin,
                p_max: self.pmax,
            },
            OrderChoice::Fixed(p) => OrderMode::Fixed(p),
        }
    }
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fit: FitArgs,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Number of bootstrap replicates.
    #[arg(long, default_value_t = 200)]
    bootstrap: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Discarded start-up samples per replicate (default 100 + 10p).
    #[arg(long)]
    burn_in: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write |D̂| over the grid as CSV (v, omega, a, b, modulus).
    #[arg(long)]
    dump_field: Option<PathBuf>,
}

#[derive(Args)]
struct IdentifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    dump_field: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Model preset, optionally `name:param` (e.g. `ar1:0.5`).
    #[arg(long)]
    model: String,
    /// Sample size.
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output CSV (default stdout).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write a header line `x1,x2,...`.
    #[arg(long)]
    header: bool,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    model: String,
    /// Comma-separated sample sizes.
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    t: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    runs: usize,
    #[arg(long, default_value_t = 200)]
    bootstrap: usize,
    /// Comma-separated significance levels.
    #[arg(long, value_delimiter = ',', default_value = "0.05")]
    alpha: Vec<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    fit: FitArgs,
    /// Centre each simulated series before testing.
    #[arg(long)]
    center: bool,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct OrderArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fit: FitArgs,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Test(a) => cmd_test(a),
        Command::Identify(a) => cmd_identify(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Mc(a) => cmd_mc(a),
        Command::Order(a) => cmd_order(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lsstat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load(args: &InputArgs) -> Result<MultivariateSeries> {
    let x = load_csv(&args.input, args.header, !args.no_center)?;
    x.check_testable()?;
    if x.is_truncated() {
        eprintln!(
            "lsstat: warning: odd sample size {}, the last observation is not used in spectral estimates",
            x.len()
        );
    }
    Ok(x)
}

fn input_name(args: &InputArgs) -> Option<String> {
    Some(args.input.display().to_string())
}

/// Writes the report to `path`, or to stdout when no path is given.
/// Returns true when stdout is still free for a text summary.
fn emit(report: &Report, path: Option<&Path>) -> Result<bool> {
    let text = report.to_json()?;
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(true)
        }
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(false)
        }
    }
}

fn dump_field(field: &DeviationField, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "v,omega,a,b,modulus")?;
    for (v, omega, a, b, m) in field.long_rows() {
        writeln!(w, "{v:?},{omega:?},{a},{b},{m:?}")?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_test(a: TestArgs) -> Result<()> {
    let x = load(&a.input)?;
    let config = BootstrapConfig {
        replicates: a.bootstrap,
        alpha: a.alpha,
        seed: a.seed,
        burn_in: a.burn_in,
        order: a.fit.mode(),
        estimator: a.fit.estimator,
        penalty: a.fit.penalty,
        threads: a.threads,
    };
    let report = bootstrap::run_test(&x, &config)?;
    if let Some(path) = &a.dump_field {
        dump_field(&deviation_field(&x, &build_grid(x.len())?)?, path)?;
    }
    let summary = format!(
        "statistic {:.6}  quantile {:.6}  p-value {:.4}  order {}  {} at alpha = {}",
        report.statistic,
        report.quantile,
        report.p_value,
        report.order,
        if report.reject { "reject" } else { "do not reject" },
        report.alpha
    );
    let doc = Report::new(Payload::Test(TestPayload {
        input: input_name(&a.input),
        config,
        report,
    }));
    if emit(&doc, a.json.as_deref())? {
        println!("{summary}");
    }
    Ok(())
}

fn cmd_identify(a: IdentifyArgs) -> Result<()> {
    let x = load(&a.input)?;
    let field = deviation_field(&x, &build_grid(x.len())?)?;
    let result = identify(&x, &field, a.gamma)?;
    if let Some(path) = &a.dump_field {
        dump_field(&field, path)?;
    }
    let summary = format!("d' = {}  subsets {:?}", result.d_prime, result.subsets);
    let doc = Report::new(Payload::Identify(IdentifyPayload {
        input: input_name(&a.input),
        statistic: field.statistic,
        sup_matrix: linalg::rows_of(&field.sup_matrix),
        grid: field.grid.summary(),
        column_means: x.means().map(<[f64]>::to_vec),
        identification: result,
    }));
    if emit(&doc, a.json.as_deref())? {
        println!("{summary}");
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let spec = ModelSpec::preset(&a.model)?;
    let mut stream = rng::derived_stream(a.seed, rng::domain::SIMULATE, 0);
    let x = generate(&spec, a.t, &mut stream)?;
    match &a.output {
        Some(p) => x.write_csv(BufWriter::new(File::create(p)?), a.header),
        None => x.write_csv(io::stdout().lock(), a.header),
    }
}

fn cmd_mc(a: McArgs) -> Result<()> {
    let mut exp = McExperiment::new(ModelSpec::preset(&a.model)?, a.t);
    exp.runs = a.runs;
    exp.replicates = a.bootstrap;
    exp.alphas = a.alpha;
    exp.seed = a.seed;
    exp.estimator = a.fit.estimator;
    exp.order = a.fit.mode();
    exp.penalty = a.fit.penalty;
    exp.center = a.center;
    exp.threads = a.threads;
    let table = run_mc(&exp)?;
    let text = table.to_text();
    if emit(&Report::new(Payload::Mc(table)), a.json.as_deref())? {
        print!("{text}");
    }
    Ok(())
}

fn cmd_order(a: OrderArgs) -> Result<()> {
    let x = load(&a.input)?;
    let (p_min, p_max) = match a.fit.order {
        OrderChoice::Fixed(p) => (p, p),
        OrderChoice::Auto => (a.fit.pmin, a.fit.pmax.unwrap_or_else(|| var::default_p_max(x.len())).max(a.fit.pmin)),
    };
    let selection = var::select_order(&x, p_min, p_max, a.fit.estimator, a.fit.penalty)?;
    let summary = format!("selected order {} of {p_min}..={p_max}", selection.order);
    let doc = Report::new(Payload::Order(OrderPayload {
        input: input_name(&a.input),
        estimator: a.fit.estimator,
        penalty: a.fit.penalty,
        p_min,
        p_max,
        selection,
    }));
    if emit(&doc, a.json.as_deref())? {
        println!("{summary}");
    }
    Ok(())
}
