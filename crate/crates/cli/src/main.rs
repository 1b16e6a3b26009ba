mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use octograv::action::{self, ActionError, CouplingConstants, LagrangianForm};
use octograv::frame::{DerivativeProvider, LocalLorentz};
use octograv::parallel::{map_indexed, Execution};
use octograv::scenarios::Scenario;
use octograv::tables::{StructureTables, TableName};
use octograv::verify::{verify_algebra, Fault, VerifyConfig, DEFAULT_SAMPLES};

use config::RunFile;
use output::{Format, Row};

const SEED_ENV: &str = "OCTOGRAV_SEED";

#[derive(Parser)]
#[command(name = "octograv", version, about = "Cayley-Dickson structure constants and double-dual Lagrangian densities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra laws on random samples and every structure table exhaustively.
    VerifyAlgebra(VerifyArgs),
    /// Print the nonzero entries of the structure tables.
    DumpTables(DumpArgs),
    /// Evaluate a Lagrangian density at sample points of a scenario.
    Lagrangian(LagrangianArgs),
    /// Compare the equivalent forms of the density on a scenario.
    Crosscheck(CrosscheckArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// RNG seed; falls back to $OCTOGRAV_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    out: Format,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Psi,
    Chi,
}

#[derive(Args)]
struct DumpArgs {
    /// eps3, psi, phi, eps4, chiL or chiR; all tables when omitted.
    #[arg(long)]
    table: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    out: Format,
}

#[derive(Args)]
struct ScenarioArgs {
    /// flat4, schwarzschild, de-sitter, flat8, diagonal-warped8 or random-smooth8.
    #[arg(long)]
    scenario: Option<String>,
    /// TOML run file; flags take precedence over its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    hubble: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    /// Seed of the random-smooth8 frame coefficients.
    #[arg(long)]
    scenario_seed: Option<u64>,
    /// Number of sample points.
    #[arg(long)]
    points: Option<usize>,
    /// Sampling seed; falls back to the run file, then $OCTOGRAV_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// analytic or fd.
    #[arg(long)]
    provider: Option<String>,
    /// First-derivative finite-difference step.
    #[arg(long)]
    h: Option<f64>,
    /// Second-derivative finite-difference step.
    #[arg(long)]
    h2: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct LagrangianArgs {
    #[command(flatten)]
    common: ScenarioArgs,
    /// dd4, vierbein4, eh4 or chi8; defaults to dd4 in 4D and chi8 in 8D.
    #[arg(long)]
    form: Option<String>,
    /// Evaluate at one comma-separated point instead of sampling.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    at: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    out: Format,
}

#[derive(Args)]
struct CrosscheckArgs {
    #[command(flatten)]
    common: ScenarioArgs,
    /// Largest accepted relative difference.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    out: Format,
}

enum Failure {
    Invariant(String),
    Usage(String),
    Degenerate(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invariant(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Degenerate(_) => 3,
        }
    }
}

impl From<ActionError> for Failure {
    fn from(e: ActionError) -> Self {
        if e.is_degeneracy() {
            Failure::Degenerate(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn exec(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn env_seed() -> Result<Option<u64>, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

struct Resolved {
    scenario: Scenario,
    provider: DerivativeProvider,
    constants: CouplingConstants,
    points: usize,
    seed: u64,
    exec: Execution,
    file: RunFile,
}

fn resolve(args: &ScenarioArgs) -> Result<Resolved, Failure> {
    let file = RunFile::load(args.config.as_deref()).map_err(Failure::Usage)?;
    let name = args
        .scenario
        .clone()
        .or_else(|| file.scenario.clone())
        .ok_or_else(|| Failure::Usage("--scenario is required (or set `scenario` in the run file)".into()))?;
    let scenario = Scenario::from_name(
        &name,
        args.mass.or(file.mass),
        args.hubble.or(file.hubble),
        args.amplitude.or(file.amplitude),
        args.scenario_seed.or(file.scenario_seed),
    )
    .map_err(|e| Failure::Usage(e.to_string()))?;
    let h = args.h.or(file.h);
    let h2 = args.h2.or(file.h2);
    let provider = match args.provider.as_deref().or(file.provider.as_deref()).unwrap_or("analytic") {
        "analytic" => DerivativeProvider::Analytic,
        "fd" => DerivativeProvider::FiniteDifference {
            h: h.unwrap_or(DerivativeProvider::DEFAULT_H),
            h2: h2.unwrap_or(DerivativeProvider::DEFAULT_H2),
        },
        other => return Err(Failure::Usage(format!("unknown provider `{other}` (expected analytic or fd)"))),
    };
    if let DerivativeProvider::FiniteDifference { h, h2 } = provider {
        if !(h > 0.0 && h2 > 0.0 && h.is_finite() && h2.is_finite()) {
            return Err(Failure::Usage(format!("finite-difference steps must be positive, got h={h}, h2={h2}")));
        }
    }
    let constants = CouplingConstants::new(args.kappa.or(file.kappa).unwrap_or(1.0))?;
    let seed = match args.seed.or(file.seed) {
        Some(s) => s,
        None => env_seed()?.unwrap_or(0),
    };
    Ok(Resolved {
        scenario,
        provider,
        constants,
        points: args.points.or(file.points).unwrap_or(10),
        seed,
        exec: exec(args.sequential),
        file,
    })
}

fn tables() -> Result<StructureTables, Failure> {
    StructureTables::build().map_err(|e| Failure::Invariant(e.to_string()))
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let seed = match args.seed {
        Some(s) => s,
        None => env_seed()?.unwrap_or(0),
    };
    if args.out == Format::Csv {
        return Err(Failure::Usage("verify-algebra supports --out json or text".into()));
    }
    let cfg = VerifyConfig {
        seed,
        samples: args.samples,
        exec: exec(args.sequential),
        fault: args.inject_fault.map(|f| match f {
            FaultArg::Psi => Fault::CorruptPsi,
            FaultArg::Chi => Fault::CorruptChi,
        }),
    };
    let report = verify_algebra(&cfg).map_err(|e| Failure::Invariant(e.to_string()))?;
    output::print_verify(&report, args.out);
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|r| r.name.as_str()).collect();
        Err(Failure::Invariant(format!("invariants failed: {}", names.join(", "))))
    }
}

fn run_dump(args: DumpArgs) -> Result<(), Failure> {
    let names = match args.table.as_deref() {
        None | Some("all") => TableName::ALL.to_vec(),
        Some(t) => vec![t.parse::<TableName>().map_err(|e| Failure::Usage(e.to_string()))?],
    };
    if args.out == Format::Csv {
        return Err(Failure::Usage("dump-tables supports --out json or text".into()));
    }
    let tables = tables()?;
    output::print_tables(&tables, &names, args.out);
    Ok(())
}

fn run_lagrangian(args: LagrangianArgs) -> Result<(), Failure> {
    let r = resolve(&args.common)?;
    let form = match args.form.as_deref().or(r.file.form.as_deref()) {
        Some(f) => f.parse::<LagrangianForm>()?,
        None if r.scenario.dim() == 8 => LagrangianForm::ChiDual8,
        None => LagrangianForm::DoubleDual4,
    };
    if form.dim() != r.scenario.dim() {
        return Err(Failure::Usage(format!(
            "form {form} needs a {}-dimensional scenario; {} is {}-dimensional",
            form.dim(),
            r.scenario.name(),
            r.scenario.dim()
        )));
    }
    let points = match &args.at {
        Some(p) if p.len() != r.scenario.dim() => {
            return Err(Failure::Usage(format!(
                "--at has {} coordinates, {} needs {}",
                p.len(),
                r.scenario.name(),
                r.scenario.dim()
            )))
        }
        Some(p) => vec![p.clone()],
        None => r.scenario.sample_points(r.points, r.seed),
    };
    let tables = tables()?;
    let field = r.scenario.frame_field(r.provider);
    let results = action::sweep(form, &field, &points, &r.constants, &tables, r.exec);
    let mut rows = Vec::new();
    let mut first_error = None;
    for (index, res) in results.into_iter().enumerate() {
        match res {
            Ok(report) => rows.push(Row { index, report }),
            Err(e) => {
                eprintln!("point {index} {:?}: {e}", points[index]);
                first_error.get_or_insert(e);
            }
        }
    }
    output::print_lagrangian(&r.scenario, form, r.provider, &r.constants, r.seed, &rows, args.out)
        .map_err(Failure::Invariant)?;
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn run_crosscheck(args: CrosscheckArgs) -> Result<(), Failure> {
    let r = resolve(&args.common)?;
    let tolerance = args.tolerance.or(r.file.tolerance).unwrap_or(1e-8);
    let points = r.scenario.sample_points(r.points, r.seed);
    let field = r.scenario.frame_field(r.provider);
    if args.out == Format::Csv {
        return Err(Failure::Usage("crosscheck supports --out json or text".into()));
    }
    let passed = if r.scenario.dim() == 4 {
        let summary = action::crosscheck_4d(&field, &points, &r.constants, tolerance, r.exec)?;
        output::print_crosscheck_4d(&r.scenario, &summary, args.out);
        summary.passed && summary.skipped.is_empty()
    } else {
        let tables = tables()?;
        let reports: Vec<_> = action::sweep(LagrangianForm::ChiDual8, &field, &points, &r.constants, &tables, r.exec)
            .into_iter()
            .collect::<Result<_, _>>()?;
        // frame boost mixing the complex unit with E_1, reported but not asserted
        let boost = LocalLorentz::boost(8, 1, 0.3).compose(&LocalLorentz::rotation(8, 2, 5, 0.7));
        let rotation: Vec<_> = map_indexed(&points, r.exec, |_, p| {
            action::rotation_response(LagrangianForm::ChiDual8, &field, p, &boost, &r.constants, &tables)
        })
        .into_iter()
        .collect::<Result<_, _>>()?;
        let summary = output::EightDimSummary::new(r.scenario, tolerance, reports, rotation);
        output::print_crosscheck_8d(&summary, args.out);
        summary.passed
    };
    if passed {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("crosscheck exceeded tolerance {tolerance:e}")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::VerifyAlgebra(a) => run_verify(a),
        Command::DumpTables(a) => run_dump(a),
        Command::Lagrangian(a) => run_lagrangian(a),
        Command::Crosscheck(a) => run_crosscheck(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Invariant(m) | Failure::Usage(m) | Failure::Degenerate(m)) = &f;
            eprintln!("octograv: {m}");
            ExitCode::from(f.code())
        }
    }
}
