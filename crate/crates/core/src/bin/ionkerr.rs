//! Command-line front end. Exit codes: 0 success, 1 validation or physics
//! error, 2 I/O error, 3 verification gate failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ionkerr::analytics::{linear_grid, FormulaSelection};
use ionkerr::io::config::{parse_config, OutputFormat, RunConfig};
use ionkerr::io::records::read_experiment_csv;
use ionkerr::io::report::{chi_report, compare_records, sweep_csv_string, table1_report};
use ionkerr::io::verify::{run_verify, VerifySettings};
use ionkerr::{Cutoffs, Error, FockState, IonSpecies, PhysicalConstants, TrapConfig};

/// Guard on |4ω_r² − ω_s²|/ω_z² used by the commands; wide enough to reject
/// traps tuned onto the 2ω_r = ω_s resonance to four significant digits.
const CLI_RESONANCE_GUARD: f64 = 1e-3;

#[derive(Parser)]
#[command(name = "ionkerr", version, about = "Cross-Kerr coupling between the modes of two trapped ions")]
struct Cli {
    /// key = value run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Reject traps with |4ω_r² − ω_s²| below this multiple of ω_z².
    #[arg(long, global = true, default_value_t = CLI_RESONANCE_GUARD)]
    resonance_guard: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SpeciesArgs {
    /// Tabulated species, e.g. Ca-40, Be-9, Yb-171.
    #[arg(long)]
    species: Option<String>,
    /// Custom ion mass in amu (overrides --species).
    #[arg(long)]
    mass_amu: Option<f64>,
    #[arg(long)]
    charge: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate χ for one trap.
    Chi {
        #[arg(long)]
        nu_z: Option<f64>,
        #[arg(long)]
        nu_perp: Option<f64>,
        #[command(flatten)]
        species: SpeciesArgs,
        #[arg(long, default_value = "both")]
        formula: FormulaSelection,
        /// Also write the results as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// χ/2π over an axial-frequency grid at fixed ν_⊥, as CSV.
    Sweep {
        #[arg(long)]
        nu_z_start: Option<f64>,
        #[arg(long)]
        nu_z_stop: Option<f64>,
        #[arg(long)]
        nu_z_steps: Option<usize>,
        #[arg(long)]
        nu_perp: Option<f64>,
        #[command(flatten)]
        species: SpeciesArgs,
        #[arg(long, default_value = "both")]
        formula: FormulaSelection,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed form vs perturbation engine vs exact diagonalization.
    Verify {
        /// ω_⊥/ω_z
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        cutoffs: Option<Cutoffs>,
        /// Descending ξ ladder, comma separated; one value skips the fit.
        #[arg(long, value_delimiter = ',')]
        xi: Option<Vec<f64>>,
        #[arg(long)]
        overlap_threshold: Option<f64>,
        /// Write the report to this file instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Second-order V3 channels next to the printed table.
    Table1 {
        #[arg(long, default_value_t = 2)]
        nx: u32,
        #[arg(long, default_value_t = 1)]
        ny: u32,
        #[arg(long, default_value_t = 3)]
        ns: u32,
        #[arg(long, default_value_t = 5.0)]
        r: f64,
    },
    /// Residuals of measured χ against both formulas.
    Compare {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        nu_perp: Option<f64>,
        #[command(flatten)]
        species: SpeciesArgs,
        /// Accept |χ/2π| above 1 kHz.
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Error(Error),
    Gate,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Error(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 2,
        Error::Csv(c) if c.is_io_error() => 2,
        _ => 1,
    }
}

/// Values from an optional `--config` file, used where a flag is absent.
struct Defaults {
    config: Option<RunConfig>,
}

impl Defaults {
    fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let config = match path {
            Some(p) => Some(parse_config(&fs::read_to_string(p).map_err(at(p))?)?),
            None => None,
        };
        Ok(Self { config })
    }

    fn species(&self, args: &SpeciesArgs, consts: &PhysicalConstants) -> Result<IonSpecies, Error> {
        let charge = args.charge;
        if let Some(m) = args.mass_amu {
            let name = args.species.clone().unwrap_or_else(|| "custom".to_owned());
            return IonSpecies::from_amu(name, m, charge.unwrap_or(1), consts);
        }
        let mut species = match (&args.species, &self.config) {
            (Some(name), _) => IonSpecies::by_name(name, consts)?,
            (None, Some(cfg)) => cfg.species.to_species(consts)?,
            (None, None) => IonSpecies::calcium_40(),
        };
        if let Some(c) = charge {
            species = IonSpecies::new(species.name, species.mass, c)?;
        }
        Ok(species)
    }

    fn nu_z(&self, flag: Option<f64>) -> Result<f64, Error> {
        flag.or(self.config.as_ref().map(|c| c.trap.nu_z_hz))
            .ok_or_else(|| missing("--nu-z"))
    }

    fn nu_perp(&self, flag: Option<f64>) -> Result<f64, Error> {
        flag.or(self.config.as_ref().map(|c| c.trap.nu_perp_hz))
            .ok_or_else(|| missing("--nu-perp"))
    }

    fn output(&self, flag: Option<PathBuf>) -> Option<PathBuf> {
        flag.or_else(|| self.config.as_ref().and_then(|c| c.output.path.clone()))
    }
}

/// Attaches the path to an I/O error message.
fn at(path: &Path) -> impl FnOnce(io::Error) -> io::Error + '_ {
    move |e| io::Error::new(e.kind(), format!("{}: {e}", path.display()))
}

fn missing(flag: &str) -> Error {
    Error::Validation(format!("{flag} is required (or set it in --config)"))
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(at(p))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn init_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("IONKERR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Validation(format!("IONKERR_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Validation(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    let consts = PhysicalConstants::CODATA_2018;
    let defaults = Defaults::load(cli.config.as_deref())?;
    let guard = cli.resonance_guard;
    match cli.command {
        Command::Chi {
            nu_z,
            nu_perp,
            species,
            formula,
            csv,
        } => {
            let species = defaults.species(&species, &consts)?;
            let trap = TrapConfig::from_hz(defaults.nu_perp(nu_perp)?, defaults.nu_z(nu_z)?)?;
            let report = chi_report(&species, &trap, formula, &consts, guard)?;
            emit(&report.render_text(), None)?;
            let csv_path = csv.or_else(|| {
                defaults
                    .config
                    .as_ref()
                    .filter(|c| c.output.format == OutputFormat::Csv)
                    .and_then(|c| c.output.path.clone())
            });
            if let Some(p) = csv_path {
                report.write_csv(fs::File::create(&p).map_err(at(&p))?)?;
            }
        }
        Command::Sweep {
            nu_z_start,
            nu_z_stop,
            nu_z_steps,
            nu_perp,
            species,
            formula,
            out,
        } => {
            let species = defaults.species(&species, &consts)?;
            let sweep = defaults.config.as_ref().and_then(|c| c.sweep);
            let start = nu_z_start.or(sweep.map(|s| s.start_hz)).ok_or_else(|| missing("--nu-z-start"))?;
            let stop = nu_z_stop.or(sweep.map(|s| s.stop_hz)).ok_or_else(|| missing("--nu-z-stop"))?;
            let steps = nu_z_steps.or(sweep.map(|s| s.steps)).ok_or_else(|| missing("--nu-z-steps"))?;
            if steps < 1 || !(start > 0.0 && start <= stop) {
                return Err(Error::Validation("sweep needs 0 < start <= stop and steps >= 1".into()).into());
            }
            let grid = linear_grid(start, stop, steps);
            let text = sweep_csv_string(&species, defaults.nu_perp(nu_perp)?, &grid, formula, &consts, guard)?;
            emit(&text, defaults.output(out).as_deref())?;
        }
        Command::Verify {
            r,
            cutoffs,
            xi,
            overlap_threshold,
            report,
        } => {
            let cfg = defaults.config.as_ref();
            let r = r
                .or(cfg.map(|c| c.trap.nu_perp_hz / c.trap.nu_z_hz))
                .unwrap_or(5.0);
            let mut settings = VerifySettings::new(r);
            if let Some(c) = cfg {
                settings.cutoffs = c.oracle.cutoffs;
                settings.xi_values = Some(c.oracle.xi_values.clone());
                settings.overlap_threshold = c.oracle.overlap_threshold;
            }
            if let Some(c) = cutoffs {
                settings.cutoffs = c;
            }
            if xi.is_some() {
                settings.xi_values = xi;
            }
            if let Some(t) = overlap_threshold {
                settings.overlap_threshold = t;
            }
            let result = run_verify(&settings)?;
            emit(&result.render_text(), report.as_deref())?;
            if !result.passed() {
                return Err(Failure::Gate);
            }
        }
        Command::Table1 { nx, ny, ns, r } => {
            let report = table1_report(FockState::new(nx, ny, ns), r)?;
            emit(&report.render_text(), None)?;
        }
        Command::Compare {
            data,
            nu_perp,
            species,
            allow_large,
            out,
        } => {
            let species = defaults.species(&species, &consts)?;
            let records = read_experiment_csv(fs::File::open(&data).map_err(at(&data))?, allow_large)?;
            let report = compare_records(&records, &species, defaults.nu_perp(nu_perp)?, &consts, guard)?;
            emit(&report.render_text(), out.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Gate) => {
            eprintln!("error: verification gate failed");
            ExitCode::from(3)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
