//! Run configuration in a flat `key = value` format.
//!
//! ```text
//! # Ca-40 in a 1 MHz / 5 MHz trap
//! species.name = Ca-40
//! trap.nu_z_hz = 1.0e6
//! trap.nu_perp_hz = 5.0e6
//! sweep.start_hz = 0.5e6
//! sweep.stop_hz = 2.0e6
//! sweep.steps = 31
//! oracle.cutoffs = 10,6,10
//! oracle.xi_values = 1e-2,1e-3,1e-4
//! ```
//!
//! Sections are dotted key prefixes, `#` starts a comment, and every key may
//! appear at most once. Only the two trap frequencies are required.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::Cutoffs;
use crate::oracle::{OracleConfig, DEFAULT_CUTOFFS, DEFAULT_OVERLAP_THRESHOLD, DEFAULT_XI_LADDER};
use crate::trap::{IonSpecies, PhysicalConstants, TrapConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct SpeciesSpec {
    pub name: String,
    pub mass_amu: f64,
    pub charge_multiple: u32,
}

impl Default for SpeciesSpec {
    fn default() -> Self {
        Self {
            name: "Ca-40".to_owned(),
            mass_amu: IonSpecies::CALCIUM_40_AMU,
            charge_multiple: 1,
        }
    }
}

impl SpeciesSpec {
    pub fn to_species(&self, consts: &PhysicalConstants) -> Result<IonSpecies> {
        IonSpecies::from_amu(self.name.clone(), self.mass_amu, self.charge_multiple, consts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapSpec {
    pub nu_z_hz: f64,
    pub nu_perp_hz: f64,
}

impl TrapSpec {
    pub fn to_trap(&self) -> Result<TrapConfig> {
        TrapConfig::from_hz(self.nu_perp_hz, self.nu_z_hz)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub start_hz: f64,
    pub stop_hz: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSettings {
    pub cutoffs: Cutoffs,
    pub xi_values: Vec<f64>,
    pub overlap_threshold: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            cutoffs: DEFAULT_CUTOFFS,
            xi_values: DEFAULT_XI_LADDER.to_vec(),
            overlap_threshold: DEFAULT_OVERLAP_THRESHOLD,
        }
    }
}

impl OracleSettings {
    pub fn to_oracle_config(&self, r: f64) -> OracleConfig {
        OracleConfig {
            r,
            cutoffs: self.cutoffs,
            xi_values: self.xi_values.clone(),
            overlap_threshold: self.overlap_threshold,
            ..OracleConfig::new(r)
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::validation(format!("unknown output format {s:?} (expected text or csv)"))),
        }
    }
}

impl OutputFormat {
    fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Text => "text",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub species: SpeciesSpec,
    pub trap: TrapSpec,
    pub sweep: Option<SweepSpec>,
    pub oracle: OracleSettings,
    pub output: OutputSpec,
}

impl RunConfig {
    /// Defaults for everything except the trap.
    pub fn new(trap: TrapSpec) -> Self {
        Self {
            species: SpeciesSpec::default(),
            trap,
            sweep: None,
            oracle: OracleSettings::default(),
            output: OutputSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.species;
        if !(s.mass_amu.is_finite() && s.mass_amu > 0.0) {
            return Err(Error::validation("species.mass_amu must be positive"));
        }
        if s.charge_multiple == 0 {
            return Err(Error::validation("species.charge_multiple must be at least 1"));
        }
        let t = &self.trap;
        for (key, v) in [("trap.nu_z_hz", t.nu_z_hz), ("trap.nu_perp_hz", t.nu_perp_hz)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(format!("{key} must be positive")));
            }
        }
        if t.nu_perp_hz <= t.nu_z_hz {
            return Err(Error::validation(format!(
                "trap.nu_perp_hz ({}) must exceed trap.nu_z_hz ({}): omega_perp <= omega_z is the zigzag regime",
                t.nu_perp_hz, t.nu_z_hz
            )));
        }
        if let Some(sw) = &self.sweep {
            if sw.steps < 1 {
                return Err(Error::validation("sweep.steps must be at least 1"));
            }
            if !(sw.start_hz.is_finite() && sw.start_hz > 0.0 && sw.stop_hz.is_finite() && sw.stop_hz > 0.0) {
                return Err(Error::validation("sweep frequencies must be positive"));
            }
            if sw.start_hz > sw.stop_hz {
                return Err(Error::validation("sweep.start_hz must not exceed sweep.stop_hz"));
            }
        }
        self.oracle
            .to_oracle_config(t.nu_perp_hz / t.nu_z_hz)
            .validate()
    }

    /// Canonical text form; [`parse_config`] reads it back to an equal value.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let s = &self.species;
        let _ = writeln!(out, "species.name = {}", s.name);
        let _ = writeln!(out, "species.mass_amu = {:e}", s.mass_amu);
        let _ = writeln!(out, "species.charge_multiple = {}", s.charge_multiple);
        let _ = writeln!(out, "trap.nu_z_hz = {:e}", self.trap.nu_z_hz);
        let _ = writeln!(out, "trap.nu_perp_hz = {:e}", self.trap.nu_perp_hz);
        if let Some(sw) = &self.sweep {
            let _ = writeln!(out, "sweep.start_hz = {:e}", sw.start_hz);
            let _ = writeln!(out, "sweep.stop_hz = {:e}", sw.stop_hz);
            let _ = writeln!(out, "sweep.steps = {}", sw.steps);
        }
        let o = &self.oracle;
        let _ = writeln!(out, "oracle.cutoffs = {}", o.cutoffs);
        let xis: Vec<String> = o.xi_values.iter().map(|x| format!("{x:e}")).collect();
        let _ = writeln!(out, "oracle.xi_values = {}", xis.join(","));
        let _ = writeln!(out, "oracle.overlap_threshold = {:e}", o.overlap_threshold);
        if let Some(p) = &self.output.path {
            let _ = writeln!(out, "output.path = {}", p.display());
        }
        let _ = writeln!(out, "output.format = {}", self.output.format.as_str());
        out
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| parse_err(line, format!("invalid value {value:?} for {key}")))
}

fn parse_list<T: FromStr>(line: usize, key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|v| parse_value(line, key, v.trim()))
        .collect()
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut species = SpeciesSpec::default();
    let mut name_given = false;
    let mut mass_given = false;
    let mut nu_z = None;
    let mut nu_perp = None;
    let (mut start, mut stop, mut steps) = (None, None, None);
    let mut oracle = OracleSettings::default();
    let mut output = OutputSpec::default();
    let mut seen = std::collections::HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected `key = value`, found {content:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_owned()) {
            return Err(parse_err(line, format!("duplicate key {key}")));
        }
        match key {
            "species.name" => {
                species.name = value.to_owned();
                name_given = true;
            }
            "species.mass_amu" => {
                species.mass_amu = parse_value(line, key, value)?;
                mass_given = true;
            }
            "species.charge_multiple" => species.charge_multiple = parse_value(line, key, value)?,
            "trap.nu_z_hz" => nu_z = Some(parse_value(line, key, value)?),
            "trap.nu_perp_hz" => nu_perp = Some(parse_value(line, key, value)?),
            "sweep.start_hz" => start = Some(parse_value(line, key, value)?),
            "sweep.stop_hz" => stop = Some(parse_value(line, key, value)?),
            "sweep.steps" => steps = Some(parse_value(line, key, value)?),
            "oracle.cutoffs" => oracle.cutoffs = parse_value(line, key, value)?,
            "oracle.xi_values" => oracle.xi_values = parse_list(line, key, value)?,
            "oracle.overlap_threshold" => oracle.overlap_threshold = parse_value(line, key, value)?,
            "output.path" => output.path = Some(PathBuf::from(value)),
            "output.format" => output.format = parse_value(line, key, value)?,
            _ => return Err(parse_err(line, format!("unknown key {key}"))),
        }
    }

    if name_given && !mass_given {
        let known = IonSpecies::by_name(&species.name, &PhysicalConstants::CODATA_2018)?;
        species.name = known.name.clone();
        species.mass_amu = known.mass_amu(&PhysicalConstants::CODATA_2018);
    } else if mass_given && !name_given {
        species.name = "custom".to_owned();
    }
    let (Some(nu_z_hz), Some(nu_perp_hz)) = (nu_z, nu_perp) else {
        return Err(Error::validation("trap.nu_z_hz and trap.nu_perp_hz are required"));
    };
    let sweep = match (start, stop, steps) {
        (None, None, None) => None,
        (Some(start_hz), Some(stop_hz), Some(steps)) => Some(SweepSpec {
            start_hz,
            stop_hz,
            steps,
        }),
        _ => {
            return Err(Error::validation(
                "sweep needs all of sweep.start_hz, sweep.stop_hz and sweep.steps",
            ))
        }
    };
    let cfg = RunConfig {
        species,
        trap: TrapSpec { nu_z_hz, nu_perp_hz },
        sweep,
        oracle,
        output,
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config("trap.nu_z_hz = 1.0e6\ntrap.nu_perp_hz = 5.0e6\n").unwrap();
        assert_eq!(cfg.species, SpeciesSpec::default());
        assert_eq!(cfg.oracle.cutoffs, Cutoffs::new(10, 6, 10));
        assert_eq!(cfg.oracle.xi_values, vec![1e-2, 1e-3, 1e-4]);
        assert_eq!(cfg.oracle.overlap_threshold, 0.5);
        assert_eq!(cfg.sweep, None);
    }

    #[test]
    fn zigzag_trap_is_a_validation_error() {
        let err = parse_config("trap.nu_perp_hz = 0.5e6\ntrap.nu_z_hz = 1.0e6").unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("nu_perp")), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_config("# header\ntrap.nu_z_hz = 1.0e6\n\ntrap.nu_perp_hz = five\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = parse_config("trap.nu_z_hz 1e6").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_config("trap.nu_z_hz = 1e6\ntrap.nu_z_hz = 2e6").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_config("trap.nu_z_hz = 1e6\nfoo.bar = 1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_config("oracle.cutoffs = 10,6").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn species_by_name_and_custom_mass() {
        let cfg = parse_config("species.name = Be-9\ntrap.nu_z_hz = 1e6\ntrap.nu_perp_hz = 5e6").unwrap();
        assert!((cfg.species.mass_amu - 9.012_183_1).abs() < 1e-9);
        let cfg = parse_config("species.mass_amu = 40\ntrap.nu_z_hz = 1e6\ntrap.nu_perp_hz = 5e6").unwrap();
        assert_eq!(cfg.species.name, "custom");
        assert!(parse_config("species.name = Zz-1\ntrap.nu_z_hz = 1e6\ntrap.nu_perp_hz = 5e6").is_err());
    }

    #[test]
    fn sweep_and_oracle_validation() {
        let base = "trap.nu_z_hz = 1e6\ntrap.nu_perp_hz = 5e6\n";
        assert!(parse_config(&format!("{base}sweep.start_hz = 2e6\nsweep.stop_hz = 1e6\nsweep.steps = 3")).is_err());
        assert!(parse_config(&format!("{base}sweep.start_hz = 1e6\nsweep.stop_hz = 2e6\nsweep.steps = 0")).is_err());
        assert!(parse_config(&format!("{base}sweep.start_hz = 1e6")).is_err());
        assert!(parse_config(&format!("{base}oracle.xi_values = 1e-4,1e-3")).is_err());
        assert!(parse_config(&format!("{base}oracle.cutoffs = 4,4,4")).is_err());
    }

    #[test]
    fn canonical_form_round_trips() {
        let text = "species.name = Sr-88\ntrap.nu_z_hz = 1.3e6\ntrap.nu_perp_hz = 4.1e6\n\
                    sweep.start_hz = 0.5e6\nsweep.stop_hz = 2e6\nsweep.steps = 7\n\
                    oracle.cutoffs = 12,8,12\noracle.xi_values = 3e-2, 1e-3,1e-4\n\
                    output.path = out/sweep.csv\noutput.format = csv\n";
        let cfg = parse_config(text).unwrap();
        let again = parse_config(&cfg.to_config_string()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.to_config_string(), again.to_config_string());
    }
}
