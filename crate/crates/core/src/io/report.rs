//! Text and CSV renderings for the `chi`, `sweep`, `table1` and `compare`
//! commands. All floats go through [`fmt_float`] so output files are stable.

use std::fmt::Write as _;
use std::io::Write;

use crate::analytics::{chi_with_guard, sweep_chi_with_guard, FormulaSelection, KerrFormula, KerrResult, SweepRow};
use crate::error::Result;
use crate::fock::FockState;
use crate::io::records::ExperimentRecord;
use crate::pt::{compare_table1, table1_elements, Table1Comparison};
use crate::trap::{derive_spectrum, DimensionlessParams, IonSpecies, ModeSpectrum, PhysicalConstants, TrapConfig};

/// Nine significant digits, lowercase scientific.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct ChiReport {
    pub species: IonSpecies,
    pub trap: TrapConfig,
    pub spectrum: ModeSpectrum,
    pub results: Vec<KerrResult>,
    pub mass_amu: f64,
}

pub fn chi_report(
    species: &IonSpecies,
    trap: &TrapConfig,
    selection: FormulaSelection,
    consts: &PhysicalConstants,
    guard: f64,
) -> Result<ChiReport> {
    let spectrum = derive_spectrum(species, trap, consts)?;
    let results = selection
        .formulas()
        .map(|f| chi_with_guard(&spectrum, f, guard))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChiReport {
        species: species.clone(),
        trap: *trap,
        spectrum,
        results,
        mass_amu: species.mass_amu(consts),
    })
}

impl ChiReport {
    pub fn render_text(&self) -> String {
        let s = &self.spectrum;
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k:<16}{v}");
        };
        line(
            "species",
            format!("{} ({} amu, charge {})", self.species.name, fmt_float(self.mass_amu), self.species.charge_multiple),
        );
        line("nu_z", format!("{} Hz", fmt_float(s.omega_z / TWO_PI)));
        line("nu_perp", format!("{} Hz", fmt_float(s.omega_perp / TWO_PI)));
        line("r", fmt_float(s.ratio_r));
        line("omega_r/2pi", format!("{} Hz", fmt_float(s.omega_r / TWO_PI)));
        line("omega_s/2pi", format!("{} Hz", fmt_float(s.omega_s / TWO_PI)));
        line("z0", format!("{} m", fmt_float(s.z0)));
        line("xi", fmt_float(s.xi));
        line("zeta", format!("{} hbar*omega_z", fmt_float(s.zeta / (s.hbar * s.omega_z))));
        for r in &self.results {
            line(&format!("chi/2pi {}", r.formula.name()), format!("{} Hz", fmt_float(r.chi_over_2pi)));
        }
        out
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["formula", "nu_z_hz", "nu_perp_hz", "chi_rad_per_s", "chi_over_2pi_hz"])?;
        for r in &self.results {
            wtr.write_record([
                r.formula.name().to_owned(),
                fmt_float(self.spectrum.omega_z / TWO_PI),
                fmt_float(self.spectrum.omega_perp / TWO_PI),
                fmt_float(r.chi),
                fmt_float(r.chi_over_2pi),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Writes sweep rows. The `error` column appears only when some row failed.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], selection: FormulaSelection, w: W) -> Result<()> {
    let formulas: Vec<KerrFormula> = selection.formulas().collect();
    let with_error = rows.iter().any(|r| r.error.is_some());
    let mut header = vec!["nu_z_hz".to_owned()];
    header.extend(formulas.iter().map(|f| format!("chi_{}_hz", f.name())));
    if with_error {
        header.push("error".to_owned());
    }
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(&header)?;
    for row in rows {
        let mut rec = vec![fmt_float(row.nu_z_hz)];
        rec.extend(formulas.iter().map(|&f| fmt_opt(row.value(f))));
        if with_error {
            rec.push(row.error.clone().unwrap_or_default());
        }
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Runs a sweep and renders it to a CSV string.
pub fn sweep_csv_string(
    species: &IonSpecies,
    nu_perp_hz: f64,
    grid: &[f64],
    selection: FormulaSelection,
    consts: &PhysicalConstants,
    guard: f64,
) -> Result<String> {
    let rows = sweep_chi_with_guard(species, nu_perp_hz, grid, selection, consts, guard);
    let mut buf = Vec::new();
    write_sweep_csv(&rows, selection, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

const TABLE_MATCH_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Match,
    /// Printed element is wrong; the corrected n(n−1) form matches.
    PrintedTypo,
    Mismatch,
}

impl RowStatus {
    pub fn of(c: &Table1Comparison) -> Self {
        let denominators_agree = c.engine_denominator == c.printed_denominator;
        if !denominators_agree {
            RowStatus::Mismatch
        } else if c.printed_mismatch() <= TABLE_MATCH_TOLERANCE {
            RowStatus::Match
        } else if c.corrected_mismatch() <= TABLE_MATCH_TOLERANCE {
            RowStatus::PrintedTypo
        } else {
            RowStatus::Mismatch
        }
    }

    fn label(self) -> &'static str {
        match self {
            RowStatus::Match => "ok",
            RowStatus::PrintedTypo => "PRINTED TYPO (corrected form matches)",
            RowStatus::Mismatch => "MISMATCH",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Report {
    pub state: FockState,
    pub r: f64,
    pub zeta: f64,
    pub rows: Vec<Table1Comparison>,
    /// (intermediate, element, denominator) for channels outside the printed table.
    pub extra_channels: Vec<(FockState, f64, f64)>,
}

/// Elements scale with ζ and denominators do not depend on ξ, so the table is
/// evaluated at ξ = 1 and elements are shown in units of ζ.
pub fn table1_report(state: FockState, r: f64) -> Result<Table1Report> {
    let xi = 1.0;
    let zeta = DimensionlessParams::new(r, xi)?.zeta();
    let rows = compare_table1(state, r, xi)?;
    let extra_channels = table1_elements(state.nx, state.ny, state.ns, r, xi)?
        .into_iter()
        .filter(|e| e.row.is_none())
        .map(|e| (e.intermediate, e.element, e.denominator))
        .collect();
    Ok(Table1Report {
        state,
        r,
        zeta,
        rows,
        extra_channels,
    })
}

impl Table1Report {
    pub fn statuses(&self) -> Vec<RowStatus> {
        self.rows.iter().map(RowStatus::of).collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "V3 second-order channels from {} at r = {}; elements in units of zeta, denominators in units of hbar*omega_z",
            self.state,
            fmt_float(self.r)
        );
        let _ = writeln!(
            out,
            "{:>3}  {:<16} {:<14} {:>16} {:>16} {:>16} {:>16}  {:<40} status",
            "row", "printed label", "intermediate", "engine", "printed", "engine denom", "printed denom", "printed element"
        );
        for c in &self.rows {
            let inter = c.intermediate.map_or_else(|| "(closed)".to_owned(), |m| m.to_string());
            let _ = writeln!(
                out,
                "{:>3}  {:<16} {:<14} {:>16} {:>16} {:>16} {:>16}  {:<40} {}",
                c.row.number,
                c.row.label,
                inter,
                fmt_float(c.engine_element / self.zeta),
                fmt_float(c.printed_element / self.zeta),
                fmt_float(c.engine_denominator),
                fmt_float(c.printed_denominator),
                c.row.printed_formula,
                RowStatus::of(c).label()
            );
        }
        if !self.extra_channels.is_empty() {
            let _ = writeln!(out, "channels not in the printed table (stretch c^3 terms):");
            for (m, element, denom) in &self.extra_channels {
                let _ = writeln!(
                    out,
                    "     {:<16} {:<14} {:>16} {:>16} {:>16}",
                    "",
                    m.to_string(),
                    fmt_float(element / self.zeta),
                    "",
                    fmt_float(*denom)
                );
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompareRow {
    pub record: ExperimentRecord,
    pub chi_paper_hz: f64,
    pub chi_roos_hz: f64,
}

impl CompareRow {
    pub fn model(&self, f: KerrFormula) -> f64 {
        match f {
            KerrFormula::Paper => self.chi_paper_hz,
            KerrFormula::Roos => self.chi_roos_hz,
        }
    }

    /// measured − model
    pub fn residual(&self, f: KerrFormula) -> f64 {
        self.record.chi_over_2pi_hz - self.model(f)
    }

    pub fn z_score(&self, f: KerrFormula) -> Option<f64> {
        self.record.sigma_hz.map(|s| self.residual(f) / s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub species: String,
    pub nu_perp_hz: f64,
    pub rows: Vec<CompareRow>,
}

pub fn compare_records(
    records: &[ExperimentRecord],
    species: &IonSpecies,
    nu_perp_hz: f64,
    consts: &PhysicalConstants,
    guard: f64,
) -> Result<CompareReport> {
    let rows = records
        .iter()
        .map(|rec| {
            let trap = TrapConfig::from_hz(nu_perp_hz, rec.nu_z_hz)?;
            let spectrum = derive_spectrum(species, &trap, consts)?;
            Ok(CompareRow {
                record: *rec,
                chi_paper_hz: chi_with_guard(&spectrum, KerrFormula::Paper, guard)?.chi_over_2pi,
                chi_roos_hz: chi_with_guard(&spectrum, KerrFormula::Roos, guard)?.chi_over_2pi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompareReport {
        species: species.name.clone(),
        nu_perp_hz,
        rows,
    })
}

impl CompareReport {
    pub fn rms_residual(&self, f: KerrFormula) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        let ss: f64 = self.rows.iter().map(|r| r.residual(f).powi(2)).sum();
        (ss / self.rows.len() as f64).sqrt()
    }

    /// Σ z² over the points that carry σ; `None` when none do.
    pub fn chi_squared(&self, f: KerrFormula) -> Option<f64> {
        let zs: Vec<f64> = self.rows.iter().filter_map(|r| r.z_score(f)).collect();
        (!zs.is_empty()).then(|| zs.iter().map(|z| z * z).sum())
    }

    pub fn points_with_sigma(&self) -> usize {
        self.rows.iter().filter(|r| r.record.sigma_hz.is_some()).count()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# species {}, nu_perp {} Hz", self.species, fmt_float(self.nu_perp_hz));
        let _ = writeln!(
            out,
            "nu_z_hz,chi_measured_hz,sigma_hz,chi_paper_hz,residual_paper_hz,z_paper,chi_roos_hz,residual_roos_hz,z_roos"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                fmt_float(r.record.nu_z_hz),
                fmt_float(r.record.chi_over_2pi_hz),
                fmt_opt(r.record.sigma_hz),
                fmt_float(r.chi_paper_hz),
                fmt_float(r.residual(KerrFormula::Paper)),
                fmt_opt(r.z_score(KerrFormula::Paper)),
                fmt_float(r.chi_roos_hz),
                fmt_float(r.residual(KerrFormula::Roos)),
                fmt_opt(r.z_score(KerrFormula::Roos)),
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "formula,rms_residual_hz,chi_squared,points_with_sigma");
        for f in KerrFormula::ALL {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                f.name(),
                fmt_float(self.rms_residual(f)),
                fmt_opt(self.chi_squared(f)),
                self.points_with_sigma()
            );
        }
        out
    }
}
