//! Experimental χ data in CSV form.
//!
//! Header `nu_z_hz,chi_over_2pi_hz[,sigma_hz]`; column order is free and extra
//! columns are ignored. A `sweep` CSV becomes valid input once its
//! `chi_paper_hz` (or `chi_roos_hz`) column is renamed to `chi_over_2pi_hz`.

use std::io::Read;

use crate::error::{Error, Result};

/// Magnitudes above this are taken as a unit slip (e.g. rad/s or mHz).
pub const UNIT_SANITY_LIMIT_HZ: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub nu_z_hz: f64,
    pub chi_over_2pi_hz: f64,
    /// 1σ uncertainty.
    pub sigma_hz: Option<f64>,
}

fn row_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line: line as usize,
        message: message.into(),
    }
}

/// Reads records; `allow_large` disables the |χ| ≤ 1 kHz sanity check.
pub fn read_experiment_csv<R: Read>(reader: R, allow_large: bool) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let nu_col = column("nu_z_hz").ok_or_else(|| row_err(1, "missing column nu_z_hz"))?;
    let chi_col = column("chi_over_2pi_hz").ok_or_else(|| row_err(1, "missing column chi_over_2pi_hz"))?;
    let sigma_col = column("sigma_hz");

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |col: usize, name: &str| -> Result<f64> {
            let raw = row.get(col).unwrap_or("");
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| row_err(line, format!("invalid {name} value {raw:?}")))
        };
        let nu_z_hz = field(nu_col, "nu_z_hz")?;
        if nu_z_hz <= 0.0 {
            return Err(row_err(line, format!("nu_z_hz must be positive, got {nu_z_hz}")));
        }
        let chi_over_2pi_hz = field(chi_col, "chi_over_2pi_hz")?;
        if !allow_large && chi_over_2pi_hz.abs() > UNIT_SANITY_LIMIT_HZ {
            return Err(row_err(
                line,
                format!("|chi_over_2pi_hz| = {chi_over_2pi_hz} exceeds 1 kHz; probable unit error"),
            ));
        }
        let sigma_hz = match sigma_col {
            Some(c) if !row.get(c).unwrap_or("").is_empty() => {
                let s = field(c, "sigma_hz")?;
                if s <= 0.0 {
                    return Err(row_err(line, format!("sigma_hz must be positive, got {s}")));
                }
                Some(s)
            }
            _ => None,
        };
        records.push(ExperimentRecord {
            nu_z_hz,
            chi_over_2pi_hz,
            sigma_hz,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_with_and_without_sigma() {
        let data = "nu_z_hz,chi_over_2pi_hz,sigma_hz\n1e6,-2.9,0.2\n1.2e6,-3.4,\n";
        let recs = read_experiment_csv(data.as_bytes(), false).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].sigma_hz, Some(0.2));
        assert_eq!(recs[1].sigma_hz, None);
        let recs = read_experiment_csv("chi_over_2pi_hz,nu_z_hz\n-1,8e5\n".as_bytes(), false).unwrap();
        assert_eq!(recs[0].nu_z_hz, 8e5);
    }

    #[test]
    fn malformed_row_cites_its_line() {
        let data = "nu_z_hz,chi_over_2pi_hz\n1e6,-2.9\n1.1e6,abc\n";
        let err = read_experiment_csv(data.as_bytes(), false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn invariants_are_enforced() {
        let bad_nu = "nu_z_hz,chi_over_2pi_hz\n-1e6,-2.9\n";
        assert!(matches!(read_experiment_csv(bad_nu.as_bytes(), false), Err(Error::Parse { line: 2, .. })));
        let bad_sigma = "nu_z_hz,chi_over_2pi_hz,sigma_hz\n1e6,-2.9,0\n";
        assert!(read_experiment_csv(bad_sigma.as_bytes(), false).is_err());
        let missing = "nu_z_hz,chi\n1e6,-2.9\n";
        assert!(read_experiment_csv(missing.as_bytes(), false).is_err());
    }

    #[test]
    fn unit_sanity_check_is_overridable() {
        let data = "nu_z_hz,chi_over_2pi_hz\n1e6,-18.5e3\n";
        assert!(read_experiment_csv(data.as_bytes(), false).is_err());
        assert_eq!(read_experiment_csv(data.as_bytes(), true).unwrap().len(), 1);
    }
}
