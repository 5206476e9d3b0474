//! Diagnostics time series as CSV.

use std::path::Path;

use crate::error::{Error, Result};
use crate::radial::Diagnostics;

pub const COLUMNS: [&str; 8] = [
    "time",
    "excess_mass",
    "energy",
    "sup_density_pert",
    "sup_velocity",
    "max_grad_u",
    "max_grad_n",
    "sup_E",
];

fn row_values(d: &Diagnostics) -> [f64; 8] {
    [
        d.time,
        d.excess_mass,
        d.energy,
        d.sup_density_pert,
        d.sup_velocity,
        d.max_grad_u,
        d.max_grad_n,
        d.sup_e,
    ]
}

/// CSV text with 17 significant digits per value.
pub fn timeseries_csv(rows: &[Diagnostics]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row_values(row).iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_timeseries(path: &Path, rows: &[Diagnostics]) -> Result<()> {
    std::fs::write(path, timeseries_csv(rows)).map_err(|e| Error::io(path, e))
}

pub fn parse_timeseries(text: &str) -> Result<Vec<Diagnostics>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != COLUMNS.join(",") {
        return Err(Error::Data(format!("unexpected CSV header `{header}`")));
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let values = line
                .split(',')
                .map(|cell| cell.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::Data(format!("CSV line {}: {e}", k + 2)))?;
            let [time, excess_mass, energy, sup_density_pert, sup_velocity, max_grad_u, max_grad_n, sup_e] =
                values[..]
            else {
                return Err(Error::Data(format!(
                    "CSV line {}: expected {} columns, found {}",
                    k + 2,
                    COLUMNS.len(),
                    values.len()
                )));
            };
            Ok(Diagnostics {
                time,
                excess_mass,
                energy,
                sup_density_pert,
                sup_velocity,
                max_grad_u,
                max_grad_n,
                sup_e,
            })
        })
        .collect()
}

pub fn read_timeseries(path: &Path) -> Result<Vec<Diagnostics>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_timeseries(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_series_is_header_only() {
        assert_eq!(
            timeseries_csv(&[]),
            "time,excess_mass,energy,sup_density_pert,sup_velocity,max_grad_u,max_grad_n,sup_E\n"
        );
    }

    #[test]
    fn values_round_trip_exactly() {
        let row = Diagnostics {
            time: 0.1,
            excess_mass: -1e-300,
            energy: std::f64::consts::PI,
            sup_density_pert: 1.0 / 3.0,
            sup_velocity: 0.0,
            max_grad_u: 5e-324,
            max_grad_n: 1.7976931348623157e308,
            sup_e: 2.0f64.sqrt(),
        };
        let back = parse_timeseries(&timeseries_csv(&[row, row])).unwrap();
        assert_eq!(back, vec![row, row]);
    }
}
