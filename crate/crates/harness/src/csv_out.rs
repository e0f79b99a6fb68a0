use std::fs;
use std::path::Path;

use crmc::analysis_metrics::median;

use crate::error::{HarnessError, Result};
use crate::runner::{Algorithm, RunRecord};

pub const LEARNING_CURVES: &str = "learning_curves.csv";
pub const BEAMPATTERNS: &str = "beampatterns.csv";
pub const SUMMARY: &str = "summary.csv";

const CURVE_HEADER: [&str; 8] = [
    "scenario",
    "algorithm",
    "trial",
    "iteration",
    "relative_error_db",
    "abs_error",
    "psi",
    "spectral_diag",
];
const PATTERN_HEADER: [&str; 5] = ["scenario", "algorithm", "trial", "angle_deg", "gain_db"];
const SUMMARY_HEADER: [&str; 5] = [
    "scenario",
    "algorithm",
    "diverged_fraction",
    "median_final_error_db",
    "mean_step_time_ns",
];

/// Formats with 9 significant digits, switching to exponent notation
/// outside `[1e-5, 1e9)`.
pub fn format_sig9(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp).max(0) as usize, v);
        trim_fraction(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scenario: String,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub diverged_fraction: f64,
    /// Over non-diverged trials; NaN when every trial diverged.
    pub median_final_error_db: f64,
    pub mean_step_time_ns: f64,
}

/// One row per (scenario, algorithm), in record order.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(&str, Algorithm)> = Vec::new();
    for r in records {
        let k = (r.scenario.as_str(), r.algorithm);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(scenario, algorithm)| {
            let group: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.scenario == scenario && r.algorithm == algorithm)
                .collect();
            let n = group.len() as f64;
            let finals: Vec<f64> = group
                .iter()
                .filter(|r| !r.diverged())
                .filter_map(|r| r.curve.final_relative_error_db())
                .collect();
            SummaryRow {
                scenario: scenario.to_string(),
                algorithm,
                trials: group.len(),
                diverged_fraction: group.iter().filter(|r| r.diverged()).count() as f64 / n,
                median_final_error_db: median(&finals).unwrap_or(f64::NAN),
                mean_step_time_ns: group.iter().map(|r| r.step_time_ns).sum::<f64>() / n,
            }
        })
        .collect()
}

/// Writes the learning-curve, beampattern and summary tables into `dir`,
/// creating it if needed.
pub fn emit_csv(records: &[RunRecord], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
        path: dir.display().to_string(),
        source,
    })?;

    let path = dir.join(LEARNING_CURVES);
    let mut w = open(&path)?;
    write(&mut w, &path, CURVE_HEADER)?;
    for r in records {
        let c = &r.curve;
        for i in 0..c.len() {
            write(
                &mut w,
                &path,
                [
                    r.scenario.clone(),
                    r.algorithm.to_string(),
                    r.trial.to_string(),
                    i.to_string(),
                    format_sig9(c.relative_error_db[i]),
                    format_sig9(c.abs_error[i]),
                    format_sig9(c.psi[i]),
                    format_sig9(c.spectral[i]),
                ],
            )?;
        }
    }
    finish(w, &path)?;

    let path = dir.join(BEAMPATTERNS);
    let mut w = open(&path)?;
    write(&mut w, &path, PATTERN_HEADER)?;
    for r in records {
        if let Some(bp) = &r.beampattern {
            for (a, g) in bp.angles_deg.iter().zip(&bp.gain_db) {
                write(
                    &mut w,
                    &path,
                    [
                        r.scenario.clone(),
                        r.algorithm.to_string(),
                        r.trial.to_string(),
                        format_sig9(*a),
                        format_sig9(*g),
                    ],
                )?;
            }
        }
    }
    finish(w, &path)?;

    let path = dir.join(SUMMARY);
    let mut w = open(&path)?;
    write(&mut w, &path, SUMMARY_HEADER)?;
    for row in summarize(records) {
        write(
            &mut w,
            &path,
            [
                row.scenario,
                row.algorithm.to_string(),
                format_sig9(row.diverged_fraction),
                format_sig9(row.median_final_error_db),
                format_sig9(row.mean_step_time_ns),
            ],
        )?;
    }
    finish(w, &path)
}

type Writer = csv::Writer<fs::File>;

fn csv_err(path: &Path, source: csv::Error) -> HarnessError {
    HarnessError::Csv {
        path: path.display().to_string(),
        source,
    }
}

fn open(path: &Path) -> Result<Writer> {
    csv::Writer::from_path(path).map_err(|e| csv_err(path, e))
}

fn write<I, F>(w: &mut Writer, path: &Path, row: I) -> Result<()>
where
    I: IntoIterator<Item = F>,
    F: AsRef<[u8]>,
{
    w.write_record(row).map_err(|e| csv_err(path, e))
}

fn finish(mut w: Writer, path: &Path) -> Result<()> {
    w.flush().map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(-13.146830), "-13.14683");
        assert_eq!(format_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(format_sig9(123456789.4), "123456789");
        assert_eq!(format_sig9(1.5e-7), "1.5e-7");
        assert_eq!(format_sig9(2.0e12), "2e12");
        assert_eq!(format_sig9(9.9999999999), "10");
        assert_eq!(format_sig9(f64::NAN), "NaN");
        assert_eq!(format_sig9(f64::NEG_INFINITY), "-inf");
        for v in [
            std::f64::consts::PI,
            -2.718281828459e-9,
            6.02214076e23,
            0.1 + 0.2,
        ] {
            let back: f64 = format_sig9(v).parse().unwrap();
            assert!(((back - v) / v).abs() < 1e-8, "{v}");
        }
    }
}
