use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// First line of every CSV file written by the harness.
pub const CSV_VERSION_LINE: &str = "# ttsketch-csv v1";

/// One sample at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub experiment: String,
    pub sample: usize,
    pub seed: u64,
    /// Value of the varied parameter.
    pub param: f64,
    pub eps_det: Option<f64>,
    /// Error of the randomized (or ALS) approximation.
    pub eps_rnd: Option<f64>,
    /// `eps_rnd / eps_det`, empty when `eps_det` is zero or missing.
    pub ratio: Option<f64>,
    pub t_rnd_ms: Option<f64>,
    pub t_det_ms: Option<f64>,
}

impl SampleRecord {
    pub fn ratio_of(eps_det: Option<f64>, eps_rnd: Option<f64>) -> Option<f64> {
        match (eps_det, eps_rnd) {
            (Some(det), Some(rnd)) if det > 0.0 => Some(rnd / det),
            _ => None,
        }
    }
}

pub fn write_csv<W: Write>(mut w: W, records: &[SampleRecord]) -> Result<()> {
    writeln!(w, "{CSV_VERSION_LINE}")?;
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    for record in records {
        writer.serialize(record)?;
    }
    if records.is_empty() {
        writer.write_record([
            "experiment", "sample", "seed", "param", "eps_det", "eps_rnd", "ratio", "t_rnd_ms",
            "t_det_ms",
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<SampleRecord>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let mut out = Vec::new();
    for record in reader.deserialize() {
        out.push(record?);
    }
    Ok(out)
}
