//! CSV emit/ingest for histograms and fringe tables.
//!
//! Histogram CSV columns: `delta_ps` (bin center) and `counts`. Fringe CSV
//! columns: `theta1_rad, correlated, correlated_std, anticorrelated,
//! anticorrelated_std`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::AnalyzerError;
use crate::fringe::FringePoint;
use crate::histogram::Histogram;

#[derive(Debug, Serialize, Deserialize)]
struct HistogramRow {
    delta_ps: f64,
    counts: u64,
}

pub fn write_histogram_csv<W: Write>(w: W, hist: &Histogram) -> Result<(), AnalyzerError> {
    let mut writer = csv::Writer::from_writer(w);
    for (i, &c) in hist.counts().iter().enumerate() {
        writer
            .serialize(HistogramRow { delta_ps: hist.bin_center(i), counts: c })
            .map_err(|e| AnalyzerError::Csv(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Rebuild a histogram from its CSV form (bin width inferred from the
/// center spacing).
pub fn read_histogram_csv<R: Read>(r: R) -> Result<Histogram, AnalyzerError> {
    let mut reader = csv::Reader::from_reader(r);
    let rows: Vec<HistogramRow> = reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| AnalyzerError::Csv(e.to_string()))?;
    if rows.len() < 2 {
        return Err(AnalyzerError::Csv("histogram csv needs at least two rows".into()));
    }
    let bin = (rows[1].delta_ps - rows[0].delta_ps).round() as i64;
    let lo = (rows[0].delta_ps - bin as f64 / 2.0).round() as i64;
    let hi = lo + bin * rows.len() as i64;
    let hist = Histogram::from_parts(lo, hi, bin, rows.iter().map(|r| r.counts).collect())?;
    for (i, row) in rows.iter().enumerate() {
        let center = hist.bin_center(i);
        if (center - row.delta_ps).abs() > 1e-6 {
            return Err(AnalyzerError::Csv(format!(
                "row {i}: bin center {} does not sit on a uniform grid ({center})",
                row.delta_ps
            )));
        }
    }
    Ok(hist)
}

pub fn write_fringe_csv<W: Write>(w: W, points: &[FringePoint]) -> Result<(), AnalyzerError> {
    let mut writer = csv::Writer::from_writer(w);
    for p in points {
        writer.serialize(p).map_err(|e| AnalyzerError::Csv(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_fringe_csv<R: Read>(r: R) -> Result<Vec<FringePoint>, AnalyzerError> {
    let mut reader = csv::Reader::from_reader(r);
    reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| AnalyzerError::Csv(e.to_string()))
}
