use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::metrics::row_order;
use super::MetricsRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 9] = [
    "seed",
    "protocol",
    "radio_range",
    "mean_degree",
    "delivery_ratio",
    "greedy_ratio",
    "avg_stretch",
    "p95_stretch",
    "flood_tx",
];

/// Writes `rows` sorted by `(protocol, radio_range, seed)`, reals at six
/// decimals.
pub fn write_csv<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut sorted: Vec<&MetricsRow> = rows.iter().collect();
    sorted.sort_by(|a, b| row_order(a, b));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in sorted {
        w.write_record([
            r.seed.to_string(),
            r.protocol.clone(),
            format!("{:.6}", r.radio_range),
            format!("{:.6}", r.mean_degree),
            format!("{:.6}", r.delivery_ratio),
            format!("{:.6}", r.greedy_ratio),
            format!("{:.6}", r.avg_stretch),
            format!("{:.6}", r.p95_stretch),
            format!("{:.6}", r.flood_tx),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[MetricsRow], path: impl AsRef<Path>) -> Result<()> {
    write_csv(rows, File::create(path)?)
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<MetricsRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::parse(1, format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let real = |k: usize| -> Result<f64> {
            rec[k]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad {} {:?}", CSV_HEADER[k], &rec[k])))
        };
        rows.push(MetricsRow {
            seed: rec[0].parse().map_err(|_| Error::parse(line, format!("bad seed {:?}", &rec[0])))?,
            protocol: rec[1].to_string(),
            radio_range: real(2)?,
            mean_degree: real(3)?,
            delivery_ratio: real(4)?,
            greedy_ratio: real(5)?,
            avg_stretch: real(6)?,
            p95_stretch: real(7)?,
            flood_tx: real(8)?,
        });
    }
    Ok(rows)
}
