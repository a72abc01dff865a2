//! CSV output of sweep rows.

use super::sweep::SweepRow;
use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

pub const HEADER: [&str; 12] = [
    "kappa",
    "c_n2",
    "d",
    "protocol",
    "lambda_star",
    "case",
    "c1_bar",
    "c2_bar",
    "c_fso_bar",
    "tau_upp_bits_per_block",
    "tau_sim_bits_per_block",
    "tau_norm_bits_per_sec",
];

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Csv {
        line,
        reason: e.to_string(),
    }
}

/// Writes the header and one line per row.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| csv_err(e.into()))
}

pub fn to_csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    std::fs::write(path, to_csv_string(rows)).map_err(io_err)
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_err)?;
    if header.iter().ne(HEADER) {
        return Err(Error::Csv {
            line: 1,
            reason: format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}
