//! ESRI ASCII grid reading and writing.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;
use towerplan_core::grid::{ElevationRaster, GridError};

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("line {line}: malformed header: {message}")]
    Header { line: usize, message: String },
    #[error("line {line}: expected {expected} values, found {found}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: `{token}` is not a number")]
    NonNumeric { line: usize, token: String },
    #[error("expected {expected} data rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] GridError),
    #[error("cannot read raster: {0}")]
    Io(#[from] std::io::Error),
}

pub fn read_raster(path: &Path) -> Result<ElevationRaster, RasterError> {
    parse_raster(&fs::read_to_string(path)?)
}

#[derive(Default)]
struct Header {
    ncols: Option<usize>,
    nrows: Option<usize>,
    xll: Option<(f64, bool)>,
    yll: Option<(f64, bool)>,
    cellsize: Option<f64>,
    nodata: Option<f64>,
}

fn header_value<T: std::str::FromStr>(
    line: usize,
    key: &str,
    raw: Option<&str>,
) -> Result<T, RasterError> {
    let raw = raw.ok_or_else(|| RasterError::Header {
        line,
        message: format!("`{key}` has no value"),
    })?;
    raw.parse().map_err(|_| RasterError::Header {
        line,
        message: format!("`{key}` has invalid value `{raw}`"),
    })
}

/// Parses an ASCII grid: the six header lines (NODATA_value optional,
/// `*llcenter` accepted in place of `*llcorner`) followed by `nrows` lines
/// of `ncols` values each.
pub fn parse_raster(text: &str) -> Result<ElevationRaster, RasterError> {
    let mut header = Header::default();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((idx, line)) = lines.peek().copied() {
        let mut parts = line.split_whitespace();
        let Some(key) = parts.next() else {
            lines.next();
            continue;
        };
        if !key.starts_with(|c: char| c.is_ascii_alphabetic()) {
            break;
        }
        let lineno = idx + 1;
        let value = parts.next();
        if parts.next().is_some() {
            return Err(RasterError::Header {
                line: lineno,
                message: format!("trailing tokens after `{key}`"),
            });
        }
        match key.to_ascii_lowercase().as_str() {
            "ncols" => header.ncols = Some(header_value(lineno, key, value)?),
            "nrows" => header.nrows = Some(header_value(lineno, key, value)?),
            "xllcorner" => header.xll = Some((header_value(lineno, key, value)?, false)),
            "xllcenter" => header.xll = Some((header_value(lineno, key, value)?, true)),
            "yllcorner" => header.yll = Some((header_value(lineno, key, value)?, false)),
            "yllcenter" => header.yll = Some((header_value(lineno, key, value)?, true)),
            "cellsize" => header.cellsize = Some(header_value(lineno, key, value)?),
            "nodata_value" => header.nodata = Some(header_value(lineno, key, value)?),
            _ => {
                return Err(RasterError::Header {
                    line: lineno,
                    message: format!("unknown key `{key}`"),
                })
            }
        }
        lines.next();
    }
    let header_end = lines.peek().map(|(i, _)| i + 1).unwrap_or(1);
    let missing = |name: &str| RasterError::Header {
        line: header_end,
        message: format!("missing `{name}`"),
    };
    let ncols = header.ncols.ok_or_else(|| missing("ncols"))?;
    let nrows = header.nrows.ok_or_else(|| missing("nrows"))?;
    let cellsize = header.cellsize.ok_or_else(|| missing("cellsize"))?;
    let (x, x_center) = header.xll.ok_or_else(|| missing("xllcorner"))?;
    let (y, y_center) = header.yll.ok_or_else(|| missing("yllcorner"))?;
    let origin_x = if x_center { x - cellsize / 2.0 } else { x };
    let origin_y = if y_center { y - cellsize / 2.0 } else { y };
    let nodata = header.nodata.unwrap_or(-9999.0);

    let mut values = Vec::with_capacity(ncols * nrows);
    let mut rows = 0;
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        if rows == nrows {
            return Err(RasterError::RowCount {
                expected: nrows,
                found: rows + 1,
            });
        }
        let before = values.len();
        for token in line.split_whitespace() {
            let v: f64 = token.parse().map_err(|_| RasterError::NonNumeric {
                line: lineno,
                token: token.to_string(),
            })?;
            values.push(v);
        }
        let found = values.len() - before;
        if found != ncols {
            return Err(RasterError::RowLength {
                line: lineno,
                expected: ncols,
                found,
            });
        }
        rows += 1;
    }
    if rows != nrows {
        return Err(RasterError::RowCount {
            expected: nrows,
            found: rows,
        });
    }
    Ok(ElevationRaster::new(
        ncols, nrows, cellsize, origin_x, origin_y, nodata, values,
    )?)
}

/// Canonical text form; parsing it back and writing again gives the same
/// bytes.
pub fn to_ascii(r: &ElevationRaster) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ncols {}", r.ncols);
    let _ = writeln!(out, "nrows {}", r.nrows);
    let _ = writeln!(out, "xllcorner {}", r.origin_x);
    let _ = writeln!(out, "yllcorner {}", r.origin_y);
    let _ = writeln!(out, "cellsize {}", r.cell_size_m);
    let _ = writeln!(out, "NODATA_value {}", r.nodata);
    for row in r.values.chunks(r.ncols) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
