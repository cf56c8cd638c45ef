//! Plain-text grid function files.
//!
//! ```text
//! n_pts circumference origin
//! 0 re im
//! 1 re im
//! ...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Floats are written
//! with 17 significant digits so a write/read cycle is bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{CircleGrid, GridFunction};

/// Format a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_text(f: &GridFunction) -> String {
    let g = f.grid();
    let mut out = String::with_capacity(48 * (f.len() + 1));
    let _ = writeln!(
        out,
        "{} {} {}",
        g.n_pts(),
        fmt_f64(g.circumference()),
        fmt_f64(g.origin())
    );
    for (i, v) in f.values().iter().enumerate() {
        let _ = writeln!(out, "{} {} {}", i, fmt_f64(v.re), fmt_f64(v.im));
    }
    out
}

pub fn parse_text(text: &str) -> Result<GridFunction> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty grid file, expected header `n_pts circumference origin`".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header needs 3 fields `n_pts circumference origin`, found {}", fields.len()),
        });
    }
    let n_pts: usize = parse_field(fields[0], hline, "n_pts")?;
    let circumference: f64 = parse_field(fields[1], hline, "circumference")?;
    let origin: f64 = parse_field(fields[2], hline, "origin")?;
    let grid = CircleGrid::new(n_pts, circumference, origin).map_err(|e| Error::Parse {
        line: hline,
        msg: e.to_string(),
    })?;

    let mut values: Vec<Option<Complex64>> = vec![None; n_pts];
    let mut last_line = hline;
    for (ln, line) in lines {
        last_line = ln;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: ln,
                msg: format!("expected `index real imag`, found {} fields", fields.len()),
            });
        }
        let idx: usize = parse_field(fields[0], ln, "index")?;
        let re: f64 = parse_field(fields[1], ln, "real part")?;
        let im: f64 = parse_field(fields[2], ln, "imaginary part")?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::Parse {
                line: ln,
                msg: "non-finite value".into(),
            });
        }
        let slot = values.get_mut(idx).ok_or_else(|| Error::Parse {
            line: ln,
            msg: format!("index {idx} out of range for {n_pts} points"),
        })?;
        if slot.is_some() {
            return Err(Error::Parse {
                line: ln,
                msg: format!("duplicate index {idx}"),
            });
        }
        *slot = Some(Complex64::new(re, im));
    }
    if let Some(missing) = values.iter().position(Option::is_none) {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("missing value for index {missing}"),
        });
    }
    GridFunction::new(grid, values.into_iter().map(Option::unwrap).collect())
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse {what} from `{s}`"),
    })
}

pub fn read_grid_file(path: &Path) -> std::result::Result<GridFunction, FileError> {
    let text = fs::read_to_string(path).map_err(|e| FileError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_text(&text).map_err(|e| FileError::Format {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn write_grid_file(path: &Path, f: &GridFunction) -> std::result::Result<(), FileError> {
    fs::write(path, to_text(f)).map_err(|e| FileError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Failure reading or writing a grid file, with the path attached.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}: {source}")]
    Format { path: String, source: Error },
}
