//! Maps, their file formats, procedural generators and query sets.

mod distance;
mod elevation;
mod generate;
mod occupancy;
mod queries;

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use distance::DistanceField;
pub use elevation::{ElevationMap, TerrainLimits};
pub use generate::{
    gen_mb, gen_sb, gen_terrain, gen_urban, BottleneckParams, Generated, TerrainParams, UrbanParams,
};
pub use occupancy::OccupancyGrid;
pub use queries::{QueryRecord, QuerySet};

/// Malformed map or query file content.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl fmt::Display) -> Self {
        Self {
            offset,
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Invalid(String),
    /// Generator parameters that cannot produce the requested world.
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
}

impl WorldError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn parse(path: &Path, source: ParseError) -> Self {
        Self::Parse {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Reads `<magic>\n<width> <height> <cellsize>\n` and returns the three
/// values and the offset of the first payload byte.
fn parse_header(bytes: &[u8], magic: &str) -> Result<(usize, usize, f64, usize), ParseError> {
    let line_end = |from: usize| -> Result<usize, ParseError> {
        bytes[from.min(bytes.len())..]
            .iter()
            .position(|&b| b == b'\n')
            .map(|p| from + p)
            .ok_or_else(|| ParseError::new(bytes.len(), "header line is not newline terminated"))
    };
    let first = line_end(0)?;
    if &bytes[..first] != magic.as_bytes() {
        return Err(ParseError::new(0, format!("expected `{magic}` header")));
    }
    let start = first + 1;
    let second = line_end(start)?;
    let line = std::str::from_utf8(&bytes[start..second])
        .map_err(|_| ParseError::new(start, "header is not valid UTF-8"))?;
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != 3 {
        return Err(ParseError::new(
            start,
            format!("expected `<width> <height> <cellsize>`, got `{line}`"),
        ));
    }
    let mut at = start;
    let mut dims = [0usize; 2];
    for (i, field) in fields[..2].iter().enumerate() {
        dims[i] = field
            .parse()
            .map_err(|_| ParseError::new(at, format!("invalid dimension `{field}`")))?;
        if dims[i] == 0 {
            return Err(ParseError::new(at, "dimensions must be positive"));
        }
        at += field.len() + 1;
    }
    let cell: f64 = fields[2]
        .parse()
        .map_err(|_| ParseError::new(at, format!("invalid cell size `{}`", fields[2])))?;
    if !(cell.is_finite() && cell > 0.0) {
        return Err(ParseError::new(at, format!("cell size {cell} must be positive")));
    }
    Ok((dims[0], dims[1], cell, second + 1))
}
