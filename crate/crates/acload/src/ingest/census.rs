//! Census grid CSV: one row per cell with centroid and household counts.

use std::collections::HashSet;
use std::io::{Read, Write};

use thiserror::Error;

use crate::geo::{GeoPoint, GridCell, SIZE_BINS};

/// Normative census column order.
pub const CENSUS_HEADER: [&str; 3 + SIZE_BINS] = [
    "grid_id", "lat", "lon", "hh_1", "hh_2", "hh_3", "hh_4", "hh_5", "hh_6p",
];

#[derive(Debug, Error, PartialEq)]
pub enum CensusError {
    #[error("census header is {found:?}; expected {expected:?}", expected = CENSUS_HEADER.join(","))]
    BadHeader { found: String },
    #[error("malformed census row at line {line}: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("duplicate grid_id {0}")]
    DuplicateGridId(String),
    #[error("invalid coordinate at line {line}: {message}")]
    InvalidCoordinate { line: u64, message: String },
    #[error("census I/O: {0}")]
    Io(String),
}

/// Parse a census CSV into grid cells, sorted by id.
///
/// Privacy-masked counts (an empty field or the sentinel `-1`) become 0.
/// Duplicate cell ids are rejected; the result is independent of row order.
pub fn load_census<R: Read>(reader: R) -> Result<Vec<GridCell<f64>>, CensusError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    {
        let header = csv_reader
            .headers()
            .map_err(|e| CensusError::Io(e.to_string()))?;
        let found: Vec<&str> = header.iter().collect();
        if found != CENSUS_HEADER {
            return Err(CensusError::BadHeader {
                found: found.join(","),
            });
        }
    }

    let mut cells = Vec::new();
    let mut seen_ids = HashSet::new();
    let mut record = csv::StringRecord::new();
    loop {
        let more = csv_reader
            .read_record(&mut record)
            .map_err(|e| CensusError::Io(e.to_string()))?;
        if !more {
            break;
        }
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != CENSUS_HEADER.len() {
            return Err(CensusError::MalformedRow {
                line,
                message: format!(
                    "{} fields; expected {}",
                    record.len(),
                    CENSUS_HEADER.len()
                ),
            });
        }

        let id = record.get(0).unwrap().trim();
        if id.is_empty() {
            return Err(CensusError::MalformedRow {
                line,
                message: "empty grid_id".to_string(),
            });
        }
        if !seen_ids.insert(id.to_string()) {
            return Err(CensusError::DuplicateGridId(id.to_string()));
        }

        let parse_number = |column: usize, name: &str| -> Result<f64, CensusError> {
            let field = record.get(column).unwrap().trim();
            field.parse::<f64>().map_err(|_| CensusError::MalformedRow {
                line,
                message: format!("{name} value {field:?} is not a number"),
            })
        };

        let lat = parse_number(1, "lat")?;
        let lon = parse_number(2, "lon")?;
        let centroid =
            GeoPoint::new(lat, lon).map_err(|e| CensusError::InvalidCoordinate {
                line,
                message: e.to_string(),
            })?;

        let mut counts = [0.0f64; SIZE_BINS];
        for (bin, count) in counts.iter_mut().enumerate() {
            let column = 3 + bin;
            let field = record.get(column).unwrap().trim();
            if field.is_empty() {
                continue; // masked: stays 0
            }
            let value = parse_number(column, CENSUS_HEADER[column])?;
            if value == -1.0 {
                continue; // masked sentinel: stays 0
            }
            if !(value.is_finite() && value >= 0.0) {
                return Err(CensusError::MalformedRow {
                    line,
                    message: format!(
                        "{} count {} must be non-negative (or -1/empty for masked)",
                        CENSUS_HEADER[column], field
                    ),
                });
            }
            *count = value;
        }

        let cell = GridCell::new(id, centroid, counts).map_err(|e| CensusError::MalformedRow {
            line,
            message: e.to_string(),
        })?;
        cells.push(cell);
    }

    cells.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(cells)
}

/// Write cells in the same CSV layout `load_census` accepts; reloading the
/// output yields identical cells.
pub fn write_census<W: Write>(cells: &[GridCell<f64>], writer: W) -> Result<(), CensusError> {
    let mut csv_writer = csv::Writer::from_writer(writer);
    csv_writer
        .write_record(CENSUS_HEADER)
        .map_err(|e| CensusError::Io(e.to_string()))?;
    for cell in cells {
        let mut row = vec![
            cell.id.clone(),
            format!("{}", cell.centroid.lat()),
            format!("{}", cell.centroid.lon()),
        ];
        row.extend(cell.households_by_size().iter().map(|c| format!("{c}")));
        csv_writer
            .write_record(&row)
            .map_err(|e| CensusError::Io(e.to_string()))?;
    }
    csv_writer
        .flush()
        .map_err(|e| CensusError::Io(e.to_string()))?;
    Ok(())
}
