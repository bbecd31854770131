//! Result artifact writers and readers: cells.csv, national.csv,
//! summary.json, cells.geojson, manifest.json.
//!
//! Every writer is deterministic: identical in-memory results produce
//! identical bytes. Floats go through the shortest round-trip formatting of
//! their serializer (`Display` for CSV, `serde_json` for JSON).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::demand::{CellDemandSeries, NationalDemandSeries};
use crate::geo::GridCell;
use crate::presence::HOURS;
use crate::stats::HourlyDistribution;

use super::CliError;

pub const CELLS_FILE: &str = "cells.csv";
pub const NATIONAL_FILE: &str = "national.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const GEOJSON_FILE: &str = "cells.geojson";
pub const MANIFEST_FILE: &str = "manifest.json";

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("writing {}: {e}", path.display()))
}

fn cells_header() -> String {
    let mut header = String::from("grid_id");
    for hour in 0..HOURS {
        header.push_str(&format!(",h{hour}"));
    }
    header
}

/// `cells.csv`: one row per cell in ascending id order, hourly kWh values.
pub fn write_cells_csv(dir: &Path, series: &[CellDemandSeries<f64>]) -> Result<(), CliError> {
    let path = dir.join(CELLS_FILE);
    let mut out = create(&path)?;
    let write = |out: &mut BufWriter<File>, line: &str| -> Result<(), CliError> {
        writeln!(out, "{line}").map_err(|e| io_error(&path, e))
    };
    write(&mut out, &cells_header())?;
    for cell in series {
        let mut line = cell.cell_id.clone();
        for hour in 0..HOURS {
            line.push_str(&format!(",{}", cell.value(hour)));
        }
        write(&mut out, &line)?;
    }
    out.flush().map_err(|e| io_error(&path, e))
}

/// Read `cells.csv` back into demand series (for the top-cells command).
pub fn read_cells_csv(path: &Path) -> Result<Vec<CellDemandSeries<f64>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let malformed = |line_no: usize, message: &str| {
        CliError::Validation(format!(
            "{} line {line_no}: {message}",
            path.display()
        ))
    };
    match lines.next() {
        Some(header) if header == cells_header() => {}
        _ => return Err(malformed(1, "missing or wrong header")),
    }
    let mut series = Vec::new();
    for (index, line) in lines.enumerate() {
        let line_no = index + 2;
        let mut fields = line.split(',');
        let id = fields
            .next()
            .filter(|f| !f.is_empty())
            .ok_or_else(|| malformed(line_no, "missing grid_id"))?;
        let mut values = [0.0f64; HOURS];
        for (hour, value) in values.iter_mut().enumerate() {
            let field = fields
                .next()
                .ok_or_else(|| malformed(line_no, &format!("missing value for hour {hour}")))?;
            *value = field
                .parse()
                .map_err(|_| malformed(line_no, &format!("{field:?} is not a number")))?;
        }
        if fields.next().is_some() {
            return Err(malformed(line_no, "too many fields"));
        }
        series.push(CellDemandSeries::new(id, values));
    }
    Ok(series)
}

/// `national.csv`: 24 rows of hourly national energy in GWh.
pub fn write_national_csv(dir: &Path, national: &NationalDemandSeries<f64>) -> Result<(), CliError> {
    let path = dir.join(NATIONAL_FILE);
    let mut out = create(&path)?;
    writeln!(out, "hour,value_gwh").map_err(|e| io_error(&path, e))?;
    for hour in 0..HOURS {
        let gwh = national.value(hour) / 1e6;
        writeln!(out, "{hour},{gwh}").map_err(|e| io_error(&path, e))?;
    }
    out.flush().map_err(|e| io_error(&path, e))
}

#[derive(Serialize)]
pub struct HourSummary {
    pub hour: usize,
    pub min: f64,
    pub p25: f64,
    pub median: f64,
    pub p75: f64,
    pub p99: f64,
    pub max: f64,
}

/// Contents of `summary.json`, also printed to standard output by the run
/// command.
#[derive(Serialize)]
pub struct Summary {
    pub peak_hour: usize,
    pub peak_gw: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_increase_pct: Option<f64>,
    pub hourly_distribution: Vec<HourSummary>,
}

impl Summary {
    pub fn new(
        peak_hour: usize,
        peak_gw: f64,
        relative_increase_pct: Option<f64>,
        distribution: &HourlyDistribution<f64>,
    ) -> Self {
        let hourly_distribution = (0..HOURS)
            .map(|hour| {
                let s = distribution.hour(hour);
                HourSummary {
                    hour,
                    min: s.min,
                    p25: s.p25,
                    median: s.median,
                    p75: s.p75,
                    p99: s.p99,
                    max: s.max,
                }
            })
            .collect();
        Self {
            peak_hour,
            peak_gw,
            relative_increase_pct,
            hourly_distribution,
        }
    }

    pub fn render(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("summary serialization cannot fail");
        text.push('\n');
        text
    }
}

pub fn write_summary_json(dir: &Path, summary: &Summary) -> Result<(), CliError> {
    let path = dir.join(SUMMARY_FILE);
    let mut out = create(&path)?;
    out.write_all(summary.render().as_bytes())
        .map_err(|e| io_error(&path, e))?;
    out.flush().map_err(|e| io_error(&path, e))
}

/// GeoJSON feature collection with one Point per cell centroid. Properties
/// carry the cell id, its peak hourly energy, and all 24 hourly values.
struct FeatureCollection<'a> {
    cells: &'a [GridCell<f64>],
    series: &'a [CellDemandSeries<f64>],
}

impl Serialize for FeatureCollection<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("type", "FeatureCollection")?;
        map.serialize_entry(
            "features",
            &Features {
                cells: self.cells,
                series: self.series,
            },
        )?;
        map.end()
    }
}

struct Features<'a> {
    cells: &'a [GridCell<f64>],
    series: &'a [CellDemandSeries<f64>],
}

impl Serialize for Features<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.cells.len()))?;
        for (cell, series) in self.cells.iter().zip(self.series) {
            seq.serialize_element(&Feature { cell, series })?;
        }
        seq.end()
    }
}

struct Feature<'a> {
    cell: &'a GridCell<f64>,
    series: &'a CellDemandSeries<f64>,
}

impl Serialize for Feature<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("type", "Feature")?;
        map.serialize_entry(
            "geometry",
            &Geometry {
                lon: self.cell.centroid.lon(),
                lat: self.cell.centroid.lat(),
            },
        )?;
        map.serialize_entry("properties", &Properties { series: self.series })?;
        map.end()
    }
}

struct Geometry {
    lon: f64,
    lat: f64,
}

impl Serialize for Geometry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("type", "Point")?;
        map.serialize_entry("coordinates", &[self.lon, self.lat])?;
        map.end()
    }
}

struct Properties<'a> {
    series: &'a CellDemandSeries<f64>,
}

impl Serialize for Properties<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2 + HOURS))?;
        map.serialize_entry("grid_id", &self.series.cell_id)?;
        map.serialize_entry("peak_kwh", &self.series.peak().1)?;
        for hour in 0..HOURS {
            map.serialize_entry(&format!("h{hour}"), &self.series.value(hour))?;
        }
        map.end()
    }
}

pub fn write_geojson(
    dir: &Path,
    cells: &[GridCell<f64>],
    series: &[CellDemandSeries<f64>],
) -> Result<(), CliError> {
    if cells.len() != series.len()
        || cells.iter().zip(series).any(|(c, s)| c.id != s.cell_id)
    {
        return Err(CliError::Internal(
            "cell list and demand series are misaligned".to_string(),
        ));
    }
    let path = dir.join(GEOJSON_FILE);
    let mut out = create(&path)?;
    let collection = FeatureCollection { cells, series };
    serde_json::to_writer(&mut out, &collection).map_err(|e| io_error(&path, e))?;
    out.write_all(b"\n").map_err(|e| io_error(&path, e))?;
    out.flush().map_err(|e| io_error(&path, e))
}

#[derive(Serialize)]
pub struct ManifestInputs {
    pub census_sha256: String,
    pub weather_sha256: String,
    pub config_sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presence_sha256: Option<String>,
}

#[derive(Serialize)]
pub struct ActivationEcho {
    pub threshold_c: f64,
    pub scale_c: f64,
    pub shape: f64,
    pub dt_hours: f64,
    pub time_constant_hours: f64,
}

/// Effective configuration after defaults and command-line overrides.
#[derive(Serialize)]
pub struct ConfigEcho {
    pub date: String,
    pub utc_offset_hours: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_gw: Option<f64>,
    pub p_max_kw: f64,
    pub eta: f64,
    pub dt_hours: f64,
    pub activation: ActivationEcho,
    pub matrix_override: bool,
    pub presence_override: bool,
}

/// Reproducibility record for one run. Identical inputs give identical
/// manifests except for `wall_clock_seconds`.
#[derive(Serialize)]
pub struct Manifest {
    pub version: String,
    pub inputs: ManifestInputs,
    pub config: ConfigEcho,
    pub cells: usize,
    pub stations: usize,
    pub wall_clock_seconds: f64,
}

pub fn write_manifest(dir: &Path, manifest: &Manifest) -> Result<(), CliError> {
    let path = dir.join(MANIFEST_FILE);
    let mut out = create(&path)?;
    let mut text =
        serde_json::to_string_pretty(manifest).expect("manifest serialization cannot fail");
    text.push('\n');
    out.write_all(text.as_bytes()).map_err(|e| io_error(&path, e))?;
    out.flush().map_err(|e| io_error(&path, e))
}
