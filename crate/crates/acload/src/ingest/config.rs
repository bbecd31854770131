//! Run configuration TOML: every key optional, unknown keys rejected.
//!
//! Schema (all keys shown with their defaults):
//!
//! ```toml
//! date = 2025-07-02        # simulation day, local time
//! utc_offset_hours = 2     # local time = UTC + offset
//! # baseline_gw = 61.3     # optional baseline system load
//! p_max_kw = 2.1           # power draw of one running unit
//! eta = 0.16               # adoption fraction
//! dt_hours = 1.0           # simulation time step
//!
//! [activation]
//! threshold_c = 18.5
//! scale_c = 3.5
//! shape = 3.5
//! dt_hours = 1.0           # defaults to the top-level dt_hours
//! time_constant_hours = 1.0
//!
//! [demographics.matrix]    # optional full 6x5 override, rows "1".."5","6+"
//! # "1" = { Families = 0.0, CouplesWithoutChildren = 0.0, Retired = 0.35,
//! #         SharedFlats = 0.0, Singles = 0.65 }
//!
//! [presence]
//! # profiles = "presence.csv"  # optional 5x24 override table
//! ```

use std::path::PathBuf;

use chrono::NaiveDate;
use thiserror::Error;

use crate::activation::ActivationParams;
use crate::demand::ScenarioParams;
use crate::demographics::{DemographicGroup, DistributionMatrix};
use crate::geo::{size_bin_label, SIZE_BINS};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown config key {0}")]
    UnknownKey(String),
    #[error("invalid config value at {path}: {reason}")]
    InvalidValue { path: String, reason: String },
    #[error("config syntax: {0}")]
    Syntax(String),
}

fn invalid(path: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        path: path.to_string(),
        reason: reason.into(),
    }
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub date: NaiveDate,
    pub utc_offset_hours: i32,
    pub baseline_gw: Option<f64>,
    pub scenario: ScenarioParams<f64>,
    pub activation: ActivationParams<f64>,
    pub matrix: Option<DistributionMatrix<f64>>,
    /// Presence override CSV, as written in the config (resolved against the
    /// config file's directory by the CLI).
    pub presence_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            date: NaiveDate::from_ymd_opt(2025, 7, 2).expect("valid default date"),
            // Central European Summer Time, matching the default July date.
            utc_offset_hours: 2,
            baseline_gw: None,
            scenario: ScenarioParams::default(),
            activation: ActivationParams::default(),
            matrix: None,
            presence_path: None,
        }
    }
}

fn as_number(value: &toml::Value, path: &str) -> Result<f64, ConfigError> {
    match value {
        toml::Value::Float(f) => Ok(*f),
        toml::Value::Integer(i) => Ok(*i as f64),
        other => Err(invalid(path, format!("expected a number, found {}", other.type_str()))),
    }
}

fn as_table<'v>(value: &'v toml::Value, path: &str) -> Result<&'v toml::Table, ConfigError> {
    value
        .as_table()
        .ok_or_else(|| invalid(path, format!("expected a table, found {}", value.type_str())))
}

fn parse_date(value: &toml::Value) -> Result<NaiveDate, ConfigError> {
    match value {
        toml::Value::Datetime(dt) => {
            let date = match (dt.date, dt.time, dt.offset) {
                (Some(date), None, None) => date,
                _ => return Err(invalid("date", "expected a plain calendar date")),
            };
            NaiveDate::from_ymd_opt(
                i32::from(date.year),
                u32::from(date.month),
                u32::from(date.day),
            )
            .ok_or_else(|| invalid("date", "no such calendar date"))
        }
        toml::Value::String(s) => NaiveDate::parse_from_str(s, "%Y-%m-%d")
            .map_err(|_| invalid("date", format!("{s:?} is not a YYYY-MM-DD date"))),
        other => Err(invalid(
            "date",
            format!("expected a date, found {}", other.type_str()),
        )),
    }
}

/// Parse and validate a TOML run configuration. An empty document yields the
/// defaults.
pub fn load_config(text: &str) -> Result<RunConfig, ConfigError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;

    let mut config = RunConfig::default();
    let mut unit_power_kw = 2.1;
    let mut adoption_rate = 0.16;
    let mut step_hours = 1.0;
    let mut threshold_c = 18.5;
    let mut scale_c = 3.5;
    let mut shape = 3.5;
    let mut activation_step_hours: Option<f64> = None;
    let mut time_constant_hours = 1.0;

    for (key, value) in &table {
        match key.as_str() {
            "date" => config.date = parse_date(value)?,
            "utc_offset_hours" => {
                let hours = value.as_integer().ok_or_else(|| {
                    invalid("utc_offset_hours", "expected an integer")
                })?;
                if !(-12..=14).contains(&hours) {
                    return Err(invalid(
                        "utc_offset_hours",
                        format!("{hours} outside [-12, 14]"),
                    ));
                }
                config.utc_offset_hours = hours as i32;
            }
            "baseline_gw" => {
                let gw = as_number(value, "baseline_gw")?;
                if !(gw > 0.0 && gw.is_finite()) {
                    return Err(invalid("baseline_gw", format!("{gw} must be positive")));
                }
                config.baseline_gw = Some(gw);
            }
            "p_max_kw" => {
                unit_power_kw = as_number(value, "p_max_kw")?;
                if !(unit_power_kw > 0.0 && unit_power_kw.is_finite()) {
                    return Err(invalid("p_max_kw", format!("{unit_power_kw} must be positive")));
                }
            }
            "eta" => {
                adoption_rate = as_number(value, "eta")?;
                if !(0.0..=1.0).contains(&adoption_rate) {
                    return Err(invalid("eta", format!("{adoption_rate} outside [0, 1]")));
                }
            }
            "dt_hours" => {
                step_hours = as_number(value, "dt_hours")?;
                if !(step_hours > 0.0 && step_hours.is_finite()) {
                    return Err(invalid("dt_hours", format!("{step_hours} must be positive")));
                }
            }
            "activation" => {
                let section = as_table(value, "activation")?;
                for (sub_key, sub_value) in section {
                    let path = format!("activation.{sub_key}");
                    let number = || as_number(sub_value, &path);
                    let positive = |v: f64| -> Result<f64, ConfigError> {
                        if v > 0.0 && v.is_finite() {
                            Ok(v)
                        } else {
                            Err(invalid(&path, format!("{v} must be positive")))
                        }
                    };
                    match sub_key.as_str() {
                        "threshold_c" => {
                            threshold_c = number()?;
                            if !threshold_c.is_finite() {
                                return Err(invalid(&path, "must be finite"));
                            }
                        }
                        "scale_c" => scale_c = positive(number()?)?,
                        "shape" => shape = positive(number()?)?,
                        "dt_hours" => activation_step_hours = Some(positive(number()?)?),
                        "time_constant_hours" => time_constant_hours = positive(number()?)?,
                        _ => return Err(ConfigError::UnknownKey(path)),
                    }
                }
            }
            "demographics" => {
                let section = as_table(value, "demographics")?;
                for (sub_key, sub_value) in section {
                    match sub_key.as_str() {
                        "matrix" => {
                            let rows = as_table(sub_value, "demographics.matrix")?;
                            config.matrix = Some(parse_matrix(rows)?);
                        }
                        _ => {
                            return Err(ConfigError::UnknownKey(format!(
                                "demographics.{sub_key}"
                            )))
                        }
                    }
                }
            }
            "presence" => {
                let section = as_table(value, "presence")?;
                for (sub_key, sub_value) in section {
                    match sub_key.as_str() {
                        "profiles" => {
                            let path = sub_value.as_str().ok_or_else(|| {
                                invalid("presence.profiles", "expected a file path string")
                            })?;
                            config.presence_path = Some(PathBuf::from(path));
                        }
                        _ => {
                            return Err(ConfigError::UnknownKey(format!("presence.{sub_key}")))
                        }
                    }
                }
            }
            _ => return Err(ConfigError::UnknownKey(key.clone())),
        }
    }

    config.scenario = ScenarioParams::new(unit_power_kw, adoption_rate, step_hours)
        .expect("scenario values validated during parsing");
    config.activation = ActivationParams::new(
        threshold_c,
        scale_c,
        shape,
        activation_step_hours.unwrap_or(step_hours),
        time_constant_hours,
    )
    .expect("activation values validated during parsing");
    Ok(config)
}

/// Full 6×5 matrix override: rows keyed "1".."5","6+", columns keyed by
/// group name; every entry required.
fn parse_matrix(rows: &toml::Table) -> Result<DistributionMatrix<f64>, ConfigError> {
    let mut entries = [[0.0f64; DemographicGroup::COUNT]; SIZE_BINS];
    let mut row_present = [false; SIZE_BINS];
    for (row_key, row_value) in rows {
        let path = format!("demographics.matrix.{row_key}");
        let Some(size) = (0..SIZE_BINS).find(|&s| size_bin_label(s) == row_key) else {
            return Err(ConfigError::UnknownKey(path));
        };
        let columns = as_table(row_value, &path)?;
        let mut column_present = [false; DemographicGroup::COUNT];
        for (column_key, cell) in columns {
            let cell_path = format!("{path}.{column_key}");
            let Some(group) = DemographicGroup::from_name(column_key) else {
                return Err(ConfigError::UnknownKey(cell_path));
            };
            entries[size][group.index()] = as_number(cell, &cell_path)?;
            column_present[group.index()] = true;
        }
        for group in DemographicGroup::ALL {
            if !column_present[group.index()] {
                return Err(invalid(&path, format!("missing column {}", group.name())));
            }
        }
        row_present[size] = true;
    }
    for (size, present) in row_present.iter().enumerate() {
        if !present {
            return Err(invalid(
                "demographics.matrix",
                format!("missing row {:?}", size_bin_label(size)),
            ));
        }
    }
    DistributionMatrix::from_rows(entries)
        .map_err(|e| invalid("demographics.matrix", e.to_string()))
}
