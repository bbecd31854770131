//! Station weather CSV: hourly temperature readings keyed by UTC timestamp.

use std::collections::BTreeMap;
use std::io::Read;

use chrono::{DateTime, Duration, NaiveDate, Timelike, Utc};
use thiserror::Error;

use crate::demand::TemperatureSeries;
use crate::geo::{GeoPoint, WeatherStation};
use crate::presence::HOURS;

/// Normative weather column order.
pub const WEATHER_HEADER: [&str; 5] = ["station_id", "lat", "lon", "timestamp_utc", "temp_c"];

#[derive(Debug, Error, PartialEq)]
pub enum WeatherError {
    #[error("weather header is {found:?}; expected {expected:?}", expected = WEATHER_HEADER.join(","))]
    BadHeader { found: String },
    #[error("malformed weather row at line {line}: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("malformed timestamp at line {line}: {message}")]
    MalformedTimestamp { line: u64, message: String },
    #[error("duplicate reading for station {station}, local hour {hour}")]
    DuplicateReading { station: String, hour: usize },
    #[error("station {station} repeats with different coordinates at line {line}")]
    InconsistentStation { station: String, line: u64 },
    #[error("station {station} is missing local hours {hours:?} (only a single interior gap can be interpolated)")]
    MissingHours { station: String, hours: Vec<usize> },
    #[error("weather I/O: {0}")]
    Io(String),
}

/// A station together with its 24 local-hour temperatures for the
/// simulation day.
#[derive(Debug, Clone, PartialEq)]
pub struct StationWeather {
    pub station: WeatherStation<f64>,
    pub temps: TemperatureSeries<f64>,
}

struct StationSlots {
    location: GeoPoint<f64>,
    temps: [Option<f64>; HOURS],
}

/// Parse a weather CSV and extract, per station, the 24 local-time hours of
/// `date` (local time = UTC + `utc_offset_hours`), sorted by station id.
///
/// A single missing interior hour is filled with the midpoint of its
/// neighbors; a missing first or last hour, or two or more consecutive
/// missing hours, is an error.
pub fn load_weather<R: Read>(
    reader: R,
    date: NaiveDate,
    utc_offset_hours: i32,
) -> Result<Vec<StationWeather>, WeatherError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    {
        let header = csv_reader
            .headers()
            .map_err(|e| WeatherError::Io(e.to_string()))?;
        let found: Vec<&str> = header.iter().collect();
        if found != WEATHER_HEADER {
            return Err(WeatherError::BadHeader {
                found: found.join(","),
            });
        }
    }

    let offset = Duration::hours(i64::from(utc_offset_hours));
    let mut stations: BTreeMap<String, StationSlots> = BTreeMap::new();
    let mut record = csv::StringRecord::new();
    loop {
        let more = csv_reader
            .read_record(&mut record)
            .map_err(|e| WeatherError::Io(e.to_string()))?;
        if !more {
            break;
        }
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != WEATHER_HEADER.len() {
            return Err(WeatherError::MalformedRow {
                line,
                message: format!(
                    "{} fields; expected {}",
                    record.len(),
                    WEATHER_HEADER.len()
                ),
            });
        }

        let station_id = record.get(0).unwrap().trim();
        if station_id.is_empty() {
            return Err(WeatherError::MalformedRow {
                line,
                message: "empty station_id".to_string(),
            });
        }
        let parse_number = |column: usize, name: &str| -> Result<f64, WeatherError> {
            let field = record.get(column).unwrap().trim();
            field.parse::<f64>().map_err(|_| WeatherError::MalformedRow {
                line,
                message: format!("{name} value {field:?} is not a number"),
            })
        };
        let lat = parse_number(1, "lat")?;
        let lon = parse_number(2, "lon")?;
        let location =
            GeoPoint::new(lat, lon).map_err(|e| WeatherError::MalformedRow {
                line,
                message: e.to_string(),
            })?;

        let timestamp_field = record.get(3).unwrap().trim();
        let utc: DateTime<Utc> = DateTime::parse_from_rfc3339(timestamp_field)
            .map_err(|e| WeatherError::MalformedTimestamp {
                line,
                message: format!("{timestamp_field:?}: {e}"),
            })?
            .with_timezone(&Utc);

        let temp = parse_number(4, "temp_c")?;
        if !temp.is_finite() {
            return Err(WeatherError::MalformedRow {
                line,
                message: format!("temp_c value {temp} is not finite"),
            });
        }

        let slots = stations
            .entry(station_id.to_string())
            .or_insert_with(|| StationSlots {
                location,
                temps: [None; HOURS],
            });
        if slots.location != location {
            return Err(WeatherError::InconsistentStation {
                station: station_id.to_string(),
                line,
            });
        }

        let local = utc + offset;
        if local.date_naive() != date {
            continue; // outside the simulation day; the station stays known
        }
        let hour = local.hour() as usize;
        if slots.temps[hour].is_some() {
            return Err(WeatherError::DuplicateReading {
                station: station_id.to_string(),
                hour,
            });
        }
        slots.temps[hour] = Some(temp);
    }

    let mut result = Vec::with_capacity(stations.len());
    for (id, slots) in stations {
        let temps = fill_gaps(&id, slots.temps)?;
        result.push(StationWeather {
            station: WeatherStation {
                id: id.clone(),
                location: slots.location,
            },
            temps: TemperatureSeries::new(id, temps)
                .expect("gap-filled temperatures are finite"),
        });
    }
    Ok(result)
}

/// Interpolate single interior gaps; reject edge gaps and runs of two or
/// more missing hours.
fn fill_gaps(station: &str, slots: [Option<f64>; HOURS]) -> Result<[f64; HOURS], WeatherError> {
    let missing: Vec<usize> = (0..HOURS).filter(|&h| slots[h].is_none()).collect();
    if missing.is_empty() {
        return Ok(slots.map(|t| t.unwrap()));
    }
    let edge_gap = missing.contains(&0) || missing.contains(&(HOURS - 1));
    let consecutive = missing.windows(2).any(|pair| pair[1] == pair[0] + 1);
    if edge_gap || consecutive {
        return Err(WeatherError::MissingHours {
            station: station.to_string(),
            hours: missing,
        });
    }
    let mut filled = [0.0f64; HOURS];
    for hour in 0..HOURS {
        filled[hour] = match slots[hour] {
            Some(t) => t,
            // Interior gap with both neighbors present by the checks above.
            None => (slots[hour - 1].unwrap() + slots[hour + 1].unwrap()) / 2.0,
        };
    }
    Ok(filled)
}
