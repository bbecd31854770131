//! Hourly at-home probabilities per demographic group.

use std::io::{Read, Write};

use thiserror::Error;

use crate::float::{cast, Float};
use crate::demographics::DemographicGroup;

/// Hours in the simulated day.
pub const HOURS: usize = 24;

#[derive(Debug, Error, PartialEq)]
pub enum PresenceError {
    #[error("row for group {group} on line {line} has {found} hour columns; expected {HOURS}")]
    MissingHour {
        group: String,
        line: u64,
        found: usize,
    },
    #[error("no row for group {0}")]
    MissingGroup(DemographicGroup),
    #[error("unknown group {name:?} on line {line}")]
    UnknownGroup { name: String, line: u64 },
    #[error("duplicate row for group {group} on line {line}")]
    DuplicateGroup {
        group: DemographicGroup,
        line: u64,
    },
    #[error("presence value for group {group}, hour {hour} is {value}; must lie in [0, 1]")]
    ValueOutOfRange {
        group: DemographicGroup,
        hour: usize,
        value: f64,
    },
    #[error("malformed presence file at line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("presence file I/O: {0}")]
    Io(String),
}

/// At-home probability for every (group, hour) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PresenceProfile<F> {
    entries: [[F; HOURS]; DemographicGroup::COUNT],
}

/// Default at-home probabilities as (first hour, last hour, value) bands per
/// group, in canonical group order. Retired people stay home most of the day;
/// working singles are away during working hours.
const DEFAULT_BANDS: [&[(usize, usize, f64)]; DemographicGroup::COUNT] = [
    // Families
    &[(0, 6, 0.95), (7, 8, 0.60), (9, 14, 0.45), (15, 16, 0.75), (17, 23, 0.90)],
    // CouplesWithoutChildren
    &[(0, 6, 0.95), (7, 8, 0.50), (9, 16, 0.30), (17, 17, 0.60), (18, 23, 0.85)],
    // Retired
    &[(0, 6, 0.95), (7, 21, 0.90), (22, 23, 0.95)],
    // SharedFlats
    &[(0, 6, 0.90), (7, 8, 0.60), (9, 17, 0.50), (18, 23, 0.75)],
    // Singles
    &[(0, 6, 0.95), (7, 8, 0.45), (9, 17, 0.25), (18, 18, 0.55), (19, 23, 0.80)],
];

impl<F: Float> PresenceProfile<F> {
    pub fn from_entries(
        entries: [[F; HOURS]; DemographicGroup::COUNT],
    ) -> Result<Self, PresenceError> {
        for (g, row) in entries.iter().enumerate() {
            for (hour, &value) in row.iter().enumerate() {
                if !(value >= F::zero() && value <= F::one()) {
                    return Err(PresenceError::ValueOutOfRange {
                        group: DemographicGroup::ALL[g],
                        hour,
                        value: value.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(Self { entries })
    }

    /// At-home probability for `group` at local `hour`.
    pub fn probability(&self, group: DemographicGroup, hour: usize) -> F {
        assert!(hour < HOURS, "hour {hour} out of range");
        self.entries[group.index()][hour]
    }

    /// Parse a full 5×24 override table from CSV with header
    /// `group,h0,...,h23`. The file replaces the defaults entirely.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self, PresenceError> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);

        {
            let header = csv_reader
                .headers()
                .map_err(|e| PresenceError::Io(e.to_string()))?;
            let mut expected = vec!["group".to_string()];
            expected.extend((0..HOURS).map(|h| format!("h{h}")));
            let found: Vec<&str> = header.iter().collect();
            if found != expected.iter().map(String::as_str).collect::<Vec<_>>() {
                return Err(PresenceError::Malformed {
                    line: 1,
                    message: format!("header must be {}", expected.join(",")),
                });
            }
        }

        let mut entries = [[F::zero(); HOURS]; DemographicGroup::COUNT];
        let mut seen = [false; DemographicGroup::COUNT];
        let mut record = csv::StringRecord::new();
        loop {
            let more = csv_reader
                .read_record(&mut record)
                .map_err(|e| PresenceError::Io(e.to_string()))?;
            if !more {
                break;
            }
            let line = record.position().map_or(0, |p| p.line());
            let name = record.get(0).unwrap_or("").to_string();
            let group = DemographicGroup::from_name(&name)
                .ok_or(PresenceError::UnknownGroup { name, line })?;
            if seen[group.index()] {
                return Err(PresenceError::DuplicateGroup { group, line });
            }
            if record.len() != HOURS + 1 {
                return Err(PresenceError::MissingHour {
                    group: group.name().to_string(),
                    line,
                    found: record.len().saturating_sub(1),
                });
            }
            for (hour, slot) in entries[group.index()].iter_mut().enumerate() {
                let field = record.get(hour + 1).unwrap();
                let value: f64 = field.trim().parse().map_err(|_| PresenceError::Malformed {
                    line,
                    message: format!("hour h{hour} value {field:?} is not a number"),
                })?;
                *slot = cast::<F>(value);
            }
            seen[group.index()] = true;
        }

        for group in DemographicGroup::ALL {
            if !seen[group.index()] {
                return Err(PresenceError::MissingGroup(group));
            }
        }
        Self::from_entries(entries)
    }

    /// Serialize in the same CSV layout `from_csv_reader` accepts; parsing
    /// the output reproduces the profile exactly.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), PresenceError> {
        let mut csv_writer = csv::Writer::from_writer(writer);
        let mut header = vec!["group".to_string()];
        header.extend((0..HOURS).map(|h| format!("h{h}")));
        csv_writer
            .write_record(&header)
            .map_err(|e| PresenceError::Io(e.to_string()))?;
        for group in DemographicGroup::ALL {
            let mut row = vec![group.name().to_string()];
            row.extend(
                self.entries[group.index()]
                    .iter()
                    .map(|v| format!("{v}")),
            );
            csv_writer
                .write_record(&row)
                .map_err(|e| PresenceError::Io(e.to_string()))?;
        }
        csv_writer
            .flush()
            .map_err(|e| PresenceError::Io(e.to_string()))?;
        Ok(())
    }
}

impl<F: Float> Default for PresenceProfile<F> {
    fn default() -> Self {
        let mut entries = [[F::zero(); HOURS]; DemographicGroup::COUNT];
        for (g, bands) in DEFAULT_BANDS.iter().enumerate() {
            for &(first, last, value) in *bands {
                for slot in &mut entries[g][first..=last] {
                    *slot = cast::<F>(value);
                }
            }
        }
        Self::from_entries(entries).expect("default presence table is within [0, 1]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_bands_cover_every_hour() {
        for bands in DEFAULT_BANDS {
            let mut next = 0;
            for &(first, last, value) in bands {
                assert_eq!(first, next, "bands must tile the day without gaps");
                assert!(last >= first && last < HOURS);
                assert!((0.0..=1.0).contains(&value));
                next = last + 1;
            }
            assert_eq!(next, HOURS);
        }
    }

    #[test]
    fn default_lookups_match_table() {
        let p = PresenceProfile::<f64>::default();
        assert_eq!(p.probability(DemographicGroup::Retired, 12), 0.90);
        assert_eq!(p.probability(DemographicGroup::Singles, 3), 0.95);
        assert_eq!(p.probability(DemographicGroup::CouplesWithoutChildren, 11), 0.30);
        assert_eq!(p.probability(DemographicGroup::SharedFlats, 0), 0.90);
        assert_eq!(p.probability(DemographicGroup::Families, 23), 0.90);
    }

    #[test]
    #[should_panic(expected = "hour 24 out of range")]
    fn hour_out_of_range_panics() {
        PresenceProfile::<f64>::default().probability(DemographicGroup::Retired, 24);
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        let mut entries = [[0.5; HOURS]; DemographicGroup::COUNT];
        entries[3][7] = 1.2;
        let err = PresenceProfile::from_entries(entries).unwrap_err();
        assert_eq!(
            err,
            PresenceError::ValueOutOfRange {
                group: DemographicGroup::SharedFlats,
                hour: 7,
                value: 1.2
            }
        );
    }

    #[test]
    fn default_round_trips_through_csv() {
        let p = PresenceProfile::<f64>::default();
        let mut buffer = Vec::new();
        p.write_csv(&mut buffer).unwrap();
        let parsed = PresenceProfile::<f64>::from_csv_reader(buffer.as_slice()).unwrap();
        assert_eq!(parsed, p);
    }

    #[test]
    fn short_row_reports_missing_hour() {
        let mut text = String::from("group,");
        text.push_str(&(0..HOURS).map(|h| format!("h{h}")).collect::<Vec<_>>().join(","));
        text.push('\n');
        text.push_str("Families,");
        text.push_str(&vec!["0.5"; HOURS - 1].join(","));
        text.push('\n');
        let err = PresenceProfile::<f64>::from_csv_reader(text.as_bytes()).unwrap_err();
        assert_eq!(
            err,
            PresenceError::MissingHour {
                group: "Families".to_string(),
                line: 2,
                found: HOURS - 1
            }
        );
    }

    #[test]
    fn value_above_one_is_rejected_from_csv() {
        let p = PresenceProfile::<f64>::default();
        let mut buffer = Vec::new();
        p.write_csv(&mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap().replace("0.3", "1.2");
        let err = PresenceProfile::<f64>::from_csv_reader(text.as_bytes()).unwrap_err();
        assert!(matches!(err, PresenceError::ValueOutOfRange { .. }), "{err:?}");
    }

    #[test]
    fn missing_group_is_reported() {
        let p = PresenceProfile::<f64>::default();
        let mut buffer = Vec::new();
        p.write_csv(&mut buffer).unwrap();
        let text: String = String::from_utf8(buffer)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("Retired"))
            .map(|l| format!("{l}\n"))
            .collect();
        let err = PresenceProfile::<f64>::from_csv_reader(text.as_bytes()).unwrap_err();
        assert_eq!(err, PresenceError::MissingGroup(DemographicGroup::Retired));
    }

    #[test]
    fn unknown_group_is_reported() {
        let p = PresenceProfile::<f64>::default();
        let mut buffer = Vec::new();
        p.write_csv(&mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap().replace("Retired", "Pensioners");
        let err = PresenceProfile::<f64>::from_csv_reader(text.as_bytes()).unwrap_err();
        assert_eq!(
            err,
            PresenceError::UnknownGroup {
                name: "Pensioners".to_string(),
                line: 4
            }
        );
    }

    #[test]
    fn duplicate_group_is_reported() {
        let p = PresenceProfile::<f64>::default();
        let mut buffer = Vec::new();
        p.write_csv(&mut buffer).unwrap();
        let mut text = String::from_utf8(buffer).unwrap();
        let singles_row = text.lines().last().unwrap().to_string();
        text.push_str(&singles_row);
        text.push('\n');
        let err = PresenceProfile::<f64>::from_csv_reader(text.as_bytes()).unwrap_err();
        assert_eq!(
            err,
            PresenceError::DuplicateGroup {
                group: DemographicGroup::Singles,
                line: 7
            }
        );
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_exact(
            raw in prop::collection::vec(0u32..=1_000_000, DemographicGroup::COUNT * HOURS)
        ) {
            let mut entries = [[0.0f64; HOURS]; DemographicGroup::COUNT];
            for (i, &v) in raw.iter().enumerate() {
                entries[i / HOURS][i % HOURS] = v as f64 / 1_000_000.0;
            }
            let p = PresenceProfile::from_entries(entries).unwrap();
            let mut buffer = Vec::new();
            p.write_csv(&mut buffer).unwrap();
            let parsed = PresenceProfile::<f64>::from_csv_reader(buffer.as_slice()).unwrap();
            prop_assert_eq!(parsed, p);
        }
    }
}
