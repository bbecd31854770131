//! Grid cells, weather stations, and the nearest-station assignment.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::float::{cast, Float};

/// Mean Earth radius in kilometers, used for all great-circle distances.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Number of household-size bins: sizes 1 through 5 plus 6-and-more.
pub const SIZE_BINS: usize = 6;

/// Human-readable label for a household-size bin index.
pub fn size_bin_label(index: usize) -> &'static str {
    match index {
        0 => "1",
        1 => "2",
        2 => "3",
        3 => "4",
        4 => "5",
        5 => "6+",
        _ => panic!("household-size bin index out of range: {index}"),
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GeoError {
    #[error("latitude {0} outside [-90, 90]")]
    LatitudeOutOfRange(f64),
    #[error("longitude {0} outside [-180, 180]")]
    LongitudeOutOfRange(f64),
    #[error("household count for size bin {bin} is {value}; counts must be finite and non-negative")]
    InvalidHouseholdCount { bin: &'static str, value: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum AssignmentError {
    #[error("station set is empty; at least one weather station is required")]
    NoStations,
}

/// Validated WGS84 coordinate pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint<F> {
    lat: F,
    lon: F,
}

impl<F: Float> GeoPoint<F> {
    pub fn new(lat: F, lon: F) -> Result<Self, GeoError> {
        let ninety = cast::<F>(90.0);
        let one_eighty = cast::<F>(180.0);
        // NaN fails both comparisons and is rejected with the rest.
        if !(lat >= -ninety && lat <= ninety) {
            return Err(GeoError::LatitudeOutOfRange(
                lat.to_f64().unwrap_or(f64::NAN),
            ));
        }
        if !(lon >= -one_eighty && lon <= one_eighty) {
            return Err(GeoError::LongitudeOutOfRange(
                lon.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self { lat, lon })
    }

    pub fn lat(&self) -> F {
        self.lat
    }

    pub fn lon(&self) -> F {
        self.lon
    }
}

/// One census cell: identifier, centroid, and household counts by size bin.
///
/// Counts are carried as reals so that downstream expectation arithmetic
/// needs no rounding; ingestion produces whole numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell<F> {
    pub id: String,
    pub centroid: GeoPoint<F>,
    households_by_size: [F; SIZE_BINS],
}

impl<F: Float> GridCell<F> {
    pub fn new(
        id: impl Into<String>,
        centroid: GeoPoint<F>,
        households_by_size: [F; SIZE_BINS],
    ) -> Result<Self, GeoError> {
        for (bin, &count) in households_by_size.iter().enumerate() {
            if !(count.is_finite() && count >= F::zero()) {
                return Err(GeoError::InvalidHouseholdCount {
                    bin: size_bin_label(bin),
                    value: count.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self {
            id: id.into(),
            centroid,
            households_by_size,
        })
    }

    pub fn households_by_size(&self) -> &[F; SIZE_BINS] {
        &self.households_by_size
    }

    pub fn total_households(&self) -> F {
        self.households_by_size
            .iter()
            .fold(F::zero(), |acc, &c| acc + c)
    }
}

/// A weather station supplying hourly temperatures for its assigned cells.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherStation<F> {
    pub id: String,
    pub location: GeoPoint<F>,
}

/// Total mapping from cell ids to the id of their nearest station.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationAssignment {
    mapping: BTreeMap<String, String>,
}

impl StationAssignment {
    pub fn station_for(&self, cell_id: &str) -> Option<&str> {
        self.mapping.get(cell_id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    /// Pairs in ascending cell-id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.mapping.iter().map(|(c, s)| (c.as_str(), s.as_str()))
    }
}

/// Great-circle distance between two points in kilometers, on a sphere of
/// radius [`EARTH_RADIUS_KM`].
pub fn haversine_distance<F: Float>(a: GeoPoint<F>, b: GeoPoint<F>) -> F {
    let half = cast::<F>(0.5);
    let lat_a = a.lat.to_radians();
    let lat_b = b.lat.to_radians();
    let dlat = (b.lat - a.lat).to_radians();
    let dlon = (b.lon - a.lon).to_radians();

    let s_lat = (dlat * half).sin();
    let s_lon = (dlon * half).sin();
    let h = s_lat * s_lat + lat_a.cos() * lat_b.cos() * s_lon * s_lon;
    // Clamp against rounding pushing sqrt(h) past 1 for antipodal points.
    let c = cast::<F>(2.0) * h.sqrt().min(F::one()).asin();
    cast::<F>(EARTH_RADIUS_KM) * c
}

/// Map every cell to its nearest station by great-circle distance.
///
/// Ties go to the lexicographically smallest station id, which together with
/// the distance rule makes the mapping independent of input ordering and of
/// how the cell loop is scheduled.
pub fn assign_stations<F: Float>(
    cells: &[GridCell<F>],
    stations: &[WeatherStation<F>],
) -> Result<StationAssignment, AssignmentError> {
    if stations.is_empty() {
        return Err(AssignmentError::NoStations);
    }
    let mut ordered: Vec<&WeatherStation<F>> = stations.iter().collect();
    ordered.sort_by(|a, b| a.id.cmp(&b.id));

    let pairs: Vec<(String, String)> = cells
        .par_iter()
        .map(|cell| {
            let mut best = &ordered[0].id;
            let mut best_distance = haversine_distance(cell.centroid, ordered[0].location);
            for station in &ordered[1..] {
                let d = haversine_distance(cell.centroid, station.location);
                if d < best_distance {
                    best = &station.id;
                    best_distance = d;
                }
            }
            (cell.id.clone(), best.clone())
        })
        .collect();

    Ok(StationAssignment {
        mapping: pairs.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn point(lat: f64, lon: f64) -> GeoPoint<f64> {
        GeoPoint::new(lat, lon).unwrap()
    }

    fn cell(id: &str, lat: f64, lon: f64) -> GridCell<f64> {
        GridCell::new(id, point(lat, lon), [0.0; 6]).unwrap()
    }

    fn station(id: &str, lat: f64, lon: f64) -> WeatherStation<f64> {
        WeatherStation {
            id: id.to_string(),
            location: point(lat, lon),
        }
    }

    #[test]
    fn identical_points_have_zero_distance() {
        let p = point(52.52, 13.405);
        assert_eq!(haversine_distance(p, p), 0.0);
    }

    #[test]
    fn berlin_to_munich_matches_reference_geodesic() {
        // Reference value from an independent spherical-law-of-cosines
        // calculation on the same R = 6371 km sphere: 504.33789943823 km.
        let d = haversine_distance(point(52.52, 13.405), point(48.137, 11.575));
        assert!((d - 504.3378994382322).abs() < 1e-6, "d = {d}");
        assert!((d - 504.0).abs() < 2.0);
    }

    #[test]
    fn antipodal_points_are_half_a_circumference_apart() {
        let d = haversine_distance(point(0.0, 0.0), point(0.0, 180.0));
        assert!((d - std::f64::consts::PI * EARTH_RADIUS_KM).abs() < 1e-9);
        assert!((d - 20015.086796020572).abs() < 1e-9);
    }

    #[test]
    fn distance_works_in_f32() {
        let a = GeoPoint::<f32>::new(52.52, 13.405).unwrap();
        let b = GeoPoint::<f32>::new(48.137, 11.575).unwrap();
        let d = haversine_distance(a, b);
        assert!((d - 504.34).abs() < 0.5, "d = {d}");
    }

    #[test]
    fn coordinates_are_validated() {
        assert_eq!(
            GeoPoint::new(91.0, 0.0),
            Err(GeoError::LatitudeOutOfRange(91.0))
        );
        assert_eq!(
            GeoPoint::new(0.0, -181.0),
            Err(GeoError::LongitudeOutOfRange(-181.0))
        );
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
        assert!(GeoPoint::new(-90.0, 180.0).is_ok());
    }

    #[test]
    fn negative_household_counts_are_rejected() {
        let err = GridCell::new("c", point(0.0, 0.0), [1.0, -2.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            err,
            Err(GeoError::InvalidHouseholdCount {
                bin: "2",
                value: -2.0
            })
        );
    }

    #[test]
    fn single_station_takes_every_cell() {
        let cells = vec![cell("a", 50.0, 10.0), cell("b", 54.0, 8.0)];
        let stations = vec![station("s1", 52.0, 9.0)];
        let assignment = assign_stations(&cells, &stations).unwrap();
        assert_eq!(assignment.len(), 2);
        assert_eq!(assignment.station_for("a"), Some("s1"));
        assert_eq!(assignment.station_for("b"), Some("s1"));
    }

    #[test]
    fn cell_on_a_station_maps_to_it() {
        let cells = vec![cell("a", 52.0, 9.0)];
        let stations = vec![station("far", 40.0, 9.0), station("here", 52.0, 9.0)];
        let assignment = assign_stations(&cells, &stations).unwrap();
        assert_eq!(assignment.station_for("a"), Some("here"));
    }

    #[test]
    fn empty_station_set_is_an_error() {
        let cells = vec![cell("a", 52.0, 9.0)];
        assert_eq!(
            assign_stations(&cells, &[]),
            Err(AssignmentError::NoStations)
        );
    }

    #[test]
    fn ties_break_to_smallest_station_id() {
        // Two stations equidistant from the cell on the same meridian.
        let cells = vec![cell("a", 50.0, 10.0)];
        let stations = vec![station("s2", 51.0, 10.0), station("s1", 49.0, 10.0)];
        let assignment = assign_stations(&cells, &stations).unwrap();
        assert_eq!(assignment.station_for("a"), Some("s1"));
    }

    /// Brute-force argmin over all pairs, written independently of the
    /// implementation above.
    fn brute_force_nearest(c: &GridCell<f64>, stations: &[WeatherStation<f64>]) -> String {
        let mut best: Option<(f64, &str)> = None;
        for s in stations {
            let d = haversine_distance(c.centroid, s.location);
            best = match best {
                None => Some((d, &s.id)),
                Some((bd, bid)) => {
                    if d < bd || (d == bd && s.id.as_str() < bid) {
                        Some((d, &s.id))
                    } else {
                        Some((bd, bid))
                    }
                }
            };
        }
        best.unwrap().1.to_string()
    }

    #[test]
    fn line_configuration_matches_brute_force() {
        let cells = vec![
            cell("c1", 50.0, 8.0),
            cell("c2", 50.0, 9.1),
            cell("c3", 50.0, 10.4),
            cell("c4", 50.0, 11.9),
            cell("c5", 50.0, 13.0),
        ];
        let stations = vec![
            station("w1", 50.0, 8.5),
            station("w2", 50.0, 10.5),
            station("w3", 50.0, 12.5),
        ];
        let assignment = assign_stations(&cells, &stations).unwrap();
        for c in &cells {
            assert_eq!(
                assignment.station_for(&c.id),
                Some(brute_force_nearest(c, &stations).as_str()),
                "cell {}",
                c.id
            );
        }
    }

    #[test]
    fn assignment_is_permutation_invariant() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let cells: Vec<_> = (0..40)
            .map(|i| cell(&format!("c{i:02}"), 47.0 + 0.2 * i as f64 % 8.0, 6.0 + 0.3 * i as f64))
            .collect();
        let stations: Vec<_> = (0..7)
            .map(|i| station(&format!("w{i}"), 48.0 + 0.9 * i as f64, 7.0 + 1.1 * i as f64))
            .collect();
        let reference = assign_stations(&cells, &stations).unwrap();
        for _ in 0..5 {
            let mut shuffled_cells = cells.clone();
            let mut shuffled_stations = stations.clone();
            shuffled_cells.shuffle(&mut rng);
            shuffled_stations.shuffle(&mut rng);
            assert_eq!(
                assign_stations(&shuffled_cells, &shuffled_stations).unwrap(),
                reference
            );
        }
    }

    proptest! {
        #[test]
        fn distance_is_symmetric_and_non_negative(
            lat1 in -90.0f64..90.0, lon1 in -180.0f64..180.0,
            lat2 in -90.0f64..90.0, lon2 in -180.0f64..180.0,
        ) {
            let a = point(lat1, lon1);
            let b = point(lat2, lon2);
            let ab = haversine_distance(a, b);
            let ba = haversine_distance(b, a);
            prop_assert!(ab >= 0.0);
            prop_assert!((ab - ba).abs() < 1e-9);
        }

        #[test]
        fn assignment_is_total_and_optimal(
            cell_coords in prop::collection::vec((-60.0f64..60.0, -150.0f64..150.0), 1..20),
            station_coords in prop::collection::vec((-60.0f64..60.0, -150.0f64..150.0), 1..8),
        ) {
            let cells: Vec<_> = cell_coords
                .iter()
                .enumerate()
                .map(|(i, &(lat, lon))| cell(&format!("c{i}"), lat, lon))
                .collect();
            let stations: Vec<_> = station_coords
                .iter()
                .enumerate()
                .map(|(i, &(lat, lon))| station(&format!("w{i}"), lat, lon))
                .collect();
            let assignment = assign_stations(&cells, &stations).unwrap();
            prop_assert_eq!(assignment.len(), cells.len());
            for c in &cells {
                let assigned = assignment.station_for(&c.id).unwrap();
                let assigned_station = stations.iter().find(|s| s.id == assigned).unwrap();
                let d_assigned = haversine_distance(c.centroid, assigned_station.location);
                for s in &stations {
                    prop_assert!(
                        d_assigned <= haversine_distance(c.centroid, s.location),
                        "cell {} assigned {} but {} is closer", c.id, assigned, s.id
                    );
                }
            }
        }
    }
}
