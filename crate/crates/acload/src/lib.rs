//! Bottom-up simulator of the additional residential electricity demand
//! caused by mobile air-conditioning adoption during hot weather.
//!
//! The pipeline walks a census grid of 1 km² cells: household counts per
//! size bin are distributed over five demographic groups, each group carries
//! an hourly at-home probability, every cell draws temperatures from its
//! nearest weather station, and a Weibull activation curve turns temperature
//! into the probability that an installed unit is running. The expected
//! hourly energy per cell and the national total follow in closed form; no
//! sampling is involved anywhere in the production path.
//!
//! Model math is generic over the scalar type (see [`float::Float`]); the
//! file-backed pipeline and CLI work in `f64` via the `*64` aliases below.

pub mod activation;
pub mod cli;
pub mod demand;
pub mod demographics;
pub mod float;
pub mod geo;
pub mod ingest;
pub mod kahan;
pub mod presence;
pub mod stats;

pub use activation::{activation_probability, ActivationError, ActivationParams};
pub use demand::{
    cell_demand, national_demand, CellDemandSeries, DemandError, NationalDemandSeries,
    ScenarioError, ScenarioParams, SeriesError, TemperatureSeries,
};
pub use demographics::{
    distribute, DemographicGroup, DemographicHouseholds, DistributionMatrix, MatrixError,
};
pub use float::Float;
pub use geo::{
    assign_stations, haversine_distance, AssignmentError, GeoError, GeoPoint, GridCell,
    StationAssignment, WeatherStation, EARTH_RADIUS_KM, SIZE_BINS,
};
pub use ingest::{
    load_census, load_config, load_weather, write_census, CensusError, ConfigError, RunConfig,
    StationWeather, WeatherError,
};
pub use kahan::KahanSum;
pub use presence::{PresenceError, PresenceProfile, HOURS};
pub use stats::{
    hourly_distribution, relative_increase, top_cells, HourStats, HourlyDistribution, StatsError,
};

/// Concrete `f64` instantiations used by the file pipeline and the CLI.
pub type GeoPoint64 = GeoPoint<f64>;
pub type GridCell64 = GridCell<f64>;
pub type WeatherStation64 = WeatherStation<f64>;
pub type DistributionMatrix64 = DistributionMatrix<f64>;
pub type DemographicHouseholds64 = DemographicHouseholds<f64>;
pub type PresenceProfile64 = PresenceProfile<f64>;
pub type ActivationParams64 = ActivationParams<f64>;
pub type ScenarioParams64 = ScenarioParams<f64>;
pub type TemperatureSeries64 = TemperatureSeries<f64>;
pub type CellDemandSeries64 = CellDemandSeries<f64>;
pub type NationalDemandSeries64 = NationalDemandSeries<f64>;
pub type HourlyDistribution64 = HourlyDistribution<f64>;
