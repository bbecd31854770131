//! File ingestion: census grid, station weather, and run configuration.

pub mod census;
pub mod config;
pub mod weather;

pub use census::{load_census, write_census, CensusError};
pub use config::{load_config, ConfigError, RunConfig};
pub use weather::{load_weather, StationWeather, WeatherError};
