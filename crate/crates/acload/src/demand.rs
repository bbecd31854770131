//! Expected hourly demand per cell and the national aggregate.

use thiserror::Error;

use crate::activation::{activation_probability, ActivationParams};
use crate::demographics::{DemographicGroup, DemographicHouseholds};
use crate::float::{cast, Float};
use crate::kahan::KahanSum;
use crate::presence::{PresenceProfile, HOURS};

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("scenario parameter {name} is {value}; must be positive")]
    NonPositive { name: &'static str, value: f64 },
    #[error("adoption rate {0} outside [0, 1]")]
    AdoptionOutOfRange(f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("temperature for station {station}, hour {hour} is {value}; must be finite")]
    NonFiniteTemperature {
        station: String,
        hour: usize,
        value: f64,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum DemandError {
    #[error("duplicate cell id {0} in national aggregation")]
    DuplicateCellId(String),
}

/// Adoption scenario: how many households install a unit and how much power
/// one unit draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams<F> {
    unit_power_kw: F,
    adoption_rate: F,
    step_hours: F,
}

impl<F: Float> ScenarioParams<F> {
    pub fn new(unit_power_kw: F, adoption_rate: F, step_hours: F) -> Result<Self, ScenarioError> {
        if !(unit_power_kw > F::zero() && unit_power_kw.is_finite()) {
            return Err(ScenarioError::NonPositive {
                name: "unit_power_kw",
                value: unit_power_kw.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(step_hours > F::zero() && step_hours.is_finite()) {
            return Err(ScenarioError::NonPositive {
                name: "step_hours",
                value: step_hours.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(adoption_rate >= F::zero() && adoption_rate <= F::one()) {
            return Err(ScenarioError::AdoptionOutOfRange(
                adoption_rate.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self {
            unit_power_kw,
            adoption_rate,
            step_hours,
        })
    }

    pub fn unit_power_kw(&self) -> F {
        self.unit_power_kw
    }

    pub fn adoption_rate(&self) -> F {
        self.adoption_rate
    }

    pub fn step_hours(&self) -> F {
        self.step_hours
    }

    /// Expected energy in kWh one household contributes per time step when it
    /// is home and its unit is running: power · step · adoption.
    pub fn energy_per_household_kwh(&self) -> F {
        self.unit_power_kw * self.step_hours * self.adoption_rate
    }
}

impl<F: Float> Default for ScenarioParams<F> {
    fn default() -> Self {
        Self::new(cast(2.1), cast(0.16), cast(1.0))
            .expect("default scenario parameters are valid")
    }
}

/// One day of hourly temperatures at a station.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureSeries<F> {
    pub station_id: String,
    temps: [F; HOURS],
}

impl<F: Float> TemperatureSeries<F> {
    pub fn new(station_id: impl Into<String>, temps: [F; HOURS]) -> Result<Self, SeriesError> {
        let station_id = station_id.into();
        for (hour, &t) in temps.iter().enumerate() {
            if !t.is_finite() {
                return Err(SeriesError::NonFiniteTemperature {
                    station: station_id,
                    hour,
                    value: t.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self { station_id, temps })
    }

    pub fn temps(&self) -> &[F; HOURS] {
        &self.temps
    }

    pub fn temp(&self, hour: usize) -> F {
        self.temps[hour]
    }
}

/// Expected additional energy per hour for one cell, in kWh.
#[derive(Debug, Clone, PartialEq)]
pub struct CellDemandSeries<F> {
    pub cell_id: String,
    values: [F; HOURS],
}

impl<F: Float> CellDemandSeries<F> {
    pub fn new(cell_id: impl Into<String>, values: [F; HOURS]) -> Self {
        Self {
            cell_id: cell_id.into(),
            values,
        }
    }

    pub fn values(&self) -> &[F; HOURS] {
        &self.values
    }

    pub fn value(&self, hour: usize) -> F {
        self.values[hour]
    }

    /// Largest hourly value; the earliest hour wins ties.
    pub fn peak(&self) -> (usize, F) {
        peak_of(&self.values)
    }
}

/// Expected additional energy per hour summed over all cells, in kWh.
#[derive(Debug, Clone, PartialEq)]
pub struct NationalDemandSeries<F> {
    values: [F; HOURS],
}

impl<F: Float> NationalDemandSeries<F> {
    pub fn values(&self) -> &[F; HOURS] {
        &self.values
    }

    pub fn value(&self, hour: usize) -> F {
        self.values[hour]
    }

    /// Argmax hour and its value; the earliest hour wins ties.
    pub fn peak(&self) -> (usize, F) {
        peak_of(&self.values)
    }
}

fn peak_of<F: Float>(values: &[F; HOURS]) -> (usize, F) {
    let mut best_hour = 0;
    let mut best_value = values[0];
    for (hour, &value) in values.iter().enumerate().skip(1) {
        if value > best_value {
            best_hour = hour;
            best_value = value;
        }
    }
    (best_hour, best_value)
}

/// Expected hourly demand of one cell: for each hour, the expected number of
/// at-home households times the activation probability at the assigned
/// station's temperature, times energy per adopting household.
pub fn cell_demand<F: Float>(
    demo: &DemographicHouseholds<F>,
    profile: &PresenceProfile<F>,
    activation: &ActivationParams<F>,
    temps: &TemperatureSeries<F>,
    scenario: &ScenarioParams<F>,
) -> CellDemandSeries<F> {
    let per_household = scenario.energy_per_household_kwh();
    let mut values = [F::zero(); HOURS];
    for (hour, value) in values.iter_mut().enumerate() {
        let on_probability = activation_probability(activation, temps.temp(hour));
        if on_probability == F::zero() {
            continue;
        }
        let mut at_home = F::zero();
        for group in DemographicGroup::ALL {
            at_home = at_home + demo.count(group) * profile.probability(group, hour);
        }
        *value = at_home * on_probability * per_household;
    }
    CellDemandSeries::new(demo.cell_id.clone(), values)
}

/// National hourly totals over all cells.
///
/// Cells are summed in ascending cell-id order with compensated summation, so
/// the result is bit-identical regardless of input order or how the per-cell
/// work was scheduled.
pub fn national_demand<F: Float>(
    cells: &[CellDemandSeries<F>],
) -> Result<NationalDemandSeries<F>, DemandError> {
    let mut ordered: Vec<&CellDemandSeries<F>> = cells.iter().collect();
    ordered.sort_by(|a, b| a.cell_id.cmp(&b.cell_id));
    for pair in ordered.windows(2) {
        if pair[0].cell_id == pair[1].cell_id {
            return Err(DemandError::DuplicateCellId(pair[0].cell_id.clone()));
        }
    }

    let mut sums: [KahanSum<F>; HOURS] = std::array::from_fn(|_| KahanSum::new());
    for cell in ordered {
        for (hour, sum) in sums.iter_mut().enumerate() {
            sum.add(cell.value(hour));
        }
    }
    let mut values = [F::zero(); HOURS];
    for (hour, sum) in sums.iter().enumerate() {
        values[hour] = sum.value();
    }
    Ok(NationalDemandSeries { values })
}
