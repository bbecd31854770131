//! Result statistics: per-hour percentile spreads, top-loaded cells, and the
//! relative increase over a baseline system load.

use thiserror::Error;

use crate::demand::CellDemandSeries;
use crate::float::{cast, Float};
use crate::presence::HOURS;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("at least one cell is required")]
    EmptyInput,
    #[error("baseline load {0} GW must be positive")]
    NonPositiveBaseline(f64),
}

/// Spread of per-cell demand values at one hour, in kWh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HourStats<F> {
    pub min: F,
    pub p25: F,
    pub median: F,
    pub p75: F,
    pub p99: F,
    pub max: F,
}

/// [`HourStats`] for each hour of the day.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyDistribution<F> {
    hours: [HourStats<F>; HOURS],
}

impl<F: Float> HourlyDistribution<F> {
    pub fn hour(&self, hour: usize) -> &HourStats<F> {
        &self.hours[hour]
    }

    pub fn hours(&self) -> &[HourStats<F>; HOURS] {
        &self.hours
    }
}

/// Nearest-rank percentile of an ascending-sorted non-empty slice: the value
/// at rank ceil(P/100 · N), with ranks counted from 1.
fn nearest_rank<F: Float>(sorted: &[F], percentile: u8) -> F {
    let n = sorted.len();
    let rank = (f64::from(percentile) / 100.0 * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Percentile spread of cell demand values for each hour.
pub fn hourly_distribution<F: Float>(
    cells: &[CellDemandSeries<F>],
) -> Result<HourlyDistribution<F>, StatsError> {
    if cells.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let hours = std::array::from_fn(|hour| {
        let mut values: Vec<F> = cells.iter().map(|c| c.value(hour)).collect();
        values.sort_by(|a, b| a.partial_cmp(b).expect("demand values are never NaN"));
        HourStats {
            min: values[0],
            p25: nearest_rank(&values, 25),
            median: nearest_rank(&values, 50),
            p75: nearest_rank(&values, 75),
            p99: nearest_rank(&values, 99),
            max: values[values.len() - 1],
        }
    });
    Ok(HourlyDistribution { hours })
}

/// The `n` highest-demand cells at `hour`, as (cell id, kWh) pairs in
/// descending value order; equal values order by ascending cell id. Returns
/// all cells when fewer than `n` exist.
pub fn top_cells<F: Float>(
    cells: &[CellDemandSeries<F>],
    hour: usize,
    n: usize,
) -> Vec<(String, F)> {
    assert!(hour < HOURS, "hour {hour} out of range");
    assert!(n >= 1, "top cell count must be at least 1");
    let mut ranked: Vec<(String, F)> = cells
        .iter()
        .map(|c| (c.cell_id.clone(), c.value(hour)))
        .collect();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("demand values are never NaN")
            .then_with(|| a.0.cmp(&b.0))
    });
    ranked.truncate(n);
    ranked
}

/// Peak demand as a percentage of the baseline system load, both in GW.
pub fn relative_increase<F: Float>(peak_gw: F, baseline_gw: F) -> Result<F, StatsError> {
    if !(baseline_gw > F::zero() && baseline_gw.is_finite()) {
        return Err(StatsError::NonPositiveBaseline(
            baseline_gw.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(peak_gw / baseline_gw * cast::<F>(100.0))
}
