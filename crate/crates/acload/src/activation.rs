//! Temperature-driven activation probability of a mobile air conditioner.

use thiserror::Error;

use crate::float::{cast, Float};

#[derive(Debug, Error, PartialEq)]
pub enum ActivationError {
    #[error("activation parameter {name} is {value}; must be positive")]
    NonPositive { name: &'static str, value: f64 },
}

/// Parameters of the discrete Weibull activation model.
///
/// Below the comfort threshold the unit never switches on. Above it, the
/// probability of switching on within one time step rises with temperature
/// following a Weibull hazard with the given scale and shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivationParams<F> {
    threshold_c: F,
    scale_c: F,
    shape: F,
    step_hours: F,
    time_constant_hours: F,
}

impl<F: Float> ActivationParams<F> {
    pub fn new(
        threshold_c: F,
        scale_c: F,
        shape: F,
        step_hours: F,
        time_constant_hours: F,
    ) -> Result<Self, ActivationError> {
        let positive = [
            ("scale_c", scale_c),
            ("shape", shape),
            ("step_hours", step_hours),
            ("time_constant_hours", time_constant_hours),
        ];
        for (name, value) in positive {
            if !(value > F::zero() && value.is_finite()) {
                return Err(ActivationError::NonPositive {
                    name,
                    value: value.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        if !threshold_c.is_finite() {
            return Err(ActivationError::NonPositive {
                name: "threshold_c",
                value: threshold_c.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            threshold_c,
            scale_c,
            shape,
            step_hours,
            time_constant_hours,
        })
    }

    pub fn threshold_c(&self) -> F {
        self.threshold_c
    }

    pub fn scale_c(&self) -> F {
        self.scale_c
    }

    pub fn shape(&self) -> F {
        self.shape
    }

    pub fn step_hours(&self) -> F {
        self.step_hours
    }

    pub fn time_constant_hours(&self) -> F {
        self.time_constant_hours
    }
}

impl<F: Float> Default for ActivationParams<F> {
    fn default() -> Self {
        Self::new(
            cast(18.5),
            cast(3.5),
            cast(3.5),
            cast(1.0),
            cast(1.0),
        )
        .expect("default activation parameters are positive")
    }
}

/// Probability that an installed unit is on during a time step at ambient
/// temperature `temp_c`.
///
/// Zero at or below the threshold; otherwise
/// `1 - exp(-((T - threshold)/scale)^shape * step/time_constant)`.
pub fn activation_probability<F: Float>(params: &ActivationParams<F>, temp_c: F) -> F {
    if temp_c <= params.threshold_c {
        return F::zero();
    }
    let normalized = (temp_c - params.threshold_c) / params.scale_c;
    let hazard = normalized.powf(params.shape) * params.step_hours / params.time_constant_hours;
    F::one() - (-hazard).exp()
}
