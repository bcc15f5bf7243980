//! Model-agnostic system-dynamics primitives: table functions, first-order
//! smoothing, and a fixed-step Euler integrator that records time series.

mod integrate;
mod smooth;
mod table;

pub use integrate::{integrate, Dynamics, IntegrateError, RunResult, StepError, TimeSeries};
pub use smooth::{smooth_rate, smooth_step};
pub use table::TableFunction;

const MULTIPLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("table function needs at least 2 breakpoints, got {0}")]
    TooFewBreakpoints(usize),
    #[error("table function breakpoint {0} is not finite")]
    NonFiniteBreakpoint(usize),
    #[error("table function x values must be strictly increasing: breakpoint {index} has x = {x} after {prev}")]
    NonIncreasingBreakpoints { index: usize, prev: f64, x: f64 },
    #[error("{field} must be a finite positive number, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("{field} = {value} is not an integer multiple of {of} = {step}")]
    NotAMultiple {
        field: &'static str,
        value: f64,
        of: &'static str,
        step: f64,
    },
    #[error("model has {expected} levels but the initial state has {got}")]
    LevelCountMismatch { expected: usize, got: usize },
}

/// Step size, run length, and recording interval, all in months.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationSettings {
    pub dt: f64,
    pub horizon: f64,
    pub record_every: f64,
}

impl Default for IntegrationSettings {
    fn default() -> Self {
        Self {
            dt: 0.25,
            horizon: 132.0,
            record_every: 1.0,
        }
    }
}

impl IntegrationSettings {
    pub fn new(dt: f64, horizon: f64, record_every: f64) -> Result<Self, EngineError> {
        let settings = Self {
            dt,
            horizon,
            record_every,
        };
        settings.validate()?;
        Ok(settings)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        for (field, value) in [
            ("dt", self.dt),
            ("horizon", self.horizon),
            ("record_every", self.record_every),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(EngineError::NonPositive { field, value });
            }
        }
        check_multiple("horizon", self.horizon, "dt", self.dt)?;
        check_multiple("record_every", self.record_every, "dt", self.dt)?;
        check_multiple("horizon", self.horizon, "record_every", self.record_every)?;
        Ok(())
    }

    pub fn step_count(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    /// Integration steps between recorded samples.
    pub fn record_stride(&self) -> usize {
        ((self.record_every / self.dt).round() as usize).max(1)
    }

    pub fn sample_count(&self) -> usize {
        self.step_count() / self.record_stride() + 1
    }
}

fn check_multiple(
    field: &'static str,
    value: f64,
    of: &'static str,
    step: f64,
) -> Result<(), EngineError> {
    let ratio = value / step;
    let nearest = ratio.round();
    if nearest < 1.0 || (ratio - nearest).abs() > MULTIPLE_TOLERANCE * nearest {
        return Err(EngineError::NotAMultiple {
            field,
            value,
            of,
            step,
        });
    }
    Ok(())
}
