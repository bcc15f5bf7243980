//! The technical-debt maintenance model.
//!
//! Four integrated stocks (backlog, production library, technical debt,
//! total effort) plus a fifth level holding the smoothed allocation. All
//! quantities are per month; effort is in man-hours and size in function
//! points.

use crate::engine::{smooth_rate, Dynamics};
use crate::policy::AllocationPolicy;
use crate::ValidationError;

/// Which perfective effort generates new technical debt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AccrualBasis {
    /// Effort allocated to perfective work, whether or not the backlog absorbs it.
    #[default]
    Allocated,
    /// Only the effort actually spent delivering backlog items.
    Expended,
}

impl AccrualBasis {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Allocated => "allocated",
            Self::Expended => "expended",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "allocated" => Some(Self::Allocated),
            "expended" => Some(Self::Expended),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParameters {
    /// Fraction of the production library requested as new work, per year.
    pub new_business_demands: f64,
    /// Function points per person per month at maintainability 1.
    pub nominal_productivity: f64,
    pub monthly_hours_worked: f64,
    /// Share of perfective effort that would be needed to refactor what it produces.
    pub refactoring_effort_necessary: f64,
    pub refactoring_overhead: f64,
    /// Team size in persons, constant over the run.
    pub maintenance_team: f64,
    /// Fixed horizon constant in the maintainability exponent, in months.
    pub time_horizon: f64,
    /// Default smoothing time for table-driven policies, in months.
    pub smoothing_time: f64,
    pub backlog_drain_time: f64,
    pub debt_drain_time: f64,
    pub accrual_basis: AccrualBasis,
}

impl Default for ModelParameters {
    fn default() -> Self {
        Self {
            new_business_demands: 0.07,
            nominal_productivity: 4.65,
            monthly_hours_worked: 160.0,
            refactoring_effort_necessary: 0.3,
            refactoring_overhead: 2.0,
            maintenance_team: 14.0,
            time_horizon: 132.0,
            smoothing_time: 12.0,
            backlog_drain_time: 1.0,
            debt_drain_time: 1.0,
            accrual_basis: AccrualBasis::Allocated,
        }
    }
}

impl ModelParameters {
    /// Numeric fields by their configuration key.
    pub const NUMERIC_KEYS: [&'static str; 10] = [
        "new_business_demands",
        "nominal_productivity",
        "monthly_hours_worked",
        "refactoring_effort_necessary",
        "refactoring_overhead",
        "maintenance_team",
        "time_horizon",
        "smoothing_time",
        "backlog_drain_time",
        "debt_drain_time",
    ];

    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "new_business_demands" => self.new_business_demands,
            "nominal_productivity" => self.nominal_productivity,
            "monthly_hours_worked" => self.monthly_hours_worked,
            "refactoring_effort_necessary" => self.refactoring_effort_necessary,
            "refactoring_overhead" => self.refactoring_overhead,
            "maintenance_team" => self.maintenance_team,
            "time_horizon" => self.time_horizon,
            "smoothing_time" => self.smoothing_time,
            "backlog_drain_time" => self.backlog_drain_time,
            "debt_drain_time" => self.debt_drain_time,
            _ => return None,
        })
    }

    /// Sets a numeric field; returns `false` if `key` is not one.
    pub fn set(&mut self, key: &str, value: f64) -> bool {
        let slot = match key {
            "new_business_demands" => &mut self.new_business_demands,
            "nominal_productivity" => &mut self.nominal_productivity,
            "monthly_hours_worked" => &mut self.monthly_hours_worked,
            "refactoring_effort_necessary" => &mut self.refactoring_effort_necessary,
            "refactoring_overhead" => &mut self.refactoring_overhead,
            "maintenance_team" => &mut self.maintenance_team,
            "time_horizon" => &mut self.time_horizon,
            "smoothing_time" => &mut self.smoothing_time,
            "backlog_drain_time" => &mut self.backlog_drain_time,
            "debt_drain_time" => &mut self.debt_drain_time,
            _ => return false,
        };
        *slot = value;
        true
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        for key in Self::NUMERIC_KEYS {
            let v = self.get(key).expect("listed key");
            if !(v.is_finite() && v > 0.0) {
                return Err(ValidationError::new(
                    format!("params.{key}"),
                    format!("must be a finite positive number, got {v}"),
                ));
            }
        }
        if self.refactoring_effort_necessary > 1.0 {
            return Err(ValidationError::new(
                "params.refactoring_effort_necessary",
                format!(
                    "must lie in (0, 1], got {}",
                    self.refactoring_effort_necessary
                ),
            ));
        }
        Ok(())
    }

    /// Team capacity in man-hours per month.
    pub fn monthly_capacity(&self) -> f64 {
        self.maintenance_team * self.monthly_hours_worked
    }

    /// Composite decay constant of maintainability per man-hour of debt.
    pub fn maintainability_decay_rate(&self) -> f64 {
        self.refactoring_overhead
            / (self.time_horizon
                * self.maintenance_team
                * self.monthly_hours_worked
                * self.refactoring_effort_necessary)
    }
}

/// The integrated levels of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StockState {
    pub backlog: f64,
    pub production_library: f64,
    pub technical_debt: f64,
    pub total_effort: f64,
    pub allocation_level: f64,
}

impl Default for StockState {
    fn default() -> Self {
        Self {
            backlog: 0.0,
            production_library: 10_000.0,
            technical_debt: 0.0,
            total_effort: 0.0,
            allocation_level: 1.0,
        }
    }
}

impl StockState {
    pub const KEYS: [&'static str; 5] = [
        "backlog",
        "production_library",
        "technical_debt",
        "total_effort",
        "allocation_level",
    ];

    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "backlog" => self.backlog,
            "production_library" => self.production_library,
            "technical_debt" => self.technical_debt,
            "total_effort" => self.total_effort,
            "allocation_level" => self.allocation_level,
            _ => return None,
        })
    }

    pub fn set(&mut self, key: &str, value: f64) -> bool {
        let slot = match key {
            "backlog" => &mut self.backlog,
            "production_library" => &mut self.production_library,
            "technical_debt" => &mut self.technical_debt,
            "total_effort" => &mut self.total_effort,
            "allocation_level" => &mut self.allocation_level,
            _ => return false,
        };
        *slot = value;
        true
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        for key in Self::KEYS {
            let v = self.get(key).expect("listed key");
            if !(v.is_finite() && v >= 0.0) {
                return Err(ValidationError::new(
                    format!("initial.{key}"),
                    format!("must be a finite non-negative number, got {v}"),
                ));
            }
        }
        if self.allocation_level > 1.0 {
            return Err(ValidationError::new(
                "initial.allocation_level",
                format!("must lie in [0, 1], got {}", self.allocation_level),
            ));
        }
        Ok(())
    }

    pub fn to_levels(&self) -> [f64; 5] {
        [
            self.backlog,
            self.production_library,
            self.technical_debt,
            self.total_effort,
            self.allocation_level,
        ]
    }

    pub fn from_levels(levels: &[f64]) -> Self {
        Self {
            backlog: levels[0],
            production_library: levels[1],
            technical_debt: levels[2],
            total_effort: levels[3],
            allocation_level: levels[4],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AuxiliaryValues {
    pub maintainability: f64,
    pub productivity: f64,
    pub productivity_ratio: f64,
    pub allocation_target: f64,
    pub perfective_effort: f64,
    pub preventive_effort: f64,
    pub new_requirements_rate: f64,
    pub perfective_rate: f64,
    pub preventive_rate: f64,
    pub debt_accrual_rate: f64,
}

/// Net flow into each level, per month.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NetFlows {
    pub backlog: f64,
    pub production_library: f64,
    pub technical_debt: f64,
    pub total_effort: f64,
    pub allocation_level: f64,
}

pub fn new_requirements_rate(production_library: f64, params: &ModelParameters) -> f64 {
    production_library * params.new_business_demands / 12.0
}

/// Exponential decay of maintainability in accumulated debt, in (0, 1].
pub fn maintainability(technical_debt: f64, params: &ModelParameters) -> f64 {
    (-params.maintainability_decay_rate() * technical_debt)
        .exp()
        .max(f64::MIN_POSITIVE)
}

pub fn productivity(maintainability: f64, params: &ModelParameters) -> f64 {
    params.nominal_productivity * maintainability
}

/// Returns `(perfective, preventive)` effort in man-hours per month.
pub fn split_effort(allocation: f64, params: &ModelParameters) -> (f64, f64) {
    let capacity = params.monthly_capacity();
    (capacity * allocation, capacity * (1.0 - allocation))
}

/// Function points delivered per month: effective persons times per-person
/// productivity, capped so the backlog cannot drain faster than its drain time.
pub fn perfective_rate(
    perfective_effort: f64,
    productivity: f64,
    backlog: f64,
    params: &ModelParameters,
) -> f64 {
    perfective_capacity(perfective_effort, productivity, params)
        .min(backlog / params.backlog_drain_time)
}

fn perfective_capacity(perfective_effort: f64, productivity: f64, params: &ModelParameters) -> f64 {
    perfective_effort / params.monthly_hours_worked * productivity
}

/// Debt repaid per month; degraded code slows repayment by the maintainability factor.
pub fn preventive_rate(
    preventive_effort: f64,
    maintainability: f64,
    technical_debt: f64,
    params: &ModelParameters,
) -> f64 {
    (preventive_effort * maintainability).min(technical_debt / params.debt_drain_time)
}

pub fn debt_accrual_rate(perfective_effort: f64, params: &ModelParameters) -> f64 {
    params.refactoring_effort_necessary * perfective_effort
}

/// Computes every auxiliary and the net flow of all five levels at `t`.
pub fn evaluate_flows(
    state: &StockState,
    policy: &AllocationPolicy,
    params: &ModelParameters,
    _t: f64,
) -> (AuxiliaryValues, NetFlows) {
    let maint = maintainability(state.technical_debt, params);
    let prod = productivity(maint, params);
    // Actual over nominal productivity, which reduces to maintainability.
    let ratio = maint;
    let target = policy.allocation_target(ratio);

    let (perfective_effort, preventive_effort) = split_effort(state.allocation_level, params);
    let new_reqs = new_requirements_rate(state.production_library, params);
    let capacity = perfective_capacity(perfective_effort, prod, params);
    let perf_rate = perfective_rate(perfective_effort, prod, state.backlog, params);
    let prev_rate = preventive_rate(preventive_effort, maint, state.technical_debt, params);

    let accruing_effort = match params.accrual_basis {
        AccrualBasis::Allocated => perfective_effort,
        AccrualBasis::Expended if capacity > 0.0 => perfective_effort * (perf_rate / capacity),
        AccrualBasis::Expended => 0.0,
    };
    let accrual = debt_accrual_rate(accruing_effort, params);

    let allocation_flow = match policy.smoothing_time() {
        Some(tau) => smooth_rate(state.allocation_level, target, tau),
        None => 0.0,
    };

    let aux = AuxiliaryValues {
        maintainability: maint,
        productivity: prod,
        productivity_ratio: ratio,
        allocation_target: target,
        perfective_effort,
        preventive_effort,
        new_requirements_rate: new_reqs,
        perfective_rate: perf_rate,
        preventive_rate: prev_rate,
        debt_accrual_rate: accrual,
    };
    let flows = NetFlows {
        backlog: new_reqs - perf_rate,
        production_library: perf_rate,
        technical_debt: accrual - prev_rate,
        total_effort: params.monthly_capacity(),
        allocation_level: allocation_flow,
    };
    (aux, flows)
}

/// Column names of the recorded levels, in [`StockState::to_levels`] order.
pub const LEVEL_COLUMNS: [&str; 5] = [
    "backlog_fp",
    "production_library_fp",
    "technical_debt_mh",
    "total_effort_mh",
    "allocation",
];

pub const AUXILIARY_COLUMNS: [&str; 10] = [
    "maintainability",
    "productivity_fp_person_mo",
    "productivity_ratio",
    "allocation_target",
    "perfective_effort_mh_mo",
    "preventive_effort_mh_mo",
    "new_requirements_rate_fp_mo",
    "perfective_rate_fp_mo",
    "preventive_rate_mh_mo",
    "debt_accrual_rate_mh_mo",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{variable} left its valid range: {value}")]
pub struct InvalidState {
    pub variable: &'static str,
    pub value: f64,
}

/// The maintenance model bound to a parameter set and allocation policy.
#[derive(Debug, Clone)]
pub struct MaintenanceModel<'a> {
    pub params: &'a ModelParameters,
    pub policy: &'a AllocationPolicy,
}

impl Dynamics for MaintenanceModel<'_> {
    type Error = InvalidState;

    fn level_names(&self) -> &[&'static str] {
        &LEVEL_COLUMNS
    }

    fn auxiliary_names(&self) -> &[&'static str] {
        &AUXILIARY_COLUMNS
    }

    fn evaluate(
        &self,
        t: f64,
        levels: &[f64],
        rates: &mut [f64],
        auxiliaries: &mut [f64],
    ) -> Result<(), InvalidState> {
        for (&variable, &value) in LEVEL_COLUMNS.iter().zip(levels) {
            if !value.is_finite() || value < 0.0 {
                return Err(InvalidState { variable, value });
            }
        }
        let state = StockState::from_levels(levels);
        let (aux, flows) = evaluate_flows(&state, self.policy, self.params, t);
        rates.copy_from_slice(&[
            flows.backlog,
            flows.production_library,
            flows.technical_debt,
            flows.total_effort,
            flows.allocation_level,
        ]);
        auxiliaries.copy_from_slice(&[
            aux.maintainability,
            aux.productivity,
            aux.productivity_ratio,
            aux.allocation_target,
            aux.perfective_effort,
            aux.preventive_effort,
            aux.new_requirements_rate,
            aux.perfective_rate,
            aux.preventive_rate,
            aux.debt_accrual_rate,
        ]);
        Ok(())
    }
}
