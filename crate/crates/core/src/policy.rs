//! Rules for splitting team effort between perfective and preventive work.

use crate::engine::TableFunction;
use crate::ValidationError;

/// Fraction of total effort assigned to perfective maintenance.
#[derive(Debug, Clone, PartialEq)]
pub enum AllocationPolicy {
    /// Constant allocation, never smoothed.
    Fixed { value: f64 },
    /// Target allocation read from `table` at the current productivity ratio,
    /// approached through a first-order smooth with `smoothing_time` months.
    TableDriven {
        table: TableFunction,
        smoothing_time: f64,
    },
}

impl AllocationPolicy {
    pub fn fixed(value: f64) -> Result<Self, ValidationError> {
        let policy = Self::Fixed { value };
        policy.validate()?;
        Ok(policy)
    }

    pub fn table_driven(
        table: TableFunction,
        smoothing_time: f64,
    ) -> Result<Self, ValidationError> {
        let policy = Self::TableDriven {
            table,
            smoothing_time,
        };
        policy.validate()?;
        Ok(policy)
    }

    /// Reactive policy with the default knee table.
    pub fn reactive(smoothing_time: f64) -> Result<Self, ValidationError> {
        Self::table_driven(default_scenario_table(), smoothing_time)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        match self {
            Self::Fixed { value } => {
                if !(0.0..=1.0).contains(value) {
                    return Err(ValidationError::new(
                        "policy.value",
                        format!("must lie in [0, 1], got {value}"),
                    ));
                }
            }
            Self::TableDriven {
                table,
                smoothing_time,
            } => {
                if let Some((i, &(x, y))) = table
                    .points()
                    .iter()
                    .enumerate()
                    .find(|(_, p)| !(0.0..=1.0).contains(&p.1))
                {
                    return Err(ValidationError::new(
                        "policy.breakpoints",
                        format!("output at breakpoint {i} (x = {x}) must lie in [0, 1], got {y}"),
                    ));
                }
                if !(smoothing_time.is_finite() && *smoothing_time > 0.0) {
                    return Err(ValidationError::new(
                        "policy.smoothing_time",
                        format!("must be a finite positive number, got {smoothing_time}"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn allocation_target(&self, productivity_ratio: f64) -> f64 {
        match self {
            Self::Fixed { value } => *value,
            Self::TableDriven { table, .. } => table.lookup(productivity_ratio),
        }
    }

    /// Allocation level the smoothed stock starts from.
    pub fn initial_level(&self) -> f64 {
        match self {
            Self::Fixed { value } => *value,
            Self::TableDriven { .. } => 1.0,
        }
    }

    pub fn smoothing_time(&self) -> Option<f64> {
        match self {
            Self::Fixed { .. } => None,
            Self::TableDriven { smoothing_time, .. } => Some(*smoothing_time),
        }
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, Self::Fixed { .. })
    }
}

/// Flat floor of 0.2 up to a productivity ratio of 0.95, then a steep linear
/// rise to full perfective allocation at ratio 1.
pub fn default_scenario_table() -> TableFunction {
    TableFunction::new(vec![(0.0, 0.2), (0.95, 0.2), (1.0, 1.0)]).expect("default table is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixed_ignores_ratio() {
        let p = AllocationPolicy::fixed(1.0).unwrap();
        for r in [0.0, 0.3, 1.0, 2.0] {
            assert_eq!(p.allocation_target(r), 1.0);
        }
    }

    #[test]
    fn reactive_default_table() {
        let p = AllocationPolicy::reactive(12.0).unwrap();
        assert_eq!(p.allocation_target(1.0), 1.0);
        assert_eq!(p.allocation_target(0.5), 0.2);
        assert_eq!(p.allocation_target(0.95), 0.2);
        assert!((p.allocation_target(0.99) - 0.84).abs() < 1e-12);
        assert_eq!(p.smoothing_time(), Some(12.0));
        assert_eq!(p.initial_level(), 1.0);
    }

    #[test]
    fn rejects_out_of_range_values() {
        let err = AllocationPolicy::fixed(1.2).unwrap_err();
        assert_eq!(err.key, "policy.value");
        let table = TableFunction::new(vec![(0.0, -0.1), (1.0, 1.0)]).unwrap();
        let err = AllocationPolicy::table_driven(table, 12.0).unwrap_err();
        assert_eq!(err.key, "policy.breakpoints");
        let err = AllocationPolicy::reactive(0.0).unwrap_err();
        assert_eq!(err.key, "policy.smoothing_time");
    }

    proptest! {
        #[test]
        fn default_table_monotone_and_bounded(a in -1.0f64..2.0, b in -1.0f64..2.0) {
            let t = default_scenario_table();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(t.lookup(lo) <= t.lookup(hi));
            for x in [a, b] {
                let v = AllocationPolicy::reactive(12.0).unwrap().allocation_target(x);
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        #[test]
        fn fixed_output_constant(v in 0.0f64..=1.0, r1 in 0.0f64..3.0, r2 in 0.0f64..3.0) {
            let p = AllocationPolicy::fixed(v).unwrap();
            prop_assert_eq!(p.allocation_target(r1), p.allocation_target(r2));
        }
    }
}
