use std::error::Error as StdError;
use std::fmt;

use super::{EngineError, IntegrationSettings};

/// A stock-and-flow system the integrator can advance.
///
/// `levels` are the integrated stocks; `auxiliaries` are algebraic values that
/// are recorded alongside them but never integrated.
pub trait Dynamics {
    type Error: StdError + Send + Sync + 'static;

    fn level_names(&self) -> &[&'static str];

    fn auxiliary_names(&self) -> &[&'static str];

    /// Fills `rates` with the net flow of every level and `auxiliaries` with
    /// the algebraic values at time `t`.
    fn evaluate(
        &self,
        t: f64,
        levels: &[f64],
        rates: &mut [f64],
        auxiliaries: &mut [f64],
    ) -> Result<(), Self::Error>;
}

/// Flow evaluation failed partway through a run.
#[derive(Debug)]
pub struct StepError<E> {
    pub t: f64,
    pub source: E,
}

impl<E: fmt::Display> fmt::Display for StepError<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "flow evaluation failed at t = {}: {}",
            self.t, self.source
        )
    }
}

impl<E: StdError + 'static> StdError for StepError<E> {
    fn source(&self) -> Option<&(dyn StdError + 'static)> {
        Some(&self.source)
    }
}

/// One recorded variable.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub name: String,
    pub samples: Vec<(f64, f64)>,
}

/// Recorded output of a run, stored column-wise: levels first, then auxiliaries.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    settings: IntegrationSettings,
    names: Vec<String>,
    level_count: usize,
    times: Vec<f64>,
    columns: Vec<Vec<f64>>,
}

impl RunResult {
    pub fn settings(&self) -> &IntegrationSettings {
        &self.settings
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn level_names(&self) -> &[String] {
        &self.names[..self.level_count]
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.index_of(name).map(|i| self.columns[i].as_slice())
    }

    pub fn series(&self, name: &str) -> Option<TimeSeries> {
        let col = self.column(name)?;
        Some(TimeSeries {
            name: name.to_string(),
            samples: self
                .times
                .iter()
                .copied()
                .zip(col.iter().copied())
                .collect(),
        })
    }

    /// Value of `name` at the recorded sample nearest to `t`.
    pub fn value_at(&self, name: &str, t: f64) -> Option<f64> {
        let col = self.column(name)?;
        let idx = (t / self.settings.record_every).round();
        if idx < 0.0 || idx as usize >= self.times.len() {
            return None;
        }
        Some(col[idx as usize])
    }

    pub fn last(&self, name: &str) -> Option<f64> {
        self.column(name).and_then(|c| c.last().copied())
    }

    pub fn first(&self, name: &str) -> Option<f64> {
        self.column(name).and_then(|c| c.first().copied())
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Advances `model` from `initial` by explicit Euler and records every
/// `record_every` months, including both endpoints.
pub fn integrate<D: Dynamics>(
    model: &D,
    initial: &[f64],
    settings: &IntegrationSettings,
) -> Result<RunResult, IntegrateError<D::Error>> {
    let level_names = model.level_names();
    let aux_names = model.auxiliary_names();
    if initial.len() != level_names.len() {
        return Err(IntegrateError::Setup(EngineError::LevelCountMismatch {
            expected: level_names.len(),
            got: initial.len(),
        }));
    }

    let steps = settings.step_count();
    let stride = settings.record_stride();
    let samples = steps / stride + 1;
    let width = level_names.len() + aux_names.len();

    let mut columns = vec![Vec::with_capacity(samples); width];
    let mut times = Vec::with_capacity(samples);
    let mut levels = initial.to_vec();
    let mut rates = vec![0.0; level_names.len()];
    let mut aux = vec![0.0; aux_names.len()];

    for step in 0..=steps {
        // Times are derived from the step index so they never drift.
        let t = step as f64 * settings.dt;
        model
            .evaluate(t, &levels, &mut rates, &mut aux)
            .map_err(|source| IntegrateError::Step(StepError { t, source }))?;

        if step % stride == 0 {
            times.push(t);
            for (col, v) in columns.iter_mut().zip(levels.iter().chain(aux.iter())) {
                col.push(*v);
            }
        }
        if step == steps {
            break;
        }
        for (level, rate) in levels.iter_mut().zip(&rates) {
            *level += settings.dt * rate;
        }
    }

    Ok(RunResult {
        settings: settings.clone(),
        names: level_names
            .iter()
            .chain(aux_names.iter())
            .map(|s| s.to_string())
            .collect(),
        level_count: level_names.len(),
        times,
        columns,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum IntegrateError<E: StdError + 'static> {
    #[error(transparent)]
    Setup(EngineError),
    #[error(transparent)]
    Step(StepError<E>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    struct Constant(Vec<f64>);

    impl Dynamics for Constant {
        type Error = Infallible;
        fn level_names(&self) -> &[&'static str] {
            &["a", "b", "c"][..self.0.len()]
        }
        fn auxiliary_names(&self) -> &[&'static str] {
            &["time"]
        }
        fn evaluate(
            &self,
            t: f64,
            _: &[f64],
            rates: &mut [f64],
            aux: &mut [f64],
        ) -> Result<(), Infallible> {
            rates.copy_from_slice(&self.0);
            aux[0] = t;
            Ok(())
        }
    }

    #[derive(Debug, thiserror::Error)]
    #[error("negative stock")]
    struct Negative;

    struct Decay;

    impl Dynamics for Decay {
        type Error = Negative;
        fn level_names(&self) -> &[&'static str] {
            &["x"]
        }
        fn auxiliary_names(&self) -> &[&'static str] {
            &[]
        }
        fn evaluate(
            &self,
            _: f64,
            levels: &[f64],
            rates: &mut [f64],
            _: &mut [f64],
        ) -> Result<(), Negative> {
            if levels[0] < 0.0 {
                return Err(Negative);
            }
            rates[0] = -3.0;
            Ok(())
        }
    }

    #[test]
    fn linear_accumulation() {
        let settings = IntegrationSettings::new(0.25, 10.0, 1.0).unwrap();
        let run = integrate(&Constant(vec![1.0]), &[0.0], &settings).unwrap();
        assert_eq!(run.last("a"), Some(10.0));
        assert_eq!(run.len(), 11);
        assert_eq!(run.times()[10], 10.0);
        assert_eq!(run.column("time").unwrap()[3], 3.0);
    }

    #[test]
    fn zero_flow_is_identity() {
        let settings = IntegrationSettings::new(0.25, 10.0, 0.5).unwrap();
        let run = integrate(&Constant(vec![0.0, 0.0, 0.0]), &[1.5, -2.0, 7.0], &settings).unwrap();
        for (name, v) in [("a", 1.5), ("b", -2.0), ("c", 7.0)] {
            assert!(run.column(name).unwrap().iter().all(|&x| x == v));
        }
        assert_eq!(run.len(), 21);
    }

    #[test]
    fn step_error_carries_timestamp() {
        let settings = IntegrationSettings::new(0.5, 10.0, 1.0).unwrap();
        let err = integrate(&Decay, &[4.0], &settings).unwrap_err();
        match err {
            IntegrateError::Step(e) => assert_eq!(e.t, 1.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_level_count() {
        let settings = IntegrationSettings::new(1.0, 2.0, 1.0).unwrap();
        assert!(matches!(
            integrate(&Constant(vec![1.0]), &[0.0, 1.0], &settings),
            Err(IntegrateError::Setup(
                EngineError::LevelCountMismatch { .. }
            ))
        ));
    }

    #[test]
    fn series_and_value_at() {
        let settings = IntegrationSettings::new(0.25, 4.0, 2.0).unwrap();
        let run = integrate(&Constant(vec![2.0]), &[1.0], &settings).unwrap();
        let s = run.series("a").unwrap();
        assert_eq!(s.samples, vec![(0.0, 1.0), (2.0, 5.0), (4.0, 9.0)]);
        assert_eq!(run.value_at("a", 2.0), Some(5.0));
        assert_eq!(run.value_at("a", 6.0), None);
        assert!(run.series("missing").is_none());
    }

    proptest::proptest! {
        #[test]
        fn constant_flow_is_exact(
            flow in -100.0f64..100.0,
            init in -1e3f64..1e3,
            dt_idx in 0usize..4,
            months in 1u32..200,
        ) {
            let dt = [1.0, 0.5, 0.25, 0.125][dt_idx];
            let horizon = months as f64;
            let settings = IntegrationSettings::new(dt, horizon, 1.0).unwrap();
            let run = integrate(&Constant(vec![flow]), &[init], &settings).unwrap();
            let expected = init + flow * horizon;
            let got = run.last("a").unwrap();
            proptest::prop_assert!((got - expected).abs() <= 1e-9 * (1.0 + expected.abs()));
            proptest::prop_assert_eq!(run.len(), months as usize + 1);
        }
    }
}
