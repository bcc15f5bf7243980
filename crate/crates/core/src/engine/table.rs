use super::EngineError;

/// Piecewise-linear graphical function.
///
/// Inputs outside the breakpoint range clamp to the first or last `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableFunction {
    points: Vec<(f64, f64)>,
}

impl TableFunction {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, EngineError> {
        if points.len() < 2 {
            return Err(EngineError::TooFewBreakpoints(points.len()));
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(EngineError::NonFiniteBreakpoint(i));
            }
        }
        for (i, pair) in points.windows(2).enumerate() {
            if pair[1].0 <= pair[0].0 {
                return Err(EngineError::NonIncreasingBreakpoints {
                    index: i + 1,
                    prev: pair[0].0,
                    x: pair[1].0,
                });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn lookup(&self, x: f64) -> f64 {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if x <= first.0 {
            return first.1;
        }
        if x >= last.0 {
            return last.1;
        }
        // First breakpoint strictly greater than x; guaranteed in 1..len by the clamps above.
        let hi = self.points.partition_point(|&(px, _)| px <= x);
        let (x0, y0) = self.points[hi - 1];
        let (x1, y1) = self.points[hi];
        y0 + (x - x0) / (x1 - x0) * (y1 - y0)
    }

    pub fn min_output(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.1)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_output(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.1)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
