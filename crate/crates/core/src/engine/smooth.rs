/// One explicit-Euler step of a first-order exponential smooth toward `target`
/// with time constant `tau`.
pub fn smooth_step(current: f64, target: f64, tau: f64, dt: f64) -> f64 {
    current + dt * smooth_rate(current, target, tau)
}

/// Net rate of change of a first-order smooth.
pub fn smooth_rate(current: f64, target: f64, tau: f64) -> f64 {
    (target - current) / tau
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn at_target_does_not_move() {
        assert_eq!(smooth_step(1.0, 1.0, 12.0, 0.25), 1.0);
    }

    #[test]
    fn single_step_toward_floor() {
        let v = smooth_step(1.0, 0.2, 12.0, 0.25);
        assert!((v - (1.0 + 0.25 * (0.2 - 1.0) / 12.0)).abs() < 1e-15);
        assert!((v - 0.983_333_333_333).abs() < 1e-9);
    }

    #[test]
    fn step_response_matches_exponential() {
        // Gap closed after T is 1 - exp(-T/tau); dt <= tau/48 keeps Euler within 1% of it.
        let tau = 12.0;
        let dt = tau / 48.0;
        for multiple in [1.0f64, 2.0, 3.0] {
            let steps = (multiple * tau / dt).round() as usize;
            let mut v = 0.0;
            for _ in 0..steps {
                v = smooth_step(v, 1.0, tau, dt);
            }
            let exact = 1.0 - (-multiple).exp();
            assert!(
                (v - exact).abs() / exact < 0.01,
                "T={multiple}tau: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn one_time_constant_reaches_63_percent() {
        let (tau, dt) = (12.0, 0.001);
        let mut v = 0.0;
        for _ in 0..12_000 {
            v = smooth_step(v, 2.0, tau, dt);
        }
        assert!((v / 2.0 - 0.632).abs() < 1e-3);
    }
}
