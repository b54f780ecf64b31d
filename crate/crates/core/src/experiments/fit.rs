use crate::error::{Error, Result};

/// `y = coefficient * x^exponent`, fitted by least squares in log-log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub coefficient: f64,
    pub exponent: f64,
    /// Root-mean-square of `ln y - ln(fit)`.
    pub rms_log_residual: f64,
}

impl FitResult {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficient * x.powf(self.exponent)
    }
}

pub fn power_law_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::Domain(format!(
            "power-law fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    if let Some((x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0) || !x.is_finite() || !y.is_finite()) {
        return Err(Error::Domain(format!("power-law fit needs positive finite points, got ({x}, {y})")));
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Domain("power-law fit needs at least two distinct x values".into()));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let rss: f64 = logs
        .iter()
        .map(|p| (p.1 - intercept - exponent * p.0).powi(2))
        .sum();
    Ok(FitResult {
        coefficient: intercept.exp(),
        exponent,
        rms_log_residual: (rss / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn exact_cubic() {
        let pts = [(1.0, 2.0), (2.0, 16.0), (3.0, 54.0)];
        let fit = power_law_fit(&pts).unwrap();
        assert!((fit.coefficient - 2.0).abs() < 1e-10);
        assert!((fit.exponent - 3.0).abs() < 1e-10);
        assert!(fit.rms_log_residual < 1e-10);
    }

    #[test]
    fn reproduces_synthetic_law() {
        let pts: Vec<_> = (2..=40).step_by(2).map(|n| {
            let x = f64::from(n);
            (x, 0.85 * x.powf(-0.07))
        }).collect();
        let fit = power_law_fit(&pts).unwrap();
        assert!((fit.coefficient - 0.85).abs() < 1e-10);
        assert!((fit.exponent + 0.07).abs() < 1e-10);
        for (x, y) in pts {
            assert!((fit.eval(x) - y).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(power_law_fit(&[(1.0, 1.0)]), Err(Error::Domain(_))));
        assert!(matches!(power_law_fit(&[(2.0, 1.0), (2.0, 3.0)]), Err(Error::Domain(_))));
        assert!(matches!(power_law_fit(&[(1.0, 1.0), (0.0, 3.0)]), Err(Error::Domain(_))));
        assert!(matches!(power_law_fit(&[(1.0, -1.0), (2.0, 3.0)]), Err(Error::Domain(_))));
    }

    #[test]
    fn noisy_exponent() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let pts: Vec<_> = (1..=30)
            .map(|i| {
                let x = f64::from(i);
                let noise = 1.0 + rng.gen_range(-0.05..0.05);
                (x, 1.8e-4 * x.powf(7.0) * noise)
            })
            .collect();
        let fit = power_law_fit(&pts).unwrap();
        assert!((fit.exponent - 7.0).abs() < 0.1, "{fit:?}");
    }
}
