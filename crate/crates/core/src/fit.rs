//! Least-squares growth exponents on log-log data.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Straight-line fit of `ln y = intercept + slope · ln x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Half width of the 95% confidence interval of the slope (infinite with
    /// only two points).
    pub slope_halfwidth: f64,
    pub points: usize,
}

impl LogLogFit {
    pub fn interval(&self) -> (f64, f64) {
        (self.slope - self.slope_halfwidth, self.slope + self.slope_halfwidth)
    }
}

/// Fits a power law through `(x, y)` pairs. All values must be positive.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() {
        return Err(Error::Malformed(format!(
            "fit needs matching lengths, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: xs.len(),
        });
    }
    if xs.iter().chain(ys).any(|v| *v <= 0.0 || !v.is_finite()) {
        return Err(Error::Domain("log-log fit needs finite positive data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("log-log fit needs distinct abscissae".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_halfwidth = if lx.len() > 2 {
        let rss: f64 = lx
            .iter()
            .zip(&ly)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        let dof = n - 2.0;
        let se = (rss / dof / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, dof)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.975);
        t * se
    } else {
        f64::INFINITY
    };
    Ok(LogLogFit {
        slope,
        intercept,
        slope_halfwidth,
        points: lx.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(0.7)).collect();
        let fit = fit_loglog(&xs, &ys).unwrap();
        assert!((fit.slope - 0.7).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit.slope_halfwidth < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(fit_loglog(&[1.0], &[1.0]), Err(Error::TooFewPoints { .. })));
        assert!(fit_loglog(&[1.0, 2.0], &[1.0, 0.0]).is_err());
        assert!(fit_loglog(&[2.0, 2.0], &[1.0, 3.0]).is_err());
        assert!(fit_loglog(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn two_points_have_unbounded_interval() {
        let fit = fit_loglog(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert!(fit.slope_halfwidth.is_infinite());
    }
}
