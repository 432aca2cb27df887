use crate::error::{Error, Result};

/// Natural cubic spline through strictly increasing abscissae.
///
/// Evaluates to zero outside the knot range.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    // Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Data("abscissa and ordinate lengths differ".into()));
        }
        if xs.len() < 3 {
            return Err(Error::Data("a spline needs at least three samples".into()));
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Data("samples must be finite".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Data(
                "abscissae must be strictly increasing (unsorted or duplicate x)".into(),
            ));
        }
        let n = xs.len();
        // Tridiagonal system for interior second derivatives (Thomas algorithm).
        let mut m = vec![0.0; n];
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            let a = h0 / 6.0;
            let b = (h0 + h1) / 3.0;
            let c = h1 / 6.0;
            let rhs = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
            let denom = b - a * c_prime[i - 1];
            c_prime[i] = c / denom;
            d_prime[i] = (rhs - a * d_prime[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d_prime[i] - c_prime[i] * m[i + 1];
        }
        Ok(Self { xs, ys, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    /// Multiplies the interpolant by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| y * factor).collect(),
            m: self.m.iter().map(|y| y * factor).collect(),
        }
    }

    fn locate(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return None;
        }
        let idx = self.xs.partition_point(|&k| k <= x);
        Some(idx.saturating_sub(1).min(self.xs.len() - 2))
    }

    /// Value, first and second derivative at `x`.
    pub fn eval_all(&self, x: f64) -> (f64, f64, f64) {
        let Some(i) = self.locate(x) else {
            return (0.0, 0.0, 0.0);
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let value = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let slope = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0
            + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let curvature = a * m0 + b * m1;
        (value, slope, curvature)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_all(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.eval_all(x).1
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        self.eval_all(x).2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots_and_vanishes_outside() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let s = CubicSpline::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((s.eval(*x) - y).abs() < 1e-14);
        }
        assert_eq!(s.eval(-0.1), 0.0);
        assert_eq!(s.eval(9.1), 0.0);
    }

    #[test]
    fn reproduces_smooth_function() {
        let n = 200;
        let xs: Vec<f64> = (0..n).map(|i| -4.0 + 8.0 * i as f64 / (n - 1) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (-x * x).exp()).collect();
        let s = CubicSpline::new(xs, ys).unwrap();
        for x in [-1.234, 0.0, 0.777, 2.5] {
            let (v, d, _) = s.eval_all(x);
            assert!((v - (-x * x).exp()).abs() < 1e-5);
            assert!((d + 2.0 * x * (-x * x).exp()).abs() < 1e-3);
        }
    }

    #[test]
    fn rejects_bad_abscissae() {
        assert!(CubicSpline::new(vec![0.0, 1.0, 1.0], vec![0.0; 3]).is_err());
        assert!(CubicSpline::new(vec![0.0, 2.0, 1.0], vec![0.0; 3]).is_err());
        assert!(CubicSpline::new(vec![0.0, 1.0], vec![0.0; 2]).is_err());
    }
}
