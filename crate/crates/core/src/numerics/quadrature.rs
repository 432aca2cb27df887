//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error estimate drops below `max(absolute_tol, relative_tol * |result|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub absolute_tol: f64,
    pub relative_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            absolute_tol: 1e-10,
            relative_tol: 1e-9,
            max_subdivisions: 1 << 16,
        }
    }
}

impl QuadratureSpec {
    pub fn new(absolute_tol: f64, relative_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            absolute_tol,
            relative_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same budget, tighter or looser tolerances.
    pub fn with_tolerances(self, absolute_tol: f64, relative_tol: f64) -> Self {
        Self {
            absolute_tol,
            relative_tol,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.absolute_tol > 0.0) || !(self.relative_tol > 0.0) {
            return Err(Error::Parameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions < 4 {
            return Err(Error::Parameter(
                "max_subdivisions must be at least 4".into(),
            ));
        }
        Ok(())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    (value, error)
}

/// Seven-point Gauss-Legendre rule on `[a, b]`; exact for polynomials of degree 13.
pub fn gauss_legendre7<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = WG[3] * f(center);
    for (k, &w) in WG[..3].iter().enumerate() {
        let dx = half * XGK[2 * k + 1];
        sum += w * (f(center - dx) + f(center + dx));
    }
    sum * half
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Parameter(format!(
            "integration bounds must satisfy a < b (got [{a}, {b}])"
        )));
    }
    integrate_with_points(f, &[a, b], spec)
}

/// Integrates over `[points[0], points[last]]`, starting the adaptive
/// refinement from the given breakpoints.
///
/// Breakpoints must be non-decreasing; repeated points are skipped.
pub fn integrate_with_points<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if points.len() < 2 {
        return Err(Error::Parameter("need at least two breakpoints".into()));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Parameter("breakpoints must be finite".into()));
    }
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Parameter("breakpoints must be sorted".into()));
    }

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, error) = kronrod15(&f, w[0], w[1]);
            total += value;
            total_err += error;
            heap.push(Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }
    }
    if heap.is_empty() {
        return Err(Error::Parameter("integration interval is empty".into()));
    }

    let resum = |heap: &BinaryHeap<Segment>| {
        heap.iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
    };
    let mut iteration = 0usize;
    loop {
        iteration += 1;
        if iteration % 64 == 0 {
            (total, total_err) = resum(&heap);
        }
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Numerical {
                estimate: total,
                error_bound: total_err,
            });
        }
        let tol = spec.absolute_tol.max(spec.relative_tol * total.abs());
        if total_err <= tol {
            // Running updates can cancel catastrophically; confirm exactly.
            (total, total_err) = resum(&heap);
            if total_err <= spec.absolute_tol.max(spec.relative_tol * total.abs()) {
                break;
            }
        }
        if heap.len() >= spec.max_subdivisions {
            return Err(Error::Numerical {
                estimate: total,
                error_bound: total_err,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval exhausted at machine resolution.
            return Err(Error::Numerical {
                estimate: total,
                error_bound: total_err,
            });
        }
        let (v1, e1) = kronrod15(&f, worst.a, mid);
        let (v2, e2) = kronrod15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }

    // Re-sum to shed the drift of the running updates.
    let mut parts: Vec<Segment> = heap.into_vec();
    parts.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(parts.iter().map(|s| s.value).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn gaussian_pdf_normalizes() {
        let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let v = integrate(pdf, -8.0, 8.0, &spec()).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn odd_function_vanishes() {
        let v = integrate(|x| x, -1.0, 1.0, &spec()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn squared_gaussian_derivative() {
        // [psi'(x)]^2 for sigma = 0.5 integrates to 1/(4 sigma^2) = 1.
        let sigma: f64 = 0.5;
        let norm = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
        let dpsi = |x: f64| -x / (2.0 * sigma * sigma) * norm * (-x * x / (4.0 * sigma * sigma)).exp();
        let v = integrate(|x| dpsi(x).powi(2), -4.0, 4.0, &spec()).unwrap();
        assert!((v - 1.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn rejects_reversed_bounds() {
        assert!(matches!(
            integrate(|x| x, 1.0, 0.0, &spec()),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let tight = QuadratureSpec::new(1e-14, 1e-14, 4).unwrap();
        let err = integrate(|x: f64| (1.0 / x.abs().max(1e-300)).sqrt(), -1.0, 1.0, &tight)
            .unwrap_err();
        match err {
            Error::Numerical {
                estimate,
                error_bound,
            } => {
                assert!(estimate.is_finite());
                assert!(error_bound > 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn breakpoints_help_kinks() {
        let v = integrate_with_points(|x: f64| x.abs(), &[-1.0, 0.0, 1.0], &spec()).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gauss7_is_exact_for_degree_13() {
        let v = gauss_legendre7(|x: f64| x.powi(13) + x.powi(12), 0.0, 1.0);
        assert!((v - (1.0 / 14.0 + 1.0 / 13.0)).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(0.0, 1e-9, 16).is_err());
        assert!(QuadratureSpec::new(1e-9, 1e-9, 3).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn linear_in_integrand(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, shift in -1.0f64..1.0) {
                let f = |x: f64| (-(x - shift).powi(2)).exp();
                let g = |x: f64| (3.0 * x).cos() / (1.0 + x * x);
                let s = spec();
                let lhs = integrate(|x| alpha * f(x) + beta * g(x), -6.0, 6.0, &s).unwrap();
                let rhs = alpha * integrate(f, -6.0, 6.0, &s).unwrap()
                    + beta * integrate(g, -6.0, 6.0, &s).unwrap();
                let tol = 2.0 * s.absolute_tol.max(s.relative_tol * lhs.abs()) * (1.0 + alpha.abs() + beta.abs());
                prop_assert!((lhs - rhs).abs() <= tol, "{} vs {}", lhs, rhs);
            }
        }
    }
}
