//! Normalized one-dimensional amplitude point-spread functions.
//!
//! Lengths are in whatever unit the caller picks; Fisher informations built
//! on top of these carry units of length⁻².

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    gauss_legendre7, integrate, integrate_with_points, normal_cdf, sine_integral, CubicSpline,
    QuadratureSpec,
};

/// Gaussian amplitudes are negligible (tail mass < 1e-14) beyond this many σ.
pub const GAUSSIAN_TRUNCATION: f64 = 8.0;
/// Default quadrature support of the sinc PSF, in units of w.
pub const SINC_DEFAULT_TRUNCATION: f64 = 60.0;
/// Minimum number of samples accepted by [`PsfModel::tabulated`].
pub const MIN_TABULATED_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsfKind {
    Gaussian,
    Sinc,
    Tabulated,
}

impl std::str::FromStr for PsfKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => Ok(PsfKind::Gaussian),
            "sinc" => Ok(PsfKind::Sinc),
            "tabulated" | "table" => Ok(PsfKind::Tabulated),
            other => Err(Error::Parameter(format!("unknown PSF kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for PsfKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PsfKind::Gaussian => "gaussian",
            PsfKind::Sinc => "sinc",
            PsfKind::Tabulated => "tabulated",
        })
    }
}

/// An immutable, normalized amplitude PSF ψ(x) with ∫|ψ|² = 1.
#[derive(Debug, Clone)]
pub struct PsfModel {
    kind: PsfKind,
    width: f64,
    truncation_radius: f64,
    shape: Shape,
}

#[derive(Debug, Clone)]
enum Shape {
    Gaussian { norm: f64 },
    Sinc { cdf: Arc<OnceLock<SincCdfTable>> },
    Tabulated(Arc<Tabulated>),
}

#[derive(Debug)]
struct Tabulated {
    spline: CubicSpline,
    // ∫ I from the first knot to each knot.
    cumulative: Vec<f64>,
}

impl PsfModel {
    /// ψ(x) = (2πσ²)^(-1/4) exp(-x²/4σ²).
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Parameter(format!("sigma must be positive (got {sigma})")));
        }
        Ok(Self {
            kind: PsfKind::Gaussian,
            width: sigma,
            truncation_radius: GAUSSIAN_TRUNCATION * sigma,
            shape: Shape::Gaussian {
                norm: (2.0 * PI * sigma * sigma).powf(-0.25),
            },
        })
    }

    /// ψ(x) = w^(-1/2) sinc(πx/w).
    pub fn sinc(w: f64) -> Result<Self> {
        Self::sinc_with_radius(w, SINC_DEFAULT_TRUNCATION * w)
    }

    pub fn sinc_with_radius(w: f64, truncation_radius: f64) -> Result<Self> {
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::Parameter(format!("w must be positive (got {w})")));
        }
        if !(truncation_radius > 0.0) || !truncation_radius.is_finite() {
            return Err(Error::Parameter("truncation radius must be positive".into()));
        }
        Ok(Self {
            kind: PsfKind::Sinc,
            width: w,
            truncation_radius,
            shape: Shape::Sinc {
                cdf: Arc::new(OnceLock::new()),
            },
        })
    }

    /// Cubic interpolant through `(x, amplitude)` samples, renormalized to
    /// unit power. Vanishes outside the sampled range.
    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < MIN_TABULATED_SAMPLES {
            return Err(Error::Data(format!(
                "tabulated PSF needs at least {MIN_TABULATED_SAMPLES} samples (got {})",
                samples.len()
            )));
        }
        let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
        if ys.iter().all(|y| *y == 0.0) {
            return Err(Error::Data("tabulated amplitude is identically zero".into()));
        }
        let raw = CubicSpline::new(xs, ys)?;
        let power = spline_power(&raw);
        if !(power > 0.0) {
            return Err(Error::Data("tabulated amplitude has zero power".into()));
        }
        let spline = raw.scaled(power.sqrt().recip());
        let knots = spline.knots();
        let mut cumulative = Vec::with_capacity(knots.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in knots.windows(2) {
            acc += gauss_legendre7(|x| spline.eval(x).powi(2), w[0], w[1]);
            cumulative.push(acc);
        }

        let mean = integrate_with_points(
            |x| x * spline.eval(x).powi(2),
            spline.knots(),
            &QuadratureSpec::default(),
        )?;
        let variance = integrate_with_points(
            |x| (x - mean).powi(2) * spline.eval(x).powi(2),
            spline.knots(),
            &QuadratureSpec::default(),
        )?;
        let (lo, hi) = spline.domain();
        Ok(Self {
            kind: PsfKind::Tabulated,
            width: variance.sqrt(),
            truncation_radius: lo.abs().max(hi.abs()),
            shape: Shape::Tabulated(Arc::new(Tabulated { spline, cumulative })),
        })
    }

    pub fn from_kind(kind: PsfKind, width: f64) -> Result<Self> {
        match kind {
            PsfKind::Gaussian => Self::gaussian(width),
            PsfKind::Sinc => Self::sinc(width),
            PsfKind::Tabulated => Err(Error::Parameter(
                "a tabulated PSF needs sample data, not a width".into(),
            )),
        }
    }

    pub fn kind(&self) -> PsfKind {
        self.kind
    }

    /// σ for the Gaussian, w for the sinc, RMS width of |ψ|² for tables.
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn truncation_radius(&self) -> f64 {
        self.truncation_radius
    }

    /// Band limit k_max (angular frequency) of band-limited PSFs.
    pub fn band_limit(&self) -> Option<f64> {
        match self.shape {
            Shape::Sinc { .. } => Some(PI / self.width),
            _ => None,
        }
    }

    /// Built-in PSFs satisfy ψ(-x) = ψ(x).
    pub fn is_symmetric(&self) -> bool {
        !matches!(self.shape, Shape::Tabulated(_))
    }

    /// Interval used for real-space quadrature.
    pub fn support(&self) -> (f64, f64) {
        match &self.shape {
            Shape::Tabulated(t) => t.spline.domain(),
            _ => (-self.truncation_radius, self.truncation_radius),
        }
    }

    /// Support breakpoints at which quadrature should start subdividing.
    pub fn quadrature_points(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        match &self.shape {
            Shape::Gaussian { .. } => vec![lo, 0.0, hi],
            Shape::Sinc { .. } => {
                let n = (self.truncation_radius / self.width).floor() as i64;
                let mut pts = vec![lo];
                pts.extend((-n..=n).map(|k| k as f64 * self.width).filter(|x| *x > lo && *x < hi));
                pts.push(hi);
                pts
            }
            Shape::Tabulated(t) => t.spline.knots().to_vec(),
        }
    }

    pub fn amplitude(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { norm } => norm * (-x * x / (4.0 * self.width * self.width)).exp(),
            Shape::Sinc { .. } => self.width.sqrt().recip() * sinc_series::value(PI * x / self.width),
            Shape::Tabulated(t) => t.spline.eval(x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { .. } => -x / (2.0 * self.width * self.width) * self.amplitude(x),
            Shape::Sinc { .. } => {
                let w = self.width;
                w.sqrt().recip() * (PI / w) * sinc_series::first(PI * x / w)
            }
            Shape::Tabulated(t) => t.spline.derivative(x),
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { .. } => {
                let s2 = self.width * self.width;
                (x * x / (4.0 * s2 * s2) - 1.0 / (2.0 * s2)) * self.amplitude(x)
            }
            Shape::Sinc { .. } => {
                let w = self.width;
                w.sqrt().recip() * (PI / w).powi(2) * sinc_series::second(PI * x / w)
            }
            Shape::Tabulated(t) => t.spline.second_derivative(x),
        }
    }

    /// I(x) = |ψ(x)|².
    pub fn intensity(&self, x: f64) -> f64 {
        self.amplitude(x).powi(2)
    }

    /// I′(x) = 2ψψ′.
    pub fn intensity_derivative(&self, x: f64) -> f64 {
        2.0 * self.amplitude(x) * self.derivative(x)
    }

    /// I″(x) = 2(ψ′² + ψψ″).
    pub fn intensity_second_derivative(&self, x: f64) -> f64 {
        let d = self.derivative(x);
        2.0 * (d * d + self.amplitude(x) * self.second_derivative(x))
    }

    /// Cumulative distribution ∫_{-∞}^x I.
    pub fn cdf(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { .. } => normal_cdf(x / self.width),
            Shape::Sinc { cdf } => {
                let table = cdf.get_or_init(|| SincCdfTable::new(self.width));
                let half = table.half_mass(x.abs());
                0.5 + half.copysign(x)
            }
            Shape::Tabulated(t) => {
                let knots = t.spline.knots();
                let (lo, hi) = t.spline.domain();
                if x <= lo {
                    return 0.0;
                }
                if x >= hi {
                    return 1.0;
                }
                let i = knots.partition_point(|&k| k <= x).saturating_sub(1);
                let partial = gauss_legendre7(|u| t.spline.eval(u).powi(2), knots[i], x);
                (t.cumulative[i] + partial).clamp(0.0, 1.0)
            }
        }
    }

    /// ∫|ψ|² computed along the most accurate route for the kind: frequency
    /// domain for the sinc, real-space quadrature otherwise.
    pub fn norm(&self, spec: &QuadratureSpec) -> Result<f64> {
        match &self.shape {
            Shape::Sinc { .. } => {
                // Rectangle of height √w on |k| < π/w, Parseval with 1/2π.
                let k_max = PI / self.width;
                let w = self.width;
                Ok(integrate(|_| w, -k_max, k_max, spec)? / (2.0 * PI))
            }
            _ => integrate_with_points(|x| self.intensity(x), &self.quadrature_points(), spec),
        }
    }
}

fn spline_power(spline: &CubicSpline) -> f64 {
    spline
        .knots()
        .windows(2)
        .map(|w| gauss_legendre7(|x| spline.eval(x).powi(2), w[0], w[1]))
        .sum()
}

/// sinc(u) = sin u / u and its first two derivatives, with the removable
/// singularity at u = 0 handled by Taylor series.
pub(crate) mod sinc_series {
    // Direct formulas lose ~2 digits per decade of u below 1 for the
    // derivatives; below this the series (error < u^16/17!) is used.
    const SERIES_CUTOFF: f64 = 0.5;
    const TERMS: usize = 8;

    fn factorial_odd(k: usize) -> f64 {
        // (2k+1)!
        (1..=2 * k + 1).map(|i| i as f64).product()
    }

    pub fn value(u: f64) -> f64 {
        if u.abs() < SERIES_CUTOFF {
            (0..TERMS)
                .map(|k| (-1f64).powi(k as i32) * u.powi(2 * k as i32) / factorial_odd(k))
                .sum()
        } else {
            u.sin() / u
        }
    }

    /// d/du [sin u / u] = cos u / u − sin u / u².
    pub fn first(u: f64) -> f64 {
        if u.abs() < SERIES_CUTOFF {
            (1..=TERMS)
                .map(|k| {
                    (-1f64).powi(k as i32) * (2 * k) as f64 * u.powi(2 * k as i32 - 1)
                        / factorial_odd(k)
                })
                .sum()
        } else {
            u.cos() / u - u.sin() / (u * u)
        }
    }

    /// d²/du² [sin u / u] = −sin u / u − 2 cos u / u² + 2 sin u / u³.
    pub fn second(u: f64) -> f64 {
        if u.abs() < SERIES_CUTOFF {
            (1..=TERMS)
                .map(|k| {
                    (-1f64).powi(k as i32) * ((2 * k) * (2 * k - 1)) as f64
                        * u.powi(2 * k as i32 - 2)
                        / factorial_odd(k)
                })
                .sum()
        } else {
            let (s, c) = u.sin_cos();
            -s / u - 2.0 * c / (u * u) + 2.0 * s / (u * u * u)
        }
    }
}

/// Quintic Hermite table of G(x) = ∫₀ˣ I for the sinc PSF.
///
/// Node values come from the closed form through Si; the interpolant matches
/// G, G′ = I and G″ = I′ at every node.
#[derive(Debug)]
struct SincCdfTable {
    w: f64,
    step: f64,
    g: Vec<f64>,
    i0: Vec<f64>,
    i1: Vec<f64>,
}

const SINC_TABLE_EXTENT: f64 = 320.0;
const SINC_TABLE_NODES_PER_W: f64 = 64.0;

impl SincCdfTable {
    fn new(w: f64) -> Self {
        let step = w / SINC_TABLE_NODES_PER_W;
        let n = (SINC_TABLE_EXTENT * SINC_TABLE_NODES_PER_W) as usize + 1;
        let mut g = Vec::with_capacity(n);
        let mut i0 = Vec::with_capacity(n);
        let mut i1 = Vec::with_capacity(n);
        for j in 0..n {
            let x = j as f64 * step;
            let u = PI * x / w;
            let s = sinc_series::value(u);
            let ds = sinc_series::first(u);
            g.push(Self::exact(w, x));
            i0.push(s * s / w);
            i1.push(2.0 * s * ds * PI / (w * w));
        }
        Self { w, step, g, i0, i1 }
    }

    /// (1/π)[Si(2U) − sin²U / U], U = πx/w.
    fn exact(w: f64, x: f64) -> f64 {
        let u = PI * x / w;
        if u == 0.0 {
            return 0.0;
        }
        let tail = if u.abs() < 1e-4 {
            u - u.powi(3) / 3.0
        } else {
            u.sin().powi(2) / u
        };
        (sine_integral(2.0 * u) - tail) / PI
    }

    fn half_mass(&self, x: f64) -> f64 {
        let pos = x / self.step;
        let j = pos.floor() as usize;
        if j + 1 >= self.g.len() {
            return Self::exact(self.w, x);
        }
        let h = self.step;
        let t = pos - j as f64;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h21 = 0.5 * (t3 - 2.0 * t4 + t5);
        h00 * self.g[j]
            + h10 * h * self.i0[j]
            + h20 * h * h * self.i1[j]
            + h01 * self.g[j + 1]
            + h11 * h * self.i0[j + 1]
            + h21 * h * h * self.i1[j + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn tight() -> QuadratureSpec {
        QuadratureSpec::default().with_tolerances(1e-13, 1e-12)
    }

    #[test]
    fn gaussian_peak_value() {
        let psf = PsfModel::gaussian(1.0).unwrap();
        assert!((psf.amplitude(0.0) - 0.631_618_777_746_1).abs() < 1e-12);
        assert_eq!(psf.derivative(0.0), 0.0);
        assert_eq!(psf.truncation_radius(), 8.0);
    }

    #[test]
    fn gaussian_normalized_at_experimental_width() {
        let psf = PsfModel::gaussian(0.05).unwrap();
        let n = psf.norm(&tight()).unwrap();
        assert!((n - 1.0).abs() < 1e-9, "{n}");
    }

    #[test]
    fn sinc_values() {
        let psf = PsfModel::sinc(1.0).unwrap();
        assert_eq!(psf.amplitude(0.0), 1.0);
        assert!(psf.amplitude(1.0).abs() < 1e-15);
        assert_eq!(psf.derivative(0.0), 0.0);
        assert_eq!(psf.truncation_radius(), 60.0);
        assert_eq!(PsfModel::sinc_with_radius(1.0, 25.0).unwrap().truncation_radius(), 25.0);
    }

    #[test]
    fn sinc_full_line_normalization_with_tail_correction() {
        // Real-space quadrature to ±R plus the averaged 1/x² tail w/(π² R).
        let w = 1.0;
        let psf = PsfModel::sinc(w).unwrap();
        let r = psf.truncation_radius();
        let inner = integrate_with_points(|x| psf.intensity(x), &psf.quadrature_points(), &tight())
            .unwrap();
        let tail = w / (PI * PI * r);
        assert!((inner + tail - 1.0).abs() < 1e-6, "{}", inner + tail);
        assert!((psf.norm(&tight()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_widths() {
        assert!(matches!(PsfModel::gaussian(0.0), Err(Error::Parameter(_))));
        assert!(matches!(PsfModel::gaussian(-1.0), Err(Error::Parameter(_))));
        assert!(matches!(PsfModel::sinc(0.0), Err(Error::Parameter(_))));
        assert!(matches!(PsfModel::sinc(f64::NAN), Err(Error::Parameter(_))));
    }

    fn check_derivatives(psf: &PsfModel, seed: u64) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = psf.support();
        let h = 1e-5 * psf.width();
        let scale = psf.amplitude(0.0).abs() / psf.width();
        for _ in 0..100 {
            let x = lo + 2.0 * h + (hi - lo - 4.0 * h) * rng.random::<f64>();
            let fd = (psf.amplitude(x + h) - psf.amplitude(x - h)) / (2.0 * h);
            let d = psf.derivative(x);
            assert!(
                (d - fd).abs() <= 1e-6 * d.abs().max(1e-3 * scale),
                "{:?} x={x} d={d} fd={fd}",
                psf.kind()
            );
            let fd2 = (psf.derivative(x + h) - psf.derivative(x - h)) / (2.0 * h);
            let d2 = psf.second_derivative(x);
            assert!(
                (d2 - fd2).abs() <= 1e-5 * d2.abs().max(1e-3 * scale / psf.width()),
                "{:?} x={x} d2={d2} fd2={fd2}",
                psf.kind()
            );
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        check_derivatives(&PsfModel::gaussian(0.7).unwrap(), 1);
        check_derivatives(&PsfModel::sinc_with_radius(1.3, 6.0).unwrap(), 2);
    }

    #[test]
    fn sinc_series_is_continuous_at_cutoff() {
        for u in [0.499_999_999, 0.500_000_001, -0.5] {
            let s1 = sinc_series::first(u);
            let direct = u.cos() / u - u.sin() / (u * u);
            assert!((s1 - direct).abs() < 1e-13);
            let s2 = sinc_series::second(u);
            let direct2 = -u.sin() / u - 2.0 * u.cos() / (u * u) + 2.0 * u.sin() / u.powi(3);
            assert!((s2 - direct2).abs() < 1e-12);
        }
        assert!((sinc_series::second(0.0) + 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn built_ins_are_symmetric() {
        for psf in [PsfModel::gaussian(0.3).unwrap(), PsfModel::sinc(2.0).unwrap()] {
            for x in [0.01, 0.4, 1.7, 5.5] {
                assert_eq!(psf.amplitude(-x), psf.amplitude(x));
            }
            let spec = tight();
            let cross = integrate_with_points(
                |x| psf.amplitude(x) * psf.derivative(x),
                &psf.quadrature_points(),
                &spec,
            )
            .unwrap();
            assert!(cross.abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_cdf_matches_quadrature() {
        let psf = PsfModel::gaussian(0.8).unwrap();
        let spec = tight();
        for x in [-3.0, -0.2, 0.0, 1.1] {
            let q = integrate(|t| psf.intensity(t), -psf.truncation_radius(), x, &spec).unwrap();
            assert!((psf.cdf(x) - q).abs() < 1e-12);
        }
    }

    #[test]
    fn sinc_cdf_matches_quadrature() {
        let w = 0.7;
        let psf = PsfModel::sinc(w).unwrap();
        let spec = tight();
        for x in [0.013, 0.35, 0.7, 3.21, 17.77, 150.0] {
            let mut pts = vec![0.0];
            pts.extend((1..).map(|k| k as f64 * w).take_while(|p| *p < x));
            pts.push(x);
            let q = integrate_with_points(|t| psf.intensity(t), &pts, &spec).unwrap();
            assert!((psf.cdf(x) - 0.5 - q).abs() < 1e-11, "x={x}");
            assert!((psf.cdf(-x) - 0.5 + q).abs() < 1e-11);
        }
        // Outside the interpolation table the closed form takes over.
        assert!((psf.cdf(1e4 * w) - (1.0 - 1.0 / (2.0 * PI * PI * 1e4))).abs() < 1e-8);
    }

    fn gaussian_samples(sigma: f64, n: usize, half_width: f64) -> Vec<(f64, f64)> {
        let psf = PsfModel::gaussian(sigma).unwrap();
        (0..n)
            .map(|i| {
                let x = -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64;
                (x, psf.amplitude(x))
            })
            .collect()
    }

    #[test]
    fn tabulated_reproduces_gaussian() {
        let psf = PsfModel::tabulated(&gaussian_samples(1.0, 512, 8.0)).unwrap();
        assert_eq!(psf.kind(), PsfKind::Tabulated);
        assert!((psf.norm(&tight()).unwrap() - 1.0).abs() < 1e-12);
        assert!((psf.width() - 1.0).abs() < 1e-4);
        assert!((psf.amplitude(0.3) - PsfModel::gaussian(1.0).unwrap().amplitude(0.3)).abs() < 1e-6);
        assert!((psf.cdf(0.0) - 0.5).abs() < 1e-9);
        assert!((psf.cdf(1.0) - normal_cdf(1.0)).abs() < 1e-7);
        check_derivatives(&psf, 3);
    }

    #[test]
    fn tabulated_is_scale_invariant() {
        let base = gaussian_samples(1.0, 64, 8.0);
        let scaled: Vec<_> = base.iter().map(|(x, y)| (*x, 3.0 * y)).collect();
        let a = PsfModel::tabulated(&base).unwrap();
        let b = PsfModel::tabulated(&scaled).unwrap();
        for x in [-2.0, 0.0, 0.5, 3.3] {
            assert!((a.amplitude(x) - b.amplitude(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn tabulated_rejects_bad_input() {
        assert!(matches!(
            PsfModel::tabulated(&[(0.0, 1.0), (1.0, 0.5)]),
            Err(Error::Data(_))
        ));
        let mut unsorted = gaussian_samples(1.0, 32, 4.0);
        unsorted.swap(3, 4);
        assert!(matches!(PsfModel::tabulated(&unsorted), Err(Error::Data(_))));
        let mut dup = gaussian_samples(1.0, 32, 4.0);
        dup[5].0 = dup[4].0;
        assert!(matches!(PsfModel::tabulated(&dup), Err(Error::Data(_))));
        let zeros: Vec<_> = (0..20).map(|i| (i as f64, 0.0)).collect();
        assert!(matches!(PsfModel::tabulated(&zeros), Err(Error::Data(_))));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("Gaussian".parse::<PsfKind>().unwrap(), PsfKind::Gaussian);
        assert_eq!("sinc".parse::<PsfKind>().unwrap(), PsfKind::Sinc);
        assert!("airy".parse::<PsfKind>().is_err());
    }
}
