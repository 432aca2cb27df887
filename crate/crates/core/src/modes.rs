//! Projection modes and the outcome probabilities of projecting the
//! two-source field onto them.
//!
//! The antisymmetric (optimal) mode is ψ′/√F up to sign. Signs are chosen so
//! that `overlap(mode, ψ, +s) ≥ 0` for small `s > 0`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::quantum_fisher;
use crate::numerics::{golden_section_max, integrate, integrate_with_points, CubicSpline, QuadratureSpec};
use crate::psf::{sinc_series, PsfKind, PsfModel};

/// Allowed deviation of a mode's norm from 1, and of cross overlaps from 0.
pub const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeLabel {
    Psf,
    OptimalAntisym,
    Custom,
}

#[derive(Debug, Clone)]
enum Shape {
    Psf(PsfModel),
    Antisym { psf: PsfModel, qfi: f64 },
    Sampled(Arc<CubicSpline>),
}

/// A normalized real projection wavefunction.
#[derive(Debug, Clone)]
pub struct Mode {
    label: ModeLabel,
    shape: Shape,
    norm_check: f64,
}

/// Frequency-domain description of a band-limited field: c·(ik)^order on |k| < k_max.
#[derive(Debug, Clone, Copy)]
struct Band {
    k_max: f64,
    coefficient: f64,
    order: u8,
}

impl Shape {
    fn amplitude(&self, x: f64) -> f64 {
        match self {
            Shape::Psf(psf) => psf.amplitude(x),
            Shape::Antisym { psf, qfi } => match psf.kind() {
                PsfKind::Gaussian => {
                    let s = psf.width();
                    (2.0 * PI).powf(-0.25) * s.powf(-1.5) * x * (-x * x / (4.0 * s * s)).exp()
                }
                PsfKind::Sinc => {
                    let w = psf.width();
                    -(3f64.sqrt()) / w.sqrt() * sinc_series::first(PI * x / w)
                }
                PsfKind::Tabulated => -psf.derivative(x) / qfi.sqrt(),
            },
            Shape::Sampled(s) => s.eval(x),
        }
    }

    fn support(&self) -> (f64, f64) {
        match self {
            Shape::Psf(psf) | Shape::Antisym { psf, .. } => psf.support(),
            Shape::Sampled(s) => s.domain(),
        }
    }

    fn points(&self) -> Vec<f64> {
        match self {
            Shape::Psf(psf) | Shape::Antisym { psf, .. } => psf.quadrature_points(),
            Shape::Sampled(s) => s.knots().to_vec(),
        }
    }

    fn band(&self) -> Option<Band> {
        match self {
            Shape::Psf(psf) => psf.band_limit().map(|k_max| Band {
                k_max,
                coefficient: psf.width().sqrt(),
                order: 0,
            }),
            Shape::Antisym { psf, qfi } => psf.band_limit().map(|k_max| Band {
                k_max,
                coefficient: -psf.width().sqrt() / qfi.sqrt(),
                order: 1,
            }),
            Shape::Sampled(_) => None,
        }
    }
}

/// ∫ a(x) b(x − shift) dx.
fn inner(a: &Shape, b: &Shape, shift: f64, spec: &QuadratureSpec) -> Result<f64> {
    if let (Some(ba), Some(bb)) = (a.band(), b.band()) {
        // Parseval: (1/2π) ∫ â(k) conj(b̂(k)) e^{iks} dk, real part only.
        let k_max = ba.k_max.min(bb.k_max);
        let (re, im) = match (ba.order, bb.order) {
            (0, 0) | (1, 1) => (1.0, 0.0),
            (1, 0) => (0.0, 1.0),
            _ => (0.0, -1.0),
        };
        let power = i32::from(ba.order + bb.order);
        let integrand = |k: f64| {
            let (s, c) = (k * shift).sin_cos();
            k.powi(power) * (re * c - im * s)
        };
        return Ok(ba.coefficient * bb.coefficient / PI * integrate(integrand, 0.0, k_max, spec)?);
    }

    let (a_lo, a_hi) = a.support();
    let (b_lo, b_hi) = b.support();
    let lo = a_lo.max(b_lo + shift);
    let hi = a_hi.min(b_hi + shift);
    if !(hi > lo) {
        return Ok(0.0);
    }
    let mut pts: Vec<f64> = a
        .points()
        .into_iter()
        .chain(b.points().into_iter().map(|p| p + shift))
        .filter(|p| *p > lo && *p < hi)
        .chain([lo, hi])
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    integrate_with_points(|x| a.amplitude(x) * b.amplitude(x - shift), &pts, spec)
}

impl Mode {
    fn build(label: ModeLabel, shape: Shape) -> Result<Self> {
        let norm_check = inner(&shape, &shape, 0.0, &QuadratureSpec::default())?;
        if (norm_check - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Model(format!(
                "mode norm {norm_check} deviates from 1 by more than {NORM_TOLERANCE}"
            )));
        }
        Ok(Self {
            label,
            shape,
            norm_check,
        })
    }

    /// The PSF itself as a projection mode (zeroth-order / symmetric channel).
    pub fn psf(psf: &PsfModel) -> Result<Self> {
        Self::build(ModeLabel::Psf, Shape::Psf(psf.clone()))
    }

    /// Optimal antisymmetric projection ∝ ψ′.
    pub fn optimal(psf: &PsfModel) -> Result<Self> {
        let qfi = quantum_fisher(psf)?;
        if !(qfi > 1e-300) {
            return Err(Error::Degenerate("PSF derivative vanishes; no optimal mode".into()));
        }
        Self::build(ModeLabel::OptimalAntisym, Shape::Antisym { psf: psf.clone(), qfi })
    }

    /// A user-supplied mode from `(x, amplitude)` samples, renormalized.
    pub fn custom(samples: &[(f64, f64)]) -> Result<Self> {
        let xs = samples.iter().map(|s| s.0).collect();
        let ys = samples.iter().map(|s| s.1).collect();
        let raw = CubicSpline::new(xs, ys)?;
        let power = inner(
            &Shape::Sampled(Arc::new(raw.clone())),
            &Shape::Sampled(Arc::new(raw.clone())),
            0.0,
            &QuadratureSpec::default(),
        )?;
        if !(power > 0.0) {
            return Err(Error::Data("custom mode has zero power".into()));
        }
        Self::build(ModeLabel::Custom, Shape::Sampled(Arc::new(raw.scaled(power.sqrt().recip()))))
    }

    pub fn label(&self) -> ModeLabel {
        self.label
    }

    pub fn norm_check(&self) -> f64 {
        self.norm_check
    }

    pub fn amplitude(&self, x: f64) -> f64 {
        self.shape.amplitude(x)
    }

    pub fn support(&self) -> (f64, f64) {
        self.shape.support()
    }

    /// Samples the amplitude on `n` evenly spaced points spanning `[lo, hi]`.
    pub fn sample(&self, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
        (0..n)
            .map(|i| {
                let x = lo + i as f64 * step;
                (x, self.amplitude(x))
            })
            .collect()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Mode) -> Result<f64> {
        inner(&self.shape, &other.shape, 0.0, &QuadratureSpec::default())
    }
}

/// ∫ mode(x) ψ(x − shift) dx.
pub fn overlap(mode: &Mode, psf: &PsfModel, shift: f64) -> Result<f64> {
    overlap_with(mode, psf, shift, &QuadratureSpec::default())
}

pub fn overlap_with(mode: &Mode, psf: &PsfModel, shift: f64, spec: &QuadratureSpec) -> Result<f64> {
    inner(&mode.shape, &Shape::Psf(psf.clone()), shift, spec)
}

/// Probabilities of detecting a photon in the PSF mode, the antisymmetric
/// mode, or neither, at one separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeProbabilities {
    pub delta: f64,
    pub p_0: f64,
    pub p_a: f64,
    pub p_lost: f64,
}

impl OutcomeProbabilities {
    fn from_channels(delta: f64, p_0: f64, p_a: f64) -> Self {
        Self {
            delta,
            p_0,
            p_a,
            p_lost: (1.0 - p_0 - p_a).max(0.0),
        }
    }

    /// p_a / (p_a + p_0): what n_a / (n_0 + n_a) estimates.
    pub fn conditional_ratio(&self) -> f64 {
        let denom = self.p_a + self.p_0;
        if denom > 0.0 {
            self.p_a / denom
        } else {
            0.0
        }
    }
}

/// p_m(δ) = ½[⟨m|ψ(·−δ/2)⟩² + ⟨m|ψ(·+δ/2)⟩²] for each mode.
pub fn channel_probabilities(psf: &PsfModel, modes: &[Mode], delta: f64) -> Result<Vec<f64>> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::Parameter(format!("separation must be >= 0 (got {delta})")));
    }
    for (i, a) in modes.iter().enumerate() {
        for b in &modes[i + 1..] {
            let c = a.inner(b)?;
            if c.abs() > NORM_TOLERANCE {
                return Err(Error::Model(format!(
                    "modes {:?} and {:?} are not orthogonal (overlap {c:e})",
                    a.label, b.label
                )));
            }
        }
    }
    let half = 0.5 * delta;
    modes
        .iter()
        .map(|m| {
            let plus = overlap(m, psf, half)?;
            let minus = overlap(m, psf, -half)?;
            Ok(0.5 * (plus * plus + minus * minus))
        })
        .collect()
}

/// Outcome probabilities summed per label over the monitored modes.
pub fn outcome_probabilities(psf: &PsfModel, modes: &[Mode], delta: f64) -> Result<OutcomeProbabilities> {
    let channels = channel_probabilities(psf, modes, delta)?;
    let total: f64 = channels.iter().sum();
    let pick = |label| -> f64 {
        modes
            .iter()
            .zip(&channels)
            .filter(|(m, _)| m.label == label)
            .map(|(_, p)| *p)
            .sum()
    };
    Ok(OutcomeProbabilities {
        delta,
        p_0: pick(ModeLabel::Psf),
        p_a: pick(ModeLabel::OptimalAntisym),
        p_lost: (1.0 - total).max(0.0),
    })
}

/// The two-channel measurement {PSF mode, antisymmetric mode} for one PSF,
/// with probability curves as functions of δ.
#[derive(Debug, Clone)]
pub struct ProjectionModel {
    psf: PsfModel,
    modes: [Mode; 2],
    qfi: f64,
    peak: f64,
}

impl ProjectionModel {
    pub fn new(psf: &PsfModel) -> Result<Self> {
        let modes = [Mode::psf(psf)?, Mode::optimal(psf)?];
        let qfi = quantum_fisher(psf)?;
        let mut model = Self {
            psf: psf.clone(),
            modes,
            qfi,
            peak: f64::NAN,
        };
        model.peak = model.locate_peak()?;
        Ok(model)
    }

    pub fn psf(&self) -> &PsfModel {
        &self.psf
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn quantum_fisher(&self) -> f64 {
        self.qfi
    }

    /// δ_peak = argmax p_a; the estimator's monotone branch is [0, δ_peak].
    pub fn branch_peak(&self) -> f64 {
        self.peak
    }

    /// Probabilities at δ, from closed forms for the built-in PSFs.
    pub fn probabilities(&self, delta: f64) -> Result<OutcomeProbabilities> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::Parameter(format!("separation must be >= 0 (got {delta})")));
        }
        let w = self.psf.width();
        match self.psf.kind() {
            PsfKind::Gaussian => {
                let u = delta * delta / (16.0 * w * w);
                let e = (-u).exp();
                Ok(OutcomeProbabilities::from_channels(delta, e, u * e))
            }
            PsfKind::Sinc => {
                let t = PI * 0.5 * delta / w;
                let ov_0 = sinc_series::value(t);
                let ov_a = -(3f64.sqrt()) * sinc_series::first(t);
                Ok(OutcomeProbabilities::from_channels(delta, ov_0 * ov_0, ov_a * ov_a))
            }
            PsfKind::Tabulated => self.probabilities_by_quadrature(delta),
        }
    }

    /// Probabilities at δ from overlap integrals.
    pub fn probabilities_by_quadrature(&self, delta: f64) -> Result<OutcomeProbabilities> {
        outcome_probabilities(&self.psf, &self.modes, delta)
    }

    pub fn p_a(&self, delta: f64) -> Result<f64> {
        Ok(self.probabilities(delta)?.p_a)
    }

    /// Per-photon Fisher information of the binary outcome {a, not a}.
    pub fn binary_fisher(&self, delta: f64) -> Result<f64> {
        if !(delta >= 0.0) {
            return Err(Error::Parameter(format!("separation must be >= 0 (got {delta})")));
        }
        if delta < 1e-6 * self.psf.width() {
            return Ok(self.qfi);
        }
        let h = 1e-4 * delta;
        let p = self.p_a(delta)?;
        if !(p > 0.0 && p < 1.0) {
            return Ok(if p <= 0.0 { self.qfi } else { 0.0 });
        }
        let dp = (self.p_a(delta + h)? - self.p_a(delta - h)?) / (2.0 * h);
        Ok(dp * dp / (p * (1.0 - p)))
    }

    /// Per-photon Fisher information carried by n_a given n_0 + n_a,
    /// i.e. what the ratio estimator can attain.
    pub fn ratio_fisher(&self, delta: f64) -> Result<f64> {
        if delta < 1e-6 * self.psf.width() {
            return Ok(self.qfi);
        }
        let h = 1e-4 * delta;
        let p = self.probabilities(delta)?;
        let r = p.conditional_ratio();
        if !(r > 0.0 && r < 1.0) {
            return Ok(0.0);
        }
        let dr = (self.probabilities(delta + h)?.conditional_ratio()
            - self.probabilities(delta - h)?.conditional_ratio())
            / (2.0 * h);
        Ok((p.p_0 + p.p_a) * dr * dr / (r * (1.0 - r)))
    }

    fn locate_peak(&self) -> Result<f64> {
        let w = self.psf.width();
        if self.psf.kind() == PsfKind::Gaussian {
            return Ok(4.0 * w);
        }
        let step = w / 32.0;
        let max_steps = 16 * 32;
        let mut prev = self.p_a(step)?;
        for j in 2..=max_steps {
            let d = j as f64 * step;
            let p = self.p_a(d)?;
            if p < prev {
                let lo = d - 2.0 * step;
                let f = |x: f64| self.p_a(x).unwrap_or(f64::NEG_INFINITY);
                return Ok(golden_section_max(f, lo, d, 1e-10 * w));
            }
            prev = p;
        }
        Ok(max_steps as f64 * step)
    }
}

/// Per-photon Fisher information of the binary antisymmetric projection.
pub fn binary_outcome_fisher(psf: &PsfModel, delta: f64) -> Result<f64> {
    ProjectionModel::new(psf)?.binary_fisher(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;

    fn gaussian(s: f64) -> PsfModel {
        PsfModel::gaussian(s).unwrap()
    }

    #[test]
    fn gaussian_optimal_mode_matches_derivative_form() {
        let psf = gaussian(0.7);
        let mode = Mode::optimal(&psf).unwrap();
        let f = quantum_fisher(&psf).unwrap();
        for x in [-1.3, -0.2, 0.0, 0.45, 2.0] {
            let from_derivative = -psf.derivative(x) / f.sqrt();
            assert!((mode.amplitude(x) - from_derivative).abs() < 1e-12);
        }
        assert!((mode.norm_check() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn sinc_optimal_mode_closed_form() {
        let w = 1.5;
        let psf = PsfModel::sinc(w).unwrap();
        let mode = Mode::optimal(&psf).unwrap();
        assert_eq!(mode.amplitude(0.0), 0.0);
        for x in [0.3, 1.0, 2.2, -4.1] {
            let u = PI * x / w;
            // Printed form, up to global sign.
            let printed = 3f64.sqrt()
                * (w.sqrt() / (PI * x) * u.cos() - w.powf(1.5) / (PI * PI * x * x) * u.sin());
            assert!((mode.amplitude(x) + printed).abs() < 1e-12, "x={x}");
            assert!((mode.amplitude(-x) + mode.amplitude(x)).abs() < 1e-15);
        }
        assert!((mode.norm_check() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn overlap_oracles() {
        let psf = gaussian(1.0);
        let opt = Mode::optimal(&psf).unwrap();
        let zero = Mode::psf(&psf).unwrap();
        assert!(overlap(&opt, &psf, 0.0).unwrap().abs() < 1e-14);
        assert!((overlap(&zero, &psf, 0.0).unwrap() - 1.0).abs() < 1e-10);
        // Brute-force midpoint sum over a wide grid.
        let s = 0.4;
        let n = 200_000;
        let (lo, hi) = (-12.0, 12.0);
        let h = (hi - lo) / n as f64;
        let brute: f64 = (0..n)
            .map(|i| {
                let x = lo + (i as f64 + 0.5) * h;
                opt.amplitude(x) * psf.amplitude(x - s)
            })
            .sum::<f64>()
            * h;
        let closed = 0.2 * (-0.02f64).exp();
        assert!((brute - closed).abs() < 1e-9);
        assert!((overlap(&opt, &psf, s).unwrap() - closed).abs() < 1e-10);
        assert!((closed - 0.196_040).abs() < 1e-6);
    }

    #[test]
    fn sign_convention() {
        for psf in [gaussian(1.0), PsfModel::sinc(1.0).unwrap()] {
            let opt = Mode::optimal(&psf).unwrap();
            assert!(overlap(&opt, &psf, 0.05).unwrap() > 0.0);
        }
    }

    #[test]
    fn modes_are_orthogonal() {
        for psf in [gaussian(0.3), PsfModel::sinc(2.0).unwrap()] {
            let a = Mode::psf(&psf).unwrap();
            let b = Mode::optimal(&psf).unwrap();
            assert!(a.inner(&b).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn non_orthogonal_modes_rejected() {
        let psf = gaussian(1.0);
        let a = Mode::psf(&psf).unwrap();
        let b = Mode::psf(&gaussian(1.2)).unwrap();
        assert!(matches!(
            channel_probabilities(&psf, &[a, b], 0.3),
            Err(Error::Model(_))
        ));
    }

    #[test]
    fn gaussian_probabilities_quadrature_vs_closed_form() {
        let model = ProjectionModel::new(&gaussian(1.0)).unwrap();
        for d in [0.0, 0.1, 0.4, 1.0, 2.5, 4.0] {
            let q = model.probabilities_by_quadrature(d).unwrap();
            let u: f64 = d * d / 16.0;
            assert!((q.p_a - u * (-u).exp()).abs() < 1e-10, "d={d}");
            assert!((q.p_0 - (-u).exp()).abs() < 1e-10);
            assert!((q.p_0 + q.p_a + q.p_lost - 1.0).abs() < 1e-9);
        }
        let zero = model.probabilities(0.0).unwrap();
        assert_eq!((zero.p_a, zero.p_0, zero.p_lost), (0.0, 1.0, 0.0));
    }

    #[test]
    fn sinc_probabilities_quadrature_vs_closed_form() {
        let model = ProjectionModel::new(&PsfModel::sinc(1.0).unwrap()).unwrap();
        for d in [0.067, 0.3, 1.0, 1.9] {
            let q = model.probabilities_by_quadrature(d).unwrap();
            let c = model.probabilities(d).unwrap();
            assert!((q.p_a - c.p_a).abs() < 1e-10, "d={d}");
            assert!((q.p_0 - c.p_0).abs() < 1e-10);
        }
        let p = model.probabilities(0.067).unwrap();
        assert!(p.p_a > 0.0 && p.p_a < 1.0);
    }

    #[test]
    fn small_separation_law() {
        for psf in [gaussian(1.0), PsfModel::sinc(1.0).unwrap()] {
            let model = ProjectionModel::new(&psf).unwrap();
            let d = 1e-3 * psf.width();
            let expected = model.quantum_fisher() * d * d / 4.0;
            let p = model.probabilities_by_quadrature(d).unwrap().p_a;
            assert!((p / expected - 1.0).abs() < 1e-3, "{:?}", psf.kind());
        }
    }

    #[test]
    fn peak_and_monotone_branch() {
        let g = ProjectionModel::new(&gaussian(1.0)).unwrap();
        assert_eq!(g.branch_peak(), 4.0);
        let tab: Vec<(f64, f64)> = (0..801)
            .map(|i| {
                let x = -10.0 + 20.0 * i as f64 / 800.0;
                (x, gaussian(1.0).amplitude(x))
            })
            .collect();
        let t = ProjectionModel::new(&PsfModel::tabulated(&tab).unwrap()).unwrap();
        assert!((t.branch_peak() - 4.0).abs() < 1e-3, "{}", t.branch_peak());

        let s = ProjectionModel::new(&PsfModel::sinc(1.0).unwrap()).unwrap();
        let peak = s.branch_peak();
        assert!(peak > 1.2 && peak < 1.45, "{peak}");
        let mut prev = -1.0;
        for j in 0..=200 {
            let d = peak * j as f64 / 200.0;
            let p = s.probabilities(d).unwrap();
            assert!(p.p_a >= prev);
            prev = p.p_a;
        }
    }

    #[test]
    fn binary_fisher_limits() {
        let model = ProjectionModel::new(&gaussian(1.0)).unwrap();
        assert_eq!(model.binary_fisher(1e-8).unwrap(), model.quantum_fisher());
        assert!((model.quantum_fisher() - 0.25).abs() < 1e-10);
        let near = model.binary_fisher(1e-3).unwrap();
        assert!((near / 0.25 - 1.0).abs() < 5e-3);
        let at = model.binary_fisher(0.2).unwrap();
        assert!(at <= 0.25 && at > 0.245, "{at}");
        // Closed form (1/4σ²)(1−u)²e^{−u}/(1 − u e^{−u}).
        let u: f64 = 0.04 / 16.0;
        let expected = 0.25 * (1.0 - u).powi(2) * (-u).exp() / (1.0 - u * (-u).exp());
        assert!((at - expected).abs() < 1e-7);
        assert!((binary_outcome_fisher(&gaussian(1.0), 0.2).unwrap() - at).abs() < 1e-15);
    }

    #[test]
    fn ratio_fisher_closed_form() {
        let model = ProjectionModel::new(&gaussian(1.0)).unwrap();
        for d in [0.2, 1.0, 2.0] {
            let u: f64 = d * d / 16.0;
            let expected = 0.25 * (-u).exp() / (1.0 + u);
            assert!((model.ratio_fisher(d).unwrap() - expected).abs() < 1e-7);
        }
    }

    #[test]
    fn custom_mode_is_normalized() {
        let samples: Vec<(f64, f64)> = (0..101).map(|i| {
            let x = -5.0 + 0.1 * i as f64;
            (x, 2.0 * (-x * x).exp())
        }).collect();
        let mode = Mode::custom(&samples).unwrap();
        assert_eq!(mode.label(), ModeLabel::Custom);
        let n = integrate(|x| mode.amplitude(x).powi(2), -5.0, 5.0, &QuadratureSpec::default()).unwrap();
        assert!((n - 1.0).abs() < 1e-8);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn probabilities_are_consistent(sigma in 0.2f64..3.0, ratio in 0.0f64..6.0, sinc in proptest::bool::ANY) {
                let psf = if sinc { PsfModel::sinc(sigma).unwrap() } else { gaussian(sigma) };
                let model = ProjectionModel::new(&psf).unwrap();
                let p = model.probabilities(ratio * sigma).unwrap();
                prop_assert!((0.0..=1.0).contains(&p.p_a));
                prop_assert!((0.0..=1.0).contains(&p.p_0));
                prop_assert!((p.p_a + p.p_0 + p.p_lost - 1.0).abs() < 1e-9);
                prop_assert!(model.binary_fisher(ratio * sigma).unwrap() <= model.quantum_fisher() * (1.0 + 1e-6));
            }
        }
    }
}
