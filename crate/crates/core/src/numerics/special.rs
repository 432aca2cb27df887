use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

/// Sine integral Si(x) = ∫₀ˣ sin(t)/t dt.
///
/// Power series below |x| = 2, continued fraction for E₁(ix) above.
pub fn sine_integral(x: f64) -> f64 {
    let t = x.abs();
    if t == 0.0 {
        return 0.0;
    }
    let value = if t <= 2.0 {
        let mut sum = 0.0;
        let mut term = t; // t^(2k+1) / (2k+1)!
        let mut k = 0usize;
        loop {
            let contribution = term / (2 * k + 1) as f64;
            sum += contribution;
            if contribution.abs() < f64::EPSILON * sum.abs() {
                break;
            }
            k += 1;
            term *= -t * t / ((2 * k) * (2 * k + 1)) as f64;
        }
        sum
    } else {
        let one = Complex64::new(1.0, 0.0);
        let mut b = Complex64::new(1.0, t);
        let mut c = Complex64::new(1.0 / 1e-300, 0.0);
        let mut d = one / b;
        let mut h = d;
        for i in 2..200 {
            let a = -(((i - 1) * (i - 1)) as f64);
            b += 2.0;
            d = one / (d * a + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() < 4.0 * f64::EPSILON {
                break;
            }
        }
        h *= Complex64::new(t.cos(), -t.sin());
        FRAC_PI_2 + h.im
    };
    value.copysign(x)
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}
