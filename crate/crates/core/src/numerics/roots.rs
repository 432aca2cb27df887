use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 512;

/// Finds a root of a monotone function bracketed by `[lo, hi]`.
///
/// Secant steps alternate with bisection so the bracket at least halves
/// every two iterations. The returned point is the midpoint of a final
/// bracket no wider than `tol`, so `g(r - tol)` and `g(r + tol)` straddle zero.
pub fn find_root_monotone<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo <= hi) || !(tol > 0.0) {
        return Err(Error::Parameter(format!(
            "root search needs lo <= hi and tol > 0 (got [{lo}, {hi}], tol {tol})"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut ga, mut gb) = (g(a), g(b));
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if !(ga.is_finite() && gb.is_finite()) || ga.signum() == gb.signum() {
        return Err(Error::Bracket {
            lo,
            hi,
            g_lo: ga,
            g_hi: gb,
        });
    }

    for iteration in 0..MAX_ITERATIONS {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let x = if iteration % 2 == 0 {
            let secant = b - gb * (b - a) / (gb - ga);
            if secant > a && secant < b {
                secant
            } else {
                mid
            }
        } else {
            mid
        };
        let gx = g(x);
        if gx == 0.0 {
            return Ok(x);
        }
        if gx.signum() == ga.signum() {
            a = x;
            ga = gx;
        } else {
            b = x;
            gb = gx;
        }
    }
    Ok(0.5 * (a + b))
}

/// Maximizes a unimodal function on `[lo, hi]` by golden-section search.
///
/// Returns the abscissa once the bracket is narrower than `tol`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_ITERATIONS {
        if (b - a).abs() <= tol {
            break;
        }
        // `>=` keeps the left bracket on ties, biasing toward smaller abscissae.
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_root() {
        let r = find_root_monotone(|x| x - 2.0, 0.0, 5.0, 1e-10).unwrap();
        assert!((r - 2.0).abs() <= 1e-10);
    }

    #[test]
    fn missing_sign_change_is_bracket_error() {
        let err = find_root_monotone(|x| x + 1.0, 0.0, 5.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }

    #[test]
    fn root_on_endpoint() {
        assert_eq!(find_root_monotone(|x| x, 0.0, 1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let x = golden_section_max(|x| -(x - 0.3).powi(2), 0.0, 1.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn result_straddles_root(root in -5.0f64..5.0, scale in 0.1f64..10.0, cubic in proptest::bool::ANY) {
            let tol = 1e-8;
            let g = move |x: f64| if cubic { scale * (x - root).powi(3) } else { scale * (x - root).atan() };
            let r = find_root_monotone(g, -6.0, 6.0, tol).unwrap();
            prop_assert!(g(r - tol) * g(r + tol) <= 0.0);
        }
    }
}
