//! Quadrature, root finding, special functions and random sampling shared by
//! the rest of the crate.

mod quadrature;
mod random;
mod roots;
mod special;
mod spline;

pub use quadrature::{gauss_legendre7, integrate, integrate_with_points, QuadratureSpec};
pub use random::{
    sample_binomial, sample_gamma, sample_multinomial, sample_normal, sample_poisson, RngStream,
};
pub use roots::{find_root_monotone, golden_section_max};
pub use special::{normal_cdf, sine_integral};
pub use spline::CubicSpline;
