//! Deformed-contour evaluation of Bromwich integrals.
//!
//! The vertical Bromwich line is uselessly oscillatory for numerical work.
//! This module uses the cotangent (Talbot-type) contour with the
//! fixed-precision-optimized parameters of Trefethen, Weideman and
//! Schmelzer,
//!
//!     z(theta) = (N/x) (-0.6122 + 0.5017 theta cot(0.6407 theta)
//!                        + 0.2645 i theta),     theta in (-pi, pi),
//!
//! sampled by the midpoint rule.  Unlike the classical fixed Talbot
//! parameters, these keep max Re(z x) ~ 0.17 N, so roundoff amplification
//! stays near machine precision while the discretization error decays like
//! 10^{-0.6 N}.  Singularities must lie to the left of the contour, which
//! callers arrange by shifting the image.

use num_complex::Complex64;

use crate::error::{Error, Result};

const A0: f64 = 0.6122;
const A1: f64 = 0.5017;
const A2: f64 = 0.6407;
const A3: f64 = 0.2645;

/// Result of one contour evaluation: the complex midpoint sum plus a
/// node-refinement error estimate.
#[derive(Debug, Clone, Copy)]
pub struct ContourValue {
    pub value: Complex64,
    pub est_error: f64,
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

fn midpoint_sum<F>(image: &F, x: f64, nodes: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let n = nodes.max(8);
    let scale = n as f64 / x;
    let dtheta = 2.0 * std::f64::consts::PI / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let half = n / 2;
    for k in 0..half {
        let theta = -std::f64::consts::PI + (k as f64 + 0.5) * dtheta;
        let b = A2 * theta;
        let z = scale * Complex64::new(-A0 + A1 * theta * cot(b), A3 * theta);
        let dz = scale * Complex64::new(A1 * (cot(b) - b / (b.sin() * b.sin())), A3);
        acc += (z * x).exp() * image(z) * dz;
        // mirror node: z(-theta) = conj z, z'(-theta) = -conj z'
        let zc = z.conj();
        acc += (zc * x).exp() * image(zc) * (-dz.conj());
    }
    if n % 2 == 1 {
        // odd counts place one node at theta just below pi; keep pairs only
        // by construction, so force even n upstream
    }
    acc * Complex64::new(0.0, -dtheta / (2.0 * std::f64::consts::PI))
}

/// Evaluate the inverse Laplace transform of `image` at `x > 0`.
///
/// `shift` moves the contour right: the sum computed is
/// e^{shift * x} * L^{-1}[ image(. + shift) ](x), so every singularity of
/// `image` with real part below `shift` ends up on the correct side.  The
/// error estimate compares the sum against one with 8 extra node pairs.
pub fn talbot_invert<F>(image: &F, x: f64, nodes: usize, shift: f64) -> Result<ContourValue>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    if !(x > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "contour inversion needs a positive evaluation point, got {x}"
        )));
    }
    let shifted = |s: Complex64| image(s + shift);
    let damp = shift * x;
    if damp > 700.0 {
        return Err(Error::ContourFailure(format!(
            "shift {shift} at x = {x} overflows the exponential prefactor"
        )));
    }
    let scale = damp.exp();
    let n = nodes.max(8) & !1usize;
    let coarse = midpoint_sum(&shifted, x, n) * scale;
    let fine = midpoint_sum(&shifted, x, n + 16) * scale;
    if !fine.re.is_finite() || !fine.im.is_finite() {
        return Err(Error::ContourFailure(
            "overflow or invalid value on the contour".into(),
        ));
    }
    Ok(ContourValue {
        value: fine,
        est_error: (fine - coarse).norm(),
    })
}
