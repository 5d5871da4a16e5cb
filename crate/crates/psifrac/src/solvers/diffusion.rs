//! Green-function solution of the Psi-fractional diffusion problem
//! D^mu_RL u = kappa u_xx with weighted initial profile.

use crate::error::{Error, Result};
use crate::psi::PsiFunction;
use crate::quad::gauss_legendre;
use crate::special::wright;

use super::{FdeKind, FdeProblem, SolutionMethod, SolutionTable};

/// The diffusion Green kernel
/// G(x, t) = (1 / 2 sqrt(kappa)) Psi(t)^{mu/2 - 1}
///           W(-|x| / (sqrt(kappa) Psi(t)^{mu/2}), -mu/2, mu/2).
///
/// At mu = 1, Psi = identity this is the classical heat kernel.
pub fn diffusion_green(psi: &PsiFunction, mu: f64, kappa: f64, x: f64, t: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "diffusion order must lie in (0, 1], got {mu}"
        )));
    }
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter("kappa must be positive".into()));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(
            "the Green kernel needs t > 0".into(),
        ));
    }
    let u = psi.psi(t);
    let width = kappa.sqrt() * u.powf(0.5 * mu);
    let z = -x.abs() / width;
    let w = wright(z, -0.5 * mu, 0.5 * mu)?;
    Ok(u.powf(0.5 * mu - 1.0) / (2.0 * kappa.sqrt()) * w)
}

/// Spatial convolution u(x, t) = int G(x - eta, t) f(eta) d eta over the
/// problem window, by panelled Gauss-Legendre resolved to the kernel width.
pub fn diffusion_solve(p: &FdeProblem, xs: &[f64], t: f64) -> Result<SolutionTable> {
    if p.kind() != FdeKind::Diffusion {
        return Err(Error::InvalidProblem(format!(
            "diffusion_solve given a {:?} problem",
            p.kind()
        )));
    }
    let spec = p.diffusion_spec().expect("diffusion problems carry a spec");
    let mu = p.orders()[0].mu();
    let psi = p.psi();
    let (lo, hi) = spec.window;
    let width_window = hi - lo;
    let atol = 1e-9;

    // profile mass outside the window must be negligible
    let gl16 = gauss_legendre(16);
    let tail = gl16.integrate(hi, hi + width_window, |e| spec.initial_profile.eval(e).abs())
        + gl16.integrate(lo - width_window, lo, |e| spec.initial_profile.eval(e).abs());
    if tail > 1e-6 {
        return Err(Error::WindowTooSmall(format!(
            "initial profile carries mass {tail:.3e} outside [{lo}, {hi}]"
        )));
    }

    let kernel_width = spec.kappa.sqrt() * psi.psi(t).powf(0.5 * mu);
    let panels = ((2.0 * width_window / kernel_width.max(1e-6)).ceil() as usize).clamp(24, 600);
    let gl = gauss_legendre(20);
    let panel_w = width_window / panels as f64;
    let mut values = Vec::with_capacity(xs.len());
    for &x in xs {
        let mut acc = 0.0;
        for k in 0..panels {
            let a = lo + k as f64 * panel_w;
            let mut bad = None;
            acc += gl.integrate(a, a + panel_w, |eta| {
                match diffusion_green(psi, mu, spec.kappa, x - eta, t) {
                    Ok(gv) => gv * spec.initial_profile.eval(eta),
                    Err(e) => {
                        bad = Some(e);
                        f64::NAN
                    }
                }
            });
            if let Some(e) = bad {
                return Err(e);
            }
        }
        if !acc.is_finite() {
            return Err(Error::AccuracyLoss(format!(
                "diffusion convolution not finite at x = {x}"
            )));
        }
        values.push(acc);
    }
    SolutionTable::new(
        xs.to_vec(),
        values,
        SolutionMethod::GreenConvolution,
        format!("{} [t={t}]", p.describe()),
        atol,
    )
}
