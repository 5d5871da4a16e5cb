//! Numeric check of the Psi-exponential growth bound for Caputo problems.
//!
//! For D^mu_C y = lam y + g with g of Psi-exponential order c, the solution
//! satisfies |y(t)| <= C e^{(|lam|^{1/mu} + c) Psi(t)}.  The checker forms
//! the weighted ratio |y(t)| e^{-(|lam|^{1/mu} + c) Psi(t)} on a solution
//! table and reports whether it shows any growth trend over the final decade
//! of the grid.

use crate::error::{Error, Result};
use crate::laplace::ExponentialOrder;

use super::{FdeKind, FdeProblem, SolutionTable};

/// Outcome of a growth-bound check (report-only, never an error).
#[derive(Debug, Clone, Copy)]
pub struct BoundReport {
    /// The certified exponent |lam|^{1/mu} + c.
    pub exponent: f64,
    /// Largest weighted ratio over the whole grid.
    pub max_ratio: f64,
    /// Least-squares slope of the ratio over the final decade, normalised by
    /// the ratio scale.
    pub slope: f64,
    /// Standard error of that slope.
    pub slope_sigma: f64,
    /// True when the slope is nonpositive within two standard errors.
    pub pass: bool,
}

pub fn check_regularity_bound(
    p: &FdeProblem,
    sol: &SolutionTable,
    g_order: &ExponentialOrder,
) -> Result<BoundReport> {
    if p.kind() != FdeKind::CaputoIvp {
        return Err(Error::InvalidProblem(
            "the scalar bound checker covers Caputo problems".into(),
        ));
    }
    if sol.grid.len() < 8 {
        return Err(Error::InvalidProblem(
            "need at least 8 grid points to fit a trend".into(),
        ));
    }
    let mu = p.orders()[0].mu();
    let lambda = p.coefficients()[0].abs();
    let exponent = lambda.powf(1.0 / mu) + g_order.rate;
    let psi = p.psi();
    let ratios: Vec<f64> = sol
        .grid
        .iter()
        .zip(&sol.values)
        .map(|(&t, &y)| y.abs() * (-exponent * psi.psi(t)).exp())
        .collect();
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let t_end = *sol.grid.last().unwrap();
    let cut = t_end / 10.0;
    let tail: Vec<(f64, f64)> = sol
        .grid
        .iter()
        .zip(&ratios)
        .filter(|(&t, _)| t >= cut)
        .map(|(&t, &r)| (t, r / max_ratio.max(1e-300)))
        .collect();
    if tail.len() < 4 {
        return Err(Error::InvalidProblem(
            "final decade of the grid holds fewer than 4 points".into(),
        ));
    }
    let n = tail.len() as f64;
    let sx: f64 = tail.iter().map(|(t, _)| t).sum();
    let sy: f64 = tail.iter().map(|(_, r)| r).sum();
    let sxx: f64 = tail.iter().map(|(t, _)| t * t).sum();
    let sxy: f64 = tail.iter().map(|(t, r)| t * r).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ss_res: f64 = tail
        .iter()
        .map(|(t, r)| {
            let e = r - (intercept + slope * t);
            e * e
        })
        .sum();
    let dof = (n - 2.0).max(1.0);
    let slope_sigma = (ss_res / dof * n / denom).sqrt();
    let pass = slope <= 2.0 * slope_sigma;
    Ok(BoundReport {
        exponent,
        max_ratio,
        slope,
        slope_sigma,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::{PsiFunction, RealFunction};
    use crate::solvers::{linear_grid, solve_caputo_ivp};

    #[test]
    fn unforced_decay_passes() {
        // lam = 0, f = 0: ratio = |c| e^{-c_g Psi(t)}, decreasing
        let psi = PsiFunction::builtin("identity", None).unwrap();
        let p = FdeProblem::caputo_ivp(psi, 0.5, 0.0, 1.0, RealFunction::zero()).unwrap();
        let grid = linear_grid(0.0, 10.0, 60);
        let sol = solve_caputo_ivp(&p, &grid).unwrap();
        let ord = ExponentialOrder::new(0.5, 1.0, 0.0).unwrap();
        let rep = check_regularity_bound(&p, &sol, &ord).unwrap();
        assert!(rep.pass, "decreasing ratio must pass: {rep:?}");
        assert!(rep.slope <= 0.0);
    }
}
