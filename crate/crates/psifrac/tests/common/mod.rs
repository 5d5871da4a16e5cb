//! Shared test fixtures: frozen high-precision reference values and
//! brute-force quadrature oracles kept independent of the library's
//! Gauss-Jacobi path.
#![allow(dead_code)]

pub mod oracle_values;

/// Brute-force trapezoid quadrature of the substituted kernel integrand
/// (U - u)^(mu-1) g(u) over [A, U] with endpoint-singularity correction:
/// the final cell is integrated exactly against a linear interpolant of g.
pub fn brute_force_frac_integral(
    mu: f64,
    a: f64,
    u: f64,
    g: impl Fn(f64) -> f64,
    panels: usize,
) -> f64 {
    // product-trapezoid: integrate the kernel exactly against a piecewise
    // linear interpolant of g, which handles the (U - v)^{mu-1} endpoint
    let n = panels;
    let h = (u - a) / n as f64;
    let mut acc = 0.0;
    for k in 0..n {
        let v0 = a + k as f64 * h;
        let v1 = v0 + h;
        let g0 = g(v0);
        let g1 = g(v1);
        // moments of (u - v)^(mu-1) against the two linear hats on [v0, v1]
        let w0 = u - v0;
        let w1 = u - v1;
        let d0 = (w0.powf(mu) - w1.powf(mu)) / mu;
        let d1 = (w0.powf(mu + 1.0) - w1.powf(mu + 1.0)) / (mu + 1.0);
        // int (u-v)^{mu-1} (v1 - v)/h dv  and  int (u-v)^{mu-1} (v - v0)/h dv
        let left = (d1 - w1 * d0) / h;
        let right = (w0 * d0 - d1) / h;
        acc += g0 * left + g1 * right;
    }
    acc
}
