//! Quadrature rules used throughout the crate.
//!
//! Two node families: Gauss-Legendre for smooth integrands and Gauss-Jacobi
//! with weight (1-x)^alpha (beta = 0) for the weakly singular kernels
//! (Psi(t)-u)^{mu-1} that appear in every fractional operator.  Rules are
//! memoised per thread since the same (order, alpha) pairs recur constantly.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::rc::Rc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;

/// Node count, panel count and tolerances for one quadrature-backed call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss nodes per panel (>= 2).
    pub nodes: usize,
    /// Panels per integral (>= 1); panels shrink geometrically toward
    /// singular endpoints.
    pub panels: usize,
    pub atol: f64,
    pub rtol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes: 32,
            panels: 8,
            atol: 1e-10,
            rtol: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::InvalidParameter(format!(
                "quadrature nodes must be >= 2, got {}",
                self.nodes
            )));
        }
        if self.panels < 1 {
            return Err(Error::InvalidParameter(format!(
                "quadrature panels must be >= 1, got {}",
                self.panels
            )));
        }
        if !(self.atol > 0.0) || !(self.rtol > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Acceptance check shared by the quadrature-backed operations.
    pub fn accepts(&self, value: f64, est_error: f64) -> bool {
        est_error <= self.atol + self.rtol * value.abs()
    }
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Newton iteration from the Chebyshev-based initial guess
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_deriv(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate f over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        half * acc
    }

    /// Node/weight pairs on the reference interval [-1, 1].
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Jacobi rule for the weight (1-x)^alpha on [-1, 1] (beta = 0).
///
/// Nodes and weights via Golub-Welsch on the symmetric Jacobi matrix.
#[derive(Debug, Clone)]
pub struct GaussJacobi {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    alpha: f64,
}

impl GaussJacobi {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "Gauss-Jacobi degree must be >= 2, got {n}"
            )));
        }
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Gauss-Jacobi exponent must be finite and > -1, got {alpha}"
            )));
        }
        let mut jac = DMatrix::<f64>::zeros(n, n);
        let mut diag = -alpha / (2.0 + alpha);
        for k in 0..n - 1 {
            let kp1 = (k + 1) as f64;
            let denom = 2.0 * kp1 + alpha;
            let off = 2.0 / denom
                * (kp1 * (kp1 + alpha) * kp1 * (kp1 + alpha) / ((denom + 1.0) * (denom - 1.0)))
                    .sqrt();
            jac[(k, k)] = diag;
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
            diag = -(alpha * alpha) / (denom * (denom + 2.0));
        }
        jac[(n - 1, n - 1)] = diag;

        let eigen = jac.symmetric_eigen();
        // total weight: integral of (1-x)^alpha over [-1, 1]
        let scale = 2f64.powf(alpha + 1.0) / (alpha + 1.0);
        let mut pairs: Vec<(f64, f64)> = eigen
            .eigenvalues
            .iter()
            .copied()
            .zip(eigen.eigenvectors.row(0).iter().map(|v| v * v * scale))
            .collect();
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(GaussJacobi {
            nodes,
            weights,
            alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Integral of (b - x)^alpha * f(x) over [a, b]; the weight is supplied
    /// by the rule, `f` is evaluated bare.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        half.powf(self.alpha + 1.0) * acc
    }
}

thread_local! {
    static GL_CACHE: RefCell<HashMap<usize, Rc<GaussLegendre>>> = RefCell::new(HashMap::new());
    static GJ_CACHE: RefCell<HashMap<(usize, u64), Rc<GaussJacobi>>> = RefCell::new(HashMap::new());
}

pub fn gauss_legendre(n: usize) -> Rc<GaussLegendre> {
    GL_CACHE.with(|c| {
        c.borrow_mut()
            .entry(n)
            .or_insert_with(|| Rc::new(GaussLegendre::new(n)))
            .clone()
    })
}

pub fn gauss_jacobi(n: usize, alpha: f64) -> Result<Rc<GaussJacobi>> {
    GJ_CACHE.with(|c| {
        if let Some(r) = c.borrow().get(&(n, alpha.to_bits())) {
            return Ok(r.clone());
        }
        let rule = Rc::new(GaussJacobi::new(n, alpha)?);
        c.borrow_mut().insert((n, alpha.to_bits()), rule.clone());
        Ok(rule)
    })
}

/// Panel edges on [a, b], sizes shrinking geometrically toward both ends.
///
/// The returned vector has `panels + 1` strictly increasing entries starting
/// at `a` and ending at `b`.
pub fn graded_edges(a: f64, b: f64, panels: usize, ratio: f64) -> Vec<f64> {
    if panels <= 1 {
        return vec![a, b];
    }
    let half = panels.div_ceil(2);
    let mut sizes = Vec::with_capacity(panels);
    for i in 0..panels {
        let level = i.min(panels - 1 - i).min(half - 1) as f64;
        sizes.push(ratio.powf(level));
    }
    let total: f64 = sizes.iter().sum();
    let mut edges = Vec::with_capacity(panels + 1);
    edges.push(a);
    let mut acc = 0.0;
    for s in &sizes[..panels - 1] {
        acc += s;
        edges.push(a + (b - a) * acc / total);
    }
    edges.push(b);
    edges
}

/// How an integrand behaves just right of the left endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeftBehavior {
    /// Nothing fractional detected; ordinary rules apply.
    Smooth,
    /// g(v) ~ c (v-a)^p with fractional p in (-1, 1).
    Power(f64),
    /// g(v) ~ c0 + c (v-a)^p with fractional p in (0, 1).
    ShiftedPower(f64, f64),
}

fn exponent_from_probes(v1: f64, v2: f64, v4: f64) -> Option<f64> {
    if v1 == 0.0 || v2 == 0.0 || v4 == 0.0 {
        return None;
    }
    let r1 = v2 / v1;
    let r2 = v4 / v2;
    if !(r1 > 0.0) || !(r2 > 0.0) {
        return None;
    }
    let p1 = r1.log2();
    let p2 = r2.log2();
    if (p1 - p2).abs() > 0.02 {
        return None;
    }
    Some(0.5 * (p1 + p2))
}

/// Probe the behaviour of g just right of `a`: a detected fractional power
/// (pure or on top of a constant) lets the first panel carry the
/// non-smoothness in a Jacobi weight.
pub fn detect_left_behavior<F: FnMut(f64) -> f64>(g: &mut F, a: f64, span: f64) -> LeftBehavior {
    let delta = 1e-7 * span;
    let v1 = g(a + delta);
    let v2 = g(a + 2.0 * delta);
    let v4 = g(a + 4.0 * delta);
    if let Some(p) = exponent_from_probes(v1, v2, v4) {
        if (-0.98..=0.98).contains(&p) && (p - p.round()).abs() > 0.02 {
            return LeftBehavior::Power(p);
        }
    }
    let c0 = g(a);
    if c0.is_finite() {
        if let Some(p) = exponent_from_probes(v1 - c0, v2 - c0, v4 - c0) {
            if (0.02..=0.98).contains(&p) {
                return LeftBehavior::ShiftedPower(c0, p);
            }
        }
    }
    LeftBehavior::Smooth
}

/// Integral of (b - v)^(sigma - 1) * g(v) over [a, b].
///
/// The panel touching `b` uses the Gauss-Jacobi rule so the endpoint
/// singularity is handled by the weight; interior panels, graded toward `a`
/// to absorb Hoelder behaviour of substituted integrands, carry the (there
/// smooth) kernel explicitly under Gauss-Legendre.  If g itself behaves like
/// (v-a)^p near `a`, the first panel factors that power into a Jacobi weight
/// of its own.
pub fn kernel_weighted_integral<F: FnMut(f64) -> f64>(
    sigma: f64,
    a: f64,
    b: f64,
    mut g: F,
    nodes: usize,
    panels: usize,
) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "kernel exponent must be positive, got {sigma}"
        )));
    }
    if b <= a {
        return Ok(0.0);
    }
    let edges = graded_edges(a, b, panels, 3.0);
    let last = edges.len() - 2;
    let left = detect_left_behavior(&mut g, a, b - a);
    let gj = gauss_jacobi(nodes, sigma - 1.0)?;
    let gl = gauss_legendre(nodes);
    let mut total = 0.0;
    for (i, pair) in edges.windows(2).enumerate() {
        let (lo, hi) = (pair[0], pair[1]);
        if i == last {
            total += gj.integrate(lo, hi, &mut g);
        } else if i == 0 {
            match left {
                LeftBehavior::Power(p) => {
                    // flip so the (v-a)^p weight sits at the rule's right end
                    let gj_left = gauss_jacobi(nodes, p)?;
                    total += gj_left.integrate(lo, hi, |x| {
                        let v = lo + hi - x;
                        (b - v).powf(sigma - 1.0) * g(v) * (v - a).powf(-p)
                    });
                }
                LeftBehavior::ShiftedPower(c0, p) => {
                    // exact kernel moment for the constant, Jacobi weight
                    // for the fractional remainder
                    total += c0 * ((b - lo).powf(sigma) - (b - hi).powf(sigma)) / sigma;
                    let gj_left = gauss_jacobi(nodes, p)?;
                    total += gj_left.integrate(lo, hi, |x| {
                        let v = lo + hi - x;
                        (b - v).powf(sigma - 1.0) * (g(v) - c0) * (v - a).powf(-p)
                    });
                }
                LeftBehavior::Smooth => {
                    total += gl.integrate(lo, hi, |v| (b - v).powf(sigma - 1.0) * g(v));
                }
            }
        } else {
            total += gl.integrate(lo, hi, |v| (b - v).powf(sigma - 1.0) * g(v));
        }
    }
    Ok(total)
}

/// Same integral with an error estimate from an independent finer rule.
pub fn kernel_weighted_integral_est<F: FnMut(f64) -> f64>(
    sigma: f64,
    a: f64,
    b: f64,
    mut g: F,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let coarse = kernel_weighted_integral(sigma, a, b, &mut g, spec.nodes, spec.panels)?;
    let fine = kernel_weighted_integral(sigma, a, b, &mut g, spec.nodes + 8, spec.panels + 2)?;
    Ok((fine, (fine - coarse).abs()))
}

/// Classical Riemann-Liouville integral of order sigma with base point `a`:
/// (1/Gamma(sigma)) * integral of (u - v)^(sigma-1) g(v) dv over [a, u].
pub fn rl_integral<F: FnMut(f64) -> f64>(
    sigma: f64,
    a: f64,
    u: f64,
    g: F,
    nodes: usize,
    panels: usize,
) -> Result<f64> {
    let raw = kernel_weighted_integral(sigma, a, u, g, nodes, panels)?;
    Ok(raw * (-ln_gamma(sigma)).exp())
}
