//! The substitution function Psi and the conjugation operator Q_Psi.
//!
//! A [`PsiFunction`] packages an increasing C^1 substitution with its
//! derivative and inverse.  [`conjugate_in`] and [`conjugate_out`] realise
//! (Q_Psi f)(x) = f(Psi(x)) and its inverse, which is how every operator in
//! this crate reduces to its classical counterpart.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Sample count for the monotonicity / round-trip audits run on construction.
const AUDIT_POINTS: usize = 1000;
/// Audits on unbounded domains scan [a, a + AUDIT_SPAN].
const AUDIT_SPAN: f64 = 50.0;

/// An increasing substitution Psi with derivative and inverse.
///
/// Immutable after construction; cheap to clone and safe to share across
/// threads.
#[derive(Clone)]
pub struct PsiFunction {
    psi: RealFn,
    dpsi: RealFn,
    inv: RealFn,
    domain: (f64, f64),
    zero_at_origin: bool,
    label: String,
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PsiFunction")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("zero_at_origin", &self.zero_at_origin)
            .finish()
    }
}

impl PsiFunction {
    /// Build a substitution from explicit callables and audit it.
    ///
    /// The audit samples Psi on the domain (clipped to a finite span),
    /// requiring strict increase, positive derivative in the interior, and a
    /// 1e-10-relative inverse round-trip.
    pub fn new(
        label: impl Into<String>,
        psi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dpsi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: (f64, f64),
        zero_at_origin: bool,
    ) -> Result<Self> {
        let out = PsiFunction {
            psi: Arc::new(psi),
            dpsi: Arc::new(dpsi),
            inv: Arc::new(inv),
            domain,
            zero_at_origin,
            label: label.into(),
        };
        out.audit()?;
        Ok(out)
    }

    /// Build a substitution whose inverse is found by bracketed root finding
    /// (bisection then secant polish); monotonicity guarantees uniqueness.
    pub fn with_numeric_inverse(
        label: impl Into<String>,
        psi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dpsi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: (f64, f64),
        zero_at_origin: bool,
    ) -> Result<Self> {
        let psi_arc: RealFn = Arc::new(psi);
        let psi_for_inv = psi_arc.clone();
        let inv = move |u: f64| invert_monotone(&*psi_for_inv, u, domain);
        let out = PsiFunction {
            psi: psi_arc,
            dpsi: Arc::new(dpsi),
            inv: Arc::new(inv),
            domain,
            zero_at_origin,
            label: label.into(),
        };
        out.audit()?;
        Ok(out)
    }

    /// One of the built-in substitution families.
    ///
    /// Kinds: `identity`, `power` (t^p, requires p > 0), `sqrt`, `square`,
    /// `log1p` (log(1+t)) and `shifted-log` (log t on [a, inf) with a > 0,
    /// parameter a, default 1; the one family with Psi(0) != 0).
    pub fn builtin(kind: &str, parameter: Option<f64>) -> Result<Self> {
        match kind {
            "identity" => PsiFunction::new(
                "identity",
                |t| t,
                |_| 1.0,
                |u| u,
                (0.0, f64::INFINITY),
                true,
            ),
            "power" => {
                let p = parameter.ok_or_else(|| {
                    Error::InvalidParameter("power substitution needs an exponent".into())
                })?;
                if !(p > 0.0) || !p.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "power exponent must be positive, got {p}"
                    )));
                }
                PsiFunction::new(
                    format!("power:{p}"),
                    move |t: f64| t.powf(p),
                    move |t: f64| p * t.powf(p - 1.0),
                    move |u: f64| u.powf(1.0 / p),
                    (0.0, f64::INFINITY),
                    true,
                )
            }
            "sqrt" => PsiFunction::builtin("power", Some(0.5)).map(|mut s| {
                s.label = "sqrt".into();
                s
            }),
            "square" => PsiFunction::builtin("power", Some(2.0)).map(|mut s| {
                s.label = "square".into();
                s
            }),
            "log1p" => PsiFunction::new(
                "log1p",
                |t: f64| t.ln_1p(),
                |t: f64| 1.0 / (1.0 + t),
                |u: f64| u.exp_m1(),
                (0.0, f64::INFINITY),
                true,
            ),
            "shifted-log" => {
                let a = parameter.unwrap_or(1.0);
                if !(a > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "shifted-log needs a positive left endpoint, got {a}"
                    )));
                }
                PsiFunction::new(
                    format!("shifted-log:{a}"),
                    |t: f64| t.ln(),
                    |t: f64| 1.0 / t,
                    |u: f64| u.exp(),
                    (a, f64::INFINITY),
                    false,
                )
            }
            other => Err(Error::UnknownKind(format!(
                "unknown substitution kind '{other}'"
            ))),
        }
    }

    pub fn psi(&self, t: f64) -> f64 {
        (self.psi)(t)
    }

    pub fn dpsi(&self, t: f64) -> f64 {
        (self.dpsi)(t)
    }

    pub fn inv(&self, u: f64) -> f64 {
        (self.inv)(u)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn zero_at_origin(&self) -> bool {
        self.zero_at_origin
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.domain.0 && t <= self.domain.1
    }

    /// Eligible for the generalised Laplace transform: Psi(0) = 0.
    pub fn transform_eligible(&self) -> bool {
        self.zero_at_origin
    }

    fn audit_span(&self) -> (f64, f64) {
        let (a, b) = self.domain;
        (a, if b.is_finite() { b } else { a + AUDIT_SPAN })
    }

    fn audit(&self) -> Result<()> {
        let (lo, hi) = self.audit_span();
        if !(hi > lo) {
            return Err(Error::InvalidParameter(format!(
                "empty domain [{lo}, {hi}]"
            )));
        }
        let n = AUDIT_POINTS;
        let mut prev = self.psi(lo);
        if !prev.is_finite() {
            return Err(Error::InvalidParameter(
                "Psi not finite at the left endpoint".into(),
            ));
        }
        for i in 1..=n {
            let t = lo + (hi - lo) * i as f64 / n as f64;
            let v = self.psi(t);
            if !(v > prev) {
                return Err(Error::InvalidParameter(format!(
                    "Psi is not strictly increasing near t = {t}"
                )));
            }
            // derivative positivity in the open interior only: families like
            // t^p with p < 1 have an infinite derivative at the endpoint
            if !(self.dpsi(t) > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "Psi' is not positive at t = {t}"
                )));
            }
            let back = self.inv(v);
            if (back - t).abs() > 1e-10 * t.abs().max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "inverse round-trip failed at t = {t}: got {back}"
                )));
            }
            prev = v;
        }
        if self.zero_at_origin {
            if self.domain.0 != 0.0 || self.psi(0.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(
                    "zero_at_origin set but Psi(0) != 0".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Solve psi(t) = target for t by bisection followed by secant polish.
pub fn invert_monotone(psi: &dyn Fn(f64) -> f64, target: f64, domain: (f64, f64)) -> f64 {
    let (mut lo, hi_bound) = domain;
    let mut hi = if hi_bound.is_finite() {
        hi_bound
    } else {
        // expand until the target is bracketed
        let mut h = lo.abs().max(1.0);
        let mut probe = lo + h;
        while psi(probe) < target && h < 1e12 {
            h *= 2.0;
            probe = lo + h;
        }
        probe
    };
    let mut flo = psi(lo) - target;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = psi(mid) - target;
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-14 * lo.abs().max(1.0) {
            break;
        }
    }
    // secant polish
    let mut x0 = lo;
    let mut x1 = hi;
    let mut f0 = psi(x0) - target;
    for _ in 0..6 {
        let f1 = psi(x1) - target;
        let denom = f1 - f0;
        if denom == 0.0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / denom;
        if !x2.is_finite() {
            break;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2.clamp(domain.0, if domain.1.is_finite() { domain.1 } else { x2 });
    }
    x1
}

/// A real-valued function of one variable, optionally with analytic
/// derivatives.
#[derive(Clone)]
pub struct RealFunction {
    f: RealFn,
    derivs: Vec<RealFn>,
    label: String,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("label", &self.label)
            .field("derivatives", &self.derivs.len())
            .finish()
    }
}

impl RealFunction {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RealFunction {
            f: Arc::new(f),
            derivs: Vec::new(),
            label: label.into(),
        }
    }

    /// Attach analytic derivatives f', f'', ... (ordered).
    pub fn with_derivative(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.derivs.push(Arc::new(d));
        self
    }

    pub fn constant(c: f64) -> Self {
        RealFunction::new(format!("const:{c}"), move |_| c).with_derivative(|_| 0.0)
    }

    pub fn zero() -> Self {
        RealFunction::constant(0.0)
    }

    pub fn one() -> Self {
        RealFunction::constant(1.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn derivative_count(&self) -> usize {
        self.derivs.len()
    }

    /// k-th analytic derivative, if supplied (k = 0 is the function itself).
    pub fn deriv(&self, k: usize, t: f64) -> Option<f64> {
        if k == 0 {
            Some(self.eval(t))
        } else {
            self.derivs.get(k - 1).map(|d| d(t))
        }
    }

    /// Check each supplied derivative against central differences of its
    /// predecessor on a sample grid.
    pub fn validate_derivatives(&self, interval: (f64, f64), tol: f64) -> Result<()> {
        let (lo, hi) = interval;
        let h = (hi - lo) / 1e4;
        for k in 0..self.derivs.len() {
            for i in 1..20 {
                let t = lo + (hi - lo) * i as f64 / 20.0;
                let fd = (self.deriv(k, t + h).unwrap() - self.deriv(k, t - h).unwrap())
                    / (2.0 * h);
                let an = self.deriv(k + 1, t).unwrap();
                if (fd - an).abs() > tol * (1.0 + an.abs()) {
                    return Err(Error::InvalidParameter(format!(
                        "derivative {} inconsistent with finite differences at t = {t} \
                         ({fd} vs {an})",
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

fn probe_points(psi: &PsiFunction) -> [f64; 3] {
    let (lo, hi) = psi.domain();
    let hi = if hi.is_finite() { hi } else { lo + 10.0 };
    [
        lo + 0.25 * (hi - lo),
        lo + 0.5 * (hi - lo),
        lo + 0.75 * (hi - lo),
    ]
}

/// (Q_Psi f)(t) = f(Psi(t)); the first derivative follows the chain rule
/// when `f` carries one.
pub fn conjugate_in(psi: &PsiFunction, f: &RealFunction) -> Result<RealFunction> {
    for t in probe_points(psi) {
        if !f.eval(psi.psi(t)).is_finite() {
            return Err(Error::DomainMismatch(format!(
                "f is not finite at Psi({t}) = {}",
                psi.psi(t)
            )));
        }
    }
    let psi_c = psi.clone();
    let f_c = f.clone();
    let mut out = RealFunction::new(
        format!("{}(psi)", f.label()),
        move |t| f_c.eval(psi_c.psi(t)),
    );
    if f.derivative_count() >= 1 {
        let psi_c = psi.clone();
        let f_c = f.clone();
        out = out.with_derivative(move |t| {
            f_c.deriv(1, psi_c.psi(t)).unwrap() * psi_c.dpsi(t)
        });
    }
    Ok(out)
}

/// (Q_Psi^{-1} f)(u) = f(Psi^{-1}(u)), the inverse of [`conjugate_in`].
pub fn conjugate_out(psi: &PsiFunction, f: &RealFunction) -> Result<RealFunction> {
    for t in probe_points(psi) {
        if !f.eval(t).is_finite() {
            return Err(Error::DomainMismatch(format!("f is not finite at t = {t}")));
        }
    }
    let psi_c = psi.clone();
    let f_c = f.clone();
    let mut out = RealFunction::new(
        format!("{}(psi^-1)", f.label()),
        move |u| f_c.eval(psi_c.inv(u)),
    );
    if f.derivative_count() >= 1 {
        let psi_c = psi.clone();
        let f_c = f.clone();
        out = out.with_derivative(move |u| {
            let t = psi_c.inv(u);
            f_c.deriv(1, t).unwrap() / psi_c.dpsi(t)
        });
    }
    Ok(out)
}

/// Free-function alias matching the operation name used by the CLI.
pub fn builtin_psi(kind: &str, parameter: Option<f64>) -> Result<PsiFunction> {
    PsiFunction::builtin(kind, parameter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn builtin_families() {
        let ident = PsiFunction::builtin("identity", None).unwrap();
        assert_eq!(ident.psi(2.5), 2.5);
        assert!(ident.zero_at_origin());

        let p2 = PsiFunction::builtin("power", Some(2.0)).unwrap();
        assert_eq!(p2.psi(3.0), 9.0);
        assert_eq!(p2.dpsi(3.0), 6.0);
        assert_relative_eq!(p2.inv(9.0), 3.0);

        let lg = PsiFunction::builtin("log1p", None).unwrap();
        assert_eq!(lg.psi(0.0), 0.0);
        assert_relative_eq!(lg.dpsi(1.0), 0.5);

        let had = PsiFunction::builtin("shifted-log", Some(0.5)).unwrap();
        assert!(!had.transform_eligible());

        assert!(matches!(
            PsiFunction::builtin("cosh", None),
            Err(Error::UnknownKind(_))
        ));
        assert!(PsiFunction::builtin("power", Some(-1.0)).is_err());
    }

    #[test]
    fn numeric_inverse_agrees() {
        let s =
            PsiFunction::with_numeric_inverse("cubic", |t| t * t * t, |t| 3.0 * t * t, (0.0, 10.0), true)
                .unwrap();
        for &u in &[0.001, 0.5, 8.0, 729.0] {
            if u <= 1000.0 {
                assert_abs_diff_eq!(s.inv(u), u.powf(1.0 / 3.0), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn audit_rejects_decreasing() {
        let r = PsiFunction::new("bad", |t| -t, |_| -1.0, |u| -u, (0.0, 1.0), false);
        assert!(r.is_err());
    }

    #[test]
    fn conjugation_round_trip() {
        let psi = PsiFunction::builtin("square", None).unwrap();
        let f = RealFunction::new("sin", f64::sin).with_derivative(f64::cos);
        let inside = conjugate_in(&psi, &f).unwrap();
        let back = conjugate_out(&psi, &inside).unwrap();
        for i in 1..20 {
            let t = i as f64 * 0.1;
            assert_abs_diff_eq!(back.eval(t), f.eval(t), epsilon = 1e-10);
        }
    }

    #[test]
    fn chain_rule_derivative() {
        let psi = PsiFunction::builtin("square", None).unwrap();
        let f = RealFunction::new("exp", f64::exp).with_derivative(f64::exp);
        let g = conjugate_in(&psi, &f).unwrap();
        // d/dt exp(t^2) = 2 t exp(t^2)
        let t = 0.7;
        assert_relative_eq!(
            g.deriv(1, t).unwrap(),
            2.0 * t * (t * t).exp(),
            max_relative = 1e-12
        );
        g.validate_derivatives((0.1, 1.5), 1e-5).unwrap();
    }

    #[test]
    fn direct_substitution_examples() {
        let sqrt = PsiFunction::builtin("sqrt", None).unwrap();
        let f = RealFunction::new("exp", f64::exp);
        let g = conjugate_in(&sqrt, &f).unwrap();
        assert_relative_eq!(g.eval(4.0), std::f64::consts::E.powi(2), max_relative = 1e-12);

        let sq = PsiFunction::builtin("square", None).unwrap();
        let f = RealFunction::new("quartic", |t: f64| t.powi(4));
        let h = conjugate_out(&sq, &f).unwrap();
        assert_relative_eq!(h.eval(3.0), 9.0, max_relative = 1e-10);

        let lg = PsiFunction::builtin("log1p", None).unwrap();
        let idf = RealFunction::new("id", |t| t);
        let h = conjugate_out(&lg, &idf).unwrap();
        assert_relative_eq!(h.eval(1.0), std::f64::consts::E - 1.0, max_relative = 1e-10);
    }
}
