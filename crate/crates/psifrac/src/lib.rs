//! Fractional calculus with respect to a function.
//!
//! The crate implements integrals and derivatives "with respect to" an
//! increasing substitution Psi (Riemann-Liouville, Caputo and Hilfer forms),
//! the matching generalised Laplace transform and Psi-convolution, the
//! Mittag-Leffler / Prabhakar / Wright special functions they call for, and
//! closed-form solvers for the associated linear Cauchy problems, each
//! cross-checked against an independent product-integration Volterra oracle.
//!
//! The organising idea is conjugation: with (Q_Psi f)(x) = f(Psi(x)), every
//! Psi-operator equals Q_Psi composed with the classical operator composed
//! with Q_Psi^{-1}.  Numerically this means every kernel integral is
//! computed after the substitution u = Psi(s), where a Gauss-Jacobi rule
//! absorbs the endpoint singularity exactly.
//!
//! ```
//! use psifrac::psi::PsiFunction;
//! use psifrac::special::ml2;
//!
//! let e = ml2(1.0, 1.0, 1.0).unwrap();
//! assert!((e - std::f64::consts::E).abs() < 1e-14);
//!
//! let sq = PsiFunction::builtin("square", None).unwrap();
//! assert_eq!(sq.psi(3.0), 9.0);
//! ```

pub mod contour;
pub mod error;
pub mod gamma;
pub mod laplace;
pub mod operators;
pub mod psi;
pub mod quad;
pub mod solvers;
pub mod special;

pub use error::{Error, Result};
pub use quad::QuadratureSpec;
