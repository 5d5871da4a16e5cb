//! Real Gamma function.
//!
//! The standard library does not expose a stable `tgamma`, so the crate
//! carries its own Lanczos-type evaluation (Godfrey/Pugh coefficient set,
//! relative error below 1e-14 for positive arguments).  The series engines
//! in [`crate::special`] work with the *reciprocal* Gamma through
//! [`ln_abs_gamma`], which is finite-signed everywhere and encodes the
//! convention 1/Gamma(0) = 1/Gamma(-1) = ... = 0.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    3.399_464_998_481_188_87e-5,
    4.652_362_892_704_857_56e-5,
    -9.837_447_530_487_956_46e-5,
    1.580_887_032_249_124_94e-4,
    -2.102_644_417_241_048_83e-4,
    2.174_396_181_152_126_43e-4,
    -1.643_181_065_367_638_9e-4,
    8.441_822_398_385_274_33e-5,
    -2.619_083_840_158_140_87e-5,
    3.689_918_265_953_162_34e-6,
];
const LANCZOS_SCALE: f64 = 2.506_628_274_631_000_5;

/// Natural log of Gamma(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument, got {x}");
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    let mut y = x;
    for c in LANCZOS_COEF {
        y += 1.0;
        ser += c / y;
    }
    tmp + (LANCZOS_SCALE * ser / x).ln()
}

/// sin(pi x) with exact argument reduction, so that integer x map to 0.
fn sin_pi(x: f64) -> f64 {
    // reduce to [-1, 1] using the periodicity of sin(pi x)
    let r = x - 2.0 * (0.5 * x).round();
    // fold to |r| <= 0.5 where sin is well conditioned
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// ln|Gamma(x)| together with the sign of Gamma(x), valid for all real x.
///
/// At the poles (x = 0, -1, -2, ...) the magnitude is `+inf` and the sign 0,
/// which makes `sign * exp(-ln_mag)` the reciprocal-Gamma convention used by
/// the special-function series.
pub fn ln_abs_gamma(x: f64) -> (f64, f64) {
    if x > 0.0 {
        (ln_gamma(x), 1.0)
    } else if x == x.floor() {
        (f64::INFINITY, 0.0)
    } else {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let s = sin_pi(x);
        let ln_mag = PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
        (ln_mag, s.signum())
    }
}

/// Gamma(x) for real x; +/-inf at the poles and for overflowing arguments.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        if x > 171.7 {
            return f64::INFINITY;
        }
        ln_gamma(x).exp()
    } else {
        let (ln_mag, sign) = ln_abs_gamma(x);
        if sign == 0.0 {
            f64::INFINITY
        } else {
            sign * ln_mag.exp()
        }
    }
}

/// 1/Gamma(x), the entire reciprocal with 1/Gamma(nonpositive integer) = 0.
pub fn recip_gamma(x: f64) -> f64 {
    let (ln_mag, sign) = ln_abs_gamma(x);
    if sign == 0.0 {
        0.0
    } else {
        sign * (-ln_mag).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn matches_factorials() {
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(2.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(11.0), 3_628_800.0, max_relative = 1e-13);
    }

    #[test]
    fn half_integer_values() {
        let sqrt_pi = PI.sqrt();
        assert_relative_eq!(gamma(0.5), sqrt_pi, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5), 0.5 * sqrt_pi, max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5), -2.0 * sqrt_pi, max_relative = 1e-13);
        assert_relative_eq!(gamma(2.6), 1.429_624_558_860_304_6, max_relative = 1e-13);
    }

    #[test]
    fn reciprocal_vanishes_at_poles() {
        for n in 0..8 {
            assert_eq!(recip_gamma(-(n as f64)), 0.0);
        }
        assert_relative_eq!(recip_gamma(0.7) * gamma(0.7), 1.0, max_relative = 1e-13);
        assert_relative_eq!(recip_gamma(-2.5) * gamma(-2.5), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn reflection_consistency() {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x) at a non-special point
        let x = 0.3;
        assert_relative_eq!(
            gamma(x) * gamma(1.0 - x),
            PI / sin_pi(x),
            max_relative = 1e-13
        );
    }

    #[test]
    fn large_negative_arguments_stay_finite_in_log_form() {
        let (ln_mag, sign) = ln_abs_gamma(-300.5);
        assert!(ln_mag.is_finite());
        assert!(sign == 1.0 || sign == -1.0);
    }
}
