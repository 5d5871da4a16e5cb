//! Transform-level identities: the closed-form table, factorisation through
//! the substitution, inversion round trips, the operator-transform theorems
//! with their initial-value corrections, and the convolution algebra.

mod common;

use num_complex::Complex64;
use psifrac::laplace::{
    caputo_derivative_image, estimate_exponential_order, exp_image, glt_forward, glt_inverse,
    ml2_image, ml3_image, power_image, psi_convolve, reference_image, rl_integral_image,
    ContourSpec, ExponentialOrder,
};
use psifrac::operators::{psi_integral, FracOrder};
use psifrac::psi::{PsiFunction, RealFunction};
use psifrac::quad::QuadratureSpec;
use psifrac::special::{ml2, ml3};

fn eligible_builtins() -> Vec<PsiFunction> {
    ["identity", "square", "sqrt", "log1p"]
        .iter()
        .map(|k| PsiFunction::builtin(k, None).unwrap())
        .collect()
}

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn re(s: f64) -> Complex64 {
    Complex64::new(s, 0.0)
}

#[test]
fn table_power_images() {
    // L_psi{Psi^mu} = Gamma(mu+1)/s^{mu+1}
    for psi in eligible_builtins() {
        for &mu in &[0.4, 0.7, 1.3] {
            let pc = psi.clone();
            let f = RealFunction::new("psi^mu", move |t| pc.psi(t).powf(mu));
            let ord = ExponentialOrder::new(0.5, 4.0, 0.0).unwrap();
            for &s in &[0.8, 1.5, 3.0] {
                let got = glt_forward(&psi, &f, re(s), &ord, &q()).unwrap();
                let want = power_image(mu).unwrap().eval(re(s));
                assert!(
                    (got - want).norm() <= 1e-8 * want.norm(),
                    "power table psi={} mu={mu} s={s}: {got} vs {want}",
                    psi.label()
                );
            }
        }
    }
}

#[test]
fn table_exp_and_ml_images() {
    for psi in eligible_builtins() {
        // L_psi{e^{a Psi}} = 1/(s-a)
        let a = 1.0;
        let pc = psi.clone();
        let f = RealFunction::new("exp(a psi)", move |t| (a * pc.psi(t)).exp());
        let ord = ExponentialOrder::new(a, 1.1, 0.0).unwrap();
        let got = glt_forward(&psi, &f, re(2.0), &ord, &q()).unwrap();
        assert!(
            (got.re - 1.0).abs() <= 1e-8 && got.im.abs() <= 1e-8,
            "exp table psi={}: {got}",
            psi.label()
        );

        // L_psi{E_mu(lam Psi^mu)} = s^{mu-1}/(s^mu - lam)
        let (mu, lam) = (0.5, 0.25);
        let pc = psi.clone();
        let f = RealFunction::new("ml(psi)", move |t| {
            ml2(mu, 1.0, lam * pc.psi(t).powf(mu)).unwrap()
        });
        let ord = ExponentialOrder::new(lam.powf(1.0 / mu), 2.0, 0.0).unwrap();
        let got = glt_forward(&psi, &f, re(1.0), &ord, &q()).unwrap();
        let want = 1.0 / (1.0 - lam); // s = 1: s^{mu-1}/(s^mu - lam)
        assert!(
            (got.re - want).abs() <= 1e-8 * want,
            "ml2 table psi={}: {} vs {want}",
            psi.label(),
            got.re
        );

        // L_psi{Psi^{mu-1} E_{mu,mu}(lam Psi^mu)} = 1/(s^mu - lam)
        let pc = psi.clone();
        let f = RealFunction::new("mlk(psi)", move |t| {
            let u = pc.psi(t);
            u.powf(mu - 1.0) * ml2(mu, mu, lam * u.powf(mu)).unwrap()
        });
        let got = glt_forward(&psi, &f, re(1.0), &ord, &q()).unwrap();
        assert!(
            (got.re - want).abs() <= 1e-8 * want,
            "ml2 kernel table psi={}: {} vs {want}",
            psi.label(),
            got.re
        );
    }
}

#[test]
fn factorisation_through_substitution() {
    // L_psi{f} = classical L{f o Psi^{-1}}; the classical transform is the
    // psi = identity instance
    let ident = PsiFunction::builtin("identity", None).unwrap();
    for psi in eligible_builtins() {
        let pc = psi.clone();
        let f = RealFunction::new("exp(-psi) cos(psi)", move |t| {
            let u = pc.psi(t);
            (-u).exp() * u.cos()
        });
        let g = RealFunction::new("exp(-u) cos(u)", |u: f64| (-u).exp() * u.cos());
        let ord = ExponentialOrder::bounded(1.0);
        for &s in &[0.6, 2.0] {
            let lhs = glt_forward(&psi, &f, re(s), &ord, &q()).unwrap();
            let rhs = glt_forward(&ident, &g, re(s), &ord, &q()).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-8 * rhs.norm().max(1e-3),
                "factorisation psi={} s={s}: {lhs} vs {rhs}",
                psi.label()
            );
        }
    }
}

#[test]
fn inversion_round_trip_table() {
    // glt_inverse o reference_image recovers the time function on [0.1, 2]
    let contour = ContourSpec::default();
    for kind in ["identity", "square"] {
        let psi = PsiFunction::builtin(kind, None).unwrap();
        for k in 0..=12 {
            let t = 0.1 + 1.9 * k as f64 / 12.0;
            let u = psi.psi(t);

            let img = power_image(2.0).unwrap();
            let got = glt_inverse(&psi, &img, t, &contour).unwrap();
            assert!((got - u * u).abs() <= 1e-6, "power roundtrip {kind} t={t}");

            let img = exp_image(1.0).unwrap();
            let got = glt_inverse(&psi, &img, t, &contour).unwrap();
            assert!((got - u.exp()).abs() <= 1e-6, "exp roundtrip {kind} t={t}");

            let (mu, lam) = (0.5, 0.25);
            let img = ml2_image(mu, lam).unwrap();
            let got = glt_inverse(&psi, &img, t, &contour).unwrap();
            let want = ml2(mu, 1.0, lam * u.powf(mu)).unwrap();
            assert!(
                (got - want).abs() <= 1e-6,
                "ml2 roundtrip {kind} t={t}: {got} vs {want}"
            );

            let img = ml3_image(mu, mu, 1.0, lam).unwrap();
            let got = glt_inverse(&psi, &img, t, &contour).unwrap();
            let want = u.powf(mu - 1.0) * ml2(mu, mu, lam * u.powf(mu)).unwrap();
            assert!(
                (got - want).abs() <= 1e-6,
                "ml2 kernel roundtrip {kind} t={t}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn prabhakar_image_inversion() {
    // s^{mu gamma - nu}/(s^mu - lam)^gamma at (0.6, 0.6, 2, 0.3), psi = id
    let psi = PsiFunction::builtin("identity", None).unwrap();
    let (mu, nu, gam, lam) = (0.6, 0.6, 2.0, 0.3);
    let img = ml3_image(mu, nu, gam, lam).unwrap();
    let t = 1.0;
    let got = glt_inverse(&psi, &img, t, &ContourSpec::default()).unwrap();
    let want = t.powf(nu - 1.0) * ml3(mu, nu, gam, lam * t.powf(mu)).unwrap();
    assert!((got - want).abs() <= 1e-6, "{got} vs {want}");
}

#[test]
fn operator_transform_theorems() {
    // the four transform identities, with initial-value corrections
    let sgrid = [1.2, 2.0, 3.5];
    for psi in [
        PsiFunction::builtin("identity", None).unwrap(),
        PsiFunction::builtin("square", None).unwrap(),
    ] {
        // base function f = e^{-Psi}, image 1/(s+1), smooth and bounded
        let pc = psi.clone();
        let f = RealFunction::new("exp(-psi)", move |t| (-pc.psi(t)).exp());
        let pc = psi.clone();
        let f_deriv = RealFunction::new("exp(-psi)", move |t| (-pc.psi(t)).exp())
            .with_derivative({
                let pc = psi.clone();
                move |t| -(-pc.psi(t)).exp() * pc.dpsi(t)
            });
        let base = exp_image(-1.0).unwrap();
        let ord = ExponentialOrder::bounded(1.0);
        let quad = q();

        // integral: L{I^mu f} = s^{-mu} F
        let mu = 0.6;
        let psi_c = psi.clone();
        let f_c = f.clone();
        let integral = RealFunction::new("I f", move |t| {
            psi_integral(&psi_c, FracOrder::new(mu).unwrap(), &f_c, 0.0, t, &quad)
                .unwrap_or(f64::NAN)
        });
        let img = rl_integral_image(&base, mu).unwrap();
        for &s in &sgrid {
            let got = glt_forward(&psi, &integral, re(s), &ord, &quad).unwrap();
            let want = img.eval(re(s));
            assert!(
                (got - want).norm() <= 1e-6 * want.norm(),
                "integral transform psi={} s={s}: {got} vs {want}",
                psi.label()
            );
        }

        // Caputo: L{D^mu_C f} = s^mu F - s^{mu-1} f(0)
        let psi_c = psi.clone();
        let f_c = f_deriv.clone();
        let caputo = RealFunction::new("D_C f", move |t| {
            psifrac::operators::psi_caputo_derivative(
                &psi_c,
                FracOrder::new(mu).unwrap(),
                &f_c,
                0.0,
                t,
                &quad,
            )
            .unwrap_or(f64::NAN)
        });
        let img = caputo_derivative_image(&base, mu, &[1.0]).unwrap();
        for &s in &sgrid {
            let got = glt_forward(&psi, &caputo, re(s), &ord, &quad).unwrap();
            let want = img.eval(re(s));
            assert!(
                (got - want).norm() <= 1e-6 * want.norm().max(0.1),
                "caputo transform psi={} s={s}: {got} vs {want}",
                psi.label()
            );
        }
    }
}

#[test]
fn rl_and_hilfer_transform_theorems() {
    // RL and Hilfer identities need the weighted initial values; using
    // f = Psi^{0.3} E-free power so I^{1-mu} f(0) = 0 keeps them clean,
    // and a second run with the ML kernel exercises a nonzero correction.
    let psi = PsiFunction::builtin("identity", None).unwrap();
    let quad = q();
    let ord = ExponentialOrder::new(0.5, 3.0, 0.0).unwrap();
    let mu = 0.5;

    // f = t^{mu-1} E_{mu,mu}(lam t^mu): RL derivative is lam f + the
    // initial atom; directly: L{D^mu f} = s^mu/(s^mu-lam) - 1
    // with (I^{1-mu} f)(0) = 1
    let lam = 0.25;
    let f = RealFunction::new("ml kernel", move |t: f64| {
        t.powf(mu - 1.0) * ml2(mu, mu, lam * t.powf(mu)).unwrap()
    });
    // D^mu f = lam f in the RL sense, so its transform is lam/(s^mu - lam);
    // the image constructor must reproduce that from the base image and the
    // initial value
    let base = ml3_image(mu, mu, 1.0, lam).unwrap();
    let img = psifrac::laplace::rl_derivative_image(&base, mu, &[1.0]).unwrap();
    for &s in &[1.0f64, 2.0] {
        let want_direct = lam / (s.powf(mu) - lam);
        let got_img = img.eval(re(s));
        assert!(
            (got_img.re - want_direct).abs() <= 1e-12,
            "rl image algebra s={s}: {got_img} vs {want_direct}"
        );
        // and the numeric transform of lam * f agrees
        let fc = f.clone();
        let scaled = RealFunction::new("lam f", move |t| lam * fc.eval(t));
        let got = glt_forward(&psi, &scaled, re(s), &ord, &quad).unwrap();
        assert!(
            (got.re - want_direct).abs() <= 1e-6,
            "rl transform s={s}: {} vs {want_direct}",
            got.re
        );
    }

    // Hilfer identity at (mu, nu) = (0.5, 0.5): the type-nu eigenfunction
    // is f = t^{rho-1} E_{mu,rho}(lam t^mu) with rho = mu + nu(1-mu),
    // whose weighted initial value (I^{(1-nu)(1-mu)} f)(0) equals 1;
    // D^{mu,nu} f = lam f, so s^mu F - s^{-nu(1-mu)} init = lam F.
    let nu = 0.5;
    let rho = mu + nu * (1.0 - mu);
    let sig = (1.0 - nu) * (1.0 - mu);
    let fh = RealFunction::new("hilfer eigen", move |t: f64| {
        t.powf(rho - 1.0) * ml2(mu, rho, lam * t.powf(mu)).unwrap()
    });
    // init computed by psi_integral and extrapolated to t -> 0 along t^mu
    let psi_c = psi.clone();
    let fh_c = fh.clone();
    let prequad = quad;
    let weighted = move |t: f64| {
        psi_integral(&psi_c, FracOrder::new(sig).unwrap(), &fh_c, 0.0, t, &prequad)
            .unwrap_or(f64::NAN)
    };
    let (t1, t2) = (1e-6, 1e-8);
    let (w1, w2) = (weighted(t1), weighted(t2));
    let init = w2 + (w2 - w1) * t2.powf(mu) / (t1.powf(mu) - t2.powf(mu));
    assert!(
        (init - 1.0).abs() < 1e-6,
        "weighted initial value should extrapolate to 1, got {init}"
    );
    let base_h = ml3_image(mu, rho, 1.0, lam).unwrap();
    let img = psifrac::laplace::hilfer_derivative_image(&base_h, mu, nu, &[init]).unwrap();
    for &s in &[1.5f64, 2.5] {
        let want = lam * base_h.eval(re(s));
        let got = img.eval(re(s));
        assert!(
            (got - want).norm() <= 1e-6,
            "hilfer transform identity s={s}: {got} vs {want}"
        );
        // and the numeric generalised transform of lam * f agrees
        let fc = fh.clone();
        let scaled = RealFunction::new("lam f", move |t| lam * fc.eval(t));
        let num = glt_forward(&psi, &scaled, re(s), &ord, &quad).unwrap();
        assert!(
            (num - want).norm() <= 1e-6,
            "hilfer numeric transform s={s}: {num} vs {want}"
        );
    }
}

#[test]
fn convolution_algebra() {
    let quad = q();
    for psi in eligible_builtins() {
        let pc = psi.clone();
        let f = RealFunction::new("f", move |t| (0.3 * pc.psi(t)).exp());
        let pc = psi.clone();
        let g = RealFunction::new("g", move |t| pc.psi(t).cos());
        let pc = psi.clone();
        let h = RealFunction::new("h", move |t| 1.0 + pc.psi(t));
        for &t in &[0.6, 1.3] {
            let fg = psi_convolve(&psi, &f, &g, t, &quad).unwrap();
            let gf = psi_convolve(&psi, &g, &f, t, &quad).unwrap();
            assert!(
                (fg - gf).abs() <= 1e-8 * fg.abs().max(1.0),
                "commutativity psi={} t={t}",
                psi.label()
            );

            // bilinearity
            let a = 2.0;
            let b = -0.7;
            let gc = g.clone();
            let hc = h.clone();
            let lin = RealFunction::new("ag+bh", move |t| a * gc.eval(t) + b * hc.eval(t));
            let lhs = psi_convolve(&psi, &f, &lin, t, &quad).unwrap();
            let rhs = a * fg + b * psi_convolve(&psi, &f, &h, t, &quad).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-8 * lhs.abs().max(1.0),
                "bilinearity psi={} t={t}: {lhs} vs {rhs}",
                psi.label()
            );

            // associativity: (f*g)*h = f*(g*h)
            let psi_c = psi.clone();
            let f_c = f.clone();
            let g_c = g.clone();
            let fg_fn = RealFunction::new("f*g", move |s: f64| {
                psi_convolve(&psi_c, &f_c, &g_c, s, &quad).unwrap_or(f64::NAN)
            });
            let psi_c = psi.clone();
            let g_c = g.clone();
            let h_c = h.clone();
            let gh_fn = RealFunction::new("g*h", move |s: f64| {
                psi_convolve(&psi_c, &g_c, &h_c, s, &quad).unwrap_or(f64::NAN)
            });
            let lhs = psi_convolve(&psi, &fg_fn, &h, t, &quad).unwrap();
            let rhs = psi_convolve(&psi, &f, &gh_fn, t, &quad).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-8 * lhs.abs().max(1.0),
                "associativity psi={} t={t}: {lhs} vs {rhs}",
                psi.label()
            );
        }
    }
}

#[test]
fn convolution_product_theorem() {
    let quad = q();
    for psi in [
        PsiFunction::builtin("identity", None).unwrap(),
        PsiFunction::builtin("square", None).unwrap(),
    ] {
        let pc = psi.clone();
        let f = RealFunction::new("f", move |t| (-pc.psi(t)).exp());
        let pc = psi.clone();
        let g = RealFunction::new("g", move |t| pc.psi(t) * (-2.0 * pc.psi(t)).exp());
        let psi_c = psi.clone();
        let f_c = f.clone();
        let g_c = g.clone();
        let conv = RealFunction::new("f conv g", move |t: f64| {
            psi_convolve(&psi_c, &f_c, &g_c, t, &quad).unwrap_or(f64::NAN)
        });
        let ord = ExponentialOrder::bounded(1.0);
        for &s in &[1.0, 2.5] {
            let lhs = glt_forward(&psi, &conv, re(s), &ord, &quad).unwrap();
            let rhs = glt_forward(&psi, &f, re(s), &ord, &quad).unwrap()
                * glt_forward(&psi, &g, re(s), &ord, &quad).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-6 * rhs.norm().max(1e-3),
                "product theorem psi={} s={s}: {lhs} vs {rhs}",
                psi.label()
            );
        }
    }
}

#[test]
fn limiting_property() {
    // |L_psi f(s)| decreases toward 0 as s grows
    let psi = PsiFunction::builtin("square", None).unwrap();
    let pc = psi.clone();
    let f = RealFunction::new("bounded", move |t| (pc.psi(t)).sin() + 1.2);
    let ord = ExponentialOrder::bounded(2.2);
    let quad = q();
    let mut prev = f64::INFINITY;
    for &s in &[10.0, 100.0, 1000.0, 10000.0] {
        let v = glt_forward(&psi, &f, re(s), &ord, &quad).unwrap().norm();
        assert!(v < prev, "no decrease at s = {s}: {v} vs {prev}");
        prev = v;
    }
    assert!(prev < 1e-3);
}

#[test]
fn reference_image_nested_specs() {
    let img = reference_image("caputo-derivative-of:0.7:2.5:ml2:0.5:0.25").unwrap();
    let base = ml2_image(0.5, 0.25).unwrap();
    let s = re(2.0);
    let want = s.powf(0.7) * base.eval(s) - s.powf(0.7 - 1.0) * 2.5;
    assert!((img.eval(s) - want).norm() < 1e-13);
}

#[test]
fn ml_order_estimate() {
    // E_{0.5}(Psi^{0.5}) has growth rate ~ 1
    let psi = PsiFunction::builtin("identity", None).unwrap();
    let f = RealFunction::new("ml(sqrt u)", |t: f64| ml2(0.5, 1.0, t.sqrt()).unwrap());
    let ord = estimate_exponential_order(&psi, &f, 30.0).unwrap();
    assert!(
        (ord.rate - 1.0).abs() <= 0.1,
        "ML growth rate: {}",
        ord.rate
    );
}
