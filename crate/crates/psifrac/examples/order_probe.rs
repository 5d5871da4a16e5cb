use psifrac::laplace::estimate_exponential_order;
use psifrac::psi::{PsiFunction, RealFunction};

fn main() {
    let psi = PsiFunction::builtin("identity", None).unwrap();
    let f = RealFunction::new("sin", f64::sin);
    match estimate_exponential_order(&psi, &f, 20.0) {
        Ok(o) => println!("sin: rate={} scale={}", o.rate, o.scale),
        Err(e) => println!("sin: ERR {e}"),
    }
    let f = RealFunction::new("gauss-growth", |t: f64| (t * t).exp());
    match estimate_exponential_order(&psi, &f, 20.0) {
        Ok(o) => println!("e^(t^2): rate={} scale={}", o.rate, o.scale),
        Err(e) => println!("e^(t^2): ERR {e}"),
    }
    let p2 = PsiFunction::builtin("square", None).unwrap();
    let pc = p2.clone();
    let f = RealFunction::new("exp2psi", move |t| (2.0 * pc.psi(t)).exp());
    match estimate_exponential_order(&p2, &f, 5.0) {
        Ok(o) => println!("e^(2psi): rate={} scale={}", o.rate, o.scale),
        Err(e) => println!("e^(2psi): ERR {e}"),
    }
}
