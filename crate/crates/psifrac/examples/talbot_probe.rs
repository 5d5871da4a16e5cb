use num_complex::Complex64;
use psifrac::contour::talbot_invert;

fn main() {
    let cases: Vec<(&str, Box<dyn Fn(Complex64) -> Complex64>, f64, f64, f64)> = vec![
        ("pole t=0.3", Box::new(|s: Complex64| 1.0/(s-1.0)), 0.3, 1.5, 0.3f64.exp()),
        ("pole t=2.5", Box::new(|s: Complex64| 1.0/(s-1.0)), 2.5, 1.5, 2.5f64.exp()),
        ("sqrt t=0.8", Box::new(|s: Complex64| s.powf(-0.5)), 0.8, 0.5, 1.0/(std::f64::consts::PI*0.8).sqrt()),
        ("sqrt t=0.8 shift0.1", Box::new(|s: Complex64| s.powf(-0.5)), 0.8, 0.1, 1.0/(std::f64::consts::PI*0.8).sqrt()),
        ("power3 t=0.1", Box::new(|s: Complex64| 2.0/(s*s*s)), 0.1, 0.5, 0.01),
        ("ml-ish", Box::new(|s: Complex64| s.powf(-0.5)/(s.powf(0.5)-0.25)), 1.0, 0.5+0.0625, 0.0),
    ];
    for (name, f, x, shift, expect) in cases {
        print!("{name}: ");
        for m in [24usize, 32, 48, 64, 96, 128] {
            let out = talbot_invert(&*f, x, m, shift).unwrap();
            let err = (out.value.re - expect).abs();
            print!("M={m}: {:.2e} (est {:.1e})  ", err, out.est_error);
        }
        println!();
    }
}
