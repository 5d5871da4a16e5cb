use num_complex::Complex64;
use psifrac::contour::talbot_invert;

fn main() {
    // E_{1.3,1}(-20) image: s^{0.3}/(s^{1.3}+20), reference value frozen
    let truth = -0.011841120110029620f64;
    let image = |s: Complex64| s.powf(1.3 - 1.0) / (s.powf(1.3) + 20.0);
    for shift in [0.5, 1.0, 2.0, 4.0, 8.0] {
        print!("shift {shift}: ");
        for n in [24usize, 32, 40, 56, 72] {
            match talbot_invert(&image, 1.0, n, shift) {
                Ok(out) => print!("N={n}: err {:.1e} est {:.1e}  ", (out.value.re - truth).abs(), out.est_error),
                Err(e) => print!("N={n}: {e}  "),
            }
        }
        println!();
    }
}
