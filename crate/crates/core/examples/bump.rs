//! The bump weight `exp(1 - 1/(4t(1-t)))`: integral and Fourier decay.

use apvar::circle::BumpFunction;

fn main() {
    let bump = BumpFunction::new();
    println!("J = {:.15}", bump.integral());
    println!("xi,|phi_hat|,(1+|xi|)^3 |phi_hat|");
    for xi in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0] {
        let v = bump.fourier_transform(xi).norm();
        println!("{xi},{v:.6e},{:.6}", v * (1.0 + xi).powi(3));
    }
}
