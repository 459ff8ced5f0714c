//! Kummer's function, scaled Bessel functions and Laguerre polynomials.

use twophoton::specfun::{bessel_i0_scaled, bessel_j0, kummer_phi, kummer_phi_log, laguerre};

fn main() {
    println!("Phi(0.5; 1; 2)     = {:.15}", kummer_phi(0.5, 1.0, 2.0).unwrap());
    println!("Phi(1; 1; 3) - e^3 = {:.3e}", kummer_phi(1.0, 1.0, 3.0).unwrap() - 3f64.exp());

    // far past f64 range; only the log-scaled form survives
    let big = kummer_phi_log(0.5, 2.0, 2000.0).unwrap();
    println!("ln Phi(0.5; 2; 2000) = {:.12}  (mantissa {:.6}, 2^{})", big.ln(), big.mantissa(), big.exponent());

    for x in [0.0, 1.0, 2.404825557695773, 10.0, 40.0] {
        println!("x={x:<18} J0={:+.15e}  e^-x I0={:.15e}", bessel_j0(x), bessel_i0_scaled(x));
    }
    println!("L_5(3.7) = {:.15}", laguerre(5, 3.7));
}
