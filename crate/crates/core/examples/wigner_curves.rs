//! Radial Wigner function of a mixture by three independent routes.

use twophoton::gf::paeos_probabilities;
use twophoton::rates::Parity;
use twophoton::wigner::{phase_average, radial_normalization, wigner_mixture_radial, wigner_paeos_radial, PHASE_NODES};
use twophoton::PaeosParams;

fn main() {
    let r = 5.0;
    let p = PaeosParams::new(0.0, r).unwrap();
    let probs = paeos_probabilities(&p, 80).unwrap();
    println!("{:>5} {:>22} {:>22} {:>22}", "x", "closed", "Laguerre sum", "phase average");
    for i in 0..=12 {
        let x = 0.5 * i as f64;
        println!(
            "{x:>5.2} {:>+22.15e} {:>+22.15e} {:>+22.15e}",
            wigner_paeos_radial(&p, x),
            wigner_mixture_radial(&probs, x),
            phase_average(r, Parity::Even, x, 0.0, PHASE_NODES).unwrap()
        );
    }
    let norm = radial_normalization(|x| wigner_paeos_radial(&p, x), 14.0, 4000);
    println!("integral of W(x) x dx = {norm:.12}");
}
