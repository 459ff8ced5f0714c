//! Phase-averaged even/odd mixtures: odd weight from the weak one-photon limit, Mandel Q,
//! the sub-Poisson threshold, purity.

use twophoton::gf::{paeos_limit, paeos_mandel_q, paeos_mandel_q_weak, paeos_probabilities, paeos_threshold, PaeosLimit};
use twophoton::wigner::purity_paeos;
use twophoton::{DimensionlessParams, PaeosParams};

fn main() {
    let PaeosLimit::Mixture(m) = paeos_limit(DimensionlessParams::new(1e-6, 0.0, 0.0, 1.0).unwrap()).unwrap() else {
        unreachable!()
    };
    println!("r=1, S=0: beta={:.10} (threshold {:.10})", m.beta, paeos_threshold(1.0));

    println!("{:>5} {:>5} {:>12} {:>12}", "r", "S", "beta", "Q_weak");
    for r in [0.5, 2.0, 8.0] {
        for s in [0.0, 1.0, 2.0, 8.0] {
            let PaeosLimit::Mixture(m) = paeos_limit(DimensionlessParams::new(1e-6, 0.0, s, r).unwrap()).unwrap() else {
                continue;
            };
            println!("{r:>5} {s:>5} {:>12.8} {:>+12.8}", m.beta, paeos_mandel_q_weak(r, s).unwrap());
        }
    }

    for beta in [0.0, 0.5, 1.0] {
        let p = PaeosParams::new(beta, 3.0).unwrap();
        let d = paeos_probabilities(&p, 80).unwrap();
        println!("beta={beta}: Q={:+.10} purity={:.10} p0..p3={:.4} {:.4} {:.4} {:.4}", paeos_mandel_q(&p).unwrap(), purity_paeos(&p), d.get(0), d.get(1), d.get(2), d.get(3));
    }
}
