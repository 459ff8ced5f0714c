//! Curve data for the three r = 10 figures written as CSV into a directory (default `.`).

use twophoton::cli::{cmd_figure, Report};

fn main() {
    let dir = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    for id in 1..=3 {
        let report = cmd_figure(id, 8.0, 801).unwrap();
        let path = dir.join(format!("figure{id}.csv"));
        std::fs::write(&path, report.to_csv()).unwrap();
        if let Report::Curve(c) = &report {
            let (imin, wmin) = c.w.iter().enumerate().fold((0, f64::INFINITY), |b, (i, w)| if w.0 < b.1 { (i, w.0) } else { b });
            let (imax, wmax) = c.w.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, w)| if w.0 > b.1 { (i, w.0) } else { b });
            println!(
                "figure {id}: beta={} W(0)={:+.6} min {wmin:+.6} at x={:.2} max {wmax:+.6} at x={:.2} -> {}",
                c.beta.0, c.w[0].0, c.x[imin].0, c.x[imax].0, path.display()
            );
        }
    }
}
