//! The spread of the half-line walk is set by the coin with the smaller
//! |cos theta|. Sweeps theta1 with theta2 = pi/4 at t = 1000.

use qwalk::cli::reference_states;
use qwalk::coin::{pi_frac, CoinAngle, Protocol};
use qwalk::limit::select_xi;
use qwalk::measure::Distribution;
use qwalk::walk::{evolve, HalfLineState, Walk};

fn edge(d: &Distribution) -> f64 {
    let mut tail = 0.0;
    for x in (0..=d.xmax()).rev() {
        tail += d.total(x);
        if tail >= 1e-3 {
            return x as f64 / d.time() as f64;
        }
    }
    0.0
}

fn main() -> qwalk::Result<()> {
    let theta2 = pi_frac(1.0, 4.0);
    let (alpha, beta) = reference_states()[2];
    let start = HalfLineState::localized(alpha, beta)?;
    println!("theta1,xi,predicted_edge,observed_edge");
    for k in 1..12 {
        let theta1 = CoinAngle::new(k as f64 * 0.13)?;
        let d = evolve(&Protocol::new(theta1, theta2), &start, 1000).distribution();
        let predicted = theta1.cos().abs().min(theta2.cos().abs());
        println!("{:.2},{},{predicted:.4},{:.4}", theta1.radians(), select_xi(theta1, theta2), edge(&d));
    }
    Ok(())
}
