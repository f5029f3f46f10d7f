//! Finding probabilities of the half-line walk after 500 steps, alternating
//! coins pi/3 and pi/4. Prints the CSV table and a short summary on stderr.
//!
//!     cargo run --example halfline_distribution > halfline_500.csv

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use qwalk::coin::{pi_frac, Protocol};
use qwalk::measure::Component;
use qwalk::walk::{evolve, HalfLineState, Walk};

fn main() -> qwalk::Result<()> {
    let protocol = Protocol::new(pi_frac(1.0, 3.0), pi_frac(1.0, 4.0));
    let start = HalfLineState::localized(Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(0.0, FRAC_1_SQRT_2))?;
    let t = 500;
    let dist = evolve(&protocol, &start, t).distribution();

    println!("x,p0,p1,p_total");
    for (x, p) in dist.iter() {
        println!("{x},{:e},{:e},{:e}", p.p0, p.p1, p.total);
    }

    let (peak, p) = dist
        .iter()
        .max_by(|a, b| a.1.total.total_cmp(&b.1.total))
        .unwrap();
    eprintln!("t = {t}, mass = {:.15}", dist.mass(Component::Total));
    eprintln!("highest peak at x = {peak} (x/t = {:.3}), P = {:.4}", peak as f64 / t as f64, p.total);
    eprintln!(
        "mass beyond x = |cos(pi/4)| t: {:.2e}",
        dist.iter()
            .filter(|&(x, _)| x as f64 > protocol.theta2.cos().abs() * t as f64)
            .map(|(_, p)| p.total)
            .sum::<f64>()
    );
    Ok(())
}
