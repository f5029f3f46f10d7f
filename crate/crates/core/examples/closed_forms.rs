//! Closed-form probabilities of the single-coin half-line walk at t = 20
//! against direct simulation, for theta = pi/4 and three initial states.

use qwalk::cli::reference_states;
use qwalk::closedform::{closedform_distribution, Formula};
use qwalk::coin::{pi_frac, Protocol};
use qwalk::walk::{evolve, HalfLineState, Walk};

fn main() -> qwalk::Result<()> {
    let theta = pi_frac(1.0, 4.0);
    let t = 20;
    for (alpha, beta) in reference_states() {
        let exact = closedform_distribution(theta, alpha, beta, t)?;
        let sim = evolve(&Protocol::constant(theta), &HalfLineState::localized(alpha, beta)?, t).distribution();
        println!("alpha = {alpha}, beta = {beta}");
        let mut worst: f64 = 0.0;
        for x in 0..=t {
            let (pc, ps) = (exact.total(x as i64), sim.total(x as i64));
            worst = worst.max((pc - ps).abs());
            println!("{x:>3} {pc:.12} {ps:.12} {}", Formula::for_site(t, x).label());
        }
        println!("max |closed form - simulation| = {worst:.2e}\n");
    }
    Ok(())
}
