//! Exact half-line probabilities at t = 500 next to the rescaled limit density
//! for three initial states. The exact values oscillate around the
//! approximation; block averages track it closely.

use qwalk::cli::reference_states;
use qwalk::coin::{pi_frac, Protocol};
use qwalk::limit::{finite_time_approximation, LimitSpec};
use qwalk::measure::Component;
use qwalk::walk::{evolve, HalfLineState, Walk};

fn main() -> qwalk::Result<()> {
    let protocol = Protocol::new(pi_frac(1.0, 3.0), pi_frac(1.0, 4.0));
    let spec = LimitSpec::halfline(&protocol)?;
    let t = 500;
    let window = 16;
    let upper = (0.9 * spec.edge() * t as f64) as i64;

    for (alpha, beta) in reference_states() {
        let dist = evolve(&protocol, &HalfLineState::localized(alpha, beta)?, t).distribution();
        println!("alpha = {alpha}, beta = {beta}");
        println!("{:>8} {:>12} {:>12}", "block", "exact", "approx");
        let mut l1 = 0.0;
        for x0 in (0..upper).step_by(window) {
            let xs = x0..(x0 + window as i64).min(upper + 1);
            let exact: f64 = xs.clone().map(|x| dist.total(x)).sum();
            let approx: f64 = xs
                .map(|x| finite_time_approximation(x, t, Component::Total, &spec))
                .sum::<qwalk::Result<f64>>()?;
            l1 += (exact - approx).abs();
            if x0 % (4 * window as i64) == 0 {
                println!("{:>8} {:>12.6} {:>12.6}", x0, exact, approx);
            }
        }
        println!("block-averaged L1 gap on [0, {upper}]: {l1:.4}\n");
    }
    Ok(())
}
