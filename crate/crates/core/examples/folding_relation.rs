//! P(X_t = x) = P(Z_t = -x-1) + P(Z_t = x) for the single-coin walks started
//! at the origin, with one of the two line terms always zero.

use qwalk::cli::reference_states;
use qwalk::closedform::folding_relation_check;
use qwalk::coin::pi_frac;

fn main() -> qwalk::Result<()> {
    let theta = pi_frac(1.0, 4.0);
    for (alpha, beta) in reference_states() {
        let mut worst: f64 = 0.0;
        let mut parity = true;
        for t in 1..=200 {
            let r = folding_relation_check(theta, alpha, beta, t)?;
            worst = worst.max(r.max_residual);
            parity &= r.one_term_zero;
        }
        println!("alpha = {alpha}, beta = {beta}: max residual {worst:.2e}, one term zero: {parity}");
    }
    Ok(())
}
