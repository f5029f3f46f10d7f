//! The line walk from the two-site start built out of (alpha, beta). Its
//! amplitudes stay real, and folding x with -x-1 gives the half-line law.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use qwalk::coin::{pi_frac, Protocol};
use qwalk::correspond::{halfline_dist_from_line, max_probability_residual};
use qwalk::walk::{trajectory, HalfLineState, LineState, Walk};

fn main() -> qwalk::Result<()> {
    let protocol = Protocol::new(pi_frac(1.0, 3.0), pi_frac(1.0, 4.0));
    let (alpha, beta) = (Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(0.0, FRAC_1_SQRT_2));

    let line = trajectory(&protocol, LineState::delocalized(alpha, beta)?);
    let half = trajectory(&protocol, HalfLineState::localized(alpha, beta)?);

    println!("{:>5} {:>6} {:>6} {:>12} {:>12}", "t", "xmin", "xmax", "max |Im|", "fold resid");
    for (l, h) in line.zip(half).take(501).filter(|(l, _)| l.time() % 100 == 0) {
        let folded = halfline_dist_from_line(&l.distribution());
        println!(
            "{:>5} {:>6} {:>6} {:>12.3e} {:>12.3e}",
            l.time(),
            l.xmin(),
            l.xmax(),
            l.max_imag(),
            max_probability_residual(&folded, &h.distribution())
        );
    }
    Ok(())
}
