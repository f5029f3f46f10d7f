//! Amplitude-level correspondence between the line walk and the half-line walk,
//! for the reference case and a few random protocols.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use qwalk::cli::random_case;
use qwalk::coin::{pi_frac, Protocol};
use qwalk::correspond::verify_lemma1;

fn main() -> qwalk::Result<()> {
    let mut cases = vec![(
        Protocol::new(pi_frac(1.0, 3.0), pi_frac(1.0, 4.0)),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, FRAC_1_SQRT_2),
    )];
    cases.extend((1..=5).map(random_case));
    // excluded angles are fine here
    cases.push((Protocol::new(pi_frac(1.0, 2.0), pi_frac(0.0, 1.0)), Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)));

    println!("theta1,theta2,max_amp_residual,max_prob_residual,max_line_imag");
    for (protocol, alpha, beta) in cases {
        let r = verify_lemma1(&protocol, alpha, beta, 200)?;
        println!(
            "{:.6},{:.6},{:e},{:e},{:e}",
            protocol.theta1.radians(),
            protocol.theta2.radians(),
            r.max_amp_residual,
            r.max_prob_residual,
            r.max_line_imag
        );
    }
    Ok(())
}
