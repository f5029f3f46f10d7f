//! Kolmogorov distance between the rescaled half-line distribution and its
//! limit law along a schedule of times.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use qwalk::cli::{converge_rows, DEFAULT_TIMES};
use qwalk::coin::{pi_frac, Protocol};

fn main() -> qwalk::Result<()> {
    let protocol = Protocol::new(pi_frac(1.0, 3.0), pi_frac(1.0, 4.0));
    let rows = converge_rows(
        &protocol,
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, FRAC_1_SQRT_2),
        &DEFAULT_TIMES,
    )?;
    println!("t,component,kolmogorov,init_pair_tv");
    for r in rows {
        println!("{},{},{:.6},{:.6}", r.t, r.component, r.kolmogorov, r.init_pair_tv);
    }
    Ok(())
}
