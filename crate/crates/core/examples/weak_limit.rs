//! Limit densities of X_t / t (half line) and Y_t / t (line), with component
//! masses from the quadrature.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use qwalk::coin::{pi_frac, Protocol};
use qwalk::limit::{component_mass, limit_cdf, limit_density, LimitSpec, LineCoefficients, WalkKind};
use qwalk::measure::Component;

fn main() -> qwalk::Result<()> {
    let protocol = Protocol::new(pi_frac(1.0, 3.0), pi_frac(1.0, 4.0));
    let half = LimitSpec::halfline(&protocol)?;
    let coeffs = LineCoefficients::from_localized(Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(0.0, FRAC_1_SQRT_2));
    let line = LimitSpec::line(&protocol, &coeffs)?;

    println!("xi = {}, support edge = {:.6}, eta slope = {:.6}", half.xi, half.edge(), line.eta_slope);
    for (name, spec, which) in [("half line", &half, WalkKind::Halfline), ("line", &line, WalkKind::Line)] {
        let masses: Vec<String> = Component::ALL
            .iter()
            .map(|&c| format!("{c} {:.10}", component_mass(c, spec, which)))
            .collect();
        println!("{name}: {}", masses.join(", "));
    }

    println!("\ny,f_half,F_half,f_line,F_line");
    let a = half.edge();
    for i in 0..=40 {
        let y = -a + 2.0 * a * i as f64 / 40.0 * 0.999;
        println!(
            "{y:.4},{:.6},{:.6},{:.6},{:.6}",
            limit_density(y, Component::Total, &half, WalkKind::Halfline),
            limit_cdf(y, Component::Total, &half, WalkKind::Halfline),
            limit_density(y, Component::Total, &line, WalkKind::Line),
            limit_cdf(y, Component::Total, &line, WalkKind::Line)
        );
    }
    Ok(())
}
