//! Weak-limit densities of `position / t` for both walks, their CDFs, and the
//! finite-time approximations to the half-line finding probabilities.
//!
//! Only the coin with the smaller `|cos(theta)|` (index `xi`) enters the limit.
//! The densities carry inverse-square-root singularities at `+-|c_xi|`; CDFs are
//! computed after substituting `y = |c_xi| sin(phi)`, which turns the integrand
//! into a smooth function of `phi`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coin::{CoinAngle, Protocol};
use crate::error::{Result, WalkError};
use crate::measure::Component;
use crate::quadrature;

/// Convergence target for successive quadrature estimates.
pub const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Line,
    #[serde(alias = "half-line")]
    Halfline,
}

/// `|cos|` values closer than this count as a tie.
pub const XI_TIE_TOL: f64 = 1e-12;

/// Index (1 or 2) of the coin with the smaller `|cos(theta)|`; ties go to 1.
pub fn select_xi(theta1: CoinAngle, theta2: CoinAngle) -> u8 {
    if theta2.cos().abs() < theta1.cos().abs() - XI_TIE_TOL {
        2
    } else {
        1
    }
}

/// Coefficients of a line state supported on `{-1, 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineCoefficients {
    pub alpha_m1: Complex64,
    pub beta_m1: Complex64,
    pub alpha_0: Complex64,
    pub beta_0: Complex64,
}

impl LineCoefficients {
    /// The delocalized start paired with the half-line walk from `alpha|0> + beta|1>`.
    pub fn from_localized(alpha: Complex64, beta: Complex64) -> Self {
        let r = |v: f64| Complex64::new(v, 0.0);
        LineCoefficients {
            alpha_m1: r(beta.im),
            beta_m1: r(-alpha.im),
            alpha_0: r(alpha.re),
            beta_0: r(beta.re),
        }
    }
}

/// Slope `k` in `eta(y) = 1 - k y`.
pub fn eta_slope(coeffs: &LineCoefficients, theta1: CoinAngle) -> Result<f64> {
    let (c1, s1) = (theta1.cos(), theta1.sin());
    if c1.abs() < crate::coin::DEGENERATE_TOL {
        return Err(WalkError::DegenerateAngle {
            theta: theta1.radians(),
        });
    }
    let LineCoefficients {
        alpha_m1,
        beta_m1,
        alpha_0,
        beta_0,
    } = *coeffs;
    let imbalance = alpha_m1.norm_sqr() + alpha_0.norm_sqr() - beta_m1.norm_sqr() - beta_0.norm_sqr();
    let cross = (alpha_m1 * beta_m1.conj() + alpha_0 * beta_0.conj()).re;
    Ok(imbalance + 2.0 * s1 * cross / c1)
}

/// Asymmetry factor of the line limit density.
pub fn eta(y: f64, coeffs: &LineCoefficients, theta1: CoinAngle) -> Result<f64> {
    Ok(1.0 - eta_slope(coeffs, theta1)? * y)
}

/// `Re(alpha^2 - beta^2 + (2 s1 / c1) alpha beta)`: the slope for the
/// delocalized start built from `(alpha, beta)`, written in terms of the
/// half-line coefficients.
pub fn eta_slope_localized(alpha: Complex64, beta: Complex64, theta1: CoinAngle) -> Result<f64> {
    let (c1, s1) = (theta1.cos(), theta1.sin());
    if c1.abs() < crate::coin::DEGENERATE_TOL {
        return Err(WalkError::DegenerateAngle {
            theta: theta1.radians(),
        });
    }
    Ok((alpha * alpha - beta * beta + alpha * beta * (2.0 * s1 / c1)).re)
}

/// Parameters of a limit density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSpec {
    pub xi: u8,
    /// `cos(theta_xi)`, signed.
    pub c_xi: f64,
    /// `sin(theta_xi)`, signed.
    pub s_xi: f64,
    /// Only used by the line densities.
    pub eta_slope: f64,
}

impl LimitSpec {
    fn from_protocol(protocol: &Protocol, eta_slope: f64) -> Result<Self> {
        protocol.theta1.require_nondegenerate()?;
        protocol.theta2.require_nondegenerate()?;
        let xi = select_xi(protocol.theta1, protocol.theta2);
        let theta = if xi == 1 { protocol.theta1 } else { protocol.theta2 };
        Ok(LimitSpec {
            xi,
            c_xi: theta.cos(),
            s_xi: theta.sin(),
            eta_slope,
        })
    }

    /// Spec for the half-line limit, which does not depend on the initial state.
    pub fn halfline(protocol: &Protocol) -> Result<Self> {
        Self::from_protocol(protocol, 0.0)
    }

    pub fn line(protocol: &Protocol, coeffs: &LineCoefficients) -> Result<Self> {
        Self::from_protocol(protocol, eta_slope(coeffs, protocol.theta1)?)
    }

    /// `|c_xi|`, the right edge of the support.
    pub fn edge(&self) -> f64 {
        self.c_xi.abs()
    }

    pub fn eta(&self, y: f64) -> f64 {
        1.0 - self.eta_slope * y
    }

    /// Lower end of the support for the given walk.
    pub fn lower(&self, which: WalkKind) -> f64 {
        match which {
            WalkKind::Line => -self.edge(),
            WalkKind::Halfline => 0.0,
        }
    }
}

// Component weights w(y) such that density = |s| w(y) / (pi sqrt(c^2 - y^2)).
// The total weight 1 / (1 - y^2) is taken as the sum of the other two so the
// decomposition holds exactly in floating point.
fn line_weight(y: f64, component: Component) -> f64 {
    match component {
        Component::Inner0 => 0.5 / (1.0 + y),
        Component::Inner1 => 0.5 / (1.0 - y),
        Component::Total => line_weight(y, Component::Inner0) + line_weight(y, Component::Inner1),
    }
}

fn with_components(component: Component, f: impl Fn(Component) -> f64) -> f64 {
    match component {
        Component::Total => f(Component::Inner0) + f(Component::Inner1),
        c => f(c),
    }
}

/// Limit density of `Y_t / t` for the line walk; zero outside `(-|c_xi|, |c_xi|)`.
pub fn line_limit_density(y: f64, component: Component, spec: &LimitSpec) -> f64 {
    let a = spec.edge();
    if y.abs() >= a {
        return 0.0;
    }
    let scale = spec.s_xi.abs() * spec.eta(y) / (PI * (a * a - y * y).sqrt());
    with_components(component, |c| scale * line_weight(y, c))
}

/// Limit density of `X_t / t` for the half-line walk; zero outside `[0, |c_xi|)`.
/// Depends on the protocol only.
pub fn halfline_limit_density(y: f64, component: Component, spec: &LimitSpec) -> f64 {
    let a = spec.edge();
    if !(0.0..a).contains(&y) {
        return 0.0;
    }
    let scale = spec.s_xi.abs() / (PI * (a * a - y * y).sqrt());
    with_components(component, |c| scale * 2.0 * line_weight(y, c))
}

pub fn limit_density(y: f64, component: Component, spec: &LimitSpec, which: WalkKind) -> f64 {
    match which {
        WalkKind::Line => line_limit_density(y, component, spec),
        WalkKind::Halfline => halfline_limit_density(y, component, spec),
    }
}

/// `P(position / t <= x)` in the limit.
pub fn limit_cdf(x: f64, component: Component, spec: &LimitSpec, which: WalkKind) -> f64 {
    let a = spec.edge();
    let lower = spec.lower(which);
    if x <= lower {
        return 0.0;
    }
    let phi_hi = (x.min(a) / a).asin();
    let phi_lo = match which {
        WalkKind::Line => -FRAC_PI_2,
        WalkKind::Halfline => 0.0,
    };
    let s = spec.s_xi.abs();
    // with y = a sin(phi), dy / sqrt(a^2 - y^2) = dphi
    let integrand = |phi: f64| {
        let y = a * phi.sin();
        match which {
            WalkKind::Line => s * spec.eta(y) * line_weight(y, component) / PI,
            WalkKind::Halfline => s * 2.0 * line_weight(y, component) / PI,
        }
    };
    quadrature::integrate(integrand, phi_lo, phi_hi, QUADRATURE_TOL)
}

/// Limit mass carried by one component.
pub fn component_mass(component: Component, spec: &LimitSpec, which: WalkKind) -> f64 {
    limit_cdf(spec.edge(), component, spec, which)
}

/// Approximate half-line finding probability at integer `x` and time `t`,
/// i.e. `halfline_limit_density(x / t) / t`. Zero for `x` outside `[0, |c_xi| t)`.
pub fn finite_time_approximation(x: i64, t: usize, component: Component, spec: &LimitSpec) -> Result<f64> {
    if t == 0 {
        return Err(WalkError::DegenerateTime);
    }
    let (x, t) = (x as f64, t as f64);
    let ct = spec.edge() * t;
    if x < 0.0 || x >= ct {
        return Ok(0.0);
    }
    let s = spec.s_xi.abs();
    let root = (ct * ct - x * x).sqrt();
    Ok(match component {
        Component::Inner0 => s * t / (PI * (t + x) * root),
        Component::Inner1 => s * t / (PI * (t - x) * root),
        Component::Total => 2.0 * s * t * t / (PI * (t * t - x * x) * root),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::pi_frac;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fig_protocol() -> Protocol {
        Protocol::new(pi_frac(1.0, 3.0), pi_frac(1.0, 4.0))
    }

    /// `int dphi / (1 + a sin(phi))` over `[p0, p1]` inside `(-pi, pi)`, via the
    /// half-angle substitution.
    fn inv_one_plus_a_sin(a: f64, p0: f64, p1: f64) -> f64 {
        let b = (1.0 - a * a).sqrt();
        let f = |p: f64| 2.0 / b * (((p / 2.0).tan() + a) / b).atan();
        f(p1) - f(p0)
    }

    /// Closed-form half-line CDF of each component.
    fn halfline_cdf_oracle(x: f64, component: Component, spec: &LimitSpec) -> f64 {
        let a = spec.edge();
        if x <= 0.0 {
            return 0.0;
        }
        let p = (x.min(a) / a).asin();
        let s = spec.s_xi.abs() / PI;
        let i0 = inv_one_plus_a_sin(a, 0.0, p);
        let i1 = inv_one_plus_a_sin(-a, 0.0, p);
        match component {
            Component::Inner0 => s * i0,
            Component::Inner1 => s * i1,
            Component::Total => s * (i0 + i1),
        }
    }

    #[test]
    fn xi_selection() {
        assert_eq!(select_xi(pi_frac(1.0, 3.0), pi_frac(1.0, 4.0)), 1);
        assert_eq!(select_xi(pi_frac(1.0, 4.0), pi_frac(1.0, 3.0)), 2);
        assert_eq!(select_xi(pi_frac(1.0, 4.0), pi_frac(3.0, 4.0)), 1);
    }

    #[test]
    fn eta_values() {
        let theta1 = pi_frac(1.0, 3.0);
        let k = LineCoefficients::from_localized(c(0.3, -0.4), c(0.5, 0.7));
        assert_eq!(eta(0.0, &k, theta1).unwrap(), 1.0);

        let (alpha, beta) = (c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2));
        let k = LineCoefficients::from_localized(alpha, beta);
        assert!((eta_slope(&k, theta1).unwrap() - 1.0).abs() < 1e-15);
        assert!((eta_slope_localized(alpha, beta, theta1).unwrap() - 1.0).abs() < 1e-15);
        assert!((eta(0.3, &k, theta1).unwrap() - 0.7).abs() < 1e-15);

        let k = LineCoefficients::from_localized(c(1.0, 0.0), c(0.0, 0.0));
        assert!((eta_slope(&k, theta1).unwrap() - 1.0).abs() < 1e-15);

        assert!(matches!(
            eta(0.1, &k, pi_frac(1.0, 2.0)),
            Err(WalkError::DegenerateAngle { .. })
        ));
    }

    #[test]
    fn general_and_specialized_slopes_agree() {
        let theta1 = CoinAngle::new(2.2).unwrap();
        for (alpha, beta) in [
            (c(0.6, 0.0), c(0.0, 0.8)),
            (c(0.1, -0.7), c(0.5, 0.5)),
            (c(-0.3, 0.4), c(0.6, -0.624_499_799_839_839_8)),
        ] {
            let k = LineCoefficients::from_localized(alpha, beta);
            let general = eta_slope(&k, theta1).unwrap();
            let special = eta_slope_localized(alpha, beta, theta1).unwrap();
            assert!((general - special).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_angles_rejected() {
        for k in 0..4 {
            let p = Protocol::new(pi_frac(k as f64, 2.0), pi_frac(1.0, 4.0));
            assert!(matches!(LimitSpec::halfline(&p), Err(WalkError::DegenerateAngle { .. })));
            let p = Protocol::new(pi_frac(1.0, 4.0), pi_frac(k as f64, 2.0));
            assert!(LimitSpec::halfline(&p).is_err());
        }
    }

    #[test]
    fn densities_vanish_off_support() {
        let spec = LimitSpec::halfline(&fig_protocol()).unwrap();
        assert!((spec.edge() - 0.5).abs() < 1e-15);
        for comp in Component::ALL {
            assert_eq!(halfline_limit_density(-0.1, comp, &spec), 0.0);
            assert_eq!(halfline_limit_density(spec.edge(), comp, &spec), 0.0);
            assert_eq!(line_limit_density(-spec.edge(), comp, &spec), 0.0);
            assert_eq!(line_limit_density(0.6, comp, &spec), 0.0);
        }
    }

    #[test]
    fn densities_at_origin_for_quarter_pi() {
        let p = Protocol::constant(CoinAngle::new(FRAC_PI_4).unwrap());
        let spec = LimitSpec::halfline(&p).unwrap();
        assert!((line_limit_density(0.0, Component::Total, &spec) - 1.0 / PI).abs() < 1e-15);
        assert!((halfline_limit_density(0.0, Component::Total, &spec) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn components_sum_to_total() {
        let p = fig_protocol();
        let k = LineCoefficients::from_localized(c(0.6, 0.0), c(0.0, 0.8));
        let spec = LimitSpec::line(&p, &k).unwrap();
        for i in 0..200 {
            let y = -0.55 + 1.1 * i as f64 / 199.0;
            for which in [WalkKind::Line, WalkKind::Halfline] {
                let f = |comp| limit_density(y, comp, &spec, which);
                let sum = f(Component::Inner0) + f(Component::Inner1);
                assert!((sum - f(Component::Total)).abs() <= 1e-14 * f(Component::Total).max(1.0));
            }
        }
    }

    #[test]
    fn line_density_even_without_asymmetry() {
        let spec = LimitSpec {
            eta_slope: 0.0,
            ..LimitSpec::halfline(&fig_protocol()).unwrap()
        };
        for y in [0.05, 0.2, 0.33, 0.49] {
            let f = |y| line_limit_density(y, Component::Total, &spec);
            assert!((f(y) - f(-y)).abs() < 1e-14);
        }
    }

    #[test]
    fn halfline_cdf_matches_closed_form() {
        for p in [fig_protocol(), Protocol::constant(pi_frac(1.0, 4.0)), Protocol::new(pi_frac(5.0, 6.0), pi_frac(7.0, 5.0))] {
            let spec = LimitSpec::halfline(&p).unwrap();
            for i in 0..=40 {
                let x = -0.1 + (spec.edge() + 0.2) * i as f64 / 40.0;
                for comp in Component::ALL {
                    let got = limit_cdf(x, comp, &spec, WalkKind::Halfline);
                    let want = halfline_cdf_oracle(x, comp, &spec);
                    assert!((got - want).abs() < 1e-9, "x={x} comp={comp} {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn line_cdf_total_mass_is_one() {
        let p = fig_protocol();
        for (alpha, beta) in [(c(1.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.6), c(0.8, 0.0))] {
            let spec = LimitSpec::line(&p, &LineCoefficients::from_localized(alpha, beta)).unwrap();
            assert_eq!(limit_cdf(-spec.edge(), Component::Total, &spec, WalkKind::Line), 0.0);
            let m = component_mass(Component::Total, &spec, WalkKind::Line);
            assert!((m - 1.0).abs() < 1e-8, "{m}");
        }
    }

    #[test]
    fn halfline_cdf_monotone() {
        let spec = LimitSpec::halfline(&Protocol::constant(pi_frac(1.0, 4.0))).unwrap();
        let mid = limit_cdf(spec.edge() / 2.0, Component::Total, &spec, WalkKind::Halfline);
        assert!(mid > 0.0 && mid < 1.0);
        let vals: Vec<f64> = (0..100)
            .map(|i| limit_cdf(spec.edge() * i as f64 / 99.0, Component::Total, &spec, WalkKind::Halfline))
            .collect();
        assert!(vals.windows(2).all(|w| w[1] >= w[0]));
        assert!((vals[99] - 1.0).abs() < 1e-8);
        assert!((limit_cdf(2.0, Component::Total, &spec, WalkKind::Halfline) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn approximation_is_rescaled_density() {
        let spec = LimitSpec::halfline(&fig_protocol()).unwrap();
        let t = 500;
        for x in [0, 1, 17, 100, 200, 240, 251, 400] {
            for comp in Component::ALL {
                let a = finite_time_approximation(x, t, comp, &spec).unwrap();
                let d = halfline_limit_density(x as f64 / t as f64, comp, &spec) / t as f64;
                assert!((a - d).abs() <= 1e-12 * d.max(1e-300), "x={x} {a} {d}");
            }
        }
        assert_eq!(finite_time_approximation(251, 500, Component::Total, &spec).unwrap(), 0.0);
        assert_eq!(finite_time_approximation(-1, 500, Component::Total, &spec).unwrap(), 0.0);
        assert_eq!(finite_time_approximation(3, 0, Component::Total, &spec), Err(WalkError::DegenerateTime));
    }

    #[test]
    fn halfline_density_ignores_angle_order() {
        let a = LimitSpec::halfline(&fig_protocol()).unwrap();
        let b = LimitSpec::halfline(&Protocol::new(pi_frac(1.0, 4.0), pi_frac(1.0, 3.0))).unwrap();
        for i in 0..50 {
            let y = 0.5 * i as f64 / 50.0;
            for comp in Component::ALL {
                assert_eq!(halfline_limit_density(y, comp, &a), halfline_limit_density(y, comp, &b));
            }
        }
    }
}
