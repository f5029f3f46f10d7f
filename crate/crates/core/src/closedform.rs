//! Exact finding probabilities of the time-independent half-line walk
//! (`theta1 == theta2`) and the half-line/line folding relation.
//!
//! For `x = t - 2m` and `x = t - 2m - 1` with `m >= 1` the probability is a
//! double sum over `1 <= j1, j2 <= m` of alternating terms; the two sites
//! nearest the front (`x = t` and `x = t - 1`) have single-term expressions.

use num_complex::Complex64;
use serde::Serialize;

use crate::coin::{CoinAngle, Protocol};
use crate::error::{Result, WalkError};
use crate::measure::Distribution;
use crate::walk::{evolve, HalfLineState, LineState, Walk, NORM_TOL};

/// Beyond this time binomial weights are assembled in log space. Up to it the
/// binomials are exact 128-bit integers, which keeps the weights accurate to a
/// few ulps; log-space weights lose about `|ln w|` ulps each.
pub const LOG_SPACE_THRESHOLD: usize = 120;

/// A single closed-form evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormQuery {
    pub theta: CoinAngle,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub t: usize,
    pub x: i64,
}

impl ClosedFormQuery {
    pub fn validate(&self) -> Result<()> {
        self.theta.require_nondegenerate()?;
        let norm_sqr = self.alpha.norm_sqr() + self.beta.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(WalkError::Norm { norm_sqr });
        }
        if self.t == 0 || self.x < 0 || self.x > self.t as i64 {
            return Err(WalkError::Domain { x: self.x, t: self.t });
        }
        Ok(())
    }
}

/// Which expression covers a site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    /// `x = t`: `c^{2(t-1)} |s alpha - c beta|^2`.
    Front,
    /// `x = t - 1`: `c^{2(t-1)} |c alpha + s beta|^2`. The source prints this
    /// site as `x = -t`, which cannot occur on the half line; the folding
    /// relation maps `-x - 1 = -t` to `x = t - 1`.
    BehindFront,
    /// `x = t - 2m`, `m >= 1`.
    EvenGap { m: usize },
    /// `x = t - 2m - 1`, `m >= 1`.
    OddGap { m: usize },
}

impl Formula {
    pub fn for_site(t: usize, x: usize) -> Formula {
        debug_assert!(x <= t);
        let gap = t - x;
        match gap {
            0 => Formula::Front,
            1 => Formula::BehindFront,
            g if g % 2 == 0 => Formula::EvenGap { m: g / 2 },
            g => Formula::OddGap { m: (g - 1) / 2 },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Formula::Front => "front",
            Formula::BehindFront => "behind_front[read as x=t-1]",
            Formula::EvenGap { .. } => "even_gap_double_sum",
            Formula::OddGap { .. } => "odd_gap_double_sum",
        }
    }
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let s = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - s) + v;
        } else {
            self.carry += (v - s) + self.sum;
        }
        self.sum = s;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Exact binomial coefficient as f64 (exact for the small arguments used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

/// Table of `ln(n!)` for `n < len`.
#[derive(Debug, Clone)]
pub struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn new(len: usize) -> Self {
        let mut v = Vec::with_capacity(len.max(1));
        let mut acc = CompensatedSum::default();
        v.push(0.0);
        for n in 1..len {
            acc.add((n as f64).ln());
            v.push(acc.value());
        }
        LnFactorials(v)
    }

    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        debug_assert!(k <= n);
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

/// Signed factors `w_j = |c|^{t-1} (-s^2/c^2)^j C(m-1,j-1) C(t-m-1,j-1) / j`,
/// `j = 1..=m`. The double-sum weight for `(j1, j2)` is `w_j1 w_j2`.
fn weights(t: usize, m: usize, c: f64, s: f64, ln_fact: Option<&LnFactorials>) -> Vec<f64> {
    let ratio = (s * s) / (c * c);
    let sign = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    match ln_fact {
        Some(lf) => {
            let (ln_ratio, ln_pre) = (ratio.ln(), (t - 1) as f64 * c.abs().ln());
            (1..=m)
                .map(|j| {
                    let ln_w = ln_pre + j as f64 * ln_ratio + lf.ln_binomial(m - 1, j - 1)
                        + lf.ln_binomial(t - m - 1, j - 1)
                        - (j as f64).ln();
                    sign(j) * ln_w.exp()
                })
                .collect()
        }
        None => {
            let pre = c.abs().powi((t - 1) as i32);
            let w: Vec<f64> = (1..=m)
                .map(|j| sign(j) * pre * ratio.powi(j as i32) * binomial(m - 1, j - 1) * binomial(t - m - 1, j - 1) / j as f64)
                .collect();
            if w.iter().all(|v| v.is_finite()) {
                w
            } else {
                weights(t, m, c, s, Some(&LnFactorials::new(t + 1)))
            }
        }
    }
}

/// The bracket of the double sum is `A + B (j1 + j2) + D j1 j2`, so the sum
/// factors as `A S0^2 + 2 B S0 S1 + D S1^2` with `S0 = sum w_j`, `S1 = sum j w_j`.
fn double_sum(q: &ClosedFormQuery, m: usize, odd: bool, ln_fact: Option<&LnFactorials>) -> f64 {
    let (c, s) = (q.theta.cos(), q.theta.sin());
    let (t, mf) = (q.t as f64, m as f64);
    let tm = t - mf;
    let (a2, b2) = (q.alpha.norm_sqr(), q.beta.norm_sqr());
    let re_ab = (q.alpha * q.beta.conj()).re;
    let w = weights(q.t, m, c, s, ln_fact);
    let s0: CompensatedSum = w.iter().copied().collect();
    let s1: CompensatedSum = w.iter().enumerate().map(|(i, w)| (i + 1) as f64 * w).collect();
    let (s0, s1) = (s0.value(), s1.value());

    let (s2, cs) = (s * s, c * s);
    let ku = mf * mf * c * c + tm * tm * s2;
    let kv = mf * mf * s2 + tm * tm * c * c;
    let kc = 2.0 * t * (2.0 * mf - t) * s2 * cs * re_ab;
    let lc = (t - 2.0 * mf) * cs * re_ab;
    let (a, b) = if odd {
        (kv * a2 + ku * b2 - kc / s2, -mf * a2 - tm * b2 - lc / s2)
    } else {
        (ku * a2 + kv * b2 + kc / s2, -tm * a2 - mf * b2 + lc / s2)
    };
    let d = 1.0 / s2;
    let terms = [a * s0 * s0, 2.0 * b * s0 * s1, d * s1 * s1];
    terms.into_iter().collect::<CompensatedSum>().value()
}

fn evaluate(q: &ClosedFormQuery, ln_fact: Option<&LnFactorials>) -> f64 {
    let (c, s) = (q.theta.cos(), q.theta.sin());
    let front = (c * c).powi(q.t as i32 - 1);
    match Formula::for_site(q.t, q.x as usize) {
        Formula::Front => front * (q.alpha * s - q.beta * c).norm_sqr(),
        Formula::BehindFront => front * (q.alpha * c + q.beta * s).norm_sqr(),
        Formula::EvenGap { m } => double_sum(q, m, false, ln_fact),
        Formula::OddGap { m } => double_sum(q, m, true, ln_fact),
    }
}

/// `P(X_t = x)` for the time-independent half-line walk with coin angle `theta`.
pub fn exact_probability(q: &ClosedFormQuery) -> Result<f64> {
    q.validate()?;
    let lf = (q.t > LOG_SPACE_THRESHOLD).then(|| LnFactorials::new(q.t + 1));
    Ok(evaluate(q, lf.as_ref()))
}

/// Same as [`exact_probability`] but with the weight path forced.
pub fn exact_probability_with(q: &ClosedFormQuery, log_space: bool) -> Result<f64> {
    q.validate()?;
    let lf = log_space.then(|| LnFactorials::new(q.t + 1));
    Ok(evaluate(q, lf.as_ref()))
}

/// Closed-form probabilities for `x = 0..=t` (totals only).
pub fn closedform_distribution(theta: CoinAngle, alpha: Complex64, beta: Complex64, t: usize) -> Result<Distribution> {
    let base = ClosedFormQuery { theta, alpha, beta, t, x: 0 };
    base.validate()?;
    let lf = (t > LOG_SPACE_THRESHOLD).then(|| LnFactorials::new(t + 1));
    let totals = (0..=t as i64).map(|x| evaluate(&ClosedFormQuery { x, ..base }, lf.as_ref()));
    Ok(Distribution::from_totals(t, 0, totals.collect::<Vec<_>>()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoldingReport {
    pub t: usize,
    /// `max_x |P(X_t = x) - P(Z_t = -x-1) - P(Z_t = x)|`.
    pub max_residual: f64,
    /// Whether one of `P(Z_t = -x-1)`, `P(Z_t = x)` was exactly zero at every `x`.
    pub one_term_zero: bool,
}

/// Compares the half-line walk with the line walk started from the same
/// localized state at the origin, both driven by the single coin `theta`.
pub fn folding_relation_check(theta: CoinAngle, alpha: Complex64, beta: Complex64, t: usize) -> Result<FoldingReport> {
    let protocol = Protocol::constant(theta);
    let half = evolve(&protocol, &HalfLineState::localized(alpha, beta)?, t).distribution();
    let line = evolve(&protocol, &LineState::localized(alpha, beta)?, t).distribution();
    Ok(folding_report(&half, &line))
}

pub(crate) fn folding_report(half: &Distribution, line: &Distribution) -> FoldingReport {
    let mut max_residual: f64 = 0.0;
    let mut one_term_zero = true;
    for (x, p) in half.iter() {
        let (mirror, here) = (line.total(-x - 1), line.total(x));
        max_residual = max_residual.max((p.total - mirror - here).abs());
        one_term_zero &= mirror == 0.0 || here == 0.0;
    }
    FoldingReport {
        t: half.time(),
        max_residual,
        one_term_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::pi_frac;
    use crate::measure::Component;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(theta: CoinAngle, alpha: Complex64, beta: Complex64, t: usize, x: i64) -> ClosedFormQuery {
        ClosedFormQuery { theta, alpha, beta, t, x }
    }

    #[test]
    fn formula_dispatch() {
        assert_eq!(Formula::for_site(1, 1), Formula::Front);
        assert_eq!(Formula::for_site(1, 0), Formula::BehindFront);
        assert_eq!(Formula::for_site(2, 0), Formula::EvenGap { m: 1 });
        assert_eq!(Formula::for_site(5, 2), Formula::OddGap { m: 1 });
        assert_eq!(Formula::for_site(6, 1), Formula::OddGap { m: 2 });
    }

    #[test]
    fn hand_values_quarter_pi() {
        let th = pi_frac(1.0, 4.0);
        let (one, zero) = (c(1.0, 0.0), c(0.0, 0.0));
        assert!((exact_probability(&q(th, one, zero, 2, 2)).unwrap() - 0.25).abs() < 1e-15);
        assert!((exact_probability(&q(th, one, zero, 2, 0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((exact_probability(&q(th, one, zero, 1, 0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((exact_probability(&q(th, one, zero, 2, 1)).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn one_step_distribution() {
        let th = CoinAngle::new(1.1).unwrap();
        let (alpha, beta) = (c(0.6, 0.0), c(0.0, 0.8));
        let d = closedform_distribution(th, alpha, beta, 1).unwrap();
        let (cs, sn) = (th.cos(), th.sin());
        assert!((d.total(0) - (alpha * cs + beta * sn).norm_sqr()).abs() < 1e-15);
        assert!((d.total(1) - (alpha * sn - beta * cs).norm_sqr()).abs() < 1e-15);
        assert!((d.mass(Component::Total) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_queries() {
        let th = pi_frac(1.0, 4.0);
        let (one, zero) = (c(1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(exact_probability(&q(th, one, zero, 3, 4)), Err(WalkError::Domain { .. })));
        assert!(matches!(exact_probability(&q(th, one, zero, 3, -1)), Err(WalkError::Domain { .. })));
        assert!(matches!(exact_probability(&q(th, one, zero, 0, 0)), Err(WalkError::Domain { .. })));
        assert!(matches!(
            exact_probability(&q(pi_frac(1.0, 2.0), one, zero, 3, 1)),
            Err(WalkError::DegenerateAngle { .. })
        ));
        assert!(matches!(exact_probability(&q(th, one, one, 3, 1)), Err(WalkError::Norm { .. })));
    }

    #[test]
    fn log_space_and_direct_agree() {
        let th = pi_frac(1.0, 3.0);
        let (alpha, beta) = (c(0.6, 0.0), c(0.0, 0.8));
        for t in [5, 12, 25, 30] {
            for x in 0..=t as i64 {
                let a = exact_probability_with(&q(th, alpha, beta, t, x), false).unwrap();
                let b = exact_probability_with(&q(th, alpha, beta, t, x), true).unwrap();
                assert!((a - b).abs() < 1e-10, "t={t} x={x} {a} {b}");
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(binomial(60, 30), 118264581564861424.0);
        let lf = LnFactorials::new(61);
        assert!((lf.ln_binomial(60, 30) - 118264581564861424f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s: CompensatedSum = [1e16, 1.0, -1e16, 1.0].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn folding_one_step() {
        let th = CoinAngle::new(0.7).unwrap();
        let (alpha, beta) = (c(0.28, 0.96), c(0.0, 0.0));
        let half = evolve(&Protocol::constant(th), &HalfLineState::localized(alpha, beta).unwrap(), 1).distribution();
        let line = evolve(&Protocol::constant(th), &LineState::localized(alpha, beta).unwrap(), 1).distribution();
        let p0 = (alpha * th.cos() + beta * th.sin()).norm_sqr();
        assert!((half.total(0) - p0).abs() < 1e-15);
        assert!((line.total(-1) - p0).abs() < 1e-15);
        let r = folding_relation_check(th, alpha, beta, 1).unwrap();
        assert!(r.max_residual < 1e-15 && r.one_term_zero);
    }
}
