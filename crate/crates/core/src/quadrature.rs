//! Composite Gauss-Legendre quadrature on finite intervals.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Points per panel.
pub const ORDER: usize = 16;
/// Panels in the first pass (`ORDER * INITIAL_PANELS` = 256 nodes).
pub const INITIAL_PANELS: usize = 16;
const MAX_PANELS: usize = 1 << 14;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

fn composite(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let panel: f64 = rule().iter().map(|&(x, w)| w * f(mid + 0.5 * h * x)).sum();
        sum += 0.5 * h * panel;
    }
    sum
}

/// Integrates a smooth `f` over `[a, b]`, doubling the panel count until two
/// successive estimates agree to within `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let mut panels = INITIAL_PANELS;
    let mut prev = composite(&f, a, b, panels);
    while panels < MAX_PANELS {
        panels *= 2;
        let next = composite(&f, a, b, panels);
        if (next - prev).abs() < tol {
            return next;
        }
        prev = next;
    }
    prev
}
