//! Half-line walk recovered from a line walk with a delocalized start.
//!
//! When the line walk starts from [`LineState::delocalized`], every half-line
//! amplitude is a fixed complex combination of two line amplitudes, one at `x`
//! and one at the mirror site `-x - 1`. Which combination applies depends on
//! the parity of both the time and the position.

use num_complex::Complex64;
use serde::Serialize;

use crate::coin::Protocol;
use crate::error::{Result, WalkError};
use crate::measure::{Distribution, SiteProbability};
use crate::walk::{Amplitude, HalfLineState, LineState, Walk};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn reconstruct(line: &LineState, even_time: bool) -> HalfLineState {
    let t = line.time();
    let amps = (0..=t as i64)
        .map(|x| {
            let (g, d) = (line.gamma(x), line.delta(x));
            let (gm, dm) = (line.gamma(-x - 1), line.delta(-x - 1));
            match (even_time, x % 2 == 0) {
                (true, true) => Amplitude::new(g - I * dm, d + I * gm),
                (true, false) => Amplitude::new(dm + I * g, -gm + I * d),
                (false, true) => Amplitude::new(-dm + I * g, gm + I * d),
                (false, false) => Amplitude::new(g + I * dm, d - I * gm),
            }
        })
        .collect();
    HalfLineState::from_table(t, amps)
}

/// Reconstruction for a line state at an even time.
pub fn halfline_amps_even(line: &LineState) -> Result<HalfLineState> {
    if !line.time().is_multiple_of(2) {
        return Err(WalkError::ParityContract {
            time: line.time(),
            expected: "even-time",
        });
    }
    Ok(reconstruct(line, true))
}

/// Reconstruction for a line state at an odd time.
pub fn halfline_amps_odd(line: &LineState) -> Result<HalfLineState> {
    if line.time() % 2 != 1 {
        return Err(WalkError::ParityContract {
            time: line.time(),
            expected: "odd-time",
        });
    }
    Ok(reconstruct(line, false))
}

/// Half-line amplitude table at the line state's time, dispatching on parity.
pub fn halfline_amps_from_line(line: &LineState) -> HalfLineState {
    reconstruct(line, line.time().is_multiple_of(2))
}

/// Folds a line distribution onto the half line: the mass at `-x - 1` joins
/// the mass at `x` with the inner states swapped.
pub fn halfline_dist_from_line(line: &Distribution) -> Distribution {
    let hi = line.xmax().max(-line.xmin() - 1).max(0);
    let sites = (0..=hi)
        .map(|x| {
            let (here, mirror) = (line.at(x), line.at(-x - 1));
            SiteProbability::new(here.p0 + mirror.p1, here.p1 + mirror.p0)
        })
        .collect();
    Distribution::new(line.time(), 0, sites)
}

/// Largest per-position, per-component probability difference (missing sites are zero).
pub fn max_probability_residual(a: &Distribution, b: &Distribution) -> f64 {
    let lo = a.xmin().min(b.xmin());
    let hi = a.xmax().max(b.xmax());
    (lo..=hi)
        .map(|x| {
            let (p, q) = (a.at(x), b.at(x));
            (p.p0 - q.p0)
                .abs()
                .max((p.p1 - q.p1).abs())
                .max((p.total - q.total).abs())
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualPoint {
    pub t: usize,
    pub amp: f64,
    pub prob: f64,
    pub line_imag: f64,
}

/// Outcome of running the half-line walk and its line counterpart side by side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrespondenceReport {
    #[serde(rename = "T")]
    pub horizon: usize,
    pub max_amp_residual: f64,
    pub max_prob_residual: f64,
    /// Largest imaginary part seen in any line amplitude.
    pub max_line_imag: f64,
    pub series: Vec<ResidualPoint>,
}

/// Evolves both walks to `horizon`, comparing the reconstructed amplitude
/// table and the folded distribution with the direct half-line walk at every time.
pub fn verify_lemma1(
    protocol: &Protocol,
    alpha: Complex64,
    beta: Complex64,
    horizon: usize,
) -> Result<CorrespondenceReport> {
    let mut half = HalfLineState::localized(alpha, beta)?;
    let mut line = LineState::delocalized(alpha, beta)?;
    let mut series = Vec::with_capacity(horizon + 1);
    loop {
        let amp = halfline_amps_from_line(&line).max_abs_diff(&half);
        let prob = max_probability_residual(
            &halfline_dist_from_line(&line.distribution()),
            &half.distribution(),
        );
        series.push(ResidualPoint {
            t: half.time(),
            amp,
            prob,
            line_imag: line.max_imag(),
        });
        if half.time() == horizon {
            break;
        }
        let coin = protocol.coin_at(half.time());
        half = half.step(&coin);
        line = line.step(&coin);
    }
    let max_of = |f: fn(&ResidualPoint) -> f64| series.iter().map(f).fold(0.0, f64::max);
    Ok(CorrespondenceReport {
        horizon,
        max_amp_residual: max_of(|p| p.amp),
        max_prob_residual: max_of(|p| p.prob),
        max_line_imag: max_of(|p| p.line_imag),
        series,
    })
}
