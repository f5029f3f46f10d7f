//! Walk states and exact step evolution on the half line and the line.
//!
//! States store amplitudes on their exact support, which widens by one site
//! per step, so there is no truncation anywhere.

use num_complex::Complex64;

use crate::coin::{CoinOperator, Protocol};
use crate::error::{Result, WalkError};
use crate::measure::{Distribution, SiteProbability};

/// Tolerance on `|alpha|^2 + |beta|^2 = 1` when building an initial state.
pub const NORM_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The pair of inner-state amplitudes at one site.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Amplitude {
    pub inner0: Complex64,
    pub inner1: Complex64,
}

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude {
        inner0: ZERO,
        inner1: ZERO,
    };

    pub fn new(inner0: Complex64, inner1: Complex64) -> Self {
        Amplitude { inner0, inner1 }
    }

    pub fn probability(&self) -> SiteProbability {
        SiteProbability::new(self.inner0.norm_sqr(), self.inner1.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner0.norm_sqr() + self.inner1.norm_sqr()
    }
}

fn check_coefficients(alpha: Complex64, beta: Complex64) -> Result<()> {
    for v in [alpha.re, alpha.im, beta.re, beta.im] {
        if !v.is_finite() {
            return Err(WalkError::NonFinite(v));
        }
    }
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(WalkError::Norm { norm_sqr });
    }
    Ok(())
}

/// A state that can be advanced one step by a coin.
pub trait Walk: Clone {
    fn time(&self) -> usize;

    /// Coin at every site, then shift. Returns the state at `time() + 1`.
    fn step(&self, coin: &CoinOperator) -> Self;

    fn norm_sqr(&self) -> f64;

    fn distribution(&self) -> Distribution;
}

/// Half-line state: positions `0..=t`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineState {
    t: usize,
    amps: Vec<Amplitude>,
}

impl HalfLineState {
    /// Walker at the origin in `alpha|0> + beta|1>`.
    pub fn localized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        check_coefficients(alpha, beta)?;
        Ok(HalfLineState {
            t: 0,
            amps: vec![Amplitude::new(alpha, beta)],
        })
    }

    /// Builds a state from an explicit table; `amps.len()` must be `t + 1`.
    pub(crate) fn from_table(t: usize, amps: Vec<Amplitude>) -> Self {
        debug_assert_eq!(amps.len(), t + 1);
        HalfLineState { t, amps }
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    /// Amplitude at `x`, zero outside the support.
    pub fn amp(&self, x: i64) -> Amplitude {
        usize::try_from(x)
            .ok()
            .and_then(|i| self.amps.get(i).copied())
            .unwrap_or(Amplitude::ZERO)
    }

    /// Largest amplitude difference against another half-line table.
    pub fn max_abs_diff(&self, other: &HalfLineState) -> f64 {
        let n = self.amps.len().max(other.amps.len()) as i64;
        (0..n)
            .map(|x| {
                let (a, b) = (self.amp(x), other.amp(x));
                (a.inner0 - b.inner0).norm().max((a.inner1 - b.inner1).norm())
            })
            .fold(0.0, f64::max)
    }
}

impl Walk for HalfLineState {
    fn time(&self) -> usize {
        self.t
    }

    fn step(&self, coin: &CoinOperator) -> Self {
        let mut next = vec![Amplitude::ZERO; self.amps.len() + 1];
        for (x, a) in self.amps.iter().enumerate() {
            let (left, right) = coin.apply(a.inner0, a.inner1);
            if x == 0 {
                // reflecting edge: inner state 0 at the origin turns into inner state 1 in place
                next[0].inner1 += left;
            } else {
                next[x - 1].inner0 += left;
            }
            next[x + 1].inner1 += right;
        }
        HalfLineState {
            t: self.t + 1,
            amps: next,
        }
    }

    fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Amplitude::norm_sqr).sum()
    }

    fn distribution(&self) -> Distribution {
        Distribution::new(self.t, 0, self.amps.iter().map(Amplitude::probability).collect())
    }
}

/// Line state over the contiguous window `xmin..=xmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineState {
    t: usize,
    xmin: i64,
    amps: Vec<Amplitude>,
}

impl LineState {
    /// The delocalized state on `{-1, 0}` whose evolution carries the half-line
    /// walk started from `alpha|0> + beta|1>` at the origin:
    /// `|-1>(Im(beta)|0> - Im(alpha)|1>) + |0>(Re(alpha)|0> + Re(beta)|1>)`.
    pub fn delocalized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        check_coefficients(alpha, beta)?;
        let r = |v: f64| Complex64::new(v, 0.0);
        Ok(LineState {
            t: 0,
            xmin: -1,
            amps: vec![
                Amplitude::new(r(beta.im), r(-alpha.im)),
                Amplitude::new(r(alpha.re), r(beta.re)),
            ],
        })
    }

    /// An arbitrary state on `{-1, 0}` with the given inner-state amplitudes.
    pub fn two_site(minus_one: Amplitude, zero: Amplitude) -> Result<Self> {
        let norm_sqr = minus_one.norm_sqr() + zero.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(WalkError::Norm { norm_sqr });
        }
        Ok(LineState {
            t: 0,
            xmin: -1,
            amps: vec![minus_one, zero],
        })
    }

    /// Walker at the origin in `alpha|0> + beta|1>`.
    pub fn localized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        check_coefficients(alpha, beta)?;
        Ok(LineState {
            t: 0,
            xmin: 0,
            amps: vec![Amplitude::new(alpha, beta)],
        })
    }

    pub fn xmin(&self) -> i64 {
        self.xmin
    }

    pub fn xmax(&self) -> i64 {
        self.xmin + self.amps.len() as i64 - 1
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amp(&self, x: i64) -> Amplitude {
        usize::try_from(x - self.xmin)
            .ok()
            .and_then(|i| self.amps.get(i).copied())
            .unwrap_or(Amplitude::ZERO)
    }

    /// `(gamma(x), delta(x))`.
    pub fn gamma(&self, x: i64) -> Complex64 {
        self.amp(x).inner0
    }

    pub fn delta(&self, x: i64) -> Complex64 {
        self.amp(x).inner1
    }

    /// Largest imaginary part over all stored amplitudes.
    pub fn max_imag(&self) -> f64 {
        self.amps
            .iter()
            .map(|a| a.inner0.im.abs().max(a.inner1.im.abs()))
            .fold(0.0, f64::max)
    }
}

impl Walk for LineState {
    fn time(&self) -> usize {
        self.t
    }

    fn step(&self, coin: &CoinOperator) -> Self {
        // new index i <-> position xmin - 1 + i
        let mut next = vec![Amplitude::ZERO; self.amps.len() + 2];
        for (i, a) in self.amps.iter().enumerate() {
            let (left, right) = coin.apply(a.inner0, a.inner1);
            next[i].inner0 += left;
            next[i + 2].inner1 += right;
        }
        LineState {
            t: self.t + 1,
            xmin: self.xmin - 1,
            amps: next,
        }
    }

    fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Amplitude::norm_sqr).sum()
    }

    fn distribution(&self) -> Distribution {
        Distribution::new(
            self.t,
            self.xmin,
            self.amps.iter().map(Amplitude::probability).collect(),
        )
    }
}

/// Iterator over successive states under a protocol, starting with the initial one.
#[derive(Debug, Clone)]
pub struct Trajectory<W> {
    protocol: Protocol,
    next: Option<W>,
}

impl<W: Walk> Iterator for Trajectory<W> {
    type Item = W;

    fn next(&mut self) -> Option<W> {
        let current = self.next.take()?;
        self.next = Some(current.step(&self.protocol.coin_at(current.time())));
        Some(current)
    }
}

pub fn trajectory<W: Walk>(protocol: &Protocol, initial: W) -> Trajectory<W> {
    Trajectory {
        protocol: *protocol,
        next: Some(initial),
    }
}

/// Applies `steps` steps. The coin for each step is chosen by the parity of
/// the time stamp of the state it acts on.
pub fn evolve<W: Walk>(protocol: &Protocol, initial: &W, steps: usize) -> W {
    let mut state = initial.clone();
    for _ in 0..steps {
        state = state.step(&protocol.coin_at(state.time()));
    }
    state
}
