//! Coin angles, the reflection-type coin family and the 2-period protocol.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};

/// Angles closer than this to a multiple of pi/2 are treated as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// A coin angle in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct CoinAngle(f64);

impl CoinAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if theta.is_finite() && (0.0..TAU).contains(&theta) {
            Ok(CoinAngle(theta))
        } else {
            Err(WalkError::InvalidAngle(theta))
        }
    }

    /// Reduces any finite angle into `[0, 2pi)`.
    pub fn wrapped(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(WalkError::InvalidAngle(theta));
        }
        let r = theta.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs
        Self::new(if r >= TAU { 0.0 } else { r })
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }

    /// True when the angle sits (within [`DEGENERATE_TOL`]) on 0, pi/2, pi or 3pi/2,
    /// where the coin is diagonal or anti-diagonal and the limit densities break down.
    pub fn is_degenerate(self) -> bool {
        let k = (self.0 / FRAC_PI_2).round();
        (self.0 - k * FRAC_PI_2).abs() < DEGENERATE_TOL
    }

    pub fn require_nondegenerate(self) -> Result<Self> {
        if self.is_degenerate() {
            Err(WalkError::DegenerateAngle { theta: self.0 })
        } else {
            Ok(self)
        }
    }
}

impl TryFrom<f64> for CoinAngle {
    type Error = WalkError;

    fn try_from(theta: f64) -> Result<Self> {
        CoinAngle::new(theta)
    }
}

impl From<CoinAngle> for f64 {
    fn from(a: CoinAngle) -> f64 {
        a.0
    }
}

/// The coin `[[c, s], [s, -c]]` with `c = cos(theta)`, `s = sin(theta)`.
///
/// Real, symmetric and orthogonal, so it is unitary and its own inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator {
    pub c: f64,
    pub s: f64,
}

impl CoinOperator {
    /// Applies the coin to the inner-state pair `(inner0, inner1)`.
    #[inline]
    pub fn apply(&self, inner0: Complex64, inner1: Complex64) -> (Complex64, Complex64) {
        (
            inner0 * self.c + inner1 * self.s,
            inner0 * self.s - inner1 * self.c,
        )
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.c, self.s], [self.s, -self.c]]
    }
}

pub fn make_coin(theta: CoinAngle) -> CoinOperator {
    CoinOperator {
        c: theta.cos(),
        s: theta.sin(),
    }
}

/// Two coins applied alternately: the step leaving an even time uses the
/// first coin, the step leaving an odd time uses the second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Protocol {
    pub theta1: CoinAngle,
    pub theta2: CoinAngle,
}

impl Protocol {
    pub fn new(theta1: CoinAngle, theta2: CoinAngle) -> Self {
        Protocol { theta1, theta2 }
    }

    /// The time-independent walk driven by a single coin.
    pub fn constant(theta: CoinAngle) -> Self {
        Protocol::new(theta, theta)
    }

    pub fn from_radians(theta1: f64, theta2: f64) -> Result<Self> {
        Ok(Protocol::new(CoinAngle::new(theta1)?, CoinAngle::new(theta2)?))
    }

    /// Coin for the step from time `t` to `t + 1`.
    pub fn coin_at(&self, t: usize) -> CoinOperator {
        if t.is_multiple_of(2) {
            make_coin(self.theta1)
        } else {
            make_coin(self.theta2)
        }
    }
}

/// Convenience for the `pi`-fraction angles used throughout the tests and examples.
pub fn pi_frac(k: f64, n: f64) -> CoinAngle {
    CoinAngle::wrapped(k * PI / n).expect("finite angle")
}
