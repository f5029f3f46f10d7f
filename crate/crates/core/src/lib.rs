//! Two-period time-dependent discrete-time quantum walks on the half line and the line.
//!
//! The walker alternates between two coins `C(theta1)` and `C(theta2)`, where
//! `C(theta) = [[cos theta, sin theta], [sin theta, -cos theta]]`, and moves
//! left in inner state 0 and right in inner state 1. On the half line the
//! origin reflects: inner state 0 at `x = 0` becomes inner state 1 in place.
//!
//! The crate provides
//!
//! - exact evolution of both walks on their full support ([`walk`]),
//! - finding probabilities, rescaled CDFs and distances ([`measure`]),
//! - the amplitude-level map from a line walk with a delocalized start to the
//!   half-line walk, and the folded distributions ([`correspond`]),
//! - weak-limit densities, their CDFs and finite-time approximations ([`limit`]),
//! - closed-form probabilities for the single-coin half-line walk and the
//!   half-line/line folding relation ([`closedform`]),
//! - the `qw` command-line front end ([`cli`]).
//!
//! ```
//! use num_complex::Complex64;
//! use qwalk::{coin::{pi_frac, Protocol}, walk::{evolve, HalfLineState, Walk}};
//!
//! let protocol = Protocol::new(pi_frac(1.0, 3.0), pi_frac(1.0, 4.0));
//! let start = HalfLineState::localized(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))?;
//! let state = evolve(&protocol, &start, 100);
//! assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
//! # Ok::<(), qwalk::WalkError>(())
//! ```

pub mod cli;
pub mod closedform;
pub mod coin;
pub mod correspond;
pub mod error;
pub mod limit;
pub mod measure;
pub mod quadrature;
pub mod walk;

pub use coin::{make_coin, CoinAngle, CoinOperator, Protocol};
pub use error::{Result, WalkError};
pub use measure::{Component, Distribution, RescaledCdf};
pub use walk::{evolve, HalfLineState, LineState, Walk};
