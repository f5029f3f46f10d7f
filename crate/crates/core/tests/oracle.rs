//! Dense-matrix oracle: the one-step operator `S C` written out as a unitary
//! matrix on a finite window, independent of the sparse stepping code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qwalk::coin::{pi_frac, CoinAngle, Protocol};
use qwalk::walk::{trajectory, HalfLineState, LineState, Walk};

type C = Complex64;

fn re(v: f64) -> C {
    C::new(v, 0.0)
}

/// Basis index of `|x> (x) |j>` for sites `lo..lo+n`.
fn idx(x: i64, j: usize, lo: i64) -> usize {
    2 * (x - lo) as usize + j
}

fn coin_block(theta: CoinAngle, n: usize) -> DMatrix<C> {
    let (c, s) = (theta.radians().cos(), theta.radians().sin());
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, 2 * k)] = re(c);
        m[(2 * k, 2 * k + 1)] = re(s);
        m[(2 * k + 1, 2 * k)] = re(s);
        m[(2 * k + 1, 2 * k + 1)] = re(-c);
    }
    m
}

/// Half line on sites `0..n`, with a reflecting origin and a reflecting far
/// wall so the matrix stays unitary. The far wall is never reached in the tests.
fn halfline_step(theta: CoinAngle, n: usize) -> DMatrix<C> {
    let mut shift = DMatrix::zeros(2 * n, 2 * n);
    for x in 0..n as i64 {
        let to = if x == 0 { idx(0, 1, 0) } else { idx(x - 1, 0, 0) };
        shift[(to, idx(x, 0, 0))] = re(1.0);
        let to = if x + 1 == n as i64 { idx(x, 0, 0) } else { idx(x + 1, 1, 0) };
        shift[(to, idx(x, 1, 0))] = re(1.0);
    }
    shift * coin_block(theta, n)
}

/// Line on sites `lo..lo+n`, periodically closed.
fn line_step(theta: CoinAngle, lo: i64, n: usize) -> DMatrix<C> {
    let wrap = |x: i64| lo + (x - lo).rem_euclid(n as i64);
    let mut shift = DMatrix::zeros(2 * n, 2 * n);
    for x in lo..lo + n as i64 {
        shift[(idx(wrap(x - 1), 0, lo), idx(x, 0, lo))] = re(1.0);
        shift[(idx(wrap(x + 1), 1, lo), idx(x, 1, lo))] = re(1.0);
    }
    shift * coin_block(theta, n)
}

fn halfline_vector(s: &HalfLineState, n: usize) -> DVector<C> {
    let mut v = DVector::zeros(2 * n);
    for x in 0..n as i64 {
        let a = s.amp(x);
        v[idx(x, 0, 0)] = a.inner0;
        v[idx(x, 1, 0)] = a.inner1;
    }
    v
}

fn line_vector(s: &LineState, lo: i64, n: usize) -> DVector<C> {
    let mut v = DVector::zeros(2 * n);
    for x in lo..lo + n as i64 {
        let a = s.amp(x);
        v[idx(x, 0, lo)] = a.inner0;
        v[idx(x, 1, lo)] = a.inner1;
    }
    v
}

fn max_diff(a: &DVector<C>, b: &DVector<C>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn cases() -> Vec<(Protocol, C, C)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        (Protocol::new(pi_frac(1.0, 3.0), pi_frac(1.0, 4.0)), re(h), C::new(0.0, h)),
        (Protocol::new(pi_frac(2.0, 5.0), pi_frac(7.0, 6.0)), C::new(0.6, 0.0), C::new(0.0, -0.8)),
        (Protocol::new(pi_frac(1.0, 2.0), pi_frac(0.0, 1.0)), re(1.0), re(0.0)),
        (Protocol::from_radians(1.1, 4.9).unwrap(), C::new(0.5, 0.5), C::new(-0.5, 0.5)),
    ]
}

const STEPS: usize = 40;
const N: usize = STEPS + 4;

#[test]
fn halfline_matches_dense_operator() {
    for (protocol, a, b) in cases() {
        let u1 = halfline_step(protocol.theta1, N);
        let u2 = halfline_step(protocol.theta2, N);
        let start = HalfLineState::localized(a, b).unwrap();
        let mut v = halfline_vector(&start, N);
        for state in trajectory(&protocol, start).take(STEPS + 1) {
            assert!(max_diff(&v, &halfline_vector(&state, N)) < 1e-13, "t = {}", state.time());
            v = if state.time() % 2 == 0 { &u1 * &v } else { &u2 * &v };
        }
    }
}

#[test]
fn line_matches_dense_operator() {
    let lo = -(STEPS as i64) - 3;
    let n = 2 * STEPS + 6;
    for (protocol, a, b) in cases() {
        let u1 = line_step(protocol.theta1, lo, n);
        let u2 = line_step(protocol.theta2, lo, n);
        for start in [LineState::delocalized(a, b).unwrap(), LineState::localized(a, b).unwrap()] {
            let mut v = line_vector(&start, lo, n);
            for state in trajectory(&protocol, start).take(STEPS + 1) {
                assert!(max_diff(&v, &line_vector(&state, lo, n)) < 1e-13, "t = {}", state.time());
                v = if state.time() % 2 == 0 { &u1 * &v } else { &u2 * &v };
            }
        }
    }
}

#[test]
fn oracle_operators_are_unitary() {
    let theta = pi_frac(1.0, 3.0);
    for u in [halfline_step(theta, 12), line_step(theta, -6, 12)] {
        let id = DMatrix::<C>::identity(u.nrows(), u.ncols());
        let err = (u.adjoint() * &u - id).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-14);
    }
}

#[test]
fn adjoint_step_reverses_each_step() {
    for (protocol, a, b) in cases() {
        let u1 = halfline_step(protocol.theta1, N);
        let u2 = halfline_step(protocol.theta2, N);
        let states: Vec<_> = trajectory(&protocol, HalfLineState::localized(a, b).unwrap())
            .take(STEPS + 1)
            .collect();
        for pair in states.windows(2) {
            let u = if pair[0].time() % 2 == 0 { &u1 } else { &u2 };
            let back = u.adjoint() * halfline_vector(&pair[1], N);
            assert!(max_diff(&back, &halfline_vector(&pair[0], N)) < 1e-12);
        }
    }
}

#[test]
fn coin_is_self_inverse() {
    for k in 0..24 {
        let m = coin_block(pi_frac(k as f64, 12.0), 1);
        let err = (&m * &m - DMatrix::<C>::identity(2, 2)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-14);
        let coin = qwalk::make_coin(pi_frac(k as f64, 12.0));
        let (a, b) = (C::new(0.3, -0.2), C::new(0.1, 0.9));
        let (p, q) = coin.apply(a, b);
        let (p, q) = coin.apply(p, q);
        assert!((p - a).norm() < 1e-14 && (q - b).norm() < 1e-14);
    }
}
