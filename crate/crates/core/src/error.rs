use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("initial coefficients are not normalized: |alpha|^2 + |beta|^2 = {norm_sqr}")]
    Norm { norm_sqr: f64 },

    #[error("coin angle {0} is outside [0, 2pi)")]
    InvalidAngle(f64),

    #[error("non-finite amplitude component: {0}")]
    NonFinite(f64),

    #[error("coin angle {theta} is one of the excluded angles 0, pi/2, pi, 3pi/2")]
    DegenerateAngle { theta: f64 },

    #[error("rescaling by time requires t >= 1")]
    DegenerateTime,

    #[error("state at time {time} does not match the {expected} reconstruction branch")]
    ParityContract { time: usize, expected: &'static str },

    #[error("position {x} is outside 0..={t}")]
    Domain { x: i64, t: usize },
}

pub type Result<T> = std::result::Result<T, WalkError>;
