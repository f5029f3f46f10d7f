//! Finding probabilities, rescaled staircase CDFs and distances between them.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};

/// Which part of the mass at a site is being measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Inner0,
    Inner1,
    Total,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Inner0, Component::Inner1, Component::Total];

    pub fn name(self) -> &'static str {
        match self {
            Component::Inner0 => "inner0",
            Component::Inner1 => "inner1",
            Component::Total => "total",
        }
    }
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SiteProbability {
    pub p0: f64,
    pub p1: f64,
    pub total: f64,
}

impl SiteProbability {
    pub fn new(p0: f64, p1: f64) -> Self {
        SiteProbability {
            p0,
            p1,
            total: p0 + p1,
        }
    }

    pub fn get(&self, component: Component) -> f64 {
        match component {
            Component::Inner0 => self.p0,
            Component::Inner1 => self.p1,
            Component::Total => self.total,
        }
    }
}

/// Probabilities over the contiguous positions `xmin..xmin + len` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    t: usize,
    xmin: i64,
    sites: Vec<SiteProbability>,
}

impl Distribution {
    pub fn new(t: usize, xmin: i64, sites: Vec<SiteProbability>) -> Self {
        Distribution { t, xmin, sites }
    }

    /// A distribution from total masses only (inner split unknown, both zero).
    pub fn from_totals(t: usize, xmin: i64, totals: impl IntoIterator<Item = f64>) -> Self {
        let sites = totals
            .into_iter()
            .map(|p| SiteProbability {
                p0: 0.0,
                p1: 0.0,
                total: p,
            })
            .collect();
        Distribution { t, xmin, sites }
    }

    pub fn time(&self) -> usize {
        self.t
    }

    pub fn xmin(&self) -> i64 {
        self.xmin
    }

    pub fn xmax(&self) -> i64 {
        self.xmin + self.sites.len() as i64 - 1
    }

    pub fn sites(&self) -> &[SiteProbability] {
        &self.sites
    }

    /// `(x, probabilities)` pairs in increasing `x`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, SiteProbability)> + '_ {
        self.sites
            .iter()
            .enumerate()
            .map(move |(i, p)| (self.xmin + i as i64, *p))
    }

    pub fn at(&self, x: i64) -> SiteProbability {
        usize::try_from(x - self.xmin)
            .ok()
            .and_then(|i| self.sites.get(i).copied())
            .unwrap_or_default()
    }

    pub fn get(&self, x: i64, component: Component) -> f64 {
        self.at(x).get(component)
    }

    pub fn total(&self, x: i64) -> f64 {
        self.at(x).total
    }

    pub fn mass(&self, component: Component) -> f64 {
        self.sites.iter().map(|p| p.get(component)).sum()
    }

    /// Staircase CDF of `x / t` under one component.
    ///
    /// Inner-state components are not renormalized: their CDF tops out at the
    /// component's own mass.
    pub fn rescaled_cdf(&self, component: Component) -> Result<RescaledCdf> {
        if self.t == 0 {
            return Err(WalkError::DegenerateTime);
        }
        let t = self.t as f64;
        let mut acc = 0.0;
        let points = self
            .iter()
            .map(|(x, p)| {
                acc += p.get(component);
                (x as f64 / t, acc)
            })
            .collect();
        Ok(RescaledCdf { points })
    }
}

/// Right-continuous staircase: `F(y) = sum of mass at y_k <= y`.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledCdf {
    points: Vec<(f64, f64)>,
}

impl RescaledCdf {
    /// From sorted `(y_k, F(y_k))` pairs.
    pub fn from_points(points: Vec<(f64, f64)>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].0 < w[1].0));
        RescaledCdf { points }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, y: f64) -> f64 {
        let k = self.points.partition_point(|&(yk, _)| yk <= y);
        if k == 0 {
            0.0
        } else {
            self.points[k - 1].1
        }
    }

    /// `F(y-)`.
    pub fn left_limit(&self, y: f64) -> f64 {
        let k = self.points.partition_point(|&(yk, _)| yk < y);
        if k == 0 {
            0.0
        } else {
            self.points[k - 1].1
        }
    }

    pub fn range(&self) -> Option<(f64, f64)> {
        Some((self.points.first()?.0, self.points.last()?.0))
    }

    pub fn final_mass(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.1)
    }
}

/// Number of uniform grid points added on top of the staircase jumps.
pub const KOLMOGOROV_UNIFORM_POINTS: usize = 1000;

/// Sup distance between a staircase and a continuous CDF.
///
/// Evaluated at every jump (both the value and the left limit) and at
/// [`KOLMOGOROV_UNIFORM_POINTS`] uniform points across the staircase range.
pub fn kolmogorov_distance(a: &RescaledCdf, b: impl Fn(f64) -> f64) -> f64 {
    let Some((lo, hi)) = a.range() else {
        return 0.0;
    };
    let mut d: f64 = 0.0;
    let mut below = 0.0;
    for &(y, f) in a.points() {
        let g = b(y);
        d = d.max((f - g).abs()).max((below - g).abs());
        below = f;
    }
    let n = KOLMOGOROV_UNIFORM_POINTS;
    for i in 0..n {
        let y = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        d = d.max((a.eval(y) - b(y)).abs());
    }
    d
}

/// Exact sup distance between two staircases (both are constant between
/// consecutive points of the merged jump set).
pub fn kolmogorov_between(a: &RescaledCdf, b: &RescaledCdf) -> f64 {
    a.points()
        .iter()
        .chain(b.points())
        .map(|&(y, _)| (a.eval(y) - b.eval(y)).abs())
        .fold(0.0, f64::max)
}

/// Half the l1 distance between two distributions, missing positions counting as zero.
pub fn total_variation(a: &Distribution, b: &Distribution, component: Component) -> f64 {
    let lo = a.xmin().min(b.xmin());
    let hi = a.xmax().max(b.xmax());
    0.5 * (lo..=hi)
        .map(|x| (a.get(x, component) - b.get(x, component)).abs())
        .sum::<f64>()
}
