//! Critical parameters of the state families and the region maps they induce
//! on `p ∈ [0, 1]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{self, WERNER_UNSTEERABLE_EPS, WERNER_UNSTEERABLE_POINT};
use crate::states::StateFamily;

pub const DEFAULT_TOL: f64 = 1e-6;

/// `H_d = Σ_{n=1}^{d} 1/n`.
pub fn harmonic_number(d: usize) -> f64 {
    (1..=d).map(|n| 1.0 / n as f64).sum()
}

/// Isotropic steering bound `(H_d − 1)/(d − 1)`.
pub fn steerability_threshold(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::ParameterOutOfDomain { name: "d", value: d as f64 });
    }
    Ok((harmonic_number(d) - 1.0) / (d - 1) as f64)
}

/// Final bracket of a bisection run. `f(lo)` and `f(hi)` have opposite signs
/// (treating zero as non-positive).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub positive_at_hi: bool,
    pub iterations: usize,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// The end of the bracket where `f > 0`.
    pub fn positive_end(&self) -> f64 {
        if self.positive_at_hi {
            self.hi
        } else {
            self.lo
        }
    }
}

/// Bisection on `[lo, hi]` until the bracket is no wider than `tol`.
pub fn bisect(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<Bracket> {
    if tol.is_nan() || tol <= 0.0 || lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::ParameterOutOfDomain { name: "tol", value: tol });
    }
    let g_lo = f(lo)?;
    let g_hi = f(hi)?;
    let pos_lo = g_lo > 0.0;
    let pos_hi = g_hi > 0.0;
    if pos_lo == pos_hi {
        return Err(Error::NoThreshold { lo, hi, g_lo, g_hi });
    }
    let (mut a, mut b) = (lo, hi);
    let mut iterations = 0;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        iterations += 1;
        if (f(mid)? > 0.0) == pos_hi {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(Bracket { lo: a, hi: b, positive_at_hi: pos_hi, iterations })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdKind {
    DenseCoding,
    Steerability,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub family: String,
    pub kind: ThresholdKind,
    pub p_star: f64,
    pub tolerance: f64,
    pub iterations: usize,
}

/// `S(ρ_B) − S(ρ_AB)` along the family.
pub fn dense_coding_advantage(family: &StateFamily, p: f64) -> Result<f64> {
    Ok(measures::family_capacity(family, p)?.advantage())
}

/// Smallest dense-codeable parameter, located by bisection on
/// `g(p) = S_B − S_AB` over `[0, 1]`.
///
/// `p_star` is the dense-codeable end of the final bracket, so
/// `g(p_star) > 0` and the true crossing lies within `tol` below it.
pub fn find_dense_coding_threshold(family: &StateFamily, tol: f64) -> Result<ThresholdResult> {
    let bracket = bisect(|p| dense_coding_advantage(family, p), 0.0, 1.0, tol)?;
    Ok(ThresholdResult {
        family: family.to_string(),
        kind: ThresholdKind::DenseCoding,
        p_star: bracket.positive_end(),
        tolerance: tol,
        iterations: bracket.iterations,
    })
}

/// The family's steering boundary: `1/√3` for Werner (an isolated
/// unsteerable point), `(H_d − 1)/(d − 1)` for isotropic states.
pub fn steering_boundary(family: &StateFamily) -> Result<ThresholdResult> {
    let p_star = match *family {
        StateFamily::Werner => WERNER_UNSTEERABLE_POINT,
        StateFamily::Isotropic { d } => steerability_threshold(d)?,
    };
    Ok(ThresholdResult {
        family: family.to_string(),
        kind: ThresholdKind::Steerability,
        p_star,
        tolerance: 0.0,
        iterations: 0,
    })
}

/// A sub-interval of `[0, 1]` with explicit endpoint closure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn point(x: f64) -> Self {
        Self::closed(x, x)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, p: f64) -> bool {
        let above = if self.lo_closed { p >= self.lo } else { p > self.lo };
        let below = if self.hi_closed { p <= self.hi } else { p < self.hi };
        above && below
    }

    /// Midpoint, or the point itself for a degenerate interval.
    pub fn representative(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lo_ok = self.lo > other.lo || (self.lo == other.lo && (other.lo_closed || !self.lo_closed));
        let hi_ok = self.hi < other.hi || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lo_ok && hi_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLabels {
    pub steerable: bool,
    pub dense_codeable: bool,
}

impl RegionLabels {
    pub fn at(family: &StateFamily, p: f64) -> Result<Self> {
        Ok(Self {
            steerable: measures::is_steerable(family, p)?.steerable,
            dense_codeable: measures::family_capacity(family, p)?.dense_codeable,
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut out = vec![if self.steerable { "steerable" } else { "unsteerable" }];
        if self.dense_codeable {
            out.push("dense-codeable");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub interval: Interval,
    pub labels: RegionLabels,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub family: String,
    pub segments: Vec<Segment>,
}

impl RegionMap {
    pub fn segment_at(&self, p: f64) -> Option<&Segment> {
        self.segments.iter().find(|s| s.interval.contains(p))
    }

    /// Hull of the segments carrying `pred`; `None` if no segment does.
    fn hull(&self, pred: impl Fn(&RegionLabels) -> bool) -> Option<Interval> {
        let mut chosen = self.segments.iter().filter(|s| pred(&s.labels));
        let first = chosen.next()?;
        let last = chosen.last().unwrap_or(first);
        Some(Interval {
            lo: first.interval.lo,
            lo_closed: first.interval.lo_closed,
            hi: last.interval.hi,
            hi_closed: last.interval.hi_closed,
        })
    }

    pub fn dense_codeable_interval(&self) -> Option<Interval> {
        self.hull(|l| l.dense_codeable)
    }

    pub fn unsteerable_segments(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| !s.labels.steerable)
    }
}

#[derive(Clone, Copy, Debug)]
enum Cut {
    /// Isolated singleton segment `{x}`.
    Point(f64),
    /// Next segment begins at `x`, inclusive.
    StartsAt(f64),
    /// Current segment ends at `x`, inclusive.
    EndsAt(f64),
}

impl Cut {
    fn position(self) -> f64 {
        match self {
            Cut::Point(x) | Cut::StartsAt(x) | Cut::EndsAt(x) => x,
        }
    }
}

fn partition(mut cuts: Vec<Cut>) -> Vec<Interval> {
    cuts.sort_by(|a, b| a.position().total_cmp(&b.position()));
    let mut out = Vec::new();
    let (mut lo, mut lo_closed) = (0.0, true);
    for cut in cuts {
        let x = cut.position();
        match cut {
            Cut::Point(x) => {
                if lo < x {
                    out.push(Interval { lo, hi: x, lo_closed, hi_closed: false });
                }
                out.push(Interval::point(x));
                lo_closed = false;
            }
            Cut::StartsAt(x) => {
                if lo < x {
                    out.push(Interval { lo, hi: x, lo_closed, hi_closed: false });
                }
                lo_closed = true;
            }
            Cut::EndsAt(x) => {
                out.push(Interval { lo, hi: x, lo_closed, hi_closed: true });
                lo_closed = false;
            }
        }
        lo = x;
    }
    if lo < 1.0 || lo_closed {
        out.push(Interval { lo, hi: 1.0, lo_closed, hi_closed: true });
    }
    out
}

/// Partition of `[0, 1]` into segments of constant steerability and
/// dense-codeability.
///
/// Segment boundaries come from the analytic steering rule and the bisected
/// dense-coding threshold; the dense-codeable segment is closed at its lower
/// end. Every point of a `grid`-step lattice is then re-labelled directly and
/// must agree with the map, except lattice points within the bisection
/// tolerance of a numerically located boundary.
pub fn build_region_map(family: &StateFamily, grid: usize) -> Result<RegionMap> {
    if grid < 100 {
        return Err(Error::ParameterOutOfDomain { name: "grid", value: grid as f64 });
    }
    let dense = find_dense_coding_threshold(family, DEFAULT_TOL)?;
    let mut cuts = vec![Cut::Point(0.0), Cut::StartsAt(dense.p_star)];
    let mut guards = vec![(dense.p_star, 2.0 * DEFAULT_TOL)];
    match *family {
        StateFamily::Werner => {
            cuts.push(Cut::Point(WERNER_UNSTEERABLE_POINT));
            guards.push((WERNER_UNSTEERABLE_POINT, 2.0 * WERNER_UNSTEERABLE_EPS));
        }
        StateFamily::Isotropic { d } => cuts.push(Cut::EndsAt(steerability_threshold(d)?)),
    }

    let mut segments: Vec<Segment> = Vec::new();
    for interval in partition(cuts) {
        let labels = RegionLabels::at(family, interval.representative())?;
        match segments.last_mut() {
            Some(prev) if prev.labels == labels => {
                prev.interval.hi = interval.hi;
                prev.interval.hi_closed = interval.hi_closed;
            }
            _ => segments.push(Segment { interval, labels }),
        }
    }
    let map = RegionMap { family: family.to_string(), segments };

    for i in 0..=grid {
        let p = i as f64 / grid as f64;
        if guards.iter().any(|&(x, w)| (p - x).abs() <= w) {
            continue;
        }
        let expected = RegionLabels::at(family, p)?;
        match map.segment_at(p) {
            Some(seg) if seg.labels == expected => {}
            _ => return Err(Error::InconsistentRegion(p)),
        }
    }
    Ok(map)
}
