//! Bath fields that vary in space and time, and the rigorous envelopes
//! they put around the mean temperature.
//!
//! Real dunks rarely have a perfectly uniform, perfectly steady transfer
//! coefficient: stirring decays, films form, parts of the boundary are
//! better coupled than others. A [`RobinField`] captures this as a
//! piecewise-constant-in-time, per-boundary-edge coefficient 𝓑. The theory
//! then brackets the true mean temperature between the transients of the
//! two uniform baths 𝓑_inf and 𝓑_sup:
//!
//! ```text
//!   exp(−𝓑_sup γ t)  ≤  U(t)  ≤  exp(−𝓑_inf γ t) + E(𝓑_inf)
//! ```
//!
//! where E is the first-order model error of the weaker bath. The width of
//! that bracket at its worst is g(r) with r = (𝓑_sup − 𝓑_inf)/𝓑_sup — a
//! universal function of the relative spread alone — so a cheap scalar
//! decides whether bath uncertainty or model error dominates the budget.

use std::collections::BTreeMap;
use thiserror::Error;

use crate::geometry::EdgeTag;
use crate::mesh::Mesh;
use serde::{Deserialize, Serialize};

#[derive(Debug, Error, PartialEq)]
pub enum RobinError {
    #[error("a bath field needs at least one segment")]
    Empty,
    #[error("segment {index} ends at {t_end} which does not increase on the previous segment")]
    NotIncreasing { index: usize, t_end: f64 },
    #[error("the last segment must extend to infinity, found t_end = {0}")]
    LastSegmentFinite(f64),
    #[error("bath values must be nonnegative and finite, found {0}")]
    BadValue(f64),
    #[error("the bath vanishes identically; nothing decays")]
    AllZero,
    #[error("spatial mean requested on a mesh without Robin edges")]
    NoRobinBoundary,
    #[error("the spatial-mean bound only holds for steady fields")]
    TimeDependentMean,
    #[error("averaging window [{t_start}, {t_end}] is empty or unbounded")]
    BadWindow { t_start: f64, t_end: f64 },
}

/// `t_end = ∞` marks the last segment, but JSON has no infinity: store it
/// as `null` and read `null` back as infinity.
mod open_end {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// One time slab of the bath: per-parent-edge coefficients, with a default
/// for edges not listed. `t_end` is in diffusion time; the last segment of
/// a field must have `t_end = f64::INFINITY`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RobinSegment {
    #[serde(with = "open_end")]
    pub t_end: f64,
    pub default: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_edge: BTreeMap<usize, f64>,
}

impl RobinSegment {
    pub fn uniform(t_end: f64, value: f64) -> Self {
        Self { t_end, default: value, per_edge: BTreeMap::new() }
    }

    pub fn value_on(&self, parent: usize) -> f64 {
        self.per_edge.get(&parent).copied().unwrap_or(self.default)
    }
}

/// Piecewise-constant bath coefficient 𝓑(x, t) over the Robin boundary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RobinField {
    pub segments: Vec<RobinSegment>,
}

impl RobinField {
    /// A steady uniform bath — the degenerate field the envelopes collapse on.
    pub fn uniform(value: f64) -> Self {
        Self { segments: vec![RobinSegment::uniform(f64::INFINITY, value)] }
    }

    pub fn validate(&self) -> Result<(), RobinError> {
        if self.segments.is_empty() {
            return Err(RobinError::Empty);
        }
        let mut prev = 0.0;
        let mut any_positive = false;
        for (index, seg) in self.segments.iter().enumerate() {
            if !(seg.t_end > prev) {
                return Err(RobinError::NotIncreasing { index, t_end: seg.t_end });
            }
            prev = seg.t_end;
            for &v in std::iter::once(&seg.default).chain(seg.per_edge.values()) {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(RobinError::BadValue(v));
                }
                any_positive |= v > 0.0;
            }
        }
        let last = self.segments.last().unwrap().t_end;
        if last.is_finite() {
            return Err(RobinError::LastSegmentFinite(last));
        }
        if !any_positive {
            return Err(RobinError::AllZero);
        }
        Ok(())
    }

    pub fn is_time_dependent(&self) -> bool {
        self.segments.len() > 1
    }

    pub fn segment_index(&self, t_diffusion: f64) -> usize {
        self.segments
            .iter()
            .position(|s| t_diffusion < s.t_end)
            .unwrap_or(self.segments.len() - 1)
    }

    pub fn value_at(&self, t_diffusion: f64, parent: usize) -> f64 {
        self.segments[self.segment_index(t_diffusion)].value_on(parent)
    }

    /// Interior segment switch times, for snapping integration grids.
    pub fn switch_times(&self) -> Vec<f64> {
        self.segments
            .iter()
            .map(|s| s.t_end)
            .filter(|t| t.is_finite())
            .collect()
    }

    fn robin_parents(mesh: &Mesh) -> Vec<(usize, f64)> {
        // collapse to one entry per parent edge with its total Robin length
        let mut lengths: BTreeMap<usize, f64> = BTreeMap::new();
        for e in &mesh.boundary {
            if e.tag == EdgeTag::Robin {
                *lengths.entry(e.parent).or_insert(0.0) += mesh.edge_length(e.a, e.b);
            }
        }
        lengths.into_iter().collect()
    }

    /// Infimum of 𝓑 over the mesh's Robin boundary and all times.
    pub fn inf_on(&self, mesh: &Mesh) -> f64 {
        let parents = Self::robin_parents(mesh);
        self.segments
            .iter()
            .flat_map(|s| parents.iter().map(move |&(p, _)| s.value_on(p)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Supremum of 𝓑 over the mesh's Robin boundary and all times.
    pub fn sup_on(&self, mesh: &Mesh) -> f64 {
        let parents = Self::robin_parents(mesh);
        self.segments
            .iter()
            .flat_map(|s| parents.iter().map(move |&(p, _)| s.value_on(p)))
            .fold(0.0, f64::max)
    }

    /// Length-weighted spatial mean of 𝓑, defined only for steady fields:
    /// the sharpened one-sided bound built on the mean is not valid once
    /// the field moves in time, so asking for it is an error then.
    pub fn mean_on(&self, mesh: &Mesh) -> Result<f64, RobinError> {
        if self.is_time_dependent() {
            return Err(RobinError::TimeDependentMean);
        }
        let parents = Self::robin_parents(mesh);
        let total: f64 = parents.iter().map(|&(_, l)| l).sum();
        if total == 0.0 {
            return Err(RobinError::NoRobinBoundary);
        }
        let seg = &self.segments[0];
        Ok(parents.iter().map(|&(p, l)| seg.value_on(p) * l).sum::<f64>() / total)
    }

    /// Time average of the spatial mean over a finite window
    /// `[t_start, t_end]` of diffusion time. Fluctuating baths (a stirred
    /// quench, a conjugate flow sampled into steps) are summarized by one
    /// effective coefficient this way; choosing `t_start` past the initial
    /// transient discards the start-up layer that would bias the average.
    pub fn windowed_mean_on(
        &self,
        mesh: &Mesh,
        t_start: f64,
        t_end: f64,
    ) -> Result<f64, RobinError> {
        if !(t_start >= 0.0) || !(t_end > t_start) || !t_end.is_finite() {
            return Err(RobinError::BadWindow { t_start, t_end });
        }
        let parents = Self::robin_parents(mesh);
        let total: f64 = parents.iter().map(|&(_, l)| l).sum();
        if total == 0.0 {
            return Err(RobinError::NoRobinBoundary);
        }
        let mut acc = 0.0;
        let mut seg_start = 0.0_f64;
        for seg in &self.segments {
            let lo = seg_start.max(t_start);
            let hi = seg.t_end.min(t_end);
            if hi > lo {
                let mean =
                    parents.iter().map(|&(p, l)| seg.value_on(p) * l).sum::<f64>() / total;
                acc += mean * (hi - lo);
            }
            seg_start = seg.t_end;
        }
        Ok(acc / (t_end - t_start))
    }
}

/// The universal envelope-gap function
/// g(r) = (1−r)^((1−r)/r) − (1−r)^(1/r) = r (1−r)^((1−r)/r):
/// the largest possible spread between the decaying exponentials of two
/// baths whose strengths differ by the relative amount r ∈ [0, 1].
/// For small r it behaves like r/e.
pub fn envelope_gap(r: f64) -> f64 {
    assert!((0.0..=1.0).contains(&r), "relative spread must lie in [0,1]");
    if r == 0.0 {
        return 0.0;
    }
    if r == 1.0 {
        return 1.0;
    }
    let base = 1.0 - r;
    r * base.powf(base / r)
}

/// Two-sided envelope around the mean temperature of a dunk with bath
/// field 𝓑, evaluated in diffusion time.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TransferEnvelope {
    pub b_inf: f64,
    pub b_sup: f64,
    /// spatial mean, present only for steady fields
    pub b_mean: Option<f64>,
    pub gamma: f64,
    /// first-order model error of the weak bath, E(𝓑_inf) = φ𝓑_inf/(γe)
    pub e_inf: f64,
}

impl TransferEnvelope {
    /// Build from a field on a mesh, with `phi`/`gamma` of the shape.
    pub fn new(field: &RobinField, mesh: &Mesh, phi: f64, gamma: f64) -> Result<Self, RobinError> {
        field.validate()?;
        let b_inf = field.inf_on(mesh);
        let b_sup = field.sup_on(mesh);
        let b_mean = field.mean_on(mesh).ok();
        Ok(Self {
            b_inf,
            b_sup,
            b_mean,
            gamma,
            e_inf: phi * b_inf / (gamma * std::f64::consts::E),
        })
    }

    /// Guaranteed floor: the strongest uniform bath cools fastest.
    pub fn lower(&self, t_diffusion: f64) -> f64 {
        (-self.b_sup * self.gamma * t_diffusion).exp()
    }

    /// Guaranteed ceiling: the weakest bath's lumped model plus its error.
    pub fn upper(&self, t_diffusion: f64) -> f64 {
        (-self.b_inf * self.gamma * t_diffusion).exp() + self.e_inf
    }

    pub fn midpoint(&self, t_diffusion: f64) -> f64 {
        0.5 * (self.lower(t_diffusion) + self.upper(t_diffusion))
    }

    /// Sharper floor from the spatial mean, available only for steady
    /// fields (time-averaging arguments fail otherwise).
    pub fn lower_from_mean(&self, t_diffusion: f64) -> Option<f64> {
        self.b_mean.map(|bm| (-bm * self.gamma * t_diffusion).exp())
    }

    /// Relative spread r = (𝓑_sup − 𝓑_inf)/𝓑_sup.
    pub fn spread(&self) -> f64 {
        if self.b_sup == 0.0 {
            0.0
        } else {
            (self.b_sup - self.b_inf) / self.b_sup
        }
    }

    /// Spread measured against the mean instead of the supremum,
    /// r′ = (𝓑̄ − 𝓑_inf)/𝓑̄, for the one-sided sharpened bracket.
    pub fn spread_from_mean(&self) -> Option<f64> {
        self.b_mean.map(|bm| if bm == 0.0 { 0.0 } else { (bm - self.b_inf) / bm })
    }

    /// Worst-case half-width of the two-sided envelope:
    /// G = (g(r) + E(𝓑_inf))/2.
    pub fn gap(&self) -> f64 {
        0.5 * (envelope_gap(self.spread()) + self.e_inf)
    }

    /// Half-width of the one-sided bracket built on the mean, when defined.
    pub fn gap_from_mean(&self) -> Option<f64> {
        self.spread_from_mean()
            .map(|r| 0.5 * (envelope_gap(r) + self.e_inf))
    }
}
