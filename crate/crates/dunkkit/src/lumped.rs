//! Space-free models of the dunking transient and what they cost.
//!
//! Once a body at uniform temperature 1 is dunked into a bath at 0, the
//! classical lumped model says the mean temperature is exp(−T) in the slow
//! time T = Bγt. That is the B → 0 limit; at finite B the decay rate drops
//! below Bγ and the profile develops structure. The corrected models here
//! use the functionals of [`crate::sensitivity`] to push the validity out
//! by one order in B, and — the part that makes them usable — come with
//! a-priori error estimates in terms of the corrected Biot number
//! Bi′ = φB/γ, so the modelling error can be budgeted before committing to
//! a model. Measured errors against a reference transient close the loop.
//!
//! Everything is a plain function of T; no mesh enters this module.

use crate::sensitivity::Functionals;
use crate::spectral::{rate_approximants, RateApproximants};
use serde::Serialize;

/// A lumped description of one dunking configuration: the dimensionless
/// bath strength `b` plus the shape functionals.
#[derive(Clone, Copy, Debug)]
pub struct LumpedModel {
    pub b: f64,
    pub functionals: Functionals,
}

/// A-priori structure of the first-order model error
/// e(T) = U(T) − exp(−T).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FirstOrderError {
    /// small-B limit of the peak error, Bi′/e
    pub asymptotic: f64,
    /// slow time at which the peak sits, 1 + Bi′/2
    pub peak_slow_time: f64,
    /// rigorous bound valid for every B: √Bi′ / 2
    pub upper_bound: f64,
}

impl LumpedModel {
    pub fn new(b: f64, functionals: Functionals) -> Self {
        assert!(b > 0.0, "bath strength must be positive");
        Self { b, functionals }
    }

    /// Biot number on the volume-to-surface length scale, Bi = B/γ.
    pub fn biot(&self) -> f64 {
        self.b / self.functionals.gamma
    }

    /// Conduction-corrected Biot number Bi′ = φB/γ: the quantity that
    /// actually measures departure from lumped behaviour.
    pub fn biot_corrected(&self) -> f64 {
        self.functionals.phi * self.b / self.functionals.gamma
    }

    /// Slow time T = Bγt for a time in diffusion units.
    pub fn slow_time(&self, t_diffusion: f64) -> f64 {
        self.b * self.functionals.gamma * t_diffusion
    }

    /// First-order (classical lumped) mean temperature, exp(−T).
    pub fn first_order(&self, t_slow: f64) -> f64 {
        (-t_slow).exp()
    }

    /// Second-order mean temperature in resummed form,
    /// exp(−T / (1 + Bi′)). The rational rate keeps the model a valid
    /// decay for every B, unlike the truncated polynomial rate.
    pub fn second_order(&self, t_slow: f64) -> f64 {
        (-t_slow / (1.0 + self.biot_corrected())).exp()
    }

    /// Second-order prediction of the relative core–surface temperature
    /// split Δ = (mean − boundary mean)/mean, which plateaus at
    /// Bi′/(1 + Bi′) once the slow mode dominates.
    pub fn delta_plateau(&self) -> f64 {
        let bp = self.biot_corrected();
        bp / (1.0 + bp)
    }

    /// The ladder of decay-rate approximants at this `b`.
    pub fn rates(&self) -> RateApproximants {
        rate_approximants(self.b, &self.functionals)
    }

    pub fn first_order_error(&self) -> FirstOrderError {
        let bp = self.biot_corrected();
        FirstOrderError {
            asymptotic: bp / std::f64::consts::E,
            peak_slow_time: 1.0 + 0.5 * bp,
            upper_bound: 0.5 * bp.sqrt(),
        }
    }

    /// Small-B limit of the peak second-order model error,
    /// (|γχ − γ²Υ − φ²|/e + γ²Υ) · Bi².
    pub fn second_order_error_asymptotic(&self) -> f64 {
        let f = &self.functionals;
        let third = (f.gamma_chi() - f.gamma_sq_upsilon() - f.phi * f.phi).abs();
        (third / std::f64::consts::E + f.gamma_sq_upsilon()) * self.biot().powi(2)
    }

    /// Bound on the relative error of the Δ plateau on T ≥ `t0_slow`:
    /// (C0/T0 + C1) · Bi with C0 = γ²Υ/(eφ) and C1 = |γχ − γ²Υ − φ²|/φ.
    /// The 1/T0 term pays for the burn-in of the slow mode.
    pub fn delta_error_bound(&self, t0_slow: f64) -> f64 {
        assert!(t0_slow > 0.0, "the plateau needs a positive burn-in time");
        let f = &self.functionals;
        let c0 = f.gamma_sq_upsilon() / (std::f64::consts::E * f.phi);
        let c1 = (f.gamma_chi() - f.gamma_sq_upsilon() - f.phi * f.phi).abs() / f.phi;
        (c0 / t0_slow + c1) * self.biot()
    }
}

/// Model errors measured against a reference transient sampled on
/// `slow_times`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MeasuredErrors {
    /// peak of U_ref − exp(−T), signed: the reference never dips below the
    /// lumped model, so a negative value flags a broken reference
    pub first_order: f64,
    /// peak of |U_ref − U₂(T)|
    pub second_order: f64,
    /// peak of |Δ_ref − Δ₂|/Δ₂ over T ≥ t0; None when no sample qualifies
    pub delta_rel: Option<f64>,
}

pub fn measured_errors(
    slow_times: &[f64],
    u_avg: &[f64],
    u_delta: &[f64],
    model: &LumpedModel,
    t0_slow: f64,
) -> MeasuredErrors {
    let mut first = f64::NEG_INFINITY;
    let mut second = 0.0f64;
    let mut delta: Option<f64> = None;
    let plateau = model.delta_plateau();
    for ((&t, &u), &d) in slow_times.iter().zip(u_avg).zip(u_delta) {
        first = first.max(u - model.first_order(t));
        second = second.max((u - model.second_order(t)).abs());
        if t >= t0_slow {
            let rel = (d - plateau).abs() / plateau;
            delta = Some(delta.map_or(rel, |cur: f64| cur.max(rel)));
        }
    }
    MeasuredErrors { first_order: first, second_order: second, delta_rel: delta }
}

/// Physical inputs of a dunking problem, SI or any coherent unit system.
#[derive(Clone, Copy, Debug)]
pub struct DimensionalDunk {
    /// surface heat-transfer coefficient h
    pub heat_transfer_coefficient: f64,
    /// length ℓ used to nondimensionalize the geometry
    pub length_scale: f64,
    /// thermal conductivity k
    pub conductivity: f64,
    /// volumetric heat capacity ρc
    pub volumetric_heat_capacity: f64,
}

impl DimensionalDunk {
    /// Dimensionless bath strength B = hℓ/k.
    pub fn bath_strength(&self) -> f64 {
        self.heat_transfer_coefficient * self.length_scale / self.conductivity
    }

    /// Diffusion time ρcℓ²/k: dimensional times divide by this to give the
    /// nondimensional time the solvers use.
    pub fn diffusion_time(&self) -> f64 {
        self.volumetric_heat_capacity * self.length_scale * self.length_scale / self.conductivity
    }

    /// Convert a dimensional time to slow time for a given shape.
    pub fn slow_time(&self, functionals: &Functionals, t_dimensional: f64) -> f64 {
        self.bath_strength() * functionals.gamma * t_dimensional / self.diffusion_time()
    }
}
