//! Reference transients for the dunking problem: implicit time stepping of
//!
//! ```text
//!   σ ∂u/∂t = ∇·(κ ∇u)  in Ω,    κ ∂ₙu + 𝓑 u = 0  on the Robin boundary,
//! ```
//!
//! from u ≡ 1, recording the mean temperature U(t) = M(u), the boundary
//! mean H(u) and their relative split Δ = 1 − H/M. These series are the
//! ground truth that the lumped models and their error estimates are
//! measured against, so the module also carries its own accuracy control:
//! a separation-of-variables reconstruction from the discrete eigenpairs
//! (exact in time), and a refine-and-double gate that keeps halving h and
//! Δt until the observable drift falls under a caller-chosen tolerance.
//!
//! Time integration is BDF2 started with one backward-Euler step — both
//! A-stable, both factor-once-per-matrix. A time-dependent bath field
//! switches the boundary operator between slabs; the grid snaps to the
//! switch times and the history restarts there with a backward-Euler step.

use crate::assembly::{self, AssemblyError, DiscreteForms, MaterialField};
use crate::linalg::{Cholesky, LinalgError};
use crate::mesh::{Mesh, MeshError, P2Space};
use crate::robin_bounds::{RobinError, RobinField};
use crate::spectral::EigenPair;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransientError {
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Robin(#[from] RobinError),
    #[error("need at least {need} time steps, got {got}")]
    TooFewSteps { need: usize, got: usize },
    #[error("final time must be positive, got {0}")]
    BadFinalTime(f64),
}

/// The bath the body is dunked into.
#[derive(Clone, Debug)]
pub enum Bath {
    /// spatially uniform, steady coefficient B
    Uniform(f64),
    /// per-edge, piecewise-constant-in-time field
    Field(RobinField),
}

impl Bath {
    /// Reference strength used to define the slow time of a run: the
    /// uniform value, or the initial spatial mean of a field.
    pub fn reference_b(&self, mesh: &Mesh) -> Result<f64, TransientError> {
        match self {
            Bath::Uniform(b) => Ok(*b),
            Bath::Field(f) => {
                f.validate()?;
                let first = RobinField { segments: vec![f.segments[0].clone()] };
                let mut only = first;
                only.segments[0].t_end = f64::INFINITY;
                Ok(only.mean_on(mesh)?)
            }
        }
    }
}

/// Scalar observables of one transient, sampled on a time grid.
/// `times` is diffusion time; `slow_times = b·γ·times` with the
/// reference `b` of the run.
#[derive(Clone, Debug, Serialize)]
pub struct QoISeries {
    pub times: Vec<f64>,
    pub slow_times: Vec<f64>,
    pub u_avg: Vec<f64>,
    pub u_boundary_avg: Vec<f64>,
    pub u_delta: Vec<f64>,
    pub b: f64,
    pub gamma: f64,
}

impl QoISeries {
    /// Four-column CSV: slow time, mean, boundary mean, relative split.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("T,u_avg,u_boundary_avg,u_delta\n");
        for i in 0..self.slow_times.len() {
            out.push_str(&format!(
                "{:.10e},{:.10e},{:.10e},{:.10e}\n",
                self.slow_times[i], self.u_avg[i], self.u_boundary_avg[i], self.u_delta[i]
            ));
        }
        out
    }

    fn push(&mut self, t: f64, forms: &DiscreteForms, u: &[f64]) {
        let m = forms.domain_mean(u);
        let h = forms.boundary_mean(u);
        self.times.push(t);
        self.slow_times.push(self.b * self.gamma * t);
        self.u_avg.push(m);
        self.u_boundary_avg.push(h);
        self.u_delta.push(if m != 0.0 { (m - h) / m } else { 0.0 });
    }
}

/// A finished run: the observables plus the final field for a-posteriori
/// mesh comparisons.
pub struct TransientRun {
    pub series: QoISeries,
    pub final_field: Vec<f64>,
}

/// Integrate the dunking transient up to `t_final_slow` (in slow time of
/// the bath's reference strength) with `n_steps` nominal steps.
pub fn step_heat(
    mesh: &Mesh,
    space: &P2Space,
    mat: &MaterialField,
    bath: &Bath,
    t_final_slow: f64,
    n_steps: usize,
) -> Result<TransientRun, TransientError> {
    if n_steps < 2 {
        return Err(TransientError::TooFewSteps { need: 2, got: n_steps });
    }
    if !(t_final_slow > 0.0) {
        return Err(TransientError::BadFinalTime(t_final_slow));
    }
    let forms = assembly::assemble(mesh, space, mat)?;
    let b_ref = bath.reference_b(mesh)?;
    let t_final = t_final_slow / (b_ref * forms.gamma());

    // time grid in diffusion time, snapped to bath switch times
    let mut grid: Vec<f64> = (0..=n_steps)
        .map(|i| t_final * i as f64 / n_steps as f64)
        .collect();
    if let Bath::Field(f) = bath {
        for s in f.switch_times() {
            if s > 0.0 && s < t_final {
                grid.push(s);
            }
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * t_final);
    }

    // boundary operator per bath segment
    let robin_matrix = |t_mid: f64| match bath {
        Bath::Uniform(b) => forms.stiffness.add_scaled(&forms.boundary_mass, *b),
        Bath::Field(f) => {
            let seg = f.segment_index(t_mid);
            let weighted =
                assembly::assemble_boundary_weighted(mesh, space, |parent| {
                    f.segments[seg].value_on(parent)
                });
            forms.stiffness.add_scaled(&weighted, 1.0)
        }
    };
    let segment_of = |t_mid: f64| match bath {
        Bath::Uniform(_) => 0usize,
        Bath::Field(f) => f.segment_index(t_mid),
    };

    let n = forms.ndof;
    let mut u = vec![1.0; n];
    let mut u_prev: Option<Vec<f64>> = None; // u at the step before `u`
    let mut series = QoISeries {
        times: Vec::with_capacity(grid.len()),
        slow_times: Vec::with_capacity(grid.len()),
        u_avg: Vec::with_capacity(grid.len()),
        u_boundary_avg: Vec::with_capacity(grid.len()),
        u_delta: Vec::with_capacity(grid.len()),
        b: b_ref,
        gamma: forms.gamma(),
    };
    series.push(0.0, &forms, &u);

    // factorizations are cached on (segment, Δt); a segment change or an
    // uneven step triggers a refactor and a backward-Euler restart
    let mut cached: Option<(usize, f64, Cholesky, Cholesky)> = None;
    for w in grid.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let dt = t1 - t0;
        let seg = segment_of(0.5 * (t0 + t1));
        let stale = match &cached {
            Some((s, d, _, _)) => *s != seg || (*d - dt).abs() > 1e-12 * dt,
            None => true,
        };
        if stale {
            let a = robin_matrix(0.5 * (t0 + t1));
            // (M + Δt A) for the start step, (1.5 M + Δt A) for BDF2
            let mat_be = forms.mass.add_scaled(&a, dt);
            let mat_bdf2 = {
                let mut m15 = forms.mass.clone();
                for v in m15.values.iter_mut() {
                    *v *= 1.5;
                }
                m15.add_scaled(&a, dt)
            };
            cached = Some((seg, dt, Cholesky::factor(&mat_be)?, Cholesky::factor(&mat_bdf2)?));
            u_prev = None; // restart the multistep history
        }
        let (_, _, f_be, f_bdf2) = cached.as_ref().unwrap();
        let next = match &u_prev {
            None => {
                // backward Euler: (M + ΔtA) u¹ = M u⁰
                f_be.solve(&forms.mass.mul(&u))
            }
            Some(prev) => {
                // BDF2: (1.5M + ΔtA) u^{n+1} = M (2uⁿ − 0.5u^{n−1})
                let rhs: Vec<f64> = u
                    .iter()
                    .zip(prev)
                    .map(|(&a, &b)| 2.0 * a - 0.5 * b)
                    .collect();
                f_bdf2.solve(&forms.mass.mul(&rhs))
            }
        };
        u_prev = Some(std::mem::replace(&mut u, next));
        series.push(t1, &forms, &u);
    }
    Ok(TransientRun { series, final_field: u })
}

/// Series reconstruction of the same observables from discrete eigenpairs:
/// exact in time, truncated in modes. `slow_times` is interpreted in the
/// slow time of `b`.
pub fn sov_series(
    pairs: &[EigenPair],
    forms: &DiscreteForms,
    b: f64,
    slow_times: &[f64],
) -> QoISeries {
    let gamma = forms.gamma();
    // u(t) = Σ c_k e^{−λ_k t} ψ_k with c_k = ψ_kᵀ M 1 = |Ω| M(ψ_k)
    let weights: Vec<(f64, f64, f64)> = pairs
        .iter()
        .map(|p| {
            let c = crate::linalg::dot(&forms.mass_one, &p.vector);
            (c, forms.domain_mean(&p.vector), forms.boundary_mean(&p.vector))
        })
        .collect();
    let mut series = QoISeries {
        times: Vec::with_capacity(slow_times.len()),
        slow_times: slow_times.to_vec(),
        u_avg: Vec::with_capacity(slow_times.len()),
        u_boundary_avg: Vec::with_capacity(slow_times.len()),
        u_delta: Vec::with_capacity(slow_times.len()),
        b,
        gamma,
    };
    for &ts in slow_times {
        let t = ts / (b * gamma);
        let mut m = 0.0;
        let mut h = 0.0;
        for (pair, &(c, mk, hk)) in pairs.iter().zip(&weights) {
            let decay = (-pair.value * t).exp();
            m += c * mk * decay;
            h += c * hk * decay;
        }
        series.times.push(t);
        series.u_avg.push(m);
        series.u_boundary_avg.push(h);
        series.u_delta.push(if m != 0.0 { (m - h) / m } else { 0.0 });
    }
    series
}

/// Carry a P2 field from a mesh onto its `refine_traced` child: each fine
/// node is located in its parent triangle and the coarse quadratic is
/// evaluated there. Exact for nested meshes.
pub fn transfer_p2_field(
    coarse_mesh: &Mesh,
    coarse_space: &P2Space,
    coarse_field: &[f64],
    fine_mesh: &Mesh,
    fine_space: &P2Space,
    parents: &[usize],
) -> Vec<f64> {
    let mut out = vec![0.0; fine_space.ndof()];
    for (ft, &ct) in parents.iter().enumerate() {
        let cnodes = coarse_space.tri_nodes(coarse_mesh, ct);
        let [p0, p1, p2] = coarse_mesh.triangles[ct].v.map(|v| coarse_mesh.vertices[v]);
        let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        for node in fine_space.tri_nodes(fine_mesh, ft) {
            let q = fine_space.node_xy[node];
            // barycentric coordinates of q in the parent triangle
            let l1 = ((q[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (q[1] - p0[1])) / det;
            let l2 = ((p1[0] - p0[0]) * (q[1] - p0[1]) - (q[0] - p0[0]) * (p1[1] - p0[1])) / det;
            let l = [1.0 - l1 - l2, l1, l2];
            let shapes = [
                l[0] * (2.0 * l[0] - 1.0),
                l[1] * (2.0 * l[1] - 1.0),
                l[2] * (2.0 * l[2] - 1.0),
                4.0 * l[0] * l[1],
                4.0 * l[1] * l[2],
                4.0 * l[2] * l[0],
            ];
            out[node] = cnodes
                .iter()
                .zip(shapes)
                .map(|(&cn, s)| coarse_field[cn] * s)
                .sum();
        }
    }
    out
}

/// Drift between a run and its refined-and-doubled successor.
///
/// The split Δ develops from a √t boundary layer whose early samples
/// converge slowly under refinement and are never consumed by the
/// estimates (they only read Δ after a burn-in time), so the Δ drift is
/// measured on T ≥ `t0` only; the mean is tracked everywhere.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RefinementDrift {
    /// max over the shared time grid of |ΔU|
    pub u_avg: f64,
    /// max over the shared grid with T ≥ t0 of |ΔΔ|
    pub u_delta_late: f64,
    /// final-field difference in the (relative) H¹ norm
    pub h1_final: f64,
}

impl RefinementDrift {
    /// The scalar the convergence gate compares against its tolerance.
    pub fn indicator(&self) -> f64 {
        self.u_avg.max(self.u_delta_late).max(self.h1_final)
    }
}

/// A gated transient: the finest run plus the drift that justified
/// stopping there.
pub struct GatedTransient {
    pub series: QoISeries,
    pub drift: RefinementDrift,
    pub rounds: usize,
    pub ndof: usize,
    pub n_steps: usize,
}

/// Keep refining the mesh and doubling the steps until the observable
/// drift between consecutive rounds falls below `tol` (or `max_rounds`
/// is exhausted — the caller can inspect the drift to see which).
/// `t0_slow` is the burn-in before the Δ drift starts counting.
pub fn converged_transient(
    mesh0: &Mesh,
    mat: &MaterialField,
    bath: &Bath,
    t_final_slow: f64,
    steps0: usize,
    tol: f64,
    t0_slow: f64,
    max_rounds: usize,
) -> Result<GatedTransient, TransientError> {
    let mut mesh = mesh0.clone();
    let mut space = P2Space::build(&mesh);
    let mut steps = steps0;
    let mut run = step_heat(&mesh, &space, mat, bath, t_final_slow, steps)?;
    let mut drift = RefinementDrift {
        u_avg: f64::INFINITY,
        u_delta_late: f64::INFINITY,
        h1_final: f64::INFINITY,
    };
    let mut rounds = 0;
    for _ in 0..max_rounds {
        let (fine_mesh, parents) = mesh.refine_traced();
        let fine_space = P2Space::build(&fine_mesh);
        let fine_steps = steps * 2;
        let fine_run = step_heat(&fine_mesh, &fine_space, mat, bath, t_final_slow, fine_steps)?;
        drift = drift_between(
            &mesh, &space, &run, &fine_mesh, &fine_space, &fine_run, &parents, mat, t0_slow,
        )?;
        mesh = fine_mesh;
        space = fine_space;
        steps = fine_steps;
        run = fine_run;
        rounds += 1;
        if drift.indicator() <= tol {
            break;
        }
    }
    Ok(GatedTransient {
        ndof: space.ndof(),
        series: run.series,
        drift,
        rounds,
        n_steps: steps,
    })
}

#[allow(clippy::too_many_arguments)]
fn drift_between(
    coarse_mesh: &Mesh,
    coarse_space: &P2Space,
    coarse: &TransientRun,
    fine_mesh: &Mesh,
    fine_space: &P2Space,
    fine: &TransientRun,
    parents: &[usize],
    mat: &MaterialField,
    t0_slow: f64,
) -> Result<RefinementDrift, TransientError> {
    // QoI drift on the coarse grid; with doubled uniform steps the grids
    // nest two-to-one, and snapped extra points are matched by time lookup
    let mut du = 0.0f64;
    let mut dd = 0.0f64;
    for (i, &t) in coarse.series.times.iter().enumerate() {
        let j = match fine
            .series
            .times
            .binary_search_by(|probe| probe.total_cmp(&t))
        {
            Ok(j) => j,
            Err(j) => {
                // nearest snapped neighbor; tolerate roundoff-level offsets
                let cand = [j.saturating_sub(1), j.min(fine.series.times.len() - 1)];
                let best = cand
                    .into_iter()
                    .min_by(|&a, &b| {
                        (fine.series.times[a] - t)
                            .abs()
                            .total_cmp(&(fine.series.times[b] - t).abs())
                    })
                    .unwrap();
                if (fine.series.times[best] - t).abs() > 1e-9 * (1.0 + t) {
                    continue;
                }
                best
            }
        };
        du = du.max((coarse.series.u_avg[i] - fine.series.u_avg[j]).abs());
        if coarse.series.slow_times[i] >= t0_slow {
            dd = dd.max((coarse.series.u_delta[i] - fine.series.u_delta[j]).abs());
        }
    }

    // H¹ drift of the final field, relative to the fine solution
    let lifted = transfer_p2_field(
        coarse_mesh,
        coarse_space,
        &coarse.final_field,
        fine_mesh,
        fine_space,
        parents,
    );
    let forms = assembly::assemble(fine_mesh, fine_space, mat)?;
    let diff: Vec<f64> = lifted
        .iter()
        .zip(&fine.final_field)
        .map(|(&a, &b)| a - b)
        .collect();
    let h1 = |v: &[f64]| {
        (forms.stiffness.quadratic_form(v) + forms.mass.quadratic_form(v)).sqrt()
    };
    let denom = h1(&fine.final_field).max(forms.volume.sqrt());
    Ok(RefinementDrift {
        u_avg: du,
        u_delta_late: dd,
        h1_final: h1(&diff) / denom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use crate::robin_bounds::RobinSegment;
    use crate::spectral::eigenpairs;

    fn square(cells: usize) -> (Mesh, P2Space) {
        let mesh = Mesh::rectangle(1.0, 1.0, cells, cells);
        let space = P2Space::build(&mesh);
        (mesh, space)
    }

    #[test]
    fn starts_at_one_and_decays_monotonically() {
        let (mesh, space) = square(4);
        let run = step_heat(&mesh, &space, &MaterialField::uniform(), &Bath::Uniform(0.5), 2.0, 80)
            .unwrap();
        let s = &run.series;
        assert!((s.u_avg[0] - 1.0).abs() < 1e-12);
        assert!(s.u_delta[0].abs() < 1e-12);
        for w in s.u_avg.windows(2) {
            assert!(w[1] < w[0]);
        }
        // the mean never outruns the lumped model
        for (t, u) in s.slow_times.iter().zip(&s.u_avg) {
            assert!(*u >= (-t).exp() - 1e-9, "T={t}: {u}");
        }
        // boundary runs cooler than the bulk
        for i in 1..s.u_avg.len() {
            assert!(s.u_boundary_avg[i] < s.u_avg[i]);
            assert!(s.u_delta[i] > 0.0);
        }
    }

    #[test]
    fn matches_the_eigenexpansion() {
        // BDF2 against the separation-of-variables reconstruction on the
        // same mesh: only time discretization separates them
        let (mesh, space) = square(5);
        let mat = MaterialField::uniform();
        let b = 0.4;
        let run = step_heat(&mesh, &space, &mat, &Bath::Uniform(b), 2.0, 400).unwrap();
        let forms = assembly::assemble(&mesh, &space, &mat).unwrap();
        let pairs = eigenpairs(&forms, b, 25).unwrap();
        let sov = sov_series(&pairs, &forms, b, &run.series.slow_times);
        let worst = run
            .series
            .u_avg
            .iter()
            .zip(&sov.u_avg)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        println!("max |BDF2 − SoV| = {worst:.2e}");
        assert!(worst < 1e-4);
        // the series starts within the truncation tail of 1
        assert!((sov.u_avg[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn doubling_steps_shows_second_order_time_accuracy() {
        let (mesh, space) = square(4);
        let mat = MaterialField::uniform();
        let bath = Bath::Uniform(1.0);
        let forms = assembly::assemble(&mesh, &space, &mat).unwrap();
        let pairs = eigenpairs(&forms, 1.0, 30).unwrap();
        // measure after the initial layer: the √t startup limits the
        // max-norm order near T = 0, but the smooth regime shows BDF2's
        // clean second-order contraction
        let mut errs = Vec::new();
        for steps in [25, 50, 100] {
            let run = step_heat(&mesh, &space, &mat, &bath, 1.5, steps).unwrap();
            let sov = sov_series(&pairs, &forms, 1.0, &run.series.slow_times);
            let err = run
                .series
                .slow_times
                .iter()
                .zip(run.series.u_avg.iter().zip(&sov.u_avg))
                .filter(|(t, _)| **t >= 0.5)
                .map(|(_, (a, b))| (a - b).abs())
                .fold(0.0f64, f64::max);
            errs.push(err);
        }
        println!("time errors: {errs:?}");
        let r1 = errs[0] / errs[1];
        let r2 = errs[1] / errs[2];
        assert!(r1 > 3.0 && r2 > 3.0, "expected ~4x contraction, got {r1:.2} {r2:.2}");
    }

    #[test]
    fn piecewise_bath_tracks_each_slab() {
        // strong bath then weak bath: the decay rate should visibly drop
        // at the switch, and stay between the pure-slab rates
        let (mesh, space) = square(4);
        let field = RobinField {
            segments: vec![
                RobinSegment::uniform(0.05, 2.0),
                RobinSegment::uniform(f64::INFINITY, 0.2),
            ],
        };
        let bath = Bath::Field(field);
        let run = step_heat(&mesh, &space, &MaterialField::uniform(), &bath, 1.0, 120).unwrap();
        let s = &run.series;
        // reference b is the initial mean
        assert!((s.b - 2.0).abs() < 1e-12);
        // the switch time is on the grid exactly
        assert!(s.times.iter().any(|&t| (t - 0.05).abs() < 1e-14));
        // log-slope before vs after the switch
        let idx = s.times.iter().position(|&t| t > 0.06).unwrap();
        let early = (s.u_avg[1].ln() - s.u_avg[0].ln()) / (s.times[1] - s.times[0]);
        let late = (s.u_avg[idx + 1].ln() - s.u_avg[idx].ln()) / (s.times[idx + 1] - s.times[idx]);
        println!("cooling rates: early {early:.3} late {late:.3}");
        assert!(early < -4.0 * late.abs(), "rate should drop sharply at the switch");
        for w in s.u_avg.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn field_transfer_reproduces_quadratics() {
        let mesh = Mesh::from_spec(&DomainSpec::right_triangle(0.5).unwrap(), 0.3).unwrap();
        let space = P2Space::build(&mesh);
        let f = |p: [f64; 2]| 1.0 + 2.0 * p[0] - p[1] + 3.0 * p[0] * p[1] - p[0] * p[0];
        let coarse: Vec<f64> = space.node_xy.iter().map(|&p| f(p)).collect();
        let (fine, parents) = mesh.refine_traced();
        let fine_space = P2Space::build(&fine);
        let lifted = transfer_p2_field(&mesh, &space, &coarse, &fine, &fine_space, &parents);
        for (node, &p) in fine_space.node_xy.iter().enumerate() {
            assert!(
                (lifted[node] - f(p)).abs() < 1e-12,
                "node {node} at {p:?}: {} vs {}",
                lifted[node],
                f(p)
            );
        }
    }

    #[test]
    fn gate_converges_on_an_easy_problem() {
        let mesh = Mesh::rectangle(1.0, 1.0, 3, 3);
        let gated = converged_transient(
            &mesh,
            &MaterialField::uniform(),
            &Bath::Uniform(0.3),
            1.0,
            40,
            5e-5,
            0.2,
            4,
        )
        .unwrap();
        println!(
            "gate: rounds={} ndof={} steps={} drift=({:.2e}, {:.2e}, {:.2e})",
            gated.rounds,
            gated.ndof,
            gated.n_steps,
            gated.drift.u_avg,
            gated.drift.u_delta_late,
            gated.drift.h1_final
        );
        assert!(gated.drift.indicator() <= 5e-5);
        assert!(gated.rounds >= 1);
        assert!((gated.series.u_avg[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let (mesh, space) = square(2);
        let run = step_heat(&mesh, &space, &MaterialField::uniform(), &Bath::Uniform(1.0), 0.5, 10)
            .unwrap();
        let csv = run.series.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "T,u_avg,u_boundary_avg,u_delta");
        assert_eq!(lines.count(), 11);
    }

    #[test]
    fn rejects_degenerate_requests() {
        let (mesh, space) = square(2);
        let mat = MaterialField::uniform();
        assert!(matches!(
            step_heat(&mesh, &space, &mat, &Bath::Uniform(1.0), 1.0, 1),
            Err(TransientError::TooFewSteps { .. })
        ));
        assert!(matches!(
            step_heat(&mesh, &space, &mat, &Bath::Uniform(1.0), -1.0, 10),
            Err(TransientError::BadFinalTime(_))
        ));
    }
}
