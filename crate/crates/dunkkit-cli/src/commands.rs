//! Implementations of the analysis subcommands: `phi`, `spectrum`,
//! `transient`, `estimate`, and `bounds`.

use std::collections::{BTreeMap, BTreeSet};

use dunkkit::assembly::{assemble, MaterialField};
use dunkkit::geometry::EdgeTag;
use dunkkit::lumped::{measured_errors, LumpedModel, MeasuredErrors};
use dunkkit::mesh::{Mesh, P2Space};
use dunkkit::robin_bounds::{RobinField, RobinSegment, TransferEnvelope};
use dunkkit::sensitivity::{
    mu_payne_weinberger, phi_lower_bound, phi_upper_bound, refinement_study, FunctionalRecord,
    Functionals, RefinementStudy,
};
use dunkkit::spectral::{first_eigenpair, rate_approximants, second_neumann_eigenvalue};
use dunkkit::transient::{converged_transient, step_heat, Bath};

use crate::builtins::Builtin;
use crate::sweep::parallel_map;
use crate::table::{Cell, OutputOpts, Table};
use crate::CliError;

fn lib<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Message(e.to_string())
}

/// Refine `levels − 1` times from the coarse mesh (so `levels` meshes in
/// the study sense; the last one is returned).
fn refined_mesh(mesh0: &Mesh, levels: usize) -> Mesh {
    let mut mesh = mesh0.clone();
    for _ in 1..levels.max(1) {
        mesh = mesh.refine();
    }
    mesh
}

// ---------------------------------------------------------------- phi --

#[derive(serde::Serialize)]
pub struct PhiReport {
    pub case: String,
    pub method: &'static str,
    pub functionals: FunctionalRecord,
    /// Per-level mesh data when a refinement study ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub study: Option<RefinementStudy>,
    /// Diameter-based lower bound on the second Neumann eigenvalue
    /// (valid for convex domains).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_diameter_bound: Option<f64>,
    /// Upper bound on phi from the uniform-material phi plus the
    /// composition variance (heterogeneous cases only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_upper_heterogeneous: Option<f64>,
    /// Interior-ball lower bound on phi from (in-radius, volume, gamma).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_lower_feature: Option<f64>,
}

pub fn run_phi(builtin: &Builtin, levels: usize) -> Result<PhiReport, CliError> {
    if let Some(f) = builtin.closed_form() {
        return Ok(PhiReport {
            case: builtin.name.clone(),
            method: "closed-form",
            functionals: FunctionalRecord::new(&f, None),
            study: None,
            mu_diameter_bound: Some(mu_payne_weinberger(builtin.spec.diameter())),
            phi_upper_heterogeneous: None,
            phi_lower_feature: None,
        });
    }

    let mesh0 = builtin.coarse_mesh()?;
    let study = refinement_study(&mesh0, &builtin.material, levels).map_err(lib)?;
    let f = study.functionals();

    let phi_upper_heterogeneous = if builtin.heterogeneous {
        let uniform = refinement_study(&mesh0, &MaterialField::uniform(), levels).map_err(lib)?;
        let variance = builtin.material.sigma_variance(&mesh0);
        let mu_lb = mu_payne_weinberger(builtin.spec.diameter());
        Some(phi_upper_bound(uniform.functionals().phi, f.gamma, variance, mu_lb))
    } else {
        None
    };

    let (in_radius, volume) = builtin.feature_data();
    let sigma_min = builtin.material.sigma_min(&mesh0);
    let kappa_max = builtin.material.kappa_max(&mesh0);
    // for a gear cell the exact full-body gamma is available; otherwise the
    // study's discrete gamma serves
    let gamma_body = builtin.gear.map_or(f.gamma, |p| p.gamma());
    let phi_lower_feature =
        Some(phi_lower_bound(2, in_radius, volume, gamma_body, sigma_min, kappa_max));

    Ok(PhiReport {
        case: builtin.name.clone(),
        method: "refinement-study",
        functionals: FunctionalRecord::new(&f, study.phi_error),
        mu_diameter_bound: Some(mu_payne_weinberger(builtin.spec.diameter())),
        study: Some(study),
        phi_upper_heterogeneous,
        phi_lower_feature,
    })
}

// ----------------------------------------------------------- spectrum --

pub fn run_spectrum(builtin: &Builtin, bs: &[f64], levels: usize) -> Result<Table, CliError> {
    let mesh0 = builtin.coarse_mesh()?;
    let study = refinement_study(&mesh0, &builtin.material, levels).map_err(lib)?;
    let f = study.functionals();
    let mesh = refined_mesh(&mesh0, levels);
    let space = P2Space::build(&mesh);
    let forms = assemble(&mesh, &space, &builtin.material).map_err(lib)?;
    let mu = second_neumann_eigenvalue(&forms).map_err(lib)?;

    let mut t = Table::new(
        format!("decay-rate ladder: {}", builtin.name),
        &["B", "lambda1", "rate1", "rate2", "rate2_pade", "rate3", "mu", "rel_gap_rate2"],
    );
    for &b in bs {
        if !(b > 0.0) {
            return Err(CliError::Message(format!("bath strength must be positive, got {b}")));
        }
        let pair = first_eigenpair(&forms, b).map_err(lib)?;
        let r = rate_approximants(b, &f);
        let gap = (pair.value - r.order2).abs() / pair.value;
        t.push(vec![
            Cell::Num(b),
            Cell::Num(pair.value),
            Cell::Num(r.order1),
            Cell::Num(r.order2),
            Cell::Num(r.order2_pade),
            Cell::Num(r.order3),
            Cell::Num(mu),
            Cell::Num(gap),
        ]);
    }
    Ok(t)
}

// ---------------------------------------------------------- transient --

pub fn run_transient(
    builtin: &Builtin,
    b: f64,
    t_final_slow: f64,
    steps: usize,
    levels: usize,
    out: &OutputOpts,
) -> Result<(), CliError> {
    let mesh = refined_mesh(&builtin.coarse_mesh()?, levels);
    let space = P2Space::build(&mesh);
    let run = step_heat(&mesh, &space, &builtin.material, &Bath::Uniform(b), t_final_slow, steps)
        .map_err(lib)?;
    match out.format {
        crate::table::Format::Csv => out.write(&run.series.to_csv()),
        crate::table::Format::Json => {
            out.emit_json(&serde_json::to_value(&run.series).expect("series serializes"))
        }
    }
}

// ----------------------------------------------------------- estimate --

pub struct GatedCase {
    pub b: f64,
    pub measured: MeasuredErrors,
    pub ndof: usize,
    pub n_steps: usize,
    pub drift: f64,
}

/// Run one bath strength through the refinement-gated transient and
/// measure the lumped-model errors against it.
pub fn gated_case(
    mesh0: &Mesh,
    material: &MaterialField,
    f: &Functionals,
    b: f64,
    t_final_slow: f64,
    t0_slow: f64,
    steps0: usize,
    tol: f64,
    max_rounds: usize,
) -> Result<GatedCase, CliError> {
    let model = LumpedModel::new(b, *f);
    let gated = converged_transient(
        mesh0,
        material,
        &Bath::Uniform(b),
        t_final_slow,
        steps0,
        tol,
        t0_slow,
        max_rounds,
    )
    .map_err(lib)?;
    let m = measured_errors(
        &gated.series.slow_times,
        &gated.series.u_avg,
        &gated.series.u_delta,
        &model,
        t0_slow,
    );
    Ok(GatedCase {
        b,
        measured: m,
        ndof: gated.ndof,
        n_steps: gated.n_steps,
        drift: gated.drift.indicator(),
    })
}

pub const ESTIMATE_COLUMNS: &[&str] = &[
    "B",
    "Bi",
    "Bi_corrected",
    "E1",
    "E1_asymptotic",
    "E1_effectivity",
    "E1_bound",
    "E2",
    "E2_asymptotic",
    "E2_effectivity",
    "E_delta",
    "E_delta_bound",
    "ndof",
    "steps",
    "gate_drift",
];

pub fn run_estimate(
    builtin: &Builtin,
    bs: &[f64],
    t_final_slow: f64,
    t0_slow: f64,
    steps0: usize,
) -> Result<Table, CliError> {
    let mesh0 = builtin.coarse_mesh()?;
    let study = refinement_study(&mesh0, &builtin.material, 3).map_err(lib)?;
    let f = study.functionals();

    let rows = parallel_map(bs.to_vec(), |b| -> Result<(GatedCase, LumpedModel), CliError> {
        if !(b > 0.0) {
            return Err(CliError::Message(format!("bath strength must be positive, got {b}")));
        }
        let model = LumpedModel::new(b, f);
        // gate the reference solver to a small fraction of the error it is
        // supposed to measure
        let tol = (0.004 * model.first_order_error().asymptotic).clamp(1e-7, 1e-4);
        let case = gated_case(&mesh0, &builtin.material, &f, b, t_final_slow, t0_slow, steps0, tol, 6)?;
        Ok((case, model))
    });

    let mut t = Table::new(format!("lumped-model error sweep: {}", builtin.name), ESTIMATE_COLUMNS);
    for row in rows {
        let (case, model) = row?;
        let e1 = model.first_order_error();
        let e2a = model.second_order_error_asymptotic();
        let m = &case.measured;
        t.push(vec![
            Cell::Num(case.b),
            Cell::Num(model.biot()),
            Cell::Num(model.biot_corrected()),
            Cell::Num(m.first_order),
            Cell::Num(e1.asymptotic),
            Cell::Num(e1.asymptotic / m.first_order),
            Cell::Num(e1.upper_bound),
            Cell::Num(m.second_order),
            Cell::Num(e2a),
            Cell::Num(e2a / m.second_order),
            m.delta_rel.map_or_else(Cell::unchecked, Cell::Num),
            Cell::Num(model.delta_error_bound(t0_slow)),
            Cell::Int(case.ndof as i64),
            Cell::Int(case.n_steps as i64),
            Cell::Num(case.drift),
        ]);
    }
    Ok(t)
}

// ------------------------------------------------------------- bounds --

pub struct BoundsOutput {
    pub table: Table,
    pub scalars: serde_json::Value,
}

/// Steady bath that varies over the boundary: the given strengths are
/// dealt out to the Robin parent edges in round-robin order, so two
/// values make a two-level field, three a three-level one, and a single
/// value recovers the uniform bath.
pub fn edge_banded_field(values: &[f64], mesh: &Mesh) -> Result<RobinField, CliError> {
    if values.is_empty() {
        return Err(CliError::Message("need at least one bath value".into()));
    }
    let parents: BTreeSet<usize> = mesh
        .boundary
        .iter()
        .filter(|e| e.tag == EdgeTag::Robin)
        .map(|e| e.parent)
        .collect();
    if parents.is_empty() {
        return Err(CliError::Message("the mesh has no Robin boundary to dunk".into()));
    }
    let per_edge: BTreeMap<usize, f64> = parents
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, values[i % values.len()]))
        .collect();
    let field = RobinField {
        segments: vec![RobinSegment { t_end: f64::INFINITY, default: values[0], per_edge }],
    };
    field.validate().map_err(lib)?;
    Ok(field)
}

pub fn run_bounds(
    builtin: &Builtin,
    values: &[f64],
    t_final_slow: f64,
    steps: usize,
    levels: usize,
) -> Result<BoundsOutput, CliError> {
    let mesh0 = builtin.coarse_mesh()?;
    let study = refinement_study(&mesh0, &builtin.material, levels).map_err(lib)?;
    let f = study.functionals();
    let mesh = refined_mesh(&mesh0, levels);
    let space = P2Space::build(&mesh);

    let field = edge_banded_field(values, &mesh)?;
    let bath = Bath::Field(field.clone());
    // slow time of the run is measured with the field's boundary mean
    let run = step_heat(&mesh, &space, &builtin.material, &bath, t_final_slow, steps).map_err(lib)?;
    let envelope = TransferEnvelope::new(&field, &mesh, f.phi, f.gamma).map_err(lib)?;

    let mut t = Table::new(
        format!("transfer envelope: {}", builtin.name),
        &["T", "u_LB", "u_LBprime", "u_MID", "u_UB", "u_star_avg"],
    );
    for (i, &time) in run.series.times.iter().enumerate() {
        t.push(vec![
            Cell::Num(run.series.slow_times[i]),
            Cell::Num(envelope.lower(time)),
            envelope.lower_from_mean(time).map_or_else(Cell::unchecked, Cell::Num),
            Cell::Num(envelope.midpoint(time)),
            Cell::Num(envelope.upper(time)),
            Cell::Num(run.series.u_avg[i]),
        ]);
    }
    let scalars = serde_json::json!({
        "b_inf": envelope.b_inf,
        "b_sup": envelope.b_sup,
        "b_mean": envelope.b_mean,
        "gap": envelope.gap(),
        "gap_from_mean": envelope.gap_from_mean(),
        "spread": envelope.spread(),
        "spread_from_mean": envelope.spread_from_mean(),
    });
    Ok(BoundsOutput { table: t, scalars })
}
