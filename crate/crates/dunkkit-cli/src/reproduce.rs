//! `reproduce <id>`: recompute one of the embedded reference tables and
//! check every entry against its stored value. Each table carries
//! machine-checkable `pass`/`FAIL` columns with tolerances pinned here.

use dunkkit::assembly::MaterialField;
use dunkkit::geometry::GearProfile;
use dunkkit::robin_bounds::envelope_gap;
use dunkkit::sensitivity::{phi_lower_bound, phi_upper_bound, refinement_study, Functionals};
use dunkkit::spectral::second_neumann_eigenvalue;

use crate::builtins::Builtin;
use crate::commands::gated_case;
use crate::sweep::parallel_map;
use crate::table::{status_abs, status_rel, Cell, Table};
use crate::CliError;

fn lib<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Message(e.to_string())
}

/// (id, what it recomputes) — also the `--help` listing.
pub const IDS: &[(&str, &str)] = &[
    ("table1", "closed-form phi for the interval, disk, and sphere"),
    ("table2-subset", "FEM phi for the thin right triangle and the rectangle"),
    ("table3", "gear-cell gamma/phi and the feature lower bound (slow)"),
    ("table4", "two-phase composites: FEM phi and the heterogeneity upper bound"),
    ("table5", "closed-form functional catalog, including the thin-triangle limit"),
    ("sart1-errors", "first-order lumped error sweep, right triangle W=1/4 (slow)"),
    ("sart2-errors", "first-order lumped error sweep, right triangle W=1/16 (slow)"),
    ("sart1-second-order", "second-order lumped error sweep, W=1/4 (slow)"),
    ("sart1-delta", "core-surface split error and its a-priori bound, W=1/4 (slow)"),
    ("table10", "envelope gap g(r) against its closed form"),
];

pub fn run(id: &str) -> Result<Table, CliError> {
    match id {
        "table1" => Ok(canonical_phi()),
        "table2-subset" => fem_phi_subset(),
        "table3" => gear_table(),
        "table4" => composite_table(),
        "table5" => Ok(functional_catalog()),
        "sart1-errors" => first_order_sweep(Sweep::SART1),
        "sart2-errors" => first_order_sweep(Sweep::SART2),
        "sart1-second-order" => second_order_sweep(),
        "sart1-delta" => delta_sweep(),
        "table10" => Ok(envelope_table()),
        other => {
            let known: Vec<&str> = IDS.iter().map(|(n, _)| *n).collect();
            Err(CliError::Message(format!(
                "unknown reproduce id '{other}'; known ids: {}",
                known.join(", ")
            )))
        }
    }
}

// ------------------------------------------------------------- table1 --

fn canonical_phi() -> Table {
    let rows: [(&str, Functionals, f64); 3] = [
        ("interval", Functionals::interval(1.0), 1.0 / 3.0),
        ("disk", Functionals::disk(1.0), 1.0 / 2.0),
        ("sphere", Functionals::sphere(1.0), 3.0 / 5.0),
    ];
    let mut t = Table::new("canonical phi values", &["shape", "phi", "phi_ref", "status"]);
    for (name, f, expected) in rows {
        t.push(vec![
            Cell::text(name),
            Cell::Num(f.phi),
            Cell::Num(expected),
            status_rel(f.phi, expected, 1e-12),
        ]);
    }
    t
}

// ------------------------------------------------------ table2-subset --

fn fem_phi_subset() -> Result<Table, CliError> {
    // (case, phi_ref, phi/gamma ref); the error estimator must resolve
    // machine-precision exactness, so it is checked against a ceiling
    let rows = [("sart1", 9.13, 5.01e-1), ("rect", 6.67e-1, 6.65e-2)];
    let mut t = Table::new(
        "FEM phi spot checks",
        &["case", "phi_h", "phi_ref", "s_phi", "phi_over_gamma", "ratio_ref", "s_ratio", "e_phi", "s_e"],
    );
    for (name, phi_ref, ratio_ref) in rows {
        let b = Builtin::lookup(name)?;
        let study = refinement_study(&b.coarse_mesh()?, &b.material, 3).map_err(lib)?;
        let f = study.functionals();
        let e_phi = study.phi_error.unwrap_or(f64::INFINITY);
        let ratio = f.phi / f.gamma;
        t.push(vec![
            Cell::text(name),
            Cell::Num(f.phi),
            Cell::Num(phi_ref),
            status_rel(f.phi, phi_ref, 5e-3),
            Cell::Num(ratio),
            Cell::Num(ratio_ref),
            status_rel(ratio, ratio_ref, 5e-3),
            Cell::Num(e_phi),
            Cell::Status(e_phi <= 1e-12),
        ]);
    }
    Ok(t)
}

// ------------------------------------------------------------- table3 --

struct GearRow {
    sharpness: f64,
    teeth: usize,
    levels: usize,
    gamma_ref: f64,
    phi_ref: f64,
    feature_ref: f64,
}

fn gear_table() -> Result<Table, CliError> {
    // reference values for the six (sharpness, tooth-count) cases; the
    // n = 2048 rows run two study levels to stay within desk-scale memory
    let rows = vec![
        GearRow { sharpness: 1.6, teeth: 32, levels: 3, gamma_ref: 2.53, phi_ref: 7.94e-1, feature_ref: 5.94e-1 },
        GearRow { sharpness: 1.6, teeth: 256, levels: 3, gamma_ref: 2.05, phi_ref: 5.23e-1, feature_ref: 5.18e-1 },
        GearRow { sharpness: 1.6, teeth: 2048, levels: 2, gamma_ref: 2.00, phi_ref: 5.02e-1, feature_ref: 5.02e-1 },
        GearRow { sharpness: 0.4, teeth: 32, levels: 3, gamma_ref: 1.49e1, phi_ref: 3.00e1, feature_ref: 2.00 },
        GearRow { sharpness: 0.4, teeth: 256, levels: 3, gamma_ref: 3.91e1, phi_ref: 1.94e2, feature_ref: 7.18e1 },
        GearRow { sharpness: 0.4, teeth: 2048, levels: 2, gamma_ref: 1.30e2, phi_ref: 2.12e3, feature_ref: 1.41e3 },
    ];

    let computed = parallel_map(rows, |row| -> Result<(GearRow, f64, f64, Option<f64>, f64, usize), CliError> {
        let builtin = Builtin::lookup(&format!("gear-{}-{}", row.teeth, row.sharpness))?;
        let study = refinement_study(&builtin.coarse_mesh()?, &builtin.material, row.levels).map_err(lib)?;
        let f = study.functionals();
        let profile = GearProfile::new(row.teeth, row.sharpness).map_err(lib)?;
        let feature =
            phi_lower_bound(2, profile.in_radius(), profile.area(), profile.gamma(), 1.0, 1.0);
        let ndof = study.levels.last().map_or(0, |l| l.ndof);
        Ok((row, f.gamma, f.phi, study.phi_error, feature, ndof))
    });

    let mut t = Table::new(
        "gear cells: gamma, phi, and the feature lower bound",
        &[
            "sharpness", "teeth", "gamma", "gamma_ref", "s_gamma", "phi_h", "phi_ref", "s_phi",
            "e_phi", "F_lower", "F_ref", "s_F_holds", "s_F_match", "ndof",
        ],
    );
    for item in computed {
        let (row, gamma, phi, e_phi, feature, ndof) = item?;
        t.push(vec![
            Cell::Num(row.sharpness),
            Cell::Int(row.teeth as i64),
            Cell::Num(gamma),
            Cell::Num(row.gamma_ref),
            status_rel(gamma, row.gamma_ref, 5e-3),
            Cell::Num(phi),
            Cell::Num(row.phi_ref),
            status_rel(phi, row.phi_ref, 1e-2),
            e_phi.map_or_else(Cell::unchecked, Cell::Num),
            Cell::Num(feature),
            Cell::Num(row.feature_ref),
            Cell::Status(feature <= phi * (1.0 + 1e-9)),
            status_rel(feature, row.feature_ref, 1e-2),
            Cell::Int(ndof as i64),
        ]);
    }
    Ok(t)
}

// ------------------------------------------------------------- table4 --

fn composite_table() -> Result<Table, CliError> {
    // (case, study levels, phi_ref, upper-bound ref)
    let rows = [
        ("recthi", 3, 8.97, 1.59e1),
        ("evfcs", 4, 1.58, 4.36),
        ("dvfcslf", 4, 7.32e-1, 1.21),
        ("dvfcshf", 4, 1.81e-2, 4.09e1),
    ];
    let mut t = Table::new(
        "two-phase composites: phi and the heterogeneity bound",
        &[
            "case", "phi_h", "phi_ref", "s_phi", "phi_ub", "ub_ref", "s_ub", "s_order",
            "sigma_variance", "mu_h",
        ],
    );
    for (name, levels, phi_ref, ub_ref) in rows {
        let b = Builtin::lookup(name)?;
        let mesh0 = b.coarse_mesh()?;
        let study = refinement_study(&mesh0, &b.material, levels).map_err(lib)?;
        let f = study.functionals();

        let uniform = MaterialField::uniform();
        let phi_uniform = refinement_study(&mesh0, &uniform, levels).map_err(lib)?.functionals().phi;
        let variance = b.material.sigma_variance(&mesh0);
        let mu_h = {
            let mesh = mesh0.refine();
            let space = dunkkit::mesh::P2Space::build(&mesh);
            let forms = dunkkit::assembly::assemble(&mesh, &space, &uniform).map_err(lib)?;
            second_neumann_eigenvalue(&forms).map_err(lib)?
        };
        let ub = phi_upper_bound(phi_uniform, f.gamma, variance, mu_h);

        t.push(vec![
            Cell::text(name),
            Cell::Num(f.phi),
            Cell::Num(phi_ref),
            status_rel(f.phi, phi_ref, 1e-2),
            Cell::Num(ub),
            Cell::Num(ub_ref),
            status_rel(ub, ub_ref, 1e-2),
            Cell::Status(f.phi <= ub * (1.0 + 1e-9)),
            Cell::Num(variance),
            Cell::Num(mu_h),
        ]);
    }
    Ok(t)
}

// ------------------------------------------------------------- table5 --

/// Limit of `g(w)` as w → 0 by two-stage Richardson extrapolation
/// (the remainder is O(w), then O(w²), so this removes both).
fn thin_limit(g: impl Fn(f64) -> f64, w0: f64) -> f64 {
    let (f0, f1, f2) = (g(w0), g(w0 / 2.0), g(w0 / 4.0));
    let (g0, g1) = (2.0 * f1 - f0, 2.0 * f2 - f1);
    g1 + (g1 - g0) / 3.0
}

fn functional_catalog() -> Table {
    let sqrt2 = std::f64::consts::SQRT_2;
    let w0 = 4e-5;
    let rt = Functionals::right_triangle;
    // for the slim-triangle limit the scale-invariant combinations are
    // phi w², (gamma chi) w⁴, and (gamma² upsilon) w⁴
    let thin = (
        thin_limit(|w| rt(w).phi * w * w, w0),
        thin_limit(|w| rt(w).gamma_chi() * w.powi(4), w0),
        thin_limit(|w| rt(w).gamma_sq_upsilon() * w.powi(4), w0),
    );
    let rows: [(&str, (f64, f64, f64), (f64, f64, f64)); 6] = [
        (
            "interval",
            { let f = Functionals::interval(1.0); (f.phi, f.gamma_chi(), f.gamma_sq_upsilon()) },
            (1.0 / 3.0, 1.0 / 9.0, 1.0 / 45.0),
        ),
        (
            "disk",
            { let f = Functionals::disk(1.0); (f.phi, f.gamma_chi(), f.gamma_sq_upsilon()) },
            (1.0 / 2.0, 1.0 / 4.0, 1.0 / 12.0),
        ),
        (
            "sphere",
            { let f = Functionals::sphere(1.0); (f.phi, f.gamma_chi(), f.gamma_sq_upsilon()) },
            (3.0 / 5.0, 9.0 / 25.0, 27.0 / 175.0),
        ),
        (
            "right-triangle-w1",
            { let f = rt(1.0); (f.phi, f.gamma_chi(), f.gamma_sq_upsilon()) },
            (4.0 / 3.0, 0.8 * (3.0 + 2.0 * sqrt2), (4.0 / 15.0) * (3.0 + 2.0 * sqrt2)),
        ),
        (
            "equilateral",
            {
                let f = Functionals::equilateral_triangle(1.0);
                (f.phi, f.gamma_chi(), f.gamma_sq_upsilon())
            },
            (1.0, 9.0 / 5.0, 3.0 / 5.0),
        ),
        ("slim-right-triangle-limit", thin, (2.0 / 3.0, 28.0 / 15.0, 28.0 / 45.0)),
    ];

    let mut t = Table::new(
        "closed-form functional catalog",
        &[
            "shape", "phi", "phi_ref", "s_phi", "gamma_chi", "gc_ref", "s_gc",
            "gamma2_upsilon", "gu_ref", "s_gu",
        ],
    );
    for (name, (phi, gc, gu), (phi_ref, gc_ref, gu_ref)) in rows {
        t.push(vec![
            Cell::text(name),
            Cell::Num(phi),
            Cell::Num(phi_ref),
            status_rel(phi, phi_ref, 1e-12),
            Cell::Num(gc),
            Cell::Num(gc_ref),
            status_rel(gc, gc_ref, 1e-12),
            Cell::Num(gu),
            Cell::Num(gu_ref),
            status_rel(gu, gu_ref, 1e-12),
        ]);
    }
    t
}

// ------------------------------------------------- transient sweeps --

const B_LADDER: [f64; 10] = [1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1, 2e-1, 5e-1, 1.0];
const T_FINAL: f64 = 2.0;
const T0: f64 = 0.2;
const STEPS0: usize = 80;
const MAX_ROUNDS: usize = 6;

#[derive(Clone, Copy)]
enum Sweep {
    SART1,
    SART2,
}

impl Sweep {
    fn builtin(self) -> &'static str {
        match self {
            Sweep::SART1 => "sart1",
            Sweep::SART2 => "sart2",
        }
    }

    fn functionals(self) -> Functionals {
        match self {
            Sweep::SART1 => Functionals::right_triangle(0.25),
            Sweep::SART2 => Functionals::right_triangle(0.0625),
        }
    }

    /// Reference sweep data: (Bi, Bi', E1, E1_asymptotic, effectivity, E1_bound).
    fn first_order_refs(self) -> [[f64; 6]; 10] {
        match self {
            Sweep::SART1 => [
                [5.48e-5, 5.01e-4, 1.84e-4, 1.84e-4, 1.00, 1.12e-2],
                [1.10e-4, 1.00e-3, 3.67e-4, 3.68e-4, 1.00, 1.58e-2],
                [2.74e-4, 2.50e-3, 9.10e-4, 9.21e-4, 1.01, 2.50e-2],
                [5.48e-4, 5.01e-3, 1.80e-3, 1.84e-3, 1.03, 3.54e-2],
                [1.10e-3, 1.00e-2, 3.51e-3, 3.68e-3, 1.05, 5.00e-2],
                [2.74e-3, 2.50e-2, 8.17e-3, 9.21e-3, 1.13, 7.91e-2],
                [5.48e-3, 5.01e-2, 1.47e-2, 1.84e-2, 1.26, 1.12e-1],
                [1.10e-2, 1.00e-1, 2.44e-2, 3.68e-2, 1.51, 1.58e-1],
                [2.74e-2, 2.50e-1, 4.10e-2, 9.21e-2, 2.25, 2.50e-1],
                [5.48e-2, 5.01e-1, 5.55e-2, 1.84e-1, 3.32, 3.54e-1],
            ],
            Sweep::SART2 => [
                [1.51e-5, 2.44e-3, 8.89e-4, 8.97e-4, 1.01, 2.47e-2],
                [3.03e-5, 4.88e-3, 1.76e-3, 1.79e-3, 1.02, 3.49e-2],
                [7.57e-5, 1.22e-2, 4.27e-3, 4.49e-3, 1.05, 5.52e-2],
                [1.51e-4, 2.44e-2, 8.14e-3, 8.97e-3, 1.10, 7.81e-2],
                [3.03e-4, 4.88e-2, 1.49e-2, 1.79e-2, 1.21, 1.10e-1],
                [7.57e-4, 1.22e-1, 2.93e-2, 4.49e-2, 1.53, 1.75e-1],
                [1.51e-3, 2.44e-1, 4.31e-2, 8.97e-2, 2.08, 2.47e-1],
                [3.03e-3, 4.88e-1, 5.59e-2, 1.79e-1, 3.21, 3.49e-1],
                [7.57e-3, 1.22e0, 6.83e-2, 4.49e-1, 6.57, 5.52e-1],
                [1.51e-2, 2.44e0, 7.46e-2, 8.97e-1, 12.0, 7.81e-1],
            ],
        }
    }
}

struct SweepCase {
    b: f64,
    tol: f64,
}

/// Run the gated reference transient for every B in the ladder.
fn run_sweep(sweep: Sweep, tols: [f64; 10]) -> Result<Vec<crate::commands::GatedCase>, CliError> {
    let builtin = Builtin::lookup(sweep.builtin())?;
    let mesh0 = builtin.coarse_mesh()?;
    let f = sweep.functionals();
    let cases: Vec<SweepCase> =
        B_LADDER.iter().zip(tols).map(|(&b, tol)| SweepCase { b, tol }).collect();
    let results = parallel_map(cases, |case| {
        gated_case(&mesh0, &builtin.material, &f, case.b, T_FINAL, T0, STEPS0, case.tol, MAX_ROUNDS)
    });
    results.into_iter().collect()
}

fn first_order_sweep(sweep: Sweep) -> Result<Table, CliError> {
    let refs = sweep.first_order_refs();
    // the reference solver is gated well below the error it measures
    let tols = refs.map(|r| (4e-3 * r[2]).clamp(1e-7, 5e-5));
    let cases = run_sweep(sweep, tols)?;
    let f = sweep.functionals();

    let mut t = Table::new(
        format!("first-order lumped error sweep: {}", sweep.builtin()),
        &[
            "B", "Bi", "Bi_ref", "s_Bi", "Bi_corrected", "Bip_ref", "s_Bip", "E1", "E1_ref",
            "s_E1", "E1_asymptotic", "E1a_ref", "s_E1a", "effectivity", "eff_ref", "s_eff",
            "E1_bound", "bound_ref", "s_bound", "s_E1_below_bound", "ndof", "steps",
        ],
    );
    for (case, r) in cases.iter().zip(refs) {
        let model = dunkkit::lumped::LumpedModel::new(case.b, f);
        let e1 = model.first_order_error();
        let measured = case.measured.first_order;
        let effectivity = e1.asymptotic / measured;
        t.push(vec![
            Cell::Num(case.b),
            Cell::Num(model.biot()),
            Cell::Num(r[0]),
            status_rel(model.biot(), r[0], 5e-3),
            Cell::Num(model.biot_corrected()),
            Cell::Num(r[1]),
            status_rel(model.biot_corrected(), r[1], 5e-3),
            Cell::Num(measured),
            Cell::Num(r[2]),
            status_rel(measured, r[2], 3e-2),
            Cell::Num(e1.asymptotic),
            Cell::Num(r[3]),
            status_rel(e1.asymptotic, r[3], 5e-3),
            Cell::Num(effectivity),
            Cell::Num(r[4]),
            status_abs(effectivity, r[4], (2e-2_f64).max(1e-2 * r[4])),
            Cell::Num(e1.upper_bound),
            Cell::Num(r[5]),
            status_rel(e1.upper_bound, r[5], 5e-3),
            Cell::Status(measured <= e1.upper_bound),
            Cell::Int(case.ndof as i64),
            Cell::Int(case.n_steps as i64),
        ]);
    }
    Ok(t)
}

fn second_order_sweep() -> Result<Table, CliError> {
    // reference: (E2, E2_asymptotic, effectivity) per ladder entry
    let refs: [[f64; 3]; 10] = [
        [3.24e-7, 7.16e-7, 2.21],
        [1.72e-6, 2.86e-6, 1.66],
        [1.19e-5, 1.79e-5, 1.50],
        [4.79e-5, 7.16e-5, 1.50],
        [1.87e-4, 2.86e-4, 1.53],
        [1.07e-3, 1.79e-3, 1.67],
        [3.73e-3, 7.16e-3, 1.92],
        [1.17e-2, 2.86e-2, 2.46],
        [4.23e-2, 1.79e-1, 4.24],
        [9.35e-2, 7.16e-1, 7.66],
    ];
    // measuring E2 below ~1e-5 would need a reference tighter than the
    // desk-scale gate floor; those rows are reported but not checked
    let checked = refs.map(|r| r[0] >= 1e-5);
    let mut tols = [0.0; 10];
    for i in 0..10 {
        tols[i] = if checked[i] { (2e-2 * refs[i][0]).clamp(2e-7, 5e-5) } else { 1e-6 };
    }
    let cases = run_sweep(Sweep::SART1, tols)?;
    let f = Sweep::SART1.functionals();

    let mut t = Table::new(
        "second-order lumped error sweep: sart1",
        &[
            "B", "E2", "E2_ref", "s_E2", "E2_asymptotic", "E2a_ref", "s_E2a", "effectivity",
            "eff_ref", "s_eff", "ndof", "steps",
        ],
    );
    for ((case, r), is_checked) in cases.iter().zip(refs).zip(checked) {
        let model = dunkkit::lumped::LumpedModel::new(case.b, f);
        let e2a = model.second_order_error_asymptotic();
        let measured = case.measured.second_order;
        let effectivity = e2a / measured;
        t.push(vec![
            Cell::Num(case.b),
            Cell::Num(measured),
            Cell::Num(r[0]),
            if is_checked { status_rel(measured, r[0], 5e-2) } else { Cell::unchecked() },
            Cell::Num(e2a),
            Cell::Num(r[1]),
            status_rel(e2a, r[1], 5e-3),
            Cell::Num(effectivity),
            Cell::Num(r[2]),
            if is_checked {
                status_abs(effectivity, r[2], (3e-2_f64).max(2e-2 * r[2]))
            } else {
                Cell::unchecked()
            },
            Cell::Int(case.ndof as i64),
            Cell::Int(case.n_steps as i64),
        ]);
    }
    Ok(t)
}

fn delta_sweep() -> Result<Table, CliError> {
    // reference relative plateau errors per ladder entry
    let refs: [f64; 10] =
        [1.36e-3, 2.71e-3, 6.74e-3, 1.33e-2, 2.64e-2, 8.32e-2, 2.08e-1, 3.80e-1, 5.82e-1, 6.79e-1];
    let f = Sweep::SART1.functionals();
    // the split error is relative to a plateau of size ~Bi', so the gate
    // must resolve expected * plateau; rows below the floor go unchecked
    let mut tols = [0.0; 10];
    let mut checked = [false; 10];
    for (i, &b) in B_LADDER.iter().enumerate() {
        let model = dunkkit::lumped::LumpedModel::new(b, f);
        let scale = refs[i] * model.delta_plateau();
        checked[i] = scale >= 1e-5;
        tols[i] = if checked[i] { (2e-2 * scale).clamp(2e-7, 5e-5) } else { 1e-6 };
    }
    let cases = run_sweep(Sweep::SART1, tols)?;

    let mut t = Table::new(
        "core-surface split error sweep: sart1",
        &[
            "B", "Bi", "E_delta", "Ed_ref", "s_Ed", "bound_tail", "bound_full", "s_dominated",
            "ndof", "steps",
        ],
    );
    for ((case, &r), is_checked) in cases.iter().zip(refs.iter()).zip(checked) {
        let model = dunkkit::lumped::LumpedModel::new(case.b, f);
        // tail part of the bound (no burn-in term), for comparison
        let c1 = (f.gamma_chi() - f.gamma_sq_upsilon() - f.phi * f.phi).abs() / f.phi;
        let bound_tail = c1 * model.biot();
        let bound_full = model.delta_error_bound(T0);
        let measured = case.measured.delta_rel.unwrap_or(f64::NAN);
        t.push(vec![
            Cell::Num(case.b),
            Cell::Num(model.biot()),
            Cell::Num(measured),
            Cell::Num(r),
            if is_checked { status_rel(measured, r, 1e-1) } else { Cell::unchecked() },
            Cell::Num(bound_tail),
            Cell::Num(bound_full),
            Cell::Status(measured <= bound_full),
            Cell::Int(case.ndof as i64),
            Cell::Int(case.n_steps as i64),
        ]);
    }
    Ok(t)
}

// ------------------------------------------------------------ table10 --

fn envelope_table() -> Table {
    let rows = [
        (0.01, 0.00370, 0.00368),
        (0.02, 0.00743, 0.00736),
        (0.05, 0.01887, 0.01839),
        (0.10, 0.03874, 0.03679),
        (0.20, 0.08192, 0.07358),
        (0.50, 0.25000, 0.18394),
    ];
    let mut t = Table::new(
        "envelope gap g(r)",
        &["r", "g", "g_ref", "s_g", "r_over_e", "roe_ref", "s_roe"],
    );
    for (r, g_ref, roe_ref) in rows {
        let g = envelope_gap(r);
        let roe = r / std::f64::consts::E;
        t.push(vec![
            Cell::Num(r),
            Cell::Num(g),
            Cell::Num(g_ref),
            status_abs(g, g_ref, 1e-5),
            Cell::Num(roe),
            Cell::Num(roe_ref),
            status_abs(roe, roe_ref, 1e-5),
        ]);
    }
    t
}
