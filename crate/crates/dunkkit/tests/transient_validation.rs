//! Validation of the transient solver and the spectral machinery against
//! transcendental eigenvalue oracles, modal series reconstructions, and the
//! physical inequalities any cooling run must respect.

use std::collections::BTreeMap;

use dunkkit::assembly::{assemble, DiscreteForms, MaterialField};
use dunkkit::geometry::{DomainSpec, EdgeTag};
use dunkkit::mesh::{Mesh, P2Space};
use dunkkit::robin_bounds::{RobinField, RobinSegment, TransferEnvelope};
use dunkkit::sensitivity::solve_sensitivity;
use dunkkit::spectral::{eigenpairs, first_eigenpair};
use dunkkit::transient::{sov_series, step_heat, Bath};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn uniform_forms(mesh: &Mesh) -> DiscreteForms {
    let space = P2Space::build(mesh);
    assemble(mesh, &space, &MaterialField::uniform()).unwrap()
}

/// Root of √λ tan(√λ/2) = b in (0, π²): the first Robin eigenvalue of the
/// unit interval contributes once per coordinate on the unit square.
fn unit_interval_root(b: f64) -> f64 {
    let g = |lam: f64| lam.sqrt() * (lam.sqrt() / 2.0).tan() - b;
    let (mut lo, mut hi) = (1e-12, (std::f64::consts::PI - 1e-9).powi(2));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn square_eigenvalue_matches_transcendental_roots() {
    let mesh = Mesh::rectangle(1.0, 1.0, 16, 16);
    let forms = uniform_forms(&mesh);
    for &b in &[0.3, 2.0] {
        let exact = 2.0 * unit_interval_root(b);
        let pair = first_eigenpair(&forms, b).unwrap();
        println!(
            "square b={b}: lambda_h {:.10} exact {:.10} rel {:.2e}",
            pair.value,
            exact,
            rel(pair.value, exact)
        );
        assert!(rel(pair.value, exact) < 5e-6);
        // conforming discretisations approach eigenvalues from above
        assert!(pair.value >= exact - 1e-12);
    }
}

#[test]
fn insulated_strip_reduces_to_interval_problem() {
    // Robin ends, insulated long sides: the 2D strip inherits the interval
    // eigenvalue root of √λ tan(√λ) = b (half-length 1).
    let tags = BTreeMap::from([(0, EdgeTag::Neumann), (2, EdgeTag::Neumann)]);
    let spec = DomainSpec::tagged_polygon(
        vec![[0.0, 0.0], [2.0, 0.0], [2.0, 0.5], [0.0, 0.5]],
        tags,
    )
    .unwrap();
    let mesh = Mesh::coarse(&spec).unwrap().refine().refine().refine();
    let forms = uniform_forms(&mesh);
    assert!(rel(forms.gamma(), 1.0) < 1e-12); // 2 Robin sides of length 1/2, area 1

    let b = 0.7;
    let g = |lam: f64| lam.sqrt() * lam.sqrt().tan() - b;
    let (mut lo, mut hi) = (1e-12, (std::f64::consts::PI / 2.0 - 1e-9).powi(2));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let exact = 0.5 * (lo + hi);
    let pair = first_eigenpair(&forms, b).unwrap();
    println!("strip: lambda_h {:.9} exact {:.9}", pair.value, exact);
    assert!(rel(pair.value, exact) < 1e-5);
}

fn sart_mesh() -> Mesh {
    let spec = DomainSpec::right_triangle(0.25).unwrap();
    Mesh::coarse(&spec).unwrap().refine().refine()
}

#[test]
fn bdf2_matches_modal_series() {
    // Two independent discretisations of the same evolution: implicit time
    // stepping versus the truncated eigen-expansion (exact in time).
    let mesh = sart_mesh();
    let space = P2Space::build(&mesh);
    let mat = MaterialField::uniform();
    let forms = assemble(&mesh, &space, &mat).unwrap();
    let b = 0.05;

    let run = step_heat(&mesh, &space, &mat, &Bath::Uniform(b), 2.0, 400).unwrap();
    let pairs = eigenpairs(&forms, b, 6).unwrap();
    let series = sov_series(&pairs, &forms, b, &run.series.slow_times);

    let max_diff = run
        .series
        .u_avg
        .iter()
        .zip(&series.u_avg)
        .map(|(a, s)| (a - s).abs())
        .fold(0.0f64, f64::max);
    println!("max |BDF2 − series| on u_avg = {max_diff:.3e}");
    assert!(max_diff < 5e-4);
    // and both agree that the body cools towards the bath
    assert!(run.series.u_avg.last().unwrap() < &0.2);
}

#[test]
fn cooling_respects_physical_inequalities() {
    let spec = DomainSpec::disk(1.0).unwrap();
    let mesh = Mesh::from_spec(&spec, 0.2).unwrap();
    let space = P2Space::build(&mesh);
    let mat = MaterialField::uniform();
    let run = step_heat(&mesh, &space, &mat, &Bath::Uniform(0.5), 3.0, 200).unwrap();
    let s = &run.series;

    assert!((s.u_avg[0] - 1.0).abs() < 1e-12);
    for w in s.u_avg.windows(2) {
        assert!(w[1] <= w[0] + 1e-13, "mean temperature must decay");
    }
    for (&t, (&u, &d)) in s.slow_times.iter().zip(s.u_avg.iter().zip(&s.u_delta)) {
        // slowest possible decay is the perfectly lumped body
        assert!(u >= (-t).exp() - 1e-10, "u(T={t}) = {u} below exp(−T)");
        // the boundary is never warmer than the bulk while cooling
        assert!(d >= -1e-10, "relative boundary deficit must stay nonnegative");
    }
    println!(
        "disk run: final T {:.2}, u {:.5}, delta {:.5}",
        s.slow_times.last().unwrap(),
        s.u_avg.last().unwrap(),
        s.u_delta.last().unwrap()
    );
}

#[test]
fn series_amplitude_tracks_upsilon() {
    // The slowest mode enters the mean with weight |Ω|·M(ψ₁)² = 1 − ΥB² + O(B³):
    // halving B must shrink the defect against 1 − ΥB² by ≈ 8.
    let mesh = Mesh::rectangle(1.0, 1.0, 16, 16);
    let forms = uniform_forms(&mesh);
    let upsilon = solve_sensitivity(&forms).unwrap().functionals.upsilon;

    let amp = |b: f64| {
        let pair = first_eigenpair(&forms, b).unwrap();
        let c = dunkkit::linalg::dot(&forms.mass_one, &pair.vector);
        c * c / forms.volume
    };
    let defect = |b: f64| (1.0 - amp(b) - upsilon * b * b).abs();
    let (d1, d2) = (defect(0.2), defect(0.1));
    let ratio = d1 / d2;
    println!("amplitude defects {d1:.3e} / {d2:.3e}, ratio {ratio:.2}");
    assert!(d1 < 1e-4);
    assert!((5.0..13.0).contains(&ratio), "expected ≈ 8, got {ratio}");
}

#[test]
fn piecewise_bath_stays_inside_transfer_envelope() {
    // A bath that weakens partway through the run: the exact trajectory must
    // stay between the envelope built from the extreme strengths alone.
    let mesh = sart_mesh();
    let space = P2Space::build(&mesh);
    let mat = MaterialField::uniform();
    let forms = assemble(&mesh, &space, &mat).unwrap();
    let sol = solve_sensitivity(&forms).unwrap();
    let (phi, gamma) = (sol.functionals.phi, forms.gamma());

    let field = RobinField {
        segments: vec![
            RobinSegment::uniform(0.5, 0.08),
            RobinSegment::uniform(f64::INFINITY, 0.02),
        ],
    };
    let envelope = TransferEnvelope::new(&field, &mesh, phi, gamma).unwrap();
    assert!(rel(envelope.b_inf, 0.02) < 1e-12);
    assert!(rel(envelope.b_sup, 0.08) < 1e-12);

    let run = step_heat(&mesh, &space, &mat, &Bath::Field(field), 3.0, 400).unwrap();
    let slack = 2e-4; // covers the BDF2 time error only
    for (&t, &u) in run.series.times.iter().zip(&run.series.u_avg) {
        assert!(u >= envelope.lower(t) - slack, "below envelope at t={t}");
        assert!(u <= envelope.upper(t) + slack, "above envelope at t={t}");
        if let Some(lb) = envelope.lower_from_mean(t) {
            assert!(u >= lb - slack, "below mean-based floor at t={t}");
        }
    }
    println!(
        "envelope spread {:.4}, gap {:.4}",
        envelope.spread(),
        envelope.gap()
    );
}
