//! The shape/composition functionals φ, χ, Υ and the auxiliary field they
//! are built from.
//!
//! The field ψ solves a pure-Neumann diffusion problem driven by the
//! imbalance between a uniform volume source and a uniform boundary flux,
//!
//! ```text
//!   −∇·(κ ∇ψ) = |Ω|^(−1/2) γ σ   in Ω,
//!   κ ∂ₙψ     = −|Ω|^(−1/2)      on the Robin part of ∂Ω,
//!   ∫ σ ψ     = 0,
//! ```
//!
//! with γ = |Γ|/|Ω|. The three quadratic functionals of ψ,
//!
//! ```text
//!   φ = ∫ κ |∇ψ|²,   χ = ∫_Γ ψ²,   Υ = ∫ σ ψ²,
//! ```
//!
//! control the slow relaxation rate of the dunking problem: the smallest
//! Robin eigenvalue expands as λ(B) = Bγ − φB² + (χ − γΥ)B³ + O(B⁴).
//! φ and the combinations γχ, γ²Υ are invariant under spatial rescaling,
//! which the tests lean on heavily.
//!
//! Discretely we solve the singular system A0 x = r with
//! r = |Ω|^(−1/2)(γ M·1 − A1·1). The right-hand side is compatible
//! (1ᵀr = 0 exactly, because γ|Ω| = |Γ| holds for the assembled forms), so
//! grounding one dof and shifting the solution back to σ-mean zero yields
//! the unique constrained solution of the underlying saddle problem. The
//! saddle multiplier is known in closed form, p = −|Ω|^(−1/2) γ, and we
//! recompute it a posteriori as a solver self-check.

use crate::assembly::{self, AssemblyError, DiscreteForms, MaterialField};
use crate::linalg::{dot, Cholesky, LinalgError};
use crate::mesh::{Mesh, MeshError, P2Space};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SensitivityError {
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("refinement study needs at least one level")]
    NoLevels,
}

/// The functional triple (plus γ, which fixes the scale-dependent parts).
///
/// χ scales like length and Υ like length², so the scale-free quantities
/// are φ, γχ and γ²Υ; those are what the closed-form constructors below
/// are checked against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Functionals {
    pub phi: f64,
    pub chi: f64,
    pub upsilon: f64,
    pub gamma: f64,
}

impl Functionals {
    pub fn gamma_chi(&self) -> f64 {
        self.gamma * self.chi
    }

    pub fn gamma_sq_upsilon(&self) -> f64 {
        self.gamma * self.gamma * self.upsilon
    }

    /// Conduction length correction φ/γ: the thickness of the near-boundary
    /// layer responsible for the first-order slowdown of the decay rate.
    pub fn conduction_correction(&self) -> f64 {
        self.phi / self.gamma
    }

    /// The functionals of the spatially rescaled domain αΩ.
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            phi: self.phi,
            chi: self.chi * alpha,
            upsilon: self.upsilon * alpha * alpha,
            gamma: self.gamma / alpha,
        }
    }

    /// Closed form for an interval of the given length (1D).
    pub fn interval(length: f64) -> Self {
        Self {
            phi: 1.0 / 3.0,
            chi: length / 18.0,
            upsilon: length * length / 180.0,
            gamma: 2.0 / length,
        }
    }

    /// Closed form for an l1 × l2 rectangle.
    pub fn rectangle(l1: f64, l2: f64) -> Self {
        Self::interval(l1).tensorize(l2)
    }

    /// Closed form for a disk. The field is radial,
    /// ψ = c (R²/8 − r²/4) with c = 2/(√π R²).
    pub fn disk(radius: f64) -> Self {
        Self {
            phi: 0.5,
            chi: radius / 8.0,
            upsilon: radius * radius / 48.0,
            gamma: 2.0 / radius,
        }
    }

    /// Closed form for a ball, ψ = c (R²/10 − r²/6).
    pub fn sphere(radius: f64) -> Self {
        Self {
            phi: 3.0 / 5.0,
            chi: 3.0 * radius / 25.0,
            upsilon: 3.0 * radius * radius / 175.0,
            gamma: 3.0 / radius,
        }
    }

    /// Closed form for the right triangle with legs `w` (along x) and 1
    /// (along y). The field is the quadratic
    /// ψ = b00 + c(x+y) + b2(x²+y²), which satisfies the boundary condition
    /// exactly because the normal flux is constant on each edge; everything
    /// else is exact polynomial integration.
    pub fn right_triangle(w: f64) -> Self {
        assert!(w > 0.0, "leg length must be positive");
        let hyp = (1.0 + w * w).sqrt();
        let k = 1.0 + w + hyp; // perimeter
        let area = 0.5 * w;
        let c = (2.0 / w).sqrt(); // |Ω|^(−1/2)
        let b2 = -c * k / (2.0 * w);
        let b00 = -(c * (w + 1.0) / 3.0 + b2 * (w * w + 1.0) / 6.0);

        // φ = ∫ |∇ψ|², ∇ψ = (c + 2 b2 x, c + 2 b2 y); exact by monomials
        let phi = 2.0 - 2.0 * k * (w + 1.0) / (3.0 * w) + k * k * (w * w + 1.0) / (6.0 * w * w);

        // ∫_T x^p y^q dA = w^(p+1) p! q! / (p+q+2)!
        let monom = |p: u32, q: u32| -> f64 {
            let fact = |n: u32| (1..=n).map(|k| k as f64).product::<f64>().max(1.0);
            w.powi(p as i32 + 1) * fact(p) * fact(q) / fact(p + q + 2)
        };
        // Υ = ∫ ψ² with ψ = b00 + c x + c y + b2 x² + b2 y²
        let coef = [(0u32, 0u32, b00), (1, 0, c), (0, 1, c), (2, 0, b2), (0, 2, b2)];
        let mut upsilon = 0.0;
        for &(p1, q1, a1) in &coef {
            for &(p2, q2, a2) in &coef {
                upsilon += a1 * a2 * monom(p1 + p2, q1 + q2);
            }
        }

        // χ: ∫ (quadratic)² along each edge
        let quartic = |a0: f64, a1: f64, a2: f64, len: f64| -> f64 {
            // ∫_0^len (a0 + a1 t + a2 t²)² dt
            let l = [len, len.powi(2), len.powi(3), len.powi(4), len.powi(5)];
            a0 * a0 * l[0]
                + a0 * a1 * l[1]
                + (a1 * a1 + 2.0 * a0 * a2) / 3.0 * l[2]
                + a1 * a2 / 2.0 * l[3]
                + a2 * a2 / 5.0 * l[4]
        };
        let bottom = quartic(b00, c, b2, w); // ψ(x,0)
        let left = quartic(b00, c, b2, 1.0); // ψ(0,y)
        // hypotenuse (w(1−t), t), t ∈ [0,1], ds = √(1+w²) dt
        let h0 = b00 + c * w + b2 * w * w;
        let h1 = c * (1.0 - w) - 2.0 * b2 * w * w;
        let h2 = b2 * (w * w + 1.0);
        let chi = bottom + left + hyp * quartic(h0, h1, h2, 1.0);

        Self { phi, chi, upsilon, gamma: k / area }
    }

    /// Closed form for the equilateral triangle with the given side.
    pub fn equilateral_triangle(side: f64) -> Self {
        let gamma = 4.0 * 3.0f64.sqrt() / side;
        Self {
            phi: 1.0,
            chi: (9.0 / 5.0) / gamma,
            upsilon: (3.0 / 5.0) / (gamma * gamma),
            gamma,
        }
    }

    /// Extrude a cross-section into a prism of the given height: the field
    /// splits as ψ_base(x) + ψ_interval(z), so the functionals combine as
    ///
    /// ```text
    ///   φ   += 1/3
    ///   Υ   += h²/180
    ///   χ   += h/18 + (2/h) Υ_base + γ_base h²/180
    ///   γ   += 2/h
    /// ```
    ///
    /// (the cross terms in χ come from integrating one factor's ψ² over the
    /// other factor's boundary). Lateral walls and end caps are all Robin.
    pub fn tensorize(&self, height: f64) -> Self {
        let iv = Self::interval(height);
        Self {
            phi: self.phi + iv.phi,
            chi: self.chi + iv.chi + iv.gamma * self.upsilon + self.gamma * iv.upsilon,
            upsilon: self.upsilon + iv.upsilon,
            gamma: self.gamma + iv.gamma,
        }
    }

    /// Rectangular box l1 × l2 × l3.
    pub fn rect_box(l1: f64, l2: f64, l3: f64) -> Self {
        Self::rectangle(l1, l2).tensorize(l3)
    }

    /// Circular cylinder of the given radius and height.
    pub fn cylinder(radius: f64, height: f64) -> Self {
        Self::disk(radius).tensorize(height)
    }
}

/// Solution of the discrete sensitivity problem on one mesh.
pub struct SensitivitySolution {
    /// the field ψ, σ-mean zero
    pub psi: Vec<f64>,
    /// a-posteriori saddle multiplier; equals −|Ω|^(−1/2) γ up to roundoff
    pub multiplier: f64,
    pub functionals: Functionals,
}

impl SensitivitySolution {
    /// Relative defect of the multiplier against its closed form — a cheap
    /// internal consistency check on the whole solve.
    pub fn multiplier_defect(&self, forms: &DiscreteForms) -> f64 {
        let exact = -forms.gamma() / forms.volume.sqrt();
        ((self.multiplier - exact) / exact).abs()
    }
}

/// Solve for ψ on the assembled forms and evaluate the functionals.
pub fn solve_sensitivity(forms: &DiscreteForms) -> Result<SensitivitySolution, SensitivityError> {
    let scale = 1.0 / forms.volume.sqrt();
    let gamma = forms.gamma();
    let n = forms.ndof;

    // compatible right-hand side r = |Ω|^(−1/2) (γ M·1 − A1·1)
    let mut rhs: Vec<f64> = (0..n)
        .map(|i| scale * (gamma * forms.mass_one[i] - forms.boundary_one[i]))
        .collect();

    // ground the dof with the largest stiffness diagonal
    let diag = forms.stiffness.diag();
    let dof = diag
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let grounded = forms.stiffness.with_grounded_dof(dof);
    rhs[dof] = 0.0;
    let chol = Cholesky::factor(&grounded)?;
    let x = chol.solve(&rhs);

    // shift onto the constraint ∫ σ ψ = 0
    let alpha = -dot(&forms.mass_one, &x) / forms.volume;
    let psi: Vec<f64> = x.iter().map(|&v| v + alpha).collect();

    // a-posteriori multiplier of the saddle system
    // [A0 c; cᵀ 0][ψ; p] = [−|Ω|^(−1/2) A1·1; 0], c = M·1
    let a0_psi = forms.stiffness.mul(&psi);
    let b: Vec<f64> = forms.boundary_one.iter().map(|&v| -scale * v).collect();
    let c = &forms.mass_one;
    let multiplier = (dot(c, &b) - dot(c, &a0_psi)) / dot(c, c);

    let functionals = Functionals {
        phi: forms.stiffness.quadratic_form(&psi),
        chi: forms.boundary_mass.quadratic_form(&psi),
        upsilon: forms.mass.quadratic_form(&psi),
        gamma,
    };
    Ok(SensitivitySolution { psi, multiplier, functionals })
}

/// Energy functional whose maximum over σ-mean-zero fields is φ:
/// J(w) = −a0(w,w) − 2|Ω|^(−1/2) a1(w, 1). The input is projected onto
/// mean zero first, so any vector is a valid trial field.
pub fn energy_functional(forms: &DiscreteForms, w: &[f64]) -> f64 {
    let mean = dot(&forms.mass_one, w) / forms.volume;
    let wz: Vec<f64> = w.iter().map(|&v| v - mean).collect();
    let scale = 1.0 / forms.volume.sqrt();
    -forms.stiffness.quadratic_form(&wz) - 2.0 * scale * dot(&forms.boundary_one, &wz)
}

/// One level of a mesh refinement study.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StudyLevel {
    pub max_edge: f64,
    pub ndof: usize,
    pub phi: f64,
    pub chi: f64,
    pub upsilon: f64,
}

/// Functionals computed on a sequence of uniformly refined meshes, with a
/// Richardson error estimate for φ on the finest level.
#[derive(Clone, Debug, Serialize)]
pub struct RefinementStudy {
    pub levels: Vec<StudyLevel>,
    pub gamma: f64,
    /// estimated absolute error of φ on the finest level (needs ≥ 3 levels)
    pub phi_error: Option<f64>,
}

impl RefinementStudy {
    pub fn functionals(&self) -> Functionals {
        let last = self.levels.last().expect("study has at least one level");
        Functionals {
            phi: last.phi,
            chi: last.chi,
            upsilon: last.upsilon,
            gamma: self.gamma,
        }
    }
}

/// Richardson error estimate for the last entry of a refinement sequence
/// (uniform factor-2 refinement assumed). Returns `None` with fewer than
/// three values. When the observed contraction ratio is too close to 1 the
/// extrapolation is untrustworthy and the raw last difference is returned
/// instead.
pub fn richardson_error(values: &[f64]) -> Option<f64> {
    if values.len() < 3 {
        return None;
    }
    let v0 = values[values.len() - 3];
    let v1 = values[values.len() - 2];
    let v2 = values[values.len() - 1];
    let d1 = v0 - v1;
    let d2 = v1 - v2;
    if d2 == 0.0 {
        return Some(0.0);
    }
    let rho = d1 / d2;
    if rho > 1.1 {
        Some((d2 / (rho - 1.0)).abs())
    } else {
        Some(d2.abs())
    }
}

/// Solve on `levels` nested meshes, starting from `mesh0` and halving the
/// edge length each level. Region ids (and hence piecewise materials) are
/// inherited by the children, so interfaces stay exactly where the coarse
/// mesh put them.
pub fn refinement_study(
    mesh0: &Mesh,
    mat: &MaterialField,
    levels: usize,
) -> Result<RefinementStudy, SensitivityError> {
    if levels == 0 {
        return Err(SensitivityError::NoLevels);
    }
    let mut mesh = mesh0.clone();
    let mut study = RefinementStudy {
        levels: Vec::with_capacity(levels),
        gamma: 0.0,
        phi_error: None,
    };
    for level in 0..levels {
        let space = P2Space::build(&mesh);
        let forms = assembly::assemble(&mesh, &space, mat)?;
        let sol = solve_sensitivity(&forms)?;
        study.gamma = forms.gamma();
        study.levels.push(StudyLevel {
            max_edge: mesh.max_edge_len(),
            ndof: forms.ndof,
            phi: sol.functionals.phi,
            chi: sol.functionals.chi,
            upsilon: sol.functionals.upsilon,
        });
        if level + 1 < levels {
            mesh = mesh.refine();
        }
    }
    let phis: Vec<f64> = study.levels.iter().map(|l| l.phi).collect();
    study.phi_error = richardson_error(&phis);
    Ok(study)
}

/// Payne–Weinberger lower bound for the second Neumann eigenvalue of a
/// convex domain: μ ≥ π²/diam².
pub fn mu_payne_weinberger(diameter: f64) -> f64 {
    std::f64::consts::PI.powi(2) / (diameter * diameter)
}

/// Upper bound for φ of a composite domain:
/// φ ≤ (√φ₁ + δ)² with δ = γ √(variance/μ), where φ₁ is the uniform-material
/// value for the same shape, `variance` the volume-mean of (σ−1)², and μ a
/// lower bound for the second Neumann eigenvalue (σ = κ = 1).
pub fn phi_upper_bound(phi_uniform: f64, gamma: f64, sigma_variance: f64, mu_lower: f64) -> f64 {
    let delta = gamma * (sigma_variance / mu_lower).sqrt();
    (phi_uniform.sqrt() + delta).powi(2)
}

/// Geometric lower bound for φ built from the inscribed radius R:
///
/// ```text
///   2D:  φ ≥ (σ̲²/κ̄) (π/8)   (R²/|Ω|) (Rγ)²
///   3D:  φ ≥ (σ̲²/κ̄) (4π/45) (R³/|Ω|) (Rγ)²
/// ```
///
/// Sharp on the disk (= 1/2) and the ball (= 3/5).
pub fn phi_lower_bound(
    dim: usize,
    in_radius: f64,
    volume: f64,
    gamma: f64,
    sigma_min: f64,
    kappa_max: f64,
) -> f64 {
    let r = in_radius;
    let shape = match dim {
        2 => (std::f64::consts::PI / 8.0) * r * r / volume,
        3 => (4.0 * std::f64::consts::PI / 45.0) * r.powi(3) / volume,
        _ => panic!("phi_lower_bound supports dim 2 or 3"),
    };
    (sigma_min * sigma_min / kappa_max) * shape * (r * gamma).powi(2)
}

/// Flat record of the functionals plus derived invariants, for JSON output.
#[derive(Serialize)]
pub struct FunctionalRecord {
    pub phi: f64,
    pub chi: f64,
    pub upsilon: f64,
    pub gamma: f64,
    pub gamma_chi: f64,
    pub gamma2_upsilon: f64,
    pub conduction_correction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_error: Option<f64>,
}

impl FunctionalRecord {
    pub fn new(f: &Functionals, phi_error: Option<f64>) -> Self {
        Self {
            phi: f.phi,
            chi: f.chi,
            upsilon: f.upsilon,
            gamma: f.gamma,
            gamma_chi: f.gamma_chi(),
            gamma2_upsilon: f.gamma_sq_upsilon(),
            conduction_correction: f.conduction_correction(),
            phi_error,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble, MaterialField};
    use crate::mesh::Mesh;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_invariants() {
        // (φ, γχ, γ²Υ) for the classical shapes
        let cases: [(&str, Functionals, f64, f64, f64); 5] = [
            ("interval", Functionals::interval(2.0), 1.0 / 3.0, 1.0 / 9.0, 1.0 / 45.0),
            ("disk", Functionals::disk(1.0), 0.5, 0.25, 1.0 / 12.0),
            ("sphere", Functionals::sphere(1.0), 0.6, 9.0 / 25.0, 27.0 / 175.0),
            (
                "right isosceles",
                Functionals::right_triangle(1.0),
                4.0 / 3.0,
                0.8 * (3.0 + 2.0 * 2.0f64.sqrt()),
                (4.0 / 15.0) * (3.0 + 2.0 * 2.0f64.sqrt()),
            ),
            ("equilateral", Functionals::equilateral_triangle(1.0), 1.0, 1.8, 0.6),
        ];
        for (name, f, phi, gchi, g2u) in cases {
            println!(
                "{name:16} phi={:.12} gchi={:.12} g2u={:.12}",
                f.phi,
                f.gamma_chi(),
                f.gamma_sq_upsilon()
            );
            assert!((f.phi - phi).abs() < 1e-12, "{name}: phi");
            assert!((f.gamma_chi() - gchi).abs() < 1e-12, "{name}: gamma chi");
            assert!((f.gamma_sq_upsilon() - g2u).abs() < 1e-12, "{name}: gamma^2 upsilon");
        }
    }

    #[test]
    fn invariants_survive_rescaling() {
        for f in [
            Functionals::disk(0.37),
            Functionals::right_triangle(0.25),
            Functionals::rectangle(0.25, 0.99),
        ] {
            let g = f.scaled(5.0);
            assert!((f.phi - g.phi).abs() < 1e-14);
            assert!((f.gamma_chi() - g.gamma_chi()).abs() < 1e-12);
            assert!((f.gamma_sq_upsilon() - g.gamma_sq_upsilon()).abs() < 1e-12);
        }
    }

    #[test]
    fn thin_right_triangles() {
        // pinned values of the exact formula at the two study widths,
        // cross-checked against adaptive quadrature of the ansatz
        let f4 = Functionals::right_triangle(0.25);
        assert!((f4.phi - 9.136244857350).abs() < 1e-9, "phi(1/4) = {}", f4.phi);
        assert!((f4.gamma - 18.246211251235).abs() < 1e-9);
        assert!((f4.gamma_chi() - 465.117603907).abs() < 1e-6);
        assert!((f4.gamma_sq_upsilon() - 155.039201302).abs() < 1e-6);
        let f16 = Functionals::right_triangle(1.0 / 16.0);
        assert!((f16.phi - 161.156790036).abs() < 1e-6, "phi(1/16) = {}", f16.phi);
        assert!((f16.gamma - 66.062439083763).abs() < 1e-9);
        // sliver limit: φ grows like the aspect ratio squared
        assert!(Functionals::right_triangle(0.01).phi > 4000.0);
    }

    #[test]
    fn tensorized_bodies() {
        let cyl = Functionals::cylinder(1.0, 2.0);
        assert!((cyl.phi - 5.0 / 6.0).abs() < 1e-14);
        let cube = Functionals::rect_box(1.0, 1.0, 1.0);
        assert!((cube.phi - 1.0).abs() < 1e-14);
        assert!((cube.gamma - 6.0).abs() < 1e-14);
        // rectangle assembled from two interval factors matches the direct form
        let r = Functionals::rectangle(0.25, 0.99);
        let l1 = 0.25f64;
        let l2 = 0.99f64;
        let chi = l1 / 18.0 + l2 / 18.0 + l1 * l1 / (90.0 * l2) + l2 * l2 / (90.0 * l1);
        assert!((r.phi - 2.0 / 3.0).abs() < 1e-14);
        assert!((r.chi - chi).abs() < 1e-14);
        assert!((r.upsilon - (l1 * l1 + l2 * l2) / 180.0).abs() < 1e-14);
    }

    #[test]
    fn rectangle_solve_is_exact_on_one_cell() {
        // ψ separates into quadratics of x and y, which live in the P2
        // space on any rectangle mesh: all three functionals come out to
        // machine precision even on a 2×2-cell grid.
        let mesh = Mesh::rectangle(0.25, 0.99, 2, 2);
        let space = crate::mesh::P2Space::build(&mesh);
        let forms = assemble(&mesh, &space, &MaterialField::uniform()).unwrap();
        let sol = solve_sensitivity(&forms).unwrap();
        let exact = Functionals::rectangle(0.25, 0.99);
        println!(
            "rect: phi={:.16} (exact {:.16}), defect {:.2e}",
            sol.functionals.phi,
            exact.phi,
            sol.multiplier_defect(&forms)
        );
        assert!((sol.functionals.phi - exact.phi).abs() < 1e-12);
        assert!((sol.functionals.chi - exact.chi).abs() < 1e-12);
        assert!((sol.functionals.upsilon - exact.upsilon).abs() < 1e-13);
        assert!(sol.multiplier_defect(&forms) < 1e-10);
    }

    #[test]
    fn triangle_solve_matches_ansatz() {
        let mesh = Mesh::from_spec(&crate::geometry::DomainSpec::right_triangle(0.25).unwrap(), 0.26)
            .unwrap()
            .refine();
        let space = crate::mesh::P2Space::build(&mesh);
        let forms = assemble(&mesh, &space, &MaterialField::uniform()).unwrap();
        let sol = solve_sensitivity(&forms).unwrap();
        let exact = Functionals::right_triangle(0.25);
        let rel = ((sol.functionals.phi - exact.phi) / exact.phi).abs();
        println!("triangle phi rel error {rel:.2e} on {} dofs", forms.ndof);
        assert!(rel < 1e-10, "quadratic field should be captured exactly");
        assert!(((sol.functionals.chi - exact.chi) / exact.chi).abs() < 1e-10);
        assert!(((sol.functionals.upsilon - exact.upsilon) / exact.upsilon).abs() < 1e-10);
    }

    #[test]
    fn energy_functional_peaks_at_the_solution() {
        let mesh = Mesh::rectangle(1.0, 1.0, 4, 4);
        let space = crate::mesh::P2Space::build(&mesh);
        let forms = assemble(&mesh, &space, &MaterialField::uniform()).unwrap();
        let sol = solve_sensitivity(&forms).unwrap();
        let at_solution = energy_functional(&forms, &sol.psi);
        assert!((at_solution - sol.functionals.phi).abs() < 1e-12);
        // any perturbation can only lower it
        let mut w = sol.psi.clone();
        for (i, v) in w.iter_mut().enumerate() {
            *v += 0.05 * ((i * 2654435761) % 97) as f64 / 97.0;
        }
        assert!(energy_functional(&forms, &w) < sol.functionals.phi);
    }

    #[test]
    fn richardson_estimate_behaviour() {
        assert!(richardson_error(&[1.0, 2.0]).is_none());
        // clean second-order sequence toward 1: v = 1 + 4^(−k)
        let seq = [1.0 + 0.25f64, 1.0 + 0.0625, 1.0 + 0.015625];
        let est = richardson_error(&seq).unwrap();
        let actual = 0.015625;
        assert!((est - actual).abs() < 0.3 * actual, "est {est} vs {actual}");
        // stalled sequence falls back to the raw difference
        let stalled = [1.0, 0.9, 0.8];
        assert!((richardson_error(&stalled).unwrap() - 0.1).abs() < 1e-12);
        // converged to roundoff
        assert_eq!(richardson_error(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn refinement_study_on_a_disk() {
        let spec = crate::geometry::DomainSpec::disk(1.0).unwrap();
        let mesh = Mesh::from_spec(&spec, 0.35).unwrap();
        let study = refinement_study(&mesh, &MaterialField::uniform(), 3).unwrap();
        let f = study.functionals();
        // polygonal approximation of the disk: expect percent-level accuracy
        // here, with the Richardson estimate in the right ballpark
        println!(
            "disk: phi={:.6} est err={:.2e} true err={:.2e}",
            f.phi,
            study.phi_error.unwrap(),
            (f.phi - 0.5).abs()
        );
        assert!((f.phi - 0.5).abs() < 0.01);
        assert!(study.phi_error.unwrap() < 0.02);
    }

    #[test]
    fn bounds_are_sharp_on_round_bodies() {
        let disk = phi_lower_bound(2, 1.0, PI, 2.0, 1.0, 1.0);
        assert!((disk - 0.5).abs() < 1e-14);
        let ball = phi_lower_bound(3, 1.0, 4.0 * PI / 3.0, 3.0, 1.0, 1.0);
        assert!((ball - 0.6).abs() < 1e-14);
    }

    #[test]
    fn upper_bound_hand_value() {
        // 1/4 × 1 rectangle, σ contrast 1000:1 split half/half, γ = 10:
        // variance (999/1001)², μ = π² (exact for this rectangle)
        let var = (999.0f64 / 1001.0).powi(2);
        let ub = phi_upper_bound(2.0 / 3.0, 10.0, var, PI * PI);
        assert!((ub - 15.9459).abs() < 1e-3, "ub = {ub}");
        // Payne–Weinberger for the unit square: π²/2 ≤ π² (true μ)
        assert!((mu_payne_weinberger(2.0f64.sqrt()) - PI * PI / 2.0).abs() < 1e-12);
    }
}
