//! P2 finite element assembly of the three bilinear forms the whole crate
//! runs on:
//!
//! * `mass`          m(u,v)  = ∫_Ω σ u v        (σ-weighted volume mass)
//! * `stiffness`     a0(u,v) = ∫_Ω κ ∇u·∇v      (κ-weighted stiffness)
//! * `boundary_mass` a1(u,v) = ∫_Γ u v          (Robin-boundary mass)
//!
//! σ and κ are piecewise constant per mesh region. The interior rule is the
//! 6-point degree-4 symmetric triangle rule and the boundary rule 3-point
//! Gauss, so every entry is *exact* for P2 shape functions with per-region
//! constant coefficients — discretization error then comes only from the
//! solution space, never from integration. Three exact identities follow
//! and are pinned in tests: 1ᵀM1 = |Ω|, A0·1 = 0, 1ᵀA1·1 = |Γ|.

use crate::geometry::EdgeTag;
use crate::linalg::SymCsr;
use crate::mesh::{Mesh, P2Space};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("material {name} for region {region} must be positive, got {value}")]
    NonPositiveMaterial {
        name: &'static str,
        region: u32,
        value: f64,
    },
}

/// Piecewise-constant material data keyed by mesh region id. Regions not
/// listed default to 1, so `MaterialField::uniform()` is the empty map.
///
/// Conventions used by the estimates: σ has volume-weighted mean 1 and κ
/// has minimum 1 ([`MaterialField::normalize`] enforces both).
#[derive(Clone, Debug, Default)]
pub struct MaterialField {
    pub sigma_by_region: BTreeMap<u32, f64>,
    pub kappa_by_region: BTreeMap<u32, f64>,
}

impl MaterialField {
    pub fn uniform() -> Self {
        Self::default()
    }

    pub fn with_region(mut self, region: u32, sigma: f64, kappa: f64) -> Self {
        self.sigma_by_region.insert(region, sigma);
        self.kappa_by_region.insert(region, kappa);
        self
    }

    pub fn sigma(&self, region: u32) -> f64 {
        self.sigma_by_region.get(&region).copied().unwrap_or(1.0)
    }

    pub fn kappa(&self, region: u32) -> f64 {
        self.kappa_by_region.get(&region).copied().unwrap_or(1.0)
    }

    pub fn validate(&self) -> Result<(), AssemblyError> {
        for (&region, &value) in &self.sigma_by_region {
            if !(value > 0.0) || !value.is_finite() {
                return Err(AssemblyError::NonPositiveMaterial { name: "sigma", region, value });
            }
        }
        for (&region, &value) in &self.kappa_by_region {
            if !(value > 0.0) || !value.is_finite() {
                return Err(AssemblyError::NonPositiveMaterial { name: "kappa", region, value });
            }
        }
        Ok(())
    }

    /// Rescale so that the volume-weighted mean of σ over `mesh` is 1 and
    /// the minimum of κ over the regions present is 1. Returns the divisors
    /// `(sigma_scale, kappa_scale)` applied, so callers can undo the change
    /// of units if they need to.
    pub fn normalize(&mut self, mesh: &Mesh) -> (f64, f64) {
        let areas = mesh.region_areas();
        let volume: f64 = areas.values().sum();
        // materialize defaults for regions the mesh actually has
        for &r in areas.keys() {
            self.sigma_by_region.entry(r).or_insert(1.0);
            self.kappa_by_region.entry(r).or_insert(1.0);
        }
        let mean_sigma: f64 = areas
            .iter()
            .map(|(&r, &a)| self.sigma(r) * a)
            .sum::<f64>()
            / volume;
        let min_kappa = areas
            .keys()
            .map(|&r| self.kappa(r))
            .fold(f64::INFINITY, f64::min);
        for v in self.sigma_by_region.values_mut() {
            *v /= mean_sigma;
        }
        for v in self.kappa_by_region.values_mut() {
            *v /= min_kappa;
        }
        (mean_sigma, min_kappa)
    }

    /// Volume-weighted variance of σ around 1, `⨍(σ−1)²`: the material
    /// contrast entering the composite upper bound for `phi`.
    pub fn sigma_variance(&self, mesh: &Mesh) -> f64 {
        let areas = mesh.region_areas();
        let volume: f64 = areas.values().sum();
        areas
            .iter()
            .map(|(&r, &a)| (self.sigma(r) - 1.0).powi(2) * a)
            .sum::<f64>()
            / volume
    }

    pub fn sigma_min(&self, mesh: &Mesh) -> f64 {
        mesh.region_areas()
            .keys()
            .map(|&r| self.sigma(r))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn kappa_max(&self, mesh: &Mesh) -> f64 {
        mesh.region_areas()
            .keys()
            .map(|&r| self.kappa(r))
            .fold(0.0, f64::max)
    }
}

/// 6-point degree-4 symmetric rule on the triangle: (barycentric, weight),
/// weights summing to 1 (multiply by the element area).
const TRI_QUAD: [([f64; 3], f64); 6] = {
    const A1: f64 = 0.445948490915965;
    const W1: f64 = 0.223381589678011;
    const A2: f64 = 0.091576213509771;
    const W2: f64 = 0.109951743655322;
    [
        ([1.0 - 2.0 * A1, A1, A1], W1),
        ([A1, 1.0 - 2.0 * A1, A1], W1),
        ([A1, A1, 1.0 - 2.0 * A1], W1),
        ([1.0 - 2.0 * A2, A2, A2], W2),
        ([A2, 1.0 - 2.0 * A2, A2], W2),
        ([A2, A2, 1.0 - 2.0 * A2], W2),
    ]
};

/// 3-point Gauss rule on [0,1] (degree 5): (abscissa, weight).
const EDGE_QUAD: [(f64, f64); 3] = {
    // 0.5 ± 0.5·sqrt(3/5) = 0.5 ± 0.387298334620742
    const OFF: f64 = 0.387_298_334_620_741_7;
    [
        (0.5 - OFF, 5.0 / 18.0),
        (0.5, 8.0 / 18.0),
        (0.5 + OFF, 5.0 / 18.0),
    ]
};

/// P2 shape values at a barycentric point, local order
/// [v0, v1, v2, m01, m12, m20].
fn p2_shapes(l: [f64; 3]) -> [f64; 6] {
    [
        l[0] * (2.0 * l[0] - 1.0),
        l[1] * (2.0 * l[1] - 1.0),
        l[2] * (2.0 * l[2] - 1.0),
        4.0 * l[0] * l[1],
        4.0 * l[1] * l[2],
        4.0 * l[2] * l[0],
    ]
}

/// Physical-space P2 shape gradients at a barycentric point, given the
/// (constant) barycentric gradients `gl` of the affine map.
fn p2_grads(l: [f64; 3], gl: [[f64; 2]; 3]) -> [[f64; 2]; 6] {
    let mut g = [[0.0; 2]; 6];
    for i in 0..3 {
        for d in 0..2 {
            g[i][d] = (4.0 * l[i] - 1.0) * gl[i][d];
        }
    }
    for (k, (i, j)) in [(0usize, 1usize), (1, 2), (2, 0)].into_iter().enumerate() {
        for d in 0..2 {
            g[3 + k][d] = 4.0 * (l[i] * gl[j][d] + l[j] * gl[i][d]);
        }
    }
    g
}

/// Quadratic trace shapes on a boundary edge, parameter t ∈ [0,1],
/// local order [a, mid, b].
fn edge_shapes(t: f64) -> [f64; 3] {
    [(1.0 - t) * (1.0 - 2.0 * t), 4.0 * t * (1.0 - t), t * (2.0 * t - 1.0)]
}

/// The assembled discrete forms plus the handful of scalars and vectors
/// every downstream solver needs.
pub struct DiscreteForms {
    pub ndof: usize,
    /// m(u,v) = ∫ σ u v
    pub mass: SymCsr,
    /// a0(u,v) = ∫ κ ∇u·∇v
    pub stiffness: SymCsr,
    /// a1(u,v) = ∫_Γ u v over the Robin boundary
    pub boundary_mass: SymCsr,
    pub volume: f64,
    /// Robin boundary measure |Γ|
    pub boundary: f64,
    /// M·1, i.e. (M·1)ᵢ = ∫ σ Nᵢ
    pub mass_one: Vec<f64>,
    /// A1·1, i.e. (A1·1)ᵢ = ∫_Γ Nᵢ
    pub boundary_one: Vec<f64>,
}

impl DiscreteForms {
    pub fn gamma(&self) -> f64 {
        self.boundary / self.volume
    }

    /// σ-weighted domain mean `M(v) = |Ω|⁻¹ ∫ σ v`.
    pub fn domain_mean(&self, v: &[f64]) -> f64 {
        crate::linalg::dot(&self.mass_one, v) / self.volume
    }

    /// Boundary mean `H(v) = |Γ|⁻¹ ∫_Γ v`.
    pub fn boundary_mean(&self, v: &[f64]) -> f64 {
        crate::linalg::dot(&self.boundary_one, v) / self.boundary
    }

    /// Source functional of the sensitivity problem,
    /// `L(v) = γ ∫ σ v − ∫_Γ v = |Γ| (M(v) − H(v))`.
    pub fn load_form(&self, v: &[f64]) -> f64 {
        self.gamma() * crate::linalg::dot(&self.mass_one, v)
            - crate::linalg::dot(&self.boundary_one, v)
    }
}

/// Assemble all forms for a mesh/material pair.
pub fn assemble(mesh: &Mesh, space: &P2Space, mat: &MaterialField) -> Result<DiscreteForms, AssemblyError> {
    mat.validate()?;
    let ndof = space.ndof();
    let nt = mesh.triangles.len();

    let mut m_trip: Vec<(usize, usize, f64)> = Vec::with_capacity(36 * nt);
    let mut k_trip: Vec<(usize, usize, f64)> = Vec::with_capacity(36 * nt);

    for t in 0..nt {
        let tri = &mesh.triangles[t];
        let nodes = space.tri_nodes(mesh, t);
        let [p0, p1, p2] = tri.v.map(|v| mesh.vertices[v]);
        let area = mesh.tri_area(t);
        let inv2a = 1.0 / (2.0 * area);
        // barycentric gradients
        let gl = [
            [(p1[1] - p2[1]) * inv2a, (p2[0] - p1[0]) * inv2a],
            [(p2[1] - p0[1]) * inv2a, (p0[0] - p2[0]) * inv2a],
            [(p0[1] - p1[1]) * inv2a, (p1[0] - p0[0]) * inv2a],
        ];
        let sigma = mat.sigma(tri.region);
        let kappa = mat.kappa(tri.region);

        let mut me = [[0.0f64; 6]; 6];
        let mut ke = [[0.0f64; 6]; 6];
        for (l, w) in TRI_QUAD {
            let n = p2_shapes(l);
            let g = p2_grads(l, gl);
            for i in 0..6 {
                for j in 0..=i {
                    me[i][j] += w * n[i] * n[j];
                    ke[i][j] += w * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
                }
            }
        }
        for i in 0..6 {
            for j in 0..=i {
                let mv = sigma * area * me[i][j];
                let kv = kappa * area * ke[i][j];
                m_trip.push((nodes[i], nodes[j], mv));
                k_trip.push((nodes[i], nodes[j], kv));
                if i != j {
                    m_trip.push((nodes[j], nodes[i], mv));
                    k_trip.push((nodes[j], nodes[i], kv));
                }
            }
        }
    }

    let mass = SymCsr::from_triplets(ndof, &m_trip);
    let stiffness = SymCsr::from_triplets(ndof, &k_trip);
    let boundary_mass = assemble_boundary_weighted(mesh, space, |_| 1.0);

    let ones = vec![1.0; ndof];
    let mass_one = mass.mul(&ones);
    let boundary_one = boundary_mass.mul(&ones);
    Ok(DiscreteForms {
        ndof,
        volume: mesh.area(),
        boundary: mesh.robin_length(),
        mass,
        stiffness,
        boundary_mass,
        mass_one,
        boundary_one,
    })
}

/// Boundary mass with a per-parent-edge weight, `∫_Γ w(parent) u v`:
/// the Robin operator for a spatially varying bath field. Neumann edges
/// never contribute, whatever the weight function says.
pub fn assemble_boundary_weighted(
    mesh: &Mesh,
    space: &P2Space,
    weight: impl Fn(usize) -> f64,
) -> SymCsr {
    let ndof = space.ndof();
    let mut trip: Vec<(usize, usize, f64)> = Vec::with_capacity(9 * mesh.boundary.len());
    for e in &mesh.boundary {
        if e.tag == EdgeTag::Neumann {
            continue;
        }
        let w_edge = weight(e.parent);
        if w_edge == 0.0 {
            continue;
        }
        let nodes = space.boundary_edge_nodes(e);
        let len = mesh.edge_length(e.a, e.b);
        let mut be = [[0.0f64; 3]; 3];
        for (t, w) in EDGE_QUAD {
            let n = edge_shapes(t);
            for i in 0..3 {
                for j in 0..=i {
                    be[i][j] += w * n[i] * n[j];
                }
            }
        }
        for i in 0..3 {
            for j in 0..=i {
                let v = w_edge * len * be[i][j];
                trip.push((nodes[i], nodes[j], v));
                if i != j {
                    trip.push((nodes[j], nodes[i], v));
                }
            }
        }
    }
    SymCsr::from_triplets(ndof, &trip)
}

/// Interpolate a function onto the P2 nodes.
pub fn interpolate(space: &P2Space, f: impl Fn([f64; 2]) -> f64) -> Vec<f64> {
    space.node_xy.iter().map(|&p| f(p)).collect()
}
