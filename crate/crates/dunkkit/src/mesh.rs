//! Conforming triangle meshes and the quadratic (P2) node layout.
//!
//! Meshes are deliberately plain: a vertex list, triangles with a region id
//! (for piecewise-constant material data), and tagged boundary edges that
//! remember which polygon edge of the original [`DomainSpec`] they came
//! from (`parent`). That parent id is what lets a spatially varying bath
//! field address "edge 3 of the polygon" after any number of refinements.
//!
//! Triangulation is intentionally simple — centroid fans for convex
//! polygons, ear clipping otherwise — because uniform *red* refinement does
//! the real work: each pass splits every triangle into four similar copies,
//! so element quality is decided once by the coarse mesh and never degrades.

use crate::geometry::{DomainSpec, EdgeTag, GeometryError};
use serde_json::{json, Value};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("cannot mesh this domain kind directly: {0}")]
    UnsupportedSpec(&'static str),
    #[error("polygon could not be triangulated (is it simple and counter-clockwise?)")]
    EarClipStuck,
    #[error("mesh is not conforming: {0}")]
    NonConforming(String),
    #[error("triangle {0} has non-positive area")]
    InvertedTriangle(usize),
    #[error("bad mesh JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug)]
pub struct Triangle {
    pub v: [usize; 3],
    pub region: u32,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundaryEdge {
    /// Directed so the domain lies on the left: (a, b) is a directed edge
    /// of exactly one triangle.
    pub a: usize,
    pub b: usize,
    pub tag: EdgeTag,
    /// Index of the originating polygon edge (stable across refinement).
    pub parent: usize,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<Triangle>,
    pub boundary: Vec<BoundaryEdge>,
}

impl Mesh {
    /// Triangulate a domain so that no triangle edge exceeds `target_h`.
    /// Polygons are meshed directly; a disk becomes an inscribed polygon
    /// with chord length ≤ `target_h` first.
    pub fn from_spec(spec: &DomainSpec, target_h: f64) -> Result<Mesh, MeshError> {
        assert!(target_h > 0.0, "target_h must be positive");
        match spec {
            DomainSpec::Polygon { vertices, tags } => {
                let mut mesh = triangulate_polygon(vertices, tags)?;
                while mesh.max_edge_len() > target_h {
                    mesh = mesh.refine();
                }
                Ok(mesh)
            }
            DomainSpec::Disk { radius } => {
                let sides = ((2.0 * std::f64::consts::PI * radius / target_h).ceil() as usize)
                    .max(16);
                let ngon = DomainSpec::regular_ngon(sides, *radius)?;
                Mesh::from_spec(&ngon, target_h)
            }
            DomainSpec::Interval { .. } => Err(MeshError::UnsupportedSpec(
                "interval (use the closed-form catalog for 1D)",
            )),
            DomainSpec::Sphere { .. } => Err(MeshError::UnsupportedSpec(
                "sphere (use the closed-form catalog)",
            )),
            DomainSpec::Tensorized { .. } => Err(MeshError::UnsupportedSpec(
                "extrusion (solve the 2D base and compose)",
            )),
        }
    }

    /// Coarsest conforming mesh of a polygon (no refinement).
    pub fn coarse(spec: &DomainSpec) -> Result<Mesh, MeshError> {
        match spec {
            DomainSpec::Polygon { vertices, tags } => triangulate_polygon(vertices, tags),
            _ => Err(MeshError::UnsupportedSpec("coarse() needs a polygon")),
        }
    }

    /// Structured mesh of `[0,w] × [0,h]` with `nx × ny` cells, each split
    /// into two triangles. Boundary parents: 0 bottom, 1 right, 2 top,
    /// 3 left (matching [`DomainSpec::rectangle`]'s edge order).
    pub fn rectangle(width: f64, height: f64, nx: usize, ny: usize) -> Mesh {
        let xs: Vec<f64> = (0..=nx).map(|i| width * i as f64 / nx as f64).collect();
        let ys: Vec<f64> = (0..=ny).map(|j| height * j as f64 / ny as f64).collect();
        Mesh::tensor_grid(&xs, &ys)
    }

    /// Structured mesh on an arbitrary tensor grid of sorted coordinates.
    /// Putting grid lines on material interfaces keeps piecewise-smooth
    /// solutions exactly representable.
    pub fn tensor_grid(xs: &[f64], ys: &[f64]) -> Mesh {
        assert!(xs.len() >= 2 && ys.len() >= 2, "need at least one cell");
        debug_assert!(xs.windows(2).all(|w| w[1] > w[0]));
        debug_assert!(ys.windows(2).all(|w| w[1] > w[0]));
        let (nx, ny) = (xs.len() - 1, ys.len() - 1);
        let vid = |i: usize, j: usize| j * (nx + 1) + i;

        let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
        for &y in ys {
            for &x in xs {
                vertices.push([x, y]);
            }
        }
        let mut triangles = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let (a, b, c, d) = (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
                triangles.push(Triangle { v: [a, b, c], region: 0 });
                triangles.push(Triangle { v: [a, c, d], region: 0 });
            }
        }
        let mut boundary = Vec::with_capacity(2 * (nx + ny));
        for i in 0..nx {
            boundary.push(BoundaryEdge { a: vid(i, 0), b: vid(i + 1, 0), tag: EdgeTag::Robin, parent: 0 });
        }
        for j in 0..ny {
            boundary.push(BoundaryEdge { a: vid(nx, j), b: vid(nx, j + 1), tag: EdgeTag::Robin, parent: 1 });
        }
        for i in (0..nx).rev() {
            boundary.push(BoundaryEdge { a: vid(i + 1, ny), b: vid(i, ny), tag: EdgeTag::Robin, parent: 2 });
        }
        for j in (0..ny).rev() {
            boundary.push(BoundaryEdge { a: vid(0, j + 1), b: vid(0, j), tag: EdgeTag::Robin, parent: 3 });
        }
        Mesh { vertices, triangles, boundary }
    }

    /// Reassign triangle regions by a predicate on the centroid.
    pub fn assign_regions(&mut self, classify: impl Fn([f64; 2]) -> u32) {
        for t in &mut self.triangles {
            let [a, b, c] = t.v.map(|v| self.vertices[v]);
            let centroid = [
                (a[0] + b[0] + c[0]) / 3.0,
                (a[1] + b[1] + c[1]) / 3.0,
            ];
            t.region = classify(centroid);
        }
    }

    /// Unit-square mesh with a centered square inclusion covering the given
    /// area fraction. Grid lines pass exactly through the material interface
    /// so piecewise-smooth fields stay well resolved, with roughly `n` cells
    /// per axis elsewhere (uniform lines landing too close to the interface
    /// are dropped to avoid sliver cells). Regions: 0 outside the inclusion,
    /// 1 inside.
    pub fn square_with_inclusion(inner_area_fraction: f64, n: usize) -> Mesh {
        assert!(
            inner_area_fraction > 0.0 && inner_area_fraction < 1.0,
            "inclusion fraction must lie strictly between 0 and 1"
        );
        assert!(n >= 2, "need at least two cells per axis");
        let side = inner_area_fraction.sqrt();
        let lo = 0.5 * (1.0 - side);
        let hi = 1.0 - lo;
        let h = 1.0 / n as f64;
        let mut lines = vec![0.0, lo, hi, 1.0];
        for i in 1..n {
            let x = i as f64 * h;
            if (x - lo).abs() > 0.3 * h && (x - hi).abs() > 0.3 * h {
                lines.push(x);
            }
        }
        lines.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let mut mesh = Mesh::tensor_grid(&lines, &lines);
        mesh.assign_regions(|c| {
            u32::from(c[0] > lo && c[0] < hi && c[1] > lo && c[1] < hi)
        });
        mesh
    }

    /// Red refinement: every triangle splits into four similar children.
    pub fn refine(&self) -> Mesh {
        self.refine_traced().0
    }

    /// Red refinement, also returning `parent[t_fine] = t_coarse` so fields
    /// can be transferred between the nested spaces.
    pub fn refine_traced(&self) -> (Mesh, Vec<usize>) {
        let edges = EdgeIndex::build(self);
        let nv = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend(edges.list.iter().map(|&[a, b]| {
            let (p, q) = (self.vertices[a], self.vertices[b]);
            [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0]
        }));

        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        let mut parents = Vec::with_capacity(4 * self.triangles.len());
        for (t, tri) in self.triangles.iter().enumerate() {
            let [a, b, c] = tri.v;
            let mab = nv + edges.id(a, b);
            let mbc = nv + edges.id(b, c);
            let mca = nv + edges.id(c, a);
            for child in [
                [a, mab, mca],
                [mab, b, mbc],
                [mca, mbc, c],
                [mab, mbc, mca],
            ] {
                triangles.push(Triangle { v: child, region: tri.region });
                parents.push(t);
            }
        }

        let mut boundary = Vec::with_capacity(2 * self.boundary.len());
        for e in &self.boundary {
            let m = nv + edges.id(e.a, e.b);
            boundary.push(BoundaryEdge { a: e.a, b: m, tag: e.tag, parent: e.parent });
            boundary.push(BoundaryEdge { a: m, b: e.b, tag: e.tag, parent: e.parent });
        }
        (Mesh { vertices, triangles, boundary }, parents)
    }

    pub fn tri_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].v;
        let (p, q, r) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.tri_area(t)).sum()
    }

    /// Area per region id, for material normalization.
    pub fn region_areas(&self) -> std::collections::BTreeMap<u32, f64> {
        let mut out = std::collections::BTreeMap::new();
        for t in 0..self.triangles.len() {
            *out.entry(self.triangles[t].region).or_insert(0.0) += self.tri_area(t);
        }
        out
    }

    pub fn edge_length(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.vertices[a], self.vertices[b]);
        ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt()
    }

    /// Total length of the Robin (bath-contact) part of the boundary.
    pub fn robin_length(&self) -> f64 {
        self.boundary
            .iter()
            .filter(|e| e.tag == EdgeTag::Robin)
            .map(|e| self.edge_length(e.a, e.b))
            .sum()
    }

    pub fn max_edge_len(&self) -> f64 {
        let mut h: f64 = 0.0;
        for t in &self.triangles {
            let [a, b, c] = t.v;
            h = h
                .max(self.edge_length(a, b))
                .max(self.edge_length(b, c))
                .max(self.edge_length(c, a));
        }
        h
    }

    /// Structural checks: positive orientation, interior edges shared by
    /// exactly two triangles, boundary edges matching exactly one directed
    /// triangle edge.
    pub fn validate(&self) -> Result<(), MeshError> {
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in &tri.v {
                if v >= self.vertices.len() {
                    return Err(MeshError::NonConforming(format!(
                        "triangle {t} references vertex {v} out of range"
                    )));
                }
            }
            if self.tri_area(t) <= 0.0 {
                return Err(MeshError::InvertedTriangle(t));
            }
        }
        // count directed edges
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in &self.triangles {
            let [a, b, c] = tri.v;
            for (p, q) in [(a, b), (b, c), (c, a)] {
                *directed.entry((p, q)).or_insert(0) += 1;
            }
        }
        for (&(p, q), &n) in &directed {
            if n > 1 {
                return Err(MeshError::NonConforming(format!(
                    "directed edge ({p},{q}) used by {n} triangles"
                )));
            }
            let twin = directed.get(&(q, p)).copied().unwrap_or(0);
            let on_boundary = self.boundary.iter().any(|e| e.a == p && e.b == q);
            if twin == 0 && !on_boundary {
                return Err(MeshError::NonConforming(format!(
                    "edge ({p},{q}) has no twin and is not a boundary edge"
                )));
            }
            if twin == 1 && on_boundary {
                return Err(MeshError::NonConforming(format!(
                    "interior edge ({p},{q}) is listed as boundary"
                )));
            }
        }
        for e in &self.boundary {
            if directed.get(&(e.a, e.b)).copied().unwrap_or(0) != 1 {
                return Err(MeshError::NonConforming(format!(
                    "boundary edge ({},{}) is not a directed triangle edge",
                    e.a, e.b
                )));
            }
        }
        Ok(())
    }

    /// Serialize to the interchange schema:
    /// `{"vertices":[[x,y],…],"triangles":[[i,j,k,region],…],"boundary":[[i,j,"robin"|"neumann"],…]}`
    pub fn to_json(&self) -> String {
        let tris: Vec<Value> = self
            .triangles
            .iter()
            .map(|t| json!([t.v[0], t.v[1], t.v[2], t.region]))
            .collect();
        let bnd: Vec<Value> = self
            .boundary
            .iter()
            .map(|e| {
                let tag = match e.tag {
                    EdgeTag::Robin => "robin",
                    EdgeTag::Neumann => "neumann",
                };
                json!([e.a, e.b, tag])
            })
            .collect();
        serde_json::to_string_pretty(&json!({
            "vertices": self.vertices,
            "triangles": tris,
            "boundary": bnd,
        }))
        .expect("mesh serializes")
    }

    /// Parse the interchange schema. Each boundary edge becomes its own
    /// parent (the original polygon identity is not part of the schema).
    pub fn from_json(s: &str) -> Result<Mesh, MeshError> {
        let v: Value = serde_json::from_str(s).map_err(|e| MeshError::Json(e.to_string()))?;
        let vertices: Vec<[f64; 2]> = serde_json::from_value(
            v.get("vertices").cloned().ok_or_else(|| MeshError::Json("missing vertices".into()))?,
        )
        .map_err(|e| MeshError::Json(e.to_string()))?;

        let tris = v
            .get("triangles")
            .and_then(Value::as_array)
            .ok_or_else(|| MeshError::Json("missing triangles".into()))?;
        let mut triangles = Vec::with_capacity(tris.len());
        for t in tris {
            let row = t.as_array().filter(|r| r.len() == 4).ok_or_else(|| {
                MeshError::Json("triangle rows must be [i, j, k, region]".into())
            })?;
            let idx = |k: usize| -> Result<usize, MeshError> {
                row[k]
                    .as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| MeshError::Json("triangle index must be an integer".into()))
            };
            triangles.push(Triangle {
                v: [idx(0)?, idx(1)?, idx(2)?],
                region: idx(3)? as u32,
            });
        }

        let bnd = v
            .get("boundary")
            .and_then(Value::as_array)
            .ok_or_else(|| MeshError::Json("missing boundary".into()))?;
        let mut boundary = Vec::with_capacity(bnd.len());
        for (k, e) in bnd.iter().enumerate() {
            let row = e.as_array().filter(|r| r.len() == 3).ok_or_else(|| {
                MeshError::Json("boundary rows must be [i, j, tag]".into())
            })?;
            let a = row[0].as_u64().ok_or_else(|| MeshError::Json("bad boundary index".into()))? as usize;
            let b = row[1].as_u64().ok_or_else(|| MeshError::Json("bad boundary index".into()))? as usize;
            let tag = match row[2].as_str() {
                Some("robin") => EdgeTag::Robin,
                Some("neumann") => EdgeTag::Neumann,
                other => {
                    return Err(MeshError::Json(format!(
                        "boundary tag must be \"robin\" or \"neumann\", got {other:?}"
                    )))
                }
            };
            boundary.push(BoundaryEdge { a, b, tag, parent: k });
        }
        let mesh = Mesh { vertices, triangles, boundary };
        mesh.validate()?;
        Ok(mesh)
    }
}

/// Canonical edge numbering shared by refinement and the P2 layout.
struct EdgeIndex {
    list: Vec<[usize; 2]>,
    map: HashMap<(usize, usize), usize>,
}

impl EdgeIndex {
    fn build(mesh: &Mesh) -> Self {
        let mut list = Vec::new();
        let mut map = HashMap::new();
        for tri in &mesh.triangles {
            let [a, b, c] = tri.v;
            for (p, q) in [(a, b), (b, c), (c, a)] {
                let key = (p.min(q), p.max(q));
                map.entry(key).or_insert_with(|| {
                    list.push([key.0, key.1]);
                    list.len() - 1
                });
            }
        }
        EdgeIndex { list, map }
    }

    fn id(&self, a: usize, b: usize) -> usize {
        self.map[&(a.min(b), a.max(b))]
    }
}

/// Quadratic-element node layout over a mesh: vertex nodes first, then one
/// midside node per edge. Local node order on a triangle `(v0, v1, v2)` is
/// `[v0, v1, v2, m01, m12, m20]`.
pub struct P2Space {
    pub n_vertices: usize,
    pub edges: Vec<[usize; 2]>,
    /// per-triangle edge ids in local order [e01, e12, e20]
    pub tri_edges: Vec<[usize; 3]>,
    pub node_xy: Vec<[f64; 2]>,
    edge_map: HashMap<(usize, usize), usize>,
}

impl P2Space {
    pub fn build(mesh: &Mesh) -> P2Space {
        let edges = EdgeIndex::build(mesh);
        let tri_edges = mesh
            .triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.v;
                [edges.id(a, b), edges.id(b, c), edges.id(c, a)]
            })
            .collect();
        let mut node_xy = mesh.vertices.clone();
        node_xy.extend(edges.list.iter().map(|&[a, b]| {
            let (p, q) = (mesh.vertices[a], mesh.vertices[b]);
            [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0]
        }));
        P2Space {
            n_vertices: mesh.vertices.len(),
            tri_edges,
            node_xy,
            edge_map: edges.map,
            edges: edges.list,
        }
    }

    pub fn ndof(&self) -> usize {
        self.n_vertices + self.edges.len()
    }

    /// Global node ids of triangle `t` in local order.
    pub fn tri_nodes(&self, mesh: &Mesh, t: usize) -> [usize; 6] {
        let [a, b, c] = mesh.triangles[t].v;
        let e = self.tri_edges[t];
        [a, b, c, self.n_vertices + e[0], self.n_vertices + e[1], self.n_vertices + e[2]]
    }

    /// Global node ids `[a, mid, b]` along a boundary edge.
    pub fn boundary_edge_nodes(&self, e: &BoundaryEdge) -> [usize; 3] {
        let mid = self.n_vertices + self.edge_map[&(e.a.min(e.b), e.a.max(e.b))];
        [e.a, mid, e.b]
    }
}

fn triangulate_polygon(
    verts: &[[f64; 2]],
    tags: &std::collections::BTreeMap<usize, EdgeTag>,
) -> Result<Mesh, MeshError> {
    let n = verts.len();
    let boundary: Vec<BoundaryEdge> = (0..n)
        .map(|i| BoundaryEdge {
            a: i,
            b: (i + 1) % n,
            tag: tags.get(&i).copied().unwrap_or(EdgeTag::Robin),
            parent: i,
        })
        .collect();

    let cross = |o: [f64; 2], p: [f64; 2], q: [f64; 2]| -> f64 {
        (p[0] - o[0]) * (q[1] - o[1]) - (q[0] - o[0]) * (p[1] - o[1])
    };
    let dist = |p: [f64; 2], q: [f64; 2]| -> f64 { (q[0] - p[0]).hypot(q[1] - p[1]) };
    let diam: f64 = {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for v in verts {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (hi[0] - lo[0]).hypot(hi[1] - lo[1])
    };
    // Tolerances must scale with the local edge lengths, not the bounding
    // box: a finely sampled arc has corner cross products of order |e|²·Δα,
    // which a global epsilon would misread as collinear.
    let eps_rel = 1e-12;
    let corner_eps = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| eps_rel * dist(a, b) * dist(b, c);

    let convex = (0..n).all(|i| {
        let (a, b, c) = (verts[i], verts[(i + 1) % n], verts[(i + 2) % n]);
        cross(a, b, c) > -corner_eps(a, b, c)
    });

    let mut vertices = verts.to_vec();
    let mut triangles: Vec<Triangle> = Vec::with_capacity(n);

    if n == 3 {
        triangles.push(Triangle { v: [0, 1, 2], region: 0 });
    } else if convex {
        // centroid fan: good aspect ratios for regular shapes
        let c = [
            verts.iter().map(|v| v[0]).sum::<f64>() / n as f64,
            verts.iter().map(|v| v[1]).sum::<f64>() / n as f64,
        ];
        vertices.push(c);
        for i in 0..n {
            triangles.push(Triangle { v: [i, (i + 1) % n, n], region: 0 });
        }
    } else {
        // ear clipping
        let inside_closed = |p: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]| -> bool {
            // cross(a,b,p) = |ab| · signed distance of p from line ab, so
            // the slop on each test is |edge| × a diameter-relative distance
            let d1 = cross(a, b, p);
            let d2 = cross(b, c, p);
            let d3 = cross(c, a, p);
            d1 >= -eps_rel * diam * dist(a, b)
                && d2 >= -eps_rel * diam * dist(b, c)
                && d3 >= -eps_rel * diam * dist(c, a)
        };
        let mut active: Vec<usize> = (0..n).collect();
        while active.len() > 3 {
            let m = active.len();
            let mut clipped = false;
            for k in 0..m {
                let ia = active[(k + m - 1) % m];
                let ib = active[k];
                let ic = active[(k + 1) % m];
                let (a, b, c) = (verts[ia], verts[ib], verts[ic]);
                if cross(a, b, c) <= corner_eps(a, b, c) {
                    continue; // reflex or degenerate corner
                }
                let blocked = active.iter().any(|&j| {
                    j != ia && j != ib && j != ic && inside_closed(verts[j], a, b, c)
                });
                if !blocked {
                    triangles.push(Triangle { v: [ia, ib, ic], region: 0 });
                    active.remove(k);
                    clipped = true;
                    break;
                }
            }
            if !clipped {
                return Err(MeshError::EarClipStuck);
            }
        }
        triangles.push(Triangle { v: [active[0], active[1], active[2]], region: 0 });
    }

    let mesh = Mesh { vertices, triangles, boundary };
    mesh.validate()?;
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;

    #[test]
    fn rectangle_mesh_measures_are_exact() {
        let m = Mesh::rectangle(0.25, 0.99, 4, 8);
        m.validate().unwrap();
        assert_eq!(m.triangles.len(), 64);
        assert!((m.area() - 0.25 * 0.99).abs() < 1e-15);
        assert!((m.robin_length() - 2.0 * (0.25 + 0.99)).abs() < 1e-12);
    }

    #[test]
    fn single_triangle_meshes_as_itself_and_refines() {
        let spec = DomainSpec::right_triangle(0.25).unwrap();
        let coarse = Mesh::coarse(&spec).unwrap();
        assert_eq!(coarse.triangles.len(), 1);
        let fine = coarse.refine().refine();
        fine.validate().unwrap();
        assert_eq!(fine.triangles.len(), 16);
        assert!((fine.area() - spec.volume()).abs() < 1e-15);
        assert!((fine.robin_length() - spec.boundary()).abs() < 1e-12);
        // red refinement halves the mesh size each pass
        assert!((fine.max_edge_len() - coarse.max_edge_len() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn refinement_preserves_parent_edge_ids() {
        let spec = DomainSpec::right_triangle(1.0).unwrap();
        let mesh = Mesh::coarse(&spec).unwrap().refine().refine();
        // parents 0,1,2 = bottom, hypotenuse, left; lengths must match
        let mut by_parent = [0.0f64; 3];
        for e in &mesh.boundary {
            by_parent[e.parent] += mesh.edge_length(e.a, e.b);
        }
        assert!((by_parent[0] - 1.0).abs() < 1e-14);
        assert!((by_parent[1] - 2f64.sqrt()).abs() < 1e-14);
        assert!((by_parent[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nonconvex_polygon_ear_clips_to_matching_area() {
        // L-shape
        let spec = DomainSpec::polygon(vec![
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 1.0],
            [1.0, 1.0],
            [1.0, 2.0],
            [0.0, 2.0],
        ])
        .unwrap();
        let mesh = Mesh::coarse(&spec).unwrap();
        mesh.validate().unwrap();
        assert_eq!(mesh.triangles.len(), 4);
        assert!((mesh.area() - spec.volume()).abs() < 1e-14);
        let fine = mesh.refine();
        assert!((fine.area() - spec.volume()).abs() < 1e-14);
    }

    #[test]
    fn gear_cell_mesh_conforms_and_keeps_neumann_tags() {
        let spec = DomainSpec::gear_halftooth(32, 0.4).unwrap();
        let mesh = Mesh::from_spec(&spec, 0.05).unwrap();
        mesh.validate().unwrap();
        assert!((mesh.area() - spec.volume()).abs() < 1e-12 * spec.volume().max(1.0));
        let neumann_len: f64 = mesh
            .boundary
            .iter()
            .filter(|e| e.tag == EdgeTag::Neumann)
            .map(|e| mesh.edge_length(e.a, e.b))
            .sum();
        let delta = (std::f64::consts::PI / 32.0).powf(0.4);
        assert!((neumann_len - (1.0 + (1.0 - delta))).abs() < 1e-12);
        assert!((mesh.robin_length() - spec.boundary()).abs() < 1e-12);
    }

    #[test]
    fn disk_spec_meshes_via_inscribed_polygon() {
        let spec = DomainSpec::disk(1.0).unwrap();
        let mesh = Mesh::from_spec(&spec, 0.2).unwrap();
        mesh.validate().unwrap();
        assert!(mesh.max_edge_len() <= 0.2 + 1e-12);
        // area is the inscribed 32-gon's: π·sin(x)/x with x = 2π/32
        assert!(mesh.area() < std::f64::consts::PI);
        let x = 2.0 * std::f64::consts::PI / 32.0;
        assert!((mesh.area() - std::f64::consts::PI * x.sin() / x).abs() < 1e-12);
    }

    #[test]
    fn p2_space_counts_and_coordinates() {
        let mesh = Mesh::rectangle(1.0, 1.0, 2, 2);
        let p2 = P2Space::build(&mesh);
        // Euler: V=9, T=8, E = (3*8 + boundary 8)/2 = 16
        assert_eq!(p2.n_vertices, 9);
        assert_eq!(p2.edges.len(), 16);
        assert_eq!(p2.ndof(), 25);
        for t in 0..mesh.triangles.len() {
            let nodes = p2.tri_nodes(&mesh, t);
            let [a, b, c] = mesh.triangles[t].v;
            // midside node 3 sits between local vertices 0 and 1
            let m = p2.node_xy[nodes[3]];
            let (pa, pb) = (mesh.vertices[a], mesh.vertices[b]);
            assert!((m[0] - (pa[0] + pb[0]) / 2.0).abs() < 1e-15);
            assert!((m[1] - (pa[1] + pb[1]) / 2.0).abs() < 1e-15);
            let _ = c;
        }
        for e in &mesh.boundary {
            let [a, m, b] = p2.boundary_edge_nodes(e);
            let (pa, pm, pb) = (p2.node_xy[a], p2.node_xy[m], p2.node_xy[b]);
            assert!((pm[0] - (pa[0] + pb[0]) / 2.0).abs() < 1e-15);
            assert!((pm[1] - (pa[1] + pb[1]) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn region_assignment_splits_area() {
        let mut mesh = Mesh::rectangle(0.25, 1.0, 2, 8);
        mesh.assign_regions(|c| if c[1] > 0.5 { 1 } else { 0 });
        let areas = mesh.region_areas();
        assert!((areas[&0] - 0.125).abs() < 1e-14);
        assert!((areas[&1] - 0.125).abs() < 1e-14);
        // refinement must preserve regions
        let fine = mesh.refine();
        let areas = fine.region_areas();
        assert!((areas[&0] - 0.125).abs() < 1e-14);
        assert!((areas[&1] - 0.125).abs() < 1e-14);
    }

    #[test]
    fn square_inclusion_areas_and_alignment() {
        for &frac in &[0.5, 20.0 / 21.0, 1.0 / 21.0] {
            let mesh = Mesh::square_with_inclusion(frac, 8);
            mesh.validate().unwrap();
            assert!((mesh.area() - 1.0).abs() < 1e-13);
            assert!((mesh.robin_length() - 4.0).abs() < 1e-13);
            let areas = mesh.region_areas();
            assert!(
                (areas[&1] - frac).abs() < 1e-12,
                "inclusion area {} vs requested {}",
                areas[&1],
                frac
            );
            // region boundaries must also survive refinement exactly
            let fine = mesh.refine();
            let fine_areas = fine.region_areas();
            assert!((fine_areas[&1] - frac).abs() < 1e-12);
            println!(
                "frac {:.4}: {} tris, inclusion area {:.12}",
                frac,
                mesh.triangles.len(),
                areas[&1]
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let spec = DomainSpec::gear_halftooth(32, 1.6).unwrap();
        let mesh = Mesh::from_spec(&spec, 0.1).unwrap();
        let s = mesh.to_json();
        let back = Mesh::from_json(&s).unwrap();
        assert_eq!(back.triangles.len(), mesh.triangles.len());
        assert_eq!(back.boundary.len(), mesh.boundary.len());
        assert!((back.area() - mesh.area()).abs() < 1e-15);
        assert!((back.robin_length() - mesh.robin_length()).abs() < 1e-15);
        // neumann tags survive
        let n_neu = |m: &Mesh| m.boundary.iter().filter(|e| e.tag == EdgeTag::Neumann).count();
        assert_eq!(n_neu(&back), n_neu(&mesh));
    }

    #[test]
    fn validate_rejects_broken_meshes() {
        let good = Mesh::rectangle(1.0, 1.0, 1, 1);
        good.validate().unwrap();

        let mut inverted = good.clone();
        inverted.triangles[0].v.swap(0, 1);
        assert!(matches!(inverted.validate(), Err(MeshError::InvertedTriangle(0))));

        let mut missing = good.clone();
        missing.boundary.pop();
        assert!(matches!(missing.validate(), Err(MeshError::NonConforming(_))));
    }
}
