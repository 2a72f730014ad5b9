//! The built-in case catalog: named geometries (with material layout and
//! meshing recipe) that every subcommand can target by `--builtin name`.

use dunkkit::assembly::MaterialField;
use dunkkit::geometry::{DomainSpec, GearProfile};
use dunkkit::mesh::Mesh;
use dunkkit::sensitivity::Functionals;

use crate::CliError;

/// How the coarse mesh for a case is produced.
#[derive(Clone, Copy, Debug)]
enum MeshRecipe {
    /// No planar mesh — the case is handled in closed form only.
    None,
    /// Triangulate the geometry down to the given edge length.
    FromSpec { target_h: f64 },
    /// Structured strip grid with a material interface at mid-height.
    Strip { nx: usize, ny: usize },
    /// Unit square with a centered square inclusion of the given area
    /// fraction on an n × n grid.
    Inclusion { fraction: f64, n: usize },
}

pub struct Builtin {
    pub name: String,
    pub spec: DomainSpec,
    pub material: MaterialField,
    /// Exact full-body data when the planar case is one symmetry cell of a
    /// gear; used for the feature-based lower bound.
    pub gear: Option<GearProfile>,
    /// True when the material has more than one region (enables the
    /// heterogeneity upper bound in `phi` reports).
    pub heterogeneous: bool,
    recipe: MeshRecipe,
}

/// (name, description) pairs for `geometry --list`.
pub const CATALOG: &[(&str, &str)] = &[
    ("interval", "unit-length interval (1-D, closed form)"),
    ("disk", "unit disk (meshed as an inscribed polygon)"),
    ("sphere", "unit ball (3-D, closed form)"),
    ("square", "unit square"),
    ("rect", "0.25 x 0.99 rectangle"),
    ("sart1", "right triangle with legs 1/4 and 1"),
    ("sart2", "right triangle with legs 1/16 and 1"),
    ("equilateral", "equilateral triangle with unit side"),
    ("cylinder", "unit-radius, unit-height cylinder (closed form)"),
    ("box", "unit cube (closed form)"),
    ("recthi", "0.25 x 1 strip, two materials split at mid-height"),
    ("evfcs", "unit square, equal-volume two-phase composite"),
    ("dvfcslf", "unit square, thin low-conductance frame around a mild core"),
    ("dvfcshf", "unit square, thin high-conductance frame around a weak core"),
    ("gear-N-Q", "gear half-tooth symmetry cell, e.g. gear-32-1.6"),
];

impl Builtin {
    pub fn lookup(name: &str) -> Result<Builtin, CliError> {
        let uniform = MaterialField::uniform();
        let plain = |name: &str, spec: DomainSpec, h: f64| Builtin {
            name: name.to_owned(),
            spec,
            material: uniform.clone(),
            gear: None,
            heterogeneous: false,
            recipe: MeshRecipe::FromSpec { target_h: h },
        };
        let closed = |name: &str, spec: DomainSpec| Builtin {
            name: name.to_owned(),
            spec,
            material: uniform.clone(),
            gear: None,
            heterogeneous: false,
            recipe: MeshRecipe::None,
        };
        let geo = |e: dunkkit::geometry::GeometryError| CliError::Message(e.to_string());

        Ok(match name {
            "interval" => closed("interval", DomainSpec::interval(0.5).map_err(geo)?),
            "disk" => plain("disk", DomainSpec::disk(1.0).map_err(geo)?, 0.25),
            "sphere" => closed("sphere", DomainSpec::sphere(1.0).map_err(geo)?),
            "square" => plain("square", DomainSpec::unit_square(), 0.25),
            "rect" => plain("rect", DomainSpec::rectangle(0.25, 0.99).map_err(geo)?, 0.125),
            "sart1" => plain("sart1", DomainSpec::right_triangle(0.25).map_err(geo)?, 0.125),
            "sart2" => plain("sart2", DomainSpec::right_triangle(0.0625).map_err(geo)?, 0.125),
            "equilateral" => {
                let v = vec![[0.0, 0.0], [1.0, 0.0], [0.5, 3.0_f64.sqrt() / 2.0]];
                plain("equilateral", DomainSpec::polygon(v).map_err(geo)?, 0.25)
            }
            "cylinder" => {
                let base = DomainSpec::disk(1.0).map_err(geo)?;
                closed("cylinder", DomainSpec::tensorized(base, 1.0).map_err(geo)?)
            }
            "box" => {
                let base = DomainSpec::rectangle(1.0, 1.0).map_err(geo)?;
                closed("box", DomainSpec::tensorized(base, 1.0).map_err(geo)?)
            }
            "recthi" => Builtin {
                name: name.to_owned(),
                spec: DomainSpec::rectangle(0.25, 1.0).map_err(geo)?,
                material: MaterialField::uniform()
                    .with_region(0, 2.0 / 1001.0, 1.0)
                    .with_region(1, 2000.0 / 1001.0, 1.0),
                gear: None,
                heterogeneous: true,
                recipe: MeshRecipe::Strip { nx: 2, ny: 4 },
            },
            "evfcs" => square_composite(name, 0.5, 2000.0 / 1001.0, 2.0 / 1001.0)?,
            "dvfcslf" => square_composite(name, 20.0 / 21.0, 21000.0 / 20001.0, 21.0 / 20001.0)?,
            "dvfcshf" => square_composite(name, 20.0 / 21.0, 21.0 / 1020.0, 21000.0 / 1020.0)?,
            g if g.starts_with("gear-") => gear_builtin(g)?,
            other => {
                return Err(CliError::Message(format!(
                    "unknown builtin '{other}' (see `dunkkit geometry --list`)"
                )))
            }
        })
    }

    /// Wrap a geometry file (uniform unit material) as a case.
    pub fn from_geometry_file(path: &std::path::Path) -> Result<Builtin, CliError> {
        let text = std::fs::read_to_string(path)?;
        let spec = DomainSpec::from_json(&text)
            .map_err(|e| CliError::Message(format!("{}: {e}", path.display())))?;
        let target_h = spec.diameter() / 8.0;
        Ok(Builtin {
            name: path.display().to_string(),
            spec,
            material: MaterialField::uniform(),
            gear: None,
            heterogeneous: false,
            recipe: MeshRecipe::FromSpec { target_h },
        })
    }

    /// Closed-form functionals for the non-planar cases.
    pub fn closed_form(&self) -> Option<Functionals> {
        Some(match self.name.as_str() {
            "interval" => Functionals::interval(1.0),
            "sphere" => Functionals::sphere(1.0),
            "cylinder" => Functionals::cylinder(1.0, 1.0),
            "box" => Functionals::rect_box(1.0, 1.0, 1.0),
            _ => return None,
        })
    }

    /// The coarse mesh every refinement study/transient starts from.
    pub fn coarse_mesh(&self) -> Result<Mesh, CliError> {
        match self.recipe {
            MeshRecipe::None => Err(CliError::Message(format!(
                "builtin '{}' has no planar mesh; it is evaluated in closed form",
                self.name
            ))),
            MeshRecipe::FromSpec { target_h } => Mesh::from_spec(&self.spec, target_h)
                .map_err(|e| CliError::Message(e.to_string())),
            MeshRecipe::Strip { nx, ny } => {
                let mut mesh = Mesh::rectangle(0.25, 1.0, nx, ny);
                mesh.assign_regions(|c| u32::from(c[1] > 0.5));
                Ok(mesh)
            }
            MeshRecipe::Inclusion { fraction, n } => Ok(Mesh::square_with_inclusion(fraction, n)),
        }
    }

    /// (in-radius, volume) of the physical body for the feature-based
    /// lower bound. For gear cells these are the full-gear values.
    pub fn feature_data(&self) -> (f64, f64) {
        match &self.gear {
            Some(p) => (p.in_radius(), p.area()),
            None => (self.spec.in_radius(), self.spec.volume()),
        }
    }
}

fn square_composite(
    name: &str,
    fraction: f64,
    sigma_inner: f64,
    sigma_outer: f64,
) -> Result<Builtin, CliError> {
    Ok(Builtin {
        name: name.to_owned(),
        spec: DomainSpec::unit_square(),
        material: MaterialField::uniform()
            .with_region(1, sigma_inner, 1.0)
            .with_region(0, sigma_outer, 1.0),
        gear: None,
        heterogeneous: true,
        recipe: MeshRecipe::Inclusion { fraction, n: 10 },
    })
}

fn gear_builtin(name: &str) -> Result<Builtin, CliError> {
    let bad = || {
        CliError::Message(format!(
            "gear builtins are written gear-<teeth>-<sharpness>, e.g. gear-32-1.6; got '{name}'"
        ))
    };
    let rest = name.strip_prefix("gear-").ok_or_else(bad)?;
    let (teeth_s, q_s) = rest.split_once('-').ok_or_else(bad)?;
    let teeth: usize = teeth_s.parse().map_err(|_| bad())?;
    let sharpness: f64 = q_s.parse().map_err(|_| bad())?;
    let profile =
        GearProfile::new(teeth, sharpness).map_err(|e| CliError::Message(e.to_string()))?;
    let spec = DomainSpec::gear_halftooth_with_resolution(teeth, sharpness, 8)
        .map_err(|e| CliError::Message(e.to_string()))?;
    Ok(Builtin {
        name: name.to_owned(),
        spec,
        material: MaterialField::uniform(),
        gear: Some(profile),
        heterogeneous: false,
        recipe: MeshRecipe::FromSpec { target_h: 0.1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_name_resolves() {
        for (name, _) in CATALOG {
            let name = if *name == "gear-N-Q" { "gear-32-1.6" } else { name };
            let b = Builtin::lookup(name).expect(name);
            assert_eq!(b.name, name);
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(Builtin::lookup("pyramid").is_err());
        assert!(Builtin::lookup("gear-32").is_err());
        assert!(Builtin::lookup("gear-seven-1.6").is_err());
    }

    #[test]
    fn composite_cases_have_mean_one_sigma() {
        for name in ["recthi", "evfcs", "dvfcslf", "dvfcshf"] {
            let b = Builtin::lookup(name).unwrap();
            let mesh = b.coarse_mesh().unwrap();
            // volume-weighted mean of sigma should be 1 by construction
            let mut mean = 0.0;
            for t in 0..mesh.triangles.len() {
                mean += b.material.sigma(mesh.triangles[t].region) * mesh.tri_area(t);
            }
            mean /= mesh.area();
            assert!((mean - 1.0).abs() < 1e-12, "{name}: sigma mean {mean}");
        }
    }

    #[test]
    fn gear_feature_data_uses_full_body_values() {
        let b = Builtin::lookup("gear-32-1.6").unwrap();
        let (r, vol) = b.feature_data();
        let p = b.gear.unwrap();
        assert_eq!(r, p.in_radius());
        assert_eq!(vol, p.area());
        // the symmetry cell itself is ~1/64 of the full gear
        assert!(b.spec.volume() < vol / 32.0);
    }

    #[test]
    fn closed_form_cases_refuse_to_mesh() {
        for name in ["interval", "sphere", "cylinder", "box"] {
            let b = Builtin::lookup(name).unwrap();
            assert!(b.closed_form().is_some(), "{name}");
            assert!(b.coarse_mesh().is_err(), "{name}");
        }
    }
}
