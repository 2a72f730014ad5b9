//! Solvers and estimates for immersion ("dunking") heat transfer at small
//! Biot number: a body at uniform temperature is plunged into a bath held at
//! constant temperature, and we ask how fast its average temperature relaxes
//! and how well classical lumped-capacitance models capture that decay.
//!
//! The toolkit has three layers:
//!
//! * **Shape functionals** ([`sensitivity`]): a single steady P2 finite
//!   element solve per geometry yields the functionals `phi`, `chi`,
//!   `upsilon` that govern the first- and second-order corrections to the
//!   slowest decay rate, together with computable upper/lower bounds for
//!   `phi` on composite (two-material) bodies.
//! * **Reference transients** ([`spectral`], [`transient`]): Robin
//!   eigenproblems and BDF1/BDF2 time stepping of the full heat equation
//!   provide the "truth" series against which the lumped models are judged.
//! * **Lumped models and error estimates** ([`lumped`], [`robin_bounds`]):
//!   closed-form first/second-order approximations of the average
//!   temperature, a priori estimates for their worst-case error, and
//!   two-sided envelopes for baths with uncertain, spatially varying
//!   transfer coefficients.
//!
//! Everything is nondimensional. Geometries are described by [`geometry::DomainSpec`],
//! meshed by [`mesh`], and assembled into sparse forms by [`assembly`] on
//! quadratic (P2) triangles. The only linear algebra required is a sparse
//! symmetric-positive-definite solve, provided by [`linalg`].

pub mod assembly;
pub mod geometry;
pub mod linalg;
pub mod lumped;
pub mod mesh;
pub mod robin_bounds;
pub mod sensitivity;
pub mod spectral;
pub mod transient;
