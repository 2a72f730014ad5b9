//! Robin eigenvalues of the diffusion operator: the exact discrete decay
//! rates that the asymptotic approximants are judged against.
//!
//! The generalized problem is (A0 + 𝓑·A1) v = λ M v with the forms from
//! [`crate::assembly`]. Only a handful of the smallest modes ever matter
//! (they carry the slow heat), so everything here is inverse iteration:
//! factor once, iterate with the mass matrix, read off Rayleigh quotients.
//! The single-mode driver is used where λ₁ must be resolved close to
//! roundoff; the block driver trades a little accuracy for a whole subspace
//! and feeds the separation-of-variables reference transients.

use crate::assembly::DiscreteForms;
use crate::linalg::{dot, Cholesky, LinalgError, SymCsr};
use crate::sensitivity::Functionals;
use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{what} did not converge within {iters} iterations")]
    NotConverged { what: &'static str, iters: usize },
    #[error("requested {k} modes from a space of dimension {n}")]
    TooManyModes { k: usize, n: usize },
}

/// One eigenpair, vector normalized to vᵀMv = 1.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// deterministic noise source for starting blocks (splitmix64)
fn noise(seed: u64) -> impl FnMut() -> f64 {
    let mut state = seed;
    move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

fn m_normalize(forms: &DiscreteForms, v: &mut [f64]) {
    let norm = forms.mass.quadratic_form(v).sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Smallest eigenpair of (A0 + b·A1, M) by inverse power iteration with
/// Rayleigh-quotient convergence control. The returned vector has positive
/// σ-mean. For b = 0 the exact kernel (the flat mode) is returned directly.
pub fn first_eigenpair(forms: &DiscreteForms, b: f64) -> Result<EigenPair, SpectralError> {
    if b == 0.0 {
        let scale = 1.0 / forms.volume.sqrt();
        return Ok(EigenPair {
            value: 0.0,
            vector: vec![scale; forms.ndof],
        });
    }
    let a = forms.stiffness.add_scaled(&forms.boundary_mass, b);
    let chol = Cholesky::factor(&a)?;
    // the flat mode is an excellent starting guess for the slow mode
    let mut v = vec![1.0; forms.ndof];
    m_normalize(forms, &mut v);
    let mut lambda = a.quadratic_form(&v);
    let max_iter = 500;
    for _ in 0..max_iter {
        let mut w = chol.solve(&forms.mass.mul(&v));
        m_normalize(forms, &mut w);
        let next = a.quadratic_form(&w);
        let done = (next - lambda).abs() <= 1e-14 * next.abs();
        v = w;
        lambda = next;
        if done {
            if dot(&forms.mass_one, &v) < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            return Ok(EigenPair { value: lambda, vector: v });
        }
    }
    Err(SpectralError::NotConverged { what: "inverse iteration", iters: max_iter })
}

/// Second Neumann eigenvalue μ of (A0, M): inverse iteration on the shifted
/// operator A0 + M with the flat mode deflated in the M-inner product.
/// Pass uniform-material forms to get the classical Laplace value.
pub fn second_neumann_eigenvalue(forms: &DiscreteForms) -> Result<f64, SpectralError> {
    let n = forms.ndof;
    let shifted = forms.stiffness.add_scaled(&forms.mass, 1.0);
    let chol = Cholesky::factor(&shifted)?;
    // flat mode, M-normalized exactly: 1ᵀM1 = |Ω|
    let flat: Vec<f64> = vec![1.0 / forms.volume.sqrt(); n];
    let m_flat = forms.mass.mul(&flat);
    let deflate = |v: &mut Vec<f64>| {
        let c = dot(&m_flat, v);
        for (x, f) in v.iter_mut().zip(&flat) {
            *x -= c * f;
        }
    };
    let mut rng = noise(0x5eed);
    let mut v: Vec<f64> = (0..n).map(|_| rng()).collect();
    deflate(&mut v);
    m_normalize(forms, &mut v);
    let mut nu = shifted.quadratic_form(&v);
    let max_iter = 500;
    for _ in 0..max_iter {
        let mut w = chol.solve(&forms.mass.mul(&v));
        deflate(&mut w);
        m_normalize(forms, &mut w);
        let next = shifted.quadratic_form(&w);
        let done = (next - nu).abs() <= 1e-13 * next.abs();
        v = w;
        nu = next;
        if done {
            return Ok(nu - 1.0);
        }
    }
    Err(SpectralError::NotConverged { what: "deflated inverse iteration", iters: max_iter })
}

/// The `k` smallest eigenpairs of (A0 + b·A1, M), M-orthonormal, ascending.
///
/// Block inverse iteration with Rayleigh–Ritz extraction: the block is kept
/// a bit larger than `k` so the trailing requested modes still converge at
/// a useful rate. Intended for the modest subspaces (tens of modes) that
/// series solutions of the dunking transient need.
pub fn eigenpairs(forms: &DiscreteForms, b: f64, k: usize) -> Result<Vec<EigenPair>, SpectralError> {
    let n = forms.ndof;
    if k == 0 {
        return Ok(Vec::new());
    }
    if k > n {
        return Err(SpectralError::TooManyModes { k, n });
    }
    let m = (k + 8 + k / 4).min(n); // working block size
    let a = if b == 0.0 {
        // keep the operator SPD by shifting; Ritz values are shifted back
        forms.stiffness.add_scaled(&forms.mass, 1.0)
    } else {
        forms.stiffness.add_scaled(&forms.boundary_mass, b)
    };
    let shift = if b == 0.0 { 1.0 } else { 0.0 };
    let chol = Cholesky::factor(&a)?;

    let mut rng = noise(0xb10c);
    let mut block: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            if j == 0 {
                vec![1.0; n]
            } else {
                (0..n).map(|_| rng()).collect()
            }
        })
        .collect();

    let mut prev: Vec<f64> = vec![f64::INFINITY; k];
    let max_iter = 300;
    for _ in 0..max_iter {
        // one inverse-iteration sweep
        for col in block.iter_mut() {
            *col = chol.solve(&forms.mass.mul(col));
        }
        m_orthonormalize(&forms.mass, &mut block);

        // Rayleigh–Ritz in the M-orthonormal basis: standard dense problem
        let a_block: Vec<Vec<f64>> = block.iter().map(|col| a.mul(col)).collect();
        let mut ritz = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let v = dot(&block[i], &a_block[j]);
                ritz[(i, j)] = v;
                ritz[(j, i)] = v;
            }
        }
        let eig = nalgebra::SymmetricEigen::new(ritz);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

        let rotated: Vec<Vec<f64>> = order
            .iter()
            .map(|&q| {
                let mut col = vec![0.0; n];
                for (j, src) in block.iter().enumerate() {
                    let w = eig.eigenvectors[(j, q)];
                    if w != 0.0 {
                        for (c, s) in col.iter_mut().zip(src) {
                            *c += w * s;
                        }
                    }
                }
                col
            })
            .collect();
        block = rotated;
        let values: Vec<f64> = order.iter().take(k).map(|&q| eig.eigenvalues[q] - shift).collect();

        let worst = values
            .iter()
            .zip(&prev)
            .map(|(v, p)| (v - p).abs() / v.abs().max(1e-300))
            .fold(0.0f64, f64::max);
        prev = values.clone();
        if worst < 1e-11 {
            let mut out = Vec::with_capacity(k);
            for (idx, value) in values.into_iter().enumerate() {
                let mut vector = std::mem::take(&mut block[idx]);
                m_normalize(forms, &mut vector);
                if dot(&forms.mass_one, &vector) < 0.0 {
                    vector.iter_mut().for_each(|x| *x = -*x);
                }
                out.push(EigenPair { value, vector });
            }
            return Ok(out);
        }
    }
    Err(SpectralError::NotConverged { what: "block inverse iteration", iters: max_iter })
}

/// Modified Gram–Schmidt in the M-inner product, two passes for stability.
fn m_orthonormalize(mass: &SymCsr, block: &mut [Vec<f64>]) {
    let m = block.len();
    let mut m_cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    for j in 0..m {
        for _pass in 0..2 {
            let mj = mass.mul(&block[j]);
            for i in 0..j {
                let r = dot(&m_cols[i], &block[j]);
                let (head, tail) = block.split_at_mut(j);
                let bi = &head[i];
                for (x, y) in tail[0].iter_mut().zip(bi) {
                    *x -= r * y;
                }
                let _ = mj; // mj is stale after the update; recomputed next pass
            }
        }
        let norm = mass.quadratic_form(&block[j]).sqrt();
        for x in block[j].iter_mut() {
            *x /= norm;
        }
        m_cols.push(mass.mul(&block[j]));
    }
}

/// Truncated decay-rate models built from the functionals:
/// first order Bγ, second order Bγ − φB², the Padé-style regularization
/// Bγ/(1 + φB/γ), and the third-order correction with χ and Υ.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RateApproximants {
    pub order1: f64,
    pub order2: f64,
    pub order2_pade: f64,
    pub order3: f64,
}

pub fn rate_approximants(b: f64, f: &Functionals) -> RateApproximants {
    let lead = b * f.gamma;
    RateApproximants {
        order1: lead,
        order2: lead - f.phi * b * b,
        order2_pade: lead / (1.0 + f.phi * b / f.gamma),
        order3: lead - f.phi * b * b + (f.chi - f.gamma * f.upsilon) * b.powi(3),
    }
}
