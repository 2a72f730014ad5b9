//! Sparse symmetric matrices and a skyline Cholesky factorization.
//!
//! The finite element layers only ever need one linear-algebra primitive: a
//! direct solve with a symmetric positive definite matrix (mass, stiffness,
//! shifted combinations, BDF system matrices). At the problem sizes this
//! crate targets (≲ 10⁵ P2 dofs on quasi-structured meshes) a profile
//! ("skyline") factorization after reverse Cuthill–McKee reordering is
//! simple, dependable, and fast enough; no supernodal machinery is needed.
//!
//! Matrices are stored in plain CSR with both triangles present, which keeps
//! matrix-vector products and quadratic forms trivial. The factorization
//! copies the (permuted) lower profile into its own dense-in-rows buffer.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    /// A pivot collapsed during factorization; the matrix is not SPD
    /// (or is catastrophically ill-conditioned).
    #[error("matrix is not positive definite: pivot {pivot:.3e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Symmetric sparse matrix in CSR format. Both triangles are stored; the
/// constructor does not verify symmetry (assembly produces it by design),
/// but `debug_assert`s guard the obvious mistakes.
#[derive(Clone, Debug)]
pub struct SymCsr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl SymCsr {
    /// Build from (row, col, value) triplets, summing duplicates.
    /// Triplets must contain both (i,j) and (j,i) for off-diagonal entries.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut t: Vec<(usize, usize, f64)> = triplets.to_vec();
        t.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut rows: Vec<usize> = Vec::with_capacity(t.len());
        let mut col_idx: Vec<usize> = Vec::with_capacity(t.len());
        let mut values: Vec<f64> = Vec::with_capacity(t.len());
        for &(i, j, v) in &t {
            debug_assert!(i < n && j < n, "triplet index out of range");
            if rows.last() == Some(&i) && col_idx.last() == Some(&j) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(i);
                col_idx.push(j);
                values.push(v);
            }
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &i in &rows {
            row_ptr[i + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        SymCsr {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = s;
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    /// xᵀ A y
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            let mut row = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                row += self.values[k] * y[self.col_idx[k]];
            }
            s += x[i] * row;
        }
        s
    }

    /// xᵀ A x
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    pub fn diag(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.col_idx[k] == i {
                    d[i] = self.values[k];
                }
            }
        }
        d
    }

    /// self + alpha * other, with pattern union.
    pub fn add_scaled(&self, other: &SymCsr, alpha: f64) -> SymCsr {
        assert_eq!(self.n, other.n, "add_scaled: size mismatch");
        let n = self.n;
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..n {
            let (mut a, enda) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let (mut b, endb) = (other.row_ptr[i], other.row_ptr[i + 1]);
            while a < enda || b < endb {
                let ja = if a < enda { self.col_idx[a] } else { usize::MAX };
                let jb = if b < endb { other.col_idx[b] } else { usize::MAX };
                if ja < jb {
                    col_idx.push(ja);
                    values.push(self.values[a]);
                    a += 1;
                } else if jb < ja {
                    col_idx.push(jb);
                    values.push(alpha * other.values[b]);
                    b += 1;
                } else {
                    col_idx.push(ja);
                    values.push(self.values[a] + alpha * other.values[b]);
                    a += 1;
                    b += 1;
                }
            }
            row_ptr[i + 1] = col_idx.len();
        }
        SymCsr {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Copy with one dof "grounded": row and column `dof` zeroed, diagonal
    /// set to 1. Turns a matrix whose kernel is the constant vector into an
    /// SPD one; the solution component at `dof` becomes whatever the
    /// right-hand side puts there (callers pass 0).
    pub fn with_grounded_dof(&self, dof: usize) -> SymCsr {
        let mut out = self.clone();
        let mut has_diag = false;
        for i in 0..self.n {
            for k in out.row_ptr[i]..out.row_ptr[i + 1] {
                let j = out.col_idx[k];
                if i == dof || j == dof {
                    out.values[k] = if i == dof && j == dof {
                        has_diag = true;
                        1.0
                    } else {
                        0.0
                    };
                }
            }
        }
        assert!(has_diag, "grounded dof {dof} has no stored diagonal entry");
        out
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Reverse Cuthill–McKee ordering from the CSR pattern.
/// Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &SymCsr) -> Vec<usize> {
    let n = a.n;
    let degree: Vec<usize> = (0..n)
        .map(|i| {
            (a.row_ptr[i]..a.row_ptr[i + 1])
                .filter(|&k| a.col_idx[k] != i)
                .count()
        })
        .collect();

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    let mut scratch: Vec<usize> = Vec::new();

    loop {
        // seed each connected component at a minimum-degree vertex
        let start = match (0..n)
            .filter(|&i| !visited[i])
            .min_by_key(|&i| degree[i])
        {
            Some(s) => s,
            None => break,
        };
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            scratch.clear();
            for k in a.row_ptr[v]..a.row_ptr[v + 1] {
                let w = a.col_idx[k];
                if w != v && !visited[w] {
                    visited[w] = true;
                    scratch.push(w);
                }
            }
            scratch.sort_unstable_by_key(|&w| degree[w]);
            for &w in &scratch {
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Skyline (profile) Cholesky factorization A = LLᵀ of an SPD `SymCsr`,
/// with RCM preordering applied internally. Row `i` of L is stored densely
/// from its first nonzero column `f[i]` through the diagonal.
pub struct Cholesky {
    n: usize,
    /// perm[new] = old
    perm: Vec<usize>,
    first_col: Vec<usize>,
    ptr: Vec<usize>,
    vals: Vec<f64>,
}

impl Cholesky {
    pub fn factor(a: &SymCsr) -> Result<Self, LinalgError> {
        let n = a.n;
        let perm = reverse_cuthill_mckee(a);
        let mut inv_perm = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv_perm[old] = new;
        }

        // profile of the permuted lower triangle
        let mut first_col: Vec<usize> = (0..n).collect();
        for old_i in 0..n {
            let pi = inv_perm[old_i];
            for k in a.row_ptr[old_i]..a.row_ptr[old_i + 1] {
                let pj = inv_perm[a.col_idx[k]];
                if pj < pi && pj < first_col[pi] {
                    first_col[pi] = pj;
                }
            }
        }
        let mut ptr = vec![0usize; n + 1];
        for i in 0..n {
            ptr[i + 1] = ptr[i] + (i - first_col[i] + 1);
        }
        let mut vals = vec![0.0f64; ptr[n]];

        // scatter permuted entries of the lower triangle
        let mut max_diag = 0.0f64;
        for old_i in 0..n {
            let pi = inv_perm[old_i];
            for k in a.row_ptr[old_i]..a.row_ptr[old_i + 1] {
                let pj = inv_perm[a.col_idx[k]];
                if pj <= pi {
                    vals[ptr[pi] + (pj - first_col[pi])] += a.values[k];
                }
                if pj == pi {
                    max_diag = max_diag.max(a.values[k].abs());
                }
            }
        }
        let pivot_floor = 1e-14 * max_diag.max(f64::MIN_POSITIVE);

        // in-place row-by-row factorization
        for i in 0..n {
            let fi = first_col[i];
            for j in fi..=i {
                let fj = first_col[j];
                let kmin = fi.max(fj);
                let mut s = vals[ptr[i] + (j - fi)];
                // dot of overlapping parts of rows i and j
                let (oi, oj) = (ptr[i] - fi, ptr[j] - fj);
                for k in kmin..j {
                    s -= vals[oi + k] * vals[oj + k];
                }
                if j < i {
                    vals[ptr[i] + (j - fi)] = s / vals[ptr[j] + (j - fj)];
                } else {
                    if s <= pivot_floor {
                        return Err(LinalgError::NotPositiveDefinite { row: i, pivot: s });
                    }
                    vals[ptr[i] + (i - fi)] = s.sqrt();
                }
            }
        }

        Ok(Cholesky {
            n,
            perm,
            first_col,
            ptr,
            vals,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "solve: rhs length mismatch");
        let n = self.n;
        // permute
        let mut y: Vec<f64> = (0..n).map(|i| b[self.perm[i]]).collect();
        // forward: L y = b
        for i in 0..n {
            let fi = self.first_col[i];
            let off = self.ptr[i] - fi;
            let mut s = y[i];
            for k in fi..i {
                s -= self.vals[off + k] * y[k];
            }
            y[i] = s / self.vals[self.ptr[i] + (i - fi)];
        }
        // backward: Lᵀ x = y (column sweep over row storage)
        for i in (0..n).rev() {
            let fi = self.first_col[i];
            let off = self.ptr[i] - fi;
            y[i] /= self.vals[self.ptr[i] + (i - fi)];
            let yi = y[i];
            for k in fi..i {
                y[k] -= self.vals[off + k] * yi;
            }
        }
        // unpermute
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[self.perm[i]] = y[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn laplacian_1d(n: usize) -> SymCsr {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        SymCsr::from_triplets(n, &t)
    }

    #[test]
    fn triplets_sum_duplicates_and_skip_empty_rows() {
        let a = SymCsr::from_triplets(4, &[(0, 0, 1.0), (0, 0, 2.0), (3, 3, 5.0), (3, 0, 1.0), (0, 3, 1.0)]);
        assert_eq!(a.nnz(), 4);
        assert_eq!(a.row_ptr, vec![0, 2, 2, 2, 4]);
        let d = a.diag();
        assert_eq!(d, vec![3.0, 0.0, 0.0, 5.0]);
    }

    #[test]
    fn solves_small_spd_system() {
        let a = SymCsr::from_triplets(
            3,
            &[
                (0, 0, 4.0),
                (0, 1, 1.0),
                (1, 0, 1.0),
                (1, 1, 3.0),
                (1, 2, 1.0),
                (2, 1, 1.0),
                (2, 2, 2.0),
            ],
        );
        let ch = Cholesky::factor(&a).unwrap();
        let b = vec![1.0, 2.0, 3.0];
        let x = ch.solve(&b);
        let r = a.mul(&x);
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).abs() < 1e-13, "residual too large");
        }
    }

    #[test]
    fn solves_random_spd_system_to_machine_precision() {
        let n = 80;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // diagonally dominant random sparse symmetric matrix
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 4.0 + rng.gen::<f64>()));
            for _ in 0..3 {
                let j = rng.gen_range(0..n);
                if j != i {
                    let v = 0.3 * (rng.gen::<f64>() - 0.5);
                    t.push((i, j, v));
                    t.push((j, i, v));
                }
            }
        }
        let a = SymCsr::from_triplets(n, &t);
        let ch = Cholesky::factor(&a).unwrap();
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = ch.solve(&b);
        let r = a.mul(&x);
        let err: f64 = r.iter().zip(&b).map(|(ri, bi)| (ri - bi).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "max residual {err:.3e}");
    }

    #[test]
    fn rejects_indefinite_matrix() {
        let a = SymCsr::from_triplets(2, &[(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert!(matches!(
            Cholesky::factor(&a),
            Err(LinalgError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn rcm_recovers_banded_order_of_shuffled_path() {
        // path graph with vertices shuffled: RCM must bring bandwidth back to 1
        let n = 50;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut shuffle: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            shuffle.swap(i, j);
        }
        let mut t = Vec::new();
        for i in 0..n {
            t.push((shuffle[i], shuffle[i], 2.0));
            if i + 1 < n {
                t.push((shuffle[i], shuffle[i + 1], -1.0));
                t.push((shuffle[i + 1], shuffle[i], -1.0));
            }
        }
        let a = SymCsr::from_triplets(n, &t);
        let perm = reverse_cuthill_mckee(&a);
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut bw = 0usize;
        for i in 0..n {
            for k in a.row_ptr[i]..a.row_ptr[i + 1] {
                let j = a.col_idx[k];
                bw = bw.max(inv[i].abs_diff(inv[j]));
            }
        }
        assert_eq!(bw, 1, "RCM failed to linearize a path graph");
    }

    #[test]
    fn grounded_laplacian_becomes_definite() {
        let n = 20;
        let mut t = Vec::new();
        // pure Neumann 1D Laplacian: singular (constant kernel)
        for i in 0..n {
            let d = if i == 0 || i == n - 1 { 1.0 } else { 2.0 };
            t.push((i, i, d));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let a = SymCsr::from_triplets(n, &t);
        assert!(Cholesky::factor(&a).is_err(), "singular matrix must be rejected");
        let g = a.with_grounded_dof(5);
        let ch = Cholesky::factor(&g).unwrap();
        // consistent rhs orthogonal to constants, zeroed at the ground dof
        let mut b: Vec<f64> = (0..n).map(|i| (i as f64) - (n as f64 - 1.0) / 2.0).collect();
        b[5] = 0.0;
        let x = ch.solve(&b);
        assert!(x[5].abs() < 1e-14);
        let r = g.mul(&x);
        let err: f64 = r.iter().zip(&b).map(|(ri, bi)| (ri - bi).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn quadratic_form_matches_matvec() {
        let a = laplacian_1d(10);
        let x: Vec<f64> = (0..10).map(|i| (i as f64 * 0.7).cos()).collect();
        let ax = a.mul(&x);
        assert!((a.quadratic_form(&x) - dot(&x, &ax)).abs() < 1e-14);
    }

    #[test]
    fn add_scaled_merges_patterns() {
        let a = laplacian_1d(5);
        let b = SymCsr::from_triplets(5, &[(0, 4, 1.0), (4, 0, 1.0), (2, 2, 1.0)]);
        let c = a.add_scaled(&b, 2.0);
        let x = vec![1.0, -1.0, 0.5, 0.0, 2.0];
        let want: Vec<f64> = a
            .mul(&x)
            .iter()
            .zip(b.mul(&x))
            .map(|(p, q)| p + 2.0 * q)
            .collect();
        let got = c.mul(&x);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-14);
        }
    }
}
