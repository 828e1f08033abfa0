//! Dense complex linear algebra helpers shared by the algebra layer.
//!
//! Everything here works on raw [`CMatrix`] blocks; the block-diagonal
//! bookkeeping lives in [`crate::algebra`].

use crate::{C64, CMatrix, CVector};

/// Largest singular value of a dense matrix.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    if m.iter().all(|z| z.norm_sqr() == 0.0) {
        return 0.0;
    }
    m.singular_values().max()
}

/// Sum of singular values of a dense matrix.
pub fn trace_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values().iter().sum()
}

/// `‖m − m†‖` in operator norm.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    op_norm(&(m - m.adjoint()))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending with
/// matching eigenvector columns. The input is symmetrized first so the
/// eigensolver sees an exactly Hermitian matrix. Exactly diagonal matrices
/// take an exact fast path: spectral projections of diagonal observables
/// then carry no rounding at all, which keeps perfect measurements at
/// quality exactly zero.
pub fn herm_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let diagonal = (0..n).all(|r| (0..n).all(|c| r == c || m[(r, c)].norm_sqr() == 0.0));
    if diagonal {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
        let vals: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
        let mut vecs = CMatrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            vecs[(i, col)] = C64::new(1.0, 0.0);
        }
        return (vals, vecs);
    }
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Eigenvalues only, ascending.
pub fn herm_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().cloned().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `n × n` identity.
pub fn eye(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Rank-one matrix `|v⟩⟨w|`.
pub fn outer(v: &CVector, w: &CVector) -> CMatrix {
    v * w.adjoint()
}

/// Multiplies the global phase out of a vector: the first coordinate with
/// magnitude above `tol` is made real positive.
pub fn fix_phase(v: &CVector, tol: f64) -> CVector {
    for z in v.iter() {
        let r = z.norm();
        if r > tol {
            let phase = z.conj() / r;
            return v.map(|x| x * phase);
        }
    }
    v.clone()
}

/// Thin QR orthonormalization of the columns of `m`; returns the Q factor.
pub fn orthonormalize(m: &CMatrix) -> CMatrix {
    let qr = m.clone().qr();
    let q = qr.q();
    let r = qr.r();
    // Flip column phases so the R diagonal is positive; keeps the result
    // deterministic across eigensolver sign conventions.
    let mut q = q;
    for j in 0..q.ncols().min(r.nrows()) {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let ph = d.conj() / d.norm();
            for i in 0..q.nrows() {
                q[(i, j)] *= ph;
            }
        }
    }
    q
}

/// Splitmix64 step, the seed-derivation primitive used by the harness and
/// documented as the splittable scheme for per-trial seeds.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Small deterministic generator (splitmix64 + Box-Muller) for the seeded
/// search routines inside the library. Identical seeds give identical
/// streams on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix {
    state: u64,
    spare: Option<f64>,
}

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, spare: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = (1.0 - self.uniform()).max(f64::MIN_POSITIVE);
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Standard complex normal, variance 1.
    pub fn complex_gaussian(&mut self) -> C64 {
        C64::new(self.gaussian(), self.gaussian()).unscale(std::f64::consts::SQRT_2)
    }

    /// Random unit vector in `C^n`.
    pub fn unit_vector(&mut self, n: usize) -> CVector {
        loop {
            let v = CVector::from_fn(n, |_, _| self.complex_gaussian());
            let norm = v.norm();
            if norm > 1e-6 {
                return v.unscale(norm);
            }
        }
    }

    /// Dense matrix with independent complex-Gaussian entries.
    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex_gaussian())
    }
}

/// Complex unit.
pub const I: C64 = C64::new(0.0, 1.0);

/// Real number as a complex scalar.
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}
