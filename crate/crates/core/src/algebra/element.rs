use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerances;
use crate::{C64, CMatrix, CVector};

/// An element of a finite-dimensional C*-algebra: one complex matrix per
/// block of the [`AlgebraShape`].
///
/// Values are immutable after construction; all operations produce new
/// elements. The operator norm is the maximum block spectral norm, the trace
/// is the sum of block traces.
#[derive(Debug, Clone)]
pub struct Element {
    shape: super::AlgebraShape,
    blocks: Vec<CMatrix>,
}

impl Element {
    /// Builds an element from blocks, checking that block `i` is `n_i × n_i`.
    pub fn from_blocks(shape: super::AlgebraShape, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::Argument(format!(
                "expected {} blocks, got {}",
                shape.num_blocks(),
                blocks.len()
            )));
        }
        for (i, (b, &d)) in blocks.iter().zip(shape.block_dims()).enumerate() {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::Argument(format!(
                    "block {i} must be {d}×{d}, got {}×{}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Self { shape, blocks })
    }

    /// The zero element.
    pub fn zero(shape: &super::AlgebraShape) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&d| CMatrix::zeros(d, d))
            .collect();
        Self { shape: shape.clone(), blocks }
    }

    /// The identity element.
    pub fn identity(shape: &super::AlgebraShape) -> Self {
        let blocks = shape.block_dims().iter().map(|&d| linalg::eye(d)).collect();
        Self { shape: shape.clone(), blocks }
    }

    /// A central element `c_1·I ⊕ … ⊕ c_k·I` with one scalar per block.
    pub fn central(shape: &super::AlgebraShape, scalars: &[C64]) -> Result<Self> {
        if scalars.len() != shape.num_blocks() {
            return Err(Error::Argument("one scalar per block required".into()));
        }
        let blocks = shape
            .block_dims()
            .iter()
            .zip(scalars)
            .map(|(&d, &c)| linalg::eye(d).scale_mut_ret(c))
            .collect();
        Ok(Self { shape: shape.clone(), blocks })
    }

    /// Element of an abelian shape with the given diagonal values.
    pub fn diagonal(shape: &super::AlgebraShape, values: &[f64]) -> Result<Self> {
        if !shape.is_abelian() {
            return Err(Error::Argument("diagonal() requires an abelian shape".into()));
        }
        let cs: Vec<C64> = values.iter().map(|&v| linalg::re(v)).collect();
        Self::central(shape, &cs)
    }

    /// Single-block element on the full matrix algebra `M_n`.
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Argument("expected a nonempty square matrix".into()));
        }
        let shape = super::AlgebraShape::full(m.nrows());
        Ok(Self { shape, blocks: vec![m] })
    }

    /// Compresses a dense matrix on the represented Hilbert space onto the
    /// block diagonal (the conditional expectation onto the algebra) and
    /// reports the off-block mass that was discarded.
    pub fn from_dense_pinched(shape: &super::AlgebraShape, dense: &CMatrix) -> Result<(Self, f64)> {
        let n = shape.total_dim();
        if dense.nrows() != n || dense.ncols() != n {
            return Err(Error::Argument(format!(
                "dense matrix must be {n}×{n}, got {}×{}",
                dense.nrows(),
                dense.ncols()
            )));
        }
        let mut blocks = Vec::with_capacity(shape.num_blocks());
        for (b, &d) in shape.block_dims().iter().enumerate() {
            let off = shape.block_offset(b);
            blocks.push(dense.view((off, off), (d, d)).into_owned());
        }
        let el = Self { shape: shape.clone(), blocks };
        let defect = linalg::op_norm(&(dense - el.dense()));
        Ok((el, defect))
    }

    pub fn shape(&self) -> &super::AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    /// Dense realization on the represented Hilbert space.
    pub fn dense(&self) -> CMatrix {
        let n = self.shape.total_dim();
        let mut m = CMatrix::zeros(n, n);
        for (b, blk) in self.blocks.iter().enumerate() {
            let off = self.shape.block_offset(b);
            m.view_mut((off, off), (blk.nrows(), blk.ncols())).copy_from(blk);
        }
        m
    }

    fn zip(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        self.shape.check_compatible(&other.shape)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self { shape: self.shape.clone(), blocks })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: C64) -> Self {
        let blocks = self.blocks.iter().map(|b| b.map(|z| z * c)).collect();
        Self { shape: self.shape.clone(), blocks }
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(linalg::re(c))
    }

    pub fn adjoint(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| b.adjoint()).collect();
        Self { shape: self.shape.clone(), blocks }
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b - b * a)
    }

    /// `{A, B}₊ = AB + BA`.
    pub fn anti_commutator(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b + b * a)
    }

    /// Hermitean part `(A + A†)/2`.
    pub fn re_part(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| (b + b.adjoint()).scale(0.5)).collect();
        Self { shape: self.shape.clone(), blocks }
    }

    /// Anti-Hermitean part over `i`: `(A − A†)/2i`, itself Hermitean.
    pub fn im_part(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| (b - b.adjoint()).map(|z| z / (2.0 * linalg::I)))
            .collect();
        Self { shape: self.shape.clone(), blocks }
    }

    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    /// Maximum over blocks of the largest singular value.
    pub fn op_norm(&self) -> f64 {
        self.blocks.iter().map(linalg::op_norm).fold(0.0, f64::max)
    }

    /// Sum over blocks of the singular values.
    pub fn trace_norm(&self) -> f64 {
        self.blocks.iter().map(linalg::trace_norm).sum()
    }

    /// Operator-norm distance to another element.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.op_norm())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.blocks.iter().map(linalg::hermiticity_defect).fold(0.0, f64::max)
    }

    /// Hermiticity test with explicit tolerance.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Errors unless the element is Hermitean within
    /// `HERMITICITY_REL·max(‖X‖, 1)`.
    pub fn check_hermitian(&self) -> Result<()> {
        let tol = tolerances::HERMITICITY_REL * self.op_norm().max(1.0);
        let defect = self.hermiticity_defect();
        if defect <= tol {
            Ok(())
        } else {
            Err(Error::NotHermitian { defect, tol })
        }
    }

    /// Opt-in symmetrization `(X + X†)/2`; inputs are never symmetrized
    /// silently.
    pub fn symmetrized(&self) -> Self {
        self.re_part()
    }

    /// All eigenvalues (ascending) of a Hermitean element, across blocks.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.check_hermitian()?;
        let mut vals = Vec::with_capacity(self.shape.total_dim());
        for b in &self.blocks {
            vals.extend(linalg::herm_eigenvalues(b));
        }
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }

    /// Smallest eigenvalue of a Hermitean element.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// Errors unless Hermitean with min eigenvalue ≥ −tol.
    pub fn check_psd(&self, tol: f64) -> Result<()> {
        let min = self.min_eigenvalue()?;
        if min >= -tol {
            Ok(())
        } else {
            Err(Error::NotPsd(min))
        }
    }

    /// Errors unless Hermitean and idempotent within `tol`.
    pub fn check_projection(&self, tol: f64) -> Result<()> {
        self.check_hermitian()?;
        let defect = self.mul(self)?.sub(self)?.op_norm();
        if defect <= tol {
            Ok(())
        } else {
            Err(Error::NotProjection(defect))
        }
    }

    /// Applies the element to a dense vector of the represented space.
    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(self.shape.total_dim());
        for (b, blk) in self.blocks.iter().enumerate() {
            let off = self.shape.block_offset(b);
            let seg = v.rows(off, blk.ncols());
            out.rows_mut(off, blk.nrows()).copy_from(&(blk * seg));
        }
        out
    }

    /// Matrix element `⟨v|A|w⟩` for dense vectors of the represented space.
    pub fn sandwich(&self, v: &CVector, w: &CVector) -> C64 {
        let aw = self.apply(w);
        v.dotc(&aw)
    }

    /// Tensor product element on `self.shape() ⊗ other.shape()`, blockwise
    /// Kronecker products in lexicographic block order.
    pub fn tensor(&self, other: &Self) -> Self {
        let shape = self.shape.tensor(&other.shape);
        let mut blocks = Vec::with_capacity(shape.num_blocks());
        for a in &self.blocks {
            for b in &other.blocks {
                blocks.push(linalg::kron(a, b));
            }
        }
        Self { shape, blocks }
    }

    // --- fixed M₂ elements used throughout the measurement examples ---

    pub fn pauli_x() -> Self {
        Self::from_matrix(CMatrix::from_row_slice(2, 2, &[
            linalg::re(0.0), linalg::re(1.0),
            linalg::re(1.0), linalg::re(0.0),
        ])).expect("2×2")
    }

    pub fn pauli_y() -> Self {
        Self::from_matrix(CMatrix::from_row_slice(2, 2, &[
            linalg::re(0.0), -linalg::I,
            linalg::I, linalg::re(0.0),
        ])).expect("2×2")
    }

    pub fn pauli_z() -> Self {
        Self::from_matrix(CMatrix::from_row_slice(2, 2, &[
            linalg::re(1.0), linalg::re(0.0),
            linalg::re(0.0), linalg::re(-1.0),
        ])).expect("2×2")
    }

    /// Projection onto the upper basis vector of `C²`.
    pub fn proj_plus() -> Self {
        Self::from_matrix(CMatrix::from_row_slice(2, 2, &[
            linalg::re(1.0), linalg::re(0.0),
            linalg::re(0.0), linalg::re(0.0),
        ])).expect("2×2")
    }

    /// Projection onto the lower basis vector of `C²`.
    pub fn proj_minus() -> Self {
        Self::from_matrix(CMatrix::from_row_slice(2, 2, &[
            linalg::re(0.0), linalg::re(0.0),
            linalg::re(0.0), linalg::re(1.0),
        ])).expect("2×2")
    }

    /// Serializable record; see [`ElementRecord`].
    pub fn to_record(&self) -> ElementRecord {
        ElementRecord {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| {
                    // row-major [re, im] pairs
                    let mut flat = Vec::with_capacity(b.nrows() * b.ncols());
                    for r in 0..b.nrows() {
                        for c in 0..b.ncols() {
                            flat.push([b[(r, c)].re, b[(r, c)].im]);
                        }
                    }
                    flat
                })
                .collect(),
        }
    }

    pub fn from_record(rec: &ElementRecord) -> Result<Self> {
        let mut blocks = Vec::with_capacity(rec.blocks.len());
        if rec.blocks.len() != rec.shape.num_blocks() {
            return Err(Error::Argument("record block count mismatch".into()));
        }
        for (flat, &d) in rec.blocks.iter().zip(rec.shape.block_dims()) {
            if flat.len() != d * d {
                return Err(Error::Argument("record block size mismatch".into()));
            }
            let data: Vec<C64> = flat.iter().map(|&[re, im]| C64::new(re, im)).collect();
            blocks.push(CMatrix::from_row_slice(d, d, &data));
        }
        Element::from_blocks(rec.shape.clone(), blocks)
    }
}

/// Structured text record for an element: shape plus row-major `[re, im]`
/// pairs per block. Serialized with serde_json, which prints the shortest
/// decimal that round-trips each f64 exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementRecord {
    pub shape: super::AlgebraShape,
    pub blocks: Vec<Vec<[f64; 2]>>,
}

/// Small extension so `central` can scale an identity in place.
trait ScaleRet {
    fn scale_mut_ret(self, c: C64) -> CMatrix;
}

impl ScaleRet for CMatrix {
    fn scale_mut_ret(mut self, c: C64) -> CMatrix {
        self.iter_mut().for_each(|z| *z *= c);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraShape;

    fn m2(entries: [f64; 4]) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &entries.map(linalg::re))
    }

    #[test]
    fn pauli_commutator_is_2i_sigma_z() {
        // [σx, σy] = 2i σz with operator norm 2
        let c = Element::pauli_x().commutator(&Element::pauli_y()).unwrap();
        let expected = Element::pauli_z().scale(2.0 * linalg::I);
        assert!(c.distance(&expected).unwrap() < 1e-14);
        assert!((c.op_norm() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn identity_commutes() {
        let shape = AlgebraShape::new(vec![2, 3]).unwrap();
        let mut a = Element::identity(&shape).scale(linalg::re(0.7));
        a = a.add(&Element::zero(&shape)).unwrap();
        let c = a.commutator(&Element::identity(&shape)).unwrap();
        assert!(c.op_norm() == 0.0);
    }

    #[test]
    fn op_norm_is_max_block_spectral_norm() {
        let shape = AlgebraShape::new(vec![2, 2]).unwrap();
        let x = Element::from_blocks(
            shape,
            vec![m2([3.0, 0.0, 0.0, -1.0]), m2([0.0, 0.0, 0.0, 2.0])],
        )
        .unwrap();
        assert!((x.op_norm() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn shape_mismatch_errors() {
        let a = Element::identity(&AlgebraShape::full(2));
        let b = Element::identity(&AlgebraShape::full(3));
        assert!(matches!(a.add(&b), Err(Error::ShapeMismatch(_, _))));
    }

    #[test]
    fn cstar_identity_on_fixed_element() {
        // ‖A†A‖ = ‖A‖² for a non-normal element
        let a = Element::from_matrix(CMatrix::from_row_slice(2, 2, &[
            linalg::re(1.0), C64::new(2.0, 1.0),
            linalg::re(0.0), linalg::re(-1.0),
        ])).unwrap();
        let lhs = a.adjoint().mul(&a).unwrap().op_norm();
        let rhs = a.op_norm() * a.op_norm();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn tensor_matches_m2_c2_identification() {
        // A ⊗ diag(d₁,d₂) ↦ d₁·A ⊕ d₂·A
        let a = Element::pauli_x();
        let d = Element::diagonal(&AlgebraShape::abelian(2), &[1.0, -2.0]).unwrap();
        let t = a.tensor(&d);
        assert_eq!(t.shape().block_dims(), &[2, 2]);
        assert!(t.block(0).clone().map(|z| z.re)[(0, 1)] == 1.0);
        assert!(t.block(1).clone().map(|z| z.re)[(0, 1)] == -2.0);
    }

    #[test]
    fn record_round_trip_is_exact() {
        let x = Element::from_matrix(CMatrix::from_row_slice(2, 2, &[
            C64::new(0.1 + 0.2, -1.0 / 3.0),
            C64::new(f64::MIN_POSITIVE, 1e300),
            C64::new(-0.0, 2.5e-17),
            C64::new(std::f64::consts::PI, 0.0),
        ])).unwrap();
        let json = serde_json::to_string(&x.to_record()).unwrap();
        let back = Element::from_record(&serde_json::from_str(&json).unwrap()).unwrap();
        for (a, b) in x.blocks().iter().zip(back.blocks()) {
            assert_eq!(a, b, "round trip must be bit-exact");
        }
    }
}
