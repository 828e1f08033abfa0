//! Unital completely positive maps in operator-sum form, dilation
//! constructors, Choi matrices, and the complete-positivity verdict for
//! arbitrary linear map tables.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraShape, Element};
use crate::error::{Error, Result};
use crate::linalg;
use crate::state::State;
use crate::tolerances;
use crate::{C64, CMatrix, CVector};

/// A unital completely positive map `M : B → A` in the Heisenberg picture,
/// acting as `M(D) = Σ K_i† D K_i`.
///
/// `domain` is the algebra `B` the map consumes, `codomain` the algebra `A`
/// it produces. Each Kraus operator maps the represented space of `A` into
/// that of `B` (a `dim(B) × dim(A)` matrix) and, as a construction
/// invariant, has its nonzero columns inside a single block of `A`; that
/// makes `M(D)` land exactly on the block diagonal of `A`. General Kraus
/// sets are admitted by splitting them columnwise, which composes the map
/// with the conditional expectation onto `A`.
#[derive(Debug, Clone)]
pub struct CPMap {
    domain: AlgebraShape,
    codomain: AlgebraShape,
    kraus: Vec<CMatrix>,
}

impl CPMap {
    /// Builds a map from Kraus operators, enforcing unitality
    /// `Σ K_i† K_i = I` within [`tolerances::UNITALITY_TOL`].
    pub fn from_kraus(
        domain: AlgebraShape,
        codomain: AlgebraShape,
        kraus: Vec<CMatrix>,
    ) -> Result<Self> {
        let (db, da) = (domain.total_dim(), codomain.total_dim());
        if kraus.is_empty() {
            return Err(Error::InvalidMap("empty Kraus set".into()));
        }
        for k in &kraus {
            if k.nrows() != db || k.ncols() != da {
                return Err(Error::InvalidMap(format!(
                    "Kraus operator must be {db}×{da}, got {}×{}",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }
        // split each operator by codomain column blocks
        let mut split = Vec::new();
        for k in &kraus {
            for (j, &d) in codomain.block_dims().iter().enumerate() {
                let off = codomain.block_offset(j);
                let piece_view = k.columns(off, d);
                if piece_view.iter().all(|z| z.norm_sqr() == 0.0) {
                    continue;
                }
                let mut piece = CMatrix::zeros(db, da);
                piece.columns_mut(off, d).copy_from(&piece_view);
                split.push(piece);
            }
        }
        let map = Self { domain, codomain, kraus: split };
        let defect = map.unitality_defect();
        if defect > tolerances::UNITALITY_TOL {
            return Err(Error::InvalidMap(format!(
                "unitality defect {defect:.3e} exceeds {:.1e}",
                tolerances::UNITALITY_TOL
            )));
        }
        Ok(map)
    }

    /// The identity map on a shape.
    pub fn identity(shape: &AlgebraShape) -> Self {
        Self::unitary_conjugation(&Element::identity(shape)).expect("identity is unitary")
    }

    /// Conjugation `D ↦ U†DU` by a unitary element of one algebra.
    pub fn unitary_conjugation(u: &Element) -> Result<Self> {
        let defect = u
            .adjoint()
            .mul(u)?
            .sub(&Element::identity(u.shape()))?
            .op_norm();
        if defect > tolerances::UNITALITY_TOL {
            return Err(Error::InvalidMap(format!(
                "element is not unitary (defect {defect:.3e})"
            )));
        }
        Self::from_kraus(u.shape().clone(), u.shape().clone(), vec![u.dense()])
    }

    /// A state `ρ` on `B` regarded as a CP map `B → M₁ = C`.
    pub fn from_state(rho: &State) -> Result<Self> {
        let (vals, vecs) = linalg::herm_eigen(&rho.density().dense());
        let mut kraus = Vec::new();
        for (i, &p) in vals.iter().enumerate() {
            if p > 1e-14 {
                let col = vecs.column(i).map(|z| z * linalg::re(p.sqrt()));
                kraus.push(CMatrix::from_column_slice(vals.len(), 1, col.as_slice()));
            }
        }
        Self::from_kraus(rho.shape().clone(), AlgebraShape::full(1), kraus)
    }

    pub fn domain_shape(&self) -> &AlgebraShape {
        &self.domain
    }

    pub fn codomain_shape(&self) -> &AlgebraShape {
        &self.codomain
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// `‖Σ K†K − I‖`.
    pub fn unitality_defect(&self) -> f64 {
        let da = self.codomain.total_dim();
        let mut s = CMatrix::zeros(da, da);
        for k in &self.kraus {
            s += k.adjoint() * k;
        }
        linalg::op_norm(&(s - linalg::eye(da)))
    }

    /// Heisenberg action `M(D) = Σ K_i† D K_i`.
    pub fn apply_heisenberg(&self, d: &Element) -> Result<Element> {
        self.domain.check_compatible(d.shape())?;
        let dd = d.dense();
        let da = self.codomain.total_dim();
        let mut out = CMatrix::zeros(da, da);
        for k in &self.kraus {
            out += k.adjoint() * &dd * k;
        }
        let (el, _) = Element::from_dense_pinched(&self.codomain, &out)?;
        Ok(el)
    }

    /// Dual (Schrödinger) action `M*(ρ) = ρ ∘ M` on states of the codomain,
    /// realized on densities as `Σ K ρ K†` compressed onto the domain blocks.
    pub fn dual_apply(&self, rho: &State) -> Result<State> {
        self.codomain.check_compatible(rho.shape())?;
        let rd = rho.density().dense();
        let db = self.domain.total_dim();
        let mut out = CMatrix::zeros(db, db);
        for k in &self.kraus {
            out += k * &rd * k.adjoint();
        }
        let (el, _) = Element::from_dense_pinched(&self.domain, &out)?;
        State::from_density(el.re_part())
    }

    /// Choi matrix of the Heisenberg action over the matrix units of the
    /// domain algebra: `C[(k,a),(l,a')] = M(E_kl)[a,a']` for `k,l` inside
    /// one domain block, zero across blocks. Positive semidefinite iff the
    /// map is completely positive; used as the representation-independent
    /// fingerprint for map equality.
    pub fn choi(&self) -> CMatrix {
        let db = self.domain.total_dim();
        let da = self.codomain.total_dim();
        let mut c = CMatrix::zeros(db * da, db * da);
        for k in &self.kraus {
            // rank-one contribution w w† with w[(r,a)] = conj(K[r,a])
            let mut w = CVector::zeros(db * da);
            for r in 0..db {
                for a in 0..da {
                    w[r * da + a] = k[(r, a)].conj();
                }
            }
            c += linalg::outer(&w, &w);
        }
        pinch_choi(&self.domain, da, &mut c);
        c
    }

    /// Operator-norm distance between Choi matrices; the map-equality
    /// metric (Kraus representations are non-unique).
    pub fn choi_distance(&self, other: &CPMap) -> Result<f64> {
        self.domain.check_compatible(&other.domain)?;
        self.codomain.check_compatible(&other.codomain)?;
        Ok(linalg::op_norm(&(self.choi() - other.choi())))
    }

    /// Tensor amplification `id_n ⊗ M : M_n ⊗ B → M_n ⊗ A`, with Kraus set
    /// `{I_n ⊗ K_i}` in the block conventions of [`Element::tensor`].
    pub fn tensor_with_identity(&self, n: usize) -> Result<CPMap> {
        if n == 0 {
            return Err(Error::Argument("n must be ≥ 1".into()));
        }
        let mn = AlgebraShape::full(n);
        let new_domain = mn.tensor(&self.domain);
        let new_codomain = mn.tensor(&self.codomain);
        let kraus = self
            .kraus
            .iter()
            .map(|k| tensor_id_left(n, &self.domain, &self.codomain, k))
            .collect();
        CPMap::from_kraus(new_domain, new_codomain, kraus)
    }

    /// Heisenberg composition: `compose(M₁, M₂)(D) = M₂(M₁(D))`, defined
    /// when `M₂`'s domain equals `M₁`'s codomain. Its Kraus set is the
    /// product set `{K_i·L_j}`.
    pub fn compose(m1: &CPMap, m2: &CPMap) -> Result<CPMap> {
        m1.codomain.check_compatible(&m2.domain)?;
        let mut kraus = Vec::with_capacity(m1.kraus.len() * m2.kraus.len());
        for k in &m1.kraus {
            for l in &m2.kraus {
                kraus.push(k * l);
            }
        }
        CPMap::from_kraus(m1.domain.clone(), m2.codomain.clone(), kraus)
    }

    /// Serializable record.
    pub fn to_record(&self) -> CPMapRecord {
        CPMapRecord {
            domain_shape: self.domain.clone(),
            codomain_shape: self.codomain.clone(),
            kraus: self
                .kraus
                .iter()
                .map(|k| {
                    let mut flat = Vec::with_capacity(k.nrows() * k.ncols());
                    for r in 0..k.nrows() {
                        for c in 0..k.ncols() {
                            flat.push([k[(r, c)].re, k[(r, c)].im]);
                        }
                    }
                    KrausRecord { rows: k.nrows(), cols: k.ncols(), entries: flat }
                })
                .collect(),
        }
    }

    pub fn from_record(rec: &CPMapRecord) -> Result<Self> {
        let kraus = rec
            .kraus
            .iter()
            .map(|k| {
                if k.entries.len() != k.rows * k.cols {
                    return Err(Error::Argument("Kraus record size mismatch".into()));
                }
                let data: Vec<C64> = k.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
                Ok(CMatrix::from_row_slice(k.rows, k.cols, &data))
            })
            .collect::<Result<Vec<_>>>()?;
        CPMap::from_kraus(rec.domain_shape.clone(), rec.codomain_shape.clone(), kraus)
    }
}

/// Zeroes the Choi entries that pair distinct domain blocks.
fn pinch_choi(domain: &AlgebraShape, da: usize, c: &mut CMatrix) {
    let db = domain.total_dim();
    let mut block_of = vec![0usize; db];
    for b in 0..domain.num_blocks() {
        let off = domain.block_offset(b);
        for i in 0..domain.block_dims()[b] {
            block_of[off + i] = b;
        }
    }
    for r in 0..db {
        for l in 0..db {
            if block_of[r] != block_of[l] {
                for a in 0..da {
                    for a2 in 0..da {
                        c[(r * da + a, l * da + a2)] = C64::new(0.0, 0.0);
                    }
                }
            }
        }
    }
}

/// Builds `I_n ⊗ K` respecting the blockwise tensor ordering: the sub-block
/// of the result pairing domain block `b` with codomain block `j` is
/// `kron(I_n, K_{bj})`.
fn tensor_id_left(n: usize, domain: &AlgebraShape, codomain: &AlgebraShape, k: &CMatrix) -> CMatrix {
    let mn = AlgebraShape::full(n);
    let new_domain = mn.tensor(domain);
    let new_codomain = mn.tensor(codomain);
    let mut out = CMatrix::zeros(new_domain.total_dim(), new_codomain.total_dim());
    let id = linalg::eye(n);
    for (b, &mb) in domain.block_dims().iter().enumerate() {
        for (j, &nj) in codomain.block_dims().iter().enumerate() {
            let sub = k.view((domain.block_offset(b), codomain.block_offset(j)), (mb, nj));
            let big = linalg::kron(&id, &sub.into_owned());
            // tensor shape blocks are (0, b) since M_n is a single block
            let ro = new_domain.block_offset(b);
            let co = new_codomain.block_offset(j);
            out.view_mut((ro, co), (n * mb, n * nj)).copy_from(&big);
        }
    }
    out
}

/// `I_A ⊗ |f⟩ : H_A → H_{A⊗B}` in the blockwise tensor ordering.
fn embed_right_vector(a_shape: &AlgebraShape, b_shape: &AlgebraShape, f: &CVector) -> CMatrix {
    let ab = a_shape.tensor(b_shape);
    let mut out = CMatrix::zeros(ab.total_dim(), a_shape.total_dim());
    let kb = b_shape.num_blocks();
    for (i, &ni) in a_shape.block_dims().iter().enumerate() {
        for (j, &mj) in b_shape.block_dims().iter().enumerate() {
            let ab_off = ab.block_offset(i * kb + j);
            for a in 0..ni {
                for b in 0..mj {
                    out[(ab_off + a * mj + b, a_shape.block_offset(i) + a)] =
                        f[b_shape.block_offset(j) + b];
                }
            }
        }
    }
    out
}

/// Dilated measurement: the Heisenberg map `M : A⊗B → A` of
/// `M*(ρ) = α*(ρ ⊗ τ)`, for a unitary `u` on `A⊗B` and an apparatus state
/// `τ` on `B`. With `τ = Σ p_j |f_j⟩⟨f_j|` the Kraus set is
/// `{√p_j · U·(I_A ⊗ |f_j⟩)}`.
pub fn dilated_measurement(
    a_shape: &AlgebraShape,
    b_shape: &AlgebraShape,
    u: &Element,
    tau: &State,
) -> Result<CPMap> {
    let ab = a_shape.tensor(b_shape);
    ab.check_compatible(u.shape())?;
    b_shape.check_compatible(tau.shape())?;
    let unit_defect = u
        .adjoint()
        .mul(u)?
        .sub(&Element::identity(&ab))?
        .op_norm();
    if unit_defect > tolerances::UNITALITY_TOL {
        return Err(Error::InvalidMap(format!(
            "dilation element is not unitary (defect {unit_defect:.3e})"
        )));
    }
    let ud = u.dense();
    let (p, vecs) = linalg::herm_eigen(&tau.density().dense());
    let mut kraus = Vec::new();
    for (j, &pj) in p.iter().enumerate() {
        if pj <= 1e-14 {
            continue;
        }
        let f = vecs.column(j).into_owned();
        let e = embed_right_vector(a_shape, b_shape, &f);
        kraus.push((&ud * e).map(|z| z * linalg::re(pj.sqrt())));
    }
    CPMap::from_kraus(ab, a_shape.clone(), kraus)
}

/// A linear map `B → A` given extensionally by its images of the matrix
/// units of `B` (block by block, row-major inside each block). This is the
/// input for the complete-positivity verdict; maps that are not CP cannot
/// be represented as [`CPMap`].
#[derive(Debug, Clone)]
pub struct MapTable {
    domain: AlgebraShape,
    codomain: AlgebraShape,
    images: Vec<Element>,
}

impl MapTable {
    /// `images[idx]` is the image of the `idx`-th matrix unit in canonical
    /// order: for each block `b`, for `k` then `l` inside the block, `E^b_{kl}`.
    pub fn new(domain: AlgebraShape, codomain: AlgebraShape, images: Vec<Element>) -> Result<Self> {
        if images.len() != domain.algebra_dim() {
            return Err(Error::Argument(format!(
                "expected {} matrix-unit images, got {}",
                domain.algebra_dim(),
                images.len()
            )));
        }
        for im in &images {
            codomain.check_compatible(im.shape())?;
        }
        Ok(Self { domain, codomain, images })
    }

    /// Tabulates an operator-sum map.
    pub fn from_cpmap(m: &CPMap) -> Result<Self> {
        let mut images = Vec::with_capacity(m.domain_shape().algebra_dim());
        for (b, &d) in m.domain_shape().block_dims().iter().enumerate() {
            for k in 0..d {
                for l in 0..d {
                    let mut blocks: Vec<CMatrix> = m
                        .domain_shape()
                        .block_dims()
                        .iter()
                        .map(|&dd| CMatrix::zeros(dd, dd))
                        .collect();
                    blocks[b][(k, l)] = C64::new(1.0, 0.0);
                    let unit = Element::from_blocks(m.domain_shape().clone(), blocks)?;
                    images.push(m.apply_heisenberg(&unit)?);
                }
            }
        }
        MapTable::new(m.domain_shape().clone(), m.codomain_shape().clone(), images)
    }

    /// The transpose map on `M_n`, the standard positive-but-not-CP example.
    pub fn transpose(n: usize) -> Result<Self> {
        let shape = AlgebraShape::full(n);
        let mut images = Vec::with_capacity(n * n);
        for k in 0..n {
            for l in 0..n {
                let mut m = CMatrix::zeros(n, n);
                m[(l, k)] = C64::new(1.0, 0.0);
                images.push(Element::from_matrix(m)?);
            }
        }
        MapTable::new(shape.clone(), shape, images)
    }

    pub fn domain_shape(&self) -> &AlgebraShape {
        &self.domain
    }

    /// Image of the linear extension on an arbitrary element.
    pub fn apply(&self, d: &Element) -> Result<Element> {
        self.domain.check_compatible(d.shape())?;
        let mut acc = Element::zero(&self.codomain);
        let mut idx = 0;
        for (b, &dim) in self.domain.block_dims().iter().enumerate() {
            for k in 0..dim {
                for l in 0..dim {
                    let coeff = d.block(b)[(k, l)];
                    if coeff.norm_sqr() != 0.0 {
                        acc = acc.add(&self.images[idx].scale(coeff))?;
                    }
                    idx += 1;
                }
            }
        }
        Ok(acc)
    }

    /// Choi matrix `C[(k,a),(l,a')] = M(E_kl)[a,a']`, restricted to the
    /// block-diagonal matrix units of the domain.
    pub fn choi(&self) -> CMatrix {
        let db = self.domain.total_dim();
        let da = self.codomain.total_dim();
        let mut c = CMatrix::zeros(db * da, db * da);
        let mut idx = 0;
        for (b, &dim) in self.domain.block_dims().iter().enumerate() {
            let off = self.domain.block_offset(b);
            for k in 0..dim {
                for l in 0..dim {
                    let img = self.images[idx].dense();
                    for a in 0..da {
                        for a2 in 0..da {
                            c[((off + k) * da + a, (off + l) * da + a2)] = img[(a, a2)];
                        }
                    }
                    idx += 1;
                }
            }
        }
        c
    }

    /// Unitality defect `‖M(I) − I‖` of the tabulated map.
    pub fn unitality_defect(&self) -> Result<f64> {
        let img = self.apply(&Element::identity(&self.domain))?;
        img.sub(&Element::identity(&self.codomain)).map(|d| d.op_norm())
    }
}

/// Verdict of the complete-positivity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CpVerdict {
    pub is_cp: bool,
    pub min_choi_eigenvalue: f64,
    pub unitality_defect: f64,
}

/// Decides complete positivity of a tabulated linear map by the minimum
/// eigenvalue of its Choi matrix; positive verdict iff that eigenvalue is
/// ≥ −tol and the unitality defect is ≤ tol.
pub fn is_completely_positive(table: &MapTable, tol: f64) -> Result<CpVerdict> {
    let choi = table.choi();
    let herm_defect = linalg::hermiticity_defect(&choi);
    let min = if herm_defect > tol.max(1e-9) {
        // a non-adjoint-preserving map cannot be CP; report the most
        // negative eigenvalue of the Hermitean part as the witness
        f64::NEG_INFINITY
    } else {
        linalg::herm_eigenvalues(&choi)[0]
    };
    let unitality_defect = table.unitality_defect()?;
    Ok(CpVerdict {
        is_cp: min >= -tol && unitality_defect <= tol,
        min_choi_eigenvalue: min,
        unitality_defect,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrausRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

/// Structured text record for a completely positive map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CPMapRecord {
    pub domain_shape: AlgebraShape,
    pub codomain_shape: AlgebraShape,
    pub kraus: Vec<KrausRecord>,
}

/// The controlled-not dilation unitary `P₊⊗I + P₋⊗σx` on `M₂ ⊗ M₂`.
pub fn cnot_unitary() -> Element {
    let p = Element::proj_plus().tensor(&Element::identity(&AlgebraShape::full(2)));
    let q = Element::proj_minus().tensor(&Element::pauli_x());
    p.add(&q).expect("same shape")
}

/// The swap automorphism unitary on `M_n ⊗ M_n`.
pub fn swap_unitary(n: usize) -> Element {
    let shape = AlgebraShape::full(n * n);
    let mut m = CMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            m[(b * n + a, a * n + b)] = C64::new(1.0, 0.0);
        }
    }
    Element::from_blocks(shape, vec![m]).expect("square block")
}
