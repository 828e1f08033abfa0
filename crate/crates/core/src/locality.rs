//! Spin-chain local algebras, n-local and κ-global observables, and the
//! coherence bound for globally different vector states.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraShape, Element};
use crate::cpmap::{cnot_unitary, dilated_measurement};
use crate::error::{Error, Result};
use crate::linalg;
use crate::measurement::{dilated_setup, is_perfect};
use crate::report::BoundReport;
use crate::state::{joint_distribution, trace_distance, ProbabilityTable, State};
use crate::tolerances;
use crate::{C64, CMatrix, CVector};

/// A chain of `N` atoms, atom `i` carrying the full matrix algebra of
/// dimension `atom_dims[i]`. Dense realizations are refused above the size
/// guard.
#[derive(Debug, Clone)]
pub struct LocalAlgebra {
    atom_dims: Vec<usize>,
    size_guard: usize,
}

impl LocalAlgebra {
    pub fn new(atom_dims: Vec<usize>) -> Result<Self> {
        if atom_dims.is_empty() || atom_dims.iter().any(|&d| d == 0) {
            return Err(Error::Argument("atom dimensions must be ≥ 1".into()));
        }
        Ok(Self { atom_dims, size_guard: tolerances::DENSE_SIZE_GUARD })
    }

    /// A chain of `n` spin-½ atoms.
    pub fn spins(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn with_size_guard(mut self, guard: usize) -> Self {
        self.size_guard = guard;
        self
    }

    pub fn sites(&self) -> usize {
        self.atom_dims.len()
    }

    pub fn atom_dims(&self) -> &[usize] {
        &self.atom_dims
    }

    /// Product of atom dimensions; errors beyond the size guard.
    pub fn dense_dim(&self) -> Result<usize> {
        let mut acc: usize = 1;
        for &d in &self.atom_dims {
            acc = acc
                .checked_mul(d)
                .filter(|&x| x <= self.size_guard)
                .ok_or(Error::SizeGuard { required: usize::MAX, guard: self.size_guard })?;
        }
        Ok(acc)
    }

    /// The dense chain algebra as a single full matrix block.
    pub fn dense_shape(&self) -> Result<AlgebraShape> {
        Ok(AlgebraShape::full(self.dense_dim()?))
    }

    fn stride(&self, site: usize) -> usize {
        self.atom_dims[site + 1..].iter().product()
    }

    /// Exact dense tensor embedding of an element supported on a sorted set
    /// of sites, identity elsewhere.
    pub fn embed(&self, e: &LocalElement) -> Result<Element> {
        let dim = self.dense_dim()?;
        for &s in &e.support {
            if s >= self.sites() {
                return Err(Error::Argument(format!("site {s} out of range")));
            }
        }
        let sup_dims: Vec<usize> = e.support.iter().map(|&s| self.atom_dims[s]).collect();
        let d_sup: usize = sup_dims.iter().product();
        let factor = e.factor.block(0);
        if factor.nrows() != d_sup {
            return Err(Error::Argument(format!(
                "factor dimension {} does not match support dimensions {d_sup}",
                factor.nrows()
            )));
        }
        let rest_sites: Vec<usize> =
            (0..self.sites()).filter(|s| !e.support.contains(s)).collect();
        let rest_dims: Vec<usize> = rest_sites.iter().map(|&s| self.atom_dims[s]).collect();
        let d_rest: usize = rest_dims.iter().product();

        let mut out = CMatrix::zeros(dim, dim);
        let mut rest_digits = vec![0usize; rest_sites.len()];
        for _ in 0..d_rest {
            let rest_base: usize = rest_sites
                .iter()
                .zip(&rest_digits)
                .map(|(&s, &dig)| dig * self.stride(s))
                .sum();
            for a in 0..d_sup {
                let row = rest_base + self.compose_support(&e.support, &sup_dims, a);
                for b in 0..d_sup {
                    let v = factor[(a, b)];
                    if v.norm_sqr() == 0.0 {
                        continue;
                    }
                    let col = rest_base + self.compose_support(&e.support, &sup_dims, b);
                    out[(row, col)] = v;
                }
            }
            // increment mixed-radix rest counter
            for (digit, &base) in rest_digits.iter_mut().zip(&rest_dims).rev() {
                *digit += 1;
                if *digit < base {
                    break;
                }
                *digit = 0;
            }
        }
        Element::from_blocks(self.dense_shape()?, vec![out])
    }

    fn compose_support(&self, support: &[usize], sup_dims: &[usize], mut idx: usize) -> usize {
        let mut acc = 0;
        for (k, &site) in support.iter().enumerate().rev() {
            let d = sup_dims[k];
            acc += (idx % d) * self.stride(site);
            idx /= d;
        }
        acc
    }

    /// Dense realization `Y = (1/M)·Σ_k embed(Y^{i_k})` of a global
    /// observable.
    pub fn global_realize(&self, g: &GlobalObservable) -> Result<Element> {
        let mut acc = Element::zero(&self.dense_shape()?);
        let m = g.sites.len() as f64;
        for (&site, term) in g.sites.iter().zip(&g.terms) {
            let le = LocalElement::new(vec![site], Element::from_matrix(term.clone())?)?;
            acc = acc.add(&self.embed(&le)?.scale_re(1.0 / m))?;
        }
        Ok(acc)
    }

    /// Dense product vector `v_1 ⊗ … ⊗ v_N` from per-site factors.
    pub fn product_vector(&self, factors: &[CVector]) -> Result<CVector> {
        if factors.len() != self.sites() {
            return Err(Error::Argument("one factor per site required".into()));
        }
        for (f, &d) in factors.iter().zip(&self.atom_dims) {
            if f.len() != d {
                return Err(Error::Argument("factor dimension mismatch".into()));
            }
        }
        let dim = self.dense_dim()?;
        let mut acc = CVector::from_element(1, C64::new(1.0, 0.0));
        for f in factors {
            acc = acc.kronecker(f);
        }
        debug_assert_eq!(acc.len(), dim);
        Ok(acc)
    }

    /// Product vector state from per-site factors.
    pub fn product_state(&self, factors: &[CVector]) -> Result<State> {
        let v = self.product_vector(factors)?;
        State::vector(&self.dense_shape()?, &v)
    }
}

/// An element supported on finitely many sites: its `n`-locality is the
/// size of the support, its norm the factor norm.
#[derive(Debug, Clone)]
pub struct LocalElement {
    support: Vec<usize>,
    factor: Element,
}

impl LocalElement {
    /// `support` must be strictly increasing; `factor` is a single-block
    /// element on the tensor product of the supported atoms.
    pub fn new(support: Vec<usize>, factor: Element) -> Result<Self> {
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument("support must be strictly increasing".into()));
        }
        if factor.shape().num_blocks() != 1 {
            return Err(Error::Argument("factor must be a single full matrix block".into()));
        }
        Ok(Self { support, factor })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// The `n` in `n`-local.
    pub fn locality(&self) -> usize {
        self.support.len()
    }

    pub fn factor(&self) -> &Element {
        &self.factor
    }

    pub fn norm(&self) -> f64 {
        self.factor.op_norm()
    }
}

/// A `κ`-global observable `Y = (1/M)·Σ_k Y_{i_k}` over `M` distinct sites,
/// with `κ = max_k ‖Y^{i_k}‖/M`, the tightest admissible constant.
#[derive(Debug, Clone)]
pub struct GlobalObservable {
    sites: Vec<usize>,
    terms: Vec<CMatrix>,
}

impl GlobalObservable {
    pub fn new(sites: Vec<usize>, terms: Vec<CMatrix>) -> Result<Self> {
        if sites.is_empty() || sites.len() != terms.len() {
            return Err(Error::Argument("one Hermitean term per site required".into()));
        }
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument("sites must be strictly increasing".into()));
        }
        for t in &terms {
            if linalg::hermiticity_defect(t) > tolerances::HERMITICITY_REL * linalg::op_norm(t).max(1.0) {
                return Err(Error::NotHermitian {
                    defect: linalg::hermiticity_defect(t),
                    tol: tolerances::HERMITICITY_REL,
                });
            }
        }
        Ok(Self { sites, terms })
    }

    /// The average spin observable `S_α = (1/N)·Σ σ_α^i` over a spin chain.
    pub fn average_spin(chain: &LocalAlgebra, pauli: &CMatrix) -> Result<Self> {
        if chain.atom_dims().iter().any(|&d| d != 2) {
            return Err(Error::Argument("average spin requires a spin-½ chain".into()));
        }
        Self::new(
            (0..chain.sites()).collect(),
            vec![pauli.clone(); chain.sites()],
        )
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn terms(&self) -> &[CMatrix] {
        &self.terms
    }

    /// `κ = max_k ‖Y^{i_k}‖ / M`.
    pub fn kappa(&self) -> f64 {
        let m = self.sites.len() as f64;
        self.terms
            .iter()
            .map(linalg::op_norm)
            .fold(0.0, f64::max)
            / m
    }

    /// `y′ = max_k ‖Y^{i_k}‖`, the per-term norm bound used by the global
    /// variant of the coherence bound.
    pub fn term_norm_bound(&self) -> f64 {
        self.terms.iter().map(linalg::op_norm).fold(0.0, f64::max)
    }
}

/// The second operand of [`commutator_bounds`] / [`corzel_check`]: either an
/// `n`-local element or another global observable.
#[derive(Debug, Clone)]
pub enum ChainObservable {
    Local(LocalElement),
    Global(GlobalObservable),
}

/// Commutator bound of a global observable against a local or global one:
/// dense `‖[Y, A]‖ ≤ 2nκ‖A‖` (local case) or `‖[Y, Y′]‖ ≤ 2κy′` (global
/// case), verified exactly on the dense realization.
pub fn commutator_bounds(
    chain: &LocalAlgebra,
    g: &GlobalObservable,
    a: &ChainObservable,
) -> Result<BoundReport> {
    let y = chain.global_realize(g)?;
    let kappa = g.kappa();
    let (a_real, rhs, scale, id) = match a {
        ChainObservable::Local(le) => {
            let a_real = chain.embed(le)?;
            let n = le.locality() as f64;
            let norm = le.norm();
            (a_real, 2.0 * n * kappa * norm, norm.max(1.0), "corzel-commutator-local")
        }
        ChainObservable::Global(other) => {
            let a_real = chain.global_realize(other)?;
            let yp = other.term_norm_bound();
            (a_real, 2.0 * kappa * yp, yp.max(1.0), "corzel-commutator-global")
        }
    };
    let lhs = y.commutator(&a_real)?.op_norm();
    Ok(BoundReport::bound(id, lhs, rhs, scale, tolerances::EXACT_SLACK_TOL))
}

/// Coherence bound on a chain: for κ-globally different vector states
/// (pointer mean gap `|y₁ − y₂|`, deviations `σᵢ`), the superposition/
/// mixture gap on an `n`-local `A` is at most `(2nκ + σ₁ + σ₂)/|y₁−y₂|·‖A‖`,
/// and on a global `Y′` at most `(2κ + σ₁ + σ₂)/|y₁−y₂|·y′`.
pub fn corzel_check(
    chain: &LocalAlgebra,
    phi1: &State,
    phi2: &State,
    g: &GlobalObservable,
    a: &ChainObservable,
    alpha: C64,
    beta: C64,
) -> Result<BoundReport> {
    let norm_defect = (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs();
    if norm_defect > 1e-9 {
        return Err(Error::Argument(format!(
            "|α|² + |β|² deviates from 1 by {norm_defect:.3e}"
        )));
    }
    let y = chain.global_realize(g)?;
    let v1 = phi1.as_vector()?;
    let v2 = phi2.as_vector()?;
    let (y1, s1) = pointer_moments(&y, &v1);
    let (y2, s2) = pointer_moments(&y, &v2);
    let gap = (y1 - y2).abs();
    if gap <= tolerances::GAP_THRESHOLD {
        return Ok(BoundReport::vacuous(
            "corzel",
            "pointer gap below threshold: the bound is uninformative",
        ));
    }
    let (a_real, rhs) = match a {
        ChainObservable::Local(le) => {
            let a_real = chain.embed(le)?;
            let n = le.locality() as f64;
            (a_real.clone(), (2.0 * n * g.kappa() + s1 + s2) / gap * a_real.op_norm())
        }
        ChainObservable::Global(other) => {
            let a_real = chain.global_realize(other)?;
            let yp = other.term_norm_bound();
            (a_real, (2.0 * g.kappa() + s1 + s2) / gap * yp)
        }
    };
    let w = v1.map(|z| z * alpha) + v2.map(|z| z * beta);
    // unnormalized superposition functional, as in the coherence lemma;
    // equal to the superposition-state expectation for orthogonal φ's
    let lhs = (a_real.sandwich(&w, &w)
        - a_real.sandwich(&v1, &v1) * linalg::re(alpha.norm_sqr())
        - a_real.sandwich(&v2, &v2) * linalg::re(beta.norm_sqr()))
    .norm();
    let scale = a_real.op_norm().max(1.0);
    Ok(BoundReport::bound("corzel", lhs, rhs, scale, tolerances::SLACK_TOL))
}

fn pointer_moments(y: &Element, v: &CVector) -> (f64, f64) {
    let yv = y.apply(v);
    let mean = v.dotc(&yv).re;
    let var = (yv.norm_squared() - mean * mean).max(0.0);
    (mean, var.sqrt())
}

/// Report of the controlled-not measurement scenario: unbiasedness,
/// perfection, and the survival of coherence on the back-rotated
/// observable.
#[derive(Debug, Clone)]
pub struct CnotScenarioReport {
    pub pointer_transfer_defect: f64,
    pub perfect: bool,
    pub sigma: f64,
    /// `M*(ρ)(α⁻¹(σx⊗I))` against `ρ(σx)` for `ρ = |+x⟩`.
    pub coherence_defect: f64,
    pub pass: bool,
}

/// Runs the controlled-not measurement of `σz`: checks `M(I⊗σz) = σz`,
/// perfection, and that the back-rotated `σx` observable still reads the
/// input coherence.
pub fn hepp_cnot_scenario() -> Result<CnotScenarioReport> {
    let m2 = AlgebraShape::full(2);
    let tau = State::vector(&m2, &CVector::from_vec(vec![linalg::re(1.0), linalg::re(0.0)]))?;
    let u = cnot_unitary();
    let setup = dilated_setup(&m2, &m2, &u, &tau, &Element::pauli_z())?;
    let pointer_transfer_defect = setup.measured().distance(&Element::pauli_z())?;
    let verdict = is_perfect(&setup, 1e-9)?;

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus_x = State::vector(&m2, &CVector::from_vec(vec![linalg::re(h), linalg::re(h)]))?;
    let sx = Element::pauli_x().tensor(&Element::identity(&m2));
    let back_rotated = u.mul(&sx)?.mul(&u.adjoint())?;
    let lhs = setup.map().dual_apply(&plus_x)?.expect_re(&back_rotated)?;
    let coherence_defect = (lhs - plus_x.expect_re(&Element::pauli_x())?).abs();

    Ok(CnotScenarioReport {
        pointer_transfer_defect,
        perfect: verdict.perfect,
        sigma: verdict.sigma,
        coherence_defect,
        pass: pointer_transfer_defect <= 1e-12 && verdict.perfect && coherence_defect <= 1e-12,
    })
}

/// Report of the two-bit repeatable measurement scenario.
#[derive(Debug, Clone)]
pub struct TwoBitReport {
    /// Joint distribution of the two pointer bits.
    pub joint: ProbabilityTable<(f64, f64)>,
    /// Largest off-diagonal (disagreeing-pointer) probability.
    pub max_off_diagonal: f64,
    /// Diagonal probabilities against `ρ(P₊)`, `ρ(P₋)`: worst defect.
    pub diagonal_defect: f64,
    /// Trace distance between `(M*ρ)_{I⊗P₊⊗I}` and `M*(ρ_{P₊})`, when the
    /// outcome probability is not dust.
    pub reduction_defect: Option<f64>,
    pub pass: bool,
}

/// The two-bit memory scenario: `X = σz` is measured twice into two pointer
/// bits. The pointers always agree, their law is the law of `X`, and
/// conditioning on the first bit equals measuring the reduced state.
pub fn two_bit_scenario(rho: &State) -> Result<TwoBitReport> {
    let m2 = AlgebraShape::full(2);
    AlgebraShape::full(2).check_compatible(rho.shape())?;
    let i2 = Element::identity(&m2);
    let u1 = Element::proj_plus()
        .tensor(&i2)
        .tensor(&i2)
        .add(&Element::proj_minus().tensor(&Element::pauli_x()).tensor(&i2))?;
    let u2 = Element::proj_plus()
        .tensor(&i2)
        .tensor(&i2)
        .add(&Element::proj_minus().tensor(&i2).tensor(&Element::pauli_x()))?;
    let u = u2.mul(&u1)?;
    // the dilation sees the two memory bits as one apparatus M₄
    let b_shape = AlgebraShape::full(4);
    let (u_reshaped, _) = Element::from_dense_pinched(&m2.tensor(&b_shape), &u.dense())?;
    let e0 = CVector::from_vec(vec![
        linalg::re(1.0),
        linalg::re(0.0),
        linalg::re(0.0),
        linalg::re(0.0),
    ]);
    let tau = State::vector(&b_shape, &e0)?;
    let map = dilated_measurement(&m2, &b_shape, &u_reshaped, &tau)?;

    let dual = map.dual_apply(rho)?;
    let y1 = i2.tensor(&Element::pauli_z()).tensor(&i2);
    let y2 = i2.tensor(&i2).tensor(&Element::pauli_z());
    let (y1d, _) = Element::from_dense_pinched(map.domain_shape(), &y1.dense())?;
    let (y2d, _) = Element::from_dense_pinched(map.domain_shape(), &y2.dense())?;
    let joint = joint_distribution(&dual, &y1d, &y2d)?;

    let mut max_off_diagonal: f64 = 0.0;
    let mut diagonal_defect: f64 = 0.0;
    let p_plus = rho.expect_re(&Element::proj_plus())?;
    let p_minus = rho.expect_re(&Element::proj_minus())?;
    for &((a, b), p) in &joint.outcomes {
        if (a - b).abs() > 1e-9 {
            max_off_diagonal = max_off_diagonal.max(p.abs());
        } else {
            let expected = if a > 0.0 { p_plus } else { p_minus };
            diagonal_defect = diagonal_defect.max((p - expected).abs());
        }
    }

    let reduction_defect = if p_plus > tolerances::DUST {
        let q = i2.tensor(&Element::proj_plus()).tensor(&i2);
        let (qd, _) = Element::from_dense_pinched(map.domain_shape(), &q.dense())?;
        let lhs = dual.reduce(&qd)?;
        let rhs = map.dual_apply(&rho.reduce(&Element::proj_plus())?)?;
        Some(trace_distance(&lhs, &rhs)?)
    } else {
        None
    };

    let pass = max_off_diagonal <= 1e-12
        && diagonal_defect <= 1e-12
        && reduction_defect.map_or(true, |d| d <= 1e-10);
    Ok(TwoBitReport {
        joint,
        max_off_diagonal,
        diagonal_defect,
        reduction_defect,
        pass,
    })
}

/// Structured chain-scenario configuration: sites, atom dimensions,
/// observables and product states addressed by name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainConfig {
    pub sites: usize,
    #[serde(default)]
    pub atom_dims: Option<Vec<usize>>,
    pub observables: Vec<ChainObservableSpec>,
    pub states: Vec<ChainStateSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChainObservableSpec {
    /// `S_α`: the average of one Pauli over every site.
    AverageSpin { name: String, pauli: String },
    /// A single-site Pauli.
    SiteSpin { name: String, site: usize, pauli: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainStateSpec {
    pub name: String,
    /// one of `up`, `down`, `plus`, `minus` per site
    pub factors: Vec<String>,
}

/// Pauli matrix by name.
pub fn pauli_by_name(name: &str) -> Result<CMatrix> {
    Ok(match name {
        "sx" | "x" => Element::pauli_x().block(0).clone(),
        "sy" | "y" => Element::pauli_y().block(0).clone(),
        "sz" | "z" => Element::pauli_z().block(0).clone(),
        other => return Err(Error::Argument(format!("unknown Pauli {other:?}"))),
    })
}

/// Single-site basis vector by name.
pub fn spin_factor_by_name(name: &str) -> Result<CVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match name {
        "up" => CVector::from_vec(vec![linalg::re(1.0), linalg::re(0.0)]),
        "down" => CVector::from_vec(vec![linalg::re(0.0), linalg::re(1.0)]),
        "plus" => CVector::from_vec(vec![linalg::re(h), linalg::re(h)]),
        "minus" => CVector::from_vec(vec![linalg::re(h), linalg::re(-h)]),
        other => return Err(Error::Argument(format!("unknown factor {other:?}"))),
    })
}

impl ChainConfig {
    pub fn chain(&self) -> Result<LocalAlgebra> {
        match &self.atom_dims {
            Some(dims) => {
                if dims.len() != self.sites {
                    return Err(Error::Argument("atom_dims length must equal sites".into()));
                }
                LocalAlgebra::new(dims.clone())
            }
            None => LocalAlgebra::spins(self.sites),
        }
    }

    pub fn observable(&self, name: &str) -> Result<ChainObservable> {
        let chain = self.chain()?;
        for spec in &self.observables {
            match spec {
                ChainObservableSpec::AverageSpin { name: n, pauli } if n == name => {
                    return Ok(ChainObservable::Global(GlobalObservable::average_spin(
                        &chain,
                        &pauli_by_name(pauli)?,
                    )?));
                }
                ChainObservableSpec::SiteSpin { name: n, site, pauli } if n == name => {
                    return Ok(ChainObservable::Local(LocalElement::new(
                        vec![*site],
                        Element::from_matrix(pauli_by_name(pauli)?)?,
                    )?));
                }
                _ => {}
            }
        }
        Err(Error::Argument(format!("unknown observable {name:?}")))
    }

    pub fn state(&self, name: &str) -> Result<State> {
        let chain = self.chain()?;
        for spec in &self.states {
            if spec.name == name {
                let factors = spec
                    .factors
                    .iter()
                    .map(|f| spin_factor_by_name(f))
                    .collect::<Result<Vec<_>>>()?;
                return chain.product_state(&factors);
            }
        }
        Err(Error::Argument(format!("unknown state {name:?}")))
    }
}
