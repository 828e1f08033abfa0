//! Measurement setups, quality, the structure of perfect measurements,
//! joint-measurement bounds and Heisenberg-principle bounds.

use crate::algebra::{self, AlgebraShape, Element, SpectralDecomposition};
use crate::cpmap::{dilated_measurement, CPMap};
use crate::cs;
use crate::error::{Error, Result};
use crate::linalg::{self, SplitMix};
use crate::report::BoundReport;
use crate::state::{self, State};
use crate::tolerances;
use crate::CMatrix;

/// How the measured system's algebra sits inside the map's domain, when
/// the domain is a tensor product: `Left(b)` means domain = codomain ⊗ b,
/// `Right(b)` means domain = b ⊗ codomain.
#[derive(Debug, Clone)]
pub enum SystemSide {
    Left(AlgebraShape),
    Right(AlgebraShape),
}

/// An unbiased measurement: a CP map `M : B → A` together with the measured
/// observable `X ∈ A` and the pointer `Y ∈ B`, with `M(Y) = X` up to the
/// recorded bias defect.
#[derive(Debug, Clone)]
pub struct MeasurementSetup {
    map: CPMap,
    measured: Element,
    pointer: Element,
    bias_defect: f64,
    system: Option<SystemSide>,
}

impl MeasurementSetup {
    pub fn new(map: CPMap, measured: Element, pointer: Element) -> Result<Self> {
        map.codomain_shape().check_compatible(measured.shape())?;
        map.domain_shape().check_compatible(pointer.shape())?;
        measured.check_hermitian()?;
        pointer.check_hermitian()?;
        let bias_defect = map.apply_heisenberg(&pointer)?.distance(&measured)?;
        Ok(Self { map, measured, pointer, bias_defect, system: None })
    }

    /// Unbiased by construction: the measured observable is `M(Y)`.
    pub fn unbiased(map: CPMap, pointer: Element) -> Result<Self> {
        pointer.check_hermitian()?;
        let measured = map.apply_heisenberg(&pointer)?.re_part();
        Self::new(map, measured, pointer)
    }

    pub fn with_system(mut self, system: SystemSide) -> Self {
        self.system = Some(system);
        self
    }

    pub fn map(&self) -> &CPMap {
        &self.map
    }

    pub fn measured(&self) -> &Element {
        &self.measured
    }

    pub fn pointer(&self) -> &Element {
        &self.pointer
    }

    /// `‖M(Y) − X‖`.
    pub fn bias_defect(&self) -> f64 {
        self.bias_defect
    }

    pub fn is_unbiased(&self) -> bool {
        self.bias_defect <= tolerances::BIAS_REL * self.measured.op_norm().max(1.0)
    }

    /// Embeds a codomain element into the domain as `a ⊗ I` or `I ⊗ a`,
    /// when the domain is known to factor.
    pub fn embed_system(&self, a: &Element) -> Result<Element> {
        self.map.codomain_shape().check_compatible(a.shape())?;
        match &self.system {
            Some(SystemSide::Left(b)) => Ok(a.tensor(&Element::identity(b))),
            Some(SystemSide::Right(b)) => Ok(Element::identity(b).tensor(a)),
            None => Err(Error::Precondition(
                "setup does not carry a tensor factorization of its domain".into(),
            )),
        }
    }
}

/// Quality `σ` of an unbiased setup: the supremum over states of
/// `var_{M*ρ}(Y) − var_ρ(X)`, computed exactly as `‖Y‖_M`, the square root
/// of the top eigenvalue of `F_M(Y,Y)`.
pub fn quality(setup: &MeasurementSetup) -> Result<f64> {
    let tol = tolerances::BIAS_REL * setup.measured.op_norm().max(1.0);
    if setup.bias_defect > tol {
        return Err(Error::Biased { defect: setup.bias_defect, tol });
    }
    cs::t_norm(&setup.map, &setup.pointer)
}

/// Perfection verdict: spectra agreement, spectral-projection transfer, and
/// the quality route, cross-checked.
#[derive(Debug, Clone)]
pub struct PerfectionVerdict {
    pub perfect: bool,
    pub sigma: f64,
    pub spectra_match: bool,
    pub projection_defect: f64,
    pub bias_defect: f64,
}

/// Decides whether a setup is a perfect measurement: the spectra of `X` and
/// `Y` must agree as sets of distinct values, every spectral projection of
/// `Y` must map onto the corresponding one of `X`, and the quality must
/// vanish; the three routes are computed independently and must agree.
pub fn is_perfect(setup: &MeasurementSetup, tol: f64) -> Result<PerfectionVerdict> {
    let sigma = cs::t_norm(&setup.map, &setup.pointer)?;
    let scale = setup.measured.op_norm().max(1.0);
    let spectra_match = algebra::spectra_match(&setup.measured, &setup.pointer, tol.max(1e-12) * scale)?;
    let mut projection_defect: f64 = 0.0;
    if spectra_match {
        let dx = SpectralDecomposition::with_default_tol(&setup.measured)?;
        let dy = SpectralDecomposition::with_default_tol(&setup.pointer)?;
        for (q, p) in dy.projections().iter().zip(dx.projections()) {
            let img = setup.map.apply_heisenberg(q)?;
            projection_defect = projection_defect.max(img.distance(p)?);
        }
    } else {
        projection_defect = f64::INFINITY;
    }
    let unbiased = setup.bias_defect <= tol.max(tolerances::BIAS_REL) * scale;
    Ok(PerfectionVerdict {
        perfect: sigma <= tol && spectra_match && projection_defect <= tol.max(1e-12) * scale && unbiased,
        sigma,
        spectra_match,
        projection_defect,
        bias_defect: setup.bias_defect,
    })
}

/// Structure-lemma checks for an element of vanishing T-norm: the map acts
/// as a homomorphism on the algebra generated by `B`.
///
/// Verifies, for monomials up to degree 6 and the indicator functions of
/// `B`'s spectral clusters: `T(f(B)) = f(T(B))` (item 3) and
/// `‖f(B)‖_T = 0` (item 4); and for deterministic pseudo-random elements of
/// `B`'s relative commutant: `[T(A), T(B)] = 0` (item 5).
pub fn structure_check(t: &CPMap, b: &Element, tol: f64) -> Result<Vec<BoundReport>> {
    b.check_hermitian()?;
    let s = cs::t_norm(t, b)?;
    if s > tol {
        return Err(Error::Precondition(format!(
            "‖B‖_T = {s:.3e} exceeds tol {tol:.3e}; structure lemma does not apply"
        )));
    }
    let tb = t.apply_heisenberg(b)?.re_part();
    let b_norm = b.op_norm().max(1.0);
    let mut reports = Vec::new();

    // item 3 + 4, monomials x^k
    let mut power = Element::identity(b.shape());
    let mut tb_power = Element::identity(t.codomain_shape());
    for k in 0..=6usize {
        if k > 0 {
            power = power.mul(b)?;
            tb_power = tb_power.mul(&tb)?;
        }
        let lhs3 = t.apply_heisenberg(&power)?.distance(&tb_power)?;
        let rhs3 = (k.saturating_sub(1) as f64) * s * b_norm.powi(k as i32 - 1)
            + tolerances::EXACT_SLACK_TOL * b_norm.powi(k as i32);
        reports.push(BoundReport::bound(
            &format!("structure-item3-pow{k}"),
            lhs3,
            rhs3,
            b_norm.powi(k as i32),
            tolerances::SLACK_TOL,
        ));
        let lhs4 = cs::t_norm(t, &power)?;
        let rhs4 = 2.0 * (k as f64) * s * b_norm.powi(k as i32 - 1)
            + 1e-6 * b_norm.powi(k as i32);
        reports.push(BoundReport::bound(
            &format!("structure-item4-pow{k}"),
            lhs4,
            rhs4,
            b_norm.powi(k as i32),
            tolerances::SLACK_TOL,
        ));
    }

    // item 3 + 4, spectral indicator functions
    let dec = SpectralDecomposition::with_default_tol(b)?;
    let gap = min_gap(dec.eigenvalues()).unwrap_or(1.0);
    let dec_tb = SpectralDecomposition::with_default_tol(&tb)?;
    for (i, (&lambda, p)) in dec.eigenvalues().iter().zip(dec.projections()).enumerate() {
        let window = gap / 2.0;
        let f_tb = dec_tb.band_projection(lambda - window, lambda + window)?;
        let lhs = t.apply_heisenberg(p)?.distance(&f_tb)?;
        let rhs = 1e-8 + 16.0 * s / gap;
        reports.push(BoundReport::bound(
            &format!("structure-item3-indicator{i}"),
            lhs,
            rhs,
            1.0,
            tolerances::SLACK_TOL,
        ));
        let lhs4 = cs::t_norm(t, p)?;
        reports.push(BoundReport::bound(
            &format!("structure-item4-indicator{i}"),
            lhs4,
            1e-6 + 16.0 * s / gap,
            1.0,
            tolerances::SLACK_TOL,
        ));
    }

    // item 5: commutant elements A = Σ_i P_i R P_i commute with B exactly
    let mut rng = SplitMix::new(0x5eed_cafe);
    for r in 0..4 {
        let mut a = Element::zero(b.shape());
        let blocks: Vec<CMatrix> = b
            .shape()
            .block_dims()
            .iter()
            .map(|&d| {
                let g = rng.gaussian_matrix(d, d);
                (&g + g.adjoint()).scale(0.5)
            })
            .collect();
        let random = Element::from_blocks(b.shape().clone(), blocks)?;
        for p in dec.projections() {
            a = a.add(&p.mul(&random)?.mul(p)?)?;
        }
        let lhs = t
            .apply_heisenberg(&a)?
            .commutator(&t.apply_heisenberg(b)?)?
            .op_norm();
        let scale = a.op_norm().max(1.0) * b_norm;
        let rhs = a.commutator(b)?.op_norm() + 2.0 * a.op_norm() * s
            + tolerances::EXACT_SLACK_TOL * scale;
        reports.push(BoundReport::bound(
            &format!("structure-item5-commutant{r}"),
            lhs,
            rhs,
            scale,
            tolerances::SLACK_TOL,
        ));
    }
    Ok(reports)
}

fn min_gap(values: &[f64]) -> Option<f64> {
    values
        .windows(2)
        .map(|w| w[1] - w[0])
        .min_by(f64::total_cmp)
}

/// Joint-measurement bound: for commuting pointers,
/// `2·‖Y₁‖_M·‖Y₂‖_M ≥ ‖[M(Y₁), M(Y₂)]‖`. The perfect case (`σ = 0`)
/// forces the measured observables to commute.
pub fn joint_quality_bound(m: &CPMap, y1: &Element, y2: &Element) -> Result<BoundReport> {
    y1.check_hermitian()?;
    y2.check_hermitian()?;
    let scale = (y1.op_norm() * y2.op_norm()).max(1e-300);
    let comm = y1.commutator(y2)?.op_norm();
    if comm > tolerances::COMMUTATION_REL * scale {
        return Err(Error::Precondition(format!(
            "pointers do not commute: ‖[Y1,Y2]‖ = {comm:.3e}"
        )));
    }
    let x1 = m.apply_heisenberg(y1)?;
    let x2 = m.apply_heisenberg(y2)?;
    let lhs = x1.commutator(&x2)?.op_norm();
    let rhs = 2.0 * cs::t_norm(m, y1)? * cs::t_norm(m, y2)?;
    // the measured scale: X_i inherit the pointer norms under a contraction
    Ok(BoundReport::bound("jmdelta", lhs, rhs, scale, tolerances::SLACK_TOL))
}

/// Heisenberg-principle bound: an unbiased measurement with pointer `I⊗Y`
/// that disturbs states on the system by at most `Δ` in functional norm has
/// quality `σ ≥ d(X,Z)·(1−Δ)/√(3Δ)`.
///
/// For `Δ ≤ 1e−12` the exact principle applies instead: zero disturbance is
/// only possible for central `X`, and the report fails when `X` is not.
pub fn heisenberg_principle_check(setup: &MeasurementSetup, delta: f64) -> Result<BoundReport> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Argument(format!("delta = {delta} out of range (0,1)")));
    }
    let sigma = quality(setup)?;
    let d = algebra::distance_to_center(&setup.measured)?.distance;
    let scale = setup.measured.op_norm().max(1.0);
    if delta <= 1e-12 {
        let central_tol = tolerances::EXACT_SLACK_TOL * scale;
        let pass = d <= central_tol;
        let mut report = BoundReport::bound("hp", d, central_tol, scale, 0.0);
        report.pass = pass;
        report = report.with_note(if pass {
            "zero disturbance and X central: exact Heisenberg principle holds"
        } else {
            "zero disturbance requires X in the centre; non-central X makes this setup impossible"
        });
        return Ok(report);
    }
    let rhs = d * (1.0 - delta) / (3.0 * delta).sqrt();
    Ok(BoundReport::bound("hpdelta", rhs, sigma, scale, tolerances::SLACK_TOL)
        .with_note(format!("σ = {sigma:.6e} must dominate d(X,Z)(1−Δ)/√(3Δ) = {rhs:.6e}")))
}

/// Result of the seeded disturbance search: a certified lower bound on the
/// supremum over states of `‖M*(ρ)|_{A⊗I} − ρ‖` (functional norm), found by
/// multi-start hill climbing over pure states. Never an upper bound.
#[derive(Debug, Clone)]
pub struct DisturbanceEstimate {
    pub lower: f64,
    pub restarts: usize,
    pub note: &'static str,
}

/// Estimates the disturbance of a measurement `M : A⊗B → A` on the system
/// algebra, maximizing over pure states with `restarts` seeded restarts
/// (at least 64 are used regardless).
pub fn estimate_disturbance(
    m: &CPMap,
    b_shape: &AlgebraShape,
    seed: u64,
    restarts: usize,
) -> Result<DisturbanceEstimate> {
    let a_shape = m.codomain_shape().clone();
    a_shape.tensor(b_shape).check_compatible(m.domain_shape())?;
    let restarts = restarts.max(64);
    let objective = |v: &crate::CVector, block: usize| -> Result<f64> {
        let mut full = crate::CVector::zeros(a_shape.total_dim());
        full.rows_mut(a_shape.block_offset(block), v.len()).copy_from(v);
        let rho = State::vector(&a_shape, &full)?;
        let dual = m.dual_apply(&rho)?;
        let restricted = state::partial_trace_right(&dual, &a_shape, b_shape)?;
        state::functional_distance(&restricted, &rho)
    };
    let mut best = 0.0f64;
    let mut rng = SplitMix::new(seed);
    for r in 0..restarts {
        let block = r % a_shape.num_blocks();
        let dim = a_shape.block_dims()[block];
        let mut v = rng.unit_vector(dim);
        let mut val = objective(&v, block)?;
        let mut step = 0.5f64;
        let mut rejects = 0;
        while step > 1e-9 {
            let perturbed = {
                let p = &v + rng.unit_vector(dim).scale(linalg::re(step).re.into());
                p.clone().unscale(p.norm())
            };
            let cand = objective(&perturbed, block)?;
            if cand > val {
                v = perturbed;
                val = cand;
                rejects = 0;
            } else {
                rejects += 1;
                if rejects >= 8 {
                    step *= 0.5;
                    rejects = 0;
                }
            }
        }
        best = best.max(val);
    }
    Ok(DisturbanceEstimate {
        lower: best,
        restarts,
        note: "lower bound from seeded multi-start search; not certified as an upper bound",
    })
}

/// Local Heisenberg principle: if the measurement leaves `A` exactly in
/// place (`M(A⊗I) = A`) then `σ ≥ δ/2` with `δ = ‖[X,A]‖/‖A‖`.
pub fn local_heisenberg_check(setup: &MeasurementSetup, a: &Element) -> Result<BoundReport> {
    a.check_hermitian()?;
    let a_norm = a.op_norm();
    if a_norm <= tolerances::DUST {
        return Ok(BoundReport::vacuous("local-hp", "A = 0 carries no constraint"));
    }
    let embedded = setup.embed_system(a)?;
    let preserved = setup.map.apply_heisenberg(&embedded)?;
    let defect = preserved.distance(a)?;
    let tol = tolerances::BIAS_REL * a_norm.max(1.0);
    if defect > tol {
        return Err(Error::Precondition(format!(
            "M(A⊗I) ≠ A: defect {defect:.3e} exceeds {tol:.3e}"
        )));
    }
    let sigma = quality(setup)?;
    let delta = setup.measured.commutator(a)?.op_norm() / a_norm;
    Ok(BoundReport::bound("local-hp", delta / 2.0, sigma, 1.0, tolerances::SLACK_TOL))
}

/// Builds the measurement defined by a discrete positive-operator-valued
/// measure: effects `M_i ≥ 0` with `Σ M_i = I` and outcome values `x_i`.
/// The map sends the abelian algebra of outcome functions into `A`, the
/// measured observable is `Σ x_i·M_i`, and the pointer is the coordinate
/// function `diag(x_i)`.
pub fn povm_measurement(effects: &[(f64, Element)]) -> Result<MeasurementSetup> {
    if effects.is_empty() {
        return Err(Error::Argument("POVM needs at least one effect".into()));
    }
    let a_shape = effects[0].1.shape().clone();
    let scale = effects.iter().map(|(_, e)| e.op_norm()).fold(1.0, f64::max);
    let mut sum = Element::zero(&a_shape);
    for (_, e) in effects {
        e.check_psd(tolerances::STATE_EIG_FLOOR * scale)?;
        sum = sum.add(e)?;
    }
    let defect = sum.sub(&Element::identity(&a_shape))?.op_norm();
    if defect > tolerances::UNITALITY_TOL * scale.max(1.0) {
        return Err(Error::InvalidMap(format!(
            "effects sum to I with defect {defect:.3e}"
        )));
    }
    let k = effects.len();
    let outcome_shape = AlgebraShape::abelian(k);
    let da = a_shape.total_dim();
    let mut kraus = Vec::new();
    for (j, (_, e)) in effects.iter().enumerate() {
        let root = algebra::sqrt_psd(e)?.dense();
        for m in 0..da {
            let mut op = CMatrix::zeros(k, da);
            for c in 0..da {
                op[(j, c)] = root[(m, c)];
            }
            kraus.push(op);
        }
    }
    let map = CPMap::from_kraus(outcome_shape.clone(), a_shape.clone(), kraus)?;
    let mut measured = Element::zero(&a_shape);
    for (x, e) in effects {
        measured = measured.add(&e.scale_re(*x))?;
    }
    let pointer = Element::diagonal(
        &outcome_shape,
        &effects.iter().map(|(x, _)| *x).collect::<Vec<_>>(),
    )?;
    MeasurementSetup::new(map, measured.re_part(), pointer)
}

/// The von Neumann measurement of a Hermitean `X = Σ x_i P_i`: the map
/// `C(Spec X) ⊗ A → A`, `f ⊗ A ↦ Σ f(i)·P_i·A·P_i`, which measures `X`
/// perfectly with pointer `𝔵 ⊗ I` and leaves the collapsed state behind.
pub fn von_neumann_measurement(x: &Element) -> Result<MeasurementSetup> {
    let dec = SpectralDecomposition::with_default_tol(x)?;
    let a_shape = x.shape().clone();
    let k = dec.len();
    let outcome_shape = AlgebraShape::abelian(k);
    let domain = outcome_shape.tensor(&a_shape);
    let da = a_shape.total_dim();
    // Kraus ops inject P_i into the i-th copy of A inside the domain space
    let mut kraus = Vec::with_capacity(k);
    for (i, p) in dec.projections().iter().enumerate() {
        let mut op = CMatrix::zeros(domain.total_dim(), da);
        let pd = p.dense();
        let row_off: usize = domain.block_dims()[..i * a_shape.num_blocks()]
            .iter()
            .sum();
        // domain blocks (i, b) are contiguous copies of A's blocks; the dense
        // offset of copy i is i·dim(A)
        let _ = row_off;
        for r in 0..da {
            for c in 0..da {
                op[(i * da + r, c)] = pd[(r, c)];
            }
        }
        kraus.push(op);
    }
    let map = CPMap::from_kraus(domain.clone(), a_shape.clone(), kraus)?;
    let coordinate = Element::diagonal(&outcome_shape, dec.eigenvalues())?;
    let pointer = coordinate.tensor(&Element::identity(&a_shape));
    let setup = MeasurementSetup::new(map, x.clone(), pointer)?;
    Ok(setup.with_system(SystemSide::Right(outcome_shape)))
}

/// Measurement setup for a dilation: unitary `u` on `A ⊗ B`, apparatus
/// state `τ` on `B`, pointer `I ⊗ y` with `y ∈ B`; the measured observable
/// is `M(I⊗y)`, unbiased by construction.
pub fn dilated_setup(
    a_shape: &AlgebraShape,
    b_shape: &AlgebraShape,
    u: &Element,
    tau: &State,
    pointer_in_b: &Element,
) -> Result<MeasurementSetup> {
    let map = dilated_measurement(a_shape, b_shape, u, tau)?;
    let pointer = Element::identity(a_shape).tensor(pointer_in_b);
    let setup = MeasurementSetup::unbiased(map, pointer)?;
    Ok(setup.with_system(SystemSide::Left(b_shape.clone())))
}

/// The ε-family of unbiased `σz`-measurements `M : M₂⊗C₂ → M₂` with
/// `M(A ⊕ B) = X₀†AX₀ + X₁†BX₁`, `X₀ = diag(√(1−ε), √ε)`,
/// `X₁ = diag(√ε, √(1−ε))`; pointer `(1−2ε)⁻¹·I⊗diag(1,−1)` and quality
/// `2√(ε(1−ε))/(1−2ε)`.
pub fn example7_setup(eps: f64) -> Result<MeasurementSetup> {
    let map = example7_map(eps)?;
    let scale = 1.0 / (1.0 - 2.0 * eps);
    let domain = map.domain_shape().clone();
    let pointer = Element::central(&domain, &[linalg::re(scale), linalg::re(-scale)])?;
    let setup = MeasurementSetup::new(map, Element::pauli_z(), pointer)?;
    Ok(setup.with_system(SystemSide::Left(AlgebraShape::abelian(2))))
}

/// The bare ε-family map of [`example7_setup`], without a pointer choice.
pub fn example7_map(eps: f64) -> Result<CPMap> {
    if !(0.0..0.5).contains(&eps) {
        return Err(Error::Argument(format!(
            "eps = {eps} out of range [0, 0.5): pointer normalization 1/(1−2ε) is singular"
        )));
    }
    let a_shape = AlgebraShape::full(2);
    let domain = a_shape.tensor(&AlgebraShape::abelian(2));
    let x0 = CMatrix::from_diagonal(&crate::CVector::from_vec(vec![
        linalg::re((1.0 - eps).sqrt()),
        linalg::re(eps.sqrt()),
    ]));
    let x1 = CMatrix::from_diagonal(&crate::CVector::from_vec(vec![
        linalg::re(eps.sqrt()),
        linalg::re((1.0 - eps).sqrt()),
    ]));
    let mut k0 = CMatrix::zeros(4, 2);
    k0.view_mut((0, 0), (2, 2)).copy_from(&x0);
    let mut k1 = CMatrix::zeros(4, 2);
    k1.view_mut((2, 0), (2, 2)).copy_from(&x1);
    CPMap::from_kraus(domain, a_shape, vec![k0, k1])
}

/// Closed form for the quality of [`example7_setup`].
pub fn example7_sigma(eps: f64) -> f64 {
    2.0 * (eps * (1.0 - eps)).sqrt() / (1.0 - 2.0 * eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpmap::cnot_unitary;
    use crate::linalg::re;
    use crate::{C64, CVector};

    fn m2() -> AlgebraShape {
        AlgebraShape::full(2)
    }

    fn psi_plus() -> State {
        State::vector(&m2(), &CVector::from_vec(vec![re(1.0), re(0.0)])).unwrap()
    }

    fn cnot_setup() -> MeasurementSetup {
        dilated_setup(&m2(), &m2(), &cnot_unitary(), &psi_plus(), &Element::pauli_z()).unwrap()
    }

    #[test]
    fn cnot_measures_sigma_z_perfectly() {
        let s = cnot_setup();
        assert!(s.measured().distance(&Element::pauli_z()).unwrap() < 1e-13);
        assert!(quality(&s).unwrap() < 1e-8);
        let v = is_perfect(&s, 1e-7).unwrap();
        assert!(v.perfect, "{v:?}");
    }

    #[test]
    fn example7_quality_matches_closed_form() {
        for &eps in &[0.0, 0.05, 0.1, 0.25, 0.45] {
            let s = example7_setup(eps).unwrap();
            assert!(s.is_unbiased(), "eps={eps}: bias {}", s.bias_defect());
            let sigma = quality(&s).unwrap();
            assert!(
                (sigma - example7_sigma(eps)).abs() < 1e-9,
                "eps={eps}: σ={sigma} vs {}",
                example7_sigma(eps)
            );
        }
        assert!(example7_setup(0.5).is_err());
    }

    #[test]
    fn example7_perfection_depends_on_eps() {
        let v = is_perfect(&example7_setup(0.0).unwrap(), 1e-9).unwrap();
        assert!(v.perfect, "{v:?}");
        let v = is_perfect(&example7_setup(0.1).unwrap(), 1e-9).unwrap();
        assert!(!v.perfect);
        assert!((v.sigma - 0.75).abs() < 1e-9, "σ(0.1) = {}", v.sigma);
    }

    #[test]
    fn identity_is_perfect_measurement_of_anything() {
        let x = Element::pauli_y();
        let s = MeasurementSetup::new(CPMap::identity(&m2()), x.clone(), x).unwrap();
        assert!(quality(&s).unwrap() < 1e-10);
        assert!(is_perfect(&s, 1e-8).unwrap().perfect);
    }

    #[test]
    fn structure_lemma_on_unitary_conjugation() {
        let t = CPMap::unitary_conjugation(&cnot_unitary()).unwrap();
        let b = Element::pauli_z().tensor(&Element::identity(&m2()));
        let reports = structure_check(&t, &b, 1e-7).unwrap();
        for r in &reports {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn structure_lemma_on_cnot_measurement() {
        let s = cnot_setup();
        let reports = structure_check(s.map(), s.pointer(), 1e-7).unwrap();
        for r in &reports {
            assert!(r.pass, "{r:?}");
        }
        // T(B²) = T(B)² = I for B = I⊗σz
        let sq = s
            .map()
            .apply_heisenberg(&s.pointer().mul(s.pointer()).unwrap())
            .unwrap();
        assert!(sq.distance(&Element::identity(&m2())).unwrap() < 1e-12);
    }

    #[test]
    fn structure_check_requires_vanishing_t_norm() {
        let s = example7_setup(0.1).unwrap();
        assert!(matches!(
            structure_check(s.map(), s.pointer(), 1e-7),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn joint_bound_pauli_targets() {
        // perfect joint measurement of σx and σy is impossible: the bound
        // forces 2σ₁σ₂ ≥ ‖[σx,σy]‖ = 2
        let effects: Vec<(f64, Element)> = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
            .iter()
            .map(|&(sx, sy)| {
                let m = Element::identity(&m2())
                    .add(&Element::pauli_x().scale_re(sx / std::f64::consts::SQRT_2))
                    .unwrap()
                    .add(&Element::pauli_y().scale_re(sy / std::f64::consts::SQRT_2))
                    .unwrap()
                    .scale_re(0.25);
                (sx, m)
            })
            .collect();
        // sanity: effects sum to identity and are PSD
        let setup = povm_measurement(&effects).unwrap();
        // pointers for the two coordinates on the outcome algebra
        let outcome_shape = setup.map().domain_shape().clone();
        let y1 = Element::diagonal(&outcome_shape, &[2f64.sqrt(), 2f64.sqrt(), -(2f64.sqrt()), -(2f64.sqrt())]).unwrap();
        let y2 = Element::diagonal(&outcome_shape, &[2f64.sqrt(), -(2f64.sqrt()), 2f64.sqrt(), -(2f64.sqrt())]).unwrap();
        let x1 = setup.map().apply_heisenberg(&y1).unwrap();
        assert!(x1.distance(&Element::pauli_x()).unwrap() < 1e-12);
        let r = joint_quality_bound(setup.map(), &y1, &y2).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.lhs - 2.0).abs() < 1e-12, "‖[σx,σy]‖ = 2");
        assert!((r.rhs - 2.0).abs() < 1e-9, "the unsharp joint POVM is extremal");
    }

    #[test]
    fn joint_bound_rejects_non_commuting_pointers() {
        let s = cnot_setup();
        let y1 = Element::identity(&m2()).tensor(&Element::pauli_z());
        let y2 = Element::identity(&m2()).tensor(&Element::pauli_x());
        assert!(matches!(
            joint_quality_bound(s.map(), &y1, &y2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn hpdelta_on_example7_curve() {
        // Δ(ε) = 1 − 2√(ε(1−ε)) certifies the disturbance; the bound then
        // reads σ(ε) ≥ (1−Δ)/√(3Δ)
        for &eps in &[0.05, 0.1, 0.2, 0.3, 0.45] {
            let s = example7_setup(eps).unwrap();
            let delta = 1.0 - 2.0 * (eps * (1.0 - eps)).sqrt();
            let r = heisenberg_principle_check(&s, delta).unwrap();
            assert!(r.pass, "eps={eps}: {r:?}");
            let closed = 2.0 * (eps * (1.0 - eps) / (3.0 - 6.0 * (eps * (1.0 - eps)).sqrt())).sqrt();
            assert!((r.lhs - closed).abs() < 1e-9, "eps={eps}");
        }
    }

    #[test]
    fn hp_exact_case_verdicts() {
        // central X passes with zero disturbance
        let id = CPMap::identity(&m2().tensor(&m2()));
        let pointer = Element::identity(&m2()).tensor(&Element::pauli_z());
        let setup = MeasurementSetup::unbiased(id, pointer)
            .unwrap()
            .with_system(SystemSide::Left(m2()));
        // measured = I⊗σz itself; as an element of A⊗B it is not central,
        // so zero disturbance must fail
        let r = heisenberg_principle_check(&setup, 0.0).unwrap();
        assert!(!r.pass);
        // a genuinely central measured observable passes
        let trivial = MeasurementSetup::unbiased(
            CPMap::identity(&m2()),
            Element::identity(&m2()).scale_re(0.5),
        )
        .unwrap();
        let r = heisenberg_principle_check(&trivial, 0.0).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn disturbance_identity_map_is_zero() {
        let shape = m2().tensor(&m2());
        let id = CPMap::unitary_conjugation(&Element::identity(&shape)).unwrap();
        // identity on A⊗B leaves the A-marginal of ρ⊗? … the identity
        // dilation: U = I, τ arbitrary
        let m = dilated_measurement(&m2(), &m2(), &Element::identity(&shape), &psi_plus()).unwrap();
        let est = estimate_disturbance(&m, &m2(), 7, 64).unwrap();
        assert!(est.lower < 1e-9, "{est:?}");
        drop(id);
    }

    #[test]
    fn disturbance_of_example7_converges() {
        let eps = 0.1f64;
        let m = example7_map(eps).unwrap();
        let est = estimate_disturbance(&m, &AlgebraShape::abelian(2), 42, 64).unwrap();
        let expected = 1.0 - 2.0 * (eps * (1.0 - eps)).sqrt();
        assert!(
            (est.lower - expected).abs() < 1e-6,
            "search reached {} vs analytic {expected}",
            est.lower
        );
    }

    #[test]
    fn disturbance_of_swap_is_total() {
        // swap with τ = ψ₊ sends every input to ψ₊ on the system marginal;
        // the input ψ₋ witnesses functional distance 2 (trace distance 1)
        let m = dilated_measurement(&m2(), &m2(), &crate::cpmap::swap_unitary(2), &psi_plus()).unwrap();
        let est = estimate_disturbance(&m, &m2(), 11, 64).unwrap();
        assert!(est.lower >= 1.0 - 1e-9, "{est:?}");
    }

    #[test]
    fn local_heisenberg_cases() {
        // A = I: δ = 0, passes for the CNOT dilation
        let s = cnot_setup();
        let r = local_heisenberg_check(&s, &Element::identity(&m2())).unwrap();
        assert!(r.pass);
        // A = σz commutes with X = σz and is preserved by the von Neumann
        // measurement; δ = 0
        let vn = von_neumann_measurement(&Element::pauli_z()).unwrap();
        let r = local_heisenberg_check(&vn, &Element::pauli_z()).unwrap();
        assert!(r.pass, "{r:?}");
        // A = σx is not preserved: precondition refused
        assert!(matches!(
            local_heisenberg_check(&vn, &Element::pauli_x()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn povm_projective_effects_are_perfect() {
        let effects = vec![(1.0, Element::proj_plus()), (-1.0, Element::proj_minus())];
        let s = povm_measurement(&effects).unwrap();
        assert!(s.measured().distance(&Element::pauli_z()).unwrap() < 1e-13);
        assert!(quality(&s).unwrap() < 1e-8);
        assert!(is_perfect(&s, 1e-7).unwrap().perfect);
    }

    #[test]
    fn povm_trivial_coin_has_unit_quality() {
        let half = Element::identity(&m2()).scale_re(0.5);
        let effects = vec![(1.0, half.clone()), (-1.0, half)];
        let s = povm_measurement(&effects).unwrap();
        assert!(s.measured().op_norm() < 1e-14);
        assert!((quality(&s).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn povm_reproduces_example7_diagonal_compression() {
        let eps = 0.1;
        let effects = vec![
            (1.0 / (1.0 - 2.0 * eps), Element::from_matrix(CMatrix::from_diagonal(
                &CVector::from_vec(vec![re(1.0 - eps), re(eps)]),
            )).unwrap()),
            (-1.0 / (1.0 - 2.0 * eps), Element::from_matrix(CMatrix::from_diagonal(
                &CVector::from_vec(vec![re(eps), re(1.0 - eps)]),
            )).unwrap()),
        ];
        let s = povm_measurement(&effects).unwrap();
        assert!(s.measured().distance(&Element::pauli_z()).unwrap() < 1e-12);
        assert!((quality(&s).unwrap() - example7_sigma(eps)).abs() < 1e-9);
    }

    #[test]
    fn pvm_equals_direct_observation_by_choi() {
        // the POVM built from spectral projections equals the direct
        // observation map f ↦ f(X)
        let x = Element::pauli_z();
        let dec = SpectralDecomposition::with_default_tol(&x).unwrap();
        let effects: Vec<(f64, Element)> = dec
            .eigenvalues()
            .iter()
            .zip(dec.projections())
            .map(|(l, p)| (*l, p.clone()))
            .collect();
        let povm = povm_measurement(&effects).unwrap();
        // direct observation: Kraus |i⟩⟨·|∘P_i over an orthonormal basis of
        // each eigenspace — equivalently the same construction; compare
        // against the von Neumann restriction instead
        let outcome_shape = povm.map().domain_shape().clone();
        let f = Element::diagonal(&outcome_shape, &[3.0, -5.0]).unwrap();
        let img = povm.map().apply_heisenberg(&f).unwrap();
        let direct = algebra::apply_function(&x, |l| if l > 0.0 { -5.0 } else { 3.0 }).unwrap();
        assert!(img.distance(&direct).unwrap() < 1e-12);
    }

    #[test]
    fn von_neumann_is_perfect_and_collapses() {
        let x = Element::pauli_z();
        let vn = von_neumann_measurement(&x).unwrap();
        assert!(quality(&vn).unwrap() < 1e-10);
        assert!(is_perfect(&vn, 1e-8).unwrap().perfect);
        // dual state restricted to the system copy is the collapsed state
        let rho = State::vector(&m2(), &CVector::from_vec(vec![re(0.6), C64::new(0.48, 0.64)])).unwrap();
        let dual = vn.map().dual_apply(&rho).unwrap();
        let collapsed = rho.collapse(&x, None).unwrap();
        let a = Element::from_matrix(CMatrix::from_row_slice(2, 2, &[
            re(0.3), C64::new(0.1, -0.7),
            C64::new(0.1, 0.7), re(-0.2),
        ])).unwrap();
        let embedded = vn.embed_system(&a).unwrap();
        let lhs = dual.expect(&embedded).unwrap();
        let rhs = collapsed.expect(&a).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        // N(A⊗I) = A for [A,X] = 0
        let commuting = Element::pauli_z().scale_re(0.7);
        let img = vn.map().apply_heisenberg(&vn.embed_system(&commuting).unwrap()).unwrap();
        assert!(img.distance(&commuting).unwrap() < 1e-13);
    }
}
