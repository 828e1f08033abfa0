//! Reduction and collapse propositions as executable two-sided bounds.
//!
//! Every operation computes an LHS and an RHS independently and reports the
//! slack; state distances are trace distances (`½‖·‖₁`), disturbance
//! hypotheses use the full functional norm.

use crate::algebra::{self, Element, SpectralDecomposition};
use crate::cpmap::CPMap;
use crate::cs;
use crate::error::{Error, Result};
use crate::linalg::{self, SplitMix};
use crate::measurement::{quality, MeasurementSetup};
use crate::report::BoundReport;
use crate::state::{trace_distance, State};
use crate::tolerances;
use crate::{C64, CMatrix, CVector};

/// Off-diagonal coherence bound between two vector states:
/// `|⟨φ₁|A|φ₂⟩| ≤ (δ + σ₁ + σ₂)/|y₁ − y₂| · ‖A‖` with `δ = ‖[A,Y]‖/‖A‖`
/// and `σᵢ² = var_{φᵢ}(Y)`.
pub fn coherence_bound(
    phi1: &State,
    phi2: &State,
    y: &Element,
    a: &Element,
) -> Result<BoundReport> {
    phi1.shape().check_compatible(phi2.shape())?;
    phi1.shape().check_compatible(y.shape())?;
    phi1.shape().check_compatible(a.shape())?;
    y.check_hermitian()?;
    a.check_hermitian()?;
    let v1 = phi1.as_vector()?;
    let v2 = phi2.as_vector()?;
    let a_norm = a.op_norm();
    if a_norm <= tolerances::DUST {
        return Ok(BoundReport::vacuous("vectorredux", "A = 0"));
    }
    let (y1, s1) = vector_moments(y, &v1);
    let (y2, s2) = vector_moments(y, &v2);
    let gap = (y1 - y2).abs();
    if gap <= tolerances::GAP_THRESHOLD {
        return Err(Error::DegenerateGap(gap));
    }
    let delta = a.commutator(y)?.op_norm() / a_norm;
    let lhs = a.sandwich(&v1, &v2).norm();
    let rhs = (delta + s1 + s2) / gap * a_norm;
    Ok(BoundReport::bound("vectorredux", lhs, rhs, a_norm, tolerances::SLACK_TOL))
}

/// Pointer mean and standard deviation in a vector state, computed from the
/// vector itself: `σ² = ‖Yv‖² − ⟨v|Y|v⟩²`.
fn vector_moments(y: &Element, v: &CVector) -> (f64, f64) {
    let yv = y.apply(v);
    let mean = v.dotc(&yv).re;
    let var = (yv.norm_squared() - mean * mean).max(0.0);
    (mean, var.sqrt())
}

/// Generalized collapse gap: the difference between measuring the
/// superposition `α·ψ₁ + β·ψ₂` and the corresponding mixture, tested on an
/// observable `A` that nearly commutes with the pointer:
/// `|M*(sup)(A) − M*(mix)(A)| ≤ (δ + σ₁ + σ₂)/|y₁ − y₂| · ‖A‖`,
/// with `yᵢ`, `σᵢ` the pointer mean and deviation in `M*(ψᵢ)`.
#[allow(clippy::too_many_arguments)]
pub fn collapse_gap(
    m: &CPMap,
    psi1: &State,
    psi2: &State,
    alpha: C64,
    beta: C64,
    y: &Element,
    a: &Element,
) -> Result<BoundReport> {
    let norm_defect = (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs();
    if norm_defect > 1e-9 {
        return Err(Error::Argument(format!(
            "|α|² + |β|² deviates from 1 by {norm_defect:.3e}"
        )));
    }
    m.domain_shape().check_compatible(y.shape())?;
    m.domain_shape().check_compatible(a.shape())?;
    y.check_hermitian()?;
    let a_norm = a.op_norm();
    if a_norm <= tolerances::DUST {
        return Ok(BoundReport::vacuous("snarklop2", "A = 0"));
    }
    let dual1 = m.dual_apply(psi1)?;
    let dual2 = m.dual_apply(psi2)?;
    let y1 = dual1.expect_re(y)?;
    let y2 = dual2.expect_re(y)?;
    let s1 = dual1.variance(y)?.max(0.0).sqrt();
    let s2 = dual2.variance(y)?.max(0.0).sqrt();
    let gap = (y1 - y2).abs();
    if gap <= tolerances::GAP_THRESHOLD {
        return Err(Error::DegenerateGap(gap));
    }
    let v1 = psi1.as_vector()?;
    let v2 = psi2.as_vector()?;
    let w = v1.map(|z| z * alpha) + v2.map(|z| z * beta);
    // the superposition functional ⟨w|·|w⟩ is used unnormalized: for
    // orthogonal ψ's it is exactly the rank-one state of α·ψ₁ + β·ψ₂
    let ma = m.apply_heisenberg(a)?;
    let lhs = (ma.sandwich(&w, &w)
        - ma.sandwich(&v1, &v1) * linalg::re(alpha.norm_sqr())
        - ma.sandwich(&v2, &v2) * linalg::re(beta.norm_sqr()))
    .norm();
    let delta = a.commutator(y)?.op_norm() / a_norm;
    let rhs = (delta + s1 + s2) / gap * a_norm;
    Ok(BoundReport::bound("snarklop2", lhs, rhs, a_norm, tolerances::SLACK_TOL))
}

/// Generalized reduction for projection pairs: when
/// `|M*(ρ')(Q) − ρ'(P)| ≤ Δ` over all states, the pointer-conditioned state
/// and the measured reduced state differ by at most
/// `√Δ/M*(ρ)(Q) · (1 + 2√Δ + √(1 + (1+2√Δ)²))`.
///
/// `Δ` is certified on a finite set (the eigenstate pairs of `P` plus 256
/// seeded random states) and rejected if falsified there; beyond that it is
/// caller-certified.
pub fn reduction_gap_projection(
    m: &CPMap,
    rho: &State,
    p: &Element,
    q: &Element,
    delta: f64,
    seed: u64,
) -> Result<BoundReport> {
    if delta < 0.0 {
        return Err(Error::Argument("Δ must be nonnegative".into()));
    }
    p.check_projection(1e-10)?;
    q.check_projection(1e-10)?;
    m.codomain_shape().check_compatible(p.shape())?;
    m.domain_shape().check_compatible(q.shape())?;

    // falsification pass over the certification set
    let mut worst: f64 = 0.0;
    for v in certification_vectors(p, seed)? {
        let state = State::vector(p.shape(), &v)?;
        let defect = (m.dual_apply(&state)?.expect_re(q)? - state.expect_re(p)?).abs();
        worst = worst.max(defect);
    }
    if worst > delta + 1e-12 {
        return Err(Error::Precondition(format!(
            "claimed Δ = {delta:.3e} falsified: certification set reaches defect {worst:.3e}"
        )));
    }

    let dual = m.dual_apply(rho)?;
    let denom = dual.expect_re(q)?;
    if denom <= tolerances::DUST {
        return Err(Error::UndefinedReduction(denom));
    }
    let lhs = trace_distance(&dual.reduce(q)?, &m.dual_apply(&rho.reduce(p)?)?)?;
    let sd = delta.sqrt();
    let rhs = sd / denom * (1.0 + 2.0 * sd + (1.0 + (1.0 + 2.0 * sd).powi(2)).sqrt());
    Ok(BoundReport::bound("redrumdelta", lhs, rhs, 1.0, tolerances::SLACK_TOL))
}

/// Eigenstates of `P` and their pairwise superpositions, plus seeded random
/// vectors: the finite certification set for a claimed disturbance level.
fn certification_vectors(p: &Element, seed: u64) -> Result<Vec<CVector>> {
    let dim = p.shape().total_dim();
    let (_, vecs) = crate::linalg::herm_eigen(&p.dense());
    let mut out: Vec<CVector> = Vec::new();
    for i in 0..dim {
        out.push(vecs.column(i).into_owned());
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let u = vecs.column(i).into_owned();
            let w = vecs.column(j).into_owned();
            out.push((&u + &w).scale(inv_sqrt2));
            out.push((&u - &w).scale(inv_sqrt2));
            out.push((&u + w.map(|z| z * crate::linalg::I)).scale(inv_sqrt2));
        }
    }
    let mut rng = SplitMix::new(seed ^ 0x9d2c_5680);
    for _ in 0..256 {
        out.push(rng.unit_vector(dim));
    }
    Ok(out)
}

/// Exact reduction after a perfect measurement: `(M*ρ)_Y = M*(ρ_X)` when
/// the setup has quality ≤ 1e−10.
pub fn perfect_reduction_check(
    m: &CPMap,
    rho: &State,
    x: &Element,
    y: &Element,
) -> Result<BoundReport> {
    require_perfect(m, x, y)?;
    let denom = rho.expect_re(&m.apply_heisenberg(&y.adjoint().mul(y)?)?)?;
    if denom <= tolerances::DUST {
        return Err(Error::UndefinedReduction(denom));
    }
    let lhs = trace_distance(&m.dual_apply(rho)?.reduce(y)?, &m.dual_apply(&rho.reduce(x)?)?)?;
    Ok(BoundReport::bound("reduction", lhs, 0.0, 1.0, tolerances::SLACK_TOL))
}

fn require_perfect(m: &CPMap, x: &Element, y: &Element) -> Result<f64> {
    let sigma = cs::t_norm(m, y)?;
    if sigma > 1e-10 {
        return Err(Error::Precondition(format!(
            "quality σ = {sigma:.3e} exceeds 1e-10; use the generalized bound instead"
        )));
    }
    let bias = m.apply_heisenberg(y)?.distance(x)?;
    let tol = tolerances::BIAS_REL * x.op_norm().max(1.0);
    if bias > tol {
        return Err(Error::Biased { defect: bias, tol });
    }
    Ok(sigma)
}

/// Exact collapse after a perfect measurement: `M*(ρ) = M*(C*(ρ))` on the
/// commutant of the pointer, verified on a finite spanning set of that
/// commutant (the pointer's spectral compressions of all matrix units).
/// The report's LHS is the worst normalized defect over the spanning set.
pub fn perfect_collapse_check(
    m: &CPMap,
    rho: &State,
    x: &Element,
    y: &Element,
    partition: Option<&[(f64, f64)]>,
) -> Result<BoundReport> {
    require_perfect(m, x, y)?;
    let collapsed = rho.collapse(x, partition)?;
    let dual_plain = m.dual_apply(rho)?;
    let dual_collapsed = m.dual_apply(&collapsed)?;
    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    for d in commutant_spanning_set(y)? {
        let norm = d.op_norm();
        if norm <= tolerances::DUST {
            continue;
        }
        let defect = (dual_plain.expect(&d)? - dual_collapsed.expect(&d)?).norm() / norm;
        worst = worst.max(defect);
        count += 1;
    }
    Ok(
        BoundReport::bound("collapse", worst, 0.0, 1.0, tolerances::SLACK_TOL).with_note(format!(
            "worst normalized defect over {count} spanning elements of Y′"
        )),
    )
}

/// A finite spanning set of the relative commutant `Y′`: the compressions
/// `Σ_j Q_j E Q_j` of all matrix units `E` by the spectral projections of
/// `Y`. Commutants of Hermitean elements are exactly computable here.
pub fn commutant_spanning_set(y: &Element) -> Result<Vec<Element>> {
    let dec = SpectralDecomposition::with_default_tol(y)?;
    let shape = y.shape().clone();
    let mut out = Vec::new();
    for (b, &dim) in shape.block_dims().iter().enumerate() {
        for k in 0..dim {
            for l in 0..dim {
                let mut blocks: Vec<CMatrix> = shape
                    .block_dims()
                    .iter()
                    .map(|&dd| CMatrix::zeros(dd, dd))
                    .collect();
                blocks[b][(k, l)] = C64::new(1.0, 0.0);
                let unit = Element::from_blocks(shape.clone(), blocks)?;
                let mut compressed = Element::zero(&shape);
                for q in dec.projections() {
                    compressed = compressed.add(&q.mul(&unit)?.mul(q)?)?;
                }
                out.push(compressed);
            }
        }
    }
    Ok(out)
}

/// Off-diagonal band bound after an unbiased measurement:
/// `‖P([x,x+ε])·M(B)·P([y,y+ε])‖ ≤ (δ + 2σ + ε)/|x − y| · ‖B‖` where the
/// bands are spectral bands of the measured observable and
/// `δ = ‖[Y,B]‖/‖B‖`. Overlapping bands make the bound vacuous, not a
/// failure.
pub fn heisenberg_collapse_band_bound(
    setup: &MeasurementSetup,
    b: &Element,
    x: f64,
    y: f64,
    eps: f64,
) -> Result<BoundReport> {
    b.check_hermitian()?;
    if eps < 0.0 {
        return Err(Error::Argument("ε must be nonnegative".into()));
    }
    let b_norm = b.op_norm();
    if b_norm <= tolerances::DUST {
        return Ok(BoundReport::vacuous("collapsedelta", "B = 0"));
    }
    if (x - y).abs() <= eps {
        return Ok(BoundReport::vacuous(
            "collapsedelta",
            "bands overlap (|x − y| ≤ ε): the bound is trivial here",
        ));
    }
    let sigma = quality(setup)?;
    let delta = setup.pointer().commutator(b)?.op_norm() / b_norm;
    let dec = SpectralDecomposition::with_default_tol(setup.measured())?;
    let p1 = dec.band_projection(x, x + eps)?;
    let p2 = dec.band_projection(y, y + eps)?;
    let mb = setup.map().apply_heisenberg(b)?;
    let lhs = p1.mul(&mb)?.mul(&p2)?.op_norm();
    let rhs = (delta + 2.0 * sigma + eps) / (x - y).abs() * b_norm;
    Ok(BoundReport::bound("collapsedelta", lhs, rhs, b_norm, tolerances::SLACK_TOL))
}

/// Almost-classical band bound: without any measurement,
/// `‖P([x,x+ε])·A·P([y,y+ε])‖ ≤ (ε + 2·d(X,Z))/|x − y| · ‖A‖`.
pub fn almost_classical_band_bound(
    a: &Element,
    x_obs: &Element,
    x: f64,
    y: f64,
    eps: f64,
) -> Result<BoundReport> {
    x_obs.check_hermitian()?;
    if eps < 0.0 {
        return Err(Error::Argument("ε must be nonnegative".into()));
    }
    let a_norm = a.op_norm();
    if a_norm <= tolerances::DUST {
        return Ok(BoundReport::vacuous("almost-classical", "A = 0"));
    }
    if (x - y).abs() <= eps {
        return Ok(BoundReport::vacuous(
            "almost-classical",
            "bands overlap (|x − y| ≤ ε): the bound is trivial here",
        ));
    }
    let d = algebra::distance_to_center(x_obs)?.distance;
    let dec = SpectralDecomposition::with_default_tol(x_obs)?;
    let p1 = dec.band_projection(x, x + eps)?;
    let p2 = dec.band_projection(y, y + eps)?;
    let lhs = p1.mul(a)?.mul(&p2)?.op_norm();
    let rhs = (eps + 2.0 * d) / (x - y).abs() * a_norm;
    Ok(BoundReport::bound("almost-classical", lhs, rhs, a_norm, tolerances::SLACK_TOL))
}

/// The three generalized-reduction bounds for one setup and state: the main
/// ratio `(var_{M*ρ}(Y) − var_ρ(X))/M*(ρ)(Y†Y)`, the variance-denominator
/// corollary, and (for projection pointers) the `σ/√(p(1−p))` corollary.
/// Bounds whose denominators are dust are reported vacuous.
pub fn generalized_reduction_bound(
    setup: &MeasurementSetup,
    rho: &State,
) -> Result<Vec<BoundReport>> {
    if !setup.is_unbiased() {
        return Err(Error::Biased {
            defect: setup.bias_defect(),
            tol: tolerances::BIAS_REL * setup.measured().op_norm().max(1.0),
        });
    }
    let m = setup.map();
    let y = setup.pointer();
    let x = setup.measured();
    let dual = m.dual_apply(rho)?;

    let rho_x = {
        let denom = rho.expect_re(&x.adjoint().mul(x)?)?;
        if denom <= tolerances::DUST {
            return Ok(vec![BoundReport::vacuous(
                "appred-main",
                "ρ(X†X) is dust: ρ_X undefined",
            )]);
        }
        rho.reduce(x)?
    };
    let denom_main = dual.expect_re(&y.adjoint().mul(y)?)?;
    if denom_main <= tolerances::DUST {
        return Ok(vec![BoundReport::vacuous(
            "appred-main",
            "M*(ρ)(Y†Y) is dust: (M*ρ)_Y undefined",
        )]);
    }
    let lhs = trace_distance(&dual.reduce(y)?, &m.dual_apply(&rho_x)?)?;

    let excess = (dual.variance(y)? - rho.variance(x)?).max(0.0);
    let mut reports = Vec::new();
    let r_main = excess / denom_main;
    let sq = r_main.sqrt();
    reports.push(BoundReport::bound(
        "appred-main",
        lhs,
        2.0 * sq * (1.0 + sq),
        1.0,
        tolerances::SLACK_TOL,
    ));

    let var_y = dual.variance(y)?;
    if var_y > tolerances::DUST {
        let r_var = (excess / var_y).min(1.0);
        let sq = r_var.sqrt();
        reports.push(BoundReport::bound(
            "appred-variance",
            lhs,
            2.0 * sq * (1.0 + sq),
            1.0,
            tolerances::SLACK_TOL,
        ));
    } else {
        reports.push(BoundReport::vacuous(
            "appred-variance",
            "var_{M*ρ}(Y) is dust",
        ));
    }

    if y.check_projection(1e-10).is_ok() {
        let p = dual.expect_re(y)?;
        let pq = p * (1.0 - p);
        if pq > tolerances::DUST {
            let sigma = quality(setup)?;
            let r = sigma / pq.sqrt();
            reports.push(BoundReport::bound(
                "appred-projection",
                lhs,
                2.0 * r * (1.0 + r),
                1.0,
                tolerances::SLACK_TOL,
            ));
        } else {
            reports.push(BoundReport::vacuous(
                "appred-projection",
                "p(1−p) is dust for the projection pointer",
            ));
        }
    }
    Ok(reports)
}

/// Pointer-erasure check: measured defects of the three hypotheses of the
/// erasure proposition, and the certified conclusion bound on
/// `‖[D, Y₁-embedded]‖` they imply.
#[derive(Debug, Clone)]
pub struct CruxReport {
    /// `‖[Y₁, Y₂]‖` in the observer algebra.
    pub commutation_defect: f64,
    /// Quality `‖Y₂‖_M` of the `D`-measurement.
    pub sigma2: f64,
    /// `‖M(Y₂) − D‖`: how well the map measures the claimed `D`.
    pub bias_defect: f64,
    /// `‖M(Y₁) − (I⊗Y₁)‖`: how well the first pointer is preserved.
    pub preservation_defect: f64,
    pub report: BoundReport,
}

impl CruxReport {
    /// Names of the hypotheses violated at the given tolerance.
    pub fn failing_preconditions(&self, tol: f64) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.commutation_defect > tol {
            out.push("pointers commute");
        }
        if self.sigma2 > tol {
            out.push("σ₂ = 0 (perfect D-measurement)");
        }
        if self.bias_defect > tol {
            out.push("M(Y₂) = D");
        }
        if self.preservation_defect > tol {
            out.push("M(Y₁) = I⊗Y₁ (first pointer preserved)");
        }
        out
    }
}

/// If `M` measures `D` perfectly with pointer `Y₂` while preserving a
/// commuting pointer `Y₁` (as `y1_embedded` in the codomain), then `D`
/// commutes with the embedded `Y₁`. All hypothesis defects are measured and
/// folded into the certified right-hand side
/// `2·bias·‖Y₁ᵉ‖ + 2·‖M(Y₂)‖·preserve + ‖[Y₁,Y₂]‖ + 2σ₁σ₂`.
pub fn pointer_erasure_check(
    m: &CPMap,
    y1: &Element,
    y2: &Element,
    d: &Element,
    y1_embedded: &Element,
) -> Result<CruxReport> {
    m.domain_shape().check_compatible(y1.shape())?;
    m.domain_shape().check_compatible(y2.shape())?;
    m.codomain_shape().check_compatible(d.shape())?;
    m.codomain_shape().check_compatible(y1_embedded.shape())?;
    let commutation_defect = y1.commutator(y2)?.op_norm();
    let sigma2 = cs::t_norm(m, y2)?;
    let sigma1 = cs::t_norm(m, y1)?;
    let my2 = m.apply_heisenberg(y2)?;
    let my1 = m.apply_heisenberg(y1)?;
    let bias_defect = my2.distance(d)?;
    let preservation_defect = my1.distance(y1_embedded)?;

    let lhs = d.commutator(y1_embedded)?.op_norm();
    let scale = (d.op_norm() * y1_embedded.op_norm()).max(1.0);
    let rhs = 2.0 * bias_defect * y1_embedded.op_norm()
        + 2.0 * my2.op_norm() * preservation_defect
        + commutation_defect
        + 2.0 * sigma1 * sigma2
        + tolerances::EXACT_SLACK_TOL * scale;
    let report = BoundReport::bound("crux", lhs, rhs, scale, tolerances::EXACT_SLACK_TOL);
    Ok(CruxReport {
        commutation_defect,
        sigma2,
        bias_defect,
        preservation_defect,
        report,
    })
}
