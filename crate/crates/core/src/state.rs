//! States as density elements, induced probability distributions, and the
//! reduced/collapsed state operations.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraShape, Element, ElementRecord, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerances;
use crate::{C64, CVector};

/// A state on a finite-dimensional C*-algebra, realized as a positive
/// trace-one density element acting by trace pairing: `ρ(A) = tr(ρ_d·A)`.
#[derive(Debug, Clone)]
pub struct State {
    density: Element,
}

impl State {
    /// Wraps a density element, validating Hermiticity, positivity down to
    /// `−STATE_EIG_FLOOR` and unit trace within `STATE_TRACE_TOL`.
    pub fn from_density(density: Element) -> Result<Self> {
        density
            .check_hermitian()
            .map_err(|e| Error::InvalidState(e.to_string()))?;
        let min = density.min_eigenvalue()?;
        if min < -tolerances::STATE_EIG_FLOOR {
            return Err(Error::InvalidState(format!(
                "density min eigenvalue {min:.3e}"
            )));
        }
        let tr = density.trace();
        if (tr.re - 1.0).abs() > tolerances::STATE_TRACE_TOL || tr.im.abs() > tolerances::STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!("density trace {tr}")));
        }
        Ok(Self { density })
    }

    /// Rank-one (vector) state from a vector of the represented space. The
    /// vector is normalized and its global phase fixed, so equal rays give
    /// identical densities.
    pub fn vector(shape: &AlgebraShape, v: &CVector) -> Result<Self> {
        if v.len() != shape.total_dim() {
            return Err(Error::Argument(format!(
                "vector length {} does not match total dimension {}",
                v.len(),
                shape.total_dim()
            )));
        }
        let n = v.norm();
        if n < tolerances::DUST {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = linalg::fix_phase(&v.unscale(n), 0.0);
        let dense = linalg::outer(&v, &v);
        let (density, _) = Element::from_dense_pinched(shape, &dense)?;
        Ok(Self { density })
    }

    /// The maximally mixed (normalized trace) state.
    pub fn maximally_mixed(shape: &AlgebraShape) -> Self {
        let d = shape.total_dim() as f64;
        Self {
            density: Element::identity(shape).scale_re(1.0 / d),
        }
    }

    /// Convex combination `Σ w_i ρ_i`; the weights must be a probability
    /// vector.
    pub fn mixture(parts: &[(f64, &State)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Argument("empty mixture".into()));
        }
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if parts.iter().any(|(w, _)| *w < -tolerances::DUST) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::Argument("mixture weights must be a probability vector".into()));
        }
        let shape = parts[0].1.shape().clone();
        let mut acc = Element::zero(&shape);
        for (w, s) in parts {
            acc = acc.add(&s.density.scale_re(*w))?;
        }
        State::from_density(acc)
    }

    pub fn shape(&self) -> &AlgebraShape {
        self.density.shape()
    }

    pub fn density(&self) -> &Element {
        &self.density
    }

    /// `ρ(A) = tr(ρ_d·A)`.
    pub fn expect(&self, a: &Element) -> Result<C64> {
        self.shape().check_compatible(a.shape())?;
        Ok(self.density.mul(a)?.trace())
    }

    /// Expectation of a Hermitean element, as a real number.
    pub fn expect_re(&self, a: &Element) -> Result<f64> {
        Ok(self.expect(a)?.re)
    }

    /// `var_ρ(A) = ρ(A†A) − |ρ(A)|²`; for Hermitean `A` this is the usual
    /// variance and is nonnegative up to rounding.
    pub fn variance(&self, a: &Element) -> Result<f64> {
        let second = self.expect(&a.adjoint().mul(a)?)?.re;
        let first = self.expect(a)?;
        Ok(second - first.norm_sqr())
    }

    /// Symmetrized covariance of two Hermitean elements:
    /// `cov_ρ(A,B) = ρ(½(AB+BA)) − ρ(A)ρ(B)`.
    pub fn covariance(&self, a: &Element, b: &Element) -> Result<f64> {
        a.check_hermitian()?;
        b.check_hermitian()?;
        let sym = self.expect(&a.anti_commutator(b)?.scale_re(0.5))?.re;
        Ok(sym - self.expect_re(a)? * self.expect_re(b)?)
    }

    /// Extracts the defining vector of a rank-one state, phase-fixed.
    /// Errors with the second eigenvalue when the state is not rank-one.
    pub fn as_vector(&self) -> Result<CVector> {
        let dense = self.density.dense();
        let (vals, vecs) = linalg::herm_eigen(&dense);
        let n = vals.len();
        let second = if n > 1 { vals[n - 2] } else { 0.0 };
        if second.abs() > 1e-9 || (vals[n - 1] - 1.0).abs() > 1e-9 {
            return Err(Error::NotVectorState(second));
        }
        Ok(linalg::fix_phase(&vecs.column(n - 1).into_owned(), 0.0))
    }

    /// Reduced state `ρ_Y(A) = ρ(Y†AY)/ρ(Y†Y)`, defined when the
    /// denominator exceeds the dust threshold.
    pub fn reduce(&self, y: &Element) -> Result<State> {
        self.shape().check_compatible(y.shape())?;
        let denom = self.expect(&y.adjoint().mul(y)?)?.re;
        if denom <= tolerances::DUST {
            return Err(Error::UndefinedReduction(denom));
        }
        let density = y
            .mul(&self.density)?
            .mul(&y.adjoint())?
            .scale_re(1.0 / denom);
        // symmetrize away rounding before re-validating
        State::from_density(density.re_part())
    }

    /// Collapsed state `C*(ρ)`: density conjugated by the complete family of
    /// spectral projections of `x` (default partition: one singleton per
    /// distinct eigenvalue), or by the band projections of an explicit
    /// partition into disjoint closed intervals covering the spectrum.
    pub fn collapse(&self, x: &Element, partition: Option<&[(f64, f64)]>) -> Result<State> {
        self.shape().check_compatible(x.shape())?;
        let dec = SpectralDecomposition::with_default_tol(x)?;
        let projections: Vec<Element> = match partition {
            None => dec.projections().to_vec(),
            Some(intervals) => {
                for (lo, hi) in intervals {
                    if lo > hi {
                        return Err(Error::Argument(format!("interval [{lo}, {hi}] has lo > hi")));
                    }
                }
                for (i, a) in intervals.iter().enumerate() {
                    for b in intervals.iter().skip(i + 1) {
                        if a.0.max(b.0) <= a.1.min(b.1) {
                            return Err(Error::Argument(format!(
                                "intervals [{}, {}] and [{}, {}] overlap",
                                a.0, a.1, b.0, b.1
                            )));
                        }
                    }
                }
                for &l in dec.eigenvalues() {
                    if !intervals.iter().any(|(lo, hi)| l >= *lo && l <= *hi) {
                        return Err(Error::Argument(format!(
                            "partition does not cover eigenvalue {l}"
                        )));
                    }
                }
                intervals
                    .iter()
                    .map(|(lo, hi)| dec.band_projection(*lo, *hi))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        let mut acc = Element::zero(self.shape());
        for p in &projections {
            acc = acc.add(&p.mul(&self.density)?.mul(p)?)?;
        }
        State::from_density(acc.re_part())
    }
}

/// Partial trace over the right tensor factor: restricts a state on
/// `A ⊗ B` to the subalgebra `A ⊗ I`, in the blockwise Kronecker ordering
/// of [`Element::tensor`].
pub fn partial_trace_right(
    rho: &State,
    a_shape: &AlgebraShape,
    b_shape: &AlgebraShape,
) -> Result<State> {
    let ab = a_shape.tensor(b_shape);
    ab.check_compatible(rho.shape())?;
    let kb = b_shape.num_blocks();
    let mut blocks: Vec<crate::CMatrix> = a_shape
        .block_dims()
        .iter()
        .map(|&d| crate::CMatrix::zeros(d, d))
        .collect();
    for (i, &ni) in a_shape.block_dims().iter().enumerate() {
        for (j, &mj) in b_shape.block_dims().iter().enumerate() {
            let blk = rho.density().block(i * kb + j);
            for a in 0..ni {
                for a2 in 0..ni {
                    let mut s = C64::new(0.0, 0.0);
                    for b in 0..mj {
                        s += blk[(a * mj + b, a2 * mj + b)];
                    }
                    blocks[i][(a, a2)] += s;
                }
            }
        }
    }
    State::from_density(Element::from_blocks(a_shape.clone(), blocks)?.re_part())
}

/// Trace distance `½‖ρ₁ − ρ₂‖₁` between two states; this is the
/// total-variation normalization, in which a pair of orthogonal pure states
/// has distance 1.
pub fn trace_distance(a: &State, b: &State) -> Result<f64> {
    a.shape().check_compatible(b.shape())?;
    Ok(0.5 * a.density().sub(b.density())?.trace_norm())
}

/// Norm of a Hermitean functional given by a density difference, i.e. the
/// full dual norm `‖ρ₁ − ρ₂‖ = ‖δ‖₁` (twice the trace distance). This is the
/// norm appearing in the disturbance hypothesis of the Heisenberg-principle
/// bound.
pub fn functional_distance(a: &State, b: &State) -> Result<f64> {
    a.shape().check_compatible(b.shape())?;
    Ok(a.density().sub(b.density())?.trace_norm())
}

/// A finite probability table over measurement outcomes.
///
/// Outcomes are real numbers (or pairs, for joint tables) with probabilities
/// that are nonnegative up to rounding and sum to one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbabilityTable<K> {
    pub outcomes: Vec<(K, f64)>,
}

impl<K> ProbabilityTable<K> {
    fn validate(outcomes: Vec<(K, f64)>) -> Result<Self> {
        if outcomes.iter().any(|(_, p)| *p < -1e-12) {
            return Err(Error::InvalidState("negative probability".into()));
        }
        let total: f64 = outcomes.iter().map(|(_, p)| *p).sum();
        if (total - 1.0).abs() > tolerances::STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { outcomes })
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.outcomes.iter().map(|(_, p)| *p)
    }
}

impl ProbabilityTable<f64> {
    /// Expected value `Σ λ·p(λ)`.
    pub fn mean(&self) -> f64 {
        self.outcomes.iter().map(|(l, p)| l * p).sum()
    }

    /// Variance under the table.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.outcomes.iter().map(|(l, p)| (l - m).powi(2) * p).sum()
    }
}

/// Distribution of the Hermitean `x` under `ρ`: probability `ρ(P_i)` per
/// clustered eigenvalue `λ_i`.
pub fn induced_distribution(rho: &State, x: &Element) -> Result<ProbabilityTable<f64>> {
    let dec = SpectralDecomposition::with_default_tol(x)?;
    let outcomes = dec
        .eigenvalues()
        .iter()
        .zip(dec.projections())
        .map(|(l, p)| Ok((*l, rho.expect(p)?.re)))
        .collect::<Result<Vec<_>>>()?;
    ProbabilityTable::validate(outcomes)
}

/// Joint distribution `ℙ(λ_i, μ_j) = ρ(P_i Q_j)` of two commuting Hermitean
/// elements. Non-commuting inputs are refused: no such table exists.
pub fn joint_distribution(
    rho: &State,
    x: &Element,
    y: &Element,
) -> Result<ProbabilityTable<(f64, f64)>> {
    x.shape().check_compatible(y.shape())?;
    let defect = x.commutator(y)?.op_norm();
    let tol = tolerances::COMMUTATION_REL * (x.op_norm() * y.op_norm()).max(1.0);
    if defect > tol {
        return Err(Error::NonCommuting { defect, tol });
    }
    let dx = SpectralDecomposition::with_default_tol(x)?;
    let dy = SpectralDecomposition::with_default_tol(y)?;
    let mut outcomes = Vec::with_capacity(dx.len() * dy.len());
    for (l, p) in dx.eigenvalues().iter().zip(dx.projections()) {
        for (m, q) in dy.eigenvalues().iter().zip(dy.projections()) {
            outcomes.push(((*l, *m), rho.expect(&p.mul(q)?)?.re));
        }
    }
    ProbabilityTable::validate(outcomes)
}

/// Marginals of a joint table, summed over the other coordinate.
pub fn marginals(
    table: &ProbabilityTable<(f64, f64)>,
) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let mut first: Vec<(f64, f64)> = Vec::new();
    let mut second: Vec<(f64, f64)> = Vec::new();
    for &((x, y), p) in &table.outcomes {
        match first.iter_mut().find(|(v, _)| *v == x) {
            Some((_, q)) => *q += p,
            None => first.push((x, p)),
        }
        match second.iter_mut().find(|(v, _)| *v == y) {
            Some((_, q)) => *q += p,
            None => second.push((y, p)),
        }
    }
    (first, second)
}

/// Serialized form of a state: its density record plus a marker.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateRecord {
    pub state: bool,
    #[serde(flatten)]
    pub density: ElementRecord,
}

impl State {
    pub fn to_record(&self) -> StateRecord {
        StateRecord {
            state: true,
            density: self.density.to_record(),
        }
    }

    pub fn from_record(rec: &StateRecord) -> Result<Self> {
        if !rec.state {
            return Err(Error::Argument("missing state marker".into()));
        }
        State::from_density(Element::from_record(&rec.density)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;

    fn ket(values: &[C64]) -> CVector {
        CVector::from_vec(values.to_vec())
    }

    fn psi_plus() -> State {
        State::vector(&AlgebraShape::full(2), &ket(&[re(1.0), re(0.0)])).unwrap()
    }

    fn superposition(alpha: f64, beta: f64) -> State {
        State::vector(&AlgebraShape::full(2), &ket(&[re(alpha), re(beta)])).unwrap()
    }

    #[test]
    fn maximally_mixed_pauli_expectation_vanishes() {
        let rho = State::maximally_mixed(&AlgebraShape::full(2));
        assert!(rho.expect(&Element::pauli_z()).unwrap().norm() < 1e-15);
        assert!((rho.expect(&Element::identity(rho.shape())).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenstate_has_zero_variance() {
        assert!(psi_plus().variance(&Element::pauli_z()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn induced_distribution_of_superposition() {
        // amplitudes (α, β) give probabilities |α|², |β|² on σz = ±1
        let a = 0.6;
        let b = 0.8;
        let table = induced_distribution(&superposition(a, b), &Element::pauli_z()).unwrap();
        assert_eq!(table.outcomes.len(), 2);
        assert!((table.outcomes[0].0 + 1.0).abs() < 1e-12);
        assert!((table.outcomes[0].1 - b * b).abs() < 1e-12);
        assert!((table.outcomes[1].1 - a * a).abs() < 1e-12);
        // mean matches the expectation
        let mean = table.mean();
        let expect = superposition(a, b).expect_re(&Element::pauli_z()).unwrap();
        assert!((mean - expect).abs() < 1e-12);
    }

    #[test]
    fn plus_x_state_is_unbiased_on_sigma_z() {
        let s = superposition(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
        let table = induced_distribution(&s, &Element::pauli_z()).unwrap();
        for (_, p) in &table.outcomes {
            assert!((p - 0.5).abs() < 1e-12);
        }
        let tid = induced_distribution(&s, &Element::identity(s.shape())).unwrap();
        assert_eq!(tid.outcomes.len(), 1);
        assert!((tid.outcomes[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_distribution_product_eigenstate() {
        let shape = AlgebraShape::full(4);
        let x = Element::pauli_z().tensor(&Element::identity(&AlgebraShape::full(2)));
        let y = Element::identity(&AlgebraShape::full(2)).tensor(&Element::pauli_z());
        let rho = State::vector(&shape, &ket(&[re(1.0), re(0.0), re(0.0), re(0.0)])).unwrap();
        let table = joint_distribution(&rho, &x, &y).unwrap();
        for &((a, b), p) in &table.outcomes {
            let expected = if a > 0.0 && b > 0.0 { 1.0 } else { 0.0 };
            assert!((p - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_distribution_bell_state() {
        // independent oracle: direct 4×4 trace computation of ρ(P_i Q_j)
        let shape = AlgebraShape::full(4);
        let bell = State::vector(
            &shape,
            &ket(&[re(std::f64::consts::FRAC_1_SQRT_2), re(0.0), re(0.0), re(std::f64::consts::FRAC_1_SQRT_2)]),
        )
        .unwrap();
        let x = Element::pauli_z().tensor(&Element::identity(&AlgebraShape::full(2)));
        let y = Element::identity(&AlgebraShape::full(2)).tensor(&Element::pauli_z());
        let table = joint_distribution(&bell, &x, &y).unwrap();
        for &((a, b), p) in &table.outcomes {
            let expected = if (a - b).abs() < 1e-12 { 0.5 } else { 0.0 };
            assert!((p - expected).abs() < 1e-12, "entry ({a},{b}) = {p}");
        }
        let (mx, my) = marginals(&table);
        for (_, p) in mx.iter().chain(my.iter()) {
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_distribution_rejects_non_commuting() {
        let rho = State::maximally_mixed(&AlgebraShape::full(2));
        assert!(matches!(
            joint_distribution(&rho, &Element::pauli_x(), &Element::pauli_z()),
            Err(Error::NonCommuting { .. })
        ));
    }

    #[test]
    fn reduction_jumps_to_eigenstate() {
        let rho = superposition(0.6, 0.8);
        let reduced = rho.reduce(&Element::proj_plus()).unwrap();
        assert!(trace_distance(&reduced, &psi_plus()).unwrap() < 1e-12);
        // Y = I leaves the state unchanged
        let same = rho.reduce(&Element::identity(rho.shape())).unwrap();
        assert!(trace_distance(&same, &rho).unwrap() < 1e-12);
    }

    #[test]
    fn reduction_on_null_outcome_is_undefined() {
        assert!(matches!(
            psi_plus().reduce(&Element::proj_minus()),
            Err(Error::UndefinedReduction(_))
        ));
    }

    #[test]
    fn collapse_kills_off_diagonals() {
        let a = 0.6;
        let b = 0.8;
        let rho = superposition(a, b);
        let collapsed = rho.collapse(&Element::pauli_z(), None).unwrap();
        let d = collapsed.density();
        assert!((d.block(0)[(0, 0)].re - a * a).abs() < 1e-12);
        assert!((d.block(0)[(1, 1)].re - b * b).abs() < 1e-12);
        assert!(d.block(0)[(0, 1)].norm() < 1e-12);
        // idempotence
        let twice = collapsed.collapse(&Element::pauli_z(), None).unwrap();
        assert!(trace_distance(&twice, &collapsed).unwrap() < 1e-12);
    }

    #[test]
    fn collapse_on_central_element_is_identity() {
        let shape = AlgebraShape::new(vec![2, 2]).unwrap();
        let x = Element::central(&shape, &[re(1.0), re(-1.0)]).unwrap();
        let v = ket(&[re(0.5), re(0.5), re(0.5), re(0.5)]);
        let rho = State::vector(&shape, &v).unwrap();
        let collapsed = rho.collapse(&x, None).unwrap();
        assert!(trace_distance(&collapsed, &rho).unwrap() < 1e-12);
    }

    #[test]
    fn collapse_rejects_overlapping_intervals() {
        let rho = superposition(0.6, 0.8);
        let partition = [(-1.5, 0.0), (0.0, 1.5)];
        assert!(rho.collapse(&Element::pauli_z(), Some(&partition)).is_err());
    }

    #[test]
    fn collapse_equals_probability_weighted_reductions() {
        let rho = superposition(0.6, 0.8);
        let x = Element::pauli_z();
        let collapsed = rho.collapse(&x, None).unwrap();
        let dec = SpectralDecomposition::with_default_tol(&x).unwrap();
        let mut acc = Element::zero(rho.shape());
        for p in dec.projections() {
            let w = rho.expect(p).unwrap().re;
            if w <= tolerances::DUST {
                continue; // zero-probability terms are skipped
            }
            acc = acc.add(&rho.reduce(p).unwrap().density().scale_re(w)).unwrap();
        }
        assert!(acc.distance(collapsed.density()).unwrap() < 1e-10);
    }

    #[test]
    fn conditioning_identity_for_commuting_observables() {
        // conditional distribution of B given [X in V] equals the
        // distribution of B under the reduced state
        let shape = AlgebraShape::full(4);
        let i2 = Element::identity(&AlgebraShape::full(2));
        let x = Element::pauli_z().tensor(&i2);
        let b = i2.tensor(&Element::pauli_x());
        let v = ket(&[re(0.5), C64::new(0.1, 0.3), re(0.5), C64::new(0.2, -0.6)]);
        let rho = State::vector(&shape, &v).unwrap();

        let joint = joint_distribution(&rho, &x, &b).unwrap();
        let p_plus: f64 = joint
            .outcomes
            .iter()
            .filter(|((xv, _), _)| *xv > 0.0)
            .map(|(_, p)| *p)
            .sum();
        let p = SpectralDecomposition::with_default_tol(&x)
            .unwrap()
            .band_projection(0.5, 1.5)
            .unwrap();
        let reduced = rho.reduce(&p).unwrap();
        let cond_table = induced_distribution(&reduced, &b).unwrap();
        for ((xv, bv), pj) in &joint.outcomes {
            if *xv < 0.0 {
                continue;
            }
            let cond = pj / p_plus;
            let direct = cond_table
                .outcomes
                .iter()
                .find(|(v, _)| (v - bv).abs() < 1e-9)
                .map(|(_, q)| *q)
                .unwrap_or(0.0);
            assert!((cond - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn state_record_round_trip() {
        let rho = superposition(0.6, 0.8);
        let json = serde_json::to_string(&rho.to_record()).unwrap();
        assert!(json.contains("\"state\":true"));
        let back = State::from_record(&serde_json::from_str(&json).unwrap()).unwrap();
        assert!(trace_distance(&rho, &back).unwrap() == 0.0);
    }
}
