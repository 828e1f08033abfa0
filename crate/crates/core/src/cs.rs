//! The sesquilinear form `F_T`, the T-norm, and the C*-Cauchy-Schwarz
//! inequality with its corollaries.

use crate::algebra::Element;
use crate::cpmap::CPMap;
use crate::error::Result;
use crate::linalg;
use crate::report::BoundReport;
use crate::state::State;
use crate::tolerances;

/// `F_T(A,B) = T(A†B) − T(A†)T(B)`, the multiplicativity defect of `T` as
/// an element of the codomain algebra.
pub fn cs_form(t: &CPMap, a: &Element, b: &Element) -> Result<Element> {
    t.domain_shape().check_compatible(a.shape())?;
    t.domain_shape().check_compatible(b.shape())?;
    let first = t.apply_heisenberg(&a.adjoint().mul(b)?)?;
    let second = t.apply_heisenberg(&a.adjoint())?.mul(&t.apply_heisenberg(b)?)?;
    first.sub(&second)
}

/// T-norm `‖B‖_T = ‖√F_T(B,B)‖`, equivalently the square root of the top
/// eigenvalue of `F_T(B,B)`. Satisfies `0 ≤ ‖B‖_T ≤ ‖B‖`.
pub fn t_norm(t: &CPMap, b: &Element) -> Result<f64> {
    let f = cs_form(t, b, b)?;
    let scale = b.op_norm().max(1.0);
    let eigs = f.re_part().eigenvalues()?;
    let min = eigs[0];
    if min < -tolerances::PSD_CLIP * scale * scale {
        return Err(crate::error::Error::NotPsd(min));
    }
    let top = eigs[eigs.len() - 1].max(0.0);
    Ok(top.sqrt())
}

/// C*-Cauchy-Schwarz check: `F(A,B)F(B,A) ≤ ‖F(B,B)‖·F(A,A)` in operator
/// ordering. The slack is the minimum eigenvalue of the difference,
/// normalized by `‖A‖²‖B‖²`.
pub fn check_cs_inequality(t: &CPMap, a: &Element, b: &Element) -> Result<BoundReport> {
    let fab = cs_form(t, a, b)?;
    let fba = cs_form(t, b, a)?;
    let faa = cs_form(t, a, a)?;
    let fbb = cs_form(t, b, b)?;
    let lhs = fab.mul(&fba)?;
    let rhs = faa.scale_re(fbb.op_norm());
    let diff = rhs.sub(&lhs)?.re_part();
    let slack = diff.min_eigenvalue()?;
    let scale = (a.op_norm() * b.op_norm()).powi(2);
    Ok(BoundReport::operator_bound(
        "cs",
        lhs.op_norm(),
        rhs.op_norm(),
        slack,
        scale,
        tolerances::SLACK_TOL,
    ))
}

/// Covariance inequality `|cov_ρ(A,B)|² ≤ var_ρ(A)·var_ρ(B)` for Hermitean
/// `A`, `B`.
pub fn covariance_inequality_check(rho: &State, a: &Element, b: &Element) -> Result<BoundReport> {
    let lhs = rho.covariance(a, b)?.powi(2);
    let rhs = rho.variance(a)?.max(0.0) * rho.variance(b)?.max(0.0);
    let scale = (a.op_norm() * b.op_norm()).powi(2);
    Ok(BoundReport::bound(
        "covariance-inequality",
        lhs,
        rhs,
        scale,
        tolerances::EXACT_SLACK_TOL,
    ))
}

/// Heisenberg inequality `|ρ([A,B]/2i)|² ≤ var_ρ(A)·var_ρ(B)` for Hermitean
/// `A`, `B`.
pub fn heisenberg_uncertainty_check(rho: &State, a: &Element, b: &Element) -> Result<BoundReport> {
    a.check_hermitian()?;
    b.check_hermitian()?;
    let half_comm = a.commutator(b)?.scale(linalg::re(0.5) / linalg::I);
    let lhs = rho.expect(&half_comm)?.norm_sqr();
    let rhs = rho.variance(a)?.max(0.0) * rho.variance(b)?.max(0.0);
    let scale = (a.op_norm() * b.op_norm()).powi(2);
    Ok(BoundReport::bound(
        "heisenberg-inequality",
        lhs,
        rhs,
        scale,
        tolerances::EXACT_SLACK_TOL,
    ))
}

/// Almost-multiplication bound `‖F_T(A,B)‖ ≤ ‖A‖·‖B‖_T`. When `‖B‖_T` is
/// numerically zero the report additionally asserts the exact
/// multiplication theorem `F_T(A,B) = F_T(B,A) = 0`.
pub fn almost_multiplication_bound(t: &CPMap, a: &Element, b: &Element) -> Result<BoundReport> {
    let fab = cs_form(t, a, b)?;
    let lhs = fab.op_norm();
    let b_norm_t = t_norm(t, b)?;
    let rhs = a.op_norm() * b_norm_t;
    let scale = a.op_norm() * b.op_norm();
    let mut report = BoundReport::bound("almost-multiplication", lhs, rhs, scale, tolerances::SLACK_TOL);
    if b_norm_t <= tolerances::DUST {
        let fba = cs_form(t, b, a)?;
        let defect = fab.op_norm().max(fba.op_norm());
        let tol = tolerances::EXACT_SLACK_TOL * scale.max(1.0);
        if defect > tol {
            report.pass = false;
            report = report.with_note(format!(
                "multiplication theorem defect {defect:.3e} exceeds {tol:.3e}"
            ));
        } else {
            report = report.with_note("multiplication theorem holds (‖B‖_T = 0)");
        }
    }
    Ok(report)
}

/// Real part of `F_T` on Hermitean pairs: `½(F(A,B) + F(B,A))`, which
/// equals `½(T({A,B}₊) − {T(A),T(B)}₊)`.
pub fn cs_form_re(t: &CPMap, a: &Element, b: &Element) -> Result<Element> {
    let fab = cs_form(t, a, b)?;
    let fba = cs_form(t, b, a)?;
    Ok(fab.add(&fba)?.scale_re(0.5))
}

/// Imaginary part of `F_T` on Hermitean pairs: `(F(A,B) − F(B,A))/2i`,
/// which equals `(T([A,B]) − [T(A),T(B)])/2i`.
pub fn cs_form_im(t: &CPMap, a: &Element, b: &Element) -> Result<Element> {
    let fab = cs_form(t, a, b)?;
    let fba = cs_form(t, b, a)?;
    Ok(fab.sub(&fba)?.scale(linalg::re(0.5) / linalg::I))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraShape;
    use crate::cpmap::{cnot_unitary, dilated_measurement};
    use crate::linalg::re;
    use crate::{C64, CMatrix, CVector};

    fn m2() -> AlgebraShape {
        AlgebraShape::full(2)
    }

    fn hermitian(entries: [C64; 4]) -> Element {
        Element::from_matrix(CMatrix::from_row_slice(2, 2, &entries))
            .unwrap()
            .re_part()
    }

    fn example_a() -> Element {
        hermitian([re(0.7), C64::new(0.2, 0.5), C64::new(0.2, -0.5), re(-1.1)])
    }

    fn example_b() -> Element {
        hermitian([re(-0.3), C64::new(1.0, -0.25), C64::new(1.0, 0.25), re(0.8)])
    }

    #[test]
    fn homomorphisms_have_vanishing_form() {
        let t = CPMap::unitary_conjugation(&Element::pauli_y()).unwrap();
        let f = cs_form(&t, &example_a(), &example_b()).unwrap();
        assert!(f.op_norm() < 1e-13);
        assert!(t_norm(&t, &example_b()).unwrap() < 1e-7);
        assert!(t_norm(&t, &Element::identity(&m2())).unwrap() < 1e-7);
    }

    #[test]
    fn form_of_a_state_gives_covariance_and_commutator() {
        let rho = State::vector(
            &m2(),
            &CVector::from_vec(vec![re(0.6), C64::new(0.48, 0.64)]),
        )
        .unwrap();
        let t = CPMap::from_state(&rho).unwrap();
        let a = example_a();
        let b = example_b();
        let re_f = cs_form_re(&t, &a, &b).unwrap().block(0)[(0, 0)];
        assert!((re_f.re - rho.covariance(&a, &b).unwrap()).abs() < 1e-12);
        assert!(re_f.im.abs() < 1e-12);
        let im_f = cs_form_im(&t, &a, &b).unwrap().block(0)[(0, 0)];
        let half_comm = a.commutator(&b).unwrap().scale(re(0.5) / linalg::I);
        assert!((im_f.re - rho.expect(&half_comm).unwrap().re).abs() < 1e-12);
    }

    #[test]
    fn form_vanishes_on_identity_arguments() {
        let t = dilated_measurement(
            &m2(),
            &m2(),
            &cnot_unitary(),
            &State::vector(&m2(), &CVector::from_vec(vec![re(1.0), re(0.0)])).unwrap(),
        )
        .unwrap();
        let shape = t.domain_shape().clone();
        let id = Element::identity(&shape);
        let f_ii = cs_form(&t, &id, &id).unwrap();
        assert!(f_ii.op_norm() < 1e-10);
        let b = Element::pauli_z().tensor(&Element::pauli_x());
        assert!(cs_form(&t, &id, &b).unwrap().op_norm() < 1e-10);
        assert!(cs_form(&t, &b, &id).unwrap().op_norm() < 1e-10);
    }

    #[test]
    fn form_is_conjugate_symmetric_and_psd() {
        let t = dilated_measurement(
            &m2(),
            &m2(),
            &cnot_unitary(),
            &State::maximally_mixed(&m2()),
        )
        .unwrap();
        let a = Element::pauli_x().tensor(&example_a());
        let b = Element::pauli_z().tensor(&example_b());
        let fab = cs_form(&t, &a, &b).unwrap();
        let fba = cs_form(&t, &b, &a).unwrap();
        assert!(fab.adjoint().distance(&fba).unwrap() < 1e-12);
        let fbb = cs_form(&t, &b, &b).unwrap();
        assert!(fbb.min_eigenvalue().unwrap() >= -1e-9 * b.op_norm().powi(2));
    }

    #[test]
    fn sesquilinearity() {
        let t = dilated_measurement(
            &m2(),
            &m2(),
            &cnot_unitary(),
            &State::maximally_mixed(&m2()),
        )
        .unwrap();
        let a1 = Element::pauli_x().tensor(&example_a());
        let a2 = Element::pauli_y().tensor(&example_b());
        let b = Element::pauli_z().tensor(&example_a());
        let alpha = C64::new(0.3, -0.8);
        let lhs = cs_form(&t, &a1.scale(alpha).add(&a2).unwrap(), &b).unwrap();
        let rhs = cs_form(&t, &a1, &b)
            .unwrap()
            .scale(alpha.conj())
            .add(&cs_form(&t, &a2, &b).unwrap())
            .unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn cs_inequality_on_fixed_instances() {
        let t = dilated_measurement(
            &m2(),
            &m2(),
            &cnot_unitary(),
            &State::maximally_mixed(&m2()),
        )
        .unwrap();
        let a = Element::pauli_x().tensor(&example_a());
        let b = Element::pauli_y().tensor(&example_b());
        let report = check_cs_inequality(&t, &a, &b).unwrap();
        assert!(report.pass, "{report:?}");
        // B = I: both sides vanish
        let id = Element::identity(t.domain_shape());
        let r2 = check_cs_inequality(&t, &a, &id).unwrap();
        assert!(r2.pass);
        assert!(r2.lhs < 1e-10 && r2.rhs < 1e-10);
    }

    #[test]
    fn covariance_and_heisenberg_inequalities() {
        // ψ₊ with A = σx, B = σy: equality |ρ(σz)|² = var·var = 1
        let psi = State::vector(&m2(), &CVector::from_vec(vec![re(1.0), re(0.0)])).unwrap();
        let r = heisenberg_uncertainty_check(&psi, &Element::pauli_x(), &Element::pauli_y()).unwrap();
        assert!(r.pass);
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!((r.rhs - 1.0).abs() < 1e-12);
        // A = B makes the covariance inequality an equality
        let rho = State::vector(
            &m2(),
            &CVector::from_vec(vec![re(0.6), C64::new(0.48, 0.64)]),
        )
        .unwrap();
        let a = example_a();
        let r = covariance_inequality_check(&rho, &a, &a).unwrap();
        assert!(r.pass);
        assert!((r.lhs - r.rhs).abs() < 1e-12);
        // commuting A, B: Heisenberg LHS vanishes
        let r = heisenberg_uncertainty_check(&rho, &a, &a).unwrap();
        assert!(r.lhs < 1e-14 && r.pass);
    }

    #[test]
    fn almost_multiplication_on_homomorphism() {
        let t = CPMap::unitary_conjugation(&Element::pauli_x()).unwrap();
        let r = almost_multiplication_bound(&t, &example_a(), &example_b()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.lhs < 1e-12 && r.rhs < 1e-7);
        // with exactly representable entries the T-norm is exactly zero and
        // the multiplication theorem branch fires
        let r = almost_multiplication_bound(&t, &Element::pauli_y(), &Element::pauli_z()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.note.as_deref().unwrap_or("").contains("multiplication theorem holds"));
    }
}
