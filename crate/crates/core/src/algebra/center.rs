use super::Element;
use crate::error::Result;
use crate::linalg;
use crate::{CMatrix, CVector};

/// Distance of a Hermitean element to the center of its algebra, together
/// with an extremal witness.
///
/// For `X = X_1 ⊕ … ⊕ X_k` the distance is `max_i r_i` with spectral radius
/// `r_i = (λ_max(X_i) − λ_min(X_i))/2`, and the witness
/// `A = |ψ₊⟩⟨ψ₋| + |ψ₋⟩⟨ψ₊|` built from the top/bottom eigenvectors of the
/// maximizing block attains `‖[X, A]‖ = 2·d(X,Z)·‖A‖`.
#[derive(Debug, Clone)]
pub struct CenterDistance {
    pub distance: f64,
    pub witness: Element,
}

/// Computes `d(X, Z)` and the extremal witness for a Hermitean `X`.
///
/// A zero element has distance 0 and, as a documented convention, the
/// identity on block 1 as witness.
pub fn distance_to_center(x: &Element) -> Result<CenterDistance> {
    x.check_hermitian()?;
    let shape = x.shape().clone();

    let mut best: Option<(f64, usize, CVector, CVector)> = None;
    for (bi, blk) in x.blocks().iter().enumerate() {
        let (vals, vecs) = linalg::herm_eigen(blk);
        let n = vals.len();
        let r = (vals[n - 1] - vals[0]) / 2.0;
        let lo = vecs.column(0).into_owned();
        let hi = vecs.column(n - 1).into_owned();
        if best.as_ref().map_or(true, |(rb, ..)| r > *rb) {
            best = Some((r, bi, hi, lo));
        }
    }
    let (r, bi, hi, lo) = best.expect("shape has at least one block");

    if r == 0.0 {
        // degenerate case: X is central; witness is the identity on block 1
        let mut blocks: Vec<CMatrix> = shape
            .block_dims()
            .iter()
            .map(|&d| CMatrix::zeros(d, d))
            .collect();
        blocks[0] = linalg::eye(shape.block_dims()[0]);
        return Ok(CenterDistance {
            distance: 0.0,
            witness: Element::from_blocks(shape, blocks)?,
        });
    }

    let mut blocks: Vec<CMatrix> = shape
        .block_dims()
        .iter()
        .map(|&d| CMatrix::zeros(d, d))
        .collect();
    blocks[bi] = linalg::outer(&hi, &lo) + linalg::outer(&lo, &hi);
    Ok(CenterDistance {
        distance: r,
        witness: Element::from_blocks(shape, blocks)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraShape;
    use crate::linalg::re;

    #[test]
    fn sigma_z_has_distance_one_with_tight_witness() {
        let z = Element::pauli_z();
        let cd = distance_to_center(&z).unwrap();
        assert!((cd.distance - 1.0).abs() < 1e-14);
        let lhs = z.commutator(&cd.witness).unwrap().op_norm();
        assert!((lhs - 2.0 * cd.distance * cd.witness.op_norm()).abs() < 1e-9);
    }

    #[test]
    fn central_elements_have_distance_zero() {
        let shape = AlgebraShape::new(vec![2, 3]).unwrap();
        let c = Element::central(&shape, &[re(1.5), re(-0.25)]).unwrap();
        let cd = distance_to_center(&c).unwrap();
        assert_eq!(cd.distance, 0.0);
        // documented degenerate witness: identity on block 1
        assert!((cd.witness.block(0).trace().re - 2.0).abs() < 1e-14);
        assert_eq!(cd.witness.block(1).trace().re, 0.0);
    }

    #[test]
    fn two_block_example() {
        // diag(3,1) ⊕ diag(0,−4): radii 1 and 2 → distance 2
        let shape = AlgebraShape::new(vec![2, 2]).unwrap();
        let x = Element::from_blocks(
            shape,
            vec![
                CMatrix::from_row_slice(2, 2, &[re(3.0), re(0.0), re(0.0), re(1.0)]),
                CMatrix::from_row_slice(2, 2, &[re(0.0), re(0.0), re(0.0), re(-4.0)]),
            ],
        )
        .unwrap();
        let cd = distance_to_center(&x).unwrap();
        assert!((cd.distance - 2.0).abs() < 1e-14);
        let lhs = x.commutator(&cd.witness).unwrap().op_norm();
        assert!((lhs - 2.0 * cd.distance * cd.witness.op_norm()).abs() < 1e-9);
    }
}
