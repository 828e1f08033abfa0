use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite-dimensional C*-algebra `M_{n_1} ⊕ … ⊕ M_{n_k}`, recorded as the
/// ordered list of full-matrix-block dimensions.
///
/// Two shapes are compatible for arithmetic iff their dimension lists are
/// equal. The represented Hilbert space is the direct sum of the block
/// spaces and has dimension [`AlgebraShape::total_dim`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraShape {
    block_dims: Vec<usize>,
}

impl AlgebraShape {
    /// Builds a shape from block dimensions. Every dimension must be ≥ 1 and
    /// the list non-empty.
    pub fn new(block_dims: impl Into<Vec<usize>>) -> Result<Self> {
        let block_dims = block_dims.into();
        if block_dims.is_empty() {
            return Err(Error::Argument("shape needs at least one block".into()));
        }
        if block_dims.iter().any(|&d| d == 0) {
            return Err(Error::Argument("block dimensions must be ≥ 1".into()));
        }
        Ok(Self { block_dims })
    }

    /// The full matrix algebra `M_n`.
    pub fn full(n: usize) -> Self {
        Self::new(vec![n]).expect("n ≥ 1")
    }

    /// The abelian algebra of diagonal `k × k` matrices, `C^k`.
    pub fn abelian(k: usize) -> Self {
        Self::new(vec![1; k]).expect("k ≥ 1")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Dimension of the represented Hilbert space, `Σ n_i`.
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// Linear dimension of the algebra itself, `Σ n_i²`.
    pub fn algebra_dim(&self) -> usize {
        self.block_dims.iter().map(|d| d * d).sum()
    }

    /// Offset of block `b` inside the represented Hilbert space.
    pub fn block_offset(&self, b: usize) -> usize {
        self.block_dims[..b].iter().sum()
    }

    /// Errors unless `self` and `other` have identical block structure.
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{self}"), format!("{other}")))
        }
    }

    /// Tensor product shape: blocks `(i, j)` in lexicographic order with
    /// dimensions `n_i·m_j`, matching the Kronecker convention of
    /// [`crate::algebra::Element::tensor`].
    pub fn tensor(&self, other: &Self) -> Self {
        let dims: Vec<usize> = self
            .block_dims
            .iter()
            .flat_map(|&a| other.block_dims.iter().map(move |&b| a * b))
            .collect();
        Self { block_dims: dims }
    }

    /// Whether the algebra is abelian (all blocks one-dimensional).
    pub fn is_abelian(&self) -> bool {
        self.block_dims.iter().all(|&d| d == 1)
    }
}

impl std::fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.block_dims.iter().map(|d| format!("M{d}")).collect();
        write!(f, "{}", parts.join("⊕"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_zero_blocks() {
        assert!(AlgebraShape::new(vec![]).is_err());
        assert!(AlgebraShape::new(vec![2, 0]).is_err());
    }

    #[test]
    fn dimensions() {
        let s = AlgebraShape::new(vec![2, 3]).unwrap();
        assert_eq!(s.total_dim(), 5);
        assert_eq!(s.algebra_dim(), 13);
        assert_eq!(s.block_offset(1), 2);
        assert!(!s.is_abelian());
        assert!(AlgebraShape::abelian(4).is_abelian());
    }

    #[test]
    fn tensor_shape_is_lexicographic() {
        let a = AlgebraShape::full(2);
        let b = AlgebraShape::abelian(2);
        assert_eq!(a.tensor(&b).block_dims(), &[2, 2]);
        let c = AlgebraShape::new(vec![2, 3]).unwrap();
        assert_eq!(c.tensor(&a).block_dims(), &[4, 6]);
    }
}
