//! Numerical laboratory for quantum measurement theory on finite-dimensional
//! C*-algebras.
//!
//! A finite-dimensional C*-algebra is a direct sum of full matrix blocks
//! `M_{n_1} ⊕ … ⊕ M_{n_k}`. On top of that representation this crate builds
//! states, completely positive maps in operator-sum form, the sesquilinear
//! form `F_T(A,B) = T(A†B) − T(A†)T(B)` with its Cauchy-Schwarz calculus,
//! measurement quality, and the reduction/collapse bounds, each exposed as a
//! two-sided executable check producing a `BoundReport`.

pub mod algebra;
pub mod collapse;
pub mod cpmap;
pub mod cs;
pub mod error;
pub mod linalg;
pub mod locality;
pub mod measurement;
pub mod report;
pub mod state;
pub mod tolerances;

pub use algebra::{AlgebraShape, Element, SpectralDecomposition};
pub use cpmap::{CPMap, MapTable};
pub use error::{Error, Result};
pub use report::BoundReport;
pub use state::{ProbabilityTable, State};

/// Complex scalar used throughout: double-precision complex numbers.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix type used for block contents and Kraus operators.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex vector type used for state vectors.
pub type CVector = nalgebra::DVector<C64>;
