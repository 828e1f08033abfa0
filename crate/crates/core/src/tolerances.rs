//! Central numerical tolerances.
//!
//! Every threshold used by the library is defined here rather than inline,
//! so that a bound check and the test asserting it always agree on the
//! meaning of "zero". Relative tolerances are multiplied by a stated scale
//! at the point of use; the scale makes slacks dimensionless.

/// Relative Hermiticity tolerance: `‖X − X†‖ ≤ HERMITICITY_REL·‖X‖`.
pub const HERMITICITY_REL: f64 = 1e-10;

/// Relative eigenvalue clustering width for spectral decompositions.
///
/// Eigenvalues closer than `CLUSTER_REL·‖X‖` are treated as degenerate and
/// merged into a single spectral projection. Band bounds and collapse
/// operators are unstable under spurious eigenvalue splitting.
pub const CLUSTER_REL: f64 = 1e-8;

/// Absolute idempotency defect allowed on spectral projections after the
/// polar correction: `‖P² − P‖ ≤ PROJECTION_TOL`.
pub const PROJECTION_TOL: f64 = 1e-12;

/// Density matrices may have eigenvalues down to `−STATE_EIG_FLOOR` and a
/// trace defect up to `STATE_TRACE_TOL` before a state is rejected.
pub const STATE_EIG_FLOOR: f64 = 1e-10;
pub const STATE_TRACE_TOL: f64 = 1e-10;

/// Unitality defect allowed on a completely positive map: `‖ΣK†K − I‖`.
pub const UNITALITY_TOL: f64 = 1e-10;

/// Minimum Choi eigenvalue above which a map counts as completely positive.
pub const CHOI_PSD_TOL: f64 = 1e-9;

/// Negative-eigenvalue clipping floor when taking square roots of positive
/// semidefinite elements; anything below is a hard error.
pub const PSD_CLIP: f64 = 1e-9;

/// Denominator dust threshold. Reduction probabilities and other
/// denominators below this are refused rather than divided by.
pub const DUST: f64 = 1e-12;

/// Pointer-gap threshold: bounds divided by `|y₁ − y₂|` are declared
/// vacuous below this gap.
pub const GAP_THRESHOLD: f64 = 1e-8;

/// Default normalized-slack tolerance for inequality checks:
/// `slack ≥ −SLACK_TOL·scale`.
pub const SLACK_TOL: f64 = 1e-8;

/// Tighter slack tolerance for checks that are exact up to rounding
/// (equalities, *-homomorphism defects, commutator identities).
pub const EXACT_SLACK_TOL: f64 = 1e-9;

/// Relative unbiasedness defect allowed on a measurement setup:
/// `‖M(Y) − X‖ ≤ BIAS_REL·‖X‖`.
pub const BIAS_REL: f64 = 1e-10;

/// Relative commutation defect under which two Hermitian elements are taken
/// to commute (joint distributions, commuting-pointer preconditions).
pub const COMMUTATION_REL: f64 = 1e-9;

/// Default dense-dimension cap for spin-chain realizations; operations
/// requiring a dense matrix refuse products of atom dimensions above this.
pub const DENSE_SIZE_GUARD: usize = 1 << 14;
