//! Finite-dimensional C*-algebras as direct sums of full matrix blocks,
//! with spectral calculus and center geometry.

mod center;
mod element;
mod shape;
mod spectral;

pub use center::{distance_to_center, CenterDistance};
pub use element::{Element, ElementRecord};
pub use shape::AlgebraShape;
pub use spectral::{
    apply_function, band_projection, spectra_match, sqrt_psd, SpectralDecomposition,
};
