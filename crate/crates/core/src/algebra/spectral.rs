use super::Element;
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerances;
use crate::CMatrix;

/// Spectral decomposition `X = Σ λ_i P_i` of a Hermitean element, with
/// eigenvalues clustered so that near-degenerate values share one projection.
///
/// Projections are Hermitean, idempotent to [`tolerances::PROJECTION_TOL`],
/// mutually orthogonal, and sum to the identity. Eigenvalues are strictly
/// increasing after clustering.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    shape: super::AlgebraShape,
    eigenvalues: Vec<f64>,
    projections: Vec<Element>,
}

impl SpectralDecomposition {
    /// Decomposes a Hermitean element, merging eigenvalues within
    /// `cluster_tol` of each other. Pass [`SpectralDecomposition::default_cluster_tol`]
    /// unless the caller has a reason to widen the clustering.
    pub fn new(x: &Element, cluster_tol: f64) -> Result<Self> {
        x.check_hermitian()?;
        // per-block eigendata
        let mut per_block: Vec<(Vec<f64>, CMatrix)> = Vec::new();
        for b in x.blocks() {
            per_block.push(linalg::herm_eigen(b));
        }
        // global ascending eigenvalue list with (block, column) provenance
        let mut entries: Vec<(f64, usize, usize)> = Vec::new();
        for (bi, (vals, _)) in per_block.iter().enumerate() {
            for (ci, &v) in vals.iter().enumerate() {
                entries.push((v, bi, ci));
            }
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));

        // chain clustering: a new cluster starts when the gap exceeds cluster_tol
        let mut clusters: Vec<Vec<(f64, usize, usize)>> = Vec::new();
        for e in entries {
            match clusters.last_mut() {
                Some(c) if e.0 - c.last().unwrap().0 <= cluster_tol => c.push(e),
                _ => clusters.push(vec![e]),
            }
        }

        let mut eigenvalues = Vec::with_capacity(clusters.len());
        let mut projections = Vec::with_capacity(clusters.len());
        for cluster in &clusters {
            let lambda = cluster.iter().map(|e| e.0).sum::<f64>() / cluster.len() as f64;
            let mut blocks: Vec<CMatrix> = x
                .shape()
                .block_dims()
                .iter()
                .map(|&d| CMatrix::zeros(d, d))
                .collect();
            // gather this cluster's eigenvectors per block, form P = VV†,
            // then polish idempotency with one polar-correction step
            // P ← 3P² − 2P³ (quadratic convergence to the nearest projection)
            for (bi, _) in per_block.iter().enumerate() {
                let cols: Vec<usize> = cluster
                    .iter()
                    .filter(|e| e.1 == bi)
                    .map(|e| e.2)
                    .collect();
                if cols.is_empty() {
                    continue;
                }
                let vecs = &per_block[bi].1;
                let d = vecs.nrows();
                let mut v = CMatrix::zeros(d, cols.len());
                for (j, &c) in cols.iter().enumerate() {
                    v.set_column(j, &vecs.column(c));
                }
                let p = &v * v.adjoint();
                let p = (&p + p.adjoint()).scale(0.5);
                let p2 = &p * &p;
                let p3 = &p2 * &p;
                let polished = p2.scale(3.0) - p3.scale(2.0);
                blocks[bi] = (&polished + polished.adjoint()).scale(0.5);
            }
            eigenvalues.push(lambda);
            projections.push(Element::from_blocks(x.shape().clone(), blocks)?);
        }

        Ok(Self {
            shape: x.shape().clone(),
            eigenvalues,
            projections,
        })
    }

    /// Default clustering width for an element: `CLUSTER_REL·max(‖X‖, 1)`.
    pub fn default_cluster_tol(x: &Element) -> f64 {
        tolerances::CLUSTER_REL * x.op_norm().max(1.0)
    }

    /// Decomposes with the default clustering width.
    pub fn with_default_tol(x: &Element) -> Result<Self> {
        Self::new(x, Self::default_cluster_tol(x))
    }

    pub fn shape(&self) -> &super::AlgebraShape {
        &self.shape
    }

    /// Strictly increasing clustered eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// One Hermitean idempotent per eigenvalue, summing to the identity.
    pub fn projections(&self) -> &[Element] {
        &self.projections
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `Σ λ_i P_i`.
    pub fn reconstruct(&self) -> Element {
        let mut acc = Element::zero(&self.shape);
        for (l, p) in self.eigenvalues.iter().zip(&self.projections) {
            acc = acc.add(&p.scale_re(*l)).expect("same shape");
        }
        acc
    }

    /// `Σ f(λ_i) P_i`, the Gel'fand functional calculus on the spectrum.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> Element {
        let mut acc = Element::zero(&self.shape);
        for (l, p) in self.eigenvalues.iter().zip(&self.projections) {
            acc = acc.add(&p.scale_re(f(*l))).expect("same shape");
        }
        acc
    }

    /// Sum of the projections with eigenvalue in `[lo, hi]`; the zero
    /// element when the band is empty.
    pub fn band_projection(&self, lo: f64, hi: f64) -> Result<Element> {
        if lo > hi {
            return Err(Error::Argument(format!("band [{lo}, {hi}] has lo > hi")));
        }
        let mut acc = Element::zero(&self.shape);
        for (l, p) in self.eigenvalues.iter().zip(&self.projections) {
            if *l >= lo && *l <= hi {
                acc = acc.add(p).expect("same shape");
            }
        }
        Ok(acc)
    }
}

/// `f(X)` for Hermitean `X`, using the default clustering width.
pub fn apply_function(x: &Element, f: impl Fn(f64) -> f64) -> Result<Element> {
    Ok(SpectralDecomposition::with_default_tol(x)?.apply_function(f))
}

/// Spectral band projection `P([lo, hi])` of a Hermitean element.
pub fn band_projection(x: &Element, lo: f64, hi: f64) -> Result<Element> {
    SpectralDecomposition::with_default_tol(x)?.band_projection(lo, hi)
}

/// Square root of a positive semidefinite element. Eigenvalues in
/// `[−PSD_CLIP·scale, 0)` are clipped to zero; anything lower errors.
pub fn sqrt_psd(x: &Element) -> Result<Element> {
    let scale = x.op_norm().max(1.0);
    let dec = SpectralDecomposition::with_default_tol(x)?;
    let floor = -tolerances::PSD_CLIP * scale;
    if let Some(&min) = dec.eigenvalues().first() {
        if min < floor {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(dec.apply_function(|l| l.max(0.0).sqrt()))
}

/// Distinct spectra comparison: true iff the clustered eigenvalue lists of
/// `a` and `b` match pairwise within `tol` (multiplicities ignored).
pub fn spectra_match(a: &Element, b: &Element, tol: f64) -> Result<bool> {
    let sa = SpectralDecomposition::with_default_tol(a)?;
    let sb = SpectralDecomposition::with_default_tol(b)?;
    if sa.len() != sb.len() {
        return Ok(false);
    }
    Ok(sa
        .eigenvalues()
        .iter()
        .zip(sb.eigenvalues())
        .all(|(x, y)| (x - y).abs() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraShape;

    #[test]
    fn sigma_z_spectrum() {
        let dec = SpectralDecomposition::with_default_tol(&Element::pauli_z()).unwrap();
        assert_eq!(dec.eigenvalues().len(), 2);
        assert!((dec.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((dec.eigenvalues()[1] - 1.0).abs() < 1e-14);
        assert!(dec.projections()[1].distance(&Element::proj_plus()).unwrap() < 1e-14);
        assert!(dec.projections()[0].distance(&Element::proj_minus()).unwrap() < 1e-14);
    }

    #[test]
    fn identity_on_m3_has_single_projection() {
        let id = Element::identity(&AlgebraShape::full(3));
        let dec = SpectralDecomposition::with_default_tol(&id).unwrap();
        assert_eq!(dec.len(), 1);
        assert!((dec.eigenvalues()[0] - 1.0).abs() < 1e-14);
        assert!(dec.projections()[0].distance(&id).unwrap() < 1e-14);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let x = Element::from_matrix(CMatrix::from_row_slice(2, 2, &[
            linalg::re(0.0), linalg::re(1.0),
            linalg::re(0.0), linalg::re(0.0),
        ])).unwrap();
        assert!(matches!(
            SpectralDecomposition::with_default_tol(&x),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn function_calculus_on_pauli_x() {
        // σx² = I
        let sq = apply_function(&Element::pauli_x(), |l| l * l).unwrap();
        assert!(sq.distance(&Element::identity(&AlgebraShape::full(2))).unwrap() < 1e-12);
        // indicator of {+1} on σz is P₊
        let ind = apply_function(&Element::pauli_z(), |l| if l > 0.0 { 1.0 } else { 0.0 }).unwrap();
        assert!(ind.distance(&Element::proj_plus()).unwrap() < 1e-12);
    }

    #[test]
    fn band_projection_cases() {
        let z = Element::pauli_z();
        let p = band_projection(&z, 0.5, 1.5).unwrap();
        assert!(p.distance(&Element::proj_plus()).unwrap() < 1e-12);
        let full = band_projection(&z, -2.0, 2.0).unwrap();
        assert!(full.distance(&Element::identity(z.shape())).unwrap() < 1e-12);
        let none = band_projection(&z, 5.0, 6.0).unwrap();
        assert!(none.op_norm() == 0.0);
        assert!(band_projection(&z, 1.0, 0.0).is_err());
    }

    #[test]
    fn clustering_merges_near_degenerate_eigenvalues() {
        let x = Element::from_matrix(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            linalg::re(1.0),
            linalg::re(1.0 + 1e-12),
            linalg::re(2.0),
        ])))
        .unwrap();
        let dec = SpectralDecomposition::with_default_tol(&x).unwrap();
        assert_eq!(dec.len(), 2);
        let tr = dec.projections()[0].trace();
        assert!((tr.re - 2.0).abs() < 1e-12);
    }
}
