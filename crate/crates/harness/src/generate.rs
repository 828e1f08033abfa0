//! Seeded random instance generators: elements, states, unitaries,
//! completely positive maps and dilated measurement setups.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use qmlab_core::algebra::{AlgebraShape, Element};
use qmlab_core::cpmap::{dilated_measurement, CPMap};
use qmlab_core::error::{Error, Result};
use qmlab_core::linalg;
use qmlab_core::measurement::{MeasurementSetup, SystemSide};
use qmlab_core::state::State;
use qmlab_core::{CMatrix, CVector};

/// Per-trial seed derivation: one splitmix64 cascade over the master seed,
/// a suite tag and the trial index. Stated scheme for reproducibility.
pub fn trial_seed(master: u64, suite: &str, trial: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x1000_0000_01b3);
    }
    linalg::splitmix64(linalg::splitmix64(master ^ h) ^ trial)
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex standard normal entry.
pub fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(gaussian(rng), gaussian(rng)) / 2f64.sqrt()
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Random element with independent complex-Gaussian block entries.
pub fn random_element(shape: &AlgebraShape, rng: &mut ChaCha8Rng) -> Element {
    let blocks = shape
        .block_dims()
        .iter()
        .map(|&d| gaussian_matrix(rng, d, d))
        .collect();
    Element::from_blocks(shape.clone(), blocks).expect("dimensions match")
}

/// Random Hermitean element.
pub fn random_hermitian(shape: &AlgebraShape, rng: &mut ChaCha8Rng) -> Element {
    random_element(shape, rng).re_part()
}

/// Haar-ish unitary element: QR of a Gaussian matrix per block, with the R
/// diagonal phases absorbed so the distribution is basis-invariant.
pub fn haar_unitary(shape: &AlgebraShape, rng: &mut ChaCha8Rng) -> Element {
    let blocks = shape
        .block_dims()
        .iter()
        .map(|&d| linalg::orthonormalize(&gaussian_matrix(rng, d, d)))
        .collect();
    Element::from_blocks(shape.clone(), blocks).expect("dimensions match")
}

/// Random full-rank density: `GG†` normalized, compressed to the blocks.
pub fn random_state(shape: &AlgebraShape, rng: &mut ChaCha8Rng) -> State {
    let g = random_element(shape, rng);
    let psd = g.mul(&g.adjoint()).expect("same shape");
    let tr = psd.trace().re;
    State::from_density(psd.scale_re(1.0 / tr)).expect("normalized PSD density")
}

/// Random vector state supported on one block of the shape.
pub fn random_vector_state(shape: &AlgebraShape, rng: &mut ChaCha8Rng) -> State {
    let block = rng.random_range(0..shape.num_blocks());
    let dim = shape.block_dims()[block];
    let mut v = CVector::zeros(shape.total_dim());
    for i in 0..dim {
        v[shape.block_offset(block) + i] = complex_gaussian(rng);
    }
    if v.norm() < 1e-9 {
        v[shape.block_offset(block)] = C64::new(1.0, 0.0);
    }
    State::vector(shape, &v).expect("unit vector")
}

/// An orthonormal pair of vectors inside one block.
pub fn random_orthonormal_pair(
    shape: &AlgebraShape,
    rng: &mut ChaCha8Rng,
) -> (State, State) {
    loop {
        let block = rng.random_range(0..shape.num_blocks());
        let dim = shape.block_dims()[block];
        if dim < 2 {
            continue;
        }
        let g = gaussian_matrix(rng, dim, 2);
        let q = linalg::orthonormalize(&g);
        let mut v1 = CVector::zeros(shape.total_dim());
        let mut v2 = CVector::zeros(shape.total_dim());
        for i in 0..dim {
            v1[shape.block_offset(block) + i] = q[(i, 0)];
            v2[shape.block_offset(block) + i] = q[(i, 1)];
        }
        return (
            State::vector(shape, &v1).expect("unit vector"),
            State::vector(shape, &v2).expect("unit vector"),
        );
    }
}

/// Random unital CP map in operator-sum form: `kraus_rank` Gaussian
/// operators per codomain block, right-normalized by `S^{−1/2}` with
/// `S = Σ K†K`. `S` is regularized when its smallest eigenvalue drops below
/// `1e−8`, and the draw is resampled (bounded retries) if that fails.
pub fn random_cpmap(
    domain: &AlgebraShape,
    codomain: &AlgebraShape,
    kraus_rank: usize,
    seed: u64,
) -> Result<CPMap> {
    if kraus_rank == 0 {
        return Err(Error::Argument("kraus_rank must be ≥ 1".into()));
    }
    let mut rng = rng_from(seed);
    let db = domain.total_dim();
    'retry: for _ in 0..8 {
        let mut kraus = Vec::new();
        for (j, &nj) in codomain.block_dims().iter().enumerate() {
            // unitality needs the stacked Kraus columns to span C^{n_j}
            let rank_j = kraus_rank.max(nj.div_ceil(db));
            let raw: Vec<CMatrix> = (0..rank_j)
                .map(|_| gaussian_matrix(&mut rng, db, nj))
                .collect();
            let mut s = CMatrix::zeros(nj, nj);
            for k in &raw {
                s += k.adjoint() * k;
            }
            let (vals, vecs) = linalg::herm_eigen(&s);
            let whitening = if vals[0] < 1e-8 {
                // regularize, whiten, then re-whiten exactly; a draw whose
                // normalizer stays singular is discarded
                let shifted: Vec<f64> = vals.iter().map(|&v| v + 1e-8).collect();
                let w1 = inv_sqrt_from(&shifted, &vecs);
                let mut s2 = CMatrix::zeros(nj, nj);
                for k in &raw {
                    let kw = k * &w1;
                    s2 += kw.adjoint() * kw;
                }
                let (v2, e2) = linalg::herm_eigen(&s2);
                if v2[0] < 1e-8 {
                    continue 'retry;
                }
                &w1 * inv_sqrt_from(&v2, &e2)
            } else {
                inv_sqrt_from(&vals, &vecs)
            };
            for k in raw {
                let piece = k * &whitening;
                let mut padded = CMatrix::zeros(db, codomain.total_dim());
                padded
                    .columns_mut(codomain.block_offset(j), nj)
                    .copy_from(&piece);
                kraus.push(padded);
            }
        }
        match CPMap::from_kraus(domain.clone(), codomain.clone(), kraus) {
            Ok(map) => return Ok(map),
            Err(_) => continue 'retry,
        }
    }
    Err(Error::InvalidMap(
        "random CP map draw failed after bounded retries".into(),
    ))
}

fn inv_sqrt_from(vals: &[f64], vecs: &CMatrix) -> CMatrix {
    let d = CMatrix::from_diagonal(&CVector::from_fn(vals.len(), |i, _| {
        C64::new(1.0 / vals[i].sqrt(), 0.0)
    }));
    vecs * d * vecs.adjoint()
}

/// Random dilated measurement setup: Haar unitary on `A⊗B`, random
/// apparatus state `τ`, random Hermitean pointer `I⊗Y`; the measured
/// observable is `M(I⊗Y)`, unbiased by construction.
pub fn random_dilated_setup(
    a_shape: &AlgebraShape,
    b_shape: &AlgebraShape,
    seed: u64,
) -> Result<MeasurementSetup> {
    let mut rng = rng_from(seed);
    let ab = a_shape.tensor(b_shape);
    let u = haar_unitary(&ab, &mut rng);
    let tau = random_state(b_shape, &mut rng);
    let y = random_hermitian(b_shape, &mut rng);
    let map = dilated_measurement(a_shape, b_shape, &u, &tau)?;
    let pointer = Element::identity(a_shape).tensor(&y);
    let setup = MeasurementSetup::unbiased(map, pointer)?;
    Ok(setup.with_system(SystemSide::Left(b_shape.clone())))
}

/// Swap-dilated perfect setup: `U = swap` on `M_n ⊗ M_n` transfers the
/// pointer exactly, so any `I⊗Y` is measured with quality zero.
pub fn swap_setup(n: usize, seed: u64) -> Result<MeasurementSetup> {
    let mut rng = rng_from(seed);
    let a_shape = AlgebraShape::full(n);
    let tau = random_state(&a_shape, &mut rng);
    let u = qmlab_core::cpmap::swap_unitary(n);
    let map = dilated_measurement(&a_shape, &a_shape, &u, &tau)?;
    let y = random_hermitian(&a_shape, &mut rng);
    let pointer = Element::identity(&a_shape).tensor(&y);
    let setup = MeasurementSetup::unbiased(map, pointer)?;
    Ok(setup.with_system(SystemSide::Left(a_shape)))
}

/// Short hex digest of a serializable instance, for reproducibility
/// records.
pub fn digest<T: serde::Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).unwrap_or_default();
    let hash = Sha256::digest(&bytes);
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
