//! Seeded random generators for algebra elements.
//!
//! Every stochastic routine in the crate (norm-equivalence estimation, the
//! c_rho protocol, test sampling) draws from a [`rng`] seeded explicitly, so
//! parallel and serial runs agree bit for bit.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{op_norm, CMat};

pub use rand_chacha::ChaCha8Rng as Rng64;

/// Deterministic RNG from a 64-bit seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from `[lo, hi)`.
pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn cgauss(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(gauss(rng), gauss(rng))
}

/// Random traceless skew-Hermitian matrix with Gaussian entries of the given
/// scale.
pub fn random_skew_herm(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat {
    let mut m = CMat::zeros(n, n);
    let mut diag = vec![0.0f64; n];
    for d in diag.iter_mut() {
        *d = gauss(rng) * scale;
    }
    let mean = diag.iter().sum::<f64>() / n as f64;
    for (i, d) in diag.iter().enumerate() {
        m.set(i, i, Complex64::new(0.0, d - mean));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let g = cgauss(rng) * scale;
            m.set(i, j, g);
            m.set(j, i, -g.conj());
        }
    }
    m
}

/// Random traceless skew-Hermitian matrix rescaled to a target operator norm.
pub fn random_skew_herm_opnorm(rng: &mut ChaCha8Rng, n: usize, target: f64) -> CMat {
    let m = random_skew_herm(rng, n, 1.0);
    let nrm = op_norm(&m).expect("nonempty");
    if nrm == 0.0 {
        return m;
    }
    m.scale_re(target / nrm)
}

/// Random element of the root subspace (zero diagonal, skew-Hermitian) with
/// unit Frobenius norm.
pub fn random_root_space_unit(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    loop {
        for i in 0..n {
            for j in (i + 1)..n {
                let g = cgauss(rng);
                m.set(i, j, g);
                m.set(j, i, -g.conj());
            }
        }
        let nrm = m.fro_norm();
        if nrm > 1e-12 {
            return m.scale_re(1.0 / nrm);
        }
    }
}
