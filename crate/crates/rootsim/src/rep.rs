//! Unitary representations: defining models, su(2) spin-j irreps, and
//! tensor-with-trivial wrappers, with weight decompositions.
//!
//! Spin-j matrices are built directly from the ladder coefficients
//! `c_{j,m} = sqrt((j-m)(j+m+1))` in the weight basis ordered by descending
//! `m`, which makes spin-1/2 coincide exactly with the defining model.

use num_complex::Complex64;

use crate::algebra::{torus_basis, AlgebraElement, AlgebraId, RootDatum, RootLabel, RootSign};
use crate::error::{Error, Result};
use crate::linalg::{op_norm, CMat};

/// A half-integer spin stored exactly as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfSpin {
    twice: u32,
}

impl HalfSpin {
    pub fn from_twice(twice: u32) -> Self {
        HalfSpin { twice }
    }

    /// Parse from a float that must be a nonnegative half-integer.
    pub fn try_from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !(twice.is_finite() && twice >= 0.0 && (twice - twice.round()).abs() < 1e-9) {
            return Err(Error::InvalidParameter(format!(
                "spin must be a nonnegative half-integer, got {j}"
            )));
        }
        Ok(HalfSpin {
            twice: twice.round() as u32,
        })
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }
}

impl std::fmt::Display for HalfSpin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// A simultaneous eigenspace of the torus action.
#[derive(Debug, Clone)]
pub struct WeightDatum {
    /// The weight on the orthonormal torus basis: `lambda(H)` for `H` with
    /// coordinates `c` equals `i * (weight . c)`.
    pub weight: Vec<f64>,
    /// Basis indices of `V` spanning the weight space.
    pub basis_indices: Vec<usize>,
}

/// A supported unitary representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representation {
    /// The defining representation of the algebra's group.
    Defining { algebra: AlgebraId },
    /// The su(2) irrep of highest weight `j` on `2j+1` dimensions.
    Spin { j: HalfSpin },
    /// `rho (x) 1`, unitarily equivalent to the inner representation.
    TensorTrivial { inner: Box<Representation> },
}

impl Representation {
    pub fn defining(algebra: AlgebraId) -> Result<Self> {
        algebra.validate()?;
        Ok(Representation::Defining { algebra })
    }

    /// Spin-j irreps exist only over su(2).
    pub fn spin(j: HalfSpin) -> Self {
        Representation::Spin { j }
    }

    pub fn tensor_trivial(inner: Representation) -> Self {
        Representation::TensorTrivial {
            inner: Box::new(inner),
        }
    }

    pub fn algebra(&self) -> AlgebraId {
        match self {
            Representation::Defining { algebra } => *algebra,
            Representation::Spin { .. } => AlgebraId::Su2,
            Representation::TensorTrivial { inner } => inner.algebra(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Representation::Defining { algebra } => algebra.dim(),
            Representation::Spin { j } => j.dim(),
            Representation::TensorTrivial { inner } => inner.dim(),
        }
    }

    /// The image `d rho(x)` of an algebra element; always skew-Hermitian.
    pub fn apply(&self, x: &AlgebraElement) -> Result<CMat> {
        if x.algebra != self.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        match self {
            Representation::Defining { .. } => Ok(x.mat.clone()),
            Representation::Spin { j } => {
                // x = a iH + x_+ E_+ + x_- E_- in the sl2 triple.
                let a = x.mat.get(0, 0).im;
                let x_plus = x.mat.get(0, 1);
                let x_minus = x.mat.get(1, 0);
                let h = spin_cartan(*j).scale(Complex64::new(0.0, a));
                let up = spin_ladder(*j, true).scale(x_plus);
                let dn = spin_ladder(*j, false).scale(x_minus);
                h.add(&up)?.add(&dn)
            }
            Representation::TensorTrivial { inner } => inner.apply(x),
        }
    }

    /// The image `d rho(E_alpha)` of a root vector (complex-linear extension).
    pub fn root_image(&self, root: &RootDatum) -> Result<CMat> {
        self.root_image_by_label(root.label)
    }

    /// Root-vector image addressed by label alone.
    pub fn root_image_by_label(&self, label: RootLabel) -> Result<CMat> {
        match self {
            Representation::Defining { algebra } => {
                let n = algebra.dim();
                let (z, w) = label.as_pair();
                if z >= n || w >= n || z == w {
                    return Err(Error::AlgebraMismatch);
                }
                let mut m = CMat::zeros(n, n);
                m.set(z, w, Complex64::new(1.0, 0.0));
                Ok(m)
            }
            Representation::Spin { j } => match label {
                RootLabel::Sign(RootSign::Plus) => Ok(spin_ladder(*j, true)),
                RootLabel::Sign(RootSign::Minus) => Ok(spin_ladder(*j, false)),
                RootLabel::Pair { .. } => Err(Error::AlgebraMismatch),
            },
            Representation::TensorTrivial { inner } => inner.root_image_by_label(label),
        }
    }

    /// Operator norm of the root-vector image `||d rho(E_alpha)||_op`.
    pub fn root_image_norm(&self, root: &RootDatum) -> Result<f64> {
        self.root_image_norm_by_label(root.label)
    }

    /// `||d rho(E_alpha)||_op` addressed by label. Matrix-unit roots in a
    /// defining model have a single unit entry, so their norm is exactly 1
    /// without forming the dense image; other representations compute it
    /// from the materialized image.
    pub fn root_image_norm_by_label(&self, label: RootLabel) -> Result<f64> {
        match self {
            Representation::Defining { algebra } => {
                let n = algebra.dim();
                let (z, w) = label.as_pair();
                if z >= n || w >= n || z == w {
                    return Err(Error::AlgebraMismatch);
                }
                Ok(1.0)
            }
            Representation::Spin { .. } => op_norm(&self.root_image_by_label(label)?),
            Representation::TensorTrivial { inner } => inner.root_image_norm_by_label(label),
        }
    }

    /// The weight decomposition of the representation space.
    ///
    /// All supported representations have one-dimensional weight spaces in
    /// the standard basis; the vectors live on the same orthonormal torus
    /// basis as the root functionals, so `lambda + alpha` is component-wise.
    pub fn weight_decomposition(&self) -> Vec<WeightDatum> {
        match self {
            Representation::Defining { algebra } => {
                let n = algebra.dim();
                let basis = torus_basis(n);
                (0..n)
                    .map(|z| WeightDatum {
                        weight: basis.iter().map(|v| v[z]).collect(),
                        basis_indices: vec![z],
                    })
                    .collect()
            }
            Representation::Spin { j } => {
                let twice = j.twice() as i64;
                (0..=twice)
                    .map(|k| {
                        // index k carries m = j - k, so 2m = twice - 2k
                        let two_m = (twice - 2 * k) as f64;
                        WeightDatum {
                            weight: vec![two_m / std::f64::consts::SQRT_2],
                            basis_indices: vec![k as usize],
                        }
                    })
                    .collect()
            }
            Representation::TensorTrivial { inner } => inner.weight_decomposition(),
        }
    }
}

/// `d rho_j(H)` for the sl2 Cartan generator: `diag(2m)`, `m = j..-j`.
fn spin_cartan(j: HalfSpin) -> CMat {
    let twice = j.twice() as i64;
    let diag: Vec<Complex64> = (0..=twice)
        .map(|k| Complex64::new((twice - 2 * k) as f64, 0.0))
        .collect();
    CMat::from_diagonal(&diag)
}

/// Ladder operators `d rho_j(E_{+-alpha})` with entries
/// `c(k) = sqrt(k (2j + 1 - k))` on the super-/sub-diagonal.
fn spin_ladder(j: HalfSpin, raising: bool) -> CMat {
    let twice = j.twice() as usize;
    let dim = twice + 1;
    let mut m = CMat::zeros(dim, dim);
    for k in 1..=twice {
        let c = ((k * (twice + 1 - k)) as f64).sqrt();
        if raising {
            m.set(k - 1, k, Complex64::new(c, 0.0));
        } else {
            m.set(k, k - 1, Complex64::new(c, 0.0));
        }
    }
    m
}
