//! Concrete Cartan data for the supported algebras.
//!
//! All algebras in scope are su(N) in a defining matrix model with the
//! diagonal maximal torus: `su(2)` with its sl2-triple labels, `su(N)` with
//! matrix-unit roots `E_{zw}`, and `su(2^n)` for qubit systems. Root
//! functionals are stored on an orthonormal basis of the torus (Frobenius
//! inner product), so `alpha(H)` evaluations and weight arithmetic are plain
//! dot products.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{op_norm, CMat};

/// Largest defining dimension for which matrix-unit roots are enumerated.
/// Larger systems go through the grouped profile in [`crate::chain`].
pub const MATRIX_UNIT_CAP_DIM: usize = 64;

/// Default cap on qubit count for dense `su(2^n)` work.
pub const MAX_QUBITS: usize = 10;

/// A supported compact Lie algebra in its defining matrix model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraId {
    /// su(2) with sl2-triple root labels.
    Su2,
    /// su(N), N >= 2, with matrix-unit root labels.
    Sun(usize),
    /// su(2^n) for an n-qubit register; structurally `Sun(2^n)`.
    Qubits(usize),
}

impl AlgebraId {
    /// Dimension of the defining matrix model.
    pub fn dim(self) -> usize {
        match self {
            AlgebraId::Su2 => 2,
            AlgebraId::Sun(n) => n,
            AlgebraId::Qubits(n) => 1usize << n,
        }
    }

    /// Real dimension of the diagonal torus.
    pub fn torus_dim(self) -> usize {
        self.dim() - 1
    }

    pub fn validate(self) -> Result<()> {
        match self {
            AlgebraId::Su2 => Ok(()),
            AlgebraId::Sun(n) if n >= 2 => Ok(()),
            AlgebraId::Sun(n) => Err(Error::InvalidParameter(format!("su({n}) not supported"))),
            AlgebraId::Qubits(n) if (1..=MAX_QUBITS).contains(&n) => Ok(()),
            AlgebraId::Qubits(n) => Err(Error::InvalidParameter(format!(
                "{n} qubits outside supported range 1..={MAX_QUBITS}"
            ))),
        }
    }

    /// Scale relating the Frobenius norm used here to the Killing-form norm
    /// on su(N): `||X||_Killing = sqrt(2N) * ||X||_F`.
    pub fn killing_scale(self) -> f64 {
        (2.0 * self.dim() as f64).sqrt()
    }
}

impl std::fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraId::Su2 => write!(f, "su(2)"),
            AlgebraId::Sun(n) => write!(f, "su({n})"),
            AlgebraId::Qubits(n) => write!(f, "su(2^{n})"),
        }
    }
}

/// Sign of the single root pair of su(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootSign {
    Plus,
    Minus,
}

/// Label of a root.
///
/// For `su(N)`/qubit algebras the roots are matrix units `E_{zw}` (z != w);
/// for su(2) the two roots of the sl2 triple are labelled by sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootLabel {
    Sign(RootSign),
    Pair { z: usize, w: usize },
}

impl RootLabel {
    /// The negated root: swapped pair / flipped sign.
    pub fn negate(self) -> RootLabel {
        match self {
            RootLabel::Sign(RootSign::Plus) => RootLabel::Sign(RootSign::Minus),
            RootLabel::Sign(RootSign::Minus) => RootLabel::Sign(RootSign::Plus),
            RootLabel::Pair { z, w } => RootLabel::Pair { z: w, w: z },
        }
    }

    /// Whether the label lies in the chosen positive system.
    pub fn is_positive(self) -> bool {
        match self {
            RootLabel::Sign(RootSign::Plus) => true,
            RootLabel::Sign(RootSign::Minus) => false,
            RootLabel::Pair { z, w } => z < w,
        }
    }

    /// Matrix-unit index pair of the root vector in the defining model.
    pub fn as_pair(self) -> (usize, usize) {
        match self {
            RootLabel::Sign(RootSign::Plus) => (0, 1),
            RootLabel::Sign(RootSign::Minus) => (1, 0),
            RootLabel::Pair { z, w } => (z, w),
        }
    }
}

impl std::fmt::Display for RootLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RootLabel::Sign(RootSign::Plus) => write!(f, "+a"),
            RootLabel::Sign(RootSign::Minus) => write!(f, "-a"),
            RootLabel::Pair { z, w } => write!(f, "({z},{w})"),
        }
    }
}

/// A root with its vector (as a matrix-unit in the defining model) and its
/// functional on the orthonormal torus basis.
///
/// `alpha(H)` for `H` with torus coordinates `c` is `i * (functional . c)`;
/// evaluations on toral elements are purely imaginary in the compact form.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub label: RootLabel,
    pub functional: Vec<f64>,
    dim: usize,
}

impl RootDatum {
    /// The root vector `E_alpha` in the defining model (a single matrix unit).
    pub fn vector(&self) -> CMat {
        let (z, w) = self.label.as_pair();
        let mut m = CMat::zeros(self.dim, self.dim);
        m.set(z, w, Complex64::new(1.0, 0.0));
        m
    }

    /// Evaluate `alpha` on a diagonal toral element by the defining relation
    /// `[H, E_{zw}] = (H_zz - H_ww) E_{zw}`.
    pub fn alpha_on(&self, toral: &CMat) -> Complex64 {
        let (z, w) = self.label.as_pair();
        toral.get(z, z) - toral.get(w, w)
    }

    /// Evaluate `alpha` through the stored functional and torus coordinates.
    pub fn alpha_from_coords(&self, coords: &[f64]) -> Complex64 {
        let dot: f64 = self.functional.iter().zip(coords).map(|(a, b)| a * b).sum();
        Complex64::new(0.0, dot)
    }
}

/// Orthonormal basis vectors of the traceless hyperplane in R^N (Helmert
/// basis); `H_k = i * diag(v_k)` is then an orthonormal basis of the torus
/// under the Frobenius inner product.
pub fn torus_basis(dim: usize) -> Vec<Vec<f64>> {
    let mut basis = Vec::with_capacity(dim - 1);
    for k in 1..dim {
        let a = 1.0 / ((k * (k + 1)) as f64).sqrt();
        let mut v = vec![0.0; dim];
        for item in v.iter_mut().take(k) {
            *item = a;
        }
        v[k] = -(k as f64) * a;
        basis.push(v);
    }
    basis
}

/// Torus coordinates of a diagonal skew-Hermitian matrix on the orthonormal
/// basis from [`torus_basis`].
pub fn torus_coords(algebra: AlgebraId, toral: &CMat) -> Vec<f64> {
    let basis = torus_basis(algebra.dim());
    basis
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(z, &vz)| vz * toral.get(z, z).im)
                .sum()
        })
        .collect()
}

/// An element of a supported algebra: a traceless skew-Hermitian matrix in
/// the defining model.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    pub algebra: AlgebraId,
    pub mat: CMat,
}

impl AlgebraElement {
    /// Validating constructor: checks dimension, skew-Hermiticity, and
    /// tracelessness (both to 1e-12 relative to scale).
    pub fn new(algebra: AlgebraId, mat: CMat) -> Result<Self> {
        algebra.validate()?;
        let n = algebra.dim();
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::DimensionMismatch(mat.rows(), mat.cols(), n, n));
        }
        let scale = op_norm(&mat)?.max(1.0);
        let defect = op_norm(&mat.add(&mat.adjoint())?)?;
        if defect > 1e-12 * scale {
            return Err(Error::NotSkewHermitian { defect });
        }
        let tr = mat.trace().norm();
        if tr > 1e-12 * scale {
            return Err(Error::NotTraceless { trace: tr });
        }
        Ok(AlgebraElement { algebra, mat })
    }

    /// Construct without validation; for internal use where the invariants
    /// hold by construction.
    pub(crate) fn new_unchecked(algebra: AlgebraId, mat: CMat) -> Self {
        AlgebraElement { algebra, mat }
    }

    /// Frobenius norm, the Euclidean norm on the algebra.
    pub fn norm(&self) -> f64 {
        self.mat.fro_norm()
    }
}

/// Toral part plus sparse root coefficients of an algebra element.
#[derive(Debug, Clone)]
pub struct TorusRootDecomposition {
    pub algebra: AlgebraId,
    /// Diagonal toral component (traceless, skew-Hermitian).
    pub x0: CMat,
    /// Nonzero root coefficients `x_alpha`, keyed by root label.
    pub coeffs: BTreeMap<RootLabel, Complex64>,
}

impl TorusRootDecomposition {
    /// Rebuild the original element: `X0 + sum x_alpha E_alpha`.
    pub fn reconstruct(&self) -> CMat {
        let mut m = self.x0.clone();
        for (label, x) in &self.coeffs {
            let (z, w) = label.as_pair();
            m.set(z, w, m.get(z, w) + x);
        }
        m
    }

    /// The toral component as an algebra element.
    pub fn toral_element(&self) -> AlgebraElement {
        AlgebraElement::new_unchecked(self.algebra, self.x0.clone())
    }

    /// The root component as an algebra element.
    pub fn root_element(&self) -> AlgebraElement {
        let n = self.algebra.dim();
        let mut m = CMat::zeros(n, n);
        for (label, x) in &self.coeffs {
            let (z, w) = label.as_pair();
            m.set(z, w, *x);
        }
        AlgebraElement::new_unchecked(self.algebra, m)
    }

    /// `sup_alpha |alpha(X0)|` over the full root system: the spread of the
    /// toral diagonal.
    pub fn m_x0(&self) -> f64 {
        let diag = self.x0.diagonal();
        if diag.is_empty() {
            return 0.0;
        }
        let hi = diag.iter().map(|d| d.im).fold(f64::NEG_INFINITY, f64::max);
        let lo = diag.iter().map(|d| d.im).fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

fn root_label_for(algebra: AlgebraId, z: usize, w: usize) -> RootLabel {
    match algebra {
        AlgebraId::Su2 => {
            if (z, w) == (0, 1) {
                RootLabel::Sign(RootSign::Plus)
            } else {
                RootLabel::Sign(RootSign::Minus)
            }
        }
        _ => RootLabel::Pair { z, w },
    }
}

/// Enumerate all roots of the algebra with matrix-unit root vectors.
///
/// For `su(N)` this is the `N(N-1)` ordered index pairs with
/// `alpha_{zw}(H) = H_zz - H_ww`; for su(2) the two sl2 roots. Errors when the
/// defining dimension exceeds [`MATRIX_UNIT_CAP_DIM`].
pub fn enumerate_roots(algebra: AlgebraId) -> Result<Vec<RootDatum>> {
    algebra.validate()?;
    let n = algebra.dim();
    if n > MATRIX_UNIT_CAP_DIM {
        return Err(Error::RootEnumerationTooLarge {
            dim: n,
            cap: MATRIX_UNIT_CAP_DIM,
        });
    }
    let basis = torus_basis(n);
    let mut out = Vec::with_capacity(n * (n - 1));
    for z in 0..n {
        for w in 0..n {
            if z == w {
                continue;
            }
            let functional: Vec<f64> = basis.iter().map(|v| v[z] - v[w]).collect();
            out.push(RootDatum {
                label: root_label_for(algebra, z, w),
                functional,
                dim: n,
            });
        }
    }
    Ok(out)
}

/// The root datum for a single label, without enumerating the whole system.
pub fn root_datum(algebra: AlgebraId, label: RootLabel) -> Result<RootDatum> {
    algebra.validate()?;
    let n = algebra.dim();
    let (z, w) = label.as_pair();
    if z == w || z >= n || w >= n {
        return Err(Error::InvalidParameter(format!(
            "root label {label} out of range for {algebra}"
        )));
    }
    let basis = torus_basis(n);
    let functional: Vec<f64> = basis.iter().map(|v| v[z] - v[w]).collect();
    Ok(RootDatum {
        label: root_label_for(algebra, z, w),
        functional,
        dim: n,
    })
}

/// Orthogonal projection onto the torus and the root coefficients.
///
/// The toral part is the diagonal of the matrix; the coefficients are exactly
/// the nonzero off-diagonal entries. Reconstruction is exact.
pub fn decompose(x: &AlgebraElement) -> TorusRootDecomposition {
    let n = x.algebra.dim();
    let mut x0 = CMat::zeros(n, n);
    for i in 0..n {
        x0.set(i, i, x.mat.get(i, i));
    }
    let mut coeffs = BTreeMap::new();
    for z in 0..n {
        for w in 0..n {
            if z == w {
                continue;
            }
            let v = x.mat.get(z, w);
            if v != Complex64::new(0.0, 0.0) {
                coeffs.insert(root_label_for(x.algebra, z, w), v);
            }
        }
    }
    TorusRootDecomposition {
        algebra: x.algebra,
        x0,
        coeffs,
    }
}

/// Adjoint action of a Weyl-group element realized as a signed permutation
/// matrix in `N_G(T)` with determinant corrected to one.
///
/// `perm[j]` is the image of basis index `j`.
pub fn weyl_act(algebra: AlgebraId, perm: &[usize], x: &AlgebraElement) -> Result<AlgebraElement> {
    let n = algebra.dim();
    if x.algebra != algebra {
        return Err(Error::AlgebraMismatch);
    }
    if perm.len() != n {
        return Err(Error::InvalidPermutation);
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation);
        }
        seen[p] = true;
    }
    let sign = permutation_sign(perm);
    let mut g = CMat::zeros(n, n);
    for (j, &pj) in perm.iter().enumerate() {
        let entry = if j == 0 && sign < 0 { -1.0 } else { 1.0 };
        g.set(pj, j, Complex64::new(entry, 0.0));
    }
    // g is real orthogonal with det 1, so Ad(g) X = g X g^T.
    let conj = g.mul(&x.mat)?.mul(&g.adjoint())?;
    Ok(AlgebraElement::new_unchecked(algebra, conj))
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut visited = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !visited[j] {
            visited[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
