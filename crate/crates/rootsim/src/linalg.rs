//! Dense complex matrix kernel.
//!
//! Everything downstream lives in the skew-Hermitian/unitary regime: generators
//! are skew-Hermitian, propagators are unitary. The exponential is therefore
//! computed through a Hermitian eigendecomposition of `i*A` (exact unitarity up
//! to roundoff) and the logarithm through a joint diagonalization of the
//! Hermitian and skew parts of a unitary matrix. The operator norm is the
//! largest singular value from a full SVD; matrices stay small (<= 1024x1024)
//! so exactness wins over iterative methods.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Numerical tolerances for the kernel operations.
///
/// The defaults are the contract the rest of the crate is tested against:
/// exponentials of skew-Hermitian inputs are unitary to `unitarity`, and
/// `logm_unitary(expm_skew(z)) == z` to `log_roundtrip` inside the principal
/// branch.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative skew-Hermiticity defect accepted by [`expm_skew`].
    pub skew: f64,
    /// Unitarity guarantee on produced exponentials.
    pub unitarity: f64,
    /// Unitarity defect accepted on inputs to [`logm_unitary`].
    pub unitary_input: f64,
    /// Round-trip residual `||e^Z - U||` accepted by [`logm_unitary`].
    pub log_roundtrip: f64,
    /// Angular guard around the logarithm branch cut.
    pub branch_guard: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            skew: 1e-12,
            unitarity: 1e-12,
            unitary_input: 1e-10,
            log_roundtrip: 1e-10,
            branch_guard: 1e-8,
        }
    }
}

/// Dense complex matrix with row-major element access.
#[derive(Debug, Clone)]
pub struct CMat {
    m: DMatrix<Complex64>,
}

impl CMat {
    /// Build from row-major entries. Fails on a length mismatch or non-finite
    /// entries.
    pub fn from_rows(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(rows, cols, entries.len(), 1));
        }
        for e in entries {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::InvalidParameter("non-finite matrix entry".into()));
            }
        }
        Ok(CMat {
            m: DMatrix::from_row_slice(rows, cols, entries),
        })
    }

    /// Build from real row-major entries.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(rows, cols, &c)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            m: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        CMat {
            m: DMatrix::identity(n, n),
        }
    }

    /// Diagonal matrix from the given entries.
    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        CMat { m }
    }

    pub fn rows(&self) -> usize {
        self.m.nrows()
    }

    pub fn cols(&self) -> usize {
        self.m.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.m[(i, j)] = v;
    }

    /// Row-major copy of the entries.
    pub fn entries_row_major(&self) -> Vec<Complex64> {
        let (r, c) = (self.rows(), self.cols());
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows().min(self.cols()))
            .map(|i| self.m[(i, i)])
            .collect()
    }

    pub fn adjoint(&self) -> CMat {
        CMat {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn add(&self, other: &CMat) -> Result<CMat> {
        self.check_same_shape(other)?;
        Ok(CMat {
            m: &self.m + &other.m,
        })
    }

    pub fn sub(&self, other: &CMat) -> Result<CMat> {
        self.check_same_shape(other)?;
        Ok(CMat {
            m: &self.m - &other.m,
        })
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat {
            m: self.m.map(|e| e * s),
        }
    }

    pub fn scale_re(&self, s: f64) -> CMat {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn mul(&self, other: &CMat) -> Result<CMat> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch(
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols(),
            ));
        }
        Ok(CMat {
            m: &self.m * &other.m,
        })
    }

    /// Frobenius norm, the Euclidean norm used on Lie algebra elements.
    pub fn fro_norm(&self) -> f64 {
        self.m.norm()
    }

    /// Frobenius inner product `Re tr(A^dag B)`.
    pub fn fro_inner(&self, other: &CMat) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                let a = self.m[(i, j)];
                let b = other.m[(i, j)];
                acc += a.re * b.re + a.im * b.im;
            }
        }
        acc
    }

    fn check_same_shape(&self, other: &CMat) -> Result<()> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch(
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols(),
            ));
        }
        Ok(())
    }

    pub(crate) fn inner(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub(crate) fn from_inner(m: DMatrix<Complex64>) -> CMat {
        CMat { m }
    }
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(a: &CMat) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let sv = a.m.clone().singular_values();
    Ok(sv.iter().fold(0.0f64, |m, &s| m.max(s)))
}

/// Operator-norm distance between two matrices of the same shape.
pub fn op_dist(a: &CMat, b: &CMat) -> Result<f64> {
    op_norm(&a.sub(b)?)
}

/// Commutator `[a, b] = ab - ba` for square matrices of equal dimension.
pub fn commutator(a: &CMat, b: &CMat) -> Result<CMat> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
        ));
    }
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Matrix exponential of a skew-Hermitian matrix.
///
/// Computed via the Hermitian eigendecomposition of `i*A`, so the result is
/// unitary up to roundoff: `||e^A (e^A)^dag - I|| <= unitarity` tolerance.
pub fn expm_skew(a: &CMat) -> Result<CMat> {
    expm_skew_with(a, &Tolerances::default())
}

pub fn expm_skew_with(a: &CMat, tol: &Tolerances) -> Result<CMat> {
    if a.rows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            a.rows(),
            a.cols(),
            a.cols(),
            a.rows(),
        ));
    }
    let norm_a = op_norm(a)?;
    let defect = op_norm(&a.add(&a.adjoint())?)?;
    if defect > tol.skew * norm_a {
        return Err(Error::NotSkewHermitian { defect });
    }
    // H = i*A is Hermitian; symmetrize to kill roundoff before decomposing.
    let h = a.scale(Complex64::new(0.0, 1.0));
    let h_sym = h.add(&h.adjoint())?.scale_re(0.5);
    let se = h_sym.m.symmetric_eigen();
    let q = se.eigenvectors;
    // e^A = e^{-iH} = Q diag(e^{-i lambda}) Q^dag
    let phases: Vec<Complex64> = se
        .eigenvalues
        .iter()
        .map(|&l| Complex64::new(0.0, -l).exp())
        .collect();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
    Ok(CMat {
        m: &q * d * q.adjoint(),
    })
}

/// Eigendecomposition of a unitary matrix: orthonormal eigenvectors and phases.
///
/// A unitary `U` is normal, so it is jointly diagonalized with its Hermitian
/// part `(U+U^dag)/2` and skew part `(U-U^dag)/(2i)`. Eigenvalues of the
/// Hermitian part give `cos(theta)` up to clustering; re-diagonalizing the
/// skew part inside each cluster separates `+theta` from `-theta`.
fn unitary_eigen(u: &CMat) -> Result<(DMatrix<Complex64>, Vec<f64>)> {
    let n = u.rows();
    let half = Complex64::new(0.5, 0.0);
    let m_herm = u.add(&u.adjoint())?.scale(half);
    let k_herm = u.sub(&u.adjoint())?.scale(Complex64::new(0.0, -0.5));

    let se = m_herm.m.clone().symmetric_eigen();
    // Sort eigenpairs ascending so clusters are contiguous.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let mut q = DMatrix::<Complex64>::zeros(n, n);
    let mut cos_vals = vec![0.0f64; n];
    for (dst, &src) in order.iter().enumerate() {
        q.set_column(dst, &se.eigenvectors.column(src));
        cos_vals[dst] = se.eigenvalues[src];
    }

    // Cluster near-equal cos values; the gap must exceed roundoff growth but
    // stay below any genuine spectral separation we care to resolve.
    const CLUSTER_GAP: f64 = 1e-6;
    let mut v = q.clone();
    let mut phases = vec![0.0f64; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (cos_vals[end] - cos_vals[end - 1]).abs() <= CLUSTER_GAP {
            end += 1;
        }
        let k = end - start;
        let qc = q.columns(start, k).clone_owned();
        if k > 1 {
            let kc = qc.adjoint() * k_herm.inner() * &qc;
            let kc_sym = (&kc + kc.adjoint()).map(|e| e * half);
            let sub = kc_sym.symmetric_eigen();
            let rotated = &qc * &sub.eigenvectors;
            for j in 0..k {
                v.set_column(start + j, &rotated.column(j));
            }
        }
        for (j, phase) in phases.iter_mut().enumerate().take(end).skip(start) {
            let col = v.column(j).clone_owned();
            let cos = (col.adjoint() * m_herm.inner() * &col)[(0, 0)].re;
            let sin = (col.adjoint() * k_herm.inner() * &col)[(0, 0)].re;
            *phase = sin.atan2(cos);
        }
        start = end;
    }
    Ok((v, phases))
}

fn wrap_to_branch(theta: f64, cut: f64) -> f64 {
    let mut t = theta;
    while t > cut {
        t -= 2.0 * std::f64::consts::PI;
    }
    while t <= cut - 2.0 * std::f64::consts::PI {
        t += 2.0 * std::f64::consts::PI;
    }
    t
}

/// Principal matrix logarithm of a unitary matrix.
///
/// Returns skew-Hermitian `Z` with `e^Z = u` and all eigenphases in
/// `(-pi, pi]`. Errors if any eigenphase falls within the branch guard of the
/// cut at `pi`.
pub fn logm_unitary(u: &CMat) -> Result<CMat> {
    logm_unitary_with(u, None, &Tolerances::default())
}

/// Matrix logarithm of a unitary with a caller-chosen branch-cut angle.
///
/// Eigenphases are taken in `(cut - 2*pi, cut]`.
pub fn logm_unitary_with(u: &CMat, cut: Option<f64>, tol: &Tolerances) -> Result<CMat> {
    if u.rows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !u.is_square() {
        return Err(Error::DimensionMismatch(
            u.rows(),
            u.cols(),
            u.cols(),
            u.rows(),
        ));
    }
    let n = u.rows();
    let uu = u.mul(&u.adjoint())?;
    let defect = op_norm(&uu.sub(&CMat::identity(n))?)?;
    if defect > tol.unitary_input {
        return Err(Error::NotUnitary { defect });
    }

    let cut_angle = cut.unwrap_or(std::f64::consts::PI);
    let (v, raw_phases) = unitary_eigen(u)?;

    let mut phases = Vec::with_capacity(n);
    for &p in &raw_phases {
        let theta = wrap_to_branch(p, cut_angle);
        // Angular distance to the cut line, measured on the circle.
        let dist = (theta - cut_angle)
            .abs()
            .min((theta - (cut_angle - 2.0 * std::f64::consts::PI)).abs());
        if dist < tol.branch_guard {
            return Err(Error::LogBranchAmbiguous { phase: theta });
        }
        phases.push(theta);
    }

    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
        phases.iter().map(|&t| Complex64::new(0.0, t)).collect(),
    ));
    let z_raw = &v * d * v.adjoint();
    // Exact skew-Hermitization removes the roundoff asymmetry of V D V^dag.
    let z = CMat::from_inner((&z_raw - z_raw.adjoint()).map(|e| e * Complex64::new(0.5, 0.0)));

    // Round-trip validation against the input.
    let d_exp = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
        phases
            .iter()
            .map(|&t| Complex64::new(0.0, t).exp())
            .collect(),
    ));
    let recon = CMat::from_inner(&v * d_exp * v.adjoint());
    let residual = op_dist(&recon, u)?;
    if residual > tol.log_roundtrip {
        return Err(Error::LogInaccurate { residual });
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn sigma_x() -> CMat {
        CMat::from_rows(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    pub(crate) fn sigma_y() -> CMat {
        CMat::from_rows(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
    }

    pub(crate) fn sigma_z() -> CMat {
        CMat::from_rows(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).unwrap()
    }

    #[test]
    fn op_norm_identity_is_one() {
        assert!((op_norm(&CMat::identity(2)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn op_norm_sigma_y_is_one() {
        assert!((op_norm(&sigma_y()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn op_norm_rank_one_upper() {
        // Singular values of [[0,2],[0,0]] are {2, 0}.
        let a = CMat::from_rows(2, 2, &[c(0., 0.), c(2., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!((op_norm(&a).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn op_norm_empty_errors() {
        let a = CMat::zeros(0, 0);
        assert!(matches!(op_norm(&a), Err(Error::EmptyMatrix)));
    }

    #[test]
    fn expm_zero_is_identity() {
        let e = expm_skew(&CMat::zeros(2, 2)).unwrap();
        assert!(op_dist(&e, &CMat::identity(2)).unwrap() < 1e-14);
    }

    #[test]
    fn expm_diagonal_phase() {
        // exp(-i t w sigma_z) = diag(e^{-itw}, e^{itw})
        let (t, w) = (0.37, 1.9);
        let a = sigma_z().scale(c(0.0, -t * w));
        let e = expm_skew(&a).unwrap();
        let expect = CMat::from_diagonal(&[c(0.0, -t * w).exp(), c(0.0, t * w).exp()]);
        assert!(op_dist(&e, &expect).unwrap() < 1e-13);
    }

    #[test]
    fn expm_root_plane_rotation() {
        // exp((pi/2)(E_a - E_{-a})) = [[0,1],[-1,0]]
        let g = CMat::from_rows(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]).unwrap();
        let e = expm_skew(&g.scale_re(PI / 2.0)).unwrap();
        let expect = CMat::from_rows(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]).unwrap();
        assert!(op_dist(&e, &expect).unwrap() < 1e-12);
    }

    #[test]
    fn expm_rejects_non_skew() {
        let a = sigma_x(); // Hermitian, not skew-Hermitian
        assert!(matches!(expm_skew(&a), Err(Error::NotSkewHermitian { .. })));
    }

    #[test]
    fn expm_output_unitary() {
        let mut rng = crate::sampling::rng(7);
        for _ in 0..20 {
            let a = crate::sampling::random_skew_herm(&mut rng, 6, 1.5);
            let e = expm_skew(&a).unwrap();
            let defect = op_dist(&e.mul(&e.adjoint()).unwrap(), &CMat::identity(6)).unwrap();
            assert!(defect < 1e-12, "unitarity defect {defect:e}");
        }
    }

    #[test]
    fn logm_identity_is_zero() {
        let z = logm_unitary(&CMat::identity(3)).unwrap();
        assert!(op_norm(&z).unwrap() < 1e-12);
    }

    #[test]
    fn logm_diagonal_case() {
        let th = 0.3;
        let u = CMat::from_diagonal(&[c(0.0, th).exp(), c(0.0, -th).exp()]);
        let z = logm_unitary(&u).unwrap();
        let expect = CMat::from_diagonal(&[c(0.0, th), c(0.0, -th)]);
        assert!(op_dist(&z, &expect).unwrap() < 1e-12);
    }

    #[test]
    fn logm_expm_round_trip() {
        let mut rng = crate::sampling::rng(11);
        for _ in 0..25 {
            let z0 = crate::sampling::random_skew_herm_opnorm(&mut rng, 5, PI - 0.1);
            let u = expm_skew(&z0).unwrap();
            let z = logm_unitary(&u).unwrap();
            assert!(op_dist(&z, &z0).unwrap() < 1e-9);
        }
    }

    #[test]
    fn logm_rejects_non_unitary() {
        let a = CMat::from_rows(2, 2, &[c(2., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]).unwrap();
        assert!(matches!(logm_unitary(&a), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn logm_branch_cut_guard() {
        // Eigenvalue exactly at -1 sits on the principal cut.
        let u = CMat::from_diagonal(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            logm_unitary(&u),
            Err(Error::LogBranchAmbiguous { .. })
        ));
        // Moving the cut makes the same matrix well-posed.
        let z = logm_unitary_with(&u, Some(3.0 * PI / 2.0), &Tolerances::default()).unwrap();
        let e = expm_skew(&z).unwrap();
        assert!(op_dist(&e, &u).unwrap() < 1e-12);
    }

    #[test]
    fn logm_degenerate_pair_of_conjugate_phases() {
        // cos(theta) clusters for +theta and -theta; the skew part must split them.
        let th = 1.234;
        let u = CMat::from_diagonal(&[c(0.0, th).exp(), c(0.0, -th).exp(), c(0.0, th).exp()]);
        let z = logm_unitary(&u).unwrap();
        let e = expm_skew(&z).unwrap();
        assert!(op_dist(&e, &u).unwrap() < 1e-12);
    }

    #[test]
    fn commutator_of_equal_matrices_vanishes() {
        let a = sigma_x().scale(c(0.0, -1.0));
        assert!(op_norm(&commutator(&a, &a).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn commutator_pauli_closed_form() {
        // [-i wx sx, -i wz sz] = -wx wz [sx, sz] = 2i wx wz sy,
        // using [sx, sz] = -2i sy; the norm is 2|wx wz|.
        let (wx, wz) = (0.8, -1.3);
        let a = sigma_x().scale(c(0.0, -wx));
        let b = sigma_z().scale(c(0.0, -wz));
        let expect = sigma_y().scale(c(0.0, 2.0 * wx * wz));
        let comm = commutator(&a, &b).unwrap();
        assert!(op_dist(&comm, &expect).unwrap() < 1e-13);
        assert!((op_norm(&comm).unwrap() - 2.0 * (wx * wz).abs()).abs() < 1e-13);
    }

    #[test]
    fn commutator_diagonal_with_matrix_unit() {
        // [diag(d), E_zw] = (d_z - d_w) E_zw
        let d = CMat::from_diagonal(&[c(0.0, 1.0), c(0.0, -0.4), c(0.0, -0.6)]);
        let mut e = CMat::zeros(3, 3);
        e.set(0, 2, c(1.0, 0.0));
        let got = commutator(&d, &e).unwrap();
        let expect = e.scale(c(0.0, 1.0) - c(0.0, -0.6));
        assert!(op_dist(&got, &expect).unwrap() < 1e-15);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let a = CMat::identity(2);
        let b = CMat::identity(3);
        assert!(commutator(&a, &b).is_err());
    }
}
