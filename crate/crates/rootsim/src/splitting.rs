//! Exact evolution, first-order Trotter and symmetric torus-root (Strang)
//! splitting, error sweeps with convergence-order fits, and r-step
//! composition.
//!
//! The sweep measures `||e^{t(A+B)} - S(t)||_op` against the right-hand side
//! `t^3 (C(X) + A_1(X_root))`; the constant in front is not derived from BCH
//! bookkeeping but measured as `c_hat`, the largest observed
//! error/bound ratio.

use serde::{Deserialize, Serialize};

use crate::algebra::{decompose, AlgebraElement, TorusRootDecomposition};
use crate::error::{Error, Result};
use crate::functionals::{activity, curvature, profile_from_decomposition};
use crate::linalg::{expm_skew, op_dist, CMat};
use crate::rep::Representation;

/// Splitting scheme of an error sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Strang,
    Trotter1,
}

/// Results of a splitting error sweep over a decreasing time grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitErrorReport {
    pub scheme: Scheme,
    /// Strictly decreasing time grid.
    pub times: Vec<f64>,
    /// Operator-norm errors per grid point.
    pub errors: Vec<f64>,
    /// `t^3 (C + A_1)` per grid point.
    pub bound_rhs: Vec<f64>,
    /// Log-log least-squares slope over points above the roundoff floor;
    /// `None` when fewer than two points survive.
    pub fitted_order: Option<f64>,
    /// Max of error/bound over retained points.
    pub c_hat: f64,
    /// error/bound at the largest retained time.
    pub c_hat_leading: f64,
    /// Root curvature of the generator.
    pub curvature: f64,
    /// `A_1(X_root)` of the generator.
    pub a1_root: f64,
    /// Errors below this are treated as roundoff and excluded from the fit.
    pub roundoff_floor: f64,
    /// Largest grid time with local error below 0.1; grid points above it
    /// are outside the bound's validity regime.
    pub t0_estimate: Option<f64>,
}

impl SplitErrorReport {
    /// error/bound ratios (zero where the bound vanishes).
    pub fn ratios(&self) -> Vec<f64> {
        self.errors
            .iter()
            .zip(&self.bound_rhs)
            .map(|(&e, &b)| if b > 0.0 { e / b } else { 0.0 })
            .collect()
    }
}

/// Exact unitary evolution `e^{t d rho(X)}`.
pub fn exact_evolution(rep: &Representation, x: &AlgebraElement, t: f64) -> Result<CMat> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter("time must be finite".into()));
    }
    expm_skew(&rep.apply(x)?.scale_re(t))
}

/// Symmetric torus-root splitting `S(t) = e^{tA/2} e^{tB} e^{tA/2}` with
/// `A = d rho(X0)`, `B = d rho(X_root)`.
pub fn strang(rep: &Representation, decomp: &TorusRootDecomposition, t: f64) -> Result<CMat> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter("time must be finite".into()));
    }
    let a = rep.apply(&decomp.toral_element())?;
    let b = rep.apply(&decomp.root_element())?;
    let half = expm_skew(&a.scale_re(t / 2.0))?;
    let mid = expm_skew(&b.scale_re(t))?;
    half.mul(&mid)?.mul(&half)
}

/// First-order Trotter splitting `e^{tA} e^{tB}`.
pub fn trotter1(rep: &Representation, decomp: &TorusRootDecomposition, t: f64) -> Result<CMat> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter("time must be finite".into()));
    }
    let a = rep.apply(&decomp.toral_element())?;
    let b = rep.apply(&decomp.root_element())?;
    expm_skew(&a.scale_re(t))?.mul(&expm_skew(&b.scale_re(t))?)
}

/// `r`-step composition `S(t/r)^r`.
pub fn composed_evolution(
    rep: &Representation,
    decomp: &TorusRootDecomposition,
    t: f64,
    r: usize,
) -> Result<CMat> {
    if r == 0 {
        return Err(Error::InvalidParameter("step count must be >= 1".into()));
    }
    let step = strang(rep, decomp, t / r as f64)?;
    let mut acc = CMat::identity(step.rows());
    for _ in 0..r {
        acc = acc.mul(&step)?;
    }
    Ok(acc)
}

/// `r`-step composition with adjacent toral half-steps merged:
/// `e^{hA/2} (e^{hB} e^{hA})^{r-1} e^{hB} e^{hA/2}` with `h = t/r`.
/// Produces the same operator as [`composed_evolution`] to 1e-12.
pub fn composed_evolution_merged(
    rep: &Representation,
    decomp: &TorusRootDecomposition,
    t: f64,
    r: usize,
) -> Result<CMat> {
    if r == 0 {
        return Err(Error::InvalidParameter("step count must be >= 1".into()));
    }
    let h = t / r as f64;
    let a = rep.apply(&decomp.toral_element())?;
    let b = rep.apply(&decomp.root_element())?;
    let half = expm_skew(&a.scale_re(h / 2.0))?;
    let full_a = expm_skew(&a.scale_re(h))?;
    let full_b = expm_skew(&b.scale_re(h))?;
    let mut acc = half.clone();
    for k in 0..r {
        acc = acc.mul(&full_b)?;
        if k + 1 < r {
            acc = acc.mul(&full_a)?;
        }
    }
    acc.mul(&half)
}

/// Unweighted least-squares slope of `y` against `x`. `None` for fewer than
/// two points or a degenerate abscissa.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|&a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Sweep the splitting error over a strictly decreasing positive time grid.
pub fn error_sweep(
    rep: &Representation,
    x: &AlgebraElement,
    times: &[f64],
    scheme: Scheme,
) -> Result<SplitErrorReport> {
    if times.len() < 4 {
        return Err(Error::InvalidParameter(
            "need at least 4 grid points for order fitting".into(),
        ));
    }
    for w in times.windows(2) {
        if w[0] <= w[1] || w[0].is_nan() || w[1].is_nan() {
            return Err(Error::InvalidParameter(
                "time grid must be strictly decreasing".into(),
            ));
        }
    }
    if times[times.len() - 1] <= 0.0 {
        return Err(Error::InvalidParameter("times must be positive".into()));
    }

    let decomp = decompose(x);
    let profile = profile_from_decomposition(rep, &decomp)?;
    let curv = curvature(&profile);
    let a1 = activity(&profile, 1.0)?;
    let coeff = curv + a1;

    let mut errors = Vec::with_capacity(times.len());
    let mut bound_rhs = Vec::with_capacity(times.len());
    for &t in times {
        let exact = exact_evolution(rep, x, t)?;
        let approx = match scheme {
            Scheme::Strang => strang(rep, &decomp, t)?,
            Scheme::Trotter1 => trotter1(rep, &decomp, t)?,
        };
        errors.push(op_dist(&exact, &approx)?);
        bound_rhs.push(t.abs().powi(3) * coeff);
    }

    let floor = 1e3 * f64::EPSILON * rep.dim() as f64;
    let retained: Vec<usize> = (0..times.len()).filter(|&i| errors[i] >= floor).collect();

    let fitted_order = if retained.len() >= 2 {
        let lx: Vec<f64> = retained.iter().map(|&i| times[i].ln()).collect();
        let ly: Vec<f64> = retained.iter().map(|&i| errors[i].ln()).collect();
        least_squares_slope(&lx, &ly)
    } else {
        None
    };

    let mut c_hat = 0.0f64;
    let mut c_hat_leading = 0.0f64;
    for (pos, &i) in retained.iter().enumerate() {
        if bound_rhs[i] > 0.0 {
            let ratio = errors[i] / bound_rhs[i];
            c_hat = c_hat.max(ratio);
            if pos == 0 {
                c_hat_leading = ratio;
            }
        }
    }

    let t0_estimate = times
        .iter()
        .zip(&errors)
        .find(|(_, &e)| e < 0.1)
        .map(|(&t, _)| t);

    Ok(SplitErrorReport {
        scheme,
        times: times.to_vec(),
        errors,
        bound_rhs,
        fitted_order,
        c_hat,
        c_hat_leading,
        curvature: curv,
        a1_root: a1,
        roundoff_floor: floor,
        t0_estimate,
    })
}

/// Smallest `r` with `r * c_hat * (t/r)^3 * (C + A_1) <= eps`, i.e.
/// `ceil(sqrt(c_hat t^3 (C + A_1) / eps))`; returns 1 when the splitting is
/// exact (`C + A_1 = 0`).
pub fn required_steps(
    rep: &Representation,
    x: &AlgebraElement,
    t: f64,
    eps: f64,
    c_hat: f64,
) -> Result<usize> {
    if eps <= 0.0 {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    if c_hat < 0.0 {
        return Err(Error::InvalidParameter("c_hat must be nonnegative".into()));
    }
    let profile = crate::functionals::root_profile(rep, x)?;
    let coeff = curvature(&profile) + activity(&profile, 1.0)?;
    if coeff == 0.0 {
        return Ok(1);
    }
    let r = (c_hat * t.abs().powi(3) * coeff / eps).sqrt().ceil();
    Ok((r as usize).max(1))
}

/// Standard geometric time grid `t_max / ratio^k`, k = 0..points.
pub fn geometric_grid(t_max: f64, points: usize, ratio: f64) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && ratio > 1.0) || points == 0 {
        return Err(Error::InvalidParameter(
            "grid needs t_max > 0, ratio > 1, points >= 1".into(),
        ));
    }
    Ok((0..points).map(|k| t_max / ratio.powi(k as i32)).collect())
}
