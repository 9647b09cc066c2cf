//! Root profiles and the activity/curvature functionals.
//!
//! A root profile collects, per active root, the coefficient modulus
//! `|x_alpha|`, the representation weight `||d rho(E_alpha)||_op`, and the
//! toral evaluation `alpha(X_0)`. Root activity of order p is the l^p
//! aggregate of `|x_alpha| ||d rho(E_alpha)||`; root curvature is the l^2
//! aggregate additionally weighted by `|alpha(X_0)|`, and it controls the
//! torus-root commutator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{decompose, AlgebraElement, AlgebraId, RootLabel, TorusRootDecomposition};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::rep::Representation;
use crate::sampling;

/// One active root of a profile.
#[derive(Debug, Clone)]
pub struct ProfileEntry {
    pub label: RootLabel,
    /// `|x_alpha|`
    pub abs_x: f64,
    /// `||d rho(E_alpha)||_op`
    pub op_norm_e: f64,
    /// `alpha(X_0)`; purely imaginary in the compact convention.
    pub alpha_x0: Complex64,
}

/// Sparse per-root data of a generator in a representation.
#[derive(Debug, Clone, Default)]
pub struct RootProfile {
    pub entries: Vec<ProfileEntry>,
}

impl RootProfile {
    /// Number of active roots (nonzero coefficients).
    pub fn active_roots(&self) -> usize {
        self.entries.len()
    }
}

/// Assemble the root profile of `x` in `rep` from its torus-root
/// decomposition.
pub fn root_profile(rep: &Representation, x: &AlgebraElement) -> Result<RootProfile> {
    if rep.algebra() != x.algebra {
        return Err(Error::AlgebraMismatch);
    }
    profile_from_decomposition(rep, &decompose(x))
}

/// Profile from a precomputed decomposition.
pub fn profile_from_decomposition(
    rep: &Representation,
    decomp: &TorusRootDecomposition,
) -> Result<RootProfile> {
    if rep.algebra() != decomp.algebra {
        return Err(Error::AlgebraMismatch);
    }
    let mut entries = Vec::with_capacity(decomp.coeffs.len());
    for (&label, &x_alpha) in &decomp.coeffs {
        let (z, w) = label.as_pair();
        entries.push(ProfileEntry {
            label,
            abs_x: x_alpha.norm(),
            op_norm_e: rep.root_image_norm_by_label(label)?,
            alpha_x0: decomp.x0.get(z, z) - decomp.x0.get(w, w),
        });
    }
    Ok(RootProfile { entries })
}

/// Root activity of order `p` (use `f64::INFINITY` for the sup version).
pub fn activity(profile: &RootProfile, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "activity order must satisfy p >= 1, got {p}"
        )));
    }
    let weights = profile.entries.iter().map(|e| e.abs_x * e.op_norm_e);
    if p.is_infinite() {
        return Ok(weights.fold(0.0, f64::max));
    }
    Ok(weights.map(|w| w.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Root curvature: `(sum |alpha(X0)|^2 |x_alpha|^2 ||d rho(E_alpha)||^2)^{1/2}`.
pub fn curvature(profile: &RootProfile) -> f64 {
    profile
        .entries
        .iter()
        .map(|e| {
            let w = e.alpha_x0.norm() * e.abs_x * e.op_norm_e;
            w * w
        })
        .sum::<f64>()
        .sqrt()
}

/// The closed-form torus-root commutator
/// `[d rho(X0), d rho(X_root)] = sum x_alpha alpha(X0) d rho(E_alpha)`.
pub fn commutator_via_roots(rep: &Representation, decomp: &TorusRootDecomposition) -> Result<CMat> {
    weighted_root_sum(rep, decomp, 1)
}

/// The nested commutator
/// `[A, [A, B]] = sum x_alpha alpha(X0)^2 d rho(E_alpha)` with `A = d rho(X0)`.
pub fn nested_commutator_aab(
    rep: &Representation,
    decomp: &TorusRootDecomposition,
) -> Result<CMat> {
    weighted_root_sum(rep, decomp, 2)
}

fn weighted_root_sum(
    rep: &Representation,
    decomp: &TorusRootDecomposition,
    alpha_power: u32,
) -> Result<CMat> {
    if rep.algebra() != decomp.algebra {
        return Err(Error::AlgebraMismatch);
    }
    let dim = rep.dim();
    let mut acc = CMat::zeros(dim, dim);
    for (&label, &x_alpha) in &decomp.coeffs {
        let (z, w) = label.as_pair();
        let alpha = decomp.x0.get(z, z) - decomp.x0.get(w, w);
        let weight = x_alpha * alpha.powu(alpha_power);
        acc = acc.add(&rep.root_image_by_label(label)?.scale(weight))?;
    }
    Ok(acc)
}

/// The invariants of a generator in a representation, ready to serialize.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub a_1: f64,
    pub a_2: f64,
    pub a_inf: f64,
    pub curvature: f64,
    /// The activity seminorm `||X||_act = A_1(X_root)`.
    pub act_seminorm: f64,
    /// `sup_alpha |alpha(X0)|` over the full root system.
    pub m_x0: f64,
    /// `sqrt(active-root count)`: the structural constant in the commutator
    /// bound, in the convention that only active roots count.
    pub c_struct: f64,
    /// `sqrt(|Delta|)` over the full root system.
    pub c_struct_full: f64,
    pub active_roots: usize,
    pub total_roots: usize,
}

/// Compute the full functional report for `x` in `rep`.
pub fn functional_report(rep: &Representation, x: &AlgebraElement) -> Result<FunctionalReport> {
    let decomp = decompose(x);
    let profile = profile_from_decomposition(rep, &decomp)?;
    report_from_parts(&profile, decomp.m_x0(), x.algebra)
}

pub fn report_from_parts(
    profile: &RootProfile,
    m_x0: f64,
    algebra: AlgebraId,
) -> Result<FunctionalReport> {
    let n = algebra.dim();
    let total = n * (n - 1);
    let a_1 = activity(profile, 1.0)?;
    Ok(FunctionalReport {
        a_1,
        a_2: activity(profile, 2.0)?,
        a_inf: activity(profile, f64::INFINITY)?,
        curvature: curvature(profile),
        act_seminorm: a_1,
        m_x0,
        c_struct: (profile.active_roots() as f64).sqrt(),
        c_struct_full: (total as f64).sqrt(),
        active_roots: profile.active_roots(),
        total_roots: total,
    })
}

/// The activity seminorm `||x||_act = A_1(x_root)` of an element.
pub fn act_seminorm(rep: &Representation, x: &AlgebraElement) -> Result<f64> {
    activity(&root_profile(rep, x)?, 1.0)
}

/// Estimated norm-equivalence constants between the activity seminorm and
/// the Frobenius norm on the root subspace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormEquivalence {
    /// `m_1`: every sampled ratio `||Y||_act / ||Y_root||` is >= this.
    pub lower: f64,
    /// `M_1`: every sampled ratio is <= this.
    pub upper: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Estimate `m_1, M_1` with `m_1 ||Y_root|| <= ||Y||_act <= M_1 ||Y_root||`.
///
/// The ratio depends only on the moduli of the root coefficients, so the
/// candidate set seeds the samples with the single-pair and
/// norm-proportional directions (where the extremes of such l1/l2 ratios
/// live) before drawing `samples` random unit vectors of the root subspace;
/// a deterministic coordinate-descent pass then polishes both ends.
pub fn norm_equivalence_constants(
    rep: &Representation,
    algebra: AlgebraId,
    samples: usize,
    seed: u64,
) -> Result<NormEquivalence> {
    if rep.algebra() != algebra {
        return Err(Error::AlgebraMismatch);
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let n = algebra.dim();
    if n < 2 {
        return Err(Error::EmptyRootSystem);
    }
    // Weight of the unordered pair {z,w}: ||d rho(E_zw)|| + ||d rho(E_wz)||.
    let mut pair_weights = Vec::new();
    for z in 0..n {
        for w in (z + 1)..n {
            pair_weights.push(
                rep.root_image_norm_by_label(pair_label(algebra, z, w))?
                    + rep.root_image_norm_by_label(pair_label(algebra, w, z))?,
            );
        }
    }
    let p = pair_weights.len();
    // ratio(m) = sum_p m_p weight_p / sqrt(2 sum_p m_p^2) on pair moduli m.
    let ratio = |m: &[f64]| -> f64 {
        let num: f64 = m.iter().zip(&pair_weights).map(|(a, b)| a * b).sum();
        let den: f64 = (2.0 * m.iter().map(|a| a * a).sum::<f64>()).sqrt();
        num / den
    };

    let mut best_low = f64::INFINITY;
    let mut best_high = f64::NEG_INFINITY;
    let mut arg_low = vec![0.0; p];
    let mut arg_high = vec![0.0; p];
    let mut consider = |m: &[f64], lo: &mut Vec<f64>, hi: &mut Vec<f64>| {
        let r = ratio(m);
        if r < best_low {
            best_low = r;
            lo.copy_from_slice(m);
        }
        if r > best_high {
            best_high = r;
            hi.copy_from_slice(m);
        }
    };

    // Deterministic candidates: concentrate on one pair / align with weights.
    for k in 0..p {
        let mut m = vec![0.0; p];
        m[k] = 1.0;
        consider(&m, &mut arg_low, &mut arg_high);
    }
    consider(&pair_weights.clone(), &mut arg_low, &mut arg_high);

    // Random unit directions of the root subspace.
    let mut rng = sampling::rng(seed);
    for _ in 0..samples {
        let y = sampling::random_root_space_unit(&mut rng, n);
        let mut m = Vec::with_capacity(p);
        for z in 0..n {
            for w in (z + 1)..n {
                m.push(y.get(z, w).norm());
            }
        }
        consider(&m, &mut arg_low, &mut arg_high);
    }

    // Coordinate-descent polish, deterministic sweep order and step ladder.
    for &min_side in &[true, false] {
        let mut current = if min_side {
            arg_low.clone()
        } else {
            arg_high.clone()
        };
        let mut step = 0.5;
        for _ in 0..24 {
            for k in 0..p {
                for &delta in &[step, -step] {
                    let mut cand = current.clone();
                    cand[k] = (cand[k] + delta).max(0.0);
                    if cand.iter().all(|&v| v == 0.0) {
                        continue;
                    }
                    let r_new = ratio(&cand);
                    let r_cur = ratio(&current);
                    if (min_side && r_new < r_cur) || (!min_side && r_new > r_cur) {
                        current = cand;
                    }
                }
            }
            step *= 0.5;
        }
        let mut lo_tmp = arg_low.clone();
        let mut hi_tmp = arg_high.clone();
        consider(&current, &mut lo_tmp, &mut hi_tmp);
        arg_low = lo_tmp;
        arg_high = hi_tmp;
    }

    Ok(NormEquivalence {
        lower: best_low,
        upper: best_high,
        samples,
        seed,
    })
}

/// Sampled estimate of the smallest constant with
/// `||d rho(Y)||_op <= Lambda ||Y||_g` over the whole algebra.
///
/// Exposed as a derived quantity per (algebra, representation); like
/// [`norm_equivalence_constants`] it reports the extreme of the sampled
/// ratios after a deterministic polish, not a certified supremum.
pub fn rep_norm_constant(
    rep: &Representation,
    algebra: AlgebraId,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if rep.algebra() != algebra {
        return Err(Error::AlgebraMismatch);
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let n = algebra.dim();
    let mut rng = sampling::rng(seed);
    let ratio = |m: &CMat| -> Result<f64> {
        let x = AlgebraElement::new_unchecked(algebra, m.clone());
        Ok(crate::linalg::op_norm(&rep.apply(&x)?)? / m.fro_norm())
    };
    let mut best = f64::NEG_INFINITY;
    let mut arg = CMat::zeros(n, n);
    for _ in 0..samples {
        let m = sampling::random_skew_herm(&mut rng, n, 1.0);
        if m.fro_norm() < 1e-12 {
            continue;
        }
        let r = ratio(&m)?;
        if r > best {
            best = r;
            arg = m;
        }
    }
    // deterministic perturbation polish with a shrinking step
    let mut step = 0.5;
    for _ in 0..40 {
        let probe = sampling::random_skew_herm(&mut rng, n, 1.0);
        let cand = arg.add(&probe.scale_re(step / probe.fro_norm().max(1e-300)))?;
        if cand.fro_norm() > 1e-12 && ratio(&cand)? > best {
            best = ratio(&cand)?;
            arg = cand;
        } else {
            step *= 0.8;
        }
    }
    Ok(best)
}

fn pair_label(algebra: AlgebraId, z: usize, w: usize) -> RootLabel {
    match algebra {
        AlgebraId::Su2 => {
            if (z, w) == (0, 1) {
                RootLabel::Sign(crate::algebra::RootSign::Plus)
            } else {
                RootLabel::Sign(crate::algebra::RootSign::Minus)
            }
        }
        _ => RootLabel::Pair { z, w },
    }
}
