//! Root-gate circuit model: gate construction, circuit evaluation, effective
//! generators via the matrix logarithm, logarithm-stability sampling, and the
//! root-activity lower bound on circuit length.
//!
//! Gates are one-parameter exponentials of toral generators or of the real
//! root-plane generators `(E_a - E_{-a})` and `i(E_a + E_{-a})`. All gate
//! generators are normalized to unit Frobenius norm, so the step cap
//! `|s| <= s0` measures arc length in the bi-invariant metric.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraId, RootLabel};
use crate::error::{Error, Result};
use crate::functionals::{act_seminorm, norm_equivalence_constants, NormEquivalence};
use crate::linalg::{expm_skew, logm_unitary, op_dist, CMat};
use crate::rep::Representation;
use crate::sampling;
use crate::splitting::exact_evolution;

/// Which real combination of the root pair generates the gate:
/// `E_a - E_{-a}` (axis 1) or `i(E_a + E_{-a})` (axis 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum PlaneAxis {
    Real,
    Imag,
}

impl From<PlaneAxis> for u8 {
    fn from(axis: PlaneAxis) -> u8 {
        match axis {
            PlaneAxis::Real => 1,
            PlaneAxis::Imag => 2,
        }
    }
}

impl TryFrom<u8> for PlaneAxis {
    type Error = String;
    fn try_from(k: u8) -> std::result::Result<Self, String> {
        match k {
            1 => Ok(PlaneAxis::Real),
            2 => Ok(PlaneAxis::Imag),
            other => Err(format!("plane axis must be 1 or 2, got {other}")),
        }
    }
}

/// Generator family of a single gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GateKind {
    /// Diagonal toral generator, stored as its unit-Frobenius-norm diagonal.
    Toral { diag: Vec<(f64, f64)> },
    /// Real root-plane generator for a positive root.
    RootPlane { label: RootLabel, k: PlaneAxis },
}

/// One gate: `exp(s * d rho(Y))` with a unit-norm generator `Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    #[serde(flatten)]
    pub kind: GateKind,
    pub s: f64,
}

impl GateSpec {
    /// Toral gate from a diagonal algebra element. The generator is
    /// normalized to unit Frobenius norm and the norm is folded into `s`, so
    /// the produced unitary is `exp(s * d rho(h))` for the given `h`.
    pub fn toral(h: &AlgebraElement, s: f64) -> Result<GateSpec> {
        let n = h.algebra.dim();
        for z in 0..n {
            for w in 0..n {
                if z != w && h.mat.get(z, w).norm() > 1e-14 * h.norm().max(1.0) {
                    return Err(Error::InvalidParameter(
                        "toral gate generator must be diagonal".into(),
                    ));
                }
            }
        }
        let norm = h.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter(
                "toral gate generator must be nonzero".into(),
            ));
        }
        let diag = h
            .mat
            .diagonal()
            .iter()
            .map(|d| (d.re / norm, d.im / norm))
            .collect();
        Ok(GateSpec {
            kind: GateKind::Toral { diag },
            s: s * norm,
        })
    }

    /// Root-plane gate for a positive root label.
    pub fn root_plane(label: RootLabel, k: PlaneAxis, s: f64) -> Result<GateSpec> {
        if !label.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "root-plane gates use positive roots, got {label}"
            )));
        }
        Ok(GateSpec {
            kind: GateKind::RootPlane { label, k },
            s,
        })
    }

    /// Arc length `||s * Y||_g = |s|` of the gate.
    pub fn arc_length(&self) -> f64 {
        self.s.abs()
    }

    /// The gate's generator `s * Y` as an algebra element.
    pub fn generator(&self, algebra: AlgebraId) -> Result<AlgebraElement> {
        let n = algebra.dim();
        let mat = match &self.kind {
            GateKind::Toral { diag } => {
                if diag.len() != n {
                    return Err(Error::DimensionMismatch(diag.len(), 1, n, 1));
                }
                let entries: Vec<Complex64> = diag
                    .iter()
                    .map(|&(re, im)| Complex64::new(re * self.s, im * self.s))
                    .collect();
                CMat::from_diagonal(&entries)
            }
            GateKind::RootPlane { label, k } => {
                let (z, w) = label.as_pair();
                if z >= n || w >= n {
                    return Err(Error::InvalidParameter(format!(
                        "root label {label} out of range for {algebra}"
                    )));
                }
                let amp = self.s / 2f64.sqrt();
                let mut m = CMat::zeros(n, n);
                match k {
                    PlaneAxis::Real => {
                        m.set(z, w, Complex64::new(amp, 0.0));
                        m.set(w, z, Complex64::new(-amp, 0.0));
                    }
                    PlaneAxis::Imag => {
                        m.set(z, w, Complex64::new(0.0, amp));
                        m.set(w, z, Complex64::new(0.0, amp));
                    }
                }
                m
            }
        };
        AlgebraElement::new(algebra, mat)
    }
}

/// An ordered gate sequence with its step cap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Circuit {
    pub gates: Vec<GateSpec>,
    pub s0: f64,
}

impl Circuit {
    /// Validating constructor: every gate must obey `|s| <= s0`.
    pub fn new(gates: Vec<GateSpec>, s0: f64) -> Result<Circuit> {
        if s0 <= 0.0 || s0.is_nan() {
            return Err(Error::InvalidParameter("s0 must be positive".into()));
        }
        for g in &gates {
            if g.arc_length() > s0 * (1.0 + 1e-12) {
                return Err(Error::GateStepExceedsCap {
                    s: g.arc_length(),
                    cap: s0,
                });
            }
        }
        Ok(Circuit { gates, s0 })
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Total arc length of the gate generators.
    pub fn total_arc(&self) -> f64 {
        self.gates.iter().map(|g| g.arc_length()).sum()
    }

    /// The formal inverse: reversed order with negated steps.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            gates: self
                .gates
                .iter()
                .rev()
                .map(|g| GateSpec {
                    kind: g.kind.clone(),
                    s: -g.s,
                })
                .collect(),
            s0: self.s0,
        }
    }
}

/// The unitary of one gate, enforcing the step cap.
pub fn gate_unitary(rep: &Representation, gate: &GateSpec, s0: f64) -> Result<CMat> {
    if gate.arc_length() > s0 * (1.0 + 1e-12) {
        return Err(Error::GateStepExceedsCap {
            s: gate.arc_length(),
            cap: s0,
        });
    }
    let generator = gate.generator(rep.algebra())?;
    expm_skew(&rep.apply(&generator)?)
}

/// Ordered product `U_1 U_2 ... U_N` of the circuit's gate unitaries.
pub fn circuit_unitary(rep: &Representation, circuit: &Circuit) -> Result<CMat> {
    let mut acc = CMat::identity(rep.dim());
    for gate in &circuit.gates {
        acc = acc.mul(&gate_unitary(rep, gate, circuit.s0)?)?;
    }
    Ok(acc)
}

/// The effective generator `Z` with `circuit_unitary = exp(d rho(Z))`,
/// extracted through the principal matrix logarithm.
///
/// Valid in the principal-branch regime; products whose eigenphases wrap
/// produce a branch error (shrink `s0` or split the circuit).
pub fn effective_generator(rep: &Representation, circuit: &Circuit) -> Result<AlgebraElement> {
    let w = circuit_unitary(rep, circuit)?;
    let log = logm_unitary(&w)?;
    generator_from_log(rep, &log)
}

fn generator_from_log(rep: &Representation, log: &CMat) -> Result<AlgebraElement> {
    match rep {
        Representation::Defining { algebra } => {
            // A principal log that wrapped out of su(N) shows up as a trace
            // offset of 2*pi*i*k.
            let tr = log.trace().norm();
            if tr > 1e-6 {
                return Err(Error::LogBranchAmbiguous { phase: tr });
            }
            Ok(AlgebraElement::new(*algebra, log.clone())?)
        }
        Representation::Spin { .. } => {
            // Project onto the 3-dimensional image d rho(su(2)) using the
            // Frobenius-orthogonal basis images.
            let basis = su2_basis();
            let mut coords = [0.0f64; 3];
            let mut recon = CMat::zeros(rep.dim(), rep.dim());
            for (i, e) in basis.iter().enumerate() {
                let img = rep.apply(e)?;
                coords[i] = img.fro_inner(log) / img.fro_inner(&img);
                recon = recon.add(&img.scale_re(coords[i]))?;
            }
            let residual = op_dist(&recon, log)?;
            if residual > 1e-8 * (1.0 + crate::linalg::op_norm(log)?) {
                return Err(Error::LogBranchAmbiguous { phase: residual });
            }
            let mut mat = CMat::zeros(2, 2);
            for (i, e) in basis.iter().enumerate() {
                mat = mat.add(&e.mat.scale_re(coords[i]))?;
            }
            Ok(AlgebraElement::new(AlgebraId::Su2, mat)?)
        }
        Representation::TensorTrivial { inner } => generator_from_log(inner, log),
    }
}

fn su2_basis() -> [AlgebraElement; 3] {
    let c = Complex64::new;
    let ih = CMat::from_diagonal(&[c(0.0, 1.0), c(0.0, -1.0)]);
    let x1 = CMat::from_rows(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]).unwrap();
    let x2 = CMat::from_rows(2, 2, &[c(0., 0.), c(0., 1.), c(0., 1.), c(0., 0.)]).unwrap();
    [
        AlgebraElement::new_unchecked(AlgebraId::Su2, ih),
        AlgebraElement::new_unchecked(AlgebraId::Su2, x1),
        AlgebraElement::new_unchecked(AlgebraId::Su2, x2),
    ]
}

/// One logarithm-stability measurement: the circuit's operator-norm distance
/// to the target evolution and the activity-seminorm distance between the
/// effective generator and `t * X`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilitySample {
    pub eps: f64,
    pub act_distance: f64,
}

impl StabilitySample {
    pub fn in_regime(&self, eps0: f64) -> bool {
        self.eps <= eps0
    }
}

/// Measure `eps = ||W - U_X(t)||` and `||Z - tX||_act` for a circuit `w`
/// approximating the evolution of `x`.
pub fn log_stability_check(
    rep: &Representation,
    x: &AlgebraElement,
    t: f64,
    w: &Circuit,
) -> Result<StabilitySample> {
    let wu = circuit_unitary(rep, w)?;
    let target = exact_evolution(rep, x, t)?;
    let eps = op_dist(&wu, &target)?;
    let z = effective_generator(rep, w)?;
    let diff = AlgebraElement::new_unchecked(x.algebra, z.mat.sub(&x.mat.scale_re(t))?);
    let act_distance = act_seminorm(rep, &diff)?;
    Ok(StabilitySample { eps, act_distance })
}

/// Constants of the root-activity lower bound
/// `N >= c1 * t * ||X||_act - c2` on circuit length.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub m1: f64,
    #[serde(rename = "M1")]
    pub m1_upper: f64,
    /// Estimated logarithm-stability constant (max observed ratio
    /// `||Z - tX||_act / eps` over the sampling protocol).
    pub c_rho: f64,
    pub eps0: f64,
    pub s0: f64,
    /// `1 / (M1 * s0)`
    pub c1: f64,
    /// `c_rho * eps0 / (M1 * s0)`
    pub c2: f64,
    pub seed: u64,
    pub samples: usize,
    /// Samples that stayed in the branch and eps regime.
    pub valid_samples: usize,
}

impl LowerBoundReport {
    /// Lower bound on the length of any circuit that eps0-approximates
    /// `U_X(t)` for a generator with activity seminorm `act`.
    pub fn n_lower(&self, act: f64, t: f64) -> usize {
        let raw = (self.c1 * t * act - self.c2).ceil();
        if raw <= 0.0 {
            0
        } else {
            raw as usize
        }
    }
}

/// Estimate the lower-bound constants for a representation.
///
/// `m1, M1` come from [`norm_equivalence_constants`]. `c_rho` is estimated by
/// a perturbation protocol: draw a short random circuit, take its effective
/// generator `Z`, perturb to a nearby target `X' = Z + delta*R`, and record
/// the ratio `||Z - X'||_act / ||W - e^{d rho(X')}||` for perturbations whose
/// eps lands in `(0, eps0]`.
pub fn lower_bound(
    rep: &Representation,
    algebra: AlgebraId,
    s0: f64,
    eps0: f64,
    samples: usize,
    seed: u64,
) -> Result<LowerBoundReport> {
    if !(s0 > 0.0 && eps0 > 0.0) {
        return Err(Error::InvalidParameter(
            "s0 and eps0 must be positive".into(),
        ));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let ne: NormEquivalence = norm_equivalence_constants(rep, algebra, samples.max(64), seed)?;

    let mut rng = sampling::rng(seed.wrapping_add(1));
    let step = s0.min(0.15);
    let mut c_rho = 0.0f64;
    let mut valid = 0usize;
    for k in 0..samples {
        let n_gates = 2 + (k % 6);
        let circuit = random_circuit(&mut rng, algebra, n_gates, step, s0)?;
        let z = match effective_generator(rep, &circuit) {
            Ok(z) => z,
            Err(Error::LogBranchAmbiguous { .. }) => continue,
            Err(e) => return Err(e),
        };
        // Perturbation magnitude swept over a log scale below eps0.
        let exponent = -4.0 + 3.0 * (k as f64 / samples.max(1) as f64);
        let delta = eps0.min(0.05) * 10f64.powf(exponent);
        let d = sampling::random_skew_herm(&mut rng, algebra.dim(), 1.0);
        let dnorm = d.fro_norm().max(1e-300);
        let target = AlgebraElement::new_unchecked(algebra, z.mat.add(&d.scale_re(delta / dnorm))?);
        let sample = match log_stability_check(rep, &target, 1.0, &circuit) {
            Ok(s) => s,
            Err(Error::LogBranchAmbiguous { .. }) => continue,
            Err(e) => return Err(e),
        };
        if sample.eps > eps0 || sample.eps < 1e-13 {
            continue;
        }
        valid += 1;
        c_rho = c_rho.max(sample.act_distance / sample.eps);
    }
    if valid == 0 || c_rho == 0.0 {
        return Err(Error::CannotEstimateCRho);
    }
    let c1 = 1.0 / (ne.upper * s0);
    let c2 = c_rho * eps0 / (ne.upper * s0);
    Ok(LowerBoundReport {
        m1: ne.lower,
        m1_upper: ne.upper,
        c_rho,
        eps0,
        s0,
        c1,
        c2,
        seed,
        samples,
        valid_samples: valid,
    })
}

/// Random circuit over the root-gate set with steps bounded by
/// `min(step, s0)`.
pub fn random_circuit(
    rng: &mut rand_chacha::ChaCha8Rng,
    algebra: AlgebraId,
    n_gates: usize,
    step: f64,
    s0: f64,
) -> Result<Circuit> {
    use rand::Rng;
    let n = algebra.dim();
    let mut gates = Vec::with_capacity(n_gates);
    for _ in 0..n_gates {
        let s = rng.random_range(-step..=step);
        let choice = rng.random_range(0..3u32);
        let gate = if choice == 0 {
            // random toral direction
            let mut diag = vec![0.0f64; n];
            for d in diag.iter_mut() {
                *d = rng.random_range(-1.0..1.0);
            }
            let mean = diag.iter().sum::<f64>() / n as f64;
            let entries: Vec<Complex64> = diag
                .iter()
                .map(|&d| Complex64::new(0.0, d - mean))
                .collect();
            let h = AlgebraElement::new_unchecked(algebra, CMat::from_diagonal(&entries));
            if h.norm() == 0.0 {
                continue;
            }
            GateSpec::toral(&h, s / h.norm())?
        } else {
            let z = rng.random_range(0..n - 1);
            let w = rng.random_range(z + 1..n);
            let label = match algebra {
                AlgebraId::Su2 => RootLabel::Sign(crate::algebra::RootSign::Plus),
                _ => RootLabel::Pair { z, w },
            };
            let axis = if choice == 1 {
                PlaneAxis::Real
            } else {
                PlaneAxis::Imag
            };
            GateSpec::root_plane(label, axis, s)?
        };
        gates.push(gate);
    }
    Circuit::new(gates, s0)
}

/// Compile the `r`-step Strang composition of an su(2) evolution into root
/// gates, exactly (up to roundoff).
///
/// Each step factors as a toral half-step, a toral conjugation that rotates
/// the root component onto one plane axis, the plane rotation, the inverse
/// conjugation, and the closing toral half-step; oversized factors split
/// into equal sub-gates.
pub fn compile_su2_strang(x: &AlgebraElement, t: f64, r: usize, s0: f64) -> Result<Circuit> {
    if x.algebra != AlgebraId::Su2 {
        return Err(Error::AlgebraMismatch);
    }
    if r == 0 {
        return Err(Error::InvalidParameter("step count must be >= 1".into()));
    }
    let a = x.mat.get(0, 0).im;
    let xp = x.mat.get(0, 1);
    let (b, cc) = (xp.re, xp.im);
    let amp = (b * b + cc * cc).sqrt();
    let phi = b.atan2(cc); // rotation angle from the sigma_x axis
    let h = t / r as f64;
    let sqrt2 = 2f64.sqrt();

    let c = Complex64::new;
    let ih = AlgebraElement::new_unchecked(
        AlgebraId::Su2,
        CMat::from_diagonal(&[c(0.0, 1.0), c(0.0, -1.0)]),
    );

    let mut gates: Vec<GateSpec> = Vec::new();
    let push_split = |gates: &mut Vec<GateSpec>, gate: GateSpec| -> Result<()> {
        let arc = gate.arc_length();
        if arc <= s0 || arc == 0.0 {
            if arc > 0.0 {
                gates.push(gate);
            }
            return Ok(());
        }
        let pieces = (arc / s0).ceil() as usize;
        for _ in 0..pieces {
            gates.push(GateSpec {
                kind: gate.kind.clone(),
                s: gate.s / pieces as f64,
            });
        }
        Ok(())
    };

    for _ in 0..r {
        // e^{(h/2) a iH}
        if a != 0.0 {
            push_split(&mut gates, GateSpec::toral(&ih, h / 2.0 * a)?)?;
        }
        if amp > 0.0 {
            // e^{hB} = e^{-i phi sz/2} e^{i h amp sx} e^{i phi sz/2}
            push_split(&mut gates, GateSpec::toral(&ih, -phi / 2.0)?)?;
            push_split(
                &mut gates,
                GateSpec::root_plane(
                    RootLabel::Sign(crate::algebra::RootSign::Plus),
                    PlaneAxis::Imag,
                    h * amp * sqrt2,
                )?,
            )?;
            push_split(&mut gates, GateSpec::toral(&ih, phi / 2.0)?)?;
        }
        if a != 0.0 {
            push_split(&mut gates, GateSpec::toral(&ih, h / 2.0 * a)?)?;
        }
    }
    Circuit::new(gates, s0)
}
