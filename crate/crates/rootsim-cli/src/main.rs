//! Command-line front end: ingest Hamiltonians, run decompositions,
//! functionals, splitting error sweeps, chain scaling studies, and
//! lower-bound reports; emit deterministic JSON (and CSV for tables).
//!
//! Exit codes: 0 success, 1 check failure, 2 input error, 3 size cap,
//! 4 estimation failure.

mod input;
mod jsonfmt;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use input::{parse_input, ChainShorthand, ParsedInput};
use rootsim::algebra::{decompose, AlgebraElement, AlgebraId};
use rootsim::chain::{
    build_hamiltonian, cross_check_conventions, fit_exponent, grouped_profile, scaling_study,
    to_algebra_element, ChainSpec,
};
use rootsim::functionals::{act_seminorm, functional_report};
use rootsim::gates::lower_bound;
use rootsim::linalg::op_dist;
use rootsim::rep::{HalfSpin, Representation};
use rootsim::splitting::{
    composed_evolution, error_sweep, exact_evolution, geometric_grid, required_steps, Scheme,
};
use rootsim::Error;

#[derive(Parser)]
#[command(
    name = "rootsim",
    about = "Torus-root decomposition, root functionals, splitting error sweeps, \
             and root-gate complexity bounds for spin Hamiltonians",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    MatrixUnit,
    Grouped,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Strang,
    Trotter1,
}

#[derive(Args)]
struct CommonArgs {
    /// Input JSON file (Pauli terms or chain shorthand)
    #[arg(long)]
    input: PathBuf,
    /// Output JSON path (stdout when omitted); tables also get a .csv sibling
    #[arg(long)]
    output: Option<PathBuf>,
    /// Representation: defining | spin-j=J | tensor-trivial
    #[arg(long, default_value = "defining")]
    rep: String,
    /// Random seed for all sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Torus-root decomposition of the generator
    Decompose {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Root activity, curvature, and related invariants
    Functionals {
        #[command(flatten)]
        common: CommonArgs,
        /// Root convention; chain inputs default to both
        #[arg(long)]
        convention: Option<Convention>,
    },
    /// Splitting error sweep over a geometric time grid
    SplitError {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest grid time
        #[arg(long, default_value_t = 0.0625)]
        t_max: f64,
        /// Number of grid points
        #[arg(long, default_value_t = 7)]
        points: usize,
        /// Geometric ratio between grid points
        #[arg(long, default_value_t = 2.0)]
        ratio: f64,
        #[arg(long, value_enum, default_value_t = SchemeArg::Strang)]
        scheme: SchemeArg,
        /// Also report the measured error of an r-step composition at t_max
        #[arg(long)]
        steps: Option<usize>,
        /// Also report the step count needed for this accuracy at t_max
        #[arg(long)]
        eps: Option<f64>,
        /// Fail (exit 1) unless the fitted order is at least this
        #[arg(long)]
        order_min: Option<f64>,
        /// Fail (exit 1) unless the fitted order is at most this
        #[arg(long)]
        order_max: Option<f64>,
    },
    /// Grouped functionals across chain lengths with fitted exponents
    ChainScaling {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Root-activity lower bound constants and n_lower for the input
    LowerBound {
        #[command(flatten)]
        common: CommonArgs,
        /// Evolution time for n_lower
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        /// Gate step cap
        #[arg(long, default_value_t = 0.1)]
        s0: f64,
        /// Accuracy threshold of the bound regime
        #[arg(long, default_value_t = 1e-3)]
        eps0: f64,
        /// Sampling budget for the constant estimates
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::RootEnumerationTooLarge { .. } | Error::DenseCapExceeded { .. } => 3,
            Error::CannotEstimateCRho => 4,
            Error::InvalidChainSpec(_) | Error::InvalidPauliTerm(_) => 2,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decompose { common } => cmd_decompose(&common),
        Command::Functionals { common, convention } => cmd_functionals(&common, convention),
        Command::SplitError {
            common,
            t_max,
            points,
            ratio,
            scheme,
            steps,
            eps,
            order_min,
            order_max,
        } => cmd_split_error(
            &common, t_max, points, ratio, scheme, steps, eps, order_min, order_max,
        ),
        Command::ChainScaling {
            common,
            n_min,
            n_max,
        } => cmd_chain_scaling(&common, n_min, n_max),
        Command::LowerBound {
            common,
            t_max,
            s0,
            eps0,
            samples,
        } => cmd_lower_bound(&common, t_max, s0, eps0, samples),
    }
}

/// The parsed generator with its provenance.
struct LoadedInput {
    element: AlgebraElement,
    rep: Representation,
    rep_name: String,
    chain: Option<ChainSpec>,
}

fn parse_rep_flag(rep: &str) -> Result<(&str, Option<HalfSpin>), Failure> {
    if rep == "defining" || rep == "tensor-trivial" {
        return Ok((rep, None));
    }
    if let Some(jtext) = rep.strip_prefix("spin-j=") {
        let j = if let Some((num, den)) = jtext.split_once('/') {
            let num: f64 = num
                .parse()
                .map_err(|_| Failure::new(2, format!("bad spin '{jtext}'")))?;
            let den: f64 = den
                .parse()
                .map_err(|_| Failure::new(2, format!("bad spin '{jtext}'")))?;
            num / den
        } else {
            jtext
                .parse()
                .map_err(|_| Failure::new(2, format!("bad spin '{jtext}'")))?
        };
        let half = HalfSpin::try_from_f64(j).map_err(Failure::from)?;
        return Ok(("spin", Some(half)));
    }
    Err(Failure::new(
        2,
        format!("unknown representation '{rep}' (expected defining, spin-j=J, or tensor-trivial)"),
    ))
}

fn load(common: &CommonArgs) -> Result<LoadedInput, Failure> {
    let text = std::fs::read_to_string(&common.input)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", common.input.display())))?;
    let parsed = parse_input(&text).map_err(|m| Failure::new(2, m))?;
    let (n, terms, chain) = match parsed {
        ParsedInput::Terms(file) => (file.n, file.terms, None),
        ParsedInput::Chain(shorthand) => {
            let spec = shorthand.to_spec().map_err(Failure::from)?;
            let terms = build_hamiltonian(&spec);
            (spec.n, terms, Some(spec))
        }
    };
    let element = to_algebra_element(&terms, n).map_err(Failure::from)?;

    let (kind, spin) = parse_rep_flag(&common.rep)?;
    let (element, rep, rep_name) = match (kind, spin) {
        ("spin", Some(j)) => {
            if n != 1 {
                return Err(Failure::new(
                    2,
                    "spin-j representations require a single-site (su(2)) input",
                ));
            }
            let su2 =
                AlgebraElement::new(AlgebraId::Su2, element.mat.clone()).map_err(Failure::from)?;
            let rep = Representation::spin(j);
            (su2, rep, format!("spin-{j}"))
        }
        ("tensor-trivial", _) => {
            let inner = Representation::defining(AlgebraId::Qubits(n)).map_err(Failure::from)?;
            (
                element,
                Representation::tensor_trivial(inner),
                "tensor-trivial(defining)".to_string(),
            )
        }
        _ => {
            let rep = Representation::defining(AlgebraId::Qubits(n)).map_err(Failure::from)?;
            (element, rep, "defining".to_string())
        }
    };
    Ok(LoadedInput {
        element,
        rep,
        rep_name,
        chain,
    })
}

fn write_output(common: &CommonArgs, report: &Value, csv: Option<&str>) -> Result<(), Failure> {
    let text = jsonfmt::to_string_pretty(report);
    match &common.output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            write_atomic(path, &text)?;
            if let Some(csv_text) = csv {
                let csv_path = path.with_extension("csv");
                write_atomic(&csv_path, csv_text)?;
            }
            Ok(())
        }
    }
}

fn write_atomic(path: &Path, content: &str) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, content)
        .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| Failure::new(1, format!("cannot rename into {}: {e}", path.display())))?;
    Ok(())
}

fn label_value(label: &rootsim::algebra::RootLabel) -> Value {
    serde_json::to_value(label).expect("label encodes")
}

fn cmd_decompose(common: &CommonArgs) -> Result<(), Failure> {
    let loaded = load(common)?;
    let x = &loaded.element;
    let d = decompose(x);
    let residual = op_dist(&d.reconstruct(), &x.mat).map_err(Failure::from)?;

    let x0_diag: Vec<Value> =
        d.x0.diagonal()
            .iter()
            .map(|c| json!({ "re": c.re, "im": c.im }))
            .collect();
    let coeffs: Vec<Value> = d
        .coeffs
        .iter()
        .map(|(label, v)| json!({ "label": label_value(label), "re": v.re, "im": v.im }))
        .collect();

    let report = json!({
        "command": "decompose",
        "algebra": x.algebra.to_string(),
        "convention": "matrix-unit",
        "rep": loaded.rep_name,
        "x0_diag": x0_diag,
        "coefficients": coeffs,
        "active_roots": d.coeffs.len(),
        "reconstruction_residual": residual,
        "killing_scale": x.algebra.killing_scale(),
    });
    write_output(common, &report, None)
}

fn grouped_block(spec: &ChainSpec) -> Value {
    let g = grouped_profile(spec);
    json!({
        "a_1": g.a1(),
        "a_2": g.a2(),
        "a_inf": g.a_inf(),
        "curvature": g.curvature(),
        "act_seminorm": g.a1(),
        "c_struct": (g.patterns() as f64).sqrt(),
        "patterns": g.patterns(),
        "entries": g.entries.iter().map(|e| json!({
            "flip_pattern": e.flip_pattern,
            "abs_x": e.abs_x,
            "op_norm_e": e.op_norm_e,
            "alpha_bound": e.alpha_bound,
        })).collect::<Vec<_>>(),
    })
}

fn cmd_functionals(common: &CommonArgs, convention: Option<Convention>) -> Result<(), Failure> {
    let loaded = load(common)?;
    let mut report = BTreeMap::<String, Value>::new();
    report.insert("command".into(), json!("functionals"));
    report.insert("algebra".into(), json!(loaded.element.algebra.to_string()));
    report.insert("rep".into(), json!(loaded.rep_name));
    report.insert(
        "killing_scale".into(),
        json!(loaded.element.algebra.killing_scale()),
    );

    let want_matrix_unit = convention != Some(Convention::Grouped);
    let want_grouped = match convention {
        Some(Convention::Grouped) => true,
        Some(Convention::MatrixUnit) => false,
        None => loaded.chain.is_some(),
    };
    if want_grouped && loaded.chain.is_none() {
        return Err(Failure::new(
            2,
            "the grouped convention requires a chain-model input",
        ));
    }

    let convention_name = match (want_matrix_unit, want_grouped) {
        (true, true) => "both",
        (false, true) => "grouped",
        _ => "matrix-unit",
    };
    report.insert("convention".into(), json!(convention_name));

    if want_matrix_unit {
        let fr = functional_report(&loaded.rep, &loaded.element).map_err(Failure::from)?;
        report.insert(
            "matrix_unit".into(),
            serde_json::to_value(&fr).expect("report encodes"),
        );
    }
    if want_grouped {
        let spec = loaded.chain.as_ref().expect("checked above");
        report.insert("grouped".into(), grouped_block(spec));
        if want_matrix_unit && spec.n <= 6 {
            let cc = cross_check_conventions(spec).map_err(Failure::from)?;
            report.insert(
                "cross_check".into(),
                serde_json::to_value(&cc).expect("report encodes"),
            );
        }
    }
    let value = Value::Object(report.into_iter().collect());
    write_output(common, &value, None)
}

#[allow(clippy::too_many_arguments)]
fn cmd_split_error(
    common: &CommonArgs,
    t_max: f64,
    points: usize,
    ratio: f64,
    scheme: SchemeArg,
    steps: Option<usize>,
    eps: Option<f64>,
    order_min: Option<f64>,
    order_max: Option<f64>,
) -> Result<(), Failure> {
    let loaded = load(common)?;
    let times = geometric_grid(t_max, points, ratio).map_err(Failure::from)?;
    let scheme = match scheme {
        SchemeArg::Strang => Scheme::Strang,
        SchemeArg::Trotter1 => Scheme::Trotter1,
    };
    let sweep = error_sweep(&loaded.rep, &loaded.element, &times, scheme).map_err(Failure::from)?;

    let mut warnings: Vec<String> = Vec::new();
    match sweep.t0_estimate {
        None => warnings.push(
            "all grid points have local error >= 0.1; outside the bound's validity regime".into(),
        ),
        Some(t0) if t0 < times[0] => warnings.push(format!(
            "grid extends beyond the validity regime estimate t0 = {t0}"
        )),
        _ => {}
    }
    if sweep.fitted_order.is_none() {
        warnings.push("all errors below the roundoff floor; fitted order undefined".into());
    }

    let mut report = serde_json::to_value(&sweep).expect("report encodes");
    let obj = report.as_object_mut().expect("object");
    obj.insert("command".into(), json!("split-error"));
    obj.insert("rep".into(), json!(loaded.rep_name));
    obj.insert(
        "ratios".into(),
        serde_json::to_value(sweep.ratios()).expect("encodes"),
    );
    obj.insert("warnings".into(), json!(warnings));
    if let Some(r) = steps {
        let d = decompose(&loaded.element);
        let composed = composed_evolution(&loaded.rep, &d, t_max, r).map_err(Failure::from)?;
        let exact = exact_evolution(&loaded.rep, &loaded.element, t_max).map_err(Failure::from)?;
        let err = op_dist(&composed, &exact).map_err(Failure::from)?;
        obj.insert("composed_steps".into(), json!(r));
        obj.insert("composed_error".into(), json!(err));
    }
    if let Some(target) = eps {
        let r = required_steps(&loaded.rep, &loaded.element, t_max, target, sweep.c_hat)
            .map_err(Failure::from)?;
        obj.insert("required_steps_eps".into(), json!(target));
        obj.insert("required_steps".into(), json!(r));
    }

    let mut csv = String::from("t,error,bound_rhs,ratio\n");
    for ((&t, &e), ratio) in sweep.times.iter().zip(&sweep.errors).zip(sweep.ratios()) {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            jsonfmt::fmt_f64(t),
            jsonfmt::fmt_f64(e),
            jsonfmt::fmt_f64(t.powi(3) * (sweep.curvature + sweep.a1_root)),
            jsonfmt::fmt_f64(ratio)
        ));
    }
    write_output(common, &report, Some(&csv))?;

    if let Some(order) = sweep.fitted_order {
        if order_min.is_some_and(|lo| order < lo) || order_max.is_some_and(|hi| order > hi) {
            return Err(Failure::new(
                1,
                format!("fitted order {order} outside the requested window"),
            ));
        }
    } else if order_min.is_some() || order_max.is_some() {
        return Err(Failure::new(1, "fitted order undefined"));
    }
    Ok(())
}

fn cmd_chain_scaling(common: &CommonArgs, n_min: usize, n_max: usize) -> Result<(), Failure> {
    if n_min < 1 || n_min > n_max {
        return Err(Failure::new(2, "need 1 <= n-min <= n-max"));
    }
    let text = std::fs::read_to_string(&common.input)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", common.input.display())))?;
    let shorthand: ChainShorthand = match parse_input(&text).map_err(|m| Failure::new(2, m))? {
        ParsedInput::Chain(c) => c,
        ParsedInput::Terms(_) => {
            return Err(Failure::new(
                2,
                "chain-scaling requires a chain-model input (with a \"model\" key)",
            ))
        }
    };
    let ns: Vec<usize> = (n_min..=n_max).collect();
    let rows = scaling_study(|n| shorthand.to_spec_at(n), &ns).map_err(Failure::from)?;

    let a1: Vec<f64> = rows.iter().map(|r| r.a1).collect();
    let a2: Vec<f64> = rows.iter().map(|r| r.a2).collect();
    let cg: Vec<f64> = rows.iter().map(|r| r.c_grouped).collect();
    let exps = json!({
        "a1": fit_exponent(&ns, &a1).map(|f| serde_json::to_value(f).unwrap()),
        "a2": fit_exponent(&ns, &a2).map(|f| serde_json::to_value(f).unwrap()),
        "c_grouped": fit_exponent(&ns, &cg).map(|f| serde_json::to_value(f).unwrap()),
    });

    let report = json!({
        "command": "chain-scaling",
        "model": shorthand.model,
        "n_values": ns,
        "rows": rows.iter().map(|r| json!({
            "n": r.n, "a1": r.a1, "a2": r.a2, "c_grouped": r.c_grouped,
        })).collect::<Vec<_>>(),
        "exponents": exps,
    });

    let mut csv = String::from("n,A1,A2,C\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            jsonfmt::fmt_f64(r.a1),
            jsonfmt::fmt_f64(r.a2),
            jsonfmt::fmt_f64(r.c_grouped)
        ));
    }
    write_output(common, &report, Some(&csv))
}

fn cmd_lower_bound(
    common: &CommonArgs,
    t: f64,
    s0: f64,
    eps0: f64,
    samples: usize,
) -> Result<(), Failure> {
    let loaded = load(common)?;
    let algebra = loaded.element.algebra;
    let report =
        lower_bound(&loaded.rep, algebra, s0, eps0, samples, common.seed).map_err(Failure::from)?;
    let act = act_seminorm(&loaded.rep, &loaded.element).map_err(Failure::from)?;
    let n_lower = report.n_lower(act, t);

    let mut value = serde_json::to_value(&report).expect("report encodes");
    let obj = value.as_object_mut().expect("object");
    obj.insert("command".into(), json!("lower-bound"));
    obj.insert("algebra".into(), json!(algebra.to_string()));
    obj.insert("rep".into(), json!(loaded.rep_name));
    obj.insert("t".into(), json!(t));
    obj.insert("act_seminorm".into(), json!(act));
    obj.insert("n_lower".into(), json!(n_lower));
    write_output(common, &value, None)
}
