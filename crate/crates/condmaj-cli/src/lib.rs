//! Command-line front end: file loading, validation, dispatch to the
//! library, and reproducible JSON run reports.
//!
//! Every invocation prints one JSON report to stdout with the fields
//! `command`, `inputs` (SHA-256 digests of the files read), `results`,
//! `seed`, `tool_version`, and `elapsed_ms`. Identical arguments, input
//! bytes, and seed reproduce the report byte for byte except for
//! `elapsed_ms`. Floats are rendered with 17 significant digits.
//!
//! Exit codes: `decide` returns 0 when the source conditionally majorizes
//! the target and 1 when it does not; every other subcommand returns 0 on
//! success; usage or input errors return 2 with a machine-readable
//! `{code, message, location}` object; `selftest` returns 1 when a check
//! fails.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use condmaj::bounds::{bipartite_bound, eta_monte_carlo, overlap_constant, tripartite_bound};
use condmaj::closedform;
use condmaj::cmdecide::{conditionally_majorizes_with, DecideOptions, Method};
use condmaj::jsonio::{
    self, complex_vector_to_value, cq_state_to_value, matrix_to_value, to_json_17,
};
use condmaj::measures::{
    joint_uncertainty, min_classical_uncertainty, u_phi, JointMeasure, PhiFunction, SearchBudget,
};
use condmaj::probcore::standard_form;
use condmaj::quantum::{eigendecomposition, pure_case_bound, tq_bound, OmegaBoundQuantum};
use condmaj::selfcheck::{run_all, SuiteBudget};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "condmaj", version, disable_help_subcommand = true)]
#[command(about = "Conditional-majorization decisions, witnesses, uncertainty measures, and universal bounds")]
struct Cli {
    /// Seed for every randomized search in this invocation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the witness-verification tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Pretty-print the report (default is compact JSON).
    #[arg(long, global = true)]
    pretty: bool,
    /// Force compact JSON (the default; counterpart of --pretty).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the source matrix conditionally majorizes the target.
    Decide(DecideArgs),
    /// Run the two-column closed form and optionally dump its workspace.
    DecideL2(DecideL2Args),
    /// Canonicalize a joint distribution matrix.
    Standardize { matrix: String },
    /// Evaluate a conditional-uncertainty measure on a joint distribution.
    Measure(MeasureArgs),
    /// Minimize a measure over memory measurements of a CQ state.
    MinUncertainty(MinUncertaintyArgs),
    /// Joint minimized measure of two CQ states.
    JointUncertainty(JointUncertaintyArgs),
    /// Two-branch bound for a CQ state along one or two outcome indices.
    Qbound(QboundArgs),
    /// State-independent two-column bound from a pair of bases.
    BoundTripartite(BoundTripartiteArgs),
    /// State-dependent doubled-memory bound from a Schmidt vector.
    BoundBipartite(BoundBipartiteArgs),
    /// Run the property suite at reduced (default) or full budgets.
    Selftest {
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args)]
struct DecideArgs {
    source: String,
    target: String,
    /// Bypass the special-case routes and use the LP for everything.
    #[arg(long)]
    force_lp: bool,
    /// Zero-pad the register dimension when the two matrices disagree.
    #[arg(long)]
    allow_row_padding: bool,
    /// Write the witness (T and the per-column relabelings) to a file.
    #[arg(long, value_name = "FILE")]
    emit_witness: Option<String>,
    /// Write the infeasibility certificate (A and its gap) to a file.
    #[arg(long, value_name = "FILE")]
    emit_certificate: Option<String>,
}

#[derive(Args)]
struct DecideL2Args {
    source: String,
    target: String,
    /// Include the full workspace (prefix gaps, index sets, thresholds).
    #[arg(long)]
    explain: bool,
}

#[derive(Args)]
struct MeasureArgs {
    matrix: String,
    /// shannon | guess | renyi:ORDER
    #[arg(long)]
    phi: String,
}

#[derive(Args)]
struct MinUncertaintyArgs {
    state: String,
    #[arg(long, default_value = "shannon")]
    phi: String,
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    #[arg(long, default_value_t = 2048)]
    extra_povms: usize,
}

#[derive(Args)]
struct JointUncertaintyArgs {
    state_a: String,
    state_b: String,
    #[arg(long, default_value = "shannon")]
    phi: String,
    #[arg(long, default_value_t = 1024)]
    grid: usize,
    #[arg(long, default_value_t = 256)]
    extra_povms: usize,
}

#[derive(Args)]
struct QboundArgs {
    state: String,
    #[arg(long)]
    j: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    omega: Option<f64>,
}

#[derive(Args)]
struct BoundTripartiteArgs {
    basis1: String,
    basis2: String,
    #[arg(long)]
    alpha: f64,
    /// Trim trailing zero rows from the printed bound matrix.
    #[arg(long)]
    compact: bool,
    /// Also run the Monte-Carlo cross-check with this many samples.
    #[arg(long)]
    monte_carlo: Option<usize>,
}

#[derive(Args)]
struct BoundBipartiteArgs {
    schmidt: String,
    sbasis: String,
    tbasis: String,
    /// x1,z1,x2,z2
    #[arg(long)]
    indices: String,
    #[arg(long, default_value_t = 0.0)]
    omega: f64,
}

struct CliError {
    code: &'static str,
    message: String,
    location: String,
}

impl CliError {
    fn new(code: &'static str, message: impl Into<String>, location: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            location: location.into(),
        }
    }
}

struct Ctx {
    seed: u64,
    tolerance: Option<f64>,
    inputs: Map<String, Value>,
}

impl Ctx {
    fn read(&mut self, path: &str) -> Result<String, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::new("io-error", e.to_string(), path.to_string()))?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for b in digest {
            let _ = write!(hex, "{b:02x}");
        }
        self.inputs.insert(path.to_string(), Value::String(hex));
        String::from_utf8(bytes)
            .map_err(|e| CliError::new("encoding-error", e.to_string(), path.to_string()))
    }

    fn read_joint(&mut self, path: &str) -> Result<condmaj::JointDistribution, CliError> {
        let text = self.read(path)?;
        jsonio::parse_joint(&text, path.ends_with(".csv"))
            .map_err(|e| CliError::new("invalid-input", e.to_string(), path.to_string()))
    }

    fn decide_options(&self, force_lp: bool, allow_row_padding: bool) -> DecideOptions {
        let mut opts = DecideOptions {
            force_lp,
            allow_row_padding,
            ..Default::default()
        };
        if let Some(t) = self.tolerance {
            opts.eps_wit = t;
        }
        opts
    }
}

fn parse_phi(spec: &str) -> Result<PhiFunction, CliError> {
    let phi = if spec == "shannon" {
        PhiFunction::ShannonEntropy
    } else if spec == "guess" {
        PhiFunction::NegMaxComponent
    } else if let Some(order) = spec.strip_prefix("renyi:") {
        let a: f64 = order
            .parse()
            .map_err(|_| CliError::new("usage", format!("bad renyi order '{order}'"), "--phi"))?;
        PhiFunction::RenyiEntropy(a)
    } else {
        return Err(CliError::new(
            "usage",
            format!("unknown measure '{spec}' (expected shannon, guess, or renyi:ORDER)"),
            "--phi",
        ));
    };
    phi.validate()
        .map_err(|e| CliError::new("invalid-input", e.to_string(), "--phi"))?;
    Ok(phi)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Lp => "lp",
        Method::SpecialN1 => "special-n1",
        Method::SpecialM1 => "special-m1",
        Method::SpecialL1 => "special-l1",
        Method::SpecialL2 => "special-l2",
    }
}

fn omega_bound_to_value(b: &OmegaBoundQuantum) -> Value {
    json!({
        "omega": b.omega,
        "flag0_state": complex_vector_to_value(&b.flag0_state),
        "psi": complex_vector_to_value(&b.psi),
    })
}

/// Run the CLI against `argv` (excluding the program name handled by
/// clap); returns the exit code and the stdout payload.
pub fn run(argv: &[String]) -> (i32, String) {
    let started = Instant::now();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            // Help and version are informational, not usage errors.
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let err = json!({
                "code": "usage",
                "message": e.to_string(),
                "location": "argv",
            });
            return (2, to_json_17(&err, false) + "\n");
        }
    };
    let pretty = cli.pretty;
    let mut ctx = Ctx {
        seed: cli.seed,
        tolerance: cli.tolerance,
        inputs: Map::new(),
    };
    let command_name = command_name(&cli.command);
    match dispatch(&cli.command, &mut ctx) {
        Ok((results, exit)) => {
            let mut report = Map::new();
            report.insert("command".into(), Value::String(command_name.into()));
            report.insert("inputs".into(), Value::Object(ctx.inputs));
            report.insert("results".into(), results);
            report.insert("seed".into(), json!(ctx.seed));
            report.insert("tool_version".into(), Value::String(TOOL_VERSION.into()));
            report.insert(
                "elapsed_ms".into(),
                json!(started.elapsed().as_millis() as u64),
            );
            (exit, to_json_17(&Value::Object(report), pretty) + "\n")
        }
        Err(e) => {
            let err = json!({
                "code": e.code,
                "message": e.message,
                "location": e.location,
            });
            (2, to_json_17(&err, pretty) + "\n")
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Decide(_) => "decide",
        Command::DecideL2(_) => "decide-l2",
        Command::Standardize { .. } => "standardize",
        Command::Measure(_) => "measure",
        Command::MinUncertainty(_) => "min-uncertainty",
        Command::JointUncertainty(_) => "joint-uncertainty",
        Command::Qbound(_) => "qbound",
        Command::BoundTripartite(_) => "bound-tripartite",
        Command::BoundBipartite(_) => "bound-bipartite",
        Command::Selftest { .. } => "selftest",
    }
}

fn dispatch(command: &Command, ctx: &mut Ctx) -> Result<(Value, i32), CliError> {
    match command {
        Command::Decide(args) => decide(args, ctx),
        Command::DecideL2(args) => decide_l2(args, ctx),
        Command::Standardize { matrix } => standardize(matrix, ctx),
        Command::Measure(args) => measure(args, ctx),
        Command::MinUncertainty(args) => min_uncertainty(args, ctx),
        Command::JointUncertainty(args) => joint_uncertainty_cmd(args, ctx),
        Command::Qbound(args) => qbound(args, ctx),
        Command::BoundTripartite(args) => bound_tripartite(args, ctx),
        Command::BoundBipartite(args) => bound_bipartite(args, ctx),
        Command::Selftest { full } => selftest(*full, ctx),
    }
}

fn write_evidence(path: &str, payload: &Value) -> Result<(), CliError> {
    std::fs::write(path, to_json_17(payload, true) + "\n")
        .map_err(|e| CliError::new("io-error", e.to_string(), path.to_string()))
}

fn decide(args: &DecideArgs, ctx: &mut Ctx) -> Result<(Value, i32), CliError> {
    let p = ctx.read_joint(&args.source)?;
    let q = ctx.read_joint(&args.target)?;
    let opts = ctx.decide_options(args.force_lp, args.allow_row_padding);
    let decision = conditionally_majorizes_with(&p, &q, opts)
        .map_err(|e| CliError::new("decision-error", e.to_string(), args.source.clone()))?;

    let mut results = Map::new();
    results.insert("verdict".into(), json!(decision.verdict));
    results.insert(
        "method".into(),
        Value::String(method_name(decision.method).into()),
    );
    results.insert(
        "canonical_source".into(),
        matrix_to_value(decision.canonical_p.matrix()),
    );
    results.insert(
        "canonical_target".into(),
        matrix_to_value(decision.canonical_q.matrix()),
    );
    if let Some(err) = decision.witness_error() {
        results.insert("witness_error".into(), json!(err));
    }
    if let Some(c) = &decision.certificate {
        results.insert("certificate_gap".into(), json!(c.gap));
    }

    if let Some(path) = &args.emit_witness {
        if let Some(w) = &decision.witness {
            let payload = json!({
                "T": matrix_to_value(w.t.matrix()),
                "D": w.dlist.iter().map(|d| matrix_to_value(d.matrix())).collect::<Vec<_>>(),
                "A": Value::Null,
                "gap": Value::Null,
            });
            write_evidence(path, &payload)?;
            results.insert("witness_file".into(), json!(path));
        }
    }
    if let Some(path) = &args.emit_certificate {
        if let Some(c) = &decision.certificate {
            let payload = json!({
                "T": Value::Null,
                "D": Value::Null,
                "A": matrix_to_value(&c.a_matrix),
                "gap": c.gap,
            });
            write_evidence(path, &payload)?;
            results.insert("certificate_file".into(), json!(path));
        }
    }
    let exit = if decision.verdict { 0 } else { 1 };
    Ok((Value::Object(results), exit))
}

fn decide_l2(args: &DecideL2Args, ctx: &mut Ctx) -> Result<(Value, i32), CliError> {
    let p = ctx.read_joint(&args.source)?;
    let q = ctx.read_joint(&args.target)?;
    let cp = standard_form(&p)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.source.clone()))?
        .canonical;
    let cq = standard_form(&q)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.target.clone()))?
        .canonical;
    let eps = ctx.tolerance.unwrap_or(condmaj::tol::EPS_WIT);
    let (verdict, ws) = closedform::decide_l2_with(&cp, &cq, eps)
        .map_err(|e| CliError::new("decision-error", e.to_string(), args.source.clone()))?;
    let mut results = Map::new();
    results.insert("verdict".into(), json!(verdict));
    results.insert("w_plus".into(), json!(ws.w_plus));
    results.insert("w_minus".into(), json!(ws.w_minus));
    results.insert("w_zero".into(), json!(ws.w_zero));
    results.insert("w_one".into(), json!(ws.w_one));
    if args.explain {
        results.insert(
            "workspace".into(),
            serde_json::to_value(&ws)
                .map_err(|e| CliError::new("internal", e.to_string(), "workspace"))?,
        );
    }
    let exit = if verdict { 0 } else { 1 };
    Ok((Value::Object(results), exit))
}

fn standardize(path: &str, ctx: &mut Ctx) -> Result<(Value, i32), CliError> {
    let p = ctx.read_joint(path)?;
    let r = standard_form(&p)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), path.to_string()))?;
    let flags: Vec<Value> = r
        .near_threshold
        .iter()
        .map(|f| {
            json!({
                "columns": [f.columns.0, f.columns.1],
                "residual": f.residual,
                "threshold": f.threshold,
                "merged": f.merged,
            })
        })
        .collect();
    let results = json!({
        "canonical": matrix_to_value(r.canonical.matrix()),
        "row_permutations": r.row_permutations,
        "merge_groups": r.merge_groups,
        "column_order": r.column_order,
        "dropped_columns": r.dropped_columns,
        "near_threshold_merges": flags,
    });
    Ok((results, 0))
}

fn measure(args: &MeasureArgs, ctx: &mut Ctx) -> Result<(Value, i32), CliError> {
    let p = ctx.read_joint(&args.matrix)?;
    let phi = parse_phi(&args.phi)?;
    let value = u_phi(&p, &phi);
    Ok((json!({"phi": args.phi, "value": value}), 0))
}

fn min_uncertainty(args: &MinUncertaintyArgs, ctx: &mut Ctx) -> Result<(Value, i32), CliError> {
    let text = ctx.read(&args.state)?;
    let sigma = jsonio::parse_cq_state(&text)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.state.clone()))?;
    let phi = parse_phi(&args.phi)?;
    let budget = SearchBudget {
        grid: args.grid,
        extra_povms: args.extra_povms,
        seed: ctx.seed,
    };
    let value = min_classical_uncertainty(&sigma, &phi, &budget)
        .map_err(|e| CliError::new("measure-error", e.to_string(), args.state.clone()))?;
    Ok((
        json!({
            "phi": args.phi,
            "value": value,
            "grid": args.grid,
            "extra_povms": args.extra_povms,
        }),
        0,
    ))
}

fn joint_uncertainty_cmd(
    args: &JointUncertaintyArgs,
    ctx: &mut Ctx,
) -> Result<(Value, i32), CliError> {
    let text_a = ctx.read(&args.state_a)?;
    let text_b = ctx.read(&args.state_b)?;
    let sigma = jsonio::parse_cq_state(&text_a)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.state_a.clone()))?;
    let gamma = jsonio::parse_cq_state(&text_b)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.state_b.clone()))?;
    let phi = parse_phi(&args.phi)?;
    let jcl = JointMeasure::SumPhi(phi.clone(), phi);
    let budget = SearchBudget {
        grid: args.grid,
        extra_povms: args.extra_povms,
        seed: ctx.seed,
    };
    let value = joint_uncertainty(&sigma, &gamma, &jcl, &budget)
        .map_err(|e| CliError::new("measure-error", e.to_string(), args.state_a.clone()))?;
    Ok((json!({"phi": args.phi, "value": value}), 0))
}

fn qbound(args: &QboundArgs, ctx: &mut Ctx) -> Result<(Value, i32), CliError> {
    let text = ctx.read(&args.state)?;
    let sigma = jsonio::parse_cq_state(&text)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.state.clone()))?;
    match args.k {
        None => {
            let omega = args.omega.unwrap_or(0.0);
            let bound = pure_case_bound(&sigma, args.j, omega)
                .map_err(|e| CliError::new("bound-error", e.to_string(), args.state.clone()))?;
            Ok((
                json!({
                    "route": "pure-conditionals",
                    "bound": omega_bound_to_value(&bound),
                }),
                0,
            ))
        }
        Some(k) => {
            let dj = eigendecomposition(sigma.state(args.j));
            let dk = eigendecomposition(sigma.state(k));
            let tq = tq_bound(&sigma, args.j, k, &dj, &dk)
                .map_err(|e| CliError::new("bound-error", e.to_string(), args.state.clone()))?;
            let omega = args.omega.unwrap_or(tq.omega_star);
            let psi = tq
                .psi_of_omega(omega)
                .map_err(|e| CliError::new("bound-error", e.to_string(), "--omega"))?;
            let flag0 = condmaj::quantum::basis_vector(psi.len(), 0);
            let bound = OmegaBoundQuantum {
                omega,
                flag0_state: flag0,
                psi,
            };
            Ok((
                json!({
                    "route": "decomposition-pair",
                    "omega_star": tq.omega_star,
                    "overlap_mass": tq.r_total,
                    "bound": omega_bound_to_value(&bound),
                }),
                0,
            ))
        }
    }
}

fn bound_tripartite(args: &BoundTripartiteArgs, ctx: &mut Ctx) -> Result<(Value, i32), CliError> {
    let t1 = ctx.read(&args.basis1)?;
    let t2 = ctx.read(&args.basis2)?;
    let b1 = jsonio::parse_basis(&t1)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.basis1.clone()))?;
    let b2 = jsonio::parse_basis(&t2)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.basis2.clone()))?;
    let bound = tripartite_bound(&b1, &b2, args.alpha)
        .map_err(|e| CliError::new("bound-error", e.to_string(), "--alpha"))?;
    let matrix = bound.omega_matrix.as_matrix.matrix();
    let emitted = if args.compact {
        // Trim trailing all-zero rows for display.
        let keep = (0..matrix.rows)
            .rev()
            .find(|&r| matrix.row(r).iter().any(|&v| v != 0.0))
            .map_or(1, |r| r + 1);
        let mut data = Vec::with_capacity(keep * matrix.cols);
        for r in 0..keep {
            data.extend_from_slice(matrix.row(r));
        }
        condmaj::Matrix {
            rows: keep,
            cols: matrix.cols,
            data,
        }
    } else {
        matrix.clone()
    };
    let mut results = Map::new();
    results.insert("overlap_c".into(), json!(bound.c));
    results.insert("eta".into(), json!(bound.eta));
    results.insert("alpha".into(), json!(bound.alpha));
    results.insert("beta".into(), json!(bound.beta));
    results.insert("plateau_count".into(), json!(bound.l));
    results.insert("omega".into(), json!(bound.omega_matrix.omega.as_slice()));
    results.insert("bound_matrix".into(), matrix_to_value(&emitted));
    results.insert("trivial".into(), json!(bound.trivial));
    if bound.trivial {
        results.insert(
            "warning".into(),
            json!("alpha outside the informative range (eta, 1); the bound is a point mass"),
        );
    }
    if let Some(samples) = args.monte_carlo {
        results.insert(
            "eta_monte_carlo".into(),
            json!(eta_monte_carlo(&b1, &b2, samples, ctx.seed)),
        );
        let c = overlap_constant(&b1, &b2);
        results.insert("eta_closed_form".into(), json!(0.25 * (1.0 + c) * (1.0 + c)));
    }
    Ok((Value::Object(results), 0))
}

fn bound_bipartite(args: &BoundBipartiteArgs, ctx: &mut Ctx) -> Result<(Value, i32), CliError> {
    let schmidt_text = ctx.read(&args.schmidt)?;
    let schmidt = jsonio::parse_prob_vector(&schmidt_text)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.schmidt.clone()))?;
    let s_text = ctx.read(&args.sbasis)?;
    let t_text = ctx.read(&args.tbasis)?;
    let sbasis = jsonio::parse_basis(&s_text)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.sbasis.clone()))?;
    let tbasis = jsonio::parse_basis(&t_text)
        .map_err(|e| CliError::new("invalid-input", e.to_string(), args.tbasis.clone()))?;
    let idx: Vec<usize> = args
        .indices
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::new("usage", e.to_string(), "--indices"))?;
    if idx.len() != 4 {
        return Err(CliError::new(
            "usage",
            "expected four comma-separated indices x1,z1,x2,z2",
            "--indices",
        ));
    }
    let bound = bipartite_bound(
        &schmidt, &sbasis, &tbasis, idx[0], idx[1], idx[2], idx[3], args.omega,
    )
    .map_err(|e| CliError::new("bound-error", e.to_string(), "--indices"))?;
    let omega_state = bound
        .omega_state()
        .map_err(|e| CliError::new("bound-error", e.to_string(), "--omega"))?;
    Ok((
        json!({
            "px": bound.px,
            "qz": bound.qz,
            "omega": bound.omega,
            "psi": complex_vector_to_value(&bound.psi),
            "bound_state": cq_state_to_value(&omega_state),
        }),
        0,
    ))
}

fn selftest(full: bool, ctx: &mut Ctx) -> Result<(Value, i32), CliError> {
    let mut budget = if full {
        SuiteBudget::full()
    } else {
        SuiteBudget::reduced()
    };
    budget.seed = ctx.seed;
    let checks = run_all(&budget);
    let all_passed = checks.iter().all(|c| c.passed);
    let lines: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "passed": c.passed,
                "details": c.details,
                "elapsed_ms": c.elapsed_ms as u64,
            })
        })
        .collect();
    Ok((
        json!({"passed": all_passed, "checks": lines, "full": full}),
        if all_passed { 0 } else { 1 },
    ))
}
