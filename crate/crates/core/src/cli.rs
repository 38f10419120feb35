//! The `paramark` command line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::etr::{
    check_witness, encode, in_domain, to_smt_script_with, EncodingRequest, EtrError, SolverStatus,
    Style,
};
use crate::io::{parse_dimacs, parse_model, parse_poly_system, print_model_with_header};
use crate::model::{instantiate, ModelError, ParametricModel};
use crate::oracle::{sweep, GridKind, GridSpec};
use crate::polyalg::{format_rational, parse_polynomial, parse_rational, rat, Rational, Valuation};
use crate::qualitative::{decide_qualitative, QualError, QualKind, QualProblem};
use crate::quantitative::{
    mc_reach_exact, mdp_reach_extremum_exact, solution_function, QuantError,
};
use crate::reductions::{self, ReductionError, Sat3Variant};
use crate::solver::{configured_solver, run_solver, SolverRunError};
use crate::types::{Domain, Mode, Quantifier, Relop};

/// Largest number of grid points an oracle sweep will visit.
pub const MAX_GRID_POINTS: usize = 2_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "paramark",
    version,
    about = "Parameter synthesis for parametric Markov models"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether some valuation meets the threshold.
    Check(CheckArgs),
    /// Print the SMT-LIB encoding of a query.
    Encode(EncodeArgs),
    /// Print the reachability probability as a rational function.
    SolutionFunction(SolutionArgs),
    /// Evaluate the reachability probability at a valuation.
    Instantiate(InstantiateArgs),
    /// Decide a qualitative reachability problem.
    Qualitative(QualitativeArgs),
    /// Build a gadget model.
    Reduce(ReduceArgs),
    /// Exact evaluation on a grid of valuations.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Model file.
    #[arg(short = 'm', long)]
    model: PathBuf,
    /// Comma-separated target states, replacing the ones in the file.
    #[arg(long, value_delimiter = ',')]
    targets: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RelopArg {
    Lt,
    Le,
    Gt,
    Ge,
}

impl From<RelopArg> for Relop {
    fn from(r: RelopArg) -> Relop {
        match r {
            RelopArg::Lt => Relop::Lt,
            RelopArg::Le => Relop::Le,
            RelopArg::Gt => Relop::Gt,
            RelopArg::Ge => Relop::Ge,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DomainArg {
    Wd,
    Gp,
    Bool,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Domain {
        match d {
            DomainArg::Wd => Domain::Wd,
            DomainArg::Gp => Domain::Gp,
            DomainArg::Bool => Domain::Boolean,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum QuantifierArg {
    Exists,
    Forall,
}

impl From<QuantifierArg> for Quantifier {
    fn from(q: QuantifierArg) -> Quantifier {
        match q {
            QuantifierArg::Exists => Quantifier::Exists,
            QuantifierArg::Forall => Quantifier::Forall,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StyleArg {
    Equations,
    SolutionFunction,
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[arg(long, value_enum, default_value = "ge")]
    relop: RelopArg,
    /// Rational threshold strictly between 0 and 1.
    #[arg(long, default_value = "1/2")]
    threshold: String,
    #[arg(long, value_enum, default_value = "wd")]
    domain: DomainArg,
    /// How strategies are quantified (models with choices only).
    #[arg(long, value_enum, default_value = "exists")]
    quantifier: QuantifierArg,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Print machine-readable JSON.
    #[arg(long)]
    json: bool,
    /// Write the result to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum, default_value = "equations")]
    style: StyleArg,
    /// SMT solver executable; defaults to $PARAMARK_SOLVER.
    #[arg(long)]
    solver: Option<PathBuf>,
    /// Solver timeout in seconds.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
    /// Grid resolution of the fallback sweep when no solver is configured.
    #[arg(long, default_value_t = 20)]
    grid: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum, default_value = "equations")]
    style: StyleArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SolutionArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct InstantiateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated assignments such as `x=2/5,y=7/10`.
    #[arg(long = "val", value_delimiter = ',')]
    val: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum QualKindArg {
    Positive,
    Unsure,
    Safety,
    AlmostSure,
}

impl From<QualKindArg> for QualKind {
    fn from(k: QualKindArg) -> QualKind {
        match k {
            QualKindArg::Positive => QualKind::Positive,
            QualKindArg::Unsure => QualKind::Unsure,
            QualKindArg::Safety => QualKind::Safety,
            QualKindArg::AlmostSure => QualKind::AlmostSure,
        }
    }
}

#[derive(Debug, Args)]
struct QualitativeArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Which qualitative question to decide.
    #[arg(long, value_enum)]
    kind: QualKindArg,
    #[arg(long, value_enum, default_value = "exists")]
    quantifier: QuantifierArg,
    #[arg(long, value_enum, default_value = "wd")]
    domain: DomainArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GadgetArg {
    Threshold,
    Gp,
    Poly,
    Sat3Positive,
    Sat3Almostsure,
    Sat3Unsure,
    Bcon4,
    ExistsToPmc,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    /// Which construction to apply.
    #[arg(long, value_enum)]
    gadget: GadgetArg,
    /// Input model (threshold, gp, exists-to-pmc).
    #[arg(short = 'm', long)]
    model: Option<PathBuf>,
    /// Comma-separated target states of the input model, replacing the ones in the file.
    #[arg(long, value_delimiter = ',')]
    targets: Vec<String>,
    /// Threshold to normalize to 1/2 (threshold gadget).
    #[arg(long)]
    threshold: Option<String>,
    /// Polynomial to realize (poly gadget).
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// DIMACS file (sat3 gadgets).
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// Polynomial system file (bcon4 gadget).
    #[arg(long)]
    system: Option<PathBuf>,
    /// Reject system polynomials above this degree.
    #[arg(long)]
    degree_bound: Option<u64>,
    /// Write the model to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, default_value_t = 20)]
    grid: u32,
    #[command(flatten)]
    output: OutputArgs,
}

/// A failed command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1: bad usage or input.
    Usage(String),
    /// Exit 2: no usable solver answer.
    Solver(String),
    /// Exit 3: an internal limit was hit or a result failed verification.
    Limit(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Solver(_) => 2,
            Failure::Limit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Solver(m) | Failure::Limit(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Failure {
        match e {
            ModelError::LimitExceeded(_) => Failure::Limit(e.to_string()),
            other => usage(other),
        }
    }
}

impl From<QuantError> for Failure {
    fn from(e: QuantError) -> Failure {
        match e {
            QuantError::EliminationBlowup(_) | QuantError::Inconsistent(_) => {
                Failure::Limit(e.to_string())
            }
            QuantError::Model(m) => m.into(),
            other => usage(other),
        }
    }
}

impl From<EtrError> for Failure {
    fn from(e: EtrError) -> Failure {
        match e {
            EtrError::Quant(q) => q.into(),
            EtrError::Model(m) => m.into(),
            other => usage(other),
        }
    }
}

impl From<QualError> for Failure {
    fn from(e: QualError) -> Failure {
        match e {
            QualError::Model(m) => m.into(),
            QualError::Quant(q) => q.into(),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Failure {
        match e {
            ReductionError::Model(m) => m.into(),
            other => usage(other),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_model(args: &ModelArgs) -> Result<ParametricModel, Failure> {
    let model = parse_model(&read(&args.model)?)
        .map_err(|e| usage(format!("{}: {e}", args.model.display())))?;
    retarget(model, &args.targets)
}

fn retarget(model: ParametricModel, targets: &[String]) -> Result<ParametricModel, Failure> {
    if targets.is_empty() {
        return Ok(model);
    }
    let set = model.resolve_states(targets)?;
    Ok(model.with_targets(set))
}

fn parse_threshold(text: &str) -> Result<Rational, Failure> {
    let t = parse_rational(text).map_err(|e| usage(format!("threshold: {e}")))?;
    if t <= rat(0, 1) || t >= rat(1, 1) {
        return Err(usage(format!(
            "threshold {t} must lie strictly between 0 and 1; thresholds 0 and 1 are qualitative problems"
        )));
    }
    Ok(t)
}

fn parse_valuation(items: &[String]) -> Result<Valuation, Failure> {
    let mut val = Valuation::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("expected name=value, got '{item}'")))?;
        let v = parse_rational(v.trim()).map_err(|e| usage(format!("value of {k}: {e}")))?;
        val.insert(k.trim().to_string(), v);
    }
    Ok(val)
}

fn valuation_text(val: &Valuation) -> String {
    val.iter()
        .map(|(k, v)| format!("{k}={}", format_rational(v)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn valuation_json(val: &Valuation) -> Value {
    Value::Object(
        val.iter()
            .map(|(k, v)| (k.clone(), Value::String(format_rational(v))))
            .collect(),
    )
}

fn grid_kind(domain: Domain) -> GridKind {
    match domain {
        Domain::Gp => GridKind::GpInterior,
        Domain::Wd => GridKind::WdClosed,
        Domain::Boolean => GridKind::Boolean,
    }
}

fn check_grid_size(model: &ParametricModel, grid: &GridSpec) -> Result<(), Failure> {
    let per = grid.values().len() as f64;
    let points = per.powi(model.params.len() as i32);
    if points > MAX_GRID_POINTS as f64 {
        return Err(Failure::Limit(format!(
            "grid has {points:.0} points, above the limit of {MAX_GRID_POINTS}"
        )));
    }
    Ok(())
}

fn emit(
    output: &OutputArgs,
    stdout: &mut dyn Write,
    text: String,
    json: Value,
) -> Result<(), Failure> {
    let body = if output.json {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&json).expect("JSON values serialize")
        )
    } else {
        text
    };
    write_out(output.out.as_deref(), stdout, &body)
}

fn write_out(out: Option<&Path>, stdout: &mut dyn Write, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
        None => stdout.write_all(body.as_bytes()).map_err(usage),
    }
}

fn request(query: &QueryArgs, style: StyleArg) -> EncodingRequest {
    EncodingRequest {
        quantifier: query.quantifier.into(),
        relop: query.relop.into(),
        domain: query.domain.into(),
        style: match style {
            StyleArg::Equations => Style::Equations,
            StyleArg::SolutionFunction => Style::SolutionFunction,
        },
    }
}

/// The model whose encoding uses threshold 1/2 in place of `threshold`.
fn normalized(model: &ParametricModel, threshold: &Rational) -> Result<ParametricModel, Failure> {
    if *threshold == rat(1, 2) {
        Ok(model.clone())
    } else {
        Ok(reductions::normalize_threshold(model, threshold)?)
    }
}

fn cmd_encode(args: &EncodeArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    let threshold = parse_threshold(&args.query.threshold)?;
    let target = normalized(&model, &threshold)?;
    let formula = encode(&target, &request(&args.query, args.style))?;
    write_out(
        args.output.out.as_deref(),
        stdout,
        &to_smt_script_with(&formula, &target.params),
    )
}

fn cmd_check(
    args: &CheckArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    let threshold = parse_threshold(&args.query.threshold)?;
    let req = request(&args.query, args.style);
    let Some(solver) = configured_solver(args.solver.as_deref()) else {
        let _ = writeln!(stderr, "no solver configured; falling back to a grid sweep");
        return check_by_sweep(&model, &req, &threshold, args, stdout);
    };
    let target = normalized(&model, &threshold)?;
    let formula = encode(&target, &req)?;
    let script = to_smt_script_with(&formula, &target.params);
    let raw =
        run_solver(&solver, &script, Duration::from_secs(args.timeout)).map_err(|e| match e {
            SolverRunError::Timeout(_) | SolverRunError::Spawn { .. } => {
                Failure::Solver(e.to_string())
            }
            SolverRunError::Io(_) => Failure::Solver(e.to_string()),
        })?;
    let verdict = crate::etr::parse_solver_model(&raw, &model.params)?;
    match verdict.status {
        SolverStatus::Unsat => emit(
            &args.output,
            stdout,
            "unsat\n".into(),
            json!({"answer": "unsat", "method": "solver", "witness": null, "verified": false}),
        ),
        SolverStatus::Unknown => Err(Failure::Solver("solver answered unknown".into())),
        SolverStatus::Error => Err(Failure::Solver(format!(
            "unexpected solver output: {}",
            raw.trim()
        ))),
        SolverStatus::Sat => {
            let Some(witness) = verdict.witness else {
                let _ = writeln!(
                    stderr,
                    "the solver's witness is not rational and cannot be re-verified"
                );
                return emit(
                    &args.output,
                    stdout,
                    "sat\nwitness: irrational\nverified: false\n".into(),
                    json!({"answer": "sat", "method": "solver", "witness": null, "verified": false, "irrational": true}),
                );
            };
            let verified = in_domain(&model, &witness, req.domain)?
                && check_witness(&model, req.quantifier, req.relop, &threshold, &witness)?;
            emit(
                &args.output,
                stdout,
                format!(
                    "sat\nwitness: {}\nverified: {verified}\n",
                    valuation_text(&witness)
                ),
                json!({"answer": "sat", "method": "solver", "witness": valuation_json(&witness), "verified": verified}),
            )?;
            if verified {
                Ok(())
            } else {
                Err(Failure::Limit(
                    "the solver's witness failed exact verification".into(),
                ))
            }
        }
    }
}

fn check_by_sweep(
    model: &ParametricModel,
    req: &EncodingRequest,
    threshold: &Rational,
    args: &CheckArgs,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let grid = GridSpec::new(args.grid, grid_kind(req.domain));
    check_grid_size(model, &grid)?;
    let mut checked = 0usize;
    for val in grid.valuations(&model.params) {
        if !in_domain(model, &val, req.domain)? {
            continue;
        }
        checked += 1;
        if check_witness(model, req.quantifier, req.relop, threshold, &val)? {
            return emit(
                &args.output,
                stdout,
                format!("sat\nwitness: {}\nverified: true\n", valuation_text(&val)),
                json!({"answer": "sat", "method": "oracle", "witness": valuation_json(&val), "verified": true, "checked": checked}),
            );
        }
    }
    emit(
        &args.output,
        stdout,
        format!("unknown\nno witness among {checked} grid points (semi-decision)\n"),
        json!({"answer": "unknown", "method": "oracle", "witness": null, "verified": false, "checked": checked, "semi_decision": true}),
    )
}

fn cmd_solution_function(args: &SolutionArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    if !model.is_pmc() {
        return Err(usage("solution functions are defined for chains only"));
    }
    let rf = solution_function(&model)?;
    let text = if rf.is_polynomial() && rf.den().is_one() {
        format!("{}\n", rf.num())
    } else {
        format!("{rf}\n")
    };
    emit(
        &args.output,
        stdout,
        text,
        json!({"numerator": rf.num().to_string(), "denominator": rf.den().to_string()}),
    )
}

fn cmd_instantiate(args: &InstantiateArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    let val = parse_valuation(&args.val)?;
    for k in val.keys() {
        if !model.params.contains(k) {
            return Err(usage(format!("unknown parameter {k}")));
        }
    }
    let concrete = instantiate(&model, &val)?;
    if concrete.is_chain() {
        let v = mc_reach_exact(&concrete)?;
        emit(
            &args.output,
            stdout,
            format!("{}\n", format_rational(&v)),
            json!({"value": format_rational(&v)}),
        )
    } else {
        let lo = mdp_reach_extremum_exact(&concrete, Mode::Min)?;
        let hi = mdp_reach_extremum_exact(&concrete, Mode::Max)?;
        let (lo, hi) = (
            lo.init_value(&concrete).clone(),
            hi.init_value(&concrete).clone(),
        );
        emit(
            &args.output,
            stdout,
            format!(
                "min: {}\nmax: {}\n",
                format_rational(&lo),
                format_rational(&hi)
            ),
            json!({"min": format_rational(&lo), "max": format_rational(&hi)}),
        )
    }
}

fn cmd_qualitative(args: &QualitativeArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    let problem = QualProblem {
        kind: args.kind.into(),
        quantifier: args.quantifier.into(),
        domain: args.domain.into(),
    };
    let answer = decide_qualitative(&model, &problem)?;
    let strategy = answer.strategy_witness.as_ref().map(|s| {
        s.0.iter()
            .enumerate()
            .map(|(state, &c)| {
                (
                    model.states[state].clone(),
                    model.action_name(state, c).to_string(),
                )
            })
            .collect::<Vec<_>>()
    });
    let mut text = format!("{}\n", if answer.answer { "yes" } else { "no" });
    if let Some(w) = &answer.witness {
        text.push_str(&format!("witness: {}\n", valuation_text(w)));
    }
    if let Some(st) = &strategy {
        let shown: Vec<String> = st.iter().map(|(s, a)| format!("{s}->{a}")).collect();
        text.push_str(&format!("strategy: {}\n", shown.join(", ")));
    }
    emit(
        &args.output,
        stdout,
        text,
        json!({
            "answer": answer.answer,
            "witness": answer.witness.as_ref().map(valuation_json),
            "strategy": strategy.map(|st| st.into_iter().map(|(s, a)| json!({"state": s, "action": a})).collect::<Vec<_>>()),
        }),
    )
}

fn cmd_reduce(args: &ReduceArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let input_model = || -> Result<ParametricModel, Failure> {
        let path = args
            .model
            .as_ref()
            .ok_or_else(|| usage("this gadget needs --model"))?;
        let model =
            parse_model(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        retarget(model, &args.targets)
    };
    let cnf = || -> Result<crate::io::Cnf3, Failure> {
        let path = args
            .cnf
            .as_ref()
            .ok_or_else(|| usage("this gadget needs --cnf"))?;
        parse_dimacs(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
    };
    let (model, header) = match args.gadget {
        GadgetArg::Threshold => {
            let text = args
                .threshold
                .as_deref()
                .ok_or_else(|| usage("the threshold gadget needs --threshold"))?;
            let lambda = parse_rational(text).map_err(usage)?;
            let m = reductions::normalize_threshold(&input_model()?, &lambda)?;
            (
                m,
                vec![format!(
                    "gadget: threshold normalization, lambda = {lambda}"
                )],
            )
        }
        GadgetArg::Gp => (
            reductions::gp_gadget(&input_model()?)?,
            vec!["gadget: graph preservation".into()],
        ),
        GadgetArg::Poly => {
            let text = args
                .poly
                .as_deref()
                .ok_or_else(|| usage("the poly gadget needs --poly"))?;
            let f = parse_polynomial(text).map_err(usage)?;
            let r = reductions::poly_to_pmc(&f, &[]);
            (
                r.pmc,
                vec![
                    format!("gadget: polynomial chain for {f}"),
                    format!(
                        "solution function = (f + A) / B with A = {}, B = {}",
                        r.a_shift, r.b_scale
                    ),
                ],
            )
        }
        GadgetArg::Sat3Positive => (
            reductions::sat3_to_pmc(&cnf()?, Sat3Variant::Positive),
            vec!["gadget: 3-CNF, positive reachability".into()],
        ),
        GadgetArg::Sat3Almostsure => (
            reductions::sat3_to_pmc(&cnf()?, Sat3Variant::AlmostSure),
            vec!["gadget: 3-CNF, almost-sure reachability".into()],
        ),
        GadgetArg::Sat3Unsure => (
            reductions::sat3_to_pmc(&cnf()?, Sat3Variant::Unsure),
            vec!["gadget: 3-CNF, reachability below one".into()],
        ),
        GadgetArg::Bcon4 => {
            let path = args
                .system
                .as_ref()
                .ok_or_else(|| usage("the bcon4 gadget needs --system"))?;
            let system = parse_poly_system(&read(path)?, args.degree_bound)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            (
                reductions::bcon4ineq_to_pmdp(&system)?,
                vec!["gadget: strict polynomial inequalities, all strategies below 1/2".into()],
            )
        }
        GadgetArg::ExistsToPmc => (
            reductions::pmdp_exists_to_pmc(&input_model()?)?.pmc,
            vec!["gadget: choices replaced by parametric coin trees".into()],
        ),
    };
    write_out(
        args.out.as_deref(),
        stdout,
        &print_model_with_header(&model, &header),
    )
}

fn cmd_oracle(args: &OracleArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    let threshold =
        parse_rational(&args.query.threshold).map_err(|e| usage(format!("threshold: {e}")))?;
    let domain: Domain = args.query.domain.into();
    let grid = GridSpec::new(args.grid, grid_kind(domain));
    check_grid_size(&model, &grid)?;
    let report = sweep(
        &model,
        args.query.quantifier.into(),
        args.query.relop.into(),
        &threshold,
        &grid,
    );
    let mut text = format!(
        "checked: {}\nwitnesses: {}\n",
        report.checked,
        report.witnesses.len()
    );
    for w in &report.witnesses {
        text.push_str(&format!(
            "  {} -> {}\n",
            valuation_text(&w.val),
            format_rational(&w.value)
        ));
    }
    emit(&args.output, stdout, text, report.to_json())
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a, stdout, stderr),
        Command::Encode(a) => cmd_encode(a, stdout),
        Command::SolutionFunction(a) => cmd_solution_function(a, stdout),
        Command::Instantiate(a) => cmd_instantiate(a, stdout),
        Command::Qualitative(a) => cmd_qualitative(a, stdout),
        Command::Reduce(a) => cmd_reduce(a, stdout),
        Command::Oracle(a) => cmd_oracle(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.exit_code()
        }
    }
}
