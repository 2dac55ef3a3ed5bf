//! Command dispatch and reports for the `dilog` binary.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{Map, Value};

use dilog_core::bloch_fq::{self, oracle};
use dilog_core::numerics::{evaluate_bloch_wigner, evaluate_rogers, DEFAULT_TOLERANCE};
use dilog_core::padic::{branch_diff, Branch, PadicNumber, DEFAULT_PRECISION, DEFAULT_PRIME};
use dilog_core::syntax::{parse_document, parse_expression, parse_rational, render_document, IdentityDoc};
use dilog_core::{
    check_constant, check_constant_cc, check_constant_padic, check_constant_real, del, evaluate_at_point,
    five_term, inversion, iterate, numeric_probe, c_element, ConstancyCertificate, Context, FormalSum,
    ProbeDomain, Scalar, SpecPlan, SpecStep, Substituted, WedgeElement,
};

/// Seed used by the numeric probe unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 20_240_601;
/// Largest prime for which the brute-force oracles are run.
pub const ORACLE_MAX_PRIME: u64 = 7;

#[derive(Parser, Debug)]
#[command(name = "dilog", version, about = "Exact verification of dilogarithm functional equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputOpts {
    /// Emit JSON instead of `key: value` lines.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ModeOpts {
    /// Test constancy on the real locus (Rogers dilogarithm).
    #[arg(long, conflicts_with_all = ["cc", "padic"])]
    pub real: bool,
    /// Test constancy where the declared variable pairs are conjugate.
    #[arg(long, conflicts_with = "padic")]
    pub cc: bool,
    /// Test constancy of the p-adic dilogarithm for this prime.
    #[arg(long, value_name = "P")]
    pub padic: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether the dilogarithm of an identity document is constant.
    Check {
        file: PathBuf,
        #[command(flatten)]
        mode: ModeOpts,
        /// Number of numeric sample points (0 disables the probe).
        #[arg(long, default_value_t = 200)]
        probe: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Apply a sequence of specializations `var=target[,c=aux]`.
    Specialize {
        file: PathBuf,
        /// A step such as `t=1`, `t=inf,c=2` or `t2=-(t1+t3),c=t1+t3^2`.
        #[arg(long = "step", value_name = "VAR=TARGET[,c=AUX]")]
        steps: Vec<String>,
    },
    /// Print the boundary and its β₁/β₂/β₃ decomposition.
    Wedge { file: PathBuf },
    /// Emit a relation instance as an identity document.
    Relations {
        #[arg(value_enum)]
        kind: RelationKind,
        /// Comma-separated variable names.
        #[arg(long, default_value = "x,y")]
        vars: String,
        /// Arguments: `x y` for five-term, `x` otherwise.
        args: Vec<String>,
    },
    /// Sample the dilogarithm sum at random points.
    Probe {
        file: PathBuf,
        #[command(flatten)]
        mode: ModeOpts,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Pre-Bloch and modified Bloch groups of F_p.
    Blochfq {
        p: u64,
        /// Cross-check against the brute-force oracles (p ≤ 7).
        #[arg(long)]
        oracle: bool,
    },
    /// Change of the p-adic constant between two branches of log_p.
    PadicBranchDiff {
        file: PathBuf,
        /// Comma-separated rational coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        /// log_p(p) on the first branch (a rational).
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        log_a: String,
        /// log_p(p) on the second branch (a rational).
        #[arg(long, allow_hyphen_values = true)]
        log_b: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    FiveTerm,
    Inversion,
    C,
}

/// Ordered `key: value` report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    fields: Vec<(String, Value)>,
    /// Printed verbatim in text mode instead of the fields.
    raw: Option<String>,
}

impl Report {
    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_text(&self) -> String {
        if let Some(raw) = &self.raw {
            return raw.clone();
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            match v {
                Value::Array(items) => {
                    out.push_str(&format!("{k}:\n"));
                    for it in items {
                        out.push_str(&format!("  - {}\n", text_value(it)));
                    }
                }
                _ => out.push_str(&format!("{k}: {}\n", text_value(v))),
            }
        }
        out
    }

    /// JSON object with sorted keys.
    pub fn to_json(&self) -> String {
        let map: Map<String, Value> = self.fields.iter().cloned().collect();
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
        s.push('\n');
        s
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// Outcome of a command: the report and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub code: i32,
}

pub fn load(path: &PathBuf) -> Result<IdentityDoc, String> {
    let src = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_document(&src).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs a command, returning the rendered report and exit code. `Err` is an
/// input or evaluation error, reported with exit code 2.
pub fn run(cli: &Cli, out: &OutputOpts) -> Result<(String, i32), String> {
    let start = Instant::now();
    let outcome = dispatch(&cli.command)?;
    let mut report = outcome.report;
    if out.timing {
        report.push("elapsed_ms", (start.elapsed().as_secs_f64() * 1e3).round() as u64);
    }
    let text = if out.json { report.to_json() } else { report.to_text() };
    Ok((text, outcome.code))
}

pub fn dispatch(cmd: &Command) -> Result<Outcome, String> {
    match cmd {
        Command::Check { file, mode, probe, tolerance, seed } => cmd_check(&load(file)?, mode, *probe, *tolerance, *seed),
        Command::Specialize { file, steps } => cmd_specialize(&load(file)?, steps),
        Command::Wedge { file } => cmd_wedge(&load(file)?),
        Command::Relations { kind, vars, args } => cmd_relations(*kind, vars, args),
        Command::Probe { file, mode, samples, seed } => cmd_probe(&load(file)?, mode, *samples, *seed),
        Command::Blochfq { p, oracle } => cmd_blochfq(*p, *oracle),
        Command::PadicBranchDiff { file, point, prime, log_a, log_b, precision } => {
            cmd_padic_branch_diff(&load(file)?, point, *prime, log_a, log_b, *precision)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Mode {
    Complex,
    Real,
    Conjugate(Vec<(usize, usize)>),
    Padic(u64),
}

impl Mode {
    fn from_opts(doc: &IdentityDoc, m: &ModeOpts) -> Result<Mode, String> {
        if let Some(p) = m.padic {
            return Ok(Mode::Padic(p));
        }
        if m.real {
            return Ok(Mode::Real);
        }
        if m.cc {
            let pairs = doc.conjugate_pairs.clone().ok_or("--cc needs a document with `conjugate-pairs:`")?;
            return Ok(Mode::Conjugate(pairs));
        }
        Ok(Mode::Complex)
    }

    fn name(&self) -> String {
        match self {
            Mode::Complex => "complex".into(),
            Mode::Real => "real".into(),
            Mode::Conjugate(_) => "conjugate-pairs".into(),
            Mode::Padic(p) => format!("padic (p = {p})"),
        }
    }

    fn domain(&self) -> Option<ProbeDomain> {
        match self {
            Mode::Complex => Some(ProbeDomain::Complex),
            Mode::Real => Some(ProbeDomain::Real),
            Mode::Conjugate(pairs) => Some(ProbeDomain::ConjugatePairs(pairs.clone())),
            Mode::Padic(_) => None,
        }
    }
}

fn fmt_value(x: f64) -> String {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn fmt_bound(x: f64) -> String {
    format!("{x:.3e}")
}

fn header(report: &mut Report, doc: &IdentityDoc) {
    if let Some(n) = &doc.name {
        report.push("name", n.as_str());
    }
    report.push("variables", doc.ctx.vars().join(", "));
    report.push("sum", doc.sum.render());
}

/// Candidate coordinates for the evaluation point.
fn candidates() -> Vec<Scalar> {
    [(2, 1), (3, 1), (-1, 1), (1, 2), (5, 1), (-2, 1), (1, 3), (7, 1), (-3, 1), (2, 3), (11, 1), (-1, 2)]
        .iter()
        .map(|&(a, b)| Scalar::from_ratio(a, b))
        .collect()
}

/// First admissible rational point in a fixed enumeration order; paired
/// variables receive equal real coordinates.
fn find_point(alpha: &FormalSum, pairs: Option<&[(usize, usize)]>) -> Option<Vec<Scalar>> {
    let n = alpha.ctx().nvars();
    let mut rep: Vec<usize> = (0..n).collect();
    if let Some(ps) = pairs {
        for &(a, b) in ps {
            rep[b] = a;
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| rep[i] == i).collect();
    let cands = candidates();
    let mut idx = vec![0usize; free.len()];
    for _ in 0..20_000 {
        let mut point = vec![Scalar::from_int(0); n];
        for (k, &v) in free.iter().enumerate() {
            point[v] = cands[idx[k]].clone();
        }
        for i in 0..n {
            point[i] = point[rep[i]].clone();
        }
        if evaluate_at_point(alpha, &point).is_ok() {
            return Some(point);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < cands.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    None
}

fn render_point(ctx: &Context, point: &[Scalar]) -> String {
    ctx.vars().iter().zip(point).map(|(v, x)| format!("{v} = {x}")).collect::<Vec<_>>().join(", ")
}

fn certificate(doc: &IdentityDoc, mode: &Mode) -> Result<ConstancyCertificate, String> {
    let a = &doc.sum;
    match mode {
        Mode::Complex => check_constant(a).map_err(|e| e.to_string()),
        Mode::Real => check_constant_real(a).map_err(|e| e.to_string()),
        Mode::Conjugate(pairs) => check_constant_cc(a, pairs).map_err(|e| e.to_string()),
        Mode::Padic(p) => check_constant_padic(a, *p).map_err(|e| e.to_string()),
    }
}

pub fn cmd_check(doc: &IdentityDoc, m: &ModeOpts, probe: usize, tol: f64, seed: u64) -> Result<Outcome, String> {
    let mode = Mode::from_opts(doc, m)?;
    let cert = certificate(doc, &mode)?;
    let ctx = &doc.ctx;
    let mut r = Report::default();
    r.push("command", "check");
    header(&mut r, doc);
    r.push("mode", mode.name());
    r.push("verdict", if cert.is_constant() { "constant" } else { "not constant" });
    r.push("witness", cert.witness.as_ref().map(|w| Value::from(w.render(ctx))).unwrap_or(Value::Null));
    let b3 = cert.residual_beta3.render();
    r.push("beta3", b3);
    let mut probe_dev = None;
    if let (Some(domain), true) = (mode.domain(), probe > 0) {
        r.push("probe_seed", seed);
        match numeric_probe(&doc.sum, &domain, probe, seed) {
            Ok(rep) => {
                r.push("probe_points", rep.points_used);
                r.push("probe_max_deviation", fmt_bound(rep.max_deviation));
                r.push("probe_mean", fmt_value(rep.mean_value));
                probe_dev = Some(rep.max_deviation);
                let agrees = if cert.is_constant() { rep.max_deviation <= tol } else { rep.max_deviation > tol };
                r.push("numeric_agreement", if agrees { "pass" } else { "fail" });
            }
            Err(e) => r.push("probe_error", e.to_string()),
        }
    }
    if cert.is_constant() {
        let pairs = match &mode {
            Mode::Conjugate(p) => Some(p.as_slice()),
            _ => None,
        };
        match find_point(&doc.sum, pairs) {
            Some(point) => {
                let at = evaluate_at_point(&doc.sum, &point).map_err(|e| e.to_string())?;
                r.push("point", render_point(ctx, &point));
                r.push("value_at_point", at.render());
                let value = match &mode {
                    Mode::Complex | Mode::Conjugate(_) => {
                        let z: Vec<Complex64> = point.iter().map(|s| {
                            let (re, im) = s.to_f64_pair();
                            Complex64::new(re, im)
                        }).collect();
                        Some(evaluate_bloch_wigner(&doc.sum, &z).map_err(|e| e.to_string())?)
                    }
                    Mode::Real => {
                        let x: Vec<f64> = point.iter().map(|s| s.to_f64_pair().0).collect();
                        Some(evaluate_rogers(&doc.sum, &x).map_err(|e| e.to_string())?.centered())
                    }
                    Mode::Padic(_) => None,
                };
                if let Some(v) = value {
                    let bound = probe_dev.unwrap_or(tol).max(f64::EPSILON);
                    r.push("constant", format!("{} ± {}", fmt_value(v), fmt_bound(bound)));
                }
            }
            None => r.push("point", Value::Null),
        }
    }
    for n in &cert.notes {
        r.push("note", n.as_str());
    }
    Ok(Outcome { report: r, code: if cert.is_constant() { 0 } else { 1 } })
}

/// Parses `var=target[,c=aux]`.
pub fn parse_step(ctx: &Context, src: &str) -> Result<SpecStep, String> {
    let (head, aux) = match src.split_once(",c=") {
        Some((h, a)) => (h, Some(a)),
        None => (src, None),
    };
    let (var, target) = head.split_once('=').ok_or_else(|| format!("step `{src}`: expected VAR=TARGET"))?;
    let target = match target.trim() {
        "inf" | "infinity" | "∞" => Substituted::Infinity,
        t => Substituted::Finite(parse_expression(t, ctx).map_err(|e| format!("step `{src}`: {e}"))?),
    };
    let aux = aux.map(|a| parse_expression(a, ctx)).transpose().map_err(|e| format!("step `{src}`: {e}"))?;
    SpecStep::new(ctx, var.trim(), target, aux).map_err(|e| format!("step `{src}`: {e}"))
}

fn cmd_specialize(doc: &IdentityDoc, steps: &[String]) -> Result<Outcome, String> {
    let ctx = &doc.ctx;
    let steps: Vec<SpecStep> = steps.iter().map(|s| parse_step(ctx, s)).collect::<Result<_, _>>()?;
    let plan = SpecPlan::new(ctx, steps).map_err(|e| e.to_string())?;
    let result = iterate(&doc.sum, &plan).map_err(|e| e.to_string())?;
    let mut r = Report::default();
    r.push("command", "specialize");
    header(&mut r, doc);
    let rendered: Vec<Value> = plan
        .steps
        .iter()
        .map(|s| {
            let target = match &s.target {
                Substituted::Infinity => "inf".to_string(),
                Substituted::Finite(b) => b.render(ctx.vars()),
            };
            Value::from(format!("{} = {target}, c = {}", ctx.vars()[s.var], s.aux.render(ctx.vars())))
        })
        .collect();
    r.push("steps", rendered);
    r.push("result", result.render());
    Ok(Outcome { report: r, code: 0 })
}

fn render_wedge(w: &WedgeElement) -> String {
    if w.is_zero() {
        "0".into()
    } else {
        w.render()
    }
}

fn cmd_wedge(doc: &IdentityDoc) -> Result<Outcome, String> {
    let w = del(&doc.sum).map_err(|e| e.to_string())?;
    let (b1, b2, b3) = w.decompose();
    let mut r = Report::default();
    r.push("command", "wedge");
    header(&mut r, doc);
    let basis: Vec<Value> = w.basis().iter().map(|p| Value::from(p.render(doc.ctx.vars()))).collect();
    r.push("basis", basis);
    r.push("boundary", render_wedge(&w));
    r.push("beta1", render_wedge(&b1));
    r.push("beta2", render_wedge(&b2));
    r.push("beta3", render_wedge(&b3));
    Ok(Outcome { report: r, code: 0 })
}

fn cmd_relations(kind: RelationKind, vars: &str, args: &[String]) -> Result<Outcome, String> {
    let names: Vec<&str> = vars.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let ctx = Context::rational(&names);
    let need = if kind == RelationKind::FiveTerm { 2 } else { 1 };
    if args.len() != need {
        return Err(format!("expected {need} argument(s), got {}", args.len()));
    }
    let fs: Vec<_> = args.iter().map(|a| parse_expression(a, &ctx)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let (sum, name) = match kind {
        RelationKind::FiveTerm => (five_term(&ctx, &fs[0], &fs[1]), "five-term relation"),
        RelationKind::Inversion => (inversion(&ctx, &fs[0]), "inversion relation"),
        RelationKind::C => (c_element(&ctx, &fs[0]), "reflection element"),
    };
    let sum = sum.map_err(|e| e.to_string())?;
    let doc = IdentityDoc { name: Some(name.into()), ctx, conjugate_pairs: None, sum };
    let text = render_document(&doc);
    let mut r = Report::default();
    r.push("document", text.as_str());
    r.raw = Some(text);
    Ok(Outcome { report: r, code: 0 })
}

fn cmd_probe(doc: &IdentityDoc, m: &ModeOpts, samples: usize, seed: u64) -> Result<Outcome, String> {
    let mode = Mode::from_opts(doc, m)?;
    let domain = mode.domain().ok_or("the probe has no p-adic mode")?;
    let rep = numeric_probe(&doc.sum, &domain, samples, seed).map_err(|e| e.to_string())?;
    let mut r = Report::default();
    r.push("command", "probe");
    header(&mut r, doc);
    r.push("mode", mode.name());
    r.push("seed", seed);
    r.push("points", rep.points_used);
    r.push("attempts", rep.attempts);
    r.push("mean", fmt_value(rep.mean_value));
    r.push("max_deviation", fmt_bound(rep.max_deviation));
    Ok(Outcome { report: r, code: 0 })
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn cmd_blochfq(p: u64, with_oracle: bool) -> Result<Outcome, String> {
    let s = bloch_fq::summarize(p).map_err(|e| e.to_string())?;
    let mut r = Report::default();
    r.push("command", "blochfq");
    r.push("p", p);
    r.push("generators", s.generators);
    r.push("five_term_rows", s.five_term_rows);
    r.push("inversion_rows", s.inversion_rows);
    r.push("wedge_order", s.wedge_order);
    r.push("pre_bloch_five_term", s.pre_bloch_five_term.to_string());
    r.push("pre_bloch", s.pre_bloch.to_string());
    r.push("modified_bloch", s.modified_bloch.to_string());
    r.push("relations_in_kernel", pass(s.relations_in_kernel));
    r.push("c_independent_of_choice", pass(s.c_facts.independent_of_c));
    r.push("three_c_in_relations", pass(s.c_facts.three_c_in_relations));
    let mut ok = s.relations_in_kernel && s.c_facts.passed();
    if with_oracle {
        if p > ORACLE_MAX_PRIME {
            return Err(format!("the oracles support p <= {ORACLE_MAX_PRIME}"));
        }
        let minors = oracle::pre_bloch_by_minors(p).map_err(|e| e.to_string())?;
        let enumerated = oracle::enumerate(p, 1_000_000).map_err(|e| e.to_string())?;
        let agree = match &enumerated {
            Some((pb, mb)) => minors == s.pre_bloch && *pb == s.pre_bloch && *mb == s.modified_bloch,
            None => false,
        };
        r.push("oracle_pre_bloch_minors", minors.to_string());
        if let Some((pb, mb)) = &enumerated {
            r.push("oracle_pre_bloch_enumerated", pb.to_string());
            r.push("oracle_modified_bloch_enumerated", mb.to_string());
        }
        r.push("oracle", pass(agree));
        ok &= agree;
    }
    Ok(Outcome { report: r, code: if ok { 0 } else { 1 } })
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    parse_rational(s).map(Scalar::from_rational).ok_or_else(|| format!("`{s}` is not a rational number"))
}

fn cmd_padic_branch_diff(
    doc: &IdentityDoc,
    point: &str,
    p: u64,
    log_a: &str,
    log_b: &str,
    prec: u32,
) -> Result<Outcome, String> {
    let point: Vec<Scalar> = point.split(',').map(|s| parse_scalar(s.trim())).collect::<Result<_, _>>()?;
    if point.len() != doc.ctx.nvars() {
        return Err(format!("expected {} coordinates, got {}", doc.ctx.nvars(), point.len()));
    }
    let branch = |s: &str| -> Result<Branch, String> {
        let q = parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number"))?;
        Ok(Branch::new(PadicNumber::from_rational(&q, p, prec)))
    };
    let (a, b) = (branch(log_a)?, branch(log_b)?);
    let w = del(&doc.sum).map_err(|e| e.to_string())?;
    let d = branch_diff(&w, &point, &a, &b, prec).map_err(|e| e.to_string())?;
    let mut r = Report::default();
    r.push("command", "padic-branch-diff");
    header(&mut r, doc);
    r.push("prime", p);
    r.push("precision", prec);
    r.push("point", render_point(&doc.ctx, &point));
    r.push("log_a", log_a);
    r.push("log_b", log_b);
    r.push("difference", d.to_string());
    Ok(Outcome { report: r, code: 0 })
}
