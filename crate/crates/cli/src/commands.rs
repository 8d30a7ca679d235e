//! Subcommands: argument handling, dispatch to the library, payloads.

use std::ffi::OsString;
use std::path::PathBuf;

use branchkit::algebra::{default_precision, weierstrass_prepare};
use branchkit::approot::{approximate_root, branch_data, branch_data_with_param, BranchData};
use branchkit::factor::{merle_verify_at, merle_precision, np_factorize, Factorization, MerleVerdict, SplitStatus};
use branchkit::intersection::{
    congruence_check, contact_index, imult, log_distance, verify_intersection_formula, BranchView, Check,
    Congruence, FormulaCase,
};
use branchkit::newton::{abhyankar_irreducible, newtonc_test, AbhyankarVerdict, NewtoncVerdict};
use branchkit::semigroup::{bezout, semigroup_data, CharSequence, GeneratorRelation};
use branchkit::synth::{build_branch, structural_form, verify_construction, SynthesisPlan};
use branchkit::{FieldSpec, Order, Parametrization, Series, YPolynomial};
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::parse::{
    parse_field, parse_i64_list, parse_poly, parse_series_t, parse_u64_list, split_top_level, FieldSpecRequest,
    ParseError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_LIMITATION: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "branchkit", version, about = "Invariants of plane algebroid branches over F_p and Q")]
pub struct Cli {
    /// Coefficient field: Q or F<p>.
    #[arg(long, global = true, default_value = "Q")]
    pub field: String,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Working x-precision for lifting and preparation.
    #[arg(long, global = true)]
    pub prec: Option<u64>,
    /// Also write the JSON payload to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide irreducibility (approximate roots, then single-pair and factorization fallbacks).
    Irr {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Characteristic sequence and key polynomials.
    Charseq {
        #[arg(allow_hyphen_values = true)]
        f: String,
        /// Parametrization "phi,psi" in t.
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
        /// t-precision for evaluating along the parametrization.
        #[arg(long)]
        tprec: Option<u64>,
    },
    /// Semigroup data of a characteristic sequence v0,..,vh.
    Semigroup { seq: String },
    /// Bezout coefficients of a over v0,..,vh.
    Bezout {
        #[arg(allow_hyphen_values = true)]
        a: i64,
        seq: String,
    },
    /// Intersection multiplicity i0(f,g).
    Imult {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Contact index and intersection formula for two branches.
    Contact {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Approximate d-th root.
    Approot {
        #[arg(allow_hyphen_values = true)]
        f: String,
        d: u64,
    },
    /// Branch with a prescribed characteristic sequence.
    Synth {
        seq: String,
        /// One nonzero constant per step, e.g. -1,-4.
        #[arg(long, allow_hyphen_values = true)]
        constants: Option<String>,
        /// Recompute every key value by intersection.
        #[arg(long)]
        verify: bool,
    },
    /// Factorization theorem for g (default: the polar df/dy) against the branch f.
    Merle {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Weierstrass preparation f = D·U.
    Prepare {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Math(#[from] branchkit::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {msg}")]
    Io { path: String, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use branchkit::Error as E;
        match self {
            CliError::Parse(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_LIMITATION,
            CliError::Math(e) => match e {
                E::Precision(_) | E::Unsupported(_) | E::IterationCap(_) | E::CharacteristicDivides { .. } => {
                    EXIT_LIMITATION
                }
                _ => EXIT_REJECTED,
            },
        }
    }
}

/// What a command produced: payload or error, diagnostics, exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub command: String,
    pub field: String,
    pub json: bool,
    pub out: Option<PathBuf>,
    pub result: Option<Value>,
    pub error: Option<String>,
    pub diagnostics: Vec<String>,
    pub exit_code: i32,
    /// Help or version text from the argument parser.
    pub help: Option<String>,
}

impl CommandResult {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "field": self.field,
            "exit_code": self.exit_code,
            "result": self.result,
            "error": self.error,
            "diagnostics": self.diagnostics,
        })
    }
}

struct Outcome {
    payload: Map<String, Value>,
    diagnostics: Vec<String>,
    exit_code: i32,
}

impl Outcome {
    fn new(payload: Map<String, Value>) -> Outcome {
        Outcome {
            payload,
            diagnostics: Vec::new(),
            exit_code: EXIT_OK,
        }
    }
}

struct Ctx {
    field: FieldSpec,
    prec: Option<u64>,
}

/// Parse arguments and run the command; never prints.
pub fn execute<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let json_flag = args.iter().any(|a| a == "--json");
    let mut res = CommandResult {
        command: echo,
        field: String::new(),
        json: json_flag,
        out: None,
        result: None,
        error: None,
        diagnostics: Vec::new(),
        exit_code: EXIT_OK,
        help: None,
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    res.help = Some(e.render().to_string());
                }
                _ => {
                    res.error = Some(e.render().to_string().trim_end().to_string());
                    res.exit_code = EXIT_USAGE;
                }
            }
            return res;
        }
    };
    res.json = cli.json;
    res.out = cli.out.clone();
    let field = match field_from(&cli.field) {
        Ok(f) => f,
        Err(e) => {
            res.field = cli.field.clone();
            res.exit_code = e.exit_code();
            res.error = Some(e.to_string());
            return res;
        }
    };
    res.field = field.to_string();
    let ctx = Ctx { field, prec: cli.prec };
    match dispatch(&ctx, &cli.command) {
        Ok(o) => {
            res.result = Some(Value::Object(o.payload));
            res.diagnostics = o.diagnostics;
            res.exit_code = o.exit_code;
        }
        Err(e) => {
            res.exit_code = e.exit_code();
            res.error = Some(e.to_string());
        }
    }
    if let Some(path) = &res.out {
        let text = serde_json::to_string_pretty(&res.to_json()).expect("JSON values serialize");
        if let Err(e) = std::fs::write(path, text + "\n") {
            let err = CliError::Io {
                path: path.display().to_string(),
                msg: e.to_string(),
            };
            res.exit_code = res.exit_code.max(err.exit_code());
            res.diagnostics.push(err.to_string());
        }
    }
    res
}

fn field_from(text: &str) -> Result<FieldSpec, CliError> {
    Ok(match parse_field(text)? {
        FieldSpecRequest::Rationals => FieldSpec::rationals(),
        FieldSpecRequest::Prime(p) => FieldSpec::prime(p)?,
    })
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Irr { f } => irr(ctx, f),
        Command::Charseq { f, param, tprec } => charseq(ctx, f, param.as_deref(), *tprec),
        Command::Semigroup { seq } => semigroup(seq),
        Command::Bezout { a, seq } => bezout_cmd(*a, seq),
        Command::Imult { f, g } => imult_cmd(ctx, f, g),
        Command::Contact { f, g } => contact(ctx, f, g),
        Command::Approot { f, d } => approot(ctx, f, *d),
        Command::Synth {
            seq,
            constants,
            verify,
        } => synth(ctx, seq, constants.as_deref(), *verify),
        Command::Merle { f, g, k } => merle(ctx, f, g.as_deref(), *k),
        Command::Prepare { f } => prepare(ctx, f),
    }
}

/// The curve germ of f: its Weierstrass polynomial when f is not
/// distinguished.
fn germ(ctx: &Ctx, text: &str, diags: &mut Vec<String>) -> Result<(YPolynomial, YPolynomial), CliError> {
    let f = parse_poly(text, ctx.field)?;
    if f.is_zero() {
        return Err(branchkit::Error::Degree("f = 0".into()).into());
    }
    if f.is_distinguished() {
        return Ok((f.clone(), f));
    }
    let m = f.at_x0().low_order().ok_or(branchkit::Error::ContainsXAxis)?;
    if m == 0 {
        return Err(branchkit::Error::Hypothesis("f(0,0) != 0: no curve through the origin".into()).into());
    }
    let b = ctx.prec.unwrap_or_else(|| default_precision(f.deg().max(m)).max(2 * f.deg_x() + 16));
    let (d, _) = weierstrass_prepare(&f, b)?;
    diags.push(format!(
        "f is not distinguished: working with its Weierstrass polynomial of degree {m} modulo x^{b}"
    ));
    Ok((f, d))
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("payloads are objects"),
    }
}

fn order_json(o: Order) -> Value {
    match o {
        Order::Finite(k) => json!(k),
        other => json!(other.to_string()),
    }
}

fn checks_json(checks: &[Check]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "pass": c.pass}))
            .collect(),
    )
}

/// Lifted factors are long; show them modulo x^DISPLAY_PREC.
const DISPLAY_PREC: u64 = 12;

fn short(p: &YPolynomial) -> String {
    if p.is_exact() {
        return p.to_string();
    }
    let n = p.coeffs().len();
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| if j + 1 == n { c.clone() } else { c.truncate(DISPLAY_PREC) })
        .collect();
    YPolynomial::new(p.field(), coeffs).to_string()
}

fn clusters_json(fz: &Factorization) -> Value {
    Value::Array(
        fz.clusters
            .iter()
            .map(|c| {
                json!({
                    "poly": short(&c.poly),
                    "multiplicity": c.multiplicity,
                    "status": status_name(c.status),
                    "i0_x": order_json(c.i0_x),
                })
            })
            .collect(),
    )
}

fn status_name(s: SplitStatus) -> &'static str {
    match s {
        SplitStatus::IrreducibleCertified => "irreducible_certified",
        SplitStatus::UnsplitOverBaseField => "unsplit_over_base_field",
    }
}

fn seq_summary(cs: &CharSequence, m: &mut Map<String, Value>) {
    m.insert("charseq".into(), json!(cs.values()));
    m.insert("conductor".into(), json!(cs.conductor()));
}

fn irr(ctx: &Ctx, text: &str) -> Result<Outcome, CliError> {
    let mut diags = Vec::new();
    let (f, d) = germ(ctx, text, &mut diags)?;
    let mut m = obj(json!({"polynomial": f.to_string(), "degree": d.deg()}));
    let mut exit_code = EXIT_OK;
    match abhyankar_irreducible(&d)? {
        AbhyankarVerdict::Irreducible(cert) => {
            m.insert("verdict".into(), json!("irreducible"));
            m.insert("method".into(), json!("approximate_roots"));
            seq_summary(&cert.charseq, &mut m);
            let polys: Vec<Value> = cert.polygons.iter().map(|s| json!([s.k, s.l])).collect();
            m.insert("polygons".into(), Value::Array(polys));
            let h = cert.charseq.h();
            let roots: Vec<String> = cert.roots[..h].iter().map(|r| r.to_string()).collect();
            m.insert("approximate_roots".into(), json!(roots));
        }
        AbhyankarVerdict::Reducible(reason) => {
            m.insert("verdict".into(), json!("reducible"));
            m.insert("method".into(), json!("approximate_roots"));
            m.insert("reason".into(), json!(reason.to_string()));
        }
        AbhyankarVerdict::Inapplicable { p, n } => {
            diags.push(format!("characteristic {p} divides deg f = {n}: approximate roots do not apply"));
            match newtonc_test(&d, &Series::zero(ctx.field))? {
                NewtoncVerdict::Irreducible { n, m: mm } => {
                    m.insert("verdict".into(), json!("irreducible"));
                    m.insert("method".into(), json!("single_pair"));
                    seq_summary(&CharSequence::new(vec![n, mm])?, &mut m);
                }
                NewtoncVerdict::Inconclusive(why) => {
                    diags.push(format!("single-pair test inconclusive: {why}"));
                    let b = ctx.prec.unwrap_or_else(|| default_precision(d.deg()));
                    let fz = np_factorize(&d, b)?;
                    let parts: u64 = fz.clusters.iter().map(|c| c.multiplicity).sum();
                    m.insert("clusters".into(), clusters_json(&fz));
                    if parts > 1 {
                        m.insert("verdict".into(), json!("reducible"));
                        m.insert("method".into(), json!("factorization"));
                    } else {
                        m.insert("verdict".into(), json!("inapplicable"));
                        m.insert("method".into(), json!("none"));
                        m.insert(
                            "reason".into(),
                            json!(format!("characteristic {p} divides {n} and no split was found over the base field")),
                        );
                        exit_code = EXIT_LIMITATION;
                    }
                }
            }
        }
    }
    Ok(Outcome {
        payload: m,
        diagnostics: diags,
        exit_code,
    })
}

fn charseq(ctx: &Ctx, text: &str, param: Option<&str>, tprec: Option<u64>) -> Result<Outcome, CliError> {
    let mut diags = Vec::new();
    let data: BranchData = match param {
        Some(p) => {
            let f = parse_poly(text, ctx.field)?;
            let parts = split_top_level(p);
            if parts.len() != 2 {
                return Err(CliError::Usage("--param expects two series \"phi,psi\"".into()));
            }
            let phi = parse_series_t(parts[0], ctx.field)?;
            let psi = parse_series_t(parts[1], ctx.field)?;
            let b = tprec.unwrap_or_else(|| (8 * f.deg() * f.deg()).max(128) as u64);
            let par = Parametrization::new(phi, psi, b)?;
            let along = branchkit::algebra::eval_order(&f, &par);
            if along.is_finite() {
                return Err(branchkit::Error::Hypothesis(format!("f does not vanish along the parametrization (order {along})")).into());
            }
            branch_data_with_param(&f, &par)?
        }
        None => {
            let (_, d) = germ(ctx, text, &mut diags)?;
            branch_data(&d)?
        }
    };
    let mut m = Map::new();
    seq_summary(&data.charseq, &mut m);
    m.insert("multiplicity".into(), json!(data.n));
    let keys: Vec<String> = data.keys.iter().map(|k| k.to_string()).collect();
    m.insert("keys".into(), json!(keys));
    m.insert("key_values".into(), json!(data.key_values));
    m.insert("method".into(), json!(if param.is_some() { "parametrization" } else { "approximate_roots" }));
    Ok(Outcome {
        payload: m,
        diagnostics: diags,
        exit_code: EXIT_OK,
    })
}

fn semigroup(seq: &str) -> Result<Outcome, CliError> {
    let cs = CharSequence::new(parse_u64_list(seq)?)?;
    let s = semigroup_data(&cs);
    let relation = match s.relation {
        GeneratorRelation::Unchanged => "unchanged",
        GeneratorRelation::Swapped => "swapped",
        GeneratorRelation::DroppedFirst => "dropped_first",
    };
    Ok(Outcome::new(obj(json!({
        "valid": true,
        "charseq": cs.values(),
        "conductor": s.conductor,
        "gaps": s.gaps,
        "gap_count": s.gaps.len(),
        "minimal_generators": s.minimal_generators,
        "generator_relation": relation,
        "gcds": cs.gcds(),
    }))))
}

fn bezout_cmd(a: i64, seq: &str) -> Result<Outcome, CliError> {
    let v = parse_u64_list(seq)?;
    let coeffs = bezout(a, &v)?;
    Ok(Outcome::new(obj(json!({"a": a, "sequence": v, "coefficients": coeffs}))))
}

fn imult_cmd(ctx: &Ctx, f: &str, g: &str) -> Result<Outcome, CliError> {
    let f = parse_poly(f, ctx.field)?;
    let g = parse_poly(g, ctx.field)?;
    let v = imult(&f, &g)?;
    let exit_code = if matches!(v, Order::AtLeast(_)) { EXIT_LIMITATION } else { EXIT_OK };
    Ok(Outcome {
        payload: obj(json!({"f": f.to_string(), "g": g.to_string(), "i0": order_json(v)})),
        diagnostics: Vec::new(),
        exit_code,
    })
}

fn contact(ctx: &Ctx, f: &str, g: &str) -> Result<Outcome, CliError> {
    let mut diags = Vec::new();
    let (_, fd) = germ(ctx, f, &mut diags)?;
    let (_, gd) = germ(ctx, g, &mut diags)?;
    let f_data = branch_data(&fd)?;
    let g_data = match branch_data(&gd) {
        Ok(d) => Some(d),
        Err(e) => {
            diags.push(format!("no characteristic data for g: {e}"));
            None
        }
    };
    let rep = contact_index(&f_data.charseq, &fd, &gd, g_data.as_ref().map(|d| &d.charseq))?;
    let case = rep.formula_case.map(|c| match c {
        FormulaCase::EqualityBound => "equality",
        FormulaCase::StrictWithKeyProduct => "strict",
        FormulaCase::KEqualsHPlusOne => "k = h+1",
    });
    let ratios: Vec<String> = rep.shared_ratios.iter().map(|r| r.to_string()).collect();
    let mut m = obj(json!({
        "k": rep.k,
        "i0": order_json(rep.i0),
        "n": rep.n,
        "n_other": rep.n_other,
        "f_charseq": f_data.charseq.values(),
        "shared_ratios": ratios,
        "bound": rep.bound.map(order_json),
        "formula_case": case,
        "log_distance": log_distance(&fd, &gd)?.to_string(),
    }));
    if let Some(gdat) = &g_data {
        m.insert("g_charseq".into(), json!(gdat.charseq.values()));
        let fk = f_data.keys_with_f();
        let gk = gdat.keys_with_f();
        let a = BranchView { f: &fd, charseq: &f_data.charseq, keys: &fk };
        let b = BranchView { f: &gd, charseq: &gdat.charseq, keys: &gk };
        let report = verify_intersection_formula(a, b)?;
        m.insert("formula_checks".into(), checks_json(&report.checks));
        if rep.i0.is_finite() {
            let c = match congruence_check(&fd, &gd)? {
                Congruence::First(d) => format!("i0 = 0 mod n/{d}"),
                Congruence::Second(d) => format!("i0 = 0 mod n'/{d}"),
                Congruence::Fail { n, n_other, i0 } => format!("fails: n = {n}, n' = {n_other}, i0 = {i0}"),
            };
            m.insert("congruence".into(), json!(c));
        }
    }
    Ok(Outcome {
        payload: m,
        diagnostics: diags,
        exit_code: EXIT_OK,
    })
}

fn approot(ctx: &Ctx, text: &str, d: u64) -> Result<Outcome, CliError> {
    let f = parse_poly(text, ctx.field)?;
    let r = approximate_root(&f, d)?;
    let mut m = obj(json!({"f": f.to_string(), "d": d, "root": r.to_string(), "degree": r.deg()}));
    if f.is_distinguished() {
        m.insert("i0_f_root".into(), order_json(imult(&f, &r)?));
    }
    Ok(Outcome::new(m))
}

fn synth(ctx: &Ctx, seq: &str, constants: Option<&str>, verify: bool) -> Result<Outcome, CliError> {
    let cs = CharSequence::new(parse_u64_list(seq)?)?;
    let consts = match constants {
        Some(c) => parse_i64_list(c)?.into_iter().map(|v| ctx.field.from_i64(v)).collect(),
        None => vec![ctx.field.one(); cs.h()],
    };
    let plan = SynthesisPlan::new(cs.clone(), consts)?;
    let gs = build_branch(&plan, ctx.field)?;
    let mut m = Map::new();
    m.insert("structural".into(), json!(structural_form(&plan)));
    m.insert("polynomial".into(), json!(gs.last().unwrap().to_string()));
    seq_summary(&cs, &mut m);
    let keys: Vec<String> = gs[..cs.h()].iter().map(|k| k.to_string()).collect();
    m.insert("keys".into(), json!(keys));
    m.insert("bezout_rows".into(), json!(plan.bezout_rows));
    let mut exit_code = EXIT_OK;
    if verify {
        let rows = verify_construction(&gs, &cs)?;
        let ok = rows.iter().all(|(_, got, want)| *got == Order::Finite(*want));
        let vals: Vec<Value> = rows.iter().map(|(_, got, _)| order_json(*got)).collect();
        m.insert("verified_values".into(), Value::Array(vals));
        m.insert("verified".into(), json!(ok));
        if !ok {
            exit_code = EXIT_REJECTED;
        }
    }
    Ok(Outcome {
        payload: m,
        diagnostics: Vec::new(),
        exit_code,
    })
}

fn merle(ctx: &Ctx, text: &str, g: Option<&str>, k: Option<usize>) -> Result<Outcome, CliError> {
    let mut diags = Vec::new();
    let (_, fd) = germ(ctx, text, &mut diags)?;
    let data = branch_data(&fd)?;
    let g = match g {
        Some(t) => parse_poly(t, ctx.field)?,
        None => fd.derivative_y(),
    };
    let k = k.unwrap_or(data.charseq.h());
    let b = ctx.prec.unwrap_or_else(|| merle_precision(&data.charseq));
    let r = merle_verify_at(&data, &g, k, b)?;
    let clusters: Vec<Value> = r
        .clusters
        .iter()
        .zip(&r.factorization.clusters)
        .map(|(c, fc)| {
            json!({
                "poly": short(&fc.poly),
                "degree": c.degree,
                "multiplicity": c.multiplicity,
                "status": status_name(c.status),
                "i0_f": c.i0_f,
                "ratio": c.ratio.to_string(),
                "group": c.group,
            })
        })
        .collect();
    let groups: Vec<Value> = r
        .groups
        .iter()
        .map(|gr| {
            json!({
                "index": gr.index,
                "ratio": gr.ratio.to_string(),
                "total_i0_x": gr.total,
                "predicted": gr.predicted,
                "total_i0_f": gr.i0_f_total,
                "members": gr.members,
                "checks": checks_json(&gr.checks),
            })
        })
        .collect();
    let verdict = match r.verdict {
        MerleVerdict::Pass => "pass",
        MerleVerdict::PartialPass => "partial pass",
        MerleVerdict::Fail => "fail",
    };
    let mut m = obj(json!({
        "charseq": data.charseq.values(),
        "g": g.to_string(),
        "k": k,
        "verdict": verdict,
        "hypotheses": checks_json(&r.hypotheses),
        "polar_sum": checks_json(&r.polar_sum),
        "clusters": clusters,
        "groups": groups,
        "flagged": r.flagged,
        "consistency": checks_json(&r.consistency),
    }));
    if let Some(d) = r.dedekind {
        m.insert("dedekind".into(), json!({"lhs": d.lhs, "rhs": d.rhs, "pass": d.pass}));
    }
    Ok(Outcome {
        payload: m,
        diagnostics: diags,
        exit_code: EXIT_OK,
    })
}

fn prepare(ctx: &Ctx, text: &str) -> Result<Outcome, CliError> {
    let f = parse_poly(text, ctx.field)?;
    let m = f.at_x0().low_order().ok_or(branchkit::Error::ContainsXAxis)?;
    let b = ctx.prec.unwrap_or_else(|| default_precision(m.max(1)));
    let (d, u) = weierstrass_prepare(&f, b)?;
    Ok(Outcome::new(obj(json!({
        "f": f.to_string(),
        "distinguished": d.to_string(),
        "unit": u.to_string(),
        "degree": d.deg(),
        "precision": b,
    }))))
}

/// Aligned text: one "key  value" line per field, nested values indented.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = v {
        write_map(&mut out, m, 0);
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Array(a) if a.iter().all(|x| scalar(x).is_some() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a) if a.iter().all(|x| x.as_array().is_some_and(|i| i.iter().all(|y| !y.is_array() && !y.is_object()))) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(_) | Value::Array(_) => None,
        other => Some(other.to_string()),
    }
}

fn write_map(out: &mut String, m: &Map<String, Value>, indent: usize) {
    let width = m.keys().map(|k| k.len()).max().unwrap_or(0);
    let pad = " ".repeat(indent);
    for (k, v) in m {
        match scalar(v) {
            Some(s) => out.push_str(&format!("{pad}{k:<width$}  {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}\n"));
                match v {
                    Value::Object(inner) => write_map(out, inner, indent + 2),
                    Value::Array(items) => {
                        for item in items {
                            match item {
                                Value::Object(inner) => {
                                    out.push_str(&format!("{pad}  -\n"));
                                    write_map(out, inner, indent + 4);
                                }
                                other => out.push_str(&format!("{pad}  {}\n", scalar(other).unwrap_or_default())),
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
    }
}

/// The stdout text of a result (stderr text is returned separately).
pub fn render(res: &CommandResult) -> (String, String) {
    if let Some(h) = &res.help {
        return (h.clone(), String::new());
    }
    if res.json {
        let s = serde_json::to_string_pretty(&res.to_json()).expect("JSON values serialize");
        return (s + "\n", String::new());
    }
    let mut err = String::new();
    for d in &res.diagnostics {
        err.push_str(&format!("note: {d}\n"));
    }
    if let Some(e) = &res.error {
        err.push_str(&format!("error: {e}\n"));
    }
    let out = res.result.as_ref().map(render_text).unwrap_or_default();
    (out, err)
}
