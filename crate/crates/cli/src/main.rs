//! `moments`: JSON-in, JSON-out front end for `moment-core`.
//!
//! Exit status is 0 on success, 2 when the input is rejected, 3 when the
//! computation itself fails (indefinite functional, branch cut, ...).

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use moment_core::scalar::parse_exact;
use moment_core::wire::{
    AnyFunctional, FamilyDoc, FunctionalDoc, JsonReal, MeasureDoc, RealValues, SequenceDoc, VerdictDoc,
};
use moment_core::{
    bogoliubov, carleman_report, conv_cauchy, conv_general, conv_newton, diag_energy_check, exp_convexity_check,
    forward_moments, forward_moments_exact, growth_constant, is_positive, laplace, reconstruct_detailed, s_transform,
    BogoliubovSource, DiscreteMeasure, FiniteSequence, GrowthFit, MomentFunctional, PolynomialFamily,
    RealScalar, SampledFunction, DEFAULT_ORDER, DEFAULT_TERMS, DEFAULT_TOL,
};
use num_complex::Complex64;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "moments", version, about = "Generalized moment problems over polynomial families")]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a polynomial family in monomial coordinates.
    Family(FamilyArgs),
    /// Convolve two finite sequences.
    Conv(ConvArgs),
    /// Test a functional for positivity on its N×N Gram kernel.
    Check(CheckArgs),
    /// Recover a representing discrete measure.
    Reconstruct(ReconstructArgs),
    /// Generalized moments of a discrete measure.
    Forward(ForwardArgs),
    /// Evaluate a transform on a λ grid.
    Transform(TransformArgs),
    /// Fit |τ_n| ≤ n!·C^{n+1}, or the diagonal energies with --energy.
    Growth(GrowthArgs),
    /// Partial sums of Σ τ_{2k+2n}^{-1/(2n)}.
    Carleman(CarlemanArgs),
}

#[derive(Args, Clone)]
struct FamilySelect {
    /// monomial, newton or sheffer.
    #[arg(long)]
    kind: Option<String>,
    /// Truncation order of the family.
    #[arg(long)]
    order: Option<usize>,
    /// JSON coefficient list of γ(λ) (sheffer only).
    #[arg(long)]
    gamma: Option<String>,
    /// JSON coefficient list of α(λ) (sheffer only).
    #[arg(long)]
    alpha: Option<String>,
    /// Family document to use instead of --kind/--gamma/--alpha.
    #[arg(long)]
    family_file: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    #[command(flatten)]
    family: FamilySelect,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvMethod {
    General,
    Cauchy,
    Newton,
}

#[derive(Args)]
struct ConvArgs {
    /// Document {"f": [...], "g": [...]}; `-` reads standard input.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Inline JSON list for f.
    #[arg(long)]
    f: Option<String>,
    /// Inline JSON list for g.
    #[arg(long)]
    g: Option<String>,
    #[arg(long, value_enum, default_value = "general")]
    method: ConvMethod,
    #[command(flatten)]
    family: FamilySelect,
}

#[derive(Args)]
struct CheckArgs {
    /// Functional document; `-` or absent reads standard input.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Gram size N (kernel indices 0..=N); defaults to the largest the data allows.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    family: FamilySelect,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Uses τ_0..τ_{2N}; defaults to the largest N the data allows.
    #[arg(long)]
    n: Option<usize>,
    /// Also report rank and recurrence coefficients.
    #[arg(long)]
    detailed: bool,
    #[command(flatten)]
    family: FamilySelect,
}

#[derive(Args)]
struct ForwardArgs {
    /// Measure document {"atoms": [...], "weights": [...]}.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Highest moment index M; defaults to the family order.
    #[arg(long)]
    moments: Option<usize>,
    /// Emit exact rationals (the exact values of the stored doubles).
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    family: FamilySelect,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    Laplace,
    Bogoliubov,
    S,
    ExpConvexity,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(value_enum)]
    kind: TransformKind,
    /// Measure, functional, or sample document depending on the transform.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Comma-separated λ values; complex values as `a+bi`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, allow_hyphen_values = true)]
    lambda: Vec<String>,
    /// Grid for exp-convexity.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, allow_hyphen_values = true)]
    grid: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_TERMS)]
    terms: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct GrowthArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Fit τ(δ_n ∗ δ_n) ≤ (n!)²·C^{n+1} for n ≤ N instead of τ_n itself.
    #[arg(long)]
    energy: bool,
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    family: FamilySelect,
}

#[derive(Args)]
struct CarlemanArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Shift k in τ_{2k+2n}.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Number of terms; defaults to as many as the data allows.
    #[arg(long)]
    terms: Option<usize>,
}

enum Failure {
    Validation(String),
    Numerical(String),
}

impl From<moment_core::Error> for Failure {
    fn from(e: moment_core::Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

fn read_input(path: &Option<PathBuf>) -> Outcome<Value> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| invalid(e.to_string()))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| invalid(format!("malformed JSON: {e}")))
}

fn parse_doc<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Outcome<T> {
    serde_json::from_value(v).map_err(|e| invalid(format!("not a {what} document: {e}")))
}

/// JSON list of numbers or strings, read exactly (numbers by their decimal text).
fn exact_list(text: &str) -> Outcome<Vec<String>> {
    let v: Value = serde_json::from_str(text).map_err(|e| invalid(format!("malformed JSON list: {e}")))?;
    let Value::Array(items) = v else {
        return Err(invalid("expected a JSON list"));
    };
    items
        .iter()
        .map(|x| {
            let s = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                other => return Err(invalid(format!("expected a number, got {other}"))),
            };
            parse_exact(&s)?;
            Ok(s)
        })
        .collect()
}

/// Builds the family from flags, a family document, or the functional's tag.
fn resolve_family(sel: &FamilySelect, tag: Option<&str>, default_order: usize) -> Outcome<PolynomialFamily> {
    if let Some(path) = &sel.family_file {
        if sel.kind.is_some() || sel.gamma.is_some() || sel.alpha.is_some() {
            return Err(invalid("--family-file excludes --kind/--gamma/--alpha"));
        }
        let doc: FamilyDoc = parse_doc(read_input(&Some(path.clone()))?, "family")?;
        let fam = doc.build()?;
        if let Some(rows) = &doc.rows {
            if rows != &fam.to_doc().rows.expect("rows") {
                return Err(invalid("family rows do not match kind/gamma/alpha"));
            }
        }
        return match sel.order {
            Some(o) if o != fam.order() => Ok(fam.with_order(o)?),
            _ => Ok(fam),
        };
    }
    let kind = match (&sel.kind, tag) {
        (Some(k), Some(t)) if k != t => {
            return Err(invalid(format!("--kind {k} contradicts the input's family {t}")));
        }
        (Some(k), _) => k.clone(),
        (None, Some(t)) => t.to_string(),
        (None, None) => "monomial".to_string(),
    };
    let doc = FamilyDoc {
        kind,
        order: sel.order.unwrap_or(default_order),
        gamma: sel.gamma.as_deref().map(exact_list).transpose()?,
        alpha: sel.alpha.as_deref().map(exact_list).transpose()?,
        rows: None,
    };
    Ok(doc.build()?)
}

fn functional_doc(v: Value) -> Outcome<(AnyFunctional, Option<String>)> {
    let doc: FunctionalDoc = parse_doc(v, "functional")?;
    let tag = doc.family.clone();
    Ok((doc.parse()?, tag))
}

fn values_json<R: JsonReal>(values: &[R]) -> Value {
    Value::Array(R::to_json(values))
}

fn fit_json(fit: &GrowthFit) -> Value {
    json!({
        "constant": fit.constant,
        "argmax": fit.argmax,
        "profile": fit.profile,
        "unbounded_trend": fit.unbounded_trend,
    })
}

/// Largest `N` with `2N ≤ len − 1`.
fn default_size(len: usize) -> Outcome<usize> {
    if len == 0 {
        return Err(invalid("functional has no values"));
    }
    Ok((len - 1) / 2)
}

fn cmd_family(a: &FamilyArgs) -> Outcome<Value> {
    let fam = resolve_family(&a.family, None, DEFAULT_ORDER)?;
    Ok(serde_json::to_value(fam.to_doc()).expect("serializable"))
}

fn sequence<R: JsonReal>(values: Vec<R>) -> FiniteSequence<R> {
    FiniteSequence::new(values)
}

fn conv_values<R: JsonReal>(
    f: Vec<R>,
    g: Vec<R>,
    method: ConvMethod,
    sel: &FamilySelect,
) -> Outcome<Value> {
    let (f, g) = (sequence(f), sequence(g));
    let needed = f.len().max(1) + g.len().max(1) - 2;
    let h = match method {
        ConvMethod::Cauchy => conv_cauchy(&f, &g),
        ConvMethod::Newton => conv_newton(&f, &g),
        ConvMethod::General => conv_general(&f, &g, &resolve_family(sel, None, needed.max(1))?)?,
    };
    Ok(json!({ "coeffs": values_json(h.coeffs()) }))
}

fn cmd_conv(a: &ConvArgs) -> Outcome<Value> {
    let (f, g) = match (&a.f, &a.g, &a.input) {
        (Some(f), Some(g), None) => (
            serde_json::from_str::<Value>(f).map_err(|e| invalid(format!("--f: {e}")))?,
            serde_json::from_str::<Value>(g).map_err(|e| invalid(format!("--g: {e}")))?,
        ),
        (None, None, input) => {
            let doc = read_input(input)?;
            let get = |k: &str| doc.get(k).cloned().ok_or_else(|| invalid(format!("missing field {k:?}")));
            if let Some(extra) = doc.as_object().and_then(|o| o.keys().find(|k| *k != "f" && *k != "g")) {
                return Err(invalid(format!("unknown field {extra:?}")));
            }
            (get("f")?, get("g")?)
        }
        _ => return Err(invalid("give both --f and --g, or an --in document")),
    };
    let list = |v: Value| -> Outcome<RealValues> {
        let items = match v {
            Value::Array(items) => items,
            other => parse_doc::<SequenceDoc>(other, "sequence")?.coeffs,
        };
        Ok(RealValues::from_json(&items)?)
    };
    let (f, g) = (list(f)?, list(g)?);
    match (f, g) {
        (RealValues::Exact(f), RealValues::Exact(g)) => conv_values(f, g, a.method, &a.family),
        (f, g) => conv_values(to_float(f), to_float(g), a.method, &a.family),
    }
}

fn to_float(v: RealValues) -> Vec<f64> {
    match v {
        RealValues::Exact(v) => v.iter().map(RealScalar::to_f64).collect(),
        RealValues::Float(v) => v,
    }
}

fn check_values<R: JsonReal>(
    tau: &MomentFunctional<R>,
    tag: Option<&str>,
    a: &CheckArgs,
) -> Outcome<Value> {
    let n = match a.n {
        Some(n) => n,
        None => default_size(tau.len())?,
    };
    let fam = resolve_family(&a.family, tag, (2 * n).max(1))?;
    let verdict = is_positive(tau, &fam, n, a.tol)?;
    Ok(serde_json::to_value(VerdictDoc::from_verdict(&verdict)).expect("serializable"))
}

fn cmd_check(a: &CheckArgs) -> Outcome<Value> {
    let (tau, tag) = functional_doc(read_input(&a.input)?)?;
    match tau {
        AnyFunctional::Exact(t) => check_values(&t, tag.as_deref(), a),
        AnyFunctional::Float(t) => check_values(&t, tag.as_deref(), a),
    }
}

fn reconstruct_values<R: RealScalar>(
    tau: &MomentFunctional<R>,
    tag: Option<&str>,
    a: &ReconstructArgs,
) -> Outcome<Value> {
    let n = match a.n {
        Some(n) => n,
        None => default_size(tau.len())?,
    };
    let fam = resolve_family(&a.family, tag, (2 * n).max(1))?;
    let rec = reconstruct_detailed(tau, &fam, n)?;
    let mut out = serde_json::to_value(rec.measure.to_doc()).expect("serializable");
    if a.detailed {
        let obj = out.as_object_mut().expect("object");
        obj.insert("rank".into(), json!(rec.rank));
        obj.insert("diagonal".into(), json!(rec.diagonal));
        obj.insert("off_diagonal".into(), json!(rec.off_diagonal));
    }
    Ok(out)
}

fn cmd_reconstruct(a: &ReconstructArgs) -> Outcome<Value> {
    let (tau, tag) = functional_doc(read_input(&a.input)?)?;
    match tau {
        AnyFunctional::Exact(t) => reconstruct_values(&t, tag.as_deref(), a),
        AnyFunctional::Float(t) => reconstruct_values(&t, tag.as_deref(), a),
    }
}

fn measure_doc(v: Value) -> Outcome<DiscreteMeasure> {
    Ok(parse_doc::<MeasureDoc>(v, "measure")?.build()?)
}

fn cmd_forward(a: &ForwardArgs) -> Outcome<Value> {
    let mu = measure_doc(read_input(&a.input)?)?;
    let fam = resolve_family(&a.family, None, a.moments.unwrap_or(DEFAULT_ORDER))?;
    let m = a.moments.unwrap_or(fam.order());
    let doc = if a.exact {
        FunctionalDoc::from_functional(&forward_moments_exact(&mu, &fam, m)?)
    } else {
        FunctionalDoc::from_functional(&forward_moments(&mu, &fam, m)?)
    };
    Ok(serde_json::to_value(doc).expect("serializable"))
}

fn lambdas(raw: &[String]) -> Outcome<Vec<Complex64>> {
    if raw.is_empty() {
        return Err(invalid("--lambda is required"));
    }
    raw.iter()
        .map(|s| {
            s.trim()
                .parse::<Complex64>()
                .map_err(|_| invalid(format!("cannot parse lambda {s:?}")))
        })
        .collect()
}

fn samples(list: Vec<moment_core::TransformSample>) -> Value {
    Value::Array(
        list.iter()
            .map(|s| serde_json::to_value(s.to_doc()).expect("serializable"))
            .collect(),
    )
}

fn cmd_transform(a: &TransformArgs) -> Outcome<Value> {
    let input = read_input(&a.input)?;
    match a.kind {
        TransformKind::Laplace => {
            let mu = measure_doc(input)?;
            let list = lambdas(&a.lambda)?
                .into_iter()
                .map(|l| moment_core::TransformSample {
                    lambda: l,
                    value: laplace(&mu, l),
                    terms_used: mu.len(),
                    tail_bound: 0.0,
                    warning: None,
                })
                .collect();
            Ok(samples(list))
        }
        TransformKind::Bogoliubov => {
            let ls = lambdas(&a.lambda)?;
            let list = if input.get("atoms").is_some() {
                let mu = measure_doc(input)?;
                ls.into_iter()
                    .map(|l| bogoliubov::<f64>(BogoliubovSource::Measure(&mu), l))
                    .collect::<moment_core::Result<Vec<_>>>()?
            } else {
                let (tau, tag) = functional_doc(input)?;
                if tag.as_deref().is_some_and(|t| t != "newton") {
                    return Err(invalid("the series route needs Newton-family moments"));
                }
                let tau = match tau {
                    AnyFunctional::Exact(t) => t.to_f64(),
                    AnyFunctional::Float(t) => t,
                };
                ls.into_iter()
                    .map(|l| {
                        bogoliubov(
                            BogoliubovSource::Series {
                                tau: &tau,
                                n_terms: a.terms,
                            },
                            l,
                        )
                    })
                    .collect::<moment_core::Result<Vec<_>>>()?
            };
            Ok(samples(list))
        }
        TransformKind::S => {
            let items = match input {
                Value::Array(items) => items,
                Value::Object(ref o) if o.contains_key("coeffs") => parse_doc::<SequenceDoc>(input, "sequence")?.coeffs,
                other => parse_doc::<FunctionalDoc>(other, "functional")?.values,
            };
            let ls = lambdas(&a.lambda)?;
            let list = match RealValues::from_json(&items)? {
                RealValues::Exact(v) => ls.into_iter().map(|l| s_transform(&v, l, a.terms)).collect(),
                RealValues::Float(v) => ls.into_iter().map(|l| s_transform(&v, l, a.terms)).collect(),
            };
            Ok(samples(list))
        }
        TransformKind::ExpConvexity => {
            let pairs: Vec<(f64, f64)> = match input.get("samples") {
                Some(s) => serde_json::from_value(s.clone())
                    .map_err(|e| invalid(format!("samples must be [[x, k(x)], ...]: {e}")))?,
                None => return Err(invalid("expected {\"grid\": [...], \"samples\": [[x, k(x)], ...]}")),
            };
            let grid: Vec<f64> = match (input.get("grid"), a.grid.is_empty()) {
                (Some(g), true) => serde_json::from_value(g.clone()).map_err(|e| invalid(format!("grid: {e}")))?,
                (None, false) => a.grid.clone(),
                (Some(_), false) => return Err(invalid("grid given both inline and in the document")),
                (None, true) => return Err(invalid("no grid given")),
            };
            let k = SampledFunction::new(pairs);
            let (matrix, verdict) = exp_convexity_check(&grid, |x| k.get(x), a.tol)?;
            let mut out = serde_json::to_value(VerdictDoc::from_verdict(&verdict)).expect("serializable");
            out.as_object_mut().expect("object").insert("matrix".into(), json!(matrix));
            Ok(out)
        }
    }
}

fn growth_values<R: JsonReal>(
    tau: &MomentFunctional<R>,
    tag: Option<&str>,
    a: &GrowthArgs,
) -> Outcome<Value> {
    if !a.energy {
        return Ok(fit_json(&growth_constant(tau.values())?));
    }
    let n = match a.n {
        Some(n) => n,
        None => default_size(tau.len())?,
    };
    let fam = resolve_family(&a.family, tag, (2 * n).max(1))?;
    let report = diag_energy_check(tau, &fam, n)?;
    Ok(json!({
        "energies": values_json(&report.energies),
        "normalized": report.normalized,
        "fit": fit_json(&report.fit),
    }))
}

fn cmd_growth(a: &GrowthArgs) -> Outcome<Value> {
    let (tau, tag) = functional_doc(read_input(&a.input)?)?;
    match tau {
        AnyFunctional::Exact(t) => growth_values(&t, tag.as_deref(), a),
        AnyFunctional::Float(t) => growth_values(&t, tag.as_deref(), a),
    }
}

fn cmd_carleman(a: &CarlemanArgs) -> Outcome<Value> {
    let (tau, _) = functional_doc(read_input(&a.input)?)?;
    let len = match &tau {
        AnyFunctional::Exact(t) => t.len(),
        AnyFunctional::Float(t) => t.len(),
    };
    let terms = match a.terms {
        Some(t) => t,
        None => (len.saturating_sub(1) / 2).saturating_sub(a.k),
    };
    let partial = match tau {
        AnyFunctional::Exact(t) => carleman_report(&t, a.k, terms)?,
        AnyFunctional::Float(t) => carleman_report(&t, a.k, terms)?,
    };
    Ok(json!({ "k": a.k, "partial_sums": partial }))
}

fn run(cli: &Cli) -> Outcome<Value> {
    match &cli.command {
        Command::Family(a) => cmd_family(a),
        Command::Conv(a) => cmd_conv(a),
        Command::Check(a) => cmd_check(a),
        Command::Reconstruct(a) => cmd_reconstruct(a),
        Command::Forward(a) => cmd_forward(a),
        Command::Transform(a) => cmd_transform(a),
        Command::Growth(a) => cmd_growth(a),
        Command::Carleman(a) => cmd_carleman(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, msg) = match run(&cli) {
        Ok(value) => {
            let mut text = serde_json::to_string_pretty(&value).expect("serializable");
            text.push('\n');
            let written = match &cli.out {
                Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
                None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => return ExitCode::SUCCESS,
                Err(e) => (2, e),
            }
        }
        Err(Failure::Validation(m)) => (2, m),
        Err(Failure::Numerical(m)) => (3, m),
    };
    eprintln!("moments: {msg}");
    ExitCode::from(code)
}
