//! Command-line front end: JSON in, JSON (or derived text) out.
//! Exit codes: 0 ok, 2 parse error, 3 precondition violation,
//! 4 verification failure.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use binquad::binform::BinForm;
use binquad::covers::Cover;
use binquad::error::Error;
use binquad::hirzebruch::{caporaso_check, factor_if_reducible, CoxFactor};
use binquad::lbqf::{
    generic_stratum_table, locus_equations, Lbqf, StratumIndex,
};
use binquad::limits::classify_limit;
use binquad::parse::{parse_field, parse_form};
use binquad::picard::{
    disc_weight_verify, discdisc_weight_verify, pic, stratum_dims, StackId,
};
use binquad::scalars::Field;
use binquad::verify;

#[derive(Parser)]
#[command(
    name = "binquad",
    about = "Exact computations with linear binary quadratic forms over P^1",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base field (Q, F5, Q((e)), ...); overrides the field in the input.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Emit aligned text derived from the JSON report.
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Per-suite sample count override for randomized suites.
    #[arg(long, global = true)]
    trials: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Curve and module classification of a form record.
    Classify { input: Option<PathBuf> },
    /// Double cover classification and ramification from (g, sigma).
    Cover { input: Option<PathBuf> },
    /// Component degrees of a reducible form, with the bound checks.
    Bidegree { input: Option<PathBuf> },
    /// Limit of a family over a Laurent field at e = 0.
    Limit { input: Option<PathBuf> },
    /// Picard group lookup for a stack record.
    Picard {
        input: Option<PathBuf>,
        /// Also run the discriminant character-weight identity check.
        #[arg(long)]
        verify: bool,
    },
    /// Generic classification and dimensions of one stratum.
    Strata { input: Option<PathBuf> },
    /// Generic classification table over a range of (i, j, k).
    Table { input: Option<PathBuf> },
    /// Symbolic equations of the non-reduced and non-smooth loci.
    LocusEquations { input: Option<PathBuf> },
    /// Run every property suite; nonzero exit on any failure.
    Verify,
}

struct Failure {
    code: u8,
    value: Value,
}

fn fail(code: u8, kind: &str, message: String) -> Failure {
    Failure {
        code,
        value: json!({ "error": { "kind": kind, "message": message } }),
    }
}

fn from_core(e: Error) -> Failure {
    let code = match &e {
        Error::Parse { .. }
        | Error::SlotMismatch { .. }
        | Error::EvenCharacteristic(_)
        | Error::NotPrime(_)
        | Error::MixedFields(_, _) => 2,
        _ => 3,
    };
    let kind = match &e {
        Error::Parse { .. } => "parse",
        Error::SlotMismatch { .. } => "slot-mismatch",
        Error::EvenCharacteristic(_) | Error::NotPrime(_) => "bad-field",
        _ => "precondition",
    };
    fail(code, kind, e.to_string())
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| fail(2, "io", format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| fail(2, "io", format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn decode<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| fail(2, "parse", e.to_string()))
}

#[derive(Deserialize)]
struct FormRecord {
    i: i64,
    j: i64,
    k: i64,
    field: Option<String>,
    a: String,
    b: String,
    c: String,
}

#[derive(Deserialize)]
struct CoverRecord {
    g: i64,
    field: Option<String>,
    sigma: String,
}

#[derive(Deserialize)]
struct StackRecord {
    stack: String,
    g: Option<i64>,
    n: Option<i64>,
    i: Option<i64>,
    j: Option<i64>,
    k: Option<i64>,
}

#[derive(Deserialize)]
struct IndexRecord {
    i: i64,
    j: i64,
    k: i64,
}

#[derive(Deserialize)]
struct RangeRecord {
    i: (i64, i64),
    j: (i64, i64),
    k: (i64, i64),
}

fn resolve_field(flag: &Option<String>, record: &Option<String>) -> Result<Field, Failure> {
    let name = flag
        .as_deref()
        .or(record.as_deref())
        .ok_or_else(|| fail(2, "parse", "no field given (use --field or \"field\")".into()))?;
    parse_field(name).map_err(from_core)
}

/// Parse the three coefficient forms against the declared orientation and
/// canonicalize to i <= j.
fn parse_lbqf(rec: &FormRecord, field: Field) -> Result<(Lbqf, bool), Failure> {
    let idx = StratumIndex::new(rec.i, rec.j, rec.k);
    let a = parse_form(&rec.a, field, idx.slot_a(), "a").map_err(from_core)?;
    let b = parse_form(&rec.b, field, idx.slot_b(), "b").map_err(from_core)?;
    let c = parse_form(&rec.c, field, idx.slot_c(), "c").map_err(from_core)?;
    Lbqf::canonicalize(idx, a, b, c).map_err(from_core)
}

fn opt_form(f: &Option<BinForm>) -> Value {
    match f {
        Some(f) => Value::String(f.to_string()),
        None => Value::Null,
    }
}

fn bad_fiber_report(factor: &Option<BinForm>) -> Result<(Value, Value), Failure> {
    let factor = match factor {
        Some(f) if f.slot() >= 1 => f,
        _ => return Ok((Value::Array(vec![]), Value::Null)),
    };
    let (roots, leftover) = factor.rational_roots().map_err(from_core)?;
    let points: Vec<Value> = roots
        .iter()
        .map(|(q, _)| Value::String(q.to_string()))
        .collect();
    let unresolved = if leftover.slot() >= 1 {
        Value::String(leftover.to_string())
    } else {
        Value::Null
    };
    Ok((Value::Array(points), unresolved))
}

fn classification_value(l: &Lbqf, swapped: bool) -> Result<Value, Failure> {
    let cls = l.classify().map_err(from_core)?;
    let (bad_fibers, unresolved) = bad_fiber_report(&cls.bad_fiber_factor)?;
    let mut out = json!({
        "i": l.idx().i,
        "j": l.idx().j,
        "k": l.idx().k,
        "field": l.field().to_string(),
        "canonicalized": swapped,
        "g": l.g(),
        "n": l.n(),
        "a": l.a().to_string(),
        "b": l.b().to_string(),
        "c": l.c().to_string(),
        "disc": l.disc_form().to_string(),
        "p_identically_zero": cls.p_identically_zero,
        "reduced": cls.reduced,
        "integral": cls.integral,
        "smooth": cls.smooth,
        "line_bundle": cls.line_bundle,
        "disc_sqrt": opt_form(&cls.disc_sqrt),
        "bad_fiber_factor": opt_form(&cls.bad_fiber_factor),
        "bad_fibers": bad_fibers,
        "bad_fibers_unresolved": unresolved,
        "in_jbd": l.in_jbd(),
    });
    if cls.reduced && cls.line_bundle && !cls.integral {
        if let Some((f1, f2)) = factor_if_reducible(l).map_err(from_core)? {
            let (d1, d2) = if f1.e <= f2.e {
                (f1.e, f2.e)
            } else {
                (f2.e, f1.e)
            };
            out["bidegree"] = json!([d1, d2]);
        }
    }
    Ok(out)
}

fn cox_factor_value(f: &CoxFactor) -> Value {
    json!({
        "alpha": f.alpha.to_string(),
        "beta": f.beta.to_string(),
        "e": f.e,
    })
}

fn run_classify(cli: &Cli, input: &Option<PathBuf>) -> Result<Value, Failure> {
    let rec: FormRecord = decode(&read_input(input)?)?;
    let field = resolve_field(&cli.field, &rec.field)?;
    let (l, swapped) = parse_lbqf(&rec, field)?;
    classification_value(&l, swapped)
}

fn run_cover(cli: &Cli, input: &Option<PathBuf>) -> Result<Value, Failure> {
    let rec: CoverRecord = decode(&read_input(input)?)?;
    let field = resolve_field(&cli.field, &rec.field)?;
    let sigma =
        parse_form(&rec.sigma, field, 2 * rec.g + 2, "sigma").map_err(from_core)?;
    let cover = Cover::new(rec.g, sigma).map_err(from_core)?;
    let cls = cover.classify().map_err(from_core)?;
    let ramification: Value = if cover.sigma().is_zero() {
        Value::Null
    } else {
        let ram = cover.ramification().map_err(from_core)?;
        Value::Array(
            ram.iter()
                .map(|(f, m)| {
                    json!({ "factor": f.to_string(), "multiplicity": m })
                })
                .collect(),
        )
    };
    Ok(json!({
        "g": cover.g(),
        "field": field.to_string(),
        "sigma": cover.sigma().to_string(),
        "reduced": cls.reduced,
        "integral": cls.integral,
        "smooth": cls.smooth,
        "ramification": ramification,
    }))
}

fn run_bidegree(cli: &Cli, input: &Option<PathBuf>) -> Result<Value, Failure> {
    let rec: FormRecord = decode(&read_input(input)?)?;
    let field = resolve_field(&cli.field, &rec.field)?;
    let (l, swapped) = parse_lbqf(&rec, field)?;
    let factors = factor_if_reducible(&l).map_err(from_core)?;
    match factors {
        None => Ok(json!({
            "canonicalized": swapped,
            "reducible": false,
            "in_jbd": l.in_jbd(),
        })),
        Some((f1, f2)) => {
            let (d1, d2) = if f1.e <= f2.e {
                (f1.e, f2.e)
            } else {
                (f2.e, f1.e)
            };
            Ok(json!({
                "canonicalized": swapped,
                "reducible": true,
                "bidegree": [d1, d2],
                "factors": [cox_factor_value(&f1), cox_factor_value(&f2)],
                "in_jbd": l.in_jbd(),
                "bound_holds": binquad::hirzebruch::bidegree_bound_holds(d1, l.g(), l.n()),
                "caporaso": caporaso_check(d1, d2, l.g(), l.n()),
            }))
        }
    }
}

fn run_limit(cli: &Cli, input: &Option<PathBuf>) -> Result<Value, Failure> {
    let rec: FormRecord = decode(&read_input(input)?)?;
    let field = resolve_field(&cli.field, &rec.field)?;
    if !field.is_laurent() {
        return Err(fail(
            3,
            "precondition",
            format!("limit needs a Laurent family field, not {field}"),
        ));
    }
    let (family, swapped) = parse_lbqf(&rec, field)?;
    let report = classify_limit(&family).map_err(from_core)?;
    let mut limit_value = classification_value(&report.limit, false)?;
    limit_value["canonicalized"] = Value::Bool(swapped);
    let ramification = match &report.ramification {
        None => Value::Null,
        Some(ram) => Value::Array(
            ram.iter()
                .map(|(f, m)| {
                    json!({ "factor": f.to_string(), "multiplicity": m })
                })
                .collect(),
        ),
    };
    Ok(json!({
        "valuation": report.v,
        "family_disc": report.family_disc.to_string(),
        "limit": limit_value,
        "ramification": ramification,
        "bidegree": report.bidegree.map(|(d1, d2)| json!([d1, d2])).unwrap_or(Value::Null),
    }))
}

fn stack_id(rec: &StackRecord) -> Result<StackId, Failure> {
    let need = |v: Option<i64>, name: &str| {
        v.ok_or_else(|| fail(2, "parse", format!("stack {} needs \"{name}\"", rec.stack)))
    };
    match rec.stack.as_str() {
        "covers" => Ok(StackId::CoversBar {
            g: need(rec.g, "g")?,
        }),
        "hurwitz" => Ok(StackId::Hurwitz {
            g: need(rec.g, "g")?,
        }),
        "stratum" => Ok(StackId::Stratum {
            i: need(rec.i, "i")?,
            j: need(rec.j, "j")?,
            k: need(rec.k, "k")?,
        }),
        "stratum-smooth" => Ok(StackId::StratumSmooth {
            i: need(rec.i, "i")?,
            j: need(rec.j, "j")?,
            k: need(rec.k, "k")?,
        }),
        "jbd" => Ok(StackId::JbdBar {
            g: need(rec.g, "g")?,
            n: need(rec.n, "n")?,
        }),
        "universal" => Ok(StackId::JUniversal {
            g: need(rec.g, "g")?,
            n: need(rec.n, "n")?,
        }),
        other => Err(fail(
            2,
            "parse",
            format!(
                "unknown stack {other}; expected covers, hurwitz, stratum, \
                 stratum-smooth, jbd, or universal"
            ),
        )),
    }
}

fn run_picard(cli: &Cli, input: &Option<PathBuf>, verify_weights: bool) -> Result<Value, Failure> {
    let rec: StackRecord = decode(&read_input(input)?)?;
    let id = stack_id(&rec)?;
    let group = pic(id).map_err(from_core)?;
    let mut out = json!({
        "stack": rec.stack,
        "group": group.to_string(),
        "free_rank": group.free_rank,
        "torsion": group.torsion,
    });
    if verify_weights {
        let field = match &cli.field {
            Some(name) => parse_field(name).map_err(from_core)?,
            None => Field::Q,
        };
        let trials = cli.trials.unwrap_or(20) as u32;
        let mut rng = binquad::lbqf::seeded_rng(cli.seed);
        let report = match id {
            StackId::CoversBar { g } | StackId::Hurwitz { g } => {
                disc_weight_verify(g, field, trials, &mut rng).map_err(from_core)?
            }
            StackId::Stratum { i, j, k } | StackId::StratumSmooth { i, j, k } => {
                discdisc_weight_verify(StratumIndex::new(i, j, k), field, trials, &mut rng)
                    .map_err(from_core)?
            }
            _ => {
                return Err(fail(
                    3,
                    "precondition",
                    "weight verification applies to covers, hurwitz, and stratum stacks".into(),
                ))
            }
        };
        out["weights"] = json!({
            "exponent": report.exponent,
            "character_weight": report.character_weight,
            "trials": report.trials,
            "failures": report.failures,
        });
        if !report.passed() {
            return Err(Failure {
                code: 4,
                value: out,
            });
        }
    }
    Ok(out)
}

fn run_strata(input: &Option<PathBuf>) -> Result<Value, Failure> {
    let rec: IndexRecord = decode(&read_input(input)?)?;
    let idx = StratumIndex::new(rec.i, rec.j, rec.k);
    let canonical = if idx.is_canonical() {
        idx
    } else {
        StratumIndex::new(rec.j, rec.i, rec.k)
    };
    let pred = generic_stratum_table(canonical).map_err(from_core)?;
    let dims = stratum_dims(canonical).map_err(from_core)?;
    Ok(json!({
        "i": canonical.i,
        "j": canonical.j,
        "k": canonical.k,
        "canonicalized": !idx.is_canonical(),
        "g": canonical.g(),
        "n": canonical.n(),
        "slots": {
            "a": canonical.slot_a(),
            "b": canonical.slot_b(),
            "c": canonical.slot_c(),
        },
        "generic": {
            "reduced": pred.reduced,
            "integral": pred.integral,
            "smooth": pred.smooth,
            "line_bundle": pred.line_bundle,
        },
        "dims": {
            "dim_v": dims.dim_v,
            "dim_group": dims.dim_group,
            "relative_codim_to_next": dims.relative_codim_to_next,
            "note": dims.note,
        },
    }))
}

fn run_table(input: &Option<PathBuf>) -> Result<Value, Failure> {
    let rec: RangeRecord = decode(&read_input(input)?)?;
    let mut rows = Vec::new();
    for i in rec.i.0..=rec.i.1 {
        for j in rec.j.0..=rec.j.1 {
            if j < i {
                continue;
            }
            for k in rec.k.0..=rec.k.1 {
                let idx = StratumIndex::new(i, j, k);
                let pred = generic_stratum_table(idx).map_err(from_core)?;
                rows.push(json!({
                    "i": i,
                    "j": j,
                    "k": k,
                    "g": idx.g(),
                    "n": idx.n(),
                    "reduced": pred.reduced,
                    "integral": pred.integral,
                    "smooth": pred.smooth,
                    "line_bundle": pred.line_bundle,
                }));
            }
        }
    }
    Ok(json!({ "rows": rows }))
}

fn run_locus_equations(input: &Option<PathBuf>) -> Result<Value, Failure> {
    let rec: IndexRecord = decode(&read_input(input)?)?;
    let idx = StratumIndex::new(rec.i, rec.j, rec.k);
    let eqs = locus_equations(idx).map_err(from_core)?;
    let d: Vec<Value> = eqs
        .d
        .iter()
        .map(|p| Value::String(eqs.ring.display(p).to_string()))
        .collect();
    Ok(json!({
        "i": rec.i,
        "j": rec.j,
        "k": rec.k,
        "vars": eqs.ring.vars(),
        "nonreduced_locus": d,
        "nonsmooth_locus": eqs
            .nonsmooth
            .as_ref()
            .map(|p| Value::String(eqs.ring.display(p).to_string()))
            .unwrap_or(Value::Null),
    }))
}

fn run_verify(cli: &Cli) -> Result<Value, Failure> {
    let reports = verify::run_all(cli.seed, cli.trials).map_err(from_core)?;
    let all_passed = reports.iter().all(|r| r.passed());
    let out = json!({
        "seed": cli.seed,
        "passed": all_passed,
        "suites": reports
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "checks": r.checks,
                    "failures": r.failures,
                    "notes": r.notes,
                })
            })
            .collect::<Vec<_>>(),
    });
    if all_passed {
        Ok(out)
    } else {
        Err(Failure {
            code: 4,
            value: out,
        })
    }
}

fn render_text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                match v {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render_text(v, indent + 1, out);
                    }
                    Value::Array(items)
                        if items.iter().any(|x| x.is_object() || x.is_array()) =>
                    {
                        out.push_str(&format!("{pad}{key}:\n"));
                        for item in items {
                            render_text(item, indent + 1, out);
                            out.push_str(&format!("{}-\n", "  ".repeat(indent + 1)));
                        }
                        // drop the trailing separator
                        let sep = format!("{}-\n", "  ".repeat(indent + 1));
                        if out.ends_with(&sep) {
                            out.truncate(out.len() - sep.len());
                        }
                    }
                    _ => out.push_str(&format!("{pad}{key}: {}\n", scalar_text(v))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn emit(cli: &Cli, value: &Value) {
    if cli.text {
        let mut out = String::new();
        render_text(value, 0, &mut out);
        print!("{out}");
    } else {
        println!("{}", serde_json::to_string_pretty(value).unwrap());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { input } => run_classify(&cli, input),
        Command::Cover { input } => run_cover(&cli, input),
        Command::Bidegree { input } => run_bidegree(&cli, input),
        Command::Limit { input } => run_limit(&cli, input),
        Command::Picard { input, verify } => run_picard(&cli, input, *verify),
        Command::Strata { input } => run_strata(input),
        Command::Table { input } => run_table(input),
        Command::LocusEquations { input } => run_locus_equations(input),
        Command::Verify => run_verify(&cli),
    };
    match result {
        Ok(value) => {
            emit(&cli, &value);
            ExitCode::SUCCESS
        }
        Err(failure) => {
            emit(&cli, &failure.value);
            ExitCode::from(failure.code)
        }
    }
}
