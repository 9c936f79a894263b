use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use hecke_core::classes::{render_csv, render_json, survey_rows, SurveyRow};
use hecke_core::reciprocity::DEFAULT_DEPTH;
use hecke_core::words::{primitive_root, vblock_form};
use hecke_core::{
    cyclic_reduce, matrix_to_word, minimal_polynomial, ClassError, GroupElement, GroupError, Membership, Reciprocity,
    ReciprocityError, RingContext, RingError, Sign, Survey, Word, WordError, DEFAULT_MAX_ITER,
};

#[derive(Parser)]
#[command(name = "hecke", version, about = "Exact computations in the Hecke groups")]
struct Cli {
    /// Group order parameter (lambda = 2cos(pi/p)), at least 3
    #[arg(long, global = true, default_value_t = 3)]
    p: u32,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Exit with code 4 on inconclusive results
    #[arg(long, global = true)]
    strict: bool,

    /// Step cap for pseudo-Euclidean chains
    #[arg(long, global = true, env = "HECKE_MAX_ITER", default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingOp {
    Info,
    Add,
    Sub,
    Mul,
    Sign,
    Divide,
    Gcd,
}

#[derive(Subcommand)]
enum Command {
    /// Ring arithmetic; elements are written `[c0,c1,...]` in powers of lambda
    Ring {
        #[arg(value_enum, default_value_t = RingOp::Info)]
        op: RingOp,
        args: Vec<String>,
    },
    /// Membership test by the pseudo-Euclidean algorithm
    Member { matrix: String },
    /// Trace type, order and fixed-point ratio
    Classify { matrix: String },
    /// Evaluate a word such as `i g^2 i g`
    Word { word: String },
    /// Decompose a member matrix into a normal-form word
    Matrix { matrix: String },
    /// Reciprocity verdict with reciprocator and canonical conjugate
    Reciprocal {
        matrix: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Symmetric and p-reciprocal conjugates of a hyperbolic class
    Census {
        matrix: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// All hyperbolic classes up to a word length
    Survey {
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::InvalidOrder(_) | RingError::ContextMismatch { .. } | RingError::Parse(_) => {
                CliError::Parse(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Parse(_) => CliError::Parse(e.to_string()),
            GroupError::Ring(r) => r.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<WordError> for CliError {
    fn from(e: WordError) -> Self {
        match e {
            WordError::Parse(_) | WordError::BadExponent { .. } | WordError::NotNormal => CliError::Parse(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<ReciprocityError> for CliError {
    fn from(e: ReciprocityError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<ClassError> for CliError {
    fn from(e: ClassError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

/// Rendered document plus whether it holds an inconclusive result.
struct Report {
    body: String,
    inconclusive: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.body.as_bytes());
            let _ = out.flush();
            if cli.strict && report.inconclusive {
                eprintln!("hecke: inconclusive result");
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("hecke: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let ctx = RingContext::with_max_iter(cli.p, cli.max_iter)?;
    let (value, inconclusive) = match &cli.command {
        Command::Ring { op, args } => (ring(&ctx, *op, args)?, false),
        Command::Member { matrix } => {
            let g = GroupElement::parse(&ctx, matrix)?;
            let m = g.is_member();
            let v = json!({
                "matrix": g,
                "member": m == Membership::Member,
                "membership": m,
            });
            (v, m == Membership::Undetermined)
        }
        Command::Classify { matrix } => {
            let g = GroupElement::parse(&ctx, matrix)?;
            let class = g.classify();
            let theta = g.fixed_point_ratio();
            let m = g.is_member();
            let v = json!({
                "matrix": g,
                "kind": class.kind,
                "order": class.order,
                "trace": g.trace(),
                "theta": theta.describe(&ctx),
                "theta_approx": format!("{:.12}", theta.approx(&ctx) + 0.0),
                "membership": m,
            });
            (v, m == Membership::Undetermined)
        }
        Command::Word { word } => (word_report(&ctx, &Word::parse(ctx.p(), word)?)?, false),
        Command::Matrix { matrix } => {
            let g = GroupElement::parse(&ctx, matrix)?;
            let w = member_word(&g)?;
            (json!({ "matrix": g, "word": w }), false)
        }
        Command::Reciprocal { matrix, depth } => {
            let g = GroupElement::parse(&ctx, matrix)?;
            member_word(&g)?;
            let verdict = Reciprocity::with_depths(&ctx, DEFAULT_DEPTH, *depth).is_reciprocal(&g)?;
            let mut v = serde_json::to_value(&verdict).expect("verdict serialises");
            v.as_object_mut().expect("object").insert("matrix".into(), json!(g));
            (v, verdict.is_inconclusive())
        }
        Command::Census { matrix, depth } => {
            let g = GroupElement::parse(&ctx, matrix)?;
            member_word(&g)?;
            let rec = Survey::new(&ctx, *depth).record_of(&g)?;
            let row = SurveyRow::from_record(&rec);
            let mut v = serde_json::to_value(&row).expect("row serialises");
            if let Some(c) = &rec.census {
                let list = |set: &std::collections::BTreeMap<GroupElement, Word>| {
                    set.iter().map(|(e, w)| json!({ "matrix": e, "conjugator": w })).collect::<Vec<_>>()
                };
                let obj = v.as_object_mut().expect("object");
                obj.insert("symmetric_elements".into(), json!(list(&c.symmetric)));
                obj.insert("p_reciprocal_elements".into(), json!(list(&c.p_reciprocal)));
            }
            let inconclusive = row.stabilized == Some(false);
            if cli.format == Format::Csv {
                return Ok(Report { body: render_csv(&[row]), inconclusive });
            }
            (v, inconclusive)
        }
        Command::Survey { max_len, depth } => {
            if *max_len == 0 || *depth == 0 {
                return Err(CliError::Parse("max-len and depth must be at least 1".into()));
            }
            let rows = survey_rows(&ctx, *max_len, *depth)?;
            let inconclusive = rows.iter().any(|r| r.stabilized == Some(false));
            let body = match cli.format {
                Format::Json => render_json(&rows),
                Format::Csv => render_csv(&rows),
                Format::Text => render_survey_text(&rows),
            };
            return Ok(Report { body, inconclusive });
        }
    };
    Ok(Report { body: render(&value, cli.format), inconclusive })
}

/// Word of a member matrix, checked by re-evaluation.
fn member_word(g: &GroupElement) -> Result<Word, CliError> {
    if g.is_member() == Membership::NotMember {
        return Err(WordError::NotAMember.into());
    }
    let w = matrix_to_word(g)?;
    if hecke_core::evaluate(g.ctx(), &w) != *g {
        return Err(WordError::NotAMember.into());
    }
    Ok(w)
}

fn word_report(ctx: &Arc<RingContext>, w: &Word) -> Result<Value, CliError> {
    let g = hecke_core::evaluate(ctx, w);
    let (key, conj) = cyclic_reduce(w);
    let class = g.classify();
    let hyperbolic = g.is_hyperbolic();
    Ok(json!({
        "word": w,
        "matrix": g,
        "kind": class.kind,
        "order": class.order,
        "trace": g.trace(),
        "cyclic_word": key,
        "conjugator": conj,
        "primitive": if hyperbolic { Some(key.period() == key.len()) } else { None },
        "power": primitive_root(w).filter(|_| hyperbolic).map(|(_, k)| k),
        "vblocks": if hyperbolic { vblock_form(w).ok() } else { None },
    }))
}

fn ring(ctx: &Arc<RingContext>, op: RingOp, args: &[String]) -> Result<Value, CliError> {
    let want = match op {
        RingOp::Info => 0,
        RingOp::Sign => 1,
        _ => 2,
    };
    if args.len() != want {
        return Err(CliError::Parse(format!("expected {want} ring elements, got {}", args.len())));
    }
    let xs = args.iter().map(|s| ctx.parse_elem(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(match op {
        RingOp::Info => json!({
            "p": ctx.p(),
            "degree": ctx.degree(),
            "min_poly": minimal_polynomial(ctx.p())?,
            "lambda": ctx.lambda(),
            "lambda_approx": format!("{:.15}", ctx.lambda_f64()),
        }),
        RingOp::Add => json!({ "result": ctx.add(&xs[0], &xs[1]) }),
        RingOp::Sub => json!({ "result": ctx.sub(&xs[0], &xs[1]) }),
        RingOp::Mul => json!({ "result": ctx.mul(&xs[0], &xs[1]) }),
        RingOp::Sign => json!({ "sign": sign_value(ctx.sign(&xs[0])), "approx": format!("{:.15}", ctx.approx(&xs[0])) }),
        RingOp::Divide => {
            let (n, r) = ctx.pseudo_divide(&xs[0], &xs[1])?;
            json!({ "quotient": n, "remainder": r })
        }
        RingOp::Gcd => json!({ "gcd": ctx.pseudo_gcd(&xs[0], &xs[1])? }),
    })
}

fn sign_value(s: Sign) -> i8 {
    match s {
        Sign::Negative => -1,
        Sign::Zero => 0,
        Sign::Positive => 1,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn render(v: &Value, format: Format) -> String {
    let empty = Map::new();
    let obj = v.as_object().unwrap_or(&empty);
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("value serialises");
            s.push('\n');
            s
        }
        Format::Text => obj.iter().map(|(k, x)| format!("{k}: {}\n", scalar(x))).collect(),
        Format::Csv => {
            let quote = |s: String| if s.contains([',', '"']) { format!("\"{}\"", s.replace('"', "\"\"")) } else { s };
            let head: Vec<String> = obj.keys().cloned().collect();
            let row: Vec<String> = obj.values().map(|x| quote(scalar(x))).collect();
            format!("{}\n{}\n", head.join(","), row.join(","))
        }
    }
}

fn render_survey_text(rows: &[SurveyRow]) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&format!("{}  trace {}", r.key, r.trace));
        if let Some(c) = r.case_tag {
            out.push_str(&format!("  {c}"));
        }
        if let (Some(s), Some(pr), Some(f)) = (r.symmetric, r.p_reciprocal, r.fiber_size) {
            out.push_str(&format!("  sym {s} p-rec {pr} fiber {f}"));
        }
        out.push('\n');
    }
    if rows.is_empty() {
        out.push_str("no classes\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_commas() {
        let v = json!({ "a": "[1,2]", "b": 3 });
        assert_eq!(render(&v, Format::Csv), "a,b\n\"[1,2]\",3\n");
    }

    #[test]
    fn ring_arity_is_checked() {
        let ctx = RingContext::new(5).unwrap();
        assert!(matches!(ring(&ctx, RingOp::Gcd, &["[1,0]".into()]), Err(CliError::Parse(_))));
    }
}
