//! Command-line front end. Every subcommand emits one self-describing JSON
//! document on stdout (and optionally to --out). Exit status: 0 success,
//! 1 validation failure (set not avoiding, pattern not full-rank, tensor not
//! diagonal), 2 usage or input error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bounds;
use crate::error::{Error, Result};
use crate::geometry::{self, BuiltinPattern};
use crate::gf::FieldSpec;
use crate::linalg::Point;
use crate::pattern::{PatternSpec, PointSet};
use crate::report::{
    BoundDoc, CertifyDoc, CountDoc, DiagonalityDoc, GeometryDoc, PatternFile, PointSetFile,
    SearchDoc, ValidateDoc, SCHEMA,
};
use crate::search::{self, Order};
use crate::tensor::{slice_example_check, TensorContext, DEFAULT_EVAL_BUDGET};

#[derive(Parser, Debug)]
#[command(
    name = "patternlab",
    about = "Pattern-avoiding sets over finite fields: validation, detection, bounds, and search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// field size q = p^m (factored automatically)
    #[arg(long)]
    q: Option<u64>,
    /// prime characteristic (alternative to --q)
    #[arg(long)]
    p: Option<u64>,
    /// extension degree, with --p
    #[arg(long, default_value_t = 1)]
    m: usize,
}

#[derive(Args, Debug, Clone)]
struct PatternArgs {
    /// pattern-spec file, or a builtin name (ap3, right_isosceles, rot45,
    /// equilateral) combined with a field
    #[arg(long)]
    pattern: Option<String>,
    /// builtin pattern name (alias for --pattern with a name)
    #[arg(long)]
    builtin: Option<String>,
    #[command(flatten)]
    field: FieldArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analytic and exact avoidance bounds for (q, k, n, r)
    Bound {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full-rank validation report for a pattern
    Validate {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy or exact maximum avoiding-set search
    Search {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "greedy")]
        mode: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = search::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// single search order with lexicographic tie-breaking (the default;
        /// kept for interface stability)
        #[arg(long, default_value_t = true)]
        deterministic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an externally supplied set for avoidance
    Certify {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        n: usize,
        /// point-set file path, or inline like {0,1,2} / {(0,0),(1,0)}
        #[arg(long)]
        set: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the indicator tensor on A^r and confirm diagonality
    VerifyTensor {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = DEFAULT_EVAL_BUDGET)]
        budget: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Geometric helpers: emit builtin patterns, check triangles, spreads
    Geometry {
        #[command(subcommand)]
        cmd: GeometryCommand,
    },
    /// Instance counts in a set, or exact monomial counts
    Count {
        #[command(subcommand)]
        cmd: CountCommand,
    },
}

#[derive(Subcommand, Debug)]
enum GeometryCommand {
    /// Write a builtin pattern as a pattern-spec file
    Emit {
        #[arg(long)]
        name: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equilateral check for a triple of k = 2 points
    Triangle {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        /// three points, inline like {(0,0),(1,0),(6,3)} or a point-set file
        #[arg(long)]
        points: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spread between two vectors
    Spread {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// inline point, e.g. (1,0)
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CountCommand {
    /// Ordered non-trivial instances of a pattern inside a set
    Instances {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        set: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// |{e in {0..q-1}^D : sum <= floor(D(r-2)(q-1)/r)}|
    Monomials {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regression check of the xy + xz + yz slice decomposition
    SliceExample,
}

fn factor_prime_power(q: u64) -> Result<(u64, usize)> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q must exceed 1, got {q}")));
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Ok((q, 1));
    }
    let mut rest = q;
    let mut m = 0usize;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidParameter(format!(
            "q = {q} is not a prime power"
        )));
    }
    Ok((p, m))
}

impl FieldArgs {
    fn resolve(&self) -> Result<FieldSpec> {
        match (self.q, self.p) {
            (Some(q), None) => {
                let (p, m) = factor_prime_power(q)?;
                FieldSpec::new(p, m, None)
            }
            (None, Some(p)) => FieldSpec::new(p, self.m, None),
            (Some(_), Some(_)) => Err(Error::InvalidParameter(
                "give either --q or --p/--m, not both".into(),
            )),
            (None, None) => Err(Error::InvalidParameter(
                "a field is required: --q or --p/--m".into(),
            )),
        }
    }
}

impl PatternArgs {
    /// Exactly one pattern source; builtins need a field, files carry their
    /// own.
    fn resolve(&self) -> Result<PatternSpec> {
        let source = match (&self.pattern, &self.builtin) {
            (Some(s), None) | (None, Some(s)) => s.clone(),
            (Some(_), Some(_)) => {
                return Err(Error::InvalidParameter(
                    "give either --pattern or --builtin, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::InvalidParameter(
                    "a pattern source is required: --pattern or --builtin".into(),
                ))
            }
        };
        if let Ok(builtin) = BuiltinPattern::parse(&source) {
            let field = self.field.resolve()?;
            return geometry::builtin_pattern(builtin, &field);
        }
        let text = std::fs::read_to_string(&source).map_err(|e| {
            Error::MalformedInput(format!(
                "'{source}' is neither a builtin pattern name nor a readable file: {e}"
            ))
        })?;
        let file: PatternFile = serde_json::from_str(&text)?;
        file.to_pattern()
    }
}

/// Inline point list: {0,1,2} for scalars or {(0,0),(1,0)} for tuples.
fn parse_inline_points(text: &str, field: &FieldSpec, k: usize, n: usize) -> Result<Vec<Point>> {
    let inner = text
        .trim()
        .trim_start_matches('{')
        .trim_end_matches('}')
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let mut groups: Vec<String> = Vec::new();
    if inner.contains('(') {
        let mut rest = inner;
        while let Some(start) = rest.find('(') {
            let end = rest[start..]
                .find(')')
                .ok_or_else(|| Error::MalformedInput("unbalanced parentheses".into()))?;
            groups.push(rest[start + 1..start + end].to_string());
            rest = &rest[start + end + 1..];
        }
    } else {
        groups.extend(inner.split(',').map(|s| s.to_string()));
    }
    let mut points = Vec::new();
    for g in groups {
        let coords: Result<Vec<i64>> = g
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::MalformedInput(format!("bad coordinate '{s}': {e}")))
            })
            .collect();
        let coords = coords?;
        if coords.len() != k * n {
            return Err(Error::MalformedInput(format!(
                "point ({g}) has {} coordinates, expected k*n = {}",
                coords.len(),
                k * n
            )));
        }
        points.push(Point::from_ints(field, k, n, &coords)?);
    }
    Ok(points)
}

fn load_set(spec: &str, pattern: &PatternSpec, n: usize) -> Result<PointSet> {
    let field = pattern.field();
    let k = pattern.k();
    if spec.trim_start().starts_with('{') {
        let pts = parse_inline_points(spec, field, k, n)?;
        return PointSet::from_points(field, k, n, pts);
    }
    if Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec)?;
        let file: PointSetFile = serde_json::from_str(&text)?;
        if file.n != n {
            return Err(Error::MalformedInput(format!(
                "set file has n = {}, command says n = {n}",
                file.n
            )));
        }
        return file.to_set(Some((field, k)));
    }
    Err(Error::MalformedInput(format!(
        "set '{spec}' is neither an inline list nor an existing file"
    )))
}

fn emit(doc: &impl serde::Serialize, out: &Option<PathBuf>) -> Result<()> {
    let json = serde_json::to_string_pretty(doc)?;
    println!("{json}");
    if let Some(path) = out {
        std::fs::write(path, json + "\n")?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Bound { q, k, n, r, out } => {
            let rep = bounds::avoidance_bound(q, k, n, r)?;
            emit(&BoundDoc::new(&rep), &out)?;
            Ok(0)
        }
        Command::Validate { pattern, out } => {
            let spec = pattern.resolve()?;
            let report = spec.full_rank_report();
            let doc = ValidateDoc::new(spec.field(), &report);
            emit(&doc, &out)?;
            Ok(if report.full_rank { 0 } else { 1 })
        }
        Command::Search {
            pattern,
            n,
            mode,
            seed,
            budget,
            deterministic: _,
            out,
        } => {
            let spec = pattern.resolve()?.validated()?;
            let result = match mode.as_str() {
                "greedy" => {
                    let order = match seed {
                        Some(s) => Order::SeededRandom(s),
                        None => Order::Lexicographic,
                    };
                    search::greedy(&spec, n, order)?
                }
                "exact" => search::exact_max(&spec, n, budget)?,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown mode '{other}' (expected greedy or exact)"
                    )))
                }
            };
            let doc = SearchDoc {
                schema: SCHEMA.to_string(),
                mode,
                size: result.size,
                optimal: result.optimal,
                nodes_explored: result.nodes_explored,
                certified: true,
                set: PointSetFile::from_set(&result.best_set),
            };
            emit(&doc, &out)?;
            Ok(0)
        }
        Command::Certify {
            pattern,
            n,
            set,
            out,
        } => {
            let spec = pattern.resolve()?.validated()?;
            let points = load_set(&set, &spec, n)?;
            let witness = search::certify(&spec, &points)?;
            let doc = CertifyDoc::new(witness.as_ref());
            emit(&doc, &out)?;
            Ok(if witness.is_none() { 0 } else { 1 })
        }
        Command::VerifyTensor {
            pattern,
            n,
            set,
            budget,
            out,
        } => {
            let spec = pattern.resolve()?.validated()?;
            let points = load_set(&set, &spec, n)?;
            let ctx = TensorContext::new(spec, n)?;
            match ctx.check_diagonal(&points, budget) {
                Ok(rep) => {
                    let code = if rep.diagonal { 0 } else { 1 };
                    emit(&DiagonalityDoc::new(&rep), &out)?;
                    Ok(code)
                }
                Err(Error::NotAvoiding(w)) => {
                    eprintln!("set is not avoiding: instance {w}");
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::Geometry { cmd } => match cmd {
            GeometryCommand::Emit { name, field, out } => {
                let f = field.resolve()?;
                let builtin = BuiltinPattern::parse(&name)?;
                let p = geometry::builtin_pattern(builtin, &f)?;
                emit(&PatternFile::from_pattern(&p), &out)?;
                Ok(0)
            }
            GeometryCommand::Triangle {
                field,
                n,
                points,
                out,
            } => {
                let f = field.resolve()?;
                let pts = if points.trim_start().starts_with('{') {
                    parse_inline_points(&points, &f, 2, n)?
                } else {
                    let text = std::fs::read_to_string(&points)?;
                    let file: PointSetFile = serde_json::from_str(&text)?;
                    file.to_set(Some((&f, 2)))?.members().to_vec()
                };
                if pts.len() != 3 {
                    return Err(Error::MalformedInput(format!(
                        "triangle check needs exactly 3 points, got {}",
                        pts.len()
                    )));
                }
                let eq = geometry::is_equilateral(&pts[0], &pts[1], &pts[2])?;
                let dists = [
                    geometry::sq_dist(&pts[0], &pts[1])?,
                    geometry::sq_dist(&pts[0], &pts[2])?,
                    geometry::sq_dist(&pts[1], &pts[2])?,
                ];
                let doc = GeometryDoc {
                    schema: SCHEMA.to_string(),
                    equilateral: Some(eq),
                    spread: None,
                    isotropic: None,
                    sq_dists: Some(
                        dists
                            .iter()
                            .map(|d| crate::report::elem_to_repr(&f, d))
                            .collect(),
                    ),
                };
                emit(&doc, &out)?;
                Ok(0)
            }
            GeometryCommand::Spread {
                field,
                n,
                k,
                u,
                v,
                out,
            } => {
                let f = field.resolve()?;
                let pu = parse_inline_points(&format!("{{{u}}}"), &f, k, n)?;
                let pv = parse_inline_points(&format!("{{{v}}}"), &f, k, n)?;
                if pu.len() != 1 || pv.len() != 1 {
                    return Err(Error::MalformedInput(
                        "--u and --v each take one point".into(),
                    ));
                }
                let s = geometry::spread(&pu[0], &pv[0])?;
                let doc = GeometryDoc {
                    schema: SCHEMA.to_string(),
                    equilateral: None,
                    isotropic: Some(s.is_none()),
                    spread: s.map(|e| crate::report::elem_to_repr(&f, &e)),
                    sq_dists: None,
                };
                emit(&doc, &out)?;
                Ok(0)
            }
        },
        Command::Count { cmd } => match cmd {
            CountCommand::Instances {
                pattern,
                n,
                set,
                out,
            } => {
                let spec = pattern.resolve()?.validated()?;
                let points = load_set(&set, &spec, n)?;
                let count = spec.count_instances(&points)?;
                let doc = CountDoc {
                    schema: SCHEMA.to_string(),
                    kind: "instances".into(),
                    count: count.to_string(),
                };
                emit(&doc, &out)?;
                Ok(0)
            }
            CountCommand::Monomials { q, d, r, out } => {
                let count = bounds::monomial_count(q, d, r)?;
                let doc = CountDoc {
                    schema: SCHEMA.to_string(),
                    kind: "monomials".into(),
                    count: count.to_string(),
                };
                emit(&doc, &out)?;
                Ok(0)
            }
            CountCommand::SliceExample => {
                let ok = slice_example_check();
                let doc = CountDoc {
                    schema: SCHEMA.to_string(),
                    kind: "slice_example".into(),
                    count: if ok { "1".into() } else { "0".into() },
                };
                emit(&doc, &None)?;
                Ok(if ok { 0 } else { 1 })
            }
        },
    }
}

/// Entry point shared by the binary and the integration tests.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success exit codes
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e @ (Error::NotAvoiding(_) | Error::NotFullRank(_))) => {
            eprintln!("{e}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_prime_powers() {
        assert_eq!(factor_prime_power(7).unwrap(), (7, 1));
        assert_eq!(factor_prime_power(9).unwrap(), (3, 2));
        assert_eq!(factor_prime_power(121).unwrap(), (11, 2));
        assert_eq!(factor_prime_power(27).unwrap(), (3, 3));
        assert!(factor_prime_power(15).is_err());
        assert!(factor_prime_power(1).is_err());
    }

    #[test]
    fn inline_point_parsing() {
        let f3 = FieldSpec::new(3, 1, None).unwrap();
        let pts = parse_inline_points("{0,1,2}", &f3, 1, 1).unwrap();
        assert_eq!(pts.len(), 3);
        let pts = parse_inline_points("{(0,0),(1,0)}", &f3, 1, 2).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(parse_inline_points("{(0,0,0)}", &f3, 1, 2).is_err());
        assert!(parse_inline_points("{}", &f3, 1, 1).unwrap().is_empty());
    }
}
