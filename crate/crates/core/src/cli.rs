//! Command-line front end. `run` returns the process exit code: 0 on
//! success, 1 when a verification finds a violation, 2 on usage errors or
//! exceeded size caps.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::boundary::{theta_decorated, ProfileTable, VertexSet};
use crate::error::{EipError, Result};
use crate::graph::{format_index, write_edge_list, Decoration, GraphParams, Vertex};
use crate::metrics::metrics_from_table;
use crate::steiner::{compress_h, compress_inf, ell_vector, reduce_to_lex, subadd};
use crate::verifier::{
    sweep_instances, verify_lemma_suite, verify_lex_optimality, verify_subadditivity,
};
use crate::ENUM_CAP;

#[derive(Debug, Parser)]
#[command(
    name = "sierpinski-eip",
    version,
    about = "Edge-isoperimetric tools for Sierpinski graphs S(n,m)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the edge list of S(n,m).
    Graph {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value = "text")]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the lex-segment boundary profile.
    Profile {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value = "recurrence")]
        method: Method,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an exhaustive verification and print a JSON report.
    Verify {
        #[arg(value_enum)]
        what: VerifyKind,
        #[command(flatten)]
        target: Target,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Bisection width, maximum profile value and Cheeger constant.
    Metrics {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value = "recurrence")]
        method: Method,
    },
    /// Apply a Steiner operation to an explicit vertex set.
    Steiner {
        #[arg(value_enum)]
        op: SteinerOp,
        #[command(flatten)]
        size: Size,
        #[arg(long, default_value_t = 0)]
        s: u32,
        /// Defaults to `m - s`, so the plain graph when neither is given.
        #[arg(long)]
        t: Option<u32>,
        /// Comma-separated vertices, or `@a-b` for lex ranks a..=b.
        #[arg(long)]
        set: String,
        /// Copy to compress; without it `compress` iterates to a fixpoint.
        #[arg(long)]
        h: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Size {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u32,
}

#[derive(Debug, Clone, Copy, Args)]
#[group(required = true, multiple = true)]
pub struct Target {
    #[arg(long, requires = "m", conflicts_with = "max_nm")]
    pub n: Option<u32>,
    #[arg(long, requires = "n")]
    pub m: Option<u32>,
    /// Every instance with n + m <= B within the size cap.
    #[arg(long = "max-nm", value_name = "B")]
    pub max_nm: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recurrence,
    Direct,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Subadd,
    Optimal,
    Lemmas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SteinerOp {
    Compress,
    Subadd,
    Reduce,
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<EipError> for Failure {
    fn from(e: EipError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(ok) => {
            if ok {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "io error: {e}");
            2
        }
    }
}

fn params(size: Size) -> Result<GraphParams> {
    GraphParams::new(size.n, size.m)
}

fn sink<'a, W: Write>(path: &Option<PathBuf>, out: &'a mut W) -> io::Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(out),
    })
}

fn table(p: &GraphParams, method: Method) -> Result<ProfileTable> {
    match method {
        Method::Recurrence => crate::boundary::profile_recurrence(p),
        Method::Direct => ProfileTable::direct(p),
        Method::Brute => ProfileTable::bruteforce(p),
    }
}

fn execute<W: Write, E: Write>(
    cmd: Command,
    out: &mut W,
    err: &mut E,
) -> std::result::Result<bool, Failure> {
    match cmd {
        Command::Graph {
            size,
            format,
            out: path,
        } => {
            let p = params(size)?;
            p.ensure_order_at_most(ENUM_CAP, "edge list")?;
            let mut w = sink(&path, out)?;
            match format {
                GraphFormat::Text => write_edge_list(&p, &mut w)?,
                GraphFormat::Json => {
                    let edges: Vec<[String; 2]> = p
                        .edge_indices()
                        .map(|(a, b)| [format_index(a, &p), format_index(b, &p)])
                        .collect();
                    serde_json::to_writer(&mut w, &serde_json::json!({ "edges": edges }))
                        .map_err(io::Error::from)?;
                    writeln!(w)?;
                }
            }
            w.flush()?;
            Ok(true)
        }
        Command::Profile {
            size,
            method,
            format,
            out: path,
        } => {
            let p = params(size)?;
            let t = table(&p, method)?;
            let mut w = sink(&path, out)?;
            match format {
                TableFormat::Csv => t.write_csv(&mut w)?,
                TableFormat::Json => writeln!(w, "{}", t.to_json())?,
            }
            w.flush()?;
            Ok(true)
        }
        Command::Metrics { size, method } => {
            let p = params(size)?;
            let r = metrics_from_table(&table(&p, method)?)?;
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&r.to_json()).unwrap()
            )?;
            Ok(r.all_agree())
        }
        Command::Verify { what, target, jobs } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let (ok, value, skipped) = pool.install(|| verify(what, target))?;
            for msg in skipped {
                writeln!(err, "{msg}")?;
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap())?;
            Ok(ok)
        }
        Command::Steiner {
            op,
            size,
            s,
            t,
            set,
            h,
        } => {
            let p = params(size)?;
            let d = Decoration::new(s, t.unwrap_or(p.m().saturating_sub(s)), p.m())?;
            p.ensure_order_at_most(ENUM_CAP, "vertex set")?;
            let input = parse_set(&set, &p)?;
            let before = theta_decorated(&input, &p, &d)?;
            let result = match (op, h) {
                (SteinerOp::Compress, Some(h)) => compress_h(&input, &p, &d, h)?,
                (SteinerOp::Compress, None) => compress_inf(&input, &p, &d)?,
                (SteinerOp::Subadd, _) => subadd(&input, &p, &d)?,
                (SteinerOp::Reduce, _) => {
                    let (fin, trace) = reduce_to_lex(&input, &p, &d)?;
                    for step in trace {
                        writeln!(
                            out,
                            "{} {:?} theta={}",
                            step.op, step.ell_vector, step.theta
                        )?;
                    }
                    fin
                }
            };
            let after = theta_decorated(&result, &p, &d)?;
            let names: Vec<String> = result.iter().map(|v| format_index(v, &p)).collect();
            writeln!(out, "set: {}", names.join(","))?;
            writeln!(out, "ell: {:?}", ell_vector(&result, &p)?.0)?;
            writeln!(out, "size: {}", result.len())?;
            writeln!(out, "theta: {before} -> {after}")?;
            Ok(true)
        }
    }
}

fn instances(target: Target) -> Result<Vec<GraphParams>> {
    match (target.n, target.m, target.max_nm) {
        (Some(n), Some(m), None) => Ok(vec![GraphParams::new(n, m)?]),
        (None, None, Some(b)) => Ok(sweep_instances(b)),
        _ => Err(EipError::Parse(
            "give either --n and --m, or --max-nm".into(),
        )),
    }
}

/// Runs the checks; returns overall pass, the JSON report (an array for
/// sweeps) and notes on skipped instances.
fn verify(what: VerifyKind, target: Target) -> Result<(bool, serde_json::Value, Vec<String>)> {
    let single = target.max_nm.is_none();
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut ok = true;
    for p in instances(target)? {
        let r = match what {
            VerifyKind::Subadd => crate::boundary::profile_recurrence(&p)
                .and_then(|t| verify_subadditivity(&p, &t))
                .map(|r| (r.passed(), r.to_json())),
            VerifyKind::Optimal => {
                verify_lex_optimality(&p).map(|r| (r.passed(), serde_json::to_value(r).unwrap()))
            }
            VerifyKind::Lemmas => {
                verify_lemma_suite(&p).map(|r| (r.passed(), serde_json::to_value(r).unwrap()))
            }
        };
        match r {
            Ok((passed, json)) => {
                ok &= passed;
                reports.push(json);
            }
            Err(e @ EipError::TooLarge { .. }) if !single => {
                skipped.push(format!("skipping {p}: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    let value = if single {
        reports.pop().unwrap_or_default()
    } else {
        serde_json::Value::Array(reports)
    };
    Ok((ok, value, skipped))
}

/// Parses a comma- or whitespace-separated list of vertices and `@a-b`
/// lex-rank ranges.
pub fn parse_set(list: &str, p: &GraphParams) -> Result<VertexSet> {
    let mut s = VertexSet::empty(p.order());
    for item in list
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        if let Some(range) = item.strip_prefix('@') {
            let (a, b) = range
                .split_once('-')
                .ok_or_else(|| EipError::Parse(format!("bad rank range {item:?}")))?;
            let rank = |x: &str| {
                x.parse::<u64>()
                    .map_err(|_| EipError::Parse(format!("bad rank {x:?}")))
            };
            let (a, b) = (rank(a)?, rank(b)?);
            for r in [a, b] {
                if r == 0 || r > p.order() {
                    return Err(EipError::RankOutOfRange {
                        rank: r,
                        max: p.order(),
                    });
                }
            }
            if a > b {
                return Err(EipError::Ordering { lo: a, hi: b });
            }
            s.insert_range(a - 1, b);
        } else {
            s.insert(Vertex::parse(item, p)?.index(p));
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("sierpinski-eip").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn parse_set_forms() {
        let p = GraphParams::new(2, 3).unwrap();
        let s = parse_set("00, 11 @7-8", &p).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), [0, 4, 6, 7]);
        assert!(parse_set("@0-2", &p).is_err());
        assert!(parse_set("@3-2", &p).is_err());
        assert!(parse_set("03", &p).is_err());
        assert!(parse_set("@1", &p).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["metrics", "--n", "2", "--m", "3"]).0, 0);
        assert_eq!(call(&["metrics", "--n", "2", "--m", "1"]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["graph", "--n", "40", "--m", "2"]).0, 2);
        assert_eq!(call(&["verify", "subadd"]).0, 2);
    }

    #[test]
    fn steiner_output() {
        let (code, out, _) = call(&[
            "steiner", "compress", "--n", "2", "--m", "3", "--set", "00,20", "--h", "0",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("set: 02,20"), "{out}");
        assert!(out.contains("theta: 5 -> 4"), "{out}");
    }
}
