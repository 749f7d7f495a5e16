//! Command-line front end. Each subcommand parses its inputs, calls the
//! library and prints the result.
//!
//! Exit codes: `0` success, `1` input read fine but the matrix (or
//! certificate) does not check out, `2` usage or input error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cayley3::{nonexistence_certificate, Certificate};
use crate::error::{Error, Result};
use crate::family8::{eliminate_w, theorem_family, w1_check, DiagForms, FamilyResult};
use crate::format::{entries_json, parse_matrix};
use crate::octonion::OctParams;
use crate::permconstruct::improper_construction;
use crate::rational::Rational;
use crate::search::{
    greedy_backtrack_left, search5_cayley, search8_seeded, Enumeration, GreedyBounds, Search8Config, SearchConfig,
    GREEDY_POSITIONS,
};
use crate::verify::{verify, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "eulermagic", version, about = "Euler magic matrices: verify, construct, search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a matrix file for the Euler magic conditions and properness.
    Verify {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the four-parameter 8x8 family at (q, r, t, u).
    #[command(allow_negative_numbers = true)]
    Family {
        q: Rational,
        r: Rational,
        t: Rational,
        u: Rational,
        #[arg(long)]
        json: bool,
    },
    /// Check the polynomial identities behind the 3x3 nonexistence proof.
    Prove3 {
        #[arg(long)]
        json: bool,
    },
    /// Build the permutation construction of size n.
    Perm {
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Random Cayley search for 5x5 candidates (JSON lines).
    Search5(Search5Args),
    /// The 8x8 pipeline with fixed left tuple and (p, q, r, s, t) (JSON lines).
    Search8(Search8Args),
    /// Print the forms A and B for a left tuple, and F when h = +-a.
    #[command(allow_negative_numbers = true)]
    Forms {
        #[arg(num_args = 8, required = true)]
        left: Vec<i64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct Search5Args {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub num_bound: i64,
    #[arg(long, default_value_t = 1)]
    pub den_bound: i64,
    #[arg(long, default_value_t = 10_000)]
    pub iterations: u64,
    #[arg(long, default_value_t = 0)]
    pub threshold: usize,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct Search8Args {
    /// `a,...,h`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub left: Vec<i64>,
    /// `p,q,r,s,t`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub partial: Vec<Rational>,
    /// `u,v,w` to check exactly; may repeat.
    #[arg(long = "solution", allow_hyphen_values = true)]
    pub solutions: Vec<String>,
    /// Grid height for `(u, v)` enumeration.
    #[arg(long)]
    pub height: Option<i64>,
    #[arg(long, default_value_t = 1)]
    pub max_den: i64,
    /// Grid center `u,v`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub center: Vec<Rational>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random `(u, v)` draws.
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
    #[arg(long, default_value_t = 10)]
    pub num_bound: i64,
    #[arg(long, default_value_t = 10)]
    pub den_bound: i64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Instead of solving, list (left, partial) tuples found by greedy backtracking.
    #[arg(long)]
    pub greedy: bool,
    /// Greedy value range `LO:HI` for every position.
    #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
    pub range: String,
    /// Greedy values for one position, `POS=V1,V2,...`; may repeat.
    #[arg(long = "values", allow_hyphen_values = true)]
    pub values: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub max_results: usize,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        // reader closed early, e.g. `| head`
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Verify { path, json } => cmd_verify(&path, json, out),
        Command::Family { q, r, t, u, json } => cmd_family(&[q, r, t, u], json, out),
        Command::Prove3 { json } => prove3_report(&nonexistence_certificate(), json, out),
        Command::Perm { n, json } => cmd_perm(n, json, out),
        Command::Search5(a) => cmd_search5(&a, out),
        Command::Search8(a) => cmd_search8(&a, out),
        Command::Forms { left, json } => cmd_forms(&left, json, out),
    }
}

fn write_report(r: &VerifyReport, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "n: {}", r.n)?;
    writeln!(out, "gamma: {}", r.gamma)?;
    writeln!(out, "orthogonal: {}", r.cond_orthogonal)?;
    writeln!(out, "diagonal: {}", r.cond_diagonal)?;
    writeln!(out, "antidiagonal: {}", r.cond_antidiagonal)?;
    writeln!(out, "euler_magic: {}", r.is_euler_magic)?;
    writeln!(out, "proper: {}", r.is_proper)?;
    writeln!(out, "distinct_squares: {}", r.distinct_square_count)?;
    let dups: Vec<String> = r
        .duplicate_pairs
        .iter()
        .map(|((i, j), (k, l))| format!("({i},{j})-({k},{l})"))
        .collect();
    writeln!(out, "duplicates: {}", dups.join(" "))?;
    Ok(())
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

fn verdict(r: &VerifyReport) -> i32 {
    if r.is_euler_magic {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn cmd_verify(path: &PathBuf, json: bool, out: &mut dyn Write) -> Result<i32> {
    let text = std::fs::read_to_string(path)?;
    let report = verify(&parse_matrix(&text)?)?;
    if json {
        write_json(&report.to_json(), out)?;
    } else {
        write_report(&report, out)?;
    }
    Ok(verdict(&report))
}

fn cmd_family(p: &[Rational; 4], json: bool, out: &mut dyn Write) -> Result<i32> {
    let f: FamilyResult = theorem_family(&p[0], &p[1], &p[2], &p[3])?;
    if json {
        write_json(&f.to_json(), out)?;
    } else {
        writeln!(out, "X: {}", f.x)?;
        let right: Vec<String> = f.right.0.iter().map(ToString::to_string).collect();
        writeln!(out, "right: {}", right.join(" "))?;
        write!(out, "{}", f.primitive)?;
        write_report(&f.report, out)?;
    }
    Ok(verdict(&f.report))
}

/// Prints a certificate; exit `0` iff no identity failed.
pub fn prove3_report(cert: &Certificate, json: bool, out: &mut dyn Write) -> Result<i32> {
    if json {
        write_json(cert, out)?;
    } else {
        write!(out, "{cert}")?;
    }
    Ok(if cert.all_pass() { EXIT_OK } else { EXIT_FALSE })
}

fn cmd_perm(n: usize, json: bool, out: &mut dyn Write) -> Result<i32> {
    let m = improper_construction(n)?;
    let report = verify(&m.to_rational())?;
    if json {
        write_json(
            &serde_json::json!({ "matrix": entries_json(&m), "report": report.to_json() }),
            out,
        )?;
    } else {
        write!(out, "{m}")?;
        write_report(&report, out)?;
    }
    Ok(verdict(&report))
}

fn cmd_search5(a: &Search5Args, out: &mut dyn Write) -> Result<i32> {
    let result = search5_cayley(&SearchConfig {
        seed: a.seed,
        numerator_bound: a.num_bound,
        denominator_bound: a.den_bound,
        max_iterations: a.iterations,
        score_threshold: a.threshold,
        workers: a.workers,
    })?;
    write!(out, "{}", result.to_json_lines())?;
    Ok(EXIT_OK)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad {what} value `{x}`")))
        })
        .collect()
}

fn fixed<T: Clone, const N: usize>(v: &[T], what: &str) -> Result<[T; N]> {
    v.to_vec()
        .try_into()
        .map_err(|_| Error::InvalidConfig(format!("{what} needs {N} values, got {}", v.len())))
}

fn greedy_bounds(a: &Search8Args) -> Result<GreedyBounds> {
    let (lo, hi) = a
        .range
        .split_once(':')
        .and_then(|(l, h)| Some((l.trim().parse().ok()?, h.trim().parse().ok()?)))
        .ok_or_else(|| Error::InvalidConfig(format!("bad range `{}`", a.range)))?;
    let mut b = GreedyBounds::uniform(lo, hi);
    for spec in &a.values {
        let (pos, vals) = spec
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("bad values `{spec}`")))?;
        let idx = GREEDY_POSITIONS
            .iter()
            .position(|p| *p == pos.trim())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown position `{pos}`")))?;
        b.values[idx] = parse_list(vals, "greedy")?;
    }
    Ok(b)
}

fn cmd_search8(a: &Search8Args, out: &mut dyn Write) -> Result<i32> {
    if a.greedy {
        let seed = a
            .seed
            .ok_or_else(|| Error::InvalidConfig("--greedy needs --seed".into()))?;
        for t in greedy_backtrack_left(&greedy_bounds(a)?, seed, a.max_results) {
            write_json(&t, out)?;
        }
        return Ok(EXIT_OK);
    }
    let mut cfg = Search8Config::new(fixed(&a.left, "--left")?, fixed(&a.partial, "--partial")?);
    for s in &a.solutions {
        cfg.supplied.push(fixed(&parse_list::<Rational>(s, "solution")?, "--solution")?);
    }
    if let Some(h) = a.height {
        let center = if a.center.is_empty() {
            [Rational::zero(), Rational::zero()]
        } else {
            fixed(&a.center, "--center")?
        };
        cfg.enumeration = Some(Enumeration {
            center,
            height: h,
            max_den: a.max_den,
        });
    }
    if a.samples > 0 {
        cfg.seed = a
            .seed
            .ok_or_else(|| Error::InvalidConfig("--samples needs --seed".into()))?;
    }
    cfg.random_samples = a.samples;
    cfg.numerator_bound = a.num_bound;
    cfg.denominator_bound = a.den_bound;
    cfg.workers = a.workers;
    let result = search8_seeded(&cfg)?;
    write!(out, "{}", result.to_json_lines())?;
    Ok(EXIT_OK)
}

fn cmd_forms(left: &[i64], json: bool, out: &mut dyn Write) -> Result<i32> {
    let left = OctParams(fixed::<i64, 8>(left, "left tuple")?);
    let forms = DiagForms::build(&left);
    let mut fields: BTreeMap<&str, String> = BTreeMap::new();
    fields.insert("A", forms.a.to_string());
    fields.insert("B", forms.b.to_string());
    if w1_check(&left) {
        let e = eliminate_w(&forms)?;
        fields.insert("F", e.f.to_string());
        fields.insert("x", e.x.to_string());
        fields.insert("y", e.y.to_string());
    }
    if json {
        write_json(&fields, out)?;
    } else {
        for key in ["A", "B", "x", "y", "F"] {
            if let Some(v) = fields.get(key) {
                writeln!(out, "{key} = {v}")?;
            }
        }
    }
    Ok(EXIT_OK)
}
