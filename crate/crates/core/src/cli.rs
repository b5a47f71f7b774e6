//! Commands behind the `wpvol` binary.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad usage or input.
//! Structured output goes to `out`, diagnostics to `err`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::arith::{parse_rat, PiPoly, Rat};
use crate::cache::{CacheFile, VolumeRecord};
use crate::error::{Error, Result};
use crate::intersection::{self, CheckRecord, TauTable};
use crate::oracle::{self, OracleRecord};
use crate::poly::{LPoly, MultiIndex};
use crate::recursion::{true_volume, Signature, VolumeTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "wpvol", version, about = "Exact Weil-Petersson volumes and intersection numbers")]
pub struct Cli {
    /// Table cache to read and extend.
    #[arg(long, env = "WPVOL_CACHE", global = true)]
    pub cache: Option<PathBuf>,

    /// Worker threads for table construction.
    #[arg(long, default_value_t = 1, global = true)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    String,
    Dilaton,
    Dvv,
    DoString,
    DoDilaton,
    Kernels,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the volume polynomial V_{g,n}.
    Volume {
        g: u32,
        n: u32,
        /// Boundary lengths to evaluate at, comma separated rationals.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eval: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Report the recursion's halved V_{1,1}.
        #[arg(long)]
        internal_convention: bool,
    },
    /// Print <kappa_1^m tau_alpha>_g.
    Intersect {
        g: u32,
        /// Exponents of the psi classes, comma separated.
        #[arg(value_delimiter = ',', required = true)]
        alpha: Vec<u32>,
        /// Power of kappa_1; defaults to the complementary degree.
        #[arg(long)]
        kappa: Option<u32>,
    },
    /// Check relations over all (g,n) with 3g-3+n <= max-dim.
    Verify {
        #[arg(value_enum)]
        relation: Relation,
        #[arg(long, default_value_t = 6)]
        max_dim: u32,
        /// Emit JSON records instead of text lines.
        #[arg(long)]
        json: bool,
    },
    /// Print the volume of the closed genus-g moduli space.
    Compact {
        g: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build the table up to max-dim and write it as a cache file.
    Table {
        #[arg(long, default_value_t = 6)]
        max_dim: u32,
        /// Output path; standard out when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print Zograf's asymptotic ratio for g = 1..=gmax (no pass/fail).
    DiagZograf {
        #[arg(long, default_value_t = 5)]
        gmax: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
}

/// Parses `args` and runs the command; returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            code
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

struct Session<'a> {
    table: VolumeTable,
    cli: &'a Cli,
    loaded: usize,
}

impl<'a> Session<'a> {
    fn open(cli: &'a Cli, err: &mut dyn Write) -> Result<Self> {
        let table = match &cli.cache {
            Some(path) if path.exists() => {
                let t = CacheFile::load(path)?.into_table()?;
                let _ = writeln!(err, "loaded {} volumes from {}", t.len(), path.display());
                t
            }
            _ => VolumeTable::new(),
        };
        let loaded = table.len();
        Ok(Self { table, cli, loaded })
    }

    fn ensure(&mut self, targets: &[Signature]) -> Result<()> {
        self.table.ensure_all(targets, self.cli.threads)
    }

    fn close(self, err: &mut dyn Write) -> Result<()> {
        if let Some(path) = &self.cli.cache {
            if self.table.len() > self.loaded {
                CacheFile::from_table(&self.table).save(path)?;
                let _ = writeln!(err, "saved {} volumes to {}", self.table.len(), path.display());
            }
        }
        Ok(())
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut session = Session::open(cli, err)?;
    let code = match &cli.command {
        Command::Volume { g, n, eval, format, internal_convention } => {
            cmd_volume(&mut session, *g, *n, eval.as_deref(), *format, *internal_convention, out, err)?
        }
        Command::Intersect { g, alpha, kappa } => cmd_intersect(&mut session, *g, alpha, *kappa, out, err)?,
        Command::Verify { relation, max_dim, json } => cmd_verify(&mut session, *relation, *max_dim, *json, out, err)?,
        Command::Compact { g, format } => cmd_compact(&mut session, *g, *format, out)?,
        Command::Table { max_dim, out: path } => cmd_table(&mut session, *max_dim, path.as_ref(), out, err)?,
        Command::DiagZograf { gmax, n } => cmd_diag_zograf(&mut session, *gmax, *n, out)?,
    };
    session.close(err)?;
    Ok(code)
}

fn render_pi(p: &PiPoly, format: Format) -> String {
    match format {
        Format::Text => p.to_string(),
        Format::Json => serde_json::to_string(p).unwrap_or_default(),
        Format::Latex => LPoly::constant(0, p.clone()).to_latex(),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_volume(
    session: &mut Session<'_>,
    g: u32,
    n: u32,
    eval: Option<&[String]>,
    format: Format,
    internal: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    if n == 0 {
        writeln!(err, "V_{{{g},0}} has no boundary; use `wpvol compact {g}`")?;
        return Ok(EXIT_USAGE);
    }
    let s = Signature::new(g, n)?;
    session.ensure(&[s])?;
    let v = if internal {
        session.table.require(s)?.clone()
    } else {
        true_volume(s, &session.table)?
    };
    if let Some(lengths) = eval {
        if lengths.len() != n as usize {
            writeln!(err, "expected {n} lengths, got {}", lengths.len())?;
            return Ok(EXIT_USAGE);
        }
        let mut squares = Vec::with_capacity(lengths.len());
        for l in lengths {
            let r: Rat = parse_rat(l)?;
            if r < Rat::from_integer(0.into()) {
                writeln!(err, "boundary lengths must be non-negative, got {l}")?;
                return Ok(EXIT_USAGE);
            }
            squares.push(&r * &r);
        }
        let value = v.eval_squares(&squares)?;
        writeln!(out, "{}", render_pi(&value, format))?;
        match value.to_f64() {
            Ok(x) => writeln!(out, "{x:.15e}")?,
            Err(_) => writeln!(err, "value exceeds double range")?,
        }
        return Ok(EXIT_OK);
    }
    match format {
        Format::Text => writeln!(out, "{v}")?,
        Format::Json => writeln!(out, "{}", serde_json::to_string(&VolumeRecord::new(s, &v))?)?,
        Format::Latex => writeln!(out, "{}", v.to_latex())?,
    }
    Ok(EXIT_OK)
}

fn cmd_intersect(
    session: &mut Session<'_>,
    g: u32,
    alpha: &[u32],
    kappa: Option<u32>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let s = Signature::new(g, alpha.len() as u32)?;
    let alpha = MultiIndex::new(alpha.to_vec());
    let d = s.dim();
    let m = kappa.unwrap_or_else(|| d.saturating_sub(alpha.degree()));
    if alpha.degree() + m != d {
        writeln!(out, "0")?;
        writeln!(
            err,
            "degree {} + {m} differs from dim {d} of M_{{{},{}}}: the intersection is zero",
            alpha.degree(),
            s.g,
            s.n
        )?;
        return Ok(EXIT_OK);
    }
    session.ensure(&[s])?;
    let v = intersection::tau_kappa(&session.table, g, &alpha)?;
    writeln!(out, "{}", v.kappa)?;
    writeln!(out, "omega-normalized: {}", v.omega)?;
    Ok(EXIT_OK)
}

fn print_checks(records: &[CheckRecord], json: bool, out: &mut dyn Write) -> Result<usize> {
    let mut failed = 0;
    for r in records {
        if !r.pass {
            failed += 1;
        }
        if json {
            writeln!(out, "{}", serde_json::to_string(r)?)?;
        } else {
            let alpha = r.alpha.as_ref().map(|a| format!(" alpha={a:?}")).unwrap_or_default();
            writeln!(
                out,
                "{} {} g={} n={}{}",
                if r.pass { "PASS" } else { "FAIL" },
                r.relation,
                r.g,
                r.n,
                alpha
            )?;
        }
    }
    Ok(failed)
}

fn print_oracle(records: &[OracleRecord], json: bool, out: &mut dyn Write) -> Result<usize> {
    let mut failed = 0;
    for r in records {
        if !r.pass {
            failed += 1;
        }
        if json {
            writeln!(out, "{}", serde_json::to_string(r)?)?;
        } else {
            writeln!(
                out,
                "{} {} [{}] max_dev={:.3e} tol={:.0e}",
                if r.pass { "PASS" } else { "FAIL" },
                r.check,
                r.grid,
                r.max_abs_dev,
                r.tolerance
            )?;
        }
    }
    Ok(failed)
}

/// Runs one relation suite on a table and returns its records.
pub fn relation_records(table: &VolumeTable, relation: Relation) -> Result<Vec<CheckRecord>> {
    let taus = || TauTable::from_volumes(table);
    match relation {
        Relation::String => intersection::string_suite(&taus()?),
        Relation::Dilaton => intersection::dilaton_suite(&taus()?),
        Relation::Dvv => intersection::dvv_suite(&taus()?),
        Relation::DoString => intersection::do_string_suite(table),
        Relation::DoDilaton => intersection::do_dilaton_suite(table),
        Relation::Kernels | Relation::All => Err(Error::Cache("not a single relation".into())),
    }
}

fn cmd_verify(
    session: &mut Session<'_>,
    relation: Relation,
    max_dim: u32,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let relations: Vec<Relation> = match relation {
        Relation::All => vec![
            Relation::String,
            Relation::Dilaton,
            Relation::Dvv,
            Relation::DoString,
            Relation::DoDilaton,
            Relation::Kernels,
        ],
        r => vec![r],
    };
    let mut total = 0;
    let mut failed = 0;
    if relations.iter().any(|r| *r != Relation::Kernels) {
        session.ensure(&Signature::all_up_to(max_dim))?;
    }
    // Restrict to the requested range even if the cache holds more.
    let mut table = VolumeTable::new();
    for s in Signature::all_up_to(max_dim) {
        if let Some(v) = session.table.get(s) {
            table.insert(s, v.clone())?;
        }
    }
    for r in relations {
        if r == Relation::Kernels {
            let records = oracle::full_report()?;
            total += records.len();
            failed += print_oracle(&records, json, out)?;
        } else {
            let records = relation_records(&table, r)?;
            total += records.len();
            failed += print_checks(&records, json, out)?;
        }
    }
    writeln!(err, "{} checks, {} passed, {} failed", total, total - failed, failed)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_compact(session: &mut Session<'_>, g: u32, format: Format, out: &mut dyn Write) -> Result<i32> {
    let v = intersection::compact_volume(&mut session.table, g)?;
    writeln!(out, "{}", render_pi(&v, format))?;
    Ok(EXIT_OK)
}

fn cmd_table(
    session: &mut Session<'_>,
    max_dim: u32,
    path: Option<&PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let targets = Signature::all_up_to(max_dim);
    session.ensure(&targets)?;
    let mut table = VolumeTable::new();
    for s in targets {
        table.insert(s, session.table.require(s)?.clone())?;
    }
    let file = CacheFile::from_table(&table);
    match path {
        Some(p) => {
            file.save(p)?;
            writeln!(err, "wrote {} volumes to {}", table.len(), p.display())?;
        }
        None => write!(out, "{}", file.to_json()?)?,
    }
    Ok(EXIT_OK)
}

fn cmd_diag_zograf(session: &mut Session<'_>, gmax: u32, n: u32, out: &mut dyn Write) -> Result<i32> {
    let sigs: Vec<Signature> = (1..=gmax).filter_map(|g| Signature::new(g, n).ok()).collect();
    session.ensure(&sigs)?;
    for s in sigs {
        let r = intersection::zograf_ratio(&session.table, s.g, s.n)?;
        writeln!(out, "g={} n={} ratio={r:.9}", s.g, s.n)?;
    }
    Ok(EXIT_OK)
}
