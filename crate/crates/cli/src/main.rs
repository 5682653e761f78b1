mod eval;
mod report;
mod residues;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use herglotz::characters::DirichletCharacter;
use herglotz::verification::{
    self as ver, CheckReport, GridValue, SuiteConfig, T26Candidate, TheoremId, ZagierEquation,
};
use herglotz::{Error, PrecisionContext};
use rug::Complex;

/// Usage problems exit with 2, numeric failures with 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse(_) | Error::Config(_) | Error::Precision(_) | Error::Unsupported(_) => {
                CliError::Usage(e.to_string())
            }
            Error::Pole { .. } | Error::Convergence { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "herglotz", version, about = "Extended higher Herglotz functions: evaluation and identity checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Working precision in bits
    #[arg(long, global = true, env = "HERGLOTZ_DEFAULT_BITS", default_value_t = 256)]
    prec_bits: u32,
    /// Absolute tolerance for identity checks (default scales with precision)
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Tolerance for the Ξ-integral checks
    #[arg(long, global = true)]
    integral_tol: Option<f64>,
    /// Output format (default: text for eval/check/characters, json for suite/residues)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report zero wall-clock times so repeated runs are byte-identical
    #[arg(long, global = true)]
    no_timings: bool,
}

impl Global {
    /// 1e-40 at 256 bits, scaled with the precision but kept clear of the
    /// rounding floor at low precision.
    fn check_tol(&self) -> f64 {
        self.tol.unwrap_or_else(|| {
            let bits = self.prec_bits as f64;
            10f64.powf(-40.0 * bits / 256.0).max(2f64.powf(44.0 - bits)).max(1e-300)
        })
    }

    fn context(&self) -> CliResult<PrecisionContext> {
        let ctx = PrecisionContext::new(self.prec_bits, self.check_tol())?;
        Ok(match self.integral_tol {
            Some(t) => ctx.with_integral_tol(t)?,
            None => ctx,
        })
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(p) => fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a library function
    Eval(eval::EvalArgs),
    /// Run one identity check
    Check(CheckArgs),
    /// Run the full verification suite
    Suite(SuiteArgs),
    /// Pole catalog and residue table of a Mellin integrand
    Residues(residues::ResidueArgs),
    /// List Dirichlet characters and their canonical "d.j" labels
    Characters {
        /// Largest modulus listed
        #[arg(long, default_value_t = 20)]
        max_modulus: u64,
    },
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Identity id, e.g. T2_1, T2_6, RAMANUJAN_220, ZAGIER_FE2, VZ_FE
    theorem: String,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long = "N", alias = "n")]
    n: Option<u32>,
    /// Argument off (-inf, 0], e.g. 2, 3/2, 1+i, 1/2-i/2, phi
    #[arg(long)]
    x: Option<String>,
    /// Real alpha > 0 for RAMANUJAN_220 (defaults to --x)
    #[arg(long)]
    alpha: Option<String>,
    /// Character label "d.j"
    #[arg(long)]
    chi: Option<String>,
    /// Closed-form variant to report for T2_4: paper, paper_proof, corrected or all
    #[arg(long)]
    variant: Option<String>,
    /// T2_6 notation candidate (repeatable, or "all")
    #[arg(long)]
    candidate: Vec<String>,
    /// Integrand family for CONTOUR_SHIFT
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// Replace the x-grids by these values (comma separated or repeated)
    #[arg(long, value_delimiter = ',')]
    grid: Vec<String>,
    /// Characters for T2_6 (comma separated or repeated)
    #[arg(long, value_delimiter = ',')]
    chi: Vec<String>,
    /// T2_6 candidates to try (default: all)
    #[arg(long, value_delimiter = ',')]
    candidate: Vec<String>,
    /// Skip the Ξ-integral checks
    #[arg(long)]
    skip_integrals: bool,
    /// Also run the contour-shift identity (slow)
    #[arg(long)]
    expensive: bool,
}

/// A complex literal; x-type parameters must lie off (-inf, 0].
pub fn parse_value(s: &str, name: &str, prec: u32, off_cut: bool) -> CliResult<Complex> {
    let v: GridValue = s.parse().map_err(|e: Error| CliError::Usage(format!("--{name}: {e}")))?;
    let z = v.to_complex(prec);
    if off_cut && z.imag().is_zero() && *z.real() <= 0 {
        return Err(CliError::Usage(format!("--{name} = {s} lies on (-inf, 0], where the functions are not defined")));
    }
    Ok(z)
}

fn need<T: Clone>(v: &Option<T>, flag: &str, theorem: TheoremId) -> CliResult<T> {
    v.clone().ok_or_else(|| CliError::Usage(format!("{theorem} needs --{flag}")))
}

pub fn parse_chi(s: &str) -> CliResult<DirichletCharacter> {
    s.parse().map_err(|e: Error| CliError::Usage(format!("--chi: {e}")))
}

fn parse_candidates(v: &[String]) -> CliResult<Vec<T26Candidate>> {
    if v.is_empty() || v.iter().any(|c| c == "all") {
        return Ok(T26Candidate::ALL.to_vec());
    }
    v.iter()
        .map(|c| c.parse().map_err(|e: Error| CliError::Usage(e.to_string())))
        .collect()
}

fn render_reports(reports: &[CheckReport], fmt: Format, timings: bool) -> CliResult<String> {
    Ok(match fmt {
        Format::Json => ver::reports_to_json(reports, timings)? + "\n",
        Format::Csv => ver::reports_to_csv(reports, timings)?,
        Format::Text => report::text(reports, timings),
    })
}

fn cmd_check(a: &CheckArgs, g: &Global) -> CliResult<bool> {
    let id: TheoremId = a.theorem.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let ctx = g.context()?;
    let p = ctx.prec();
    let x = || -> CliResult<Complex> { parse_value(&need(&a.x, "x", id)?, "x", p, true) };
    let alpha = || -> CliResult<Complex> {
        let s = a.alpha.clone().or_else(|| a.x.clone());
        parse_value(&need(&s, "alpha", id)?, "alpha", p, true)
    };
    let k = || need(&a.k, "k", id);
    let n = || need(&a.n, "N", id);
    let chi = || parse_chi(&need(&a.chi, "chi", id)?);
    let mut reports = match id {
        TheoremId::T2_1 => vec![ver::check_t2_1(k()?, &x()?, &ctx)?],
        TheoremId::T2_2 => vec![ver::check_t2_2(k()?, &alpha()?, &ctx)?],
        TheoremId::T2_3 => vec![ver::check_t2_3(n()?, &x()?, &ctx)?],
        TheoremId::T2_4 => {
            let mut r = ver::check_t2_4(k()?, n()?, &x()?, &ctx)?;
            if let Some(v) = a.variant.as_deref().filter(|v| *v != "all") {
                let v: herglotz::residues::ClosedFormVariant =
                    v.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
                let keep = v.to_string();
                r.retain_points(|pt| pt.role == ver::Role::Primary || pt.variant == keep);
            }
            vec![r]
        }
        TheoremId::C2_5 => vec![ver::check_c2_5(k()?, n()?, &x()?, &ctx)?],
        TheoremId::T2_6 => vec![ver::check_t2_6(k()?, &x()?, &chi()?, &parse_candidates(&a.candidate)?, &ctx)?],
        TheoremId::T2_7 => vec![ver::check_t2_7(&alpha()?, &chi()?, &ctx)?],
        TheoremId::Ramanujan220 => ver::check_ramanujan_220(&alpha()?, false, &ctx)?,
        TheoremId::RamanujanXi => ver::check_ramanujan_220(&alpha()?, true, &ctx)?,
        TheoremId::ZagierFe2 => vec![ver::check_zagier(&x()?, ZagierEquation::TwoTerm, &ctx)?],
        TheoremId::ZagierFe3 => vec![ver::check_zagier(&x()?, ZagierEquation::ThreeTerm, &ctx)?],
        TheoremId::VzFe => vec![ver::check_vz(k()?, &x()?, &ctx)?],
        TheoremId::ContourShift => {
            let f = residues::integrand(
                &need(&a.family, "family", id)?,
                a.k.map(i64::from),
                a.n.map(i64::from),
                &x()?,
                a.chi.as_deref(),
            )?;
            vec![ver::check_contour_shift(&f, &ctx)?]
        }
    };
    if id == TheoremId::RamanujanXi {
        reports.retain(|r| r.theorem_id == TheoremId::RamanujanXi);
    }
    g.emit(&render_reports(&reports, g.format.unwrap_or(Format::Text), !g.no_timings)?)?;
    Ok(reports.iter().all(|r| r.pass))
}

fn cmd_suite(a: &SuiteArgs, g: &Global) -> CliResult<bool> {
    let ctx = g.context()?;
    let mut cfg = SuiteConfig::standard();
    if !a.grid.is_empty() {
        let grid = a
            .grid
            .iter()
            .map(|s| {
                let v: GridValue = s.parse().map_err(|e: Error| CliError::Usage(format!("--grid: {e}")))?;
                parse_value(s, "grid", 64, true)?;
                Ok(v)
            })
            .collect::<CliResult<Vec<_>>>()?;
        let ks = |v: &[(u32, GridValue)]| {
            let mut ks: Vec<u32> = v.iter().map(|(k, _)| *k).collect();
            ks.dedup();
            ks
        };
        let regrid = |v: &[(u32, GridValue)]| -> Vec<(u32, GridValue)> {
            ks(v).into_iter().flat_map(|k| grid.iter().map(move |x| (k, x.clone()))).collect()
        };
        let regrid2 = |v: &[(u32, u32, GridValue)]| -> Vec<(u32, u32, GridValue)> {
            let mut kn: Vec<(u32, u32)> = v.iter().map(|(k, n, _)| (*k, *n)).collect();
            kn.dedup();
            kn.into_iter()
                .flat_map(|(k, n)| grid.iter().map(move |x| (k, n, x.clone())))
                .collect()
        };
        cfg.t2_1 = regrid(&cfg.t2_1);
        cfg.t2_3 = regrid(&cfg.t2_3);
        cfg.t2_4 = regrid2(&cfg.t2_4);
        cfg.c2_5 = regrid2(&cfg.c2_5);
        cfg.t2_6 = regrid(&cfg.t2_6);
        cfg.vz = regrid(&cfg.vz);
        cfg.zagier_fe2 = grid.clone();
        cfg.zagier_fe3 = grid;
    }
    if !a.chi.is_empty() {
        for c in &a.chi {
            parse_chi(c)?;
        }
        cfg.t2_6_characters = a.chi.clone();
    }
    cfg.t2_6_candidates = parse_candidates(&a.candidate)?;
    if a.skip_integrals {
        cfg.integrals = false;
    }
    cfg.contour_shift = a.expensive;
    let started = std::time::Instant::now();
    let reports = ver::run_suite(&cfg, &ctx);
    log::info!("suite finished in {:.1} s", started.elapsed().as_secs_f64());
    g.emit(&render_reports(&reports, g.format.unwrap_or(Format::Json), !g.no_timings)?)?;
    Ok(reports.iter().all(|r| r.pass))
}

fn cmd_characters(max_modulus: u64, g: &Global) -> CliResult<bool> {
    let text = report::characters(max_modulus, g.format.unwrap_or(Format::Text))?;
    g.emit(&text)?;
    Ok(true)
}

fn run(cli: &Cli) -> CliResult<bool> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Eval(a) => eval::cmd_eval(a, g),
        Command::Check(a) => cmd_check(a, g),
        Command::Suite(a) => cmd_suite(a, g),
        Command::Residues(a) => residues::cmd_residues(a, g),
        Command::Characters { max_modulus } => cmd_characters(*max_modulus, g),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Numeric(_) | CliError::Io(_) => ExitCode::from(1),
            }
        }
    }
}
