//! `covsym` command line: constants tables, products of symbol files, the
//! verification suite and K-spectra.
//!
//! Exit codes: 0 success, 1 suite failure, 2 usage or contract error,
//! 3 pole or singular regime.

use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Error;
use crate::intertwining::CalculusConstants;
use crate::io::{read_symbol, symbol_to_json};
use crate::specfun::harmonic_dim;
use crate::star_algebra::{star_product, Symbol};
use crate::verify::{run_suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_POLE: i32 = 3;

/// Tolerance on the `|d e_ℓ| = 1` and `|e_ℓ|² = c` columns of `constants`.
pub const CONSTANTS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "covsym",
    version,
    about = "Covariant symbolic calculus on SL(n,R)/GL(n-1,R)"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Ambient dimension n (sphere S^{n-1}).
    #[arg(long, global = true, default_value_t = 3, value_parser = parse_n)]
    pub n: usize,
    /// Spectral parameter sigma, nonzero.
    #[arg(long, global = true, default_value_t = 1.3, allow_negative_numbers = true, value_parser = parse_sigma)]
    pub sigma: f64,
    /// Largest even degree kept.
    #[arg(long = "l-max", global = true, default_value_t = 8, value_parser = parse_l_max)]
    pub l_max: u32,
    /// Polynomial exactness of the sphere quadrature used by the eigenvalue oracle.
    #[arg(long = "grid-exactness", global = true, default_value_t = 24, value_parser = parse_exactness)]
    pub grid_exactness: u32,
    /// Seed of the random-symbol generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of e_l(sigma), c(sigma), d(sigma) for l = 0, 2, ..., l-max.
    Constants,
    /// Star product of two symbol files, written to --out.
    Product { f: PathBuf, g: PathBuf },
    /// Full verification suite.
    Verify,
    /// K-invariant coefficients and off-K residuals of a symbol file.
    Spectrum { f: PathBuf },
}

fn parse_sigma(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !v.is_finite() {
        return Err("sigma must be finite".into());
    }
    if v == 0.0 {
        return Err("sigma = 0 is excluded: the calculus is only defined for sigma != 0".into());
    }
    Ok(v)
}

fn parse_n(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v < 3 {
        return Err("n must be at least 3".into());
    }
    Ok(v)
}

fn parse_l_max(s: &str) -> Result<u32, String> {
    let v: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if !v.is_multiple_of(2) || v > 20 {
        return Err("l-max must be even and at most 20".into());
    }
    Ok(v)
}

fn parse_exactness(s: &str) -> Result<u32, String> {
    let v: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if !v.is_multiple_of(2) || v < 2 {
        return Err("grid-exactness must be an even integer >= 2".into());
    }
    Ok(v)
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Pole { .. } | Error::ConvergenceRegime { .. } | Error::NonFinite(_) => EXIT_POLE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Constants => cmd_constants(&cli.config, stdout),
        Command::Product { f, g } => cmd_product(&cli.config, f, g, stdout),
        Command::Verify => cmd_verify(&cli.config, stdout),
        Command::Spectrum { f } => cmd_spectrum(&cli.config, f, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> crate::Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn e16(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn cmd_constants(cfg: &RunConfig, stdout: &mut dyn Write) -> crate::Result<i32> {
    let ctx = CalculusConstants::new(cfg.n, cfg.sigma, cfg.l_max)?;
    let c = ctx.c();
    let d = ctx.d();
    let mut csv =
        String::from("n,sigma,ell,re(e_ell),im(e_ell),|e_ell|^2,re(c),re(d),im(d),|d*e_ell|\n");
    let mut ok = (d.norm_sqr() * c - 1.0).norm() <= CONSTANTS_TOLERANCE;
    for l in ctx.degrees() {
        let e = ctx.e_ell(l)?;
        let de = ctx.de(l)?.norm();
        ok &= (de - 1.0).abs() <= CONSTANTS_TOLERANCE;
        ok &= (e.norm_sqr() - c).norm() <= CONSTANTS_TOLERANCE;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            cfg.n,
            e16(cfg.sigma),
            l,
            e16(e.re),
            e16(e.im),
            e16(e.norm_sqr()),
            e16(c.re),
            e16(d.re),
            e16(d.im),
            e16(de)
        ));
    }
    emit(cfg, &csv, stdout)?;
    Ok(if ok { EXIT_OK } else { EXIT_SUITE_FAILURE })
}

fn context_for(symbols: &[&Symbol]) -> crate::Result<CalculusConstants> {
    let first = symbols[0];
    let l_max = symbols.iter().flat_map(|s| s.degrees()).max().unwrap_or(0);
    CalculusConstants::new(first.n(), first.sigma(), l_max)
}

pub fn cmd_product(
    cfg: &RunConfig,
    f: &Path,
    g: &Path,
    stdout: &mut dyn Write,
) -> crate::Result<i32> {
    let Some(out) = &cfg.out else {
        return Err(Error::Usage(
            "product writes a symbol file and needs --out".into(),
        ));
    };
    let f = read_symbol(f)?;
    let g = read_symbol(g)?;
    if f.n() != g.n() || f.sigma() != g.sigma() {
        return Err(Error::ContextMismatch(format!(
            "inputs have (n, sigma) = ({}, {}) and ({}, {})",
            f.n(),
            f.sigma(),
            g.n(),
            g.sigma()
        )));
    }
    let ctx = context_for(&[&f, &g])?;
    let fg = star_product(&ctx, &f, &g)?;
    let (nf, ng, nfg) = (f.norm(), g.norm(), fg.norm());
    let summary = format!(
        "|F| = {}\n|G| = {}\n|F#G| = {}\n|F#G| - |F||G| = {}\n",
        e16(nf),
        e16(ng),
        e16(nfg),
        e16(nfg - nf * ng)
    );
    std::fs::write(out, symbol_to_json(&fg))?;
    stdout.write_all(summary.as_bytes())?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(cfg: &RunConfig, stdout: &mut dyn Write) -> crate::Result<i32> {
    let suite = SuiteConfig {
        n: cfg.n,
        sigma: cfg.sigma,
        l_max: cfg.l_max,
        grid_exactness: cfg.grid_exactness,
        seed: cfg.seed,
    };
    let checks = run_suite(&suite)?;
    let mut report = format!(
        "covsym verify: n = {}, sigma = {}, l_max = {}, grid exactness = {}, seed = {}\n",
        cfg.n, cfg.sigma, cfg.l_max, cfg.grid_exactness, cfg.seed
    );
    for c in &checks {
        report.push_str(&format!("{c}\n"));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    report.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    emit(cfg, &report, stdout)?;
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_SUITE_FAILURE
    })
}

pub fn cmd_spectrum(cfg: &RunConfig, f: &Path, stdout: &mut dyn Write) -> crate::Result<i32> {
    let f = read_symbol(f)?;
    let mut csv = String::from("row_degree,col_degree,re(a),im(a),residual\n");
    for ((l, m), b) in f.blocks() {
        let (a, residual) = if l == m {
            let dim = harmonic_dim(f.n(), l);
            let a = b.trace() / dim as f64;
            let mut rest = b.clone();
            for i in 0..dim {
                rest[(i, i)] -= a;
            }
            (a, rest.norm())
        } else {
            (Default::default(), b.norm())
        };
        csv.push_str(&format!(
            "{l},{m},{},{},{}\n",
            e16(a.re),
            e16(a.im),
            e16(residual)
        ));
    }
    emit(cfg, &csv, stdout)?;
    Ok(EXIT_OK)
}
