use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use angle_realize::geom::{enumerate_angles, verify};
use angle_realize::highdim::{realize_highdim_with, HighdimOptions, DEFAULT_LAMBDA};
use angle_realize::io::{self, CertificateDoc, ConfigDoc};
use angle_realize::multiset::realize_multiset;
use angle_realize::planar::realize_planar;
use angle_realize::projection::{angle_distortion, tail_1d};
use angle_realize::solver::{estimate_p, solve_numeric, Status};
use angle_realize::{AngleMultiset, Certificate, Error, PointConfig};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::manifest::{resolve_seed, Manifest};
use crate::svg::render_svg;

#[derive(Debug, Parser)]
#[command(name = "angle-realize", version, about = "Realize prescribed angles by point configurations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Targets {
    /// Comma-separated target angles (radians unless --degrees).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub angles: Vec<f64>,
    /// Angle multiset document (radians).
    #[arg(long)]
    pub targets: Option<PathBuf>,
    /// Read --angles in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a configuration realizing the targets.
    Realize {
        #[command(flatten)]
        targets: Targets,
        /// Number of points (planar constructions).
        #[arg(long)]
        m: Option<usize>,
        /// Put the points in convex position.
        #[arg(long)]
        convex: bool,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Lower end of the target range for --dim > 2.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a configuration against targets and print the certificate.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        targets: Targets,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List every angle of a configuration.
    Enumerate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Numerical search for a realization by m points in R^d.
    Solve {
        #[command(flatten)]
        targets: Targets,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 40)]
        restarts: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo estimate of P(d, m, n).
    EstimateProb {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Projection tail experiments as CSV.
    ProjectExp {
        #[arg(long, value_delimiter = ',', default_values_t = [3, 10, 50])]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.04])]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.1])]
        thetas: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Render a planar configuration as SVG.
    Plot {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Draw the first two coordinates of a higher-dimensional configuration.
        #[arg(long)]
        project_first_two: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Execute a JSON experiment manifest.
    Run { manifest: PathBuf },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or unreadable input; exit status 2.
    Usage(String),
    /// Error from the library; exit status 1.
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    /// Machine-readable report written to standard error.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Usage(msg) => json!({"error": "Usage", "message": msg}),
            CliError::Domain(e) => {
                let mut v = json!({"error": e.kind(), "message": e.to_string()});
                if let Error::UnmatchedTargets { unmatched } = e {
                    v["unmatched"] = serde_json::to_value(unmatched).unwrap();
                }
                v
            }
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args`, runs the command and returns the process exit status.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
            }
            fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn load_targets(t: &Targets) -> CliResult<AngleMultiset> {
    match (&t.targets, t.angles.is_empty()) {
        (Some(_), false) => Err(CliError::Usage("give either --angles or --targets, not both".into())),
        (None, true) => Err(CliError::Usage("no targets: give --angles or --targets".into())),
        (Some(path), true) => Ok(io::multiset_from_json(&read(path)?)?),
        (None, false) => {
            let scale = if t.degrees { std::f64::consts::PI / 180.0 } else { 1.0 };
            Ok(AngleMultiset::from_radians(t.angles.iter().map(|a| a * scale))?)
        }
    }
}

fn load_config(path: &Path) -> CliResult<PointConfig> {
    Ok(io::config_from_json(&read(path)?)?)
}

/// `out.json` → `out.cert.json`.
pub fn certificate_path(output: &Path) -> PathBuf {
    output.with_extension("cert.json")
}

fn realize(targets: &AngleMultiset, m: Option<usize>, convex: bool, dim: usize, eps: Option<f64>, lambda: f64) -> CliResult<(PointConfig, Certificate)> {
    let n = targets.len();
    if dim > 2 {
        if convex {
            return Err(CliError::Usage("--convex applies to planar constructions only".into()));
        }
        let r = realize_highdim_with(targets, dim, &HighdimOptions { lambda, eps, ..Default::default() })?;
        return Ok((r.config, r.certificate));
    }
    if dim < 2 {
        return Err(CliError::Usage(format!("--dim {dim}: need at least 2")));
    }
    let distinct = targets.entries().iter().all(|(_, mult)| *mult == 1);
    if distinct {
        let m = m.unwrap_or((n.div_ceil(2) + 2).max(5));
        if n <= 2 * m - 4 {
            return Ok(realize_planar(&targets.occurrences(), m, convex)?);
        }
    }
    if convex {
        return Err(CliError::Usage("--convex needs distinct angles with n <= 2m - 4".into()));
    }
    let m = m.unwrap_or(n.div_ceil(2) + 30);
    let r = realize_multiset(targets, m)?;
    Ok((r.config, r.certificate))
}

pub fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Realize { targets, m, convex, dim, eps, lambda, output } => {
            let ms = load_targets(&targets)?;
            let (config, cert) = realize(&ms, m, convex, dim, eps, lambda)?;
            match output {
                Some(path) => {
                    emit(Some(&path), &with_newline(io::config_to_json(&config)))?;
                    emit(Some(&certificate_path(&path)), &with_newline(io::certificate_to_json(&cert)))
                }
                None => {
                    let doc = json!({"config": ConfigDoc::from(&config), "certificate": CertificateDoc::from(&cert)});
                    emit(None, &with_newline(serde_json::to_string_pretty(&doc).unwrap()))
                }
            }
        }
        Command::Verify { config, targets, tol, output } => {
            let c = load_config(&config)?;
            let ms = load_targets(&targets)?;
            let cert = verify(&c, &ms, tol)?;
            emit(output.as_deref(), &with_newline(io::certificate_to_json(&cert)))
        }
        Command::Enumerate { config, output } => {
            let c = load_config(&config)?;
            let angles: Vec<_> = enumerate_angles(&c)?
                .iter()
                .map(|a| json!({"apex": a.apex, "ends": a.ends, "measured": a.measured.radians()}))
                .collect();
            let doc = json!({"version": 1, "count": angles.len(), "angles": angles});
            emit(output.as_deref(), &with_newline(serde_json::to_string_pretty(&doc).unwrap()))
        }
        Command::Solve { targets, m, dim, restarts, seed, output } => {
            let ms = load_targets(&targets)?;
            let seed = resolve_seed(seed).map_err(CliError::Usage)?;
            let r = solve_numeric(&ms, m, dim, restarts, seed)?;
            let doc = json!({
                "version": 1,
                "status": r.status,
                "best_residual": r.best_residual,
                "restarts_used": r.restarts_used,
                "assignments_tried": r.assignments_tried,
                "seed": seed,
                "config": r.config.as_ref().map(ConfigDoc::from),
                "certificate": r.certificate.as_ref().map(CertificateDoc::from),
            });
            debug_assert!(r.status == Status::NotFound || r.certificate.is_some());
            emit(output.as_deref(), &with_newline(serde_json::to_string_pretty(&doc).unwrap()))
        }
        Command::EstimateProb { dim, m, n, samples, seed, output } => {
            let seed = resolve_seed(seed).map_err(CliError::Usage)?;
            let e = estimate_p(dim, m, n, samples, seed)?;
            let doc = json!({
                "version": 1,
                "d": dim,
                "m": m,
                "n": n,
                "p_hat": e.p_hat,
                "stderr": e.stderr,
                "samples": e.samples,
                "seed": e.seed,
                "one_sided": e.one_sided,
            });
            emit(output.as_deref(), &with_newline(serde_json::to_string_pretty(&doc).unwrap()))
        }
        Command::ProjectExp { dims, eps, thetas, samples, seed, output } => {
            let seed = resolve_seed(seed).map_err(CliError::Usage)?;
            let mut csv = String::from("d,theta,eps,samples,empirical,bound,pass\n");
            for &d in &dims {
                for &e in &eps {
                    let r = tail_1d(d, e, samples, seed)?;
                    let _ = writeln!(csv, "{},,{},{},{},{},{}", r.d, r.eps, r.samples, r.empirical, r.bound, r.pass);
                    for &t in &thetas {
                        let r = angle_distortion(d, t, e, samples, seed)?;
                        let _ = writeln!(csv, "{},{},{},{},{},{},{}", r.d, t, r.eps, r.samples, r.empirical, r.bound, r.pass);
                    }
                }
            }
            emit(output.as_deref(), &csv)
        }
        Command::Plot { config, certificate, project_first_two, output } => {
            let c = load_config(&config)?;
            let cert = certificate.map(|p| read(&p).and_then(|t| Ok(io::certificate_from_json(&t)?))).transpose()?;
            let svg = render_svg(&c, cert.as_ref(), project_first_two)?;
            emit(output.as_deref(), &svg)
        }
        Command::Run { manifest } => {
            let m = Manifest::from_json(&read(&manifest)?).map_err(CliError::Usage)?;
            let base = manifest.parent().map(Path::to_path_buf).unwrap_or_default();
            let args = m.to_args(&base).map_err(CliError::Usage)?;
            let cli = Cli::try_parse_from(&args).map_err(|e| CliError::Usage(e.to_string()))?;
            if matches!(cli.command, Command::Run { .. }) {
                return Err(CliError::Usage("manifests cannot run other manifests".into()));
            }
            execute(cli)
        }
    }
}
