//! Command-line front end: state files in/out, criterion reports, and
//! diagnostics in text or JSON form.
//!
//! Exit codes: 0 on successful computation regardless of verdict, 1 on
//! invalid input (the failed invariant is named on stderr), 2 on numerical
//! failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::criteria::{
    self, Conclusion, CriteriaConfig, CriterionReport, Verdict, Witness,
};
use crate::diagnostics::{self, MuInterval};
use crate::error::{Error, Result};
use crate::linalg::{DimsSpec, Matrix};
use crate::states::{self, BellKind, DensityMatrix};

/// On-disk density matrix: dims, rows of [re, im] pairs, optional label.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix, label: Option<String>) -> Self {
        let d = rho.dims().total();
        let matrix = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| {
                        let z = rho.mat().at(r, c);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        StateFile {
            dims: rho.dims().dims().to_vec(),
            matrix,
            label,
        }
    }

    /// Parses and validates; any invariant failure is reported by name.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let dims = DimsSpec::new(self.dims.clone())?;
        let d = dims.total();
        if self.matrix.len() != d {
            return Err(Error::StateFile(format!(
                "matrix has {} rows, dims product is {}",
                self.matrix.len(),
                d
            )));
        }
        let mut m = Matrix::zeros(d, d);
        for (r, row) in self.matrix.iter().enumerate() {
            if row.len() != d {
                return Err(Error::StateFile(format!(
                    "row {r} has {} entries, expected {}",
                    row.len(),
                    d
                )));
            }
            for (c, &[re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::StateFile(format!(
                        "non-finite entry at ({r}, {c})"
                    )));
                }
                m.set(r, c, Complex64::new(re, im));
            }
        }
        DensityMatrix::new(dims, m)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::StateFile(e.to_string()))
    }

    /// Decimal rendering with 17 significant digits so the matrix re-reads
    /// bit-exactly.
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::from("{\n");
        if let Some(label) = &self.label {
            out.push_str(&format!(
                "  \"label\": {},\n",
                serde_json::to_string(label).expect("string serializes")
            ));
        }
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        out.push_str(&format!("  \"dims\": [{}],\n", dims.join(", ")));
        out.push_str("  \"matrix\": [\n");
        for (i, row) in self.matrix.iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .map(|&[re, im]| format!("[{}, {}]", fmt_g17(re), fmt_g17(im)))
                .collect();
            let sep = if i + 1 < self.matrix.len() { "," } else { "" };
            out.push_str(&format!("    [{}]{}\n", cells.join(", "), sep));
        }
        out.push_str("  ]\n}\n");
        out
    }
}

/// 17 significant digits, scientific notation; round-trips every f64.
fn fmt_g17(x: f64) -> String {
    format!("{:.16e}", x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

/// Knobs shared by every subcommand; all configuration is on the command
/// line, none in the environment.
#[derive(Clone, Debug, Parser)]
pub struct RunConfig {
    /// Base of the scale-relative tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Random admissible R matrices sampled by the block-transform battery.
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    /// Unit directions sampled by the sphere check.
    #[arg(long, default_value_t = 512)]
    pub dirs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

impl RunConfig {
    fn criteria(&self) -> CriteriaConfig {
        CriteriaConfig {
            tol_base: self.tol,
            samples: self.samples,
            dirs: self.dirs,
            seed: self.seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.tol <= 0.0 {
            return Err(Error::InvalidArgument("--tol must be positive".into()));
        }
        if self.samples == 0 || self.dirs == 0 {
            return Err(Error::InvalidArgument(
                "--samples and --dirs must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConfigEcho {
    pub tol: f64,
    pub samples: usize,
    pub dirs: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dims: Vec<usize>,
    pub config: ConfigEcho,
    pub criteria: Vec<CriterionReport>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CrossGramDistances {
    pub dist_full: f64,
    pub dist_traced_a: f64,
    pub dist_traced_b: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DiagReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dims: Vec<usize>,
    pub cross_gram: CrossGramDistances,
    pub mu_interval: MuInterval,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BlocksReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dims: Vec<usize>,
    /// Set when the qubit factor was second and the state was viewed with
    /// its subsystems exchanged.
    pub swapped: bool,
    pub m0: Vec<Vec<[f64; 2]>>,
    pub mx: Vec<Vec<[f64; 2]>>,
    pub my: Vec<Vec<[f64; 2]>>,
    pub mz: Vec<Vec<[f64; 2]>>,
    pub trace_margin: f64,
}

fn matrix_to_pairs(m: &Matrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let z = m.at(r, c);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

/// Builds the full check report for a parsed state.
pub fn check_report(file: &StateFile, config: &RunConfig) -> Result<CheckReport> {
    config.validate()?;
    let rho = file.to_density()?;
    if rho.dims().len() < 2 {
        return Err(Error::InvalidArgument(
            "at least 2 subsystems required".into(),
        ));
    }
    let cconfig = config.criteria();
    let criteria = criteria::run_all_criteria(&rho, &cconfig)?;
    let verdict = criteria::verdict_from_reports(&rho, &criteria);
    Ok(CheckReport {
        label: file.label.clone(),
        dims: file.dims.clone(),
        config: ConfigEcho {
            tol: config.tol,
            samples: config.samples,
            dirs: config.dirs,
            seed: config.seed,
        },
        criteria,
        verdict,
    })
}

fn witness_summary(w: &Witness) -> String {
    match w {
        Witness::RMatrix { min_eigenvalue, .. } => {
            format!("worst R gives min eigenvalue {min_eigenvalue:+.6e}")
        }
        Witness::Direction {
            direction,
            min_eigenvalue,
        } => format!(
            "direction ({:+.4}, {:+.4}, {:+.4}) gives min eigenvalue {:+.6e}",
            direction.x, direction.y, direction.z, min_eigenvalue
        ),
        Witness::SubsetPair { smaller, larger } => {
            format!("subsets {smaller:?} within {larger:?}")
        }
        Witness::Eigenvalue { value } => format!("min eigenvalue {value:+.6e}"),
        Witness::PartialSum { subsystem, terms } => {
            format!("first {terms} terms against subsystem {subsystem}")
        }
    }
}

pub fn render_check_text(report: &CheckReport) -> String {
    let mut out = String::new();
    if let Some(label) = &report.label {
        out.push_str(&format!("state: {label}\n"));
    }
    out.push_str(&format!("dims: {:?}\n", report.dims));
    for c in &report.criteria {
        let status = if c.satisfied { "satisfied" } else { "VIOLATED" };
        let witness = c
            .witness
            .as_ref()
            .map(|w| format!("  [{}]", witness_summary(w)))
            .unwrap_or_default();
        out.push_str(&format!(
            "{:<22} {:<9} margin={:+.9e}{}\n",
            c.criterion, status, c.margin, witness
        ));
    }
    let verdict = match report.verdict.conclusion {
        Conclusion::Entangled => format!(
            "verdict: Entangled ({} certificate{})",
            report.verdict.certificates.len(),
            if report.verdict.certificates.len() == 1 {
                ""
            } else {
                "s"
            }
        ),
        Conclusion::Separable => "verdict: Separable".to_string(),
        Conclusion::Inconclusive => {
            "verdict: inconclusive (all necessary criteria satisfied)".to_string()
        }
    };
    out.push_str(&verdict);
    out.push('\n');
    out
}

pub fn diag_report(file: &StateFile, config: &RunConfig) -> Result<DiagReport> {
    config.validate()?;
    let rho = file.to_density()?;
    if rho.dims().len() != 2 {
        return Err(Error::InvalidArgument(
            "bipartite required for diagnostics".into(),
        ));
    }
    let cg = diagnostics::cross_gram_diagnostic(&rho, 1)?;
    let mu = diagnostics::n_mu_interval(&rho, 1, 64.0, 1e-6)?;
    Ok(DiagReport {
        label: file.label.clone(),
        dims: file.dims.clone(),
        cross_gram: CrossGramDistances {
            dist_full: cg.dist_full,
            dist_traced_a: cg.dist_traced_a,
            dist_traced_b: cg.dist_traced_b,
        },
        mu_interval: mu,
    })
}

pub fn render_diag_text(report: &DiagReport) -> String {
    let mut out = String::new();
    if let Some(label) = &report.label {
        out.push_str(&format!("state: {label}\n"));
    }
    out.push_str(&format!("dims: {:?}\n", report.dims));
    out.push_str(&format!(
        "cross-gram distance   full={:.9e}  traced A={:.9e}  traced B={:.9e}\n",
        report.cross_gram.dist_full,
        report.cross_gram.dist_traced_a,
        report.cross_gram.dist_traced_b
    ));
    let lo = if report.mu_interval.bound_hit_min {
        format!("{:.6} (search bound)", report.mu_interval.mu_min)
    } else {
        format!("{:.6}", report.mu_interval.mu_min)
    };
    let hi = if report.mu_interval.bound_hit_max {
        format!("{:.6} (search bound)", report.mu_interval.mu_max)
    } else {
        format!("{:.6}", report.mu_interval.mu_max)
    };
    out.push_str(&format!("mu interval           [{lo}, {hi}]\n"));
    out
}

pub fn blocks_report(file: &StateFile) -> Result<BlocksReport> {
    let rho = file.to_density()?;
    let dims = rho.dims().dims();
    let (view, swapped) = if dims.len() == 2 && dims[0] == 2 {
        (rho.clone(), false)
    } else if dims.len() == 2 && dims[1] == 2 {
        (rho.swap_bipartite()?, true)
    } else {
        return Err(Error::InvalidArgument(format!(
            "neither subsystem is a qubit: dims {dims:?}"
        )));
    };
    let blocks = criteria::pauli_blocks(&view)?;
    let trace = criteria::theorem3_trace_check(&view, &CriteriaConfig::default())?;
    Ok(BlocksReport {
        label: file.label.clone(),
        dims: file.dims.clone(),
        swapped,
        m0: matrix_to_pairs(&blocks.m0),
        mx: matrix_to_pairs(&blocks.mx),
        my: matrix_to_pairs(&blocks.my),
        mz: matrix_to_pairs(&blocks.mz),
        trace_margin: trace.margin,
    })
}

fn render_block(name: &str, rows: &[Vec<[f64; 2]>]) -> String {
    let mut out = format!("{name}:\n");
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|&[re, im]| format!("{re:+.6} {im:+.6}i"))
            .collect();
        out.push_str(&format!("  {}\n", cells.join("  ")));
    }
    out
}

pub fn render_blocks_text(report: &BlocksReport) -> String {
    let mut out = String::new();
    if let Some(label) = &report.label {
        out.push_str(&format!("state: {label}\n"));
    }
    out.push_str(&format!("dims: {:?}\n", report.dims));
    if report.swapped {
        out.push_str("note: qubit factor was second; subsystems viewed swapped\n");
    }
    out.push_str(&render_block("M0", &report.m0));
    out.push_str(&render_block("Mx", &report.mx));
    out.push_str(&render_block("My", &report.my));
    out.push_str(&render_block("Mz", &report.mz));
    out.push_str(&format!(
        "trace margin tr(M0^2 - Mx^2 - My^2 - Mz^2) = {:+.9e}\n",
        report.trace_margin
    ));
    out
}

/// What `gen` can produce.
#[derive(Clone, Debug, Subcommand)]
pub enum GenKind {
    /// A named state: spectra-twins-rho, spectra-twins-sigma,
    /// phi-mixture:LAMBDA, or bell:KIND.
    Named { name: String, out: PathBuf },
    /// A random separable state with its generating ensemble.
    Separable {
        /// Comma-separated subsystem dimensions, e.g. 2,3.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        /// Number of product terms.
        #[arg(short = 'k', long, default_value_t = 4)]
        terms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        out: PathBuf,
    },
    /// A random full-rank density matrix (single subsystem signature).
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        out: PathBuf,
    },
}

pub fn gen_named(name: &str) -> Result<(DensityMatrix, String)> {
    if name == "spectra-twins-rho" {
        return Ok((states::spectra_twins().0, name.to_string()));
    }
    if name == "spectra-twins-sigma" {
        return Ok((states::spectra_twins().1, name.to_string()));
    }
    if let Some(arg) = name.strip_prefix("phi-mixture:") {
        let lambda: f64 = arg
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad lambda '{arg}'")))?;
        return Ok((states::phi_mixture(lambda)?, name.to_string()));
    }
    if let Some(arg) = name.strip_prefix("bell:") {
        let kind = BellKind::parse(arg)?;
        return Ok((
            states::projector(&states::bell_state(kind))?,
            name.to_string(),
        ));
    }
    Err(Error::InvalidArgument(format!(
        "unknown named state '{name}' (expected spectra-twins-rho, \
         spectra-twins-sigma, phi-mixture:LAMBDA, bell:KIND)"
    )))
}

pub fn run_gen(kind: &GenKind) -> Result<PathBuf> {
    let (rho, label, out) = match kind {
        GenKind::Named { name, out } => {
            let (rho, label) = gen_named(name)?;
            (rho, label, out.clone())
        }
        GenKind::Separable {
            dims,
            terms,
            seed,
            out,
        } => {
            let spec = DimsSpec::new(dims.clone())?;
            if spec.len() < 2 {
                return Err(Error::InvalidArgument(
                    "separable generation needs at least 2 subsystems".into(),
                ));
            }
            let (rho, _) = states::random_separable(&spec, *terms, *seed)?;
            (
                rho,
                format!("separable dims={dims:?} k={terms} seed={seed}"),
                out.clone(),
            )
        }
        GenKind::Random { dim, seed, out } => (
            states::random_density(*dim, *seed)?,
            format!("random dim={dim} seed={seed}"),
            out.clone(),
        ),
    };
    StateFile::from_density(&rho, Some(label)).write(&out)?;
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(
    name = "sepcheck",
    about = "Separability criteria and entanglement certificates for density matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every applicable separability criterion and print a verdict.
    Check {
        file: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Write a state file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Cross-Gram and N(mu) diagnostics for a bipartite state.
    Diag {
        file: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Print the Pauli coefficient blocks and the block-trace margin.
    Blocks {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Executes a parsed command, returning the stdout payload.
pub fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Check { file, config } => {
            let state = StateFile::read(file)?;
            let report = check_report(&state, config)?;
            Ok(match config.format {
                OutputFormat::Text => render_check_text(&report),
                OutputFormat::Json => to_json(&report),
            })
        }
        Command::Gen { kind } => {
            let out = run_gen(kind)?;
            Ok(format!("wrote {}\n", out.display()))
        }
        Command::Diag { file, config } => {
            let state = StateFile::read(file)?;
            let report = diag_report(&state, config)?;
            Ok(match config.format {
                OutputFormat::Text => render_diag_text(&report),
                OutputFormat::Json => to_json(&report),
            })
        }
        Command::Blocks { file, format } => {
            let state = StateFile::read(file)?;
            let report = blocks_report(&state)?;
            Ok(match format {
                OutputFormat::Text => render_blocks_text(&report),
                OutputFormat::Json => to_json(&report),
            })
        }
    }
}

/// Exit code for an error: 2 for numerical failures, 1 for everything else.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NoConvergence(_) => 2,
        _ => 1,
    }
}

/// Entry point used by the binary; prints the report to stdout or the error
/// to stderr and returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(output) => {
            print!("{output}");
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
