//! Command-line front end: matrix file I/O, report rendering and the
//! subcommand dispatch used by the `bellsym` binary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::constraints::{
    full_report, validate_density, ReportConfig, SymmetryReport, DEFAULT_GRID,
};
use crate::derivation::{
    atomic_residual, chsh_score, solve_atomic, AtomicMode, BellKind, ChshAngles,
};
use crate::entanglement::{concurrence, linearity_scan, CChoice, LinearityScan};
use crate::error::Error;
use crate::linalg::{c, ComplexMatrix4};
use crate::operators::Angle;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;
pub const EXIT_UNKNOWN: i32 = 5;

/// Process exit status for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => EXIT_PARSE,
        Error::NotHermitian { .. }
        | Error::TraceNotOne { .. }
        | Error::NotPositive { .. }
        | Error::NotPsd { .. }
        | Error::NonFinite { .. }
        | Error::NotNormalized { .. } => EXIT_VALIDATION,
        Error::InfeasibleEpsilon(_) | Error::InvalidParameter(_) | Error::NoSolution(_) => {
            EXIT_INFEASIBLE
        }
        Error::UnknownKind(_) | Error::UnknownMode(_) | Error::UnknownChoice(_) => EXIT_UNKNOWN,
    }
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Lib(e) => exit_code(e),
            CliError::Io(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(
                e @ (Error::NotHermitian { .. }
                | Error::TraceNotOne { .. }
                | Error::NotPositive { .. }),
            ) => {
                let condition = match e {
                    Error::NotHermitian { .. } => "rho must be self-adjoint",
                    Error::TraceNotOne { .. } => "Tr(rho) must equal 1",
                    _ => "rho must be positive",
                };
                format!("not a density matrix ({condition}): {e}")
            }
            CliError::Lib(e) => e.to_string(),
            CliError::Io(msg) => msg.clone(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// On-disk matrix: `{"matrix": [[[re, im], ...4], ...4]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix4) -> Self {
        let matrix = m
            .rows()
            .iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Self { matrix }
    }

    pub fn to_matrix(&self) -> crate::Result<ComplexMatrix4> {
        if self.matrix.len() != 4 || self.matrix.iter().any(|row| row.len() != 4) {
            return Err(Error::Parse(
                "matrix must be 4x4 with [re, im] entries".into(),
            ));
        }
        if let Some(x) = self
            .matrix
            .iter()
            .flatten()
            .flatten()
            .find(|x| !x.is_finite())
        {
            return Err(Error::Parse(format!("non-finite number {x}")));
        }
        Ok(ComplexMatrix4::from_fn(|i, j| {
            let [re, im] = self.matrix[i][j];
            c(re, im)
        }))
    }

    pub fn parse(text: &str) -> crate::Result<ComplexMatrix4> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_matrix()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("matrix file serializes");
        s.push('\n');
        s
    }
}

pub fn read_matrix_file(path: &Path) -> crate::Result<ComplexMatrix4> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    MatrixFile::parse(&text)
}

/// Structured `check` output.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub input: String,
    pub rotation_grid: usize,
    pub atomic_grid: usize,
    pub report: SymmetryReport,
}

/// Six significant digits for human-readable output.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&mag) {
        format!("{x:.5e}")
    } else {
        format!("{:.*}", (5 - mag).max(0) as usize, x)
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_matrix(m: &ComplexMatrix4) -> String {
    let real = m.rows().iter().flatten().all(|z| z.im == 0.0);
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|z| {
                if real {
                    format!("{:>10}", fmt6(z.re))
                } else {
                    let sign = if z.im.is_sign_negative() && z.im != 0.0 {
                        '-'
                    } else {
                        '+'
                    };
                    format!("{:>10}{sign}{}i", fmt6(z.re), fmt6(z.im.abs()))
                }
            })
            .collect();
        let _ = writeln!(out, "  [{}]", cells.join(" "));
    }
    out
}

pub fn render_report(doc: &ReportDocument) -> String {
    let r = &doc.report;
    let mut out = String::new();
    let _ = writeln!(out, "input: {}", doc.input);
    let _ = writeln!(
        out,
        "grid: rotation {}, atomic {}",
        doc.rotation_grid, doc.atomic_grid
    );
    let mut line = |name: &str, v: f64| {
        let _ = writeln!(out, "  {name:<24} {:>14}", fmt6(v));
    };
    line("hermiticity residual", r.hermiticity_residual);
    line("trace residual", r.trace_residual);
    line("min eigenvalue", r.min_eigenvalue);
    line("reduced A residual", r.reduced_a_residual);
    line("reduced B residual", r.reduced_b_residual);
    line("swap parties residual", r.swap_parties_residual);
    line("swap axes residual", r.swap_axes_residual);
    line("rotational residual", r.rotational_residual);
    line("twist residual", r.twist_residual);
    for (mode, v) in &r.atomic_residuals {
        line(&format!("atomic ({mode})"), *v);
    }
    line("concurrence", r.concurrence);
    out
}

pub fn sweep_csv(scan: &LinearityScan) -> String {
    let mut out = String::from("epsilon,concurrence,atomic_residual\n");
    for row in &scan.rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt17(row.epsilon),
            fmt17(row.concurrence),
            fmt17(row.atomic_residual)
        );
    }
    let _ = writeln!(out, "# slope={}", fmt17(scan.slope));
    out
}

#[derive(Debug, Parser)]
#[command(
    name = "bellsym",
    version,
    about = "Bell-state symmetries, atomic-symmetry residuals and concurrence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a density matrix and print every symmetry residual.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Emit the structured report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Solve the atomic symmetry for a Bell state (phi+, phi-, psi+, psi-).
    Derive {
        kind: String,
        /// Also write the density matrix as a matrix file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the concurrence of a density matrix.
    Concurrence { file: PathBuf },
    /// Atomic-symmetry residual in one angle mode.
    Atomic {
        file: PathBuf,
        /// parallel, crossed, twist or twist-crossed
        #[arg(long)]
        mode: String,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// CHSH score at the given polarizer angles (a a' b b').
    Chsh {
        file: PathBuf,
        #[arg(long, num_args = 4, value_names = ["A", "A_PRIME", "B", "B_PRIME"], allow_negative_numbers = true)]
        angles: Option<Vec<f64>>,
        /// Interpret angles as radians instead of degrees.
        #[arg(long)]
        radians: bool,
    },
    /// Concurrence and atomic residual along the epsilon family, as CSV.
    Sweep {
        /// low, middle or high
        #[arg(long = "c")]
        c_choice: String,
        #[arg(long)]
        eps_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_state(path: &Path) -> CliResult<crate::DensityMatrix> {
    let m = read_matrix_file(path)?;
    Ok(validate_density(m)?)
}

fn execute(cmd: Command, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Check { file, grid, json } => {
            let rho = load_state(&file)?;
            let config = ReportConfig {
                rotation_grid: grid,
                atomic_grid: grid,
            };
            let doc = ReportDocument {
                tool: "bellsym",
                version: env!("CARGO_PKG_VERSION"),
                input: file.display().to_string(),
                rotation_grid: config.rotation_grid,
                atomic_grid: config.atomic_grid,
                report: full_report(&rho, &config)?,
            };
            if json {
                let text = serde_json::to_string_pretty(&doc).expect("report serializes");
                writeln!(out, "{text}")?;
            } else {
                write!(out, "{}", render_report(&doc))?;
            }
        }
        Command::Derive { kind, out: path } => {
            let kind: BellKind = kind.parse()?;
            let sol = solve_atomic(kind)?;
            writeln!(out, "kind: {kind}")?;
            writeln!(
                out,
                "family: {:?}, atomic mode: {}",
                kind.family(),
                kind.mode()
            )?;
            writeln!(out, "d = {}", fmt6(sol.d))?;
            writeln!(out, "c = {}", fmt6(sol.c))?;
            writeln!(out, "matrix:")?;
            write!(out, "{}", render_matrix(sol.rho.matrix()))?;
            if let Some(path) = path {
                fs::write(&path, MatrixFile::from_matrix(sol.rho.matrix()).to_json())?;
                writeln!(out, "wrote {}", path.display())?;
            }
        }
        Command::Concurrence { file } => {
            let rho = load_state(&file)?;
            writeln!(out, "concurrence = {}", fmt6(concurrence(&rho)?))?;
        }
        Command::Atomic { file, mode, grid } => {
            let mode: AtomicMode = mode.parse()?;
            let rho = load_state(&file)?;
            let r = atomic_residual(&rho, mode, grid)?;
            writeln!(out, "atomic residual ({mode}, grid {grid}) = {}", fmt6(r))?;
        }
        Command::Chsh {
            file,
            angles,
            radians,
        } => {
            let rho = load_state(&file)?;
            let angles = match angles {
                None => ChshAngles::standard(),
                Some(v) => {
                    let to = |x: f64| {
                        if radians {
                            Angle::radians(x)
                        } else {
                            Angle::degrees(x)
                        }
                    };
                    if v.iter().any(|x| !x.is_finite()) {
                        return Err(Error::InvalidParameter("angles must be finite".into()).into());
                    }
                    ChshAngles::new(to(v[0]), to(v[1]), to(v[2]), to(v[3]))
                }
            };
            let s = chsh_score(&rho, &angles);
            writeln!(out, "S = {s:.10}")?;
            writeln!(out, "exceeds classical bound 2: {}", s > 2.0)?;
        }
        Command::Sweep {
            c_choice,
            eps_max,
            steps,
            out: path,
        } => {
            let choice: CChoice = c_choice.parse()?;
            let scan = linearity_scan(choice, eps_max, steps)?;
            fs::write(&path, sweep_csv(&scan))?;
            writeln!(
                out,
                "wrote {} rows to {} (c = {choice}); slope = {}",
                scan.rows.len(),
                path.display(),
                fmt6(scan.slope)
            )?;
        }
    }
    Ok(())
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}
