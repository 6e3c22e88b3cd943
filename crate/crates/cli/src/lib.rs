//! Argument parsing and command execution for the `twistring` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use twistring::io::{
    emit_band_csv, emit_convergence_csv, emit_gauge_csv, emit_json, emit_spectrum_csv, emit_sweep_csv, render_svg,
    spectrum_records, sweep_records, EmitError, PlotWindow,
};
use twistring::{
    band_table, build_twisted_operator, check_nonlinear_bc, convergence_study, cross_terms, density,
    gauge_comparison, hermitian_eigen, hilbert_subset_filter, is_density_periodic, loglog_slope, make_ring_grid,
    phi_sweep, Complex, RingError, SuperpositionState, Term,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::StencilDegenerate(_) | RingError::InvalidArgument(_) => CliError::usage(e.to_string()),
            other => CliError {
                code: EXIT_FAILURE,
                message: other.to_string(),
            },
        }
    }
}

impl From<EmitError> for CliError {
    fn from(e: EmitError) -> Self {
        match e {
            // Downstream reader closed early (e.g. `| head`); not a failure.
            EmitError::Io(ref io) if io.kind() == io::ErrorKind::BrokenPipe => CliError {
                code: EXIT_OK,
                message: String::new(),
            },
            EmitError::Io(_) => CliError::io(e.to_string()),
            other => CliError {
                code: EXIT_FAILURE,
                message: other.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Spectrum {
        n_points: usize,
        gauge_k: f64,
        phi: f64,
    },
    Sweep {
        n_points: usize,
        gauge_k: f64,
        steps: usize,
        window: PlotWindow,
    },
    Bands {
        n_min: i64,
        n_max: i64,
        q_samples: usize,
    },
    Superpose {
        q: f64,
        gauge_k: f64,
        terms: Vec<Term<f64>>,
        amplitude: f64,
        samples: usize,
        tol: f64,
    },
    GaugeCheck {
        n_points: usize,
        q: f64,
        gauge_ks: Vec<f64>,
    },
    Converge {
        q: f64,
        gauge_ks: Vec<f64>,
        n_points_list: Vec<usize>,
    },
}

/// Validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct Output {
    /// Destination file (standard output when omitted)
    #[arg(long = "out")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Parser)]
#[command(name = "twistring", version, about = "Momentum operator on a ring with periodic and twisted seams")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Eigenvalues of the twisted momentum matrix
    Spectrum {
        /// Number of ring points
        #[arg(long = "n")]
        n: usize,
        /// Gauge constant k
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        k: f64,
        /// Seam twist phase in radians
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Spectra over twist magnitudes 0..pi at both twist signs
    Sweep {
        #[arg(long = "n", default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        k: f64,
        #[arg(long, default_value_t = twistring::sweep::DEFAULT_SWEEP_STEPS)]
        steps: usize,
        /// Lower edge of the plotted eigenvalue range (svg only)
        #[arg(long, allow_negative_numbers = true)]
        ymin: Option<f64>,
        /// Upper edge of the plotted eigenvalue range (svg only)
        #[arg(long, allow_negative_numbers = true)]
        ymax: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Quadratic band energies (q + n)^2
    Bands {
        #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
        n_min: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        n_max: i64,
        #[arg(long, default_value_t = 41)]
        q_samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Density periodicity and seam report for a plane-wave superposition
    Superpose {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        k: f64,
        /// Term as offset:re[:im]; repeat for each term
        #[arg(long = "term", required = true, allow_hyphen_values = true)]
        terms: Vec<String>,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Density samples written in csv format
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Tolerance for integer offset differences
        #[arg(long, default_value_t = twistring::superposition::DEFAULT_OFFSET_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Eigenvalue of a momentum-q state across gauges, periodic vs twisted seam
    GaugeCheck {
        #[arg(long = "n", default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0.37, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,1.2", allow_hyphen_values = true)]
        ks: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Convergence of the twisted-seam eigenvalue to q as N grows
    Converge {
        #[arg(long, default_value_t = 0.37, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1.2", allow_hyphen_values = true)]
        ks: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "20,40,80,160,320")]
        ns: Vec<usize>,
        #[command(flatten)]
        output: Output,
    },
}

fn require_grid(n: usize) -> Result<(), CliError> {
    make_ring_grid::<f64>(n).map(|_| ()).map_err(|e| CliError::usage(format!("--n: {e}")))
}

fn parse_term(spec: &str) -> Result<Term<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(CliError::usage(format!("--term `{spec}`: expected offset:re[:im]")));
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::usage(format!("--term `{spec}`: `{s}` is not a number")))
    };
    let offset = num(parts[0])?;
    let re = num(parts[1])?;
    let im = if parts.len() == 3 { num(parts[2])? } else { 0.0 };
    Ok(Term::new(offset, Complex::new(re, im)))
}

/// Parses the arguments that follow the program name.
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("twistring")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| {
        let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        CliError {
            code,
            message: e.render().to_string(),
        }
    })?;

    let (command, output) = match cli.command {
        Cmd::Spectrum { n, k, phi, output } => {
            require_grid(n)?;
            (
                Command::Spectrum {
                    n_points: n,
                    gauge_k: k,
                    phi,
                },
                output,
            )
        }
        Cmd::Sweep {
            n,
            k,
            steps,
            ymin,
            ymax,
            output,
        } => {
            require_grid(n)?;
            if steps < 2 {
                return Err(CliError::usage(format!("--steps: need at least 2, got {steps}")));
            }
            (
                Command::Sweep {
                    n_points: n,
                    gauge_k: k,
                    steps,
                    window: PlotWindow { y_min: ymin, y_max: ymax },
                },
                output,
            )
        }
        Cmd::Bands {
            n_min,
            n_max,
            q_samples,
            output,
        } => {
            if q_samples < 2 {
                return Err(CliError::usage(format!("--q-samples: need at least 2, got {q_samples}")));
            }
            if n_min > n_max {
                return Err(CliError::usage(format!("--n-min {n_min} exceeds --n-max {n_max}")));
            }
            (Command::Bands { n_min, n_max, q_samples }, output)
        }
        Cmd::Superpose {
            q,
            k,
            terms,
            amplitude,
            samples,
            tol,
            output,
        } => {
            let mut terms = terms.iter().map(|t| parse_term(t)).collect::<Result<Vec<_>, _>>()?;
            terms.sort_by(|a, b| a.offset.total_cmp(&b.offset));
            SuperpositionState::new(q, k, terms.clone(), amplitude).map_err(|e| CliError::usage(e.to_string()))?;
            if !(tol > 0.0) {
                return Err(CliError::usage("--tol: must be positive"));
            }
            if samples == 0 {
                return Err(CliError::usage("--samples: must be positive"));
            }
            (
                Command::Superpose {
                    q,
                    gauge_k: k,
                    terms,
                    amplitude,
                    samples,
                    tol,
                },
                output,
            )
        }
        Cmd::GaugeCheck { n, q, ks, output } => {
            require_grid(n)?;
            (
                Command::GaugeCheck {
                    n_points: n,
                    q,
                    gauge_ks: ks,
                },
                output,
            )
        }
        Cmd::Converge { q, ks, ns, output } => {
            for &n in &ns {
                require_grid(n)?;
            }
            (
                Command::Converge {
                    q,
                    gauge_ks: ks,
                    n_points_list: ns,
                },
                output,
            )
        }
    };

    if output.format == Format::Svg && !matches!(command, Command::Sweep { .. }) {
        return Err(CliError::usage("--format svg is only available for `sweep`"));
    }
    Ok(RunConfig {
        command,
        format: output.format,
        output: output.out,
    })
}

fn open_output(config: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    match &config.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

/// Executes a validated configuration, writing to its destination.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let out = open_output(config)?;
    run_to(config, out)
}

/// Executes a configuration against an explicit writer, ignoring `config.output`.
pub fn run_to<W: Write>(config: &RunConfig, mut out: W) -> Result<(), CliError> {
    match &config.command {
        Command::Spectrum {
            n_points,
            gauge_k,
            phi,
        } => {
            let grid = make_ring_grid(*n_points)?;
            let spectrum = hermitian_eigen(&build_twisted_operator(&grid, *gauge_k, *phi))?;
            match config.format {
                Format::Json => emit_json(&spectrum_records(&spectrum.eigenvalues), &mut out)?,
                _ => emit_spectrum_csv(&spectrum.eigenvalues, &mut out)?,
            }
        }
        Command::Sweep {
            n_points,
            gauge_k,
            steps,
            window,
        } => {
            let grid = make_ring_grid(*n_points)?;
            let table = phi_sweep(&grid, *gauge_k, *steps)?;
            match config.format {
                Format::Csv => emit_sweep_csv(&table, &mut out)?,
                Format::Json => emit_json(&sweep_records(&table), &mut out)?,
                Format::Svg => render_svg(&table, *window, &mut out)?,
            }
        }
        Command::Bands {
            n_min,
            n_max,
            q_samples,
        } => {
            let rows = band_table::<f64>(*n_min, *n_max, *q_samples)?;
            match config.format {
                Format::Json => emit_json(&rows, &mut out)?,
                _ => emit_band_csv(&rows, &mut out)?,
            }
        }
        Command::Superpose {
            q,
            gauge_k,
            terms,
            amplitude,
            samples,
            tol,
        } => {
            let state = SuperpositionState::new(*q, *gauge_k, terms.clone(), *amplitude)?;
            match config.format {
                Format::Json => {
                    let report = superposition_report(&state, *tol);
                    serde_json::to_writer_pretty(&mut out, &report).map_err(EmitError::from)?;
                    writeln!(out).map_err(EmitError::from)?;
                }
                _ => {
                    let grid = make_ring_grid::<f64>((*samples).max(3))?;
                    writeln!(out, "x,density").map_err(EmitError::from)?;
                    for &x in grid.x_values() {
                        writeln!(out, "{x},{}", density(&state, x)).map_err(EmitError::from)?;
                    }
                    writeln!(out, "{},{}", std::f64::consts::PI, density(&state, std::f64::consts::PI))
                        .map_err(EmitError::from)?;
                }
            }
        }
        Command::GaugeCheck {
            n_points,
            q,
            gauge_ks,
        } => {
            let grid = make_ring_grid(*n_points)?;
            let rows = gauge_comparison(&grid, *q, gauge_ks)?;
            match config.format {
                Format::Json => emit_json(&rows, &mut out)?,
                _ => emit_gauge_csv(&rows, &mut out)?,
            }
        }
        Command::Converge {
            q,
            gauge_ks,
            n_points_list,
        } => {
            let rows = convergence_study(*q, gauge_ks, n_points_list)?;
            match config.format {
                Format::Json => {
                    let slopes: Vec<_> = gauge_ks
                        .iter()
                        .map(|&k| {
                            let of_k: Vec<_> = rows.iter().copied().filter(|r| r.gauge_k == k).collect();
                            json!({ "gauge_k": k, "loglog_slope": loglog_slope(&of_k) })
                        })
                        .collect();
                    let doc = json!({ "rows": rows, "slopes": slopes });
                    serde_json::to_writer_pretty(&mut out, &doc).map_err(EmitError::from)?;
                    writeln!(out).map_err(EmitError::from)?;
                }
                _ => emit_convergence_csv(&rows, &mut out)?,
            }
        }
    }
    out.flush().map_err(EmitError::from)?;
    Ok(())
}

fn superposition_report(state: &SuperpositionState<f64>, tol: f64) -> serde_json::Value {
    let verdict = is_density_periodic(state, tol);
    let seam = check_nonlinear_bc(state);
    let offsets: Vec<f64> = state.terms().iter().map(|t| t.offset).collect();
    let subset = hilbert_subset_filter(&offsets, tol);
    let cross: Vec<_> = cross_terms(state)
        .iter()
        .map(|c| {
            json!({
                "lower": c.lower,
                "upper": c.upper,
                "frequency": c.frequency(),
                "magnitude": c.magnitude,
                "phase": c.phase,
            })
        })
        .collect();
    json!({
        "q": state.q(),
        "gauge_k": state.gauge_k(),
        "periodic": verdict.periodic,
        "offending_pair": verdict.offending_pair.map(|(a, b)| [a, b]),
        "seam": {
            "value_jump": verdict.value_jump,
            "slope_jump": verdict.slope_jump,
            "phase_gradient_jump": seam.phase_gradient_jump,
            "current_jump": seam.current_jump,
            "satisfied": seam.satisfied,
        },
        "hilbert_subset": { "accepted": subset.accepted, "rejected": subset.rejected },
        "cross_terms": cross,
    })
}
