use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use specpencil::assembly::AssemblyError;
use specpencil::experiments::{
    parse_grid, run_convergence, run_sweep, run_tables, run_toy, toy_points, write_convergence_csv, ExperimentError,
    KernelLayout, SweepConfig, ToyCase, TOY_TOLERANCE,
};
use specpencil::mesh::{self, MeshError};
use specpencil::pencil::{PencilError, SweepAxis, DEFAULT_TOL};
use specpencil::vem::StabilizationMode;

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser)]
#[command(name = "specpencil", version, about = "Eigenvalue pencils and virtual element Laplace experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in diagonal pencils against their closed-form branches.
    Toy {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        case: u8,
        #[arg(long, value_enum, default_value_t = Variant::Disjoint)]
        variant: Variant,
        /// `a:b:step` or `log:a:b:n`.
        #[arg(long)]
        grid: String,
        /// Value of the parameter that is not swept.
        #[arg(long, default_value_t = 1.0)]
        fixed: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mesh utilities.
    Mesh {
        #[command(subcommand)]
        command: MeshCommand,
    },
    /// Kernel dimensions of the consistency matrices and the inf-sup probe.
    Tables {
        /// Comma-separated mesh files.
        #[arg(long, value_delimiter = ',', required = true)]
        meshes: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k: Vec<usize>,
        #[arg(long, default_value = "dofi")]
        stab: StabilizationMode,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues along one stabilization parameter.
    Sweep {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        axis: Axis,
        #[arg(long)]
        fixed: f64,
        /// `a:b:step` or `log:a:b:n`.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 30)]
        m: usize,
        /// Drop eigenvalues above this value (in reported units).
        #[arg(long)]
        max_value: Option<f64>,
        #[arg(long)]
        raw: bool,
        #[arg(long, default_value = "dofi")]
        stab: StabilizationMode,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalue errors on refined square grids.
    Converge {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        grids: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value = "dofi")]
        stab: StabilizationMode,
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Lloyd-relaxed Voronoi mesh of the unit square.
    Gen {
        #[arg(long)]
        cells: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        lloyd: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Disjoint,
    Intersect,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    Alpha,
    Beta,
}

fn exit_code(e: &ExperimentError) -> u8 {
    fn pencil(e: &PencilError) -> u8 {
        match e {
            PencilError::InvalidParameter(_) | PencilError::InvalidGrid(_) => EXIT_CONFIG,
            _ => EXIT_NUMERICAL,
        }
    }
    match e {
        ExperimentError::Config(_) | ExperimentError::Io(_) | ExperimentError::Mesh(_) => EXIT_CONFIG,
        ExperimentError::Assembly(AssemblyError::UnsupportedDegree(_)) => EXIT_CONFIG,
        ExperimentError::Assembly(AssemblyError::Pencil(p)) | ExperimentError::Pencil(p) => pencil(p),
        ExperimentError::Assembly(_) => EXIT_NUMERICAL,
    }
}

fn with_output(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), ExperimentError> {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            write(&mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            match write(&mut lock) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

fn load_mesh(path: &Path) -> Result<mesh::PolygonalMesh, ExperimentError> {
    mesh::load(path).map_err(|e| match e {
        MeshError::Io(io) => ExperimentError::Config(format!("{}: {io}", path.display())),
        other => other.into(),
    })
}

fn run(cli: Cli) -> Result<u8, ExperimentError> {
    match cli.command {
        Command::Toy { case, variant, grid, fixed, out } => {
            let layout = match variant {
                Variant::Disjoint => KernelLayout::Disjoint,
                Variant::Intersect => KernelLayout::Intersecting,
            };
            let case = match case {
                1 => ToyCase::AlphaOnly,
                2 => ToyCase::BetaOnly,
                _ => ToyCase::TwoParameter(layout),
            };
            let grid = parse_grid(&grid)?;
            let report = run_toy(case, &toy_points(case, &grid, fixed))?;
            with_output(out.as_deref(), |w| report.write_csv(w))?;
            if !report.passed() {
                eprintln!("discrepancy {:e} exceeds {TOY_TOLERANCE:e}", report.max_discrepancy);
                return Ok(EXIT_VERIFICATION);
            }
        }
        Command::Mesh { command: MeshCommand::Gen { cells, seed, lloyd, out } } => {
            let m = mesh::generate_voronoi(cells, seed, lloyd)?;
            with_output(out.as_deref(), |w| mesh::write_vempoly(&m, w))?;
        }
        Command::Tables { meshes, k, stab, tol, raw, out } => {
            let loaded = meshes.iter().map(|p| load_mesh(p)).collect::<Result<Vec<_>, _>>()?;
            let report = run_tables(&loaded, &k, stab, tol)?;
            with_output(out.as_deref(), |w| report.write_csv(raw, w))?;
        }
        Command::Sweep { mesh, k, axis, fixed, grid, m, max_value, raw, stab, tol, out } => {
            let axis = match axis {
                Axis::Alpha => SweepAxis::Alpha,
                Axis::Beta => SweepAxis::Beta,
            };
            let mut config = SweepConfig::new(k, axis, fixed, parse_grid(&grid)?);
            config.m = m;
            config.max_value = max_value;
            config.raw = raw;
            config.stabilization = stab;
            config.tol = tol;
            let report = run_sweep(&load_mesh(&mesh)?, &config)?;
            for p in report.points.iter().filter(|p| p.error.is_some()) {
                eprintln!("{}={}: {}", axis.as_str(), p.param, p.error.as_deref().unwrap_or_default());
            }
            with_output(out.as_deref(), |w| report.write_csv(w))?;
        }
        Command::Converge { k, grids, alpha, beta, m, stab, raw, out } => {
            let rows = run_convergence(k, &grids, alpha, beta, m, stab)?;
            with_output(out.as_deref(), |w| write_convergence_csv(&rows, raw, w))?;
        }
    }
    Ok(0)
}

fn configure_threads() -> Result<(), ExperimentError> {
    let Ok(value) = std::env::var("SPECPENCIL_THREADS") else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ExperimentError::Config(format!("SPECPENCIL_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| ExperimentError::Config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = configure_threads().and_then(|()| run(cli));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
