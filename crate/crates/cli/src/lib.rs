//! Configuration-driven driver: single solves, convergence studies and
//! self-verification.

pub mod config;
pub mod output;

use std::collections::HashSet;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use rosenau_core::analysis::convergence_study;
use rosenau_core::mesh::{validate_mesh, Mesh};
use rosenau_core::problems::{make_example, verify_forcing, ExampleName, ProblemCatalogEntry};
use rosenau_core::stepper::{initialize, run_with, Discretization, ProblemDefinition, SolverConfig, TimeStepper};

pub use config::{MissingInput, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "rosenau", version, about = "Mixed finite element Rosenau–Burgers solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one solve; write the final field (VTK) and the energy trace (CSV).
    Solve(Paths),
    /// Run a convergence study; write the error table as CSV and markdown.
    Converge(Paths),
    /// Run the built-in consistency checks.
    Verify(Paths),
}

#[derive(Debug, Args)]
pub struct Paths {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// Exit status for unreadable inputs and invalid configurations.
pub const EXIT_INPUT: i32 = 2;
/// Exit status for failed runs and failed checks.
pub const EXIT_FAILURE: i32 = 1;

type CommandFn = fn(&RunConfig, &Path) -> Result<i32>;

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let (paths, cmd): (&Paths, CommandFn) = match &cli.command {
        Command::Solve(p) => (p, cmd_solve),
        Command::Converge(p) => (p, cmd_converge),
        Command::Verify(p) => (p, cmd_verify),
    };
    let cfg = match RunConfig::load(&paths.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_INPUT;
        }
    };
    match std::fs::create_dir_all(&paths.out_dir)
        .with_context(|| format!("cannot create {}", paths.out_dir.display()))
        .and_then(|_| cmd(&cfg, &paths.out_dir))
    {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| c.is::<MissingInput>()) {
                EXIT_INPUT
            } else {
                EXIT_FAILURE
            }
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// Single solve to `time.t_final`.
pub fn cmd_solve(cfg: &RunConfig, out_dir: &Path) -> Result<i32> {
    let entry = cfg.entry()?;
    let mesh = cfg.mesh(&entry)?;
    let solver = cfg.solver_config();
    let disc = Discretization::new(mesh.clone(), solver.u_degree, solver.p_degree)?;
    let summary = run_with(&entry.problem, &disc, &solver, |_| {})?;
    let state = &summary.final_state;
    let title = format!("{} t={}", entry.name, state.t);
    let field = out_dir.join(&cfg.output.field);
    write(&field, &output::vtk_string(&mesh, &state.u, &state.p, &title))?;
    let energy = out_dir.join(&cfg.output.energy);
    write(&energy, &output::energy_csv(&summary.energy, solver.k))?;
    let factorizations: usize = summary.steps.iter().map(|s| s.factorizations).sum();
    let picard = summary.steps.iter().filter(|s| s.used_picard).count();
    println!("problem      {}", entry.name);
    println!("dofs         u {} p {}", disc.n_u(), disc.n_p());
    println!("steps        {}", summary.steps.len());
    println!("newton       {} iterations, max {} per step", summary.total_iterations(), summary.max_iterations());
    println!("factorized   {factorizations}");
    println!("picard steps {picard}");
    println!("wall time    {:.3} s", summary.wall_seconds);
    println!("wrote        {} {}", field.display(), energy.display());
    Ok(0)
}

/// Convergence study over `study.levels`.
pub fn cmd_converge(cfg: &RunConfig, out_dir: &Path) -> Result<i32> {
    let entry = cfg.entry()?;
    let levels = cfg.study_levels(&entry)?;
    let mut table = convergence_study(&entry, &levels, &cfg.solver_config(), cfg.axis(), cfg.threads())?;
    if !cfg.output.timing {
        table = table.without_timing();
    }
    let csv = out_dir.join(&cfg.output.table);
    write(&csv, &table.to_csv())?;
    let md = csv.with_extension("md");
    let markdown = table.to_markdown();
    write(&md, &markdown)?;
    print!("{markdown}");
    println!("wrote {} {}", csv.display(), md.display());
    Ok(0)
}

/// One named check of [`verify_checks`].
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Manufactured-solution entries of the catalog for the configured parameters.
pub fn manufactured_entries(cfg: &RunConfig) -> Result<Vec<ProblemCatalogEntry<f64>>> {
    let mut out = Vec::new();
    for name in ExampleName::ALL {
        let entry = make_example(name, cfg.params())?;
        if entry.exact().is_some() {
            out.push(entry);
        }
    }
    Ok(out)
}

/// Forcing consistency of `entries`, validity of the generated and configured
/// meshes, the Newton Jacobian against finite differences and the energy
/// decay of homogeneous equal-order runs.
pub fn verify_checks(cfg: &RunConfig, entries: &[ProblemCatalogEntry<f64>]) -> Vec<Check> {
    let mut checks = Vec::new();
    let v = &cfg.verify;
    for entry in entries {
        let name = format!("forcing {}", entry.name);
        checks.push(match verify_forcing(entry, v.samples, v.seed) {
            Ok(r) => Check::new(
                name,
                r.max_relative_residual <= v.forcing_tol,
                format!("max relative residual {:.3e} at {:?}", r.max_relative_residual, r.worst_point),
            ),
            Err(e) => Check::new(name, false, e.to_string()),
        });
    }
    let mut meshes: Vec<(String, Result<Mesh<f64>>)> = Vec::new();
    let mut seen = HashSet::new();
    for entry in entries {
        let key = format!("{:?}", entry.domain);
        if seen.insert(key) {
            let name = format!("mesh {} ({} cells per side)", entry.name, cfg.mesh.cells);
            meshes.push((name, entry.domain.mesh(cfg.mesh.cells).map_err(Into::into)));
        }
    }
    if let Some(path) = &cfg.mesh.file {
        meshes.push((format!("mesh {}", path.display()), rosenau_core::mesh::read_mesh(path).map_err(Into::into)));
    }
    for (name, mesh) in meshes {
        checks.push(match mesh {
            Ok(m) => {
                let report = validate_mesh(&m);
                let detail = if report.violations.is_empty() {
                    format!("{} cells, min quality {:.3}", m.n_cells(), report.min_quality)
                } else {
                    report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
                };
                Check::new(name, report.violations.is_empty(), detail)
            }
            Err(e) => Check::new(name, false, format!("{e:#}")),
        });
    }
    for entry in entries {
        let name = format!("jacobian {}", entry.name);
        checks.push(match jacobian_fd_error(entry) {
            Ok(err) => Check::new(name, err <= 1e-6, format!("max relative deviation {err:.3e}")),
            Err(e) => Check::new(name, false, format!("{e:#}")),
        });
    }
    for dim in [1, 2] {
        for degree in [1, 2] {
            let name = format!("energy decay {dim}D P{degree}/P{degree}");
            checks.push(match energy_increase(dim, degree) {
                Ok(inc) => Check::new(name, inc <= 1e-10, format!("max relative increase {inc:.3e}")),
                Err(e) => Check::new(name, false, format!("{e:#}")),
            });
        }
    }
    checks
}

fn small_mesh(entry: &ProblemCatalogEntry<f64>) -> Result<Arc<Mesh<f64>>> {
    Ok(Arc::new(entry.domain.mesh(if entry.dim() == 1 { 6 } else { 3 })?))
}

/// Largest deviation of the assembled Newton Jacobian from central
/// differences of the residual, relative to the largest Jacobian entry.
/// Rows and columns of Dirichlet unknowns are skipped.
pub fn jacobian_fd_error(entry: &ProblemCatalogEntry<f64>) -> Result<f64> {
    let cfg = SolverConfig::new(0.05, 1.0);
    let disc = Discretization::new(small_mesh(entry)?, cfg.u_degree, cfg.p_degree)?;
    let mut stepper = TimeStepper::new(&entry.problem, &disc, &cfg)?;
    let prev = initialize(&entry.problem, &disc, &cfg)?;
    let load = stepper.load(cfg.k);
    let n_u = disc.n_u();
    let u: Vec<f64> = prev.u.iter().enumerate().map(|(i, v)| v + 0.01 * ((i * 7 % 5) as f64 - 2.0)).collect();
    let p = prev.p.clone();
    let jac = stepper.jacobian(&u)?;
    let constrained: HashSet<usize> = stepper.constrained().iter().copied().collect();
    let h = 1e-6;
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for col in (0..n_u + disc.n_p()).filter(|c| !constrained.contains(c)) {
        let (mut up, mut um, mut pp, mut pm) = (u.clone(), u.clone(), p.clone(), p.clone());
        if col < n_u {
            up[col] += h;
            um[col] -= h;
        } else {
            pp[col - n_u] += h;
            pm[col - n_u] -= h;
        }
        let rp = stepper.residual(&prev, &up, &pp, &load)?.0;
        let rm = stepper.residual(&prev, &um, &pm, &load)?.0;
        for row in (0..rp.len()).filter(|r| !constrained.contains(r)) {
            let exact = jac.get(row, col);
            worst = worst.max(((rp[row] - rm[row]) / (2.0 * h) - exact).abs());
            scale = scale.max(exact.abs());
        }
    }
    Ok(worst / scale.max(f64::MIN_POSITIVE))
}

/// Largest relative step-to-step energy increase of a homogeneous run with a
/// Gaussian initial value (100 steps of `k = 0.01`).
pub fn energy_increase(dim: usize, degree: usize) -> Result<f64> {
    let problem = ProblemDefinition::homogeneous(
        dim,
        1.0,
        Arc::new(move |x: &[f64]| (-x.iter().take(dim).map(|v| (v - 0.5).powi(2)).sum::<f64>() / 0.02).exp()),
    );
    let cfg = SolverConfig::new(0.01, 1.0).with_degrees(degree, degree);
    let mesh = Arc::new(if dim == 1 {
        rosenau_core::mesh::generate_interval_mesh(16, 0.0, 1.0)?
    } else {
        rosenau_core::mesh::generate_rect_mesh(6, 6, rosenau_core::mesh::Rect::unit())?
    });
    let disc = Discretization::new(mesh, degree, degree)?;
    let summary = run_with(&problem, &disc, &cfg, |_| {})?;
    Ok(summary.energy.max_relative_increase().max(0.0))
}

/// Prints a pass/fail report of `checks`; exit status 1 lists the failures.
pub fn report(checks: &[Check], mut out: impl std::io::Write) -> Result<i32> {
    for c in checks {
        writeln!(out, "{} {:<32} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        writeln!(out, "all {} checks passed", checks.len())?;
        Ok(0)
    } else {
        writeln!(out, "{} of {} checks failed: {}", failed.len(), checks.len(), failed.join(", "))?;
        Ok(EXIT_FAILURE)
    }
}

pub fn cmd_verify(cfg: &RunConfig, _out_dir: &Path) -> Result<i32> {
    let entries = manufactured_entries(cfg)?;
    let checks = verify_checks(cfg, &entries);
    let code = report(&checks, std::io::stdout().lock())?;
    std::io::stdout().flush()?;
    Ok(code)
}
