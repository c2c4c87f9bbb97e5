//! TOML run configuration.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};

use rosenau_core::analysis::{RefinementAxis, StudyLevel};
use rosenau_core::mesh::{read_mesh, Mesh};
use rosenau_core::problems::{make_example, ExampleName, ExampleParams, ProblemCatalogEntry};
use rosenau_core::stepper::{DynamicsTest, InitialP, Initializer, JacobianMode, SolverConfig};

/// Error raised when an input file named by the configuration cannot be read.
#[derive(Debug, thiserror::Error)]
#[error("cannot read {path}: {message}")]
pub struct MissingInput {
    pub path: PathBuf,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub problem: ProblemSection,
    #[serde(default)]
    pub mesh: MeshSection,
    #[serde(default)]
    pub discretization: DiscretizationSection,
    #[serde(default)]
    pub time: TimeSection,
    #[serde(default)]
    pub newton: NewtonSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub study: StudySection,
    #[serde(default)]
    pub verify: VerifySection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub name: String,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default = "one")]
    pub beta: f64,
}

impl Default for ProblemSection {
    fn default() -> Self {
        Self { name: ExampleName::Example1.to_string(), alpha: 1.0, beta: 1.0 }
    }
}

/// Either a generated mesh of the problem's domain or a mesh file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    /// Cells per side of the generated mesh.
    #[serde(default = "default_cells")]
    pub cells: usize,
    /// Mesh file, resolved relative to the configuration file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

impl Default for MeshSection {
    fn default() -> Self {
        Self { cells: default_cells(), file: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationSection {
    #[serde(default = "two")]
    pub u_degree: usize,
    #[serde(default = "one_usize")]
    pub p_degree: usize,
    #[serde(default)]
    pub initializer: InitializerKind,
    #[serde(default)]
    pub initial_p: InitialPKind,
    #[serde(default)]
    pub dynamics_test: DynamicsTestKind,
}

impl Default for DiscretizationSection {
    fn default() -> Self {
        Self {
            u_degree: 2,
            p_degree: 1,
            initializer: InitializerKind::default(),
            initial_p: InitialPKind::default(),
            dynamics_test: DynamicsTestKind::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(default = "one")]
    pub t_final: f64,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self { k: default_k(), t_final: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonSection {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub jacobian: JacobianKind,
    #[serde(default = "default_picard")]
    pub picard_max_iter: usize,
}

impl Default for NewtonSection {
    fn default() -> Self {
        Self { tol: default_tol(), max_iter: default_max_iter(), jacobian: JacobianKind::default(), picard_max_iter: default_picard() }
    }
}

/// Output file names, relative to `--out-dir`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_table")]
    pub table: PathBuf,
    #[serde(default = "default_field")]
    pub field: PathBuf,
    #[serde(default = "default_energy")]
    pub energy: PathBuf,
    /// Fill the `cpu_seconds` column. Turn off for byte-reproducible tables.
    #[serde(default = "yes")]
    pub timing: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { table: default_table(), field: default_field(), energy: default_energy(), timing: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudySection {
    #[serde(default)]
    pub axis: AxisKind,
    /// Cells per side for each level (`space`, `joint`).
    #[serde(default)]
    pub levels: Vec<usize>,
    /// Time step for each level (`time`); defaults to `h` on the `joint` axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_steps: Option<Vec<f64>>,
    /// Levels run concurrently; capped by `ROSENAU_THREADS`.
    #[serde(default = "one_usize")]
    pub threads: usize,
}

impl Default for StudySection {
    fn default() -> Self {
        Self { axis: AxisKind::default(), levels: Vec::new(), time_steps: None, threads: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_forcing_tol")]
    pub forcing_tol: f64,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self { samples: default_samples(), seed: 0, forcing_tol: default_forcing_tol() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitializerKind {
    #[default]
    Interpolate,
    Ritz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialPKind {
    #[default]
    Discrete,
    Interpolate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DynamicsTestKind {
    #[default]
    PSpace,
    USpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JacobianKind {
    #[default]
    Full,
    Lagged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    #[default]
    Space,
    Time,
    Joint,
}

fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn two() -> usize {
    2
}
fn yes() -> bool {
    true
}
fn default_cells() -> usize {
    16
}
fn default_k() -> f64 {
    0.01
}
fn default_tol() -> f64 {
    1e-11
}
fn default_max_iter() -> usize {
    25
}
fn default_picard() -> usize {
    200
}
fn default_samples() -> usize {
    200
}
fn default_forcing_tol() -> f64 {
    1e-6
}
fn default_table() -> PathBuf {
    "convergence.csv".into()
}
fn default_field() -> PathBuf {
    "solution.vtk".into()
}
fn default_energy() -> PathBuf {
    "energy.csv".into()
}

impl RunConfig {
    /// Parses and validates `text`. Relative mesh paths resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut cfg: Self = toml::from_str(text).context("invalid configuration")?;
        if let (Some(base), Some(file)) = (base, cfg.mesh.file.as_mut()) {
            if file.is_relative() {
                *file = base.join(&*file);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| MissingInput { path: path.to_path_buf(), message: e.to_string() })?;
        Self::parse(&text, path.parent()).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.example_name()?;
        let p = &self.problem;
        ensure!(p.alpha > 0.0 && p.alpha.is_finite(), "problem.alpha must be positive, got {}", p.alpha);
        ensure!(p.beta > 0.0 && p.beta.is_finite(), "problem.beta must be positive, got {}", p.beta);
        ensure!(self.mesh.cells >= 1, "mesh.cells must be at least 1");
        self.solver_config().validate()?;
        let s = &self.study;
        ensure!(s.threads >= 1, "study.threads must be at least 1");
        ensure!(s.levels.iter().all(|&n| n >= 1), "study.levels must be positive");
        if let Some(ks) = &s.time_steps {
            ensure!(ks.iter().all(|k| *k > 0.0 && k.is_finite()), "study.time_steps must be positive");
            if !s.levels.is_empty() && s.axis != AxisKind::Time {
                ensure!(ks.len() == s.levels.len(), "study.time_steps must have one entry per level");
            }
        }
        ensure!(self.verify.samples >= 1, "verify.samples must be at least 1");
        ensure!(self.verify.forcing_tol > 0.0, "verify.forcing_tol must be positive");
        Ok(())
    }

    pub fn example_name(&self) -> Result<ExampleName> {
        Ok(self.problem.name.parse()?)
    }

    pub fn params(&self) -> ExampleParams<f64> {
        ExampleParams { alpha: self.problem.alpha, beta: self.problem.beta }
    }

    pub fn entry(&self) -> Result<ProblemCatalogEntry<f64>> {
        Ok(make_example(self.example_name()?, self.params())?)
    }

    pub fn solver_config(&self) -> SolverConfig<f64> {
        let d = &self.discretization;
        let n = &self.newton;
        SolverConfig {
            k: self.time.k,
            t_final: self.time.t_final,
            newton_tol: n.tol,
            newton_max_iter: n.max_iter,
            u_degree: d.u_degree,
            p_degree: d.p_degree,
            initializer: match d.initializer {
                InitializerKind::Interpolate => Initializer::Interpolate,
                InitializerKind::Ritz => Initializer::Ritz,
            },
            initial_p: match d.initial_p {
                InitialPKind::Discrete => InitialP::Discrete,
                InitialPKind::Interpolate => InitialP::Interpolate,
            },
            jacobian: match n.jacobian {
                JacobianKind::Full => JacobianMode::Full,
                JacobianKind::Lagged => JacobianMode::Lagged,
            },
            dynamics_test: match d.dynamics_test {
                DynamicsTestKind::PSpace => DynamicsTest::PSpace,
                DynamicsTestKind::USpace => DynamicsTest::USpace,
            },
            picard_max_iter: n.picard_max_iter,
        }
    }

    /// The configured mesh, checked against the problem dimension.
    pub fn mesh(&self, entry: &ProblemCatalogEntry<f64>) -> Result<Arc<Mesh<f64>>> {
        let mesh = match &self.mesh.file {
            Some(path) => {
                if !path.is_file() {
                    return Err(MissingInput { path: path.clone(), message: "no such file".into() }.into());
                }
                read_mesh(path)?
            }
            None => entry.domain.mesh(self.mesh.cells)?,
        };
        ensure!(mesh.dim() == entry.dim(), "{} is a {}D problem but the mesh is {}D", entry.name, entry.dim(), mesh.dim());
        Ok(Arc::new(mesh))
    }

    pub fn axis(&self) -> RefinementAxis {
        match self.study.axis {
            AxisKind::Space => RefinementAxis::Space,
            AxisKind::Time => RefinementAxis::Time,
            AxisKind::Joint => RefinementAxis::Joint,
        }
    }

    /// Study levels. On the `time` axis the mesh is fixed and `time_steps` lists the levels.
    pub fn study_levels(&self, entry: &ProblemCatalogEntry<f64>) -> Result<Vec<StudyLevel<f64>>> {
        let s = &self.study;
        if s.axis == AxisKind::Time {
            let Some(ks) = &s.time_steps else { bail!("study.time_steps is required on the time axis") };
            let base = StudyLevel::uniform(&entry.domain, self.mesh.cells, self.time.k)?;
            let mesh = if self.mesh.file.is_some() { self.mesh(entry)? } else { base.mesh.clone() };
            let h = if self.mesh.file.is_some() { mesh.h() } else { base.h };
            return Ok(ks.iter().map(|&k| StudyLevel { mesh: mesh.clone(), h, k }).collect());
        }
        ensure!(self.mesh.file.is_none(), "convergence studies refine generated meshes; remove mesh.file");
        s.levels
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let mut level = StudyLevel::uniform(&entry.domain, n, self.time.k)?;
                level.k = match (&s.time_steps, s.axis) {
                    (Some(ks), _) => ks[i],
                    (None, AxisKind::Joint) => level.h,
                    (None, _) => self.time.k,
                };
                Ok(level)
            })
            .collect()
    }

    /// `study.threads`, capped by `ROSENAU_THREADS` when set.
    pub fn threads(&self) -> usize {
        let cap = std::env::var("ROSENAU_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n >= 1);
        cap.map_or(self.study.threads, |c| self.study.threads.min(c))
    }
}
