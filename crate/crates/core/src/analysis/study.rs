use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::fem::FiniteElementFunction;
use crate::mesh::Mesh;
use crate::problems::{Domain, ProblemCatalogEntry};
use crate::scalar::Real;
use crate::stepper::{run_with, Discretization, SolverConfig};

use super::{error_norms, observed_order, p_error_l2, ErrorReport};

/// Which step size the orders of a table are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefinementAxis {
    /// `h` refined at fixed `k`.
    #[default]
    Space,
    /// `k` refined at fixed `h`.
    Time,
    /// `h = k` refined together; orders measured in `h`.
    Joint,
}

impl RefinementAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Space => "h",
            Self::Time => "k",
            Self::Joint => "h=k",
        }
    }

    fn step<T: Real>(self, r: &ErrorReport<T>) -> T {
        match self {
            Self::Time => r.k,
            Self::Space | Self::Joint => r.h,
        }
    }
}

/// One refinement level: a mesh with its nominal size and a time step.
#[derive(Debug, Clone)]
pub struct StudyLevel<T> {
    pub mesh: Arc<Mesh<T>>,
    pub h: T,
    pub k: T,
}

impl<T: Real> StudyLevel<T> {
    /// Structured mesh of `domain` with `n` cells per side and `h = width / n`.
    pub fn uniform(domain: &Domain<T>, n: usize, k: T) -> Result<Self> {
        let mesh = Arc::new(domain.mesh(n)?);
        let width = domain.from_unit([T::one(), T::zero()])[0] - domain.from_unit([T::zero(), T::zero()])[0];
        Ok(Self { mesh, h: width / T::from_usize_lossy(n), k })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow<T> {
    pub report: ErrorReport<T>,
    pub l2_order: Option<T>,
    pub h1_order: Option<T>,
    pub h2_order: Option<T>,
    /// Wall-clock seconds of the level's solve.
    pub cpu_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable<T> {
    pub axis: RefinementAxis,
    pub rows: Vec<ConvergenceRow<T>>,
}

pub const CSV_HEADER: &str = "h,k,L2,L2_order,H1,H1_order,H2,H2_order,Linf,cpu_seconds";

fn cell<T: Real>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

impl<T: Real> ConvergenceTable<T> {
    /// Fills orders between consecutive reports.
    pub fn from_reports(axis: RefinementAxis, reports: Vec<(ErrorReport<T>, Option<f64>)>) -> Result<Self> {
        if reports.len() < 2 {
            return Err(Error::InvalidArgument("need ≥ 2 levels".into()));
        }
        let mut rows: Vec<ConvergenceRow<T>> = Vec::with_capacity(reports.len());
        for (i, (report, cpu_seconds)) in reports.into_iter().enumerate() {
            let mut row = ConvergenceRow { report, l2_order: None, h1_order: None, h2_order: None, cpu_seconds };
            if i > 0 {
                let prev = &rows[i - 1].report;
                let (s1, s2) = (axis.step(prev), axis.step(&report));
                let order = |a: T, b: T| observed_order(a, b, s1, s2).ok();
                row.l2_order = order(prev.l2, report.l2);
                row.h1_order = order(prev.h1, report.h1);
                row.h2_order = order(prev.h2, report.h2);
            }
            rows.push(row);
        }
        Ok(Self { axis, rows })
    }

    /// Blanks the timing column, making the output reproducible byte for byte.
    pub fn without_timing(mut self) -> Self {
        self.rows.iter_mut().for_each(|r| r.cpu_seconds = None);
        self
    }

    /// Orders of the last two rows as `(L², H¹, H²)`.
    pub fn finest_orders(&self) -> (Option<T>, Option<T>, Option<T>) {
        self.rows.last().map_or((None, None, None), |r| (r.l2_order, r.h1_order, r.h2_order))
    }

    fn cells(&self) -> Vec<[String; 10]> {
        let e = |v: T| format!("{:.4e}", v.to_f64_lossy());
        let o = |v: T| format!("{:.4}", v.to_f64_lossy());
        self.rows
            .iter()
            .map(|r| {
                let rep = &r.report;
                [
                    format!("{}", rep.h.to_f64_lossy()),
                    format!("{}", rep.k.to_f64_lossy()),
                    e(rep.l2),
                    cell(r.l2_order, o),
                    e(rep.h1),
                    cell(r.h1_order, o),
                    e(rep.h2),
                    cell(r.h2_order, o),
                    e(rep.linf_nodes),
                    r.cpu_seconds.map(|s| format!("{s:.3}")).unwrap_or_default(),
                ]
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in self.cells() {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = CSV_HEADER.split(',').collect();
        let _ = writeln!(out, "| {} |", header.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
        for row in self.cells() {
            let _ = writeln!(out, "| {} |", row.join(" | "));
        }
        out
    }
}

type LevelResult<T> = Result<(ErrorReport<T>, f64)>;

fn run_level<T: Real>(entry: &ProblemCatalogEntry<T>, level: &StudyLevel<T>, config: &SolverConfig<T>) -> LevelResult<T> {
    let exact = entry.require_exact()?;
    let mut cfg = config.clone();
    cfg.k = level.k;
    let start = Instant::now();
    let disc = Discretization::new(level.mesh.clone(), cfg.u_degree, cfg.p_degree)?;
    let summary = run_with(&entry.problem, &disc, &cfg, |_| {})?;
    let seconds = start.elapsed().as_secs_f64();
    let state = summary.final_state;
    let u = FiniteElementFunction::new(disc.space_u.clone(), state.u)?;
    let p = FiniteElementFunction::new(disc.space_p.clone(), state.p)?;
    let mut report = error_norms(&u, &**exact, state.t)?.with_steps(level.h, level.k);
    report.p_l2 = Some(p_error_l2(&p, &**exact, state.t)?);
    Ok((report, seconds))
}

/// Runs every level to `config.t_final` (with the level's `k`) and tabulates
/// errors at the final time. Up to `threads` levels run concurrently; rows keep
/// the order of `levels`.
pub fn convergence_study<T: Real>(
    entry: &ProblemCatalogEntry<T>,
    levels: &[StudyLevel<T>],
    config: &SolverConfig<T>,
    axis: RefinementAxis,
    threads: usize,
) -> Result<ConvergenceTable<T>> {
    if levels.len() < 2 {
        return Err(Error::InvalidArgument("need ≥ 2 levels".into()));
    }
    entry.require_exact()?;
    let annotate = |level: usize| move |e: Error| Error::Level { level, source: Box::new(e) };
    let results: Vec<LevelResult<T>> = if threads <= 1 {
        levels.iter().enumerate().map(|(i, l)| run_level(entry, l, config).map_err(annotate(i))).collect()
    } else {
        let slots: Mutex<Vec<Option<LevelResult<T>>>> = Mutex::new((0..levels.len()).map(|_| None).collect());
        let next = AtomicUsize::new(0);
        std::thread::scope(|s| {
            for _ in 0..threads.min(levels.len()) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= levels.len() {
                        break;
                    }
                    let r = run_level(entry, &levels[i], config).map_err(annotate(i));
                    slots.lock().expect("no worker panicked while holding the lock")[i] = Some(r);
                });
            }
        });
        slots.into_inner().expect("workers finished").into_iter().map(|r| r.expect("every level ran")).collect()
    };
    let reports = results.into_iter().map(|r| r.map(|(rep, s)| (rep, Some(s)))).collect::<Result<Vec<_>>>()?;
    ConvergenceTable::from_reports(axis, reports)
}
