//! Experiment drivers: single runs, convergence studies, long-time energy
//! histories and the energy-conservation table.

use std::time::Instant;

use drudefd_core::diagnostics::{EnergyMonitor, ErrorTracker};
use drudefd_core::fields::component_names;
use drudefd_core::{FieldPair, Manufactured, SchemeOrder, SchemeSpec, StartUp, Stepper};
use rayon::prelude::*;
use serde_json::Value;

use crate::config::{ExperimentConfig, ExperimentKind, StartMode};
use crate::output::{Cell, ResultTable};
use crate::{HarnessError, Result};

/// What a single run should record.
#[derive(Debug, Clone, Copy)]
pub struct RunRequest {
    pub order: SchemeOrder,
    pub dt: f64,
    pub nu: f64,
    pub t_final: f64,
    /// Energy sampling stride; `None` skips energy diagnostics.
    pub energy_stride: Option<usize>,
    pub track_errors: bool,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub spec: SchemeSpec,
    /// Max-in-time error per component (empty when not tracked).
    pub errors: Vec<f64>,
    pub energy: Option<EnergyMonitor>,
}

/// The reference energy for `Theta`: the continuous energy of the
/// manufactured solution for (E,K); the first discrete energy for (H,J).
fn theta_reference(cfg: &ExperimentConfig, sol: &Manufactured) -> Option<f64> {
    match sol.pair() {
        FieldPair::EK => Some(sol.continuous_energy(0.0, cfg.length)),
        FieldPair::HJ => None,
    }
}

/// One sequential simulation of the configured manufactured solution.
pub fn run_once(cfg: &ExperimentConfig, req: RunRequest) -> drudefd_core::Result<RunSummary> {
    let sol = cfg.solution();
    let p = *sol.params();
    let spec = SchemeSpec::from_courant(
        req.order,
        sol.pair(),
        cfg.dim,
        cfg.length,
        req.dt,
        req.nu,
        req.t_final,
        p.c(),
    )?;
    let stepper = Stepper::new(spec, p)?;
    let startup = match cfg.startup {
        StartMode::Exact => StartUp::Exact(sol),
        StartMode::Taylor => StartUp::taylor_from(&sol, spec.mesh)?,
    };
    let mut monitor =
        req.energy_stride.map(|s| EnergyMonitor::new(theta_reference(cfg, &sol), s)).transpose()?;
    let mut tracker = req.track_errors.then(|| ErrorTracker::new(sol));
    stepper.run(&startup, |state| {
        if let Some(m) = monitor.as_mut() {
            m.observe(&stepper, state)?;
        }
        if let Some(t) = tracker.as_mut() {
            t.observe(&stepper, state)?;
        }
        Ok(())
    })?;
    Ok(RunSummary {
        spec,
        errors: tracker.map(|t| t.errors().to_vec()).unwrap_or_default(),
        energy: monitor,
    })
}

/// Output of a harness experiment.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: ResultTable,
    /// Human-readable descriptions of runs that went unstable.
    pub unstable: Vec<String>,
}

impl Report {
    /// Instability anywhere in the experiment, as an error for the exit code.
    pub fn instability(&self) -> Option<HarnessError> {
        (!self.unstable.is_empty()).then(|| HarnessError::Instability(self.unstable.join("; ")))
    }
}

fn base_table(cfg: &ExperimentConfig, columns: Vec<String>) -> ResultTable {
    let mut t = ResultTable::new(columns);
    t.metadata.insert(
        "config".into(),
        serde_json::to_value(cfg).expect("configuration serializes"),
    );
    t
}

fn field_names(cfg: &ExperimentConfig) -> Vec<&'static str> {
    component_names(cfg.dim, cfg.field_pair())
}

/// Splits core errors into reportable instabilities and hard failures.
fn outcome<T>(r: drudefd_core::Result<T>) -> Result<std::result::Result<T, usize>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(drudefd_core::Error::Instability { step }) => Ok(Err(step)),
        Err(e) => Err(e.into()),
    }
}

/// One level of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub level: usize,
    pub dt: f64,
    pub dx: f64,
    /// Per-component errors, or the step at which the run blew up.
    pub errors: std::result::Result<Vec<f64>, usize>,
}

pub fn run_level(cfg: &ExperimentConfig, level: usize) -> Result<LevelResult> {
    let dt = cfg.dt / 2f64.powi(level as i32);
    let req = RunRequest {
        order: cfg.scheme_order(),
        dt,
        nu: cfg.nu,
        t_final: cfg.t_final,
        energy_stride: None,
        track_errors: true,
    };
    let res = outcome(run_once(cfg, req))?;
    // Grid spacing as realized after rounding the cell count.
    let cells = (cfg.length * cfg.nu / (cfg.c * dt)).round();
    Ok(LevelResult { level, dt, dx: cfg.length / cells, errors: res.map(|r| r.errors) })
}

/// Runs all levels, on the rayon pool when `cfg.parallel` is set. Results
/// are ordered by level regardless of completion order.
pub fn run_levels(cfg: &ExperimentConfig) -> Result<Vec<LevelResult>> {
    if cfg.parallel {
        (0..cfg.levels).into_par_iter().map(|l| run_level(cfg, l)).collect()
    } else {
        (0..cfg.levels).map(|l| run_level(cfg, l)).collect()
    }
}

/// `log2(err_i / err_{i-1})` per component; `None` for the first level and
/// next to unstable levels.
pub fn level_rates(levels: &[LevelResult]) -> Vec<Vec<Option<f64>>> {
    let mut out = Vec::with_capacity(levels.len());
    for (i, lv) in levels.iter().enumerate() {
        let rates = match (&lv.errors, i.checked_sub(1).map(|j| &levels[j].errors)) {
            (Ok(cur), Some(Ok(prev))) => cur
                .iter()
                .zip(prev)
                .map(|(c, p)| (*c > 0.0 && *p > 0.0).then(|| (c / p).log2()))
                .collect(),
            (Ok(cur), _) => vec![None; cur.len()],
            (Err(_), _) => Vec::new(),
        };
        out.push(rates);
    }
    out
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<Report> {
    let start = Instant::now();
    let names = field_names(cfg);
    let mut columns = vec!["dt".to_string(), "dx".to_string()];
    for n in &names {
        columns.push(format!("err_{n}"));
        columns.push(format!("rate_{n}"));
    }
    let mut table = base_table(cfg, columns);
    let levels = run_levels(cfg)?;
    let rates = level_rates(&levels);
    let mut unstable = Vec::new();
    for (lv, rates) in levels.iter().zip(&rates) {
        let mut row = vec![Cell::full(lv.dt), Cell::full(lv.dx)];
        match &lv.errors {
            Ok(errs) => {
                for (e, r) in errs.iter().zip(rates) {
                    row.push(Cell::full(*e));
                    row.push(Cell::rate(*r));
                }
            }
            Err(step) => {
                row.extend(std::iter::repeat_n(Cell::Empty, 2 * names.len()));
                unstable.push(format!("level {} (dt = {}) at step {step}", lv.level, lv.dt));
            }
        }
        table.push(row);
    }
    table.metadata.insert("unstable_levels".into(), Value::from(unstable.clone()));
    table.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    Ok(Report { table, unstable })
}

fn energy_columns() -> Vec<String> {
    ["n", "t", "energy", "theta", "theta_minus_theta0", "delta_energy"].map(String::from).to_vec()
}

/// Energy history of one run at the configured stride.
pub fn run_longtime(cfg: &ExperimentConfig) -> Result<Report> {
    let start = Instant::now();
    let req = RunRequest {
        order: cfg.scheme_order(),
        dt: cfg.dt,
        nu: cfg.nu,
        t_final: cfg.t_final,
        energy_stride: Some(cfg.energy_stride),
        track_errors: false,
    };
    let summary = run_once(cfg, req)?;
    let monitor = summary.energy.expect("energy requested");
    let mut table = base_table(cfg, energy_columns());
    table.metadata.insert("steps".into(), Value::from(summary.spec.steps));
    table.metadata.insert("reference_energy".into(), Value::from(monitor.reference()));
    table.metadata.insert("max_theta".into(), Value::from(monitor.max_theta()));
    table.metadata.insert("max_drift".into(), Value::from(monitor.max_drift()));
    for r in monitor.records() {
        table.push(vec![
            Cell::Int(r.n as u64),
            Cell::full(r.t),
            Cell::full(r.energy),
            Cell::full(r.theta),
            Cell::full(r.theta_minus_theta0),
            Cell::full(r.delta_energy),
        ]);
    }
    table.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    Ok(Report { table, unstable: Vec::new() })
}

/// One run with both errors and energy diagnostics, summarized in one row.
pub fn run_simulate(cfg: &ExperimentConfig) -> Result<Report> {
    let start = Instant::now();
    let names = field_names(cfg);
    let mut columns = vec!["dt".to_string(), "dx".to_string(), "steps".to_string()];
    columns.extend(names.iter().map(|n| format!("err_{n}")));
    columns.extend(["final_energy", "max_theta", "max_drift"].map(String::from));
    let req = RunRequest {
        order: cfg.scheme_order(),
        dt: cfg.dt,
        nu: cfg.nu,
        t_final: cfg.t_final,
        energy_stride: Some(cfg.energy_stride),
        track_errors: true,
    };
    let summary = run_once(cfg, req)?;
    let monitor = summary.energy.expect("energy requested");
    let mut table = base_table(cfg, columns);
    table.metadata.insert("reference_energy".into(), Value::from(monitor.reference()));
    let mut row = vec![
        Cell::full(summary.spec.dt),
        Cell::full(summary.spec.mesh.h()),
        Cell::Int(summary.spec.steps as u64),
    ];
    row.extend(summary.errors.iter().map(|e| Cell::full(*e)));
    row.push(Cell::opt(monitor.records().last().map(|r| r.energy)));
    row.push(Cell::full(monitor.max_theta()));
    row.push(Cell::full(monitor.max_drift()));
    table.push(row);
    table.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    Ok(Report { table, unstable: Vec::new() })
}

/// One cell of the energy table.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyCell {
    pub scheme: SchemeOrder,
    pub nu: f64,
    pub dt: f64,
    /// `(max_theta, max_drift)` over all steps, or the step of blow-up.
    pub result: std::result::Result<(f64, f64), usize>,
}

pub fn energy_cells(cfg: &ExperimentConfig) -> Result<Vec<EnergyCell>> {
    let mut grid = Vec::new();
    for s in &cfg.table_schemes {
        let scheme = SchemeOrder::parse(s)?;
        for &nu in &cfg.table_nus {
            for &dt in &cfg.table_dts {
                grid.push((scheme, nu, dt));
            }
        }
    }
    let run = |&(scheme, nu, dt): &(SchemeOrder, f64, f64)| -> Result<EnergyCell> {
        let req = RunRequest {
            order: scheme,
            dt,
            nu,
            t_final: cfg.t_final,
            energy_stride: Some(1),
            track_errors: false,
        };
        let res = outcome(run_once(cfg, req))?;
        let result = res.map(|s| {
            let m = s.energy.expect("energy requested");
            (m.max_theta(), m.max_drift())
        });
        Ok(EnergyCell { scheme, nu, dt, result })
    };
    if cfg.parallel {
        grid.par_iter().map(run).collect()
    } else {
        grid.iter().map(run).collect()
    }
}

/// Max-over-n `Theta` for every (scheme, nu, dt) cell. `max_drift` is
/// `max |Theta^{n+1/2} - Theta^{1/2}|`, the conservation measure.
pub fn run_energy_table(cfg: &ExperimentConfig) -> Result<Report> {
    let start = Instant::now();
    let columns = ["scheme", "nu", "dt", "max_theta", "max_drift"].map(String::from).to_vec();
    let mut table = base_table(cfg, columns);
    let mut unstable = Vec::new();
    for c in energy_cells(cfg)? {
        let (theta, drift) = match c.result {
            Ok((t, d)) => (Cell::full(t), Cell::full(d)),
            Err(step) => {
                unstable.push(format!(
                    "scheme {} nu = {} dt = {} at step {step}",
                    c.scheme.label(),
                    c.nu,
                    c.dt
                ));
                (Cell::Empty, Cell::Empty)
            }
        };
        table.push(vec![
            Cell::Text(c.scheme.label().to_string()),
            Cell::full(c.nu),
            Cell::full(c.dt),
            theta,
            drift,
        ]);
    }
    table.metadata.insert("unstable_cells".into(), Value::from(unstable.clone()));
    table.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    Ok(Report { table, unstable })
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    match cfg.kind {
        ExperimentKind::Simulate => run_simulate(cfg),
        ExperimentKind::Converge => run_convergence(cfg),
        ExperimentKind::Longtime => run_longtime(cfg),
        ExperimentKind::EnergyTable => run_energy_table(cfg),
    }
}
