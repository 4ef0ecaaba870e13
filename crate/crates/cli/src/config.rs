//! Experiment configuration: a flat JSON document, overridden by CLI flags,
//! resolved against per-dimension defaults.

use std::path::{Path, PathBuf};

use drudefd_core::drude::{Manufactured, Manufactured1D, Manufactured2D};
use drudefd_core::{FieldPair, SchemeOrder};
use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    Converge,
    Longtime,
    EnergyTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// How the second time level is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartMode {
    /// Sample the manufactured solution at `t = dt`.
    Exact,
    /// Taylor start from the data and time derivative at `t = 0`.
    Taylor,
}

/// Every key is optional; absent keys take the defaults of the resolved
/// dimension. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scheme: Option<String>,
    pub dim: Option<usize>,
    pub pair: Option<String>,
    pub eps0: Option<f64>,
    pub mu0: Option<f64>,
    /// Electric plasma frequency; prescribed for the (E,K) pair.
    pub omega_pe: Option<f64>,
    /// Magnetic plasma frequency; prescribed for the (H,J) pair.
    pub omega_pm: Option<f64>,
    /// Wavenumbers, one per dimension.
    pub k: Option<Vec<i32>>,
    pub length: Option<f64>,
    pub nu: Option<f64>,
    /// Coarsest time step.
    pub dt: Option<f64>,
    pub levels: Option<usize>,
    #[serde(rename = "T")]
    pub t_final: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub energy_stride: Option<usize>,
    pub allow_unstable: Option<bool>,
    pub startup: Option<StartMode>,
    /// Run convergence levels on a worker pool.
    pub parallel: Option<bool>,
    /// Energy-table grid.
    pub table_schemes: Option<Vec<String>>,
    pub table_nus: Option<Vec<f64>>,
    pub table_dts: Option<Vec<f64>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|e| match e {
            HarnessError::Config(msg) => HarnessError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Keys set in `other` replace those in `self`.
    pub fn overridden_by(self, other: ConfigFile) -> ConfigFile {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigFile { $($f: other.$f.or(self.$f)),* } };
        }
        pick!(
            scheme, dim, pair, eps0, mu0, omega_pe, omega_pm, k, length, nu, dt, levels, t_final,
            out, format, energy_stride, allow_unstable, startup, parallel, table_schemes,
            table_nus, table_dts
        )
    }
}

/// A fully resolved experiment, echoed verbatim into output headers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub scheme: String,
    pub dim: usize,
    pub pair: String,
    pub eps0: f64,
    pub mu0: f64,
    pub omega_pe: f64,
    pub omega_pm: f64,
    /// Temporal frequency of the manufactured solution (`sin(omega pi t)`).
    pub omega: f64,
    pub c: f64,
    pub k: Vec<i32>,
    pub length: f64,
    pub nu: f64,
    pub dt: f64,
    /// `c dt / nu` at the coarsest level.
    pub dx: f64,
    pub levels: usize,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub energy_stride: usize,
    pub allow_unstable: bool,
    pub startup: StartMode,
    pub parallel: bool,
    pub table_schemes: Vec<String>,
    pub table_nus: Vec<f64>,
    pub table_dts: Vec<f64>,
}

fn bad(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(bad(format!("{name} must be positive and finite, got {v}")))
    }
}

fn parse_pair(s: &str) -> Result<FieldPair> {
    match s.to_ascii_lowercase().as_str() {
        "ek" => Ok(FieldPair::EK),
        "hj" => Ok(FieldPair::HJ),
        _ => Err(bad(format!("pair: expected \"ek\" or \"hj\", got {s:?}"))),
    }
}

fn parse_scheme(name: &str, s: &str) -> Result<SchemeOrder> {
    SchemeOrder::parse(s).map_err(|_| bad(format!("{name}: expected 22, 24 or 44, got {s:?}")))
}

/// Courant numbers at or above 1 violate the stability bound of the
/// energy estimate and are rejected unless explicitly allowed.
fn check_courant(name: &str, nu: f64, allow_unstable: bool) -> Result<()> {
    positive(name, nu)?;
    if nu >= 1.0 && !allow_unstable {
        return Err(bad(format!(
            "{name} = {nu}: the discrete energy is only guaranteed nonnegative (and the schemes \
             stable) for c dt / h < 1; pass --allow-unstable to run anyway"
        )));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn resolve(kind: ExperimentKind, file: ConfigFile) -> Result<Self> {
        let dim = file.dim.unwrap_or(1);
        if !(1..=2).contains(&dim) {
            return Err(bad(format!("dim: expected 1 or 2, got {dim}")));
        }
        let pair = parse_pair(file.pair.as_deref().unwrap_or("ek"))?;
        if pair == FieldPair::HJ && dim != 1 {
            return Err(bad("pair: the (H,J) pair is only available with dim = 1"));
        }
        let scheme = parse_scheme("scheme", file.scheme.as_deref().unwrap_or("44"))?;
        let eps0 = positive("eps0", file.eps0.unwrap_or(5.0))?;
        let mu0 = positive("mu0", file.mu0.unwrap_or(0.2))?;
        let k = file.k.unwrap_or_else(|| vec![2; dim]);
        if k.len() != dim {
            return Err(bad(format!("k: expected {dim} wavenumber(s), got {}", k.len())));
        }
        let length = positive("length", file.length.unwrap_or(1.0))?;
        let allow_unstable = file.allow_unstable.unwrap_or(false);
        let nu = file.nu.unwrap_or(0.2);
        check_courant("nu", nu, allow_unstable)?;
        let dt = positive("dt", file.dt.unwrap_or(0.02))?;
        let levels = file.levels.unwrap_or(6);
        if levels == 0 {
            return Err(bad("levels must be at least 1"));
        }
        let t_final = positive("T", file.t_final.unwrap_or(1.0))?;
        let energy_stride = file.energy_stride.unwrap_or(if dim == 1 { 1 } else { 10 });
        if energy_stride == 0 {
            return Err(bad("energy_stride must be at least 1"));
        }

        let default_plasma = if dim == 1 { 26.63199 } else { 10.0 };
        let (given, forbidden) = match pair {
            FieldPair::EK => (file.omega_pe, file.omega_pm.map(|_| "omega_pm")),
            FieldPair::HJ => (file.omega_pm, file.omega_pe.map(|_| "omega_pe")),
        };
        if let Some(name) = forbidden {
            return Err(bad(format!(
                "{name} is derived from the other plasma frequency for the {} pair",
                pair.label()
            )));
        }
        let plasma = positive("plasma frequency", given.unwrap_or(default_plasma))?;
        let sol = match (dim, pair) {
            (1, FieldPair::EK) => Manufactured::OneD(Manufactured1D::ek(eps0, mu0, k[0], plasma)?),
            (1, FieldPair::HJ) => Manufactured::OneD(Manufactured1D::hj(eps0, mu0, k[0], plasma)?),
            _ => Manufactured::TwoD(Manufactured2D::te(eps0, mu0, [k[0], k[1]], plasma)?),
        };
        let p = *sol.params();

        let table_schemes = file
            .table_schemes
            .unwrap_or_else(|| SchemeOrder::ALL.iter().map(|s| s.label().to_string()).collect());
        for s in &table_schemes {
            parse_scheme("table_schemes", s)?;
        }
        let table_nus = file.table_nus.unwrap_or_else(|| vec![0.2, 0.5, 0.8]);
        for &v in &table_nus {
            check_courant("table_nus", v, allow_unstable)?;
        }
        let table_dts = file.table_dts.unwrap_or_else(|| vec![0.02, 0.01]);
        for &v in &table_dts {
            positive("table_dts", v)?;
        }

        Ok(Self {
            kind,
            scheme: scheme.label().to_string(),
            dim,
            pair: pair.label().to_string(),
            eps0,
            mu0,
            omega_pe: p.omega_pe,
            omega_pm: p.omega_pm,
            omega: sol.omega(),
            c: p.c(),
            k,
            length,
            nu,
            dt,
            dx: p.c() * dt / nu,
            levels,
            t_final,
            format: file.format.unwrap_or(OutputFormat::Csv),
            out: file.out,
            energy_stride,
            allow_unstable,
            startup: file.startup.unwrap_or(StartMode::Exact),
            parallel: file.parallel.unwrap_or(true),
            table_schemes,
            table_nus,
            table_dts,
        })
    }

    pub fn scheme_order(&self) -> SchemeOrder {
        SchemeOrder::parse(&self.scheme).expect("validated on resolve")
    }

    pub fn field_pair(&self) -> FieldPair {
        parse_pair(&self.pair).expect("validated on resolve")
    }

    /// The manufactured solution for the resolved parameters.
    pub fn solution(&self) -> Manufactured {
        let k = &self.k;
        let sol = match (self.dim, self.field_pair()) {
            (1, FieldPair::EK) => Manufactured1D::ek(self.eps0, self.mu0, k[0], self.omega_pe).map(Manufactured::OneD),
            (1, FieldPair::HJ) => Manufactured1D::hj(self.eps0, self.mu0, k[0], self.omega_pm).map(Manufactured::OneD),
            _ => Manufactured2D::te(self.eps0, self.mu0, [k[0], k[1]], self.omega_pe).map(Manufactured::TwoD),
        };
        sol.expect("validated on resolve")
    }
}
