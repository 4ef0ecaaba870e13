//! Coupled field bundles `W = (primary, auxiliary)` and their grid layouts.
//!
//! The primary field is `E` (or `H`), one component per in-plane direction;
//! the auxiliary field is the scalar current density `K` (or `J`).

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Loc, MeshSpec, Stagger};

/// Which decoupled second-order subsystem is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldPair {
    /// Electric field with magnetization current density.
    EK,
    /// Magnetic field with polarization current density (1D only).
    HJ,
}

impl FieldPair {
    pub fn label(self) -> &'static str {
        match self {
            FieldPair::EK => "ek",
            FieldPair::HJ => "hj",
        }
    }
}

/// Component names used in diagnostics and output columns.
pub fn component_names(dim: usize, pair: FieldPair) -> Vec<&'static str> {
    match (dim, pair) {
        (1, FieldPair::EK) => vec!["E", "K"],
        (1, FieldPair::HJ) => vec!["H", "J"],
        _ => vec!["Ex", "Ey", "K"],
    }
}

/// Staggers of the primary components and of the auxiliary field.
///
/// 1D: primary on the primal grid, auxiliary on the dual grid.
/// 2D TE: `E_x` on (dual, primal), `E_y` on (primal, dual), `K` on (dual, dual).
pub fn layout(dim: usize) -> Result<(Vec<Stagger>, Stagger)> {
    match dim {
        1 => Ok((vec![Stagger::primal(1)], Stagger::dual(1))),
        2 => Ok((
            vec![Stagger::new(&[Loc::Dual, Loc::Primal])?, Stagger::new(&[Loc::Primal, Loc::Dual])?],
            Stagger::dual(2),
        )),
        d => Err(Error::contract(format!("time stepping supports 1D and 2D, got {d}D"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldBundle {
    pub primary: Vec<GridFunction>,
    pub aux: GridFunction,
}

impl FieldBundle {
    pub fn new(primary: Vec<GridFunction>, aux: GridFunction) -> Result<Self> {
        let dim = aux.mesh().dim();
        let (p_layout, a_layout) = layout(dim)?;
        let got: Vec<Stagger> = primary.iter().map(|f| f.stagger()).collect();
        if got != p_layout || aux.stagger() != a_layout {
            return Err(Error::contract(format!(
                "bundle layout ({got:?}, {:?}) differs from the {dim}D layout ({p_layout:?}, {a_layout:?})",
                aux.stagger()
            )));
        }
        if primary.iter().any(|f| f.mesh() != aux.mesh()) {
            return Err(Error::contract("bundle components live on different meshes"));
        }
        Ok(Self { primary, aux })
    }

    pub fn zeros(mesh: MeshSpec) -> Result<Self> {
        let (p_layout, a_layout) = layout(mesh.dim())?;
        let primary = p_layout
            .into_iter()
            .map(|s| GridFunction::zeros(mesh, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(primary, GridFunction::zeros(mesh, a_layout)?)
    }

    pub fn mesh(&self) -> &MeshSpec {
        self.aux.mesh()
    }

    /// All components in output order: primary components, then auxiliary.
    pub fn components(&self) -> impl Iterator<Item = &GridFunction> {
        self.primary.iter().chain(std::iter::once(&self.aux))
    }

    fn components_mut(&mut self) -> impl Iterator<Item = &mut GridFunction> {
        self.primary.iter_mut().chain(std::iter::once(&mut self.aux))
    }

    /// `<U, V>_h`: the sum of the component inner products.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let mut acc = 0.0;
        for (a, b) in self.components().zip(other.components()) {
            acc += a.inner(b)?;
        }
        Ok(acc)
    }

    /// Inner product weighted per block: `wp <U_p, V_p> + wa <U_a, V_a>`.
    pub fn weighted_inner(&self, other: &Self, wp: f64, wa: f64) -> Result<f64> {
        self.check_compatible(other)?;
        let mut p = 0.0;
        for (a, b) in self.primary.iter().zip(&other.primary) {
            p += a.inner(b)?;
        }
        Ok(wp * p + wa * self.aux.inner(&other.aux)?)
    }

    pub fn axpy(&mut self, alpha: f64, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.components_mut().zip(other.components()) {
            a.axpy(alpha, b)?;
        }
        Ok(())
    }

    pub fn scale(&mut self, alpha: f64) {
        for a in self.components_mut() {
            a.scale(alpha);
        }
    }

    /// Scales the primary block by `wp` and the auxiliary field by `wa`.
    pub fn scale_blocks(&mut self, wp: f64, wa: f64) {
        for a in &mut self.primary {
            a.scale(wp);
        }
        self.aux.scale(wa);
    }

    pub fn is_finite(&self) -> bool {
        self.components().all(|c| c.is_finite())
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.primary.len() != other.primary.len() {
            return Err(Error::contract("bundles have different numbers of components"));
        }
        for (a, b) in self.components().zip(other.components()) {
            a.check_compatible(b)?;
        }
        Ok(())
    }
}
