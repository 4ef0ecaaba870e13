//! Periodic staggered grids on `[0, L]^d` and the discrete `l2` products.
//!
//! Every axis carries `M` unique values. On a primal axis node `l` sits at
//! `l * h`; on a dual axis it sits at `(l + 1/2) * h`. The primal node
//! `l = M` is identified with `l = 0`.

use std::fmt;

use crate::error::{Error, Result};

/// Uniform periodic mesh on `[0, length]^dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshSpec {
    length: f64,
    cells: usize,
    dim: usize,
}

impl MeshSpec {
    /// Smallest admissible cell count: the fourth-order stencils reach two
    /// cells away and the periodic wrap must not alias.
    pub const MIN_CELLS: usize = 4;

    pub fn new(length: f64, cells: usize, dim: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::contract(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if cells < Self::MIN_CELLS {
            return Err(Error::contract(format!(
                "at least {} cells per axis are required, got {cells}",
                Self::MIN_CELLS
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::contract(format!("domain length must be positive, got {length}")));
        }
        Ok(Self { length, cells, dim })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Mesh step `h = L / M`.
    pub fn h(&self) -> f64 {
        self.length / self.cells as f64
    }

    /// Number of stored values of a field on this mesh, `M^d`.
    pub fn len(&self) -> usize {
        self.cells.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight `h^d` of one grid point.
    pub fn cell_measure(&self) -> f64 {
        self.h().powi(self.dim as i32)
    }

    /// Memory stride of `axis` in the flattened storage (axis 0 is contiguous).
    pub fn stride(&self, axis: usize) -> usize {
        self.cells.pow(axis as u32)
    }
}

/// Location of a field component along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Loc {
    Primal,
    Dual,
}

impl Loc {
    pub fn flipped(self) -> Self {
        match self {
            Loc::Primal => Loc::Dual,
            Loc::Dual => Loc::Primal,
        }
    }

    /// Offset of node `l` in units of `h`.
    fn offset(self) -> f64 {
        match self {
            Loc::Primal => 0.0,
            Loc::Dual => 0.5,
        }
    }
}

/// Per-axis primal/dual tags of a field component.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stagger {
    dim: usize,
    locs: [Loc; 3],
}

impl Stagger {
    pub fn new(locs: &[Loc]) -> Result<Self> {
        if !(1..=3).contains(&locs.len()) {
            return Err(Error::contract(format!(
                "a stagger needs 1 to 3 axis tags, got {}",
                locs.len()
            )));
        }
        let mut all = [Loc::Primal; 3];
        all[..locs.len()].copy_from_slice(locs);
        Ok(Self { dim: locs.len(), locs: all })
    }

    /// All axes primal.
    pub fn primal(dim: usize) -> Self {
        Self { dim: dim.clamp(1, 3), locs: [Loc::Primal; 3] }
    }

    /// All axes dual.
    pub fn dual(dim: usize) -> Self {
        let dim = dim.clamp(1, 3);
        // Unused axes stay primal so that equality only sees the active tags.
        let mut locs = [Loc::Primal; 3];
        locs[..dim].fill(Loc::Dual);
        Self { dim, locs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn loc(&self, axis: usize) -> Loc {
        self.locs[axis]
    }

    pub fn locs(&self) -> &[Loc] {
        &self.locs[..self.dim]
    }

    /// Same tags with `axis` switched between primal and dual.
    pub fn flip(&self, axis: usize) -> Self {
        let mut out = *self;
        out.locs[axis] = out.locs[axis].flipped();
        out
    }
}

impl fmt::Debug for Stagger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tags: String = self
            .locs()
            .iter()
            .map(|l| match l {
                Loc::Primal => 'p',
                Loc::Dual => 'd',
            })
            .collect();
        write!(f, "Stagger({tags})")
    }
}

/// Values of one field component on its staggered grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    mesh: MeshSpec,
    stagger: Stagger,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(mesh: MeshSpec, stagger: Stagger) -> Result<Self> {
        Self::from_values(mesh, stagger, vec![0.0; mesh.len()])
    }

    pub fn from_values(mesh: MeshSpec, stagger: Stagger, values: Vec<f64>) -> Result<Self> {
        if stagger.dim() != mesh.dim() {
            return Err(Error::contract(format!(
                "stagger {stagger:?} has {} tags but the mesh is {}-dimensional",
                stagger.dim(),
                mesh.dim()
            )));
        }
        if values.len() != mesh.len() {
            return Err(Error::contract(format!(
                "expected {} values, got {}",
                mesh.len(),
                values.len()
            )));
        }
        Ok(Self { mesh, stagger, values })
    }

    /// Samples `f` at the staggered node coordinates. The closure receives
    /// one coordinate per axis.
    pub fn sample<F>(mesh: MeshSpec, stagger: Stagger, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        let h = mesh.h();
        let m = mesh.cells();
        let d = mesh.dim();
        let mut values = Vec::with_capacity(mesh.len());
        let mut idx = [0usize; 3];
        let mut x = [0.0f64; 3];
        for _ in 0..mesh.len() {
            for a in 0..d {
                x[a] = (idx[a] as f64 + stagger.loc(a).offset()) * h;
            }
            values.push(f(&x[..d]));
            for i in idx.iter_mut().take(d) {
                *i += 1;
                if *i < m {
                    break;
                }
                *i = 0;
            }
        }
        Self::from_values(mesh, stagger, values)
    }

    pub fn mesh(&self) -> &MeshSpec {
        &self.mesh
    }

    pub fn stagger(&self) -> Stagger {
        self.stagger
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at the multi-index `idx` (one entry per axis, wrapped modulo `M`).
    pub fn at(&self, idx: &[isize]) -> f64 {
        let m = self.mesh.cells() as isize;
        let mut lin = 0usize;
        for (a, &i) in idx.iter().enumerate().take(self.mesh.dim()) {
            lin += (i.rem_euclid(m) as usize) * self.mesh.stride(a);
        }
        self.values[lin]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.mesh != other.mesh {
            return Err(Error::contract(format!(
                "mesh mismatch: {:?} vs {:?}",
                self.mesh, other.mesh
            )));
        }
        if self.stagger != other.stagger {
            return Err(Error::contract(format!(
                "stagger mismatch: {:?} vs {:?}",
                self.stagger, other.stagger
            )));
        }
        Ok(())
    }

    /// `h^d * sum_l u_l v_l`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(self.mesh.cell_measure() * s)
    }

    /// Square root of the discrete quadratic form `h^d * sum_l |u_l|^2`.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn norm_squared(&self) -> f64 {
        let s: f64 = self.values.iter().map(|a| a * a).sum();
        self.mesh.cell_measure() * s
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += alpha * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, alpha: f64) {
        for a in &mut self.values {
            *a *= alpha;
        }
    }

    pub fn scaled(mut self, alpha: f64) -> Self {
        self.scale(alpha);
        self
    }

    /// `self - other` as a new grid function.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }
}
