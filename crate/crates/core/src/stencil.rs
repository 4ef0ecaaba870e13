//! Staggered difference operators and discrete curls with periodic wrap.
//!
//! `F` maps values that are primal along an axis to the dual positions of
//! that axis, `F*` maps dual back to primal. Under periodicity `-F*` is the
//! `l2` adjoint of `F`, which is what makes every quadratic energy built from
//! these operators exactly conserved by the leapfrog schemes.
//!
//! All operators are matrix-free: they are evaluated as stencils on the
//! stored values and never assembled.

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Loc, Stagger};

/// Accuracy of a staggered first-derivative stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiffOrder {
    Second,
    Fourth,
}

impl DiffOrder {
    pub fn value(self) -> usize {
        match self {
            DiffOrder::Second => 2,
            DiffOrder::Fourth => 4,
        }
    }

    pub fn from_value(order: usize) -> Result<Self> {
        match order {
            2 => Ok(DiffOrder::Second),
            4 => Ok(DiffOrder::Fourth),
            other => Err(Error::contract(format!("difference order must be 2 or 4, got {other}"))),
        }
    }
}

/// Which family of operators a curl is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurlKind {
    /// Built from `F` (primal to dual along the differentiated axis).
    Forward,
    /// Built from `F*` (dual to primal).
    Dual,
}

impl CurlKind {
    fn input_loc(self) -> Loc {
        match self {
            CurlKind::Forward => Loc::Primal,
            CurlKind::Dual => Loc::Dual,
        }
    }

    /// Storage offsets `(p1, q1, p2, q2)` for output node `l`:
    /// `out_l = (27 (u[l+p1] - u[l+q1]) - (u[l+p2] - u[l+q2])) / (24 h)`.
    /// A dual value `u_{l+1/2}` is stored at index `l`.
    fn offsets(self) -> [isize; 4] {
        match self {
            CurlKind::Forward => [1, 0, 2, -1],
            CurlKind::Dual => [0, -1, 1, -2],
        }
    }
}

/// Stagger produced by differentiating a field with stagger `st` along `axis`.
pub fn diff_stagger(st: Stagger, axis: usize, kind: CurlKind) -> Result<Stagger> {
    if axis >= st.dim() {
        return Err(Error::contract(format!(
            "axis {axis} out of range for a {}-dimensional field",
            st.dim()
        )));
    }
    if st.loc(axis) != kind.input_loc() {
        return Err(Error::contract(format!(
            "{kind:?} difference along axis {axis} needs a {:?} input, got {st:?}",
            kind.input_loc()
        )));
    }
    Ok(st.flip(axis))
}

/// Staggered difference along `axis`, of either kind.
pub fn diff(u: &GridFunction, axis: usize, kind: CurlKind, order: DiffOrder) -> Result<GridFunction> {
    let out_stagger = diff_stagger(u.stagger(), axis, kind)?;
    let mesh = *u.mesh();
    let m = mesh.cells();
    let stride = mesh.stride(axis);
    let src = u.values();
    let mut dst = vec![0.0; src.len()];

    let wrap = |off: isize| -> Vec<usize> {
        (0..m as isize)
            .map(|l| (l + off).rem_euclid(m as isize) as usize * stride)
            .collect()
    };
    let [p1, q1, p2, q2] = kind.offsets();
    let (ip1, iq1) = (wrap(p1), wrap(q1));
    let h = mesh.h();

    let block = m * stride;
    match order {
        DiffOrder::Second => {
            let inv_h = 1.0 / h;
            for outer in (0..src.len()).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for l in 0..m {
                        dst[base + l * stride] = (src[base + ip1[l]] - src[base + iq1[l]]) * inv_h;
                    }
                }
            }
        }
        DiffOrder::Fourth => {
            let (ip2, iq2) = (wrap(p2), wrap(q2));
            let denom = 24.0 * h;
            for outer in (0..src.len()).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for l in 0..m {
                        let near = src[base + ip1[l]] - src[base + iq1[l]];
                        let far = src[base + ip2[l]] - src[base + iq2[l]];
                        dst[base + l * stride] = (27.0 * near - far) / denom;
                    }
                }
            }
        }
    }
    GridFunction::from_values(mesh, out_stagger, dst)
}

/// `F_{h,axis}`: primal along `axis` to dual along `axis`.
pub fn diff_fwd(u: &GridFunction, axis: usize, order: DiffOrder) -> Result<GridFunction> {
    diff(u, axis, CurlKind::Forward, order)
}

/// `F*_{h,axis}`: dual along `axis` to primal along `axis`.
pub fn diff_dual(u: &GridFunction, axis: usize, order: DiffOrder) -> Result<GridFunction> {
    diff(u, axis, CurlKind::Dual, order)
}

fn require_dim(fields: &[&GridFunction], dim: usize, what: &str) -> Result<()> {
    for f in fields {
        if f.mesh().dim() != dim {
            return Err(Error::contract(format!(
                "{what} needs {dim}-dimensional fields, got {}",
                f.mesh().dim()
            )));
        }
    }
    Ok(())
}

fn difference(a: GridFunction, b: &GridFunction) -> Result<GridFunction> {
    let mut a = a;
    a.axpy(-1.0, b)?;
    Ok(a)
}

/// 2D scalar curl `F_x v_y - F_y v_x`.
///
/// With `CurlKind::Forward` and the TE layout (`v_x` on dual-x/primal-y,
/// `v_y` on primal-x/dual-y) the result lands on the dual-dual grid.
pub fn curl_2d_scalar(
    vx: &GridFunction,
    vy: &GridFunction,
    kind: CurlKind,
    order: DiffOrder,
) -> Result<GridFunction> {
    require_dim(&[vx, vy], 2, "2D scalar curl")?;
    let dx_vy = diff(vy, 0, kind, order)?;
    let dy_vx = diff(vx, 1, kind, order)?;
    difference(dx_vy, &dy_vx)
}

/// 2D vector curl `(F_y v, -F_x v)`.
///
/// With `CurlKind::Dual` and `v` on the dual-dual grid, the components land
/// on the TE grids of `E_x` and `E_y` respectively.
pub fn curl_2d_vector(
    v: &GridFunction,
    kind: CurlKind,
    order: DiffOrder,
) -> Result<[GridFunction; 2]> {
    require_dim(&[v], 2, "2D vector curl")?;
    let first = diff(v, 1, kind, order)?;
    let second = diff(v, 0, kind, order)?.scaled(-1.0);
    Ok([first, second])
}

/// 3D curl `(F_y v_z - F_z v_y, F_z v_x - F_x v_z, F_x v_y - F_y v_x)`.
///
/// The forward variant takes edge-staggered components (component `m` dual
/// along `m`) to face-staggered ones; the dual variant goes back.
pub fn curl_3d(v: &[GridFunction; 3], kind: CurlKind, order: DiffOrder) -> Result<[GridFunction; 3]> {
    require_dim(&[&v[0], &v[1], &v[2]], 3, "3D curl")?;
    let [x, y, z] = v;
    let cx = difference(diff(z, 1, kind, order)?, &diff(y, 2, kind, order)?)?;
    let cy = difference(diff(x, 2, kind, order)?, &diff(z, 0, kind, order)?)?;
    let cz = difference(diff(y, 0, kind, order)?, &diff(x, 1, kind, order)?)?;
    Ok([cx, cy, cz])
}

/// One application in an operator chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpStep {
    /// Scalar field to scalar field.
    Diff { axis: usize, kind: CurlKind, order: DiffOrder },
    /// 2D vector to scalar.
    Curl2dScalar { kind: CurlKind, order: DiffOrder },
    /// Scalar to 2D vector.
    Curl2dVector { kind: CurlKind, order: DiffOrder },
    /// 3D vector to 3D vector.
    Curl3d { kind: CurlKind, order: DiffOrder },
}

/// A stagger-checked composition of difference and curl operators, applied
/// left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct OpChain {
    input: Vec<Stagger>,
    output: Vec<Stagger>,
    steps: Vec<OpStep>,
}

impl OpChain {
    /// Empty chain (the identity) for bundles with the given component layout.
    pub fn new(input: Vec<Stagger>) -> Result<Self> {
        if input.is_empty() {
            return Err(Error::contract("an operator chain needs at least one input component"));
        }
        let dim = input[0].dim();
        if input.iter().any(|s| s.dim() != dim) {
            return Err(Error::contract("chain input components disagree on dimension"));
        }
        Ok(Self { output: input.clone(), input, steps: Vec::new() })
    }

    /// Appends `step`, failing if its stagger requirements do not match the
    /// current output layout.
    pub fn then(mut self, step: OpStep) -> Result<Self> {
        self.output = Self::layout_after(&self.output, step)?;
        self.steps.push(step);
        Ok(self)
    }

    pub fn steps(&self) -> &[OpStep] {
        &self.steps
    }

    pub fn input_layout(&self) -> &[Stagger] {
        &self.input
    }

    pub fn output_layout(&self) -> &[Stagger] {
        &self.output
    }

    fn layout_after(layout: &[Stagger], step: OpStep) -> Result<Vec<Stagger>> {
        let dim = layout[0].dim();
        let arity = |n: usize, d: usize| -> Result<()> {
            if layout.len() != n || dim != d {
                return Err(Error::contract(format!(
                    "{step:?} expects {n} component(s) in {d}D, chain provides {} in {dim}D",
                    layout.len()
                )));
            }
            Ok(())
        };
        let same = |a: Stagger, b: Stagger| -> Result<Stagger> {
            if a != b {
                return Err(Error::contract(format!(
                    "{step:?} combines terms on different grids ({a:?} vs {b:?})"
                )));
            }
            Ok(a)
        };
        match step {
            OpStep::Diff { axis, kind, .. } => {
                if layout.len() != 1 {
                    return Err(Error::contract(format!(
                        "{step:?} expects a scalar field, chain provides {} components",
                        layout.len()
                    )));
                }
                Ok(vec![diff_stagger(layout[0], axis, kind)?])
            }
            OpStep::Curl2dScalar { kind, .. } => {
                arity(2, 2)?;
                let a = diff_stagger(layout[1], 0, kind)?;
                let b = diff_stagger(layout[0], 1, kind)?;
                Ok(vec![same(a, b)?])
            }
            OpStep::Curl2dVector { kind, .. } => {
                arity(1, 2)?;
                Ok(vec![diff_stagger(layout[0], 1, kind)?, diff_stagger(layout[0], 0, kind)?])
            }
            OpStep::Curl3d { kind, .. } => {
                arity(3, 3)?;
                let d = |c: usize, axis: usize| diff_stagger(layout[c], axis, kind);
                Ok(vec![
                    same(d(2, 1)?, d(1, 2)?)?,
                    same(d(0, 2)?, d(2, 0)?)?,
                    same(d(1, 0)?, d(0, 1)?)?,
                ])
            }
        }
    }

    /// Applies the chain to a bundle laid out as `input_layout()`.
    pub fn apply(&self, input: &[GridFunction]) -> Result<Vec<GridFunction>> {
        let layout: Vec<Stagger> = input.iter().map(|f| f.stagger()).collect();
        if layout != self.input {
            return Err(Error::contract(format!(
                "bundle layout {layout:?} does not match chain input {:?}",
                self.input
            )));
        }
        let mut bundle: Vec<GridFunction> = input.to_vec();
        for step in &self.steps {
            bundle = match *step {
                OpStep::Diff { axis, kind, order } => vec![diff(&bundle[0], axis, kind, order)?],
                OpStep::Curl2dScalar { kind, order } => {
                    vec![curl_2d_scalar(&bundle[0], &bundle[1], kind, order)?]
                }
                OpStep::Curl2dVector { kind, order } => {
                    curl_2d_vector(&bundle[0], kind, order)?.into()
                }
                OpStep::Curl3d { kind, order } => {
                    let [x, y, z]: [GridFunction; 3] = bundle
                        .try_into()
                        .map_err(|_| Error::contract("3D curl needs three components"))?;
                    curl_3d(&[x, y, z], kind, order)?.into()
                }
            };
        }
        Ok(bundle)
    }
}
