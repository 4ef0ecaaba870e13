//! Three-level leapfrog integration of the second-order Drude systems.
//!
//! All three schemes share the matrix form
//!
//! ```text
//! P dtt W^n + A1 W^n - kappa (dt^2 c^2 / 12) A2 W^n = 0,   W = (primary, aux)
//! ```
//!
//! with `P = diag(1/c^2, 1/wb^2)`, `kappa = 1` for the (4,4) scheme and
//! `kappa = 0` for (2,4) and (2,2). Writing `C` for the discrete curl from
//! the primary to the auxiliary grid and `C'` for its `l2` adjoint,
//!
//! ```text
//! A1 = [ C'C + wa^2/c^2    C' ]        A2 = A1 P^-1 A1 / c^2  (order-2 curls)
//!      [ C                 1  ]
//! ```
//!
//! In 1D (E,K) `C = F` and `C' = -F*`; in 1D (H,J) `C = -F`; in 2D TE `C` is
//! the scalar curl and `C'` the dual vector curl. `wa`/`wb` are the plasma
//! frequencies of the primary/auxiliary field.

use crate::drude::{Manufactured, PhysParams};
use crate::error::{Error, Result};
use crate::fields::{FieldBundle, FieldPair};
use crate::grid::{GridFunction, MeshSpec};
use crate::stencil::{curl_2d_scalar, curl_2d_vector, diff_dual, diff_fwd, CurlKind, DiffOrder};

/// Time/space order pair of a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeOrder {
    S22,
    S24,
    S44,
}

impl SchemeOrder {
    pub const ALL: [SchemeOrder; 3] = [SchemeOrder::S44, SchemeOrder::S24, SchemeOrder::S22];

    pub fn label(self) -> &'static str {
        match self {
            SchemeOrder::S22 => "22",
            SchemeOrder::S24 => "24",
            SchemeOrder::S44 => "44",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().trim_start_matches('(').trim_end_matches(')').replace(',', "").as_str() {
            "22" => Ok(SchemeOrder::S22),
            "24" => Ok(SchemeOrder::S24),
            "44" => Ok(SchemeOrder::S44),
            _ => Err(Error::contract(format!("unknown scheme {s:?}; expected 22, 24 or 44"))),
        }
    }

    pub fn space_order(self) -> DiffOrder {
        match self {
            SchemeOrder::S22 => DiffOrder::Second,
            SchemeOrder::S24 | SchemeOrder::S44 => DiffOrder::Fourth,
        }
    }

    pub fn time_order(self) -> usize {
        match self {
            SchemeOrder::S44 => 4,
            _ => 2,
        }
    }
}

/// A fully resolved discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeSpec {
    pub order: SchemeOrder,
    pub pair: FieldPair,
    pub mesh: MeshSpec,
    pub dt: f64,
    /// Courant number `c dt / h` as realized on `mesh`.
    pub nu: f64,
    pub t_final: f64,
    pub steps: usize,
}

impl SchemeSpec {
    pub fn new(
        order: SchemeOrder,
        pair: FieldPair,
        mesh: MeshSpec,
        dt: f64,
        t_final: f64,
        c: f64,
    ) -> Result<Self> {
        if pair == FieldPair::HJ && mesh.dim() != 1 {
            return Err(Error::contract("the (H,J) pair is only available in 1D"));
        }
        if mesh.dim() > 2 {
            return Err(Error::contract("time stepping is available in 1D and 2D only"));
        }
        if !(dt.is_finite() && dt > 0.0) || !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::contract(format!(
                "dt and T must be positive, got dt = {dt}, T = {t_final}"
            )));
        }
        let steps = (t_final / dt).round();
        if steps < 1.0 || (steps * dt - t_final).abs() > 1e-12 * t_final {
            return Err(Error::contract(format!(
                "T = {t_final} is not an integer multiple of dt = {dt}"
            )));
        }
        Ok(Self { order, pair, mesh, dt, nu: c * dt / mesh.h(), t_final, steps: steps as usize })
    }

    /// Builds the mesh from `h = c dt / nu`, rounding the cell count to the
    /// nearest integer; `nu` is then recomputed from the realized mesh.
    #[allow(clippy::too_many_arguments)]
    pub fn from_courant(
        order: SchemeOrder,
        pair: FieldPair,
        dim: usize,
        length: f64,
        dt: f64,
        nu: f64,
        t_final: f64,
        c: f64,
    ) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::contract(format!("Courant number must be positive, got {nu}")));
        }
        let cells = (length * nu / (c * dt)).round();
        if !cells.is_finite() || cells < MeshSpec::MIN_CELLS as f64 {
            return Err(Error::contract(format!(
                "dt = {dt} with nu = {nu} gives {cells} cells on a domain of length {length}"
            )));
        }
        let mesh = MeshSpec::new(length, cells as usize, dim)?;
        Self::new(order, pair, mesh, dt, t_final, c)
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }
}

/// The two most recent time levels.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    /// `W^{n-1}`
    pub prev: FieldBundle,
    /// `W^n`
    pub curr: FieldBundle,
    pub n: usize,
}

impl StatePair {
    /// Swaps the two levels, so that stepping runs the recurrence backwards.
    pub fn reversed(self) -> Self {
        Self { prev: self.curr, curr: self.prev, n: self.n }
    }
}

/// Initial data for a general (Taylor) start.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub w0: FieldBundle,
    /// First time derivative at `t = 0`.
    pub v0: Option<FieldBundle>,
}

/// How the second level `W^1` of the three-level scheme is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum StartUp {
    /// Sample the manufactured solution at `t = 0` and `t = dt`.
    Exact(Manufactured),
    /// Taylor expansion in time with time derivatives replaced by the
    /// discrete spatial operators; degree 4 for the (4,4) scheme, degree 2
    /// otherwise.
    Taylor(InitialData),
}

impl StartUp {
    pub fn taylor_from(sol: &Manufactured, mesh: MeshSpec) -> Result<Self> {
        Ok(StartUp::Taylor(InitialData {
            w0: sol.exact_state(mesh, 0.0)?,
            v0: Some(sol.exact_rate(mesh, 0.0)?),
        }))
    }
}

#[derive(Debug, Clone)]
pub struct Stepper {
    spec: SchemeSpec,
    params: PhysParams,
    c2: f64,
    wa2: f64,
    wb2: f64,
    correction: f64,
}

impl Stepper {
    pub fn new(spec: SchemeSpec, params: PhysParams) -> Result<Self> {
        if spec.pair == FieldPair::HJ && spec.dim() != 1 {
            return Err(Error::contract("the (H,J) pair is only available in 1D"));
        }
        let (wa, wb) = params.pair_frequencies(spec.pair);
        if wb <= 0.0 {
            return Err(Error::domain("the auxiliary plasma frequency must be positive"));
        }
        let correction = if spec.order == SchemeOrder::S44 { 1.0 } else { 0.0 };
        Ok(Self {
            spec,
            params,
            c2: params.c().powi(2),
            wa2: wa * wa,
            wb2: wb * wb,
            correction,
        })
    }

    /// Overrides the weight of the `A2` correction term (1 for the (4,4)
    /// scheme). A zero weight skips `A2` entirely.
    pub fn with_correction_scale(mut self, scale: f64) -> Self {
        self.correction = scale;
        self
    }

    pub fn spec(&self) -> &SchemeSpec {
        &self.spec
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn correction_scale(&self) -> f64 {
        self.correction
    }

    /// Diagonal of `P`: `(1/c^2, 1/wb^2)`.
    pub fn mass(&self) -> (f64, f64) {
        (1.0 / self.c2, 1.0 / self.wb2)
    }

    /// Discrete curl `C` from the primary grids to the auxiliary grid.
    pub fn curl(&self, primary: &[GridFunction], order: DiffOrder) -> Result<GridFunction> {
        match (self.spec.dim(), primary) {
            (1, [e]) => {
                let d = diff_fwd(e, 0, order)?;
                Ok(match self.spec.pair {
                    FieldPair::EK => d,
                    FieldPair::HJ => d.scaled(-1.0),
                })
            }
            (2, [ex, ey]) => curl_2d_scalar(ex, ey, CurlKind::Forward, order),
            _ => Err(Error::contract("primary field has the wrong number of components")),
        }
    }

    /// Adjoint curl `C'` from the auxiliary grid back to the primary grids.
    pub fn curl_adj(&self, aux: &GridFunction, order: DiffOrder) -> Result<Vec<GridFunction>> {
        match self.spec.dim() {
            1 => {
                let d = diff_dual(aux, 0, order)?;
                Ok(vec![match self.spec.pair {
                    FieldPair::EK => d.scaled(-1.0),
                    FieldPair::HJ => d,
                }])
            }
            2 => Ok(curl_2d_vector(aux, CurlKind::Dual, order)?.into()),
            d => Err(Error::contract(format!("no adjoint curl for {d}D"))),
        }
    }

    fn check_layout(&self, w: &FieldBundle) -> Result<()> {
        if *w.mesh() != self.spec.mesh {
            return Err(Error::contract("bundle mesh differs from the scheme mesh"));
        }
        Ok(())
    }

    /// `A1 W = (C'g + wa^2/c^2 E, g)` with `g = C E + K`, using the given
    /// difference order.
    pub fn apply_a1_with(&self, w: &FieldBundle, order: DiffOrder) -> Result<FieldBundle> {
        self.check_layout(w)?;
        let mut g = self.curl(&w.primary, order)?;
        g.axpy(1.0, &w.aux)?;
        let mut primary = self.curl_adj(&g, order)?;
        let coef = self.wa2 / self.c2;
        for (p, e) in primary.iter_mut().zip(&w.primary) {
            p.axpy(coef, e)?;
        }
        FieldBundle::new(primary, g)
    }

    /// `A1 W` with the scheme's spatial order.
    pub fn apply_a1(&self, w: &FieldBundle) -> Result<FieldBundle> {
        self.apply_a1_with(w, self.spec.order.space_order())
    }

    /// `A2 W`, always with second-order curls.
    ///
    /// Entry by entry, with `L = C'C` and `s = wa^2 + wb^2`:
    /// `a11 = L^2 + (2wa^2 + wb^2) L / c^2 + wa^4/c^4`, `a12 = C'CC' + s C'/c^2`,
    /// `a21 = CC'C + s C / c^2`, `a22 = CC' + wb^2/c^2`.
    pub fn apply_a2(&self, w: &FieldBundle) -> Result<FieldBundle> {
        self.check_layout(w)?;
        let o = DiffOrder::Second;
        let (c2, wa2, wb2) = (self.c2, self.wa2, self.wb2);
        let s = wa2 + wb2;

        let ce = self.curl(&w.primary, o)?;
        let mut g = ce.clone();
        g.axpy(1.0, &w.aux)?;
        let ct_g = self.curl_adj(&g, o)?;
        let c_ct_g = self.curl(&ct_g, o)?;
        let ct_c_ct_g = self.curl_adj(&c_ct_g, o)?;
        let ct_ce = self.curl_adj(&ce, o)?;

        let mut primary = ct_c_ct_g;
        for (((p, a), b), e) in primary.iter_mut().zip(&ct_g).zip(&ct_ce).zip(&w.primary) {
            p.axpy(s / c2, a)?;
            p.axpy(wa2 / c2, b)?;
            p.axpy(wa2 * wa2 / (c2 * c2), e)?;
        }
        let mut aux = c_ct_g;
        aux.axpy(s / c2, &ce)?;
        aux.axpy(wb2 / c2, &w.aux)?;
        FieldBundle::new(primary, aux)
    }

    /// `P^-1 X`, in place.
    fn apply_inverse_mass(&self, x: &mut FieldBundle) {
        x.scale_blocks(self.c2, self.wb2);
    }

    /// Discrete second time derivative implied by the scheme:
    /// `-P^-1 (A1 W - kappa dt^2 c^2/12 A2 W)`.
    pub fn acceleration(&self, w: &FieldBundle) -> Result<FieldBundle> {
        let mut r = self.apply_a1(w)?;
        if self.correction != 0.0 {
            let a2 = self.apply_a2(w)?;
            let dt = self.spec.dt;
            r.axpy(-self.correction * dt * dt * self.c2 / 12.0, &a2)?;
        }
        self.apply_inverse_mass(&mut r);
        r.scale(-1.0);
        Ok(r)
    }

    /// Estimates `dt^2 rho(L) / 4`, where `L = P^-1 (A1 - kappa dt^2 c^2/12 A2)`
    /// is the operator of the update. The three-level recurrence is stable
    /// when this is below 1. `L` is self-adjoint in the `P`-weighted inner
    /// product, so power iteration converges to `rho(L)` from below.
    pub fn stability_ratio(&self, iterations: usize) -> Result<f64> {
        let mesh = self.spec.mesh;
        let mut x = FieldBundle::zeros(mesh)?;
        // Deterministic pseudo-random start (splitmix64) touching every mode.
        let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
        let mut next = || {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            (z ^ (z >> 31)) as f64 / u64::MAX as f64 - 0.5
        };
        for e in &mut x.primary {
            e.values_mut().iter_mut().for_each(|v| *v = next());
        }
        x.aux.values_mut().iter_mut().for_each(|v| *v = next());
        let (mp, ma) = self.mass();
        let pnorm = |w: &FieldBundle| w.weighted_inner(w, mp, ma).map(f64::sqrt);
        x.scale(1.0 / pnorm(&x)?);
        let mut rho = 0.0;
        for _ in 0..iterations.max(1) {
            let y = self.acceleration(&x)?;
            let n = pnorm(&y)?;
            if n == 0.0 || !n.is_finite() {
                break;
            }
            rho = n;
            x = y;
            x.scale(1.0 / n);
        }
        Ok(self.spec.dt.powi(2) * rho / 4.0)
    }

    /// Produces `(W^0, W^1)`.
    pub fn initialize(&self, startup: &StartUp) -> Result<StatePair> {
        let dt = self.spec.dt;
        match startup {
            StartUp::Exact(sol) => {
                let mesh = self.spec.mesh;
                Ok(StatePair {
                    prev: sol.exact_state(mesh, 0.0)?,
                    curr: sol.exact_state(mesh, dt)?,
                    n: 1,
                })
            }
            StartUp::Taylor(data) => {
                let v0 = data.v0.as_ref().ok_or_else(|| {
                    Error::contract("a Taylor start needs the initial time derivative")
                })?;
                self.check_layout(&data.w0)?;
                self.check_layout(v0)?;
                let a1_only = |x: &FieldBundle| -> Result<FieldBundle> {
                    let mut r = self.apply_a1(x)?;
                    self.apply_inverse_mass(&mut r);
                    r.scale(-1.0);
                    Ok(r)
                };
                let mut w1 = data.w0.clone();
                w1.axpy(dt, v0)?;
                w1.axpy(dt * dt / 2.0, &a1_only(&data.w0)?)?;
                if self.spec.order.time_order() == 4 {
                    w1.axpy(dt.powi(3) / 6.0, &a1_only(v0)?)?;
                    // Fourth derivative through the modified equation: c^2 P^-1 A2 W.
                    let mut d4 = self.apply_a2(&data.w0)?;
                    self.apply_inverse_mass(&mut d4);
                    w1.axpy(dt.powi(4) / 24.0 * self.c2, &d4)?;
                }
                if !w1.is_finite() {
                    return Err(Error::Instability { step: 1 });
                }
                Ok(StatePair { prev: data.w0.clone(), curr: w1, n: 1 })
            }
        }
    }

    /// `W^{n+1} = 2 W^n - W^{n-1} + dt^2 * acceleration(W^n)`.
    pub fn step(&self, state: StatePair) -> Result<StatePair> {
        let dt = self.spec.dt;
        let mut next = self.acceleration(&state.curr)?;
        next.scale(dt * dt);
        next.axpy(2.0, &state.curr)?;
        next.axpy(-1.0, &state.prev)?;
        let n = state.n + 1;
        if !next.is_finite() {
            return Err(Error::Instability { step: n });
        }
        Ok(StatePair { prev: state.curr, curr: next, n })
    }

    /// Initializes, then steps up to `spec.steps`, calling `observe` after the
    /// start-up and after every step.
    pub fn run<F>(&self, startup: &StartUp, mut observe: F) -> Result<StatePair>
    where
        F: FnMut(&StatePair) -> Result<()>,
    {
        let mut state = self.initialize(startup)?;
        observe(&state)?;
        while state.n < self.spec.steps {
            state = self.step(state)?;
            observe(&state)?;
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drude::{Manufactured1D, Manufactured2D};

    fn params_1d() -> (PhysParams, Manufactured) {
        let s = Manufactured1D::ek(5.0, 0.2, 2, 26.63199).unwrap();
        (s.params, Manufactured::OneD(s))
    }

    fn stepper_1d(order: SchemeOrder, m: usize) -> Stepper {
        let (p, _) = params_1d();
        let mesh = MeshSpec::new(1.0, m, 1).unwrap();
        let spec = SchemeSpec::new(order, FieldPair::EK, mesh, 0.2 / m as f64, 1.0, p.c()).unwrap();
        Stepper::new(spec, p).unwrap()
    }

    fn constant_bundle(mesh: MeshSpec, a: f64, b: f64) -> FieldBundle {
        let mut w = FieldBundle::zeros(mesh).unwrap();
        for e in &mut w.primary {
            e.values_mut().iter_mut().for_each(|v| *v = a);
        }
        w.aux.values_mut().iter_mut().for_each(|v| *v = b);
        w
    }

    #[test]
    fn scheme_labels_round_trip() {
        for s in SchemeOrder::ALL {
            assert_eq!(SchemeOrder::parse(s.label()).unwrap(), s);
        }
        assert_eq!(SchemeOrder::parse("(4,4)").unwrap(), SchemeOrder::S44);
        assert!(SchemeOrder::parse("42").is_err());
    }

    #[test]
    fn courant_construction() {
        let s = SchemeSpec::from_courant(SchemeOrder::S44, FieldPair::EK, 1, 1.0, 0.02, 0.2, 1.0, 1.0)
            .unwrap();
        assert_eq!(s.mesh.cells(), 10);
        assert_eq!(s.steps, 50);
        assert!((s.nu - 0.2).abs() < 1e-14 * 0.2);
        let long = SchemeSpec::from_courant(SchemeOrder::S22, FieldPair::EK, 1, 1.0, 0.02, 0.2, 250.0, 1.0)
            .unwrap();
        assert_eq!(long.steps, 12500);
        assert!((long.steps as f64 * long.dt - 250.0).abs() < 1e-12 * 250.0);
    }

    #[test]
    fn rejects_bad_final_time_and_2d_hj() {
        let mesh = MeshSpec::new(1.0, 10, 1).unwrap();
        assert!(SchemeSpec::new(SchemeOrder::S22, FieldPair::EK, mesh, 0.03, 1.0, 1.0).is_err());
        let mesh2 = MeshSpec::new(1.0, 10, 2).unwrap();
        assert!(SchemeSpec::new(SchemeOrder::S22, FieldPair::HJ, mesh2, 0.02, 1.0, 1.0).is_err());
    }

    #[test]
    fn a1_on_zero_and_constants() {
        let st = stepper_1d(SchemeOrder::S44, 10);
        let mesh = st.spec().mesh;
        let z = FieldBundle::zeros(mesh).unwrap();
        assert_eq!(st.apply_a1(&z).unwrap(), z);
        assert_eq!(st.apply_a2(&z).unwrap(), z);

        let p = st.params();
        let c2 = p.c().powi(2);
        let w = constant_bundle(mesh, 1.5, -0.5);
        let a1 = st.apply_a1(&w).unwrap();
        let expect_e = p.omega_pe.powi(2) / c2 * 1.5;
        assert!(a1.primary[0].values().iter().all(|&v| (v - expect_e).abs() < 1e-12 * expect_e));
        assert!(a1.aux.values().iter().all(|&v| v == -0.5));

        let a2 = st.apply_a2(&w).unwrap();
        let expect_e = p.omega_pe.powi(4) / (c2 * c2) * 1.5;
        let expect_k = p.omega_pm.powi(2) / c2 * -0.5;
        assert!(a2.primary[0].values().iter().all(|&v| (v - expect_e).abs() < 1e-12 * expect_e));
        assert!(a2.aux.values().iter().all(|&v| (v - expect_k).abs() < 1e-12 * expect_k.abs()));
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let st = stepper_1d(SchemeOrder::S44, 10);
        let z = FieldBundle::zeros(st.spec().mesh).unwrap();
        let mut s = StatePair { prev: z.clone(), curr: z.clone(), n: 1 };
        for _ in 0..20 {
            s = st.step(s).unwrap();
        }
        assert_eq!(s.curr, z);
        assert_eq!(s.n, 21);
    }

    #[test]
    fn exact_startup_samples_solution() {
        let (_, sol) = params_1d();
        let st = stepper_1d(SchemeOrder::S44, 10);
        let s = st.initialize(&StartUp::Exact(sol)).unwrap();
        assert!(s.prev.components().all(|c| c.max_abs() == 0.0));
        assert_eq!(s.curr, sol.exact_state(st.spec().mesh, st.spec().dt).unwrap());
    }

    #[test]
    fn taylor_without_velocity_is_rejected() {
        let st = stepper_1d(SchemeOrder::S44, 10);
        let z = FieldBundle::zeros(st.spec().mesh).unwrap();
        let r = st.initialize(&StartUp::Taylor(InitialData { w0: z, v0: None }));
        assert!(matches!(r, Err(Error::ContractViolation(_))));
    }

    #[test]
    fn nested_scheme_is_bit_identical_without_correction() {
        let (p, sol) = params_1d();
        let mesh = MeshSpec::new(1.0, 20, 1).unwrap();
        let mk = |o| Stepper::new(SchemeSpec::new(o, FieldPair::EK, mesh, 0.01, 0.5, p.c()).unwrap(), p)
            .unwrap();
        let a = mk(SchemeOrder::S44).with_correction_scale(0.0);
        let b = mk(SchemeOrder::S24);
        let ra = a.run(&StartUp::Exact(sol), |_| Ok(())).unwrap();
        let rb = b.run(&StartUp::Exact(sol), |_| Ok(())).unwrap();
        assert_eq!(ra, rb);
    }

    #[test]
    fn time_reversal_recovers_initial_levels() {
        let (_, sol) = params_1d();
        let st = stepper_1d(SchemeOrder::S44, 20);
        let s0 = st.initialize(&StartUp::Exact(sol)).unwrap();
        let mut s = s0.clone();
        for _ in 0..100 {
            s = st.step(s).unwrap();
        }
        let mut r = s.reversed();
        for _ in 0..100 {
            r = st.step(r).unwrap();
        }
        // After reversing again, `r.prev` is W^1 and `r.curr` is W^0.
        let scale = s0.curr.components().map(|c| c.max_abs()).fold(0.0, f64::max);
        for (a, b) in r.curr.components().zip(s0.prev.components()) {
            assert!(a.sub(b).unwrap().max_abs() < 1e-10 * scale);
        }
        for (a, b) in r.prev.components().zip(s0.curr.components()) {
            assert!(a.sub(b).unwrap().max_abs() < 1e-10 * scale);
        }
    }

    #[test]
    fn stability_ratio_separates_cfl_regimes() {
        let (p, _) = params_1d();
        let ratio = |nu: f64| {
            let spec = SchemeSpec::from_courant(SchemeOrder::S22, FieldPair::EK, 1, 1.0, 0.01, nu, 1.0, p.c())
                .unwrap();
            Stepper::new(spec, p).unwrap().stability_ratio(2000).unwrap()
        };
        assert!(ratio(0.2) < 0.2);
        assert!(ratio(0.95) < 1.0);
        assert!(ratio(1.05) > 1.0);
    }

    #[test]
    fn blow_up_reports_step() {
        let (p, sol) = params_1d();
        let mesh = MeshSpec::new(1.0, 20, 1).unwrap();
        // nu = 3: far beyond the CFL limit.
        let spec = SchemeSpec::new(SchemeOrder::S22, FieldPair::EK, mesh, 0.15, 600.0, p.c()).unwrap();
        let st = Stepper::new(spec, p).unwrap();
        match st.run(&StartUp::Exact(sol), |_| Ok(())) {
            Err(Error::Instability { step }) => assert!(step > 1 && step <= spec.steps),
            other => panic!("expected instability, got {other:?}"),
        }
    }

    #[test]
    fn two_d_exact_startup_layout() {
        let s = Manufactured2D::te(5.0, 0.2, [2, 2], 10.0).unwrap();
        let mesh = MeshSpec::new(1.0, 10, 2).unwrap();
        let spec = SchemeSpec::new(SchemeOrder::S44, FieldPair::EK, mesh, 0.02, 1.0, s.params.c()).unwrap();
        let st = Stepper::new(spec, s.params).unwrap();
        let mut state = st.initialize(&StartUp::Exact(Manufactured::TwoD(s))).unwrap();
        state = st.step(state).unwrap();
        assert_eq!(state.curr.primary.len(), 2);
        assert!(state.curr.is_finite());
    }
}
