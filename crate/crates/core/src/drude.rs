//! Drude material parameters, dispersion relations, manufactured exact
//! solutions and their continuous energies.
//!
//! The manufactured solutions oscillate as `sin(omega * pi * t)`: the symbol
//! `omega` is stored as-is and the temporal angular frequency is
//! `omega * pi` wherever a time derivative is taken.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::{layout, FieldBundle, FieldPair};
use crate::grid::{GridFunction, MeshSpec};

/// Vacuum constants and plasma frequencies of a lossless Drude medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub eps0: f64,
    pub mu0: f64,
    pub omega_pe: f64,
    pub omega_pm: f64,
}

impl PhysParams {
    pub fn new(eps0: f64, mu0: f64, omega_pe: f64, omega_pm: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite();
        if !(ok(eps0) && eps0 > 0.0 && ok(mu0) && mu0 > 0.0) {
            return Err(Error::domain(format!(
                "eps0 and mu0 must be positive, got eps0 = {eps0}, mu0 = {mu0}"
            )));
        }
        if !(ok(omega_pe) && omega_pe >= 0.0 && ok(omega_pm) && omega_pm >= 0.0) {
            return Err(Error::domain(format!(
                "plasma frequencies must be nonnegative, got omega_pe = {omega_pe}, omega_pm = {omega_pm}"
            )));
        }
        Ok(Self { eps0, mu0, omega_pe, omega_pm })
    }

    /// Speed of light `1 / sqrt(eps0 mu0)`.
    pub fn c(&self) -> f64 {
        1.0 / (self.eps0 * self.mu0).sqrt()
    }

    /// Plasma frequencies `(primary, auxiliary)` of a field pair: the
    /// primary field sees `omega_pe` in the (E,K) system and `omega_pm` in
    /// the (H,J) system, the auxiliary field the other one.
    pub fn pair_frequencies(&self, pair: FieldPair) -> (f64, f64) {
        match pair {
            FieldPair::EK => (self.omega_pe, self.omega_pm),
            FieldPair::HJ => (self.omega_pm, self.omega_pe),
        }
    }
}

/// Frequency-domain permittivity and permeability `(eps(w), mu(w))`.
pub fn drude_permittivity(omega: f64, p: &PhysParams) -> Result<(f64, f64)> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::domain(format!("Drude response is undefined at omega = {omega}")));
    }
    let w2 = omega * omega;
    Ok((
        p.eps0 * (1.0 - p.omega_pe * p.omega_pe / w2),
        p.mu0 * (1.0 - p.omega_pm * p.omega_pm / w2),
    ))
}

/// Parameters for which a manufactured solution satisfies the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub omega_pm: f64,
    /// Temporal frequency symbol; the solution varies as `sin(omega pi t)`.
    pub omega: f64,
    pub params: PhysParams,
}

/// Frequencies making the 1D plane-wave solution exact, for integer `k`.
pub fn derive_params_1d(eps0: f64, mu0: f64, k: i32, omega_pe: f64) -> Result<DerivedParams> {
    let kf = f64::from(k);
    if eps0 <= kf {
        return Err(Error::domain(format!("need eps0 > k, got eps0 = {eps0}, k = {k}")));
    }
    let c2 = 1.0 / (eps0 * mu0);
    let radicand = (omega_pe * omega_pe / (c2 * (eps0 - kf)) - kf * PI * PI) / mu0;
    // Negated so that NaN is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(radicand > 0.0) {
        return Err(Error::domain(format!(
            "omega_pm^2 = {radicand} is not positive for eps0 = {eps0}, mu0 = {mu0}, k = {k}, omega_pe = {omega_pe}"
        )));
    }
    let omega_pm = radicand.sqrt();
    let omega = omega_pe / PI * (eps0 / (eps0 - kf)).sqrt();
    Ok(DerivedParams { omega_pm, omega, params: PhysParams::new(eps0, mu0, omega_pe, omega_pm)? })
}

/// Frequencies making the 2D TE solution exact, for integer `k = (kx, ky)`.
pub fn derive_params_2d(eps0: f64, mu0: f64, k: [i32; 2], omega_pe: f64) -> Result<DerivedParams> {
    let c2 = 1.0 / (eps0 * mu0);
    let k2 = f64::from(k[0]).powi(2) + f64::from(k[1]).powi(2);
    let radicand = (k2 * PI * PI + omega_pe * omega_pe / (c2 * (1.0 + eps0))) / mu0;
    let ratio = eps0 / (1.0 + eps0);
    if !(radicand > 0.0 && ratio > 0.0) {
        return Err(Error::domain(format!(
            "non-positive radicand for eps0 = {eps0}, mu0 = {mu0}, k = {k:?}, omega_pe = {omega_pe}"
        )));
    }
    let omega_pm = radicand.sqrt();
    let omega = omega_pe / PI * ratio.sqrt();
    Ok(DerivedParams { omega_pm, omega, params: PhysParams::new(eps0, mu0, omega_pe, omega_pm)? })
}

/// `int_0^L sin^2(a pi x) dx` and `int_0^L cos^2(a pi x) dx`.
fn profile_integrals(a: f64, length: f64) -> (f64, f64) {
    if a == 0.0 {
        return (0.0, length);
    }
    let tail = (2.0 * a * PI * length).sin() / (4.0 * a * PI);
    (0.5 * length - tail, 0.5 * length + tail)
}

/// Closed-form 1D solution of either field pair.
///
/// (E,K): `E = sin(w pi t) sin(k pi x) / w`,
/// `K = mu0 omega_pm^2 / (pi w) sin(w pi t) cos(k pi x)`.
/// (H,J) is obtained by the duality `H = E`, `J = -K` with the plasma
/// frequencies exchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manufactured1D {
    pub k: i32,
    pub omega: f64,
    pub params: PhysParams,
    pub pair: FieldPair,
    /// Overall scale; the system is linear so any multiple is a solution.
    pub amplitude: f64,
}

impl Manufactured1D {
    pub fn ek(eps0: f64, mu0: f64, k: i32, omega_pe: f64) -> Result<Self> {
        let d = derive_params_1d(eps0, mu0, k, omega_pe)?;
        Ok(Self { k, omega: d.omega, params: d.params, pair: FieldPair::EK, amplitude: 1.0 })
    }

    /// (H,J) solution for a prescribed magnetic plasma frequency; the
    /// electric one is derived.
    pub fn hj(eps0: f64, mu0: f64, k: i32, omega_pm: f64) -> Result<Self> {
        let d = derive_params_1d(eps0, mu0, k, omega_pm)?;
        let params = PhysParams::new(eps0, mu0, d.omega_pm, omega_pm)?;
        Ok(Self { k, omega: d.omega, params, pair: FieldPair::HJ, amplitude: 1.0 })
    }

    /// `+1` for (E,K), `-1` for (H,J): the 1D curl from the primary to the
    /// auxiliary field is `sign * d/dx`.
    pub fn curl_sign(&self) -> f64 {
        match self.pair {
            FieldPair::EK => 1.0,
            FieldPair::HJ => -1.0,
        }
    }

    fn kpi(&self) -> f64 {
        f64::from(self.k) * PI
    }

    /// Angular frequency `omega * pi`.
    fn big_omega(&self) -> f64 {
        self.omega * PI
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    fn amp_primary(&self) -> f64 {
        self.amplitude / self.omega
    }

    fn amp_aux(&self) -> f64 {
        let (_, wb) = self.params.pair_frequencies(self.pair);
        self.amplitude * self.curl_sign() * self.params.mu0 * wb * wb / (PI * self.omega)
    }

    /// Spatial profiles of `(primary, aux)`: the fields at time `t` are these
    /// times `sin(omega pi t)`.
    pub fn profile(&self, x: f64) -> [f64; 2] {
        [self.amp_primary() * (self.kpi() * x).sin(), self.amp_aux() * (self.kpi() * x).cos()]
    }

    pub fn primary(&self, x: f64, t: f64) -> f64 {
        self.amp_primary() * (self.big_omega() * t).sin() * (self.kpi() * x).sin()
    }

    pub fn aux(&self, x: f64, t: f64) -> f64 {
        self.amp_aux() * (self.big_omega() * t).sin() * (self.kpi() * x).cos()
    }

    pub fn primary_dt(&self, x: f64, t: f64) -> f64 {
        self.amp_primary() * self.big_omega() * (self.big_omega() * t).cos() * (self.kpi() * x).sin()
    }

    pub fn aux_dt(&self, x: f64, t: f64) -> f64 {
        self.amp_aux() * self.big_omega() * (self.big_omega() * t).cos() * (self.kpi() * x).cos()
    }

    pub fn primary_dx(&self, x: f64, t: f64) -> f64 {
        self.amp_primary() * self.kpi() * (self.big_omega() * t).sin() * (self.kpi() * x).cos()
    }

    pub fn aux_dx(&self, x: f64, t: f64) -> f64 {
        -self.amp_aux() * self.kpi() * (self.big_omega() * t).sin() * (self.kpi() * x).sin()
    }

    /// Residuals of the two governing equations at `(x, t)`, using the
    /// closed-form second derivatives:
    ///
    /// `P_tt - c^2 P_xx + wa^2 P - s c^2 A_x` and `A_tt + wb^2 A + s wb^2 P_x`
    /// with `s = curl_sign()`.
    pub fn pde_residual(&self, x: f64, t: f64) -> [f64; 2] {
        let c2 = self.params.c().powi(2);
        let (wa, wb) = self.params.pair_frequencies(self.pair);
        let w2 = self.big_omega().powi(2);
        let p = self.primary(x, t);
        let a = self.aux(x, t);
        let p_tt = -w2 * p;
        let p_xx = -self.kpi().powi(2) * p;
        let a_tt = -w2 * a;
        let s = self.curl_sign();
        [
            p_tt - c2 * p_xx + wa * wa * p - s * c2 * self.aux_dx(x, t),
            a_tt + wb * wb * a + s * wb * wb * self.primary_dx(x, t),
        ]
    }

    /// Continuous energy at time `t` on `[0, length]`, in closed form:
    /// `1/2 (|P_t|^2/c^2 + |A_t|^2/wb^2 + wa^2/c^2 |P|^2 + |s P_x + A|^2)`.
    pub fn continuous_energy(&self, t: f64, length: f64) -> f64 {
        let c2 = self.params.c().powi(2);
        let (wa, wb) = self.params.pair_frequencies(self.pair);
        let (i_sin, i_cos) = profile_integrals(f64::from(self.k), length);
        let (st, ct) = ((self.big_omega() * t).sin(), (self.big_omega() * t).cos());
        let w = self.big_omega();
        let ap = self.amp_primary();
        let aa = self.amp_aux();
        let kinetic_p = (ap * w * ct).powi(2) * i_sin / c2;
        let kinetic_a = (aa * w * ct).powi(2) * i_cos / (wb * wb);
        let potential_p = wa * wa / c2 * (ap * st).powi(2) * i_sin;
        let coupled = ((self.curl_sign() * ap * self.kpi() + aa) * st).powi(2) * i_cos;
        0.5 * (kinetic_p + kinetic_a + potential_p + coupled)
    }
}

/// Closed-form 2D TE solution of the (E,K) system:
///
/// `E_x = -(ky/w) sin(w pi t) sin(kx pi x) cos(ky pi y)`,
/// `E_y = (kx/w) sin(w pi t) cos(kx pi x) sin(ky pi y)`,
/// `K = mu0 omega_pm^2 / (pi w) sin(w pi t) sin(kx pi x) sin(ky pi y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manufactured2D {
    pub k: [i32; 2],
    pub omega: f64,
    pub params: PhysParams,
    pub amplitude: f64,
}

/// Values of `(E_x, E_y, K)` at one point.
pub type TeValues = [f64; 3];

impl Manufactured2D {
    pub fn te(eps0: f64, mu0: f64, k: [i32; 2], omega_pe: f64) -> Result<Self> {
        let d = derive_params_2d(eps0, mu0, k, omega_pe)?;
        Ok(Self { k, omega: d.omega, params: d.params, amplitude: 1.0 })
    }

    fn kpi(&self) -> (f64, f64) {
        (f64::from(self.k[0]) * PI, f64::from(self.k[1]) * PI)
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    fn amp_k(&self) -> f64 {
        self.amplitude * self.params.mu0 * self.params.omega_pm.powi(2) / (PI * self.omega)
    }

    /// Spatial profiles (time factor removed) of `(E_x, E_y, K)`.
    pub fn profiles(&self, x: f64, y: f64) -> TeValues {
        let (kx, ky) = self.kpi();
        let (sx, cx) = ((kx * x).sin(), (kx * x).cos());
        let (sy, cy) = ((ky * y).sin(), (ky * y).cos());
        // Trigonometric factors are multiplied first so that swapping x and y
        // maps E_x to -E_y bit for bit when kx = ky.
        [
            -self.amplitude * f64::from(self.k[1]) / self.omega * (sx * cy),
            self.amplitude * f64::from(self.k[0]) / self.omega * (cx * sy),
            self.amp_k() * (sx * sy),
        ]
    }

    pub fn fields(&self, x: f64, y: f64, t: f64) -> TeValues {
        let s = (self.omega * PI * t).sin();
        self.profiles(x, y).map(|v| v * s)
    }

    pub fn fields_dt(&self, x: f64, y: f64, t: f64) -> TeValues {
        let w = self.omega * PI;
        let c = w * (w * t).cos();
        self.profiles(x, y).map(|v| v * c)
    }

    /// Residuals of the three TE equations
    /// `E_tt + c^2 curl curl E + wpe^2 E + c^2 curl K` and
    /// `K_tt + wpm^2 K + wpm^2 curl E`, with closed-form derivatives.
    pub fn pde_residual(&self, x: f64, y: f64, t: f64) -> [f64; 3] {
        let p = &self.params;
        let c2 = p.c().powi(2);
        let (kx, ky) = self.kpi();
        let w2 = (self.omega * PI).powi(2);
        let s = (self.omega * PI * t).sin();
        let [ex, ey, k] = self.fields(x, y, t);
        let (sx, cx) = ((kx * x).sin(), (kx * x).cos());
        let (sy, cy) = ((ky * y).sin(), (ky * y).cos());
        // curl E = d_x E_y - d_y E_x
        let ax = -self.amplitude * f64::from(self.k[1]) / self.omega;
        let ay = self.amplitude * f64::from(self.k[0]) / self.omega;
        let curl_e = s * (ay * (-kx) * sx * sy - ax * (-ky) * sx * sy);
        let curl_e_dx = s * (ay * (-kx) * kx * cx * sy - ax * (-ky) * kx * cx * sy);
        let curl_e_dy = s * (ay * (-kx) * ky * sx * cy - ax * (-ky) * ky * sx * cy);
        let ak = self.amp_k();
        let k_dx = s * ak * kx * cx * sy;
        let k_dy = s * ak * ky * sx * cy;
        // vector curl of a scalar f: (d_y f, -d_x f)
        [
            -w2 * ex + c2 * curl_e_dy + p.omega_pe.powi(2) * ex + c2 * k_dy,
            -w2 * ey - c2 * curl_e_dx + p.omega_pe.powi(2) * ey - c2 * k_dx,
            -w2 * k + p.omega_pm.powi(2) * k + p.omega_pm.powi(2) * curl_e,
        ]
    }

    /// Continuous energy on `[0, length]^2`:
    /// `1/2 (|E_t|^2/c^2 + |K_t|^2/wpm^2 + wpe^2/c^2 |E|^2 + |curl E + K|^2)`.
    pub fn continuous_energy(&self, t: f64, length: f64) -> f64 {
        let p = &self.params;
        let c2 = p.c().powi(2);
        let (isx, icx) = profile_integrals(f64::from(self.k[0]), length);
        let (isy, icy) = profile_integrals(f64::from(self.k[1]), length);
        let w = self.omega * PI;
        let (st, ct) = ((w * t).sin(), (w * t).cos());
        let ax = self.amplitude * f64::from(self.k[1]) / self.omega;
        let ay = self.amplitude * f64::from(self.k[0]) / self.omega;
        let e_profile = ax * ax * isx * icy + ay * ay * icx * isy;
        let ak = self.amp_k();
        let (kx, ky) = self.kpi();
        // curl E = -(kx^2 + ky^2) pi / w * sin sin
        let curl_amp = -self.amplitude * (kx * kx + ky * ky) / (PI * self.omega);
        let kinetic_e = (w * ct).powi(2) * e_profile / c2;
        let kinetic_k = (ak * w * ct).powi(2) * isx * isy / p.omega_pm.powi(2);
        let potential_e = p.omega_pe.powi(2) / c2 * st * st * e_profile;
        let coupled = ((curl_amp + ak) * st).powi(2) * isx * isy;
        0.5 * (kinetic_e + kinetic_k + potential_e + coupled)
    }
}

/// A manufactured solution in one or two dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Manufactured {
    OneD(Manufactured1D),
    TwoD(Manufactured2D),
}

impl Manufactured {
    pub fn params(&self) -> &PhysParams {
        match self {
            Manufactured::OneD(s) => &s.params,
            Manufactured::TwoD(s) => &s.params,
        }
    }

    pub fn omega(&self) -> f64 {
        match self {
            Manufactured::OneD(s) => s.omega,
            Manufactured::TwoD(s) => s.omega,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Manufactured::OneD(_) => 1,
            Manufactured::TwoD(_) => 2,
        }
    }

    pub fn pair(&self) -> FieldPair {
        match self {
            Manufactured::OneD(s) => s.pair,
            Manufactured::TwoD(_) => FieldPair::EK,
        }
    }

    pub fn continuous_energy(&self, t: f64, length: f64) -> f64 {
        match self {
            Manufactured::OneD(s) => s.continuous_energy(t, length),
            Manufactured::TwoD(s) => s.continuous_energy(t, length),
        }
    }

    fn sample_bundle<F>(&self, mesh: MeshSpec, f: F) -> Result<FieldBundle>
    where
        F: Fn(usize, &[f64]) -> f64,
    {
        if mesh.dim() != self.dim() {
            return Err(Error::contract(format!(
                "{}D solution sampled on a {}D mesh",
                self.dim(),
                mesh.dim()
            )));
        }
        let (p_layout, a_layout) = layout(mesh.dim())?;
        let n = p_layout.len();
        let primary = p_layout
            .into_iter()
            .enumerate()
            .map(|(c, st)| GridFunction::sample(mesh, st, |x| f(c, x)))
            .collect::<Result<Vec<_>>>()?;
        let aux = GridFunction::sample(mesh, a_layout, |x| f(n, x))?;
        FieldBundle::new(primary, aux)
    }

    /// Every component sampled on its own staggered grid at time `t`.
    pub fn exact_state(&self, mesh: MeshSpec, t: f64) -> Result<FieldBundle> {
        match *self {
            Manufactured::OneD(s) => self.sample_bundle(mesh, |c, x| {
                if c == 0 {
                    s.primary(x[0], t)
                } else {
                    s.aux(x[0], t)
                }
            }),
            Manufactured::TwoD(s) => self.sample_bundle(mesh, |c, x| s.fields(x[0], x[1], t)[c]),
        }
    }

    /// Every component carries the factor `sin(omega pi t)`.
    pub fn time_factor(&self, t: f64) -> f64 {
        (self.omega() * PI * t).sin()
    }

    /// The state with the time factor removed: `exact_state(t)` equals this
    /// times [`Self::time_factor`] up to rounding.
    pub fn profile_state(&self, mesh: MeshSpec) -> Result<FieldBundle> {
        match *self {
            Manufactured::OneD(s) => self.sample_bundle(mesh, |c, x| s.profile(x[0])[c]),
            Manufactured::TwoD(s) => self.sample_bundle(mesh, |c, x| s.profiles(x[0], x[1])[c]),
        }
    }

    /// First time derivatives of every component at time `t`.
    pub fn exact_rate(&self, mesh: MeshSpec, t: f64) -> Result<FieldBundle> {
        match *self {
            Manufactured::OneD(s) => self.sample_bundle(mesh, |c, x| {
                if c == 0 {
                    s.primary_dt(x[0], t)
                } else {
                    s.aux_dt(x[0], t)
                }
            }),
            Manufactured::TwoD(s) => self.sample_bundle(mesh, |c, x| s.fields_dt(x[0], x[1], t)[c]),
        }
    }
}
