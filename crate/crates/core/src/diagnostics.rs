//! Discrete energy, solution errors and convergence rates.

use crate::drude::Manufactured;
use crate::error::{Error, Result};
use crate::fields::{component_names, FieldBundle};
use crate::stencil::DiffOrder;
use crate::stepper::{StatePair, Stepper};

/// Discrete energy between two consecutive levels `lower = W^n` and
/// `upper = W^{n+1}`:
///
/// ```text
/// E^{n+1/2} = 1/2 [ (1/c^2)|dt E|^2 + (1/wb^2)|dt K|^2
///                   + <A1 W^{n+1}, W^n> - kappa (dt^2 c^2/12) <A2 W^{n+1}, W^n> ]
/// ```
///
/// where `dt X = (X^{n+1} - X^n)/dt`. It is exactly conserved by the scheme.
pub fn discrete_energy(stepper: &Stepper, lower: &FieldBundle, upper: &FieldBundle) -> Result<f64> {
    lower.check_compatible(upper)?;
    let dt = stepper.spec().dt;
    let mut diff = upper.clone();
    diff.axpy(-1.0, lower)?;
    diff.scale(1.0 / dt);
    let (mp, ma) = stepper.mass();
    let kinetic = diff.weighted_inner(&diff, mp, ma)?;
    let mut potential = stepper.apply_a1(upper)?.inner(lower)?;
    let kappa = stepper.correction_scale();
    if kappa != 0.0 {
        let c2 = stepper.params().c().powi(2);
        potential -= kappa * dt * dt * c2 / 12.0 * stepper.apply_a2(upper)?.inner(lower)?;
    }
    Ok(0.5 * (kinetic + potential))
}

/// The (2,2) energy written out term by term:
///
/// ```text
/// 1/2 [ (1/c^2)|dt E|^2 + (1/wb^2)|dt K|^2
///       + <C E^{n+1} + K^{n+1}, C E^n + K^n> + (wa^2/c^2) <E^{n+1}, E^n> ]
/// ```
///
/// with second-order curls. It agrees with [`discrete_energy`] for the (2,2)
/// scheme up to round-off, which cross-checks the operator form.
pub fn energy_22_explicit(stepper: &Stepper, lower: &FieldBundle, upper: &FieldBundle) -> Result<f64> {
    lower.check_compatible(upper)?;
    let dt = stepper.spec().dt;
    let o = DiffOrder::Second;
    let mut diff = upper.clone();
    diff.axpy(-1.0, lower)?;
    diff.scale(1.0 / dt);
    let (mp, ma) = stepper.mass();
    let kinetic = diff.weighted_inner(&diff, mp, ma)?;

    let mut g_up = stepper.curl(&upper.primary, o)?;
    g_up.axpy(1.0, &upper.aux)?;
    let mut g_lo = stepper.curl(&lower.primary, o)?;
    g_lo.axpy(1.0, &lower.aux)?;
    let (wa, _) = stepper.params().pair_frequencies(stepper.spec().pair);
    let c2 = stepper.params().c().powi(2);
    let mut ee = 0.0;
    for (a, b) in upper.primary.iter().zip(&lower.primary) {
        ee += a.inner(b)?;
    }
    Ok(0.5 * (kinetic + g_up.inner(&g_lo)? + wa * wa / c2 * ee))
}

/// `|E - E_ref| / |E_ref|`.
pub fn relative_energy_error(energy: f64, reference: f64) -> Result<f64> {
    if reference == 0.0 || !reference.is_finite() {
        return Err(Error::domain(format!("reference energy must be finite and nonzero, got {reference}")));
    }
    Ok((energy - reference).abs() / reference.abs())
}

/// One sample of the energy history, taken between levels `n` and `n+1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord {
    pub n: usize,
    /// `(n + 1/2) dt`
    pub t: f64,
    /// `E^{n+1/2}`
    pub energy: f64,
    /// `Theta^{n+1/2}`: relative deviation from the reference energy.
    pub theta: f64,
    /// `Theta^{n+1/2} - Theta^{1/2}`
    pub theta_minus_theta0: f64,
    /// `E^{n+1/2} - E^{n-1/2}` (zero for the first record).
    pub delta_energy: f64,
}

/// Collects [`EnergyRecord`]s while a run is in progress.
///
/// The reference energy is the continuous energy of the manufactured
/// solution when one is given, otherwise the first discrete energy.
#[derive(Debug, Clone)]
pub struct EnergyMonitor {
    reference: Option<f64>,
    stride: usize,
    theta0: Option<f64>,
    last: Option<(usize, f64)>,
    records: Vec<EnergyRecord>,
    max_theta: f64,
    max_drift: f64,
}

impl EnergyMonitor {
    pub fn new(reference: Option<f64>, stride: usize) -> Result<Self> {
        if stride == 0 {
            return Err(Error::contract("energy sampling stride must be at least 1"));
        }
        if let Some(r) = reference {
            relative_energy_error(r, r)?;
        }
        Ok(Self {
            reference,
            stride,
            theta0: None,
            last: None,
            records: Vec::new(),
            max_theta: 0.0,
            max_drift: 0.0,
        })
    }

    /// Feeds the state after a start-up or step. Energies are evaluated for
    /// the recorded samples and for the interval right before each of them,
    /// so `delta_energy` is always a one-step difference; `max_theta` and
    /// `max_drift` are taken over the evaluated intervals.
    pub fn observe(&mut self, stepper: &Stepper, state: &StatePair) -> Result<()> {
        let n = state.n - 1;
        let record = n.is_multiple_of(self.stride);
        if !(record || (n + 1).is_multiple_of(self.stride)) {
            return Ok(());
        }
        let energy = discrete_energy(stepper, &state.prev, &state.curr)?;
        if !energy.is_finite() {
            return Err(Error::Instability { step: state.n });
        }
        let reference = *self.reference.get_or_insert(energy);
        let theta = relative_energy_error(energy, reference)?;
        let theta0 = *self.theta0.get_or_insert(theta);
        self.max_theta = self.max_theta.max(theta);
        self.max_drift = self.max_drift.max((theta - theta0).abs());
        if record {
            let delta_energy = match self.last {
                Some((m, e)) if m + 1 == n => energy - e,
                _ => 0.0,
            };
            self.records.push(EnergyRecord {
                n,
                t: (n as f64 + 0.5) * stepper.spec().dt,
                energy,
                theta,
                theta_minus_theta0: theta - theta0,
                delta_energy,
            });
        }
        self.last = Some((n, energy));
        Ok(())
    }

    pub fn reference(&self) -> Option<f64> {
        self.reference
    }

    pub fn records(&self) -> &[EnergyRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<EnergyRecord> {
        self.records
    }

    /// `max Theta^{n+1/2}` over the evaluated intervals.
    pub fn max_theta(&self) -> f64 {
        self.max_theta
    }

    /// `max |Theta^{n+1/2} - Theta^{1/2}|` over the evaluated intervals.
    pub fn max_drift(&self) -> f64 {
        self.max_drift
    }
}

/// Running maximum over time levels of `|X^n - X(t^n)|_h` for every
/// component, measured against a manufactured solution.
///
/// The exact fields separate as `profile(x) sin(omega pi t)`; the profile is
/// sampled once per mesh and scaled at every level.
#[derive(Debug, Clone)]
pub struct ErrorTracker {
    solution: Manufactured,
    names: Vec<&'static str>,
    max: Vec<f64>,
    profile: Option<FieldBundle>,
    seen_initial: bool,
}

impl ErrorTracker {
    pub fn new(solution: Manufactured) -> Self {
        let names = component_names(solution.dim(), solution.pair());
        let max = vec![0.0; names.len()];
        Self { solution, names, max, profile: None, seen_initial: false }
    }

    fn accumulate(&mut self, w: &FieldBundle, t: f64) -> Result<()> {
        if self.profile.as_ref().is_none_or(|p| p.mesh() != w.mesh()) {
            self.profile = Some(self.solution.profile_state(*w.mesh())?);
        }
        let profile = self.profile.as_ref().expect("profile sampled above");
        w.check_compatible(profile)?;
        let s = self.solution.time_factor(t);
        let cell = w.mesh().cell_measure();
        for ((m, a), b) in self.max.iter_mut().zip(w.components()).zip(profile.components()) {
            let sq: f64 = a.values().iter().zip(b.values()).map(|(x, p)| (x - p * s).powi(2)).sum();
            *m = m.max((cell * sq).sqrt());
        }
        Ok(())
    }

    /// Feeds the state after a start-up or step; both levels are measured on
    /// the first call.
    pub fn observe(&mut self, stepper: &Stepper, state: &StatePair) -> Result<()> {
        let dt = stepper.spec().dt;
        if !self.seen_initial {
            self.accumulate(&state.prev, (state.n - 1) as f64 * dt)?;
            self.seen_initial = true;
        }
        self.accumulate(&state.curr, state.n as f64 * dt)
    }

    pub fn names(&self) -> &[&'static str] {
        &self.names
    }

    pub fn errors(&self) -> &[f64] {
        &self.max
    }
}

/// `log2(err_i / err_{i-1})` for consecutive levels; the first entry is
/// `None`. With `dt` halved per level this is the observed order, negated.
pub fn convergence_rates(errors: &[f64]) -> Result<Vec<Option<f64>>> {
    if let Some(bad) = errors.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::domain(format!("errors must be positive and finite, got {bad}")));
    }
    Ok(std::iter::once(None)
        .chain(errors.windows(2).map(|w| Some((w[1] / w[0]).log2())))
        .collect())
}

/// One refinement level of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub dt: f64,
    pub dx: f64,
    /// Per component, in output order.
    pub errors: Vec<f64>,
    /// Per component; `None` on the coarsest level.
    pub rates: Vec<Option<f64>>,
}

/// Fills the `rates` of consecutive rows from their errors.
pub fn fill_rates(rows: &mut [ConvergenceRow]) -> Result<()> {
    let Some(first) = rows.first() else { return Ok(()) };
    let ncomp = first.errors.len();
    if rows.iter().any(|r| r.errors.len() != ncomp) {
        return Err(Error::contract("convergence rows have different numbers of components"));
    }
    let mut columns = Vec::with_capacity(ncomp);
    for c in 0..ncomp {
        let errs: Vec<f64> = rows.iter().map(|r| r.errors[c]).collect();
        columns.push(convergence_rates(&errs)?);
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row.rates = columns.iter().map(|col| col[i]).collect();
    }
    Ok(())
}
