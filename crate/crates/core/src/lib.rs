//! Staggered finite-difference time-domain schemes for Maxwell's equations
//! in Drude metamaterials on periodic domains.
//!
//! * [`grid`]: meshes, staggered locations and grid functions.
//! * [`stencil`]: second- and fourth-order staggered differences and curls.
//! * [`fields`]: coupled `(primary, auxiliary)` field bundles.
//! * [`drude`]: material parameters and manufactured reference solutions.
//! * [`stepper`]: the (2,2), (2,4) and (4,4) leapfrog schemes.
//! * [`diagnostics`]: discrete energy, errors and convergence rates.

pub mod diagnostics;
pub mod drude;
pub mod error;
pub mod fields;
pub mod grid;
pub mod stencil;
pub mod stepper;

pub use diagnostics::{
    convergence_rates, discrete_energy, relative_energy_error, ConvergenceRow, EnergyMonitor,
    EnergyRecord, ErrorTracker,
};
pub use drude::{Manufactured, Manufactured1D, Manufactured2D, PhysParams};
pub use error::{Error, Result};
pub use fields::{FieldBundle, FieldPair};
pub use grid::{GridFunction, Loc, MeshSpec, Stagger};
pub use stencil::{CurlKind, DiffOrder};
pub use stepper::{InitialData, SchemeOrder, SchemeSpec, StartUp, StatePair, Stepper};
