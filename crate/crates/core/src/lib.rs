//! Surface-induced shifts of the electron's spin magnetic moment near
//! planar surfaces: perfect reflectors, nondispersive dielectrics, plasmas
//! and dispersive dielectrics.
//!
//! All shifts are reported in scaled units `ŝ = Δμ / Δμ⊥,PM(d)` (the
//! perfect-reflector perpendicular shift at the same distance), which makes
//! the perfect reflector exactly `+1`/`-1` and removes the charge-sign
//! convention from the results. Evaluators exist in several independent
//! mathematical routes (closed forms, a wedge-transformed double integral,
//! an alternative `(ξ, k∥)` representation, asymptotics), and the `validate`
//! machinery cross-checks them against each other.

pub mod analysis;
pub mod cli;
pub mod models;
pub mod quadrature;
pub mod shifts;
pub mod specfun;
pub mod units;

pub use models::{ImaginaryFrequencyPoint, ModelError, Polarization, SurfaceModel, SurfacePlasmonPoint};
pub use quadrature::{QuadResult, QuadratureConfig, QuadratureError};
pub use shifts::{
    general_shift, general_shift_omega, large_distance_asymptote, nondisp_closed, nondisp_large_n,
    plasma_te, plasma_tm, plasma_total, pm_shift, small_distance_asymptote, sp_only_shift,
    Breakdown, ChargeConvention, Geometry, Method, Orientation, ScaledShift, ShiftError,
};
pub use units::{relative_shift, to_natural, LabInputs, NaturalProducts};

/// Version string embedded in every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
