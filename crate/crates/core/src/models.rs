//! Permittivity models and their Fresnel reflection coefficients on the
//! imaginary frequency axis, plus surface-plasmon/polariton dispersion.
//!
//! Reflection coefficients are evaluated in algebraically rationalized form
//! (the naive quotient of square roots cancels badly near the static corner
//! `ξ → 0, η → ∞`); the rationalized forms are exact and make the vacuum
//! limit `ε ≡ 1` return exactly zero.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Field polarization relative to the plane of incidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Te,
    Tm,
}

/// Probe points used to validate custom permittivities at construction.
const CUSTOM_PROBES: [f64; 3] = [1e-8, 1e-6, 1e-4];

/// A user-supplied permittivity `ξ > 0 → ε(iξ)`, validated to have a finite
/// static limit and `ε >= 1`.
#[derive(Clone)]
pub struct CustomEps {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    eps_static: f64,
}

impl fmt::Debug for CustomEps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomEps").field("eps_static", &self.eps_static).finish()
    }
}

/// Planar surface models. The perfect reflector bypasses the permittivity
/// entirely (`R_TE = -1`, `R_TM = +1` at all frequencies); the plasma has a
/// divergent static permittivity and is rejected by evaluators that require
/// a finite `ε(0)`.
#[derive(Debug, Clone)]
pub enum SurfaceModel {
    PerfectReflector,
    Nondispersive { n: f64 },
    Plasma { omega_p: f64 },
    DispersiveDielectric { omega_p: f64, omega_t: f64 },
    Custom(CustomEps),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter {name} = {value}: requires {requirement}")]
    InvalidParameter { name: &'static str, value: f64, requirement: &'static str },
    #[error("operation `{op}` is not supported for the {model} model")]
    Unsupported { model: &'static str, op: &'static str },
    #[error("custom permittivity rejected: {reason} (probed at xi = 1e-8, 1e-6, 1e-4)")]
    CustomRejected { reason: &'static str },
    #[error("no surface mode at k_par = {k_par}: the dispersive polariton is bound only for k_par > omega_t = {omega_t}")]
    NoSurfaceMode { k_par: f64, omega_t: f64 },
    #[error("invalid imaginary-frequency point (xi = {xi}, eta = {eta}): requires xi > 0 and eta >= 1")]
    InvalidPoint { xi: f64, eta: f64 },
}

/// A point on the rotated contour: imaginary frequency `ξ = iω` and
/// `η = k_z/ω`, the cosine of the complex angle of incidence (`η = 1` is
/// grazing, `η → ∞` the static corner).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryFrequencyPoint {
    pub xi: f64,
    pub eta: f64,
}

impl ImaginaryFrequencyPoint {
    pub fn new(xi: f64, eta: f64) -> Result<Self, ModelError> {
        if !(xi > 0.0) || !xi.is_finite() || !(eta >= 1.0) || !eta.is_finite() {
            return Err(ModelError::InvalidPoint { xi, eta });
        }
        Ok(ImaginaryFrequencyPoint { xi, eta })
    }
}

/// Surface plasmon/polariton data at a given parallel wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePlasmonPoint {
    pub k_par: f64,
    pub omega_sp: f64,
    /// Vacuum-side decay constant `sqrt(k_par^2 - omega_sp^2)`, real > 0.
    pub kappa: f64,
    /// Real-axis permittivity at the mode frequency; `< -1` on the branch.
    pub eps_at_sp: f64,
    /// Norming function `(ε^4 - 1)/(ε^2 sqrt(-(1+ε)))`.
    pub p: f64,
}

impl SurfaceModel {
    pub fn nondispersive(n: f64) -> Result<Self, ModelError> {
        if !(n >= 1.0) || !n.is_finite() {
            return Err(ModelError::InvalidParameter { name: "n", value: n, requirement: "n >= 1" });
        }
        Ok(SurfaceModel::Nondispersive { n })
    }

    pub fn plasma(omega_p: f64) -> Result<Self, ModelError> {
        if !(omega_p > 0.0) || !omega_p.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "omega_p",
                value: omega_p,
                requirement: "omega_p > 0",
            });
        }
        Ok(SurfaceModel::Plasma { omega_p })
    }

    pub fn dispersive(omega_p: f64, omega_t: f64) -> Result<Self, ModelError> {
        if !(omega_p > 0.0) || !omega_p.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "omega_p",
                value: omega_p,
                requirement: "omega_p > 0",
            });
        }
        if !(omega_t > 0.0) || !omega_t.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "omega_t",
                value: omega_t,
                requirement: "omega_t > 0",
            });
        }
        Ok(SurfaceModel::DispersiveDielectric { omega_p, omega_t })
    }

    /// Builds a custom model from `ξ > 0 → ε(iξ)`. The function is probed at
    /// small `ξ` to verify a finite static limit and `ε >= 1`; permittivities
    /// that diverge at `ξ → 0` must use the `Plasma` variant instead.
    pub fn custom<F>(f: F) -> Result<Self, ModelError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let mut probes = [0.0f64; 3];
        for (slot, &xi) in probes.iter_mut().zip(CUSTOM_PROBES.iter()) {
            let e = f(xi);
            if !e.is_finite() {
                return Err(ModelError::CustomRejected { reason: "epsilon(i xi) is not finite" });
            }
            if e < 1.0 - 1e-9 {
                return Err(ModelError::CustomRejected { reason: "epsilon(i xi) < 1" });
            }
            *slot = e;
        }
        // a static divergence shows up as strong growth toward smaller xi
        if probes[0] > 2.0 * probes[1] || probes[1] > 2.0 * probes[2] {
            return Err(ModelError::CustomRejected { reason: "static limit appears divergent" });
        }
        Ok(SurfaceModel::Custom(CustomEps { f: Arc::new(f), eps_static: probes[0] }))
    }

    pub(crate) fn kind(&self) -> &'static str {
        match self {
            SurfaceModel::PerfectReflector => "perfect-reflector",
            SurfaceModel::Nondispersive { .. } => "nondispersive",
            SurfaceModel::Plasma { .. } => "plasma",
            SurfaceModel::DispersiveDielectric { .. } => "dispersive-dielectric",
            SurfaceModel::Custom(_) => "custom",
        }
    }

    /// Permittivity on the imaginary frequency axis, `ε(iξ) >= 1`.
    pub fn epsilon_iw(&self, xi: f64) -> Result<f64, ModelError> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "xi",
                value: xi,
                requirement: "xi > 0",
            });
        }
        match self {
            SurfaceModel::PerfectReflector => Err(ModelError::Unsupported {
                model: "perfect-reflector",
                op: "epsilon_iw",
            }),
            SurfaceModel::Nondispersive { n } => Ok(n * n),
            SurfaceModel::Plasma { omega_p } => Ok(1.0 + omega_p * omega_p / (xi * xi)),
            SurfaceModel::DispersiveDielectric { omega_p, omega_t } => {
                Ok(1.0 + omega_p * omega_p / (xi * xi + omega_t * omega_t))
            }
            SurfaceModel::Custom(c) => Ok((c.f)(xi)),
        }
    }

    /// Static permittivity `ε(0)`, `None` when it diverges.
    pub fn eps_static(&self) -> Option<f64> {
        match self {
            SurfaceModel::PerfectReflector | SurfaceModel::Plasma { .. } => None,
            SurfaceModel::Nondispersive { n } => Some(n * n),
            SurfaceModel::DispersiveDielectric { omega_p, omega_t } => {
                Some(1.0 + omega_p * omega_p / (omega_t * omega_t))
            }
            SurfaceModel::Custom(c) => Some(c.eps_static),
        }
    }

    /// `(ε(0) - 1)/(ε(0) + 1)`; saturates at exactly 1 for the perfect
    /// reflector and the plasma (infinite static susceptibility).
    pub fn static_ratio(&self) -> f64 {
        match self.eps_static() {
            Some(e0) => (e0 - 1.0) / (e0 + 1.0),
            None => 1.0,
        }
    }

    /// `(ε(iξ) - ε(0))/ξ²`, the static-corner curvature of the permittivity.
    ///
    /// Exact for the built-in models. For custom models the quotient is
    /// frozen below `ξ = 1e-4` where the direct difference would drown in
    /// rounding.
    pub(crate) fn delta_eps_over_xi2(&self, xi: f64) -> Result<f64, ModelError> {
        match self {
            SurfaceModel::PerfectReflector | SurfaceModel::Plasma { .. } => {
                Err(ModelError::Unsupported { model: self.kind(), op: "delta_eps_over_xi2" })
            }
            SurfaceModel::Nondispersive { .. } => Ok(0.0),
            SurfaceModel::DispersiveDielectric { omega_p, omega_t } => {
                let wt2 = omega_t * omega_t;
                Ok(-omega_p * omega_p / (wt2 * (xi * xi + wt2)))
            }
            SurfaceModel::Custom(c) => {
                let x = xi.max(1e-4);
                Ok(((c.f)(x) - c.eps_static) / (x * x))
            }
        }
    }

    /// Fresnel reflection coefficient in the `(ξ, η)` parameterization.
    pub fn reflection_xi_eta(
        &self,
        pol: Polarization,
        pt: ImaginaryFrequencyPoint,
    ) -> Result<f64, ModelError> {
        if matches!(self, SurfaceModel::PerfectReflector) {
            return Err(ModelError::Unsupported {
                model: "perfect-reflector",
                op: "reflection_xi_eta (use the constants -1/+1)",
            });
        }
        let eps = self.epsilon_iw(pt.xi)?;
        Ok(reflection_xi_eta_eps(eps, pol, pt.eta))
    }

    /// Fresnel reflection coefficient in the `(ξ, k∥)` parameterization;
    /// accepts `ξ = 0` only for models with finite static permittivity.
    pub fn reflection_omega(
        &self,
        pol: Polarization,
        xi: f64,
        k_par: f64,
    ) -> Result<f64, ModelError> {
        if !(k_par > 0.0) || !k_par.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "k_par",
                value: k_par,
                requirement: "k_par > 0",
            });
        }
        if !(xi >= 0.0) || !xi.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "xi",
                value: xi,
                requirement: "xi >= 0",
            });
        }
        let eps = if xi == 0.0 {
            self.eps_static().ok_or(ModelError::Unsupported {
                model: self.kind(),
                op: "reflection_omega at xi = 0 (divergent static permittivity)",
            })?
        } else {
            self.epsilon_iw(xi)?
        };
        Ok(reflection_omega_eps(eps, pol, xi, k_par))
    }

    /// Surface plasmon/polariton point from the closed-form dispersion
    /// relation. Supported for the plasma (all `k_par > 0`) and the
    /// dispersive dielectric (`k_par > ω_T`; below that the polariton is not
    /// evanescent on the vacuum side).
    pub fn sp_dispersion(&self, k_par: f64) -> Result<SurfacePlasmonPoint, ModelError> {
        if !(k_par > 0.0) || !k_par.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "k_par",
                value: k_par,
                requirement: "k_par > 0",
            });
        }
        let (omega_p, omega_t) = match self {
            SurfaceModel::Plasma { omega_p } => (*omega_p, 0.0),
            SurfaceModel::DispersiveDielectric { omega_p, omega_t } => (*omega_p, *omega_t),
            _ => {
                return Err(ModelError::Unsupported { model: self.kind(), op: "sp_dispersion" });
            }
        };
        if k_par <= omega_t {
            return Err(ModelError::NoSurfaceMode { k_par, omega_t });
        }

        let k2 = k_par * k_par;
        let wt2 = omega_t * omega_t;
        let b = 0.5 * (omega_p * omega_p + wt2);
        let disc_sqrt = (k2 * k2 - k2 * wt2 + b * b).sqrt();
        // kappa^2 = sqrt(disc) - b, rationalized (exact cancellation of b^2)
        let kappa2 = k2 * (k2 - wt2) / (disc_sqrt + b);
        // omega^2 = k^2 - kappa^2, rationalized against the large-k corner
        let num = (k2 - wt2) * (wt2 + 2.0 * b) / (kappa2 + k2 - wt2);
        let omega2 = k2 * num / (disc_sqrt + b);
        let omega_sp = omega2.sqrt();
        let kappa = kappa2.sqrt();

        // real-axis permittivity at the mode frequency; delta = -(1 + eps)
        // is carried separately so the norming function stays finite where
        // eps itself rounds to -1
        let om2_minus_wt2 =
            (k2 - wt2) * (b + (b * b - k2 * wt2) / (disc_sqrt + k2)) / (disc_sqrt + b);
        let delta = (omega_p * omega_p - 2.0 * om2_minus_wt2) / om2_minus_wt2;
        if !(delta > 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "eps_at_sp",
                value: -1.0 - delta,
                requirement: "eps(omega_sp) < -1 on the surface-mode branch (k_par too large to resolve the mode in double precision)",
            });
        }
        let eps = -1.0 - delta;
        // p = (eps^4 - 1)/(eps^2 sqrt(delta)) = sqrt(delta)(2+delta)(eps^2+1)/eps^2
        let p = delta.sqrt() * (2.0 + delta) * (eps * eps + 1.0) / (eps * eps);
        Ok(SurfacePlasmonPoint { k_par, omega_sp, kappa, eps_at_sp: eps, p })
    }
}

/// `R_TE`/`R_TM` at permittivity `eps >= 1` in the `(ξ, η)` variables,
/// rationalized:
/// `R_TE = -(ε-1)/(η + s)²`, `R_TM = (ε-1)(η²(ε+1) - 1)/(ηε + s)²` with
/// `s = sqrt(ε - 1 + η²)`.
pub(crate) fn reflection_xi_eta_eps(eps: f64, pol: Polarization, eta: f64) -> f64 {
    let s = (eps - 1.0 + eta * eta).sqrt();
    match pol {
        Polarization::Te => {
            let d = eta + s;
            -(eps - 1.0) / (d * d)
        }
        Polarization::Tm => {
            let d = eta * eps + s;
            (eps - 1.0) * (eta * eta * (eps + 1.0) - 1.0) / (d * d)
        }
    }
}

/// Rationalized `(ξ, k∥)` forms:
/// `R_TE = -(ε-1)ξ²/(ρ + ρ_d)²`, `R_TM = (ε-1)(εξ² + (ε+1)k²)/(ερ + ρ_d)²`
/// with `ρ = sqrt(ξ² + k²)`, `ρ_d = sqrt(εξ² + k²)`.
pub(crate) fn reflection_omega_eps(eps: f64, pol: Polarization, xi: f64, k_par: f64) -> f64 {
    let k2 = k_par * k_par;
    let xi2 = xi * xi;
    let rho = (xi2 + k2).sqrt();
    let rho_d = (eps * xi2 + k2).sqrt();
    match pol {
        Polarization::Te => {
            let d = rho + rho_d;
            -(eps - 1.0) * xi2 / (d * d)
        }
        Polarization::Tm => {
            let d = eps * rho + rho_d;
            (eps - 1.0) * (eps * xi2 + (eps + 1.0) * k2) / (d * d)
        }
    }
}
