//! Conversion between natural units (c = ħ = ε₀ = 1) and laboratory units,
//! and the relative-shift estimate against the Dirac moment.

use crate::shifts::ScaledShift;
use thiserror::Error;

/// ħc in eV·nm (CODATA).
pub const HBAR_C_EV_NM: f64 = 197.3269804;
/// Fine-structure constant (CODATA).
pub const FINE_STRUCTURE: f64 = 7.2973525693e-3;
/// Electron mass in eV (CODATA).
pub const ELECTRON_MASS_EV: f64 = 0.51099895e6;

/// Laboratory-side inputs: a distance in nanometers and optional material
/// frequencies in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabInputs {
    pub z_nm: f64,
    pub omega_p_ev: Option<f64>,
    pub omega_t_ev: Option<f64>,
}

/// Dimensionless products governing the shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalProducts {
    pub omega_p_d: Option<f64>,
    pub omega_t_d: Option<f64>,
    /// Electron mass times distance, `m d = m[eV]·z[nm]/ħc`.
    pub m_d: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitsError {
    #[error("invalid lab input {name} = {value}: requires {requirement}")]
    Invalid { name: &'static str, value: f64, requirement: &'static str },
}

impl LabInputs {
    pub fn new(z_nm: f64, omega_p_ev: Option<f64>, omega_t_ev: Option<f64>) -> Result<Self, UnitsError> {
        if !(z_nm > 0.0) || !z_nm.is_finite() {
            return Err(UnitsError::Invalid { name: "z_nm", value: z_nm, requirement: "z > 0" });
        }
        for (name, v) in [("omega_p_ev", omega_p_ev), ("omega_t_ev", omega_t_ev)] {
            if let Some(v) = v {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(UnitsError::Invalid { name, value: v, requirement: ">= 0" });
                }
            }
        }
        Ok(LabInputs { z_nm, omega_p_ev, omega_t_ev })
    }
}

/// `ω d = ω[eV]·z[nm]/ħc[eV·nm]`, and likewise for the electron mass.
pub fn to_natural(lab: &LabInputs) -> NaturalProducts {
    let conv = |ev: f64| ev * lab.z_nm / HBAR_C_EV_NM;
    NaturalProducts {
        omega_p_d: lab.omega_p_ev.map(conv),
        omega_t_d: lab.omega_t_ev.map(conv),
        m_d: conv(ELECTRON_MASS_EV),
    }
}

/// Recovers the eV frequency from a dimensionless product at the given
/// distance (inverse of [`to_natural`]).
pub fn to_ev(omega_d: f64, z_nm: f64) -> f64 {
    omega_d * HBAR_C_EV_NM / z_nm
}

/// Relative shift `Δμ/μ` against the Dirac moment `μ = e/2m`:
///
/// `Δμ/μ = ŝ · (α/4π) · (ƛ_C/z)²`
///
/// with `ƛ_C = ħc/m` the reduced Compton wavelength. Scales exactly as
/// `1/z²` at fixed `ŝ`.
pub fn relative_shift(s_hat: &ScaledShift, lab: &LabInputs) -> f64 {
    let lambda_c_nm = HBAR_C_EV_NM / ELECTRON_MASS_EV;
    let ratio = lambda_c_nm / lab.z_nm;
    s_hat.s_hat * FINE_STRUCTURE / (4.0 * std::f64::consts::PI) * ratio * ratio
}

/// The `ŝ = 1` prefactor of [`relative_shift`] at 1 nm, handy for
/// order-of-magnitude checks: about `8.66e-11`.
pub fn pm_relative_scale_at_1nm() -> f64 {
    let lambda_c_nm = HBAR_C_EV_NM / ELECTRON_MASS_EV;
    FINE_STRUCTURE / (4.0 * std::f64::consts::PI) * lambda_c_nm * lambda_c_nm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shifts::{pm_shift, Geometry, Orientation};

    #[test]
    fn hbar_c_definition() {
        let lab = LabInputs::new(HBAR_C_EV_NM, Some(1.0), None).unwrap();
        let nat = to_natural(&lab);
        assert!((nat.omega_p_d.unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_frequency_maps_to_zero() {
        let lab = LabInputs::new(5.0, Some(0.0), None).unwrap();
        assert_eq!(to_natural(&lab).omega_p_d.unwrap(), 0.0);
    }

    #[test]
    fn one_nm_times_two_ev() {
        let lab = LabInputs::new(1.0, Some(1.973269804), None).unwrap();
        let nat = to_natural(&lab);
        assert!((nat.omega_p_d.unwrap() - 0.01).abs() < 1e-12);
    }

    #[test]
    fn round_trip() {
        let lab = LabInputs::new(13.7, Some(2.5), Some(0.031)).unwrap();
        let nat = to_natural(&lab);
        assert!((to_ev(nat.omega_p_d.unwrap(), 13.7) - 2.5).abs() < 2.5 * 1e-12);
        assert!((to_ev(nat.omega_t_d.unwrap(), 13.7) - 0.031).abs() < 0.031 * 1e-12);
        assert!((to_ev(nat.m_d, 13.7) - ELECTRON_MASS_EV).abs() < ELECTRON_MASS_EV * 1e-12);
    }

    #[test]
    fn relative_shift_scales_as_inverse_square() {
        let s = pm_shift(Orientation::Perpendicular, Geometry::new(1.0).unwrap());
        let r1 = relative_shift(&s, &LabInputs::new(1.0, None, None).unwrap());
        let r10 = relative_shift(&s, &LabInputs::new(10.0, None, None).unwrap());
        assert!((r1 / r10 - 100.0).abs() < 1e-9);
    }

    #[test]
    fn pm_scale_magnitude() {
        // alpha/(4 pi) * lambda_C^2 is 8.66e-11 nm^2
        let v = pm_relative_scale_at_1nm();
        assert!((v - 8.66e-11).abs() < 0.01e-11, "{v}");
    }

    #[test]
    fn invalid_inputs() {
        assert!(LabInputs::new(0.0, None, None).is_err());
        assert!(LabInputs::new(1.0, Some(-1.0), None).is_err());
    }
}
