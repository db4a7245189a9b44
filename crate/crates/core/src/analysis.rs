//! Parameter sweeps, dispersive-peak search, enhancement ratios and the
//! limit-commutation audit.

use crate::models::SurfaceModel;
use crate::quadrature::QuadratureConfig;
use crate::shifts::{
    general_shift, nondisp_closed, plasma_total, small_distance_asymptote, Geometry, Method,
    Orientation, ScaledShift, ShiftError,
};
use crate::units;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptVariable {
    /// Square root of the static susceptibility. For the dispersive family
    /// this fixes `ωp = x·ωT` at constant `ωT d`; for the nondispersive
    /// family `n = sqrt(1 + x²)`.
    SqrtChi0,
    /// The dimensionless product `ωp d`.
    OmegaPD,
    /// Scaled distance; same product as `OmegaPD` but labelled as distance.
    Distance,
}

impl SweptVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweptVariable::SqrtChi0 => "sqrt_chi0",
            SweptVariable::OmegaPD => "omega_p_d",
            SweptVariable::Distance => "distance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepFamily {
    Nondispersive,
    Plasma,
    /// Dispersive dielectric; `omega_t_d` is required for `SqrtChi0` sweeps,
    /// `omega_t_over_omega_p` for distance sweeps.
    Dispersive { omega_t_d: Option<f64>, omega_t_over_omega_p: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub variable: SweptVariable,
    pub lo: f64,
    pub hi: f64,
    pub points: u32,
    pub scale: SweepScale,
    pub orientation: Orientation,
}

/// One sweep row. Failed rows carry the error text instead of a value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub s_hat: Option<f64>,
    pub est_err: Option<f64>,
    pub method: Option<Method>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub variable: &'static str,
    pub orientation: Orientation,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakReport {
    pub found: bool,
    /// `sqrt(χ(0))` at the extremum.
    pub location: Option<f64>,
    /// Scaled shift at the extremum (signed).
    pub height: Option<f64>,
    /// Peak height over the nondispersive value at the same static
    /// susceptibility.
    pub enhancement_vs_nondisp: Option<f64>,
    pub orientation: Orientation,
    pub omega_t_d: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheck {
    pub id: &'static str,
    pub description: &'static str,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitAuditReport {
    pub checks: Vec<LimitCheck>,
}

impl LimitAuditReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("invalid sweep specification: {0}")]
    InvalidSpec(&'static str),
    #[error("every sweep row failed; first error: {0}")]
    AllRowsFailed(String),
    #[error("no dispersive peak exists at omega_t_d = {omega_t_d} ({orientation:?}); the enhancement ratio is undefined")]
    NoPeak { omega_t_d: f64, orientation: Orientation },
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

impl From<crate::models::ModelError> for AnalysisError {
    fn from(e: crate::models::ModelError) -> Self {
        AnalysisError::Shift(ShiftError::Model(e))
    }
}

/// Peak search window in `sqrt(χ(0))`; brackets the expected extremum near 2
/// with margin.
const PEAK_WINDOW: (f64, f64) = (1.0, 5.0);
const PEAK_COARSE_POINTS: u32 = 25;
const PEAK_LOCATION_TOL: f64 = 1e-4;

fn grid(lo: f64, hi: f64, points: u32, scale: SweepScale) -> Vec<f64> {
    let n = points.max(2) as usize;
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            match scale {
                SweepScale::Linear => lo + t * (hi - lo),
                SweepScale::Log => lo * (hi / lo).powf(t),
            }
        })
        .collect()
}

fn eval_point(
    family: &SweepFamily,
    variable: SweptVariable,
    x: f64,
    orientation: Orientation,
    cfg: &QuadratureConfig,
) -> Result<ScaledShift, AnalysisError> {
    let unit = Geometry::new(1.0).expect("unit distance");
    match (family, variable) {
        (SweepFamily::Nondispersive, SweptVariable::SqrtChi0) => {
            let n = (1.0 + x * x).sqrt();
            Ok(nondisp_closed(n, orientation, unit)?)
        }
        (SweepFamily::Plasma, SweptVariable::OmegaPD | SweptVariable::Distance) => {
            Ok(plasma_total(x, orientation, unit, cfg)?)
        }
        (SweepFamily::Dispersive { omega_t_d: Some(wtd), .. }, SweptVariable::SqrtChi0) => {
            let model = SurfaceModel::dispersive(x * wtd, *wtd)?;
            Ok(general_shift(&model, orientation, unit, cfg)?)
        }
        (
            SweepFamily::Dispersive { omega_t_over_omega_p: Some(ratio), .. },
            SweptVariable::OmegaPD | SweptVariable::Distance,
        ) => {
            let model = SurfaceModel::dispersive(1.0, *ratio)?;
            Ok(general_shift(&model, orientation, Geometry::new(x)?, cfg)?)
        }
        _ => Err(AnalysisError::InvalidSpec(
            "family and swept variable are incompatible or a fixed parameter is missing",
        )),
    }
}

/// Runs a sweep. Rows are independent; per-row failures are recorded in the
/// row rather than aborting, and only an entirely failed sweep is an error.
pub fn sweep(spec: &SweepSpec, cfg: &QuadratureConfig) -> Result<SweepResult, AnalysisError> {
    if !(spec.lo < spec.hi) || !spec.lo.is_finite() || !spec.hi.is_finite() {
        return Err(AnalysisError::InvalidSpec("range must satisfy lo < hi"));
    }
    if spec.points < 2 {
        return Err(AnalysisError::InvalidSpec("points must be >= 2"));
    }
    if spec.scale == SweepScale::Log && spec.lo <= 0.0 {
        return Err(AnalysisError::InvalidSpec("log scale requires lo > 0"));
    }
    // reject inconsistent family/variable combinations up front
    eval_point(&spec.family, spec.variable, spec.lo.max(1e-300), spec.orientation, cfg)
        .err()
        .map_or(Ok(()), |e| match e {
            AnalysisError::InvalidSpec(m) => Err(AnalysisError::InvalidSpec(m)),
            _ => Ok(()),
        })?;

    let xs = grid(spec.lo, spec.hi, spec.points, spec.scale);
    let rows: Vec<SweepRow> = xs
        .iter()
        .map(|&x| match eval_point(&spec.family, spec.variable, x, spec.orientation, cfg) {
            Ok(s) => SweepRow {
                x,
                s_hat: Some(s.s_hat),
                est_err: Some(s.est_err),
                method: Some(s.method),
                error: None,
            },
            Err(e) => SweepRow { x, s_hat: None, est_err: None, method: None, error: Some(e.to_string()) },
        })
        .collect();

    if rows.iter().all(|r| r.error.is_some()) {
        let first = rows[0].error.clone().unwrap_or_default();
        return Err(AnalysisError::AllRowsFailed(first));
    }
    Ok(SweepResult { variable: spec.variable.as_str(), orientation: spec.orientation, rows })
}

fn dispersive_shift_at(
    sqrt_chi0: f64,
    omega_t_d: f64,
    orientation: Orientation,
    cfg: &QuadratureConfig,
) -> Result<f64, AnalysisError> {
    let model = SurfaceModel::dispersive(sqrt_chi0 * omega_t_d, omega_t_d)?;
    Ok(general_shift(&model, orientation, Geometry::new(1.0).expect("unit"), cfg)?.s_hat)
}

/// Locates the dispersive-peak extremum of `|ŝ|` over
/// `sqrt(χ(0)) ∈ [1, 5]` by coarse grid plus golden-section refinement.
/// "No peak" (no interior extremum) is a report, not an error.
pub fn find_peak(
    omega_t_d: f64,
    orientation: Orientation,
    cfg: &QuadratureConfig,
) -> Result<PeakReport, AnalysisError> {
    find_peak_with_grid(omega_t_d, orientation, cfg, PEAK_COARSE_POINTS)
}

pub(crate) fn find_peak_with_grid(
    omega_t_d: f64,
    orientation: Orientation,
    cfg: &QuadratureConfig,
    coarse_points: u32,
) -> Result<PeakReport, AnalysisError> {
    if !(omega_t_d > 0.0) || !omega_t_d.is_finite() {
        return Err(AnalysisError::InvalidSpec("omega_t_d must be > 0"));
    }
    let magnitude = |x: f64| -> Result<f64, AnalysisError> {
        Ok(dispersive_shift_at(x, omega_t_d, orientation, cfg)?.abs())
    };

    let xs = grid(PEAK_WINDOW.0, PEAK_WINDOW.1, coarse_points, SweepScale::Linear);
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    let mut values = Vec::with_capacity(xs.len());
    for &x in &xs {
        let v = magnitude(x)?;
        values.push(v);
        if v > best_v {
            best_v = v;
            best_i = values.len() - 1;
        }
    }
    let no_peak = PeakReport {
        found: false,
        location: None,
        height: None,
        enhancement_vs_nondisp: None,
        orientation,
        omega_t_d,
    };
    if best_i == 0 || best_i == xs.len() - 1 {
        return Ok(no_peak);
    }

    // golden-section refinement of the maximum of |s| on the bracketing cell
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (xs[best_i - 1], xs[best_i + 1]);
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let mut fc = magnitude(c)?;
    let mut fd = magnitude(d)?;
    while b - a > PEAK_LOCATION_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = magnitude(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = magnitude(d)?;
        }
    }
    let location = 0.5 * (a + b);
    let height = dispersive_shift_at(location, omega_t_d, orientation, cfg)?;
    let n_same_chi0 = (1.0 + location * location).sqrt();
    let nondisp = nondisp_closed(n_same_chi0, orientation, Geometry::new(1.0).expect("unit"))?;
    Ok(PeakReport {
        found: true,
        location: Some(location),
        height: Some(height),
        enhancement_vs_nondisp: Some(height / nondisp.s_hat),
        orientation,
        omega_t_d,
    })
}

/// Ratio of the dispersive peak height to the nondispersive shift at the
/// same static susceptibility, for lab inputs `ωT` in eV and `z` in nm.
/// Errors when no peak exists (the ratio is undefined there).
pub fn enhancement_ratio(
    omega_t_ev: f64,
    z_nm: f64,
    orientation: Orientation,
    cfg: &QuadratureConfig,
) -> Result<f64, AnalysisError> {
    let lab = units::LabInputs::new(z_nm, None, Some(omega_t_ev))
        .map_err(|_| AnalysisError::InvalidSpec("invalid lab inputs"))?;
    let omega_t_d = units::to_natural(&lab).omega_t_d.expect("omega_t provided");
    let peak = find_peak(omega_t_d, orientation, cfg)?;
    match peak.enhancement_vs_nondisp {
        Some(r) if peak.found => Ok(r),
        _ => Err(AnalysisError::NoPeak { omega_t_d, orientation }),
    }
}

/// The four model-pair limit checks:
/// (a) nondispersive `n → ∞` diverges while the perfect reflector stays
///     finite; (b) plasma `ωp → ∞` reproduces the perfect reflector;
/// (c) dispersive `ωT → 0` at fixed distance does *not* reproduce the
///     plasma; (d) the short-distance surface-mode asymptotes of dispersive
///     and plasma *do* agree as `ωT → 0`.
pub fn limit_audit(cfg: &QuadratureConfig) -> Result<LimitAuditReport, AnalysisError> {
    let unit = Geometry::new(1.0).expect("unit");
    let mut checks = Vec::new();

    // (a) nondispersive grows without bound; ratio to the PM value is large
    // and negative
    let s50 = nondisp_closed(50.0, Orientation::Perpendicular, unit)?;
    let ratio = s50.s_hat / 1.0;
    checks.push(LimitCheck {
        id: "nondispersive-vs-pm",
        description: "nondispersive n->inf diverges; s(n=50)/s_pm < -25",
        measured: ratio,
        bound: -25.0,
        passed: ratio < -25.0,
    });

    // (b) plasma -> PM; the approach is first order in 1/(omega_p d), so the
    // check sits at omega_p d = 1000 where the residual is ~0.005
    let sp = plasma_total(1000.0, Orientation::Perpendicular, unit, cfg)?;
    let dev = (sp.s_hat - 1.0).abs();
    checks.push(LimitCheck {
        id: "plasma-vs-pm",
        description: "plasma omega_p->inf reproduces the perfect reflector (checked at omega_p d = 1000)",
        measured: dev,
        bound: 0.05,
        passed: dev < 0.05,
    });

    // (c) dispersive omega_t -> 0 at fixed distance does NOT give the plasma
    let disp = SurfaceModel::dispersive(1.0, 1e-3)?;
    let sd = general_shift(&disp, Orientation::Perpendicular, unit, cfg)?;
    let spl = plasma_total(1.0, Orientation::Perpendicular, unit, cfg)?;
    let rel = ((sd.s_hat - spl.s_hat) / spl.s_hat).abs();
    checks.push(LimitCheck {
        id: "dispersive-vs-plasma-general",
        description: "dispersive omega_t->0 at omega_p d = 1 disagrees with the plasma",
        measured: rel,
        bound: 0.1,
        passed: rel > 0.1,
    });

    // (d) the short-distance surface-mode asymptotes DO agree as omega_t -> 0
    let plasma_model = SurfaceModel::plasma(0.01)?;
    let nearly_plasma = SurfaceModel::dispersive(0.01, 1e-9)?;
    let a = small_distance_asymptote(&plasma_model, Orientation::Perpendicular, unit)?;
    let b = small_distance_asymptote(&nearly_plasma, Orientation::Perpendicular, unit)?;
    let rel_d = ((a.s_hat - b.s_hat) / a.s_hat).abs();
    checks.push(LimitCheck {
        id: "dispersive-vs-plasma-surface-mode",
        description: "short-distance surface-mode asymptotes agree as omega_t -> 0",
        measured: rel_d,
        bound: 1e-10,
        passed: rel_d < 1e-10,
    });

    Ok(LimitAuditReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fast_cfg() -> QuadratureConfig {
        QuadratureConfig { rel_tol: 1e-7, abs_tol: 1e-12, ..QuadratureConfig::default() }
    }

    #[test]
    fn plasma_sweep_approaches_pm() {
        let spec = SweepSpec {
            family: SweepFamily::Plasma,
            variable: SweptVariable::OmegaPD,
            lo: 0.1,
            hi: 50.0,
            points: 6,
            scale: SweepScale::Log,
            orientation: Orientation::Perpendicular,
        };
        let r = sweep(&spec, &fast_cfg()).unwrap();
        assert_eq!(r.rows.len(), 6);
        let last = r.rows.last().unwrap();
        assert!((last.s_hat.unwrap() - 1.0).abs() < 0.15, "{:?}", last);
        // magnitude at the low end is much larger (short-distance growth)
        assert!(r.rows[0].s_hat.unwrap().abs() > 5.0);
    }

    #[test]
    fn nondispersive_sweep_starts_at_vacuum() {
        let spec = SweepSpec {
            family: SweepFamily::Nondispersive,
            variable: SweptVariable::SqrtChi0,
            lo: 0.0,
            hi: 3.0,
            points: 4,
            scale: SweepScale::Linear,
            orientation: Orientation::Perpendicular,
        };
        let r = sweep(&spec, &fast_cfg()).unwrap();
        assert_eq!(r.rows[0].s_hat.unwrap(), 0.0);
        assert!(r.rows.iter().all(|row| row.error.is_none()));
    }

    #[test]
    fn sweep_records_row_failures_without_aborting() {
        // x = 0 makes omega_p = 0, an invalid dispersive model; later rows fine
        let spec = SweepSpec {
            family: SweepFamily::Dispersive { omega_t_d: Some(0.5), omega_t_over_omega_p: None },
            variable: SweptVariable::SqrtChi0,
            lo: 0.0,
            hi: 2.0,
            points: 3,
            scale: SweepScale::Linear,
            orientation: Orientation::Perpendicular,
        };
        let r = sweep(&spec, &fast_cfg()).unwrap();
        assert!(r.rows[0].error.is_some());
        assert!(r.rows[2].error.is_none());
    }

    #[test]
    fn sweep_fails_when_every_row_fails() {
        // negative sqrt_chi0 makes every dispersive model invalid
        let spec = SweepSpec {
            family: SweepFamily::Dispersive { omega_t_d: Some(0.5), omega_t_over_omega_p: None },
            variable: SweptVariable::SqrtChi0,
            lo: -2.0,
            hi: -1.0,
            points: 3,
            scale: SweepScale::Linear,
            orientation: Orientation::Perpendicular,
        };
        assert!(matches!(sweep(&spec, &fast_cfg()), Err(AnalysisError::AllRowsFailed(_))));
    }

    #[test]
    fn sweep_rejects_bad_specs() {
        let mut spec = SweepSpec {
            family: SweepFamily::Plasma,
            variable: SweptVariable::SqrtChi0,
            lo: 0.1,
            hi: 1.0,
            points: 3,
            scale: SweepScale::Linear,
            orientation: Orientation::Perpendicular,
        };
        assert!(matches!(sweep(&spec, &fast_cfg()), Err(AnalysisError::InvalidSpec(_))));
        spec.variable = SweptVariable::OmegaPD;
        spec.hi = 0.05;
        assert!(sweep(&spec, &fast_cfg()).is_err());
    }

    #[test]
    fn dispersive_sqrt_chi0_sweep_is_single_peaked() {
        // fixed omega_t_d = 0.02: |s| rises to one interior maximum and
        // falls, with no secondary extrema on a coarse grid
        let spec = SweepSpec {
            family: SweepFamily::Dispersive { omega_t_d: Some(0.02), omega_t_over_omega_p: None },
            variable: SweptVariable::SqrtChi0,
            lo: 0.5,
            hi: 10.0,
            points: 12,
            scale: SweepScale::Linear,
            orientation: Orientation::Perpendicular,
        };
        let r = sweep(&spec, &fast_cfg()).unwrap();
        let mags: Vec<f64> = r.rows.iter().map(|row| row.s_hat.unwrap().abs()).collect();
        let sign_changes = mags
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect::<Vec<_>>()
            .windows(2)
            .filter(|d| d[0].signum() != d[1].signum())
            .count();
        assert_eq!(sign_changes, 1, "magnitudes {mags:?}");
        let peak_idx = mags.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert!(peak_idx > 0 && peak_idx < mags.len() - 1);
    }

    #[test]
    fn dispersive_distance_sweep_runs() {
        // fixed omega_t/omega_p ratio, swept scaled distance
        let spec = SweepSpec {
            family: SweepFamily::Dispersive { omega_t_d: None, omega_t_over_omega_p: Some(0.5) },
            variable: SweptVariable::Distance,
            lo: 0.5,
            hi: 20.0,
            points: 4,
            scale: SweepScale::Log,
            orientation: Orientation::Perpendicular,
        };
        let r = sweep(&spec, &fast_cfg()).unwrap();
        assert!(r.rows.iter().all(|row| row.error.is_none()));
        // at omega_p d = 20 with omega_t = omega_p/2 the static response
        // dominates: close to the substitution value at n_eff = sqrt(5)
        let far = r.rows.last().unwrap().s_hat.unwrap();
        let n_eff = 5f64.sqrt();
        let sub = nondisp_closed(n_eff, Orientation::Perpendicular, Geometry::new(1.0).unwrap())
            .unwrap()
            .s_hat;
        assert!((far - sub).abs() < 0.05 * sub.abs(), "{far} vs {sub}");
    }

    #[test]
    fn sweeps_are_deterministic() {
        let spec = SweepSpec {
            family: SweepFamily::Plasma,
            variable: SweptVariable::OmegaPD,
            lo: 0.5,
            hi: 5.0,
            points: 4,
            scale: SweepScale::Log,
            orientation: Orientation::Parallel,
        };
        let a = sweep(&spec, &fast_cfg()).unwrap();
        let b = sweep(&spec, &fast_cfg()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn peak_near_two_at_small_omega_t_d() {
        let peak = find_peak(0.01, Orientation::Perpendicular, &fast_cfg()).unwrap();
        assert!(peak.found);
        let loc = peak.location.unwrap();
        assert!((loc - 2.0).abs() < 0.5, "location {loc}");
        assert!(peak.height.unwrap() < 0.0);
        assert!(peak.enhancement_vs_nondisp.unwrap() > 10.0);
    }

    #[test]
    fn no_peak_at_large_omega_t_d() {
        let peak = find_peak(0.2, Orientation::Perpendicular, &fast_cfg()).unwrap();
        assert!(!peak.found);
        assert!(peak.location.is_none());
    }

    #[test]
    fn peak_heights_scale_inversely_with_omega_t_d() {
        let p1 = find_peak(0.01, Orientation::Perpendicular, &fast_cfg()).unwrap();
        let p2 = find_peak(0.02, Orientation::Perpendicular, &fast_cfg()).unwrap();
        let ratio = p1.height.unwrap() / p2.height.unwrap();
        assert!((ratio - 2.0).abs() < 0.4, "ratio {ratio}");
    }

    #[test]
    fn peak_location_stable_under_grid_doubling() {
        let a = find_peak_with_grid(0.02, Orientation::Perpendicular, &fast_cfg(), 25).unwrap();
        let b = find_peak_with_grid(0.02, Orientation::Perpendicular, &fast_cfg(), 50).unwrap();
        let cell = (PEAK_WINDOW.1 - PEAK_WINDOW.0) / 24.0;
        assert!((a.location.unwrap() - b.location.unwrap()).abs() <= cell);
    }

    #[test]
    fn enhancement_invariant_under_rescaling() {
        // omega_t -> 2 omega_t, z -> z/2 leaves omega_t_d unchanged
        let a = enhancement_ratio(1.0, 1.0, Orientation::Perpendicular, &fast_cfg()).unwrap();
        let b = enhancement_ratio(2.0, 0.5, Orientation::Perpendicular, &fast_cfg()).unwrap();
        assert!((a - b).abs() < 1e-9 * a.abs());
    }

    #[test]
    fn enhancement_errors_without_peak() {
        // omega_t z of 60 eV nm is far outside the peak regime
        let r = enhancement_ratio(60.0, 1.0, Orientation::Perpendicular, &fast_cfg());
        assert!(matches!(r, Err(AnalysisError::NoPeak { .. })));
    }

    #[test]
    fn limit_audit_passes() {
        let report = limit_audit(&fast_cfg()).unwrap();
        assert_eq!(report.checks.len(), 4);
        for c in &report.checks {
            assert!(c.passed, "{}: measured {} bound {}", c.id, c.measured, c.bound);
        }
        assert!(report.all_passed());
    }
}
