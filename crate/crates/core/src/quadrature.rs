//! Adaptive numerical integration primitives.
//!
//! Three entry points cover everything the shift evaluators need:
//!
//! * [`integrate_1d`] — globally adaptive Gauss–Kronrod (7–15) panel
//!   integration on a finite interval, bisecting the worst panel first.
//! * [`integrate_exp_tail`] — semi-infinite integrals whose integrand is
//!   bounded by `C·e^{-decay·(x-a)}·poly(x)`; the range is truncated where
//!   the envelope drops below `e^{-tail_cut}` and the discarded tail bound
//!   is folded into the error estimate.
//! * [`integrate_wedge`] — the two-dimensional integral
//!   `∫_0^∞ dκ e^{-2κd} ∫_0^κ dξ g(ξ,κ)` over the wedge `0 < ξ < κ`,
//!   with the inner variable mapped to `ξ = κu`, `u ∈ (0,1)`.

use thiserror::Error;

/// Tolerances and limits shared by all integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Relative tolerance on the accumulated value.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Maximum number of panel bisections before giving up.
    pub max_subdivisions: u32,
    /// Truncation threshold `W`: exponential tails are cut where the
    /// envelope satisfies `e^{-v} < e^{-W}`.
    pub tail_cut: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            tail_cut: 46.0,
        }
    }
}

impl QuadratureConfig {
    /// Checks the configuration invariants.
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(QuadratureError::InvalidConfig("rel_tol must be > 0"));
        }
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(QuadratureError::InvalidConfig("abs_tol must be > 0"));
        }
        if self.max_subdivisions < 10 {
            return Err(QuadratureError::InvalidConfig("max_subdivisions must be >= 10"));
        }
        if !(self.tail_cut >= 30.0) {
            return Err(QuadratureError::InvalidConfig("tail_cut must be >= 30"));
        }
        Ok(())
    }
}

/// Outcome of a quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error, including any truncated-tail bound.
    pub est_err: f64,
    /// Number of integrand evaluations.
    pub evaluations: u64,
    /// True when `est_err <= max(rel_tol*|value|, abs_tol)` was reached.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("decay rate must be positive and finite, got {0}")]
    InvalidDecay(f64),
    #[error("distance must be positive and finite, got {0}")]
    InvalidDistance(f64),
}

// 15-point Kronrod nodes (positive half) with the embedded 7-point Gauss
// rule on the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Single Gauss–Kronrod 15-point panel: returns `(integral, err, resabs)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut fv = [0.0_f64; 15];
    fv[7] = fc;

    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    let mut resabs = resk.abs();

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        let fsum = f1 + f2;
        resk += WGK[j] * fsum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            // XGK[1], XGK[3], XGK[5] carry the embedded Gauss rule
            resg += WG[j / 2] * fsum;
        }
    }

    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();

    // QUADPACK-style rescaling of the raw |K - G| difference
    let raw = ((resk - resg) * half).abs();
    let mut err = raw;
    if resasc != 0.0 && raw != 0.0 {
        let scale = (200.0 * raw / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }

    (value, err, resabs)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    resabs: f64,
}

/// Globally adaptive integration of `f` on `[a, b]`.
///
/// Endpoint-integrable singularities (up to `1/√x` strength) are handled by
/// bisection alone; the panel rule never evaluates the endpoints. On reaching
/// `max_subdivisions` the best estimate is returned with `converged = false`.
pub fn integrate_1d<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadratureError> {
    cfg.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::InvalidInterval { a, b });
    }
    Ok(adaptive(&f, a, b, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions))
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: u32,
) -> QuadResult {
    let (v0, e0, r0) = gk15(f, a, b);
    let mut evaluations: u64 = 15;
    let mut panels = vec![Panel { a, b, value: v0, err: e0, resabs: r0 }];
    let mut subdivisions: u32 = 0;
    let mut converged;

    loop {
        let total_value: f64 = panels.iter().map(|p| p.value).sum();
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        let total_resabs: f64 = panels.iter().map(|p| p.resabs).sum();
        let tol = (rel_tol * total_value.abs()).max(abs_tol);
        // accepting the roundoff floor: further bisection cannot reduce the
        // summed 50*eps*resabs noise bounds
        let floor = 100.0 * f64::EPSILON * total_resabs;
        converged = total_err <= tol.max(floor);
        if converged || subdivisions >= max_subdivisions {
            return QuadResult { value: total_value, est_err: total_err, evaluations, converged };
        }

        // bisect the panel with the largest error; ties break on the left edge
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| {
                p.err.total_cmp(&q.err).then(q.a.total_cmp(&p.a))
            })
            .expect("panel list is never empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);

        // a panel narrower than a few ulps cannot be refined further
        let width_floor = f64::EPSILON * (p.a.abs() + p.b.abs() + 1.0);
        if !(p.a < mid && mid < p.b) || (p.b - p.a) < width_floor {
            let mut r = adaptive_finish(panels, p);
            r.evaluations = evaluations;
            return r;
        }

        let (v1, e1, r1) = gk15(f, p.a, mid);
        let (v2, e2, r2) = gk15(f, mid, p.b);
        evaluations += 30;
        subdivisions += 1;
        panels.push(Panel { a: p.a, b: mid, value: v1, err: e1, resabs: r1 });
        panels.push(Panel { a: mid, b: p.b, value: v2, err: e2, resabs: r2 });
    }
}

fn adaptive_finish(mut panels: Vec<Panel>, stuck: Panel) -> QuadResult {
    panels.push(stuck);
    let total_value: f64 = panels.iter().map(|p| p.value).sum();
    let total_err: f64 = panels.iter().map(|p| p.err).sum();
    QuadResult { value: total_value, est_err: total_err, evaluations: 0, converged: false }
}

/// Integrates `f` on `(a, ∞)` assuming `|f(x)| <= C·e^{-decay·(x-a)}·poly(x)`.
///
/// The range is truncated at `a + tail_cut/decay`; the remainder is bounded
/// by `2·|f(cut)|/decay` and added to the error estimate.
pub fn integrate_exp_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadratureError> {
    cfg.validate()?;
    if !(decay > 0.0) || !decay.is_finite() {
        return Err(QuadratureError::InvalidDecay(decay));
    }
    if !a.is_finite() {
        return Err(QuadratureError::InvalidInterval { a, b: f64::INFINITY });
    }
    let cut = a + cfg.tail_cut / decay;
    let mut r = adaptive(&f, a, cut, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions);
    let f_cut = f(cut);
    r.evaluations += 1;
    let tail_bound = if f_cut.is_finite() { 2.0 * f_cut.abs() / decay } else { 0.0 };
    r.est_err += tail_bound;
    // the adaptive verdict stands unless the truncated tail itself matters
    r.converged = r.converged && tail_bound <= (cfg.rel_tol * r.value.abs()).max(cfg.abs_tol);
    Ok(r)
}

/// Computes `∫_0^∞ dκ e^{-2κd} ∫_0^κ dξ g(ξ,κ)`.
///
/// The inner integral runs over `u = ξ/κ ∈ (0,1)` with tolerance budget
/// `rel_tol/10`; the outer integral inherits the full budget plus the
/// truncated exponential tail bound. An inner non-convergence at any κ
/// sample marks the whole result as not converged.
pub fn integrate_wedge<G: Fn(f64, f64) -> f64>(
    g: G,
    d: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadratureError> {
    cfg.validate()?;
    if !(d > 0.0) || !d.is_finite() {
        return Err(QuadratureError::InvalidDistance(d));
    }

    let inner_rel = cfg.rel_tol / 10.0;
    let inner_abs = cfg.abs_tol / 10.0;
    let inner_evals = std::cell::Cell::new(0u64);
    let inner_ok = std::cell::Cell::new(true);

    let outer = |kappa: f64| -> f64 {
        if kappa <= 0.0 {
            return 0.0;
        }
        let inner = adaptive(
            &|u: f64| g(kappa * u, kappa),
            0.0,
            1.0,
            inner_rel,
            inner_abs,
            cfg.max_subdivisions,
        );
        inner_evals.set(inner_evals.get() + inner.evaluations);
        if !inner.converged {
            inner_ok.set(false);
        }
        (-2.0 * kappa * d).exp() * kappa * inner.value
    };

    let cut = cfg.tail_cut / (2.0 * d);
    let mut r = adaptive(&outer, 0.0, cut, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions);
    let tail_bound = 2.0 * outer(cut).abs() / (2.0 * d);
    r.est_err += tail_bound + r.value.abs() * inner_rel;
    r.evaluations += inner_evals.get();
    r.converged = inner_ok.get()
        && r.converged
        && tail_bound <= (cfg.rel_tol * r.value.abs()).max(cfg.abs_tol);
    Ok(r)
}
