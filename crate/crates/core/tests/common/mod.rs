//! Shared oracle machinery for the integration tests: half-period
//! splitting with Euler acceleration for conditionally convergent
//! oscillatory tails, and the defining-integral oracle for the plasma TE
//! closed form.

use mushift::quadrature::{integrate_1d, QuadratureConfig};

pub fn tight_cfg() -> QuadratureConfig {
    QuadratureConfig { rel_tol: 1e-12, abs_tol: 1e-16, ..QuadratureConfig::default() }
}

/// Sums an alternating-ish sequence of half-period integrals by repeated
/// averaging of partial sums (Euler transformation).
pub fn euler_sum(terms: &[f64]) -> f64 {
    let mut partial: Vec<f64> = Vec::with_capacity(terms.len());
    let mut acc = 0.0;
    for &t in terms {
        acc += t;
        partial.push(acc);
    }
    while partial.len() > 1 {
        for i in 0..partial.len() - 1 {
            partial[i] = 0.5 * (partial[i] + partial[i + 1]);
        }
        partial.pop();
    }
    partial[0]
}

/// Integrates `f` over `[start, ∞)` where `f = smooth * cos(w x)` decays
/// only algebraically: head up to the first cosine zero past `start`, then
/// `n_half` half-period chunks fed to the Euler transformation.
pub fn oscillatory_tail<F: Fn(f64) -> f64>(f: F, start: f64, w: f64, n_half: usize) -> f64 {
    let cfg = tight_cfg();
    let half = std::f64::consts::PI / w;
    // first zero of cos(w x) at or after start
    let j = ((start * w / std::f64::consts::PI - 0.5).ceil()).max(0.0);
    let mut z = (j + 0.5) * std::f64::consts::PI / w;
    if z <= start {
        z += half;
    }
    let head = integrate_1d(&f, start, z, &cfg).expect("head interval").value;
    let mut terms = Vec::with_capacity(n_half);
    let mut a = z;
    for _ in 0..n_half {
        let b = a + half;
        terms.push(integrate_1d(&f, a, b, &cfg).expect("chunk interval").value);
        a = b;
    }
    head + euler_sum(&terms)
}

/// The defining integral for the plasma TE channel, `F(a) = I_TE d²` at
/// `ωp d = a`: a finite part over `[0, ωp]` plus a conditionally convergent
/// oscillatory tail, evaluated here entirely independently of the
/// closed-form route.
pub fn ite_defining_integral(a: f64) -> f64 {
    let cfg = tight_cfg();
    // [0, a]: k(2k^2 - a^2) cos 2k + 2 k^2 sqrt(a^2 - k^2) sin 2k
    let part1 = integrate_1d(
        |k: f64| {
            k * (2.0 * k * k - a * a) * (2.0 * k).cos()
                + 2.0 * k * k * (a * a - k * k).max(0.0).sqrt() * (2.0 * k).sin()
        },
        0.0,
        a,
        &cfg,
    )
    .expect("finite part")
    .value;

    // tail integrand k cos(2k) (2k^2 - a^2 - 2k sqrt(k^2-a^2)); the bracket
    // equals (k - sqrt(k^2-a^2))^2 = a^4/(k + sqrt(k^2-a^2))^2 exactly
    let phi = move |k: f64| {
        let r = (k * k - a * a).max(0.0).sqrt();
        let kr = k + r;
        k * a * a * a * a / (kr * kr)
    };
    let part2 = oscillatory_tail(move |k| phi(k) * (2.0 * k).cos(), a, 2.0, 80);

    (part1 + part2) / (a * a)
}
