//! Cross-validation of closed forms against their defining-integral
//! oracles: the plasma TE channel, the Fourier-integral identity behind the
//! perfect-mirror check, and the wedge transform against the analytically
//! reduced one-dimensional plasma TM integral.

mod common;

use common::{ite_defining_integral, oscillatory_tail, tight_cfg};
use mushift::quadrature::{integrate_exp_tail, integrate_wedge, QuadratureConfig};
use mushift::specfun::bessel_k1;
use mushift::{plasma_te, plasma_tm, Geometry, Orientation};

fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs()
}

#[test]
fn plasma_te_closed_form_matches_defining_integral() {
    // the sign conventions of the Bessel/Struve closed form are frozen by
    // this agreement
    let g = Geometry::new(1.0).unwrap();
    for a in [0.5, 1.0, 3.0] {
        let closed = plasma_te(a, Orientation::Perpendicular, g).unwrap().s_hat / 10.0;
        let oracle = ite_defining_integral(a);
        assert!(
            rel_close(closed, oracle, 1e-6),
            "a={a}: closed {closed} vs defining integral {oracle}"
        );
    }
}

#[test]
fn k1_fourier_identity() {
    // 2 int_0^inf k cos(2 q d) / (q^2 + k^2)^{3/2} dq = 4 d K1(2 k d),
    // the k_z integral done first in the perfect-mirror route
    for (k, d) in [(0.8, 1.0), (2.0, 0.7), (1.0, 0.4)] {
        let f = move |q: f64| 2.0 * k * (2.0 * q * d).cos() / (q * q + k * k).powf(1.5);
        let lhs = oscillatory_tail(f, 0.0, 2.0 * d, 80);
        let rhs = 4.0 * d * bessel_k1(2.0 * k * d).unwrap().value;
        assert!(rel_close(lhs, rhs, 1e-8), "k={k} d={d}: {lhs} vs {rhs}");
    }
}

#[test]
fn k1_first_moment_is_pi_over_two() {
    // int_0^inf x K1(x) dx = pi/2, evaluated with the crate's own
    // quadrature as a self-test
    let r = integrate_exp_tail(|x| x * bessel_k1(x).unwrap().value, 0.0, 1.0, &tight_cfg()).unwrap();
    assert!(
        (r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-8,
        "got {} want {}",
        r.value,
        std::f64::consts::FRAC_PI_2
    );
}

#[test]
fn plasma_tm_wedge_matches_reduced_form() {
    // the TM integrand on the wedge, with the analytic xi-integration as
    // the oracle: W = 2 wp^2 * J where J is the reduced s-integral
    let cfg = QuadratureConfig::default();
    let d = 1.0;
    for wp in [0.5, 2.0] {
        let g_tm = move |xi: f64, kappa: f64| {
            let u = xi / kappa;
            let e = 1.0 + wp * wp / (xi * xi);
            let su = (1.0 + u * u * (e - 1.0)).sqrt();
            // (eta^2 - 2) (R_TM - 1) in wedge variables
            (1.0 / (u * u) - 2.0) * (-2.0 * su / (e + su))
        };
        let wedge = integrate_wedge(g_tm, d, &cfg).unwrap();

        let tm = plasma_tm(wp, Orientation::Perpendicular, Geometry::new(d).unwrap(), &cfg).unwrap();
        // s_TM = -3/2 + 2 d^2 W  =>  W = (s_TM + 3/2)/(2 d^2)
        let reduced_w = (tm.s_hat + 1.5) / (2.0 * d * d);
        assert!(
            rel_close(wedge.value, reduced_w, 1e-7),
            "wp={wp}: wedge {} vs reduced {}",
            wedge.value,
            reduced_w
        );
    }
}
