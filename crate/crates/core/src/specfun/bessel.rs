//! Bessel J, Y and modified Bessel K implementations.
//!
//! Ascending series (double-double accumulation) below `x = 17`, Hankel
//! asymptotic expansions above. The series cancel by up to ~7 decimal digits
//! at the switchover, which the hi/lo accumulation absorbs; the asymptotic
//! series bottom out below 1e-14 relative there.

use super::dd::{Dd, EULER_GAMMA_DD, FRAC_2_PI_DD, PI_DD};

pub(crate) const SWITCH_X: f64 = 17.0;

const LN2_DD: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };

/// Splits a positive normal `x` into `m * 2^e` with `m ∈ [1, 2)`.
fn frexp1(x: f64) -> (f64, i32) {
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i32 - 1023;
    let m = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | (1023u64 << 52));
    (m, e)
}

/// Natural logarithm in double-double precision via atanh series.
pub(crate) fn ln_dd(x: f64) -> Dd {
    debug_assert!(x > 0.0 && x.is_finite());
    let (m, e) = frexp1(x);
    // ln m = 2 atanh((m-1)/(m+1)), u < 1/3 on m ∈ [1,2)
    let u = Dd::from_f64(m - 1.0).div_f64(m + 1.0);
    let u2 = u.mul(u);
    let mut term = u;
    let mut sum = u;
    let mut k = 1u32;
    loop {
        term = term.mul(u2);
        let contrib = term.div_f64((2 * k + 1) as f64);
        sum = sum.add(contrib);
        k += 1;
        if contrib.abs() < 1e-35 * sum.abs() || k > 40 {
            break;
        }
    }
    sum.mul_f64(2.0).add(LN2_DD.mul_f64(e as f64))
}

/// Ascending series for J_nu, returned with the largest term magnitude
/// (the cancellation scale).
fn j_series(nu: u32, x: f64) -> (Dd, f64) {
    let h = 0.5 * x;
    let q = Dd::from_product(h, h);
    let mut t = match nu {
        0 => Dd::from_f64(1.0),
        1 => Dd::from_f64(h),
        2 => Dd::from_product(h, h).div_f64(2.0),
        _ => unreachable!(),
    };
    let mut sum = t;
    let mut max_term = t.abs();
    for k in 0..200u32 {
        let kf = (k + 1) as f64;
        t = t.mul(q).div_f64(kf).div_f64(kf + nu as f64).neg();
        sum = sum.add(t);
        max_term = max_term.max(t.abs());
        if t.abs() < 1e-35 * (sum.abs() + 1e-300) {
            break;
        }
    }
    (sum, max_term)
}

/// Ascending series for Y_0 or Y_1 (DLMF 10.8.1 rearranged with harmonic
/// numbers), double-double throughout.
fn y_series(nu: u32, x: f64) -> (f64, f64) {
    let h = 0.5 * x;
    let q = Dd::from_product(h, h);
    let lnh = ln_dd(h);
    let (j, j_max) = j_series(nu, x);

    // sum over k of (psi(k+1) + psi(k+nu+1)) * (-q)^k / (k! (k+nu)!)
    // with psi(m) = -gamma + H_{m-1}
    let mut harm_k = Dd::ZERO; // H_k
    let mut harm_kn = Dd::ZERO; // H_{k+nu}
    for j in 1..=nu {
        harm_kn = harm_kn.add(Dd::from_f64(1.0).div_f64(j as f64));
    }
    let mut t = match nu {
        0 => Dd::from_f64(1.0),
        1 => Dd::from_f64(h),
        _ => unreachable!(),
    };
    let gamma2 = EULER_GAMMA_DD.mul_f64(2.0);
    let mut sum = t.mul(harm_k.add(harm_kn).sub(gamma2));
    let mut max_term = sum.abs();
    for k in 0..200u32 {
        let kf = (k + 1) as f64;
        t = t.mul(q).div_f64(kf).div_f64(kf + nu as f64).neg();
        harm_k = harm_k.add(Dd::from_f64(1.0).div_f64(kf));
        harm_kn = harm_kn.add(Dd::from_f64(1.0).div_f64(kf + nu as f64));
        let contrib = t.mul(harm_k.add(harm_kn).sub(gamma2));
        sum = sum.add(contrib);
        max_term = max_term.max(contrib.abs());
        if contrib.abs() < 1e-35 * (sum.abs() + 1e-300) && k > 3 {
            break;
        }
    }

    // Y_nu = (2/pi) ln(x/2) J_nu - ((x/2)^{-nu}/pi) * prefix - (1/pi) * sum
    let ln_j = FRAC_2_PI_DD.mul(lnh).mul(j);
    let prefix = match nu {
        0 => Dd::ZERO,
        1 => Dd::from_f64(2.0).div_f64(x).div(PI_DD).mul_f64(1.0),
        _ => unreachable!(),
    };
    let total = ln_j.sub(prefix).sub(sum.div(PI_DD));
    let max_scale = j_max.max(max_term) / std::f64::consts::PI;
    let err = 1e-30 * max_scale + 0.5 * f64::EPSILON * total.abs();
    (total.to_f64(), err)
}

/// Hankel asymptotic amplitude functions P(mu,x), Q(mu,x); also returns the
/// smallest retained term as the truncation error scale.
fn pq_asym(mu: f64, x: f64) -> (f64, f64, f64) {
    let z8 = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut s = 1.0; // s_k
    let mut min_term = 1.0_f64;
    for k in 1..60u32 {
        let m = (2 * k - 1) as f64;
        let next = s * (mu - m * m) / (k as f64 * z8);
        if next.abs() >= s.abs() && k > 2 {
            break;
        }
        s = next;
        min_term = min_term.min(s.abs());
        let idx = k % 4;
        match idx {
            1 => q += s,
            2 => p -= s,
            3 => q -= s,
            0 => p += s,
            _ => unreachable!(),
        }
        if s.abs() < 1e-18 {
            break;
        }
    }
    (p, q, min_term)
}

fn jy_asym(nu: u32, x: f64) -> (f64, f64, f64) {
    let mu = (4 * nu * nu) as f64;
    let (p, q, min_term) = pq_asym(mu, x);
    let chi = x - (2.0 * nu as f64 + 1.0) * std::f64::consts::FRAC_PI_4;
    let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
    let j = amp * (p * chi.cos() - q * chi.sin());
    let y = amp * (p * chi.sin() + q * chi.cos());
    let err = amp * min_term + f64::EPSILON * amp * (p.abs() + q.abs());
    (j, y, err)
}

/// J_nu(x) for nu in {0,1,2}, x > 0; returns (value, est_abs_err).
pub(crate) fn besselj_raw(nu: u32, x: f64) -> (f64, f64) {
    if x <= SWITCH_X {
        let (j, max_term) = j_series(nu, x);
        (j.to_f64(), 1e-30 * max_term + 0.5 * f64::EPSILON * j.abs())
    } else if nu < 2 {
        let (j, _, err) = jy_asym(nu, x);
        (j, err)
    } else {
        let (j0, e0) = besselj_raw(0, x);
        let (j1, e1) = besselj_raw(1, x);
        let v = 2.0 / x * j1 - j0;
        (v, 2.0 / x * e1 + e0 + f64::EPSILON * v.abs())
    }
}

/// Y_nu(x) for nu in {0,1,2}, x > 0; returns (value, est_abs_err).
pub(crate) fn bessely_raw(nu: u32, x: f64) -> (f64, f64) {
    match nu {
        0 | 1 => {
            if x <= SWITCH_X {
                y_series(nu, x)
            } else {
                let (_, y, err) = jy_asym(nu, x);
                (y, err)
            }
        }
        2 => {
            let (y0, e0) = bessely_raw(0, x);
            let (y1, e1) = bessely_raw(1, x);
            let v = 2.0 / x * y1 - y0;
            (v, 2.0 / x * e1 + e0 + f64::EPSILON * v.abs())
        }
        3 => {
            let (y1, e1) = bessely_raw(1, x);
            let (y2, e2) = bessely_raw(2, x);
            let v = 4.0 / x * y2 - y1;
            (v, 4.0 / x * e2 + e1 + f64::EPSILON * v.abs())
        }
        _ => unreachable!(),
    }
}

/// I_1 ascending series, all terms positive.
fn i1_series(x: f64) -> Dd {
    let h = 0.5 * x;
    let q = Dd::from_product(h, h);
    let mut t = Dd::from_f64(h);
    let mut sum = t;
    for k in 0..300u32 {
        let kf = (k + 1) as f64;
        t = t.mul(q).div_f64(kf).div_f64(kf + 1.0);
        sum = sum.add(t);
        if t.abs() < 1e-35 * sum.abs() {
            break;
        }
    }
    sum
}

/// K_1(x), x > 0; returns (value, est_abs_err).
pub(crate) fn besselk1_raw(x: f64) -> (f64, f64) {
    if x <= SWITCH_X {
        // K_1 = 1/x + ln(x/2) I_1 - (x/4) sum_k (psi(k+1)+psi(k+2)) q^k / (k!(k+1)!)
        let h = 0.5 * x;
        let q = Dd::from_product(h, h);
        let lnh = ln_dd(h);
        let i1 = i1_series(x);

        let gamma2 = EULER_GAMMA_DD.mul_f64(2.0);
        let mut harm_k = Dd::ZERO;
        let mut harm_k1 = Dd::from_f64(1.0);
        let mut t = Dd::from_f64(1.0);
        let mut sum = harm_k.add(harm_k1).sub(gamma2); // k = 0 term
        let mut max_term = sum.abs();
        for k in 0..300u32 {
            let kf = (k + 1) as f64;
            t = t.mul(q).div_f64(kf).div_f64(kf + 1.0);
            harm_k = harm_k.add(Dd::from_f64(1.0).div_f64(kf));
            harm_k1 = harm_k1.add(Dd::from_f64(1.0).div_f64(kf + 1.0));
            let contrib = t.mul(harm_k.add(harm_k1).sub(gamma2));
            sum = sum.add(contrib);
            max_term = max_term.max(contrib.abs());
            if contrib.abs() < 1e-35 * (sum.abs() + 1e-300) && k > 3 {
                break;
            }
        }
        let ln_i1 = lnh.mul(i1);
        let total = Dd::from_f64(1.0).div_f64(x).add(ln_i1).sub(sum.mul_f64(0.25 * x));
        let scale = ln_i1.abs().max(max_term * 0.25 * x);
        let err = 1e-30 * scale + 0.5 * f64::EPSILON * total.abs();
        (total.to_f64(), err)
    } else {
        // sqrt(pi/2x) e^{-x} [1 + 3/(8x) - 15/(2(8x)^2) + ...]
        let z8 = 8.0 * x;
        let mut s = 1.0;
        let mut sum = 1.0;
        let mut min_term = 1.0_f64;
        for k in 1..60u32 {
            let m = (2 * k - 1) as f64;
            let next = s * (4.0 - m * m) / (k as f64 * z8);
            if next.abs() >= s.abs() {
                break;
            }
            s = next;
            min_term = min_term.min(s.abs());
            sum += s;
            if s.abs() < 1e-18 {
                break;
            }
        }
        let amp = (std::f64::consts::FRAC_PI_2 / x).sqrt() * (-x).exp();
        (amp * sum, amp * (min_term + f64::EPSILON * sum.abs()))
    }
}
