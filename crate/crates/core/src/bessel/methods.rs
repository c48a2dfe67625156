//! Individual evaluation routes for the pair (J_ν(z), J_{ν+1}(z)).
//!
//! These are exposed so that the routes can be compared against each other; most
//! callers want [`crate::bessel::bessel_j`].

use statrs::function::gamma::{gamma, ln_gamma};
use std::f64::consts::PI;

/// Switch from the power series to Miller's recurrence.
pub const SERIES_LIMIT: f64 = 2.0;

/// Smallest argument at which Hankel's expansion is used for order ν.
pub fn hankel_limit(nu: f64) -> f64 {
    let m = nu.abs() + 1.0;
    25.0 + m * m
}

/// Route selection used by the library.
pub fn generic(nu: f64, z: f64) -> (f64, f64) {
    if z <= SERIES_LIMIT {
        series(nu, z)
    } else if z >= hankel_limit(nu) {
        (hankel(nu, z), hankel(nu + 1.0, z))
    } else {
        miller(nu, z)
    }
}

/// Elementary closed forms for ν ∈ {−1/2, 1/2, 3/2}; `None` for other orders or
/// for arguments where the closed form cancels badly.
pub fn half_integer(nu: f64, z: f64) -> Option<(f64, f64)> {
    let f = (2.0 / (PI * z)).sqrt();
    if nu == -0.5 {
        let (s, c) = z.sin_cos();
        Some((f * c, f * s))
    } else if nu == 0.5 && z >= 1.0 {
        let (s, c) = z.sin_cos();
        Some((f * s, f * (s / z - c)))
    } else if nu == 1.5 && z >= 2.0 {
        let (s, c) = z.sin_cos();
        Some((f * (s / z - c), f * ((3.0 / (z * z) - 1.0) * s - 3.0 * c / z)))
    } else {
        None
    }
}

fn prefactor(nu: f64, h: f64) -> f64 {
    if nu < 20.0 {
        h.powf(nu) / gamma(nu + 1.0)
    } else {
        (nu * h.ln() - ln_gamma(nu + 1.0)).exp()
    }
}

/// Ascending series J_ν(z) = (z/2)^ν Σ_k (−z²/4)^k / (k! Γ(ν+k+1)).
pub fn series(nu: f64, z: f64) -> (f64, f64) {
    let h = 0.5 * z;
    let q = -h * h;
    let sum = |a: f64| {
        let mut term = 1.0;
        let mut s = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            term *= q / (kf * (a + kf));
            s += term;
            if term.abs() < 1e-17 * s.abs() {
                break;
            }
        }
        s
    };
    let p0 = prefactor(nu, h);
    let p1 = p0 * h / (nu + 1.0);
    (p0 * sum(nu), p1 * sum(nu + 1.0))
}

/// Even starting index for the backward recurrence.
fn miller_start(z: f64) -> usize {
    let m = (z + 24.0 + 8.0 * z.cbrt()).ceil() as usize;
    m + (m & 1)
}

/// Miller backward recurrence from a starting index chosen by [`miller_start`].
pub fn miller(nu: f64, z: f64) -> (f64, f64) {
    miller_from(nu, z, miller_start(z))
}

/// Miller backward recurrence started at index `m` (rounded up to even).
pub fn miller_from(nu: f64, z: f64, m: usize) -> (f64, f64) {
    let m = m + (m & 1);
    // g_j = Γ(ν+j) / (j! Γ(ν+1)), g_1 = 1; normalisation weight w_j = (ν+2j) g_j, w_0 = 1.
    let jmax = m / 2;
    let mut g = 1.0;
    for j in 2..=jmax {
        g *= (nu + j as f64 - 1.0) / j as f64;
    }
    let mut fk1 = 0.0; // f_{k+1}
    let mut fk = 1e-280; // f_k
    let mut norm = 0.0;
    let mut j = jmax;
    // k = m is even
    norm += (nu + 2.0 * j as f64) * g * fk;
    let mut f1 = 0.0;
    for k in (1..=m).rev() {
        let fprev = 2.0 * (nu + k as f64) / z * fk - fk1;
        fk1 = fk;
        fk = fprev;
        let kk = k - 1;
        if kk == 1 {
            f1 = fk;
        }
        if kk % 2 == 0 {
            if kk == 0 {
                norm += fk;
            } else {
                // step g from j to j-1
                g *= j as f64 / (nu + j as f64 - 1.0);
                j -= 1;
                norm += (nu + 2.0 * j as f64) * g * fk;
            }
        }
        if fk.abs() > 1e250 {
            fk *= 1e-250;
            fk1 *= 1e-250;
            norm *= 1e-250;
            f1 *= 1e-250;
        }
    }
    let p = prefactor(nu, 0.5 * z) / norm;
    (p * fk, p * f1)
}

/// Hankel's asymptotic expansion for a single order.
pub fn hankel(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t: f64 = 1.0;
    for k in 1..200usize {
        let odd = (2 * k - 1) as f64;
        let next = t * (mu - odd * odd) / (k as f64 * 8.0 * z);
        if next == 0.0 {
            break;
        }
        if k > 2 && next.abs() >= t.abs() {
            break;
        }
        t = next;
        match k % 4 {
            1 => q += t,
            2 => p -= t,
            3 => q -= t,
            _ => p += t,
        }
        if t.abs() < 1e-17 {
            break;
        }
    }
    let w = z - (0.5 * nu + 0.25) * PI;
    let (s, c) = w.sin_cos();
    (2.0 / (PI * z)).sqrt() * (p * c - q * s)
}
