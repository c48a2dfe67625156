//! Rayleigh's sum Σ 1/λ_k² = 1/(4ν+4) and the two Calogero sums
//! Σ_{k≠n} 2λ_n²/(λ_k²−λ_n²) = ν+1 and Σ_{k≠n} λ_n⁴/(λ_n²−λ_k²)² = (λ_n² − (ν+1)(ν+5))/12,
//! checked as truncated sums plus a bracketing interval for the tail.

use super::ZeroTable;
use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// Outcome of a certified check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// One identity: the truncated sum, the interval that must contain the exact value,
/// and the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub expected: f64,
    pub truncated: f64,
    /// Enclosure of the full sum: truncated sum plus tail bounds plus rounding allowance.
    pub interval: [f64; 2],
    /// expected − (truncated + tail midpoint)
    pub residual: f64,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub nu: f64,
    pub n: usize,
    pub tail: usize,
    /// Constant C in |λ_k − πk − D_ν| ≤ C/k used for the tail bounds.
    pub offset_constant: f64,
    pub rayleigh: IdentityResidual,
    pub calogero: IdentityResidual,
    pub calogero2: IdentityResidual,
}

impl IdentityReport {
    pub fn checks(&self) -> [&IdentityResidual; 3] {
        [&self.rayleigh, &self.calogero, &self.calogero2]
    }

    pub fn status(&self) -> CheckStatus {
        let s = self.checks().map(|c| c.status);
        if s.contains(&CheckStatus::Fail) {
            CheckStatus::Fail
        } else if s.contains(&CheckStatus::Inconclusive) {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::Pass
        }
    }
}

/// Relative interval width beyond which a check is reported inconclusive.
pub const MAX_RELATIVE_WIDTH: f64 = 1e-4;

#[derive(Default)]
struct Acc {
    sum: f64,
    comp: f64,
    abs: f64,
    sens: f64,
}

impl Acc {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
        self.abs += v.abs();
    }
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn inconclusive(name: &'static str, expected: f64) -> IdentityResidual {
    IdentityResidual {
        name,
        expected,
        truncated: f64::NAN,
        interval: [f64::NEG_INFINITY, f64::INFINITY],
        residual: f64::NAN,
        status: CheckStatus::Inconclusive,
    }
}

fn judge(
    name: &'static str,
    expected: f64,
    acc: &Acc,
    tail: [f64; 2],
    tol: f64,
    extra: f64,
) -> IdentityResidual {
    let truncated = acc.value();
    let allowance = 4.0 * f64::EPSILON * acc.abs + acc.sens * tol + extra;
    let interval = [truncated + tail[0] - allowance, truncated + tail[1] + allowance];
    let width = interval[1] - interval[0];
    let status = if width > MAX_RELATIVE_WIDTH * expected.abs().max(1.0) {
        CheckStatus::Inconclusive
    } else if interval[0] <= expected && expected <= interval[1] {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    IdentityResidual {
        name,
        expected,
        truncated,
        interval,
        residual: expected - (truncated + 0.5 * (tail[0] + tail[1])),
        status,
    }
}

/// Evaluate the three identities for index `n` with the first `tail` zeros summed
/// exactly and the remainder bounded by integral comparison.
pub fn identity_residuals(table: &ZeroTable, n: usize, tail: usize) -> Result<IdentityReport> {
    let nu = table.nu();
    let ray_exp = 1.0 / (4.0 * nu + 4.0);
    let calo_exp = nu + 1.0;
    if tail > table.len() {
        return Err(Error::domain(format!(
            "tail {tail} exceeds table length {}",
            table.len()
        )));
    }
    if n == 0 {
        return Err(Error::domain("index n must be at least 1"));
    }
    if tail == 0 || 2 * n > tail {
        let calo2_exp = if n <= table.len() {
            let l = table.zeros()[n - 1];
            (l * l - (nu + 1.0) * (nu + 5.0)) / 12.0
        } else {
            f64::NAN
        };
        return Ok(IdentityReport {
            nu,
            n,
            tail,
            offset_constant: f64::NAN,
            rayleigh: inconclusive("rayleigh", ray_exp),
            calogero: inconclusive("calogero", calo_exp),
            calogero2: inconclusive("calogero2", calo2_exp),
        });
    }

    let z = &table.zeros()[..tail];
    let tol = table.tolerance();
    let d = table.order().phase_shift();
    let l = z[n - 1];
    let l2 = l * l;
    let calo2_exp = (l2 - (nu + 1.0) * (nu + 5.0)) / 12.0;

    let mut ray = Acc::default();
    let mut calo = Acc::default();
    let mut calo2 = Acc::default();
    let mut calo_dn = 0.0;
    let mut calo2_dn = 0.0;
    for (i, &lk) in z.iter().enumerate() {
        let lk2 = lk * lk;
        ray.add(1.0 / lk2);
        ray.sens += 2.0 / (lk2 * lk);
        if i + 1 == n {
            continue;
        }
        let den = lk2 - l2;
        calo.add(2.0 * l2 / den);
        calo.sens += (4.0 * l2 * lk / (den * den)).abs();
        calo_dn += 4.0 * l * lk2 / (den * den);
        let q = l2 / den;
        calo2.add(q * q);
        calo2.sens += (4.0 * l2 * l2 * lk / (den * den * den)).abs();
        calo2_dn += -4.0 * l * l2 * lk2 / (den * den * den);
    }
    calo.sens += calo_dn.abs();
    calo2.sens += calo2_dn.abs();

    // offset constant from the top half of the table
    let k_tail = tail as f64;
    let mut c: f64 = 0.0;
    for k in (tail / 2).max(1)..=tail {
        let kf = k as f64;
        c = c.max(kf * (z[k - 1] - PI * kf - d).abs());
    }
    let c = 2.0 * c + 1e-6;
    let a_lo = d - c / (k_tail + 1.0);
    let a_hi = d + c / (k_tail + 1.0);
    let u_up = PI * k_tail + a_lo; // integral from s = K with smallest zeros
    let u_dn = PI * (k_tail + 1.0) + a_hi; // integral from s = K+1 with largest zeros

    let ray_tail = [1.0 / (PI * u_dn), 1.0 / (PI * u_up)];
    let log_int = |u: f64| (l / PI) * (2.0 * l / (u - l)).ln_1p();
    let calo_tail = [log_int(u_dn), log_int(u_up)];
    let quart = l2 * l2;
    let calo2_tail = [
        quart / (3.0 * PI * u_dn.powi(3)),
        quart / (3.0 * PI * u_up.powi(3) * (1.0 - l2 / (u_up * u_up)).powi(2)),
    ];

    Ok(IdentityReport {
        nu,
        n,
        tail,
        offset_constant: c,
        rayleigh: judge("rayleigh", ray_exp, &ray, ray_tail, tol, 0.0),
        calogero: judge("calogero", calo_exp, &calo, calo_tail, tol, 0.0),
        calogero2: judge("calogero2", calo2_exp, &calo2, calo2_tail, tol, l / 6.0 * tol),
    })
}
