//! Generator gap F^ν between the Lebesgue differentiated Laplacian and the Jacobi one
//! with (α, β) = (ν, 1/2), and the resulting two-sided kernel comparison.

use super::comparators::midpoint_grid;
use super::heat::{kernel_matrix_with_mass, KernelConfig, KernelKind};
use crate::error::{Error, Result};
use crate::special::pin;
use crate::systems::{grid, Setting, SystemSpec};
use rayon::prelude::*;
use serde::Serialize;

/// Slack applied to the grid supremum of |F^ν|.
pub const SUP_SLACK: f64 = 1.05;

/// Decomposition of F^ν(x) into its pieces.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapTerms {
    /// 1/x² − π²/(4 sin²(πx/2))
    pub pin_left: f64,
    /// 1/(1−x)² − π²/(4 cos²(πx/2))
    pub pin_right: f64,
    /// 2λ_1² Σ_{k≥2} (λ_k² + λ_1²x²)/(λ_k² − λ_1²x²)²
    pub series: f64,
    pub value: f64,
}

/// F^ν(x) on [0, 1], with endpoint values as limits.
pub fn generator_gap_terms(spec: &SystemSpec, x: f64) -> Result<GapTerms> {
    let c = spec.context()?;
    let nu = c.nu();
    let series = c.ratio().s_prime_enclosed(1, x)?.value;
    let pin_left = pin(x);
    let pin_right = pin(1.0 - x);
    let value = (nu + 1.5) * (nu + 0.5) * pin_left
        + 2.0 * (pin_right + 1.0 / ((1.0 + x) * (1.0 + x)) + series);
    Ok(GapTerms { pin_left, pin_right, series, value })
}

pub fn generator_gap_f(spec: &SystemSpec, x: f64) -> Result<f64> {
    Ok(generator_gap_terms(spec, x)?.value)
}

/// sup |F^ν| over the evaluation grid and both endpoints, with its location.
pub fn gap_sup(spec: &SystemSpec) -> Result<(f64, f64)> {
    let mut pts = grid::evaluation_grid().to_vec();
    pts.push(0.0);
    pts.push(1.0);
    let vals: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|&x| generator_gap_f(spec, x).map(|v| (v.abs(), x)))
        .collect::<Result<_>>()?;
    Ok(vals.into_iter().fold((0.0, f64::NAN), |m, v| if v.0 > m.0 { v } else { m }))
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub nu: f64,
    pub c_nu: f64,
    pub sup_at: f64,
    pub times: Vec<f64>,
    pub grid: usize,
    /// points not certainly violating the bounds
    pub checked: usize,
    pub violations: usize,
    /// checked points that hold only within the rounding intervals
    pub unresolved: usize,
    /// largest |log(ℍ/H)|/t seen at resolved points
    pub worst_log_ratio_rate: f64,
}

impl SandwichReport {
    pub fn pass(&self) -> bool {
        self.violations == 0 && self.checked > 0
    }
}

/// Check e^{−ct} H_t^{ν,1/2} ≤ ℍ_t^ν ≤ e^{ct} H_t^{ν,1/2} on the midpoint grid.
pub fn trotter_sandwich_check(
    lebesgue: &SystemSpec,
    cfg: &KernelConfig,
    times: &[f64],
    grid_n: usize,
) -> Result<SandwichReport> {
    if lebesgue.setting() != Setting::Lebesgue {
        return Err(Error::Unsupported("the sandwich compares the Lebesgue differentiated kernel".into()));
    }
    let nu = lebesgue.nu().expect("Bessel spec");
    let jac = SystemSpec::jacobi(nu, 0.5)?;
    let (sup, at) = gap_sup(lebesgue)?;
    let c = sup * SUP_SLACK;
    let xs = midpoint_grid(grid_n);
    let mut rep = SandwichReport {
        nu,
        c_nu: c,
        sup_at: at,
        times: times.to_vec(),
        grid: grid_n,
        checked: 0,
        violations: 0,
        unresolved: 0,
        worst_log_ratio_rate: 0.0,
    };
    for &t in times {
        let (hb, mb) = kernel_matrix_with_mass(lebesgue, cfg, KernelKind::Differentiated, t, &xs, &xs)?;
        let (hj, mj) = kernel_matrix_with_mass(&jac, cfg, KernelKind::Differentiated, t, &xs, &xs)?;
        let (lo_f, hi_f) = ((-c * t).exp(), (c * t).exp());
        for j in 0..grid_n {
            for k in 0..grid_n {
                let eb = 8.0 * f64::EPSILON * mb[j][k] + cfg.tolerance;
                let ej = 8.0 * f64::EPSILON * mj[j][k] + cfg.tolerance;
                let (b, h) = (hb[j][k], hj[j][k]);
                // certain pass / certain fail under the rounding intervals
                let lower_ok = b - eb >= lo_f * (h + ej);
                let upper_ok = b + eb <= hi_f * (h - ej);
                let lower_bad = b + eb < lo_f * (h - ej);
                let upper_bad = b - eb > hi_f * (h + ej);
                if lower_bad || upper_bad {
                    rep.violations += 1;
                    continue;
                }
                rep.checked += 1;
                if !(lower_ok && upper_ok) {
                    rep.unresolved += 1;
                }
                if b > eb && h > ej {
                    rep.worst_log_ratio_rate = rep.worst_log_ratio_rate.max((b / h).ln().abs() / t);
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pin_bracket_on_grid() {
        for &x in grid::evaluation_grid() {
            let p = pin(x);
            assert!((1.0 - PI * PI / 4.0 - 1e-14..=1e-14).contains(&p), "{x}: {p}");
        }
    }

    #[test]
    fn series_term_at_one() {
        for &nu in &[-0.5, 0.0, 1.5] {
            let s = SystemSpec::new(Setting::Lebesgue, nu, 8).unwrap();
            let l1 = s.context().unwrap().lambda(1);
            let t = generator_gap_terms(&s, 1.0).unwrap();
            let want = (l1 * l1 - (nu + 1.0) * (nu + 2.0)) / 3.0;
            assert!((t.series - want).abs() < 1e-10, "{nu}: {} {want}", t.series);
        }
    }

    #[test]
    fn half_order_sandwich_holds() {
        let s = SystemSpec::new(Setting::Lebesgue, 0.5, 40).unwrap();
        let r = trotter_sandwich_check(&s, &KernelConfig::default(), &[0.1, 0.5], 16).unwrap();
        assert!(r.pass(), "{r:?}");
        assert!(r.c_nu.is_finite());
    }
}
