//! Two-sided short-time kernel bounds: kernel/comparator ratios over a grid.

use super::heat::{kernel_matrix_with_mass, KernelConfig, KernelKind};
use crate::error::{Error, Result};
use crate::systems::{Setting, SystemSpec};
use serde::{Deserialize, Serialize};

/// Points where (x−y)²/(4t) exceeds this are skipped: both sides are below the
/// resolution of the series there.
pub const GAUSSIAN_CUTOFF: f64 = 25.0;
/// Default time grid, all at or below T = 0.5.
pub const DEFAULT_TIMES: [f64; 6] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5];

/// Kernel/comparator pairings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundPair {
    /// Jacobi heat kernel 𝔾^{α,β}
    JacobiHeat,
    /// Lebesgue differentiated kernel ℍ^ν
    LebesgueDiff,
    /// Essential heat kernel 𝕲^ν
    EssentialHeat,
    /// Essential differentiated kernel 𝕳^ν
    EssentialDiff,
}

impl BoundPair {
    pub const ALL: [BoundPair; 4] = [
        BoundPair::JacobiHeat,
        BoundPair::LebesgueDiff,
        BoundPair::EssentialHeat,
        BoundPair::EssentialDiff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundPair::JacobiHeat => "jacobi-heat",
            BoundPair::LebesgueDiff => "lebesgue-diff",
            BoundPair::EssentialHeat => "essential-heat",
            BoundPair::EssentialDiff => "essential-diff",
        }
    }

    fn kind(self) -> KernelKind {
        match self {
            BoundPair::JacobiHeat | BoundPair::EssentialHeat => KernelKind::Heat,
            _ => KernelKind::Differentiated,
        }
    }

    fn check(self, spec: &SystemSpec) -> Result<()> {
        let ok = match self {
            BoundPair::JacobiHeat => spec.setting() == Setting::Jacobi,
            BoundPair::LebesgueDiff => spec.setting() == Setting::Lebesgue,
            BoundPair::EssentialHeat | BoundPair::EssentialDiff => spec.setting().is_essential(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{} does not apply to {}", self.name(), spec.setting())))
        }
    }
}

fn wedge(u: f64) -> f64 {
    u.min(1.0)
}

/// Comparator value; `gauss` is the constant c in exp(−(x−y)²/(c t)), 4 in the bounds.
pub fn comparator(pair: BoundPair, params: &[f64], t: f64, x: f64, y: f64, gauss: f64) -> f64 {
    let a0 = x * y;
    let a1 = (1.0 - x) * (1.0 - y);
    let g = (-(x - y) * (x - y) / (gauss * t)).exp() / t.sqrt();
    match pair {
        BoundPair::JacobiHeat => {
            let (a, b) = (params[0], params[1]);
            wedge(a0 / t).powf(a + 0.5) * wedge(a1 / t).powf(b + 0.5) * g
        }
        BoundPair::LebesgueDiff => {
            let nu = params[0];
            wedge(a0 / t).powf(nu + 1.5) * wedge(a1 / t).powi(2) * g
        }
        BoundPair::EssentialHeat => {
            let nu = params[0];
            t.max(a0).powf(-nu - 0.5) / t.max(a1) * g
        }
        BoundPair::EssentialDiff => {
            let nu = params[0];
            wedge(a0 / t) * wedge(a1 / t) * t.max(a0).powf(-nu - 0.5) / t.max(a1) * g
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub pair: BoundPair,
    pub params: Vec<f64>,
    pub times: Vec<f64>,
    pub grid: usize,
    pub gauss: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// (t, min, max) of the ratio at each time
    pub per_time: Vec<(f64, f64, f64)>,
    /// largest max/min over a single time slice
    pub spread: f64,
    pub evaluated: usize,
    /// beyond the Gaussian cutoff
    pub skipped: usize,
    /// kernel value not resolved above rounding
    pub unresolved: usize,
    /// kernel ≤ 0 at a resolved point
    pub nonpositive: usize,
}

/// Midpoint grid (i + 1/2)/m.
pub fn midpoint_grid(m: usize) -> Vec<f64> {
    (0..m).map(|i| (i as f64 + 0.5) / m as f64).collect()
}

/// Extremes of kernel/comparator over the midpoint grid and the given times.
pub fn sharp_bound_ratio(
    pair: BoundPair,
    spec: &SystemSpec,
    cfg: &KernelConfig,
    times: &[f64],
    grid: usize,
    gauss: f64,
) -> Result<RatioReport> {
    pair.check(spec)?;
    let params = spec.parameters();
    let xs = midpoint_grid(grid);
    let mut rep = RatioReport {
        pair,
        params: params.clone(),
        times: times.to_vec(),
        grid,
        gauss,
        min_ratio: f64::INFINITY,
        max_ratio: 0.0,
        per_time: Vec::with_capacity(times.len()),
        spread: 0.0,
        evaluated: 0,
        skipped: 0,
        unresolved: 0,
        nonpositive: 0,
    };
    for &t in times {
        let (k, mass) = kernel_matrix_with_mass(spec, cfg, pair.kind(), t, &xs, &xs)?;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (j, &x) in xs.iter().enumerate() {
            for (l, &y) in xs.iter().enumerate() {
                if (x - y) * (x - y) / (4.0 * t) > GAUSSIAN_CUTOFF {
                    rep.skipped += 1;
                    continue;
                }
                let v = k[j][l];
                let rounding = 16.0 * f64::EPSILON * mass[j][l] + cfg.tolerance;
                if v.abs() <= 100.0 * rounding {
                    rep.unresolved += 1;
                    continue;
                }
                if v <= 0.0 {
                    rep.nonpositive += 1;
                    continue;
                }
                let c = comparator(pair, &params, t, x, y, gauss);
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::domain(format!("comparator not positive at ({x}, {y}, {t})")));
                }
                let r = v / c;
                lo = lo.min(r);
                hi = hi.max(r);
                rep.evaluated += 1;
            }
        }
        if hi > 0.0 {
            rep.min_ratio = rep.min_ratio.min(lo);
            rep.max_ratio = rep.max_ratio.max(hi);
            rep.spread = rep.spread.max(hi / lo);
            rep.per_time.push((t, lo, hi));
        }
    }
    Ok(rep)
}

impl RatioReport {
    /// Finite positive extremes with every per-time spread under `cap`, and nothing
    /// nonpositive. The spread is taken per time because the bounds carry t-dependent
    /// constants such as e^{−tE_bottom} for t up to the final time.
    pub fn within(&self, cap: f64) -> bool {
        self.nonpositive == 0
            && self.evaluated > 0
            && self.min_ratio > 0.0
            && self.max_ratio.is_finite()
            && self.spread <= cap
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparators_positive_and_symmetric() {
        for pair in BoundPair::ALL {
            let p = [0.3, 0.5];
            for &(x, y) in &[(0.01, 0.5), (0.3, 0.99), (0.5, 0.5)] {
                let a = comparator(pair, &p, 0.05, x, y, 4.0);
                let b = comparator(pair, &p, 0.05, y, x, 4.0);
                assert!(a > 0.0 && (a - b).abs() <= 1e-15 * a);
            }
        }
    }

    #[test]
    fn jacobi_ratio_is_bounded() {
        let s = SystemSpec::jacobi(0.5, 0.5).unwrap();
        let r = sharp_bound_ratio(BoundPair::JacobiHeat, &s, &KernelConfig::default(), &[0.05, 0.5], 16, 4.0)
            .unwrap();
        assert!(r.within(1e3), "{r:?}");
        assert!(sharp_bound_ratio(BoundPair::EssentialHeat, &s, &KernelConfig::default(), &[0.1], 8, 4.0).is_err());
    }
}
