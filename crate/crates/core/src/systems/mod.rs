//! Eigenfunction systems on (0,1): the natural, Lebesgue, essential (plain and
//! probabilistically shifted), modified essential and Jacobi settings, together with
//! measures, eigenvalues, derivatives and the tensor-product extension.

mod context;
pub mod grid;
mod jacobi;
mod tensor;

pub use context::FbContext;
pub use jacobi::JacobiParams;
pub use tensor::TensorSystem;

use crate::bessel::Order;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setting {
    Natural,
    Lebesgue,
    Essential,
    #[serde(rename = "essential-prob")]
    EssentialProbabilistic,
    #[serde(rename = "modified")]
    ModifiedEssential,
    Jacobi,
}

impl Setting {
    pub const ALL: [Setting; 6] = [
        Setting::Natural,
        Setting::Lebesgue,
        Setting::Essential,
        Setting::EssentialProbabilistic,
        Setting::ModifiedEssential,
        Setting::Jacobi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Setting::Natural => "natural",
            Setting::Lebesgue => "lebesgue",
            Setting::Essential => "essential",
            Setting::EssentialProbabilistic => "essential-prob",
            Setting::ModifiedEssential => "modified",
            Setting::Jacobi => "jacobi",
        }
    }

    pub fn is_essential(self) -> bool {
        matches!(self, Setting::Essential | Setting::EssentialProbabilistic)
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Setting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Setting> {
        Setting::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown setting '{s}' (expected natural|lebesgue|essential|essential-prob|modified|jacobi)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeKind {
    New,
    Old,
}

#[derive(Debug, Clone)]
enum Family {
    Bessel(Arc<FbContext>),
    Jacobi(JacobiParams),
}

/// One setting together with the data needed to evaluate it. Cheap to clone.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    setting: Setting,
    family: Family,
}

impl SystemSpec {
    /// Fourier–Bessel setting of order ν serving indices 1..=capacity.
    pub fn new(setting: Setting, nu: f64, capacity: usize) -> Result<SystemSpec> {
        let ctx = FbContext::new(Order::new(nu)?, capacity)?;
        SystemSpec::with_context(setting, Arc::new(ctx))
    }

    pub fn with_context(setting: Setting, ctx: Arc<FbContext>) -> Result<SystemSpec> {
        if setting == Setting::Jacobi {
            return Err(Error::domain("the Jacobi setting takes (alpha, beta), not a Bessel order"));
        }
        Ok(SystemSpec { setting, family: Family::Bessel(ctx) })
    }

    pub fn jacobi(alpha: f64, beta: f64) -> Result<SystemSpec> {
        Ok(SystemSpec {
            setting: Setting::Jacobi,
            family: Family::Jacobi(JacobiParams::new(alpha, beta)?),
        })
    }

    /// Same data, different setting (Fourier–Bessel settings only).
    pub fn as_setting(&self, setting: Setting) -> Result<SystemSpec> {
        SystemSpec::with_context(setting, self.context()?.clone())
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    pub fn context(&self) -> Result<&Arc<FbContext>> {
        match &self.family {
            Family::Bessel(c) => Ok(c),
            Family::Jacobi(_) => Err(Error::Unsupported("Jacobi setting has no Bessel context".into())),
        }
    }

    pub fn jacobi_params(&self) -> Option<JacobiParams> {
        match self.family {
            Family::Jacobi(p) => Some(p),
            Family::Bessel(_) => None,
        }
    }

    pub fn nu(&self) -> Option<f64> {
        match &self.family {
            Family::Bessel(c) => Some(c.nu()),
            Family::Jacobi(_) => None,
        }
    }

    /// ν, or (α, β) for Jacobi.
    pub fn parameters(&self) -> Vec<f64> {
        match &self.family {
            Family::Bessel(c) => vec![c.nu()],
            Family::Jacobi(p) => vec![p.alpha, p.beta],
        }
    }

    /// Smallest valid index: 1 for Fourier–Bessel settings, 0 for Jacobi.
    pub fn first_index(&self) -> usize {
        match self.family {
            Family::Bessel(_) => 1,
            Family::Jacobi(_) => 0,
        }
    }

    /// Largest index that can be evaluated.
    pub fn capacity(&self) -> usize {
        match &self.family {
            Family::Bessel(c) => c.capacity(),
            Family::Jacobi(_) => usize::MAX,
        }
    }

    /// The `i`-th function of the system counted from zero, as an index in the
    /// setting's own convention.
    pub fn nth_index(&self, i: usize) -> usize {
        i + self.first_index()
    }

    fn check(&self, n: usize) -> Result<()> {
        match &self.family {
            Family::Bessel(c) => c.check_index(n),
            Family::Jacobi(_) => Ok(()),
        }
    }

    pub fn measure(&self) -> MeasureWeight {
        MeasureWeight { spec: self.clone() }
    }

    pub fn eigenvalue(&self, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(match &self.family {
            Family::Jacobi(p) => p.eigenvalue(n),
            Family::Bessel(c) => {
                let l = c.lambda(n);
                if self.setting == Setting::EssentialProbabilistic {
                    let l1 = c.lambda(1);
                    if n == 1 {
                        0.0
                    } else {
                        (l - l1) * (l + l1)
                    }
                } else {
                    l * l
                }
            }
        })
    }

    /// Normalised eigenfunction with index `n` (1-based, or 0-based for Jacobi).
    pub fn eval(&self, n: usize, x: f64) -> Result<f64> {
        self.check(n)?;
        check_point(x)?;
        Ok(match &self.family {
            Family::Jacobi(p) => p.eval(n, x),
            Family::Bessel(c) => {
                let nu = c.nu();
                match self.setting {
                    Setting::Natural => c.norm_const(n) * x.powf(-nu) * c.jv(n, x),
                    Setting::Lebesgue => c.norm_const(n) * x.sqrt() * c.jv(n, x),
                    Setting::Essential | Setting::EssentialProbabilistic => {
                        if n == 1 {
                            1.0
                        } else {
                            c.norm_const(n) / c.norm_const(1) * c.jv_quotient(n, x)
                        }
                    }
                    Setting::ModifiedEssential => {
                        c.norm_const(n) * x.powf(-nu) * c.jv_over_one_minus(n, x)
                    }
                    Setting::Jacobi => unreachable!(),
                }
            }
        })
    }

    /// New or old derivative of the `n`-th eigenfunction.
    ///
    /// New: d_ν (essential), δ_ν (natural), 𝔻_ν (Lebesgue), ď_ν (modified), D_{α,β}
    /// (Jacobi). Old: d/dx (natural), d/dx − (ν+1/2)/x (Lebesgue).
    pub fn derivative(&self, kind: DerivativeKind, n: usize, x: f64) -> Result<f64> {
        self.check(n)?;
        check_point(x)?;
        if kind == DerivativeKind::Old {
            let c = match (&self.family, self.setting) {
                (Family::Bessel(c), Setting::Natural | Setting::Lebesgue) => c,
                _ => {
                    return Err(Error::Unsupported(format!(
                        "old derivative is defined only for natural and lebesgue, not {}",
                        self.setting
                    )))
                }
            };
            let j1 = c.jv_pair(n, x).1;
            let base = -c.norm_const(n) * c.lambda(n) * j1;
            return Ok(match self.setting {
                Setting::Natural => base * x.powf(-c.nu()),
                _ => base * x.sqrt(),
            });
        }
        let c = match &self.family {
            Family::Jacobi(p) => return Ok(p.derivative(n, x)),
            Family::Bessel(c) => c,
        };
        if n == 1 {
            return Ok(0.0);
        }
        let w = c.wronskian(n, x);
        let cn = c.norm_const(n);
        Ok(match self.setting {
            Setting::Essential | Setting::EssentialProbabilistic => cn / c.norm_const(1) * w.over_a2(x),
            Setting::Natural => cn * x.powf(-c.nu()) * w.over_a(x),
            Setting::Lebesgue => cn * x.sqrt() * w.over_a(x),
            Setting::ModifiedEssential => cn * x.powf(-c.nu()) * w.over_a_one_minus(x),
            Setting::Jacobi => unreachable!(),
        })
    }

    /// Second derivative of the essential eigenfunction ϕ_n, from
    /// W' = −W/x − (λ_n² − λ_1²) J_ν(λ_1x) J_ν(λ_nx).
    pub fn essential_second_derivative(&self, n: usize, x: f64) -> Result<f64> {
        if !self.setting.is_essential() {
            return Err(Error::Unsupported("second derivative is provided for essential settings".into()));
        }
        let c = self.context()?;
        c.check_index(n)?;
        check_point(x)?;
        if n == 1 {
            return Ok(0.0);
        }
        let k = c.norm_const(n) / c.norm_const(1);
        let (l1, ln) = (c.lambda(1), c.lambda(n));
        let a = c.jv(1, x);
        let b = c.jv(n, x);
        let wa2 = c.wronskian(n, x).over_a2(x);
        let r = c.ratio().ratio_r(1, x)?;
        let da_over_a = c.nu() / x - r;
        // W'/a² − 2 (W/a²)(a'/a)
        let v = -wa2 / x - (ln - l1) * (ln + l1) * b / a - 2.0 * wa2 * da_over_a;
        Ok(k * v)
    }
}

fn check_point(x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("point {x} outside (0,1)")))
    }
}

/// Density of the setting's reference measure with respect to dx.
#[derive(Debug, Clone)]
pub struct MeasureWeight {
    spec: SystemSpec,
}

impl MeasureWeight {
    pub fn setting(&self) -> Setting {
        self.spec.setting
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn eval(&self, x: f64) -> f64 {
        let c = match &self.spec.family {
            Family::Jacobi(_) => return 1.0,
            Family::Bessel(c) => c,
        };
        let e = 2.0 * c.nu() + 1.0;
        match self.spec.setting {
            Setting::Lebesgue | Setting::Jacobi => 1.0,
            Setting::Natural => x.powf(e),
            Setting::ModifiedEssential => x.powf(e) * (1.0 - x) * (1.0 - x),
            Setting::Essential | Setting::EssentialProbabilistic => {
                let p = c.norm_const(1) * x.powf(-c.nu()) * c.jv(1, x);
                x.powf(e) * p * p
            }
        }
    }

    /// Exponents (a, b) with w(x) ≍ x^a near 0 and (1−x)^b near 1.
    pub fn endpoint_exponents(&self) -> (f64, f64) {
        let e = self.spec.nu().map_or(0.0, |nu| 2.0 * nu + 1.0);
        match self.spec.setting {
            Setting::Lebesgue | Setting::Jacobi => (0.0, 0.0),
            Setting::Natural => (e, 0.0),
            _ => (e, 2.0),
        }
    }
}

/// Sup of |f| over a grid, with the location.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSup {
    pub value: f64,
    pub at: f64,
}

/// Empirical growth of sup|ϕ_n| and sup|d_ν ϕ_n| in the essential setting.
#[derive(Debug, Clone, Serialize)]
pub struct UniformBoundReport {
    pub nu: f64,
    pub sup_phi: Vec<GridSup>,
    pub sup_dphi: Vec<GridSup>,
    /// least-squares slope of log sup against log n over n ≥ 2
    pub exponent_phi: f64,
    pub exponent_dphi: f64,
    pub bound_phi: f64,
    pub bound_dphi: f64,
    pub pass: bool,
}

pub const GROWTH_SLACK: f64 = 0.1;

pub fn grid_sup<F>(points: &[f64], f: F) -> Result<GridSup>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    let vals: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&x| f(x).map(|v| (v.abs(), x)))
        .collect::<Result<_>>()?;
    let mut best = GridSup { value: 0.0, at: f64::NAN };
    for (v, x) in vals {
        if !v.is_finite() {
            return Err(Error::NonFinite { index: 0, x });
        }
        if v > best.value || best.at.is_nan() {
            best = GridSup { value: v, at: x };
        }
    }
    Ok(best)
}

/// Least-squares slope of log y against log n.
pub fn loglog_slope(ns: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ns.iter().zip(ys).map(|(n, y)| (n.ln(), y.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

pub fn uniform_bound_report(spec: &SystemSpec, n_max: usize) -> Result<UniformBoundReport> {
    if !spec.setting().is_essential() {
        return Err(Error::Unsupported("uniform bounds are reported for the essential setting".into()));
    }
    let c = spec.context()?;
    if n_max < 3 || n_max > c.capacity() {
        return Err(Error::domain(format!("n_max must lie in 3..={}", c.capacity())));
    }
    let nu = c.nu();
    let pts = grid::evaluation_grid();
    let mut sup_phi = Vec::with_capacity(n_max);
    let mut sup_dphi = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        sup_phi.push(grid_sup(&pts, |x| spec.eval(n, x))?);
        sup_dphi.push(grid_sup(&pts, |x| spec.derivative(DerivativeKind::New, n, x))?);
    }
    let ns: Vec<f64> = (2..=n_max).map(|n| n as f64).collect();
    let yp: Vec<f64> = sup_phi[1..].iter().map(|s| s.value).collect();
    let yd: Vec<f64> = sup_dphi[1..].iter().map(|s| s.value).collect();
    let exponent_phi = loglog_slope(&ns, &yp);
    let exponent_dphi = loglog_slope(&ns, &yd);
    let bound_phi = nu + 2.0;
    let bound_dphi = nu + 5.0;
    Ok(UniformBoundReport {
        nu,
        pass: exponent_phi <= bound_phi + GROWTH_SLACK && exponent_dphi <= bound_dphi + GROWTH_SLACK,
        sup_phi,
        sup_dphi,
        exponent_phi,
        exponent_dphi,
        bound_phi,
        bound_dphi,
    })
}

/// Jacobi index k corresponding to the Fourier–Bessel index n in the coincidence
/// of the Lebesgue ν = ±1/2 systems with the Jacobi (±1/2, 1/2) systems.
pub fn jacobi_index(n: usize) -> Result<usize> {
    n.checked_sub(1).ok_or_else(|| Error::domain("Fourier–Bessel indices start at 1"))
}

pub fn bessel_index(k: usize) -> usize {
    k + 1
}
