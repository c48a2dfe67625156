//! Sobolev and potential norms on the span of the essential system, the Calderón-type
//! equivalence, and diagnostics for the old derivatives.

use crate::error::{Error, Result};
use crate::expansion::CoefficientVector;
use crate::operators::heat::{apply_semigroup, KernelConfig};
use crate::operators::potential::fractional_power;
use crate::operators::riesz::random_coefficients;
use crate::quadrature::QuadratureRule;
use crate::systems::{loglog_slope, DerivativeKind, JacobiParams, Setting, SystemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Element of the span with the exponent its norms are taken in.
#[derive(Debug, Clone)]
pub struct SobolevElement {
    pub coeffs: CoefficientVector,
    pub p: f64,
}

impl SobolevElement {
    pub fn new(coeffs: CoefficientVector, p: f64) -> Result<SobolevElement> {
        if coeffs.spec().setting() != Setting::Essential {
            return Err(Error::Unsupported("Sobolev elements live in the essential system".into()));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::domain(format!("p must lie in (1, ∞), got {p}")));
        }
        Ok(SobolevElement { coeffs, p })
    }
}

/// ∥f∥_p + ∥d f∥_p against dη.
pub fn sobolev_norm(rule: &QuadratureRule, el: &SobolevElement) -> Result<f64> {
    let f = rule.sample(|x| el.coeffs.partial_sum(x))?;
    let d = rule.sample(|x| el.coeffs.derivative(x))?;
    Ok(rule.lp_values(&f, el.p) + rule.lp_values(&d, el.p))
}

/// ∥g∥_p where f = 𝕴_{σ/2} g, i.e. g has coefficients λ_n^σ c_n.
pub fn potential_norm(rule: &QuadratureRule, el: &SobolevElement, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::domain(format!("σ must be positive, got {sigma}")));
    }
    let g = fractional_power(&el.coeffs, 0.5 * sigma)?;
    let v = rule.sample(|x| g.partial_sum(x))?;
    Ok(rule.lp_values(&v, el.p))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalderonReport {
    pub nu: f64,
    pub p: f64,
    pub samples: usize,
    pub seed: u64,
    pub max_terms: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// frozen [low, high] band the ratios are checked against
    pub baseline_band: Option<(f64, f64)>,
    /// exact bounds [min(1, 1/λ_1), √(1 + 1/λ_1²)], known at p = 2
    pub exact_bounds: Option<(f64, f64)>,
}

impl CalderonReport {
    pub fn pass(&self) -> bool {
        let finite = self.min_ratio > 0.0 && self.max_ratio.is_finite();
        let band = self.baseline_band.map_or(true, |(lo, hi)| self.min_ratio >= lo && self.max_ratio <= hi);
        let exact = self.exact_bounds.map_or(true, |(lo, hi)| {
            self.min_ratio >= lo * (1.0 - 1e-9) && self.max_ratio <= hi * (1.0 + 1e-9)
        });
        finite && band && exact
    }
}

/// Ratios ∥f∥_{W^p}/∥f∥_{𝕷^{p,1}} over random span elements with at most `max_terms` terms.
#[allow(clippy::too_many_arguments)]
pub fn calderon_equivalence_report(
    rule: &QuadratureRule,
    spec: &SystemSpec,
    p: f64,
    samples: usize,
    max_terms: usize,
    seed: u64,
    band: Option<(f64, f64)>,
) -> Result<CalderonReport> {
    let nu = spec.nu().ok_or_else(|| Error::Unsupported("needs a Bessel system".into()))?;
    if nu < -0.5 {
        return Err(Error::domain(format!("the equivalence is stated for ν ≥ −1/2, got {nu}")));
    }
    if !(1..=16).contains(&max_terms) {
        return Err(Error::domain("max_terms must lie in 1..=16"));
    }
    let spec = spec.as_setting(Setting::Essential)?;
    let l1 = spec.context()?.lambda(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..samples {
        let len = rng.gen_range(1..=max_terms);
        let el = SobolevElement::new(CoefficientVector::new(spec.clone(), random_coefficients(&mut rng, len))?, p)?;
        let r = sobolev_norm(rule, &el)? / potential_norm(rule, &el, 1.0)?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let exact_bounds = (p == 2.0).then(|| ((1.0 / l1).min(1.0), (1.0 + 1.0 / (l1 * l1)).sqrt()));
    Ok(CalderonReport {
        nu,
        p,
        samples,
        seed,
        max_terms,
        min_ratio: lo,
        max_ratio: hi,
        baseline_band: band,
        exact_bounds,
    })
}

/// ∥T_t f − f∥_{W²} for f smooth with compact support, at each of `times`.
pub fn semigroup_approximation(spec: &SystemSpec, times: &[f64]) -> Result<Vec<f64>> {
    let spec = spec.as_setting(Setting::Essential)?;
    let cfg = KernelConfig::default();
    let f = TestFunction::Bump;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let c = apply_semigroup(&spec, &cfg, t, |x| Ok(f.value(x)))?;
        let rule = crate::quadrature::rule_for_system(&spec, c.len().max(8))?;
        let g = rule.sample(|x| Ok(c.partial_sum(x)? - f.value(x)))?;
        let dg = rule.sample(|x| Ok(c.derivative(x)? - f.slope(x)))?;
        out.push(rule.lp_values(&g, 2.0) + rule.lp_values(&dg, 2.0));
    }
    Ok(out)
}

/// Piecewise-smooth test functions for the old-derivative diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestFunction {
    /// indicator of (1/2, 1) with a C² ramp of half-width 1/20 at 1/2
    SmoothedStep,
    /// exp(−1/(1−u²)), u = 4(x − 1/2), supported in (1/4, 3/4)
    Bump,
}

const RAMP: f64 = 0.05;

impl TestFunction {
    pub fn value(self, x: f64) -> f64 {
        match self {
            TestFunction::SmoothedStep => {
                let u = ((x - 0.5 + RAMP) / (2.0 * RAMP)).clamp(0.0, 1.0);
                u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
            }
            TestFunction::Bump => {
                let u = 4.0 * (x - 0.5);
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    (-1.0 / (1.0 - u * u)).exp()
                }
            }
        }
    }

    pub fn slope(self, x: f64) -> f64 {
        match self {
            TestFunction::SmoothedStep => {
                let u = (x - 0.5 + RAMP) / (2.0 * RAMP);
                if !(0.0..=1.0).contains(&u) {
                    return 0.0;
                }
                30.0 * u * u * (1.0 - u) * (1.0 - u) / (2.0 * RAMP)
            }
            TestFunction::Bump => {
                let u = 4.0 * (x - 0.5);
                if u.abs() >= 1.0 {
                    return 0.0;
                }
                let s = 1.0 - u * u;
                -8.0 * u / (s * s) * (-1.0 / s).exp()
            }
        }
    }
}

impl std::str::FromStr for TestFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smoothed-step" | "step" => Ok(TestFunction::SmoothedStep),
            "bump" => Ok(TestFunction::Bump),
            _ => Err(Error::Config(format!("unknown test function '{s}' (smoothed-step, bump)"))),
        }
    }
}

/// The four first-order operators compared by the diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FirstOrder {
    /// d/dx on dμ_ν
    NaturalOld,
    /// d/dx − (ν+1/2)/x on dx
    LebesgueOld,
    /// d/dx + R on dμ_ν
    NaturalNew,
    /// d/dx − (ν+1/2)/x + R on dx
    LebesgueNew,
}

impl FirstOrder {
    pub const ALL: [FirstOrder; 4] =
        [FirstOrder::NaturalOld, FirstOrder::LebesgueOld, FirstOrder::NaturalNew, FirstOrder::LebesgueNew];
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorGrowth {
    pub operator: FirstOrder,
    /// ∫_ε^{1−ε} |Df|^p for each ε
    pub integrals: Vec<f64>,
    /// fitted exponent of the integrals in 1/ε
    pub growth: f64,
    pub divergent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticReport {
    pub nu: f64,
    pub p: f64,
    pub function: TestFunction,
    pub epsilons: Vec<f64>,
    pub operators: Vec<OperatorGrowth>,
}

pub const DIAGNOSTIC_EPSILONS: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// Fitted exponent above which a truncated integral counts as divergent.
pub const DIVERGENCE_SLOPE: f64 = 0.1;

/// Growth of the truncated L^p integrals of the four first-order operators applied to f.
pub fn old_derivative_diagnostic(nu: f64, p: f64, f: TestFunction) -> Result<DiagnosticReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("p must be finite and at least 1, got {p}")));
    }
    let spec = SystemSpec::new(Setting::Natural, nu, 4)?;
    let ctx = spec.context()?.clone();
    let base = QuadratureRule::lebesgue(24, 24, (0.0, 0.0))?;
    let e = 2.0 * nu + 1.0;
    let mut ops = Vec::new();
    for op in FirstOrder::ALL {
        let mut integrals = Vec::new();
        for &eps in &DIAGNOSTIC_EPSILONS {
            let len = 1.0 - 2.0 * eps;
            let mut s = crate::special::Sum::default();
            for (&u, &w) in base.nodes().iter().zip(base.dx_weights()) {
                let x = eps + len * u;
                let (v, d) = (f.value(x), f.slope(x));
                let (val, weight) = match op {
                    FirstOrder::NaturalOld => (d, x.powf(e)),
                    FirstOrder::LebesgueOld => (d - (nu + 0.5) / x * v, 1.0),
                    FirstOrder::NaturalNew => (d + ctx.ratio().ratio_r(1, x)? * v, x.powf(e)),
                    FirstOrder::LebesgueNew => {
                        (d - (nu + 0.5) / x * v + ctx.ratio().ratio_r(1, x)? * v, 1.0)
                    }
                };
                s.add(len * w * weight * val.abs().powf(p));
            }
            integrals.push(s.value());
        }
        let inv: Vec<f64> = DIAGNOSTIC_EPSILONS.iter().map(|e| 1.0 / e).collect();
        let growth = if integrals.iter().all(|&v| v > 0.0) { loglog_slope(&inv, &integrals) } else { 0.0 };
        ops.push(OperatorGrowth { operator: op, integrals, growth, divergent: growth > DIVERGENCE_SLOPE });
    }
    Ok(DiagnosticReport { nu, p, function: f, epsilons: DIAGNOSTIC_EPSILONS.to_vec(), operators: ops })
}

/// At ν = −1/2 the Lebesgue new derivative coincides with the Jacobi (−1/2, 1/2) one:
/// largest |∥𝔻ψ_n∥_p − ∥DΦ_{n−1}∥_p| for n = 2..=n_max.
pub fn jacobi_coincidence_gap(p: f64, n_max: usize) -> Result<f64> {
    let leb = SystemSpec::new(Setting::Lebesgue, -0.5, n_max)?;
    let jac = JacobiParams::new(-0.5, 0.5)?;
    let rule = QuadratureRule::lebesgue(16, 24, (0.0, 0.0))?;
    let mut worst: f64 = 0.0;
    for n in 2..=n_max {
        let a = rule.sample(|x| leb.derivative(DerivativeKind::New, n, x))?;
        let b = rule.sample(|x| Ok(jac.derivative(n - 1, x)))?;
        let (na, nb) = (lp_dx(&rule, &a, p), lp_dx(&rule, &b, p));
        worst = worst.max((na - nb).abs());
    }
    Ok(worst)
}

fn lp_dx(rule: &QuadratureRule, v: &[f64], p: f64) -> f64 {
    let w: Vec<f64> = v.iter().map(|y| y.abs().powf(p)).collect();
    rule.integrate_dx_values(&w).powf(1.0 / p)
}

/// R at ν = −1/2 in closed form, (π/2) tan(πx/2).
pub fn half_tan(x: f64) -> f64 {
    0.5 * PI * (0.5 * PI * x).tan()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::rule_for_system;

    fn ess(nu: f64) -> SystemSpec {
        SystemSpec::new(Setting::Essential, nu, 24).unwrap()
    }

    #[test]
    fn basis_norms() {
        let s = ess(0.5);
        let r = rule_for_system(&s, 16).unwrap();
        let c = s.context().unwrap();
        let one = SobolevElement::new(CoefficientVector::unit(s.clone(), 1).unwrap(), 2.0).unwrap();
        assert!((sobolev_norm(&r, &one).unwrap() - 1.0).abs() < 1e-10);
        let two = SobolevElement::new(CoefficientVector::unit(s.clone(), 2).unwrap(), 2.0).unwrap();
        let want = 1.0 + (c.lambda(2).powi(2) - c.lambda(1).powi(2)).sqrt();
        assert!((sobolev_norm(&r, &two).unwrap() - want).abs() < 1e-9 * want);
        for n in 1..=5 {
            let el = SobolevElement::new(CoefficientVector::unit(s.clone(), n).unwrap(), 2.0).unwrap();
            assert!((potential_norm(&r, &el, 1.0).unwrap() - c.lambda(n)).abs() < 1e-9 * c.lambda(n));
        }
        let pair = SobolevElement::new(CoefficientVector::new(s.clone(), vec![1.0, 1.0]).unwrap(), 2.0).unwrap();
        let want = (c.lambda(1).powi(2) + c.lambda(2).powi(2)).sqrt();
        assert!((potential_norm(&r, &pair, 1.0).unwrap() - want).abs() < 1e-9 * want);
    }

    #[test]
    fn potential_norm_small_sigma_tends_to_lp_norm() {
        let s = ess(0.0);
        let r = rule_for_system(&s, 16).unwrap();
        let el = SobolevElement::new(CoefficientVector::new(s, vec![0.3, 1.0, -0.5]).unwrap(), 3.0).unwrap();
        let v = r.sample(|x| el.coeffs.partial_sum(x)).unwrap();
        let plain = r.lp_values(&v, 3.0);
        assert!((potential_norm(&r, &el, 1e-9).unwrap() - plain).abs() < 1e-7);
    }

    #[test]
    fn calderon_exact_bounds_at_two() {
        let s = ess(0.5);
        let r = rule_for_system(&s, 16).unwrap();
        let rep = calderon_equivalence_report(&r, &s, 2.0, 30, 8, 7, None).unwrap();
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn step_diverges_only_for_new_natural_and_lebesgue() {
        let rep = old_derivative_diagnostic(0.0, 2.0, TestFunction::SmoothedStep).unwrap();
        for g in &rep.operators {
            let want = matches!(g.operator, FirstOrder::NaturalNew | FirstOrder::LebesgueNew);
            assert_eq!(g.divergent, want, "{g:?}");
        }
        let rep = old_derivative_diagnostic(0.0, 2.0, TestFunction::Bump).unwrap();
        assert!(rep.operators.iter().all(|g| !g.divergent));
    }

    #[test]
    fn half_order_coincidence() {
        assert!(jacobi_coincidence_gap(2.0, 6).unwrap() < 1e-9);
        assert!(jacobi_coincidence_gap(3.0, 6).unwrap() < 1e-9);
        let s = SystemSpec::new(Setting::Lebesgue, -0.5, 4).unwrap();
        let c = s.context().unwrap();
        for &x in &[0.1, 0.5, 0.9] {
            assert!((c.ratio().ratio_r(1, x).unwrap() - half_tan(x)).abs() < 1e-12 * half_tan(x).max(1.0));
        }
    }

    #[test]
    fn semigroup_approximation_decreases() {
        let v = semigroup_approximation(&ess(0.0), &[0.1, 0.05, 0.01]).unwrap();
        assert!(v[0] > v[1] && v[1] > v[2], "{v:?}");
    }
}
