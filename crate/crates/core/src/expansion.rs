//! Inner products, expansions into the systems, partial sums and L^p norms.

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use crate::systems::{grid, DerivativeKind, Setting, SystemSpec};
use serde::{Deserialize, Serialize};

/// Finite expansion Σ c_i f_i in the system of `spec`; `coeffs[0]` belongs to the
/// first index of the setting (1, or 0 for Jacobi).
#[derive(Debug, Clone)]
pub struct CoefficientVector {
    spec: SystemSpec,
    coeffs: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CoefficientRecord {
    setting: Setting,
    nu_or_ab: Vec<f64>,
    coeffs: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(spec: SystemSpec, coeffs: Vec<f64>) -> Result<CoefficientVector> {
        if !coeffs.is_empty() {
            let last = spec.nth_index(coeffs.len() - 1);
            if last > spec.capacity() {
                return Err(Error::domain(format!(
                    "{} coefficients exceed the system capacity {}",
                    coeffs.len(),
                    spec.capacity()
                )));
            }
        }
        Ok(CoefficientVector { spec, coeffs })
    }

    /// Single basis function with index `n` in the setting's convention.
    pub fn unit(spec: SystemSpec, n: usize) -> Result<CoefficientVector> {
        let i = n
            .checked_sub(spec.first_index())
            .ok_or_else(|| Error::domain(format!("index {n} below the first index")))?;
        let mut c = vec![0.0; i + 1];
        c[i] = 1.0;
        CoefficientVector::new(spec, c)
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Pairs (index, coefficient).
    pub fn indexed(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, &c)| (self.spec.nth_index(i), c))
    }

    pub fn partial_sum(&self, x: f64) -> Result<f64> {
        let mut s = 0.0;
        for (n, c) in self.indexed() {
            if c != 0.0 {
                s += c * self.spec.eval(n, x)?;
            }
        }
        Ok(s)
    }

    /// Σ c_n D f_n for the new derivative D of the setting.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        let mut s = 0.0;
        for (n, c) in self.indexed() {
            if c != 0.0 {
                s += c * self.spec.derivative(DerivativeKind::New, n, x)?;
            }
        }
        Ok(s)
    }

    /// Apply a multiplier m(index) to every coefficient.
    pub fn map<F: Fn(usize, f64) -> f64>(&self, m: F) -> CoefficientVector {
        CoefficientVector {
            spec: self.spec.clone(),
            coeffs: self.indexed().map(|(n, c)| m(n, c)).collect(),
        }
    }

    /// Σ c_n², the squared L² norm when the system is orthonormal.
    pub fn l2_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        let rec = CoefficientRecord {
            setting: self.spec.setting(),
            nu_or_ab: self.spec.parameters(),
            coeffs: self.coeffs.clone(),
        };
        Ok(serde_json::to_string(&rec)?)
    }

    /// Rebuild from JSON, constructing a fresh system of the recorded setting.
    pub fn from_json(text: &str) -> Result<CoefficientVector> {
        let rec: CoefficientRecord = serde_json::from_str(text)?;
        let spec = match (rec.setting, rec.nu_or_ab.as_slice()) {
            (Setting::Jacobi, [a, b]) => SystemSpec::jacobi(*a, *b)?,
            (s, [nu]) if s != Setting::Jacobi => SystemSpec::new(s, *nu, rec.coeffs.len().max(2))?,
            _ => return Err(Error::Config("nu_or_ab has the wrong length for the setting".into())),
        };
        CoefficientVector::new(spec, rec.coeffs)
    }
}

/// ⟨f, g⟩ against the rule's measure.
pub fn inner_product<F, G>(rule: &QuadratureRule, f: F, g: G) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
    G: Fn(f64) -> Result<f64> + Sync,
{
    let a = rule.sample(f)?;
    let b = rule.sample(g)?;
    Ok(rule.dot(&a, &b))
}

/// Values of the first `count` functions (or their new derivatives) at the rule's
/// nodes, one row per function.
pub fn sample_basis(
    rule: &QuadratureRule,
    spec: &SystemSpec,
    count: usize,
    derivative: bool,
) -> Result<Vec<Vec<f64>>> {
    (0..count)
        .map(|i| {
            let n = spec.nth_index(i);
            if derivative {
                rule.sample(|x| spec.derivative(DerivativeKind::New, n, x))
            } else {
                rule.sample(|x| spec.eval(n, x))
            }
        })
        .collect()
}

/// Coefficients ⟨f, f_n⟩ for the first `count` functions.
pub fn expand<F>(rule: &QuadratureRule, spec: &SystemSpec, f: F, count: usize) -> Result<CoefficientVector>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let fv = rule.sample(f)?;
    let basis = sample_basis(rule, spec, count, false)?;
    let coeffs = basis.iter().map(|b| rule.dot(&fv, b)).collect();
    CoefficientVector::new(spec.clone(), coeffs)
}

/// Gram matrix of sampled rows.
pub fn gram(rule: &QuadratureRule, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter().map(|a| rows.iter().map(|b| rule.dot(a, b)).collect()).collect()
}

/// L^p norm against the rule's measure; `p = ∞` is the sup over the evaluation grid.
pub fn lp_norm<F>(rule: &QuadratureRule, f: F, p: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(p >= 1.0) {
        return Err(Error::domain(format!("L^p exponent must be at least 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(crate::systems::grid_sup(grid::evaluation_grid(), f)?.value);
    }
    Ok(rule.lp_values(&rule.sample(f)?, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{build_rule, rule_for_system};

    #[test]
    fn expansion_of_basis_function_is_unit_vector() {
        let s = SystemSpec::new(Setting::Natural, 0.3, 12).unwrap();
        let r = rule_for_system(&s, 12).unwrap();
        let c = expand(&r, &s, |x| s.eval(3, x), 6).unwrap();
        for (i, v) in c.coeffs().iter().enumerate() {
            let want = if i == 2 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-9);
        }
        let e = s.as_setting(Setting::Essential).unwrap();
        let r = rule_for_system(&e, 8).unwrap();
        let c = expand(&r, &e, |_| Ok(1.0), 4).unwrap();
        assert!((c.coeffs()[0] - 1.0).abs() < 1e-9);
        assert!(c.coeffs()[1..].iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn pairing_with_one_moves_to_adjoint() {
        // ⟨1, d ϕ_n⟩ = ⟨d*1, ϕ_n⟩ with d*1 = −(2ν+1)/x + 2R(x)
        let nu = 0.7;
        let e = SystemSpec::new(Setting::Essential, nu, 8).unwrap();
        let r = rule_for_system(&e, 8).unwrap();
        let ratio = e.context().unwrap().ratio().clone();
        for n in 2..6 {
            let lhs = inner_product(&r, |_| Ok(1.0), |x| e.derivative(DerivativeKind::New, n, x)).unwrap();
            let rhs = inner_product(
                &r,
                |x| Ok(-(2.0 * nu + 1.0) / x + 2.0 * ratio.ratio_r(1, x)?),
                |x| e.eval(n, x),
            )
            .unwrap();
            assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0), "{n}: {lhs} {rhs}");
        }
        // ν = 1/2: ∫ −2π sin(πx) · 2 sin²(πx) dx = −16/3
        let h = SystemSpec::new(Setting::Essential, 0.5, 4).unwrap();
        let r = rule_for_system(&h, 4).unwrap();
        let v = inner_product(&r, |_| Ok(1.0), |x| h.derivative(DerivativeKind::New, 2, x)).unwrap();
        assert!((v + 16.0 / 3.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn partial_sums_improve_for_polynomial() {
        let e = SystemSpec::new(Setting::Essential, 0.5, 20).unwrap();
        let r = rule_for_system(&e, 20).unwrap();
        let f = |x: f64| Ok(x * (1.0 - x));
        let mut prev = f64::INFINITY;
        for n in [4, 8, 16] {
            let c = expand(&r, &e, f, n).unwrap();
            let err = lp_norm(&r, |x| Ok(c.partial_sum(x)? - f(x)?), 2.0).unwrap();
            assert!(err < prev, "{n}: {err} {prev}");
            prev = err;
        }
    }

    #[test]
    fn json_round_trip() {
        let s = SystemSpec::jacobi(0.5, 1.5).unwrap();
        let c = CoefficientVector::new(s, vec![0.5, -1.0, 2.0]).unwrap();
        let text = c.to_json().unwrap();
        assert!(text.contains("\"setting\":\"jacobi\""));
        assert!(text.contains("\"nu_or_ab\":[0.5,1.5]"));
        let back = CoefficientVector::from_json(&text).unwrap();
        assert_eq!(back.coeffs(), c.coeffs());
        assert_eq!(back.spec().parameters(), vec![0.5, 1.5]);
    }

    #[test]
    fn lp_norm_rejects_small_exponent() {
        let s = SystemSpec::new(Setting::Lebesgue, 0.0, 4).unwrap();
        let r = build_rule(&s.measure(), 8, 16).unwrap();
        assert!(lp_norm(&r, |_| Ok(1.0), 0.5).is_err());
        assert!((lp_norm(&r, |_| Ok(2.0), 3.0).unwrap() - 2.0).abs() < 1e-13);
        assert!((lp_norm(&r, |x| Ok(x), f64::INFINITY).unwrap() - 1.0).abs() < 1e-9);
    }
}
