//! Riesz transforms as coefficient multipliers into the differentiated systems.

use crate::error::{Error, Result};
use crate::expansion::CoefficientVector;
use crate::quadrature::QuadratureRule;
use crate::systems::{DerivativeKind, Setting, SystemSpec, TensorSystem};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RieszVariant {
    /// 𝕽 = d 𝕷^{−1/2}
    Standard,
    /// 𝕽^M = d (𝕷^M)^{−1/2} Π_0
    Probabilistic,
    /// 𝕽̌ = ď 𝕷̌^{−1/2}
    Modified,
}

impl RieszVariant {
    /// Setting in which the variant acts.
    pub fn setting(self) -> Setting {
        match self {
            RieszVariant::Standard => Setting::Essential,
            RieszVariant::Probabilistic => Setting::EssentialProbabilistic,
            RieszVariant::Modified => Setting::ModifiedEssential,
        }
    }

    /// Spec of the matching setting sharing the Bessel data of `spec`.
    pub fn spec_for(self, spec: &SystemSpec) -> Result<SystemSpec> {
        spec.as_setting(self.setting())
    }
}

/// Image 𝕽f = Σ b_n D f_n.
#[derive(Debug, Clone)]
pub struct RieszImage {
    pub coeffs: CoefficientVector,
}

impl RieszImage {
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.coeffs.derivative(x)
    }

    /// ∥𝕽f∥₂² = Σ b_n² (λ_n² − λ_1²), exact by orthogonality of the differentiated system.
    pub fn l2_squared(&self) -> Result<f64> {
        let s = self.coeffs.spec();
        let c = s.context()?;
        let l1 = c.lambda(1);
        Ok(self
            .coeffs
            .indexed()
            .map(|(n, b)| {
                let l = c.lambda(n);
                b * b * (l - l1) * (l + l1)
            })
            .sum())
    }
}

fn multiplier(spec: &SystemSpec, n: usize) -> Result<f64> {
    if n == 1 {
        return Ok(0.0);
    }
    Ok(1.0 / spec.eigenvalue(n)?.sqrt())
}

fn check_variant(coeffs: &CoefficientVector, variant: RieszVariant) -> Result<()> {
    let s = coeffs.spec().setting();
    let ok = match variant {
        RieszVariant::Standard | RieszVariant::Probabilistic => s.is_essential(),
        RieszVariant::Modified => s == Setting::ModifiedEssential,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{variant:?} Riesz transform does not act on the {s} system")))
    }
}

/// Truncated Riesz transform of f = Σ c_n f_n.
pub fn riesz_apply(coeffs: &CoefficientVector, variant: RieszVariant) -> Result<RieszImage> {
    check_variant(coeffs, variant)?;
    let spec = variant.spec_for(coeffs.spec())?;
    let mut out = Vec::with_capacity(coeffs.len());
    for (n, c) in coeffs.indexed() {
        out.push(c * multiplier(&spec, n)?);
    }
    Ok(RieszImage { coeffs: CoefficientVector::new(spec, out)? })
}

/// Adjoint 𝕽*g = Σ m_n ⟨g, Df_n⟩ f_n for the first `count` functions.
pub fn riesz_adjoint<G>(
    rule: &QuadratureRule,
    spec: &SystemSpec,
    variant: RieszVariant,
    g: G,
    count: usize,
) -> Result<CoefficientVector>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    let spec = variant.spec_for(spec)?;
    let gv = rule.sample(g)?;
    let mut out = vec![0.0; count];
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        let n = i + 1;
        let d = rule.sample(|x| spec.derivative(DerivativeKind::New, n, x))?;
        *slot = multiplier(&spec, n)? * rule.dot(&gv, &d);
    }
    CoefficientVector::new(spec, out)
}

/// Multi-dimensional expansion: (multi-index, coefficient) pairs.
pub type TensorCoefficients = Vec<(Vec<usize>, f64)>;

/// Vectorial Riesz transform in the tensor setting.
#[derive(Debug, Clone)]
pub struct VectorialRiesz {
    system: TensorSystem,
    terms: Vec<(Vec<usize>, f64)>,
}

impl VectorialRiesz {
    /// Multipliers Λ^{−1/2} with Λ the sum of one-dimensional eigenvalues; multi-indices
    /// with Λ = 0 are dropped.
    pub fn new(system: TensorSystem, f: &TensorCoefficients) -> Result<VectorialRiesz> {
        let mut terms = Vec::with_capacity(f.len());
        for (idx, c) in f {
            let lam = system.eigenvalue(idx)?;
            if lam > 0.0 && idx.iter().any(|&n| n > 1) {
                terms.push((idx.clone(), c / lam.sqrt()));
            }
        }
        Ok(VectorialRiesz { system, terms })
    }

    /// Component i at a point.
    pub fn component(&self, i: usize, point: &[f64]) -> Result<f64> {
        let mut s = 0.0;
        for (idx, b) in &self.terms {
            if idx[i] > 1 {
                s += b * self.system.partial(i, idx, point)?;
            }
        }
        Ok(s)
    }

    /// ℓ² magnitude of the vector of components.
    pub fn magnitude(&self, point: &[f64]) -> Result<f64> {
        let mut s = 0.0;
        for i in 0..self.system.dim() {
            let c = self.component(i, point)?;
            s += c * c;
        }
        Ok(s.sqrt())
    }

    /// ∥ |𝕽f| ∥₂² = Σ_I b_I² Σ_i (λ_{n_i}² − λ_1²), exact by orthogonality.
    pub fn l2_squared(&self) -> Result<f64> {
        let mut s = 0.0;
        for (idx, b) in &self.terms {
            let mut g = 0.0;
            for (f, &n) in self.system.factors().iter().zip(idx) {
                let c = f.context()?;
                g += c.lambda(n).powi(2) - c.lambda(1).powi(2);
            }
            s += b * b * g;
        }
        Ok(s)
    }
}

/// p* = max(p, p/(p−1))
pub fn p_star(p: f64) -> f64 {
    p.max(p / (p - 1.0))
}

/// 48(p* − 1)
pub fn riesz_lp_bound(p: f64) -> f64 {
    48.0 * (p_star(p) - 1.0)
}

/// 48(1 + √K)(p* − 1), K = max(ν+1/2, 1/(ν+1/2))/8.
pub fn modified_lp_bound(nu: f64, p: f64) -> f64 {
    48.0 * (1.0 + modified_k(nu).sqrt()) * (p_star(p) - 1.0)
}

pub fn modified_k(nu: f64) -> f64 {
    let a = nu + 0.5;
    0.125 * a.max(1.0 / a)
}

/// Random span element with `count` standard normal coefficients.
pub fn random_coefficients(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    (0..count).map(|_| StandardNormal.sample(rng)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LpProbe {
    pub p: f64,
    pub samples: usize,
    pub seed: u64,
    pub max_ratio: f64,
    pub bound: f64,
    /// whether the bound is asserted for this order (ν ≥ −1/2)
    pub asserted: bool,
}

impl LpProbe {
    pub fn pass(&self) -> bool {
        !self.asserted || self.max_ratio <= self.bound
    }
}

/// Empirical sup of ∥𝕽f∥_p/∥f∥_p over random span elements with up to `count` terms.
pub fn lp_norm_probe(
    rule: &QuadratureRule,
    spec: &SystemSpec,
    variant: RieszVariant,
    p: f64,
    count: usize,
    samples: usize,
    seed: u64,
) -> Result<LpProbe> {
    let spec = variant.spec_for(spec)?;
    let nu = spec.nu().expect("Bessel spec");
    let basis = crate::expansion::sample_basis(rule, &spec, count, false)?;
    let dbasis = crate::expansion::sample_basis(rule, &spec, count, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let len = rng.gen_range(2..=count);
        let c = random_coefficients(&mut rng, len);
        let mut f = vec![0.0; rule.len()];
        let mut g = vec![0.0; rule.len()];
        for (i, &ci) in c.iter().enumerate() {
            let m = multiplier(&spec, i + 1)?;
            for j in 0..rule.len() {
                f[j] += ci * basis[i][j];
                g[j] += ci * m * dbasis[i][j];
            }
        }
        worst = worst.max(rule.lp_values(&g, p) / rule.lp_values(&f, p));
    }
    let bound = match variant {
        RieszVariant::Modified => modified_lp_bound(nu, p),
        _ => riesz_lp_bound(p),
    };
    let asserted = match variant {
        RieszVariant::Modified => nu > -0.5,
        _ => nu >= -0.5,
    };
    Ok(LpProbe { p, samples, seed, max_ratio: worst, bound, asserted })
}

#[derive(Debug, Clone, Serialize)]
pub struct ModifiedConstantCheck {
    pub nu: f64,
    pub k: f64,
    /// max over the grid of (R − 1/(1−x))² x(1−x)/(2ν+1)
    pub max_ratio: f64,
    pub pass: bool,
}

/// (R(x) − 1/(1−x))² ≤ K(2ν+1)/(x(1−x)) on the evaluation grid.
pub fn modified_constant_check(spec: &SystemSpec) -> Result<ModifiedConstantCheck> {
    let c = spec.context()?;
    let nu = c.nu();
    if nu <= -0.5 {
        return Err(Error::domain("the modified-setting constant needs ν > −1/2"));
    }
    let k = modified_k(nu);
    let mut worst: f64 = 0.0;
    for &x in crate::systems::grid::evaluation_grid() {
        let r = c.ratio().ratio_r(1, x)? - 1.0 / (1.0 - x);
        worst = worst.max(r * r * x * (1.0 - x) / (2.0 * nu + 1.0));
    }
    Ok(ModifiedConstantCheck { nu, k, max_ratio: worst, pass: worst <= k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::rule_for_system;

    #[test]
    fn bottom_function_maps_to_zero_and_spectral_fidelity() {
        let s = SystemSpec::new(Setting::Essential, 0.4, 16).unwrap();
        let one = CoefficientVector::unit(s.clone(), 1).unwrap();
        let im = riesz_apply(&one, RieszVariant::Standard).unwrap();
        assert_eq!(im.eval(0.3).unwrap(), 0.0);
        for n in 2..6 {
            let f = CoefficientVector::unit(s.clone(), n).unwrap();
            let im = riesz_apply(&f, RieszVariant::Standard).unwrap();
            let l = s.context().unwrap().lambda(n);
            for &x in &[0.2, 0.8] {
                let want = s.derivative(DerivativeKind::New, n, x).unwrap() / l;
                assert!((im.eval(x).unwrap() - want).abs() < 1e-12 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn quadrature_norm_matches_closed_form() {
        let s = SystemSpec::new(Setting::ModifiedEssential, 0.2, 16).unwrap();
        let r = rule_for_system(&s, 16).unwrap();
        let f = CoefficientVector::new(s.clone(), vec![0.3, -1.0, 0.5, 2.0, 0.1]).unwrap();
        let im = riesz_apply(&f, RieszVariant::Modified).unwrap();
        let q = r.integrate(|x| im.eval(x).map(|v| v * v)).unwrap();
        let e = im.l2_squared().unwrap();
        assert!((q - e).abs() < 1e-9 * e, "{q} {e}");
        assert!(e <= f.l2_squared());
        assert!(riesz_apply(&f, RieszVariant::Standard).is_err());
    }

    #[test]
    fn adjoint_pairing() {
        let s = SystemSpec::new(Setting::Essential, 0.0, 16).unwrap();
        let r = rule_for_system(&s, 16).unwrap();
        let f = CoefficientVector::new(s.clone(), vec![0.5, 1.0, -0.7, 0.2]).unwrap();
        let im = riesz_apply(&f, RieszVariant::Standard).unwrap();
        let g = |x: f64| Ok(x * x * (1.0 - x));
        let lhs = crate::expansion::inner_product(&r, |x| im.eval(x), g).unwrap();
        let adj = riesz_adjoint(&r, &s, RieszVariant::Standard, g, 4).unwrap();
        let rhs: f64 = adj.coeffs().iter().zip(f.coeffs()).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-9, "{lhs} {rhs}");
    }

    #[test]
    fn vectorial_norm_of_single_term() {
        let e = SystemSpec::new(Setting::Essential, 0.5, 8).unwrap();
        let t = TensorSystem::new(vec![e.clone(), e.clone()]).unwrap();
        let v = VectorialRiesz::new(t.clone(), &vec![(vec![1, 1], 1.0)]).unwrap();
        assert_eq!(v.magnitude(&[0.3, 0.6]).unwrap(), 0.0);
        let v = VectorialRiesz::new(t, &vec![(vec![2, 1], 1.0)]).unwrap();
        let (l1, l2) = (e.context().unwrap().lambda(1), e.context().unwrap().lambda(2));
        let want = (l2 * l2 - l1 * l1) / (l2 * l2 + l1 * l1);
        assert!((v.l2_squared().unwrap() - want).abs() < 1e-14);
        assert_eq!(v.component(1, &[0.3, 0.6]).unwrap(), 0.0);
    }

    #[test]
    fn modified_constant_holds_at_half() {
        let s = SystemSpec::new(Setting::Essential, 0.5, 8).unwrap();
        let c = modified_constant_check(&s).unwrap();
        assert!(c.pass, "{c:?}");
    }
}
