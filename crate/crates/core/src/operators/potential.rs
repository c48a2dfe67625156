//! Potential operators 𝕴_σ f = Σ E_n^{−σ} c_n f_n (σ > 0 fractional integral, σ < 0
//! fractional derivative) and the kernel of the fractional integral.

use super::heat::KernelConfig;
use crate::error::{Error, Result};
use crate::expansion::CoefficientVector;
use crate::special::Sum;
use crate::systems::{Setting, SystemSpec};

fn check_sigma(spec: &SystemSpec, sigma: f64) -> Result<()> {
    if !sigma.is_finite() || sigma == 0.0 {
        return Err(Error::domain(format!("σ must be a nonzero real, got {sigma}")));
    }
    if spec.setting() == Setting::EssentialProbabilistic {
        return Err(Error::Unsupported("the probabilistic generator has a zero eigenvalue".into()));
    }
    Ok(())
}

/// Coefficients of 𝕴_σ f.
pub fn potential_apply(coeffs: &CoefficientVector, sigma: f64) -> Result<CoefficientVector> {
    let spec = coeffs.spec();
    check_sigma(spec, sigma)?;
    let mut out = Vec::with_capacity(coeffs.len());
    for (n, c) in coeffs.indexed() {
        out.push(c * spec.eigenvalue(n)?.powf(-sigma));
    }
    CoefficientVector::new(spec.clone(), out)
}

/// 𝕷^{s} on the span: coefficients times E_n^{s}.
pub fn fractional_power(coeffs: &CoefficientVector, s: f64) -> Result<CoefficientVector> {
    potential_apply(coeffs, -s)
}

/// Σ_{n<N} E_n^{−σ} f_n(x) f_n(y), the termwise time integral of Γ(σ)^{−1}∫ 𝔊_t t^{σ−1} dt.
///
/// N is `cfg.truncation`, or every function the system holds.
pub fn potential_kernel(spec: &SystemSpec, cfg: &KernelConfig, sigma: f64, x: f64, y: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::domain(format!("the potential kernel needs σ > 0, got {sigma}")));
    }
    check_sigma(spec, sigma)?;
    let count = match cfg.truncation {
        Some(n) => n,
        None if spec.capacity() == usize::MAX => {
            return Err(Error::Config("a truncation is required for the Jacobi potential kernel".into()))
        }
        None => spec.capacity(),
    };
    let mut s = Sum::default();
    for i in 0..count {
        let n = spec.nth_index(i);
        s.add(spec.eigenvalue(n)?.powf(-sigma) * spec.eval(n, x)? * spec.eval(n, y)?);
    }
    Ok(s.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    #[test]
    fn diagonal_action_and_inverse() {
        let s = SystemSpec::new(Setting::Essential, 0.3, 16).unwrap();
        let f = CoefficientVector::new(s.clone(), vec![1.0, -2.0, 0.5, 0.25]).unwrap();
        let g = potential_apply(&f, 0.5).unwrap();
        for (n, c) in g.indexed() {
            let l = s.context().unwrap().lambda(n);
            assert!((c - f.coeffs()[n - 1] / l).abs() < 1e-15);
        }
        let back = fractional_power(&g, 0.5).unwrap();
        for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(potential_apply(&f, 0.0).is_err());
        let p = s.as_setting(Setting::EssentialProbabilistic).unwrap();
        assert!(potential_apply(&CoefficientVector::unit(p, 2).unwrap(), 0.5).is_err());
    }

    #[test]
    fn kernel_matches_time_integral_of_heat_series() {
        // Γ(σ)^{−1}∫_0^∞ t^{σ−1} Σ e^{−tλ²} φφ dt by the trapezoid rule in s = ln t
        let s = SystemSpec::new(Setting::Essential, 0.5, 40).unwrap();
        let cfg = KernelConfig { truncation: Some(30), ..KernelConfig::default() };
        let (sigma, x, y) = (0.5, 0.3, 0.7);
        let k = potential_kernel(&s, &cfg, sigma, x, y).unwrap();
        let terms: Vec<(f64, f64)> = (1..=30)
            .map(|n| (s.eigenvalue(n).unwrap(), s.eval(n, x).unwrap() * s.eval(n, y).unwrap()))
            .collect();
        let h = 0.02;
        let mut acc = 0.0;
        let mut u: f64 = -40.0;
        while u < 6.0 {
            let t: f64 = u.exp();
            let heat: f64 = terms.iter().map(|(e, p)| (-t * e).exp() * p).sum();
            acc += h * heat * t.powf(sigma);
            u += h;
        }
        let oracle = acc / gamma(sigma);
        assert!((k - oracle).abs() < 1e-8, "{k} {oracle}");
        assert!(potential_kernel(&s, &cfg, -0.5, x, y).is_err());
    }
}
