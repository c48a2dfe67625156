//! Eigenfunction series for heat kernels.
//!
//! Plain kernels are Σ e^{−tE_n} f_n(x) f_n(y). Differentiated kernels are
//! Σ_{n above the bottom} e^{−tE_n} Df_n(x) Df_n(y)/(E_n − E_bottom), where D is the
//! setting's new derivative. In the probabilistic essential setting the eigenvalues are
//! already shifted, so both kernels come out multiplied by e^{λ_1² t}.

use crate::error::{Error, Result};
use crate::expansion::CoefficientVector;
use crate::quadrature::rule_for_system;
use crate::systems::{DerivativeKind, SystemSpec};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Heat,
    Differentiated,
}

/// Truncation policy for eigenfunction series.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelConfig {
    /// Fixed number of terms; when `None` it is chosen from `tolerance` and t.
    pub truncation: Option<usize>,
    pub tolerance: f64,
    pub t_min: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig { truncation: None, tolerance: 1e-13, t_min: 1e-3 }
    }
}

/// Asymptotic growth used for the remainder: |f_n|² ≲ n^{GROWTH_OFFSET + 2ν}.
const GROWTH_OFFSET: f64 = 9.0;

fn growth_param(spec: &SystemSpec) -> f64 {
    match spec.nu() {
        Some(nu) => nu,
        None => {
            let p = spec.jacobi_params().expect("Jacobi spec");
            p.alpha.max(p.beta)
        }
    }
}

/// Approximate square root of the n-th eigenvalue, valid beyond any zero table.
fn approx_root(spec: &SystemSpec, n: usize) -> f64 {
    let nf = n as f64;
    match spec.nu() {
        Some(nu) => PI * (nf + 0.5 * nu - 0.25),
        None => {
            let p = spec.jacobi_params().expect("Jacobi spec");
            PI * (nf - 1.0 + 0.5 * (p.alpha + p.beta + 1.0))
        }
    }
}

impl KernelConfig {
    /// Number of terms so that e^{−tλ_{N+1}²}(N+1)^{2ν+9} (with a geometric tail factor)
    /// is below the tolerance.
    pub fn required_terms(&self, spec: &SystemSpec, t: f64) -> usize {
        let p = 2.0 * growth_param(spec) + GROWTH_OFFSET;
        let mut n = 2usize;
        loop {
            let l = approx_root(spec, n + 1);
            let tail = 1.0 + 1.0 / (2.0 * t * PI * l).max(1e-300);
            let bound = (-t * l * l).exp() * ((n + 1) as f64).powf(p) * tail;
            if bound < self.tolerance || n > 1_000_000 {
                return n;
            }
            n += 1;
        }
    }

    /// Terms to use at time t, refusing times below `t_min`.
    pub fn terms(&self, spec: &SystemSpec, t: f64) -> Result<usize> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("time must be positive, got {t}")));
        }
        if t < self.t_min {
            return Err(Error::TimeTooSmall {
                t,
                t_min: self.t_min,
                required_terms: self.required_terms(spec, t),
            });
        }
        let n = self.truncation.unwrap_or_else(|| self.required_terms(spec, t));
        let available = spec.capacity().saturating_sub(spec.first_index()).saturating_add(1);
        if n > available {
            return Err(Error::domain(format!(
                "{n} series terms needed at t = {t}, but the system provides {available}"
            )));
        }
        Ok(n)
    }

    /// Capacity an FB context needs to serve every t ≥ t_min.
    pub fn capacity_for(&self, nu: f64) -> usize {
        let n = self.truncation.unwrap_or_else(|| {
            let p = 2.0 * nu + GROWTH_OFFSET;
            let t = self.t_min;
            (2..).find(|&n| {
                let l = PI * ((n + 1) as f64 + 0.5 * nu - 0.25);
                (-t * l * l).exp() * ((n + 1) as f64).powf(p) * (1.0 + 1.0 / (2.0 * t * PI * l))
                    < self.tolerance
            })
            .unwrap()
        });
        n + 1
    }
}

/// Basis values prepared for kernel evaluation: rows of g_i(x_j) with eigenvalues E_i.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub eigen: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

/// Table for the first `count` terms of the plain or differentiated series at `xs`.
pub fn kernel_table(spec: &SystemSpec, kind: KernelKind, count: usize, xs: &[f64]) -> Result<KernelTable> {
    let first = spec.first_index();
    let bottom = spec.eigenvalue(first)?;
    let idx: Vec<usize> = match kind {
        KernelKind::Heat => (0..count).map(|i| first + i).collect(),
        KernelKind::Differentiated => (0..count).map(|i| first + 1 + i).collect(),
    };
    let mut eigen = Vec::with_capacity(idx.len());
    let mut rows = Vec::with_capacity(idx.len());
    for &n in &idx {
        let e = spec.eigenvalue(n)?;
        let row: Vec<f64> = match kind {
            KernelKind::Heat => xs.par_iter().map(|&x| spec.eval(n, x)).collect::<Result<_>>()?,
            KernelKind::Differentiated => {
                let s = 1.0 / (e - bottom).sqrt();
                xs.par_iter()
                    .map(|&x| spec.derivative(DerivativeKind::New, n, x).map(|v| v * s))
                    .collect::<Result<_>>()?
            }
        };
        eigen.push(e);
        rows.push(row);
    }
    Ok(KernelTable { eigen, rows })
}

impl KernelTable {
    /// (Σ_i e^{−tE_i} a_i b_i, Σ_i |…|) using the first `count` rows.
    pub fn combine(&self, other: &KernelTable, t: f64, j: usize, k: usize, count: usize) -> (f64, f64) {
        let mut s = 0.0;
        let mut a = 0.0;
        for i in 0..count.min(self.rows.len()) {
            let v = (-t * self.eigen[i]).exp() * self.rows[i][j] * other.rows[i][k];
            s += v;
            a += v.abs();
        }
        (s, a)
    }
}

/// Kernel values K(x_j, y_k) at time t, with the absolute term sums for rounding bounds.
pub fn kernel_matrix_with_mass(
    spec: &SystemSpec,
    cfg: &KernelConfig,
    kind: KernelKind,
    t: f64,
    xs: &[f64],
    ys: &[f64],
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let n = cfg.terms(spec, t)?;
    let count = match kind {
        KernelKind::Heat => n,
        KernelKind::Differentiated => n - 1,
    };
    let tx = kernel_table(spec, kind, count, xs)?;
    let ty = if xs == ys { tx.clone() } else { kernel_table(spec, kind, count, ys)? };
    let out: Vec<(Vec<f64>, Vec<f64>)> = (0..xs.len())
        .into_par_iter()
        .map(|j| (0..ys.len()).map(|k| tx.combine(&ty, t, j, k, count)).unzip())
        .collect();
    Ok(out.into_iter().unzip())
}

pub fn kernel_matrix(
    spec: &SystemSpec,
    cfg: &KernelConfig,
    kind: KernelKind,
    t: f64,
    xs: &[f64],
    ys: &[f64],
) -> Result<Vec<Vec<f64>>> {
    Ok(kernel_matrix_with_mass(spec, cfg, kind, t, xs, ys)?.0)
}

/// Heat kernel of the setting: 𝕲_t (essential), 𝕲_t^M (probabilistic), G_t (natural),
/// the Lebesgue and modified analogues, or the Jacobi kernel 𝔾_t^{α,β}.
pub fn heat_kernel(spec: &SystemSpec, cfg: &KernelConfig, t: f64, x: f64, y: f64) -> Result<f64> {
    Ok(kernel_matrix(spec, cfg, KernelKind::Heat, t, &[x], &[y])?[0][0])
}

/// Differentiated heat kernel: 𝕳_t (essential), 𝕳_t^M (probabilistic), ℍ_t (Lebesgue),
/// H_t^{α,β} (Jacobi), and the natural and modified analogues.
pub fn diff_heat_kernel(spec: &SystemSpec, cfg: &KernelConfig, t: f64, x: f64, y: f64) -> Result<f64> {
    Ok(kernel_matrix(spec, cfg, KernelKind::Differentiated, t, &[x], &[y])?[0][0])
}

/// e^{−t𝕷} f on the span: coefficients ⟨f, f_n⟩ e^{−tE_n}.
pub fn apply_semigroup<F>(spec: &SystemSpec, cfg: &KernelConfig, t: f64, f: F) -> Result<CoefficientVector>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let n = cfg.terms(spec, t)?;
    let rule = rule_for_system(spec, spec.nth_index(n - 1))?;
    let c = crate::expansion::expand(&rule, spec, f, n)?;
    let mut out = Vec::with_capacity(n);
    for (m, v) in c.indexed() {
        out.push(v * (-t * spec.eigenvalue(m)?).exp());
    }
    CoefficientVector::new(spec.clone(), out)
}

/// Differentiated semigroup applied to g. The result is returned as coefficients b_n of
/// Σ b_n Df_n, so evaluate it with [`CoefficientVector::derivative`].
pub fn apply_diff_semigroup<G>(spec: &SystemSpec, cfg: &KernelConfig, t: f64, g: G) -> Result<CoefficientVector>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    let n = cfg.terms(spec, t)?;
    let rule = rule_for_system(spec, spec.nth_index(n - 1))?;
    let gv = rule.sample(g)?;
    let bottom = spec.eigenvalue(spec.first_index())?;
    let mut out = vec![0.0; n];
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        let m = spec.nth_index(i);
        let d = rule.sample(|x| spec.derivative(DerivativeKind::New, m, x))?;
        let e = spec.eigenvalue(m)?;
        *slot = (-t * e).exp() * rule.dot(&gv, &d) / (e - bottom);
    }
    CoefficientVector::new(spec.clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::rule_for_system;
    use crate::systems::Setting;

    fn cfg() -> KernelConfig {
        KernelConfig::default()
    }

    #[test]
    fn refuses_small_times() {
        let s = SystemSpec::new(Setting::Essential, 0.0, 120).unwrap();
        match heat_kernel(&s, &cfg(), 1e-4, 0.3, 0.4) {
            Err(Error::TimeTooSmall { required_terms, .. }) => assert!(required_terms > 100),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn half_order_lebesgue_matches_sine_series() {
        let s = SystemSpec::new(Setting::Lebesgue, 0.5, 120).unwrap();
        for &t in &[0.001, 0.01, 0.3] {
            for &(x, y) in &[(0.1, 0.2), (0.5, 0.5), (0.93, 0.07)] {
                let k = heat_kernel(&s, &cfg(), t, x, y).unwrap();
                let o: f64 = (1..400)
                    .map(|n| {
                        let a = n as f64 * PI;
                        2.0 * (-a * a * t).exp() * (a * x).sin() * (a * y).sin()
                    })
                    .sum();
                assert!((k - o).abs() < 1e-10, "{t} {x} {y}: {k} {o}");
            }
        }
    }

    #[test]
    fn markov_mass_and_symmetry() {
        let s = SystemSpec::new(Setting::EssentialProbabilistic, 0.3, 60).unwrap();
        let rule = rule_for_system(&s, 60).unwrap();
        let c = cfg();
        let t = 0.01;
        let ys = rule.nodes().to_vec();
        let m = kernel_matrix(&s, &c, KernelKind::Heat, t, &[0.2, 0.9], &ys).unwrap();
        for row in m {
            let mass = rule.integrate_values(&row);
            assert!((mass - 1.0).abs() < 1e-8, "{mass}");
        }
        let a = heat_kernel(&s, &c, 0.05, 0.2, 0.7).unwrap();
        let b = heat_kernel(&s, &c, 0.05, 0.7, 0.2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn semigroup_reproduces_eigenfunction() {
        let s = SystemSpec::new(Setting::Essential, 0.5, 60).unwrap();
        let c = cfg();
        let out = apply_semigroup(&s, &c, 0.1, |x| s.eval(3, x)).unwrap();
        let l3 = s.eigenvalue(3).unwrap();
        for &x in &[0.1, 0.5, 0.95] {
            let want = (-0.1 * l3).exp() * s.eval(3, x).unwrap();
            assert!((out.partial_sum(x).unwrap() - want).abs() < 1e-8);
        }
    }

    #[test]
    fn jacobi_differentiated_equals_shifted_plain() {
        let j = SystemSpec::jacobi(0.5, 0.5).unwrap();
        let j1 = SystemSpec::jacobi(1.5, 1.5).unwrap();
        let xs = [0.05, 0.3, 0.62, 0.97];
        let h = kernel_matrix(&j, &cfg(), KernelKind::Differentiated, 0.05, &xs, &xs).unwrap();
        let g = kernel_matrix(&j1, &cfg(), KernelKind::Heat, 0.05, &xs, &xs).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert!((h[a][b] - g[a][b]).abs() < 1e-10);
            }
        }
    }
}
