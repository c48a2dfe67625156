//! Composite Gauss–Legendre rules on (0,1) with geometric grading toward both
//! endpoints, carrying the density of one of the settings' measures.

use crate::error::{Error, Result};
use crate::special::{gauss_legendre, Sum};
use crate::systems::{MeasureWeight, SystemSpec};
use rayon::prelude::*;

/// Most aggressive geometric ratio used for the graded end panels.
pub const GRADING: f64 = 0.15;
pub const MAX_DEPTH: usize = 2000;
/// Self-convergence requirement for ∫ 1 dmeasure.
pub const VALIDATION_TOL: f64 = 1e-12;
/// Graded cells near 1 stop at this width so that 1 − x stays resolvable.
const RIGHT_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    dx_weights: Vec<f64>,
    weights: Vec<f64>,
    panels: usize,
    order: usize,
    grading: f64,
    depth: (usize, usize),
    measure: Option<MeasureWeight>,
}

/// Grading ratio q for which an `order`-point Gauss rule integrates x^e on
/// [q a, a] to about 1e-15 relative accuracy for any e > −1.
pub fn grading_ratio(order: usize) -> f64 {
    // Bernstein ellipse through the singularity at 0: ρ^{−2·order} ≤ 1e-15
    let lr = 17.3 / order as f64;
    let rho = lr.exp();
    let d = 0.5 * (rho + 1.0 / rho);
    let r = (d + 1.0) / (d - 1.0);
    (1.0 / r).max(GRADING)
}

/// Grading depth so that the innermost cell holds a negligible share of ∫ x^e:
/// (q^depth)^{1+e} ≈ 1e-17.
pub fn grading_depth(e: f64, q: f64) -> usize {
    let e = e.min(0.0);
    let d = (40.0 / ((1.0 + e) * (1.0 / q).ln())).ceil();
    (d as usize).clamp(4, MAX_DEPTH)
}

fn breakpoints(panels: usize, q: f64, depth: (usize, usize)) -> Vec<f64> {
    let h = 1.0 / panels as f64;
    let mut b = vec![0.0];
    for j in (0..depth.0).rev() {
        b.push(h * q.powi(j as i32 + 1));
    }
    for i in 1..panels {
        b.push(i as f64 * h);
    }
    for j in 0..depth.1 {
        let w = h * q.powi(j as i32 + 1);
        if w < RIGHT_FLOOR {
            break;
        }
        b.push(1.0 - w);
    }
    b.push(1.0);
    b
}

fn composite(panels: usize, order: usize, q: f64, depth: (usize, usize)) -> (Vec<f64>, Vec<f64>) {
    let (g, w) = gauss_legendre(order);
    let b = breakpoints(panels, q, depth);
    let mut nodes = Vec::with_capacity(b.len() * order);
    let mut weights = Vec::with_capacity(b.len() * order);
    for win in b.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (gi, wi) in g.iter().zip(&w) {
            nodes.push(c + r * gi);
            weights.push(r * wi);
        }
    }
    (nodes, weights)
}

impl QuadratureRule {
    /// Unweighted rule for dx with grading suited to integrands ≍ x^{e0} at 0 and
    /// (1−x)^{e1} at 1.
    pub fn lebesgue(panels: usize, order: usize, exponents: (f64, f64)) -> Result<QuadratureRule> {
        check_shape(panels, order)?;
        let q = grading_ratio(order);
        let depth = (grading_depth(exponents.0, q), grading_depth(exponents.1, q));
        let (nodes, dx_weights) = composite(panels, order, q, depth);
        Ok(QuadratureRule {
            weights: dx_weights.clone(),
            nodes,
            dx_weights,
            panels,
            order,
            grading: q,
            depth,
            measure: None,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights including the measure density.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Plain dx weights.
    pub fn dx_weights(&self) -> &[f64] {
        &self.dx_weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    /// Number of graded cells at (0, 1).
    pub fn depth(&self) -> (usize, usize) {
        self.depth
    }

    pub fn measure(&self) -> Option<&MeasureWeight> {
        self.measure.as_ref()
    }

    /// Evaluate `f` at every node, failing on the first non-finite value.
    pub fn sample<F>(&self, f: F) -> Result<Vec<f64>>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        let v: Vec<f64> = self.nodes.par_iter().map(|&x| f(x)).collect::<Result<_>>()?;
        if let Some(i) = v.iter().position(|y| !y.is_finite()) {
            return Err(Error::NonFinite { index: i, x: self.nodes[i] });
        }
        Ok(v)
    }

    /// Σ w_i v_i against the measure.
    pub fn integrate_values(&self, v: &[f64]) -> f64 {
        self.weights.iter().zip(v).map(|(w, y)| w * y).collect::<Sum>().value()
    }

    /// Σ w_i v_i against dx.
    pub fn integrate_dx_values(&self, v: &[f64]) -> f64 {
        self.dx_weights.iter().zip(v).map(|(w, y)| w * y).collect::<Sum>().value()
    }

    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        Ok(self.integrate_values(&self.sample(f)?))
    }

    /// Σ w_i a_i b_i
    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(a.iter().zip(b))
            .map(|(w, (x, y))| w * x * y)
            .collect::<Sum>()
            .value()
    }

    /// (Σ w_i |v_i|^p)^{1/p}
    pub fn lp_values(&self, v: &[f64], p: f64) -> f64 {
        if p.is_infinite() {
            return v.iter().fold(0.0, |m, y| m.max(y.abs()));
        }
        let s = self.weights.iter().zip(v).map(|(w, y)| w * y.abs().powf(p)).collect::<Sum>().value();
        s.powf(1.0 / p)
    }
}

fn check_shape(panels: usize, order: usize) -> Result<()> {
    if panels < 4 || order < 8 {
        return Err(Error::domain(format!(
            "quadrature needs panels >= 4 and order >= 8, got {panels} and {order}"
        )));
    }
    Ok(())
}

fn weighted(measure: &MeasureWeight, panels: usize, order: usize) -> Result<QuadratureRule> {
    let (e0, e1) = measure.endpoint_exponents();
    // integrands are products of two system functions, which may behave like
    // x^{2ν+1} at the origin even when the measure does not
    let bessel = measure.spec().nu().map_or(0.0, |nu| 2.0 * nu + 1.0);
    let mut rule = QuadratureRule::lebesgue(panels, order, (e0.min(bessel), e1))?;
    rule.weights = rule.nodes.par_iter().zip(&rule.dx_weights).map(|(&x, w)| w * measure.eval(x)).collect();
    if let Some(i) = rule.weights.iter().position(|y| !y.is_finite()) {
        return Err(Error::NonFinite { index: i, x: rule.nodes[i] });
    }
    rule.measure = Some(measure.clone());
    Ok(rule)
}

/// Composite rule for `measure`, validated by comparing ∫ 1 dmeasure with the rule
/// on twice as many panels.
pub fn build_rule(measure: &MeasureWeight, panels: usize, order: usize) -> Result<QuadratureRule> {
    let rule = weighted(measure, panels, order)?;
    let fine = weighted(measure, 2 * panels, order)?;
    let a = rule.integrate_values(&vec![1.0; rule.len()]);
    let b = fine.integrate_values(&vec![1.0; fine.len()]);
    let err = (a - b).abs();
    let required = VALIDATION_TOL * b.abs().max(1.0);
    if err > required || !err.is_finite() {
        return Err(Error::Quadrature { achieved: err, required });
    }
    Ok(rule)
}

/// Rule resolving products of the first `n_max` functions of `spec`.
pub fn rule_for_system(spec: &SystemSpec, n_max: usize) -> Result<QuadratureRule> {
    let top = match spec.context() {
        Ok(c) => c.lambda(n_max.clamp(1, c.capacity())),
        Err(_) => {
            let p = spec.jacobi_params().expect("non-Bessel spec is Jacobi");
            p.eigenvalue(n_max).sqrt()
        }
    };
    let panels = ((top / std::f64::consts::PI).ceil() as usize).max(8);
    build_rule(&spec.measure(), panels, 20)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::Setting;

    #[test]
    fn monomial_and_beta_masses() {
        let n = SystemSpec::new(Setting::Natural, 0.5, 4).unwrap();
        let r = build_rule(&n.measure(), 8, 16).unwrap();
        assert!((r.integrate_values(&vec![1.0; r.len()]) - 1.0 / 3.0).abs() < 1e-14);
        let m = SystemSpec::new(Setting::ModifiedEssential, 0.0, 4).unwrap();
        let r = build_rule(&m.measure(), 8, 16).unwrap();
        assert!((r.integrate_values(&vec![1.0; r.len()]) - 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn essential_mass_is_one() {
        for &nu in &[-0.9, -0.5, 0.0, 2.0] {
            let e = SystemSpec::new(Setting::Essential, nu, 4).unwrap();
            let r = build_rule(&e.measure(), 8, 20).unwrap();
            let m = r.integrate_values(&vec![1.0; r.len()]);
            assert!((m - 1.0).abs() < 1e-12, "{nu}: {m}");
        }
    }

    #[test]
    fn strong_endpoint_singularity_handled_by_grading() {
        let n = SystemSpec::new(Setting::Natural, -0.95, 4).unwrap();
        let r = build_rule(&n.measure(), 4, 12).unwrap();
        let m = r.integrate_values(&vec![1.0; r.len()]);
        assert!((m - 1.0 / 0.1).abs() < 1e-11, "{m}");
        assert!(r.nodes().iter().all(|&x| x > 0.0 && x < 1.0));
    }

    #[test]
    fn shape_preconditions() {
        let n = SystemSpec::new(Setting::Natural, 0.0, 4).unwrap();
        assert!(build_rule(&n.measure(), 3, 16).is_err());
        assert!(build_rule(&n.measure(), 8, 6).is_err());
    }

    #[test]
    fn non_finite_sample_reports_node() {
        let r = QuadratureRule::lebesgue(4, 8, (0.0, 0.0)).unwrap();
        let e = r.sample(|x| Ok(if x > 0.5 { f64::NAN } else { x })).unwrap_err();
        assert!(matches!(e, Error::NonFinite { x, .. } if x > 0.5));
    }
}
