//! Green function of 𝔻_ν𝔻_ν* on (0,1) and the integral operator T_ν it defines.
//!
//! K(x, ξ) = F(x)(1 − F(ξ))/(ψ_1(x)ψ_1(ξ)) for x ≤ ξ, mirrored for x ≥ ξ, with
//! F(x) = ∫_0^x ψ_1².

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use crate::special::{gauss_legendre, Sum};
use crate::systems::{FbContext, Setting, SystemSpec};
use std::sync::Arc;

/// Above this point 1 − F is integrated directly instead of taken from the closed form.
const TAIL_SWITCH: f64 = 0.75;

#[derive(Debug, Clone)]
pub struct GreenAux {
    ctx: Arc<FbContext>,
    c1: f64,
    l1: f64,
    jnext1: f64,
    tail: (Vec<f64>, Vec<f64>),
    /// panel rule on (0,1) used by `apply`
    rule: QuadratureRule,
}

impl GreenAux {
    pub fn new(spec: &SystemSpec) -> Result<GreenAux> {
        let ctx = spec.context()?.clone();
        let c1 = ctx.norm_const(1);
        let l1 = ctx.lambda(1);
        let jnext1 = crate::bessel::jpair(ctx.nu(), l1).1;
        let e = 2.0 * ctx.nu() + 1.0;
        let rule = QuadratureRule::lebesgue(8, 24, (e, 0.0))?;
        Ok(GreenAux { ctx, c1, l1, jnext1, tail: gauss_legendre(40), rule })
    }

    pub fn nu(&self) -> f64 {
        self.ctx.nu()
    }

    /// ψ_1(x) = c_1 √x J_ν(λ_1 x)
    pub fn psi1(&self, x: f64) -> f64 {
        self.c1 * x.sqrt() * self.ctx.jv(1, x)
    }

    /// F(x) = ∫_0^x ψ_1², closed form.
    pub fn f_closed(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let (j0, j1) = crate::bessel::jpair(self.nu(), self.l1 * x);
        let nu = self.nu();
        (x * x * j0 * j0 - 2.0 * nu * x / self.l1 * j0 * j1 + x * x * j1 * j1) / (self.jnext1 * self.jnext1)
    }

    /// 1 − F(x) = ∫_x^1 ψ_1² by Gauss–Legendre.
    fn tail_integral(&self, x: f64) -> f64 {
        let (g, w) = &self.tail;
        let (c, r) = (0.5 * (1.0 + x), 0.5 * (1.0 - x));
        g.iter()
            .zip(w)
            .map(|(gi, wi)| {
                let u = c + r * gi;
                let p = self.psi1(u);
                r * wi * p * p
            })
            .collect::<Sum>()
            .value()
    }

    /// (F(x), 1 − F(x)), each computed where it is well conditioned.
    pub fn f_pair(&self, x: f64) -> (f64, f64) {
        if x >= 1.0 {
            return (1.0, 0.0);
        }
        if x > TAIL_SWITCH {
            let t = self.tail_integral(x);
            (1.0 - t, t)
        } else {
            let f = self.f_closed(x);
            (f, 1.0 - f)
        }
    }

    pub fn f(&self, x: f64) -> f64 {
        self.f_pair(x).0
    }

    /// q_ν(x) = −(ν+1/2)/x + R(x)
    pub fn q(&self, x: f64) -> Result<f64> {
        Ok(-(self.nu() + 0.5) / x + self.ctx.ratio().ratio_r(1, x)?)
    }

    /// K(x, ξ)
    pub fn eval(&self, x: f64, xi: f64) -> Result<f64> {
        for v in [x, xi] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::domain(format!("point {v} outside (0,1)")));
            }
        }
        let (lo, hi) = if x <= xi { (x, xi) } else { (xi, x) };
        let f_lo = self.f_pair(lo).0;
        let g_hi = self.f_pair(hi).1;
        Ok(f_lo * g_hi / (self.psi1(lo) * self.psi1(hi)))
    }

    /// (T f)(x) = ∫_0^1 K(x, ξ) f(ξ) dξ, splitting the integral at ξ = x.
    pub fn apply<F>(&self, f: F, x: f64) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::domain(format!("point {x} outside (0,1)")));
        }
        let (fx, gx) = self.f_pair(x);
        let px = self.psi1(x);
        let mut left = Sum::default();
        let mut right = Sum::default();
        for (&u, &w) in self.rule.nodes().iter().zip(self.rule.dx_weights()) {
            // (0, x)
            let s = x * u;
            let (fs, _) = self.f_pair(s);
            left.add(x * w * fs / self.psi1(s) * f(s)?);
            // (x, 1)
            let s = x + (1.0 - x) * u;
            let (_, gs) = self.f_pair(s);
            right.add((1.0 - x) * w * gs / self.psi1(s) * f(s)?);
        }
        Ok((gx * left.value() + fx * right.value()) / px)
    }

    /// ∫∫ K² over the unit square on `panels` panels per variable.
    pub fn hilbert_schmidt_sq(&self, panels: usize) -> Result<f64> {
        let e = 2.0 * self.nu() + 1.0;
        let r = QuadratureRule::lebesgue(panels, 16, (e.min(0.0) + 1.0, 0.0))?;
        // 2 ∫_0^1 ∫_0^x K(x, ξ)² dξ dx
        let mut s = Sum::default();
        for (&x, &wx) in r.nodes().iter().zip(r.dx_weights()) {
            let mut inner = Sum::default();
            for (&u, &wu) in r.nodes().iter().zip(r.dx_weights()) {
                let k = self.eval(x, x * u)?;
                inner.add(x * wu * k * k);
            }
            s.add(wx * inner.value());
        }
        Ok(2.0 * s.value())
    }
}

/// Green data for a Lebesgue-setting system.
pub fn green_aux(spec: &SystemSpec) -> Result<GreenAux> {
    if spec.setting() != Setting::Lebesgue {
        return Err(Error::Unsupported("the Green function is built in the Lebesgue setting".into()));
    }
    GreenAux::new(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::DerivativeKind;

    #[test]
    fn endpoints_and_monotonicity() {
        for &nu in &[-0.7, 0.0, 0.5, 2.0] {
            let s = SystemSpec::new(Setting::Lebesgue, nu, 8).unwrap();
            let g = green_aux(&s).unwrap();
            assert!(g.f(0.0).abs() < 1e-15);
            assert!((g.f_closed(1.0) - 1.0).abs() < 1e-12);
            assert!((g.f(1.0) - 1.0).abs() < 1e-15);
            let mut prev = 0.0;
            for i in 1..200 {
                let v = g.f(i as f64 / 200.0);
                assert!(v > prev);
                prev = v;
            }
            // branches agree at the switch
            let (a, b) = (g.f_closed(TAIL_SWITCH), 1.0 - g.tail_integral(TAIL_SWITCH));
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn kernel_is_symmetric() {
        let s = SystemSpec::new(Setting::Lebesgue, 0.3, 8).unwrap();
        let g = green_aux(&s).unwrap();
        for &(x, y) in &[(0.1, 0.7), (0.01, 0.99), (0.5, 0.51)] {
            assert!((g.eval(x, y).unwrap() - g.eval(y, x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_relation() {
        for &nu in &[0.0, 0.5] {
            let s = SystemSpec::new(Setting::Lebesgue, nu, 8).unwrap();
            let g = green_aux(&s).unwrap();
            let c = s.context().unwrap();
            for n in 2..=6 {
                let d = |x: f64| s.derivative(DerivativeKind::New, n, x);
                let gap = c.lambda(n).powi(2) - c.lambda(1).powi(2);
                for &x in &[0.2, 0.55, 0.9] {
                    let lhs = g.apply(d, x).unwrap();
                    let rhs = d(x).unwrap() / gap;
                    assert!((lhs - rhs).abs() < 1e-6 * rhs.abs().max(1e-3), "{nu} {n} {x}: {lhs} {rhs}");
                }
            }
        }
    }
}
