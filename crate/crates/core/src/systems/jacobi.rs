//! Jacobi trigonometric system on (0,1):
//! Φ_k(x) = c_k sin(πx/2)^{α+1/2} cos(πx/2)^{β+1/2} P_k^{(α,β)}(cos πx), k ≥ 0.

use crate::error::{Error, Result};
use crate::special::jacobi_pair;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<JacobiParams> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::domain(format!(
                "Jacobi parameters must exceed -1, got ({alpha}, {beta})"
            )));
        }
        Ok(JacobiParams { alpha, beta })
    }

    /// (α+1, β+1)
    pub fn shifted(self) -> JacobiParams {
        JacobiParams { alpha: self.alpha + 1.0, beta: self.beta + 1.0 }
    }

    /// Normalising constant c_k, so that ∥Φ_k∥_{L²(0,1)} = 1.
    pub fn norm_const(self, k: usize) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        let kf = k as f64;
        let ln = if k == 0 {
            // (α+β+1)Γ(α+β+1) = Γ(α+β+2)
            ln_gamma(a + b + 2.0) - ln_gamma(a + 1.0) - ln_gamma(b + 1.0)
        } else {
            (2.0 * kf + a + b + 1.0).ln() + ln_gamma(kf + a + b + 1.0) + ln_gamma(kf + 1.0)
                - ln_gamma(kf + a + 1.0)
                - ln_gamma(kf + b + 1.0)
        };
        (PI * ln.exp()).sqrt()
    }

    /// π²(k + (α+β+1)/2)²
    pub fn eigenvalue(self, k: usize) -> f64 {
        let s = k as f64 + 0.5 * (self.alpha + self.beta + 1.0);
        PI * PI * s * s
    }

    fn envelope(self, x: f64) -> f64 {
        let (s, c) = (0.5 * PI * x).sin_cos();
        s.powf(self.alpha + 0.5) * c.powf(self.beta + 0.5)
    }

    /// Φ_k(x)
    pub fn eval(self, k: usize, x: f64) -> f64 {
        let t = (PI * x).cos();
        let p = jacobi_pair(k, self.alpha, self.beta, t).1;
        self.norm_const(k) * self.envelope(x) * p
    }

    /// D Φ_k = −π √(k(k+α+β+1)) Φ_{k−1}^{α+1,β+1}; zero for k = 0.
    pub fn derivative(self, k: usize, x: f64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let kf = k as f64;
        -PI * (kf * (kf + self.alpha + self.beta + 1.0)).sqrt() * self.shifted().eval(k - 1, x)
    }

    /// D Φ_k computed by applying D = d/dx − π(2α+1)/4 cot(πx/2) + π(2β+1)/4 tan(πx/2)
    /// to Φ_k, with P_k' from the same-parameter derivative identity
    /// (2k+α+β)(1−t²)P_k' = k[(α−β) − (2k+α+β)t]P_k + 2(k+α)(k+β)P_{k−1}.
    pub fn derivative_by_operator(self, k: usize, x: f64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let (a, b) = (self.alpha, self.beta);
        let kf = k as f64;
        let t = (PI * x).cos();
        let (pm, p) = jacobi_pair(k, a, b, t);
        let s2 = 2.0 * kf + a + b;
        let sin_px = (PI * x).sin();
        // the cot/tan terms cancel against the derivative of the envelope
        let num = kf * ((a - b) - s2 * t) * p + 2.0 * (kf + a) * (kf + b) * pm;
        let dp_times_sin = num / (s2 * sin_px);
        -PI * self.norm_const(k) * self.envelope(x) * dp_times_sin
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gauss_legendre;

    #[test]
    fn closed_forms() {
        let p = JacobiParams::new(0.5, 0.5).unwrap();
        let m = JacobiParams::new(-0.5, 0.5).unwrap();
        for k in 0..6 {
            for &x in &[0.1, 0.33, 0.8] {
                let kf = k as f64;
                let s = 2f64.sqrt() * (PI * (kf + 1.0) * x).sin();
                let c = 2f64.sqrt() * (PI * (kf + 0.5) * x).cos();
                assert!((p.eval(k, x) - s).abs() < 1e-13);
                assert!((m.eval(k, x) - c).abs() < 1e-13);
            }
        }
        assert!((p.eigenvalue(0) - PI * PI).abs() < 1e-14);
    }

    #[test]
    fn normalisation_by_quadrature() {
        // substitute x = 1 − (1−v)² style grading is unnecessary for these exponents;
        // use many Gauss points on sub-panels
        let (g, w) = gauss_legendre(40);
        for &(a, b) in &[(0.0, 0.0), (1.5, 0.5), (-0.5, 2.0), (0.3, -0.4)] {
            let jp = JacobiParams::new(a, b).unwrap();
            for k in [0usize, 1, 4, 9] {
                let mut s = 0.0;
                // geometric panels toward both ends
                let mut edges = vec![0.0];
                for j in (1..40).rev() {
                    edges.push(0.5 * 0.6f64.powi(j));
                }
                let mirrored: Vec<f64> = edges.iter().rev().map(|e| 1.0 - e).collect();
                edges.extend(mirrored);
                for win in edges.windows(2) {
                    let (lo, hi) = (win[0], win[1]);
                    for (gi, wi) in g.iter().zip(&w) {
                        let x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gi;
                        let v = jp.eval(k, x);
                        s += 0.5 * (hi - lo) * wi * v * v;
                    }
                }
                assert!((s - 1.0).abs() < 1e-10, "({a},{b}) k={k}: {s}");
            }
        }
    }

    #[test]
    fn derivative_routes_agree() {
        let jp = JacobiParams::new(0.7, 0.2).unwrap();
        for k in 1..8 {
            for &x in &[0.05, 0.4, 0.77, 0.95] {
                let a = jp.derivative(k, x);
                let b = jp.derivative_by_operator(k, x);
                assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{k} {x}: {a} {b}");
            }
        }
    }
}
