use crate::bessel::{compute_zeros, jpair, Order, ZeroTable};
use crate::error::{Error, Result};
use crate::ratio::RatioEvaluator;
use std::sync::Arc;

const TAYLOR_TERMS: usize = 96;

/// Shared Fourier–Bessel data for one order: zeros, normalising constants and the
/// ratio evaluator.
#[derive(Debug, Clone)]
pub struct FbContext {
    order: Order,
    ratio: RatioEvaluator,
    /// J_{ν+1}(λ_n), signed
    jnext: Vec<f64>,
    capacity: usize,
}

impl FbContext {
    /// Context able to serve indices 1..=capacity.
    pub fn new(order: Order, capacity: usize) -> Result<FbContext> {
        let capacity = capacity.max(2);
        let m = RatioEvaluator::DEFAULT_TRUNCATION;
        let table = compute_zeros(order, RatioEvaluator::required_zeros(m, capacity))?;
        Self::from_table(Arc::new(table), capacity)
    }

    pub fn from_table(table: Arc<ZeroTable>, capacity: usize) -> Result<FbContext> {
        let m = RatioEvaluator::DEFAULT_TRUNCATION.min(table.len());
        let ratio = RatioEvaluator::from_table(table.clone(), m)?;
        let capacity = capacity.min(ratio.max_index());
        if capacity < 2 {
            return Err(Error::domain("zero table too short for an eigenfunction system"));
        }
        let nu = table.nu();
        let jnext = table.zeros().iter().map(|&l| jpair(nu, l).1).collect();
        Ok(FbContext { order: table.order(), ratio, jnext, capacity })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn nu(&self) -> f64 {
        self.order.nu()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn ratio(&self) -> &RatioEvaluator {
        &self.ratio
    }

    pub fn zeros(&self) -> &Arc<ZeroTable> {
        self.ratio.zeros()
    }

    pub fn check_index(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.capacity {
            return Err(Error::domain(format!(
                "index {n} outside 1..={}",
                self.capacity
            )));
        }
        Ok(())
    }

    pub fn lambda(&self, n: usize) -> f64 {
        self.ratio.lambda(n)
    }

    /// √2 / |J_{ν+1}(λ_n)|
    pub fn norm_const(&self, n: usize) -> f64 {
        std::f64::consts::SQRT_2 / self.jnext[n - 1].abs()
    }

    fn near_one(&self, n: usize, x: f64) -> bool {
        let s = 1.0 - x;
        s <= 0.5 && s * self.lambda(n) <= 1.0
    }

    /// Taylor coefficients of x ↦ J_ν(λ_n x) in powers of (x − 1).
    fn taylor(&self, n: usize, u: f64) -> Vec<f64> {
        let l = self.lambda(n);
        let l2 = l * l;
        let nu2 = self.nu() * self.nu();
        let mut a = vec![0.0; TAYLOR_TERMS];
        a[1] = -l * self.jnext[n - 1];
        let au = u.abs();
        let mut peak = a[1].abs() * au;
        for k in 0..TAYLOR_TERMS - 2 {
            let kf = k as f64;
            let mut s = (kf + 1.0) * (2.0 * kf + 1.0) * a[k + 1] + (kf * kf + l2 - nu2) * a[k];
            if k >= 1 {
                s += 2.0 * l2 * a[k - 1];
            }
            if k >= 2 {
                s += l2 * a[k - 2];
            }
            a[k + 2] = -s / ((kf + 2.0) * (kf + 1.0));
            let t = a[k + 2].abs() * au.powi(k as i32 + 2);
            peak = peak.max(t);
            if k > 6 && t < 1e-18 * peak && a[k + 1].abs() * au.powi(k as i32 + 1) < 1e-18 * peak {
                a.truncate(k + 3);
                break;
            }
        }
        a
    }

    /// J_ν(λ_n x)/(x − 1) from the Taylor series, valid near x = 1.
    fn reduced(&self, coef: &[f64], u: f64) -> f64 {
        coef[1..].iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    /// J_ν(λ_n x), using the expansion about the zero λ_n close to x = 1.
    pub fn jv(&self, n: usize, x: f64) -> f64 {
        if self.near_one(n, x) {
            let u = x - 1.0;
            u * self.reduced(&self.taylor(n, u), u)
        } else {
            jpair(self.nu(), self.lambda(n) * x).0
        }
    }

    /// J_ν(λ_n x)/(1 − x)
    pub fn jv_over_one_minus(&self, n: usize, x: f64) -> f64 {
        if self.near_one(n, x) {
            let u = x - 1.0;
            -self.reduced(&self.taylor(n, u), u)
        } else {
            self.jv(n, x) / (1.0 - x)
        }
    }

    /// (J_ν(λ_n x), J_{ν+1}(λ_n x))
    pub fn jv_pair(&self, n: usize, x: f64) -> (f64, f64) {
        let (j0, j1) = jpair(self.nu(), self.lambda(n) * x);
        if self.near_one(n, x) {
            (self.jv(n, x), j1)
        } else {
            (j0, j1)
        }
    }

    /// J_ν(λ_n x) / J_ν(λ_1 x), accurate up to x = 1.
    pub fn jv_quotient(&self, n: usize, x: f64) -> f64 {
        if n == 1 {
            return 1.0;
        }
        if x > 0.5 {
            let u = x - 1.0;
            let a = if self.near_one(1, x) {
                self.reduced(&self.taylor(1, u), u)
            } else {
                self.jv(1, x) / u
            };
            let b = if self.near_one(n, x) {
                self.reduced(&self.taylor(n, u), u)
            } else {
                self.jv(n, x) / u
            };
            b / a
        } else {
            jpair(self.nu(), self.lambda(n) * x).0 / jpair(self.nu(), self.lambda(1) * x).0
        }
    }

    /// W_n(x) = λ_1 J_{ν+1}(λ_1 x) J_ν(λ_n x) − λ_n J_{ν+1}(λ_n x) J_ν(λ_1 x), the Wronskian
    /// of x ↦ J_ν(λ_1 x) and x ↦ J_ν(λ_n x), together with J_ν(λ_1 x).
    ///
    /// Near x = 1 both functions vanish and W_n = O((1−x)³); there the value is
    /// returned in factored form: `(w̃, ã)` with W_n = (x−1)³ w̃ and J_ν(λ_1 x) = (x−1) ã.
    pub(crate) fn wronskian(&self, n: usize, x: f64) -> Wronskian {
        let nu = self.nu();
        if n >= 2 && self.near_one(n, x) {
            let u = x - 1.0;
            let a = self.taylor(1, u);
            let b = self.taylor(n, u);
            // W = Σ_m u^m Σ_{i+j=m+1} (j−i) a_i b_j, with the m ≤ 2 coefficients zero
            let kmax = a.len().max(b.len());
            let mut w = 0.0;
            for m in (3..(a.len() + b.len())).rev() {
                let mut c = 0.0;
                for i in 1..=m.min(kmax) {
                    let j = m + 1 - i;
                    if i < a.len() && j >= 1 && j < b.len() {
                        c += (j as f64 - i as f64) * a[i] * b[j];
                    }
                }
                w = w * u + c;
            }
            return Wronskian::Factored { w, a: self.reduced(&a, u) };
        }
        let l1 = self.lambda(1);
        let ln = self.lambda(n);
        let (a0, a1) = jpair(nu, l1 * x);
        let (b0, b1) = jpair(nu, ln * x);
        let a0 = if x > 0.5 && self.near_one(1, x) { self.jv(1, x) } else { a0 };
        Wronskian::Direct { w: l1 * a1 * b0 - ln * b1 * a0, a: a0 }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Wronskian {
    Direct { w: f64, a: f64 },
    Factored { w: f64, a: f64 },
}

impl Wronskian {
    /// W / J_ν(λ_1 x)
    pub fn over_a(self, x: f64) -> f64 {
        match self {
            Wronskian::Direct { w, a } => w / a,
            Wronskian::Factored { w, a } => {
                let u = x - 1.0;
                u * u * w / a
            }
        }
    }

    /// W / (J_ν(λ_1 x)(1 − x))
    pub fn over_a_one_minus(self, x: f64) -> f64 {
        match self {
            Wronskian::Direct { w, a } => w / (a * (1.0 - x)),
            Wronskian::Factored { w, a } => (1.0 - x) * w / a,
        }
    }

    /// W / J_ν(λ_1 x)²
    pub fn over_a2(self, x: f64) -> f64 {
        match self {
            Wronskian::Direct { w, a } => w / (a * a),
            Wronskian::Factored { w, a } => (x - 1.0) * w / (a * a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_route_matches_direct_evaluation() {
        for &nu in &[-0.9, 0.0, 1.5] {
            let ctx = FbContext::new(Order::new(nu).unwrap(), 12).unwrap();
            for n in [1, 2, 7, 12] {
                let l = ctx.lambda(n);
                let x = 1.0 - 0.9 * (1.0 / l).min(0.5);
                let u = x - 1.0;
                let t = u * ctx.reduced(&ctx.taylor(n, u), u);
                let d = jpair(nu, l * x).0;
                assert!((t - d).abs() < 1e-13 * d.abs().max(1e-3), "{nu} {n}: {t} {d}");
            }
        }
    }

    #[test]
    fn wronskian_routes_agree_at_switch() {
        let ctx = FbContext::new(Order::new(0.3).unwrap(), 10).unwrap();
        for n in [2, 5, 10] {
            let x = 1.0 - 1.0 / ctx.lambda(n);
            let below = x - 1e-13;
            let above = x + 1e-13;
            let p = ctx.wronskian(n, below).over_a2(below);
            let q = ctx.wronskian(n, above).over_a2(above);
            assert!(matches!(ctx.wronskian(n, above), Wronskian::Factored { .. }));
            assert!((p - q).abs() < 1e-10 * p.abs(), "{n}: {p} {q}");
        }
    }
}
