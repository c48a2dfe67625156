//! Tensor products of essential systems on (0,1)^d.

use super::{DerivativeKind, Setting, SystemSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TensorSystem {
    factors: Vec<SystemSpec>,
}

impl TensorSystem {
    pub fn new(factors: Vec<SystemSpec>) -> Result<TensorSystem> {
        if factors.is_empty() {
            return Err(Error::domain("tensor system needs at least one factor"));
        }
        if let Some(f) = factors.iter().find(|f| !f.setting().is_essential()) {
            return Err(Error::Unsupported(format!(
                "tensor products are built from essential systems, got {}",
                f.setting()
            )));
        }
        Ok(TensorSystem { factors })
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[SystemSpec] {
        &self.factors
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::domain(format!(
                "dimension mismatch: expected {}, got {len}",
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, indices: &[usize], point: &[f64]) -> Result<f64> {
        self.check(indices.len())?;
        self.check(point.len())?;
        let mut v = 1.0;
        for ((f, &n), &x) in self.factors.iter().zip(indices).zip(point) {
            v *= f.eval(n, x)?;
        }
        Ok(v)
    }

    /// ∂/∂x_i in the essential sense applied to coordinate `i`.
    pub fn partial(&self, i: usize, indices: &[usize], point: &[f64]) -> Result<f64> {
        self.check(indices.len())?;
        self.check(point.len())?;
        if i >= self.dim() {
            return Err(Error::domain(format!("coordinate {i} out of range")));
        }
        let mut v = 1.0;
        for (j, ((f, &n), &x)) in self.factors.iter().zip(indices).zip(point).enumerate() {
            v *= if j == i { f.derivative(DerivativeKind::New, n, x)? } else { f.eval(n, x)? };
        }
        Ok(v)
    }

    /// Sum of the one-dimensional eigenvalues.
    pub fn eigenvalue(&self, indices: &[usize]) -> Result<f64> {
        self.check(indices.len())?;
        let mut s = 0.0;
        for (f, &n) in self.factors.iter().zip(indices) {
            s += f.eigenvalue(n)?;
        }
        Ok(s)
    }

    /// Product measure density.
    pub fn weight(&self, point: &[f64]) -> Result<f64> {
        self.check(point.len())?;
        Ok(self.factors.iter().zip(point).map(|(f, &x)| f.measure().eval(x)).product())
    }

    pub fn is_probabilistic(&self) -> bool {
        self.factors.iter().all(|f| f.setting() == Setting::EssentialProbabilistic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bottom_is_constant_and_eigenvalues_add() {
        let e = SystemSpec::new(Setting::Essential, 0.5, 8).unwrap();
        let t = TensorSystem::new(vec![e.clone(), e]).unwrap();
        assert_eq!(t.eval(&[1, 1], &[0.2, 0.9]).unwrap(), 1.0);
        let lam = t.eigenvalue(&[2, 1]).unwrap();
        assert!((lam - 5.0 * PI * PI).abs() < 1e-10);
        assert!(t.eval(&[1], &[0.2]).is_err());
        assert!(t.eigenvalue(&[1, 2, 3]).is_err());
    }

    #[test]
    fn rejects_non_essential_factors() {
        let n = SystemSpec::new(Setting::Natural, 0.5, 8).unwrap();
        assert!(TensorSystem::new(vec![n]).is_err());
    }
}
