//! Bessel functions of the first kind of real order ν > −1 on the positive half-line,
//! their positive zeros, and the classical sum identities over those zeros.
//!
//! Evaluation routes:
//! * ascending power series for z ≤ 2,
//! * Miller backward recurrence normalised by the Neumann series
//!   (z/2)^ν = Σ_k (ν+2k) Γ(ν+k)/k! · J_{ν+2k}(z) in the middle range,
//! * Hankel's asymptotic expansion once z ≥ 25 + (|ν|+1)².
//!
//! Orders −1/2, 1/2 and 3/2 use the elementary closed forms away from the origin.
//! The documented accuracy envelope is z ≤ 50(1+|ν|); beyond it values are still
//! returned but flagged.

mod identities;
pub mod methods;
mod zeros;

pub use identities::{identity_residuals, CheckStatus, IdentityReport, IdentityResidual};
pub use zeros::{compute_zeros, ZeroTable};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Order ν of a Bessel function, constrained to ν > −1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Order> {
        if !nu.is_finite() || nu <= -1.0 {
            return Err(Error::domain(format!("order must satisfy nu > -1, got {nu}")));
        }
        Ok(Order(nu))
    }

    pub fn nu(self) -> f64 {
        self.0
    }

    /// D_ν = π(2ν−1)/4, the phase shift in λ_{n,ν} ≈ πn + D_ν.
    pub fn phase_shift(self) -> f64 {
        std::f64::consts::PI * (2.0 * self.0 - 1.0) / 4.0
    }

    /// Upper end of the documented accuracy envelope, 50(1+|ν|).
    pub fn envelope(self) -> f64 {
        50.0 * (1.0 + self.0.abs())
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;
    fn try_from(v: f64) -> Result<Order> {
        Order::new(v)
    }
}

impl From<Order> for f64 {
    fn from(o: Order) -> f64 {
        o.0
    }
}

/// A value together with the accuracy-loss flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselValue {
    pub value: f64,
    /// Set when the argument lies outside the documented accuracy envelope.
    pub accuracy_loss: bool,
}

fn check_arg(z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("argument must be positive and finite, got {z}")));
    }
    Ok(())
}

/// J_ν(z) for z > 0.
pub fn bessel_j(order: Order, z: f64) -> Result<f64> {
    Ok(bessel_j_checked(order, z)?.value)
}

/// J_ν(z) with the accuracy-loss flag.
pub fn bessel_j_checked(order: Order, z: f64) -> Result<BesselValue> {
    check_arg(z)?;
    Ok(BesselValue {
        value: jpair(order.nu(), z).0,
        accuracy_loss: z > order.envelope(),
    })
}

/// J'_ν(z) = (ν/z) J_ν(z) − J_{ν+1}(z).
pub fn bessel_j_deriv(order: Order, z: f64) -> Result<f64> {
    check_arg(z)?;
    let (j0, j1) = jpair(order.nu(), z);
    Ok(order.nu() / z * j0 - j1)
}

/// (J_ν(z), J_{ν+1}(z)) for z > 0 and ν > −1, no argument checks.
pub(crate) fn jpair(nu: f64, z: f64) -> (f64, f64) {
    if let Some(p) = methods::half_integer(nu, z) {
        return p;
    }
    methods::generic(nu, z)
}
