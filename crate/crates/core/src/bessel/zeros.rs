use super::{jpair, Order};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Lower bound on the spacing of consecutive positive zeros assumed by the
/// bracketing scan (the true spacing exceeds 2.9 for every ν > −1).
pub const MIN_GAP: f64 = 2.5;

const SCAN_STEP: f64 = 1.0;

/// Positive zeros λ_{1..N} of J_ν with certified sign-change brackets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroTable {
    nu: f64,
    zeros: Vec<f64>,
    brackets: Vec<[f64; 2]>,
    tolerance: f64,
}

#[derive(Deserialize)]
struct RawTable {
    nu: f64,
    zeros: Vec<f64>,
    brackets: Vec<[f64; 2]>,
    tolerance: f64,
}

impl ZeroTable {
    pub fn order(&self) -> Order {
        Order(self.nu)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// All zeros, λ_1 first.
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn brackets(&self) -> &[[f64; 2]] {
        &self.brackets
    }

    /// Largest bracket half-width in the table.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// λ_n with 1-based n.
    pub fn zero(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.zeros.len() {
            return Err(Error::domain(format!(
                "zero index {n} outside 1..={}",
                self.zeros.len()
            )));
        }
        Ok(self.zeros[n - 1])
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Parse a cached table and re-verify every bracket.
    pub fn from_json(text: &str) -> Result<ZeroTable> {
        let raw: RawTable = serde_json::from_str(text)?;
        let order = Order::new(raw.nu)?;
        if raw.zeros.len() != raw.brackets.len() {
            return Err(Error::Certification("zeros and brackets differ in length".into()));
        }
        let table = ZeroTable {
            nu: order.nu(),
            zeros: raw.zeros,
            brackets: raw.brackets,
            tolerance: raw.tolerance,
        };
        table.verify()?;
        Ok(table)
    }

    /// Re-check ordering, bracket containment, sign changes and sign pattern.
    pub fn verify(&self) -> Result<()> {
        let mut prev = 0.0;
        for (i, (&z, b)) in self.zeros.iter().zip(&self.brackets).enumerate() {
            let n = i + 1;
            if !(b[0] < z && z < b[1] && b[0] > prev) {
                return Err(Error::Certification(format!("bracket {n} malformed")));
            }
            // endpoints x ± δ are themselves rounded
            if b[1] - b[0] > 2.0 * self.tolerance + 4.0 * f64::EPSILON * b[1] {
                return Err(Error::Certification(format!("bracket {n} wider than tolerance")));
            }
            let lo = jpair(self.nu, b[0]).0;
            let hi = jpair(self.nu, b[1]).0;
            let expect = if n % 2 == 1 { 1.0 } else { -1.0 };
            if !(lo * expect > 0.0 && hi * expect < 0.0) {
                return Err(Error::Certification(format!("no sign change in bracket {n}")));
            }
            prev = z;
        }
        Ok(())
    }
}

fn j(nu: f64, z: f64) -> f64 {
    jpair(nu, z).0
}

/// Compute the first `count` positive zeros of J_ν.
///
/// Brackets come from a scan with step below [`MIN_GAP`], so no zero is skipped;
/// each zero is refined by Newton's method safeguarded by bisection and then
/// certified by a sign change across a few ulps.
pub fn compute_zeros(order: Order, count: usize) -> Result<ZeroTable> {
    if count == 0 {
        return Err(Error::domain("count must be at least 1"));
    }
    let nu = order.nu();
    let mut zeros = Vec::with_capacity(count);
    let mut brackets = Vec::with_capacity(count);
    let mut tolerance: f64 = 0.0;

    // first zero: J_ν > 0 on (0, λ_1)
    let mut a = 0.05;
    while j(nu, a) <= 0.0 {
        a *= 0.5;
        if a < 1e-12 {
            return Err(Error::Certification("index 1: no positive start for scan".into()));
        }
    }
    let mut fa = j(nu, a);
    let mut steps = 0;
    let (mut b, mut fb);
    loop {
        b = a + 0.25;
        fb = j(nu, b);
        if fb <= 0.0 {
            break;
        }
        a = b;
        fa = fb;
        steps += 1;
        if steps > 100_000 {
            return Err(Error::Certification("index 1: no sign change found".into()));
        }
    }
    let mut prev = push_zero(nu, a, fa, b, fb, 1, &mut zeros, &mut brackets, &mut tolerance)?;

    for n in 2..=count {
        let expect_after = if n % 2 == 0 { -1.0 } else { 1.0 }; // sign on (λ_{n-1}, λ_n)
        let mut a = prev + SCAN_STEP;
        let mut fa = j(nu, a);
        if fa * expect_after <= 0.0 {
            return Err(Error::Certification(format!(
                "index {n}: zero closer than {SCAN_STEP} to its predecessor"
            )));
        }
        let mut found = None;
        for _ in 0..64 {
            let b = a + SCAN_STEP;
            let fb = j(nu, b);
            if fb * expect_after <= 0.0 {
                found = Some((a, fa, b, fb));
                break;
            }
            a = b;
            fa = fb;
        }
        let (a, fa, b, fb) =
            found.ok_or_else(|| Error::Certification(format!("index {n}: no sign change found")))?;
        prev = push_zero(nu, a, fa, b, fb, n, &mut zeros, &mut brackets, &mut tolerance)?;
        let gap = prev - zeros[n - 2];
        if gap < MIN_GAP {
            return Err(Error::Certification(format!("index {n}: gap {gap} below {MIN_GAP}")));
        }
    }
    Ok(ZeroTable { nu, zeros, brackets, tolerance })
}

#[allow(clippy::too_many_arguments)]
fn push_zero(
    nu: f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    n: usize,
    zeros: &mut Vec<f64>,
    brackets: &mut Vec<[f64; 2]>,
    tolerance: &mut f64,
) -> Result<f64> {
    let x = refine(nu, a, fa, b, fb);
    let mut delta = (2.0 * ulp(x)).max(1e-14);
    loop {
        let lo = j(nu, x - delta);
        let hi = j(nu, x + delta);
        if lo * hi < 0.0 {
            break;
        }
        delta *= 2.0;
        if delta > 1e-9 * x.max(1.0) {
            return Err(Error::Certification(format!("index {n}: bracket could not be certified")));
        }
    }
    zeros.push(x);
    brackets.push([x - delta, x + delta]);
    *tolerance = tolerance.max(delta);
    Ok(x)
}

fn ulp(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1) - x
}

/// Newton's method kept inside [a, b] by bisection.
fn refine(nu: f64, mut a: f64, mut fa: f64, mut b: f64, fb: f64) -> f64 {
    let mut x = a - fa * (b - a) / (fb - fa);
    if !(x > a && x < b) {
        x = 0.5 * (a + b);
    }
    for _ in 0..200 {
        let (j0, j1) = jpair(nu, x);
        if j0 == 0.0 {
            return x;
        }
        if (j0 > 0.0) == (fa > 0.0) {
            a = x;
            fa = j0;
        } else {
            b = x;
        }
        let d = nu / x * j0 - j1;
        let newton = x - j0 / d;
        let next = if d != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        let done = (next - x).abs() <= 2.0 * f64::EPSILON * x || b - a <= 4.0 * ulp(b);
        x = next;
        if done {
            break;
        }
    }
    x
}
