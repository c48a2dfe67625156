//! Small special-function helpers: digamma differences, trigamma, Gauss–Legendre
//! nodes, Jacobi polynomials, and the function 1/x² − π²/(4 sin²(πx/2)).

use std::f64::consts::PI;

const SHIFT: f64 = 16.0;

// B_{2k}/(2k) for k = 1..7
const DIGAMMA_COEF: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// ψ(q) − ψ(p) for positive p, q, accurate when q − p is small relative to p.
pub fn digamma_diff(mut q: f64, mut p: f64) -> f64 {
    let mut acc = 0.0;
    while p < SHIFT {
        acc += 1.0 / p;
        p += 1.0;
    }
    while q < SHIFT {
        acc -= 1.0 / q;
        q += 1.0;
    }
    // ψ(x) ~ ln x − 1/(2x) − Σ B_{2k}/(2k x^{2k})
    let mut v = ((q - p) / p).ln_1p() - 0.5 / q + 0.5 / p;
    let (iq, ip) = (1.0 / (q * q), 1.0 / (p * p));
    let (mut pq, mut pp) = (iq, ip);
    for c in DIGAMMA_COEF {
        v -= c * (pq - pp);
        pq *= iq;
        pp *= ip;
    }
    v + acc
}

/// Trigamma ψ'(x) for x > 0.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < SHIFT {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    // ψ'(x) ~ 1/x + 1/(2x²) + Σ B_{2k}/x^{2k+1}
    const B: [f64; 7] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
    ];
    let ix = 1.0 / x;
    let ix2 = ix * ix;
    let mut p = ix2 * ix;
    let mut v = ix + 0.5 * ix2;
    for b in B {
        v += b * p;
        p *= ix2;
    }
    v + acc
}

/// 1/x² − π²/(4 sin²(πx/2)); finite on [0, 1] with value −π²/12 at 0.
pub fn pin(x: f64) -> f64 {
    let h = 0.5 * PI;
    let th = h * x;
    if th.abs() < 0.1 {
        // 1/θ² − csc²θ = −(1/3 + θ²/15 + 2θ⁴/189 + θ⁶/675 + 2θ⁸/10395)
        let t2 = th * th;
        let s = 1.0 / 3.0 + t2 * (1.0 / 15.0 + t2 * (2.0 / 189.0 + t2 * (1.0 / 675.0 + t2 * 2.0 / 10395.0)));
        -h * h * s
    } else {
        let s = th.sin();
        1.0 / (x * x) - h * h / (s * s)
    }
}

/// Gauss–Legendre nodes and weights on (−1, 1), nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Jacobi polynomials P_0..P_k at t by the three-term recurrence; returns (P_{k-1}, P_k).
pub fn jacobi_pair(k: usize, a: f64, b: f64, t: f64) -> (f64, f64) {
    if k == 0 {
        return (0.0, 1.0);
    }
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b + (a + b + 2.0) * t);
    for n in 2..=k {
        let nf = n as f64;
        let s = 2.0 * nf + a + b;
        let c1 = 2.0 * nf * (nf + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * t + a * a - b * b);
        let c3 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * s;
        let p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    (p0, p1)
}

/// P_k^{(a,b)}(t).
pub fn jacobi(k: usize, a: f64, b: f64, t: f64) -> f64 {
    jacobi_pair(k, a, b, t).1
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    pub fn add(&mut self, v: f64) {
        let t = self.s + v;
        if self.s.abs() >= v.abs() {
            self.c += (self.s - t) + v;
        } else {
            self.c += (v - t) + self.s;
        }
        self.s = t;
    }

    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

impl std::iter::FromIterator<f64> for Sum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Sum::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digamma_difference_matches_harmonic_numbers() {
        // ψ(n+1) − ψ(1) = H_n
        let h: f64 = (1..=40).map(|k| 1.0 / k as f64).sum();
        assert!((digamma_diff(41.0, 1.0) - h).abs() < 1e-14);
        let h2: f64 = (3..=7).map(|k| 1.0 / k as f64).sum();
        assert!((digamma_diff(8.0, 3.0) - h2).abs() < 1e-15);
    }

    #[test]
    fn trigamma_at_one_is_zeta_two() {
        assert!((trigamma(1.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((trigamma(0.5) - PI * PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn pin_is_continuous_across_series_switch() {
        let x0 = 0.2 / PI;
        let a = pin(x0 * (1.0 - 1e-12));
        let b = pin(x0 * (1.0 + 1e-12));
        assert!((a - b).abs() < 1e-12);
        assert!((pin(0.0) + PI * PI / 12.0).abs() < 1e-15);
        assert!((pin(1.0) - (1.0 - PI * PI / 4.0)).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(12);
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((i - 2.0 / 23.0).abs() < 1e-15);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_matches_legendre_and_chebyshev() {
        for &t in &[-0.9, -0.3, 0.2, 0.77] {
            let (p, _) = legendre_with_derivative(7, t);
            assert!((jacobi(7, 0.0, 0.0, t) - p).abs() < 1e-14);
            // P_k^{(1/2,1/2)}(cos θ) ∝ sin((k+1)θ)/sin θ
            let th: f64 = f64::acos(t);
            let u = ((5.0 + 1.0) * th).sin() / th.sin();
            let ratio = jacobi(5, 0.5, 0.5, t) / u;
            let ratio0 = jacobi(5, 0.5, 0.5, 0.999999) / (6.0 * 0.999999f64.acos()).sin()
                * 0.999999f64.acos().sin();
            assert!((ratio - ratio0).abs() < 1e-6);
        }
    }
}
