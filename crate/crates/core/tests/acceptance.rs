//! Acceptance criteria, one line per criterion. Exits nonzero if any criterion fails.

use fblab::bessel::{compute_zeros, CheckStatus, Order};
use fblab::expansion::expand;
use fblab::operators::heat::{heat_kernel, KernelConfig};
use fblab::quadrature::rule_for_system;
use fblab::systems::{Setting, SystemSpec};
use fblab::verify::{self, Check, VerifyOptions};
use std::f64::consts::PI;
use std::time::Instant;

struct Outcome {
    pass: bool,
    summary: String,
}

fn from_checks(checks: Vec<Check>, extra: Option<(bool, String)>) -> Outcome {
    let total = checks.len();
    let failed: Vec<&Check> = checks.iter().filter(|c| c.status != CheckStatus::Pass).collect();
    let mut summary = format!("{}/{} checks pass", total - failed.len(), total);
    for c in failed.iter().take(5) {
        summary.push_str(&format!("; {} {:?} ({:e}) {}", c.id, c.status, c.value, c.detail));
    }
    let mut pass = failed.is_empty() && total > 0;
    if let Some((ok, msg)) = extra {
        pass &= ok;
        summary.push_str("; ");
        summary.push_str(&msg);
    }
    Outcome { pass, summary }
}

fn suites(names: &[&str], opts: &VerifyOptions) -> Vec<Check> {
    names.iter().flat_map(|s| verify::run(s, opts).expect("known suite")).collect()
}

// zeros at ν = ±1/2 against nπ and (n − 1/2)π, computed here
fn zero_oracle() -> (bool, String) {
    let mut worst: f64 = 0.0;
    for (nu, shift) in [(0.5, 0.0), (-0.5, 0.5)] {
        let t = compute_zeros(Order::new(nu).unwrap(), 50).unwrap();
        for n in 1..=50 {
            worst = worst.max((t.zero(n).unwrap() - (n as f64 - shift) * PI).abs());
        }
    }
    (worst <= 1e-12, format!("direct max error {worst:.2e}"))
}

// the ν = 1/2 Lebesgue heat kernel against 2 Σ e^{−n²π²t} sin(nπx) sin(nπy)
fn sine_oracle() -> (bool, String) {
    let cfg = KernelConfig::default();
    let spec = SystemSpec::new(Setting::Lebesgue, 0.5, cfg.capacity_for(0.5)).unwrap();
    let mut worst: f64 = 0.0;
    for &t in &[0.01, 0.1, 0.5] {
        for &(x, y) in &[(0.1, 0.2), (0.5, 0.5), (0.33, 0.91), (0.999, 0.998)] {
            let k = heat_kernel(&spec, &cfg, t, x, y).unwrap();
            let s: f64 = (1..400)
                .map(|n| {
                    let a = n as f64 * PI;
                    2.0 * (-a * a * t).exp() * (a * x).sin() * (a * y).sin()
                })
                .sum();
            worst = worst.max((k - s).abs());
        }
    }
    (worst <= 1e-10, format!("direct sine series max error {worst:.2e}"))
}

// stand-in for completeness: L² error of partial expansions of a bump decreases
fn expansion_convergence() -> Outcome {
    let spec = SystemSpec::new(Setting::Essential, 0.0, 64).unwrap();
    let rule = rule_for_system(&spec, 48).unwrap();
    let f = |x: f64| {
        let u = 4.0 * (x - 0.5);
        if u.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - u * u)).exp()
        }
    };
    let mut errs = Vec::new();
    for n in [8, 16, 32, 48] {
        let c = expand(&rule, &spec, |x| Ok(f(x)), n).unwrap();
        let e = rule.integrate(|x| c.partial_sum(x).map(|v| (v - f(x)).powi(2))).unwrap().sqrt();
        errs.push(e);
    }
    let pass = errs.windows(2).all(|w| w[1] < w[0]) && errs[3] < errs[0] / 50.0;
    Outcome {
        pass,
        summary: format!(
            "L^p boundedness, maximal bounds, completeness and sharpness are out of scope; \
             expansion errors of a bump for N = 8, 16, 32, 48: {}",
            errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn main() {
    let opts = VerifyOptions::default();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("zero fidelity and interlacing", Box::new(|| from_checks(suites(&["zeros"], &opts), Some(zero_oracle())))),
        ("Rayleigh and Calogero identities", Box::new(|| from_checks(suites(&["identities"], &opts), None))),
        ("endpoint slopes of R − R_n", Box::new(|| from_checks(suites(&["ratio"], &opts), None))),
        ("orthonormality and differentiated orthogonality", Box::new(|| from_checks(suites(&["orthonormality"], &opts), None))),
        ("Green function", Box::new(|| from_checks(suites(&["green"], &opts), None))),
        ("heat suite", Box::new(|| from_checks(suites(&["heat"], &opts), Some(sine_oracle())))),
        ("Trotter sandwich on 64×64×3", Box::new(|| from_checks(suites(&["trotter"], &opts), None))),
        ("sharp-bound comparators with negative control", Box::new(|| from_checks(suites(&["comparators"], &opts), None))),
        ("Riesz suite", Box::new(|| from_checks(suites(&["riesz"], &opts), None))),
        ("Calderón equivalence", Box::new(|| from_checks(suites(&["calderon"], &opts), None))),
        ("desk-scale limits", Box::new(expansion_convergence)),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name} [{:.1}s]: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.summary
        );
    }
    println!("acceptance: {} of {} criteria pass (seed {})", criteria.len() - failures, criteria.len(), opts.seed);
    if failures > 0 {
        std::process::exit(1);
    }
}
