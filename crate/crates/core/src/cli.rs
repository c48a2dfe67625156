//! Command-line front end.

use crate::bessel::{compute_zeros, CheckStatus, Order};
use crate::error::{Error, Result};
use crate::expansion::{expand, CoefficientVector};
use crate::operators::comparators::midpoint_grid;
use crate::operators::green::green_aux;
use crate::operators::heat::{kernel_matrix, KernelConfig, KernelKind};
use crate::operators::potential::{potential_apply, potential_kernel};
use crate::operators::riesz::{riesz_apply, RieszVariant};
use crate::quadrature::rule_for_system;
use crate::sobolev::{calderon_equivalence_report, potential_norm, sobolev_norm, SobolevElement, TestFunction};
use crate::systems::{DerivativeKind, Setting, SystemSpec};
use crate::verify::{self, Baselines, Check, VerifyOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;

/// Version tag written in the first line of every CSV output.
pub const CSV_SCHEMA: &str = "# fblab-csv v1";

#[derive(Debug, Parser)]
#[command(name = "fblab", version, about = "Discrete Fourier-Bessel analysis on (0,1)")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Default, Clone)]
pub struct CommonArgs {
    /// key = value file; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub setting: Option<Setting>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// number of series terms
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub t_min: Option<f64>,
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// treat inconclusive results as failures (exit code 4)
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Positive zeros of J_ν
    Zeros {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Eigenfunctions or their derivatives at points
    Eval {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
        /// new or old derivative instead of the function
        #[arg(long)]
        derivative: Option<DerivativeArg>,
    },
    /// Coefficients of a catalogue function in the system
    Expand {
        #[arg(long, default_value = "bump")]
        function: TestFunction,
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
    /// Heat kernel matrix on the midpoint grid
    Heat {
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value = "heat")]
        kind: KindArg,
    },
    /// Green kernel on the midpoint grid (Lebesgue setting)
    Green,
    /// Riesz transform of a coefficient vector, sampled on the midpoint grid
    Riesz {
        #[arg(long, value_enum, default_value = "standard")]
        variant: VariantArg,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        coeffs: Vec<f64>,
    },
    /// Potential operator on coefficients, or its kernel on the midpoint grid
    Potential {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<f64>>,
    },
    /// Sobolev and potential norms of a span element, or the equivalence report
    Sobolev {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<f64>>,
        /// number of random elements for the equivalence report
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Run the verification suites
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// write freshly piloted baselines to this path and exit
        #[arg(long)]
        write_baselines: Option<PathBuf>,
        /// baselines file to use instead of the built-in one
        #[arg(long)]
        baselines: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DerivativeArg {
    New,
    Old,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Heat,
    Diff,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Standard,
    Probabilistic,
    Modified,
}

/// Validated run configuration: flags over file over defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub setting: Setting,
    pub nu: Option<f64>,
    pub ab: Option<(f64, f64)>,
    pub kernel: KernelConfig,
    pub grid: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub strict: bool,
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("invalid value '{v}' for {key}")))
}

const KNOWN_KEYS: [&str; 12] = [
    "setting", "nu", "alpha", "beta", "truncation", "tolerance", "t-min", "grid", "seed", "output", "format",
    "strict",
];

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<RunConfig> {
        let file = match &args.config {
            Some(p) => parse_config_file(&std::fs::read_to_string(p).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", p.display()))
            })?)?,
            None => HashMap::new(),
        };
        if let Some(k) = file.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown config key '{k}'")));
        }
        fn pick<T: std::str::FromStr + Clone>(
            flag: &Option<T>,
            file: &HashMap<String, String>,
            key: &str,
        ) -> Result<Option<T>> {
            match flag {
                Some(v) => Ok(Some(v.clone())),
                None => file.get(key).map(|v| parse_value(key, v)).transpose(),
            }
        }
        let setting: Setting = pick(&args.setting, &file, "setting")?.unwrap_or(Setting::Essential);
        let nu: Option<f64> = pick(&args.nu, &file, "nu")?;
        let alpha: Option<f64> = pick(&args.alpha, &file, "alpha")?;
        let beta: Option<f64> = pick(&args.beta, &file, "beta")?;
        let defaults = KernelConfig::default();
        let kernel = KernelConfig {
            truncation: pick(&args.truncation, &file, "truncation")?,
            tolerance: pick(&args.tolerance, &file, "tolerance")?.unwrap_or(defaults.tolerance),
            t_min: pick(&args.t_min, &file, "t-min")?.unwrap_or(defaults.t_min),
        };
        let format = match &args.format {
            Some(f) => *f,
            None => match file.get("format").map(String::as_str) {
                None | Some("json") => Format::Json,
                Some("csv") => Format::Csv,
                Some(v) => return Err(Error::Config(format!("invalid value '{v}' for format"))),
            },
        };
        let strict = args.strict || file.get("strict").is_some_and(|v| v == "true");
        let cfg = RunConfig {
            setting,
            nu,
            ab: match (alpha, beta) {
                (Some(a), Some(b)) => Some((a, b)),
                (None, None) => None,
                _ => return Err(Error::Config("alpha and beta must be given together".into())),
            },
            kernel,
            grid: pick(&args.grid, &file, "grid")?.unwrap_or(64),
            seed: pick(&args.seed, &file, "seed")?.unwrap_or(VerifyOptions::default().seed),
            output: args.output.clone().or_else(|| file.get("output").map(PathBuf::from)),
            format,
            strict,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if let Some(nu) = self.nu {
            if !(nu > -1.0 && nu.is_finite()) {
                return Err(Error::Config(format!("ν must be a finite number above −1, got {nu}")));
            }
        }
        if let Some((a, b)) = self.ab {
            if !(a > -1.0 && b > -1.0) {
                return Err(Error::Config(format!("α and β must exceed −1, got ({a}, {b})")));
            }
        }
        if !(self.kernel.tolerance > 0.0) || !(self.kernel.t_min > 0.0) {
            return Err(Error::Config("tolerance and t-min must be positive".into()));
        }
        if self.grid == 0 || self.grid > 4096 {
            return Err(Error::Config(format!("grid must lie in 1..=4096, got {}", self.grid)));
        }
        if self.kernel.truncation == Some(0) {
            return Err(Error::Config("truncation must be positive".into()));
        }
        Ok(())
    }

    fn nu(&self) -> Result<f64> {
        self.nu.ok_or_else(|| Error::Config("--nu is required".into()))
    }

    /// System of the configured setting with room for `terms` functions.
    pub fn spec(&self, terms: usize) -> Result<SystemSpec> {
        if self.setting == Setting::Jacobi {
            let (a, b) = self.ab.ok_or_else(|| Error::Config("the jacobi setting needs --alpha and --beta".into()))?;
            return SystemSpec::jacobi(a, b);
        }
        SystemSpec::new(self.setting, self.nu()?, terms.max(4))
    }

    fn kernel_spec(&self) -> Result<SystemSpec> {
        let cap = match self.kernel.truncation {
            Some(n) => n + 1,
            None if self.setting == Setting::Jacobi => 0,
            None => self.kernel.capacity_for(self.nu()?),
        };
        self.spec(cap)
    }
}

/// Map an error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Certification(_) | Error::Quadrature { .. } | Error::NonFinite { .. } => 3,
        Error::Inconclusive(_) => 4,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn csv_header(out: &mut String, command: &str, cfg: &RunConfig, columns: &str) {
    let _ = writeln!(
        out,
        "{CSV_SCHEMA} {command} setting={} nu={} seed={}",
        cfg.setting,
        cfg.nu.map_or("-".into(), |v| v.to_string()),
        cfg.seed
    );
    let _ = writeln!(out, "{columns}");
}

fn matrix_csv(out: &mut String, xs: &[f64], t: Option<f64>, m: &[Vec<f64>]) {
    for (j, &x) in xs.iter().enumerate() {
        for (k, &y) in xs.iter().enumerate() {
            match t {
                Some(t) => {
                    let _ = writeln!(out, "{x:.17e},{y:.17e},{t:.17e},{:.17e}", m[j][k]);
                }
                None => {
                    let _ = writeln!(out, "{x:.17e},{y:.17e},{:.17e}", m[j][k]);
                }
            }
        }
    }
}

/// Outcome of a command: text to emit and the exit code it implies.
pub struct Outcome {
    pub text: String,
    pub code: i32,
    pub output: Option<PathBuf>,
}

fn done(text: String) -> Result<Outcome> {
    Ok(Outcome { text, code: 0, output: None })
}

fn coeff_record(v: &CoefficientVector) -> Result<serde_json::Value> {
    Ok(serde_json::from_str(&v.to_json()?)?)
}

fn sample_grid(cfg: &RunConfig, f: impl Fn(f64) -> Result<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let xs = midpoint_grid(cfg.grid);
    let vs = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    Ok((xs, vs))
}

fn series_output(cfg: &RunConfig, command: &str, xs: &[f64], vs: &[f64], extra: serde_json::Value) -> String {
    match cfg.format {
        Format::Json => {
            let mut v = extra;
            v["x"] = json!(xs);
            v["value"] = json!(vs);
            v["seed"] = json!(cfg.seed);
            v.to_string()
        }
        Format::Csv => {
            let mut s = String::new();
            csv_header(&mut s, command, cfg, "x,value");
            for (x, v) in xs.iter().zip(vs) {
                let _ = writeln!(s, "{x:.17e},{v:.17e}");
            }
            s
        }
    }
}

fn check_rows(checks: &[Check], format: Format, seed: u64) -> String {
    match format {
        Format::Json => json!({ "seed": seed, "checks": checks }).to_string(),
        Format::Csv => {
            let mut s = format!("{CSV_SCHEMA} verify seed={seed}\nid,anchor,status,value\n");
            for c in checks {
                let _ = writeln!(s, "{},\"{}\",{:?},{:e}", c.id, c.anchor, c.status, c.value);
            }
            s
        }
    }
}

/// Plain-text verification table.
pub fn check_table(checks: &[Check]) -> String {
    let w = checks.iter().map(|c| c.id.chars().count()).max().unwrap_or(8).max(8);
    let a = checks.iter().map(|c| c.anchor.chars().count()).max().unwrap_or(6).max(6);
    let mut s = String::new();
    let _ = writeln!(s, "{:<w$}  {:<a$}  {:<12}  value", "check", "anchor", "status");
    for c in checks {
        let status = format!("{:?}", c.status).to_lowercase();
        let pad_id = w - c.id.chars().count();
        let pad_a = a - c.anchor.chars().count();
        let _ = writeln!(
            s,
            "{}{}  {}{}  {:<12}  {:.6e}  {}",
            c.id,
            " ".repeat(pad_id),
            c.anchor,
            " ".repeat(pad_a),
            status,
            c.value,
            c.detail
        );
    }
    s
}

/// Run a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = RunConfig::resolve(&cli.common)?;
    let mut out = dispatch(cli, &cfg)?;
    out.output = cfg.output.clone();
    Ok(out)
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<Outcome> {
    let cfg = cfg.clone();
    match &cli.command {
        Command::Zeros { count } => {
            let t = compute_zeros(Order::new(cfg.nu()?)?, *count)?;
            match cfg.format {
                Format::Json => done(json!({ "zeros": t.zeros() }).to_string()),
                Format::Csv => {
                    let mut s = String::new();
                    csv_header(&mut s, "zeros", &cfg, "n,zero");
                    for (i, z) in t.zeros().iter().enumerate() {
                        let _ = writeln!(s, "{},{z:.17e}", i + 1);
                    }
                    done(s)
                }
            }
        }
        Command::Eval { n, x, derivative } => {
            let spec = cfg.spec(*n)?;
            let vs = x
                .iter()
                .map(|&x| match derivative {
                    None => spec.eval(*n, x),
                    Some(DerivativeArg::New) => spec.derivative(DerivativeKind::New, *n, x),
                    Some(DerivativeArg::Old) => spec.derivative(DerivativeKind::Old, *n, x),
                })
                .collect::<Result<Vec<_>>>()?;
            done(series_output(&cfg, "eval", x, &vs, json!({ "n": n })))
        }
        Command::Expand { function, count } => {
            let spec = cfg.spec(*count)?;
            let rule = rule_for_system(&spec, spec.nth_index(count - 1))?;
            let c = expand(&rule, &spec, |x| Ok(function.value(x)), *count)?;
            match cfg.format {
                Format::Json => done(coeff_record(&c)?.to_string()),
                Format::Csv => {
                    let mut s = String::new();
                    csv_header(&mut s, "expand", &cfg, "n,coefficient");
                    for (n, v) in c.indexed() {
                        let _ = writeln!(s, "{n},{v:.17e}");
                    }
                    done(s)
                }
            }
        }
        Command::Heat { t, kind } => {
            let spec = cfg.kernel_spec()?;
            let kind = match kind {
                KindArg::Heat => KernelKind::Heat,
                KindArg::Diff => KernelKind::Differentiated,
            };
            let xs = midpoint_grid(cfg.grid);
            let m = kernel_matrix(&spec, &cfg.kernel, kind, *t, &xs, &xs)?;
            match cfg.format {
                Format::Json => done(
                    json!({ "t": t, "x": xs, "kernel": m, "config": {
                        "truncation": cfg.kernel.truncation, "tolerance": cfg.kernel.tolerance,
                        "t_min": cfg.kernel.t_min, "terms": cfg.kernel.terms(&spec, *t)? } })
                    .to_string(),
                ),
                Format::Csv => {
                    let mut s = String::new();
                    csv_header(&mut s, "heat", &cfg, "x,y,t,value");
                    matrix_csv(&mut s, &xs, Some(*t), &m);
                    done(s)
                }
            }
        }
        Command::Green => {
            let spec = SystemSpec::new(Setting::Lebesgue, cfg.nu()?, 4)?;
            let g = green_aux(&spec)?;
            let xs = midpoint_grid(cfg.grid);
            let m = xs
                .iter()
                .map(|&x| xs.iter().map(|&y| g.eval(x, y)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            match cfg.format {
                Format::Json => done(json!({ "x": xs, "kernel": m, "f": xs.iter().map(|&x| g.f(x)).collect::<Vec<_>>() }).to_string()),
                Format::Csv => {
                    let mut s = String::new();
                    csv_header(&mut s, "green", &cfg, "x,xi,value");
                    matrix_csv(&mut s, &xs, None, &m);
                    done(s)
                }
            }
        }
        Command::Riesz { variant, coeffs } => {
            let variant = match variant {
                VariantArg::Standard => RieszVariant::Standard,
                VariantArg::Probabilistic => RieszVariant::Probabilistic,
                VariantArg::Modified => RieszVariant::Modified,
            };
            let spec = SystemSpec::new(variant.setting(), cfg.nu()?, coeffs.len())?;
            let im = riesz_apply(&CoefficientVector::new(spec, coeffs.clone())?, variant)?;
            let (xs, vs) = sample_grid(&cfg, |x| im.eval(x))?;
            done(series_output(&cfg, "riesz", &xs, &vs, json!({ "l2_norm": im.l2_squared()?.sqrt() })))
        }
        Command::Potential { sigma, coeffs } => match coeffs {
            Some(c) => {
                let spec = cfg.spec(c.len())?;
                let out = potential_apply(&CoefficientVector::new(spec, c.clone())?, *sigma)?;
                match cfg.format {
                    Format::Json => done(coeff_record(&out)?.to_string()),
                    Format::Csv => {
                        let (xs, vs) = sample_grid(&cfg, |x| out.partial_sum(x))?;
                        done(series_output(&cfg, "potential", &xs, &vs, json!({})))
                    }
                }
            }
            None => {
                let cfg_k = KernelConfig { truncation: Some(cfg.kernel.truncation.unwrap_or(200)), ..cfg.kernel };
                let spec = cfg.spec(cfg_k.truncation.unwrap())?;
                let xs = midpoint_grid(cfg.grid);
                let m = xs
                    .iter()
                    .map(|&x| xs.iter().map(|&y| potential_kernel(&spec, &cfg_k, *sigma, x, y)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                match cfg.format {
                    Format::Json => done(json!({ "sigma": sigma, "x": xs, "kernel": m }).to_string()),
                    Format::Csv => {
                        let mut s = String::new();
                        csv_header(&mut s, "potential", &cfg, "x,y,value");
                        matrix_csv(&mut s, &xs, None, &m);
                        done(s)
                    }
                }
            }
        },
        Command::Sobolev { p, coeffs, samples } => {
            let nu = cfg.nu()?;
            let spec = SystemSpec::new(Setting::Essential, nu, 24)?;
            let rule = rule_for_system(&spec, 16)?;
            if let Some(n) = samples {
                let band = Baselines::builtin().calderon_band(nu, *p);
                let r = calderon_equivalence_report(&rule, &spec, *p, *n, 16, cfg.seed, band)?;
                return done(serde_json::to_string(&r)?);
            }
            let c = coeffs.clone().ok_or_else(|| Error::Config("--coeffs or --samples is required".into()))?;
            if c.len() > 16 {
                return Err(Error::Config("at most 16 coefficients".into()));
            }
            let el = SobolevElement::new(CoefficientVector::new(spec, c)?, *p)?;
            done(
                json!({ "nu": nu, "p": p, "sobolev_norm": sobolev_norm(&rule, &el)?,
                        "potential_norm": potential_norm(&rule, &el, 1.0)? })
                .to_string(),
            )
        }
        Command::Verify { suite, write_baselines, baselines } => {
            if let Some(path) = write_baselines {
                let b = verify::pilot_baselines(cfg.grid, cfg.seed)?;
                std::fs::write(path, serde_json::to_string_pretty(&b)?)?;
                return done(format!("baselines written to {}", path.display()));
            }
            let baselines = match baselines {
                Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
                None => Baselines::builtin(),
            };
            let opts = VerifyOptions { nu: cfg.nu, seed: cfg.seed, grid: cfg.grid, baselines };
            let checks = verify::run(suite, &opts)?;
            let text = match cfg.output {
                // the table goes to the terminal, data to the file
                Some(_) => check_rows(&checks, cfg.format, cfg.seed),
                None => format!("{}seed {}\n", check_table(&checks), cfg.seed),
            };
            let code = match verify::summary(&checks) {
                CheckStatus::Pass => 0,
                CheckStatus::Fail => 3,
                CheckStatus::Inconclusive if cfg.strict => 4,
                CheckStatus::Inconclusive => 0,
            };
            Ok(Outcome { text, code, output: None })
        }
    }
}

/// Configure the worker pool from FBLAB_THREADS.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("FBLAB_THREADS") {
        let n: usize = parse_value("FBLAB_THREADS", &v)?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

/// Entry point; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    let out = execute(&cli).and_then(|o| {
        match &o.output {
            Some(path) => std::fs::write(path, &o.text)?,
            None => print!("{}", o.text),
        }
        Ok(o.code)
    });
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Outcome> {
        let mut v = vec!["fblab"];
        v.extend_from_slice(args);
        execute(&Cli::try_parse_from(v).unwrap())
    }

    #[test]
    fn zeros_json() {
        let o = run(&["zeros", "--nu", "0.5", "--count", "3", "--format", "json"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&o.text).unwrap();
        for (i, z) in v["zeros"].as_array().unwrap().iter().enumerate() {
            assert!((z.as_f64().unwrap() - (i + 1) as f64 * std::f64::consts::PI).abs() < 1e-13);
        }
    }

    #[test]
    fn config_file_and_precedence() {
        let m = parse_config_file("nu = 0.25 # order\n\nt_min = 0.01\n").unwrap();
        assert_eq!(m["nu"], "0.25");
        assert_eq!(m["t-min"], "0.01");
        assert!(parse_config_file("oops").is_err());
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.conf");
        std::fs::write(&p, "nu = 0.25\ngrid = 8\n").unwrap();
        let args = CommonArgs { config: Some(p.clone()), nu: Some(1.0), ..CommonArgs::default() };
        let c = RunConfig::resolve(&args).unwrap();
        assert_eq!((c.nu, c.grid), (Some(1.0), 8));
        std::fs::write(&p, "colour = red\n").unwrap();
        let args = CommonArgs { config: Some(p), ..CommonArgs::default() };
        assert!(matches!(RunConfig::resolve(&args), Err(Error::Config(_))));
    }

    #[test]
    fn bad_values_are_config_errors() {
        let e = run(&["zeros", "--nu", "-1.5"]).err().unwrap();
        assert_eq!(exit_code(&e), 2);
        let e = run(&["eval", "--n", "2", "--x", "0.5"]).err().unwrap();
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn heat_csv_is_symmetric_and_versioned() {
        let o = run(&["heat", "--setting", "essential", "--nu", "0", "--t", "0.05", "--grid", "8", "--format", "csv"])
            .unwrap();
        let mut lines = o.text.lines();
        assert!(lines.next().unwrap().starts_with(CSV_SCHEMA));
        assert_eq!(lines.next().unwrap(), "x,y,t,value");
        let vals: Vec<f64> = lines.map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
        assert_eq!(vals.len(), 64);
        for j in 0..8 {
            for k in 0..8 {
                assert!((vals[8 * j + k] - vals[8 * k + j]).abs() < 1e-12);
            }
        }
    }
}
