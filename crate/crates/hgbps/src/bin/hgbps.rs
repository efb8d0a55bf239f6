//! `hgbps`: command-line front end.
//!
//! Every subcommand prints one JSON document (to stdout, or to `--out`). Exit status is
//! 0 on success, 1 when a check fails or a computation errors, 2 on configuration errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use hgbps::borel::{borel_sum_quadrature, log_borel_sum_path};
use hgbps::bps::{arg_angle, bps_spectrum, normalize_angle};
use hgbps::json::{cval, parse_complex, CJson};
use hgbps::lattice::LatticeElement;
use hgbps::rhp::{
    at_nu_star, jump_residual, log_tau_hol, log_tau_min, log_tau_vor, minimal_at_nu, RhpSolution, SolutionKind, TauKind,
};
use hgbps::series::{free_energy, voros_path_coeff, voros_series};
use hgbps::tr::tr_compare;
use hgbps::verify::{basis, run_all, window, Scope};
use hgbps::wkb::WkbOracle;
use hgbps::{Complex64 as C, CurveLabel, Error, Pole, SpectralCurve};

const TWO_PI_I: C = C::new(0.0, 2.0 * std::f64::consts::PI);
const DEFAULT_SEED: u64 = 2024;

#[derive(Parser)]
#[command(
    name = "hgbps",
    version,
    about = "BPS structures, Voros symbols, RHP solutions and tau-functions of hypergeometric-type curves"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
    /// JSON file holding any of the other options, keyed by long flag name; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads for grid sweeps [default: number of CPUs].
    #[arg(long, global = true, env = "HGBPS_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy, Debug)]
enum Cmd {
    /// Active classes, Ω, central charges and BPS rays.
    Spectrum,
    /// Voros series coefficients V_{μ,k}, k = −1..k-max.
    Voros,
    /// Free energies F_g.
    FreeEnergy,
    /// Borel sum of the path Voros series of --beta, closed form checked against quadrature where available.
    BorelSum,
    /// Values of an RHP solution X_{ℓ,μ}(ħ).
    RhpEval,
    /// Jump residuals across every BPS ray, for basis classes and the --radii grid.
    JumpCheck,
    /// log τ of the chosen kind.
    Tau,
    /// F_g from topological recursion against the closed form.
    TrOracle,
    /// WKB path integrals against the closed path coefficients.
    WkbOracle,
    /// Full acceptance matrix; writes report.json, rays.csv, borel_residuals.csv, tau_fits.csv.
    Report,
}

/// A complex flag value: text such as `1.5-0.2i` on the command line, a number,
/// `[re, im]`, `{"re","im"}` or text in the config file.
#[derive(Copy, Clone, Debug)]
struct CArg(C);

impl FromStr for CArg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_complex(s).map(CArg)
    }
}

impl<'de> Deserialize<'de> for CArg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(CJson),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(c) => Ok(CArg(c.into())),
            Raw::Text(s) => parse_complex(&s).map(CArg).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Args, Deserialize, Default, Clone, Debug)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
struct Opts {
    /// Curve: HG, dHG, Kum, Leg, Bes, Whi, Web, dBes, Ai, Deg3_14, Deg3_23 [default: Web; all curves for report].
    #[arg(long, global = true)]
    curve: Option<String>,
    /// Masses at the even poles in the order 0, 1, ∞, comma separated (e.g. `1,0.5-2i`) [default: random from --seed].
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    m: Vec<CArg>,
    /// ν at the even poles, same order [default: 0 when --m is given, random otherwise].
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    nu: Vec<CArg>,
    /// Seed for random parameters and for report [default: 2024].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Ray angle ϑ in radians [default: the curve's default non-BPS ray].
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// ħ values, comma separated [default: 0.2·e^{iϑ}].
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    hbar: Vec<CArg>,
    /// |ħ| grid for jump-check [default: 0.05,0.1,0.2,0.4,0.7].
    #[arg(long, global = true, value_delimiter = ',')]
    radii: Vec<f64>,
    /// Highest ħ order for voros and wkb-oracle [default: 8].
    #[arg(long, global = true)]
    k_max: Option<usize>,
    /// Genera for free-energy and tr-oracle [default: 2,3].
    #[arg(long, global = true, value_delimiter = ',')]
    g: Vec<usize>,
    /// Check tolerance [defaults: borel-sum 1e-8, jump-check 1e-11, tr-oracle 1e-8 (relative), wkb-oracle 1e-7 (relative)].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Solution or τ kind: vor, min, hol [default: vor; all three for jump-check].
    #[arg(long, global = true)]
    kind: Option<String>,
    /// Lattice classes, comma separated (e.g. `g0+,binf`) [default: the supported basis classes].
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Vec<String>,
    /// Path class for borel-sum [default: β at the first even pole].
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
    /// borel-sum method: closed or quadrature [default: closed].
    #[arg(long, global = true)]
    method: Option<String>,
    /// Pole carrying ν* = 1 for the HG and dHG holomorphic solution [default: first even pole].
    #[arg(long, global = true)]
    nu_star_pole: Option<String>,
    /// Output directory for report [default: report].
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl Opts {
    /// `self` with unset entries taken from `file`.
    fn over(self, file: Opts) -> Opts {
        fn v<T>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
            if a.is_empty() {
                b
            } else {
                a
            }
        }
        Opts {
            curve: self.curve.or(file.curve),
            m: v(self.m, file.m),
            nu: v(self.nu, file.nu),
            seed: self.seed.or(file.seed),
            theta: self.theta.or(file.theta),
            hbar: v(self.hbar, file.hbar),
            radii: v(self.radii, file.radii),
            k_max: self.k_max.or(file.k_max),
            g: v(self.g, file.g),
            tol: self.tol.or(file.tol),
            kind: self.kind.or(file.kind),
            mu: v(self.mu, file.mu),
            beta: self.beta.or(file.beta),
            method: self.method.or(file.method),
            nu_star_pole: self.nu_star_pole.or(file.nu_star_pole),
            out_dir: self.out_dir.or(file.out_dir),
            out: self.out.or(file.out),
        }
    }
}

/// Validated configuration.
struct RunConfig {
    opts: Opts,
    curve: Option<SpectralCurve>,
    seed: u64,
}

/// Failure of a subcommand: `code` is the process exit status.
struct Fail {
    code: u8,
    error: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidMass(_)
            | Error::DimensionMismatch { .. }
            | Error::Config(_)
            | Error::Unsupported(_)
            | Error::UnsupportedClass(_)
            | Error::RayIsBps(_)
            | Error::BoundaryIsBps(_)
            | Error::NuOutOfStrip(_) => 2,
            _ => 1,
        };
        Fail { code, error: e.to_string() }
    }
}

fn config_err(msg: impl Into<String>) -> Fail {
    Fail { code: 2, error: msg.into() }
}

type Res<T> = Result<T, Fail>;

impl RunConfig {
    fn new(cmd: Cmd, flags: Opts, file: Option<&Path>) -> Res<Self> {
        let opts = match file {
            None => flags,
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
                let parsed: Opts =
                    serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
                flags.over(parsed)
            }
        };
        let seed = opts.seed.unwrap_or(DEFAULT_SEED);
        let label = opts.curve.as_deref().map(CurveLabel::from_str).transpose()?;
        let curve = match cmd {
            Cmd::Report => {
                if !opts.m.is_empty() || !opts.nu.is_empty() {
                    return Err(config_err("report draws its own parameters; --m and --nu do not apply"));
                }
                None
            }
            _ => Some(make_curve(label.unwrap_or(CurveLabel::Web), &opts, seed)?),
        };
        if let Some(k) = &opts.kind {
            SolutionKind::from_str(k)?;
        }
        Ok(RunConfig { opts, curve, seed })
    }

    fn curve(&self) -> &SpectralCurve {
        self.curve.as_ref().expect("curve set for this subcommand")
    }

    fn theta(&self) -> f64 {
        self.opts.theta.unwrap_or_else(|| bps_spectrum(self.curve()).default_theta())
    }

    fn hbars(&self, theta: f64) -> Vec<C> {
        if self.opts.hbar.is_empty() {
            vec![C::from_polar(0.2, theta)]
        } else {
            self.opts.hbar.iter().map(|h| h.0).collect()
        }
    }

    fn classes(&self) -> Res<Vec<LatticeElement>> {
        let label = self.curve().label;
        if self.opts.mu.is_empty() {
            return Ok(basis(label));
        }
        self.opts
            .mu
            .iter()
            .map(|s| {
                let mu = LatticeElement::from_str(s)?;
                mu.supported_by(label)?;
                Ok(mu)
            })
            .collect()
    }

    fn chosen_pole(&self) -> Res<Option<Pole>> {
        Ok(self.opts.nu_star_pole.as_deref().map(Pole::from_str).transpose()?)
    }

    fn tol(&self, default: f64) -> f64 {
        self.opts.tol.unwrap_or(default)
    }
}

fn make_curve(label: CurveLabel, opts: &Opts, seed: u64) -> Res<SpectralCurve> {
    use rand::SeedableRng;
    let m: Vec<C> = opts.m.iter().map(|c| c.0).collect();
    let nu: Vec<C> = opts.nu.iter().map(|c| c.0).collect();
    if m.is_empty() {
        if !nu.is_empty() {
            return Err(config_err("--nu needs --m"));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        return Ok(SpectralCurve::random(label, &mut rng));
    }
    let c = if nu.is_empty() { SpectralCurve::with_masses(label, &m)? } else { SpectralCurve::new(label, &m, &nu)? };
    Ok(c)
}

/// `e ≤ tol`, false for NaN.
fn within(e: f64, tol: f64) -> bool {
    e <= tol
}

/// Angle in `(−π, π]`.
fn signed(t: f64) -> f64 {
    let a = normalize_angle(t);
    if a > std::f64::consts::PI {
        a - 2.0 * std::f64::consts::PI
    } else {
        a
    }
}

/// Result document plus the list of failed checks.
struct Output {
    doc: Value,
    failures: Vec<String>,
}

impl Output {
    fn ok(doc: Value) -> Self {
        Output { doc, failures: Vec::new() }
    }

    fn checked(mut doc: Value, failures: Vec<String>) -> Self {
        doc["passed"] = json!(failures.is_empty());
        doc["failures"] = json!(failures);
        Output { doc, failures }
    }
}

fn curve_json(c: &SpectralCurve) -> Value {
    serde_json::to_value(c).unwrap_or(Value::Null)
}

fn spectrum(cfg: &RunConfig) -> Res<Output> {
    let c = cfg.curve();
    let s = bps_spectrum(c);
    let active: Vec<Value> = s
        .active
        .iter()
        .map(|a| {
            json!({
                "gamma": a.gamma.to_string(),
                "omega": a.omega,
                "z": cval(a.z),
                "z_over_2pi_i": cval(a.z / TWO_PI_I),
                "angle": signed(arg_angle(a.z)),
            })
        })
        .collect();
    let rays: Vec<Value> = s
        .rays()
        .iter()
        .map(|r| json!({"angle": signed(r.angle), "classes": r.bps.iter().map(|g| g.to_string()).collect::<Vec<_>>()}))
        .collect();
    let (generic, _) = s.is_generic();
    Ok(Output::ok(json!({
        "curve": curve_json(c),
        "active": active,
        "rays": rays,
        "generic": generic,
        "uncoupled": s.is_uncoupled(),
        "default_theta": s.default_theta(),
    })))
}

fn voros(cfg: &RunConfig) -> Res<Output> {
    let c = cfg.curve();
    let k_max = cfg.opts.k_max.unwrap_or(8);
    let mut series = Vec::new();
    for mu in cfg.classes()? {
        let v = voros_series(c, &mu, k_max)?;
        series.push(json!({"mu": mu.to_string(), "k_min": v.k_min, "coeffs": v.coeffs.iter().map(|z| cval(*z)).collect::<Vec<_>>()}));
    }
    Ok(Output::ok(json!({"curve": curve_json(c), "k_max": k_max, "series": series})))
}

fn genera(cfg: &RunConfig) -> Vec<usize> {
    if cfg.opts.g.is_empty() {
        vec![2, 3]
    } else {
        cfg.opts.g.clone()
    }
}

fn free_energies(cfg: &RunConfig) -> Res<Output> {
    let c = cfg.curve();
    let theta = cfg.theta();
    let rows = genera(cfg)
        .into_iter()
        .map(|g| Ok(json!({"g": g, "value": cval(free_energy(c, g, theta)?)})))
        .collect::<Res<Vec<_>>>()?;
    Ok(Output::ok(json!({"curve": curve_json(c), "theta": theta, "free_energies": rows})))
}

fn borel_sum(cfg: &RunConfig) -> Res<Output> {
    let c = cfg.curve();
    let theta = cfg.theta();
    let tol = cfg.tol(1e-8);
    let beta = match &cfg.opts.beta {
        Some(s) => LatticeElement::from_str(s)?,
        None => match c.label.even_poles().first() {
            Some(&p) => LatticeElement::beta(p),
            None => return Err(config_err(format!("{} has no path classes", c.label))),
        },
    };
    let quadrature = match cfg.opts.method.as_deref().unwrap_or("closed") {
        "closed" => false,
        "quadrature" => true,
        m => return Err(config_err(format!("unknown method `{m}` (closed, quadrature)"))),
    };
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for hbar in cfg.hbars(theta) {
        let closed = log_borel_sum_path(c, &beta, theta, hbar)?;
        let quad = match borel_sum_quadrature(c, &beta, theta, hbar) {
            Ok(q) => Some(q),
            Err(Error::Unsupported(_)) if !quadrature => None,
            Err(e) => return Err(e.into()),
        };
        let value = if quadrature { quad.expect("quadrature requested") } else { closed };
        let residual = quad.map(|q| (q - closed).norm());
        if let Some(r) = residual.filter(|r| !within(*r, tol)) {
            failures.push(format!("ħ={hbar}: |quadrature − closed| = {r:.3e} > {tol:.1e}"));
        }
        rows.push(json!({
            "hbar": cval(hbar),
            "method": if quadrature { "quadrature" } else { "closed" },
            "value": cval(value),
            "symbol": cval(value.exp()),
            "residual": residual,
        }));
    }
    Ok(Output::checked(
        json!({"curve": curve_json(c), "beta": beta.to_string(), "theta": theta, "tol": tol, "values": rows}),
        failures,
    ))
}

fn solution(cfg: &RunConfig, kind: SolutionKind) -> Res<RhpSolution> {
    let c = cfg.curve();
    Ok(match kind {
        SolutionKind::Vor => RhpSolution::voros(c)?,
        SolutionKind::Min => minimal_at_nu(c)?,
        SolutionKind::Hol => RhpSolution::holomorphic(c, cfg.chosen_pole()?)?,
    })
}

fn kind(cfg: &RunConfig) -> Res<SolutionKind> {
    Ok(cfg.opts.kind.as_deref().map(SolutionKind::from_str).transpose()?.unwrap_or(SolutionKind::Vor))
}

fn rhp_eval(cfg: &RunConfig) -> Res<Output> {
    let theta = cfg.theta();
    let sol = solution(cfg, kind(cfg)?)?;
    let mut rows = Vec::new();
    for mu in cfg.classes()? {
        for hbar in cfg.hbars(theta) {
            let log = sol.log_eval(&mu, theta, hbar)?;
            rows.push(json!({"mu": mu.to_string(), "hbar": cval(hbar), "log": cval(log), "value": cval(log.exp())}));
        }
    }
    Ok(Output::ok(json!({"curve": curve_json(cfg.curve()), "kind": sol.kind, "theta": theta, "values": rows})))
}

fn jump_check(cfg: &RunConfig) -> Res<Output> {
    let c = cfg.curve();
    let tol = cfg.tol(1e-11);
    let radii = if cfg.opts.radii.is_empty() { vec![0.05, 0.1, 0.2, 0.4, 0.7] } else { cfg.opts.radii.clone() };
    let kinds = match &cfg.opts.kind {
        Some(k) => vec![SolutionKind::from_str(k)?],
        None => vec![SolutionKind::Vor, SolutionKind::Min, SolutionKind::Hol],
    };
    let sols = kinds.into_iter().map(|k| solution(cfg, k)).collect::<Res<Vec<_>>>()?;
    let classes = cfg.classes()?;
    let s = bps_spectrum(c);
    let rays = s.rays();
    let per_ray: Vec<Result<(f64, Vec<String>), Error>> = rays
        .par_iter()
        .map(|ray| {
            let d = window(&s, ray.angle);
            let mut worst = 0.0f64;
            let mut bad = Vec::new();
            for sol in &sols {
                for &rad in &radii {
                    let h = C::from_polar(rad, ray.angle);
                    for mu in &classes {
                        let r = jump_residual(sol, mu, ray.angle + d, ray.angle - d, h)?;
                        worst = worst.max(r);
                        if !within(r, tol) {
                            bad.push(format!("{:?} ray {:.6} μ={mu} |ħ|={rad}: residual {r:.3e}", sol.kind, ray.angle));
                        }
                    }
                }
            }
            Ok((worst, bad))
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (ray, r) in rays.iter().zip(per_ray) {
        let (worst, bad) = r?;
        rows.push(json!({
            "angle": signed(ray.angle),
            "classes": ray.bps.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "max_residual": worst,
        }));
        failures.extend(bad);
    }
    Ok(Output::checked(json!({"curve": curve_json(c), "tol": tol, "radii": radii, "rays": rows}), failures))
}

fn tau_cmd(cfg: &RunConfig) -> Res<Output> {
    let c = cfg.curve();
    let theta = cfg.theta();
    let kind = cfg.opts.kind.as_deref().map(TauKind::from_str).transpose()?.unwrap_or(TauKind::Vor);
    let mut rows = Vec::new();
    for hbar in cfg.hbars(theta) {
        let log = match kind {
            TauKind::Vor => log_tau_vor(c, theta, hbar)?,
            TauKind::Hol => log_tau_hol(&at_nu_star(c, cfg.chosen_pole()?)?, theta, hbar)?,
            TauKind::Min => log_tau_min(c, &RhpSolution::voros(c)?.xi, theta, hbar)?,
        };
        rows.push(json!({"hbar": cval(hbar), "log_tau": cval(log), "tau": cval(log.exp())}));
    }
    Ok(Output::ok(json!({"curve": curve_json(c), "kind": kind, "theta": theta, "values": rows})))
}

fn tr_oracle(cfg: &RunConfig) -> Res<Output> {
    let c = cfg.curve();
    let tol = cfg.tol(1e-8);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for g in genera(cfg) {
        let cmp = tr_compare(c, g)?;
        let rel = cmp.abs_diff / cmp.closed.norm().max(1e-300);
        if !within(rel, tol) {
            failures.push(format!("F_{g}: relative difference {rel:.3e} > {tol:.1e}"));
        }
        let mut row = serde_json::to_value(&cmp).unwrap_or(Value::Null);
        row["rel_diff"] = json!(rel);
        rows.push(row);
    }
    Ok(Output::checked(json!({"curve": curve_json(c), "tol": tol, "comparisons": rows}), failures))
}

fn wkb_oracle(cfg: &RunConfig) -> Res<Output> {
    let c = cfg.curve();
    let tol = cfg.tol(1e-7);
    let k_max = cfg.opts.k_max.unwrap_or(8);
    let oracle = WkbOracle::new(c)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &p in c.label.even_poles() {
        let numeric = oracle.path_voros_numeric(p, k_max)?;
        let beta = LatticeElement::beta(p);
        for (k, v) in (1..=k_max).zip(numeric) {
            let closed = voros_path_coeff(c, &beta, k)?;
            let rel = (v - closed).norm() / closed.norm().max(1e-300);
            if !within(rel, tol) {
                failures.push(format!("pole {p} k={k}: relative error {rel:.3e} > {tol:.1e}"));
            }
            rows.push(json!({"pole": p.key(), "k": k, "numeric": cval(v), "closed": cval(closed), "rel_err": rel}));
        }
    }
    Ok(Output::checked(json!({"curve": curve_json(c), "tol": tol, "k_max": k_max, "table": rows}), failures))
}

fn write_csv<T: serde::Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Res<()> {
    let io = |e: &dyn std::fmt::Display| Fail { code: 1, error: format!("{}: {e}", path.display()) };
    let mut w = csv::Writer::from_path(path).map_err(|e| io(&e))?;
    if rows.is_empty() {
        w.write_record(header).map_err(|e| io(&e))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| io(&e))?;
    }
    w.flush().map_err(|e| io(&e))
}

fn report(cfg: &RunConfig) -> Res<Output> {
    let only = cfg.opts.curve.as_deref().map(CurveLabel::from_str).transpose()?;
    let rep = run_all(&Scope { only, seed: cfg.seed });
    let dir = cfg.opts.out_dir.clone().unwrap_or_else(|| PathBuf::from("report"));
    fs::create_dir_all(&dir).map_err(|e| Fail { code: 1, error: format!("{}: {e}", dir.display()) })?;
    let doc = serde_json::to_value(&rep).unwrap_or(Value::Null);
    let text = serde_json::to_string_pretty(&doc).expect("report serializes");
    fs::write(dir.join("report.json"), text + "\n").map_err(|e| Fail { code: 1, error: e.to_string() })?;
    write_csv(&dir.join("rays.csv"), &rep.rays, &["curve", "gamma", "omega", "angle", "abs_z"])?;
    write_csv(
        &dir.join("borel_residuals.csv"),
        &rep.borel,
        &[
            "curve",
            "theta",
            "hbar_abs",
            "hbar_arg",
            "quadrature_re",
            "quadrature_im",
            "closed_re",
            "closed_im",
            "abs_err",
        ],
    )?;
    write_csv(
        &dir.join("tau_fits.csv"),
        &rep.tau_fits,
        &["curve", "genus_cutoff", "hbar_abs", "residual", "fitted_exponent"],
    )?;
    let failures =
        rep.checks.iter().flat_map(|c| c.failures.iter().map(move |f| format!("criterion {}: {f}", c.id))).collect();
    let summary: Vec<Value> = rep
        .checks
        .iter()
        .map(
            |c| json!({"id": c.id, "name": c.name, "passed": c.passed, "cases": c.cases, "worst_ratio": c.worst_ratio}),
        )
        .collect();
    Ok(Output::checked(json!({"out_dir": dir, "seed": rep.seed, "curve": rep.curve, "checks": summary}), failures))
}

fn run(cmd: Cmd, cfg: &RunConfig) -> Res<Output> {
    match cmd {
        Cmd::Spectrum => spectrum(cfg),
        Cmd::Voros => voros(cfg),
        Cmd::FreeEnergy => free_energies(cfg),
        Cmd::BorelSum => borel_sum(cfg),
        Cmd::RhpEval => rhp_eval(cfg),
        Cmd::JumpCheck => jump_check(cfg),
        Cmd::Tau => tau_cmd(cfg),
        Cmd::TrOracle => tr_oracle(cfg),
        Cmd::WkbOracle => wkb_oracle(cfg),
        Cmd::Report => report(cfg),
    }
}

fn emit(out: Option<&Path>, doc: &Value) -> Res<()> {
    let text = serde_json::to_string_pretty(doc).expect("values serialize") + "\n";
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => fs::write(p, text).map_err(|e| Fail { code: 1, error: format!("{}: {e}", p.display()) }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", json!({"error": e.to_string()}));
            return ExitCode::from(1);
        }
    }
    let result = RunConfig::new(cli.cmd, cli.opts, cli.config.as_deref()).and_then(|cfg| {
        let out = run(cli.cmd, &cfg)?;
        emit(cfg.opts.out.as_deref(), &out.doc)?;
        Ok(out.failures.len())
    });
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(f) => {
            eprintln!("{}", json!({"error": f.error, "exit_code": f.code}));
            ExitCode::from(f.code)
        }
    }
}
