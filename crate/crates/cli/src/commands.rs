//! Subcommand implementations.

use std::fs;
use std::path::{Path, PathBuf};

use hgschottky::apollonius::{apollonius_family, concentric_centers, pairing_map};
use hgschottky::loops::{audit_profile, base_point, smallest_certified_theta1, trace_loop};
use hgschottky::schottky::{certify, check_nesting, DEFAULT_TOL};
use hgschottky::special::Monodromy;
use hgschottky::{AngleTriple, Complex64, GeneralizedDisk, HGParams, LoopKind, LoopProfile, PhaseOrPoint, SpherePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::format::{
    c_in, c_out, point_out, ApolloniusJson, AuditJson, CertificateJson, ConfigJson, DiskJson, LoopReportJson, MapJson,
    MonodromyJson, NestingJson, RunConfig, CONFIG_TYPE, REPORT_TYPE, RUN_TYPE,
};
use crate::svg;

const BISECT_LO: f64 = 1e-3;
const BISECT_STEPS: usize = 40;

/// Overrides the default certification tolerance.
pub const TOL_ENV: &str = "HGSCHOTTKY_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("invalid parameters: {0}")]
    Params(hgschottky::Error),
    #[error("{0}")]
    Math(hgschottky::Error),
}

impl CliError {
    /// 1 for mathematical failures, 2 for bad input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Math(_) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Whether the command's mathematical claim held.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("`{s}` is not a number pair re,im"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("`{s}` is not a number pair re,im")),
    }
}

/// `x,y,r` for the disk of center `x + iy` and radius `r`.
pub fn parse_disk(s: &str) -> Result<GeneralizedDisk, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("`{s}` is not x,y,r"))?;
    match v.as_slice() {
        [x, y, r] => GeneralizedDisk::from_center_radius(Complex64::new(*x, *y), *r).map_err(|e| e.to_string()),
        _ => Err(format!("`{s}` is not x,y,r")),
    }
}

/// Default tolerance, honoring [`TOL_ENV`].
pub fn default_tol() -> CliResult<f64> {
    match std::env::var(TOL_ENV) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(CliError::Usage(format!("{TOL_ENV}={v} is not a positive number"))),
        },
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn resolve_tol(tol: Option<f64>) -> CliResult<f64> {
    match tol {
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(CliError::Usage(format!("--tol must be positive, got {t}"))),
        None => default_tol(),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents hold only finite numbers");
    s.push('\n');
    s
}

/// Writes to `out`, or to stdout when absent.
fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    let text = to_json(value);
    match out {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn document_type(path: &Path, text: &str) -> CliResult<String> {
    let v: serde_json::Value = parse_json(path, text)?;
    v.get("type")
        .and_then(|t| t.as_str())
        .map(String::from)
        .ok_or_else(|| CliError::Usage(format!("{}: missing \"type\"", path.display())))
}

pub fn read_config(path: &Path) -> CliResult<hgschottky::SchottkyConfig> {
    let text = read_text(path)?;
    let json: ConfigJson = parse_json(path, &text)?;
    if json.tag != CONFIG_TYPE {
        return Err(CliError::Usage(format!("{}: expected type \"{CONFIG_TYPE}\"", path.display())));
    }
    json.to_config()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn parse_kind(s: &str) -> CliResult<LoopKind> {
    LoopKind::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = LoopKind::ALL.iter().map(|k| k.name()).collect();
        CliError::Usage(format!("unknown loop kind `{s}`; expected one of {}", names.join(", ")))
    })
}

#[derive(Clone, Debug, Default)]
pub struct MonodromyRequest {
    pub a: Option<Complex64>,
    pub b: Option<Complex64>,
    pub c: Option<Complex64>,
    pub angles: Option<(f64, f64, f64)>,
    pub out: Option<PathBuf>,
}

pub fn monodromy(req: &MonodromyRequest) -> CliResult<Verdict> {
    let params = match (req.a, req.b, req.c, req.angles) {
        (Some(a), Some(b), Some(c), None) => HGParams::new(a, b, c),
        (None, None, None, Some((t0, t1, t2))) => AngleTriple::new(t0, t1, t2).map_err(CliError::Params)?.params(),
        _ => {
            return Err(CliError::Usage(
                "give either --a, --b and --c, or --theta0, --theta1 and --theta2".into(),
            ))
        }
    };
    let m = Monodromy::compute(&params).map_err(CliError::Params)?;
    emit(&MonodromyJson::from_monodromy(&m), req.out.as_deref())?;
    Ok(Verdict::Pass)
}

#[derive(Clone, Debug, Default)]
pub struct CertifyRequest {
    pub input: Option<PathBuf>,
    pub angles: Option<(f64, f64, f64)>,
    pub tol: Option<f64>,
    pub depth: Option<usize>,
    pub save_config: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

fn load_config(req: &CertifyRequest) -> CliResult<hgschottky::SchottkyConfig> {
    match (&req.input, req.angles) {
        (Some(p), None) => read_config(p),
        (None, Some((t0, t1, t2))) => base_point(t0, t1, t2).map_err(|e| match e {
            hgschottky::Error::NonpositiveAngle(_) => CliError::Params(e),
            e => CliError::Math(e),
        }),
        _ => Err(CliError::Usage(
            "give either a configuration file or --theta0, --theta1 and --theta2".into(),
        )),
    }
}

pub fn certify_cmd(req: &CertifyRequest) -> CliResult<Verdict> {
    let tol = resolve_tol(req.tol)?;
    let cfg = load_config(req)?;
    if let Some(p) = &req.save_config {
        write_text(p, &to_json(&ConfigJson::from_config(&cfg)))?;
    }
    if let Some(p) = &req.svg {
        let s = svg::plot_config(&cfg, req.depth).map_err(|e| CliError::Usage(e.to_string()))?;
        write_text(p, &s)?;
    }
    let cert = match certify(&cfg, tol) {
        Ok(c) => c,
        Err(e @ hgschottky::Error::NonLoxodromicGenerator) => return Err(CliError::Math(e)),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let mut json = CertificateJson::from_certificate(&cert);
    let mut pass = cert.verdict;
    if let Some(depth) = req.depth {
        let rep = check_nesting(&cfg, depth).map_err(|e| CliError::Usage(e.to_string()))?;
        pass &= rep.pass();
        json.nesting = Some(NestingJson {
            depth,
            words_per_length: rep.words_per_length.clone(),
            points_checked: rep.points_checked,
            point_violations: rep.point_violations,
            disk_checks: rep.disk_checks,
            disk_violations: rep.disk_violations,
            pass: rep.pass(),
        });
    }
    emit(&json, req.out.as_deref())?;
    if !pass {
        eprintln!("certificate failed: {}", cert.first_failure().unwrap_or("nesting"));
    }
    Ok(Verdict::from_bool(pass))
}

#[derive(Clone, Debug, Default)]
pub struct LoopRequest {
    pub kind: String,
    pub theta0: Option<f64>,
    pub theta1: Option<f64>,
    pub theta_prime: Option<f64>,
    pub s: Option<f64>,
    pub n: Option<usize>,
    pub tol: Option<f64>,
    pub margin: Option<f64>,
    pub bisect_theta1: bool,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// The shipped profile of the kind with the requested overrides.
pub fn build_profile(req: &LoopRequest) -> CliResult<(LoopKind, LoopProfile)> {
    let kind = parse_kind(&req.kind)?;
    let mut p = LoopProfile::default_for(kind);
    for (name, v) in [("theta0", req.theta0), ("theta1", req.theta1), ("s", req.s)] {
        if v.is_some_and(|x| !(x > 0.0 && x.is_finite())) {
            return Err(CliError::Usage(format!("--{name} must be positive and finite")));
        }
    }
    if req.theta_prime.is_some_and(|x| !x.is_finite()) {
        return Err(CliError::Usage("--theta-prime must be finite".into()));
    }
    if kind != LoopKind::AlphaAroundD1 && (req.theta_prime.is_some() || req.s.is_some()) {
        return Err(CliError::Usage(format!("--theta-prime and --s only apply to {}", LoopKind::AlphaAroundD1.name())));
    }
    p.theta0 = req.theta0.unwrap_or(p.theta0);
    if kind == LoopKind::AlphaAroundD1 {
        p.theta_prime = req.theta_prime.or(p.theta_prime);
        p.s = req.s;
        p.theta1 = match req.theta1 {
            Some(t) => t,
            None => p.theta1_lower_bound().map_or(f64::NAN, |b| b.max(0.0) + 1.0),
        };
    } else {
        p.theta1 = req.theta1.unwrap_or(p.theta1);
    }
    if let Some(n) = req.n {
        p.samples = n;
    }
    p.tol = resolve_tol(req.tol)?;
    if let Some(m) = req.margin {
        if !(m > 0.0 && m.is_finite()) {
            return Err(CliError::Usage("--margin must be positive".into()));
        }
        p.margin = m;
    }
    Ok((kind, p))
}

fn failed_entries(a: &hgschottky::loops::AuditReport) -> String {
    a.entries
        .iter()
        .filter(|e| !e.pass)
        .map(|e| format!("{} (slack {:.3e})", e.name, e.slack))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn audit(req: &LoopRequest) -> CliResult<Verdict> {
    let (kind, profile) = build_profile(req)?;
    let a = audit_profile(kind, &profile);
    emit(&AuditJson::new(&a, &profile), req.out.as_deref())?;
    if !a.pass {
        eprintln!("audit failed: {}", failed_entries(&a));
    }
    Ok(Verdict::from_bool(a.pass))
}

pub fn run_loop(req: &LoopRequest) -> CliResult<Verdict> {
    let (kind, profile) = build_profile(req)?;
    let a = audit_profile(kind, &profile);
    if !a.pass {
        emit(&AuditJson::new(&a, &profile), req.out.as_deref())?;
        eprintln!("audit failed: {}", failed_entries(&a));
        return Ok(Verdict::Fail);
    }
    let rep = trace_loop(kind, &profile).map_err(CliError::Math)?;
    let mut json = LoopReportJson::from_report(&rep);
    if req.bisect_theta1 {
        let hi = profile.pairing_angle(kind);
        json.smallest_certified_theta1 = smallest_certified_theta1(kind, &profile, BISECT_LO, hi, BISECT_STEPS);
    }
    emit(&json, req.out.as_deref())?;
    if let Some(p) = &req.svg {
        write_text(p, &svg::plot_strip(&json).map_err(CliError::Usage)?)?;
    }
    eprintln!(
        "{}: verdict {}, winding {:?}, multiplier arg change {:.9}, {}/{} samples certified",
        kind.name(),
        if rep.verdict { "pass" } else { "fail" },
        rep.alpha_winding,
        rep.multiplier_arg_change,
        rep.certified_samples,
        rep.samples.len()
    );
    Ok(Verdict::from_bool(rep.verdict))
}

#[derive(Clone, Debug, Default)]
pub struct PlotRequest {
    pub input: PathBuf,
    pub out: PathBuf,
    pub orbit_depth: Option<usize>,
}

pub fn plot(req: &PlotRequest) -> CliResult<Verdict> {
    let text = read_text(&req.input)?;
    let svg = match document_type(&req.input, &text)?.as_str() {
        CONFIG_TYPE => {
            let cfg = read_config(&req.input)?;
            svg::plot_config(&cfg, req.orbit_depth).map_err(|e| CliError::Usage(e.to_string()))?
        }
        REPORT_TYPE => {
            let report: LoopReportJson = parse_json(&req.input, &text)?;
            svg::plot_report(&report).map_err(|e| CliError::Usage(format!("{}: {e}", req.input.display())))?
        }
        other => {
            return Err(CliError::Usage(format!(
                "{}: cannot plot a document of type \"{other}\"",
                req.input.display()
            )))
        }
    };
    write_text(&req.out, &svg)?;
    Ok(Verdict::Pass)
}

#[derive(Clone, Debug)]
pub struct ApolloniusRequest {
    pub d: GeneralizedDisk,
    pub dp: GeneralizedDisk,
    pub fp: Option<Complex64>,
    pub phase: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

pub fn apollonius(req: &ApolloniusRequest) -> CliResult<Verdict> {
    let input = |e: hgschottky::Error| CliError::Usage(e.to_string());
    let pair = concentric_centers(&req.d, &req.dp).map_err(input)?;
    // without an explicit f' the family is built around the concentric point of D'
    let fp = req.fp.map_or(pair.fp, SpherePoint::finite);
    let data = apollonius_family(&req.d, &req.dp, fp).map_err(input)?;
    let phase = match (req.phase, req.seed) {
        (Some(p), _) => p,
        (None, Some(seed)) => ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..std::f64::consts::TAU),
        (None, None) => 0.0,
    };
    let sel = PhaseOrPoint::Phase(phase);
    let g = pairing_map(&data, sel).map_err(input)?;
    let repelling = g.fixed_points().ok().map(|(r, _)| r);
    let json = ApolloniusJson {
        tag: "apollonius".into(),
        d: DiskJson::from_disk(&req.d),
        dp: DiskJson::from_disk(&req.dp),
        f: point_out(pair.f),
        fp_concentric: point_out(pair.fp),
        concentric_radii: pair.concentric_radii(),
        eta_roots: (pair.roots.eta_f, pair.roots.eta_fp),
        roots_localized: pair.roots.localized(),
        fp: point_out(data.fp),
        modulus: data.modulus,
        circle: data.circle.as_ref().map(DiskJson::from_disk),
        phase,
        repelling: repelling.and_then(point_out),
        map: MapJson::from_map(&g),
        multiplier: c_out(g.multiplier()),
        pairing_residual: req.d.transform(&g).circle_residual(&req.dp.complement()),
    };
    emit(&json, req.out.as_deref())?;
    Ok(Verdict::Pass)
}

fn angles(cfg: &RunConfig) -> CliResult<Option<(f64, f64, f64)>> {
    match (cfg.theta0, cfg.theta1, cfg.theta2) {
        (Some(a), Some(b), Some(c)) => Ok(Some((a, b, c))),
        (None, None, None) => Ok(None),
        _ => Err(CliError::Usage("theta0, theta1 and theta2 go together".into())),
    }
}

/// Fields each `run` command accepts besides `type` and `command`.
const RUN_FIELDS: [(&str, &[&str]); 6] = [
    ("monodromy", &["theta0", "theta1", "theta2", "out"]),
    ("certify", &["input", "theta0", "theta1", "theta2", "tol", "orbit_depth", "svg", "out"]),
    (
        "loop",
        &["kind", "theta0", "theta1", "theta_prime", "s", "n", "tol", "margin", "bisect_theta1", "out", "svg"],
    ),
    ("audit", &["kind", "theta0", "theta1", "theta_prime", "s", "n", "tol", "margin", "out"]),
    ("plot", &["input", "svg", "orbit_depth"]),
    ("apollonius", &["d", "dp", "fp", "phase", "seed", "out"]),
];

/// Rejects fields the command does not use.
pub fn validate_run(cfg: &RunConfig) -> CliResult<()> {
    if cfg.tag != RUN_TYPE {
        return Err(CliError::Usage(format!("expected type \"{RUN_TYPE}\"")));
    }
    let Some((_, allowed)) = RUN_FIELDS.iter().find(|(c, _)| *c == cfg.command) else {
        let names: Vec<&str> = RUN_FIELDS.iter().map(|(c, _)| *c).collect();
        return Err(CliError::Usage(format!(
            "unknown command `{}`; expected one of {}",
            cfg.command,
            names.join(", ")
        )));
    };
    let value = serde_json::to_value(cfg).expect("run configurations serialize");
    let fields = value.as_object().expect("run configurations are objects");
    for key in fields.keys().filter(|k| *k != "type" && *k != "command") {
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("`{key}` does not apply to `{}`", cfg.command)));
        }
    }
    Ok(())
}

/// Checks a run configuration and executes it.
pub fn run(path: &Path) -> CliResult<Verdict> {
    let text = read_text(path)?;
    let cfg: RunConfig = parse_json(path, &text)?;
    validate_run(&cfg).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let path_of = |s: &Option<String>| s.as_ref().map(PathBuf::from);
    let need = |what: &str| CliError::Usage(format!("`{}` needs `{what}`", cfg.command));
    match cfg.command.as_str() {
        "monodromy" => monodromy(&MonodromyRequest {
            angles: angles(&cfg)?,
            out: path_of(&cfg.out),
            ..Default::default()
        }),
        "certify" => certify_cmd(&CertifyRequest {
            input: path_of(&cfg.input),
            angles: angles(&cfg)?,
            tol: cfg.tol,
            depth: cfg.orbit_depth,
            save_config: None,
            svg: path_of(&cfg.svg),
            out: path_of(&cfg.out),
        }),
        "loop" | "audit" => {
            let req = LoopRequest {
                kind: cfg.kind.clone().ok_or_else(|| need("kind"))?,
                theta0: cfg.theta0,
                theta1: cfg.theta1,
                theta_prime: cfg.theta_prime,
                s: cfg.s,
                n: cfg.n,
                tol: cfg.tol,
                margin: cfg.margin,
                bisect_theta1: cfg.bisect_theta1.unwrap_or(false),
                out: path_of(&cfg.out),
                svg: path_of(&cfg.svg),
            };
            if cfg.command == "loop" {
                run_loop(&req)
            } else {
                audit(&req)
            }
        }
        "plot" => plot(&PlotRequest {
            input: path_of(&cfg.input).ok_or_else(|| need("input"))?,
            out: path_of(&cfg.svg).ok_or_else(|| need("svg"))?,
            orbit_depth: cfg.orbit_depth,
        }),
        _ => {
            let disk = |name: &str, v: Option<[f64; 3]>| -> CliResult<GeneralizedDisk> {
                let [x, y, r] = v.ok_or_else(|| need(name))?;
                GeneralizedDisk::from_center_radius(Complex64::new(x, y), r)
                    .map_err(|e| CliError::Usage(format!("{name}: {e}")))
            };
            apollonius(&ApolloniusRequest {
                d: disk("d", cfg.d)?,
                dp: disk("dp", cfg.dp)?,
                fp: cfg.fp.map(c_in),
                phase: cfg.phase,
                seed: cfg.seed,
                out: path_of(&cfg.out),
            })
        }
    }
}
