//! JSON documents read and written by the command line.
//!
//! Complex numbers are `[re, im]` pairs, points on the sphere are pairs or
//! `null` for infinity, and disks are Hermitian triples `[A, [re B, im B], D]`
//! describing `{ A|z|^2 + 2 Re(conj(B) z) + D <= 0 }`. Every document
//! carries a `"type"` tag and rejects unknown keys.

use hgschottky::loops::{AuditReport, LoopCheck, LoopSample, PairingMethod};
use hgschottky::schottky::PAIR_LABELS;
use hgschottky::special::Monodromy;
use hgschottky::{
    Certificate, Complex64, GeneralizedDisk, LoopKind, LoopProfile, LoopReport, Mat2, MoebiusMap, SchottkyConfig,
    SpherePoint,
};
use serde::{Deserialize, Serialize};

pub const CONFIG_TYPE: &str = "schottky-config";
pub const REPORT_TYPE: &str = "loop-report";
pub const RUN_TYPE: &str = "run";

pub type C = [f64; 2];

pub fn c_out(z: Complex64) -> C {
    [z.re, z.im]
}

pub fn c_in(v: C) -> Complex64 {
    Complex64::new(v[0], v[1])
}

/// Non-finite values become `null`.
fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn point_out(p: SpherePoint) -> Option<C> {
    p.to_complex().map(c_out)
}

fn mat_out(m: &Mat2) -> [C; 4] {
    [c_out(m.a), c_out(m.b), c_out(m.c), c_out(m.d)]
}

fn mat_in(m: [C; 4]) -> Mat2 {
    Mat2::new(c_in(m[0]), c_in(m[1]), c_in(m[2]), c_in(m[3]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskJson {
    pub hermitian: (f64, C, f64),
    /// `|B|^2 - A D`, kept separately because it may be far below the
    /// rounding error of the triple.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<f64>,
}

impl DiskJson {
    pub fn from_disk(d: &GeneralizedDisk) -> Self {
        DiskJson {
            hermitian: (d.a(), c_out(d.b()), d.d()),
            discriminant: Some(d.discriminant()),
        }
    }

    pub fn to_disk(&self) -> hgschottky::Result<GeneralizedDisk> {
        let (a, b, d) = self.hermitian;
        match self.discriminant {
            Some(delta) => GeneralizedDisk::from_parts(a, c_in(b), d, delta),
            None => GeneralizedDisk::from_hermitian(a, c_in(b), d),
        }
    }
}

/// A generator, either as a matrix `[a, b, c, d]` of `z -> (a z + b) / (c z + d)`
/// or as `frame^-1 . (w -> factor w) . frame`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[C; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<[C; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<C>,
}

impl MapJson {
    pub fn from_map(m: &MoebiusMap) -> Self {
        match m.frame_dilation() {
            Some((frame, k)) => MapJson {
                matrix: None,
                frame: Some(mat_out(&frame)),
                factor: Some(c_out(k)),
            },
            None => MapJson {
                matrix: Some(mat_out(&m.matrix())),
                frame: None,
                factor: None,
            },
        }
    }

    pub fn to_map(&self) -> Result<MoebiusMap, String> {
        match (self.matrix, self.frame, self.factor) {
            (Some(m), None, None) => MoebiusMap::from_matrix(mat_in(m)).map_err(|e| e.to_string()),
            (None, Some(f), Some(k)) => MoebiusMap::from_frame_dilation(mat_in(f), c_in(k)).map_err(|e| e.to_string()),
            _ => Err("a map needs either `matrix` or both `frame` and `factor`".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigJson {
    #[serde(rename = "type")]
    pub tag: String,
    pub gamma1: MapJson,
    pub gamma2: MapJson,
    pub d1: DiskJson,
    pub d1p: DiskJson,
    pub d2: DiskJson,
    pub d2p: DiskJson,
}

impl ConfigJson {
    pub fn from_config(cfg: &SchottkyConfig) -> Self {
        ConfigJson {
            tag: CONFIG_TYPE.into(),
            gamma1: MapJson::from_map(&cfg.gamma1),
            gamma2: MapJson::from_map(&cfg.gamma2),
            d1: DiskJson::from_disk(&cfg.d1),
            d1p: DiskJson::from_disk(&cfg.d1p),
            d2: DiskJson::from_disk(&cfg.d2),
            d2p: DiskJson::from_disk(&cfg.d2p),
        }
    }

    pub fn to_config(&self) -> Result<SchottkyConfig, String> {
        let disk = |name: &str, d: &DiskJson| d.to_disk().map_err(|e| format!("{name}: {e}"));
        let g1 = self.gamma1.to_map().map_err(|e| format!("gamma1: {e}"))?;
        let g2 = self.gamma2.to_map().map_err(|e| format!("gamma2: {e}"))?;
        let disks = [
            disk("d1", &self.d1)?,
            disk("d1p", &self.d1p)?,
            disk("d2", &self.d2)?,
            disk("d2p", &self.d2p)?,
        ];
        SchottkyConfig::from_maps(g1, g2, disks).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairMarginJson {
    pub pair: String,
    pub margin: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    #[serde(rename = "type")]
    pub tag: String,
    pub verdict: bool,
    pub first_failure: Option<String>,
    pub tol: f64,
    pub min_margin: Option<f64>,
    pub disjoint: Vec<PairMarginJson>,
    pub circle_residuals: [Option<f64>; 2],
    pub circle_pass: [bool; 2],
    pub orientation_pass: [bool; 2],
    pub fixed_point_pass: [bool; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nesting: Option<NestingJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NestingJson {
    pub depth: usize,
    pub words_per_length: Vec<usize>,
    pub points_checked: usize,
    pub point_violations: usize,
    pub disk_checks: usize,
    pub disk_violations: usize,
    pub pass: bool,
}

impl CertificateJson {
    pub fn from_certificate(c: &Certificate) -> Self {
        CertificateJson {
            tag: "certificate".into(),
            verdict: c.verdict,
            first_failure: c.first_failure().map(String::from),
            tol: c.tol,
            min_margin: finite(c.min_margin),
            disjoint: PAIR_LABELS
                .iter()
                .zip(c.disjoint_margins.iter().zip(c.disjoint_pass))
                .map(|(label, (&m, pass))| PairMarginJson {
                    pair: (*label).into(),
                    margin: finite(m),
                    pass,
                })
                .collect(),
            circle_residuals: c.circle_residuals.map(finite),
            circle_pass: c.circle_pass,
            orientation_pass: c.orientation_pass,
            fixed_point_pass: c.fixed_point_pass,
            nesting: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromyJson {
    #[serde(rename = "type")]
    pub tag: String,
    pub a: C,
    pub b: C,
    pub c: C,
    pub lambda: C,
    pub mu: C,
    pub nu: C,
    pub connection: [C; 4],
    pub gamma1: [C; 4],
    pub gamma2: [C; 4],
    pub f2: C,
    pub f2p: C,
    pub alpha: C,
    pub multiplier1: C,
    pub multiplier2: C,
}

impl MonodromyJson {
    pub fn from_monodromy(m: &Monodromy) -> Self {
        let p = &m.params;
        MonodromyJson {
            tag: "monodromy".into(),
            a: c_out(p.a),
            b: c_out(p.b),
            c: c_out(p.c),
            lambda: c_out(p.lambda()),
            mu: c_out(p.mu()),
            nu: c_out(p.nu()),
            connection: mat_out(&m.connection),
            gamma1: mat_out(&m.gamma1),
            gamma2: mat_out(&m.gamma2),
            f2: c_out(m.f2),
            f2p: c_out(m.f2p),
            alpha: c_out(m.alpha),
            multiplier1: c_out(m.multiplier1),
            multiplier2: c_out(m.multiplier2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileJson {
    pub theta0: f64,
    pub theta1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    pub samples: usize,
    pub tol: f64,
    pub margin: f64,
}

impl ProfileJson {
    pub fn from_profile(p: &LoopProfile) -> Self {
        ProfileJson {
            theta0: p.theta0,
            theta1: p.theta1,
            theta_prime: p.theta_prime,
            s: p.s,
            samples: p.samples,
            tol: p.tol,
            margin: p.margin,
        }
    }

    pub fn to_profile(&self) -> LoopProfile {
        LoopProfile {
            theta0: self.theta0,
            theta1: self.theta1,
            theta_prime: self.theta_prime,
            s: self.s,
            samples: self.samples,
            tol: self.tol,
            margin: self.margin,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditEntryJson {
    pub name: String,
    pub slack: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditJson {
    #[serde(rename = "type")]
    pub tag: String,
    pub kind: String,
    pub profile: ProfileJson,
    pub entries: Vec<AuditEntryJson>,
    pub pass: bool,
}

fn audit_entries(a: &AuditReport) -> Vec<AuditEntryJson> {
    a.entries
        .iter()
        .map(|e| AuditEntryJson {
            name: e.name.into(),
            slack: finite(e.slack),
            pass: e.pass,
        })
        .collect()
}

impl AuditJson {
    pub fn new(a: &AuditReport, profile: &LoopProfile) -> Self {
        AuditJson {
            tag: "audit".into(),
            kind: a.kind.name().into(),
            profile: ProfileJson::from_profile(profile),
            entries: audit_entries(a),
            pass: a.pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingJson {
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleJson {
    pub t: f64,
    pub a: C,
    pub b: C,
    pub c: C,
    pub phi: Option<f64>,
    pub psi: Option<f64>,
    pub alpha: C,
    pub multiplier1: C,
    pub multiplier2: C,
    /// D1, D1', D2, D2'.
    pub disks: Option<[DiskJson; 4]>,
    pub pairing: Option<PairingJson>,
    pub certified: Option<bool>,
    pub min_margin: Option<f64>,
    pub first_failure: Option<String>,
    pub conjugacy_residual: Option<f64>,
    pub error: Option<String>,
    pub pass: bool,
}

impl SampleJson {
    fn from_sample(s: &LoopSample) -> Self {
        let cert = s.certificate.as_ref();
        SampleJson {
            t: s.t,
            a: c_out(s.params.a),
            b: c_out(s.params.b),
            c: c_out(s.params.c),
            phi: s.phi_psi.map(|p| p.0),
            psi: s.phi_psi.map(|p| p.1),
            alpha: c_out(s.alpha),
            multiplier1: c_out(s.multiplier1),
            multiplier2: c_out(s.multiplier2),
            disks: s.config.as_ref().map(|c| c.disks().map(|d| DiskJson::from_disk(&d))),
            pairing: s.pairing.map(|p| match p {
                PairingMethod::Isometric => PairingJson {
                    method: "isometric".into(),
                    s: None,
                },
                PairingMethod::Concentric { s } => PairingJson {
                    method: "concentric".into(),
                    s: Some(s),
                },
            }),
            certified: cert.map(|c| c.verdict),
            min_margin: cert.and_then(|c| finite(c.min_margin)),
            first_failure: cert.and_then(|c| c.first_failure()).map(String::from),
            conjugacy_residual: s.conjugacy_residual.and_then(finite),
            error: s.error.as_ref().map(|e| e.to_string()),
            pass: s.pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckJson {
    pub name: String,
    pub value: Option<f64>,
    pub pass: bool,
}

impl CheckJson {
    fn from_check(c: &LoopCheck) -> Self {
        CheckJson {
            name: c.name.into(),
            value: finite(c.value),
            pass: c.pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopReportJson {
    #[serde(rename = "type")]
    pub tag: String,
    pub kind: String,
    pub profile: ProfileJson,
    pub audit: Vec<AuditEntryJson>,
    pub samples: Vec<SampleJson>,
    pub winding_center: C,
    pub alpha_arg_change: f64,
    pub alpha_winding: Option<i64>,
    pub expected_winding: Option<i64>,
    pub multiplier_arg_change: f64,
    pub closure_residual: Option<f64>,
    pub checks: Vec<CheckJson>,
    pub min_margin: Option<f64>,
    pub certified_samples: usize,
    pub all_certified: bool,
    pub verdict: bool,
    pub notes: Vec<String>,
    /// Smallest pairing angle for which every sample certifies, when
    /// requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smallest_certified_theta1: Option<f64>,
}

impl LoopReportJson {
    pub fn from_report(r: &LoopReport) -> Self {
        LoopReportJson {
            tag: REPORT_TYPE.into(),
            kind: r.kind.name().into(),
            profile: ProfileJson::from_profile(&r.profile),
            audit: audit_entries(&r.audit),
            samples: r.samples.iter().map(SampleJson::from_sample).collect(),
            winding_center: c_out(r.winding_center),
            alpha_arg_change: r.alpha_arg_change,
            alpha_winding: r.alpha_winding,
            expected_winding: r.expected_winding,
            multiplier_arg_change: r.multiplier_arg_change,
            closure_residual: finite(r.closure_residual),
            checks: r.checks.iter().map(CheckJson::from_check).collect(),
            min_margin: finite(r.min_margin),
            certified_samples: r.certified_samples,
            all_certified: r.all_certified,
            verdict: r.verdict,
            notes: r.notes.iter().map(|s| (*s).into()).collect(),
            smallest_certified_theta1: None,
        }
    }

    pub fn loop_kind(&self) -> Option<LoopKind> {
        LoopKind::from_name(&self.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApolloniusJson {
    #[serde(rename = "type")]
    pub tag: String,
    pub d: DiskJson,
    pub dp: DiskJson,
    /// Points of `D` and `D'` made concentric by sending `f` to infinity.
    pub f: Option<C>,
    pub fp_concentric: Option<C>,
    pub concentric_radii: (f64, f64),
    pub eta_roots: (f64, f64),
    pub roots_localized: bool,
    /// Attracting fixed point the family is built around.
    pub fp: Option<C>,
    pub modulus: f64,
    /// The circle of admissible repelling fixed points, `null` when it
    /// collapses to a point.
    pub circle: Option<DiskJson>,
    pub phase: f64,
    pub repelling: Option<C>,
    pub map: MapJson,
    pub multiplier: C,
    pub pairing_residual: f64,
}

/// Parameters of a `run` invocation; each field mirrors a command-line flag.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "type")]
    pub tag: String,
    /// `monodromy`, `certify`, `loop`, `plot`, `apollonius` or `audit`.
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bisect_theta1: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    /// Figure path; no figure is drawn when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
    /// Depth of the orbit scatter layer in configuration figures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_depth: Option<usize>,
    /// `[x, y, r]` disks of `apollonius`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dp: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fp: Option<C>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    /// Seed of the random phase of `apollonius`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use hgschottky::loops::base_point;

    #[test]
    fn config_survives_json() {
        let cfg = base_point(0.2, 6.0, 5.0).unwrap();
        let json = ConfigJson::from_config(&cfg);
        let text = serde_json::to_string(&json).unwrap();
        let back: ConfigJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, json);
        let cfg2 = back.to_config().unwrap();
        let cert = hgschottky::schottky::certify(&cfg2, hgschottky::schottky::DEFAULT_TOL).unwrap();
        assert!(cert.verdict);
        for (d, e) in cfg.disks().iter().zip(cfg2.disks()) {
            assert!(d.circle_residual(&e) < 1e-15);
        }
    }

    fn rewrite<T: Serialize + serde::de::DeserializeOwned>(text: &str) -> String {
        let v: T = serde_json::from_str(text).unwrap();
        serde_json::to_string_pretty(&v).unwrap()
    }

    #[test]
    fn run_config_roundtrip_is_byte_identical() {
        let cfg = RunConfig {
            tag: RUN_TYPE.into(),
            command: "loop".into(),
            kind: Some("alpha-around-d1".into()),
            theta0: Some(0.1 + 0.2),
            theta_prime: Some(-0.3),
            n: Some(32),
            tol: Some(1e-9),
            seed: Some(u64::MAX),
            ..Default::default()
        };
        let first = serde_json::to_string_pretty(&cfg).unwrap();
        let second = rewrite::<RunConfig>(&first);
        assert_eq!(first, second);
        assert_eq!(serde_json::from_str::<RunConfig>(&second).unwrap(), cfg);
    }

    #[test]
    fn loop_report_roundtrip_is_byte_identical() {
        let profile = LoopProfile::default_for(LoopKind::AlphaAroundD0).with_samples(16);
        let rep = hgschottky::loops::trace_loop(LoopKind::AlphaAroundD0, &profile).unwrap();
        let first = serde_json::to_string_pretty(&LoopReportJson::from_report(&rep)).unwrap();
        let second = rewrite::<LoopReportJson>(&first);
        assert_eq!(first, second);
        let back: LoopReportJson = serde_json::from_str(&second).unwrap();
        assert_eq!(back.profile.to_profile(), profile);
    }

    #[test]
    fn map_needs_one_form() {
        let m = MapJson {
            matrix: None,
            frame: None,
            factor: Some([2.0, 0.0]),
        };
        assert!(m.to_map().is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{"type":"run","command":"loop","colour":"red"}"#;
        assert!(serde_json::from_str::<RunConfig>(text).is_err());
    }

    #[test]
    fn disk_without_discriminant() {
        let d: DiskJson = serde_json::from_str(r#"{"hermitian":[1.0,[-1.0,0.0],0.75]}"#).unwrap();
        let disk = d.to_disk().unwrap();
        assert!((disk.radius().unwrap() - 0.5).abs() < 1e-15);
    }
}
