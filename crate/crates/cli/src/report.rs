use qei_core::comparison::{ComparisonCertificate, SourceCase};
use qei_core::func::{CheckOutcome, HypothesisCheck};
use qei_core::ko::{Classification, KoReport, NearEndpoint};
use qei_core::radial::{BlowupResult, BlowupStatus};
use qei_core::verdict::{Candidate, Conclusion, Verdict};
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize)]
pub struct SegmentJson {
    pub k: u32,
    pub sum: f64,
    pub running_total: f64,
}

#[derive(Serialize)]
pub struct KoJson {
    pub schema_version: &'static str,
    pub classification: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_exponent: Option<f64>,
    pub near_endpoint: String,
    pub segments: Vec<SegmentJson>,
}

pub fn ko_json(r: &KoReport) -> KoJson {
    let (classification, value, error_estimate, tail_exponent) = match &r.classification {
        Classification::Converges {
            value,
            error_estimate,
        } => ("converges", Some(*value), Some(*error_estimate), None),
        Classification::Diverges {
            tail_exponent_estimate,
        } => ("diverges", None, None, Some(*tail_exponent_estimate)),
        Classification::Inconclusive => ("inconclusive", None, None, None),
    };
    let near_endpoint = match &r.near_endpoint {
        NearEndpoint::Included { value, error } => {
            format!("included (value {value}, error {error})")
        }
        NearEndpoint::ExcludedDivergent { partial } => {
            format!("excluded divergent (partial {partial})")
        }
    };
    KoJson {
        schema_version: SCHEMA_VERSION,
        classification,
        value,
        error_estimate,
        tail_exponent,
        near_endpoint,
        segments: r
            .segments
            .iter()
            .map(|s| SegmentJson {
                k: s.k,
                sum: s.sum,
                running_total: s.running_total,
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct BlowupJson {
    pub schema_version: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub steps_taken: usize,
}

pub fn blowup_json(r: &BlowupResult) -> BlowupJson {
    let mut j = BlowupJson {
        schema_version: SCHEMA_VERSION,
        status: "",
        radius: None,
        radius_error: None,
        r_end: None,
        r_star: None,
        phi_end: None,
        reason: None,
        steps_taken: r.steps_taken,
    };
    match &r.status {
        BlowupStatus::FiniteBlowup {
            radius,
            radius_error,
        } => {
            j.status = "finite_blowup";
            j.radius = Some(*radius);
            j.radius_error = Some(*radius_error);
        }
        BlowupStatus::GlobalExistence { r_end, phi_end } => {
            j.status = "global_existence";
            j.r_end = Some(*r_end);
            j.phi_end = Some(*phi_end);
        }
        BlowupStatus::GradientBlowup { r_star, phi_end } => {
            j.status = "gradient_blowup";
            j.r_star = Some(*r_star);
            j.phi_end = Some(*phi_end);
        }
        BlowupStatus::Inconclusive { reason } => {
            j.status = "inconclusive";
            j.reason = Some(reason.clone());
        }
    }
    j
}

#[derive(Serialize)]
pub struct CheckJson {
    pub id: String,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<f64>,
}

pub fn check_json(c: &HypothesisCheck) -> CheckJson {
    let (outcome, witness) = match c.outcome {
        CheckOutcome::Pass => ("pass", None),
        CheckOutcome::Fail { witness } => ("fail", Some(witness)),
        CheckOutcome::Inconclusive => ("inconclusive", None),
    };
    CheckJson {
        id: c.id.clone(),
        outcome,
        witness,
    }
}

#[derive(Serialize)]
pub struct ConclusionJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    pub text: String,
}

pub fn conclusion_json(c: &Conclusion) -> ConclusionJson {
    let (kind, lo, hi) = match c {
        Conclusion::NoSolutions => ("no_solutions", None, None),
        Conclusion::ZeroOnly => ("zero_only", None, None),
        Conclusion::ConstantOnly { lo, hi } => ("constant_only", Some(*lo), Some(*hi)),
        Conclusion::BoundedIn { lo, hi } => ("bounded_in", Some(*lo), Some(*hi)),
        Conclusion::NonnegativeAndPositiveOrZero => {
            ("nonnegative_and_positive_or_zero", None, None)
        }
        Conclusion::Nonnegative => ("nonnegative", None, None),
        Conclusion::NoConclusion => ("no_conclusion", None, None),
    };
    ConclusionJson {
        kind,
        lo,
        hi,
        text: format!("{c}"),
    }
}

#[derive(Serialize)]
pub struct CandidateJson {
    pub theorem: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub licensed: Option<ConclusionJson>,
    pub checks: Vec<CheckJson>,
    pub integrals: Vec<KoJson>,
    pub notes: Vec<String>,
}

pub fn candidate_json(c: &Candidate) -> CandidateJson {
    CandidateJson {
        theorem: c.theorem.clone(),
        licensed: c.licensed.as_ref().map(conclusion_json),
        checks: c.checks.iter().map(check_json).collect(),
        integrals: c.ko.iter().map(ko_json).collect(),
        notes: c.notes.clone(),
    }
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub schema_version: &'static str,
    pub conclusion: ConclusionJson,
    pub sampled: bool,
    pub notes: Vec<String>,
    pub justification: Vec<CandidateJson>,
}

pub fn verdict_json(v: &Verdict) -> VerdictJson {
    VerdictJson {
        schema_version: SCHEMA_VERSION,
        conclusion: conclusion_json(&v.conclusion),
        sampled: v.sampled,
        notes: v.notes.clone(),
        justification: v.justification.iter().map(candidate_json).collect(),
    }
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub schema_version: &'static str,
    pub case: &'static str,
    pub checks: Vec<CheckJson>,
    pub conclusion_holds: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<(usize, f64)>,
    pub epsilon: f64,
    pub residual_tol: f64,
    pub sampled: bool,
}

pub fn certificate_json(c: &ComparisonCertificate) -> CertificateJson {
    CertificateJson {
        schema_version: SCHEMA_VERSION,
        case: match c.case {
            SourceCase::Unrestricted => "unrestricted",
            SourceCase::NonnegativeOnly => "nonnegative_only",
        },
        checks: c.hypothesis_checks.iter().map(check_json).collect(),
        conclusion_holds: c.conclusion_holds,
        passed: c.passed(),
        first_violation: c.first_violation,
        epsilon: c.epsilon,
        residual_tol: c.residual_tol,
        sampled: c.sampled,
    }
}

/// CSV with shortest round-trip float formatting, for stable golden
/// files.
pub fn csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn csv_mixed(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
