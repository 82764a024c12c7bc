//! The decision report format: inputs echoed, verdict, certificates and
//! margins, all exact, so third parties can re-verify every claim with
//! pairing arithmetic alone. `timing_ms` is the single field that varies
//! between identical runs.

use serde::{Deserialize, Serialize};

use crate::cone::{verify_margin_cert, verify_negative_cert, verify_positive_cert, NegativeCert, PositiveCert};
use crate::decide::{IntegralClass, Obstruction, ProjectivityVerdict};
use crate::model::ModelFile;
use crate::quadform::SignatureTriple;
use crate::rat::{format_rat, format_rat_vec, parse_rat, Rat, Vector};
use crate::surface::validate_model;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveCertReport {
    pub interior: Vec<String>,
    pub cut_coeffs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativeCertReport {
    pub eta: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub coefficients: Vec<String>,
    pub class: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCertReport {
    pub coefficients: Vec<String>,
    pub eta: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ns_signature: Option<(usize, usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificates: Option<Vec<CandidateCertReport>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub library_version: String,
    pub command: String,
    pub seed: u64,
    pub bound: u32,
    pub model: ModelFile,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub inner_certificate: Option<PositiveCertReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub margin_sq: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub margin_lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub obstruction: Option<ObstructionReport>,
    pub timing_ms: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn sig_tuple(sig: SignatureTriple) -> (usize, usize, usize) {
    (sig.pos, sig.zero, sig.neg)
}

/// Assembles the decision report for a verdict on a model file.
pub fn build_decide_report(
    model_file: &ModelFile,
    verdict: &ProjectivityVerdict,
    seed: u64,
    bound: u32,
    timing_ms: u64,
) -> Report {
    let mut report = Report {
        version: REPORT_VERSION,
        library_version: crate::VERSION.to_string(),
        command: "decide".to_string(),
        seed,
        bound,
        model: model_file.clone(),
        verdict: verdict.status_str().to_string(),
        reason: None,
        witness: None,
        inner_certificate: None,
        margin_sq: None,
        margin_lambda: None,
        obstruction: None,
        timing_ms,
    };
    match verdict {
        ProjectivityVerdict::Projective { witness, verdict } => {
            report.witness = Some(WitnessReport {
                coefficients: witness.coefficients.iter().map(|c| c.to_string()).collect(),
                class: format_rat_vec(&witness.class),
            });
            if let crate::cone::InnerPointVerdict::Inner { cert, margin_sq, margin_lambda } = verdict {
                report.inner_certificate = Some(PositiveCertReport {
                    interior: format_rat_vec(&cert.interior),
                    cut_coeffs: format_rat_vec(&cert.cut_coeffs),
                });
                report.margin_sq = margin_sq.as_ref().map(format_rat);
                report.margin_lambda = margin_lambda.as_ref().map(format_rat);
            }
        }
        ProjectivityVerdict::NotProjective { obstruction } => {
            report.obstruction = Some(match obstruction {
                Obstruction::NsNegativeDefinite { ns_signature } => ObstructionReport {
                    kind: obstruction.kind_str().to_string(),
                    ns_signature: Some(sig_tuple(*ns_signature)),
                    bound: None,
                    certificates: None,
                },
                Obstruction::NsNegativeSemiDefinite { ns_signature } => ObstructionReport {
                    kind: obstruction.kind_str().to_string(),
                    ns_signature: Some(sig_tuple(*ns_signature)),
                    bound: None,
                    certificates: None,
                },
                Obstruction::PerCandidateCertificates { bound, certificates } => ObstructionReport {
                    kind: obstruction.kind_str().to_string(),
                    ns_signature: None,
                    bound: Some(*bound),
                    certificates: Some(
                        certificates
                            .iter()
                            .map(|(coeffs, cert)| CandidateCertReport {
                                coefficients: coeffs.iter().map(|c| c.to_string()).collect(),
                                eta: format_rat_vec(&cert.eta),
                            })
                            .collect(),
                    ),
                },
            });
        }
        ProjectivityVerdict::Undetermined { reason } => {
            report.reason = Some(reason.clone());
        }
    }
    report
}

fn parse_vec(items: &[String]) -> Result<Vector, String> {
    items.iter().map(|s| parse_rat(s)).collect()
}

/// Re-verifies every certificate embedded in a report against the echoed
/// model, using only exact pairing arithmetic (plus one inertia check for
/// the optional margin bound). Independent of how the verdict was found.
pub fn verify_report(report: &Report) -> Result<(), String> {
    let (model, _) = report.model.to_parts().map_err(|e| e.to_string())?;
    let violations = validate_model(&model);
    if !violations.is_empty() {
        return Err(format!("echoed model is invalid: {violations:?}"));
    }
    let cone = model.cone_model().map_err(|e| e.to_string())?;

    match report.verdict.as_str() {
        "projective" => {
            let witness = report.witness.as_ref().ok_or("projective report without witness")?;
            let coeffs: Vec<num_bigint::BigInt> = witness
                .coefficients
                .iter()
                .map(|s| s.parse().map_err(|_| format!("bad coefficient {s:?}")))
                .collect::<Result<_, _>>()?;
            let class = parse_vec(&witness.class)?;
            let rebuilt = IntegralClass::new(&model, coeffs);
            if rebuilt.class != class {
                return Err("witness class does not match its coefficients".to_string());
            }
            let cert_report = report
                .inner_certificate
                .as_ref()
                .ok_or("projective report without inner certificate")?;
            let cert = PositiveCert {
                interior: parse_vec(&cert_report.interior)?,
                cut_coeffs: parse_vec(&cert_report.cut_coeffs)?,
            };
            if !verify_positive_cert(&cone, &class, &cert, true) {
                return Err("inner certificate failed exact verification".to_string());
            }
            if let (Some(m), Some(l)) = (&report.margin_sq, &report.margin_lambda) {
                let m: Rat = parse_rat(m)?;
                let l: Rat = parse_rat(l)?;
                if !verify_margin_cert(&model.space, &cert.interior, &m, &l) {
                    return Err("margin certificate failed exact verification".to_string());
                }
            }
            Ok(())
        }
        "not-projective" => {
            let obstruction = report.obstruction.as_ref().ok_or("missing obstruction")?;
            match obstruction.kind.as_str() {
                "ns-negative-definite" | "ns-negative-semidefinite" => {
                    let sig = model.ns_gram().map_err(|e| e.to_string())?.signature();
                    let claimed = obstruction.ns_signature.ok_or("missing ns signature")?;
                    if sig_tuple(sig) != claimed {
                        return Err(format!("ns signature mismatch: {sig} vs {claimed:?}"));
                    }
                    if sig.pos != 0 {
                        return Err("ns form has a positive part".to_string());
                    }
                    if obstruction.kind == "ns-negative-definite" && sig.zero != 0 {
                        return Err("ns form is not definite".to_string());
                    }
                    Ok(())
                }
                "per-candidate-certificates" => {
                    let bound = obstruction.bound.ok_or("missing enumeration bound")? as i64;
                    let certs = obstruction.certificates.as_ref().ok_or("missing certificates")?;
                    let rho = model.ns_rank();
                    let expected: usize = if rho == 0 {
                        0
                    } else {
                        (2 * bound as usize + 1)
                            .checked_pow(rho as u32)
                            .ok_or("candidate count overflows")?
                            - 1
                    };
                    if certs.len() != expected {
                        return Err(format!(
                            "expected {expected} candidate certificates, got {}",
                            certs.len()
                        ));
                    }
                    for entry in certs {
                        let coeffs: Vec<num_bigint::BigInt> = entry
                            .coefficients
                            .iter()
                            .map(|s| s.parse().map_err(|_| format!("bad coefficient {s:?}")))
                            .collect::<Result<_, _>>()?;
                        let class = IntegralClass::new(&model, coeffs).class;
                        let cert = NegativeCert { eta: parse_vec(&entry.eta)? };
                        if !verify_negative_cert(&cone, &class, &cert, false) {
                            return Err("candidate certificate failed exact verification".to_string());
                        }
                    }
                    Ok(())
                }
                other => Err(format!("unknown obstruction kind {other:?}")),
            }
        }
        "undetermined" => Ok(()),
        other => Err(format!("unknown verdict {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::SearchConfig;
    use crate::decide::decide_projectivity;
    use crate::surface::construct_k3_am;

    #[test]
    fn chain_model_report_verifies() {
        let model = construct_k3_am(2).unwrap();
        let file = ModelFile::from_parts(&model, None);
        let verdict = decide_projectivity(&model, &SearchConfig::default()).unwrap();
        let report = build_decide_report(&file, &verdict, 0, 5, 12);
        verify_report(&report).unwrap();

        // round trip through json
        let text = report.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(report, back);
        verify_report(&back).unwrap();
    }

    #[test]
    fn tampered_report_fails_verification() {
        let model = construct_k3_am(2).unwrap();
        let file = ModelFile::from_parts(&model, None);
        let verdict = decide_projectivity(&model, &SearchConfig::default()).unwrap();
        let mut report = build_decide_report(&file, &verdict, 0, 5, 12);
        if let Some(ob) = report.obstruction.as_mut() {
            ob.ns_signature = Some((1, 0, 1));
        }
        assert!(verify_report(&report).is_err());
    }
}
