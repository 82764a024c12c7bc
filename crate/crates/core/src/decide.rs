//! The projectivity decision engine.
//!
//! A model is projective exactly when the dual of its Kähler cone
//! contains an inner integral point. For K3- and torus-kind models the
//! decision is total through two exact fast paths: a Néron-Severi Gram
//! with no positive part yields a nonexistence obstruction (every
//! integral candidate is refuted by a perp-space or radical class), and a
//! positive part yields an integral witness of positive square, which is
//! always inner. General-kind models fall back to bounded enumeration of
//! integral classes and may come back undetermined.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cone::{
    inner_point_test, verify_negative_cert, ConeError, ConeModel, InnerPointVerdict, NegativeCert,
    SearchConfig,
};
use crate::linalg;
use crate::quadform::{QuadformError, SignatureTriple, Subspace};
use crate::rat::{big_vec_to_rat, rat_sign, Rat, Vector};
use crate::surface::{
    elliptic_positivity_bound, fiber_class_in_closure, validate_elliptic, validate_model,
    EllipticData, ModelViolation, SurfaceError, SurfaceKind, SurfaceModel,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecideError {
    #[error("model is invalid: {0:?}")]
    InvalidModel(Vec<ModelViolation>),
    #[error(transparent)]
    Quadform(#[from] QuadformError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("obstruction requires a Néron-Severi form with no positive part, got signature {0}")]
    ObstructionUnavailable(SignatureTriple),
    #[error("candidate class is zero")]
    ZeroCandidate,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency (library bug): {0}")]
    Internal(String),
}

/// An integral class, stored both as coefficients over the Néron-Severi
/// basis and as the embedded ambient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralClass {
    pub coefficients: Vec<BigInt>,
    pub class: Vector,
}

impl IntegralClass {
    pub fn new(model: &SurfaceModel, coefficients: Vec<BigInt>) -> Self {
        let class = model.embed_ns(&coefficients);
        Self { coefficients, class }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }
}

/// Why a model has no inner integral point.
#[derive(Debug, Clone, PartialEq)]
pub enum Obstruction {
    /// The Néron-Severi Gram matrix is negative definite.
    NsNegativeDefinite { ns_signature: SignatureTriple },
    /// The Néron-Severi Gram matrix is negative semi-definite with a
    /// nonzero radical.
    NsNegativeSemiDefinite { ns_signature: SignatureTriple },
    /// Every enumerated candidate up to the bound carries an exactly
    /// verified negative certificate. This refutes existence only within
    /// the bound and is reported distinctly from the definiteness
    /// obstructions.
    PerCandidateCertificates {
        bound: u32,
        certificates: Vec<(Vec<BigInt>, NegativeCert)>,
    },
}

impl Obstruction {
    pub fn kind_str(&self) -> &'static str {
        match self {
            Self::NsNegativeDefinite { .. } => "ns-negative-definite",
            Self::NsNegativeSemiDefinite { .. } => "ns-negative-semidefinite",
            Self::PerCandidateCertificates { .. } => "per-candidate-certificates",
        }
    }
}

/// The top-level decision.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectivityVerdict {
    Projective {
        witness: IntegralClass,
        verdict: InnerPointVerdict,
    },
    NotProjective {
        obstruction: Obstruction,
    },
    Undetermined {
        reason: String,
    },
}

impl ProjectivityVerdict {
    pub fn status_str(&self) -> &'static str {
        match self {
            Self::Projective { .. } => "projective",
            Self::NotProjective { .. } => "not-projective",
            Self::Undetermined { .. } => "undetermined",
        }
    }

    pub fn is_projective(&self) -> bool {
        matches!(self, Self::Projective { .. })
    }
}

/// Result of the bounded integral enumeration. `witness` is the first
/// exactly certified inner class in lexicographic coefficient order;
/// "all candidates refuted" and "some candidates undetermined" are
/// reported distinctly.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub witness: Option<IntegralClass>,
    pub witness_verdict: Option<InnerPointVerdict>,
    pub candidates: usize,
    pub not_inner: usize,
    pub undetermined: usize,
    pub certificates: Vec<(Vec<BigInt>, NegativeCert)>,
}

/// Enumerates Néron-Severi coefficient vectors in `[-B, B]^rho` in
/// lexicographic order and runs the inner-point test on each.
pub fn find_inner_integral_point(
    model: &SurfaceModel,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, DecideError> {
    let cone = model.cone_model()?;
    let rho = model.ns_rank();
    let bound = cfg.coefficient_bound.max(1) as i64;

    let mut outcome = SearchOutcome {
        witness: None,
        witness_verdict: None,
        candidates: 0,
        not_inner: 0,
        undetermined: 0,
        certificates: Vec::new(),
    };
    if rho == 0 {
        return Ok(outcome);
    }

    let mut coeffs = vec![-bound; rho];
    loop {
        if coeffs.iter().any(|&c| c != 0) {
            outcome.candidates += 1;
            let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
            let candidate = IntegralClass::new(model, big);
            let verdict = inner_point_test(&cone, &candidate.class, cfg)?;
            match verdict {
                InnerPointVerdict::Inner { .. } => {
                    outcome.witness = Some(candidate);
                    outcome.witness_verdict = Some(verdict);
                    return Ok(outcome);
                }
                InnerPointVerdict::NotInner { ref cert } => {
                    outcome.not_inner += 1;
                    outcome.certificates.push((candidate.coefficients.clone(), cert.clone()));
                }
                InnerPointVerdict::Undetermined { .. } => outcome.undetermined += 1,
            }
        }
        // lexicographic odometer, least significant digit last
        let mut i = rho;
        loop {
            if i == 0 {
                return Ok(outcome);
            }
            i -= 1;
            if coeffs[i] < bound {
                coeffs[i] += 1;
                for c in coeffs.iter_mut().skip(i + 1) {
                    *c = -bound;
                }
                break;
            }
        }
    }
}

/// Decides the criterion.
///
/// K3- and torus-kind models resolve through exact fast paths keyed to
/// the Néron-Severi signature and never come back undetermined.
/// General-kind models run only the certificate machinery (bounded
/// enumeration), so a missing witness within the bound is conclusive
/// only when every candidate was refuted.
pub fn decide_projectivity(
    model: &SurfaceModel,
    cfg: &SearchConfig,
) -> Result<ProjectivityVerdict, DecideError> {
    let violations = validate_model(model);
    if !violations.is_empty() {
        return Err(DecideError::InvalidModel(violations));
    }

    match model.kind {
        SurfaceKind::K3 | SurfaceKind::Torus => {
            let ns = model.ns_gram()?;
            let sig = ns.signature();
            if sig.pos == 0 {
                let obstruction = if sig.zero == 0 {
                    Obstruction::NsNegativeDefinite { ns_signature: sig }
                } else {
                    Obstruction::NsNegativeSemiDefinite { ns_signature: sig }
                };
                return Ok(ProjectivityVerdict::NotProjective { obstruction });
            }
            // positive part: scale a positive-square combination to an
            // integral forward class; such a class is always inner
            let combo = ns
                .find_positive_vector()
                .ok_or_else(|| DecideError::Internal("positive part without positive vector".into()))?;
            let witness = integral_forward_witness(model, &combo)?;
            let cone = model.cone_model()?;
            let verdict = inner_point_test(&cone, &witness.class, cfg)?;
            if !verdict.is_inner() {
                return Err(DecideError::Internal(
                    "forward positive-square witness not certified inner".into(),
                ));
            }
            Ok(ProjectivityVerdict::Projective { witness, verdict })
        }
        SurfaceKind::General => {
            let outcome = find_inner_integral_point(model, cfg)?;
            if let (Some(witness), Some(verdict)) = (outcome.witness, outcome.witness_verdict) {
                return Ok(ProjectivityVerdict::Projective { witness, verdict });
            }
            if outcome.undetermined == 0 {
                return Ok(ProjectivityVerdict::NotProjective {
                    obstruction: Obstruction::PerCandidateCertificates {
                        bound: cfg.coefficient_bound,
                        certificates: outcome.certificates,
                    },
                });
            }
            Ok(ProjectivityVerdict::Undetermined {
                reason: format!(
                    "{} of {} candidates undetermined at bound {}",
                    outcome.undetermined, outcome.candidates, cfg.coefficient_bound
                ),
            })
        }
    }
}

/// Clears denominators of a rational Néron-Severi combination and
/// orients it forward.
fn integral_forward_witness(
    model: &SurfaceModel,
    combo: &[Rat],
) -> Result<IntegralClass, DecideError> {
    let mut den_lcm = BigInt::one();
    for c in combo {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut coefficients: Vec<BigInt> = combo
        .iter()
        .map(|c| c.numer() * (&den_lcm / c.denom()))
        .collect();
    let mut witness = IntegralClass::new(model, coefficients.clone());
    let wk = model.space.pairing(&witness.class, &model.kappa_ref)?;
    if rat_sign(&wk) == -1 {
        coefficients = coefficients.iter().map(|c| -c).collect();
        witness = IntegralClass::new(model, coefficients);
    }
    Ok(witness)
}

/// Builds nonexistence obstructions for models whose Néron-Severi form
/// has no positive part, caching the per-model subspace work so bulk
/// candidate sweeps stay cheap.
pub struct ObstructionEngine<'a> {
    model: &'a SurfaceModel,
    cone: ConeModel,
    curve_classes: Vec<Vector>,
    ns_signature: SignatureTriple,
    /// Radical class of a semi-definite Néron-Severi form: orthogonal to
    /// the whole sublattice, hence a universal annihilator.
    radical_eta: Option<Vector>,
    /// Forward positive-square class of the perp of all curves, reused
    /// for every candidate inside the curve span.
    curve_span_eta: Option<Vector>,
}

impl<'a> ObstructionEngine<'a> {
    pub fn new(model: &'a SurfaceModel) -> Result<Self, DecideError> {
        let cone = model.cone_model()?;
        let ns = model.ns_gram()?;
        let ns_signature = ns.signature();
        if ns_signature.pos != 0 {
            return Err(DecideError::ObstructionUnavailable(ns_signature));
        }
        let curve_classes: Vec<Vector> = model.curves.iter().map(|c| c.class_rat()).collect();

        let radical_eta = if ns_signature.zero > 0 {
            let coeffs = ns
                .radical_vector()
                .ok_or_else(|| DecideError::Internal("zero count without radical vector".into()))?;
            let ns_rat: Vec<Vector> = model.ns_basis.iter().map(|b| big_vec_to_rat(b)).collect();
            let sub = Subspace::new(model.dim(), ns_rat)?;
            Some(orient(model, sub.embed(&coeffs)))
        } else {
            None
        };

        let curve_span_eta = if radical_eta.is_none() && !curve_classes.is_empty() {
            let perp = model.space.orthogonal_complement(&curve_classes)?;
            let restricted = model.space.restrict_form(&perp)?;
            let w = restricted.find_positive_vector().ok_or_else(|| {
                DecideError::Internal("curve perp of a definite span lost its positive part".into())
            })?;
            Some(orient(model, perp.embed(&w)))
        } else {
            None
        };

        Ok(Self { model, cone, curve_classes, ns_signature, radical_eta, curve_span_eta })
    }

    pub fn ns_signature(&self) -> SignatureTriple {
        self.ns_signature
    }

    /// A nonzero closure class `eta` with `(x.eta) = 0`, refuting
    /// inner-ness of the candidate. The split between "candidate inside
    /// the curve span" (perp of the curves alone) and "outside" (perp of
    /// candidate and curves) mirrors the two signature counts
    /// `(1, n-1-m)` and `(1, n-1-m-1)`.
    pub fn obstruction(&self, x: &IntegralClass) -> Result<NegativeCert, DecideError> {
        if x.is_zero() {
            return Err(DecideError::ZeroCandidate);
        }
        let eta = if let Some(eta) = &self.radical_eta {
            eta.clone()
        } else if !self.curve_classes.is_empty() && linalg::in_span(&self.curve_classes, &x.class) {
            self.curve_span_eta
                .clone()
                .ok_or_else(|| DecideError::Internal("missing cached curve-span class".into()))?
        } else {
            let mut constraints = vec![x.class.clone()];
            constraints.extend(self.curve_classes.iter().cloned());
            let perp = self.model.space.orthogonal_complement(&constraints)?;
            let restricted = self.model.space.restrict_form(&perp)?;
            let w = restricted.find_positive_vector().ok_or_else(|| {
                DecideError::Internal("candidate perp lost its positive part".into())
            })?;
            orient(self.model, perp.embed(&w))
        };
        let cert = NegativeCert { eta };
        if !verify_negative_cert(&self.cone, &x.class, &cert, false) {
            return Err(DecideError::Internal("obstruction failed exact re-verification".into()));
        }
        let pairing = self.model.space.pairing(&x.class, &cert.eta)?;
        if !pairing.is_zero() {
            return Err(DecideError::Internal("obstruction does not annihilate the candidate".into()));
        }
        Ok(cert)
    }
}

fn orient(model: &SurfaceModel, eta: Vector) -> Vector {
    if rat_sign(&model.space.pair_unchecked(&eta, &model.kappa_ref)) >= 0 {
        eta
    } else {
        crate::rat::vec_neg(&eta)
    }
}

/// One-shot obstruction for a single candidate; bulk sweeps should use
/// [`ObstructionEngine`] directly.
pub fn perp_obstruction(model: &SurfaceModel, x: &IntegralClass) -> Result<NegativeCert, DecideError> {
    ObstructionEngine::new(model)?.obstruction(x)
}

/// Cross-check of the dual-cone decision against the Néron-Severi
/// positivity oracle: projective exactly when the Néron-Severi form has
/// a positive part.
#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub verdict: ProjectivityVerdict,
    pub oracle_projective: bool,
    pub agrees: bool,
}

pub fn cross_validate(model: &SurfaceModel, cfg: &SearchConfig) -> Result<CrossValidation, DecideError> {
    if model.kind == SurfaceKind::General {
        return Err(DecideError::Precondition(
            "cross-validation is defined for k3 and torus kinds".to_string(),
        ));
    }
    let verdict = decide_projectivity(model, cfg)?;
    let oracle_projective = model.ns_gram()?.signature().pos >= 1;
    let agrees = match &verdict {
        ProjectivityVerdict::Projective { .. } => oracle_projective,
        ProjectivityVerdict::NotProjective { .. } => !oracle_projective,
        ProjectivityVerdict::Undetermined { .. } => false,
    };
    Ok(CrossValidation { verdict, oracle_projective, agrees })
}

/// Report of the fiber-class consistency check on elliptic data.
#[derive(Debug, Clone)]
pub struct EllipticReport {
    pub inner_status: &'static str,
    /// `(M.F)`, exact.
    pub fiber_pairing: Rat,
    /// Set when an inner verdict coexists with `(M.F) <= 0`, which the
    /// margin inequality forbids; indicates inconsistent input data or a
    /// library bug.
    pub contradiction: bool,
    pub bound: Option<BigInt>,
    pub boosted_class: Option<Vec<BigInt>>,
    pub boosted_square: Option<Rat>,
}

/// Checks the elliptic consistency story on `(M, F)`: if `M` is inner
/// then `(M.F) > 0`, and `M + nF` has positive square for the exact
/// minimal `n`, exhibiting an integral class of positive square.
pub fn elliptic_consistency_check(
    model: &SurfaceModel,
    data: &EllipticData,
    cfg: &SearchConfig,
) -> Result<EllipticReport, DecideError> {
    let violations = validate_elliptic(model, data);
    if !violations.is_empty() {
        return Err(DecideError::InvalidModel(violations));
    }
    let f = big_vec_to_rat(&data.fiber);
    if !fiber_class_in_closure(model, &f)? {
        return Err(DecideError::Precondition(
            "fiber class is not in the cone closure with positive marker pairing".to_string(),
        ));
    }
    let m_vec = big_vec_to_rat(&data.m_class);
    let cone = model.cone_model()?;
    let verdict = inner_point_test(&cone, &m_vec, cfg)?;
    let fiber_pairing = model.space.pairing(&m_vec, &f)?;

    let mut report = EllipticReport {
        inner_status: verdict.status_str(),
        fiber_pairing: fiber_pairing.clone(),
        contradiction: false,
        bound: None,
        boosted_class: None,
        boosted_square: None,
    };
    if !verdict.is_inner() {
        return Ok(report);
    }
    if !fiber_pairing.is_positive() {
        report.contradiction = true;
        return Ok(report);
    }
    let m_sq = model.space.pairing(&m_vec, &m_vec)?;
    let n = elliptic_positivity_bound(&m_sq, &fiber_pairing)?;
    let boosted: Vec<BigInt> = data
        .m_class
        .iter()
        .zip(&data.fiber)
        .map(|(mi, fi)| mi + &n * fi)
        .collect();
    let boosted_rat = big_vec_to_rat(&boosted);
    let boosted_square = model.space.pairing(&boosted_rat, &boosted_rat)?;
    if !boosted_square.is_positive() {
        return Err(DecideError::Internal("boosted class square not positive".into()));
    }
    report.boosted_square = Some(boosted_square);
    report.bound = Some(n);
    report.boosted_class = Some(boosted);
    Ok(report)
}
