//! Kähler-cone models over Lorentzian quadratic spaces and the certified
//! inner-point test.
//!
//! A cone model is the forward component of `{x : (x.x) > 0}` in a space
//! of signature `(1, n-1)`, optionally cut by half-spaces `(x.c_i) > 0`
//! attached to curve classes. Membership in the dual cone and inner-point
//! verdicts are decided through rational certificates:
//!
//! * a positive certificate is a decomposition `x = y + sum a_i c_i` with
//!   `a_i >= 0`, `(y.y) > 0`, `(y.kappa) > 0`, which forces `(x.eta) > 0`
//!   for every nonzero `eta` in the cone closure by the reverse
//!   Cauchy-Schwarz inequality of Lorentzian forms;
//! * a negative certificate is a nonzero `eta` in the cone closure with
//!   `(x.eta) <= 0`, which rules out any uniform positive margin.
//!
//! Searches may use floating point to propose candidates, but every
//! certificate is re-verified in exact arithmetic before it becomes a
//! verdict. When neither certificate is found within budget the test
//! returns `Undetermined` rather than guess.

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg;
use crate::quadform::{QuadformError, QuadraticSpace, SignatureTriple};
use crate::rat::{
    self, big_vec_to_rat, cf_convergents, euclidean_norm_sq, is_zero_vec, primitive_integer_form,
    rat, rat_sign, rat_to_f64, rational_sqrt_lower, vec_add, vec_scale, vec_sub, Rat, Vector,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error(transparent)]
    Quadform(#[from] QuadformError),
    #[error("space is not Lorentzian: signature {0}")]
    NotLorentzian(SignatureTriple),
    #[error("marker class has non-positive square")]
    MarkerNotPositive,
    #[error("cut {index} is the zero vector")]
    CutZero { index: usize },
    #[error("cut {index} does not pair positively with the marker class")]
    CutNotPositiveOnMarker { index: usize },
    #[error("polyhedral cone has no nonzero generator")]
    NoGenerators,
}

/// Budget and reproducibility knobs shared by the searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Coefficient bound for integral enumeration, `>= 1`.
    pub coefficient_bound: u32,
    /// Largest cut-subset size tried in the perp search.
    pub subset_cap: usize,
    /// Iteration budget for numeric candidate proposal.
    pub numeric_budget: usize,
    /// Seed for every randomized component.
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { coefficient_bound: 5, subset_cap: 12, numeric_budget: 256, seed: 0 }
    }
}

/// The connected component of `{x : (x.x) > 0}` marked by a class of
/// positive square. In signature `(1, n-1)` the pairing with the marker
/// never vanishes on `{(x.x) > 0}`, so its sign splits the two
/// components.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveConeComponent {
    space: QuadraticSpace,
    kappa_ref: Vector,
}

impl PositiveConeComponent {
    pub fn new(space: QuadraticSpace, kappa_ref: Vector) -> Result<Self, ConeError> {
        space.check_dim(&kappa_ref)?;
        let sig = space.signature();
        if !sig.is_lorentzian() {
            return Err(ConeError::NotLorentzian(sig));
        }
        if rat_sign(&space.pairing(&kappa_ref, &kappa_ref)?) != 1 {
            return Err(ConeError::MarkerNotPositive);
        }
        Ok(Self { space, kappa_ref })
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn kappa_ref(&self) -> &Vector {
        &self.kappa_ref
    }

    /// `(x.x) > 0` and `(x.kappa) > 0`: the open forward component.
    pub fn in_positive_component(&self, x: &[Rat]) -> Result<bool, ConeError> {
        self.space.check_dim(x)?;
        Ok(rat_sign(&self.space.pair_unchecked(x, x)) == 1
            && rat_sign(&self.space.pair_unchecked(x, &self.kappa_ref)) == 1)
    }

    /// `(x.x) >= 0` and `(x.kappa) >= 0`: the closed forward cone.
    pub fn in_closure_positive(&self, x: &[Rat]) -> Result<bool, ConeError> {
        self.space.check_dim(x)?;
        Ok(rat_sign(&self.space.pair_unchecked(x, x)) >= 0
            && rat_sign(&self.space.pair_unchecked(x, &self.kappa_ref)) >= 0)
    }
}

/// Closure of a Kähler-cone model: the forward component cut by the
/// half-spaces of finitely many curve classes. Torus-shaped models have
/// no cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeModel {
    component: PositiveConeComponent,
    cuts: Vec<Vector>,
}

impl ConeModel {
    /// The marker class must satisfy every cut strictly, so the open cone
    /// is nonempty and the closed cone really is the closure.
    pub fn new(component: PositiveConeComponent, cuts: Vec<Vector>) -> Result<Self, ConeError> {
        for (i, c) in cuts.iter().enumerate() {
            component.space.check_dim(c)?;
            if is_zero_vec(c) {
                return Err(ConeError::CutZero { index: i });
            }
            if rat_sign(&component.space.pair_unchecked(component.kappa_ref(), c)) != 1 {
                return Err(ConeError::CutNotPositiveOnMarker { index: i });
            }
        }
        Ok(Self { component, cuts })
    }

    pub fn component(&self) -> &PositiveConeComponent {
        &self.component
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.component.space
    }

    pub fn kappa_ref(&self) -> &Vector {
        &self.component.kappa_ref
    }

    pub fn cuts(&self) -> &[Vector] {
        &self.cuts
    }

    /// Open-cone membership: forward component plus strict cut pairings.
    pub fn kahler_membership(&self, x: &[Rat]) -> Result<bool, ConeError> {
        if !self.component.in_positive_component(x)? {
            return Ok(false);
        }
        Ok(self
            .cuts
            .iter()
            .all(|c| rat_sign(&self.space().pair_unchecked(x, c)) == 1))
    }

    /// Closed-cone membership: closed forward cone plus non-strict cut
    /// pairings. The open cone is nonempty, so this set is its closure.
    pub fn closure_membership(&self, x: &[Rat]) -> Result<bool, ConeError> {
        if !self.component.in_closure_positive(x)? {
            return Ok(false);
        }
        Ok(self
            .cuts
            .iter()
            .all(|c| rat_sign(&self.space().pair_unchecked(x, c)) >= 0))
    }
}

/// Decomposition `x = y + sum a_i c_i` witnessing dual positivity.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveCert {
    /// The forward-cone part `y`.
    pub interior: Vector,
    /// Nonnegative coefficients over the model cuts, one per cut.
    pub cut_coeffs: Vec<Rat>,
}

/// A nonzero class of the cone closure pairing non-positively with the
/// candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct NegativeCert {
    pub eta: Vector,
}

/// Outcome of the inner-point test. `Inner` and `NotInner` both carry
/// exactly re-verifiable certificates; `Undetermined` is the honest
/// fallback when the budget runs out with cuts present.
#[derive(Debug, Clone, PartialEq)]
pub enum InnerPointVerdict {
    Inner {
        cert: PositiveCert,
        /// Certified lower bound on the squared uniform margin, when the
        /// margin search produced one.
        margin_sq: Option<Rat>,
        /// Multiplier certifying `margin_sq`; see [`verify_margin_cert`].
        margin_lambda: Option<Rat>,
    },
    NotInner {
        cert: NegativeCert,
    },
    Undetermined {
        reason: String,
    },
}

impl InnerPointVerdict {
    pub fn is_inner(&self) -> bool {
        matches!(self, Self::Inner { .. })
    }

    pub fn is_not_inner(&self) -> bool {
        matches!(self, Self::NotInner { .. })
    }

    pub fn status_str(&self) -> &'static str {
        match self {
            Self::Inner { .. } => "inner",
            Self::NotInner { .. } => "not-inner",
            Self::Undetermined { .. } => "undetermined",
        }
    }

    pub fn margin_sq(&self) -> Option<&Rat> {
        match self {
            Self::Inner { margin_sq, .. } => margin_sq.as_ref(),
            _ => None,
        }
    }
}

/// Membership verdict for the closed dual cone.
#[derive(Debug, Clone, PartialEq)]
pub enum DualMembership {
    /// `(x.eta) >= 0` for every `eta` in the cone closure, certified by a
    /// decomposition with non-strict forward part.
    Member { cert: PositiveCert },
    /// A closure class pairing strictly negatively with `x`.
    NotMember { witness: NegativeCert },
    Undetermined,
}

impl DualMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, Self::Member { .. })
    }
}

/// Checks a positive certificate by pairing arithmetic alone.
/// `strict` demands `(y.y) > 0, (y.kappa) > 0` (inner point); otherwise
/// the closed versions (dual membership).
pub fn verify_positive_cert(
    model: &ConeModel,
    x: &[Rat],
    cert: &PositiveCert,
    strict: bool,
) -> bool {
    let space = model.space();
    if space.check_dim(x).is_err()
        || space.check_dim(&cert.interior).is_err()
        || cert.cut_coeffs.len() != model.cuts().len()
    {
        return false;
    }
    if cert.cut_coeffs.iter().any(|a| a.is_negative()) {
        return false;
    }
    let mut recomposed = cert.interior.clone();
    for (a, c) in cert.cut_coeffs.iter().zip(model.cuts()) {
        recomposed = vec_add(&recomposed, &vec_scale(a, c));
    }
    if recomposed != x {
        return false;
    }
    let y = &cert.interior;
    let ysq = space.pair_unchecked(y, y);
    let yk = space.pair_unchecked(y, model.kappa_ref());
    if strict {
        rat_sign(&ysq) == 1 && rat_sign(&yk) == 1
    } else {
        rat_sign(&ysq) >= 0 && rat_sign(&yk) >= 0
    }
}

/// Checks a negative certificate: `eta` nonzero, in the cone closure,
/// with `(x.eta) <= 0` (`< 0` when `strict`).
pub fn verify_negative_cert(
    model: &ConeModel,
    x: &[Rat],
    cert: &NegativeCert,
    strict: bool,
) -> bool {
    if model.space().check_dim(&cert.eta).is_err() || is_zero_vec(&cert.eta) {
        return false;
    }
    if !model.closure_membership(&cert.eta).unwrap_or(false) {
        return false;
    }
    match model.space().pairing(x, &cert.eta) {
        Ok(p) => {
            if strict {
                rat_sign(&p) == -1
            } else {
                rat_sign(&p) <= 0
            }
        }
        Err(_) => false,
    }
}

/// Checks a margin certificate: `m > 0`, `lambda >= 0` and
/// `v v^T - m I - lambda G` positive semidefinite for `v = G y`. For any
/// `eta` with `(eta.eta) >= 0` this gives `(y.eta)^2 >= m |eta|^2`.
pub fn verify_margin_cert(space: &QuadraticSpace, y: &[Rat], m: &Rat, lambda: &Rat) -> bool {
    if space.check_dim(y).is_err() || !m.is_positive() || lambda.is_negative() {
        return false;
    }
    let mat = margin_matrix(space, y, m, lambda);
    is_psd(&mat)
}

fn margin_matrix(space: &QuadraticSpace, y: &[Rat], m: &Rat, lambda: &Rat) -> Vec<Vector> {
    let n = space.dim();
    let v = linalg::mat_vec(space.gram(), y);
    let mut out = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut e = &v[i] * &v[j] - lambda * &space.gram()[i][j];
            if i == j {
                e -= m.clone();
            }
            out[i][j] = e;
        }
    }
    out
}

fn is_psd(mat: &[Vector]) -> bool {
    let space = QuadraticSpace::new_degenerate_allowed(mat.to_vec())
        .expect("margin matrix is symmetric by construction");
    space.signature().neg == 0
}

/// Certified lower bound on the squared uniform margin of a forward-cone
/// class `y` against the closed forward cone: returns `(m, lambda)` with
/// `(y.eta)^2 >= m |eta|^2` for all `eta` with `(eta.eta) >= 0`, verified
/// exactly. Floating point only proposes `(m, lambda)`; candidates are
/// rationalized by continued fractions and checked by inertia. The bound
/// scales exactly with `y`: `y -> t y` maps `(m, lambda) -> (t^2 m,
/// t^2 lambda)`.
pub fn certified_margin_sq(space: &QuadraticSpace, y: &[Rat]) -> Option<(Rat, Rat)> {
    let n = space.dim();
    if n == 0 {
        return None;
    }
    let (scale, y0) = primitive_integer_form(y)?;
    let y0 = big_vec_to_rat(&y0);
    let v = linalg::mat_vec(space.gram(), &y0);

    let gf = DMatrix::from_fn(n, n, |i, j| rat_to_f64(&space.gram()[i][j]));
    let vf: Vec<f64> = v.iter().map(rat_to_f64).collect();
    let eig_min = |lam: f64| -> f64 {
        let m = DMatrix::from_fn(n, n, |i, j| vf[i] * vf[j] - lam * gf[(i, j)]);
        m.symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };

    // Bracket then ternary-search the concave lambda -> eig_min curve.
    let mut hi = 1.0f64;
    for _ in 0..60 {
        if eig_min(hi) < eig_min(hi / 2.0) && eig_min(hi) < 0.0 {
            break;
        }
        hi *= 2.0;
    }
    let (mut a, mut b) = (0.0f64, hi);
    for _ in 0..90 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if eig_min(m1) < eig_min(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    let lambda_hat = (a + b) / 2.0;

    let psd_at = |m: &Rat, lam: &Rat| -> bool {
        !m.is_negative() && !lam.is_negative() && is_psd(&margin_matrix(space, &y0, m, lam))
    };

    let mut lambda_cands: Vec<Rat> = cf_convergents(lambda_hat, 1_000_000)
        .into_iter()
        .filter(|l| !l.is_negative())
        .collect();
    lambda_cands.reverse(); // most accurate first

    for lam in &lambda_cands {
        let m_hat = eig_min(rat_to_f64(lam));
        if m_hat <= 0.0 {
            continue;
        }
        let mut m_cands: Vec<Rat> = cf_convergents(m_hat, 1_000_000)
            .into_iter()
            .filter(|m| m.is_positive())
            .collect();
        m_cands.reverse();
        for k in [6u32, 4, 2, 1] {
            let damped = m_hat * (1.0 - (0.5f64).powi(k as i32));
            if let Some(r) = cf_convergents(damped, 1_000_000).pop() {
                if r.is_positive() {
                    m_cands.push(r);
                }
            }
        }
        let mut lo: Option<Rat> = None;
        for m in &m_cands {
            if psd_at(m, lam) {
                lo = Some(m.clone());
                break;
            }
        }
        let Some(mut lo) = lo else { continue };
        // Push the certified bound up a little; only exactly tested
        // values are ever kept.
        let mut hi = &lo * rat(2, 1);
        if psd_at(&hi, lam) {
            lo = hi.clone();
        } else {
            for _ in 0..6 {
                let mid = (&lo + &hi) / rat(2, 1);
                if psd_at(&mid, lam) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let s2 = &scale * &scale;
        return Some((&s2 * &lo, &s2 * lam));
    }
    None
}

/// The inner-point test.
///
/// With no cuts the test is exact and total: `x` is inner precisely when
/// it lies in the open forward component, and otherwise an explicit
/// closure class with `(x.eta) <= 0` exists. With cuts, a decomposition
/// search (exact coordinate ascent over the cut coefficients) tries for a
/// positive certificate, a perp-subspace search in the style of the
/// nonexistence construction tries for a negative one, and a numeric
/// proposer backs both up; failing everything the verdict is
/// `Undetermined`, never a guess.
pub fn inner_point_test(
    model: &ConeModel,
    x: &[Rat],
    cfg: &SearchConfig,
) -> Result<InnerPointVerdict, ConeError> {
    let space = model.space();
    space.check_dim(x)?;

    // x = 0 is never inner: kappa itself witnesses it.
    if is_zero_vec(x) {
        return Ok(not_inner(model.kappa_ref().clone()));
    }

    // Positive fast path: x already in the open forward component.
    if model.component.in_positive_component(x)? {
        return Ok(inner_with_margin(model, PositiveCert {
            interior: x.to_vec(),
            cut_coeffs: vec![Rat::zero(); model.cuts().len()],
        }));
    }

    if model.cuts().is_empty() {
        let eta = closed_cone_annihilator(&model.component, x)?;
        return Ok(not_inner(eta));
    }

    if let Some(eta) = direct_negative_candidates(model, x) {
        return Ok(not_inner(eta));
    }
    if let Some(eta) = perp_negative_search(model, x, cfg)? {
        return Ok(not_inner(eta));
    }
    if let Some(cert) = coordinate_ascent_decomposition(model, x, cfg) {
        return Ok(inner_with_margin(model, cert));
    }
    if let Some(eta) = numeric_negative_search(model, x, cfg) {
        return Ok(not_inner(eta));
    }
    Ok(InnerPointVerdict::Undetermined {
        reason: "no certificate found within budget".to_string(),
    })
}

fn inner_with_margin(model: &ConeModel, cert: PositiveCert) -> InnerPointVerdict {
    debug_assert!(verify_positive_cert(model, &recompose(model, &cert), &cert, true));
    let margin = certified_margin_sq(model.space(), &cert.interior);
    let (margin_sq, margin_lambda) = match margin {
        Some((m, l)) => (Some(m), Some(l)),
        None => (None, None),
    };
    InnerPointVerdict::Inner { cert, margin_sq, margin_lambda }
}

fn recompose(model: &ConeModel, cert: &PositiveCert) -> Vector {
    let mut out = cert.interior.clone();
    for (a, c) in cert.cut_coeffs.iter().zip(model.cuts()) {
        out = vec_add(&out, &vec_scale(a, c));
    }
    out
}

fn not_inner(eta: Vector) -> InnerPointVerdict {
    InnerPointVerdict::NotInner { cert: NegativeCert { eta } }
}

/// For `x` outside the open forward component of a cut-free model, a
/// nonzero closed-cone class with `(x.eta) <= 0`:
/// backward classes are handled by the marker, isotropic ones by
/// themselves, and `(x.x) < 0` by a positive-square vector of the perp.
fn closed_cone_annihilator(
    pc: &PositiveConeComponent,
    x: &[Rat],
) -> Result<Vector, ConeError> {
    let space = &pc.space;
    let xsq = space.pair_unchecked(x, x);
    let xk = space.pair_unchecked(x, &pc.kappa_ref);
    match rat_sign(&xsq) {
        1 => {
            // forward case was already taken; here (x.kappa) < 0
            debug_assert!(rat_sign(&xk) == -1);
            Ok(pc.kappa_ref.clone())
        }
        0 => {
            // isotropic: +-x lies on the closed cone boundary
            if rat_sign(&xk) >= 0 {
                Ok(x.to_vec())
            } else {
                Ok(rat::vec_neg(x))
            }
        }
        _ => {
            let perp = space.orthogonal_complement(&[x.to_vec()])?;
            let restricted = space.restrict_form(&perp)?;
            let w = restricted
                .find_positive_vector()
                .expect("perp of a negative vector in a Lorentzian space has a positive part");
            let eta = perp.embed(&w);
            Ok(orient_forward(pc, eta))
        }
    }
}

fn orient_forward(pc: &PositiveConeComponent, eta: Vector) -> Vector {
    if rat_sign(&pc.space.pair_unchecked(&eta, &pc.kappa_ref)) >= 0 {
        eta
    } else {
        rat::vec_neg(&eta)
    }
}

fn direct_negative_candidates(model: &ConeModel, x: &[Rat]) -> Option<Vector> {
    let space = model.space();
    let xk = space.pair_unchecked(x, model.kappa_ref());
    if rat_sign(&xk) <= 0 {
        // kappa is in the closure and (x.kappa) <= 0
        return Some(model.kappa_ref().clone());
    }
    let xsq = space.pair_unchecked(x, x);
    if rat_sign(&xsq) == 0 {
        let eta = orient_forward(&model.component, x.to_vec());
        if model.closure_membership(&eta).unwrap_or(false) {
            return Some(eta);
        }
    }
    None
}

/// Perp-subspace negative search: for subsets `I` of cuts, restrict the
/// form to `x^perp ∩ (∩_{i in I} c_i^perp)`, extract a positive-square
/// (or, failing that, radical) vector, orient it forward, and keep it if
/// it satisfies every remaining cut. The full subset and the empty
/// subset resolve every structured model; other subsets are tried up to
/// the size cap.
fn perp_negative_search(
    model: &ConeModel,
    x: &[Rat],
    cfg: &SearchConfig,
) -> Result<Option<Vector>, ConeError> {
    let m = model.cuts().len();
    let mut masks: Vec<u64> = Vec::new();
    if m <= 63 {
        let full: u64 = if m == 0 { 0 } else { (1u64 << m) - 1 };
        masks.push(full);
        masks.push(0);
        let cap = cfg.subset_cap.min(m);
        const SUBSET_TRIAL_LIMIT: usize = 4096;
        'outer: for size in 1..=cap {
            for mask in 1..(1u64 << m) {
                if masks.len() >= SUBSET_TRIAL_LIMIT {
                    break 'outer;
                }
                if (mask.count_ones() as usize) == size && mask != *masks.first().unwrap() {
                    masks.push(mask);
                }
            }
        }
    } else {
        masks.push(0);
    }

    for mask in masks {
        let mut constraints: Vec<Vector> = vec![x.to_vec()];
        for (i, c) in model.cuts().iter().enumerate() {
            if mask & (1u64 << i) != 0 {
                constraints.push(c.clone());
            }
        }
        if let Some(eta) = perp_candidate(model, &constraints)? {
            if verify_negative_cert(model, x, &NegativeCert { eta: eta.clone() }, false) {
                return Ok(Some(eta));
            }
        }
    }
    Ok(None)
}

fn perp_candidate(model: &ConeModel, constraints: &[Vector]) -> Result<Option<Vector>, ConeError> {
    let space = model.space();
    let perp = space.orthogonal_complement(constraints)?;
    if perp.dim() == 0 {
        return Ok(None);
    }
    let restricted = space.restrict_form(&perp)?;
    let candidate = restricted
        .find_positive_vector()
        .or_else(|| restricted.radical_vector());
    Ok(candidate.map(|w| orient_forward(&model.component, perp.embed(&w))))
}

/// Exact coordinate ascent for a decomposition `x = y + sum a_i c_i`:
/// each step maximizes `(y.y)` along one cut coefficient (closed-form
/// optimum, then projected to `a_i >= 0`) and the candidate is verified
/// after every round.
fn coordinate_ascent_decomposition(
    model: &ConeModel,
    x: &[Rat],
    cfg: &SearchConfig,
) -> Option<PositiveCert> {
    let space = model.space();
    let cuts = model.cuts();
    let mut coeffs = vec![Rat::zero(); cuts.len()];
    let mut y = x.to_vec();
    let rounds = (cfg.numeric_budget / cuts.len().max(1)).clamp(4, 64);
    for _ in 0..rounds {
        let mut moved = false;
        for (i, c) in cuts.iter().enumerate() {
            let csq = space.pair_unchecked(c, c);
            if rat_sign(&csq) >= 0 {
                continue; // no interior optimum along this cut
            }
            let yc = space.pair_unchecked(&y, c);
            let delta = &yc / &csq;
            let new_a = &coeffs[i] + &delta;
            let applied = if new_a.is_negative() { -coeffs[i].clone() } else { delta };
            if applied.is_zero() {
                continue;
            }
            y = vec_sub(&y, &vec_scale(&applied, c));
            coeffs[i] += applied;
            moved = true;
        }
        let cert = PositiveCert { interior: y.clone(), cut_coeffs: coeffs.clone() };
        if verify_positive_cert(model, x, &cert, true) {
            return Some(cert);
        }
        if !moved {
            break;
        }
    }
    None
}

/// Numeric proposer for negative certificates: projected subgradient
/// descent of `(x.eta)` over the normalized closed cone, with every
/// candidate rationalized (denominators up to 10^6) and verified exactly.
fn numeric_negative_search(
    model: &ConeModel,
    x: &[Rat],
    cfg: &SearchConfig,
) -> Option<Vector> {
    let space = model.space();
    let n = space.dim();
    let gf = DMatrix::from_fn(n, n, |i, j| rat_to_f64(&space.gram()[i][j]));
    let xf: Vec<f64> = x.iter().map(rat_to_f64).collect();
    let kf: Vec<f64> = model.kappa_ref().iter().map(rat_to_f64).collect();
    let cutsf: Vec<Vec<f64>> = model.cuts().iter().map(|c| c.iter().map(rat_to_f64).collect()).collect();

    let pair = |a: &[f64], b: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * gf[(i, j)] * b[j];
            }
        }
        s
    };
    let grad_pair = |a: &[f64]| -> Vec<f64> {
        (0..n).map(|i| (0..n).map(|j| gf[(i, j)] * a[j]).sum()).collect()
    };

    let norm = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>().sqrt();
    let mut eta: Vec<f64> = kf.clone();
    let s = norm(&eta);
    if s == 0.0 {
        return None;
    }
    eta.iter_mut().for_each(|t| *t /= s);

    let penalty = 64.0;
    for iter in 0..cfg.numeric_budget.max(32) {
        // objective: (x.eta) + penalty * squared violations
        let mut grad = grad_pair(&xf);
        let esq = pair(&eta, &eta);
        if esq < 0.0 {
            let g = grad_pair(&eta);
            for i in 0..n {
                grad[i] += penalty * 2.0 * esq * 2.0 * g[i];
            }
        }
        let ek = pair(&eta, &kf);
        if ek < 0.0 {
            let g = grad_pair(&kf);
            for i in 0..n {
                grad[i] += penalty * 2.0 * ek * g[i];
            }
        }
        for c in &cutsf {
            let ec = pair(&eta, c);
            if ec < 0.0 {
                let g = grad_pair(c);
                for i in 0..n {
                    grad[i] += penalty * 2.0 * ec * g[i];
                }
            }
        }
        let step = 0.25 / ((iter as f64) + 4.0).sqrt();
        for i in 0..n {
            eta[i] -= step * grad[i];
        }
        let s = norm(&eta);
        if !s.is_finite() || s < 1e-9 {
            return None;
        }
        eta.iter_mut().for_each(|t| *t /= s);

        if iter % 16 == 15 {
            let rationalized: Option<Vector> = eta
                .iter()
                .map(|&t| cf_convergents(t, 1_000_000).pop())
                .collect();
            if let Some(candidate) = rationalized {
                if !is_zero_vec(&candidate)
                    && verify_negative_cert(model, x, &NegativeCert { eta: candidate.clone() }, false)
                {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

/// Membership in the closed dual cone: `(x.eta) >= 0` for every `eta` in
/// the cone closure. Exact and total without cuts (the closed forward
/// cone is self-dual); with cuts it reuses the certificate machinery with
/// non-strict thresholds and may return `Undetermined`.
pub fn dual_membership(model: &ConeModel, x: &[Rat]) -> Result<DualMembership, ConeError> {
    let space = model.space();
    space.check_dim(x)?;
    let cfg = SearchConfig::default();

    if model.component.in_closure_positive(x)? {
        return Ok(DualMembership::Member {
            cert: PositiveCert {
                interior: x.to_vec(),
                cut_coeffs: vec![Rat::zero(); model.cuts().len()],
            },
        });
    }
    if model.cuts().is_empty() {
        let witness = strict_closed_cone_witness(&model.component, x)?;
        return Ok(DualMembership::NotMember { witness: NegativeCert { eta: witness } });
    }

    // strict witness attempt: perturb a perp annihilator toward x
    if let Some(eta) = perp_negative_search(model, x, &cfg)? {
        if let Some(strict) = perturb_to_strict(model, x, &eta) {
            return Ok(DualMembership::NotMember { witness: NegativeCert { eta: strict } });
        }
    }
    if let Some(cert) = nonstrict_decomposition(model, x, &cfg) {
        return Ok(DualMembership::Member { cert });
    }
    if let Some(eta) = numeric_negative_search(model, x, &cfg) {
        if rat_sign(&space.pair_unchecked(x, &eta)) == -1 {
            return Ok(DualMembership::NotMember { witness: NegativeCert { eta } });
        }
    }
    Ok(DualMembership::Undetermined)
}

/// For `x` outside the closed forward cone, a closure class with
/// `(x.eta) < 0` strictly.
fn strict_closed_cone_witness(
    pc: &PositiveConeComponent,
    x: &[Rat],
) -> Result<Vector, ConeError> {
    let space = &pc.space;
    let xk = space.pair_unchecked(x, &pc.kappa_ref);
    if rat_sign(&xk) == -1 {
        return Ok(pc.kappa_ref.clone());
    }
    // x is not in the closed cone and (x.kappa) >= 0, so (x.x) < 0:
    // tilt a perp positive vector toward x.
    let xsq = space.pair_unchecked(x, x);
    debug_assert!(rat_sign(&xsq) == -1);
    let perp = space.orthogonal_complement(&[x.to_vec()])?;
    let restricted = space.restrict_form(&perp)?;
    let w = restricted
        .find_positive_vector()
        .expect("perp of a negative vector in a Lorentzian space has a positive part");
    let eta0 = orient_forward(pc, perp.embed(&w));
    let eta0sq = space.pair_unchecked(&eta0, &eta0);
    // eta = eta0 + t x keeps eta^2 > 0 for t^2 < eta0^2 / -x^2 and makes
    // (x.eta) = t (x.x) < 0; (eta.kappa) only grows since (x.kappa) >= 0.
    let bound = &eta0sq / &(-&xsq);
    let t = rational_sqrt_lower(&bound) / rat(2, 1);
    debug_assert!(t.is_positive());
    Ok(vec_add(&eta0, &vec_scale(&t, x)))
}

fn perturb_to_strict(model: &ConeModel, x: &[Rat], eta: &[Rat]) -> Option<Vector> {
    let space = model.space();
    let xsq = space.pair_unchecked(x, x);
    if rat_sign(&xsq) != -1 {
        return None;
    }
    let mut t = rat(1, 2);
    for _ in 0..12 {
        let candidate = vec_add(eta, &vec_scale(&t, x));
        if verify_negative_cert(model, x, &NegativeCert { eta: candidate.clone() }, true) {
            return Some(candidate);
        }
        t /= rat(2, 1);
    }
    None
}

fn nonstrict_decomposition(
    model: &ConeModel,
    x: &[Rat],
    cfg: &SearchConfig,
) -> Option<PositiveCert> {
    // coordinate ascent already targets the strict problem; accept its
    // trace under the non-strict verifier too.
    if let Some(cert) = coordinate_ascent_decomposition(model, x, cfg) {
        return Some(cert);
    }
    let space = model.space();
    let cuts = model.cuts();
    let mut coeffs = vec![Rat::zero(); cuts.len()];
    let mut y = x.to_vec();
    for _ in 0..8 {
        for (i, c) in cuts.iter().enumerate() {
            let csq = space.pair_unchecked(c, c);
            if rat_sign(&csq) >= 0 {
                continue;
            }
            let yc = space.pair_unchecked(&y, c);
            let delta = &yc / &csq;
            let new_a = &coeffs[i] + &delta;
            let applied = if new_a.is_negative() { -coeffs[i].clone() } else { delta };
            y = vec_sub(&y, &vec_scale(&applied, c));
            coeffs[i] += applied;
        }
        let cert = PositiveCert { interior: y.clone(), cut_coeffs: coeffs.clone() };
        if verify_positive_cert(model, x, &cert, false) {
            return Some(cert);
        }
    }
    None
}

/// Certified lower bound on the squared uniform margin of an inner point:
/// a positive rational `m` with `(x.eta)^2 >= m |eta|^2` for every `eta`
/// in the cone closure. Derived from the positive certificate; never
/// claims the exact optimum. Returns `None` when the inner-point test
/// does not certify `x` as inner.
pub fn uniform_margin(model: &ConeModel, x: &[Rat], cfg: &SearchConfig) -> Result<Option<Rat>, ConeError> {
    match inner_point_test(model, x, cfg)? {
        InnerPointVerdict::Inner { margin_sq, .. } => Ok(margin_sq),
        _ => Ok(None),
    }
}

/// A finitely generated cone `{sum b_j g_j : b_j >= 0} \ {0}` inside a
/// quadratic space; the harness instantiation of the dual-margin
/// equivalence on polyhedral data.
#[derive(Debug, Clone)]
pub struct PolyhedralCone {
    pub space: QuadraticSpace,
    pub generators: Vec<Vector>,
}

impl PolyhedralCone {
    pub fn new(space: QuadraticSpace, generators: Vec<Vector>) -> Result<Self, ConeError> {
        if generators.is_empty() || generators.iter().any(|g| is_zero_vec(g)) {
            return Err(ConeError::NoGenerators);
        }
        for g in &generators {
            space.check_dim(g)?;
        }
        Ok(Self { space, generators })
    }
}

/// Report of the three equivalent inner-point predicates on a polyhedral
/// cone.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralReport {
    /// P1: `(x.g_j) > 0` for every generator.
    pub strict_on_generators: bool,
    /// P3: the uniform margin `min_j (x.g_j)/|g_j|` is positive; its
    /// square is reported exactly when so.
    pub margin_positive: bool,
    pub margin_sq: Option<Rat>,
    /// P2: sampled metric-ball inclusion at a radius computed from the
    /// margin.
    pub ball_trials: usize,
    pub ball_failures: usize,
    pub equivalence_holds: bool,
}

/// Evaluates P1 (strict positivity on generators), P3 (uniform margin)
/// and P2 (sampled ball inclusion) and reports agreement. P1 and P3 are
/// equivalent exactly; P2 is a randomized consistency check seeded for
/// reproducibility.
pub fn polyhedral_inner_equivalence(
    cone: &PolyhedralCone,
    x: &[Rat],
    trials: usize,
    seed: u64,
) -> Result<PolyhedralReport, ConeError> {
    let space = &cone.space;
    space.check_dim(x)?;

    let pairings: Vec<Rat> = cone
        .generators
        .iter()
        .map(|g| space.pair_unchecked(x, g))
        .collect();
    let strict_on_generators = pairings.iter().all(|p| rat_sign(p) == 1);

    // margin^2 = min_j (x.g_j)^2 / |g_j|^2, meaningful when all strict
    let margin_sq = if strict_on_generators {
        let mut best: Option<Rat> = None;
        for (p, g) in pairings.iter().zip(&cone.generators) {
            let val = (p * p) / euclidean_norm_sq(g);
            best = Some(match best {
                None => val,
                Some(b) => {
                    if val < b {
                        val
                    } else {
                        b
                    }
                }
            });
        }
        best
    } else {
        None
    };
    let margin_positive = margin_sq.as_ref().map(|m| m.is_positive()).unwrap_or(false);

    let mut ball_failures = 0usize;
    let mut ball_trials = 0usize;
    if let Some(ref msq) = margin_sq {
        // |delta| <= margin / (2 ||G||_F) keeps every pairing strictly
        // positive; sample exactly inside that radius.
        let frob_sq = euclidean_norm_sq(
            &space.gram().iter().flatten().cloned().collect::<Vec<Rat>>(),
        );
        if frob_sq.is_positive() {
            let eps_sq = msq / (&rat(4, 1) * &frob_sq);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let dir: Vector = sample_nonzero_int_vector(&mut rng, space.dim());
                let t = rational_sqrt_lower(&(&eps_sq / &euclidean_norm_sq(&dir)));
                let xp = vec_add(x, &vec_scale(&t, &dir));
                ball_trials += 1;
                let ok = cone
                    .generators
                    .iter()
                    .all(|g| rat_sign(&space.pair_unchecked(&xp, g)) == 1);
                if !ok {
                    ball_failures += 1;
                }
            }
        }
    }

    Ok(PolyhedralReport {
        strict_on_generators,
        margin_positive,
        margin_sq,
        ball_trials,
        ball_failures,
        equivalence_holds: strict_on_generators == margin_positive && ball_failures == 0,
    })
}

pub(crate) fn sample_nonzero_int_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v: Vector = (0..dim).map(|_| rat::rat_int(rng.random_range(-5..=5))).collect();
        if !is_zero_vec(&v) {
            return v;
        }
    }
}
