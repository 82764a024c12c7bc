//! Surface lattice models: validation, generated examples, blow-down
//! pushforward and the elliptic positivity bound.
//!
//! A model is the lattice shadow of a compact Kähler surface: its kind
//! label, the intersection form on the real (1,1) classes, a marked
//! Kähler-side class, a basis of the Néron-Severi sublattice and the
//! declared curve classes. Kind labels are input data; only lattice-level
//! consistency is verified, and generated models carry their curves as
//! declared data (the library cannot certify that no further curves
//! exist).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cone::{inner_point_test, ConeError, ConeModel, InnerPointVerdict, PositiveConeComponent, SearchConfig};
use crate::linalg;
use crate::quadform::{QuadformError, QuadraticSpace, SignatureTriple};
use crate::rat::{big_vec_to_rat, is_zero_vec, rat_big, rat_int, rat_sign, rat_vec_to_big, Mat, Rat, Vector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error(transparent)]
    Quadform(#[from] QuadformError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("chain length {got} out of range [{min}, {max}]")]
    ChainLengthOutOfRange { got: usize, min: usize, max: usize },
    #[error("fiber pairing must be positive, got {0}")]
    FiberPairingNotPositive(String),
    #[error("class is not integral")]
    NotIntegral,
    #[error("source gram is not a block sum of the target gram and (-1)")]
    NotBlockDiagonal,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency (library bug): {0}")]
    Internal(String),
}

/// Kind label of a surface model. The label is input data: K3-hood or
/// torus-hood is not derived, only the lattice constraints attached to
/// the label are enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    K3,
    Torus,
    General,
}

impl SurfaceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::K3 => "k3",
            Self::Torus => "torus",
            Self::General => "general",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "k3" => Some(Self::K3),
            "torus" => Some(Self::Torus),
            "general" => Some(Self::General),
            _ => None,
        }
    }
}

impl std::fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named integral curve class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    pub name: String,
    pub class: Vec<BigInt>,
}

impl CurveClass {
    pub fn class_rat(&self) -> Vector {
        big_vec_to_rat(&self.class)
    }
}

/// Candidate data for models of algebraic dimension one: a candidate
/// inner integral point and a fiber class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticData {
    pub m_class: Vec<BigInt>,
    pub fiber: Vec<BigInt>,
}

/// The lattice shadow of a surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub space: QuadraticSpace,
    pub kappa_ref: Vector,
    pub ns_basis: Vec<Vec<BigInt>>,
    pub curves: Vec<CurveClass>,
}

impl SurfaceModel {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Picard rank of the declared Néron-Severi sublattice.
    pub fn ns_rank(&self) -> usize {
        self.ns_basis.len()
    }

    /// Kähler-cone model: the marked forward component cut by the curve
    /// half-spaces.
    pub fn cone_model(&self) -> Result<ConeModel, ConeError> {
        let component = PositiveConeComponent::new(self.space.clone(), self.kappa_ref.clone())?;
        let cuts = self.curves.iter().map(|c| c.class_rat()).collect();
        ConeModel::new(component, cuts)
    }

    /// Gram matrix of the pairing restricted to the Néron-Severi basis;
    /// may be degenerate.
    pub fn ns_gram(&self) -> Result<QuadraticSpace, QuadformError> {
        let rho = self.ns_rank();
        let basis: Vec<Vector> = self.ns_basis.iter().map(|b| big_vec_to_rat(b)).collect();
        let mut gram = vec![vec![Rat::zero(); rho]; rho];
        for i in 0..rho {
            for j in i..rho {
                let v = self.space.pairing(&basis[i], &basis[j])?;
                gram[i][j] = v.clone();
                gram[j][i] = v;
            }
        }
        QuadraticSpace::new_degenerate_allowed(gram)
    }

    /// Embeds Néron-Severi coefficients into ambient coordinates.
    pub fn embed_ns(&self, coeffs: &[BigInt]) -> Vector {
        assert_eq!(coeffs.len(), self.ns_rank(), "coefficient count mismatch");
        let mut out = vec![Rat::zero(); self.dim()];
        for (c, b) in coeffs.iter().zip(&self.ns_basis) {
            if c.is_zero() {
                continue;
            }
            let cr = rat_big(c);
            for (o, bi) in out.iter_mut().zip(b) {
                *o += &cr * rat_big(bi);
            }
        }
        out
    }
}

/// A single validation failure; an empty list means the model is valid.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelViolation {
    #[error("kind {kind} requires dimension {expected}, model has {got}")]
    WrongDimension { kind: SurfaceKind, expected: usize, got: usize },
    #[error("ambient signature must be (1,0,{}), got {got}", got.dim().saturating_sub(1))]
    WrongSignature { got: SignatureTriple },
    #[error("marker class has wrong dimension")]
    MarkerWrongDimension,
    #[error("marker class must have positive square")]
    MarkerNotPositive,
    #[error("ns basis vector {index} has wrong dimension")]
    NsBasisWrongDimension { index: usize },
    #[error("ns basis vectors are linearly dependent")]
    NsBasisDependent,
    #[error("curve {name} has wrong dimension")]
    CurveWrongDimension { name: String },
    #[error("curve {name} is the zero class")]
    CurveZero { name: String },
    #[error("curve {name}: curve square must be -2, got {square}")]
    CurveSquareNotMinusTwo { name: String, square: String },
    #[error("curve {name} is not in the integer span of the ns basis")]
    CurveOutsideNsSpan { name: String },
    #[error("curve {name} must pair strictly positively with the marker class")]
    CurveNotPositiveOnMarker { name: String },
    #[error("curve classes are linearly dependent")]
    CurvesDependent,
    #[error("signature contradiction: {count} curve classes with negative definite span in a (1,{neg}) space")]
    CurveCountSignatureContradiction { count: usize, neg: usize },
    #[error("torus-kind models carry no curve classes")]
    TorusWithCurves,
    #[error("fiber class is zero")]
    FiberZero,
    #[error("fiber class must be isotropic, got square {square}")]
    FiberNotIsotropic { square: String },
    #[error("fiber class is not in the closed forward cone")]
    FiberNotInClosure,
    #[error("elliptic class {which} has wrong dimension")]
    EllipticWrongDimension { which: &'static str },
}

/// Lattice-level consistency checks, per kind. Returns every violation
/// found; an empty list certifies the model for the decision engines.
pub fn validate_model(model: &SurfaceModel) -> Vec<ModelViolation> {
    let mut out = Vec::new();
    let n = model.dim();

    match model.kind {
        SurfaceKind::K3 if n != 20 => {
            out.push(ModelViolation::WrongDimension { kind: model.kind, expected: 20, got: n })
        }
        SurfaceKind::Torus if n != 4 => {
            out.push(ModelViolation::WrongDimension { kind: model.kind, expected: 4, got: n })
        }
        SurfaceKind::General if n < 2 => {
            out.push(ModelViolation::WrongDimension { kind: model.kind, expected: 2, got: n })
        }
        _ => {}
    }

    let sig = model.space.signature();
    if !sig.is_lorentzian() {
        out.push(ModelViolation::WrongSignature { got: sig });
    }

    if model.kappa_ref.len() != n {
        out.push(ModelViolation::MarkerWrongDimension);
        return out; // everything below pairs against the marker
    }
    if rat_sign(&model.space.pair_unchecked(&model.kappa_ref, &model.kappa_ref)) != 1 {
        out.push(ModelViolation::MarkerNotPositive);
    }

    let mut ns_ok = true;
    for (i, b) in model.ns_basis.iter().enumerate() {
        if b.len() != n {
            out.push(ModelViolation::NsBasisWrongDimension { index: i });
            ns_ok = false;
        }
    }
    let ns_rat: Vec<Vector> = if ns_ok {
        model.ns_basis.iter().map(|b| big_vec_to_rat(b)).collect()
    } else {
        Vec::new()
    };
    if ns_ok && linalg::rank(&ns_rat) != ns_rat.len() {
        out.push(ModelViolation::NsBasisDependent);
        ns_ok = false;
    }

    if model.kind == SurfaceKind::Torus && !model.curves.is_empty() {
        out.push(ModelViolation::TorusWithCurves);
    }

    let mut curve_classes: Vec<Vector> = Vec::new();
    for curve in &model.curves {
        if curve.class.len() != n {
            out.push(ModelViolation::CurveWrongDimension { name: curve.name.clone() });
            continue;
        }
        let class = curve.class_rat();
        if is_zero_vec(&class) {
            out.push(ModelViolation::CurveZero { name: curve.name.clone() });
            continue;
        }
        if model.kind == SurfaceKind::K3 {
            let sq = model.space.pair_unchecked(&class, &class);
            if sq != rat_int(-2) {
                out.push(ModelViolation::CurveSquareNotMinusTwo {
                    name: curve.name.clone(),
                    square: crate::rat::format_rat(&sq),
                });
            }
        }
        if ns_ok {
            // the basis is independent, so the rational solution is
            // unique and integer-span membership is its integrality
            let in_integer_span = linalg::span_coefficients(&ns_rat, &class)
                .map(|coeffs| coeffs.iter().all(|c| c.denom().is_one()))
                .unwrap_or(false);
            if !in_integer_span {
                out.push(ModelViolation::CurveOutsideNsSpan { name: curve.name.clone() });
            }
        }
        if rat_sign(&model.space.pair_unchecked(&model.kappa_ref, &class)) != 1 {
            out.push(ModelViolation::CurveNotPositiveOnMarker { name: curve.name.clone() });
        }
        curve_classes.push(class);
    }

    if !curve_classes.is_empty() {
        let rank = linalg::rank(&curve_classes);
        let independent = rank == curve_classes.len();
        if !independent {
            out.push(ModelViolation::CurvesDependent);
        }
        if model.kind == SurfaceKind::K3 && curve_classes.len() > 19 {
            // a negative definite span cannot exceed the negative index
            let span_negative_definite = crate::quadform::Subspace::new(
                n,
                independent_subset(&curve_classes, rank),
            )
            .ok()
            .and_then(|sub| model.space.restrict_form(&sub).ok())
            .map(|r| r.signature().is_negative_definite())
            .unwrap_or(false);
            if span_negative_definite {
                out.push(ModelViolation::CurveCountSignatureContradiction {
                    count: curve_classes.len(),
                    neg: 19,
                });
            }
        }
    }

    out
}

fn independent_subset(vectors: &[Vector], rank: usize) -> Vec<Vector> {
    let mut picked: Vec<Vector> = Vec::new();
    for v in vectors {
        if picked.len() == rank {
            break;
        }
        let mut trial = picked.clone();
        trial.push(v.clone());
        if linalg::rank(&trial) == trial.len() {
            picked = trial;
        }
    }
    picked
}

/// Validates optional elliptic data against the model.
pub fn validate_elliptic(model: &SurfaceModel, data: &EllipticData) -> Vec<ModelViolation> {
    let mut out = Vec::new();
    let n = model.dim();
    if data.m_class.len() != n {
        out.push(ModelViolation::EllipticWrongDimension { which: "m" });
    }
    if data.fiber.len() != n {
        out.push(ModelViolation::EllipticWrongDimension { which: "f" });
        return out;
    }
    let f = big_vec_to_rat(&data.fiber);
    if is_zero_vec(&f) {
        out.push(ModelViolation::FiberZero);
        return out;
    }
    if model.kappa_ref.len() == n {
        let sq = model.space.pair_unchecked(&f, &f);
        if !sq.is_zero() {
            out.push(ModelViolation::FiberNotIsotropic { square: crate::rat::format_rat(&sq) });
        }
        let fk = model.space.pair_unchecked(&f, &model.kappa_ref);
        if rat_sign(&sq) < 0 || rat_sign(&fk) < 0 {
            out.push(ModelViolation::FiberNotInClosure);
        }
    }
    out
}

/// The negated Cartan matrix of a length-`m` chain of (-2)-curves:
/// `-2` on the diagonal, `+1` on the first off-diagonals.
pub fn am_gram(m: usize) -> Result<Mat, SurfaceError> {
    if !(1..=19).contains(&m) {
        return Err(SurfaceError::ChainLengthOutOfRange { got: m, min: 1, max: 19 });
    }
    Ok((0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        rat_int(-2)
                    } else if i.abs_diff(j) == 1 {
                        rat_int(1)
                    } else {
                        rat_int(0)
                    }
                })
                .collect()
        })
        .collect())
}

/// A 20-dimensional K3-kind model whose Néron-Severi lattice is a chain
/// of `m` (-2)-curves (`0 <= m <= 19`): Gram matrix
/// `diag(1) ⊕ A_m-block ⊕ diag(-1,...,-1)` (a (1,19) completion that
/// accommodates the full chain even at `m = 19`), curves on the chain
/// block, and a deterministic marker `e_1 + w/N` where `w` pairs to `1`
/// with every curve and `N` is the smallest positive integer keeping the
/// marker square positive. Byte-stable for fixed `m`.
pub fn construct_k3_am(m: usize) -> Result<SurfaceModel, SurfaceError> {
    if m > 19 {
        return Err(SurfaceError::ChainLengthOutOfRange { got: m, min: 0, max: 19 });
    }
    let n = 20usize;
    let mut gram = vec![vec![Rat::zero(); n]; n];
    gram[0][0] = rat_int(1);
    if m > 0 {
        let block = am_gram(m)?;
        for i in 0..m {
            for j in 0..m {
                gram[1 + i][1 + j] = block[i][j].clone();
            }
        }
    }
    for i in (1 + m)..n {
        gram[i][i] = rat_int(-1);
    }
    let space = QuadraticSpace::new(gram)?;

    let mut curves = Vec::new();
    let mut ns_basis = Vec::new();
    for i in 0..m {
        let mut class = vec![BigInt::zero(); n];
        class[1 + i] = BigInt::one();
        ns_basis.push(class.clone());
        curves.push(CurveClass { name: format!("C{}", i + 1), class });
    }

    let kappa_ref = if m == 0 {
        let mut k = vec![Rat::zero(); n];
        k[0] = rat_int(1);
        k
    } else {
        // w solves (chain block) * w = 1, so (kappa . C_j) = 1/N for all j
        let block = am_gram(m)?;
        let ones = vec![rat_int(1); m];
        let w = linalg::solve(&block, &ones).expect("chain block is invertible");
        let mut big_n = 1i64;
        loop {
            let nn = rat_int(big_n);
            let mut k = vec![Rat::zero(); n];
            k[0] = rat_int(1);
            for (i, wi) in w.iter().enumerate() {
                k[1 + i] = wi / &nn;
            }
            if rat_sign(&space.pair_unchecked(&k, &k)) == 1 {
                break k;
            }
            big_n += 1;
        }
    };

    Ok(SurfaceModel { kind: SurfaceKind::K3, space, kappa_ref, ns_basis, curves })
}

/// Contraction of a (-1)-class: the source space must be the block sum
/// of the target space and the rank-one form `(-1)` on the last
/// coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowdownMap {
    source: QuadraticSpace,
    target: QuadraticSpace,
}

impl BlowdownMap {
    pub fn new(source: QuadraticSpace) -> Result<Self, SurfaceError> {
        let n1 = source.dim();
        if n1 < 2 {
            return Err(SurfaceError::NotBlockDiagonal);
        }
        let n = n1 - 1;
        let g = source.gram();
        if g[n][n] != rat_int(-1) {
            return Err(SurfaceError::NotBlockDiagonal);
        }
        for i in 0..n {
            if !g[i][n].is_zero() || !g[n][i].is_zero() {
                return Err(SurfaceError::NotBlockDiagonal);
            }
        }
        let target_gram: Mat = (0..n).map(|i| g[i][..n].to_vec()).collect();
        let target = QuadraticSpace::new(target_gram)?;
        Ok(Self { source, target })
    }

    pub fn source(&self) -> &QuadraticSpace {
        &self.source
    }

    pub fn target(&self) -> &QuadraticSpace {
        &self.target
    }
}

/// Pushforward along the contraction: drops the exceptional coordinate.
/// Pairing compatibility `(x . lift(s)) = (blow_down(x) . s)` holds for
/// every target class `s` by block-diagonality.
pub fn blow_down(bd: &BlowdownMap, x: &[Rat]) -> Result<Vector, SurfaceError> {
    bd.source.check_dim(x)?;
    Ok(x[..bd.target.dim()].to_vec())
}

/// Zero-extends a target class into the source space.
pub fn lift(bd: &BlowdownMap, y: &[Rat]) -> Result<Vector, SurfaceError> {
    bd.target.check_dim(y)?;
    let mut out = y.to_vec();
    out.push(Rat::zero());
    Ok(out)
}

/// Descends an inner integral point along a blow-down. The source
/// verdict is re-established first; the descended class must come back
/// inner, and an exactly certified `NotInner` is reported as an internal
/// inconsistency rather than returned.
pub fn descend_inner_point(
    bd: &BlowdownMap,
    source_model: &SurfaceModel,
    target_model: &SurfaceModel,
    x: &[Rat],
    cfg: &SearchConfig,
) -> Result<InnerPointVerdict, SurfaceError> {
    if source_model.dim() != bd.source.dim() || target_model.dim() != bd.target.dim() {
        return Err(SurfaceError::Precondition(
            "model dimensions do not match the blow-down map".to_string(),
        ));
    }
    if rat_vec_to_big(x).is_none() {
        return Err(SurfaceError::NotIntegral);
    }
    let source_cone = source_model.cone_model()?;
    let source_verdict = inner_point_test(&source_cone, x, cfg)?;
    if !source_verdict.is_inner() {
        return Err(SurfaceError::Precondition(format!(
            "source class is not certified inner (got {})",
            source_verdict.status_str()
        )));
    }
    let y = blow_down(bd, x)?;
    let target_cone = target_model.cone_model()?;
    let verdict = inner_point_test(&target_cone, &y, cfg)?;
    if verdict.is_not_inner() {
        return Err(SurfaceError::Internal(
            "descended class of an inner point certified not inner".to_string(),
        ));
    }
    Ok(verdict)
}

/// Descends a whole model along a blow-down: truncates the marker, the
/// Néron-Severi basis and the curves, dropping classes that truncate to
/// zero. The result carries the `general` kind label.
pub fn descend_model(bd: &BlowdownMap, source: &SurfaceModel) -> Result<SurfaceModel, SurfaceError> {
    if source.dim() != bd.source.dim() {
        return Err(SurfaceError::Precondition(
            "model dimension does not match the blow-down map".to_string(),
        ));
    }
    let n = bd.target.dim();
    let kappa_ref = blow_down(bd, &source.kappa_ref)?;
    let ns_basis: Vec<Vec<BigInt>> = source
        .ns_basis
        .iter()
        .map(|b| b[..n].to_vec())
        .filter(|b| !b.iter().all(|x| x.is_zero()))
        .collect();
    let curves: Vec<CurveClass> = source
        .curves
        .iter()
        .map(|c| CurveClass { name: c.name.clone(), class: c.class[..n].to_vec() })
        .filter(|c| !c.class.iter().all(|x| x.is_zero()))
        .collect();
    Ok(SurfaceModel {
        kind: SurfaceKind::General,
        space: bd.target.clone(),
        kappa_ref,
        ns_basis,
        curves,
    })
}

/// Smallest nonnegative integer `n` with `m_sq + 2 n mf > 0`; requires
/// `mf > 0` (the margin inequality forces a positive fiber pairing).
pub fn elliptic_positivity_bound(m_sq: &Rat, mf: &Rat) -> Result<BigInt, SurfaceError> {
    if !mf.is_positive() {
        return Err(SurfaceError::FiberPairingNotPositive(crate::rat::format_rat(mf)));
    }
    if m_sq.is_positive() {
        return Ok(BigInt::zero());
    }
    // first integer strictly beyond -m_sq / (2 mf)
    let threshold = -m_sq / (mf * rat_int(2));
    Ok(threshold.floor().to_integer() + 1)
}

/// Whether `f` behaves like a fiber class: nonzero, in the closure of
/// the Kähler cone, and pairing strictly positively with the marker.
pub fn fiber_class_in_closure(model: &SurfaceModel, f: &[Rat]) -> Result<bool, SurfaceError> {
    let cone = model.cone_model()?;
    if is_zero_vec(f) {
        return Ok(false);
    }
    Ok(cone.closure_membership(f)?
        && rat_sign(&model.space.pairing(f, &model.kappa_ref)?) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    fn bv(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn am_gram_examples() {
        assert_eq!(am_gram(1).unwrap(), vec![vec![rat_int(-2)]]);
        assert_eq!(
            am_gram(2).unwrap(),
            vec![vec![rat_int(-2), rat_int(1)], vec![rat_int(1), rat_int(-2)]]
        );
        // principal minors -2, 3, -4: negative definite
        let a3 = QuadraticSpace::new(am_gram(3).unwrap()).unwrap();
        assert_eq!(a3.signature(), SignatureTriple { pos: 0, zero: 0, neg: 3 });
        assert!(am_gram(0).is_err());
        assert!(am_gram(20).is_err());
    }

    #[test]
    fn am_gram_negative_definite_full_range() {
        for m in 1..=19 {
            let s = QuadraticSpace::new(am_gram(m).unwrap()).unwrap();
            assert_eq!(s.signature(), SignatureTriple { pos: 0, zero: 0, neg: m });
        }
    }

    #[test]
    fn construct_examples() {
        let m0 = construct_k3_am(0).unwrap();
        assert_eq!(m0.ns_rank(), 0);
        assert!(m0.curves.is_empty());
        assert!(validate_model(&m0).is_empty());

        let m3 = construct_k3_am(3).unwrap();
        assert!(validate_model(&m3).is_empty());
        assert_eq!(m3.ns_gram().unwrap().signature(), SignatureTriple { pos: 0, zero: 0, neg: 3 });

        // perp of all curves in the m=19 model is a single positive line
        let m19 = construct_k3_am(19).unwrap();
        assert!(validate_model(&m19).is_empty());
        let classes: Vec<Vector> = m19.curves.iter().map(|c| c.class_rat()).collect();
        let perp = m19.space.orthogonal_complement(&classes).unwrap();
        let restricted = m19.space.restrict_form(&perp).unwrap();
        assert_eq!(restricted.signature(), SignatureTriple { pos: 1, zero: 0, neg: 0 });

        assert!(construct_k3_am(20).is_err());
    }

    #[test]
    fn validate_rejects_bad_curve_square() {
        let mut m = construct_k3_am(1).unwrap();
        // tamper: claim the hyperbolic-block vector e_1 is a curve
        m.curves[0].class = bv(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        m.ns_basis[0] = m.curves[0].class.clone();
        let violations = validate_model(&m);
        assert!(violations
            .iter()
            .any(|x| matches!(x, ModelViolation::CurveSquareNotMinusTwo { .. })));
    }

    #[test]
    fn validate_rejects_curve_outside_ns_span() {
        let mut m = construct_k3_am(2).unwrap();
        m.ns_basis.pop();
        let violations = validate_model(&m);
        assert!(violations
            .iter()
            .any(|x| matches!(x, ModelViolation::CurveOutsideNsSpan { .. })));
    }

    #[test]
    fn validate_rejects_overfull_negative_definite_curve_set() {
        let mut m = construct_k3_am(19).unwrap();
        // duplicate a class under a fresh name: 20 declared curves whose
        // span is still negative definite
        let mut dup = m.curves[0].clone();
        dup.name = "C20".to_string();
        m.curves.push(dup);
        let violations = validate_model(&m);
        assert!(violations.iter().any(|x| matches!(x, ModelViolation::CurvesDependent)));
        assert!(violations
            .iter()
            .any(|x| matches!(x, ModelViolation::CurveCountSignatureContradiction { .. })));
    }

    #[test]
    fn validate_rejects_torus_with_curves() {
        let space = QuadraticSpace::new(
            vec![
                vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)],
                vec![rat_int(0), rat_int(-1), rat_int(0), rat_int(0)],
                vec![rat_int(0), rat_int(0), rat_int(-1), rat_int(0)],
                vec![rat_int(0), rat_int(0), rat_int(0), rat_int(-1)],
            ],
        )
        .unwrap();
        let m = SurfaceModel {
            kind: SurfaceKind::Torus,
            space,
            kappa_ref: v(&[1, 0, 0, 0]),
            ns_basis: vec![bv(&[1, 1, 0, 0])],
            curves: vec![CurveClass { name: "C1".into(), class: bv(&[1, 1, 0, 0]) }],
        };
        let violations = validate_model(&m);
        assert!(violations.iter().any(|x| matches!(x, ModelViolation::TorusWithCurves)));
    }

    #[test]
    fn blow_down_projects_coordinates() {
        let source = QuadraticSpace::new(vec![
            vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(-1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(-1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(0), rat_int(-1)],
        ])
        .unwrap();
        let bd = BlowdownMap::new(source).unwrap();
        assert_eq!(blow_down(&bd, &v(&[3, 1, 2, 5])).unwrap(), v(&[3, 1, 2]));
        let y = v(&[3, 1, 2]);
        assert_eq!(blow_down(&bd, &lift(&bd, &y).unwrap()).unwrap(), y);
    }

    #[test]
    fn blow_down_pairing_compatibility() {
        let source = QuadraticSpace::new(vec![
            vec![rat_int(2), rat_int(1), rat_int(0)],
            vec![rat_int(1), rat_int(-3), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(-1)],
        ])
        .unwrap();
        let bd = BlowdownMap::new(source.clone()).unwrap();
        for x in [v(&[1, 2, 3]), v(&[0, -1, 5]), v(&[7, 0, -2])] {
            for s in [v(&[1, 0]), v(&[2, -3]), v(&[-1, 4])] {
                let lhs = source.pairing(&x, &lift(&bd, &s).unwrap()).unwrap();
                let rhs = bd.target().pairing(&blow_down(&bd, &x).unwrap(), &s).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn blowdown_requires_block_structure() {
        let bad = QuadraticSpace::new(vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(1), rat_int(-1)],
        ])
        .unwrap();
        assert!(BlowdownMap::new(bad).is_err());
    }

    #[test]
    fn elliptic_bound_examples() {
        assert_eq!(elliptic_positivity_bound(&rat_int(-4), &rat_int(1)).unwrap(), BigInt::from(3));
        assert_eq!(elliptic_positivity_bound(&rat_int(2), &rat_int(5)).unwrap(), BigInt::zero());
        assert_eq!(elliptic_positivity_bound(&rat_int(0), &rat_int(1)).unwrap(), BigInt::one());
        assert!(elliptic_positivity_bound(&rat_int(-4), &rat_int(0)).is_err());
        assert!(elliptic_positivity_bound(&rat_int(-4), &rat_int(-1)).is_err());
    }

    #[test]
    fn elliptic_bound_matches_brute_force() {
        // brute-force oracle: scan n upward until the square turns positive
        let brute = |m_sq: &Rat, mf: &Rat| -> BigInt {
            let mut n = BigInt::zero();
            loop {
                let val = m_sq + rat_int(2) * rat_big(&n) * mf;
                if val.is_positive() {
                    return n;
                }
                n += 1;
            }
        };
        for num in -40i64..=10 {
            for (d, fnum) in [(1i64, 1i64), (3, 2), (2, 7), (5, 1)] {
                let m_sq = rat(num, d);
                let mf = rat(fnum, d);
                let n = elliptic_positivity_bound(&m_sq, &mf).unwrap();
                assert_eq!(n, brute(&m_sq, &mf), "m_sq={m_sq} mf={mf}");
                let boosted = &m_sq + rat_int(2) * rat_big(&n) * &mf;
                assert!(boosted.is_positive());
            }
        }
    }

    #[test]
    fn fiber_class_examples() {
        let space = QuadraticSpace::new(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(-1)],
        ])
        .unwrap();
        let m = SurfaceModel {
            kind: SurfaceKind::General,
            space,
            kappa_ref: v(&[1, 0]),
            ns_basis: vec![],
            curves: vec![],
        };
        assert!(fiber_class_in_closure(&m, &v(&[1, 1])).unwrap());
        assert!(!fiber_class_in_closure(&m, &v(&[0, 0])).unwrap());
        assert!(!fiber_class_in_closure(&m, &v(&[0, 1])).unwrap());
    }

    #[test]
    fn descend_inner_point_torus_like_target() {
        let target_space = QuadraticSpace::new(vec![
            vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(-1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(-1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(0), rat_int(-1)],
        ])
        .unwrap();
        let target = SurfaceModel {
            kind: SurfaceKind::Torus,
            space: target_space.clone(),
            kappa_ref: v(&[1, 0, 0, 0]),
            ns_basis: vec![],
            curves: vec![],
        };
        let mut source_gram = vec![vec![Rat::zero(); 5]; 5];
        for i in 0..4 {
            for j in 0..4 {
                source_gram[i][j] = target_space.gram()[i][j].clone();
            }
        }
        source_gram[4][4] = rat_int(-1);
        let source_space = QuadraticSpace::new(source_gram).unwrap();
        let bd = BlowdownMap::new(source_space.clone()).unwrap();
        let source = SurfaceModel {
            kind: SurfaceKind::General,
            space: source_space,
            kappa_ref: v(&[1, 0, 0, 0, 0]),
            ns_basis: vec![],
            curves: vec![],
        };
        let cfg = SearchConfig::default();

        // y inner on the target, lifted with exceptional coefficient 1:
        // (3,1,0,0) has square 8, so the lift keeps square 7 > 0
        let x = v(&[3, 1, 0, 0, 1]);
        let verdict = descend_inner_point(&bd, &source, &target, &x, &cfg).unwrap();
        assert!(verdict.is_inner());

        // pure lift of the target marker
        let x = v(&[1, 0, 0, 0, 0]);
        assert!(descend_inner_point(&bd, &source, &target, &x, &cfg).unwrap().is_inner());

        // precondition: the source class must be inner
        let bad = v(&[0, 1, 0, 0, 0]);
        assert!(matches!(
            descend_inner_point(&bd, &source, &target, &bad, &cfg),
            Err(SurfaceError::Precondition(_))
        ));
    }
}
