//! Symmetric bilinear forms over the rationals.
//!
//! Congruence diagonalization, inertia signatures, orthogonal complements,
//! restricted forms and positive-vector extraction, all exact. A space of
//! signature `(1, n-1)` models the intersection form on the real (1,1)
//! classes of a surface; degenerate forms are allowed only when flagged,
//! which is how restricted forms on perp subspaces through isotropic
//! vectors are represented.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
pub use crate::rat::euclidean_norm_sq;
use crate::rat::{Mat, Rat, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadformError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("gram matrix is degenerate")]
    Degenerate,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
}

/// Inertia of a diagonalized form: counts of positive, zero and negative
/// diagonal entries. Well defined by Sylvester's law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureTriple {
    pub pos: usize,
    pub zero: usize,
    pub neg: usize,
}

impl SignatureTriple {
    pub fn dim(&self) -> usize {
        self.pos + self.zero + self.neg
    }

    pub fn is_negative_definite(&self) -> bool {
        self.pos == 0 && self.zero == 0
    }

    pub fn is_negative_semidefinite(&self) -> bool {
        self.pos == 0
    }

    /// `(1, n-1)` with no radical: the Lorentzian shape required of an
    /// ambient surface form.
    pub fn is_lorentzian(&self) -> bool {
        self.pos == 1 && self.zero == 0
    }
}

impl std::fmt::Display for SignatureTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.pos, self.zero, self.neg)
    }
}

/// A rational vector space with a symmetric bilinear pairing given by a
/// Gram matrix in a fixed basis. The fixed basis also carries the
/// Euclidean norm used for all metric statements.
#[derive(Debug, Clone)]
pub struct QuadraticSpace {
    dim: usize,
    gram: Mat,
    degenerate_allowed: bool,
}

// the degenerate-allowed flag is a construction detail, not identity
impl PartialEq for QuadraticSpace {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.gram == other.gram
    }
}

impl Eq for QuadraticSpace {}

impl QuadraticSpace {
    /// A non-degenerate space; rejects asymmetric or singular Gram data.
    pub fn new(gram: Mat) -> Result<Self, QuadformError> {
        let space = Self::new_degenerate_allowed(gram)?;
        if linalg::rank(&space.gram) != space.dim {
            return Err(QuadformError::Degenerate);
        }
        Ok(Self { degenerate_allowed: false, ..space })
    }

    /// Accepts any symmetric Gram matrix, degenerate ones included.
    pub fn new_degenerate_allowed(gram: Mat) -> Result<Self, QuadformError> {
        let dim = gram.len();
        for row in &gram {
            if row.len() != dim {
                return Err(QuadformError::NotSquare);
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if gram[i][j] != gram[j][i] {
                    return Err(QuadformError::NotSymmetric);
                }
            }
        }
        Ok(Self { dim, gram, degenerate_allowed: true })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn degenerate_allowed(&self) -> bool {
        self.degenerate_allowed
    }

    pub fn check_dim(&self, v: &[Rat]) -> Result<(), QuadformError> {
        if v.len() != self.dim {
            return Err(QuadformError::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    /// The bilinear pairing `x^T G y`; symmetric in its arguments.
    pub fn pairing(&self, x: &[Rat], y: &[Rat]) -> Result<Rat, QuadformError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.pair_unchecked(x, y))
    }

    pub(crate) fn pair_unchecked(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut row = Rat::zero();
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && !self.gram[i][j].is_zero() {
                    row += &self.gram[i][j] * yj;
                }
            }
            acc += xi * row;
        }
        acc
    }

    /// `(x.x)`.
    pub fn square(&self, x: &[Rat]) -> Result<Rat, QuadformError> {
        self.pairing(x, x)
    }

    /// Symmetric Gaussian congruence: returns `(d, p)` with
    /// `p^T G p = diag(d)` exactly and `p` invertible. Total for any
    /// symmetric input; a zero pivot with a nonzero off-diagonal entry is
    /// repaired by the basis move `v_i <- v_i + v_j` first.
    pub fn congruence_diagonalize(&self) -> (Vec<Rat>, Mat) {
        let n = self.dim;
        let mut g = self.gram.clone();
        let mut p = linalg::identity(n);

        let swap_basis = |g: &mut Mat, p: &mut Mat, a: usize, b: usize| {
            g.swap(a, b);
            for row in g.iter_mut() {
                row.swap(a, b);
            }
            for row in p.iter_mut() {
                row.swap(a, b);
            }
        };
        // v_dst <- v_dst + f * v_src  (columns of P are the basis vectors)
        let add_basis = |g: &mut Mat, p: &mut Mat, dst: usize, src: usize, f: &Rat| {
            for i in 0..n {
                let v = &g[i][dst] + f * &g[i][src];
                g[i][dst] = v;
            }
            for j in 0..n {
                let v = &g[dst][j] + f * &g[src][j];
                g[dst][j] = v;
            }
            for row in p.iter_mut() {
                let v = &row[dst] + f * &row[src];
                row[dst] = v;
            }
        };

        for k in 0..n {
            if g[k][k].is_zero() {
                if let Some(j) = ((k + 1)..n).find(|&j| !g[j][j].is_zero()) {
                    swap_basis(&mut g, &mut p, k, j);
                } else if let Some(j) = ((k + 1)..n).find(|&j| !g[k][j].is_zero()) {
                    add_basis(&mut g, &mut p, k, j, &Rat::from_integer(1.into()));
                } else {
                    continue; // the remaining block is zero in row/col k
                }
            }
            let pivot = g[k][k].clone();
            for i in (k + 1)..n {
                if !g[i][k].is_zero() {
                    let f = -(&g[i][k] / &pivot);
                    add_basis(&mut g, &mut p, i, k, &f);
                }
            }
        }
        let d = (0..n).map(|i| g[i][i].clone()).collect();
        (d, p)
    }

    /// Inertia counts of any congruence diagonalization.
    pub fn signature(&self) -> SignatureTriple {
        let (d, _) = self.congruence_diagonalize();
        let mut sig = SignatureTriple { pos: 0, zero: 0, neg: 0 };
        for v in &d {
            match crate::rat::rat_sign(v) {
                1 => sig.pos += 1,
                0 => sig.zero += 1,
                _ => sig.neg += 1,
            }
        }
        sig
    }

    /// Basis of `{y : (v_i . y) = 0 for all i}`. An empty list of
    /// constraints returns the standard basis of the full space.
    pub fn orthogonal_complement(&self, vs: &[Vector]) -> Result<Subspace, QuadformError> {
        for v in vs {
            self.check_dim(v)?;
        }
        if vs.is_empty() {
            return Ok(Subspace { ambient_dim: self.dim, basis: linalg::identity(self.dim) });
        }
        let rows: Mat = vs.iter().map(|v| linalg::mat_vec(&self.gram, v)).collect();
        let basis = linalg::kernel_basis(&rows);
        Ok(Subspace { ambient_dim: self.dim, basis })
    }

    /// Gram matrix of the pairing restricted to the subspace basis; the
    /// result may be degenerate and is flagged accordingly.
    pub fn restrict_form(&self, sub: &Subspace) -> Result<QuadraticSpace, QuadformError> {
        if sub.ambient_dim != self.dim {
            return Err(QuadformError::DimensionMismatch { expected: self.dim, got: sub.ambient_dim });
        }
        for b in &sub.basis {
            self.check_dim(b)?;
        }
        if linalg::rank(&sub.basis) != sub.basis.len() {
            return Err(QuadformError::DependentBasis);
        }
        let k = sub.basis.len();
        let mut gram = vec![vec![Rat::zero(); k]; k];
        for i in 0..k {
            for j in i..k {
                let v = self.pair_unchecked(&sub.basis[i], &sub.basis[j]);
                gram[i][j] = v.clone();
                gram[j][i] = v;
            }
        }
        QuadraticSpace::new_degenerate_allowed(gram)
    }

    /// A rational vector of positive square when the form has one, taken
    /// from a positive pivot column of the congruence transform.
    pub fn find_positive_vector(&self) -> Option<Vector> {
        let (d, p) = self.congruence_diagonalize();
        let i = d.iter().position(|v| crate::rat::rat_sign(v) == 1)?;
        Some((0..self.dim).map(|r| p[r][i].clone()).collect())
    }

    /// A nonzero radical vector (pairs to zero with the whole space), if
    /// the form is degenerate.
    pub fn radical_vector(&self) -> Option<Vector> {
        linalg::kernel_basis(&self.gram).into_iter().next()
    }
}

/// A subspace of a quadratic space, carried as an independent basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: Vec<Vector>,
}

impl Subspace {
    pub fn new(ambient_dim: usize, basis: Vec<Vector>) -> Result<Self, QuadformError> {
        for b in &basis {
            if b.len() != ambient_dim {
                return Err(QuadformError::DimensionMismatch { expected: ambient_dim, got: b.len() });
            }
        }
        if linalg::rank(&basis) != basis.len() {
            return Err(QuadformError::DependentBasis);
        }
        Ok(Self { ambient_dim, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Maps coefficients over the subspace basis back to ambient
    /// coordinates.
    pub fn embed(&self, coeffs: &[Rat]) -> Vector {
        assert_eq!(coeffs.len(), self.basis.len(), "embedding shape mismatch");
        let mut out = vec![Rat::zero(); self.ambient_dim];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, bi) in out.iter_mut().zip(b) {
                *o += c * bi;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    pub(crate) fn space(rows: &[&[i64]]) -> QuadraticSpace {
        let gram = rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect();
        QuadraticSpace::new_degenerate_allowed(gram).unwrap()
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn pairing_examples() {
        let hyp = space(&[&[0, 1], &[1, 0]]);
        assert_eq!(hyp.pairing(&v(&[1, 0]), &v(&[0, 1])).unwrap(), rat_int(1));

        let mink = space(&[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]);
        assert_eq!(mink.pairing(&v(&[1, 0, 0, 0]), &v(&[1, 0, 0, 0])).unwrap(), rat_int(1));

        // expand (-2+1) + (1-2) on the chain-lattice block
        let a2 = space(&[&[-2, 1], &[1, -2]]);
        assert_eq!(a2.pairing(&v(&[1, 1]), &v(&[1, 1])).unwrap(), rat_int(-2));

        assert!(hyp.pairing(&v(&[1, 0, 0]), &v(&[0, 1])).is_err());
    }

    #[test]
    fn pairing_is_symmetric() {
        let s = space(&[&[2, 1, 0], &[1, -3, 2], &[0, 2, 0]]);
        let (x, y) = (v(&[1, 2, -1]), v(&[3, 0, 5]));
        assert_eq!(s.pairing(&x, &y).unwrap(), s.pairing(&y, &x).unwrap());
    }

    #[test]
    fn diagonalize_already_diagonal() {
        let s = space(&[&[1, 0], &[0, -1]]);
        let (d, p) = s.congruence_diagonalize();
        assert_eq!(d, vec![rat_int(1), rat_int(-1)]);
        assert_eq!(p, linalg::identity(2));
    }

    #[test]
    fn diagonalize_hyperbolic_plane() {
        let s = space(&[&[0, 1], &[1, 0]]);
        let (d, p) = s.congruence_diagonalize();
        let signs: Vec<i8> = d.iter().map(crate::rat::rat_sign).collect();
        assert_eq!(signs.iter().filter(|&&x| x == 1).count(), 1);
        assert_eq!(signs.iter().filter(|&&x| x == -1).count(), 1);
        check_roundtrip(&s, &d, &p);
    }

    #[test]
    fn diagonalize_chain_block() {
        // pivot on the (1,1) entry: -2, then -2 - 1/(-2) = -3/2
        let s = space(&[&[-2, 1], &[1, -2]]);
        let (d, p) = s.congruence_diagonalize();
        assert_eq!(d, vec![rat_int(-2), rat(-3, 2)]);
        check_roundtrip(&s, &d, &p);
    }

    pub(crate) fn check_roundtrip(s: &QuadraticSpace, d: &[Rat], p: &Mat) {
        let pt = linalg::transpose(p);
        let prod = linalg::mat_mul(&linalg::mat_mul(&pt, s.gram()), p);
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let expect = if i == j { d[i].clone() } else { Rat::zero() };
                assert_eq!(prod[i][j], expect, "mismatch at ({i},{j})");
            }
        }
        assert_eq!(linalg::rank(p), s.dim(), "transform not invertible");
    }

    #[test]
    fn signature_examples() {
        let mink = space(&[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]);
        assert_eq!(mink.signature(), SignatureTriple { pos: 1, zero: 0, neg: 3 });

        // leading principal minors -2, +3: negative definite
        let a2 = space(&[&[-2, 1], &[1, -2]]);
        assert_eq!(a2.signature(), SignatureTriple { pos: 0, zero: 0, neg: 2 });

        let hyp = space(&[&[0, 1], &[1, 0]]);
        assert_eq!(hyp.signature(), SignatureTriple { pos: 1, zero: 0, neg: 1 });
    }

    #[test]
    fn signature_display() {
        let sig = SignatureTriple { pos: 1, zero: 0, neg: 19 };
        assert_eq!(sig.to_string(), "(1,0,19)");
    }

    #[test]
    fn complement_examples() {
        let s = space(&[&[2, 0, 0], &[0, -2, 0], &[0, 0, -2]]);
        let perp = s.orthogonal_complement(&[v(&[0, 1, 0])]).unwrap();
        assert_eq!(perp.basis, vec![v(&[1, 0, 0]), v(&[0, 0, 1])]);

        // an isotropic vector is self-orthogonal
        let d11 = space(&[&[1, 0], &[0, -1]]);
        let perp = d11.orthogonal_complement(&[v(&[1, 1])]).unwrap();
        assert_eq!(perp.dim(), 1);
        assert!(linalg::in_span(&perp.basis, &v(&[1, 1])));

        let full = d11.orthogonal_complement(&[]).unwrap();
        assert_eq!(full.dim(), 2);
    }

    #[test]
    fn restrict_examples() {
        let d11 = space(&[&[1, 0], &[0, -1]]);
        let sub = Subspace::new(2, vec![v(&[1, 1])]).unwrap();
        let r = d11.restrict_form(&sub).unwrap();
        assert_eq!(r.gram(), &vec![vec![rat_int(0)]]);
        assert!(r.degenerate_allowed());

        let s3 = space(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
        let sub = Subspace::new(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let r = s3.restrict_form(&sub).unwrap();
        assert_eq!(r.signature(), SignatureTriple { pos: 1, zero: 0, neg: 1 });

        assert!(Subspace::new(2, vec![v(&[1, 1]), v(&[2, 2])]).is_err());
    }

    #[test]
    fn positive_vector_examples() {
        let d11 = space(&[&[1, 0], &[0, -1]]);
        let p = d11.find_positive_vector().unwrap();
        assert!(d11.square(&p).unwrap() > rat_int(0));

        let a2 = space(&[&[-2, 1], &[1, -2]]);
        assert!(a2.find_positive_vector().is_none());

        let hyp = space(&[&[0, 1], &[1, 0]]);
        let p = hyp.find_positive_vector().unwrap();
        assert!(hyp.square(&p).unwrap() > rat_int(0));
    }

    #[test]
    fn nondegenerate_constructor_rejects_singular() {
        let gram = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(1)]];
        assert!(QuadraticSpace::new(gram.clone()).is_err());
        assert!(QuadraticSpace::new_degenerate_allowed(gram).is_ok());
        let asym = vec![vec![rat_int(0), rat_int(1)], vec![rat_int(2), rat_int(0)]];
        assert!(QuadraticSpace::new_degenerate_allowed(asym).is_err());
    }
}
