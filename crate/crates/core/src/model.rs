//! The model file format (version 1, frozen by the golden files).
//!
//! A model file is a JSON document with exact rational entries spelled as
//! strings (`"p"` or `"p/q"`), never floats, so parse/serialize round
//! trips are bit-exact. Integer data (Néron-Severi basis, curve classes,
//! elliptic classes) uses plain JSON integers.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadform::{QuadformError, QuadraticSpace};
use crate::rat::{format_rat, format_rat_vec, parse_rat, Mat, Vector};
use crate::surface::{CurveClass, EllipticData, SurfaceKind, SurfaceModel};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("unknown kind {0:?}")]
    UnknownKind(String),
    #[error("{0}")]
    Rational(String),
    #[error("declared dim {declared} does not match gram size {actual}")]
    DimMismatch { declared: usize, actual: usize },
    #[error(transparent)]
    Quadform(#[from] QuadformError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub name: String,
    pub class: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticEntry {
    pub m: Vec<i64>,
    pub f: Vec<i64>,
}

/// Serialized form of a surface model plus optional elliptic data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub version: u32,
    pub kind: String,
    pub dim: usize,
    pub gram: Vec<Vec<String>>,
    pub kappa_ref: Vec<String>,
    pub ns_basis: Vec<Vec<i64>>,
    pub curves: Vec<CurveEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elliptic: Option<EllipticEntry>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return Err(ModelError::UnsupportedVersion(file.version));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("model serialization cannot fail");
        out.push('\n');
        out
    }

    /// Decodes into the in-memory model; lattice-level validation is a
    /// separate step.
    pub fn to_parts(&self) -> Result<(SurfaceModel, Option<EllipticData>), ModelError> {
        let kind = SurfaceKind::parse(&self.kind)
            .ok_or_else(|| ModelError::UnknownKind(self.kind.clone()))?;
        if self.dim != self.gram.len() {
            return Err(ModelError::DimMismatch { declared: self.dim, actual: self.gram.len() });
        }
        let gram: Mat = self
            .gram
            .iter()
            .map(|row| row.iter().map(|s| parse_rat(s)).collect::<Result<Vector, _>>())
            .collect::<Result<_, _>>()
            .map_err(ModelError::Rational)?;
        let space = QuadraticSpace::new_degenerate_allowed(gram)?;
        let kappa_ref: Vector = self
            .kappa_ref
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<_, _>>()
            .map_err(ModelError::Rational)?;
        let ns_basis: Vec<Vec<BigInt>> = self
            .ns_basis
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let curves: Vec<CurveClass> = self
            .curves
            .iter()
            .map(|c| CurveClass {
                name: c.name.clone(),
                class: c.class.iter().map(|&x| BigInt::from(x)).collect(),
            })
            .collect();
        let elliptic = self.elliptic.as_ref().map(|e| EllipticData {
            m_class: e.m.iter().map(|&x| BigInt::from(x)).collect(),
            fiber: e.f.iter().map(|&x| BigInt::from(x)).collect(),
        });
        Ok((SurfaceModel { kind, space, kappa_ref, ns_basis, curves }, elliptic))
    }

    pub fn from_parts(model: &SurfaceModel, elliptic: Option<&EllipticData>) -> Self {
        let to_i64 = |v: &[BigInt]| -> Vec<i64> {
            v.iter()
                .map(|x| i64::try_from(x).expect("integer entry exceeds the file format range"))
                .collect()
        };
        Self {
            version: FORMAT_VERSION,
            kind: model.kind.as_str().to_string(),
            dim: model.dim(),
            gram: model.space.gram().iter().map(|row| format_rat_vec(row)).collect(),
            kappa_ref: format_rat_vec(&model.kappa_ref),
            ns_basis: model.ns_basis.iter().map(|b| to_i64(b)).collect(),
            curves: model
                .curves
                .iter()
                .map(|c| CurveEntry { name: c.name.clone(), class: to_i64(&c.class) })
                .collect(),
            elliptic: elliptic.map(|e| EllipticEntry { m: to_i64(&e.m_class), f: to_i64(&e.fiber) }),
        }
    }
}

/// Parses a comma-separated list of rational point coordinates, as taken
/// by the `--point` flag.
pub fn parse_point(s: &str) -> Result<Vector, String> {
    s.split(',')
        .map(|part| parse_rat(part.trim()))
        .collect()
}

pub fn format_point(v: &[crate::rat::Rat]) -> String {
    v.iter().map(format_rat).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{construct_k3_am, validate_model};

    #[test]
    fn round_trip_generated_model() {
        let model = construct_k3_am(3).unwrap();
        let file = ModelFile::from_parts(&model, None);
        let text = file.to_json();
        let reparsed = ModelFile::from_json(&text).unwrap();
        assert_eq!(file, reparsed);
        let (model2, elliptic) = reparsed.to_parts().unwrap();
        assert_eq!(model, model2);
        assert!(elliptic.is_none());
        assert!(validate_model(&model2).is_empty());
    }

    #[test]
    fn serialization_is_byte_stable() {
        let a = ModelFile::from_parts(&construct_k3_am(5).unwrap(), None).to_json();
        let b = ModelFile::from_parts(&construct_k3_am(5).unwrap(), None).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_version_and_kind() {
        let model = construct_k3_am(0).unwrap();
        let mut file = ModelFile::from_parts(&model, None);
        file.version = 2;
        let text = serde_json::to_string(&file).unwrap();
        assert!(ModelFile::from_json(&text).is_err());

        file.version = 1;
        file.kind = "abelian".into();
        assert!(file.to_parts().is_err());
    }

    #[test]
    fn rejects_bad_rational_strings() {
        let model = construct_k3_am(0).unwrap();
        let mut file = ModelFile::from_parts(&model, None);
        file.gram[0][0] = "1.5".into();
        assert!(matches!(file.to_parts(), Err(ModelError::Rational(_))));
    }

    #[test]
    fn parse_point_accepts_rationals() {
        let p = parse_point("1, -2, 3/4").unwrap();
        assert_eq!(format_point(&p), "1,-2,3/4");
        assert!(parse_point("1, x").is_err());
    }
}
