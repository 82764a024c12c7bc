//! Exact-arithmetic projectivity decisions for lattice models of compact
//! Kähler surfaces.
//!
//! The library works on the lattice shadow of a surface: a rational
//! quadratic space of signature `(1, n-1)` standing in for the real (1,1)
//! classes with the intersection form, a marked Kähler-side class, a
//! Néron-Severi sublattice and a list of curve classes. On that data it
//! decides whether the dual of the Kähler cone contains an inner integral
//! point, which for K3 and torus models settles projectivity. Every
//! verdict carries a rational certificate that re-verifies by pairing
//! arithmetic alone.

// index loops over symmetric matrices read better than iterator chains
#![allow(clippy::needless_range_loop)]

pub mod cone;
pub mod decide;
pub mod linalg;
pub mod model;
pub mod quadform;
pub mod rat;
pub mod report;
pub mod suites;
pub mod surface;

pub use cone::{ConeModel, InnerPointVerdict, PositiveConeComponent, SearchConfig};
pub use decide::{IntegralClass, Obstruction, ProjectivityVerdict};
pub use quadform::{QuadraticSpace, SignatureTriple, Subspace};
pub use rat::{Rat, Vector};
pub use surface::{CurveClass, EllipticData, SurfaceKind, SurfaceModel};

/// Library version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
