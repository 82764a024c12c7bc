//! Python bindings: quadratic spaces, surface models and the decision
//! engine. Rationals cross the boundary as exact strings (`"p"` or
//! `"p/q"`); structured results (verdicts, reports) cross as JSON.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dualcone::cone::{dual_membership, inner_point_test, DualMembership, InnerPointVerdict, SearchConfig};
use dualcone::decide::decide_projectivity;
use dualcone::model::ModelFile;
use dualcone::quadform::QuadraticSpace;
use dualcone::rat::{format_rat, format_rat_vec, parse_rat, Vector};
use dualcone::report::build_decide_report;
use dualcone::suites::{run_suite as run_suite_impl, Suite};
use dualcone::surface::{validate_model, EllipticData, SurfaceModel};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_vec(items: Vec<String>) -> PyResult<Vector> {
    items.iter().map(|s| parse_rat(s).map_err(err)).collect()
}

fn parse_mat(rows: Vec<Vec<String>>) -> PyResult<Vec<Vector>> {
    rows.into_iter().map(parse_vec).collect()
}

fn sig_tuple(sig: dualcone::quadform::SignatureTriple) -> (usize, usize, usize) {
    (sig.pos, sig.zero, sig.neg)
}

fn verdict_json(verdict: &InnerPointVerdict) -> String {
    let value = match verdict {
        InnerPointVerdict::Inner { cert, margin_sq, margin_lambda } => serde_json::json!({
            "status": "inner",
            "interior": format_rat_vec(&cert.interior),
            "cut_coeffs": format_rat_vec(&cert.cut_coeffs),
            "margin_sq": margin_sq.as_ref().map(format_rat),
            "margin_lambda": margin_lambda.as_ref().map(format_rat),
        }),
        InnerPointVerdict::NotInner { cert } => serde_json::json!({
            "status": "not-inner",
            "eta": format_rat_vec(&cert.eta),
        }),
        InnerPointVerdict::Undetermined { reason } => serde_json::json!({
            "status": "undetermined",
            "reason": reason,
        }),
    };
    value.to_string()
}

/// A rational symmetric bilinear form in a fixed basis.
#[pyclass(name = "QuadraticSpace")]
struct PySpace {
    inner: QuadraticSpace,
}

#[pymethods]
impl PySpace {
    #[new]
    fn new(gram: Vec<Vec<String>>) -> PyResult<Self> {
        let gram = parse_mat(gram)?;
        Ok(Self { inner: QuadraticSpace::new_degenerate_allowed(gram).map_err(err)? })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn signature(&self) -> (usize, usize, usize) {
        sig_tuple(self.inner.signature())
    }

    fn pairing(&self, x: Vec<String>, y: Vec<String>) -> PyResult<String> {
        let p = self.inner.pairing(&parse_vec(x)?, &parse_vec(y)?).map_err(err)?;
        Ok(format_rat(&p))
    }

    /// Returns `(d, p)` with `p^T G p = diag(d)` exactly.
    fn congruence_diagonalize(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let (d, p) = self.inner.congruence_diagonalize();
        (format_rat_vec(&d), p.iter().map(|row| format_rat_vec(row)).collect())
    }

    fn orthogonal_complement(&self, vs: Vec<Vec<String>>) -> PyResult<Vec<Vec<String>>> {
        let perp = self.inner.orthogonal_complement(&parse_mat(vs)?).map_err(err)?;
        Ok(perp.basis.iter().map(|b| format_rat_vec(b)).collect())
    }

    fn restricted_signature(&self, basis: Vec<Vec<String>>) -> PyResult<(usize, usize, usize)> {
        let sub = dualcone::quadform::Subspace::new(self.inner.dim(), parse_mat(basis)?).map_err(err)?;
        let restricted = self.inner.restrict_form(&sub).map_err(err)?;
        Ok(sig_tuple(restricted.signature()))
    }

    fn find_positive_vector(&self) -> Option<Vec<String>> {
        self.inner.find_positive_vector().map(|v| format_rat_vec(&v))
    }
}

/// The lattice shadow of a surface plus optional elliptic data.
#[pyclass(name = "SurfaceModel")]
struct PyModel {
    inner: SurfaceModel,
    elliptic: Option<EllipticData>,
}

impl PyModel {
    fn cfg(bound: u32, seed: u64) -> SearchConfig {
        SearchConfig { coefficient_bound: bound.max(1), seed, ..Default::default() }
    }
}

#[pymethods]
impl PyModel {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = ModelFile::from_json(text).map_err(err)?;
        let (inner, elliptic) = file.to_parts().map_err(err)?;
        Ok(Self { inner, elliptic })
    }

    fn to_json(&self) -> String {
        ModelFile::from_parts(&self.inner, self.elliptic.as_ref()).to_json()
    }

    fn kind(&self) -> String {
        self.inner.kind.to_string()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn ns_rank(&self) -> usize {
        self.inner.ns_rank()
    }

    /// Violation messages; an empty list means the model is valid.
    fn validate(&self) -> Vec<String> {
        let mut out: Vec<String> =
            validate_model(&self.inner).iter().map(|v| v.to_string()).collect();
        if let Some(data) = &self.elliptic {
            out.extend(
                dualcone::surface::validate_elliptic(&self.inner, data)
                    .iter()
                    .map(|v| v.to_string()),
            );
        }
        out
    }

    fn signature(&self) -> (usize, usize, usize) {
        sig_tuple(self.inner.space.signature())
    }

    fn ns_signature(&self) -> PyResult<(usize, usize, usize)> {
        Ok(sig_tuple(self.inner.ns_gram().map_err(err)?.signature()))
    }

    /// Restricted signature of the perp of the named curve classes.
    fn perp_signature(&self, names: Vec<String>) -> PyResult<(usize, usize, usize)> {
        let mut constraints = Vec::new();
        for name in &names {
            let curve = self
                .inner
                .curves
                .iter()
                .find(|c| &c.name == name)
                .ok_or_else(|| err(format!("unknown curve class {name:?}")))?;
            constraints.push(curve.class_rat());
        }
        let perp = self.inner.space.orthogonal_complement(&constraints).map_err(err)?;
        let restricted = self.inner.space.restrict_form(&perp).map_err(err)?;
        Ok(sig_tuple(restricted.signature()))
    }

    fn kahler_membership(&self, point: Vec<String>) -> PyResult<bool> {
        let cone = self.inner.cone_model().map_err(err)?;
        cone.kahler_membership(&parse_vec(point)?).map_err(err)
    }

    fn closure_membership(&self, point: Vec<String>) -> PyResult<bool> {
        let cone = self.inner.cone_model().map_err(err)?;
        cone.closure_membership(&parse_vec(point)?).map_err(err)
    }

    /// Inner-point verdict as a JSON object string.
    #[pyo3(signature = (point, bound = 5, seed = 0))]
    fn inner_point_test(&self, point: Vec<String>, bound: u32, seed: u64) -> PyResult<String> {
        let cone = self.inner.cone_model().map_err(err)?;
        let verdict = inner_point_test(&cone, &parse_vec(point)?, &Self::cfg(bound, seed)).map_err(err)?;
        Ok(verdict_json(&verdict))
    }

    fn dual_membership(&self, point: Vec<String>) -> PyResult<String> {
        let cone = self.inner.cone_model().map_err(err)?;
        Ok(match dual_membership(&cone, &parse_vec(point)?).map_err(err)? {
            DualMembership::Member { .. } => "member".to_string(),
            DualMembership::NotMember { .. } => "not-member".to_string(),
            DualMembership::Undetermined => "undetermined".to_string(),
        })
    }

    /// Full decision report as a JSON string; see `verify_report`.
    #[pyo3(signature = (bound = 5, seed = 0))]
    fn decide(&self, bound: u32, seed: u64) -> PyResult<String> {
        let started = std::time::Instant::now();
        let verdict = decide_projectivity(&self.inner, &Self::cfg(bound, seed)).map_err(err)?;
        let file = ModelFile::from_parts(&self.inner, self.elliptic.as_ref());
        let report = build_decide_report(
            &file,
            &verdict,
            seed,
            bound.max(1),
            started.elapsed().as_millis() as u64,
        );
        Ok(report.to_json())
    }

    /// Fiber-class consistency report as a JSON object string; requires
    /// elliptic data.
    #[pyo3(signature = (bound = 5, seed = 0))]
    fn elliptic_check(&self, bound: u32, seed: u64) -> PyResult<String> {
        let data = self.elliptic.as_ref().ok_or_else(|| err("model carries no elliptic data"))?;
        let report =
            dualcone::decide::elliptic_consistency_check(&self.inner, data, &Self::cfg(bound, seed))
                .map_err(err)?;
        Ok(serde_json::json!({
            "inner": report.inner_status,
            "fiber_pairing": format_rat(&report.fiber_pairing),
            "contradiction": report.contradiction,
            "bound": report.bound.as_ref().map(|n| n.to_string()),
            "boosted_square": report.boosted_square.as_ref().map(format_rat),
        })
        .to_string())
    }
}

/// Generated K3-kind chain model with `m` (-2)-curves.
#[pyfunction]
fn construct_k3_am(m: usize) -> PyResult<PyModel> {
    let inner = dualcone::surface::construct_k3_am(m).map_err(err)?;
    Ok(PyModel { inner, elliptic: None })
}

/// Negated Cartan matrix of a length-`m` chain, as rational strings.
#[pyfunction]
fn am_gram(m: usize) -> PyResult<Vec<Vec<String>>> {
    let gram = dualcone::surface::am_gram(m).map_err(err)?;
    Ok(gram.iter().map(|row| format_rat_vec(row)).collect())
}

/// Smallest nonnegative integer `n` with `m_sq + 2 n mf > 0`, as a
/// decimal string.
#[pyfunction]
fn elliptic_positivity_bound(m_sq: &str, mf: &str) -> PyResult<String> {
    let m_sq = parse_rat(m_sq).map_err(err)?;
    let mf = parse_rat(mf).map_err(err)?;
    Ok(dualcone::surface::elliptic_positivity_bound(&m_sq, &mf).map_err(err)?.to_string())
}

/// Runs a seeded property suite and returns its summary line.
#[pyfunction]
fn run_suite(suite: &str, trials: usize, seed: u64) -> PyResult<String> {
    let suite = Suite::parse(suite).ok_or_else(|| err(format!("unknown suite {suite:?}")))?;
    Ok(run_suite_impl(suite, trials, seed).to_string())
}

/// Re-verifies every certificate in a decision report; raises on failure.
#[pyfunction]
fn verify_report(text: &str) -> PyResult<()> {
    let report = dualcone::report::Report::from_json(text).map_err(err)?;
    dualcone::report::verify_report(&report).map_err(err)
}

#[pyfunction]
fn version() -> &'static str {
    dualcone::VERSION
}

#[pymodule]
fn dualcone_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpace>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(construct_k3_am, m)?)?;
    m.add_function(wrap_pyfunction!(am_gram, m)?)?;
    m.add_function(wrap_pyfunction!(elliptic_positivity_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(verify_report, m)?)?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    Ok(())
}
