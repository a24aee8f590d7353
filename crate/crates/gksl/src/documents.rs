//! The one structured document format used for generators, perturbations and
//! every report the tool emits: JSON with complex entries encoded as nested
//! arrays of [re, im] pairs, a mandatory version field, and unknown fields
//! rejected rather than ignored.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::generators::{GeneratorSpec, KossakowskiMatrix, TracelessBasis};
use crate::numerics::{max_abs, ComplexMatrix, ComplexVector};
use crate::{Error, Result};

pub const DOCUMENT_VERSION: u32 = 1;
pub const BASIS_TAG_GELL_MANN: &str = "gell-mann-orthonormal";

pub type ComplexPair = [f64; 2];
pub type MatrixData = Vec<Vec<ComplexPair>>;
pub type VectorData = Vec<ComplexPair>;

pub fn matrix_to_data(m: &ComplexMatrix) -> MatrixData {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn data_to_matrix(data: &MatrixData) -> Result<ComplexMatrix> {
    let rows = data.len();
    if rows == 0 {
        return Err(Error::Document("empty matrix".into()));
    }
    let cols = data[0].len();
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Document(format!(
                "ragged matrix: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(data[i][j][0], data[i][j][1])
    }))
}

pub fn vector_to_data(v: &ComplexVector) -> VectorData {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn data_to_vector(data: &VectorData) -> ComplexVector {
    ComplexVector::from_iterator(data.len(), data.iter().map(|p| Complex64::new(p[0], p[1])))
}

fn check_version(version: u32) -> Result<()> {
    if version != DOCUMENT_VERSION {
        return Err(Error::Document(format!(
            "unsupported document version {version}, expected {DOCUMENT_VERSION}"
        )));
    }
    Ok(())
}

fn check_kind(kind: &str, expected: &str) -> Result<()> {
    if kind != expected {
        return Err(Error::Document(format!(
            "wrong document kind {kind:?}, expected {expected:?}"
        )));
    }
    Ok(())
}

/// Serialized GeneratorSpec. Only the Gell-Mann basis tag is supported; the
/// coefficient matrix is interpreted in that fixed, documented ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDocument {
    pub version: u32,
    pub kind: String,
    pub n: usize,
    pub hamiltonian: MatrixData,
    pub kossakowski: MatrixData,
    pub basis: String,
}

impl GeneratorDocument {
    pub fn from_spec(spec: &GeneratorSpec) -> Result<Self> {
        let reference = TracelessBasis::gell_mann(spec.n())?;
        for (a, b) in spec.basis().matrices().iter().zip(reference.matrices()) {
            if max_abs(&(a - b)) > 1e-12 {
                return Err(Error::Document(
                    "only generators in the gell-mann-orthonormal basis are serializable".into(),
                ));
            }
        }
        Ok(GeneratorDocument {
            version: DOCUMENT_VERSION,
            kind: "generator".into(),
            n: spec.n(),
            hamiltonian: matrix_to_data(spec.hamiltonian()),
            kossakowski: matrix_to_data(spec.kossakowski().matrix()),
            basis: BASIS_TAG_GELL_MANN.into(),
        })
    }

    pub fn to_spec(&self) -> Result<GeneratorSpec> {
        check_version(self.version)?;
        check_kind(&self.kind, "generator")?;
        if self.basis != BASIS_TAG_GELL_MANN {
            return Err(Error::Document(format!(
                "unknown basis tag {:?}, expected {BASIS_TAG_GELL_MANN:?}",
                self.basis
            )));
        }
        let hamiltonian = data_to_matrix(&self.hamiltonian)?;
        let kossakowski = KossakowskiMatrix::new(data_to_matrix(&self.kossakowski)?)?;
        GeneratorSpec::new(hamiltonian, kossakowski, TracelessBasis::gell_mann(self.n)?)
    }
}

/// Hermitian perturbation direction Γ for the interval analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationDocument {
    pub version: u32,
    pub kind: String,
    pub dim: usize,
    pub gamma: MatrixData,
}

impl PerturbationDocument {
    pub fn new(gamma: &ComplexMatrix) -> Self {
        PerturbationDocument {
            version: DOCUMENT_VERSION,
            kind: "perturbation".into(),
            dim: gamma.nrows(),
            gamma: matrix_to_data(gamma),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        check_version(self.version)?;
        check_kind(&self.kind, "perturbation")?;
        let gamma = data_to_matrix(&self.gamma)?;
        if gamma.nrows() != self.dim || gamma.ncols() != self.dim {
            return Err(Error::Document(format!(
                "gamma is {}x{}, dim field says {}",
                gamma.nrows(),
                gamma.ncols(),
                self.dim
            )));
        }
        Ok(gamma)
    }
}

/// Certificate emitted by the CP check: both analysis routes side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CpCertificateDocument {
    pub version: u32,
    pub kind: String,
    pub verdict: String,
    pub min_choi_eigenvalue: Option<f64>,
    pub min_kossakowski_eigenvalue: Option<f64>,
    pub tolerance: f64,
    pub seed: u64,
    /// Times at which the Choi spectrum of exp(Lt) was evaluated.
    pub choi_times: Vec<f64>,
    /// Eigenvector of the coefficient matrix for its most negative
    /// eigenvalue, present when the verdict is not-cp.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<VectorData>,
}

/// Serialized positivity search report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositivityDocument {
    pub version: u32,
    pub kind: String,
    pub verdict: String,
    pub min_eigenvalue_found: f64,
    pub witness_state: VectorData,
    pub witness_time: f64,
    pub samples_used: usize,
    pub refinement_steps: usize,
    pub seed: u64,
    pub budget: usize,
    pub grid: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakdownWitnessData {
    pub xi: VectorData,
    pub phi: MatrixData,
    pub psi: MatrixData,
    pub l_value: f64,
    pub quadratic_form: f64,
    pub short_time: f64,
    pub short_time_value: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumConditionDocument {
    pub version: u32,
    pub kind: String,
    pub holds: bool,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BreakdownWitnessData>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleDocument {
    pub version: u32,
    pub kind: String,
    pub rate: f64,
    pub mu_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub varphi_grid: Vec<f64>,
    pub time_grid: Vec<f64>,
    pub points_checked: usize,
    pub max_closed_form_residual: f64,
    pub max_eigenvalue_mismatch: f64,
    pub min_z_eigenvalue: f64,
    pub min_state_eigenvalue: f64,
    /// Smallest z value found by the dense scan plus local refinement.
    pub refined_z_minimum: f64,
    pub closed_form_ok: bool,
    pub eigenvalue_match_ok: bool,
    pub z_nonnegative_ok: bool,
    pub state_positive_ok: bool,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationReportDocument {
    pub version: u32,
    pub kind: String,
    pub eps_max: f64,
    pub epsilon_0: f64,
    pub tolerance: f64,
    pub base_min_eigenvalue: f64,
    /// ε values sampled inside [0, ε0] that all passed the CP test.
    pub grid_points: Vec<f64>,
    pub grid_all_cp: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrausDocument {
    pub version: u32,
    pub kind: String,
    pub n: usize,
    pub time: f64,
    pub operators: Vec<MatrixData>,
    pub weights: Vec<f64>,
    pub completeness_residual: f64,
    pub reconstruction_residual: f64,
}

/// Pretty JSON with a trailing newline; field order is fixed by the structs,
/// so identical inputs produce byte-identical documents.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize infallibly");
    text.push('\n');
    text
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
}

pub fn read_generator(path: &Path) -> Result<GeneratorDocument> {
    parse(&fs::read_to_string(path)?)
}

/// Write-then-rename so readers never observe a half-written document.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::real;

    fn sample_generator() -> GeneratorSpec {
        GeneratorSpec::dissipative(2, KossakowskiMatrix::from_real_diagonal(&[1.0, -1.0, 1.0]))
            .unwrap()
    }

    #[test]
    fn generator_document_round_trip() {
        let spec = sample_generator();
        let doc = GeneratorDocument::from_spec(&spec).unwrap();
        let text = to_json(&doc);
        let parsed: GeneratorDocument = parse(&text).unwrap();
        assert_eq!(doc, parsed);
        let back = parsed.to_spec().unwrap();
        assert_eq!(back.n(), 2);
        assert!(max_abs(&(back.kossakowski().matrix() - spec.kossakowski().matrix())) == 0.0);
        assert!(max_abs(&(back.hamiltonian() - spec.hamiltonian())) == 0.0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let spec = sample_generator();
        let doc = GeneratorDocument::from_spec(&spec).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&to_json(&doc)).unwrap();
        value["surprise"] = serde_json::json!(1);
        let text = serde_json::to_string(&value).unwrap();
        let err = parse::<GeneratorDocument>(&text).unwrap_err();
        assert!(err.to_string().contains("surprise"), "{err}");
    }

    #[test]
    fn version_and_kind_are_checked() {
        let spec = sample_generator();
        let mut doc = GeneratorDocument::from_spec(&spec).unwrap();
        doc.version = 2;
        assert!(doc.to_spec().is_err());
        let mut doc = GeneratorDocument::from_spec(&spec).unwrap();
        doc.kind = "perturbation".into();
        assert!(doc.to_spec().is_err());
        let mut doc = GeneratorDocument::from_spec(&spec).unwrap();
        doc.basis = "pauli".into();
        assert!(doc.to_spec().is_err());
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse::<GeneratorDocument>("{\n  \"version\": 1,\n  broken\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        let data = vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0]]];
        assert!(data_to_matrix(&data).is_err());
    }

    #[test]
    fn serialization_is_deterministic() {
        let spec = sample_generator();
        let a = to_json(&GeneratorDocument::from_spec(&spec).unwrap());
        let b = to_json(&GeneratorDocument::from_spec(&spec).unwrap());
        assert_eq!(a.as_bytes(), b.as_bytes());
    }

    #[test]
    fn non_hermitian_kossakowski_in_document_is_rejected() {
        let spec = sample_generator();
        let mut doc = GeneratorDocument::from_spec(&spec).unwrap();
        doc.kossakowski[0][1] = [0.0, 1e-6];
        assert!(doc.to_spec().is_err());
    }

    #[test]
    fn perturbation_document_round_trip() {
        let mut gamma = ComplexMatrix::zeros(3, 3);
        gamma[(1, 1)] = real(-2.0);
        let doc = PerturbationDocument::new(&gamma);
        let parsed: PerturbationDocument = parse(&to_json(&doc)).unwrap();
        assert!(max_abs(&(parsed.to_matrix().unwrap() - gamma)) == 0.0);
    }
}
