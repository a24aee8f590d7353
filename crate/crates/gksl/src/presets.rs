//! Built-in documents and named experiment presets, addressable from the CLI
//! by `paper:` ids so the reference experiments run without hand-built input
//! files.

use crate::documents::{GeneratorDocument, PerturbationDocument};
use crate::generators::{GeneratorSpec, KossakowskiMatrix};
use crate::numerics::{real, ComplexMatrix};
use crate::Result;

/// Unit rates on all three axes: generates the completely positive
/// elementary semigroup.
pub fn isotropic_rates() -> KossakowskiMatrix {
    KossakowskiMatrix::identity(3)
}

/// Indefinite rates diag(1, -1, 1): generates the elementary semigroup that
/// is positive but not completely positive.
pub fn indefinite_rates() -> KossakowskiMatrix {
    KossakowskiMatrix::from_real_diagonal(&[1.0, -1.0, 1.0])
}

/// Hermitian perturbation direction diag(0, -2, 0) used by the interval
/// preset; against the isotropic rates it gives ε0 = 1/2 in closed form.
pub fn perturbation_direction() -> ComplexMatrix {
    let mut gamma = ComplexMatrix::zeros(3, 3);
    gamma[(1, 1)] = real(-2.0);
    gamma
}

fn generator_document(c: KossakowskiMatrix) -> GeneratorDocument {
    let spec = GeneratorSpec::dissipative(2, c).expect("valid preset generator");
    GeneratorDocument::from_spec(&spec).expect("preset generator serializes")
}

/// Document presets usable wherever a document path is expected.
pub fn document(name: &str) -> Option<String> {
    match name {
        "paper:c1" => Some(crate::documents::to_json(&generator_document(isotropic_rates()))),
        "paper:c2" => Some(crate::documents::to_json(&generator_document(
            indefinite_rates(),
        ))),
        "paper:perturbation" => Some(crate::documents::to_json(&PerturbationDocument::new(
            &perturbation_direction(),
        ))),
        _ => None,
    }
}

/// Experiment presets: each expands to a full command invocation.
pub fn experiment(name: &str) -> Option<Vec<String>> {
    match name {
        "paper:counterexample" => Some(vec!["counterexample".into()]),
        "paper:lemma1" => Some(vec![
            "lemma1".into(),
            "paper:c1".into(),
            "paper:c2".into(),
        ]),
        "paper:perturb" => Some(vec![
            "perturb".into(),
            "paper:c1".into(),
            "paper:perturbation".into(),
            "--eps-max".into(),
            "10".into(),
        ]),
        _ => None,
    }
}

pub const DOCUMENT_PRESETS: [&str; 3] = ["paper:c1", "paper:c2", "paper:perturbation"];
pub const EXPERIMENT_PRESETS: [&str; 3] = ["paper:counterexample", "paper:lemma1", "paper:perturb"];

/// Resolves a CLI document argument: a `paper:` preset id or a file path.
pub fn resolve_document_text(arg: &str) -> Result<String> {
    if let Some(text) = document(arg) {
        return Ok(text);
    }
    if arg.starts_with("paper:") {
        return Err(crate::Error::Document(format!(
            "unknown preset {arg:?}; document presets: {DOCUMENT_PRESETS:?}"
        )));
    }
    Ok(std::fs::read_to_string(arg)?)
}
