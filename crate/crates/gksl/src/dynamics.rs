//! Semigroup maps γ_t = exp(Lt), state evolution, and the n = 2
//! coherence-vector view with the closed-form elementary evolutions.

use std::io::Write;

use num_complex::Complex64;

use crate::generators::SuperoperatorMatrix;
use crate::numerics::{
    self, matrix_exponential, pauli, real, ComplexMatrix, ComplexVector, Tolerances,
};
use crate::{Error, Result};

/// Geometric default grid covering transient and asymptotic regimes for rates
/// of order one.
pub const DEFAULT_TIME_GRID: [f64; 9] = [0.0, 0.01, 0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0];

/// Positive unit-trace Hermitian matrix; the evolving state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (min eigenvalue >= -1e-10).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let tol = Tolerances::default();
        numerics::require_hermitian(&matrix, tol.hermiticity)
            .map_err(|e| Error::InvalidState(e.to_string()))?;
        let trace = matrix.trace();
        if (trace - real(1.0)).norm() > tol.hermiticity {
            return Err(Error::InvalidState(format!(
                "trace residual {:.3e}",
                (trace - real(1.0)).norm()
            )));
        }
        let min_eig = numerics::min_eigenvalue(&matrix)?;
        if min_eig < -tol.positivity_slack {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.6e}"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    /// |psi><psi| / <psi|psi>.
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let norm = psi.norm();
        if norm < 1e-12 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let normalized = psi / real(norm);
        Ok(DensityMatrix {
            matrix: numerics::projector(&normalized),
        })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(n, n).scale(1.0 / n as f64),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Tr(rho²).
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        numerics::min_eigenvalue(&self.matrix).expect("density matrix is Hermitian")
    }

    pub fn expectation(&self, observable: &ComplexMatrix) -> Result<f64> {
        numerics::expectation(observable, &self.matrix)
    }
}

/// Raw output of a (possibly non-positive) map applied to a state. Negative
/// eigenvalues are data here, never clipped.
#[derive(Debug, Clone)]
pub struct EvolvedState {
    pub matrix: ComplexMatrix,
    pub min_eigenvalue: f64,
    pub trace_residual: f64,
    pub hermiticity_residual: f64,
}

impl EvolvedState {
    fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let hermiticity_residual = numerics::hermiticity_residual(&matrix);
        let trace_residual = (matrix.trace() - real(1.0)).norm();
        let sym = (&matrix + matrix.adjoint()).scale(0.5);
        let min_eigenvalue = numerics::min_eigenvalue(&sym)?;
        Ok(EvolvedState {
            matrix,
            min_eigenvalue,
            trace_residual,
            hermiticity_residual,
        })
    }

    /// Converts into a validated state; fails if positivity was lost.
    pub fn into_density_matrix(self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix)
    }
}

/// γ_t = exp(Lt). The semigroup is defined only for t >= 0; at t = 0 this is
/// the identity superoperator exactly.
pub fn evolution_map(l: &SuperoperatorMatrix, t: f64) -> Result<SuperoperatorMatrix> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "semigroup parameter must be >= 0, got {t}"
        )));
    }
    SuperoperatorMatrix::from_matrix(l.n(), matrix_exponential(l.matrix(), t)?)
}

/// Evolves rho0 under exp(Lt). The output is not projected onto positive
/// matrices; its minimum eigenvalue is reported instead.
pub fn evolve_state(l: &SuperoperatorMatrix, rho0: &DensityMatrix, t: f64) -> Result<EvolvedState> {
    let map = evolution_map(l, t)?;
    EvolvedState::from_matrix(map.apply(rho0.matrix())?)
}

/// Closed-system evolution U rho0 U† with U = exp(-iHt).
pub fn unitary_evolution(h: &ComplexMatrix, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    numerics::require_hermitian(h, Tolerances::default().hermiticity)?;
    if h.nrows() != rho0.n() {
        return Err(Error::DimensionMismatch {
            expected: rho0.n(),
            actual: h.nrows(),
        });
    }
    let u = matrix_exponential(&h.map(|x| x * (-numerics::I)), t)?;
    DensityMatrix::new(&u * rho0.matrix() * u.adjoint())
}

/// Expansion coefficients of a 2 x 2 Hermitian matrix over {σ0, σ1, σ2, σ3}:
/// rho = Σ_μ ρ^μ σ_μ with ρ^μ = Tr(rho σ_μ)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceVector {
    pub components: [f64; 4],
}

impl CoherenceVector {
    pub fn new(components: [f64; 4]) -> Self {
        CoherenceVector { components }
    }

    pub fn from_hermitian(m: &ComplexMatrix) -> Result<Self> {
        if m.nrows() != 2 || m.ncols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: m.nrows(),
            });
        }
        numerics::require_hermitian(m, Tolerances::default().hermiticity)?;
        let mut components = [0.0; 4];
        for (k, c) in components.iter_mut().enumerate() {
            *c = (pauli(k) * m).trace().re * 0.5;
        }
        Ok(CoherenceVector { components })
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2, 2);
        for (k, &c) in self.components.iter().enumerate() {
            m += pauli(k).scale(c);
        }
        m
    }

    /// Σ_{i=1..3} (ρ^i)²; at most 1/4 for positive unit-trace states.
    pub fn bloch_norm_squared(&self) -> f64 {
        self.components[1..].iter().map(|x| x * x).sum()
    }
}

pub fn to_coherence_vector(rho: &DensityMatrix) -> Result<CoherenceVector> {
    CoherenceVector::from_hermitian(rho.matrix())
}

pub fn from_coherence_vector(v: &CoherenceVector) -> ComplexMatrix {
    v.to_matrix()
}

/// The two elementary single-qubit evolutions of the factorized
/// counterexample, identified by which coherence components they damp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementaryMap {
    /// All three components decay at the given rate.
    DampAll,
    /// Only the second component decays; the others are frozen.
    DampSecond,
}

/// Closed-form action of the elementary evolutions on a coherence vector.
pub fn closed_form_elementary(
    which: ElementaryMap,
    v: &CoherenceVector,
    t: f64,
    rate: f64,
) -> CoherenceVector {
    let damping = (-rate * t).exp();
    let [c0, c1, c2, c3] = v.components;
    match which {
        ElementaryMap::DampAll => {
            CoherenceVector::new([c0, damping * c1, damping * c2, damping * c3])
        }
        ElementaryMap::DampSecond => CoherenceVector::new([c0, c1, damping * c2, c3]),
    }
}

/// Writes one row per grid time: t, the state entries re/im interleaved in
/// row-major order, the minimum eigenvalue and the trace residual.
pub fn write_trajectory<W: Write>(
    out: &mut W,
    l: &SuperoperatorMatrix,
    rho0: &DensityMatrix,
    grid: &[f64],
) -> Result<()> {
    let n = rho0.n();
    write!(out, "t")?;
    for i in 0..n {
        for j in 0..n {
            write!(out, ",rho_{i}{j}_re,rho_{i}{j}_im")?;
        }
    }
    writeln!(out, ",min_eigenvalue,trace_residual")?;
    for &t in grid {
        let state = evolve_state(l, rho0, t)?;
        write!(out, "{t}")?;
        for i in 0..n {
            for j in 0..n {
                let z: Complex64 = state.matrix[(i, j)];
                write!(out, ",{},{}", z.re, z.im)?;
            }
        }
        writeln!(out, ",{},{}", state.min_eigenvalue, state.trace_residual)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{GeneratorSpec, KossakowskiMatrix};
    use crate::numerics::{max_abs, min_eigenvalue, random_hermitian, sample_rng};
    use approx::assert_abs_diff_eq;

    fn damp_all_generator(rate: f64) -> GeneratorSpec {
        GeneratorSpec::dissipative(2, KossakowskiMatrix::identity(3).scaled(rate / 2.0)).unwrap()
    }

    fn damp_second_generator(rate: f64) -> GeneratorSpec {
        GeneratorSpec::dissipative(
            2,
            KossakowskiMatrix::from_real_diagonal(&[1.0, -1.0, 1.0]).scaled(rate / 2.0),
        )
        .unwrap()
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2, 2).scale(0.5)).is_ok());
        // Wrong trace.
        assert!(DensityMatrix::new(ComplexMatrix::identity(2, 2)).is_err());
        // Negative eigenvalue.
        let m = (ComplexMatrix::identity(2, 2) + pauli(3).scale(1.2)).scale(0.5);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn evolution_map_of_zero_generator_is_identity() {
        let l = SuperoperatorMatrix::from_matrix(2, ComplexMatrix::zeros(4, 4)).unwrap();
        for t in [0.0, 0.3, 5.0] {
            let m = evolution_map(&l, t).unwrap();
            assert!(max_abs(&(m.matrix() - ComplexMatrix::identity(4, 4))) < 1e-15);
        }
    }

    #[test]
    fn evolution_map_rejects_negative_time() {
        let l = SuperoperatorMatrix::from_matrix(2, ComplexMatrix::zeros(4, 4)).unwrap();
        assert!(evolution_map(&l, -0.1).is_err());
    }

    #[test]
    fn damp_all_map_scales_every_pauli_component() {
        let l = damp_all_generator(4.0).superoperator();
        let t = 0.37;
        let map = evolution_map(&l, t).unwrap();
        let damping = (-4.0 * t).exp();
        for k in 1..=3 {
            let out = map.apply(&pauli(k)).unwrap();
            assert!(max_abs(&(out - pauli(k).scale(damping))) < 1e-12, "sigma_{k}");
        }
        let out = map.apply(&pauli(0)).unwrap();
        assert!(max_abs(&(out - pauli(0))) < 1e-12);
    }

    #[test]
    fn semigroup_composition() {
        let l = damp_second_generator(4.0).superoperator();
        let a = evolution_map(&l, 0.3).unwrap();
        let b = evolution_map(&l, 0.7).unwrap();
        let c = evolution_map(&l, 1.0).unwrap();
        assert!(max_abs(&(a.compose(&b).unwrap().matrix() - c.matrix())) < 1e-10);
    }

    #[test]
    fn evolve_state_at_zero_is_identity() {
        let l = damp_all_generator(4.0).superoperator();
        let rho = DensityMatrix::new((pauli(0) + pauli(1).scale(0.6)).scale(0.5)).unwrap();
        let out = evolve_state(&l, &rho, 0.0).unwrap();
        assert!(max_abs(&(&out.matrix - rho.matrix())) < 1e-15);
    }

    #[test]
    fn damp_second_map_fixes_sigma1_states() {
        let l = damp_second_generator(4.0).superoperator();
        let rho = DensityMatrix::new((pauli(0) + pauli(1)).scale(0.5)).unwrap();
        for &t in &DEFAULT_TIME_GRID {
            let out = evolve_state(&l, &rho, t).unwrap();
            assert!(max_abs(&(&out.matrix - rho.matrix())) < 1e-12, "t={t}");
        }
    }

    #[test]
    fn damp_all_purity_decreases_to_half() {
        // Oracle: closed form — purity of a pure state under uniform damping
        // is (1 + e^{-2 rate t} · r²)/2 with r = 1.
        let l = damp_all_generator(4.0).superoperator();
        let psi = ComplexVector::from_column_slice(&[real(0.8), real(0.6)]);
        let rho = DensityMatrix::pure(&psi).unwrap();
        let mut last = 1.0 + 1e-15;
        for &t in &DEFAULT_TIME_GRID {
            let out = evolve_state(&l, &rho, t).unwrap();
            let purity = (&out.matrix * &out.matrix).trace().re;
            let want = 0.5 * (1.0 + (-8.0 * t).exp());
            assert_abs_diff_eq!(purity, want, epsilon = 1e-10);
            assert!(purity <= last + 1e-12);
            last = purity;
        }
        assert!((last - 0.5).abs() < 1e-10);
    }

    #[test]
    fn trace_and_hermiticity_preserved_on_grid() {
        // Positive semidefinite rates keep the semigroup bounded out to t = 10,
        // where absolute residuals at 1e-12 are meaningful.
        let mut rng = sample_rng(21, 0);
        for _ in 0..5 {
            let gauss = crate::numerics::random_gaussian_matrix(3, &mut rng);
            let psd = &gauss * gauss.adjoint();
            let g = GeneratorSpec::new(
                random_hermitian(2, &mut rng),
                KossakowskiMatrix::new(psd).unwrap(),
                crate::generators::TracelessBasis::gell_mann(2).unwrap(),
            )
            .unwrap();
            let l = g.superoperator();
            let rho = DensityMatrix::maximally_mixed(2);
            for t in [0.0, 0.1, 1.0, 10.0] {
                let out = evolve_state(&l, &rho, t).unwrap();
                assert!(out.trace_residual < 1e-12, "t={t}");
                assert!(out.hermiticity_residual < 1e-12, "t={t}");
            }
        }
    }

    #[test]
    fn unitary_evolution_examples() {
        let rho = DensityMatrix::new((pauli(0) + pauli(1)).scale(0.5)).unwrap();
        let same = unitary_evolution(&ComplexMatrix::zeros(2, 2), &rho, 3.0).unwrap();
        assert!(max_abs(&(same.matrix() - rho.matrix())) < 1e-15);

        // Oracle: 2x2 rotation — exp(-i sigma3 pi/2) maps sigma1 to -sigma1.
        let rotated = unitary_evolution(&pauli(3), &rho, std::f64::consts::FRAC_PI_2).unwrap();
        let want = (pauli(0) - pauli(1)).scale(0.5);
        assert!(max_abs(&(rotated.matrix() - want)) < 1e-12);

        // Spectrum is invariant in t.
        for t in [0.1, 0.9, 4.0] {
            let out = unitary_evolution(&pauli(3), &rho, t).unwrap();
            assert_abs_diff_eq!(out.min_eigenvalue(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(out.purity(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn unitary_evolution_rejects_non_hermitian() {
        let rho = DensityMatrix::maximally_mixed(2);
        let mut h = pauli(1);
        h[(0, 1)] += Complex64::new(0.0, 1e-6);
        assert!(unitary_evolution(&h, &rho, 1.0).is_err());
    }

    #[test]
    fn coherence_vector_examples() {
        let mixed = DensityMatrix::maximally_mixed(2);
        let v = to_coherence_vector(&mixed).unwrap();
        assert_eq!(v.components, [0.5, 0.0, 0.0, 0.0]);

        let up = DensityMatrix::new((pauli(0) + pauli(3)).scale(0.5)).unwrap();
        let v = to_coherence_vector(&up).unwrap();
        assert_abs_diff_eq!(v.components[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(v.components[3], 0.5, epsilon = 1e-15);

        // Pure states sit on the boundary Σ(ρ^i)² = 1/4.
        for k in 0..10 {
            let psi = crate::numerics::haar_state(2, &mut sample_rng(23, k));
            let rho = DensityMatrix::pure(&psi).unwrap();
            let v = to_coherence_vector(&rho).unwrap();
            assert_abs_diff_eq!(v.bloch_norm_squared(), 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn coherence_vector_round_trip() {
        let mut rng = sample_rng(24, 0);
        for _ in 0..10 {
            let h = random_hermitian(2, &mut rng);
            let v = CoherenceVector::from_hermitian(&h).unwrap();
            assert!(max_abs(&(v.to_matrix() - &h)) < 1e-14);
        }
    }

    #[test]
    fn coherence_vector_rejects_wrong_dimension() {
        let m = ComplexMatrix::identity(3, 3);
        assert!(CoherenceVector::from_hermitian(&m).is_err());
    }

    #[test]
    fn closed_form_elementary_examples() {
        let v = CoherenceVector::new([0.5, 0.5, 0.0, 0.0]);
        let same = closed_form_elementary(ElementaryMap::DampAll, &v, 0.0, 4.0);
        assert_eq!(same.components, v.components);

        let damped = closed_form_elementary(ElementaryMap::DampAll, &v, 1.0, 4.0);
        assert_abs_diff_eq!(damped.components[1], 0.5 * (-4f64).exp(), epsilon = 1e-16);
        assert_abs_diff_eq!(damped.components[0], 0.5, epsilon = 1e-16);
    }

    #[test]
    fn closed_form_matches_superoperator_exponential() {
        // Oracle: evolve through the superoperator exponential and compare on
        // the default grid.
        let cases = [
            (ElementaryMap::DampAll, damp_all_generator(4.0)),
            (ElementaryMap::DampSecond, damp_second_generator(4.0)),
        ];
        let rho = DensityMatrix::new(
            (pauli(0) + pauli(1).scale(0.3) + pauli(2).scale(0.4) + pauli(3).scale(0.5))
                .scale(0.5),
        )
        .unwrap();
        let v0 = to_coherence_vector(&rho).unwrap();
        for (kind, g) in cases {
            let l = g.superoperator();
            for &t in &DEFAULT_TIME_GRID {
                let closed = closed_form_elementary(kind, &v0, t, 4.0);
                let numeric = evolve_state(&l, &rho, t).unwrap();
                assert!(
                    max_abs(&(closed.to_matrix() - &numeric.matrix)) < 1e-10,
                    "{kind:?} t={t}"
                );
            }
        }
    }

    #[test]
    fn two_dim_positivity_matches_determinant_sign() {
        // A unit-trace Hermitian 2x2 matrix is positive iff det >= 0.
        let mut rng = sample_rng(25, 0);
        for _ in 0..50 {
            let mut h = random_hermitian(2, &mut rng);
            let correction = (real(1.0) - h.trace()) * real(0.5);
            h[(0, 0)] += correction;
            h[(1, 1)] += correction;
            let det = (h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)]).re;
            let min = min_eigenvalue(&h).unwrap();
            if det.abs() > 1e-10 {
                assert_eq!(det >= 0.0, min >= -1e-12, "det={det} min={min}");
            }
        }
    }

    #[test]
    fn trajectory_export_format() {
        let l = damp_all_generator(4.0).superoperator();
        let rho = DensityMatrix::maximally_mixed(2);
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &l, &rho, &[0.0, 1.0]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("t,rho_00_re,rho_00_im"));
        assert!(lines[0].ends_with("min_eigenvalue,trace_residual"));
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first.len(), 1 + 8 + 2);
        assert_eq!(first[0], "0");
        assert_eq!(first[1], "0.5");
    }
}
