#!/usr/bin/env python3
"""Smoke test for the gksl_py extension module.

Builds the cdylib with cargo if needed, loads it, and exercises the main
surface: CP verdicts, closed-form evolution, the factorized-counterexample
verification, the necessary-condition witness, perturbation intervals and
Kraus reconstruction.

Run from the repository root:  python3 python/smoke_test.py
"""

import math
import pathlib
import shutil
import subprocess
import sys
import tempfile

REPO = pathlib.Path(__file__).resolve().parent.parent


def build_extension() -> pathlib.Path:
    lib = REPO / "target" / "release" / "libgksl_py.so"
    if not lib.exists():
        print("building gksl-python (cargo build --release)...")
        subprocess.run(
            ["cargo", "build", "-p", "gksl-python", "--release"],
            cwd=REPO,
            check=True,
        )
    if not lib.exists():
        sys.exit(f"extension library not found at {lib}")
    return lib


def load_module(lib: pathlib.Path):
    staging = pathlib.Path(tempfile.mkdtemp(prefix="gksl_py_"))
    shutil.copy2(lib, staging / "gksl_py.so")
    sys.path.insert(0, str(staging))
    import gksl_py

    return gksl_py


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    g = load_module(build_extension())
    print(f"loaded gksl_py {g.__version__}")

    # Basis sanity: three scaled Pauli matrices for n = 2.
    basis = g.gell_mann_basis(2)
    assert len(basis) == 3
    s = 1.0 / math.sqrt(2.0)
    approx(basis[0][0][1].real, s, 1e-15)
    approx(basis[1][0][1].imag, -s, 1e-15)
    approx(basis[2][0][0].real, s, 1e-15)

    # The elementary pair: one CP factor, one positive but not CP.
    g1, g2 = g.elementary_pair(4.0)
    is_cp, min_eig = g1.kossakowski_cp()
    assert is_cp and min_eig > 0
    is_cp, min_eig = g2.kossakowski_cp()
    assert not is_cp
    approx(min_eig, -2.0, 1e-12)  # rate-4 scaling of diag(1, -1, 1)

    choi_cp, choi_min = g2.is_completely_positive(0.5)
    assert not choi_cp and choi_min < -1e-6

    # Closed-form damping: sigma3 coherence decays at rate 4.
    rho = [[0.5 + 0j, 0j], [0j, 0.5 + 0j]]
    rho[0][0] = 0.9 + 0j
    rho[1][1] = 0.1 + 0j
    evolved, min_eig = g1.evolve(rho, 0.25)
    v = g.coherence_vector(evolved)
    approx(v[3], 0.4 * math.exp(-1.0), 1e-12)
    assert min_eig > 0

    # Fixed point of the second elementary map.
    plus = [[0.5 + 0j, 0.5 + 0j], [0.5 + 0j, 0.5 + 0j]]
    evolved, _ = g2.evolve(plus, 2.0)
    approx(abs(evolved[0][1] - 0.5), 0.0, 1e-12)

    # Necessary condition and its witness.
    holds, min_sum = g.kossakowski_sum_condition(g1.kossakowski(), g2.kossakowski())
    assert holds and abs(min_sum) < 1e-12
    holds, min_sum = g.kossakowski_sum_condition(g2.kossakowski(), g2.kossakowski())
    assert not holds
    approx(min_sum, -4.0, 1e-12)
    witness = g.breakdown_witness(g2, g2, seed=1)
    approx(witness.l_value, witness.quadratic_form, 1e-9)
    approx(witness.quadratic_form, -4.0, 1e-9)
    assert witness.short_time_check(g2, g2, 1e-3) < 0

    # Counterexample verification on the default grid.
    summary = g.verify_counterexample(4.0)
    assert summary.passed, summary.failures
    assert summary.points_checked == 270
    assert summary.max_closed_form_residual < 1e-9

    # z± closed form at mu = 1/2, alpha = pi/2.
    zp, zm = g.counterexample_eigenvalues(0.5, math.pi / 2, 0.3, 4.0)
    e = math.exp(-1.2)
    approx(zp, 0.25 * (1 - e) * (1 + e), 1e-12)
    approx(zm, 0.25 * (1 - e) * (1 - e), 1e-12)

    # Tensor searches: the mixed pair stays positive, the square breaks.
    grid = [0.1, 0.5, 1.0]
    report = g.tensor_positivity(g1, g2, grid, budget=200, seed=0)
    assert report.verdict == "positive-within-budget", report.min_eigenvalue_found
    report = g.breakdown_search(g2, grid, budget=200, seed=0)
    assert report.verdict == "violation-found"
    assert report.min_eigenvalue_found < -1e-6

    # Perturbation interval: closed form 1/2.
    c = g1.kossakowski()
    identity3 = [[1 + 0j if i == j else 0j for j in range(3)] for i in range(3)]
    gamma = [[0j] * 3 for _ in range(3)]
    gamma[1][1] = -2 + 0j
    eps0 = g.perturbation_cp_interval(identity3, gamma, 10.0)
    approx(eps0, 0.5, 1e-6)
    del c

    # Kraus reconstruction of the CP factor.
    kraus = g1.kraus(1.0)
    assert len(kraus) == 4
    total = [[0j, 0j], [0j, 0j]]
    for k in kraus:
        for i in range(2):
            for j in range(2):
                total[i][j] += sum(k[a][i].conjugate() * k[a][j] for a in range(2))
    approx(abs(total[0][0] - 1), 0, 1e-9)
    approx(abs(total[1][1] - 1), 0, 1e-9)
    approx(abs(total[0][1]), 0, 1e-9)

    # Document round trip.
    text = g1.to_json()
    back = g.Generator.from_json(text)
    assert back.n == 2 and back.to_json() == text

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
