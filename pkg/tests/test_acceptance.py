"""The acceptance gate: every comparison criterion at its stated tolerance.

Each test prints a one-line pass/fail record with the measured worst
deviation and runtime, and asserts both the criterion and its budget.
"""

from bitorsion import acceptance

BUDGETS = {
    1: 5.0,
    2: 5.0,
    3: 5.0,
    4: 5.0,
    5: 2.0,
    6: 10.0,
    7: 5.0,
    8: 60.0,
    9: 120.0,
    10: 60.0,
    11: 180.0,
    12: 5.0,
}


def _check(result):
    line = (
        f"criterion {result.number:2d} [{'pass' if result.passed else 'FAIL'}] "
        f"{result.name}: worst={result.worst:.3e} tol={result.tolerance:.1e} "
        f"({result.seconds:.2f}s)"
    )
    print(line)
    assert result.passed, f"{result.name}: {result.worst} > {result.tolerance} {result.detail}"
    assert result.seconds < BUDGETS[result.number], f"over budget: {result.seconds:.1f}s"


def test_01_finite_complex_anomaly():
    _check(acceptance.criterion_1_finite_anomaly())


def test_02_bruteforce_oracle():
    _check(acceptance.criterion_2_bruteforce_oracle())


def test_03_milnor_anomaly():
    _check(acceptance.criterion_3_milnor_anomaly())


def test_04_turaev_independence():
    _check(acceptance.criterion_4_turaev_independence())


def test_05_alexander_polynomials():
    _check(acceptance.criterion_5_alexander())


def test_06_main_comparison():
    _check(acceptance.criterion_6_main_comparison())


def test_07_cut_independence():
    _check(acceptance.criterion_7_cut_independence())


def test_08_anomaly_invariance():
    _check(acceptance.criterion_8_anomaly_invariance())


def test_09_witten_clustering():
    _check(acceptance.criterion_9_witten_clustering())


def test_10_conjugation_isospectrality():
    _check(acceptance.criterion_10_conjugation())


def test_11_deformation_limit_trend():
    _check(acceptance.criterion_11_thm33_trend())


def test_12_modulus_one():
    _check(acceptance.criterion_12_modulus_one())
