"""Release criteria, one test per criterion.

Run with -s to watch the per-criterion lines; each prints PASS/FAIL with
its measured detail before asserting.
"""

import pytest

from cototient.acceptance import AcceptanceSuite

WORKERS = 8


@pytest.fixture(scope="module")
def suite():
    return AcceptanceSuite(workers=WORKERS)


def report(result):
    status = "PASS" if result.passed else "FAIL"
    print(f"criterion {result.index} {status} [{result.seconds:.1f}s] {result.name}: {result.detail}")
    assert result.passed, result.detail


def test_criterion_1_solver_matches_sweep(suite):
    report(suite.criterion_1())


def test_criterion_2_prime_configurations_are_forests(suite):
    report(suite.criterion_2())


def test_criterion_3_decomposition_bound(suite):
    report(suite.criterion_3())


def test_criterion_4_partition_bound(suite):
    report(suite.criterion_4())


def test_criterion_5_residual_structure(suite):
    report(suite.criterion_5())


def test_criterion_6_solution_identities(suite):
    report(suite.criterion_6())


def test_criterion_7_worker_determinism(suite):
    report(suite.criterion_7())
