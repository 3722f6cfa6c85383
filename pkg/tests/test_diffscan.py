import random

import pytest

from cototient.arith import IDENTITY, SIGMA, TAU, TOTIENT, build_factor_table, factorize
from cototient.diffscan import (
    DifferenceInstance,
    check_conditions,
    difference_instance,
    evaluate_range,
    function_from_rule,
    parse_rule_expression,
    scan_difference,
    smoothness_filter,
    solutions_to_configuration,
)
from cototient.equation import solve
from cototient.geometry import incidence_graph, is_incident, verify_incidence_bound


def test_evaluate_range_agrees_with_direct_evaluation():
    table = build_factor_table(2000)
    for f in (IDENTITY, TOTIENT, SIGMA, TAU):
        vals = evaluate_range(f, 2000, table)
        for n in range(1, 2001):
            assert vals[n] == f(n, table)


def test_scan_difference_cototient():
    assert scan_difference(IDENTITY, TOTIENT, 8, 100) == [12, 14, 16]
    # psi(p) = 1 for every prime
    assert scan_difference(IDENTITY, TOTIENT, 1, 30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_scan_difference_sigma():
    # sigma(n) - n = 1 exactly at primes: sigma(p) = p + 1, and any
    # composite has a proper divisor besides 1.  Checked against a direct
    # divisor-sum sweep.
    def sigma_brute(n):
        return sum(d for d in range(1, n + 1) if n % d == 0)

    expected = [n for n in range(2, 51) if sigma_brute(n) - n == 1]
    assert expected == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    assert scan_difference(SIGMA, IDENTITY, 1, 50) == expected


def test_scan_difference_matches_solver():
    rng = random.Random(2024)
    table = build_factor_table(1000 * 1000)
    for _ in range(50):
        c = rng.randint(2, 1000)
        assert scan_difference(IDENTITY, TOTIENT, c, c * c, table) == solve(c)


def test_check_conditions_id_phi():
    rep = check_conditions(IDENTITY, TOTIENT, 8, 10_000, t=16)
    assert rep.dominates.ok  # phi(n) < n for n >= 2
    assert rep.injective.ok  # first coordinate is n itself
    assert rep.equation.ok
    assert rep.growth_f.max_ratio == 1.0
    assert rep.smooth_f.ok and rep.smooth_g.ok


def test_check_conditions_tau_id():
    rep = check_conditions(TAU, IDENTITY, 1, 100, t=10)
    assert not rep.dominates.ok
    assert rep.dominates.witness == (2, 2, 2)  # tau(2) = 2 = id(2)
    # the swapped-variant census applies to g = id here
    assert rep.growth_g.max_ratio == 1.0
    assert rep.growth_f.max_ratio > 10  # tau(n) <= x for a huge share of n


def test_smoothness_filter():
    assert smoothness_filter([12, 14, 16], IDENTITY, 7) == [12, 14]
    assert smoothness_filter([12, 14, 16], IDENTITY, 16) == [12, 14, 16]
    assert smoothness_filter([12, 14, 16], IDENTITY, 1) == []


def test_difference_instance_defaults():
    inst = difference_instance(IDENTITY, TOTIENT, 8, 100)
    assert inst.solutions == (12, 14, 16)
    assert inst.t == 16  # the largest prime-power component seen
    with pytest.raises(ValueError):
        DifferenceInstance(IDENTITY, TOTIENT, 8, (15,), 16)


def test_construction_example():
    inst = difference_instance(IDENTITY, TOTIENT, 8, 100, t=16)
    config, detail = solutions_to_configuration(inst, detail=True)
    by_n = {n: (a, b, pt, ln) for n, a, b, pt, ln in detail.pairs}
    assert by_n[14][:2] == (2, 7)
    assert by_n[14][2:] == ((2, 1), (7, 6))  # phi(2) = 1, phi(7) = 6
    assert by_n[12][:2] == (4, 3)
    assert by_n[12][2:] == ((4, 2), (3, 2))
    assert by_n[16][2:] == ((16, 8), (1, 1))
    for n, a, b, pt, ln in detail.pairs:
        assert a * b == n
        assert is_incident(pt, ln, 8)
    assert sum(detail.point_multiplicity.values()) == len(inst.solutions)


def test_construction_requires_smoothness():
    inst = DifferenceInstance(IDENTITY, TOTIENT, 8, (12, 14), 7)
    cfg = solutions_to_configuration(inst)  # fine: components 4,3 and 2,7
    assert len(cfg.points) == 2
    bad = DifferenceInstance(IDENTITY, TOTIENT, 8, (12, 14, 16), 7)
    with pytest.raises(ValueError, match="16"):
        solutions_to_configuration(bad)


def test_construction_bound_chain():
    rng = random.Random(77)
    for _ in range(30):
        c = rng.randint(2, 2000)
        sols = solve(c)
        t = 1
        for n in sols:
            t = max(t, max((p**e for p, e in factorize(n).parts), default=1))
        inst = DifferenceInstance(IDENTITY, TOTIENT, c, tuple(sols), t)
        config, detail = solutions_to_configuration(inst, detail=True)
        for n, a, b, pt, ln in detail.pairs:
            fn = n  # f = id
            assert fn <= c * t
            assert pt[0] ** 2 <= fn * t and ln[0] ** 2 <= fn * t
            assert pt[0] ** 2 <= t * t * c and ln[0] ** 2 <= t * t * c
        # construction never loses a solution: multiplicities sum to |N|,
        # and pair injectivity of (id, phi) keeps the pairs distinct
        assert sum(detail.point_multiplicity.values()) == len(sols)
        graph = incidence_graph(config)
        assert len(graph.edges) >= len(sols)


def test_pipeline_bound_end_to_end():
    rng = random.Random(78)
    for _ in range(15):
        c = rng.randint(10, 3000)
        inst = difference_instance(IDENTITY, TOTIENT, c, min(c * c, 40_000))
        report = verify_incidence_bound(solutions_to_configuration(inst))
        assert report.passed


def test_rule_parsing():
    sig = function_from_rule("sig", "(p**(a+1) - 1) // (p - 1)")
    for n in range(1, 500):
        assert sig(n) == SIGMA(n)
    square = function_from_rule("sq", "p**(2*a)")
    assert square(6) == 36
    for bad in ("p.bit_length()", "__import__('os')", "1.5 * p", "q + a", "p if a else 1"):
        with pytest.raises(ValueError):
            parse_rule_expression(bad)
