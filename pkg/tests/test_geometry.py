import random

import pytest

from cototient.arith import build_factor_table, divisor_count
from cototient.equation import solve
from cototient.geometry import (
    Configuration,
    IncidenceGraph,
    configuration_from_json,
    configuration_to_json,
    decompose,
    find_cycle,
    incidence_graph,
    is_incident,
    is_prime_configuration,
    random_prime_configuration,
    verify_incidence_bound,
)

# non-coprime configuration whose incidence graph is a 6-cycle; all six
# incidences are checked arithmetically below, so the witness cannot rot
WITNESS = Configuration(
    4,
    points=[(24, 28), (13, 15), (1, 1)],
    lines=[(27, 23), (13, 11), (28, 24)],
)
WITNESS_EDGES = {(0, 0), (0, 1), (1, 1), (1, 2), (2, 0), (2, 2)}


def test_is_incident_examples():
    assert is_incident((3, 1), (5, 7), 8)  # 15 - 7
    assert not is_incident((1, 1), (1, 1), 1)  # 1 - 1 = 0
    assert is_incident((2, 1), (5, 2), 8)  # 10 - 2


def test_incidence_graph_example():
    cfg = Configuration(8, [(3, 1), (2, 1)], [(5, 7), (5, 2)])
    g = incidence_graph(cfg)
    assert g.edges == ((0, 0), (1, 1))
    # the cross pairs miss: 15 - 2 = 13, 10 - 7 = 3
    assert not is_incident((3, 1), (5, 2), 8)
    assert not is_incident((2, 1), (5, 7), 8)


def test_incidence_graph_empty():
    g = incidence_graph(Configuration(5, [], [(2, 1)]))
    assert g.edges == () and g.m == 0 and g.n == 1


def test_incidence_graph_large_coordinates():
    # exact fallback handles coordinates whose products overflow int64
    big = 2**40
    cfg = Configuration(1, [(big + 1, 1)], [(big - 1, big * big - 2)])
    g = incidence_graph(cfg)
    assert g.edges == ((0, 0),)


def test_configuration_validation():
    with pytest.raises(ValueError):
        Configuration(0, [(1, 1)], [])
    with pytest.raises(ValueError):
        Configuration(4, [(1, 0)], [])
    with pytest.raises(ValueError):
        Configuration(4, [(1, 1), (1, 1)], [])
    with pytest.raises(ValueError):
        IncidenceGraph(1, 1, ((0, 0), (0, 0)))


def test_is_prime_configuration():
    assert is_prime_configuration(Configuration(8, [(3, 1)], [(5, 7)]))
    assert not is_prime_configuration(Configuration(8, [(2, 1)], [(5, 2)]))
    assert is_prime_configuration(Configuration(1, [(6, 4)], [(10, 2)]))  # gcd(., 1) = 1


def test_find_cycle_on_matching():
    g = IncidenceGraph(2, 2, ((0, 0), (1, 1)))
    assert find_cycle(g) is None


def test_cycle_witness():
    # every coordinate product identity behind the witness, checked directly
    for i, (A, a) in enumerate(WITNESS.points):
        for j, (B, b) in enumerate(WITNESS.lines):
            assert (A * B - a * b == 4) == ((i, j) in WITNESS_EDGES)
    assert not is_prime_configuration(WITNESS)  # e.g. gcd(24, 4) = 4
    g = incidence_graph(WITNESS)
    assert set(g.edges) == WITNESS_EDGES
    cycle = find_cycle(g)
    assert cycle is not None and len(cycle) >= 6
    assert len(set(cycle)) == len(cycle)
    # consecutive vertices (cyclically) must alternate and be incident
    for k in range(len(cycle)):
        u, v = cycle[k], cycle[(k + 1) % len(cycle)]
        assert u[0] != v[0]
        pt = WITNESS.points[u[1]] if u[0] == "point" else WITNESS.points[v[1]]
        ln = WITNESS.lines[u[1]] if u[0] == "line" else WITNESS.lines[v[1]]
        assert is_incident(pt, ln, WITNESS.c)


def test_generated_prime_configurations_are_forests():
    rng = random.Random(97)
    table = build_factor_table(60 * 60 + 10_000)
    for _ in range(300):
        cfg = random_prime_configuration(rng, c_max=10_000, max_size=60, table=table)
        assert is_prime_configuration(cfg)
        g = incidence_graph(cfg)
        assert len(g.edges) <= g.m + g.n
        assert find_cycle(g) is None


def test_decompose_identity_class():
    cfg = Configuration(8, [(3, 1)], [(5, 7)])
    (cls,) = decompose(cfg)
    assert (cls.l, cls.l1, cls.l2, cls.l3, cls.l4) == (1, 1, 1, 1, 1)
    assert cls.reduced_c == 8
    assert cls.reduced_points == ((3, 1),) and cls.reduced_lines == ((5, 7),)


def test_decompose_hand_example():
    # edge 2*6 - 1*4 = 8: l = gcd(12, 8) = 4, l1 = gcd(2, 4) = 2, l2 = 2,
    # l3 = gcd(1, 4) = 1, l4 = 4
    cfg = Configuration(8, [(2, 1)], [(6, 4)])
    (cls,) = decompose(cfg)
    assert (cls.l, cls.l1, cls.l2, cls.l3, cls.l4) == (4, 2, 2, 1, 4)
    assert cls.reduced_c == 2
    assert cls.reduced_points == ((1, 1),)
    assert cls.reduced_lines == ((3, 1),)
    assert 1 * 3 - 1 * 1 == 2
    assert is_prime_configuration(cls.reduced_configuration())


def _solution_configuration(c):
    from cototient.arith import IDENTITY, TOTIENT, factorize
    from cototient.diffscan import DifferenceInstance, solutions_to_configuration

    sols = solve(c)
    t = 1
    for n in sols:
        t = max(t, max((p**e for p, e in factorize(n).parts), default=1))
    inst = DifferenceInstance(IDENTITY, TOTIENT, c, tuple(sols), t)
    return solutions_to_configuration(inst)


def test_decompose_solution_configuration_c8():
    cfg = _solution_configuration(8)
    classes = decompose(cfg)
    assert len(classes) <= divisor_count(8) ** 3  # tau(8)^3 = 64
    assert sum(len(cls.class_edges) for cls in classes) == len(incidence_graph(cfg).edges)


def test_decompose_properties_on_solution_configurations():
    rng = random.Random(99)
    for _ in range(25):
        c = rng.randint(10, 3000)
        cfg = _solution_configuration(c)
        graph = incidence_graph(cfg)
        classes = decompose(cfg, graph)
        # partition of the edge set
        seen = sorted(e for cls in classes for e in cls.class_edges)
        assert seen == list(range(len(graph.edges)))
        tau3 = divisor_count(cfg.c) ** 3
        assert len(classes) <= tau3
        for cls in classes:
            assert cls.l == cls.l1 * cls.l2 == cls.l3 * cls.l4
            assert is_prime_configuration(cls.reduced_configuration())
            # canonical reduction keeps every class edge incident
            for e in cls.class_edges:
                i, j = graph.edges[e]
                A, a = cfg.points[i]
                B, b = cfg.lines[j]
                assert (A // cls.l1) * (B // cls.l2) - (a // cls.l3) * (b // cls.l4) == cls.reduced_c


def test_verify_incidence_bound_trivial():
    rep = verify_incidence_bound(Configuration(8, [(3, 1)], [(5, 7)]))
    assert rep.passed and rep.edge_count == 1 and rep.bound == 2 * 4**3
    rep0 = verify_incidence_bound(Configuration(8, [], []))
    assert rep0.passed and rep0.edge_count == 0


def test_verify_incidence_bound_solution_sets():
    rng = random.Random(4242)
    for _ in range(20):
        c = rng.randint(10, 5000)
        rep = verify_incidence_bound(_solution_configuration(c))
        assert rep.passed
        assert rep.classes_prime
        assert rep.class_count <= rep.class_limit


def test_configuration_json_roundtrip():
    text = configuration_to_json(WITNESS)
    back = configuration_from_json(text)
    assert back == WITNESS
    assert configuration_to_json(back) == text
    with pytest.raises(ValueError):
        configuration_from_json('{"c": 4, "points": 3}')


def test_four_cycle_check_never_fires_on_valid_input():
    # distinct lines with c >= 1 intersect in at most one point, so even
    # dense non-coprime configurations construct cleanly
    rng = random.Random(5)
    for _ in range(50):
        c = rng.randint(1, 40)
        pts = {(rng.randint(1, 30), rng.randint(1, 30)) for _ in range(40)}
        lns = {(rng.randint(1, 30), rng.randint(1, 30)) for _ in range(40)}
        incidence_graph(Configuration(c, tuple(pts), tuple(lns)))
