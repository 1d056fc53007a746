import itertools
import random

import pytest

from scenekg.errors import (
    CrossLevelEdge,
    DuplicateName,
    EmptyMemberSet,
    IllegalKindForLevel,
    LevelOrderViolation,
    MalformedDocument,
    SceneKGError,
    SymmetryClassConflict,
)
from scenekg.kg import (
    ANTI_SYMMETRIC,
    L0,
    L1,
    L2,
    LSTAR,
    SYMMETRIC,
    KnowledgeGraph,
    Level,
    merge,
)
from scenekg.truth import TruthValue

CRISP = TruthValue(1.0, 1.0)


def test_level_ordering_total():
    seq = [L0, L1, L2, Level("L2", 1), Level("L2", 2), LSTAR]
    for lo, hi in itertools.combinations(seq, 2):
        assert lo < hi and hi > lo and lo <= hi and not hi <= lo


def test_add_node_idempotent_and_conflicts():
    g = KnowledgeGraph()
    first = g.add_node(L2, "Concept", "shelf")
    assert g.add_node(L2, "Concept", "shelf") == first
    with pytest.raises(IllegalKindForLevel):
        g.add_node(L0, "Goal", "monitor")
    g.add_node(L1, "Percept", "r1", attrs={"x": 1.0})
    with pytest.raises(DuplicateName):
        g.add_node(L1, "Percept", "r1", attrs={"x": 2.0})


def test_inverse_relations_are_independent():
    g = KnowledgeGraph()
    a = g.add_node(L1, "Percept", "a")
    b = g.add_node(L1, "Percept", "b")
    g.assert_relation(a, "left_of", b, ANTI_SYMMETRIC, CRISP, "t")
    g.assert_relation(b, "right_of", a, ANTI_SYMMETRIC, CRISP, "t")
    assert len(g.edges) == 2
    assert g.validate() == []


def test_symmetric_canonicalization():
    g = KnowledgeGraph()
    a = g.add_node(L1, "Percept", "a")
    b = g.add_node(L1, "Percept", "b")
    g.assert_relation(b, "similar", a, SYMMETRIC, CRISP, "t")
    assert g.has_relation(a, "similar", b)
    assert g.has_relation(b, "similar", a)
    assert len(g.edges) == 1
    with pytest.raises(SymmetryClassConflict):
        g.assert_relation(a, "similar", b, ANTI_SYMMETRIC, CRISP, "t2")


def test_reflexive_edge_rejected():
    g = KnowledgeGraph()
    a = g.add_node(L1, "Percept", "a")
    with pytest.raises(SceneKGError):
        g.assert_relation(a, "left_of", a, ANTI_SYMMETRIC, CRISP, "t")


def test_duplicate_statement_pools_evidence():
    g = KnowledgeGraph()
    a = g.add_node(L1, "Percept", "a")
    b = g.add_node(L1, "Percept", "b")
    g.assert_relation(a, "left_of", b, ANTI_SYMMETRIC, TruthValue(1, 1), "t1")
    g.assert_relation(a, "left_of", b, ANTI_SYMMETRIC, TruthValue(1, 1), "t2")
    (edge,) = g.edges.values()
    assert edge.truth.f == 1.0 and edge.truth.w == 2.0
    assert edge.tags == frozenset({"t1", "t2"})


def test_strict_mode_rejects_cross_level_edges():
    g = KnowledgeGraph(strict=True)
    a = g.add_node(L1, "Percept", "a")
    c = g.add_node(L2, "Concept", "c")
    with pytest.raises(CrossLevelEdge):
        g.assert_relation(a, "rel", c, ANTI_SYMMETRIC, CRISP, "t")


def test_abstract_extension_intension():
    g = KnowledgeGraph()
    r1 = g.add_node(L1, "Percept", "r1")
    r2 = g.add_node(L1, "Percept", "r2")
    product = g.abstract("product", L2, {r1, r2})
    assert g.extension(product) == {r1, r2}
    assert g.intension(r1) == {product}
    box = g.abstract("box", L2, {r1})
    assert g.intension(r1) == {product, box}
    empty = g.add_node(L2, "Concept", "empty")
    assert g.extension(empty) == set()
    with pytest.raises(EmptyMemberSet):
        g.abstract("x", L2, set())
    with pytest.raises(LevelOrderViolation):
        g.abstract("down", L1, {product})


def test_validate_examples():
    assert KnowledgeGraph().validate() == []

    g = KnowledgeGraph()
    a = g.add_node(L1, "Percept", "a")
    b = g.add_node(L1, "Percept", "b")
    g.assert_relation(a, "left_of", b, ANTI_SYMMETRIC, CRISP, "t")
    g.assert_relation(b, "left_of", a, ANTI_SYMMETRIC, CRISP, "t")
    codes = [v.code for v in g.validate()]
    assert codes == ["AntiSymmetryBothDirections"]

    g2 = KnowledgeGraph()
    x = g2.add_node(L2, "Concept", "x")
    y = g2.add_node(L1, "Percept", "y")
    g2.add_abstraction_edge(x, y)
    g2.add_abstraction_edge(y, x)
    codes = sorted(v.code for v in g2.validate())
    assert codes == ["AbstractionCycle", "LevelOrderInverted"]


def test_validate_reproducible(noisy_scene):
    from scenekg.spatial import Tolerances, extract_relations
    g = extract_relations(noisy_scene[0], Tolerances())
    assert g.validate() == g.validate() == []


def test_serialize_round_trip_and_fixpoint():
    g = KnowledgeGraph()
    a = g.add_node(L1, "Percept", "a", attrs={"x": 1.5})
    b = g.add_node(L1, "Percept", "b")
    c = g.abstract("c", L2, {a, b})
    g.assert_relation(a, "left_of", b, ANTI_SYMMETRIC, TruthValue(0.9, 2), "t")
    g.assert_relation(a, "similar", b, SYMMETRIC, CRISP, "t")
    data = g.serialize()
    assert data == g.serialize()
    back = KnowledgeGraph.deserialize(data)
    assert back.serialize() == data
    assert back.extension(c) == {a, b}
    assert back.has_relation(b, "similar", a)


def test_deserialize_malformed():
    with pytest.raises(MalformedDocument):
        KnowledgeGraph.deserialize(b'{"version": 1, "nodes"')
    with pytest.raises(MalformedDocument):
        KnowledgeGraph.deserialize(b'{"version": 2, "nodes": [], '
                                   b'"edges": [], "abstractions": []}')


def test_merge_identity_and_pooling():
    g = KnowledgeGraph()
    a = g.add_node(L1, "Percept", "a")
    b = g.add_node(L1, "Percept", "b")
    g.assert_relation(a, "left_of", b, ANTI_SYMMETRIC, TruthValue(1, 1), "t1")

    merged = merge(g, KnowledgeGraph())
    assert merged.serialize() == g.serialize()

    g2 = KnowledgeGraph()
    g2.add_node(L1, "Percept", "a")
    g2.add_node(L1, "Percept", "b")
    g2.assert_relation(a, "left_of", b, ANTI_SYMMETRIC, TruthValue(1, 1),
                       "t2")
    out = merge(g, g2)
    (edge,) = out.edges.values()
    assert edge.truth.f == 1.0 and edge.truth.w == 2.0
    # commutative up to isomorphism when tag sets are disjoint
    assert merge(g2, g).serialize() == out.serialize()


# --- acceptance criterion: structure validation over injected corpora ---

def _clean_graph(rng):
    g = KnowledgeGraph(strict=False)
    percepts = [g.add_node(L1, "Percept", f"p{i}") for i in range(8)]
    g.abstract("group0", L2, set(percepts[:4]))
    g.abstract("group1", L2, set(percepts[4:]))
    pairs = list(itertools.combinations(range(8), 2))
    rng.shuffle(pairs)
    for k, (i, j) in enumerate(pairs[:10]):
        if rng.random() < 0.5:
            i, j = j, i
        sym = SYMMETRIC if k % 3 == 0 else ANTI_SYMMETRIC
        g.assert_relation(percepts[i], f"rel{k}", percepts[j], sym,
                          TruthValue(rng.random(), rng.uniform(0.5, 3.0)),
                          f"tag{k}")
    return g, percepts


def _inject(g, percepts, kind, n):
    """Inject one violation pattern; returns the list of expected codes."""
    if kind == "both_directions":
        a, b = percepts[2 * (n % 4)], percepts[2 * (n % 4) + 1]
        g.assert_relation(a, f"inj{n}", b, ANTI_SYMMETRIC, CRISP, f"i{n}a")
        g.assert_relation(b, f"inj{n}", a, ANTI_SYMMETRIC, CRISP, f"i{n}b")
        return ["AntiSymmetryBothDirections"]
    if kind == "cross_level":
        hi = g.add_node(L2, "Concept", f"cx{n}")
        g.assert_relation(percepts[n % 8], f"xl{n}", hi, ANTI_SYMMETRIC,
                          CRISP, f"x{n}")
        return ["CrossLevelNonAbstractionEdge"]
    if kind == "inverted":
        hi = g.add_node(L2, "Concept", f"inv{n}")
        g.add_abstraction_edge(percepts[n % 8], hi)
        return ["LevelOrderInverted"]
    assert kind == "cycle"
    hi = g.add_node(L2, "Concept", f"cyc{n}")
    lo = g.add_node(L1, "Percept", f"cyclo{n}")
    g.add_abstraction_edge(hi, lo)
    g.add_abstraction_edge(lo, hi)
    return ["AbstractionCycle", "LevelOrderInverted"]


def test_violation_injector_corpus():
    kinds = ["both_directions", "cross_level", "inverted", "cycle"]
    for graph_idx in range(100):
        rng = random.Random(graph_idx)
        g, percepts = _clean_graph(rng)
        assert g.validate() == []  # zero false positives on the clean graph
        target = rng.randint(1, 3)
        expected = []
        n = 0
        cycle_used = False
        while len(expected) < target:
            kind = rng.choice(kinds)
            if kind == "cycle" and (cycle_used
                                    or len(expected) + 2 > target):
                continue
            cycle_used = cycle_used or kind == "cycle"
            expected.extend(_inject(g, percepts, kind, n))
            n += 1
        got = [v.code for v in g.validate()]
        assert sorted(got) == sorted(expected)
