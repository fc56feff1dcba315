import math

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from degkit import (
    AdmissibleGraph,
    AdmissibleTriple,
    EnumerationCaps,
    GraphError,
    NUMERIC_GROUP,
    Piece,
    SplitMap,
    SplitMapError,
    TopType,
    TripleAlphabet,
    decompose,
    enumerate_split_maps,
    enumerate_stable_types,
    enumerate_triples,
    eq_group,
    fiber_count,
    glue,
    glue_halves,
    graph_from_json,
    half_to_graph,
    max_length_bound,
    phi_degree,
    realize_split_map,
    specialization_sum_check,
    split_map_from_json,
    triples_equivalent,
)


# --- split maps and weights -------------------------------------------------


def test_weight_formula():
    # middle piece of degree 2 with one mark and two nodes weighs 3
    m = SplitMap(
        [[Piece(0, 1, 3)], [Piece(0, 2, 1)], [Piece(1, 1, 0)]],
        [((1, 0, 0),), ((1, 0, 0),)],
    )
    assert m.weight(2) == 2 + 0 - 2 + 1 + 2
    assert m.weight(1) == 1 - 2 + 3 + 1


def test_weight_of_empty_group():
    m = SplitMap([[Piece(0, 3, 3)], []], [()])
    assert m.weight(2) == 0


def test_trivial_piece_weighs_zero():
    m = SplitMap(
        [[Piece(1, 1, 1)], [Piece(0, 0, 0)], [Piece(1, 1, 1)]],
        [((2, 0, 0),), ((2, 0, 0),)],
    )
    assert m.weight(2) == 0
    assert m.is_trivial_piece(2, 0)
    assert not m.is_stable()
    assert not m.stability_oracle()


def test_mixed_middle_is_stable():
    m = SplitMap(
        [[Piece(1, 1, 1)], [Piece(0, 0, 0), Piece(0, 1, 0)], [Piece(1, 1, 1)]],
        [((2, 0, 0), (1, 0, 1)), ((2, 0, 0), (1, 1, 0))],
    )
    assert m.weight(2) == 1
    assert m.is_stable() and m.stability_oracle()


def test_single_end_map_is_stable():
    m = SplitMap([[Piece(0, 3, 3)], []], [()])
    assert m.is_stable()
    assert m.verify_norm_identity()


def test_norm_identity_example():
    m = SplitMap([[Piece(1, 3, 2)], []], [()])
    t = m.total_type()
    assert (t.degree, t.genus, t.marks) == (3, 1, 2)
    assert t.norm() == 5 == sum(m.weights())


def test_invalid_maps_rejected():
    with pytest.raises(SplitMapError):
        SplitMap([[Piece(0, 1, 0)], [Piece(0, 1, 0)]], [()])  # disconnected
    with pytest.raises(SplitMapError):
        SplitMap([[Piece(0, 1, 0)], []], [((1, 0, 5),)])  # out of range
    with pytest.raises(SplitMapError):
        SplitMap([[Piece(0, 1, 0)], [Piece(0, 1, 0)]], [((0, 0, 0),)])  # weight


def test_ample_weights():
    m = SplitMap(
        [
            [Piece(0, 2, 1)],
            [Piece(0, 1, 0)],
            [Piece(1, 1, 1)],
        ],
        [((1, 0, 0),), ((1, 0, 0),)],
    )
    assert m.weights() == (2, 1, 3)
    assert m.ample_weights() == (2, 3)


def test_ample_weights_length_one():
    m = SplitMap([[Piece(0, 3, 3)], []], [()])
    assert m.ample_weights() == (4,)


def test_ample_weights_need_stability():
    m = SplitMap(
        [[Piece(1, 1, 1)], [Piece(0, 0, 0)], [Piece(1, 1, 1)]],
        [((2, 0, 0),), ((2, 0, 0),)],
    )
    with pytest.raises(SplitMapError):
        m.ample_weights()


def test_max_length_bound():
    assert max_length_bound(TopType(1, 0, 2)) == 1
    assert max_length_bound(TopType(3, 1, 2)) == 5
    with pytest.raises(SplitMapError):
        max_length_bound(TopType(0, 0, 0))


def test_split_map_json_roundtrip():
    m = SplitMap(
        [[Piece(0, 2, 1)], [Piece(0, 1, 0)], [Piece(1, 1, 1)]],
        [((1, 0, 0),), ((1, 0, 0),)],
    )
    assert split_map_from_json(m.to_json()) == m


# --- enumeration --------------------------------------------------------------


def test_enumeration_includes_plain_map():
    maps = enumerate_split_maps(TopType(1, 0, 0))
    plain = SplitMap([[Piece(0, 1, 0)], []], [()])
    assert any(m.n == 0 and m.canonical_key() == plain.canonical_key() for m in maps)


def test_enumeration_regression_counts():
    assert len(enumerate_stable_types(TopType(2, 0, 0))) == 4
    assert len(enumerate_stable_types(TopType(1, 0, 2))) == 6
    assert len(enumerate_stable_types(TopType(0, 2, 0))) == 4


def test_enumeration_is_deterministic():
    a = [m.canonical_key() for m in enumerate_split_maps(TopType(2, 0, 1))]
    b = [m.canonical_key() for m in enumerate_split_maps(TopType(2, 0, 1))]
    assert a == b


def test_enumeration_norm_and_bound():
    t = TopType(2, 0, 1)
    for m in enumerate_split_maps(t):
        assert m.verify_norm_identity()
        assert m.total_type() == t
        assert m.n <= t.norm()


def test_enumeration_stability_agreement():
    for t in (TopType(2, 0, 0), TopType(1, 0, 2), TopType(0, 2, 0), TopType(2, 0, 1)):
        for m in enumerate_split_maps(t):
            assert m.is_stable() == m.stability_oracle()


# --- decompose / glue ---------------------------------------------------------


def _sample_maps():
    out = [
        SplitMap(
            [[Piece(1, 1, 1)], [Piece(0, 0, 0), Piece(0, 1, 0)], [Piece(1, 1, 1)]],
            [((2, 0, 0), (1, 0, 1)), ((2, 0, 0), (1, 1, 0))],
        )
    ]
    for t in (TopType(2, 0, 1), TopType(3, 0, 0), TopType(1, 1, 1)):
        out.extend(m for m in enumerate_stable_types(t) if m.n >= 1)
    return out


SAMPLES = _sample_maps()


@given(data=st.data())
@settings(max_examples=50, deadline=None)
def test_decompose_glue_roundtrip(data):
    m = data.draw(st.sampled_from(SAMPLES))
    l = data.draw(st.integers(1, m.n + 1))
    side1, side2, sigma = decompose(m, l)
    assert side1.root_weights() == side2.root_weights()
    assert tuple(sorted(side1.root_weights())) == sigma
    assert glue_halves(side1, side2) == m


def test_decompose_structure():
    m = SplitMap(
        [[Piece(0, 2, 1)], [Piece(0, 1, 0)], [Piece(1, 1, 1)]],
        [((1, 0, 0), (2, 0, 0)), ((1, 0, 0),)],
    )
    side1, side2, sigma = decompose(m, 1)
    assert sigma == (1, 2)
    # the first side is reversed: its boundary group leads
    assert side1.groups == ((Piece(0, 2, 1),),)
    assert side2.groups == ((Piece(0, 1, 0),), (Piece(1, 1, 1),))
    with pytest.raises(SplitMapError):
        decompose(m, 3)


def test_specialization_identity_assignment():
    m = SplitMap(
        [[Piece(0, 2, 1)], [Piece(0, 1, 0)], [Piece(1, 1, 1)]],
        [((1, 0, 0),), ((1, 0, 0),)],
    )
    assert specialization_sum_check(m, m, (1, 2, 3))


def test_specialization_collapse():
    fine = SplitMap(
        [[Piece(0, 2, 1)], [Piece(0, 1, 0)], [Piece(1, 1, 1)]],
        [((1, 0, 0),), ((1, 0, 0),)],
    )
    # coarse weights must match the grouped fine weights (3, 3)
    coarse = SplitMap(
        [[Piece(0, 3, 1)], [Piece(1, 1, 1)]],
        [((1, 0, 0),)],
    )
    assert coarse.weights() == (fine.weight(1) + fine.weight(2), fine.weight(3))
    assert specialization_sum_check(coarse, fine, (1, 1, 2))
    assert not specialization_sum_check(coarse, fine, (1, 2, 2))
    with pytest.raises(SplitMapError):
        specialization_sum_check(coarse, fine, (2, 1, 2))


# --- admissible graphs --------------------------------------------------------


def _vertex_graph(extra=0, genus=0, weights=(1,), legs=0):
    total = sum(weights)
    return AdmissibleGraph(
        NUMERIC_GROUP,
        (genus,),
        ((extra, total),),
        tuple([0] * legs),
        tuple((0, w) for w in weights),
    )


def test_genus_formula_one_edge():
    eta = AdmissibleTriple(_vertex_graph(1), _vertex_graph(2), ())
    _, genus, degree, ttype = glue(eta)
    assert genus == 0 and degree == 3
    assert ttype == TopType(3, 0, 0)


def test_genus_formula_two_edges():
    eta = AdmissibleTriple(
        _vertex_graph(1, weights=(1, 1)), _vertex_graph(2, weights=(1, 1)), ()
    )
    glued, genus, _, _ = glue(eta)
    assert genus == 1
    assert glued.betti() == 1


def test_genus_matches_betti_plus_genera():
    eta = AdmissibleTriple(
        _vertex_graph(0, genus=1, weights=(1, 1)),
        _vertex_graph(0, genus=2, weights=(1, 1)),
        (),
    )
    glued, genus, _, _ = glue(eta)
    assert genus == glued.betti() + 3


def test_glue_across_distinct_class_groups():
    from degkit import ClassGroup

    left_group = ClassGroup(2, (2, 1), (0, 1))
    right_group = ClassGroup(1, (3,), (1,))
    g1 = AdmissibleGraph(left_group, (0,), ((1, 1),), (), ((0, 1),))
    g2 = AdmissibleGraph(right_group, (1,), ((1,),), (), ((0, 1),))
    assert g1.deg_h(0) == 3 and g1.deg_d(0) == 1
    assert g2.deg_h(0) == 3 and g2.deg_d(0) == 1
    eta = AdmissibleTriple(g1, g2, ())
    _, genus, degree, ttype = glue(eta)
    assert (genus, degree) == (1, 6)
    assert ttype == TopType(6, 1, 0)


def test_contact_constraint():
    g = _vertex_graph(1, weights=(1, 2))
    assert g.satisfies_contact()
    bad = AdmissibleGraph(NUMERIC_GROUP, (0,), ((1, 5),), (), ((0, 1),))
    assert bad.contact_defects() == (4,)
    assert not bad.satisfies_contact()


def test_relative_connectivity():
    with pytest.raises(GraphError):
        AdmissibleGraph(
            NUMERIC_GROUP, (0, 0), ((1, 1), (1, 0)), (), ((0, 1),)
        )


def test_reorder_convention():
    g = AdmissibleGraph(
        NUMERIC_GROUP, (0, 0), ((1, 1), (1, 2)), (), ((0, 1), (1, 2))
    )
    swapped = g.reorder((1, 0))
    # the j-th root of the reordering is the sigma^{-1}(j)-th original root
    assert swapped.roots == ((1, 2), (0, 1))


def test_eq_group_examples():
    one = AdmissibleTriple(_vertex_graph(1), _vertex_graph(2), ())
    assert eq_group(one) == [(0,)]
    sym = AdmissibleTriple(
        _vertex_graph(1, weights=(1, 1)), _vertex_graph(2, weights=(1, 1)), ()
    )
    assert sorted(eq_group(sym)) == [(0, 1), (1, 0)]
    assert phi_degree(sym) == 2
    asym = AdmissibleTriple(
        _vertex_graph(1, weights=(1, 2)), _vertex_graph(2, weights=(1, 2)), ()
    )
    assert eq_group(asym) == [(0, 1)]


def test_eq_group_bound():
    sym = AdmissibleTriple(
        _vertex_graph(1, weights=(1, 1)), _vertex_graph(2, weights=(1, 1)), ()
    )
    with pytest.raises(GraphError):
        eq_group(sym, bound=1)


def test_legs_pin_the_isomorphism():
    # two interchangeable vertices give a swap symmetry; a single leg on one
    # of them pins the forced vertex map and kills it
    def first_graph(leg_vertices):
        return AdmissibleGraph(
            NUMERIC_GROUP,
            (0, 0),
            ((0, 1), (0, 1)),
            leg_vertices,
            ((0, 1), (1, 1)),
        )

    hub = AdmissibleGraph(NUMERIC_GROUP, (0,), ((0, 2),), (), ((0, 1), (0, 1)))
    free = AdmissibleTriple(first_graph(()), hub, ())
    assert sorted(eq_group(free)) == [(0, 1), (1, 0)]
    pinned = AdmissibleTriple(first_graph((0,)), hub, (1,))
    assert eq_group(pinned) == [(0, 1)]


def test_triple_equivalence_properties():
    triples = enumerate_triples(TripleAlphabet(max_roots=2))[:25]
    for t in triples:
        assert triples_equivalent(t, t)
    for t in triples:
        for u in triples[:10]:
            assert triples_equivalent(t, u) == triples_equivalent(u, t)
    # transitivity across explicit reorderings
    base = AdmissibleTriple(
        _vertex_graph(1, weights=(1, 2)), _vertex_graph(2, weights=(1, 2)), ()
    )
    one = base.reorder((1, 0))
    two = one.reorder((1, 0))
    assert triples_equivalent(base, one)
    assert triples_equivalent(one, two)
    assert triples_equivalent(base, two)
    # the enumeration keeps one representative per class
    keys = set()
    for t in enumerate_triples(TripleAlphabet(max_roots=2)):
        for u in (t,):
            assert not any(
                triples_equivalent(u, v) for v in keys if v.num_roots == u.num_roots
            )
        keys.add(t)


def test_graph_json_roundtrip():
    g = AdmissibleGraph(
        NUMERIC_GROUP, (0, 1), ((0, 2), (1, 1)), (1, 0), ((0, 1), (1, 1), (0, 1))
    )
    assert graph_from_json(g.to_json()) == g


def test_dot_export_carries_weights():
    eta = AdmissibleTriple(
        _vertex_graph(1, weights=(1, 2)), _vertex_graph(2, weights=(1, 2)), ()
    )
    glued, _, _, _ = glue(eta)
    dot = glued.to_dot()
    assert 'label="2"' in dot and "graph glued" in dot


# --- the gluing degree --------------------------------------------------------


def test_fiber_count_symmetric():
    eta = AdmissibleTriple(
        _vertex_graph(1, weights=(1, 1)), _vertex_graph(2, weights=(1, 1)), ()
    )
    m = realize_split_map(eta)
    count = fiber_count(eta, m, 1)
    image = m.automorphism_interface_image(1)
    assert count == 1 and len(image) == 2
    assert count * len(image) == phi_degree(eta) == 2


def test_fiber_count_asymmetric():
    eta = AdmissibleTriple(
        _vertex_graph(1, weights=(1, 2)), _vertex_graph(2, weights=(1, 2)), ()
    )
    m = realize_split_map(eta)
    assert fiber_count(eta, m, 1) == 1
    assert len(m.automorphism_interface_image(1)) == 1


def test_fiber_count_empty_side():
    empty = AdmissibleGraph(NUMERIC_GROUP, (), (), (), ())
    solo = AdmissibleGraph(NUMERIC_GROUP, (1,), ((3, 0),), (0,), ())
    eta = AdmissibleTriple(empty, solo, ())
    m = realize_split_map(eta)
    assert fiber_count(eta, m, 1) == 1


def test_half_to_graph_genus():
    # one thread through decompose: component genus follows the nodal formula
    m = SplitMap(
        [
            [Piece(1, 1, 1)],
            [Piece(0, 0, 0), Piece(0, 1, 0)],
            [Piece(1, 1, 1)],
        ],
        [((2, 0, 0), (1, 0, 1)), ((2, 0, 0), (1, 1, 0))],
    )
    side1, side2, _ = decompose(m, 2)
    g1 = half_to_graph(side1)
    assert g1.num_vertices == 1
    # pieces 1+2+1 minus nodes 2 inside the half: genus 1+0+0 + 2 - 3 + 1
    assert g1.genera == (1,)
    assert g1.deg_h(0) == 2
    assert sorted(g1.root_weights()) == [1, 2]


def test_eq_subgroup_closure_on_alphabet():
    triples = enumerate_triples(TripleAlphabet(max_roots=3, genera=(0,)))
    for tr in triples[:200]:
        elems = eq_group(tr)
        r = tr.num_roots
        if r:
            assert math.factorial(r) % len(elems) == 0
