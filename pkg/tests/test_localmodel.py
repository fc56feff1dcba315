import pytest
from fractions import Fraction

from degkit import (
    Poly,
    RatFunc,
    RationalMap,
    StandardEmbedding,
    fourfold_resolution,
    gamma_atlas,
    principal_chart_map,
    relative_action,
    splice_check,
    standard_embedding,
    verify_atlas,
    verify_principal_chart,
    verify_resolution,
)


def _map(vars_, comps):
    n = len(vars_)
    return RationalMap(vars_, [RatFunc(c) if isinstance(c, Poly) else c for c in comps])


def test_transition_formula_n1():
    at = gamma_atlas(1)
    u1, u2, u3 = (Poly.var(3, i) for i in range(3))
    expected = RationalMap(
        ("u1", "u2", "u3"),
        [RatFunc(u1 * u2), RatFunc(Poly.one(3)) / RatFunc(u2), RatFunc(u3 * u2)],
    )
    assert at.transition(1).equal_on_dense(expected)


def test_projection_and_action_n1():
    at = gamma_atlas(1)
    u1, u2, u3 = (Poly.var(3, i) for i in range(3))
    proj = RationalMap(("u1", "u2", "u3"), [RatFunc(u1 * u2), RatFunc(u3)])
    assert at.projection(1).equal_on_dense(proj)
    # (u1, u2, u3)^sigma = (u1, sigma u2, u3 / sigma)
    comps = at.action(1).components
    names = at.chart_vars + at.params
    assert comps[0].render(names) == "u1"
    assert comps[1].render(names) == "u2*sigma1"
    assert comps[2].render(names) == "(u3)/(sigma1)"


def test_transition_formula_n2_l1():
    at = gamma_atlas(2)
    u = [Poly.var(4, i) for i in range(4)]
    expected = RationalMap(
        ("u1", "u2", "u3", "u4"),
        [
            RatFunc(u[0] * u[1]),
            RatFunc(Poly.one(4)) / RatFunc(u[1]),
            RatFunc(u[2] * u[1]),
            RatFunc(u[3]),
        ],
    )
    assert at.transition(1).equal_on_dense(expected)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_atlas_identities(n):
    report = verify_atlas(gamma_atlas(n))
    assert report.passed, report.failures()


def test_atlas_identities_at_random_points():
    # independent route: evaluate the chart identities at random rational
    # points instead of comparing symbolically
    import random
    from fractions import Fraction

    rng = random.Random(11)
    at = gamma_atlas(2)
    for _ in range(25):
        pt = [Fraction(rng.randrange(1, 9), rng.randrange(1, 5)) for _ in range(4)]
        moved = [c.substitute([RatFunc(Poly.const(1, v)) for v in pt])
                 for c in at.transition(1).components]
        via = [c.substitute(moved) for c in at.projection(2).components]
        direct = [c.substitute([RatFunc(Poly.const(1, v)) for v in pt])
                  for c in at.projection(1).components]
        for a, b in zip(via, direct):
            assert a.same(b)


def test_corrupted_transition_detected():
    at = gamma_atlas(2)
    bad = at.with_transition(1, at.transition(2))
    report = verify_atlas(bad)
    assert not report.passed
    names = [c.name for c in report.failures()]
    assert any("compat" in x or "cocycle" in x for x in names)


def test_atlas_bound():
    with pytest.raises(ValueError):
        gamma_atlas(9)


def test_trivial_model():
    at = gamma_atlas(0)
    assert len(at.projections) == 1
    assert at.transitions == ()
    assert verify_atlas(at).passed


# --- resolution of the quadric fourfold -----------------------------------


def test_resolution_report():
    _, report = verify_resolution()
    assert report.passed, report.failures()


def test_resolution_point_evaluation():
    res = fourfold_resolution()
    # the exceptional chart b = [0, 1] sends (eta1, eta2) = (1, 0) to the
    # first axis
    values = [Fraction(0), Fraction(1), Fraction(0)]
    out = [
        c.substitute([RatFunc(Poly.const(1, v)) for v in values])
        for c in res.chart_b1.components
    ]
    assert [o.num.const_coeff() for o in out] == [1, 0, 0, 0]


def test_resolution_kills_relation():
    res = fourfold_resolution()
    z1, z2, t1, t2 = res.resolution.components
    assert (z1 * z2 - t1 * t2).is_zero()


# --- embeddings and coordinate planes --------------------------------------


def test_standard_embedding_unit_fill():
    emb = standard_embedding(StandardEmbedding(3, (1, 3), True))
    names = ("z1", "z2")
    assert [c.render(names) for c in emb.components] == ["z1", "1", "z2"]


def test_standard_embedding_zero_fill():
    emb = standard_embedding(StandardEmbedding(3, (1, 3), False))
    names = ("z1", "z2")
    assert [c.render(names) for c in emb.components] == ["z1", "0", "z2"]


def test_standard_embedding_identity():
    emb = standard_embedding(StandardEmbedding(3, (1, 2, 3), True))
    assert emb.equal_on_dense(RationalMap.identity(("z1", "z2", "z3")))


def test_standard_embedding_validation():
    with pytest.raises(ValueError):
        StandardEmbedding(3, ())
    with pytest.raises(ValueError):
        StandardEmbedding(3, (2, 2))
    with pytest.raises(ValueError):
        StandardEmbedding(3, (0, 1))


# --- reparametrized chart inverses -----------------------------------------


def test_principal_chart_full_subset_is_identity():
    report, psi, inverse = verify_principal_chart(1, (1, 2))
    assert report.passed
    assert psi.equal_on_dense(RationalMap.identity(psi.source_vars))


def test_principal_chart_example():
    report, psi, inverse = verify_principal_chart(2, (1, 3))
    assert report.passed
    names = psi.source_vars + psi.params
    rendered = [c.render(names) for c in psi.components]
    assert rendered == ["z1", "sigma1", "(z2)/(sigma1)"]
    inv_names = inverse.source_vars
    assert [c.render(inv_names) for c in inverse.components] == [
        "w2",
        "w1",
        "w2*w3",
    ]


@pytest.mark.parametrize(
    "n,subset",
    [
        (2, (1, 2)),
        (2, (2,)),
        (2, (3,)),
        (3, (1, 4)),
        (3, (2,)),
        (3, (1, 2, 3)),
        (4, (2, 4)),
    ],
)
def test_principal_chart_inverses(n, subset):
    report, _, inverse = verify_principal_chart(n, subset)
    assert report.passed, report.failures()
    assert inverse is not None


def test_principal_chart_corrupted_fails():
    complement = (2,)
    report, _, inverse = verify_principal_chart(2, (1, 3), exponents=[[0], [0]])
    assert not report.passed
    assert inverse is None


# --- relative actions -------------------------------------------------------


def test_relative_action_formulas():
    act, report = relative_action(1, reversed_order=False)
    names = act.source_vars + act.params
    assert [c.render(names) for c in act.components] == ["(t1)/(sigma1)"]
    assert report.passed
    act_rev, report_rev = relative_action(1, reversed_order=True)
    assert [c.render(names) for c in act_rev.components] == ["t1*sigma1"]
    assert report_rev.passed


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("rev", [False, True])
def test_relative_action_equivariance(n, rev):
    _, report = relative_action(n, rev)
    assert report.passed


# --- splice decomposition ----------------------------------------------------


def test_splice_pullback_examples():
    at = gamma_atlas(1)
    # t1 pulls back to u1*u2 on the first chart and to u1 on the second
    names = at.chart_vars
    assert at.projection(1).components[0].render(names) == "u1*u2"
    assert at.projection(2).components[0].render(names) == "u1"
    # t2 pulls back to u3 on the first chart and u2*u3 on the second
    assert at.projection(1).components[1].render(names) == "u3"
    assert at.projection(2).components[1].render(names) == "u2*u3"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_splice_reports(n):
    for l in range(1, n + 2):
        report = splice_check(n, l)
        assert report.passed, (n, l, report.failures())


def test_splice_index_range():
    with pytest.raises(ValueError):
        splice_check(2, 4)


def test_principal_chart_map_shape():
    psi, complement = principal_chart_map(2, (1, 3))
    assert complement == (2,)
    assert psi.arity_out == 3


def test_torus_hom_placement():
    from degkit import TorusHom

    hom = TorusHom(3, (1, 3))
    assert hom.source_rank == 2
    assert hom.component_exponents() == [[1, 0], [0, 0], [0, 1]]
    with pytest.raises(ValueError):
        TorusHom(2, (3,))
