import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from degkit import (
    AlgebraHom,
    ContactData,
    ContactError,
    NodeRing,
    Poly,
    TruncatedAlgebra,
    adjoin_nilpotent,
    check_pure_contact,
    combined_predeformability_ideal,
    contact_orders,
    enumerate_homs,
    flat_local_forcing,
    is_nondegenerate,
    predeformability_ideal,
    verify_base_change,
    verify_universality,
)
from degkit.contact import TRIVIAL


def simple_data(ring):
    alg = ring.algebra
    return ContactData(ring, alg.s, ring.z1(), ring.z2())


def obstructed_data(obstructed):
    ring = NodeRing(obstructed, order=4)
    phi1 = ring.normal_form({(2, 0): obstructed.one(), (1, 0): obstructed.gen(1)})
    phi2 = ring.normal_form({(0, 2): obstructed.one()})
    return ContactData(ring, obstructed.s ** 2, phi1, phi2)


def test_homomorphism_constraint_enforced(Rs8, Qs8):
    with pytest.raises(ContactError):
        ContactData(Rs8, Qs8.s, Rs8.z1(), Rs8.z1())


def test_contact_orders_basic(Rs8):
    assert contact_orders(simple_data(Rs8)) == (1, 1)


def test_contact_orders_scalar_units(Rs8, Qs8):
    d = ContactData(
        Rs8,
        Qs8.s ** 3,
        Rs8.z1(3, Qs8.const(2)),
        Rs8.z2(3, Qs8.const(Fraction(1, 2))),
    )
    assert contact_orders(d) == (3, 3)


def test_contact_orders_residue_field(obstructed):
    assert contact_orders(obstructed_data(obstructed)) == (2, 2)


def test_contact_order_errors(Rs8, Qs8):
    flat = ContactData(Rs8, Qs8.zero(), Rs8.zero(), Rs8.z2())
    with pytest.raises(ContactError) as err:
        contact_orders(flat)
    assert err.value.code == "degenerate_order"
    masked = ContactData(
        Rs8, Qs8.s ** 2, Rs8.z1(1, Qs8.s), Rs8.z2()
    )
    with pytest.raises(ContactError) as err:
        contact_orders(masked)
    assert err.value.code == "order_truncation"


def test_nondegeneracy(Rs8, Qs8):
    assert is_nondegenerate(simple_data(Rs8)) == (True, 1)
    squares = ContactData(Rs8, Qs8.s ** 2, Rs8.z1(2), Rs8.z2(2))
    assert is_nondegenerate(squares) == (True, 3)
    broken = ContactData(Rs8, Qs8.zero(), Rs8.zero(), Rs8.z2())
    assert is_nondegenerate(broken) == (False, None)


# --- purity -------------------------------------------------------------


def test_pure_basic(Rs8):
    report = check_pure_contact(simple_data(Rs8), 1)
    assert report.pure and report.orientation == "straight"
    assert report.beta == Rs8.one()
    assert report.epsilon == Rs8.algebra.one()


def test_pure_order_mismatch(Rs8):
    report = check_pure_contact(simple_data(Rs8), 2)
    assert not report.pure
    assert report.certificate is not None


def test_pure_with_unit_reparametrization():
    alg = TruncatedAlgebra(("s", "c"), relations=[Poly(2, {(1, 0): 1})], order=3)
    ring = NodeRing(alg, order=5)
    phi2 = ring.normal_form({(0, 1): alg.one(), (0, 2): alg.gen(1)})
    data = ContactData(ring, alg.zero(), ring.z1(), phi2)
    report = check_pure_contact(data, 1)
    assert report.pure
    # beta is the inverse of 1 + c z2 because z1 z2 = 0 here
    assert report.beta.z2_tail()[0] == -alg.gen(1)
    assert report.epsilon == alg.one()


def test_pure_swapped_orientation(Rs8, Qs8):
    data = ContactData(Rs8, Qs8.s, Rs8.z2(), Rs8.z1())
    report = check_pure_contact(data, 1)
    assert report.pure and report.orientation == "swapped"
    assert not check_pure_contact(data, 1, allow_swap=False).pure


@given(seed=st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_swap_symmetry(seed):
    alg = TruncatedAlgebra(("s",), order=4)
    ring = NodeRing(alg, order=4)
    rng = random.Random(seed)
    n = rng.randrange(1, 3)
    beta = ring.one() * Fraction(rng.randrange(1, 4))
    if rng.random() < 0.5:
        beta = beta + ring.z1(1, alg.s)
    eps = alg.const(rng.randrange(1, 4))
    phi1 = beta * ring.z1(n)
    phi2 = (beta.inverse() * eps) * ring.z2(n)
    data = ContactData(ring, (phi1 * phi2).a0, phi1, phi2)
    straight = check_pure_contact(data, n)
    swapped = check_pure_contact(data.swapped(), n)
    assert straight.pure == swapped.pure
    assert straight.order == swapped.order


# --- the universal ideal --------------------------------------------------


def test_ideal_zero_for_pure_input(Rs8):
    ideal = predeformability_ideal(simple_data(Rs8), 1)
    assert ideal.is_zero()


def test_ideal_precondition(Rs8):
    with pytest.raises(ContactError) as err:
        predeformability_ideal(simple_data(Rs8), 2)
    assert err.value.code == "nonunit_leading"


def test_obstructed_ideal_is_c(obstructed):
    data = obstructed_data(obstructed)
    ideal = predeformability_ideal(data, 2)
    c = obstructed.gen(1)
    assert ideal.contains(c)
    assert not ideal.contains(obstructed.s)
    assert ideal.span.dim == 1


def standard_targets(QQ, Qeps, Qs4, Qc2):
    return (QQ, Qeps, Qs4, Qc2)


def test_universality_on_obstructed(obstructed, QQ, Qeps, Qs4, Qc2):
    data = obstructed_data(obstructed)
    homs = []
    for target in standard_targets(QQ, Qeps, Qs4, Qc2):
        homs.extend(enumerate_homs(obstructed, target, limit=40))
    assert len(homs) >= 8
    holds, results = verify_universality(data, 2, homs)
    assert holds
    assert any(pure for _, pure, _ in results)
    assert any(not pure for _, pure, _ in results)


def test_quotient_makes_it_pure(obstructed):
    data = obstructed_data(obstructed)
    ideal = predeformability_ideal(data, 2)
    _, quotient = ideal.quotient_algebra()
    pushed = data.push(quotient)
    assert check_pure_contact(pushed, 2, allow_swap=False).pure


def test_non_killing_hom_stays_obstructed(obstructed, Qc2):
    data = obstructed_data(obstructed)
    hom = AlgebraHom(obstructed, Qc2, [Qc2.s, Qc2.gen(1)])
    pushed = data.push(hom)
    assert not check_pure_contact(pushed, 2, allow_swap=False).pure


def test_base_change_identity(obstructed):
    data = obstructed_data(obstructed)
    ident = AlgebraHom.identity(obstructed)
    assert verify_base_change(data, 2, ident)


def test_base_change_quotient_and_extension(obstructed):
    data = obstructed_data(obstructed)
    ideal = predeformability_ideal(data, 2)
    _, quotient = ideal.quotient_algebra()
    assert verify_base_change(data, 2, quotient)
    _, inclusion = adjoin_nilpotent(obstructed, "d", 2)
    assert verify_base_change(data, 2, inclusion)


def test_universality_on_randomized_fixtures(QQ, Qeps, Qs4, Qc2):
    # random obstructed data over the two-obstruction base algebra; the
    # ideal must predict purity after every enumerated base change
    rels = [
        Poly(3, {(0, 2, 0): 1}),
        Poly(3, {(0, 0, 2): 1}),
        Poly(3, {(0, 1, 1): 1}),
        Poly(3, {(1, 1, 0): 1}),
        Poly(3, {(1, 0, 1): 1}),
    ]
    A = TruncatedAlgebra(("s", "c", "d"), rels, order=4)
    ring = NodeRing(A, order=4)
    homs = []
    for target in (QQ, Qeps, Qs4, Qc2):
        homs.extend(enumerate_homs(A, target, limit=30))
    assert homs
    rng = random.Random(5150)
    for _ in range(8):
        n = rng.randrange(1, 3)
        beta = ring.series(
            A.const(rng.choice([1, 2, -1])),
            [A.s * rng.randrange(-1, 2)],
            [A.const(rng.randrange(-1, 2))],
        )
        eps = A.const(rng.choice([1, 3])) + A.s * rng.randrange(0, 2)
        phi1 = beta * ring.z1(n)
        phi2 = (beta.inverse() * eps) * ring.z2(n)
        # nilpotent obstructions multiply to zero against everything
        for gen, low in ((A.gen(1), 1), (A.gen(2), 1)):
            if rng.random() < 0.7:
                phi1 = phi1 + ring.z1(rng.randrange(low, n + 1), gen)
        data = ContactData(ring, (phi1 * phi2).a0, phi1, phi2)
        holds, _ = verify_universality(data, n, homs)
        assert holds


def test_combined_ideal(obstructed):
    data = obstructed_data(obstructed)
    ring = data.ring
    pure = ContactData(ring, obstructed.s, ring.z1(), ring.z2())
    total = combined_predeformability_ideal([(data, 2), (pure, 1)])
    assert total.contains(obstructed.gen(1))
    assert total.span.dim == 1


# --- flatness forcing -----------------------------------------------------


def test_forcing_basic(Rs8, Qs8):
    report = flat_local_forcing(simple_data(Rs8))
    assert report.order == 1
    assert report.beta1 == Rs8.one() and report.beta2 == Rs8.one()
    assert report.epsilon == Qs8.one()


def test_forcing_scalars(Rs6, Qs6):
    data = ContactData(
        Rs6,
        Qs6.const(6) * Qs6.s ** 2,
        Rs6.z1(2, Qs6.const(2)),
        Rs6.z2(2, Qs6.const(3)),
    )
    report = flat_local_forcing(data)
    assert report.order == 2
    assert report.beta1.a0 == Qs6.const(2)
    assert report.beta2.a0 == Qs6.const(3)
    assert report.epsilon == Qs6.const(6)


def test_forcing_unit_series(Rs6, Qs6):
    one_plus_s = Qs6.one() + Qs6.s
    data = ContactData(
        Rs6, Qs6.s * one_plus_s, Rs6.z1(1, one_plus_s), Rs6.z2()
    )
    report = flat_local_forcing(data)
    assert report.order == 1
    assert report.beta1.a0 == one_plus_s
    assert report.epsilon == one_plus_s


def test_forcing_rejects_trivial_mode(Rs8, Qs8):
    data = ContactData(Rs8, Qs8.s, Rs8.z1(), Rs8.z2(), mode=TRIVIAL)
    with pytest.raises(ContactError) as err:
        flat_local_forcing(data)
    assert err.value.code == "flatness"


def test_forcing_rejects_torsion():
    # s itself killed: psi_t = 0 has torsion everywhere
    alg = TruncatedAlgebra(("s",), relations=[Poly(1, {(1,): 1})], order=2)
    ring = NodeRing(alg, order=4)
    data = ContactData(ring, alg.zero(), ring.z1(), ring.z2(2))
    with pytest.raises(ContactError):
        flat_local_forcing(data)


@given(seed=st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_pivot_and_dense_routes_agree(seed):
    # two independent decision procedures for purity must coincide
    from degkit.contact import _dense_pure_solve, _pure_witness

    alg = TruncatedAlgebra(
        ("s", "c"),
        relations=[Poly(2, {(1, 1): 1}), Poly(2, {(0, 2): 1})],
        order=3,
    )
    ring = NodeRing(alg, order=4)
    rng = random.Random(seed)
    n = rng.randrange(1, 3)
    c = alg.gen(1)
    phi1 = ring.z1(n, alg.const(rng.choice([1, 2, -1])))
    if rng.random() < 0.6:
        phi1 = phi1 + ring.z1(rng.randrange(1, n + 1), c)
    phi2 = ring.z2(n, alg.const(rng.choice([1, 3])))
    prod = phi1 * phi2
    if not (all(x.is_zero() for x in prod.a) and all(x.is_zero() for x in prod.b)):
        return
    data = ContactData(ring, prod.a0, phi1, phi2)
    fast_beta, fast_eps, fast_cert = _pure_witness(data, n, swap=False)
    dense_beta, dense_eps, dense_cert = _dense_pure_solve(phi1, phi2, n)
    assert (fast_beta is None) == (dense_beta is None)
    if fast_beta is not None:
        zn = ring.z1(n)
        assert fast_beta * zn == phi1 == dense_beta * zn


def test_product_conserved_by_reparametrization(obstructed):
    # the defining product is untouched by the elimination: whenever the
    # witnesses exist, s^n eps reproduces psi_t; on an obstructed input the
    # discrepancy collected by the ideal accounts for the difference
    data = obstructed_data(obstructed)
    ideal = predeformability_ideal(data, 2)
    _, quotient = ideal.quotient_algebra()
    pushed = data.push(quotient)
    report = check_pure_contact(pushed, 2, allow_swap=False)
    T = pushed.algebra
    assert pushed.psi_t == T.s ** 2 * report.epsilon


def test_forcing_witness_product(Rs6, Qs6):
    beta = Rs6.one() + Rs6.z1(1, Qs6.s) + Rs6.z2(2)
    eps = Qs6.one() + Qs6.s * 2
    phi1 = beta * Rs6.z1(2)
    phi2 = (beta.inverse() * eps) * Rs6.z2(2)
    data = ContactData(Rs6, (phi1 * phi2).a0, phi1, phi2)
    report = flat_local_forcing(data)
    prod = report.beta1 * report.beta2
    assert prod.a0 == report.epsilon == eps
    assert all(x.is_zero() for x in prod.a + prod.b)
    assert data.psi_t == Qs6.s ** 2 * report.epsilon
