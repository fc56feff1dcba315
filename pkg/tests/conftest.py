import pytest

from degkit import NodeRing, Poly, TruncatedAlgebra


@pytest.fixture(scope="session")
def Qs8():
    return TruncatedAlgebra(("s",), order=8)


@pytest.fixture(scope="session")
def Rs8(Qs8):
    return NodeRing(Qs8, order=8)


@pytest.fixture(scope="session")
def Qs6():
    return TruncatedAlgebra(("s",), order=6)


@pytest.fixture(scope="session")
def Rs6(Qs6):
    return NodeRing(Qs6, order=6)


@pytest.fixture(scope="session")
def Qs4():
    return TruncatedAlgebra(("s",), order=4)


@pytest.fixture(scope="session")
def QQ():
    # the rationals as a base: s is killed and the truncation is immediate
    return TruncatedAlgebra(("s",), relations=[Poly(1, {(1,): 1})], order=1)


@pytest.fixture(scope="session")
def Qeps():
    return TruncatedAlgebra(("s", "e"), relations=[Poly(2, {(1, 0): 1})], order=2)


@pytest.fixture(scope="session")
def Qc2():
    return TruncatedAlgebra(("s", "c"), relations=[Poly(2, {(1, 0): 1})], order=2)


@pytest.fixture(scope="session")
def obstructed():
    """The two-generator local base with c*s = c^2 = 0 and s^4 = 0."""
    return TruncatedAlgebra(
        ("s", "c"),
        relations=[Poly(2, {(1, 1): 1}), Poly(2, {(0, 2): 1})],
        order=4,
    )
