"""Split rings, block subrings, enumeration and separability."""

import pytest

from src.errors import NotBlockExpressible, PreconditionError, SizeGuardExceeded
from src.fields import CoeffField
from src.rings import (
    BlockSubring,
    IdealOfIdempotents,
    SplitRing,
    SubfieldRestriction,
    TwistEdge,
    ZeroCoordinate,
    enumerate_block_subrings,
    separability_check,
    set_partitions,
    subring_from_solution_space,
)

GF5 = CoeffField.finite(5)
QI = CoeffField.quadratic(-1)


@pytest.fixture
def ring3():
    return SplitRing.build(GF5, {"x": [0, 1], "y": [2]})


@pytest.fixture
def ring_qi():
    return SplitRing.build(QI, {"x": [0], "y": [1]})


def test_split_ring_basics(ring3):
    assert ring3.n == 3
    assert ring3.names == ("e1", "e2", "e3")
    assert ring3.supp("x") == frozenset({0, 1})
    assert ring3.object_of(2) == "y"
    assert str(ring3.unit("x")) == "e1 + e2"
    v = ring3.single(0, GF5.from_prime(2)) + ring3.single(2, GF5.from_prime(-1))
    assert str(v) == "2*e1 + 4*e3"
    assert v.support == frozenset({0, 2})
    assert str(ring3.zero()) == "0"


def test_split_ring_rejects_bad_supports():
    with pytest.raises(ValueError):
        SplitRing.build(GF5, {"x": [0], "y": [0]})
    with pytest.raises(ValueError):
        SplitRing.build(GF5, {"x": [0], "y": []})


def test_restrict(ring3):
    sub, index_map = ring3.restrict(["y"])
    assert sub.names == ("e3",)
    assert index_map == {2: 0}
    T = BlockSubring.make(ring3, [([0, 2], [0, 0], 1), ([1], [0], 1)])
    assert T.restrict(sub, index_map).render() == "k e3"


def test_ideal_idempotents(ring3):
    ideal = IdealOfIdempotents(ring3, frozenset({0, 1, 2}))
    assert len(list(ideal.idempotents())) == 7
    assert ideal.contains(ring3.unit("x"))
    assert not IdealOfIdempotents(ring3, frozenset({0})).contains(ring3.unit("x"))


def test_render_and_membership(ring3):
    T = BlockSubring.make(ring3, [([1, 0], [0, 0], 1), ([2], [0], 1)])
    assert T.render() == "k(e1+e2) + k e3"
    assert T.dimension() == 2
    assert T.contains(ring3.one())
    assert not T.contains(ring3.idempotent([0]))
    assert T.coordinates(ring3.unit("x").scale(3)) == [3, 0]
    assert BlockSubring.full(ring3).contains_subring(T)
    assert not T.contains_subring(BlockSubring.full(ring3))


def test_twisted_blocks_are_canonical(ring_qi):
    T = BlockSubring.make(ring_qi, [([1, 0], [1, 0], 2)])
    same = BlockSubring.make(ring_qi, [([0, 1], [1, 0], 2)])
    assert T == same
    assert T.render() == "k(e1+conj e2)"
    i = QI.generator()
    assert T.contains(ring_qi.element([i, -i]))
    assert not T.contains(ring_qi.element([i, i]))
    assert T.dimension() == 2

    rational = BlockSubring.make(ring_qi, [([0, 1], [0, 1], 1)])
    assert rational.render() == "Q(e1+e2)"


def test_make_rejects_bad_partitions(ring3):
    with pytest.raises(ValueError):
        BlockSubring.make(ring3, [([0, 1], [0, 0], 1)])
    with pytest.raises(ValueError):
        BlockSubring.make(ring3, [([0, 1, 2], [0, 0, 0], 2)])


def test_solution_spaces(ring_qi):
    T = subring_from_solution_space(ring_qi, [TwistEdge(0, 1, 1)])
    assert T.render() == "k(e1+conj e2)"
    T = subring_from_solution_space(ring_qi, [TwistEdge(0, 1, 1), SubfieldRestriction(1, 1)])
    assert T.render() == "Q(e1+e2)"
    T = subring_from_solution_space(ring_qi, [TwistEdge(0, 0, 1)])
    assert T.render() == "Q e1 + k e2"
    # a twisted cycle e1 -> e2 -> e1 with total twist 1
    T = subring_from_solution_space(ring_qi, [TwistEdge(0, 1, 0), TwistEdge(1, 0, 1)])
    assert T.render() == "Q(e1+e2)"
    with pytest.raises(NotBlockExpressible):
        subring_from_solution_space(ring_qi, [ZeroCoordinate(0)])


@pytest.mark.parametrize("n,bell", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)])
def test_set_partitions(n, bell):
    partitions = list(set_partitions(n))
    assert len(partitions) == bell
    for p in partitions:
        assert sorted(i for block in p for i in block) == list(range(n))


@pytest.mark.parametrize("field,n,expected", [
    (GF5, 2, 2),
    (GF5, 6, 203),
    (QI, 1, 2),
    (QI, 2, 7),
    (CoeffField.finite(2, 2), 2, 7),
])
def test_block_subring_counts(field, n, expected):
    S = SplitRing.build(field, {"x": list(range(n))})
    found = list(enumerate_block_subrings(S))
    assert len(found) == expected
    assert len(set(found)) == expected


def test_size_guard():
    S = SplitRing.build(GF5, {"x": list(range(13))})
    with pytest.raises(SizeGuardExceeded):
        next(enumerate_block_subrings(S))
    assert next(enumerate_block_subrings(S, allow_large=True)).render().startswith("k(e1+e2+")


def test_separability_witness(ring3):
    R = BlockSubring.make(ring3, [([0, 1, 2], [0, 0, 0], 1)])
    for T in enumerate_block_subrings(ring3):
        witness = separability_check(T, R)
        assert witness is not None, T.render()
        total = ring3.zero()
        for (i, j), c in witness.coefficients.items():
            total = total + (witness.basis[i] * witness.basis[j]).scale(c)
        assert total == ring3.one()
        assert witness.terms()


def test_separability_over_the_rationals(ring_qi):
    R = BlockSubring.make(ring_qi, [([0, 1], [0, 0], 1)])
    assert separability_check(BlockSubring.full(ring_qi), R) is not None


def test_separability_needs_inclusion(ring3):
    T = BlockSubring.make(ring3, [([0, 1, 2], [0, 0, 0], 1)])
    with pytest.raises(PreconditionError):
        separability_check(T, BlockSubring.full(ring3))
