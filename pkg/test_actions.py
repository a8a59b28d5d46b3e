"""Partial actions: axioms, restriction and the group-type test."""

import pytest

from src.actions import (
    PartialAction,
    TwistedPartialMap,
    compose_maps,
    idempotent_translation_check,
    is_global,
    is_group_type,
    restrict,
    validate_action,
)
from src.errors import NonGlobalActionError, PreconditionError
from src.rings import IdealOfIdempotents


def explicit_maps(doc):
    G = doc.groupoid
    return {G.id_of(name): doc.action.map(G.id_of(name)) for name in doc.explicit_maps}


def test_builtin_actions_are_valid(exe1, exe1_q, exe2, ex_invariant, groupoid12, inv_semigroup, disjoint):
    for doc in (exe1, exe1_q, exe2, ex_invariant, groupoid12, inv_semigroup, disjoint):
        report = validate_action(doc.action)
        assert report.ok, str(report)
        assert str(report) == "OK"


def test_global_flags(exe1, exe2, ex_invariant, groupoid12, inv_semigroup):
    assert is_global(exe1.action)
    assert is_global(exe2.action)
    assert is_global(inv_semigroup.action)
    assert not is_global(groupoid12.action)
    assert not is_global(ex_invariant.action)


def test_derived_inverse_maps(groupoid12):
    a = groupoid12.action
    G = a.groupoid
    assert a.map(G.id_of("g2")).pairs == ((1, 0, 0),)
    assert a.map(G.id_of("n^-1")).pairs == ((3, 1, 0),)
    assert a.domain(G.id_of("m")) == frozenset({0})
    assert a.ideal(G.id_of("m")) == frozenset({4})


def test_apply(exe1, ex_invariant):
    a = exe1.action
    S = a.ring
    g = a.groupoid.id_of("g")
    assert a.apply(g, S.one()) == S.idempotent([1])
    assert a.unit(g) == S.unit("y")

    b = ex_invariant.action
    R = b.ring
    i = R.field.generator()
    v = R.single(0, i)
    assert b.apply(b.groupoid.id_of("m"), v) == R.single(2, -i)
    assert b.apply(b.groupoid.id_of("l"), v) == R.single(2, i)


def test_mutated_map_breaks_composition(groupoid12):
    G = groupoid12.groupoid
    maps = explicit_maps(groupoid12)
    maps[G.id_of("m")] = TwistedPartialMap.build([(1, 4, 0)], 1)
    broken = PartialAction(G, groupoid12.ring, maps)
    report = validate_action(broken)
    assert not report.ok
    assert "domain" in {v.check for v in report.violations}


def test_non_injective_map_is_reported(exe2):
    G = exe2.groupoid
    maps = explicit_maps(exe2)
    maps[G.id_of("l")] = TwistedPartialMap.build([(0, 2, 0), (1, 2, 0)], 1)
    report = validate_action(PartialAction(G, exe2.ring, maps))
    assert "well-formed" in {v.check for v in report.violations}


def test_missing_map_is_an_error(exe1):
    with pytest.raises(ValueError):
        PartialAction(exe1.groupoid, exe1.ring, {})


def test_twisted_maps():
    f = TwistedPartialMap.build([(2, 0, 1), (0, 1, 3)], 2)
    assert f.pairs == ((0, 1, 1), (2, 0, 1))
    assert f.domain == frozenset({0, 2})
    assert f.codomain == frozenset({0, 1})
    assert f.inverse(2).pairs == ((0, 2, 1), (1, 0, 1))
    assert compose_maps(f.inverse(2), f, 2) == TwistedPartialMap.identity([0, 2])
    assert not TwistedPartialMap.build([(0, 1, 0), (2, 1, 0)], 1).is_injective()


def test_restrict_to_subgroupoid(exe2):
    L = exe2.subgroupoids["L"]
    part = restrict(exe2.action, L)
    assert len(part.groupoid) == 4
    assert part.ring.n == 4
    assert validate_action(part).ok
    l_old = exe2.groupoid.id_of("l")
    l_new = part.lineage.morphisms[l_old]
    assert part.map(l_new).pairs == exe2.action.map(l_old).pairs


def test_restrict_to_ideal(exe2):
    a = exe2.action
    part = restrict(a, IdealOfIdempotents(a.ring, frozenset({0, 2})))
    assert part.ring.names == ("e1", "e3")
    assert validate_action(part).ok
    assert not is_global(part)
    G = part.groupoid
    assert part.map(G.id_of("g")).pairs == ()
    assert part.map(G.id_of("l")).pairs == ((0, 1, 0),)
    assert is_group_type(part)


def test_restrict_to_ideal_needs_global(groupoid12, exe2):
    a = groupoid12.action
    with pytest.raises(NonGlobalActionError):
        restrict(a, IdealOfIdempotents(a.ring, frozenset({0, 3})))
    b = exe2.action
    with pytest.raises(PreconditionError):
        restrict(b, IdealOfIdempotents(b.ring, frozenset({0, 1})))


def test_group_type(groupoid12, ex_invariant, exe2):
    result = is_group_type(groupoid12.action)
    assert result
    assert [t.as_names() for t in result.transversals] == [{"x": "x", "y": "l"}]
    assert result.to_report("groupoid-12").group_type

    for name in ("M", "N"):
        negative = is_group_type(groupoid12.action, within=groupoid12.subgroupoids[name])
        assert not negative
        assert "no tau" in negative.obstruction
        assert "not group-type" in str(negative.to_report(name))

    assert is_group_type(ex_invariant.action, within=ex_invariant.subgroupoids["H8"])
    assert not is_group_type(ex_invariant.action, within=ex_invariant.subgroupoids["H10"])
    assert is_group_type(exe2.action, within=exe2.subgroupoids["M"])


def test_group_type_within_matches_restriction(groupoid12, ex_invariant):
    for doc in (groupoid12, ex_invariant):
        for name, H in doc.subgroupoids.items():
            direct = bool(is_group_type(doc.action, within=H))
            restricted = bool(is_group_type(restrict(doc.action, H)))
            assert direct == restricted, name


def test_idempotent_translation(groupoid12):
    witness = is_group_type(groupoid12.action)
    report = idempotent_translation_check(groupoid12.action, witness.transversals[0])
    assert report.ok, str(report)
