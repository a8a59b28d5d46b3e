"""Finite groupoids: tables, components, transversals and subgroupoids."""

import pytest

from src.errors import InconsistencyError, PreconditionError
from src.groupoid import (
    FiniteGroupoid,
    Subgroupoid,
    coarse_isomorphism,
    connected_components,
    enumerate_subgroupoids,
    enumerate_transversals,
    isotropy_group,
    product_groupoid,
    subgroupoid_closure,
    tau_of,
    validate_groupoid,
)


def ids(G, *names):
    return frozenset(G.id_of(n) for n in names)


def test_builtin_groupoids_are_valid(exe1, exe2, ex_invariant, groupoid12, inv_semigroup, disjoint):
    for doc in (exe1, exe2, ex_invariant, groupoid12, inv_semigroup, disjoint):
        assert validate_groupoid(doc.groupoid).ok, doc.source


def test_sizes_and_ids(exe1, exe2, groupoid12, inv_semigroup):
    assert len(exe1.groupoid) == 4
    assert len(exe2.groupoid) == 8
    assert len(groupoid12.groupoid) == 12
    assert len(inv_semigroup.groupoid) == 18

    G = groupoid12.groupoid
    assert [G.name_of(g) for g in G.ids] == [
        "x", "y", "g", "g2", "h", "h2", "l", "m", "n", "l^-1", "m^-1", "n^-1",
    ]


def test_composition_follows_relations(groupoid12):
    G = groupoid12.groupoid
    n = G.id_of
    assert G.compose(n("l"), n("g")) == n("m")
    assert G.compose(n("m"), n("g")) == n("n")
    assert G.compose(n("g"), n("g2")) == n("x")
    assert G.product(n("h"), n("l"), n("g")) == n("n")
    assert G.compose(n("g"), n("l")) is None
    assert G.inverse(n("g")) == n("g2")
    assert G.source(n("l^-1")) == "y"


def test_hom_sets(groupoid12):
    G = groupoid12.groupoid
    assert G.names(G.hom("x", "y")) == ["l", "m", "n"]
    assert G.names(G.hom("y", "x")) == ["l^-1", "m^-1", "n^-1"]
    assert G.names(isotropy_group(G, "x").morphisms) == ["x", "g", "g2"]


def test_connected_components(disjoint, groupoid12):
    parts = connected_components(disjoint.groupoid)
    assert [c.objects for c in parts] == [("u", "v"), ("x", "y")]
    assert parts[0].names == ["u", "v", "a", "a^-1"]

    G = groupoid12.groupoid
    discrete = Subgroupoid(G, ids(G, "x", "y", "g", "g2"))
    assert [c.objects for c in connected_components(discrete)] == [("x",), ("y",)]


def test_transversals_and_tau(groupoid12):
    G = groupoid12.groupoid
    transversals = list(enumerate_transversals(G, "x"))
    assert [t.as_names() for t in transversals] == [
        {"x": "x", "y": "l"},
        {"x": "x", "y": "m"},
        {"x": "x", "y": "n"},
    ]
    t = transversals[0]
    assert G.name_of(tau_of(t, G.id_of("m"))) == "g"
    assert G.name_of(tau_of(t, G.id_of("h"))) == "g"
    assert G.name_of(tau_of(t, G.id_of("n^-1"))) == "g"


def test_coarse_isomorphism(groupoid12):
    G = groupoid12.groupoid
    for t in enumerate_transversals(G, "y"):
        witness = coarse_isomorphism(G, t)
        images = set(witness.mapping.values())
        assert len(images) == 12
        assert {u for _, u in images} == set(G.hom("y", "y"))


def test_coarse_isomorphism_needs_connected(disjoint):
    G = disjoint.groupoid
    t = next(enumerate_transversals(G, "u"))
    with pytest.raises(PreconditionError):
        coarse_isomorphism(G, t)


def test_validate_reports_broken_tables():
    G = FiniteGroupoid(["x"], [("g", "x", "x")], {("g", "g"): "g"}, {"g": "g"}, name="broken")
    report = validate_groupoid(G)
    assert not report.ok
    assert {v.check for v in report.violations} >= {"inverse"}
    assert "violation" in str(report)


def test_isotropy_group_must_close():
    G = FiniteGroupoid(
        ["x", "y"], [("g", "x", "x"), ("k", "x", "y")],
        {("g", "g"): "k"},
        {"g": "g", "k": "k"},
    )
    with pytest.raises(InconsistencyError):
        isotropy_group(G, "x")


def test_closure(groupoid12):
    G = groupoid12.groupoid
    closure = subgroupoid_closure(G, [G.id_of("l")])
    assert closure.names == ["x", "y", "l", "l^-1"]
    everything = subgroupoid_closure(G, [G.id_of("l"), G.id_of("m")])
    assert len(everything) == 12


@pytest.mark.parametrize("fixture,wide,expected", [
    ("exe1", True, 2),
    ("exe2", True, 7),
    ("groupoid12", True, 8),
    ("inv_semigroup", True, 31),
    ("ex_invariant", False, 11),
])
def test_subgroupoid_counts(request, fixture, wide, expected):
    G = request.getfixturevalue(fixture).groupoid
    found = enumerate_subgroupoids(G, wide_only=wide)
    assert len(found) == expected
    assert all(H.is_closed() for H in found)
    assert len({H.morphisms for H in found}) == expected
    if wide:
        assert all(H.is_wide for H in found)


def test_subgroupoid_order_is_deterministic(exe2):
    found = enumerate_subgroupoids(exe2.groupoid, wide_only=True)
    assert [H.names for H in found][:2] == [["x", "y"], ["x", "y", "g"]]
    assert found[-1].names == exe2.groupoid.whole().names


def test_as_groupoid(groupoid12):
    G = groupoid12.groupoid
    H = groupoid12.subgroupoids["GH"]
    sub, back = H.as_groupoid()
    assert sub.objects == ("x", "y")
    assert len(sub) == 6
    assert validate_groupoid(sub).ok
    assert sub.name_of(back[G.id_of("g2")]) == "g2"


def test_product_groupoid():
    G = product_groupoid(("x", "y"), 2, [[0, 1], [1, 0]], name="C2")
    assert len(G) == 8
    assert validate_groupoid(G).ok
    assert G.compose(G.id_of("a1_x_y"), G.id_of("a1_x_x")) == G.id_of("a0_x_y")
    assert G.inverse(G.id_of("a1_x_y")) == G.id_of("a1_y_x")
