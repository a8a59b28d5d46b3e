"""Galois coordinates, strength, B(S) and the correspondence."""

import pytest

from src import galois
from src.errors import HypothesisUnmet, InconsistencyError
from src.galois import (
    GaloisCoords,
    alpha_strong_check,
    class_B,
    component_coords,
    correspondence,
    find_coords,
    glue_coords,
    object_coords,
    split_coords,
    verify_coords,
)
from src.dsl import load_spec
from src.groupoid import isotropy_group
from src.invariants import invariants_of
from src.rings import BlockSubring

CYCLIC = """\
field: GF(5);
groupoid { objects: x; arrows: g: x -> x, g2: x -> x; compose: g g = g2, g g g = x; }
ring { x: e1, e2, e3; }
action { g: e1 -> e2, e2 -> e3, e3 -> e1; g2: e1 -> e3, e2 -> e1, e3 -> e2; }
"""

VANISHING = """\
field: GF(5);
groupoid { objects: x; arrows: g: x -> x; compose: g g = x; }
ring { x: e1, e2; }
action { g: ; }
"""

# (non-identity morphisms, invariant ring) for rows of the inverse-semigroup table
INV_SEMIGROUP_ROWS = [
    ("", "k e1 + k e2 + k e3 + k e4 + k e5 + k e6"),
    ("f12", "k(e1+e2) + k e3 + k e4 + k e5 + k e6"),
    ("f13", "k e1 + k e2 + k(e3+e4) + k e5 + k e6"),
    ("f23", "k e1 + k e2 + k e3 + k e4 + k(e5+e6)"),
    ("d23_1 d32_1", "k(e1+e3) + k(e2+e4) + k e5 + k e6"),
    ("d13_2 d31_2", "k(e1+e6) + k(e2+e5) + k e3 + k e4"),
    ("f12 f13", "k(e1+e2) + k(e3+e4) + k e5 + k e6"),
    ("f12 f23", "k(e1+e2) + k e3 + k e4 + k(e5+e6)"),
    ("f13 f23", "k e1 + k e2 + k(e3+e4) + k(e5+e6)"),
    ("f13 d13_2 d31_2", "k(e1+e6) + k(e2+e5) + k(e3+e4)"),
    ("f23 d23_1 d32_1", "k(e1+e3) + k(e2+e4) + k(e5+e6)"),
    ("d23_1 d32_1 d13_2 d31_2 p13_23 p23_13", "k(e1+e3+e6) + k(e2+e4+e5)"),
    ("f12 f13 d23_1 d32_1 p12_13 p13_12", "k(e1+e2+e3+e4) + k e5 + k e6"),
    ("f12 f23 d13_2 d31_2 p12_23 p23_12", "k(e1+e2+e5+e6) + k e3 + k e4"),
    ("f13 f23 d12_3 d21_3 p13_23 p23_13", "k e1 + k e2 + k(e3+e4+e5+e6)"),
    ("f12 f13 f23", "k(e1+e2) + k(e3+e4) + k(e5+e6)"),
    ("f12 f13 f23 d23_1 d32_1 p12_13 p13_12", "k(e1+e2+e3+e4) + k(e5+e6)"),
    ("f12 f13 f23 d13_2 d31_2 p12_23 p23_12", "k(e1+e2+e5+e6) + k(e3+e4)"),
    ("f12 f13 f23 d12_3 d21_3 p13_23 p23_13", "k(e1+e2) + k(e3+e4+e5+e6)"),
]


@pytest.mark.parametrize("fixture", ["exe1", "exe1_q", "exe2", "groupoid12", "inv_semigroup", "disjoint"])
def test_trivial_coordinates(request, fixture):
    a = request.getfixturevalue(fixture).action
    coords = find_coords(a)
    assert coords is not None
    assert coords.m == a.ring.n
    assert coords.a == coords.b
    assert verify_coords(a, coords).ok


def test_coordinates_undetermined_for_fixed_points(ex_invariant):
    assert find_coords(ex_invariant.action) is None


def test_bad_coordinates_fail(exe1):
    a = exe1.action
    S = a.ring
    bad = GaloisCoords(a=(S.one(),), b=(S.one(),))
    check = verify_coords(a, bad)
    assert not check.ok
    assert check.failing_object == "x"
    assert "fail at" in str(check)


def test_coords_report(exe1):
    report = find_coords(exe1.action).to_report()
    assert report.found
    assert report.a == ["e1", "e2"]
    assert str(report).startswith("coordinates (m=2):")


def test_split_and_glue(disjoint):
    a = disjoint.action
    coords = find_coords(a)
    parts = split_coords(a, coords)
    assert len(parts) == 2
    glued = glue_coords(a, parts)
    assert verify_coords(a, glued).ok
    assert component_coords(a, "glue", component_coords(a, "split", coords)) == glued
    with pytest.raises(ValueError):
        component_coords(a, "sideways", coords)


def test_glue_detects_broken_parts(disjoint):
    a = disjoint.action
    parts = split_coords(a, find_coords(a))
    with pytest.raises(InconsistencyError):
        glue_coords(a, parts[:1])


def test_object_coordinates(groupoid12):
    a = groupoid12.action
    local = object_coords(a, find_coords(a), "x")
    assert verify_coords(a, local, within=isotropy_group(a.groupoid, "x")).ok
    assert all(v.support <= a.ring.supp("x") for v in local.a)


@pytest.mark.parametrize("fixture", ["exe1", "exe2", "groupoid12", "inv_semigroup"])
def test_rows_are_strong(request, fixture):
    doc = request.getfixturevalue(fixture)
    for entry in correspondence(doc.action).entries:
        report = alpha_strong_check(doc.action, entry.subring)
        assert report.is_strong, str(report)
        assert report.base_objects is True
        assert report.witness is None


def test_strength_paths_split_on_unclosed_rings(exe2):
    a = exe2.action
    T = BlockSubring.make(a.ring, [([0, 2], [0, 0], 1), ([1], [0], 1), ([3], [0], 1)])
    report = alpha_strong_check(a, T)
    assert report.per_hom_set
    assert not report.common_target
    assert not report.is_strong
    assert report.base_objects is True
    assert report.witness.startswith("g=x, h=l^-1")


def test_non_strong_ring_fails_every_path():
    a = load_spec(CYCLIC).action
    T = BlockSubring.make(a.ring, [([0], [0], 1), ([1, 2], [0, 0], 1)])
    report = alpha_strong_check(a, T)
    assert (report.per_hom_set, report.common_target, report.base_objects) == (False, False, False)
    assert not report.is_strong
    assert report.witness.startswith("g=x, h=g,")


def test_strength_disagreement_on_a_row_is_an_error(exe2, monkeypatch):
    a = exe2.action
    T = invariants_of(a, exe2.subgroupoids["L"])
    monkeypatch.setattr(galois, "_strong_common_target", lambda a, T: "g=x, h=g")
    with pytest.raises(InconsistencyError, match="disagree"):
        alpha_strong_check(a, T)


def test_strength_disagreement_is_a_counterexample(exe1, monkeypatch):
    monkeypatch.setattr(galois, "_strong_common_target", lambda a, T: "g=x, h=g")
    table = galois.CorrespondenceTable(action=exe1.action)
    H = exe1.subgroupoids["Whole"]
    galois._certify_row(exe1.action, H, invariants_of(exe1.action, H), table)
    assert not table.certified
    assert any("disagree" in c for c in table.counterexamples)
    assert table.entries[0].strong is False


@pytest.mark.parametrize("fixture,rows,R", [
    ("exe1", 2, "k(e1+e2)"),
    ("exe1_q", 2, "k(e1+e2)"),
    ("exe2", 7, "k(e1+e2+e3+e4)"),
    ("groupoid12", 6, "k(e1+e2+e4+e5) + k(e3+e6)"),
    ("inv_semigroup", 31, "k(e1+e2+e3+e4+e5+e6)"),
])
def test_correspondence(request, fixture, rows, R):
    a = request.getfixturevalue(fixture).action
    table = correspondence(a)
    assert table.certified, table.counterexamples
    assert len(table.entries) == rows
    rendered = [e.subring.render() for e in table.entries]
    assert len(set(rendered)) == rows
    assert invariants_of(a, a.groupoid).render() == R
    assert R in rendered
    assert BlockSubring.full(a.ring).render() in rendered
    for e in table.entries:
        assert e.separable and e.strong

    summary = table.summary()
    assert summary.certified
    assert [r.subring for r in summary.rows] == rendered


def test_correspondence_round_trip(groupoid12):
    a = groupoid12.action
    names = {e.subring.render(): e.subgroupoid.names for e in correspondence(a).entries}
    assert names["k(e1+e4) + k(e2+e5) + k(e3+e6)"] == groupoid12.subgroupoids["L"].names
    assert names["k(e1+e2) + k e3 + k(e4+e5) + k e6"] == groupoid12.subgroupoids["GH"].names


def test_disconnected_correspondence_is_glued(disjoint):
    table = correspondence(disjoint.action)
    assert table.certified, table.counterexamples
    assert len(table.entries) == 12
    objects = {tuple(sorted(e.subgroupoid.objects)) for e in table.entries}
    assert objects == {("u", "v", "x", "y")}


def test_class_b_matches_rows(exe2):
    members = class_B(exe2.action)
    rows = [e.subring for e in correspondence(exe2.action).entries]
    assert len(members) == 7
    assert set(members) == set(rows)


def test_hypothesis_unmet(ex_invariant):
    with pytest.raises(HypothesisUnmet, match="hypothesis"):
        correspondence(ex_invariant.action)
    with pytest.raises(HypothesisUnmet):
        class_B(ex_invariant.action)


def test_vanishing_morphism_fails_the_hypothesis():
    a = load_spec(VANISHING).action
    assert find_coords(a) is not None
    with pytest.raises(HypothesisUnmet, match=r"S_g = 0 for g in \{g\}"):
        correspondence(a)
    with pytest.raises(HypothesisUnmet):
        class_B(a)


def test_inverse_semigroup_rows(inv_semigroup):
    table = correspondence(inv_semigroup.action)
    rows = {frozenset(e.subgroupoid.names): e.subring.render() for e in table.entries}
    for extra, render in INV_SEMIGROUP_ROWS:
        key = frozenset(["x", "y", "z", *extra.split()])
        assert rows.get(key) == render, extra
