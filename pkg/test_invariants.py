"""Invariant subrings, fixer sets and the global-case decomposition."""

import itertools

import pytest

from src.actions import is_group_type
from src.errors import GroupTypeRequired, NonGlobalActionError, PreconditionError
from src.dsl import builtin_names, load_builtin
from src.groupoid import Subgroupoid, component_of, enumerate_subgroupoids
from src.invariants import (
    fixer_characterization_check,
    fixer_criterion_check,
    fixer_set,
    global_case_decomposition,
    invariance_test_via_tau,
    invariants_of,
    invariants_via_phi,
    is_invariant,
    isotropy_fixer,
    local_subring,
    phi_tau,
)
from src.rings import BlockSubring


def group_type_subgroupoids(doc, wide_only=True):
    return [
        H for H in enumerate_subgroupoids(doc.groupoid, wide_only=wide_only)
        if is_group_type(doc.action, within=H)
    ]


def tau_test_vectors(a, T):
    """The prime basis of T, the prime basis of S, and S-basis shifts of a T element."""
    inside = T.prime_basis()
    base = inside[0]
    for t in inside[1:]:
        base = base + t
    outside = a.ring.prime_basis()
    return inside + outside + [base + v for v in outside]


def test_invariants_of_examples(exe1, groupoid12, ex_invariant):
    assert invariants_of(exe1.action, exe1.subgroupoids["Whole"]).render() == "k(e1+e2)"
    assert invariants_of(exe1.action, exe1.subgroupoids["Objects"]).render() == "k e1 + k e2"

    a = groupoid12.action
    assert invariants_of(a, a.groupoid).render() == "k(e1+e2+e4+e5) + k(e3+e6)"
    assert invariants_of(a, groupoid12.subgroupoids["M"]).render() == "k(e1+e5) + k e2 + k e3 + k e4 + k e6"

    b = ex_invariant.action
    assert invariants_of(b, ex_invariant.subgroupoids["H4"]).render() == "Q e1 + k e2 + k e3 + k e4"
    assert invariants_of(b, ex_invariant.subgroupoids["H8"]).render() == "Q e1 + k e2 + Q e3 + k e4"
    assert invariants_of(b, ex_invariant.subgroupoids["H10"]).render() == "k(e1+conj e3) + k e2 + k e4"
    assert invariants_of(b, ex_invariant.subgroupoids["H11"]).render() == "Q(e1+e3) + k(e2+e4)"


def test_invariant_elements_are_invariant(groupoid12, ex_invariant):
    for doc in (groupoid12, ex_invariant):
        for name, H in doc.subgroupoids.items():
            T = invariants_of(doc.action, H)
            for t in T.prime_basis():
                assert is_invariant(doc.action, H, t), name


@pytest.mark.parametrize("name", builtin_names())
def test_invariants_via_phi_agree(name):
    doc = load_builtin(name)
    for H in group_type_subgroupoids(doc, wide_only=False):
        assert invariants_via_phi(doc.action, H) == invariants_of(doc.action, H), H.label()


def test_invariants_via_phi_with_twists(ex_invariant):
    a = ex_invariant.action
    for name in ("H8", "H11", "H9", "H4"):
        H = ex_invariant.subgroupoids[name]
        assert invariants_via_phi(a, H) == invariants_of(a, H), name


def test_invariants_via_phi_needs_group_type(ex_invariant):
    with pytest.raises(GroupTypeRequired):
        invariants_via_phi(ex_invariant.action, ex_invariant.subgroupoids["H10"])


def test_phi_tau(groupoid12):
    a = groupoid12.action
    S = a.ring
    t = is_group_type(a).transversals[0]
    assert phi_tau(a, t, S.idempotent([0])) == S.idempotent([0, 3])
    assert phi_tau(a, t, S.unit("x")) == S.one()


def test_invariance_via_tau_matches_definition(groupoid12):
    a = groupoid12.action
    S = a.ring
    t = is_group_type(a).transversals[0]
    for r in range(S.n + 1):
        for combo in itertools.combinations(range(S.n), r):
            v = S.idempotent(combo)
            assert invariance_test_via_tau(a, t, v) == is_invariant(a, a.groupoid, v), combo


@pytest.mark.parametrize("name", builtin_names())
def test_invariance_via_tau_on_invariant_rings(name):
    doc = load_builtin(name)
    a = doc.action
    for H in group_type_subgroupoids(doc, wide_only=False):
        T = invariants_of(a, H)
        vectors = tau_test_vectors(a, T)
        for t in is_group_type(a, within=H).transversals:
            component = component_of(H, t.base)
            for v in vectors:
                expected = is_invariant(a, component, v)
                assert invariance_test_via_tau(a, t, v, within=H) == expected, (H.label(), str(v))
            assert all(invariance_test_via_tau(a, t, v, within=H) for v in T.prime_basis())


def test_fixer_set_not_a_subgroupoid(ex_invariant):
    a = ex_invariant.action
    fixer = fixer_set(a, ex_invariant.subrings["T"])
    assert fixer.names(a) == ["x", "y", "g", "h", "m", "m^-1"]
    assert not fixer.is_subgroupoid
    assert fixer.subgroupoid is None
    assert "not a subgroupoid" in str(fixer.to_report(a))


def test_fixer_of_invariants(groupoid12):
    a = groupoid12.action
    for name in ("Whole", "L", "GH"):
        H = groupoid12.subgroupoids[name]
        fixer = fixer_set(a, invariants_of(a, H))
        assert fixer.is_subgroupoid
        assert fixer.morphisms == H.morphisms, name


def test_isotropy_fixer(groupoid12):
    a = groupoid12.action
    T = invariants_of(a, groupoid12.subgroupoids["GH"])
    assert isotropy_fixer(a, T, "x").names == ["x", "g", "g2"]
    T = invariants_of(a, groupoid12.subgroupoids["L"])
    assert isotropy_fixer(a, T, "y").names == ["y"]


@pytest.mark.parametrize("name", builtin_names())
def test_fixer_criteria_agree(name):
    doc = load_builtin(name)
    for H in group_type_subgroupoids(doc):
        for report in fixer_criterion_check(doc.action, H):
            assert report.agree, str(report)


@pytest.mark.parametrize("fixture", ["exe2", "groupoid12", "inv_semigroup"])
def test_fixer_recovers_subgroupoid(request, fixture):
    doc = request.getfixturevalue(fixture)
    for H in group_type_subgroupoids(doc):
        assert all(report.left for report in fixer_criterion_check(doc.action, H)), H.label()


@pytest.mark.parametrize("name", builtin_names())
def test_fixer_characterization(name):
    doc = load_builtin(name)
    a = doc.action
    for H in group_type_subgroupoids(doc):
        for g in a.groupoid.ids:
            report = fixer_characterization_check(a, H, g)
            assert report.agree, str(report)


def test_fixer_characterization_on_galois_rows(groupoid12):
    a = groupoid12.action
    for name in ("Whole", "L", "GH"):
        H = groupoid12.subgroupoids[name]
        for g in a.groupoid.ids:
            assert fixer_characterization_check(a, H, g).left == (g in H)


def test_fixer_checks_need_group_type(groupoid12, ex_invariant):
    M = groupoid12.subgroupoids["M"]
    with pytest.raises(GroupTypeRequired):
        fixer_criterion_check(groupoid12.action, M)
    with pytest.raises(GroupTypeRequired):
        fixer_characterization_check(ex_invariant.action, ex_invariant.subgroupoids["H10"], 0)


def test_local_subring(groupoid12):
    T = invariants_of(groupoid12.action, groupoid12.subgroupoids["L"])
    assert local_subring(T, "y").render() == "k e4 + k e5 + k e6"


def test_decompose_subgroupoid(exe2):
    report = global_case_decomposition(exe2.action, exe2.subgroupoids["L"])
    assert report.result == "k(e1+e3) + k(e2+e4)"
    assert len(report.pieces) == 1
    piece = report.pieces[0]
    assert piece.base == "x"
    assert piece.isotropy == ["x"]
    assert piece.local == "k e1 + k e2"
    assert piece.transversal == {"x": "x", "y": "l"}

    report = global_case_decomposition(exe2.action, exe2.subgroupoids["GH"])
    assert [p.base for p in report.pieces] == ["x", "y"]
    assert [p.local for p in report.pieces] == ["k(e1+e2)", "k(e3+e4)"]


def test_decompose_subring(exe2, inv_semigroup):
    a = exe2.action
    T = invariants_of(a, exe2.subgroupoids["GH"])
    report = global_case_decomposition(a, T)
    assert report.result == "{x, y, g, h}"
    assert [p.isotropy for p in report.pieces] == [["x", "g"], ["y", "h"]]

    b = inv_semigroup.action
    H11 = inv_semigroup.subgroupoids["H11"]
    report = global_case_decomposition(b, invariants_of(b, H11))
    assert report.result == "{" + ", ".join(H11.names) + "}"
    assert report.pieces[0].isotropy == ["x"]


def test_decompose_preconditions(exe2, groupoid12):
    with pytest.raises(NonGlobalActionError):
        global_case_decomposition(groupoid12.action, groupoid12.subgroupoids["L"])

    a = exe2.action
    S = a.ring
    literal = BlockSubring.make(S, [([0, 2], [0, 0], 1), ([1], [0], 1), ([3], [0], 1)])
    assert fixer_set(a, literal).morphisms == Subgroupoid(a.groupoid, frozenset({0, 1})).morphisms
    with pytest.raises(PreconditionError):
        global_case_decomposition(a, literal)
