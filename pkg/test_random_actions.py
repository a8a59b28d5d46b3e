"""Seeded property sweeps over random free actions and their restrictions."""

import itertools
import random

import pytest

from src.actions import is_global, is_group_type, restrict, validate_action, vanishing_morphisms
from src.errors import HypothesisUnmet
from src.galois import correspondence, find_coords, verify_coords
from src.groupoid import component_of, enumerate_subgroupoids
from src.invariants import (
    fixer_characterization_check,
    fixer_criterion_check,
    invariance_test_via_tau,
    invariants_of,
    invariants_via_phi,
    is_invariant,
)
from src.randomgen import random_global_action, random_group_type_action, random_partial_action

PRIMES = (2, 3, 5)


def all_elements(S):
    """Every element of S; only sensible over GF(2) with few idempotents."""
    F = S.field
    for coords in itertools.product([F.zero(), F.one()], repeat=S.n):
        yield S.element(list(coords))


def restricted_group_type_actions(count, degenerate, limit=3000):
    """Non-global group-type actions with coordinates, from restrict_probability=1.0."""
    found = []
    for seed in range(limit):
        a = random_partial_action(random.Random(seed), PRIMES[seed % 2], restrict_probability=1.0)
        if is_global(a) or bool(vanishing_morphisms(a)) != degenerate:
            continue
        if not is_group_type(a) or find_coords(a) is None:
            continue
        found.append(a)
        if len(found) == count:
            break
    return found


@pytest.mark.parametrize("p", PRIMES)
def test_random_actions_are_valid(p):
    rng = random.Random(1000 + p)
    for _ in range(70):
        a = random_partial_action(rng, p)
        report = validate_action(a)
        assert report.ok, str(report)


@pytest.mark.parametrize("seed", range(50))
def test_trivial_coordinates_on_free_actions(seed):
    a = random_partial_action(random.Random(seed), PRIMES[seed % 3])
    coords = find_coords(a)
    assert coords is not None
    assert verify_coords(a, coords).ok


@pytest.mark.parametrize("seed", range(25))
def test_invariants_match_brute_force(seed):
    a = random_partial_action(random.Random(seed), 2)
    elements = list(all_elements(a.ring))
    for H in enumerate_subgroupoids(a.groupoid, wide_only=True):
        T = invariants_of(a, H)
        for v in elements:
            assert T.contains(v) == is_invariant(a, H, v), (H.label(), str(v))


@pytest.mark.parametrize("seed", range(25))
def test_invariance_via_tau_matches_definition(seed):
    a = random_group_type_action(random.Random(seed), 2)
    witness = is_group_type(a)
    assert witness
    elements = list(all_elements(a.ring))
    for t in witness.transversals:
        component = component_of(a.groupoid, t.base)
        for v in elements:
            assert invariance_test_via_tau(a, t, v) == is_invariant(a, component, v)


@pytest.mark.parametrize("seed", range(30))
def test_phi_agrees_and_group_type_restricts(seed):
    a = random_partial_action(random.Random(seed), PRIMES[seed % 3])
    for H in enumerate_subgroupoids(a.groupoid, wide_only=True):
        witness = is_group_type(a, within=H)
        assert bool(witness) == bool(is_group_type(restrict(a, H)))
        if witness:
            assert invariants_via_phi(a, H) == invariants_of(a, H)


@pytest.mark.parametrize("seed", range(15))
def test_global_correspondence_is_certified(seed):
    a = random_global_action(random.Random(seed), PRIMES[seed % 3])
    assert is_global(a)
    table = correspondence(a)
    assert table.certified, table.counterexamples
    wide = enumerate_subgroupoids(a.groupoid, wide_only=True)
    assert len(table.entries) == len(wide)


def test_partial_correspondences_are_certified():
    actions = restricted_group_type_actions(50, degenerate=False)
    assert len(actions) == 50
    for a in actions:
        table = correspondence(a)
        assert table.certified, (a, table.counterexamples)
        wide = [H for H in enumerate_subgroupoids(a.groupoid, wide_only=True) if is_group_type(a, within=H)]
        assert len(table.entries) == len(wide)


def test_vanishing_morphisms_fail_the_hypothesis():
    actions = restricted_group_type_actions(10, degenerate=True)
    assert len(actions) == 10
    for a in actions:
        with pytest.raises(HypothesisUnmet, match="S_g = 0"):
            correspondence(a)


@pytest.mark.parametrize("seed", range(20))
def test_fixer_checks_on_random_actions(seed):
    a = random_group_type_action(random.Random(seed), PRIMES[seed % 3], nondegenerate=True)
    for H in enumerate_subgroupoids(a.groupoid, wide_only=True):
        if not is_group_type(a, within=H):
            continue
        for report in fixer_criterion_check(a, H):
            assert report.agree, str(report)
        for g in a.groupoid.ids:
            report = fixer_characterization_check(a, H, g)
            assert report.agree, str(report)


@pytest.mark.parametrize("seed", range(20))
def test_invariance_via_tau_on_invariant_rings(seed):
    a = random_group_type_action(random.Random(seed), PRIMES[seed % 3], nondegenerate=True)
    for H in enumerate_subgroupoids(a.groupoid):
        witness = is_group_type(a, within=H)
        if not witness:
            continue
        T = invariants_of(a, H)
        for t in witness.transversals:
            component = component_of(H, t.base)
            for v in T.prime_basis() + a.ring.prime_basis():
                assert invariance_test_via_tau(a, t, v, within=H) == is_invariant(a, component, v)
