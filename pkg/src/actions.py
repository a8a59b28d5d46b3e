"""Unital partial actions of a finite groupoid on a split ring.

Each alpha_g is stored as a twisted partial bijection of idempotent indices:
pairs (i, sigma_g(i), k) meaning alpha_g(a e_i) = sigma^k(a) e_sigma_g(i).
D(g) is the index set of S_g = S 1_g (the codomain of alpha_g), so the
domain of alpha_g is D(g^-1).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import NonGlobalActionError, PreconditionError
from .groupoid import (
    FiniteGroupoid,
    GroupoidLike,
    Subgroupoid,
    Transversal,
    as_subgroupoid,
    connected_components,
)
from .models import GroupTypeReport, ValidationReport
from .rings import IdealOfIdempotents, RingElement, SplitRing

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TwistedPartialMap:
    """An index bijection D(g^-1) -> D(g) with an automorphism exponent per index."""

    pairs: Tuple[Tuple[int, int, int], ...]

    @classmethod
    def build(cls, pairs: Iterable[Tuple[int, int, int]], degree: int) -> "TwistedPartialMap":
        return cls(tuple(sorted((i, j, k % degree) for i, j, k in pairs)))

    @classmethod
    def identity(cls, indices: Iterable[int]) -> "TwistedPartialMap":
        return cls(tuple((i, i, 0) for i in sorted(indices)))

    @property
    def domain(self) -> FrozenSet[int]:
        return frozenset(i for i, _, _ in self.pairs)

    @property
    def codomain(self) -> FrozenSet[int]:
        return frozenset(j for _, j, _ in self.pairs)

    def sigma(self, i: int) -> int:
        for src, dst, _ in self.pairs:
            if src == i:
                return dst
        raise KeyError(i)

    def twist(self, i: int) -> int:
        for src, _, k in self.pairs:
            if src == i:
                return k
        raise KeyError(i)

    def as_dict(self) -> Dict[int, Tuple[int, int]]:
        return {i: (j, k) for i, j, k in self.pairs}

    def inverse(self, degree: int) -> "TwistedPartialMap":
        return TwistedPartialMap.build(((j, i, -k) for i, j, k in self.pairs), degree)

    def is_injective(self) -> bool:
        return len(self.codomain) == len(self.pairs)


def compose_maps(f: TwistedPartialMap, g: TwistedPartialMap, degree: int) -> TwistedPartialMap:
    """f after g, defined on {i in dom g : sigma_g(i) in dom f}."""
    outer = f.as_dict()
    pairs = []
    for i, j, k in g.pairs:
        if j in outer:
            target, power = outer[j]
            pairs.append((i, target, k + power))
    return TwistedPartialMap.build(pairs, degree)


@dataclass
class Lineage:
    """How a restricted action sits inside the one it came from (old -> new)."""

    morphisms: Dict[int, int]
    indices: Dict[int, int]


class PartialAction:
    """alpha = (S_g, alpha_g) for every morphism g of a groupoid."""

    def __init__(
        self,
        groupoid: FiniteGroupoid,
        ring: SplitRing,
        maps: Mapping[int, TwistedPartialMap],
        lineage: Optional[Lineage] = None,
    ):
        """Attach maps to morphisms.

        Identities default to the identity of S_x; a missing map is derived
        from the map of the inverse morphism when that one is given.

        Raises:
            ValueError: If some morphism has neither its own map nor its inverse's
        """
        self.groupoid = groupoid
        self.ring = ring
        self.lineage = lineage
        degree = ring.field.degree
        resolved: Dict[int, TwistedPartialMap] = dict(maps)
        for x in groupoid.objects:
            resolved.setdefault(groupoid.identity(x), TwistedPartialMap.identity(ring.supp(x)))
        for g in groupoid.ids:
            if g in resolved:
                continue
            gi = groupoid.inverse(g)
            if gi not in maps:
                raise ValueError(f"No partial map given for {groupoid.name_of(g)} or its inverse")
            resolved[g] = maps[gi].inverse(degree)
        self._maps = resolved

    @classmethod
    def from_names(
        cls,
        groupoid: FiniteGroupoid,
        ring: SplitRing,
        table: Mapping[str, Sequence[Tuple[str, str, int]]],
    ) -> "PartialAction":
        """Build from ``arrow -> [(source idempotent, target idempotent, power)]``."""
        degree = ring.field.degree
        maps = {
            groupoid.id_of(name): TwistedPartialMap.build(
                ((ring.index_of(a), ring.index_of(b), k) for a, b, k in pairs), degree
            )
            for name, pairs in table.items()
        }
        return cls(groupoid, ring, maps)

    def __repr__(self) -> str:
        return f"PartialAction({self.groupoid!r} on {self.ring.n} idempotents over {self.ring.field})"

    @property
    def degree(self) -> int:
        return self.ring.field.degree

    def map(self, g: int) -> TwistedPartialMap:
        return self._maps[g]

    def ideal(self, g: int) -> FrozenSet[int]:
        """D(g): the indices spanning S_g."""
        return self._maps[g].codomain

    def domain(self, g: int) -> FrozenSet[int]:
        """D(g^-1): the indices spanning the domain of alpha_g."""
        return self._maps[g].domain

    def unit(self, g: int) -> RingElement:
        """1_g."""
        return self.ring.idempotent(self.ideal(g))

    def apply(self, g: int, v: RingElement) -> RingElement:
        """alpha_g(v 1_{g^-1})."""
        k = self.ring.field
        coords = [k.zero()] * self.ring.n
        for i, j, power in self._maps[g].pairs:
            coords[j] = k.sigma(v.coords[i], power)
        return RingElement(self.ring, tuple(coords))

    def name_of(self, g: int) -> str:
        return self.groupoid.name_of(g)


def validate_action(a: PartialAction) -> ValidationReport:
    """Check that a is a unital partial action.

    Covers identity maps, well-formed index maps, alpha_g^-1 = alpha_{g^-1},
    domain containment and composition extension for every composable pair,
    the set identity alpha_g(S_{g^-1} cap S_h) = S_g cap S_gh, and the
    projection identity alpha_g(alpha_h(v 1_{h^-1}) 1_{g^-1}) =
    alpha_gh(v 1_{(gh)^-1}) 1_g on the prime basis of S.
    """
    G, S = a.groupoid, a.ring
    n = G.name_of
    report = ValidationReport(subject=f"action on {G.name}".strip())
    degree = a.degree

    for x in G.objects:
        if a.map(G.identity(x)) != TwistedPartialMap.identity(S.supp(x)):
            report.add("identity", [x], f"alpha_{x} is not the identity of S_{x}")

    for g in G.ids:
        f = a.map(g)
        if not f.is_injective():
            report.add("well-formed", [n(g)], "index map is not injective")
        if not f.domain <= S.supp(G.source(g)):
            report.add("well-formed", [n(g)], f"domain leaves S_{G.source(g)}")
        if not f.codomain <= S.supp(G.target(g)):
            report.add("well-formed", [n(g)], f"image leaves S_{G.target(g)}")
        if a.map(G.inverse(g)) != f.inverse(degree):
            report.add("inverse", [n(g)], f"alpha_{n(G.inverse(g))} is not the inverse of alpha_{n(g)}")

    basis = S.prime_basis()
    for g in G.ids:
        for h in G.ids:
            gh = G.compose(g, h)
            if gh is None:
                continue
            fg, fh, fgh = a.map(g), a.map(h), a.map(gh)
            chain = compose_maps(fg, fh, degree)

            if not chain.domain <= fgh.domain:
                missing = sorted(chain.domain - fgh.domain)
                report.add("domain", [n(g), n(h)], f"indices {missing} not in D(({n(gh)})^-1)")
            composite = fgh.as_dict()
            for i, j, k in chain.pairs:
                if i in composite and composite[i] != (j, k):
                    report.add("composition", [n(g), n(h)], f"alpha_g alpha_h differs from alpha_gh at {S.names[i]}")
                    break

            image = {fg.sigma(i) for i in fg.domain & fh.codomain}
            if image != a.ideal(g) & a.ideal(gh):
                report.add("ideals", [n(g), n(h)], "alpha_g(S_{g^-1} cap S_h) != S_g cap S_gh")

            unit_g = a.unit(g)
            for v in basis:
                if a.apply(g, a.apply(h, v)) != a.apply(gh, v) * unit_g:
                    report.add("projection", [n(g), n(h)], f"fails on {v}")
                    break

    if report.ok:
        logger.debug(f"{report.subject}: valid")
    else:
        logger.info(f"{report.subject}: {len(report.violations)} violation(s)")
    return report


def is_global(a: PartialAction) -> bool:
    """S_g = S_{t(g)} for every g."""
    G = a.groupoid
    return all(a.ideal(g) == a.ring.supp(G.target(g)) for g in G.ids)


def vanishing_morphisms(a: PartialAction) -> List[int]:
    """Morphisms g with S_g = 0, in id order."""
    return [g for g in a.groupoid.ids if not a.ideal(g)]


RestrictionTarget = Union[Subgroupoid, IdealOfIdempotents]


def restrict(a: PartialAction, target: RestrictionTarget) -> PartialAction:
    """Restrict to a subgroupoid (or component), or to an ideal of a global action.

    Raises:
        NonGlobalActionError: Ideal mode on a non-global action
        PreconditionError: If the ideal misses an object entirely
    """
    if isinstance(target, IdealOfIdempotents):
        return _restrict_to_ideal(a, target)
    return _restrict_to_subgroupoid(a, target)


def _restrict_to_subgroupoid(a: PartialAction, H: Subgroupoid) -> PartialAction:
    sub, morphisms = H.as_groupoid()
    ring, indices = a.ring.restrict(H.objects)
    maps = {
        morphisms[g]: TwistedPartialMap.build(
            ((indices[i], indices[j], k) for i, j, k in a.map(g).pairs), a.degree
        )
        for g in H
    }
    return PartialAction(sub, ring, maps, Lineage(morphisms=morphisms, indices=indices))


def _restrict_to_ideal(a: PartialAction, ideal: IdealOfIdempotents) -> PartialAction:
    if not is_global(a):
        raise NonGlobalActionError("ideal restriction needs a global action")
    G, S = a.groupoid, a.ring
    D = ideal.indices
    support = {}
    for x in G.objects:
        kept = sorted(S.supp(x) & D)
        if not kept:
            raise PreconditionError(f"ideal misses every idempotent of object {x}")
        support[x] = kept
    order = sorted(D)
    indices = {old: new for new, old in enumerate(order)}
    ring = SplitRing.build(
        S.field,
        {x: [indices[i] for i in kept] for x, kept in support.items()},
        [S.names[i] for i in order],
    )
    maps = {}
    for g in G.ids:
        # alpha_g restricted to S_{s(g)} cap beta_g^-1(S_{t(g)} cap I)
        pairs = [
            (indices[i], indices[j], k) for i, j, k in a.map(g).pairs
            if i in D and j in D
        ]
        maps[g] = TwistedPartialMap.build(pairs, a.degree)
    return PartialAction(G, ring, maps, Lineage(morphisms={g: g for g in G.ids}, indices=indices))


@dataclass
class GroupTypeResult:
    """Per-component witness transversals, or the first obstruction."""

    ok: bool
    transversals: List[Transversal] = field(default_factory=list)
    obstruction: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok

    def transversal_for(self, y: str) -> Transversal:
        for t in self.transversals:
            if y in t.objects:
                return t
        raise PreconditionError(f"No transversal covers object {y}")

    def to_report(self, subject: str) -> GroupTypeReport:
        return GroupTypeReport(
            subject=subject,
            group_type=self.ok,
            transversals=[t.as_names() for t in self.transversals],
            obstruction=self.obstruction,
        )


def is_group_type(a: PartialAction, within: Optional[GroupoidLike] = None) -> GroupTypeResult:
    """Search a group-type transversal in every component of ``within``.

    The base of each component is its least object x; for each other y the
    first tau in H(x, y) with D(tau^-1) = supp(x) and D(tau) = supp(y) is
    taken, which yields the lexicographically least witness.
    """
    H = as_subgroupoid(within if within is not None else a.groupoid)
    G, S = a.groupoid, a.ring
    transversals = []
    for component in connected_components(H):
        x = component.objects[0]
        picks = []
        for y in component.objects:
            if y == x:
                picks.append((y, G.identity(x)))
                continue
            tau = next(
                (g for g in component.hom(x, y)
                 if a.domain(g) == S.supp(x) and a.ideal(g) == S.supp(y)),
                None,
            )
            if tau is None:
                reason = f"no tau in {H.label()}({x}, {y}) with S_tau^-1 = S_{x} and S_tau = S_{y}"
                logger.debug(reason)
                return GroupTypeResult(ok=False, obstruction=reason)
            picks.append((y, tau))
        transversals.append(Transversal(G, x, tuple(picks)))
    return GroupTypeResult(ok=True, transversals=transversals)


def idempotent_translation_check(
    a: PartialAction,
    t: Transversal,
    within: Optional[GroupoidLike] = None,
) -> ValidationReport:
    """1_g = 1_{g tau_{y,z}} for all g with s(g) = z, where tau_{y,z} = tau_z tau_y^-1."""
    H = as_subgroupoid(within if within is not None else a.groupoid)
    G = a.groupoid
    report = ValidationReport(subject=f"idempotent translation for {t}")
    for y in t.objects:
        for z in t.objects:
            tau_yz = G.product(t.tau(z), G.inverse(t.tau(y)))
            for g in H:
                if G.source(g) != z:
                    continue
                shifted = G.compose(g, tau_yz)
                if a.ideal(g) != a.ideal(shifted):
                    report.add(
                        "translation",
                        [G.name_of(g), G.name_of(tau_yz)],
                        f"D({G.name_of(g)}) != D({G.name_of(shifted)})",
                    )
    return report
