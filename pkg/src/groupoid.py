"""Finite groupoids given by explicit composition tables.

Morphisms carry stable integer ids: identities first in object order, then
the remaining arrows in declaration order. Every enumeration below derives its
order from these ids, so all emitted tables are deterministic.

``compose(g, h)`` is the product gh, defined iff s(g) = t(h); it is applied
right to left (h first).
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import InconsistencyError, PreconditionError
from .models import ValidationReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Morphism:
    id: int
    name: str
    source: str
    target: str


class FiniteGroupoid:
    """A finite groupoid: objects, morphisms, partial composition, inverses."""

    def __init__(
        self,
        objects: Sequence[str],
        arrows: Sequence[Tuple[str, str, str]],
        products: Mapping[Tuple[str, str], str],
        inverses: Mapping[str, str],
        name: str = "",
    ):
        """Build a groupoid from named tables.

        Args:
            objects: Object names; each also names its identity morphism
            arrows: Non-identity morphisms as (name, source, target)
            products: (g, h) -> gh for composable non-identity pairs;
                products with identities are filled in automatically
            inverses: g -> g^-1 for every arrow
            name: Label used in reports

        Raises:
            ValueError: On duplicate or unknown names
        """
        self.name = name
        self.objects: Tuple[str, ...] = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("Duplicate object names")

        morphisms = [Morphism(i, x, x, x) for i, x in enumerate(self.objects)]
        for arrow_name, s, t in arrows:
            if s not in self.objects or t not in self.objects:
                raise ValueError(f"Arrow {arrow_name}: unknown endpoint {s} -> {t}")
            morphisms.append(Morphism(len(morphisms), arrow_name, s, t))
        self.morphisms: Tuple[Morphism, ...] = tuple(morphisms)

        self._by_name: Dict[str, int] = {}
        for m in self.morphisms:
            if m.name in self._by_name:
                raise ValueError(f"Duplicate morphism name {m.name}")
            self._by_name[m.name] = m.id
        self._identity = {x: i for i, x in enumerate(self.objects)}

        inverse = list(range(len(self.morphisms)))
        for m in self.morphisms[len(self.objects):]:
            if m.name not in inverses:
                raise ValueError(f"No inverse given for {m.name}")
            inverse[m.id] = self.id_of(inverses[m.name])
        self._inverse: Tuple[int, ...] = tuple(inverse)

        self._compose: Dict[Tuple[int, int], int] = {}
        for (g, h), gh in products.items():
            self._compose[(self.id_of(g), self.id_of(h))] = self.id_of(gh)
        for m in self.morphisms:
            self._compose.setdefault((self._identity[m.target], m.id), m.id)
            self._compose.setdefault((m.id, self._identity[m.source]), m.id)

        self._hom: Dict[Tuple[str, str], Tuple[int, ...]] = {}
        for m in self.morphisms:
            self._hom.setdefault((m.source, m.target), ())
            self._hom[(m.source, m.target)] += (m.id,)

    def __len__(self) -> int:
        return len(self.morphisms)

    def __repr__(self) -> str:
        return f"FiniteGroupoid({self.name or '?'}: {len(self.objects)} objects, {len(self)} morphisms)"

    @property
    def ids(self) -> range:
        return range(len(self.morphisms))

    def id_of(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValueError(f"Unknown morphism {name}") from None

    def name_of(self, g: int) -> str:
        return self.morphisms[g].name

    def names(self, ids: Iterable[int]) -> List[str]:
        return [self.morphisms[g].name for g in sorted(ids)]

    def source(self, g: int) -> str:
        return self.morphisms[g].source

    def target(self, g: int) -> str:
        return self.morphisms[g].target

    def identity(self, x: str) -> int:
        return self._identity[x]

    def is_identity(self, g: int) -> bool:
        return g < len(self.objects)

    def inverse(self, g: int) -> int:
        return self._inverse[g]

    def compose(self, g: int, h: int) -> Optional[int]:
        """gh, or None when s(g) != t(h) or the table has no entry."""
        return self._compose.get((g, h))

    def product(self, *gs: int) -> int:
        """g1 g2 ... gk; raises KeyError if any step is undefined."""
        result = gs[-1]
        for g in reversed(gs[:-1]):
            result = self._compose[(g, result)]
        return result

    def hom(self, x: str, y: str) -> Tuple[int, ...]:
        """G(x, y): morphisms with source x and target y, in id order."""
        return self._hom.get((x, y), ())

    def table(self) -> Dict[Tuple[int, int], int]:
        return dict(self._compose)

    def whole(self) -> "Subgroupoid":
        return Subgroupoid(self, frozenset(self.ids))


@dataclass(frozen=True)
class Subgroupoid:
    """A set of morphism ids of a parent groupoid, closed when valid."""

    parent: FiniteGroupoid = field(repr=False)
    morphisms: FrozenSet[int]

    @property
    def objects(self) -> Tuple[str, ...]:
        return tuple(x for x in self.parent.objects if self.parent.identity(x) in self.morphisms)

    @property
    def is_wide(self) -> bool:
        return len(self.objects) == len(self.parent.objects)

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(sorted(self.morphisms))

    @property
    def names(self) -> List[str]:
        return self.parent.names(self.morphisms)

    def __contains__(self, g: int) -> bool:
        return g in self.morphisms

    def __len__(self) -> int:
        return len(self.morphisms)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids)

    def hom(self, x: str, y: str) -> Tuple[int, ...]:
        return tuple(g for g in self.parent.hom(x, y) if g in self.morphisms)

    def label(self) -> str:
        return "{" + ", ".join(self.names) + "}"

    def __str__(self) -> str:
        return self.label()

    def is_closed(self) -> bool:
        G = self.parent
        for g in self.morphisms:
            if G.inverse(g) not in self.morphisms:
                return False
            if G.identity(G.source(g)) not in self.morphisms:
                return False
            for h in self.morphisms:
                gh = G.compose(g, h)
                if gh is not None and gh not in self.morphisms:
                    return False
        return True

    def as_groupoid(self) -> Tuple[FiniteGroupoid, Dict[int, int]]:
        """This subgroupoid as a standalone groupoid, with parent id -> new id."""
        G = self.parent
        arrows = [
            (G.name_of(g), G.source(g), G.target(g))
            for g in self.ids if not G.is_identity(g)
        ]
        products = {}
        for g in self.morphisms:
            for h in self.morphisms:
                gh = G.compose(g, h)
                if gh is not None and not G.is_identity(g) and not G.is_identity(h):
                    products[(G.name_of(g), G.name_of(h))] = G.name_of(gh)
        inverses = {G.name_of(g): G.name_of(G.inverse(g)) for g in self.morphisms}
        sub = FiniteGroupoid(self.objects, arrows, products, inverses, name=f"{G.name}|{self.label()}")
        return sub, {g: sub.id_of(G.name_of(g)) for g in self.morphisms}


GroupoidLike = Union[FiniteGroupoid, Subgroupoid]


def as_subgroupoid(X: GroupoidLike) -> Subgroupoid:
    return X.whole() if isinstance(X, FiniteGroupoid) else X


@dataclass(frozen=True)
class Transversal:
    """A choice of tau_y in G(x, y) for every y in the component of x."""

    groupoid: FiniteGroupoid = field(repr=False, compare=False, hash=False)
    base: str
    choices: Tuple[Tuple[str, int], ...]

    def tau(self, y: str) -> int:
        for obj, g in self.choices:
            if obj == y:
                return g
        raise PreconditionError(f"Object {y} is not in the component of {self.base}")

    @property
    def objects(self) -> Tuple[str, ...]:
        return tuple(obj for obj, _ in self.choices)

    def as_names(self) -> Dict[str, str]:
        return {obj: self.groupoid.name_of(g) for obj, g in self.choices}

    def __str__(self) -> str:
        return "{" + ", ".join(f"tau_{y}={n}" for y, n in self.as_names().items()) + "}"


@dataclass
class IsoWitness:
    """psi: g -> ((s(g), t(g)), tau(g)) onto G0^2 x G(x), verified."""

    transversal: Transversal
    mapping: Dict[int, Tuple[Tuple[str, str], int]]
    isotropy: Tuple[int, ...]

    def image(self, g: int) -> Tuple[Tuple[str, str], int]:
        return self.mapping[g]


def validate_groupoid(G: FiniteGroupoid) -> ValidationReport:
    """Check the groupoid axioms on the full table.

    Returns:
        ValidationReport listing each violated axiom with its witnesses
    """
    report = ValidationReport(subject=f"groupoid {G.name}".strip())
    n = G.name_of

    for g in G.ids:
        for h in G.ids:
            gh = G.compose(g, h)
            composable = G.source(g) == G.target(h)
            if composable and gh is None:
                report.add("composition", [n(g), n(h)], "composable pair has no product")
            elif not composable and gh is not None:
                report.add("composition", [n(g), n(h)], "product defined although s(g) != t(h)")
            elif gh is not None and (G.source(gh) != G.source(h) or G.target(gh) != G.target(g)):
                report.add("endpoints", [n(g), n(h)], f"{n(gh)} has wrong source or target")

    for g in G.ids:
        gi = G.inverse(g)
        if G.compose(gi, g) != G.identity(G.source(g)):
            report.add("inverse", [n(g)], f"{n(gi)} {n(g)} != {G.source(g)}")
        if G.compose(g, gi) != G.identity(G.target(g)):
            report.add("inverse", [n(g)], f"{n(g)} {n(gi)} != {G.target(g)}")
        if G.compose(G.identity(G.target(g)), g) != g or G.compose(g, G.identity(G.source(g))) != g:
            report.add("identity", [n(g)], "identity is not a two-sided unit")

    for g in G.ids:
        for h in G.ids:
            gh = G.compose(g, h)
            if gh is None:
                continue
            for k in G.ids:
                hk = G.compose(h, k)
                if hk is None:
                    continue
                left, right = G.compose(gh, k), G.compose(g, hk)
                if left != right:
                    report.add("associativity", [n(g), n(h), n(k)], "(gh)k != g(hk)")

    if not report.ok:
        logger.debug(f"{report.subject}: {len(report.violations)} violation(s)")
    return report


def connected_components(X: GroupoidLike) -> List[Subgroupoid]:
    """Split X into full connected subgroupoids, ordered by least object."""
    X = as_subgroupoid(X)
    G = X.parent
    objects = X.objects
    parent = {x: x for x in objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in X.morphisms:
        a, b = find(G.source(g)), find(G.target(g))
        if a != b:
            parent[max(a, b, key=objects.index)] = min(a, b, key=objects.index)

    groups: Dict[str, List[str]] = {}
    for x in objects:
        groups.setdefault(find(x), []).append(x)

    components = []
    for members in sorted(groups.values(), key=lambda objs: objects.index(objs[0])):
        member_set = set(members)
        components.append(Subgroupoid(G, frozenset(g for g in X.morphisms if G.source(g) in member_set)))
    return components


def component_of(X: GroupoidLike, x: str) -> Subgroupoid:
    for component in connected_components(X):
        if x in component.objects:
            return component
    raise PreconditionError(f"Object {x} is not in {as_subgroupoid(X).label()}")


def isotropy_group(X: GroupoidLike, x: str) -> Subgroupoid:
    """G(x) = G(x, x) as a one-object subgroupoid.

    Raises:
        InconsistencyError: If the hom-set is not closed under the table
    """
    X = as_subgroupoid(X)
    if x not in X.objects:
        raise PreconditionError(f"Object {x} is not in {X.label()}")
    group = Subgroupoid(X.parent, frozenset(X.hom(x, x)))
    if not group.is_closed():
        raise InconsistencyError(f"G({x}) is not closed under composition")
    return group


def enumerate_transversals(X: GroupoidLike, x: str) -> Iterator[Transversal]:
    """All transversals for x in its component, in lexicographic id order."""
    X = as_subgroupoid(X)
    component = component_of(X, x)
    others = [y for y in component.objects if y != x]
    choices = [X.hom(x, y) for y in others]
    identity = X.parent.identity(x)
    for combo in itertools.product(*choices):
        picks = dict(zip(others, combo))
        picks[x] = identity
        yield Transversal(
            X.parent, x,
            tuple((y, picks[y]) for y in component.objects),
        )


def tau_of(t: Transversal, g: int) -> int:
    """tau(g) = tau_{t(g)}^-1 g tau_{s(g)}, an element of G(x)."""
    G = t.groupoid
    return G.product(G.inverse(t.tau(G.target(g))), g, t.tau(G.source(g)))


def coarse_isomorphism(X: GroupoidLike, t: Transversal) -> IsoWitness:
    """Verify psi: g -> ((s(g), t(g)), tau(g)) is an isomorphism onto G0^2 x G(x).

    Raises:
        PreconditionError: If X is not connected
        InconsistencyError: If psi is not a bijective functor
    """
    X = as_subgroupoid(X)
    G = X.parent
    components = connected_components(X)
    if len(components) != 1:
        raise PreconditionError(f"{X.label()} is not connected")

    isotropy = X.hom(t.base, t.base)
    mapping = {g: ((G.source(g), G.target(g)), tau_of(t, g)) for g in X}

    expected = len(X.objects) ** 2 * len(isotropy)
    if len(set(mapping.values())) != len(mapping) or len(mapping) != expected:
        sizes = {f"{x}->{y}": len(X.hom(x, y)) for x in X.objects for y in X.objects}
        raise InconsistencyError(f"psi is not bijective onto G0^2 x G({t.base}); hom-set sizes {sizes}")

    for g in X:
        for h in X:
            gh = G.compose(g, h)
            if gh is None:
                continue
            (_, tg), ug = mapping[g]
            (sh, _), uh = mapping[h]
            if mapping[gh] != ((sh, tg), G.compose(ug, uh)):
                raise InconsistencyError(f"psi is not a functor at ({G.name_of(g)}, {G.name_of(h)})")

    return IsoWitness(transversal=t, mapping=mapping, isotropy=isotropy)


def subgroupoid_closure(
    X: GroupoidLike,
    generators: Iterable[int],
    seed_objects: Iterable[str] = (),
) -> Subgroupoid:
    """Least subgroupoid containing the generators and the seed identities."""
    G = as_subgroupoid(X).parent
    members = set(generators)
    members.update(G.identity(x) for x in seed_objects)
    for g in list(members):
        members.update((G.identity(G.source(g)), G.identity(G.target(g)), G.inverse(g)))

    queue = list(members)
    while queue:
        g = queue.pop()
        for h in list(members):
            for gh in (G.compose(g, h), G.compose(h, g)):
                if gh is not None and gh not in members:
                    members.add(gh)
                    queue.append(gh)
                    inv = G.inverse(gh)
                    if inv not in members:
                        members.add(inv)
                        queue.append(inv)
    return Subgroupoid(G, frozenset(members))


def enumerate_subgroupoids(X: GroupoidLike, wide_only: bool = False) -> List[Subgroupoid]:
    """All subgroupoids of X, sorted by (size, ids).

    Grows closures one morphism at a time from the closures of object sets,
    memoizing by morphism set.
    """
    X = as_subgroupoid(X)
    objects = X.objects
    if wide_only:
        object_sets = [objects]
    else:
        object_sets = [
            combo for r in range(1, len(objects) + 1)
            for combo in itertools.combinations(objects, r)
        ]

    found: Dict[FrozenSet[int], Subgroupoid] = {}
    queue = []
    for objs in object_sets:
        seed = subgroupoid_closure(X, (), objs)
        if seed.morphisms not in found:
            found[seed.morphisms] = seed
            queue.append(seed)

    while queue:
        H = queue.pop()
        for g in X.morphisms - H.morphisms:
            K = subgroupoid_closure(X, H.morphisms | {g})
            if K.morphisms not in found:
                found[K.morphisms] = K
                queue.append(K)

    result = sorted(found.values(), key=lambda H: (len(H), H.ids))
    if wide_only:
        result = [H for H in result if len(H.objects) == len(objects)]
    logger.debug(f"Enumerated {len(result)} subgroupoids (wide_only={wide_only})")
    return result


def product_groupoid(
    objects: Sequence[str],
    order: int,
    multiply: Sequence[Sequence[int]],
    name: str = "",
) -> FiniteGroupoid:
    """The groupoid G0^2 x K for a finite group K = {0, ..., order-1}.

    Args:
        objects: Object names
        order: Group order; 0 is the identity element
        multiply: multiply[a][b] = ab

    Returns:
        Groupoid with arrows named ``a{c}_{s}_{t}`` for (s -> t, c)
    """
    inverse_of = {a: next(b for b in range(order) if multiply[a][b] == 0) for a in range(order)}

    def label(s: str, t: str, c: int) -> str:
        return s if (s == t and c == 0) else f"a{c}_{s}_{t}"

    arrows = [
        (label(s, t, c), s, t)
        for s in objects for t in objects for c in range(order)
        if not (s == t and c == 0)
    ]
    products = {}
    inverses = {}
    for s in objects:
        for t in objects:
            for c in range(order):
                inverses[label(s, t, c)] = label(t, s, inverse_of[c])
                for r in objects:
                    for c2 in range(order):
                        products[(label(s, t, c), label(r, s, c2))] = label(r, t, multiply[c][c2])
    arrow_names = {a for a, _, _ in arrows}
    products = {k: v for k, v in products.items() if k[0] in arrow_names and k[1] in arrow_names}
    inverses = {k: v for k, v in inverses.items() if k in arrow_names}
    return FiniteGroupoid(objects, arrows, products, inverses, name=name)
