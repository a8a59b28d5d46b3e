"""Galois coordinates, alpha-strong subrings and the Galois correspondence."""

import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .actions import PartialAction, is_group_type, restrict, vanishing_morphisms
from .errors import HypothesisUnmet, InconsistencyError
from .groupoid import (
    GroupoidLike,
    Subgroupoid,
    as_subgroupoid,
    connected_components,
    enumerate_subgroupoids,
    isotropy_group,
    subgroupoid_closure,
)
from .invariants import fixer_set, invariants_of, isotropy_fixer
from .models import (
    CoordsCheck,
    CoordsReport,
    CorrespondenceRow,
    CorrespondenceSummary,
    StrongReport,
)
from .rings import (
    DEFAULT_MAX_RING_SIZE,
    BlockSubring,
    IdealOfIdempotents,
    RingElement,
    enumerate_block_subrings,
    prime_basis,
    separability_check,
)

logger = logging.getLogger(__name__)


@dataclass
class GaloisCoords:
    """Elements a_i, b_i with sum a_i alpha_g(b_i 1_{g^-1}) 1_z = delta_{z,g} 1_z."""

    a: Tuple[RingElement, ...]
    b: Tuple[RingElement, ...]

    @property
    def m(self) -> int:
        return len(self.a)

    def to_report(self) -> CoordsReport:
        return CoordsReport(found=True, m=self.m, a=[str(v) for v in self.a], b=[str(v) for v in self.b])


def _galois_sum(a: PartialAction, c: GaloisCoords, g: int) -> RingElement:
    total = a.ring.zero()
    for ai, bi in zip(c.a, c.b):
        total = total + ai * a.apply(g, bi)
    return total


def verify_coords(
    a: PartialAction,
    c: GaloisCoords,
    within: Optional[GroupoidLike] = None,
) -> CoordsCheck:
    """Evaluate the coordinate identities for every (z, g), objects first.

    delta_{z,g} is 1 exactly when g is the identity at z; terms with
    t(g) != z must vanish.
    """
    H = as_subgroupoid(within if within is not None else a.groupoid)
    G = a.groupoid
    sums = {g: _galois_sum(a, c, g) for g in H}
    for z in H.objects:
        unit = a.ring.unit(z)
        for g in H:
            expected = unit if g == G.identity(z) else a.ring.zero()
            if sums[g] * unit != expected:
                logger.debug(f"Coordinates fail at ({z}, {G.name_of(g)})")
                return CoordsCheck(ok=False, m=c.m, failing_object=z, failing_morphism=G.name_of(g))
    return CoordsCheck(ok=True, m=c.m)


def find_coords(a: PartialAction, within: Optional[GroupoidLike] = None) -> Optional[GaloisCoords]:
    """Try a_i = b_i = e_i, then solve for b with a_i = e_i fixed.

    Returns:
        Coordinates, or None when this restricted search fails (undetermined)
    """
    S = a.ring
    H = as_subgroupoid(within if within is not None else a.groupoid)
    G = a.groupoid
    basis = [S.idempotent([i]) for i in range(S.n)]
    trivial = GaloisCoords(a=tuple(basis), b=tuple(basis))
    if verify_coords(a, trivial, within=H).ok:
        return trivial

    # b_i = sum over (j, l) of c_{i,j,l} w_l e_j, with w_l the prime basis of K
    k = S.field
    char = k.char
    unknowns = [(i, j, w) for i in range(S.n) for j in range(S.n) for w in k.basis()]
    rows: List[List] = []
    rhs: List = []
    for z in H.objects:
        unit = S.unit(z)
        for g in H:
            columns = [
                (basis[i] * a.apply(g, S.single(j, w)) * unit).prime_coords()
                for i, j, w in unknowns
            ]
            target = (unit if g == G.identity(z) else S.zero()).prime_coords()
            for r in range(len(target)):
                rows.append([col[r] for col in columns])
                rhs.append(target[r])
    solution = linalg.solve(rows, rhs, len(unknowns), char)
    if solution is None:
        logger.warning("Coordinate search undetermined: no b solves the system with a_i = e_i")
        return None

    b = [S.zero() for _ in range(S.n)]
    for (i, j, w), value in zip(unknowns, solution):
        if value:
            b[i] = b[i] + S.single(j, w.scale(value))
    return GaloisCoords(a=tuple(basis), b=tuple(b))


def split_coords(a: PartialAction, c: GaloisCoords) -> List[GaloisCoords]:
    """a_i 1_{S_j}, b_i 1_{S_j} for every connected component j.

    Raises:
        InconsistencyError: If a component system fails verification
    """
    out = []
    for component in connected_components(a.groupoid):
        unit = a.ring.idempotent(i for y in component.objects for i in a.ring.supp(y))
        local = GaloisCoords(a=tuple(v * unit for v in c.a), b=tuple(v * unit for v in c.b))
        check = verify_coords(a, local, within=component)
        if not check.ok:
            raise InconsistencyError(f"split coordinates fail on {component.label()}: {check}")
        out.append(local)
    return out


def glue_coords(a: PartialAction, parts: Sequence[GaloisCoords]) -> GaloisCoords:
    """Pad every component system with zeros to the longest one and add them.

    Raises:
        InconsistencyError: If the glued system fails verification
    """
    m = max(c.m for c in parts)
    zero = a.ring.zero()
    glued_a, glued_b = [], []
    for i in range(m):
        ai, bi = zero, zero
        for c in parts:
            if i < c.m:
                ai = ai + c.a[i]
                bi = bi + c.b[i]
        glued_a.append(ai)
        glued_b.append(bi)
    glued = GaloisCoords(a=tuple(glued_a), b=tuple(glued_b))
    check = verify_coords(a, glued)
    if not check.ok:
        raise InconsistencyError(f"glued coordinates fail: {check}")
    return glued


def component_coords(a: PartialAction, direction: str, data):
    """Dispatch to split_coords (``split``) or glue_coords (``glue``)."""
    if direction == "split":
        return split_coords(a, data)
    if direction == "glue":
        return glue_coords(a, data)
    raise ValueError(f"direction must be 'split' or 'glue', got {direction!r}")


def object_coords(a: PartialAction, c: GaloisCoords, y: str) -> GaloisCoords:
    """a_i 1_y, b_i 1_y: coordinates for G(y) acting on S_y.

    Raises:
        InconsistencyError: If they fail verification
    """
    unit = a.ring.unit(y)
    local = GaloisCoords(a=tuple(v * unit for v in c.a), b=tuple(v * unit for v in c.b))
    check = verify_coords(a, local, within=isotropy_group(a.groupoid, y))
    if not check.ok:
        raise InconsistencyError(f"coordinates at {y} fail: {check}")
    return local


# -- alpha-strong -------------------------------------------------------------


def _separates(
    a: PartialAction,
    g: int,
    h: int,
    basis: Sequence[RingElement],
) -> Optional[RingElement]:
    """First idempotent e of S_g or S_h on which no basis element tells g and h apart."""
    images = [(a.apply(g, t), a.apply(h, t)) for t in basis]
    seen = set()
    for ideal in (a.ideal(g), a.ideal(h)):
        for e in IdealOfIdempotents(a.ring, ideal).idempotents():
            if e.support in seen:
                continue
            seen.add(e.support)
            if all(left * e == right * e for left, right in images):
                return e
    return None


def _strong_on_hom_sets(a: PartialAction, T: BlockSubring, objects: Sequence[Tuple[str, str]]) -> Optional[str]:
    G = a.groupoid
    basis = prime_basis(T)
    for y, z in objects:
        unit_y = a.ring.unit(y)
        local = [t * unit_y for t in basis]
        fixer = isotropy_fixer(a, T, y)
        hom = G.hom(y, z)
        for g in hom:
            for h in hom:
                if G.compose(G.inverse(g), h) in fixer:
                    continue
                e = _separates(a, g, h, local)
                if e is not None:
                    return f"g={G.name_of(g)}, h={G.name_of(h)}, e={e}"
    return None


def _strong_common_target(a: PartialAction, T: BlockSubring) -> Optional[str]:
    G = a.groupoid
    fixer = fixer_set(a, T).morphisms
    basis = prime_basis(T)
    for g in G.ids:
        for h in G.ids:
            if G.target(g) != G.target(h):
                continue
            if G.compose(G.inverse(g), h) in fixer:
                continue
            e = _separates(a, g, h, basis)
            if e is not None:
                return f"g={G.name_of(g)}, h={G.name_of(h)}, e={e}"
    return None


def _strength_hypothesis(a: PartialAction, T: BlockSubring, H: Subgroupoid) -> bool:
    """T = S^{alpha_H} for a wide group-type H, inside a nondegenerate group-type action."""
    if not H.is_wide or vanishing_morphisms(a):
        return False
    if not is_group_type(a) or not is_group_type(a, within=H):
        return False
    return invariants_of(a, H) == T


def alpha_strong_check(a: PartialAction, T: BlockSubring, H: Optional[Subgroupoid] = None) -> StrongReport:
    """Evaluate strength three ways.

    per_hom_set: the defining condition over every hom-set G(y, z), with the
    symmetric form alpha_g(t 1_{g^-1}) e != alpha_h(t 1_{h^-1}) e.
    common_target: pairs g, h with t(g) = t(h) and g^-1 h outside G_T.
    base_objects: the defining condition on G(y_j) only, at the least object
    y_j of every component of H (by default the closure of G_T).

    The three must agree when T = S^{alpha_H} for a wide group-type H.

    Raises:
        InconsistencyError: If they disagree under that hypothesis
    """
    G = a.groupoid
    pairs = [(y, z) for y in G.objects for z in G.objects]
    per_hom = _strong_on_hom_sets(a, T, pairs)
    common = _strong_common_target(a, T)

    if H is None:
        H = subgroupoid_closure(G, fixer_set(a, T).morphisms, G.objects)
    bases = [(c.objects[0], c.objects[0]) for c in connected_components(H)]
    base_objects = _strong_on_hom_sets(a, T, bases) is None

    report = StrongReport(
        subring=T.render(),
        per_hom_set=per_hom is None,
        common_target=common is None,
        base_objects=base_objects,
        witness=per_hom or common,
    )
    verdicts = {report.per_hom_set, report.common_target, report.base_objects}
    if len(verdicts) > 1:
        if _strength_hypothesis(a, T, H):
            raise InconsistencyError(f"strength evaluations disagree for {T} = S^alpha_{H.label()}: {report}")
        logger.debug(f"Strength evaluations differ for {T}, which is not the invariant ring of {H.label()}")
    return report


# -- B(S) and the correspondence ----------------------------------------------


def _require_coords(a: PartialAction) -> GaloisCoords:
    """Coordinates for a, with 1_g != 0 for every morphism g.

    Raises:
        HypothesisUnmet: If some S_g is zero or no coordinates are found
    """
    vanishing = vanishing_morphisms(a)
    if vanishing:
        names = ", ".join(a.groupoid.names(vanishing))
        raise HypothesisUnmet(f"hypothesis of Theorem unmet: S_g = 0 for g in {{{names}}}")
    coords = find_coords(a)
    if coords is None:
        raise HypothesisUnmet("hypothesis of Theorem unmet")
    return coords


def class_B(
    a: PartialAction,
    closed: bool = True,
    max_size: int = DEFAULT_MAX_RING_SIZE,
    allow_large: bool = False,
) -> List[BlockSubring]:
    """Block subrings T containing R that are R-separable, alpha-strong and
    whose fixer is a wide group-type subgroupoid.

    With ``closed`` (the default) T must also equal the invariants of its
    fixer; without it the literal filter may admit rings that no subgroupoid
    produces.

    Raises:
        HypothesisUnmet: If no coordinate system is found
        SizeGuardExceeded: From the block-subring enumeration
    """
    _require_coords(a)
    R = invariants_of(a, a.groupoid)
    out = []
    for T in enumerate_block_subrings(a.ring, max_size=max_size, allow_large=allow_large):
        if not T.contains_subring(R):
            continue
        fixer = fixer_set(a, T)
        if not fixer.is_subgroupoid or not fixer.subgroupoid.is_wide:
            continue
        if not is_group_type(a, within=fixer.subgroupoid):
            continue
        is_closed = invariants_of(a, fixer.subgroupoid) == T
        if closed and not is_closed:
            continue
        if separability_check(T, R) is None:
            continue
        if not alpha_strong_check(a, T).is_strong:
            continue
        if not is_closed:
            logger.warning(f"{T} passes the literal filter but is not the invariant ring of its fixer")
        out.append(T)
    logger.info(f"B(S) has {len(out)} member(s) (closed={closed})")
    return out


@dataclass
class CorrespondenceEntry:
    subgroupoid: Subgroupoid
    subring: BlockSubring
    separable: bool
    strong: bool


@dataclass
class CorrespondenceTable:
    """Rows H <-> S^{alpha_H} over the wide group-type subgroupoids."""

    action: PartialAction = field(repr=False)
    entries: List[CorrespondenceEntry] = field(default_factory=list)
    counterexamples: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return not self.counterexamples

    def summary(self) -> CorrespondenceSummary:
        return CorrespondenceSummary(
            field=str(self.action.ring.field),
            rows=[
                CorrespondenceRow(
                    subgroupoid=e.subgroupoid.names,
                    subring=e.subring.render(),
                    separable=e.separable,
                    strong=e.strong,
                )
                for e in self.entries
            ],
            counterexamples=list(self.counterexamples),
        )


def _certify_row(a: PartialAction, H: Subgroupoid, R: BlockSubring, table: CorrespondenceTable) -> None:
    T = invariants_of(a, H)
    separable = separability_check(T, R) is not None
    try:
        strong = alpha_strong_check(a, T, H).is_strong
    except InconsistencyError as e:
        table.counterexamples.append(str(e))
        strong = False
    fixer = fixer_set(a, T)
    if fixer.morphisms != H.morphisms:
        table.counterexamples.append(f"G_T != H for H = {H.label()}: G_T = {{{', '.join(fixer.names(a))}}}")
    if invariants_of(a, Subgroupoid(a.groupoid, fixer.morphisms)) != T:
        table.counterexamples.append(f"invariants of G_T != T for T = {T}")
    if not separable:
        table.counterexamples.append(f"{T} is not separable over {R}")
    if not strong:
        table.counterexamples.append(f"{T} is not alpha-strong")
    table.entries.append(CorrespondenceEntry(H, T, separable, strong))


def correspondence(
    a: PartialAction,
    max_size: int = DEFAULT_MAX_RING_SIZE,
    allow_large: bool = False,
) -> CorrespondenceTable:
    """Build and certify H -> S^{alpha_H}, T -> G_T.

    Connected groupoids are checked in both directions against class_B.
    Disconnected ones are solved per component and glued as direct sums;
    each glued row is certified against the whole action.

    Raises:
        HypothesisUnmet: If no coordinate system is found
    """
    _require_coords(a)
    components = connected_components(a.groupoid)
    if len(components) > 1:
        return _glued_correspondence(a, components, max_size, allow_large)

    table = CorrespondenceTable(action=a)
    R = invariants_of(a, a.groupoid)
    for H in enumerate_subgroupoids(a.groupoid, wide_only=True):
        if not is_group_type(a, within=H):
            logger.debug(f"Skipping {H.label()}: not group-type")
            continue
        _certify_row(a, H, R, table)

    subrings = [e.subring for e in table.entries]
    if len(set(subrings)) != len(subrings):
        table.counterexamples.append("two subgroupoids share an invariant ring")
    reachable = class_B(a, closed=True, max_size=max_size, allow_large=allow_large)
    for T in reachable:
        if T not in subrings:
            table.counterexamples.append(f"{T} is in B(S) but no row produces it")
    for T in subrings:
        if T not in reachable:
            table.counterexamples.append(f"{T} is produced by a row but is not in B(S)")
    logger.info(f"Correspondence: {len(table.entries)} row(s), {len(table.counterexamples)} counterexample(s)")
    return table


def _lift(part: PartialAction, T: BlockSubring) -> List[Tuple[List[int], List[int], int]]:
    back = {new: old for old, new in part.lineage.indices.items()}
    return [
        ([back[i] for i in block.indices], list(block.transports), block.degree)
        for block in T.blocks
    ]


def _glued_correspondence(
    a: PartialAction,
    components: List[Subgroupoid],
    max_size: int,
    allow_large: bool,
) -> CorrespondenceTable:
    parts = []
    for component in components:
        part = restrict(a, component)
        local = correspondence(part, max_size=max_size, allow_large=allow_large)
        parts.append((part, local))

    table = CorrespondenceTable(action=a)
    for part, local in parts:
        table.counterexamples.extend(f"[{_component_label(part)}] {c}" for c in local.counterexamples)

    R = invariants_of(a, a.groupoid)
    for combo in itertools.product(*(local.entries for _, local in parts)):
        morphisms = set()
        blocks = []
        for (part, _), entry in zip(parts, combo):
            back = {new: old for old, new in part.lineage.morphisms.items()}
            morphisms.update(back[g] for g in entry.subgroupoid)
            blocks.extend(_lift(part, entry.subring))
        H = Subgroupoid(a.groupoid, frozenset(morphisms))
        glued = BlockSubring.make(a.ring, blocks)
        if invariants_of(a, H) != glued:
            table.counterexamples.append(f"glued ring {glued} differs from the invariants of {H.label()}")
        _certify_row(a, H, R, table)
    return table


def _component_label(part: PartialAction) -> str:
    return ", ".join(part.groupoid.objects)
