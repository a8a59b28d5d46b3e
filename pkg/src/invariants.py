"""Invariant subrings S^{alpha_H}, fixer sets G_T and the checks linking them."""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Union

from .actions import PartialAction, is_global, is_group_type
from .errors import GroupTypeRequired, InconsistencyError, NonGlobalActionError, PreconditionError
from .groupoid import (
    GroupoidLike,
    Subgroupoid,
    Transversal,
    as_subgroupoid,
    component_of,
    tau_of,
)
from .models import AgreementReport, DecompositionPiece, DecompositionReport, FixerReport
from .rings import BlockSubring, RingElement, TwistEdge, prime_basis, subring_from_solution_space

logger = logging.getLogger(__name__)


def is_invariant(a: PartialAction, H: GroupoidLike, v: RingElement) -> bool:
    """alpha_g(v 1_{g^-1}) = v 1_g for every g in H."""
    return all(a.apply(g, v) == v * a.unit(g) for g in as_subgroupoid(H))


def invariants_of(a: PartialAction, H: GroupoidLike) -> BlockSubring:
    """S^{alpha_H}, solved from v_sigma_g(i) = sigma^k(v_i) for every g in H.

    Indices outside the objects of H carry no constraint.
    """
    H = as_subgroupoid(H)
    constraints = [TwistEdge(i, j, k) for g in H for i, j, k in a.map(g).pairs]
    T = subring_from_solution_space(a.ring, constraints)
    logger.debug(f"S^alpha_{H.label()} = {T}")
    return T


def invariants_via_phi(a: PartialAction, H: GroupoidLike) -> BlockSubring:
    """S^{alpha_H} assembled from isotropy invariants pushed along each transversal.

    Raises:
        GroupTypeRequired: If alpha restricted to H is not group-type
    """
    H = as_subgroupoid(H)
    witness = is_group_type(a, within=H)
    if not witness:
        raise GroupTypeRequired("group-type witness required")

    S = a.ring
    degree = a.degree
    blocks = []
    covered = set()
    for t in witness.transversals:
        x = t.base
        isotropy = Subgroupoid(H.parent, frozenset(H.hom(x, x)))
        local = invariants_of(a, isotropy)
        for block in local.blocks:
            if block.representative not in S.supp(x):
                continue
            indices, transports = list(block.indices), list(block.transports)
            for y in t.objects:
                if y == x:
                    continue
                pushed = a.map(t.tau(y)).as_dict()
                for i, psi in zip(block.indices, block.transports):
                    j, k = pushed[i]
                    indices.append(j)
                    transports.append(psi + k)
            blocks.append((indices, transports, block.degree))
            covered.update(indices)

    for i in range(S.n):
        if i not in covered:
            blocks.append(([i], [0], degree))
    return BlockSubring.make(S, blocks)


def phi_tau(a: PartialAction, t: Transversal, v: RingElement) -> RingElement:
    """Phi_tau(v) = sum over y of alpha_{tau_y}(v), for v in S_x."""
    total = a.ring.zero()
    for y in t.objects:
        total = total + a.apply(t.tau(y), v)
    return total


def invariance_test_via_tau(
    a: PartialAction,
    t: Transversal,
    v: RingElement,
    within: Optional[GroupoidLike] = None,
) -> bool:
    """Invariance of v on the component of t, tested through tau(g).

    v is split as a sum of alpha_{tau_y}(a_y) with a_y = alpha_{tau_y^-1}(v 1_y)
    in S_x; then alpha_{tau(g)}(a_{s(g)} 1_{tau(g)^-1}) = a_{t(g)} 1_{tau(g)}
    is checked for every g of the component.

    Raises:
        InconsistencyError: If v does not decompose along tau
    """
    H = as_subgroupoid(within if within is not None else a.groupoid)
    G = a.groupoid
    component = component_of(H, t.base)
    parts = {y: a.apply(G.inverse(t.tau(y)), v) for y in t.objects}

    objects = set(component.objects)
    indices = [i for y in objects for i in a.ring.supp(y)]
    rebuilt = a.ring.zero()
    for y in t.objects:
        rebuilt = rebuilt + a.apply(t.tau(y), parts[y])
    if rebuilt != v.project(indices):
        raise InconsistencyError(f"{v} does not decompose along {t}")

    for g in component:
        u = tau_of(t, g)
        if a.apply(u, parts[G.source(g)]) != parts[G.target(g)] * a.unit(u):
            return False
    return True


@dataclass
class FixerSet:
    """G_T together with its closure status."""

    subring: BlockSubring
    morphisms: FrozenSet[int]
    is_subgroupoid: bool
    subgroupoid: Optional[Subgroupoid] = field(default=None, repr=False)

    def names(self, a: PartialAction) -> List[str]:
        return a.groupoid.names(self.morphisms)

    def to_report(self, a: PartialAction) -> FixerReport:
        return FixerReport(
            subring=self.subring.render(),
            morphisms=self.names(a),
            is_subgroupoid=self.is_subgroupoid,
        )


def fixes(a: PartialAction, g: int, T: BlockSubring) -> bool:
    """alpha_g(t 1_{g^-1}) = t 1_g on the prime basis of T."""
    unit = a.unit(g)
    return all(a.apply(g, t) == t * unit for t in prime_basis(T))


def fixer_set(a: PartialAction, T: BlockSubring) -> FixerSet:
    G = a.groupoid
    members = frozenset(g for g in G.ids if fixes(a, g, T))
    candidate = Subgroupoid(G, members)
    closed = candidate.is_closed()
    logger.debug(f"G_T for {T}: {len(members)} morphisms, subgroupoid={closed}")
    return FixerSet(
        subring=T,
        morphisms=members,
        is_subgroupoid=closed,
        subgroupoid=candidate if closed else None,
    )


def isotropy_fixer(a: PartialAction, T: BlockSubring, y: str) -> Subgroupoid:
    """G(y)_{T_y}: isotropy morphisms at y fixing T 1_y."""
    G = a.groupoid
    unit_y = a.ring.unit(y)
    basis = [t * unit_y for t in prime_basis(T)]
    members = frozenset(
        g for g in G.hom(y, y)
        if all(a.apply(g, t) == t * a.unit(g) for t in basis)
    )
    return Subgroupoid(G, members)


def _transversals(a: PartialAction, H: Subgroupoid) -> List[Transversal]:
    witness = is_group_type(a, within=H)
    if not witness:
        raise GroupTypeRequired(f"group-type witness required for {H.label()}")
    return witness.transversals


def fixer_characterization_check(a: PartialAction, H: GroupoidLike, g: int) -> AgreementReport:
    """g in G_T versus tau_k(g) in G(y_k)_{T_{y_k}} for T = S^{alpha_H}.

    Raises:
        GroupTypeRequired: If alpha restricted to H is not group-type
    """
    H = as_subgroupoid(H)
    G = a.groupoid
    T = invariants_of(a, H)
    left = fixes(a, g, T)

    right = False
    for t in _transversals(a, H):
        if G.source(g) in t.objects and G.target(g) in t.objects:
            right = tau_of(t, g) in isotropy_fixer(a, T, t.base)
            break
    return AgreementReport(
        subject=f"g = {G.name_of(g)} for H = {H.label()}",
        left=left,
        right=right,
    )


def fixer_criterion_check(a: PartialAction, H: GroupoidLike) -> List[AgreementReport]:
    """Both criteria for T = S^{alpha_H}, evaluated independently.

    First: G_T is a wide subgroupoid iff every G(y_j)_{T_{y_j}} is a subgroup.
    Second: G_T = H iff G(y_j)_{T_{y_j}} = H_j(y_j) for every component base.

    Raises:
        GroupTypeRequired: If alpha restricted to H is not group-type
    """
    H = as_subgroupoid(H)
    G = a.groupoid
    T = invariants_of(a, H)
    fixer = fixer_set(a, T)
    bases = [t.base for t in _transversals(a, H)]
    groups = {y: isotropy_fixer(a, T, y) for y in bases}

    wide = fixer.is_subgroupoid and Subgroupoid(G, fixer.morphisms).is_wide
    subgroups = all(group.is_closed() for group in groups.values())
    equal = fixer.morphisms == H.morphisms
    local = all(groups[y].morphisms == frozenset(H.hom(y, y)) for y in bases)
    return [
        AgreementReport(subject=f"G_T wide subgroupoid for H = {H.label()}", left=wide, right=subgroups),
        AgreementReport(subject=f"G_T = H for H = {H.label()}", left=equal, right=local),
    ]


def local_subring(T: BlockSubring, y: str) -> BlockSubring:
    """T_y = T 1_y as a subring of S_y."""
    ring, index_map = T.ring.restrict([y])
    return T.restrict(ring, index_map)


def global_case_decomposition(
    a: PartialAction,
    arg: Union[Subgroupoid, BlockSubring],
) -> DecompositionReport:
    """Split S^{alpha_H} or G_T into isotropy data for a global action.

    For a subgroupoid H: per component of H, the isotropy invariants at its
    base glued along a transversal. For a subring T: G_T as the union of
    tau_z G(y)_{T_y} tau_w^-1 over object pairs (w, z) of each component.

    Raises:
        NonGlobalActionError: If a is not global
        PreconditionError: If G_T is not a subgroupoid or does not recover T
        InconsistencyError: If the decomposition disagrees with the direct result
    """
    if not is_global(a):
        raise NonGlobalActionError("global action required")
    if isinstance(arg, BlockSubring):
        return _decompose_subring(a, arg)
    return _decompose_subgroupoid(a, arg)


def _decompose_subgroupoid(a: PartialAction, H: Subgroupoid) -> DecompositionReport:
    G = a.groupoid
    direct = invariants_of(a, H)
    glued = invariants_via_phi(a, H)
    if glued != direct:
        raise InconsistencyError(f"glued invariants {glued} differ from {direct}")

    pieces = []
    for t in is_group_type(a, within=H).transversals:
        y = t.base
        isotropy = Subgroupoid(G, frozenset(H.hom(y, y)))
        pieces.append(DecompositionPiece(
            component=list(t.objects),
            base=y,
            isotropy=isotropy.names,
            transversal=t.as_names(),
            local=local_subring(invariants_of(a, isotropy), y).render(),
        ))
    return DecompositionReport(subject=f"S^alpha_{H.label()}", pieces=pieces, result=direct.render())


def _decompose_subring(a: PartialAction, T: BlockSubring) -> DecompositionReport:
    G = a.groupoid
    fixer = fixer_set(a, T)
    if not fixer.is_subgroupoid:
        raise PreconditionError(f"G_T for {T} is not a subgroupoid")
    F = fixer.subgroupoid
    if invariants_of(a, F) != T:
        raise PreconditionError(f"{T} is not the invariant ring of its fixer")

    union = set()
    pieces = []
    for t in is_group_type(a, within=F).transversals:
        y = t.base
        group = isotropy_fixer(a, T, y)
        for w in t.objects:
            for z in t.objects:
                for u in group:
                    union.add(G.product(t.tau(z), u, G.inverse(t.tau(w))))
        pieces.append(DecompositionPiece(
            component=list(t.objects),
            base=y,
            isotropy=group.names,
            transversal=t.as_names(),
            local=local_subring(T, y).render(),
        ))
    if frozenset(union) != fixer.morphisms:
        raise InconsistencyError(f"conjugated isotropy fixers do not recover G_T for {T}")
    return DecompositionReport(
        subject=f"G_T for {T}",
        pieces=pieces,
        result="{" + ", ".join(G.names(union)) + "}",
    )
