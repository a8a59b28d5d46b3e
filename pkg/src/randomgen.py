"""Seeded random partial actions for property sweeps.

Actions are built from the free global action of G0^2 x C_c (C_c cyclic) on
S = sum of K e_{y,k,r}, with (s -> t, c) sending e_{s,k,r} to e_{t,c+k,r},
and are optionally restricted to a random ideal.
"""

import logging
import random
from typing import Dict, List, Tuple

from .actions import PartialAction, TwistedPartialMap, is_group_type, restrict, vanishing_morphisms
from .fields import CoeffField
from .groupoid import product_groupoid
from .rings import IdealOfIdempotents, SplitRing

logger = logging.getLogger(__name__)

OBJECT_NAMES = ("x", "y", "z")

# (objects, group order, copies) with |G| <= 12 and n <= 6
SHAPES: Tuple[Tuple[int, int, int], ...] = (
    (1, 2, 1), (1, 2, 2), (1, 3, 1), (1, 3, 2),
    (2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 2, 1), (2, 3, 1),
    (3, 1, 1), (3, 1, 2),
)


def random_global_action(rng: random.Random, p: int) -> PartialAction:
    """A free global action over GF(p) with shuffled idempotent labels."""
    r, order, copies = rng.choice(SHAPES)
    objects = OBJECT_NAMES[:r]
    table = [[(a + b) % order for b in range(order)] for a in range(order)]
    G = product_groupoid(objects, order, table, name=f"G0^2 x C{order}")

    slots: Dict[Tuple[str, int, int], int] = {}
    support: Dict[str, List[int]] = {}
    indices = list(range(r * order * copies))
    rng.shuffle(indices)
    for y in objects:
        support[y] = []
        for k in range(order):
            for c in range(copies):
                i = indices[len(slots)]
                slots[(y, k, c)] = i
                support[y].append(i)
    ring = SplitRing.build(CoeffField.finite(p), support)

    maps = {}
    for g in G.ids:
        if G.is_identity(g):
            continue
        s, t = G.source(g), G.target(g)
        shift = int(G.name_of(g)[1:].split("_")[0])
        pairs = [
            (slots[(s, k, c)], slots[(t, (shift + k) % order, c)], 0)
            for k in range(order) for c in range(copies)
        ]
        maps[g] = TwistedPartialMap.build(pairs, 1)
    return PartialAction(G, ring, maps)


def random_partial_action(rng: random.Random, p: int, restrict_probability: float = 0.5) -> PartialAction:
    """A global action, restricted to a random ideal with the given probability."""
    a = random_global_action(rng, p)
    if rng.random() >= restrict_probability:
        return a
    chosen = set()
    for y in a.groupoid.objects:
        supp = sorted(a.ring.supp(y))
        size = rng.randint(1, len(supp))
        chosen.update(rng.sample(supp, size))
    return restrict(a, IdealOfIdempotents(a.ring, frozenset(chosen)))


def random_group_type_action(
    rng: random.Random,
    p: int,
    attempts: int = 20,
    nondegenerate: bool = False,
) -> PartialAction:
    """A random group-type partial action; falls back to a global one.

    With ``nondegenerate`` every S_g is also required to be nonzero.
    """
    for _ in range(attempts):
        a = random_partial_action(rng, p)
        if nondegenerate and vanishing_morphisms(a):
            continue
        if is_group_type(a):
            return a
    logger.debug(f"No restricted group-type action in {attempts} attempts, using a global one")
    return random_global_action(rng, p)
