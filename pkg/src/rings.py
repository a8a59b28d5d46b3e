"""Split rings S = K e_1 + ... + K e_n and their twisted block subrings.

Indices are 0-based internally; idempotent names (``e1``...) are kept on the
ring for display. A block subring is given by a partition of the indices,
per-index transports (exponents of the generating automorphism sigma) and a
per-block subfield: its elements are the v with v_i = sigma^psi_i(a) on each
block, for one a in the block's subfield.
"""

import itertools
import logging
from math import gcd
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy import divisors

from . import linalg
from .errors import NotBlockExpressible, PreconditionError, SizeGuardExceeded
from .fields import CoeffField, FieldElement, Subfield, twist_name

logger = logging.getLogger(__name__)

DEFAULT_MAX_RING_SIZE = 12


@dataclass(frozen=True)
class SplitRing:
    """S = sum over objects y of S_y, with S_y spanned by the e_i, i in supp(y)."""

    field: CoeffField
    support: Tuple[Tuple[str, Tuple[int, ...]], ...]
    names: Tuple[str, ...]

    @classmethod
    def build(
        cls,
        field: CoeffField,
        support: Mapping[str, Sequence[int]],
        names: Optional[Sequence[str]] = None,
    ) -> "SplitRing":
        """Create a split ring from object supports.

        Args:
            field: Coefficient field K
            support: object -> 0-based idempotent indices
            names: Idempotent names (default e1..en)

        Raises:
            ValueError: If supports are empty, overlap or miss an index
        """
        n = sum(len(v) for v in support.values())
        seen = set()
        for obj, indices in support.items():
            if not indices:
                raise ValueError(f"Object {obj} has empty support")
            for i in indices:
                if i in seen or not 0 <= i < n:
                    raise ValueError(f"Index {i} of object {obj} is repeated or out of range")
                seen.add(i)
        names = tuple(names) if names is not None else tuple(f"e{i + 1}" for i in range(n))
        if len(names) != n:
            raise ValueError(f"Expected {n} idempotent names, got {len(names)}")
        return cls(
            field=field,
            support=tuple((obj, tuple(sorted(indices))) for obj, indices in support.items()),
            names=names,
        )

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def objects(self) -> Tuple[str, ...]:
        return tuple(obj for obj, _ in self.support)

    def supp(self, y: str) -> FrozenSet[int]:
        for obj, indices in self.support:
            if obj == y:
                return frozenset(indices)
        raise PreconditionError(f"Object {y} has no support in this ring")

    def object_of(self, i: int) -> str:
        for obj, indices in self.support:
            if i in indices:
                return obj
        raise PreconditionError(f"Index {i} out of range")

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def element(self, coords: Sequence[FieldElement]) -> "RingElement":
        if len(coords) != self.n:
            raise ValueError(f"Expected {self.n} coordinates, got {len(coords)}")
        return RingElement(self, tuple(coords))

    def zero(self) -> "RingElement":
        return RingElement(self, tuple(self.field.zero() for _ in range(self.n)))

    def one(self) -> "RingElement":
        return self.idempotent(range(self.n))

    def idempotent(self, indices: Iterable[int]) -> "RingElement":
        chosen = set(indices)
        k = self.field
        return RingElement(self, tuple(k.one() if i in chosen else k.zero() for i in range(self.n)))

    def unit(self, y: str) -> "RingElement":
        """The central idempotent 1_y."""
        return self.idempotent(self.supp(y))

    def single(self, i: int, a: FieldElement) -> "RingElement":
        """a e_i."""
        k = self.field
        return RingElement(self, tuple(a if j == i else k.zero() for j in range(self.n)))

    def prime_basis(self) -> List["RingElement"]:
        """b e_i for every index i and every basis element b of K."""
        return [self.single(i, b) for i in range(self.n) for b in self.field.basis()]

    def restrict(self, objects: Sequence[str]) -> Tuple["SplitRing", Dict[int, int]]:
        """S_H = sum of S_z for z in objects, with old index -> new index."""
        index_map: Dict[int, int] = {}
        support = {}
        for obj in objects:
            new = []
            for i in sorted(self.supp(obj)):
                index_map[i] = len(index_map)
                new.append(index_map[i])
            support[obj] = new
        names = [None] * len(index_map)
        for old, new in index_map.items():
            names[new] = self.names[old]
        return SplitRing.build(self.field, support, names), index_map

    def __str__(self) -> str:
        parts = [f"S_{obj} = <{', '.join(self.names[i] for i in idx)}>" for obj, idx in self.support]
        return f"{self.field}: " + "; ".join(parts)


@dataclass(frozen=True)
class RingElement:
    """A coordinate vector over K; products are componentwise."""

    ring: SplitRing = field(repr=False)
    coords: Tuple[FieldElement, ...]

    def __add__(self, other: "RingElement") -> "RingElement":
        return RingElement(self.ring, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RingElement") -> "RingElement":
        return RingElement(self.ring, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, tuple(-a for a in self.coords))

    def __mul__(self, other: "RingElement") -> "RingElement":
        return RingElement(self.ring, tuple(a * b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "RingElement":
        """Multiply by a prime-field scalar."""
        return RingElement(self.ring, tuple(a.scale(c) for a in self.coords))

    def project(self, indices: Iterable[int]) -> "RingElement":
        """v * 1_D for the idempotent supported on the given indices."""
        keep = set(indices)
        zero = self.ring.field.zero()
        return RingElement(self.ring, tuple(a if i in keep else zero for i, a in enumerate(self.coords)))

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for a in self.coords)

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(i for i, a in enumerate(self.coords) if not a.is_zero)

    def prime_coords(self) -> List:
        return [c for a in self.coords for c in a.coords]

    def __str__(self) -> str:
        out = ""
        for i, a in enumerate(self.coords):
            if a.is_zero:
                continue
            name = self.ring.names[i]
            text = str(a)
            if text == "1":
                term, negative = name, False
            elif text == "-1":
                term, negative = name, True
            elif text.startswith("-") and " " not in text:
                term, negative = f"{text[1:]}*{name}", True
            elif " " in text:
                term, negative = f"({text})*{name}", False
            else:
                term, negative = f"{text}*{name}", False
            if not out:
                out = f"-{term}" if negative else term
            else:
                out += f" - {term}" if negative else f" + {term}"
        return out or "0"


@dataclass(frozen=True)
class IdealOfIdempotents:
    """The ideal sum of K e_i over an index subset D."""

    ring: SplitRing = field(repr=False)
    indices: FrozenSet[int]

    def unit(self) -> RingElement:
        return self.ring.idempotent(self.indices)

    def idempotents(self) -> Iterator[RingElement]:
        """Nonzero idempotents of the ideal: the nonempty 0/1 vectors on D."""
        ordered = sorted(self.indices)
        for r in range(1, len(ordered) + 1):
            for combo in itertools.combinations(ordered, r):
                yield self.ring.idempotent(combo)

    def contains(self, v: RingElement) -> bool:
        return v.support <= self.indices


@dataclass(frozen=True)
class Block:
    """Indices sharing one coefficient: v_i = sigma^transport_i(a), a in F_degree."""

    indices: Tuple[int, ...]
    transports: Tuple[int, ...]
    degree: int

    @property
    def representative(self) -> int:
        return self.indices[0]


@dataclass(frozen=True)
class BlockSubring:
    """A twisted block subring of a split ring, in canonical form."""

    ring: SplitRing = field(repr=False)
    blocks: Tuple[Block, ...]

    @classmethod
    def make(
        cls,
        ring: SplitRing,
        blocks: Iterable[Tuple[Sequence[int], Sequence[int], int]],
    ) -> "BlockSubring":
        """Canonicalize (indices, transports, subfield degree) triples.

        The representative becomes the least index with transport 0; the
        other transports are rebased against it and reduced mod the degree.

        Raises:
            ValueError: If the blocks do not partition the indices or a
                degree does not divide the field degree
        """
        n_field = ring.field.degree
        canonical = []
        covered: List[int] = []
        for indices, transports, degree in blocks:
            if degree < 1 or n_field % degree:
                raise ValueError(f"Subfield degree {degree} does not divide {n_field}")
            pairs = sorted(zip(indices, transports))
            base = pairs[0][1]
            canonical.append(Block(
                indices=tuple(i for i, _ in pairs),
                transports=tuple((t - base) % degree for _, t in pairs),
                degree=degree,
            ))
            covered.extend(i for i, _ in pairs)
        if sorted(covered) != list(range(ring.n)):
            raise ValueError("Blocks do not partition the idempotent indices")
        canonical.sort(key=lambda b: b.representative)
        return cls(ring=ring, blocks=tuple(canonical))

    @classmethod
    def full(cls, ring: SplitRing) -> "BlockSubring":
        """T = S."""
        return cls.make(ring, [((i,), (0,), ring.field.degree) for i in range(ring.n)])

    def subfield(self, block: Block) -> Subfield:
        return Subfield(self.ring.field, block.degree)

    def block_of(self, i: int) -> Block:
        for block in self.blocks:
            if i in block.indices:
                return block
        raise PreconditionError(f"Index {i} out of range")

    def dimension(self) -> int:
        """Dimension over the prime field."""
        return sum(b.degree for b in self.blocks)

    def prime_basis(self) -> List[RingElement]:
        return prime_basis(self)

    def contains(self, v: RingElement) -> bool:
        return membership(self, v)

    def contains_subring(self, other: "BlockSubring") -> bool:
        """other is a subset of self."""
        return all(membership(self, v) for v in prime_basis(other))

    def project(self, indices: Iterable[int]) -> List[RingElement]:
        """Nonzero elements spanning T * 1_D over the prime field."""
        indices = list(indices)
        out = []
        for t in prime_basis(self):
            p = t.project(indices)
            if not p.is_zero:
                out.append(p)
        return out

    def coordinates(self, v: RingElement) -> Optional[List]:
        """Coordinates of v in prime_basis(), or None if v is not in T."""
        if not membership(self, v):
            return None
        out = []
        for block in self.blocks:
            out.extend(self.subfield(block).coordinates(v.coords[block.representative]))
        return out

    def restrict(self, ring: SplitRing, index_map: Mapping[int, int]) -> "BlockSubring":
        """T * 1_D transported into a restricted ring (index_map: old -> new)."""
        blocks = []
        for block in self.blocks:
            kept = [(index_map[i], t) for i, t in zip(block.indices, block.transports) if i in index_map]
            if kept:
                blocks.append(([i for i, _ in kept], [t for _, t in kept], block.degree))
        return BlockSubring.make(ring, blocks)

    def render(self) -> str:
        """Display form, e.g. ``k(e1+e2+e4+e5) + k(e3+e6)``."""
        k = self.ring.field
        parts = []
        for block in self.blocks:
            coefficient = "k" if block.degree == k.degree else self.subfield(block).name
            terms = []
            for i, t in zip(block.indices, block.transports):
                tag = twist_name(k, t)
                terms.append(f"{tag} {self.ring.names[i]}" if tag else self.ring.names[i])
            if len(terms) == 1:
                parts.append(f"{coefficient} {terms[0]}")
            else:
                parts.append(f"{coefficient}({'+'.join(terms)})")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.render()


def prime_basis(T: BlockSubring) -> List[RingElement]:
    """Prime-field spanning set: one element per block and subfield basis vector."""
    ring = T.ring
    k = ring.field
    out = []
    for block in T.blocks:
        for b in T.subfield(block).prime_basis():
            coords = [k.zero()] * ring.n
            for i, t in zip(block.indices, block.transports):
                coords[i] = k.sigma(b, t)
            out.append(RingElement(ring, tuple(coords)))
    return out


def membership(T: BlockSubring, v: RingElement) -> bool:
    """v_i = sigma^psi_i(v_rep) on every block and v_rep in the block subfield."""
    k = T.ring.field
    for block in T.blocks:
        a = v.coords[block.representative]
        if not T.subfield(block).contains(a):
            return False
        for i, t in zip(block.indices[1:], block.transports[1:]):
            if v.coords[i] != k.sigma(a, t):
                return False
    return True


# -- solution spaces ----------------------------------------------------------


@dataclass(frozen=True)
class TwistEdge:
    """v_target = sigma^power(v_source)."""

    source: int
    target: int
    power: int


@dataclass(frozen=True)
class SubfieldRestriction:
    """v_index lies in the subfield of the given degree."""

    index: int
    degree: int


@dataclass(frozen=True)
class ZeroCoordinate:
    """v_index = 0; never produced by invariance systems."""

    index: int


def subring_from_solution_space(S: SplitRing, constraints: Iterable) -> BlockSubring:
    """Solve twisted-permutation constraints into canonical block form.

    Union-find with potentials in Z/n: each index stores the exponent p with
    v_i = sigma^p(v_root). A cycle with discrepancy c forces the root value
    into the subfield fixed by sigma^c.

    Raises:
        NotBlockExpressible: For constraints outside the supported shapes
    """
    n = S.field.degree
    parent = list(range(S.n))
    potential = [0] * S.n
    degree = [n] * S.n

    def find(i: int) -> Tuple[int, int]:
        path = []
        while parent[i] != i:
            path.append(i)
            i = parent[i]
        root = i
        # compress, accumulating potentials from the top of the path down
        acc = 0
        for j in reversed(path):
            acc = (acc + potential[j]) % n
            potential[j] = acc
            parent[j] = root
        return root, (potential[path[0]] if path else 0)

    for c in constraints:
        if isinstance(c, TwistEdge):
            rs, ps = find(c.source)
            rt, pt = find(c.target)
            if rs != rt:
                # v_rt = sigma^(power + ps - pt)(v_rs)
                parent[rt] = rs
                potential[rt] = (c.power + ps - pt) % n
                degree[rs] = gcd(degree[rs], degree[rt])
            else:
                discrepancy = (c.power + ps - pt) % n
                degree[rs] = gcd(degree[rs], discrepancy)
        elif isinstance(c, SubfieldRestriction):
            r, _ = find(c.index)
            degree[r] = gcd(degree[r], c.degree)
        else:
            raise NotBlockExpressible(f"not block-expressible: unsupported constraint {c!r}")

    groups: Dict[int, List[Tuple[int, int]]] = {}
    for i in range(S.n):
        r, p = find(i)
        groups.setdefault(r, []).append((i, p))

    blocks = []
    for r, members in groups.items():
        d = degree[r]
        blocks.append(([i for i, _ in members], [p % d for _, p in members], d))
    return BlockSubring.make(S, blocks)


# -- enumeration --------------------------------------------------------------


def set_partitions(n: int) -> Iterator[List[List[int]]]:
    """Set partitions of range(n) via restricted growth strings."""
    if n == 0:
        yield []
        return

    def grow(i: int, rgs: List[int], blocks: int):
        if i == n:
            yield rgs
            return
        for b in range(blocks + 1):
            yield from grow(i + 1, rgs + [b], max(blocks, b + 1))

    for rgs in grow(1, [0], 1):
        parts: List[List[int]] = []
        for i, b in enumerate(rgs):
            if b == len(parts):
                parts.append([])
            parts[b].append(i)
        yield parts


def enumerate_block_subrings(
    S: SplitRing,
    unital_grading_compatible: bool = False,
    max_size: int = DEFAULT_MAX_RING_SIZE,
    allow_large: bool = False,
) -> Iterator[BlockSubring]:
    """Every canonical block subring of S.

    Args:
        S: Split ring
        unital_grading_compatible: Reserved; all candidates are emitted
        max_size: Largest n accepted without ``allow_large``
        allow_large: Override the size guard

    Raises:
        SizeGuardExceeded: If S.n > max_size and no override is given
    """
    if S.n > max_size and not allow_large:
        raise SizeGuardExceeded(f"refusing to enumerate block subrings for n={S.n} > {max_size}")
    degrees = [int(d) for d in divisors(S.field.degree)]
    count = 0
    for partition in set_partitions(S.n):
        options = []
        for block in partition:
            block_options = [
                (block, (0,) + tail, d)
                for d in degrees
                for tail in itertools.product(range(d), repeat=len(block) - 1)
            ]
            options.append(block_options)
        for choice in itertools.product(*options):
            count += 1
            yield BlockSubring.make(S, choice)
    logger.debug(f"Enumerated {count} block subrings of a ring with n={S.n}")


# -- separability -------------------------------------------------------------


@dataclass
class SeparabilityWitness:
    """e = sum c_ij t_i (x) t_j in T (x)_R T with m(e) = 1 and te = et."""

    basis: List[RingElement]
    coefficients: Dict[Tuple[int, int], object]

    def terms(self) -> List[str]:
        return [
            f"{c}*[{self.basis[i]} ⊗ {self.basis[j]}]"
            for (i, j), c in sorted(self.coefficients.items())
        ]


def separability_check(T: BlockSubring, R: BlockSubring) -> Optional[SeparabilityWitness]:
    """Search for a separability idempotent of T over R.

    T (x)_R T is the quotient of T (x)_P T (P the prime field) by the span W of
    t r (x) t' - t (x) r t'. Linear functionals vanishing on W give the
    quotient conditions; the system m(e) = 1_T, (t (x) 1)e = (1 (x) t)e is
    solved exactly.

    Returns:
        SeparabilityWitness, or None when T is not separable over R

    Raises:
        PreconditionError: If R is not contained in T
    """
    if T.ring != R.ring:
        raise PreconditionError("T and R live in different rings")
    if not T.contains_subring(R):
        raise PreconditionError(f"inclusion violated: {R} is not contained in {T}")

    char = T.ring.field.char
    tb = prime_basis(T)
    rb = prime_basis(R)
    a = len(tb)
    size = a * a

    def coords(v: RingElement) -> List:
        c = T.coordinates(v)
        if c is None:
            raise PreconditionError(f"{v} is not in {T}")
        return c

    mult = [[coords(tb[i] * tb[j]) for j in range(a)] for i in range(a)]

    relations = []
    for r in rb:
        left = [coords(t * r) for t in tb]
        for i in range(a):
            for j in range(a):
                w = [linalg.zero(char)] * size
                for p, c in enumerate(left[i]):
                    w[p * a + j] += c
                for q, c in enumerate(left[j]):
                    w[i * a + q] -= c
                relations.append(w)
    functionals = linalg.nullspace(relations, size, char)

    rows, rhs = [], []
    for k in range(a):
        for nvec in functionals:
            row = []
            for i in range(a):
                for j in range(a):
                    value = linalg.zero(char)
                    for p, c in enumerate(mult[k][i]):
                        if c:
                            value += c * nvec[p * a + j]
                    for q, c in enumerate(mult[k][j]):
                        if c:
                            value -= c * nvec[i * a + q]
                    row.append(linalg.normalize(value, char))
            rows.append(row)
            rhs.append(linalg.zero(char))

    target = coords(T.ring.one())
    for p in range(a):
        rows.append([mult[i][j][p] for i in range(a) for j in range(a)])
        rhs.append(target[p])

    solution = linalg.solve(rows, rhs, size, char)
    if solution is None:
        logger.debug(f"{T} is not separable over {R}")
        return None
    coefficients = {
        (idx // a, idx % a): c for idx, c in enumerate(solution) if c != 0
    }
    return SeparabilityWitness(basis=tb, coefficients=coefficients)
