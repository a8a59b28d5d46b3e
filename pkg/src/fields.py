"""Exact coefficient fields: Q, Q(sqrt d) and GF(p^m).

Every field is a vector space of dimension ``degree`` over its prime field
(Q or GF(p)); elements are stored as coordinate tuples in a fixed basis:
``(1,)`` for Q, ``(1, sqrt d)`` for quadratic fields and the power basis
``1, w, ..., w^(m-1)`` for GF(p^m), where w is a root of a fixed irreducible
polynomial. The automorphism group is cyclic of order ``degree``, generated by
conjugation or Frobenius, so an automorphism is just an exponent mod degree.
"""

import itertools
import logging
import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd
from typing import Iterable, Iterator, List, Optional, Tuple

from sympy import Poly, divisors, factorint, isprime, symbols

from . import linalg
from .errors import NotASubgroupError

logger = logging.getLogger(__name__)

RATIONAL = "rational"
QUADRATIC = "quadratic"
FINITE = "finite"

# Conway polynomials, coefficients from x^0 up to the leading 1.
CONWAY_POLYNOMIALS = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
}

_X = symbols("x")


def _is_irreducible(coeffs: Tuple[int, ...], p: int) -> bool:
    return Poly(list(reversed(coeffs)), _X, modulus=p).is_irreducible


def _choose_modulus(p: int, m: int) -> Tuple[int, ...]:
    if m == 1:
        return (0, 1)
    known = CONWAY_POLYNOMIALS.get((p, m))
    if known and _is_irreducible(known, p):
        return known
    # Least monic irreducible polynomial of degree m
    for tail in itertools.product(range(p), repeat=m):
        coeffs = tuple(reversed(tail)) + (1,)
        if coeffs[0] != 0 and _is_irreducible(coeffs, p):
            logger.debug(f"Using modulus {coeffs} for GF({p}^{m})")
            return coeffs
    raise ValueError(f"No irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True)
class CoeffField:
    """A coefficient field K with its prime field and automorphism group."""

    kind: str
    d: int = 0
    p: int = 0
    m: int = 1
    modulus: Tuple[int, ...] = dc_field(default=(), repr=False)

    @classmethod
    def rationals(cls) -> "CoeffField":
        return cls(kind=RATIONAL)

    @classmethod
    def quadratic(cls, d: int) -> "CoeffField":
        """Q(sqrt d) for a square-free d not in {0, 1}."""
        if d in (0, 1):
            raise ValueError(f"Quadratic field needs d not in {{0, 1}}, got {d}")
        if any(e > 1 for e in factorint(abs(d)).values()):
            raise ValueError(f"d = {d} is not square-free")
        return cls(kind=QUADRATIC, d=d, m=2)

    @classmethod
    def finite(cls, p: int, m: int = 1) -> "CoeffField":
        """GF(p^m) for a prime p and m >= 1."""
        if not isprime(p):
            raise ValueError(f"GF({p}): {p} is not prime")
        if m < 1:
            raise ValueError(f"GF({p}^{m}): exponent must be >= 1")
        return cls(kind=FINITE, p=p, m=m, modulus=_choose_modulus(p, m))

    @property
    def degree(self) -> int:
        """Dimension over the prime field; also the order of Aut(K)."""
        if self.kind == RATIONAL:
            return 1
        return self.m

    @property
    def char(self) -> int:
        return self.p if self.kind == FINITE else 0

    def __str__(self) -> str:
        if self.kind == RATIONAL:
            return "Q"
        if self.kind == QUADRATIC:
            return "Q(i)" if self.d == -1 else f"Q(sqrt {self.d})"
        return f"GF({self.p})" if self.m == 1 else f"GF({self.p}^{self.m})"

    # -- elements -----------------------------------------------------------

    def element(self, coords: Iterable) -> "FieldElement":
        coords = tuple(linalg.normalize(c, self.char) for c in coords)
        if len(coords) != self.degree:
            raise ValueError(f"{self} elements have {self.degree} coordinates, got {len(coords)}")
        return FieldElement(self, coords)

    def from_prime(self, c) -> "FieldElement":
        """Embed a prime-field scalar."""
        return self.element([c] + [0] * (self.degree - 1))

    def zero(self) -> "FieldElement":
        return self.from_prime(0)

    def one(self) -> "FieldElement":
        return self.from_prime(1)

    def generator(self) -> "FieldElement":
        """sqrt d for quadratic fields, the power-basis root w for GF(p^m)."""
        if self.degree == 1:
            return self.one()
        return self.element([0, 1] + [0] * (self.degree - 2))

    def basis(self) -> List["FieldElement"]:
        """The canonical prime-field basis of K."""
        n = self.degree
        return [self.element([1 if i == j else 0 for i in range(n)]) for j in range(n)]

    def all_elements(self) -> Iterator["FieldElement"]:
        """Every element of a finite field, in coordinate order."""
        if self.kind != FINITE:
            raise ValueError(f"{self} is infinite")
        for coords in itertools.product(range(self.p), repeat=self.m):
            yield self.element(coords)

    # -- arithmetic on coordinate tuples ------------------------------------

    def _mul(self, a: tuple, b: tuple) -> tuple:
        if self.kind == RATIONAL:
            return (a[0] * b[0],)
        if self.kind == QUADRATIC:
            return (a[0] * b[0] + self.d * a[1] * b[1], a[0] * b[1] + a[1] * b[0])
        p, m, mod = self.p, self.m, self.modulus
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(len(prod) - 1, m - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for j in range(m):
                    prod[k - m + j] = (prod[k - m + j] - c * mod[j]) % p
        return tuple(prod[:m])

    def _inv(self, a: tuple) -> tuple:
        if all(c == 0 for c in a):
            raise ZeroDivisionError(f"division by zero in {self}")
        if self.kind == RATIONAL:
            return (1 / a[0],)
        if self.kind == QUADRATIC:
            norm = a[0] * a[0] - self.d * a[1] * a[1]
            return (a[0] / norm, -a[1] / norm)
        # a^(p^m - 2)
        result = self.one().coords
        base, e = a, self.p ** self.m - 2
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    def sigma(self, a: "FieldElement", k: int) -> "FieldElement":
        """Apply the k-th power of the generating automorphism."""
        k %= self.degree
        if k == 0:
            return a
        if self.kind == QUADRATIC:
            return FieldElement(self, (a.coords[0], -a.coords[1]))
        matrix = _frobenius_matrix(self, k)
        coords = tuple(
            sum(matrix[j][i] * a.coords[j] for j in range(self.m)) % self.p
            for i in range(self.m)
        )
        return FieldElement(self, coords)


@lru_cache(maxsize=None)
def _frobenius_matrix(field: CoeffField, k: int) -> Tuple[Tuple[int, ...], ...]:
    """Row j holds the coordinates of (w^j)^(p^k)."""
    rows = []
    for basis_element in field.basis():
        image = basis_element
        for _ in range(k):
            image = image ** field.p
        rows.append(image.coords)
    return tuple(rows)


@dataclass(frozen=True)
class FieldElement:
    """An exact element of a CoeffField."""

    field: CoeffField
    coords: tuple

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return self.field.element(x + y for x, y in zip(self.coords, other.coords))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self.field.element(x - y for x, y in zip(self.coords, other.coords))

    def __neg__(self) -> "FieldElement":
        return self.field.element(-x for x in self.coords)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return self.field.element(self.field._mul(self.coords, other.coords))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        return self.field.element(self.field._inv(self.coords))

    def scale(self, c) -> "FieldElement":
        """Multiply by a prime-field scalar."""
        return self.field.element(x * c for x in self.coords)

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def __str__(self) -> str:
        f = self.field
        if f.kind == RATIONAL:
            return str(self.coords[0])
        if f.kind == QUADRATIC:
            root = "i" if f.d == -1 else f"sqrt({f.d})"
            terms = [(self.coords[0], ""), (self.coords[1], root)]
        else:
            terms = [
                (c, "" if j == 0 else ("w" if j == 1 else f"w^{j}"))
                for j, c in reversed(list(enumerate(self.coords)))
            ]
        return _format_terms(terms)


def _format_terms(terms) -> str:
    out = ""
    for coeff, symbol in terms:
        if coeff == 0:
            continue
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        if symbol and magnitude == 1:
            text = symbol
        elif symbol:
            text = f"{magnitude}*{symbol}"
        else:
            text = str(magnitude)
        if not out:
            out = f"-{text}" if negative else text
        else:
            out += f" - {text}" if negative else f" + {text}"
    return out or "0"


@dataclass(frozen=True)
class Automorphism:
    """sigma^power, where sigma is conjugation or Frobenius."""

    field: CoeffField
    power: int

    def __call__(self, a: FieldElement) -> FieldElement:
        return self.field.sigma(a, self.power)

    def compose(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(self.field, (self.power + other.power) % self.field.degree)

    def inverse(self) -> "Automorphism":
        return Automorphism(self.field, (-self.power) % self.field.degree)

    @property
    def name(self) -> str:
        return twist_name(self.field, self.power) or "id"

    def __str__(self) -> str:
        return self.name


def twist_name(field: CoeffField, k: int) -> str:
    """DSL tag for sigma^k; empty for the identity."""
    k %= field.degree
    if k == 0:
        return ""
    if field.kind == QUADRATIC:
        return "conj"
    return f"frob^{k}"


@dataclass(frozen=True)
class Subfield:
    """The subfield of K fixed by sigma^degree; degree divides [K : prime]."""

    field: CoeffField
    degree: int

    @property
    def is_full(self) -> bool:
        return self.degree == self.field.degree

    def contains(self, a: FieldElement) -> bool:
        return self.field.sigma(a, self.degree) == a

    def prime_basis(self) -> List[FieldElement]:
        return list(_subfield_basis(self.field, self.degree))

    def coordinates(self, a: FieldElement) -> Optional[List]:
        """Coordinates of a in prime_basis(), or None when a is not in the subfield."""
        basis = self.prime_basis()
        n = self.field.degree
        rows = [[b.coords[j] for b in basis] for j in range(n)]
        return linalg.solve(rows, list(a.coords), len(basis), self.field.char)

    @property
    def name(self) -> str:
        f = self.field
        if self.is_full:
            return str(f)
        if f.kind == QUADRATIC:
            return "Q"
        return f"GF({f.p})" if self.degree == 1 else f"GF({f.p}^{self.degree})"

    def __str__(self) -> str:
        return self.name


@lru_cache(maxsize=None)
def _subfield_basis(field: CoeffField, degree: int) -> Tuple[FieldElement, ...]:
    n = field.degree
    images = [field.sigma(b, degree) for b in field.basis()]
    # (sigma^degree - id) as a matrix acting on coordinate columns
    rows = [
        [images[j].coords[i] - (1 if i == j else 0) for j in range(n)]
        for i in range(n)
    ]
    kernel = linalg.nullspace(rows, n, field.char)
    return tuple(field.element(v) for v in kernel)


def automorphism_group(F: CoeffField) -> List[Automorphism]:
    """All automorphisms of F, identity first, ordered by exponent."""
    return [Automorphism(F, k) for k in range(F.degree)]


def subfields(F: CoeffField) -> List[Subfield]:
    """The subfield lattice of F, one entry per divisor of the degree."""
    return [Subfield(F, int(d)) for d in divisors(F.degree)]


def fixed_subfield(F: CoeffField, G: Iterable[Automorphism]) -> Subfield:
    """The subfield fixed by a subgroup G of Aut(F).

    Raises:
        NotASubgroupError: If G is empty or not closed under composition
    """
    n = F.degree
    powers = {g.power % n for g in G}
    if not powers or any((a + b) % n not in powers for a in powers for b in powers):
        raise NotASubgroupError("not a subgroup")
    return Subfield(F, gcd(n, *powers))


_FIELD_PATTERNS = [
    (re.compile(r"^Q$"), lambda m: CoeffField.rationals()),
    (re.compile(r"^Q\(\s*i\s*\)$"), lambda m: CoeffField.quadratic(-1)),
    (re.compile(r"^Q\(\s*sqrt\s*(-?)\s*(\d+)\s*\)$"),
     lambda m: CoeffField.quadratic(int(m.group(1) + m.group(2)))),
    (re.compile(r"^GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?\)$"),
     lambda m: CoeffField.finite(int(m.group(1)), int(m.group(2) or 1))),
]


def field_from_spec(text: str) -> CoeffField:
    """Parse a field spec string: Q, Q(i), Q(sqrt d), GF(p), GF(p^m).

    Raises:
        ValueError: If the string is malformed or names an invalid field
    """
    text = text.strip()
    for pattern, build in _FIELD_PATTERNS:
        match = pattern.match(text)
        if match:
            return build(match)
    raise ValueError(f"Unrecognized field spec: {text!r}")
