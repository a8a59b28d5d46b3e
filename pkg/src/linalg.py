"""Exact linear algebra over a prime field (Q or GF(p)).

Vectors are plain lists of scalars: ``Fraction`` in characteristic 0 and
``int`` reduced mod p otherwise. All elimination is delegated to sympy's
``DomainMatrix`` so results are exact.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, int]
Vector = List[Scalar]


def domain_for(char: int):
    """Return the sympy domain for a prime field of the given characteristic."""
    return QQ if char == 0 else GF(char)


def normalize(x, char: int) -> Scalar:
    """Bring a Python number into canonical scalar form."""
    if char == 0:
        return Fraction(x)
    return int(x) % char


def zero(char: int) -> Scalar:
    return Fraction(0) if char == 0 else 0


def one(char: int) -> Scalar:
    return Fraction(1) if char == 0 else 1


def _to_domain(x: Scalar, char: int, domain):
    if char == 0:
        q = Fraction(x)
        return domain(q.numerator, q.denominator)
    return domain(int(x) % char)


def _from_domain(x, char: int) -> Scalar:
    if char == 0:
        return Fraction(int(x.numerator), int(x.denominator))
    return int(x) % char


def rref(rows: Sequence[Sequence[Scalar]], ncols: int, char: int) -> Tuple[List[Vector], Tuple[int, ...]]:
    """Reduced row echelon form.

    Args:
        rows: Matrix rows, each of length ``ncols``
        ncols: Number of columns (needed when ``rows`` is empty)
        char: 0 for Q, p for GF(p)

    Returns:
        (nonzero reduced rows, pivot columns)
    """
    if not rows or ncols == 0:
        return [], ()

    domain = domain_for(char)
    matrix = DomainMatrix(
        [[_to_domain(x, char, domain) for x in row] for row in rows],
        (len(rows), ncols),
        domain,
    )
    reduced, pivots = matrix.rref()
    pivots = tuple(int(c) for c in pivots)
    out = [[_from_domain(x, char) for x in row] for row in reduced.to_list()[:len(pivots)]]
    return out, pivots


def rank(rows: Sequence[Sequence[Scalar]], ncols: int, char: int) -> int:
    return len(rref(rows, ncols, char)[1])


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int, char: int) -> List[Vector]:
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    reduced, pivots = rref(rows, ncols, char)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero(char)] * ncols
        v[f] = one(char)
        for r, c in enumerate(pivots):
            v[c] = normalize(-reduced[r][f], char)
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar], ncols: int, char: int) -> Optional[Vector]:
    """One solution of A x = b (free variables set to zero), or None."""
    if not rows:
        return [zero(char)] * ncols
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1, char)
    if ncols in pivots:
        logger.debug("Linear system inconsistent")
        return None
    x = [zero(char)] * ncols
    for r, c in enumerate(pivots):
        x[c] = reduced[r][ncols]
    return x


def in_span(vectors: Sequence[Sequence[Scalar]], v: Sequence[Scalar], ncols: int, char: int) -> bool:
    base = rank(vectors, ncols, char)
    return rank(list(vectors) + [list(v)], ncols, char) == base
