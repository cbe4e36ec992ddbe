"""Brute-force counting of finite-index sublattices, subrings and ideals.

Sublattices of Z_p^n of index p^k are enumerated in a canonical Hermite form:
rows are generators, the matrix is upper triangular, the diagonal entry of row
i is p^{m_i}, and entries above a diagonal entry are reduced modulo it.  Every
sublattice appears exactly once.  This module is the independent oracle the
closed-form Euler factors are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import StructureConstantAlgebra, multiply
from .errors import MalformedInputError, ResourceGuardError
from .ratfun import LocalDirichletTruncation

DEFAULT_CEILING = 10**8


@dataclass(frozen=True)
class HermiteSublattice:
    p: int
    n: int
    rows: tuple  # tuple of n row tuples, generators of the lattice

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != self.n:
                raise MalformedInputError("matrix must be square of size rank")
            if any(row[j] for j in range(i)):
                raise MalformedInputError("matrix must be upper triangular")
            if not _is_p_power(row[i], self.p):
                raise MalformedInputError("diagonal entries must be powers of p")
        for j in range(self.n):
            for i in range(j):
                if not (0 <= self.rows[i][j] < self.rows[j][j]):
                    raise MalformedInputError(
                        "entries must be reduced modulo the diagonal of their column"
                    )

    def index(self):
        out = 1
        for i in range(self.n):
            out *= self.rows[i][i]
        return out


def _is_p_power(x, p):
    if x < 1:
        return False
    while x % p == 0:
        x //= p
    return x == 1


def contains(lat: HermiteSublattice, v) -> bool:
    """Is v a Z_p-combination of the rows?  Exact triangular substitution;
    the coefficients are p-integral iff each pivot division is exact."""
    if len(v) != lat.n:
        raise MalformedInputError("vector length must equal the rank")
    rows = lat.rows
    residual = list(v)
    for i in range(lat.n):
        t = residual[i]
        if t:
            d = rows[i][i]
            if t % d:
                return False
            c = t // d
            row = rows[i]
            for j in range(i + 1, lat.n):
                if row[j]:
                    residual[j] -= c * row[j]
    return True


def sublattice_count_prediction(n: int, p: int, k: int) -> int:
    """Number of index-p^k sublattices: coefficient of t^k in prod_i 1/(1 - p^i t)."""
    coeffs = [1] + [0] * k
    for i in range(n):
        q = p**i
        for d in range(1, k + 1):
            coeffs[d] += coeffs[d - 1] * q
    return coeffs[k]


def _compositions(k, n):
    if n == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _compositions(k - first, n - 1):
            yield (first,) + rest


def enumerate_sublattices(n, p, k, ceiling=DEFAULT_CEILING, shard=None):
    """Yield each index-p^k sublattice of Z_p^n exactly once, in canonical form.

    shard=(index, count) keeps only the diagonal compositions with
    position % count == index; the shards partition the enumeration.
    """
    if n < 1 or k < 0:
        raise MalformedInputError("need n >= 1 and k >= 0")
    predicted = sublattice_count_prediction(n, p, k)
    if predicted > ceiling:
        raise ResourceGuardError(
            f"predicted {predicted} lattices exceeds ceiling {ceiling}",
            predicted=predicted,
            ceiling=ceiling,
        )
    for pos, m in enumerate(_compositions(k, n)):
        if shard is not None and pos % shard[1] != shard[0]:
            continue
        yield from _lattices_for_composition(n, p, m)


def _lattices_for_composition(n, p, m):
    diag = [p**e for e in m]
    cells = [(i, j) for j in range(n) for i in range(j) if diag[j] > 1]
    base = [[0] * n for _ in range(n)]
    for i in range(n):
        base[i][i] = diag[i]
    if not cells:
        yield HermiteSublattice(p, n, tuple(tuple(r) for r in base))
        return
    radices = [diag[j] for (_, j) in cells]
    counter = [0] * len(cells)
    while True:
        rows = [row[:] for row in base]
        for (i, j), v in zip(cells, counter):
            rows[i][j] = v
        yield HermiteSublattice(p, n, tuple(tuple(r) for r in rows))
        pos = 0
        while pos < len(cells):
            counter[pos] += 1
            if counter[pos] < radices[pos]:
                break
            counter[pos] = 0
            pos += 1
        if pos == len(cells):
            return


def is_subring(alg: StructureConstantAlgebra, lat: HermiteSublattice) -> bool:
    """Closed under products of generators.  For antisymmetric algebras only
    pairs i < j need testing (r*r = 0 and the mirror product is the negation,
    and lattices are closed under negation)."""
    if alg.rank != lat.n:
        raise MalformedInputError("algebra rank must equal lattice rank")
    rows = lat.rows
    antisym = "antisymmetric" in alg.flags
    n = lat.n
    for i in range(n):
        start = i + 1 if antisym else 0
        for j in range(start, n):
            prod = multiply(alg, rows[i], rows[j])
            if any(prod) and not contains(lat, prod):
                return False
    return True


def is_ideal(alg: StructureConstantAlgebra, lat: HermiteSublattice) -> bool:
    """Closed under products with arbitrary basis elements, on both sides."""
    if alg.rank != lat.n:
        raise MalformedInputError("algebra rank must equal lattice rank")
    antisym = "antisymmetric" in alg.flags
    n = lat.n
    basis = [alg.basis_vector(b) for b in range(1, n + 1)]
    for row in lat.rows:
        for e in basis:
            prod = multiply(alg, row, e)
            if any(prod) and not contains(lat, prod):
                return False
            if not antisym:
                prod = multiply(alg, e, row)
                if any(prod) and not contains(lat, prod):
                    return False
    return True


MODES = ("subrings", "ideals", "sublattices")


def count(
    alg: StructureConstantAlgebra,
    p: int,
    K: int,
    mode: str = "subrings",
    ceiling: int = DEFAULT_CEILING,
    shard_count: int = 1,
) -> LocalDirichletTruncation:
    """a[k] = number of index-p^k objects of the requested kind, k = 0..K.

    Shards are enumerated independently and combined by exact addition, so the
    result is identical for every shard_count.
    """
    if mode not in MODES:
        raise MalformedInputError(f"mode must be one of {MODES}")
    test = {
        "subrings": lambda lat: is_subring(alg, lat),
        "ideals": lambda lat: is_ideal(alg, lat),
        "sublattices": lambda lat: True,
    }[mode]
    coeffs = []
    for k in range(K + 1):
        total = 0
        for s in range(shard_count):
            total += sum(
                1
                for lat in enumerate_sublattices(
                    alg.rank, p, k, ceiling=ceiling, shard=(s, shard_count)
                )
                if test(lat)
            )
        coeffs.append(total)
    return LocalDirichletTruncation(p, tuple(coeffs))
