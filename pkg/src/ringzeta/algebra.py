"""Rings given by integer structure constants.

A rank-n ring is stored as a sparse map (i, j, k) -> c (1-based basis indices,
absent means 0) with e_i * e_j = sum_k c_{ijk} e_k.  Products extend bilinearly.
The catalog ships the worked example rings used throughout the test suite.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import LookupError_, MalformedInputError
from .exactlinalg import RowSpace

KNOWN_FLAGS = frozenset({"antisymmetric", "lie", "associative", "commutative"})


def _freeze_constants(constants, rank, kmax=None):
    if kmax is None:
        kmax = rank
    out = {}
    for (i, j, k), v in constants.items():
        if not (1 <= i <= rank and 1 <= j <= rank and 1 <= k <= kmax):
            raise MalformedInputError(f"structure constant index {(i, j, k)} out of range")
        v = int(v)
        if v:
            out[(i, j, k)] = v
    return out


@dataclass(frozen=True)
class AxiomVerdict:
    holds: bool
    witness: tuple | None = None  # first offending basis triple


@dataclass(frozen=True)
class ValidationReport:
    antisymmetric: AxiomVerdict
    jacobi: AxiomVerdict
    associative: AxiomVerdict
    commutative: AxiomVerdict

    def as_dict(self):
        return {
            name: {"holds": v.holds, "witness": v.witness}
            for name, v in (
                ("antisymmetric", self.antisymmetric),
                ("jacobi", self.jacobi),
                ("associative", self.associative),
                ("commutative", self.commutative),
            )
        }


class StructureConstantAlgebra:
    """Immutable; safe to share between workers."""

    def __init__(self, name, rank, constants, flags=()):
        if rank < 1:
            raise MalformedInputError("rank must be >= 1")
        flags = frozenset(flags)
        unknown = flags - KNOWN_FLAGS
        if unknown:
            raise MalformedInputError(f"unknown flags: {sorted(unknown)}")
        self.name = name
        self.rank = rank
        self.constants = _freeze_constants(constants, rank)
        self.flags = flags
        self._check_declared_flags()

    def _check_declared_flags(self):
        report = validate(self)
        checks = {
            "antisymmetric": report.antisymmetric,
            "lie": AxiomVerdict(
                report.antisymmetric.holds and report.jacobi.holds,
                report.antisymmetric.witness or report.jacobi.witness,
            ),
            "associative": report.associative,
            "commutative": report.commutative,
        }
        for flag in self.flags:
            verdict = checks[flag]
            if not verdict.holds:
                raise MalformedInputError(
                    f"{self.name!r} declared {flag} but fails at triple {verdict.witness}"
                )

    def basis_vector(self, i):
        return tuple(1 if j == i - 1 else 0 for j in range(self.rank))

    def __repr__(self):
        return f"StructureConstantAlgebra({self.name!r}, rank={self.rank})"

    def __eq__(self, other):
        return (
            isinstance(other, StructureConstantAlgebra)
            and self.rank == other.rank
            and self.constants == other.constants
        )

    def __hash__(self):
        return hash((self.rank, tuple(sorted(self.constants.items()))))


def multiply(alg: StructureConstantAlgebra, u, v):
    """Bilinear product of two coordinate vectors, as a tuple of ints."""
    if len(u) != alg.rank or len(v) != alg.rank:
        raise MalformedInputError("vector length must equal the rank")
    out = [0] * alg.rank
    for (i, j, k), c in alg.constants.items():
        ui = u[i - 1]
        if ui:
            vj = v[j - 1]
            if vj:
                out[k - 1] += ui * vj * c
    return tuple(out)


def _basis_product(alg, i, j):
    out = [0] * alg.rank
    for (a, b, k), c in alg.constants.items():
        if a == i and b == j:
            out[k - 1] = c
    return out


def validate(alg: StructureConstantAlgebra) -> ValidationReport:
    """Check every axiom on all basis triples, whatever the declared flags say."""
    n = alg.rank
    anti_w = None
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            pij = _basis_product(alg, i, j)
            pji = _basis_product(alg, j, i)
            bad = (
                any(a != -b for a, b in zip(pij, pji))
                if i != j
                else any(pij)
            )
            if bad:
                k = next(k for k in range(n) if (pij[k] != -pji[k] if i != j else pij[k] != 0))
                anti_w = (i, j, k + 1)
                break
        if anti_w:
            break

    basis = [alg.basis_vector(i) for i in range(1, n + 1)]

    jac_w = None
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                s = [
                    a + b + c
                    for a, b, c in zip(
                        multiply(alg, basis[i - 1], multiply(alg, basis[j - 1], basis[k - 1])),
                        multiply(alg, basis[j - 1], multiply(alg, basis[k - 1], basis[i - 1])),
                        multiply(alg, basis[k - 1], multiply(alg, basis[i - 1], basis[j - 1])),
                    )
                ]
                if any(s):
                    jac_w = (i, j, k)
                    break
            if jac_w:
                break
        if jac_w:
            break

    ass_w = None
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                lhs = multiply(alg, multiply(alg, basis[i - 1], basis[j - 1]), basis[k - 1])
                rhs = multiply(alg, basis[i - 1], multiply(alg, basis[j - 1], basis[k - 1]))
                if lhs != rhs:
                    ass_w = (i, j, k)
                    break
            if ass_w:
                break
        if ass_w:
            break

    com_w = None
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if _basis_product(alg, i, j) != _basis_product(alg, j, i):
                com_w = (i, j, None)
                break
        if com_w:
            break

    return ValidationReport(
        antisymmetric=AxiomVerdict(anti_w is None, anti_w),
        jacobi=AxiomVerdict(jac_w is None, jac_w),
        associative=AxiomVerdict(ass_w is None, ass_w),
        commutative=AxiomVerdict(com_w is None, com_w),
    )


def nilpotency_class(alg: StructureConstantAlgebra):
    """Smallest c with gamma_{c+1} = 0 over Q, or None when the series
    stabilizes at a nonzero term.  Ranks decide; torsion is not modeled."""
    n = alg.rank
    basis = [alg.basis_vector(i) for i in range(1, n + 1)]
    current = basis  # gamma_1 spanning set
    current_dim = n
    for c in range(1, 2 * n + 3):
        space = RowSpace(n)
        for u in current:
            for b in basis:
                space.add(multiply(alg, [Fraction(x) for x in u], b))
        if space.dim == 0:
            return c
        # stabilization means equal spans, not just equal dimensions
        if space.dim == current_dim:
            joint = RowSpace(n)
            for v in current:
                joint.add(v)
            for v in space.basis():
                joint.add(v)
            if joint.dim == current_dim:
                return None
        current = space.basis()
        current_dim = space.dim
    return None


def scale(alg: StructureConstantAlgebra, p: int, i: int) -> StructureConstantAlgebra:
    """The same additive lattice with all products multiplied by p^i."""
    f = p**i
    return StructureConstantAlgebra(
        f"scale({alg.name},{p},{i})",
        alg.rank,
        {key: v * f for key, v in alg.constants.items()},
        alg.flags,
    )


# ---------------------------------------------------------------------------
# class-2 presentations and commutator matrices


class Class2Presentation:
    """Relations [e_i, e_j] = sum_k c_{ijk} f_k with central f_1..f_{dprime}."""

    def __init__(self, name, d, dprime, constants):
        if d < 1 or dprime < 1:
            raise MalformedInputError("d and dprime must be >= 1")
        self.name = name
        self.d = d
        self.dprime = dprime
        self.constants = _freeze_constants(constants, d, kmax=dprime)
        for (i, j, k), v in self.constants.items():
            if self.constants.get((j, i, k), 0) != -v:
                raise MalformedInputError(f"presentation not antisymmetric at {(i, j, k)}")

    def __repr__(self):
        return f"Class2Presentation({self.name!r}, d={self.d}, dprime={self.dprime})"


class CommutatorMatrix:
    """d x d matrix of integer linear forms in y_1..y_{dprime}."""

    def __init__(self, d, dprime, entries):
        self.d = d
        self.dprime = dprime
        self.entries = entries  # entries[i][j] = coefficient tuple, length dprime
        for i in range(d):
            if any(entries[i][i]):
                raise MalformedInputError("diagonal entries must vanish")
            for j in range(d):
                if tuple(entries[i][j]) != tuple(-c for c in entries[j][i]):
                    raise MalformedInputError("entries must be antisymmetric forms")

    def evaluate(self, ell):
        """Integer matrix R(ell)."""
        if len(ell) != self.dprime:
            raise MalformedInputError("evaluation point has wrong length")
        return [
            [sum(c * l for c, l in zip(form, ell)) for form in row]
            for row in self.entries
        ]

    def is_zero(self):
        return all(not any(form) for row in self.entries for form in row)


def commutator_matrix(pres: Class2Presentation) -> CommutatorMatrix:
    entries = [
        [[0] * pres.dprime for _ in range(pres.d)] for _ in range(pres.d)
    ]
    for (i, j, k), c in pres.constants.items():
        entries[i - 1][j - 1][k - 1] = c
    return CommutatorMatrix(pres.d, pres.dprime, entries)


# ---------------------------------------------------------------------------
# catalog

_DUSAUTOY_SMALL_R = (
    (("y3",), ("y1",), ("y2",)),
    (("y1",), ("y3",), ()),
    (("y2",), (), ("y1",)),
)


def _dusautoy_constants():
    # basis x1..x6, y1..y3; [x_i, x_{3+j}] = small R entry (i, j)
    names = {"y1": 1, "y2": 2, "y3": 3}
    constants = {}
    for i in range(3):
        for j in range(3):
            for sym in _DUSAUTOY_SMALL_R[i][j]:
                k = names[sym]
                constants[(i + 1, 3 + j + 1, k)] = 1
                constants[(3 + j + 1, i + 1, k)] = -1
    return constants


def _free_nilpotent_2_constants(d):
    pairs = list(combinations(range(1, d + 1), 2))
    constants = {}
    for k, (i, j) in enumerate(pairs, start=1):
        constants[(i, j, k)] = 1
        constants[(j, i, k)] = -1
    return pairs, constants


@lru_cache(maxsize=None)
def catalog(name: str, param: int | None = None) -> StructureConstantAlgebra:
    """Catalog of example rings.  Basis order follows the sources the test
    oracles were derived from (x, y, z for the Heisenberg ring; e, f, h for
    the traceless 2x2 matrices)."""
    if name == "abelian":
        n = _require_param(name, param)
        return StructureConstantAlgebra(
            f"abelian({n})", n, {}, ("antisymmetric", "lie", "associative", "commutative")
        )
    if name == "heisenberg":
        return StructureConstantAlgebra(
            "heisenberg", 3, {(1, 2, 3): 1, (2, 1, 3): -1}, ("antisymmetric", "lie")
        )
    if name == "sl2":
        constants = {
            (1, 2, 3): 1, (2, 1, 3): -1,   # [e, f] = h
            (3, 1, 1): 2, (1, 3, 1): -2,   # [h, e] = 2e
            (3, 2, 2): -2, (2, 3, 2): 2,   # [h, f] = -2f
        }
        return StructureConstantAlgebra("sl2", 3, constants, ("antisymmetric", "lie"))
    if name == "free_nilpotent_2_d":
        d = _require_param(name, param)
        pairs, constants = _free_nilpotent_2_constants(d)
        shifted = {(i, j, d + k): v for (i, j, k), v in constants.items()}
        return StructureConstantAlgebra(
            f"free_nilpotent_2_{d}", d + len(pairs), shifted, ("antisymmetric", "lie")
        )
    if name == "componentwise":
        n = _require_param(name, param)
        return StructureConstantAlgebra(
            f"componentwise({n})",
            n,
            {(i, i, i): 1 for i in range(1, n + 1)},
            ("associative", "commutative"),
        )
    if name == "dusautoy_ec":
        return StructureConstantAlgebra(
            "dusautoy_ec",
            9,
            {(i, j, 6 + k): v for (i, j, k), v in _dusautoy_constants().items()},
            ("antisymmetric", "lie"),
        )
    raise LookupError_(f"unknown catalog ring {name!r}")


def _require_param(name, param):
    if param is None:
        raise MalformedInputError(f"catalog entry {name!r} needs a parameter")
    if param < 1:
        raise MalformedInputError(f"parameter for {name!r} must be >= 1")
    return param


@lru_cache(maxsize=None)
def catalog_presentation(name: str, param: int | None = None) -> Class2Presentation:
    if name == "heisenberg":
        return Class2Presentation("heisenberg", 2, 1, {(1, 2, 1): 1, (2, 1, 1): -1})
    if name == "free_nilpotent_2_d":
        d = _require_param(name, param)
        pairs, constants = _free_nilpotent_2_constants(d)
        return Class2Presentation(f"free_nilpotent_2_{d}", d, len(pairs), constants)
    if name == "dusautoy_ec":
        return Class2Presentation("dusautoy_ec", 6, 3, _dusautoy_constants())
    raise LookupError_(f"unknown catalog presentation {name!r}")


_SPEC_RE = re.compile(r"^([a-zA-Z_][a-zA-Z0-9_]*)(?:\((\d+)\))?$")


def resolve_ring_spec(spec: str) -> StructureConstantAlgebra:
    """Resolve 'catalog:NAME', 'catalog:NAME(k)', 'catalog:scale(NAME,p,i)' or a JSON path."""
    if spec.startswith("catalog:"):
        body = spec[len("catalog:"):]
        m = re.match(r"^scale\(([a-zA-Z0-9_()]+),(\d+),(\d+)\)$", body)
        if m:
            inner = resolve_ring_spec("catalog:" + m.group(1))
            return scale(inner, int(m.group(2)), int(m.group(3)))
        m = _SPEC_RE.match(body)
        if not m:
            raise MalformedInputError(f"cannot parse ring spec {spec!r}")
        return catalog(m.group(1), int(m.group(2)) if m.group(2) else None)
    return load_algebra(spec)


def resolve_presentation_spec(spec: str) -> Class2Presentation:
    if spec.startswith("catalog:"):
        m = _SPEC_RE.match(spec[len("catalog:"):])
        if not m:
            raise MalformedInputError(f"cannot parse presentation spec {spec!r}")
        return catalog_presentation(m.group(1), int(m.group(2)) if m.group(2) else None)
    return load_presentation(spec)


# ---------------------------------------------------------------------------
# JSON input files


def _constants_from_json(entries):
    constants = {}
    for entry in entries:
        if len(entry) != 4:
            raise MalformedInputError(f"constant entry {entry!r} must be [i, j, k, value]")
        i, j, k, v = entry
        if (i, j, k) in constants:
            raise MalformedInputError(f"duplicate structure-constant triple {(i, j, k)}")
        constants[(i, j, k)] = v
    return constants


def load_algebra(path) -> StructureConstantAlgebra:
    with open(path) as fh:
        data = json.load(fh)
    try:
        return StructureConstantAlgebra(
            data.get("name", str(path)),
            data["rank"],
            _constants_from_json(data.get("constants", [])),
            data.get("flags", []),
        )
    except KeyError as exc:
        raise MalformedInputError(f"ring file {path} missing field {exc}") from exc


def load_presentation(path) -> Class2Presentation:
    with open(path) as fh:
        data = json.load(fh)
    try:
        return Class2Presentation(
            data.get("name", str(path)),
            data["d"],
            data["dprime"],
            _constants_from_json(data.get("constants", [])),
        )
    except KeyError as exc:
        raise MalformedInputError(f"presentation file {path} missing field {exc}") from exc
