"""Exact matrices over the scalar backends: frame operators, Gram matrices,
traces, sup norms and the two tightness / diagonalizability checks.

Matrices are tuples of row tuples. Nothing here rounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import isqrt, lcm
from typing import Sequence

from .scalar import (
    AbsValue,
    Backend,
    Laurent,
    ScalarParseError,
    format_scalar,
    parse_scalar,
    valuation,
)

__all__ = [
    "ConfigError",
    "DiagStatus",
    "DiagVerdict",
    "FrameConfig",
    "NonRationalEntryError",
    "TightnessCertificate",
    "characteristic_polynomial",
    "diagonalizable_over_rationals",
    "frame_operator",
    "gram",
    "identity",
    "inverse",
    "is_scalar_identity",
    "matmul",
    "pair",
    "rank",
    "sup_norm",
    "trace",
    "trace_product",
]


class ConfigError(ValueError):
    """Malformed frame configuration. ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class NonRationalEntryError(ValueError):
    pass


@dataclass(frozen=True)
class FrameConfig:
    """Vectors ``tau_1..tau_n`` in K^d and functionals given by coefficient rows."""

    backend: Backend
    d: int
    n: int
    vectors: tuple
    functionals: tuple

    def __post_init__(self):
        if self.d < 1 or self.n < 1:
            raise ConfigError("d and n must be positive")
        for name in ("vectors", "functionals"):
            rows = getattr(self, name)
            if len(rows) != self.n:
                raise ConfigError(f"expected {self.n} entries, got {len(rows)}", name)
            canon = []
            for j, row in enumerate(rows):
                if len(row) != self.d:
                    raise ConfigError(
                        f"expected {self.d} coordinates, got {len(row)}", f"{name}[{j}]"
                    )
                canon.append(tuple(self.backend.coerce(x) for x in row))
            object.__setattr__(self, name, tuple(canon))

    @classmethod
    def build(cls, backend: Backend, vectors, functionals) -> "FrameConfig":
        vectors = [tuple(v) for v in vectors]
        functionals = [tuple(u) for u in functionals]
        d = len(vectors[0]) if vectors else 0
        return cls(backend, d, len(vectors), tuple(vectors), tuple(functionals))

    def diagonal(self) -> tuple:
        """``f_j(tau_j)`` for each j."""
        return tuple(pair(u, t) for u, t in zip(self.functionals, self.vectors))

    def scaled(self, c) -> "FrameConfig":
        """Replace ``tau_j -> c*tau_j`` and ``f_j -> f_j / c``."""
        c = self.backend.coerce(c)
        inv = self.backend.one / c
        return FrameConfig(
            self.backend,
            self.d,
            self.n,
            tuple(tuple(c * x for x in v) for v in self.vectors),
            tuple(tuple(inv * x for x in u) for u in self.functionals),
        )

    def to_json(self) -> dict:
        return {
            "backend": self.backend.to_json(),
            "d": self.d,
            "n": self.n,
            "vectors": [[format_scalar(x) for x in v] for v in self.vectors],
            "functionals": [[format_scalar(x) for x in u] for u in self.functionals],
        }

    @classmethod
    def from_json(cls, obj) -> "FrameConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        for key in ("backend", "d", "n", "vectors", "functionals"):
            if key not in obj:
                raise ConfigError("missing field", key)
        try:
            backend = Backend.from_json(obj["backend"])
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc), "backend") from None
        d, n = obj["d"], obj["n"]
        for key, val in (("d", d), ("n", n)):
            if isinstance(val, bool) or not isinstance(val, int):
                raise ConfigError("must be an integer", key)
        parsed = {}
        for name in ("vectors", "functionals"):
            rows = obj[name]
            if not isinstance(rows, list):
                raise ConfigError("must be a list", name)
            out = []
            for j, row in enumerate(rows):
                if not isinstance(row, list):
                    raise ConfigError("must be a list", f"{name}[{j}]")
                entries = []
                for i, x in enumerate(row):
                    try:
                        entries.append(parse_scalar(x, backend))
                    except (ScalarParseError, TypeError) as exc:
                        raise ConfigError(str(exc), f"{name}[{j}][{i}]") from None
                out.append(tuple(entries))
            parsed[name] = tuple(out)
        return cls(backend, d, n, parsed["vectors"], parsed["functionals"])

    @classmethod
    def loads(cls, text: str) -> "FrameConfig":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_json(obj)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def pair(u: Sequence, x: Sequence):
    """Evaluate the functional with coefficients ``u`` at ``x``."""
    it = iter(zip(u, x))
    a, b = next(it)
    total = a * b
    for a, b in it:
        total = total + a * b
    return total


def trace_product(A, B):
    """tr(AB) without forming AB."""
    n = len(A)
    total = A[0][0] * B[0][0]
    for i in range(n):
        for j in range(n):
            if i or j:
                total = total + A[i][j] * B[j][i]
    return total


def identity(size: int, backend: Backend) -> tuple:
    zero, one = backend.zero, backend.one
    return tuple(tuple(one if i == j else zero for j in range(size)) for i in range(size))


def matmul(A, B) -> tuple:
    cols = list(zip(*B))
    return tuple(tuple(pair(row, col) for col in cols) for row in A)


def trace(M):
    if any(len(row) != len(M) for row in M):
        raise ValueError("trace of a non-square matrix")
    total = M[0][0]
    for i in range(1, len(M)):
        total = total + M[i][i]
    return total


def gram(config: FrameConfig) -> tuple:
    """``G[j][k] = f_j(tau_k)``."""
    return tuple(tuple(pair(u, t) for t in config.vectors) for u in config.functionals)


def frame_operator(config: FrameConfig) -> tuple:
    """``S = sum_j tau_j u_j^T``, the matrix of ``x -> sum_j f_j(x) tau_j``."""
    zero = config.backend.zero
    S = [[zero] * config.d for _ in range(config.d)]
    for t, u in zip(config.vectors, config.functionals):
        for i in range(config.d):
            if not t[i]:
                continue
            row = S[i]
            for l in range(config.d):
                row[l] = row[l] + t[i] * u[l]
    return tuple(tuple(row) for row in S)


class Space(str, Enum):
    BASE = "base"
    SYM_POWER = "sym_power"


@dataclass(frozen=True)
class TightnessCertificate:
    b: object
    space: Space = Space.BASE
    m: int = 1

    def to_json(self) -> dict:
        return {"b": format_scalar(self.b), "space": self.space.value, "m": self.m}


def is_scalar_identity(M, *, m: int = 1) -> TightnessCertificate | None:
    size = len(M)
    b = M[0][0]
    for i in range(size):
        for j in range(size):
            if i == j:
                if M[i][j] != b:
                    return None
            elif M[i][j]:
                return None
    return TightnessCertificate(b, Space.BASE if m == 1 else Space.SYM_POWER, m)


def sup_norm(v: Sequence, backend: Backend) -> AbsValue:
    if not v:
        raise ValueError("sup norm of an empty vector")
    return max(valuation(x, backend) for x in v)


# Exact rational linear algebra


def _as_rational_matrix(M) -> list[list[Fraction]]:
    out = []
    for row in M:
        new = []
        for x in row:
            if isinstance(x, Laurent):
                if not x.is_constant():
                    raise NonRationalEntryError(f"entry {x} is not a rational constant")
                x = x.constant_value()
            elif not isinstance(x, (int, Fraction)) or isinstance(x, bool):
                raise NonRationalEntryError(f"entry {x!r} is not rational")
            new.append(Fraction(x))
        out.append(new)
    return out


def _row_reduce(A: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [row[:] for row in A]
    rows = len(A)
    cols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if A[i][c]), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M) -> int:
    return len(_row_reduce(_as_rational_matrix(M))[1])


def _nullspace(A: list[list[Fraction]]) -> list[list[Fraction]]:
    R, pivots = _row_reduce(A)
    cols = len(A[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * cols
        v[fcol] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fcol]
        basis.append(v)
    return basis


def inverse(M) -> tuple:
    A = _as_rational_matrix(M)
    size = len(A)
    aug = [row + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(A)]
    R, pivots = _row_reduce(aug)
    if pivots[:size] != list(range(size)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[size:]) for row in R)


def characteristic_polynomial(M) -> list[Fraction]:
    """Coefficients of ``det(xI - M)``, highest degree first (Faddeev-LeVerrier)."""
    A = _as_rational_matrix(M)
    size = len(A)
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * size for _ in range(size)]
    for k in range(1, size + 1):
        # Mk <- A @ Mk + c_{k-1} I
        prod = [[sum(A[i][l] * Mk[l][j] for l in range(size)) for j in range(size)] for i in range(size)]
        for i in range(size):
            prod[i][i] += coeffs[-1]
        Mk = prod
        AM = [[sum(A[i][l] * Mk[l][j] for l in range(size)) for j in range(size)] for i in range(size)]
        coeffs.append(-sum(AM[i][i] for i in range(size)) / k)
    return coeffs


def _poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _deflate(coeffs, r):
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * r)
    return out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for f in range(1, isqrt(n) + 1):
        if n % f == 0:
            small.append(f)
            if f != n // f:
                large.append(n // f)
    return small + large[::-1]


def _integer_roots_of_monic(ints: list[int]) -> list[int]:
    """Integer roots of a monic integer polynomial with nonzero constant term."""
    c0 = ints[-1]
    # Cauchy bound; scan whichever candidate set is smaller
    bound = 1 + max(abs(c) for c in ints[1:])
    if bound < isqrt(abs(c0)) + 1:
        cands = [r for r in range(-bound, bound + 1) if r and c0 % r == 0]
    else:
        cands = [s * f for f in _divisors(c0) for s in (1, -1)]
    roots = []
    for r in cands:
        acc = 0
        for c in ints:
            acc = acc * r + c
        if acc == 0:
            roots.append(r)
    return roots


def _rational_roots(coeffs: list[Fraction]) -> dict[Fraction, int]:
    """Rational roots with algebraic multiplicity."""
    roots: dict[Fraction, int] = {}
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
    while len(coeffs) > 1:
        lead = coeffs[0]
        monic = [c / lead for c in coeffs]
        # substitute x = y / D to get a monic integer polynomial in y
        D = lcm(*(c.denominator for c in monic))
        ints = [int(c * D**i) for i, c in enumerate(monic)]
        found = _integer_roots_of_monic(ints)
        if not found:
            break
        for y in found:
            r = Fraction(y, D)
            while len(coeffs) > 1 and _poly_eval(coeffs, r) == 0:
                coeffs = _deflate(coeffs, r)
                roots[r] = roots.get(r, 0) + 1
    return roots


class DiagStatus(str, Enum):
    DIAGONALIZABLE = "DiagonalizableOverRationals"
    NOT_DIAGONALIZABLE = "NotDiagonalizable"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Eigenvalue:
    value: Fraction
    algebraic: int
    geometric: int


@dataclass(frozen=True)
class DiagVerdict:
    status: DiagStatus
    eigenvalues: tuple[Eigenvalue, ...] = ()
    eigenvectors: tuple = field(default=(), repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "eigenvalues": [
                {"value": format_scalar(e.value), "algebraic": e.algebraic, "geometric": e.geometric}
                for e in self.eigenvalues
            ],
        }


def diagonalizable_over_rationals(M) -> DiagVerdict:
    """Decide diagonalizability when every eigenvalue is rational.

    Irrational eigenvalues without a witnessed defect give ``Unknown``.
    """
    A = _as_rational_matrix(M)
    size = len(A)
    roots = _rational_roots(characteristic_polynomial(A))
    eigs = []
    vectors = []
    defect = False
    for r in sorted(roots):
        shifted = [[a - (r if i == j else 0) for j, a in enumerate(row)] for i, row in enumerate(A)]
        basis = _nullspace(shifted)
        geo = len(basis)
        eigs.append(Eigenvalue(r, roots[r], geo))
        vectors.extend((r, tuple(v)) for v in basis)
        defect = defect or geo < roots[r]
    if defect:
        status = DiagStatus.NOT_DIAGONALIZABLE
    elif sum(roots.values()) == size:
        status = DiagStatus.DIAGONALIZABLE
    else:
        status = DiagStatus.UNKNOWN
    return DiagVerdict(status, tuple(eigs), tuple(vectors) if status is DiagStatus.DIAGONALIZABLE else ())
