"""Symmetric tensor powers in the monomial basis.

Basis vectors of Sym^m(K^d) are exponent vectors ``alpha`` with ``sum(alpha) == m``,
ordered lexicographically descending. Vectors lift to plain monomials
``tau^alpha``; functionals lift with multinomial weights, so the lifted pairing
is ``f(tau) ** m`` without any division.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod

from .linalg import FrameConfig, pair

MAX_SYM_DIM = 10_000


class ResourceLimitError(RuntimeError):
    pass


def sym_dim(d: int, m: int) -> int:
    if d < 1 or m < 1:
        raise ValueError("d and m must be positive")
    return comb(d + m - 1, m)


@lru_cache(maxsize=None)
def sym_indices(d: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree m in d variables, lexicographically descending."""
    if d == 1:
        return ((m,),)
    out = []
    for first in range(m, -1, -1):
        out.extend((first,) + rest for rest in sym_indices(d - 1, m - first))
    return tuple(out)


@lru_cache(maxsize=None)
def multinomial(alpha: tuple[int, ...]) -> int:
    return factorial(sum(alpha)) // prod(factorial(a) for a in alpha)


def _monomial(v, alpha):
    out = None
    for x, a in zip(v, alpha):
        if a:
            term = x**a
            out = term if out is None else out * term
    return out


def lift_vector(tau, m: int) -> tuple:
    return tuple(_monomial(tau, alpha) for alpha in sym_indices(len(tau), m))


def lift_functional(u, m: int) -> tuple:
    return tuple(multinomial(alpha) * _monomial(u, alpha) for alpha in sym_indices(len(u), m))


@dataclass(frozen=True)
class SymOperator:
    m: int
    dim: int
    matrix: tuple


def sym_frame_operator(config: FrameConfig, m: int) -> SymOperator:
    """Matrix of ``x -> sum_j f_j^{(m)}(x) tau_j^{(m)}`` on Sym^m."""
    D = sym_dim(config.d, m)
    if D > MAX_SYM_DIM:
        raise ResourceLimitError(f"Sym^{m} of dimension {D} exceeds the limit {MAX_SYM_DIM}")
    zero = config.backend.zero
    M = [[zero] * D for _ in range(D)]
    for t, u in zip(config.vectors, config.functionals):
        lt = lift_vector(t, m)
        lu = lift_functional(u, m)
        for a in range(D):
            if not lt[a]:
                continue
            row = M[a]
            for b in range(D):
                if lu[b]:
                    row[b] = row[b] + lt[a] * lu[b]
    return SymOperator(m, D, tuple(tuple(row) for row in M))


def lifted_pairing(u, tau, m: int):
    return pair(lift_functional(u, m), lift_vector(tau, m))
