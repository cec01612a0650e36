"""Finite lattice searches over p-adic configurations.

Entries are drawn from a finite alphabet, by default the lattice
``p**(-scale) * {0, 1, ..., p**k - 1}``. Results are statements about that
lattice only.

Every search reduces to the same engine. Admissible ``(tau, f)`` pairs
(``f(tau) == a`` and, when requested, unit sup norms) are listed once in a
fixed order; configurations are multisets of pairs built by depth-first
extension, so each configuration is visited once up to reordering. A partial
configuration failing a pairwise constraint is never extended. The top-level
branch range can be split across workers; a reducer merges worker results
in branch order, which reproduces the sequential scan exactly.
"""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .linalg import FrameConfig, frame_operator, gram, is_scalar_identity, pair, sup_norm
from .scalar import AbsValue, Backend, format_scalar, parse_rational, valuation
from .symtensor import sym_dim, sym_frame_operator

__all__ = [
    "SearchResult",
    "SearchSpace",
    "Status",
    "enumerate_lattice",
    "search_equality",
    "search_equiangular",
    "search_zauner",
    "verify_witness",
]

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class SearchSpace:
    prime: int
    d: int
    n: int
    k: int = 1
    a: Fraction = Fraction(1)
    unit_norms: bool = True
    tight: bool = False
    gamma: int | None = None  # valuation of the common cross product
    scale: int = 0
    signed: bool = False
    values: tuple[Fraction, ...] | None = None
    distinct: bool = False  # forbid reusing the same (tau, f) pair

    def __post_init__(self):
        Backend.padic(self.prime)  # validates the prime
        if self.d < 1 or self.n < 1 or self.k < 1:
            raise ValueError("d, n and k must be positive")
        if not 0 <= self.scale <= self.k:
            raise ValueError("scale must lie in [0, k]")
        object.__setattr__(self, "a", Fraction(self.a))
        if self.values is not None:
            vals = tuple(sorted({Fraction(v) for v in self.values}))
            if not vals:
                raise ValueError("empty alphabet")
            object.__setattr__(self, "values", vals)

    @property
    def backend(self) -> Backend:
        return Backend.padic(self.prime)

    def alphabet(self) -> tuple[Fraction, ...]:
        if self.values is not None:
            return self.values
        top = self.prime**self.k
        digits = range(-(top - 1), top) if self.signed else range(top)
        unit = Fraction(1, self.prime**self.scale)
        return tuple(x * unit for x in digits)

    def candidate_count(self) -> int:
        return len(self.alphabet()) ** (2 * self.d * self.n)

    def to_json(self) -> dict:
        out = {
            "prime": self.prime,
            "d": self.d,
            "n": self.n,
            "k": self.k,
            "a": format_scalar(self.a),
            "unit_norms": self.unit_norms,
            "tight": self.tight,
            "gamma": self.gamma,
            "scale": self.scale,
            "signed": self.signed,
            "distinct": self.distinct,
        }
        if self.values is not None:
            out["values"] = [format_scalar(v) for v in self.values]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SearchSpace":
        obj = dict(obj)
        obj["a"] = parse_rational(obj.get("a", "1"))
        if obj.get("values") is not None:
            obj["values"] = tuple(parse_rational(v) for v in obj["values"])
        return cls(**obj)


def enumerate_lattice(space: SearchSpace, offset: int = 0) -> Iterator[FrameConfig]:
    """Every configuration of the space, lexicographic in the flattened entries.

    Entries are ordered as all vector coordinates, then all functional
    coordinates. Starting at ``offset`` yields the suffix of the full stream.
    """
    alpha = space.alphabet()
    base = len(alpha)
    width = 2 * space.d * space.n
    total = base**width
    if not 0 <= offset <= total:
        raise ValueError(f"offset {offset} outside [0, {total}]")
    backend = space.backend
    d, n = space.d, space.n
    digits = []
    rest = offset
    for _ in range(width):
        rest, r = divmod(rest, base)
        digits.append(r)
    digits.reverse()
    for _ in range(offset, total):
        flat = [alpha[i] for i in digits]
        half = d * n
        vectors = tuple(tuple(flat[j * d:(j + 1) * d]) for j in range(n))
        functionals = tuple(tuple(flat[half + j * d:half + (j + 1) * d]) for j in range(n))
        yield FrameConfig(backend, d, n, vectors, functionals)
        for pos in range(width - 1, -1, -1):
            digits[pos] += 1
            if digits[pos] < base:
                break
            digits[pos] = 0


class Status(str, Enum):
    FOUND = "Found"
    EXHAUSTED = "ExhaustedNotFound"
    BUDGET = "Budget"


@dataclass(frozen=True)
class SearchResult:
    kind: str
    status: Status
    space: SearchSpace
    explored: int
    candidates: int
    config: FrameConfig | None = None
    certificates: dict = field(default_factory=dict)
    seed: int | None = None
    best_n: int | None = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "status": self.status.value,
            "space": self.space.to_json(),
            "explored": self.explored,
            "candidates": self.candidates,
            "config": None if self.config is None else self.config.to_json(),
            "certificates": self.certificates,
            "seed": self.seed,
        }
        if self.best_n is not None:
            out["best_n"] = self.best_n
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


# Search engine


def _admissible_pairs(space: SearchSpace, seed: int | None) -> list[tuple[tuple, tuple]]:
    backend = space.backend
    vecs = list(itertools.product(space.alphabet(), repeat=space.d))
    if space.unit_norms:
        vecs = [v for v in vecs if sup_norm(v, backend).valuation == 0]
    pairs = [(t, u) for t in vecs for u in vecs if pair(u, t) == space.a]
    if seed is not None:
        random.Random(seed).shuffle(pairs)
    return pairs


class _Stop(Exception):
    pass


@dataclass
class _Run:
    explored: int = 0
    best: tuple[int, ...] = ()
    found: bool = False
    budget_hit: bool = False


def _cross_table(pairs, backend) -> list[list[int | float]]:
    # valuation of f_i(tau_j) * f_j(tau_i)
    G = [[pair(u, t) for t, _ in pairs] for _, u in pairs]
    return [[valuation(G[i][j] * G[j][i], backend).valuation for j in range(len(pairs))] for i in range(len(pairs))]


def _dfs(pairs, cross, goal, branch_range, pairwise_ok, leaf_ok, budget, distinct=False) -> _Run:
    run = _Run()

    def extend(chosen: list[int], start: int, stop: int, state):
        for i in range(start, stop):
            run.explored += 1
            if run.explored > budget:
                run.budget_hit = True
                raise _Stop
            new_state = state
            ok = True
            for c in chosen:
                ok, new_state = pairwise_ok(cross[c][i], new_state)
                if not ok:
                    break
            if not ok:
                continue
            nxt = chosen + [i]
            if len(nxt) == goal:
                if leaf_ok(nxt):
                    run.best = tuple(nxt)
                    run.found = True
                    raise _Stop
                continue
            if len(nxt) > len(run.best) and leaf_ok(nxt):
                run.best = tuple(nxt)
            extend(nxt, i + 1 if distinct else i, len(pairs), new_state)

    lo, hi = branch_range
    try:
        extend([], lo, hi, None)
    except _Stop:
        pass
    return run


def _reduce(runs: list[_Run], budget: int):
    """Merge worker runs in branch order, stopping where a sequential scan would."""
    explored = 0
    best: tuple[int, ...] = ()
    for run in runs:
        explored += run.explored
        if len(run.best) > len(best):
            best = run.best
        if run.budget_hit or explored > budget:
            return best, explored, False, True
        if run.found:
            return best, explored, True, False
    return best, explored, False, False


def _split(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total or 1))
    step, extra = divmod(total, workers)
    out, lo = [], 0
    for w in range(workers):
        hi = lo + step + (1 if w < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


# Per-kind constraint builders. Each returns (goal, pairwise_ok, leaf_ok) for
# a list of admissible pairs; they must be module-level so workers can rebuild them.


def _exact(target):
    def check(v, state):
        return v == target, state

    return check


def _common(gamma):
    def check(v, state):
        if v == float("inf"):
            return False, state
        want = gamma if gamma is not None else state
        if want is None:
            return True, v
        return v == want, state

    return check


def _tight_leaf(pairs, backend, m, extra=None):
    def leaf(chosen):
        cfg = _config(pairs, chosen, backend)
        S = sym_frame_operator(cfg, m).matrix if m > 1 else frame_operator(cfg)
        if is_scalar_identity(S) is None:
            return False
        return extra is None or extra(chosen)

    return leaf


def _config(pairs, chosen, backend) -> FrameConfig:
    return FrameConfig.build(backend, [pairs[i][0] for i in chosen], [pairs[i][1] for i in chosen])


def _plan(kind: str, space: SearchSpace, m: int, pairs, cross):
    backend = space.backend
    p = space.prime
    if kind == "equality":
        target = 2 * _v(space.n, p) - _vbinom(space.d, m, p)
        # every cross term is bounded by the target; equality is checked at the leaf
        pairwise = _cross_power_at_most(target, m)

        def attained(chosen):
            worst = min(
                (cross[a][b] * m for x, a in enumerate(chosen) for b in chosen[x + 1:]),
                default=float("inf"),
            )
            return min(_v(space.n, p), worst) == target

        return space.n, pairwise, _tight_leaf(pairs, backend, m, attained)
    if kind == "zauner":
        return space.n, _exact(_v(space.d, p)), _tight_leaf(pairs, backend, 1)
    if kind == "equiangular":
        return space.n, _common(space.gamma), (lambda chosen: True)
    raise ValueError(f"unknown search kind {kind!r}")


def _cross_power_at_most(target, m):
    def check(v, state):
        return v * m >= target, state

    return check


def _v(x: int, p: int) -> int:
    return valuation(Fraction(x), Backend.padic(p)).valuation


def _vbinom(d: int, m: int, p: int) -> int:
    return _v(sym_dim(d, m), p)


def _worker(args) -> _Run:
    kind, space, m, seed, branch, budget = args
    pairs = _admissible_pairs(space, seed)
    cross = _cross_table(pairs, space.backend)
    goal, pairwise, leaf = _plan(kind, space, m, pairs, cross)
    return _dfs(pairs, cross, goal, branch, pairwise, leaf, budget, space.distinct)


def _run(kind, space, m, seed, budget, workers):
    pairs = _admissible_pairs(space, seed)
    if workers <= 1:
        runs = [_worker((kind, space, m, seed, (0, len(pairs)), budget))]
    else:
        jobs = [(kind, space, m, seed, rng, budget) for rng in _split(len(pairs), workers)]
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            runs = list(pool.map(_worker, jobs))
    best, explored, found, over = _reduce(runs, budget)
    return pairs, best, explored, found, over


def _certificates(cfg: FrameConfig) -> dict:
    backend = cfg.backend
    G = gram(cfg)
    cert = is_scalar_identity(frame_operator(cfg))
    return {
        "b": None if cert is None else format_scalar(cert.b),
        "gram_valuations": [[valuation(x, backend).to_json() for x in row] for row in G],
    }


def _finish(kind, space, m, seed, budget, workers, best_n=False) -> SearchResult:
    pairs, best, explored, found, over = _run(kind, space, m, seed, budget, workers)
    cfg = _config(pairs, best, space.backend) if best else None
    if over:
        status = Status.BUDGET
    elif found or (best_n and best):
        status = Status.FOUND
    else:
        status = Status.EXHAUSTED
    if not best_n and not found:
        cfg = None
    return SearchResult(
        kind,
        status,
        space,
        min(explored, budget),
        space.candidate_count(),
        cfg,
        _certificates(cfg) if cfg is not None else {},
        seed,
        len(best) if best_n else None,
    )


def search_equality(
    space: SearchSpace, m: int = 1, *, seed: int | None = None, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> SearchResult:
    """First configuration attaining the unital bound with equality.

    Conditions: ``f_j(tau_j) = a``, tight Sym^m frame operator, unit norms and
    ``max(|n|, max_{j!=k} |f_j(tau_k) f_k(tau_j)|^m) == |n|^2 / |C(d+m-1, m)|``.
    """
    if not space.tight:
        space = replace(space, tight=True)
    return _finish("equality", space, m, seed, budget, workers)


def search_zauner(
    p: int, d: int, k: int = 1, *, seed: int | None = None, budget: int = DEFAULT_BUDGET, workers: int = 1, **lattice
) -> SearchResult:
    """d^2 unital pairs, tight, unit norms, every cross product of absolute value |d|."""
    space = SearchSpace(p, d, d * d, k, Fraction(1), True, True, None, **lattice)
    return _finish("zauner", space, 1, seed, budget, workers)


def search_equiangular(
    p: int,
    d: int,
    a=1,
    gamma: int | None = None,
    n_max: int = 3,
    k: int = 1,
    *,
    seed: int | None = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    **lattice,
) -> SearchResult:
    """Largest ``n <= n_max`` with ``f_j(tau_j) = a``, unit norms and all cross
    products of valuation ``gamma`` (any common finite valuation if ``None``)."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    space = SearchSpace(p, d, n_max, k, Fraction(a), True, False, gamma, **lattice)
    return _finish("equiangular", space, 1, seed, budget, workers, best_n=True)


def verify_witness(kind: str, space: SearchSpace, config: FrameConfig, m: int = 1) -> dict[str, bool]:
    """Recompute every constraint of ``kind`` for ``config`` from scratch."""
    backend = space.backend
    p = space.prime
    n = config.n
    G = gram(config)
    alphabet = set(space.alphabet())
    checks = {
        "lattice": all(x in alphabet for row in config.vectors + config.functionals for x in row),
        "diagonal": all(G[j][j] == space.a for j in range(n)),
        "unit_norms": all(
            sup_norm(v, backend).valuation == 0 for v in config.vectors + config.functionals
        ),
    }
    if space.distinct:
        pairs = list(zip(config.vectors, config.functionals))
        checks["distinct"] = len(set(pairs)) == len(pairs)
    crosses = [valuation(G[j][k] * G[k][j], backend) for j in range(n) for k in range(n) if j != k]
    if kind == "equality":
        S = sym_frame_operator(config, m).matrix
        checks["tight"] = is_scalar_identity(S) is not None
        lhs = max([valuation(Fraction(n), backend)] + [c**m for c in crosses])
        rhs = valuation(Fraction(n), backend) ** 2 / valuation(Fraction(sym_dim(config.d, m)), backend)
        checks["equality"] = lhs == rhs
        checks["size"] = n == space.n
    elif kind == "zauner":
        checks["tight"] = is_scalar_identity(frame_operator(config)) is not None
        target = valuation(Fraction(config.d), backend)
        checks["cross"] = all(c == target for c in crosses)
        checks["size"] = n == config.d**2
    elif kind == "equiangular":
        if space.gamma is None:
            checks["cross"] = len({c.valuation for c in crosses}) <= 1 and all(not c.is_zero for c in crosses)
        else:
            checks["cross"] = all(c == AbsValue(space.gamma, p) for c in crosses)
    else:
        raise ValueError(f"unknown search kind {kind!r}")
    return checks
