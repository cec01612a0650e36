"""Valuation-level verdicts for the functional Welch bounds.

For a configuration of vectors ``tau_j`` and functionals ``f_j`` and an order
``m``, the bound compares

    lhs = max(|sum_l f_l(tau_l)^(2m)|, max_{j != k} |f_j(tau_k) f_k(tau_j)|^m)
    rhs = |sum_j f_j(tau_j)^m|^2 / |C(d+m-1, m)|

and is guaranteed when the Sym^m frame operator is diagonalizable (over a
field where squares cannot cancel, ``NONARCH``) or a scalar multiple of the
identity (``PADIC``). In the unital form (every ``f_j(tau_j) == 1``) the
diagonal term becomes ``|n|`` and the numerator ``|n|^2``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .linalg import (
    DiagStatus,
    FrameConfig,
    NonRationalEntryError,
    diagonalizable_over_rationals,
    gram,
    is_scalar_identity,
)
from .scalar import AbsValue, binomial_valuation, valuation
from .symtensor import sym_dim, sym_frame_operator

__all__ = [
    "BoundReport",
    "IncompatibleVariant",
    "NonUnitalConfig",
    "Variant",
    "Verdict",
    "check_bound",
    "check_unital",
    "demo_configs",
    "demo_suite",
]


class Variant(str, Enum):
    NONARCH = "nonarch"
    PADIC = "padic"


class Verdict(str, Enum):
    HOLDS_STRICT = "HoldsStrict"
    HOLDS_WITH_EQUALITY = "HoldsWithEquality"
    VIOLATED = "Violated"
    INAPPLICABLE = "Inapplicable"


class IncompatibleVariant(ValueError):
    pass


class NonUnitalConfig(ValueError):
    def __init__(self, j: int, value):
        super().__init__(f"f_{j}(tau_{j}) = {value}, expected 1")
        self.j = j


@dataclass(frozen=True)
class Hypothesis:
    satisfied: bool
    detail: dict


@dataclass(frozen=True)
class BoundReport:
    m: int
    variant: Variant
    hypothesis: Hypothesis
    unital: bool
    form: str  # "general" or "unital"
    diag_term: AbsValue
    cross_term: AbsValue
    argmax: tuple[int, int]
    lhs: AbsValue
    rhs: AbsValue
    degenerate: bool
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "variant": self.variant.value,
            "form": self.form,
            "hypothesis": {"satisfied": self.hypothesis.satisfied, "detail": self.hypothesis.detail},
            "unital": self.unital,
            "lhs_terms": {
                "diag_term": self.diag_term.to_json(),
                "cross_term": self.cross_term.to_json(),
                "argmax": list(self.argmax),
            },
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "degenerate": self.degenerate,
            "verdict": self.verdict.value,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def _check_variant(config: FrameConfig, variant: Variant):
    variant = Variant(variant)
    if variant is Variant.NONARCH and not config.backend.is_laurent:
        raise IncompatibleVariant("the nonarch variant needs the Laurent backend")
    if variant is Variant.PADIC and not config.backend.is_padic:
        raise IncompatibleVariant("the padic variant needs a p-adic backend")
    return variant


def _hypothesis(config: FrameConfig, m: int, variant: Variant) -> Hypothesis:
    S = sym_frame_operator(config, m).matrix
    if variant is Variant.PADIC:
        cert = is_scalar_identity(S, m=m)
        if cert is not None:
            return Hypothesis(True, {"tight": cert.to_json()})
        return Hypothesis(False, {"tight": None, "witness": _non_scalar_witness(S)})
    try:
        verdict = diagonalizable_over_rationals(S)
    except NonRationalEntryError as exc:
        return Hypothesis(False, {"diagonalization": {"status": DiagStatus.UNKNOWN.value, "reason": str(exc)}})
    return Hypothesis(verdict.status is DiagStatus.DIAGONALIZABLE, {"diagonalization": verdict.to_json()})


def _non_scalar_witness(S) -> list[int]:
    b = S[0][0]
    for i, row in enumerate(S):
        for j, x in enumerate(row):
            if (i == j and x != b) or (i != j and x):
                return [i, j]
    raise AssertionError("matrix is scalar")


def _abs_binomial(config: FrameConfig, m: int) -> AbsValue:
    D = sym_dim(config.d, m)
    backend = config.backend
    if backend.is_padic:
        n, k = config.d + m - 1, m
        return AbsValue(binomial_valuation(n, k, backend.prime), backend.prime)
    return valuation(backend.coerce(D), backend)


def _evaluate(config: FrameConfig, m: int, variant: Variant, unital: bool, form: str) -> BoundReport:
    if m < 1:
        raise ValueError("m must be positive")
    if config.n < 2:
        raise ValueError("the cross term needs n >= 2")
    backend = config.backend
    G = gram(config)
    n = config.n
    diag = [G[j][j] for j in range(n)]

    if form == "unital":
        diag_term = valuation(backend.coerce(n), backend)
        numerator = diag_term**2
    else:
        diag_term = valuation(sum((x ** (2 * m) for x in diag), backend.zero), backend)
        numerator = valuation(sum((x**m for x in diag), backend.zero), backend) ** 2

    cross_term, argmax = None, (0, 1)
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            c = valuation(G[j][k] * G[k][j], backend) ** m
            if cross_term is None or c > cross_term:
                cross_term, argmax = c, (j, k)

    lhs = max(diag_term, cross_term)
    degenerate = numerator.is_zero
    rhs = numerator / _abs_binomial(config, m)

    hyp = _hypothesis(config, m, variant)
    holds = lhs >= rhs
    if not holds:
        verdict = Verdict.VIOLATED
    elif not hyp.satisfied:
        verdict = Verdict.INAPPLICABLE
    elif lhs == rhs:
        verdict = Verdict.HOLDS_WITH_EQUALITY
    else:
        verdict = Verdict.HOLDS_STRICT
    return BoundReport(m, variant, hyp, unital, form, diag_term, cross_term, argmax, lhs, rhs, degenerate, verdict)


def _is_unital(config: FrameConfig):
    one = config.backend.one
    for j, x in enumerate(config.diagonal()):
        if x != one:
            return j, x
    return None


def check_bound(config: FrameConfig, m: int, variant: Variant | str) -> BoundReport:
    """General form: diagonal term ``|sum f_l(tau_l)^(2m)|``, numerator ``|sum f_j(tau_j)^m|^2``."""
    variant = _check_variant(config, variant)
    return _evaluate(config, m, variant, _is_unital(config) is None, "general")


def check_unital(config: FrameConfig, m: int, variant: Variant | str) -> BoundReport:
    variant = _check_variant(config, variant)
    bad = _is_unital(config)
    if bad is not None:
        raise NonUnitalConfig(*bad)
    return _evaluate(config, m, variant, True, "unital")


def demo_configs() -> dict[str, FrameConfig]:
    """Named configurations used by the demo bundle and the CLI fixtures."""
    from .scalar import Backend
    from fractions import Fraction as F

    tight = dict(
        vectors=[(1, 0), (0, 1), (1, 1)],
        functionals=[(1, F(-1, 2)), (F(-1, 2), 1), (F(1, 2), F(1, 2))],
    )
    std = dict(vectors=[(1, 0), (0, 1)], functionals=[(1, 0), (0, 1)])
    line = dict(vectors=[(1,), (1,)], functionals=[(1,), (1,)])
    return {
        "standard-basis-d2": FrameConfig.build(Backend.padic(3), **std),
        "tight-2-3-p5": FrameConfig.build(Backend.padic(5), **tight),
        "tight-2-3-p2": FrameConfig.build(Backend.padic(2), **tight),
        "standard-basis-d2-p3": FrameConfig.build(Backend.padic(3), **std),
        "line-d1-n2-p3": FrameConfig.build(Backend.padic(3), **line),
        "line-d1-n2-p2": FrameConfig.build(Backend.padic(2), **line),
        "tight-2-3-laurent": FrameConfig.build(Backend.laurent(), **tight),
    }


def demo_suite() -> list[tuple[str, BoundReport]]:
    c = demo_configs()
    return [
        ("standard-basis-equality", check_unital(c["standard-basis-d2"], 1, Variant.PADIC)),
        ("tight-2-3-p5", check_bound(c["tight-2-3-p5"], 1, Variant.PADIC)),
        ("tight-2-3-p2", check_bound(c["tight-2-3-p2"], 1, Variant.PADIC)),
        ("hypothesis-violation-p3-m2", check_bound(c["standard-basis-d2-p3"], 2, Variant.PADIC)),
        ("line-d1-n2-p3", check_bound(c["line-d1-n2-p3"], 1, Variant.PADIC)),
        ("line-d1-n2-p2-unital", check_unital(c["line-d1-n2-p2"], 1, Variant.PADIC)),
        ("tight-2-3-laurent-m2", check_bound(c["tight-2-3-laurent"], 2, Variant.NONARCH)),
    ]
