"""Elliptic curves over F_p by j-invariant: representative Weierstrass
models, Frobenius traces by exact character sums, and the multi-trace
behaviour of j = 0 and j = 1728.

Traces are always reported up to sign (cordilleras are keyed by |t|), so
twist selection never matters.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arith

__all__ = [
    "TraceSet",
    "curve_from_j",
    "trace_abs",
    "traces_for_j",
    "trace_table",
    "supersingular_set",
]

_BLOCK = 64


def curve_from_j(j: int, p: int) -> tuple[int, int]:
    """A short Weierstrass model y^2 = x^3 + ax + b with j-invariant j."""
    if p < 5:
        raise ValueError("p must be at least 5")
    j %= p
    if j == 0:
        return 0, 1
    if j == 1728 % p:
        return 1, 0
    k = j * pow((1728 - j) % p, -1, p) % p
    return 3 * k % p, 2 * k % p


@dataclass(frozen=True)
class TraceSet:
    """Positive Frobenius traces attached to a j-invariant.

    Regular j-invariants carry one trace; j = 0 (resp. 1728) carries the
    up-to-three (resp. two) positive traces allowed by its norm equation.
    An empty trace set means the vertex is supersingular.
    """

    j: int
    traces: tuple[int, ...]

    @property
    def supersingular(self) -> bool:
        return not self.traces


@lru_cache(maxsize=8)
def _field_tables(p: int) -> tuple[np.ndarray, np.ndarray]:
    """(x^3 table, quadratic character table) for F_p."""
    xs = np.arange(p, dtype=np.int64)
    x3 = xs * xs % p * xs % p
    chi = np.full(p, -1, dtype=np.int64)
    chi[xs * xs % p] = 1
    chi[0] = 0
    return x3, chi


def trace_abs(j: int, p: int) -> int:
    """|p + 1 - #E_j(F_p)| for the representative curve, by character sum.

    Zero means supersingular.  Costs O(p); use trace_table for bulk work.
    """
    a, b = curve_from_j(j, p)
    x3, chi = _field_tables(p)
    xs = np.arange(p, dtype=np.int64)
    vals = (x3 + a * xs + b) % p
    return abs(int(chi[vals].sum()))


@lru_cache(maxsize=4)
def trace_table(p: int) -> tuple[int, ...]:
    """|trace| of the representative curve for every j in F_p."""
    if p < 5 or not arith.is_prime(p):
        raise ValueError("p must be a prime >= 5")
    x3, chi = _field_tables(p)
    xs = np.arange(p, dtype=np.int64)
    out = [0] * p

    js = np.arange(p, dtype=np.int64)
    k = js * _mod_inverse_vector((1728 - js) % p, p) % p
    a_all = 3 * k % p
    b_all = 2 * k % p

    for start in range(0, p, _BLOCK):
        stop = min(start + _BLOCK, p)
        av = a_all[start:stop, None]
        bv = b_all[start:stop, None]
        vals = (x3[None, :] + av * xs[None, :] + bv) % p
        sums = chi[vals].sum(axis=1)
        for i, s in enumerate(sums.tolist()):
            out[start + i] = abs(int(s))

    a0, b0 = curve_from_j(0, p)
    vals = (x3 + a0 * xs + b0) % p
    out[0] = abs(int(chi[vals].sum()))
    j1728 = 1728 % p
    a1, b1 = curve_from_j(j1728, p)
    vals = (x3 + a1 * xs + b1) % p
    out[j1728] = abs(int(chi[vals].sum()))
    return tuple(out)


def _mod_inverse_vector(vals: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse mod p (zero maps to zero)."""
    out = np.empty_like(vals)
    for i, v in enumerate(vals.tolist()):
        out[i] = pow(v, p - 2, p) if v else 0
    return out


def _norm_equation_traces(p: int, c: int) -> tuple[int, ...]:
    """All t > 0 with 4p = t^2 + c v^2 for some v > 0 (c = 3 or 4)."""
    traces = set()
    vmax = math.isqrt(4 * p // c)
    for v in range(1, vmax + 1):
        rest = 4 * p - c * v * v
        if rest <= 0:
            break
        t = math.isqrt(rest)
        if t * t == rest and t > 0:
            traces.add(t)
    return tuple(sorted(traces))


def traces_for_j(j: int, p: int) -> TraceSet:
    """Full positive-trace set of j, via norm equations at 0 and 1728."""
    j %= p
    if j == 0:
        if p % 3 == 2:
            return TraceSet(j, ())
        traces = _norm_equation_traces(p, 3)
        assert len(traces) == 3, f"norm equation 4p=t^2+3v^2 gave {traces}"
        return TraceSet(j, traces)
    if j == 1728 % p:
        if p % 4 == 3:
            return TraceSet(j, ())
        traces = _norm_equation_traces(p, 4)
        assert len(traces) == 2, f"norm equation 4p=t^2+4v^2 gave {traces}"
        return TraceSet(j, traces)
    t = trace_abs(j, p)
    return TraceSet(j, (t,) if t else ())


def supersingular_set(p: int) -> tuple[int, ...]:
    """All supersingular j-invariants in F_p, ascending."""
    table = trace_table(p)
    return tuple(j for j, t in enumerate(table) if t == 0)
