"""Evaluation of the max-normalized B-spline basis and spline combinations.

The basis of order ``k`` on a knot sequence consists of ``n`` nonnegative
piecewise polynomials, each supported on ``k`` consecutive knot intervals
and summing to one everywhere on ``[a, b]``.  At any point exactly ``k`` of
them can be nonzero; evaluation returns that dense block plus the index of
its first member.

The triangular recurrence used here never divides by a zero knot
difference: every denominator contains the (nondegenerate) interval of the
evaluation point.  At ``x = b`` the lookup clamps to the last nondegenerate
interval, which amounts to evaluating the left limit, so the final basis
function attains 1 and the partition of unity holds on the closed interval.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .knots import KnotSequence

__all__ = ["BasisBlock", "eval_basis_block", "eval_basis_many", "eval_spline",
           "eval_spline_many", "l1_factors"]


@dataclass(frozen=True)
class BasisBlock:
    """The ``k`` possibly nonzero basis values at one point.

    ``values[j]`` is basis function ``first + j`` evaluated at the point;
    every other basis function vanishes there.
    """

    first: int
    values: np.ndarray


def _blocks_at_spans(K: KnotSequence, x: np.ndarray, spans: np.ndarray) -> np.ndarray:
    """Basis blocks at points whose containing span is already known.

    Returns an ``(m, k)`` array; row ``p`` holds functions
    ``spans[p]-k+1 .. spans[p]`` at ``x[p]``.
    """
    t, k = K.t, K.k
    m = x.shape[0]
    vals = np.zeros((m, k))
    vals[:, 0] = 1.0
    left = np.empty((m, k))
    right = np.empty((m, k))
    for j in range(1, k):
        left[:, j] = x - t[spans + 1 - j]
        right[:, j] = t[spans + j] - x
        saved = np.zeros(m)
        for r in range(j):
            tmp = vals[:, r] / (right[:, r + 1] + left[:, j - r])
            vals[:, r] = saved + right[:, r + 1] * tmp
            saved = left[:, j - r] * tmp
        vals[:, j] = saved
    return vals


def eval_basis_many(K: KnotSequence, x) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized basis blocks: returns ``(first, values)`` with shapes
    ``(m,)`` and ``(m, k)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    spans = K.span_indices(x)
    return spans - (K.k - 1), _blocks_at_spans(K, x, spans)


def eval_basis_block(K: KnotSequence, x: float) -> BasisBlock:
    """The ``k`` basis values whose supports contain the interval of ``x``."""
    first, vals = eval_basis_many(K, [x])
    v = vals[0]
    v.setflags(write=False)
    return BasisBlock(int(first[0]), v)


def eval_spline_many(K: KnotSequence, c, x) -> np.ndarray:
    """Evaluate ``sum_i c[i] N_i`` at an array of points."""
    c = np.asarray(c, dtype=float)
    if c.shape != (K.n,):
        raise LengthMismatch(f"expected {K.n} coefficients, got shape {c.shape}")
    first, vals = eval_basis_many(K, x)
    idx = first[:, None] + np.arange(K.k)[None, :]
    return np.einsum("mj,mj->m", vals, c[idx])


def eval_spline(K: KnotSequence, c, x: float) -> float:
    return float(eval_spline_many(K, c, [x])[0])


def l1_factors(K: KnotSequence) -> tuple[np.ndarray, np.ndarray]:
    """Support lengths and the factors turning each N_i into a unit-mass bump.

    Returns ``(kappa, k / kappa)``: scaling ``N_i`` by ``k / kappa[i]``
    yields the L1-normalized basis function, whose integral is one.
    """
    kappa = K.kappa
    return kappa, K.k / kappa
