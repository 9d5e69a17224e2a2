"""Gauss-Legendre rules and a work-list adaptive integrator.

Every piece of an integration job carries a pair of nested Gauss values
(order ``g`` and ``2g``); their difference is the piece's error estimate.
The work list refines the worst piece first: by bisection until a fixed
depth, then by doubling the rule order up to a cap.  Bisection grades
dyadically into endpoint singularities, which keeps the scheme generic (no
singularity-specific rules); the final error estimate is returned so callers
can verify the achieved tolerance a posteriori.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import QuadratureNonConvergence

__all__ = ["gauss_rule", "integrate_adaptive", "Piece", "refine_pieces",
           "MAX_DEPTH", "MAX_ORDER"]

MAX_DEPTH = 40
MAX_ORDER = 1024
_MAX_REFINEMENTS = 20000


@lru_cache(maxsize=None)
def gauss_rule(g: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the g-point Gauss-Legendre rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(g)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_points(lo: float, hi: float, g: int) -> tuple[np.ndarray, np.ndarray]:
    """Rule mapped to [lo, hi]; nodes are strictly interior."""
    x, w = gauss_rule(g)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


class Piece:
    """One subinterval of an integration job.

    ``floor`` is the roundoff level of the piece's quadrature sum; once the
    estimate reaches it, further refinement cannot help and the piece is
    frozen.
    """

    __slots__ = ("lo", "hi", "depth", "order", "payload", "value", "est", "floor")

    def __init__(self, lo, hi, depth=0, order=8, payload=None):
        self.lo = lo
        self.hi = hi
        self.depth = depth
        self.order = order
        self.payload = payload
        self.value = None
        self.est = np.inf
        self.floor = 0.0

    def measure(self, pair_values, magnitude=0.0):
        self.value, self.est = pair_values
        self.floor = 8e-16 * magnitude


def split_at_markers(lo: float, hi: float, markers) -> list[tuple[float, float]]:
    """Split [lo, hi] at the markers strictly inside it."""
    cuts = sorted({float(m) for m in markers if lo < m < hi})
    edges = [lo] + cuts + [hi]
    return [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]


def refine_pieces(pieces, eval_pair, tol, max_depth=MAX_DEPTH, max_order=MAX_ORDER):
    """Drive the work list until the summed error estimate is below ``tol``.

    ``eval_pair(piece)`` must fill ``piece.value`` (any numpy value or
    vector) and ``piece.est`` (a float).  Returns the final piece list and
    total estimate; raises QuadratureNonConvergence when the refinement
    budget is exhausted first.
    """
    for p in pieces:
        eval_pair(p)
    live = list(pieces)
    frozen: list[Piece] = []
    frozen_est = 0.0
    live_est = sum(p.est for p in live)
    refinements = 0
    while live_est + frozen_est > tol:
        if not live or frozen_est > tol or refinements >= _MAX_REFINEMENTS:
            raise QuadratureNonConvergence(
                f"estimate {live_est + frozen_est:.3g} above tolerance "
                f"{tol:.3g} after {refinements} refinements"
            )
        worst = max(range(len(live)), key=lambda i: live[i].est)
        p = live.pop(worst)
        live_est -= p.est
        refinements += 1
        if p.est <= p.floor:
            frozen.append(p)
            frozen_est += p.est
        elif p.depth < max_depth:
            mid = 0.5 * (p.lo + p.hi)
            if mid <= p.lo or mid >= p.hi:
                p.depth = max_depth  # interval at floating-point resolution
                live.append(p)
                live_est += p.est
                continue
            kids = [
                Piece(p.lo, mid, p.depth + 1, p.order, p.payload),
                Piece(mid, p.hi, p.depth + 1, p.order, p.payload),
            ]
            for q in kids:
                eval_pair(q)
                live_est += q.est
            live.extend(kids)
        elif 2 * p.order <= max_order:
            p.order *= 2
            eval_pair(p)
            live_est += p.est
            live.append(p)
        else:
            frozen.append(p)
            frozen_est += p.est
    return live + frozen, live_est + frozen_est


def integrate_adaptive(fn, lo: float, hi: float, markers=(), tol=1e-12,
                       base_order=8, max_depth=MAX_DEPTH, max_order=MAX_ORDER):
    """Adaptive integral of a vectorized scalar function over [lo, hi].

    ``markers`` are points (jumps, kinks, integrable singularities) at which
    the initial pieces are cut.  Returns ``(value, error_estimate)``.
    """
    if hi <= lo:
        return 0.0, 0.0

    def eval_pair(p: Piece):
        x1, w1 = gauss_points(p.lo, p.hi, p.order)
        x2, w2 = gauss_points(p.lo, p.hi, 2 * p.order)
        f2 = np.asarray(fn(x2), dtype=float)
        v1 = float(w1 @ np.asarray(fn(x1), dtype=float))
        v2 = float(w2 @ f2)
        p.measure((v2, abs(v2 - v1)), magnitude=float(w2 @ np.abs(f2)))

    pieces = [Piece(a, b, order=base_order)
              for a, b in split_at_markers(lo, hi, markers) if b > a]
    done, est = refine_pieces(pieces, eval_pair, tol, max_depth, max_order)
    return float(sum(p.value for p in done)), float(est)
