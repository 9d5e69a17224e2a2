"""B-spline Gram matrices: assembly, banded solves, and full inversion.

The Gram matrix ``g[i, j] = <N_i, N_j>`` is symmetric positive definite
with bandwidth ``k - 1``.  On every nondegenerate knot interval the
integrand ``N_i * N_j`` is a polynomial of degree at most ``2k - 2``, so a
k-point Gauss rule per interval assembles each entry exactly up to
roundoff.  Storage is the LAPACK upper symmetric-banded layout, which feeds
straight into the banded Cholesky solver.

Full inversion is performed as ``n`` banded solves against identity
columns.  The inverse is dense by nature, its entries merely decay away
from the diagonal; symmetry of the result is a theorem, so an asymmetry
beyond tolerance aborts instead of being averaged away silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .bspline import _blocks_at_spans
from .errors import LengthMismatch, NotPositiveDefinite, SymmetryViolation
from .knots import KnotSequence
from .quadrature import gauss_rule

__all__ = ["GramMatrix", "InverseGram", "assemble_gram", "scaled_gram",
           "solve_banded", "invert_gram"]

# Relative asymmetry of a computed inverse above which we refuse to average.
ASYMMETRY_LIMIT = 1e-8


@dataclass(eq=False)
class GramMatrix:
    """Symmetric banded matrix in LAPACK upper form.

    ``bands[k-1-d, j]`` holds the entry ``(j - d, j)`` for offsets
    ``d = 0 .. k-1``; row ``k-1`` is the main diagonal.
    """

    order: int
    bands: np.ndarray
    _factor: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.bands.shape[1]

    def entry(self, i: int, j: int) -> float:
        lo, hi = min(i, j), max(i, j)
        d = hi - lo
        if d >= self.order:
            return 0.0
        return float(self.bands[self.order - 1 - d, hi])

    def to_dense(self) -> np.ndarray:
        n, k = self.n, self.order
        dense = np.zeros((n, n))
        for d in range(k):
            diag = self.bands[k - 1 - d, d:]
            idx = np.arange(n - d)
            dense[idx, idx + d] = diag
            dense[idx + d, idx] = diag
        return dense

    def matvec(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        n, k = self.n, self.order
        out = self.bands[k - 1] * c
        for d in range(1, k):
            diag = self.bands[k - 1 - d, d:]
            out[: n - d] += diag * c[d:]
            out[d:] += diag * c[: n - d]
        return out

    def row_sums(self) -> np.ndarray:
        return self.matvec(np.ones(self.n))

    def factor(self) -> np.ndarray:
        """Banded Cholesky factor, computed once and cached."""
        if self._factor is None:
            try:
                self._factor = cholesky_banded(self.bands, lower=False)
            except np.linalg.LinAlgError as exc:
                raise NotPositiveDefinite(
                    f"banded Cholesky broke down: {exc}"
                ) from exc
        return self._factor


@dataclass(frozen=True, eq=False)
class InverseGram:
    """Dense inverse of a Gram matrix with its quality certificates.

    ``residual`` is ``max |(G0 A - I)_ij|`` after any refinement;
    ``asymmetry`` is the pre-averaging relative asymmetry of the computed
    inverse.  Rows of ``entries`` are the coefficient vectors of the basis
    dual to the B-splines.
    """

    entries: np.ndarray
    residual: float
    asymmetry: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def assemble_gram(K: KnotSequence) -> GramMatrix:
    """Assemble ``<N_i, N_j>`` by exact per-interval Gauss quadrature."""
    k, n = K.k, K.n
    spans = K.spans
    t = K.t
    half = 0.5 * (t[spans + 1] - t[spans])
    nodes, weights = gauss_rule(k)
    # points[s, g]: g-th node on span s; blocks[s, g, :]: local basis values
    pts = t[spans][:, None] + half[:, None] * (nodes[None, :] + 1.0)
    flat_spans = np.repeat(spans, k)
    blocks = _blocks_at_spans(K, pts.ravel(), flat_spans).reshape(len(spans), k, k)
    w = weights[None, :] * half[:, None]
    local = np.einsum("sg,sgp,sgq->spq", w, blocks, blocks)
    bands = np.zeros((k, n))
    firsts = spans - (k - 1)
    for s in range(len(spans)):
        f = firsts[s]
        for p in range(k):
            for q in range(p, k):
                bands[k - 1 - (q - p), f + q] += local[s, p, q]
    return GramMatrix(k, bands)


def scaled_gram(G0: GramMatrix, K: KnotSequence) -> np.ndarray:
    """Row-rescaled Gram matrix ``<M_i, N_j>`` with unit row sums, dense.

    Row ``i`` of the plain Gram matrix divided by ``kappa_i / k``; the
    result is banded but no longer symmetric.
    """
    if G0.n != K.n:
        raise LengthMismatch(f"Gram dimension {G0.n} != spline dimension {K.n}")
    return G0.to_dense() * (K.k / K.kappa)[:, None]


def solve_banded(G0: GramMatrix, rhs) -> np.ndarray:
    """Solve ``G0 c = rhs`` by banded Cholesky, with one refinement sweep.

    Work is O(n k^2) per right-hand side.  Raises NotPositiveDefinite on
    factorization breakdown, which for an assembled Gram matrix signals an
    assembly bug rather than an input problem.
    """
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != G0.n:
        raise LengthMismatch(f"rhs length {rhs.shape[0]} != dimension {G0.n}")
    fac = G0.factor()
    c = cho_solve_banded((fac, False), rhs)
    scale = np.abs(rhs).max() if rhs.size else 0.0
    if scale > 0:
        resid = rhs - (G0.matvec(c) if rhs.ndim == 1 else _matmat(G0, c))
        if np.abs(resid).max() > 1e-10 * scale:
            c = c + cho_solve_banded((fac, False), resid)
    return c


def _matmat(G0: GramMatrix, X: np.ndarray) -> np.ndarray:
    out = np.empty_like(X)
    for j in range(X.shape[1]):
        out[:, j] = G0.matvec(X[:, j])
    return out


def invert_gram(G0: GramMatrix) -> InverseGram:
    """Dense inverse via n banded solves, symmetrized and certified.

    The computed inverse is averaged with its transpose only when the
    relative asymmetry is below 1e-8; a larger asymmetry means something is
    broken (the exact inverse is symmetric) and raises SymmetryViolation.
    Iterative refinement is applied until the residual ``max |G0 A - I|``
    drops below 1e-9 or stops improving.
    """
    n = G0.n
    fac = G0.factor()
    A = cho_solve_banded((fac, False), np.eye(n))
    scale = np.abs(A).max()
    asym = np.abs(A - A.T).max() / scale if scale > 0 else 0.0
    if asym > ASYMMETRY_LIMIT:
        raise SymmetryViolation(
            f"inverse asymmetry {asym:.3e} exceeds {ASYMMETRY_LIMIT:.0e}; "
            "the Gram matrix or its solve is broken"
        )
    A = 0.5 * (A + A.T)
    for _ in range(3):
        R = np.eye(n) - _matmat(G0, A)
        residual = np.abs(R).max()
        if residual <= 1e-9:
            break
        A2 = A + cho_solve_banded((fac, False), R)
        A = 0.5 * (A2 + A2.T)
    else:
        residual = np.abs(np.eye(n) - _matmat(G0, A)).max()
    return InverseGram(A, float(residual), float(asym))
