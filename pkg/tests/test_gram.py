import numpy as np
import pytest

from splineproj import (
    GramMatrix,
    NotPositiveDefinite,
    PartitionSpec,
    assemble_gram,
    eval_basis_many,
    generate_partition,
    invert_gram,
    make_knot_sequence,
    scaled_gram,
    solve_banded,
)
from splineproj.gram import SymmetryViolation


def reference_gram(K, subdivisions=50, g=10):
    """Composite Gauss reference: independent of the assembly path."""
    n = K.n
    dense = np.zeros((n, n))
    nodes, weights = np.polynomial.legendre.leggauss(g)
    for s in K.spans:
        lo, hi = K.t[s], K.t[s + 1]
        edges = np.linspace(lo, hi, subdivisions + 1)
        for e0, e1 in zip(edges[:-1], edges[1:]):
            half = 0.5 * (e1 - e0)
            xs = e0 + half * (nodes + 1.0)
            first, vals = eval_basis_many(K, xs)
            for p in range(xs.size):
                f = first[p]
                blk = vals[p]
                dense[f:f + K.k, f:f + K.k] += (half * weights[p]) * np.outer(blk, blk)
    return dense


def small_cases():
    return [
        generate_partition(PartitionSpec("uniform", 6), 1),
        generate_partition(PartitionSpec("uniform", 8), 2),
        generate_partition(PartitionSpec("geometric", 6, ratio=3.0), 3),
        generate_partition(PartitionSpec("random", 7, seed=1), 4),
        generate_partition(PartitionSpec("random", 5, seed=2,
                                         interior_multiplicity=2), 3),
    ]


def test_order_one_diagonal():
    K = make_knot_sequence([0, 0.5, 1], [1], 1)
    G = assemble_gram(K)
    assert np.allclose(G.to_dense(), np.diag([0.5, 0.5]), atol=1e-15)


def test_hat_gram_closed_form():
    K = make_knot_sequence([0, 1], [], 2)
    G = assemble_gram(K)
    expect = np.array([[1 / 3, 1 / 6], [1 / 6, 1 / 3]])
    assert np.abs(G.to_dense() - expect).max() <= 1e-14


def test_uniform_hat_interior_rows():
    K = generate_partition(PartitionSpec("uniform", 10), 2)
    h = 0.1
    G = assemble_gram(K)
    for i in range(2, K.n - 2):
        assert G.entry(i, i) == pytest.approx(2 * h / 3, abs=1e-14)
        assert G.entry(i, i + 1) == pytest.approx(h / 6, abs=1e-14)


def test_assembly_matches_composite_reference():
    for K in small_cases():
        G = assemble_gram(K)
        ref = reference_gram(K)
        assert np.abs(G.to_dense() - ref).max() <= 1e-12


def test_band_structure_and_positivity():
    for K in small_cases():
        G = assemble_gram(K)
        dense = G.to_dense()
        assert np.array_equal(dense, dense.T)
        n, k = K.n, K.k
        for i in range(n):
            assert dense[i, i] > 0
            for j in range(n):
                if abs(i - j) >= k:
                    assert dense[i, j] == 0.0
        G.factor()  # positive definite: factorization succeeds


def test_scaled_gram_row_sums():
    for K in small_cases():
        G = scaled_gram(assemble_gram(K), K)
        assert np.abs(G.sum(axis=1) - 1.0).max() <= 1e-13


def test_scaled_gram_order_one_identity():
    K = make_knot_sequence([0, 0.25, 1], [1], 1)
    G = scaled_gram(assemble_gram(K), K)
    assert np.allclose(G, np.eye(2), atol=1e-15)


def test_scaled_gram_hat_example():
    K = make_knot_sequence([0, 1], [], 2)
    G = scaled_gram(assemble_gram(K), K)
    assert np.allclose(G, [[2 / 3, 1 / 3], [1 / 3, 2 / 3]], atol=1e-14)


def test_solve_consistency():
    K = generate_partition(PartitionSpec("random", 20, seed=4), 3)
    G = assemble_gram(K)
    e1 = np.zeros(K.n)
    e1[0] = 1.0
    rhs = G.matvec(e1)
    assert np.abs(solve_banded(G, rhs) - e1).max() <= 1e-10
    # row sums solve to the all-ones vector
    ones = solve_banded(G, G.row_sums())
    assert np.abs(ones - 1.0).max() <= 1e-10


def test_solve_hat_first_column():
    K = make_knot_sequence([0, 1], [], 2)
    G = assemble_gram(K)
    c = solve_banded(G, np.array([1 / 3, 1 / 6]))
    assert np.allclose(c, [1.0, 0.0], atol=1e-12)


def test_solve_rejects_bad_rhs_length():
    K = make_knot_sequence([0, 1], [], 2)
    from splineproj import LengthMismatch
    with pytest.raises(LengthMismatch):
        solve_banded(assemble_gram(K), np.ones(3))


def test_not_positive_definite_detected():
    bands = np.array([[0.6, 0.6], [1.0, -1.0]])  # indefinite by construction
    G = GramMatrix(2, bands)
    with pytest.raises(NotPositiveDefinite):
        G.factor()


def test_symmetry_guard_fails_loudly(monkeypatch):
    # a gram inverse is symmetric by theorem; a visibly asymmetric result
    # must abort rather than be averaged away
    import splineproj.gram as gram_mod

    K = generate_partition(PartitionSpec("uniform", 10), 2)
    G = assemble_gram(K)
    real = gram_mod.cho_solve_banded

    def skewed(fac, rhs):
        out = real(fac, rhs)
        if out.ndim == 2:
            out = out.copy()
            out[0, -1] *= 1.5  # corrupt one corner entry
        return out

    monkeypatch.setattr(gram_mod, "cho_solve_banded", skewed)
    with pytest.raises(SymmetryViolation):
        invert_gram(G)


def test_invert_order_one():
    K = make_knot_sequence([0, 0.5, 1], [1], 1)
    A = invert_gram(assemble_gram(K))
    assert np.allclose(A.entries, np.diag([2.0, 2.0]), atol=1e-14)


def test_invert_hat_example():
    K = make_knot_sequence([0, 1], [], 2)
    A = invert_gram(assemble_gram(K))
    assert np.abs(A.entries - np.array([[4.0, -2.0], [-2.0, 4.0]])).max() <= 1e-12
    assert A.residual <= 1e-9


def test_inverse_matches_dense_oracle():
    for K in small_cases():
        A = invert_gram(assemble_gram(K))
        ref = np.linalg.inv(reference_gram(K))
        scale = np.abs(ref).max()
        assert np.abs(A.entries - ref).max() <= 1e-9 * scale


def test_inverse_quality_certificates():
    for seed in (0, 1):
        K = generate_partition(PartitionSpec("random", 60, seed=seed), 4)
        A = invert_gram(assemble_gram(K))
        assert A.residual <= 1e-9
        assert A.asymmetry <= 1e-10


def test_dual_basis_biorthogonality_by_quadrature():
    K = generate_partition(PartitionSpec("random", 25, seed=9), 3)
    A = invert_gram(assemble_gram(K))
    n, k = K.n, K.k
    nodes, weights = np.polynomial.legendre.leggauss(k)
    inner = np.zeros((n, n))
    for s in K.spans:
        half = 0.5 * (K.t[s + 1] - K.t[s])
        xs = K.t[s] + half * (nodes + 1.0)
        first, vals = eval_basis_many(K, xs)
        for p in range(xs.size):
            f0 = first[p]
            duals = A.entries[:, f0:f0 + k] @ vals[p]  # all N_i* at this node
            inner[:, f0:f0 + k] += np.outer(duals * (half * weights[p]), vals[p])
    assert np.abs(inner - np.eye(n)).max() <= 1e-9
