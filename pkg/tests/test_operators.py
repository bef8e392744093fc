import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracspec import (
    DecompositionError,
    Graph,
    NotUnitaryError,
    dfrft_matrix,
    eigendecompose,
    gft_matrix,
    graph_frft,
    path_graph,
    reconstruction_error,
    unitarity_error,
    unitary_fractional_power,
)

SQRT2 = np.sqrt(2.0)


def dft(n):
    m = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(m, m) / n) / np.sqrt(n)


def cycle_graph(n):
    a = np.zeros((n, n))
    i = np.arange(n)
    a[i, (i + 1) % n] = 1.0
    a[(i - 1) % n, i] = 1.0
    return Graph(a)


class TestEigendecompose:
    def test_path2(self):
        b = eigendecompose(path_graph(2))
        assert np.allclose(b.lam, [1.0, -1.0])
        assert np.allclose(b.v, np.array([[1, 1], [1, -1.0]]) / SQRT2)

    def test_empty_graph(self):
        b = eigendecompose(Graph(np.zeros((4, 4))))
        assert np.array_equal(b.lam, np.zeros(4))
        assert np.array_equal(b.v, np.eye(4))

    def test_path3_spectrum(self):
        # roots of lam^3 - 2 lam = 0
        b = eigendecompose(path_graph(3))
        assert np.allclose(b.lam, [SQRT2, 0.0, -SQRT2], atol=1e-12)

    def test_descending_order_and_reconstruction(self, rng):
        a = rng.uniform(size=(9, 9))
        np.fill_diagonal(a, 0.0)
        g = Graph(a)
        b = eigendecompose(g)
        assert np.all(np.diff(b.lam) <= 1e-12)
        assert np.linalg.norm((b.v * b.lam) @ b.v.T - g.adjacency) <= 1e-9 * np.linalg.norm(g.adjacency)
        assert unitarity_error(b.v.astype(complex)) <= 1e-10 * b.n

    def test_sign_convention(self, rng):
        a = rng.uniform(size=(6, 6))
        np.fill_diagonal(a, 0.0)
        b = eigendecompose(Graph(a))
        for k in range(6):
            col = b.v[:, k]
            assert col[int(np.argmax(np.abs(col)))] > 0


class TestGftMatrix:
    def test_path2(self):
        f = gft_matrix(eigendecompose(path_graph(2)))
        assert np.allclose(f.matrix, np.array([[1, 1], [1, -1]]) / SQRT2)

    def test_fg_times_v_is_identity(self, rng):
        a = rng.uniform(size=(7, 7))
        np.fill_diagonal(a, 0.0)
        b = eigendecompose(Graph(a))
        assert np.allclose(gft_matrix(b).matrix @ b.v, np.eye(7), atol=1e-12)

    def test_constant_signal_concentrates_on_top_mode(self):
        # 4-cycle is regular: its top adjacency eigenvector is constant
        b = eigendecompose(cycle_graph(4))
        coeffs = gft_matrix(b).matrix @ np.ones(4)
        assert abs(coeffs[0]) == pytest.approx(2.0)
        assert np.allclose(coeffs[1:], 0.0, atol=1e-12)


class TestUnitaryFractionalPower:
    def test_identity_any_order(self):
        for a in (-1.5, 0.0, 0.3, 2.0):
            out = unitary_fractional_power(np.eye(5), a)
            assert np.allclose(out.matrix, np.eye(5), atol=1e-12)

    def test_phase_doubling(self):
        u = np.diag([1j, -1j])
        out = unitary_fractional_power(u, 2.0)
        assert np.allclose(out.matrix, -np.eye(2), atol=1e-12)

    def test_hadamard_half_power_against_analytic_oracle(self):
        # 2x2 analytic eigendecomposition of the symmetric orthogonal GFT of
        # path(2): eigenvalues +-1, eigenvectors at angle pi/8. Half power is
        # v+ v+^T + j v- v-^T with cos^2 = (2+sqrt2)/4, sin^2 = (2-sqrt2)/4,
        # cos*sin = sqrt2/4.
        c2 = (2 + SQRT2) / 4
        s2 = (2 - SQRT2) / 4
        cs = SQRT2 / 4
        want = np.array([
            [c2 + 1j * s2, cs - 1j * cs],
            [cs - 1j * cs, s2 + 1j * c2],
        ])
        u = gft_matrix(eigendecompose(path_graph(2))).matrix
        out = unitary_fractional_power(u, 0.5)
        assert np.allclose(out.matrix, want, atol=1e-12)
        assert np.allclose(out.matrix @ out.matrix, u, atol=1e-12)

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitaryError):
            unitary_fractional_power(np.array([[1.0, 1.0], [0.0, 1.0]]), 0.5)

    def test_branch_cut_eigenspace_remix_invariance(self, rng):
        # exact -1 eigenvalue with multiplicity 2: remixing its eigenvectors
        # must leave the fractional power unchanged
        q, _ = np.linalg.qr(rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
        d = np.exp(1j * np.array([np.pi, np.pi, 1.0, -0.5, -0.5, 2.7]))
        mix, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        q2 = q.copy()
        q2[:, :2] = q2[:, :2] @ mix
        u1 = (q * d) @ q.conj().T
        u2 = (q2 * d) @ q2.conj().T
        p1 = unitary_fractional_power(u1, 0.3)
        p2 = unitary_fractional_power(u2, 0.3)
        assert np.abs(p1.matrix - p2.matrix).max() <= 1e-8 * 6


class TestGraphFrft:
    def test_order_zero_is_identity(self, small_ctx):
        f = graph_frft(small_ctx.spatial, 0.0)
        assert np.allclose(f.matrix, np.eye(f.n), atol=1e-12)

    def test_order_one_is_gft(self, small_ctx):
        f1 = graph_frft(small_ctx.spatial, 1.0)
        f = gft_matrix(small_ctx.spatial)
        assert np.abs(f1.matrix - f.matrix).max() <= 1e-8 * f.n

    def test_half_order_composes_to_gft(self, small_ctx):
        half = graph_frft(small_ctx.spatial, 0.5)
        full = gft_matrix(small_ctx.spatial)
        assert np.abs(half.matrix @ half.matrix - full.matrix).max() <= 1e-8 * full.n

    def test_branch_cut_sizes(self):
        # path(16) GFT has a -1 eigenspace straddling the principal branch cut
        for n in (14, 16, 24):
            b = eigendecompose(path_graph(n))
            half = graph_frft(b, 0.5)
            assert unitarity_error(half.matrix) <= 1e-9 * n
            assert np.abs(half.matrix @ half.matrix - gft_matrix(b).matrix).max() <= 1e-8 * n

    @settings(max_examples=20, deadline=None)
    @given(
        a=st.floats(-2.5, 2.5),
        b=st.floats(-2.5, 2.5),
        n=st.integers(2, 12),
    )
    def test_additivity_property(self, a, b, n):
        basis = eigendecompose(path_graph(n))
        lhs = graph_frft(basis, a).matrix @ graph_frft(basis, b).matrix
        rhs = graph_frft(basis, a + b).matrix
        assert np.abs(lhs - rhs).max() <= 1e-8 * n

    def test_inverse_is_hermitian_transpose(self, small_ctx):
        f = graph_frft(small_ctx.spatial, 0.7)
        fneg = graph_frft(small_ctx.spatial, -0.7)
        assert np.abs(fneg.matrix - f.matrix.conj().T).max() <= 1e-8 * f.n

    def test_determinism(self):
        b1 = eigendecompose(path_graph(9))
        b2 = eigendecompose(path_graph(9))
        assert np.array_equal(graph_frft(b1, 0.37).matrix, graph_frft(b2, 0.37).matrix)

    def test_self_consistency_of_cached_decomposition(self, small_ctx):
        op = graph_frft(small_ctx.spatial, 0.62)
        assert reconstruction_error(op) <= 1e-9 * op.n


class TestDfrft:
    def test_order_zero_is_identity(self):
        for n in (2, 5, 8):
            assert np.abs(dfrft_matrix(n, 0.0).matrix - np.eye(n)).max() <= 1e-9 * n

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 7, 8, 9, 12, 16, 17, 32])
    def test_order_one_is_dft(self, n):
        assert np.abs(dfrft_matrix(n, 1.0).matrix - dft(n)).max() <= 1e-8 * n

    @pytest.mark.parametrize("n", [3, 6, 8, 11])
    def test_half_order_squares_to_dft(self, n):
        half = dfrft_matrix(n, 0.5).matrix
        assert np.abs(half @ half - dfrft_matrix(n, 1.0).matrix).max() <= 1e-8 * n

    def test_unitarity_sweep(self):
        for n in (2, 5, 9, 16):
            for a in (-1.5, -0.5, 0.3, 2.0):
                assert unitarity_error(dfrft_matrix(n, a).matrix) <= 1e-9 * n

    def test_too_small_rejected(self):
        with pytest.raises(ValueError):
            dfrft_matrix(1, 0.5)

    def test_principal_shifted_mode(self):
        for n in (4, 8, 9):
            ps1 = dfrft_matrix(n, 1.0, mode="principal_shifted")
            assert np.abs(ps1.matrix - dft(n)).max() <= 1e-8 * n
            assert np.allclose(dfrft_matrix(n, 0.0, mode="principal_shifted").matrix,
                               np.eye(n), atol=1e-9 * n)
            half = dfrft_matrix(n, 0.5, mode="principal_shifted").matrix
            assert np.abs(half @ half - ps1.matrix).max() <= 1e-8 * n
            assert unitarity_error(half) <= 1e-9 * n

    def test_determinism(self):
        assert np.array_equal(dfrft_matrix(11, 0.43).matrix, dfrft_matrix(11, 0.43).matrix)
