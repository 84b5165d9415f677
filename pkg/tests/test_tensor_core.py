import numpy as np
import pytest

from nonposdim import tensor_core as tc


def bell_state(dims=(2, 2)):
    m, n = dims
    v = np.zeros(m * n, dtype=complex)
    for j in range(min(m, n)):
        v[j * n + j] = 1.0
    v /= np.linalg.norm(v)
    return tc.HermOp(dims, np.outer(v, v.conj()))


def random_herm(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


class TestKron:
    def test_basis_case(self):
        e11 = np.zeros((2, 2))
        e11[0, 0] = 1.0
        out = tc.kron(e11, e11)
        want = np.zeros((4, 4))
        want[0, 0] = 1.0
        assert np.array_equal(out, want)

    def test_identity(self):
        assert np.array_equal(tc.kron(np.eye(2), np.eye(3)), np.eye(6))

    def test_trace_multiplicative(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        # entry-sum oracle: Tr(A x B) = sum_ik A_ii B_kk
        oracle = sum(a[i, i] * b[k, k] for i in range(3) for k in range(3))
        assert np.isclose(np.trace(tc.kron(a, b)), oracle)
        assert np.isclose(np.trace(tc.kron(a, b)), np.trace(a) * np.trace(b))


class TestPartialTrace:
    def test_bell_state_reduction(self):
        out = tc.partial_trace(bell_state(), keep=[1])
        assert np.allclose(out.mat, np.eye(2) / 2)

    def test_product_oracle(self):
        rng = np.random.default_rng(1)
        a, b = random_herm(2, rng), random_herm(3, rng)
        op = tc.HermOp((2, 3), tc.kron(a, b))
        got = tc.partial_trace(op, keep=[1])
        # elementwise summation oracle
        oracle = np.array(
            [[sum(op.mat[i * 3 + k, j * 3 + k] for k in range(3)) for j in range(2)] for i in range(2)]
        )
        assert np.allclose(got.mat, oracle)
        assert np.allclose(got.mat, np.trace(b) * a)

    def test_keep_all_is_identity(self):
        rng = np.random.default_rng(2)
        op = tc.HermOp((2, 3), random_herm(6, rng))
        assert np.array_equal(tc.partial_trace(op, keep=[1, 2]).mat, op.mat)

    def test_trace_preserved(self):
        rng = np.random.default_rng(3)
        op = tc.HermOp((2, 2, 3), random_herm(12, rng))
        for keep in ([1], [2], [1, 3]):
            assert np.isclose(np.trace(tc.partial_trace(op, keep).mat), np.trace(op.mat))

    def test_bad_subsystem(self):
        with pytest.raises(tc.DimensionError):
            tc.partial_trace(bell_state(), keep=[3])


class TestPartialTranspose:
    def test_bell_gives_swap(self):
        out = tc.partial_transpose(bell_state(), 2)
        swap = np.zeros((4, 4))
        for i in range(2):
            for j in range(2):
                swap[i * 2 + j, j * 2 + i] = 1.0
        assert np.allclose(out.mat, swap / 2)
        assert np.allclose(np.sort(tc.herm_eigs(out)), [-0.5, 0.5, 0.5, 0.5])

    def test_both_transposes_give_global(self):
        rng = np.random.default_rng(4)
        op = tc.HermOp((2, 3), random_herm(6, rng))
        both = tc.partial_transpose(tc.partial_transpose(op, 1), 2)
        assert np.allclose(both.mat, op.mat.T)

    def test_involution_exact(self):
        rng = np.random.default_rng(5)
        op = tc.HermOp((2, 2, 2), random_herm(8, rng))
        for sub in (1, 2, 3):
            back = tc.partial_transpose(tc.partial_transpose(op, sub), sub)
            assert np.array_equal(back.mat, op.mat)

    def test_preserves_trace_and_hermiticity(self):
        rng = np.random.default_rng(6)
        op = tc.HermOp((3, 2), random_herm(6, rng))
        out = tc.partial_transpose(op, 1)
        assert np.isclose(np.trace(out.mat), np.trace(op.mat))
        assert out.is_hermitian()


class TestSpectral:
    def test_trivial_spectra(self):
        assert np.allclose(tc.herm_eigs(tc.HermOp((3,), np.eye(3))), [1, 1, 1])
        d = tc.HermOp((3,), np.diag([-3.0, 0.0, 8.0]))
        assert np.allclose(tc.herm_eigs(d), [-3, 0, 8])

    def test_reconstruction(self):
        rng = np.random.default_rng(7)
        op = tc.HermOp((16,), random_herm(16, rng))
        vals, vecs = tc.herm_eig_decomp(op)
        rebuilt = (vecs * vals) @ vecs.conj().T
        assert np.abs(rebuilt - op.mat).max() <= 1e-10 * tc.operator_norm(op.mat)

    def test_reconstruction_large(self):
        rng = np.random.default_rng(8)
        op = tc.HermOp((256,), random_herm(256, rng))
        vals, vecs = tc.herm_eig_decomp(op)
        rebuilt = (vecs * vals) @ vecs.conj().T
        assert tc.operator_norm(rebuilt - op.mat) <= 1e-10 * tc.operator_norm(op.mat)

    def test_rejects_non_hermitian(self):
        with pytest.raises(tc.NotHermitianError):
            tc.herm_eigs(tc.HermOp((2,), np.array([[0, 1], [0, 0]])))


class TestInertia:
    def test_trivial(self):
        assert tc.inertia(tc.HermOp((4,), np.eye(4))) == tc.inertia(tc.HermOp((4,), np.eye(4)))
        i = tc.inertia(tc.HermOp((3,), np.diag([1.0, -1.0, 0.0])))
        assert (i.n_neg, i.n_zero, i.n_pos) == (1, 1, 1)
        i = tc.inertia(tc.HermOp((4,), np.eye(4)))
        assert (i.n_neg, i.n_zero, i.n_pos) == (0, 0, 4)

    def test_sylvester_congruence(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            m = random_herm(5, rng)
            a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            while abs(np.linalg.det(a)) < 1e-3:
                a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            before = tc.inertia(tc.HermOp((5,), m)).n_neg
            after = tc.inertia(tc.HermOp((5,), a.conj().T @ m @ a)).n_neg
            assert before == after

    def test_bell_partial_transpose_3x3(self):
        out = tc.partial_transpose(bell_state((3, 3)), 2)
        # brute-force oracle: antisymmetric subspace dimension n(n-1)/2
        assert np.count_nonzero(np.linalg.eigvalsh(out.mat) < -1e-12) == 3
        assert tc.inertia(out).n_neg == 3


class TestNorms:
    def test_identity(self):
        assert np.isclose(tc.trace_norm(np.eye(5)), 5)
        assert np.isclose(tc.operator_norm(np.eye(5)), 1)

    def test_rank_one(self):
        v = np.array([1.0, 2.0, 2.0])
        m = np.outer(v, v)
        assert np.isclose(tc.trace_norm(m), 9)
        assert np.isclose(tc.operator_norm(m), 9)

    def test_svd_oracle(self):
        rng = np.random.default_rng(10)
        m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        sv = np.linalg.svd(m, compute_uv=False)
        assert np.isclose(tc.trace_norm(m), sv.sum())
        assert np.isclose(tc.operator_norm(m), sv[0])
        assert tc.trace_norm(m) >= abs(np.trace(m)) - 1e-12


class TestVecAndProjection:
    def test_vec_row_major(self):
        e12 = np.zeros((2, 2))
        e12[0, 1] = 1.0
        assert np.array_equal(tc.vec_row_major(e12), [0, 1, 0, 0])

    def test_projection_single_vector(self):
        p = tc.projection_from_span([np.array([1.0, 0.0])])
        assert np.allclose(p.mat, np.diag([1.0, 0.0]))

    def test_projection_properties(self):
        rng = np.random.default_rng(11)
        vecs = [rng.standard_normal(6) + 1j * rng.standard_normal(6) for _ in range(3)]
        p = tc.projection_from_span(vecs)
        assert np.abs(p.mat @ p.mat - p.mat).max() <= 1e-12
        assert p.is_hermitian()
        for v in vecs:
            assert np.allclose(p.mat @ v, v)

    def test_empty_span_rejected(self):
        with pytest.raises(tc.DimensionError):
            tc.projection_from_span([])


class TestJson:
    def test_round_trip(self):
        rng = np.random.default_rng(12)
        op = tc.HermOp((2, 3), random_herm(6, rng))
        back = tc.HermOp.from_json(op.to_json())
        assert back.dims == op.dims
        assert np.allclose(back.mat, op.mat)
