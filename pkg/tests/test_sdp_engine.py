import numpy as np
import pytest

from nonposdim import map_catalog as mc
from nonposdim import multipartite_npt as mp
from nonposdim import sdp_engine as se
from nonposdim import tensor_core as tc


def random_herm(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def random_state(dims, rng):
    total = int(np.prod(dims))
    g = rng.standard_normal((total, total)) + 1j * rng.standard_normal((total, total))
    rho = g @ g.conj().T
    return tc.HermOp(dims, rho / np.trace(rho).real)


def singlet_projection():
    v = np.zeros(4)
    v[1], v[2] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    return tc.projection_from_span([v], dims=(2, 2))


class TestDiamondNorm:
    def test_cp_map_equals_adjoint_at_identity(self):
        rng = np.random.default_rng(0)
        # random CP map via a PSD Choi matrix
        g = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
        choi = tc.HermOp((3, 3), g @ g.conj().T / 9)
        psi = mc.HPMap(3, 3, choi)
        want = tc.operator_norm(mc.apply(mc.adjoint(psi), np.eye(3)))
        assert abs(se.diamond_norm(psi) - want) <= 1e-6 * max(1.0, want)

    def test_zero_map(self):
        zero = mc.HPMap(2, 2, tc.HermOp((2, 2), np.zeros((4, 4))))
        assert se.diamond_norm(zero) <= 1e-7

    def test_transpose(self):
        assert abs(se.diamond_norm(mc.transpose_map(3)) - 3) <= 1e-6

    def test_homogeneity(self):
        base = se.diamond_norm(mc.choi_map())
        for alpha in (2.0, 0.5):
            scaled = se.diamond_norm(alpha * mc.choi_map())
            assert abs(scaled - alpha * base) <= 1e-7 * max(1.0, scaled)

    def test_primal_lower_bounds(self):
        rng = np.random.default_rng(1)
        phi = mc.choi_map()
        dn = se.diamond_norm(phi)
        for _ in range(100):
            rho = random_state((3, 3), rng)
            lower = tc.trace_norm(mc.tensor_with_identity(phi, 3, rho).mat)
            assert lower <= dn + 1e-6


class TestDiamondDistance:
    def test_choi_map(self):
        d = se.diamond_distance(3 * mc.depolarizing(3), mc.choi_map())
        assert abs(d - 7 / 3) <= 1e-6

    def test_breuer_hall(self):
        for n in (4, 6):
            d = se.diamond_distance(2 * n * mc.depolarizing(n), mc.breuer_hall(n))
            assert abs(d - (n + 2)) <= 1e-6

    def test_self_distance(self):
        assert se.diamond_distance(mc.choi_map(), mc.choi_map()) <= 1e-7

    def test_dimension_mismatch(self):
        with pytest.raises(tc.DimensionError):
            se.diamond_distance(mc.choi_map(), mc.identity_map(4))


class TestWitnessSdp:
    def test_bipartite_transpose_3x3(self):
        basis = mp.npt_subspace_basis((3, 3))
        fam = [se.partial_transpose_transform((3, 3), 1)]
        res = se.subspace_witness_sdp(basis.projection(), fam)
        assert res.c_opt > se.CERT_MARGIN
        assert res.neg_count == 4

    def test_three_qubit(self):
        basis = mp.npt_subspace_basis((2, 2, 2))
        fam = [se.partial_transpose_transform((2, 2, 2), j) for j in (1, 2)]
        res = se.subspace_witness_sdp(basis.projection(), fam)
        assert res.c_opt > se.CERT_MARGIN
        assert res.neg_count == 4

    def test_family_monotonicity(self):
        # removing a transform never increases the optimum
        basis = mp.npt_subspace_basis((2, 2, 2))
        p = basis.projection()
        full = se.subspace_witness_sdp(
            p, [se.partial_transpose_transform((2, 2, 2), j) for j in (1, 2)]
        )
        small = se.subspace_witness_sdp(p, [se.partial_transpose_transform((2, 2, 2), 1)])
        assert small.c_opt <= full.c_opt + 1e-7

    def test_witness_self_consistency(self):
        basis = mp.npt_subspace_basis((2, 2, 2))
        p = basis.projection()
        fam = [se.partial_transpose_transform((2, 2, 2), j) for j in (1, 2)]
        res = se.subspace_witness_sdp(p, fam)
        rebuilt = sum(tr.apply(x.mat) for tr, x in zip(fam, res.components))
        assert np.abs(rebuilt - res.witness.mat).max() <= 1e-7
        # witness <= I - c_opt P up to solver slack
        gap = np.eye(8) - res.c_opt * p.mat - res.witness.mat
        assert np.linalg.eigvalsh((gap + gap.conj().T) / 2)[0] >= -1e-6
        for x in res.components:
            assert np.linalg.eigvalsh(x.mat)[0] >= -1e-7

    def test_cp_family_cannot_certify(self):
        # with a CP map's family no projection reaches c_opt > 1
        rng = np.random.default_rng(2)
        fam = [se.tensored_map_transform(mc.identity_map(2), 2)]
        for _ in range(5):
            v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            p = tc.projection_from_span([v], dims=(2, 2))
            res = se.subspace_witness_sdp(p, fam)
            assert res.c_opt <= 1 + 1e-6

    def test_rejects_non_projection(self):
        bad = tc.HermOp((2, 2), np.eye(4) * 0.5)
        with pytest.raises(tc.DimensionError):
            se.subspace_witness_sdp(bad, [se.partial_transpose_transform((2, 2), 1)])


class TestStateFromSubspace:
    def test_transpose_singlet(self):
        rho = se.state_from_subspace(mc.transpose_map(2), 2, singlet_projection())
        out = mc.tensor_with_identity(mc.adjoint(mc.transpose_map(2)), 2, rho)
        assert tc.inertia(out, eps_neg=1e-6).n_neg >= 1
        assert np.isclose(np.trace(rho.mat).real, 1.0)
        assert np.linalg.eigvalsh(rho.mat)[0] >= -1e-8

    def test_transpose_3x3_subspace(self):
        p = mp.npt_subspace_basis((3, 3)).projection()
        rho = se.state_from_subspace(mc.transpose_map(3), 3, p)
        out = mc.tensor_with_identity(mc.adjoint(mc.transpose_map(3)), 3, rho)
        assert tc.inertia(out, eps_neg=1e-6).n_neg >= 4

    def test_cp_map_error_path(self):
        with pytest.raises(se.SubspaceNotCertifiedError):
            se.state_from_subspace(mc.identity_map(2), 2, singlet_projection())


class TestFinerCheck:
    def test_self(self):
        res = se.finer_check(mc.choi_map(), mc.choi_map())
        assert res.feasible
        assert abs(res.c - 1.0) <= 1e-6
        assert tc.operator_norm(res.residual.mat) <= 1e-6

    def test_feasible_by_construction(self):
        rng = np.random.default_rng(3)
        phi2 = mc.choi_map()
        # subtract a small CP perturbation: feasibility with c = 1 by design
        g = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
        small = mc.HPMap(3, 3, tc.HermOp((3, 3), 0.01 * (g @ g.conj().T)))
        phi1 = phi2 - small
        res = se.finer_check(phi1, phi2)
        assert res.feasible
        assert np.linalg.eigvalsh(res.residual.mat)[0] >= -1e-7

    def test_transpose_vs_identity_infeasible(self):
        res = se.finer_check(mc.transpose_map(2), mc.identity_map(2))
        assert not res.feasible


class TestTransforms:
    def test_partial_transpose_transform_matches(self):
        rng = np.random.default_rng(4)
        tr = se.partial_transpose_transform((2, 3), 2)
        x = random_herm(6, rng)
        want = tc.partial_transpose(tc.HermOp((2, 3), x), 2).mat
        assert np.allclose(tr.apply(x), want)

    def test_tensored_map_transform_matches(self):
        rng = np.random.default_rng(5)
        phi = mc.choi_map()
        tr = se.tensored_map_transform(phi, 2, use_adjoint=True)
        x = random_herm(6, rng)
        want = mc.tensor_with_identity(mc.adjoint(phi), 2, tc.HermOp((2, 3), x)).mat
        assert np.allclose(tr.apply(x), want)
