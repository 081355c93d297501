import numpy as np
import pytest

from gdscert import (
    CapacityError,
    GDSState,
    certify,
    evolve,
    gds_density_matrix,
    is_ppt,
    partial_transpose,
    random_sds_params,
    sds_populations,
)
from gdscert.states import is_hermitian
from gdscert.volume import ppt_pass_mask, sample_chis


class TestPartialTranspose:
    def test_involution(self):
        rng = np.random.default_rng(0)
        chi = rng.dirichlet(np.ones(5))
        rho = gds_density_matrix(GDSState(4, chi))
        for k in (1, 2, 3):
            np.testing.assert_allclose(
                partial_transpose(partial_transpose(rho, k, 4), k, 4), rho, atol=0
            )

    def test_product_state_spectrum_unchanged(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=(4, 4))
        rho1 = a @ a.T
        rho1 /= np.trace(rho1)
        b = rng.normal(size=(4, 4))
        rho2 = b @ b.T
        rho2 /= np.trace(rho2)
        rho = np.kron(rho1, rho2)
        pt = partial_transpose(rho, 2, 4)
        np.testing.assert_allclose(pt, np.kron(rho1.T, rho2), atol=1e-14)
        np.testing.assert_allclose(
            np.sort(np.linalg.eigvalsh(pt)), np.sort(np.linalg.eigvalsh(rho)), atol=1e-12
        )

    def test_hermiticity_and_trace_preserved(self):
        rng = np.random.default_rng(2)
        for n in (2, 4, 6):
            chi = rng.dirichlet(np.ones(n + 1))
            rho = gds_density_matrix(GDSState(n, chi))
            for k in range(1, n):
                pt = partial_transpose(rho, k, n)
                assert is_hermitian(pt)
                assert abs(np.trace(pt) - 1.0) <= 1e-12

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            partial_transpose(np.eye(8), 1, 4)

    def test_block_size_out_of_range(self):
        with pytest.raises(ValueError):
            partial_transpose(np.eye(16), 4, 4)


class TestIsPpt:
    def test_bell_type_minimum(self):
        report = is_ppt(GDSState(2, [0, 1, 0]))
        assert report.min_eigenvalues[1] == pytest.approx(-0.5, abs=1e-12)
        assert not report.is_ppt

    def test_n2_boundary_state(self):
        report = is_ppt(GDSState(2, [0.25, 0.5, 0.25]))
        assert report.is_ppt
        assert report.min_eigenvalues[1] == pytest.approx(0.0, abs=1e-12)

    def test_pure_dicke_half_filling_npt(self):
        report = is_ppt(GDSState(4, [0, 0, 1, 0, 0]))
        assert not report.is_ppt

    def test_superradiant_sweep_is_ppt(self):
        for n in (4, 6):
            for tau in np.geomspace(1e-3, 10, 20):
                assert is_ppt(evolve(n, tau)).is_ppt

    def test_capacity_error(self):
        with pytest.raises(CapacityError):
            is_ppt(GDSState(11, np.full(12, 1 / 12)))

    def test_json_report(self):
        obj = is_ppt(GDSState(4, [0.2, 0.2, 0.2, 0.2, 0.2])).to_json_dict()
        assert {b["k"] for b in obj["bipartitions"]} == {1, 2}
        assert isinstance(obj["ppt"], bool)


class TestBipartitionStructure:
    def test_half_half_bipartition_is_witnessed_as_stronger(self):
        """Within 1e5 uniform N=4 samples the 2|2 transpose rejects states
        that the 1|3 transpose accepts.  The converse direction never
        occurs: for diagonal-symmetric states positivity under the balanced
        bipartition implies positivity under the smaller ones, so both
        tests agreeing is expected whenever k=2 passes."""
        from gdscert.volume import _pt_basis

        rng = np.random.default_rng(123)
        chis = sample_chis(4, rng, 100_000)
        mins = {}
        for k in (1, 2):
            basis = _pt_basis(4, k)
            mats = np.tensordot(chis, basis, axes=([1], [0]))
            mins[k] = np.linalg.eigvalsh(mats).min(axis=1)
        pass1 = mins[1] >= -1e-10
        pass2 = mins[2] >= -1e-10
        assert int((pass1 & ~pass2).sum()) > 0
        # outside a numerical boundary band, k=2 acceptance implies k=1
        solid = (mins[1] < -1e-8) & (mins[2] >= -1e-10)
        assert int(solid.sum()) == 0

    def test_certified_states_are_ppt(self):
        rng = np.random.default_rng(5)
        for n in (2, 3, 4, 5):
            for _ in range(20):
                st = sds_populations(random_sds_params(n, rng))
                assert certify(st).certified
                assert is_ppt(st).is_ppt
