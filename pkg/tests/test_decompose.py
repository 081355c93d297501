import numpy as np
import pytest

from gdscert import (
    GDSState,
    SolverDegenerateError,
    certify,
    check_population_bounds,
    evolve,
    population_bound,
    random_sds_params,
    sds_populations,
    solve_decomposition,
    solve_n4_closed_form,
    to_power_moments,
)
from gdscert.decompose import (
    REASON_COMPLEX,
    REASON_DEGENERATE,
    REASON_OUT_OF_RANGE,
    VERDICT_CERTIFIED,
)
from gdscert.volume import ppt_pass_mask, sample_chis


def _sorted_terms(dec):
    return dec.canonicalize().terms


def _max_term_diff(a, b):
    ta, tb = _sorted_terms(a), _sorted_terms(b)
    return max(
        max(abs(x1 - x2), abs(y1 - y2)) for (x1, y1), (x2, y2) in zip(ta, tb)
    )


class TestPowerMoments:
    def test_balanced_mixture(self):
        st = GDSState(4, np.array([1, 4, 6, 4, 1]) / 16)
        np.testing.assert_allclose(
            to_power_moments(st), [1, 0.5, 0.25, 0.125, 0.0625], atol=1e-15
        )

    def test_ground(self):
        st = GDSState(5, [0, 0, 0, 0, 0, 1])
        np.testing.assert_allclose(to_power_moments(st), np.ones(6), atol=1e-15)

    def test_excited(self):
        st = GDSState(5, [1, 0, 0, 0, 0, 0])
        expected = np.zeros(6)
        expected[0] = 1.0
        np.testing.assert_allclose(to_power_moments(st), expected, atol=1e-15)


class TestSolveDecomposition:
    def test_single_node(self):
        st = GDSState(4, np.array([1, 4, 6, 4, 1]) / 16)
        dec = solve_decomposition(st).canonicalize()
        assert dec.residual <= 1e-12
        x, y = dec.terms[0]
        assert abs(x - 1.0) < 1e-10 and abs(y - 0.5) < 1e-10
        for x, y in dec.terms[1:]:
            assert x == 0.0 and y == 0.0

    def test_fully_excited_lands_on_pinned_node(self):
        st = GDSState(4, [1, 0, 0, 0, 0])
        dec = solve_decomposition(st).canonicalize()
        assert dec.residual <= 1e-12
        assert abs(dec.terms[0][0] - 1.0) < 1e-12
        assert abs(dec.terms[0][1]) < 1e-12

    def test_matches_closed_form_on_superradiance(self):
        for tau in np.geomspace(1e-2, 3, 25):
            st = evolve(4, tau)
            general = solve_decomposition(st)
            oracle = solve_n4_closed_form(st)
            assert _max_term_diff(general, oracle) <= 1e-8

    def test_matches_closed_form_on_random_ppt_states(self):
        rng = np.random.default_rng(14)
        chis = sample_chis(4, rng, 6000)
        chis = chis[ppt_pass_mask(4, chis)][:400]
        degenerate = 0
        for chi in chis:
            st = GDSState(4, chi)
            general = solve_decomposition(st)
            try:
                oracle = solve_n4_closed_form(st)
            except SolverDegenerateError:
                degenerate += 1
                continue
            assert _max_term_diff(general, oracle) <= 1e-8
        assert degenerate <= 2  # degenerate set has measure zero

    def test_round_trip_random_params(self):
        rng = np.random.default_rng(15)
        for n in range(2, 9):
            for _ in range(100):
                params = random_sds_params(n, rng)
                dec = solve_decomposition(sds_populations(params))
                assert dec.residual <= 1e-9


class TestClosedFormN4:
    def test_early_time_branch(self):
        # just after the fully excited start all nodes cluster near y = 0
        # (the weight split among near-coincident nodes is unconstrained),
        # but the decomposition itself must stay exact and physical
        dec = solve_n4_closed_form(evolve(4, 1e-4))
        xs = [t[0] for t in dec.terms]
        ys = [t[1] for t in dec.terms]
        assert max(abs(y) for y in ys) < 1e-3
        assert all(0.0 <= x <= 1.0 for x in xs)
        assert abs(sum(xs) - 1.0) < 1e-9
        assert dec.residual <= 1e-12

    def test_coincident_nodes_guarded(self):
        st = GDSState(4, np.array([1, 4, 6, 4, 1]) / 16)
        with pytest.raises(SolverDegenerateError):
            solve_n4_closed_form(st)
        # the general solver still resolves it as a single node
        dec = solve_decomposition(st).canonicalize()
        assert abs(dec.terms[0][1] - 0.5) < 1e-10

    def test_round_trip_generating_params(self):
        rng = np.random.default_rng(16)
        checked = 0
        while checked < 60:
            xs = rng.dirichlet(np.ones(3))
            ys = rng.random(2)
            # stay away from the measure-zero degenerate set
            if xs.min() < 0.05 or abs(ys[0] - ys[1]) < 0.05 or ys.min() < 0.05:
                continue
            params = ((xs[0], ys[0]), (xs[1], ys[1]), (xs[2], 0.0))
            from gdscert import SDSParams

            st = sds_populations(SDSParams(4, params))
            dec = solve_n4_closed_form(st).canonicalize()
            expected = sorted(params, key=lambda t: (-t[0], -t[1]))
            diff = max(
                max(abs(a[0] - b[0]), abs(a[1] - b[1]))
                for a, b in zip(dec.terms, expected)
            )
            assert diff <= 1e-8
            checked += 1

    def test_rejects_other_n(self):
        with pytest.raises(ValueError):
            solve_n4_closed_form(GDSState(2, [0.25, 0.5, 0.25]))


class TestCertify:
    @pytest.mark.parametrize("tau", [0.01, 0.1, 0.5, 1.0, 2.0, 5.0])
    def test_superradiant_n4_certified(self, tau):
        result = certify(evolve(4, tau))
        assert result.verdict == VERDICT_CERTIFIED
        params = np.concatenate(
            [result.certificate.weights, result.certificate.amplitudes]
        )
        assert params.min() >= 0.0 and params.max() <= 1.0

    def test_pure_dicke_not_certified(self):
        result = certify(GDSState(4, [0, 0, 0, 1, 0]))
        assert not result.certified
        assert result.reason in (REASON_COMPLEX, REASON_OUT_OF_RANGE, REASON_DEGENERATE)

    def test_generic_entangled_reasons(self):
        # interior NPT states are caught by the range or realness checks
        rng = np.random.default_rng(17)
        chis = sample_chis(4, rng, 2000)
        npt = chis[~ppt_pass_mask(4, chis)]
        reasons = set()
        for chi in npt[:200]:
            result = certify(GDSState(4, chi))
            assert not result.certified
            reasons.add(result.reason)
        assert reasons <= {REASON_COMPLEX, REASON_OUT_OF_RANGE, REASON_DEGENERATE}
        assert REASON_OUT_OF_RANGE in reasons

    def test_n2_boundary_product_state(self):
        result = certify(GDSState(2, [0.25, 0.5, 0.25]))
        assert result.certified

    def test_certificate_reconstructs_input(self):
        rng = np.random.default_rng(18)
        for n in (3, 4, 5):
            st = sds_populations(random_sds_params(n, rng))
            result = certify(st)
            assert result.certified
            assert result.certificate.residual <= 1e-9
            assert abs(result.certificate.weights.sum() - 1.0) <= 1e-9


class TestPopulationBound:
    def test_half_filling_n4(self):
        assert population_bound(4, 2) == pytest.approx(3 / 8, abs=1e-15)

    def test_excited_level_unbounded(self):
        for n in (2, 5, 9):
            assert population_bound(n, 0) == pytest.approx(1.0, abs=1e-15)

    def test_n4_three_zeros(self):
        assert population_bound(4, 3) == pytest.approx(27 / 64, abs=1e-15)

    def test_violation_detected(self):
        violations = check_population_bounds(GDSState(4, [0, 0, 1, 0, 0]))
        assert violations == [(2, 1.0, 0.375)]

    def test_sds_outputs_satisfy_bounds(self):
        rng = np.random.default_rng(19)
        for n in (2, 4, 6):
            for _ in range(50):
                st = sds_populations(random_sds_params(n, rng))
                assert check_population_bounds(st) == []

    def test_superradiant_sweep_satisfies_bounds(self):
        for tau in np.geomspace(1e-3, 10, 30):
            assert check_population_bounds(evolve(4, tau)) == []

    def test_certified_implies_bounds(self):
        rng = np.random.default_rng(20)
        chis = sample_chis(4, rng, 1500)
        for chi in chis:
            st = GDSState(4, chi)
            if certify(st).certified:
                assert check_population_bounds(st) == []
