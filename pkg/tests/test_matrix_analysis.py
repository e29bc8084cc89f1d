import math

import numpy as np
import pytest

from bpdp.matrix_analysis import (char_poly_coeffs, closed_form_entry,
                                  cycle_matrix, expected_char_poly_coeffs,
                                  frobenius_norm, lagrange_norm_bound,
                                  matrix_power_entry, operator_norm,
                                  perturbed_eigenvalues, perturbed_matrix,
                                  perturbed_spectral_radius, spectral_radius,
                                  unperturbed_eigenvalues)

SQRT2 = math.sqrt(2.0)


class TestCycleMatrix:
    def test_shape_and_sparsity(self):
        M = cycle_matrix()
        assert M.shape == (6, 6)
        # the bi-directed 6-cycle with one directed edge removed: 11 ones
        assert sorted(int(x) for x in np.asarray(M, dtype=int).ravel()
                      if x) == [1] * 11

    def test_power_entry_small(self):
        assert matrix_power_entry(0) == 1
        assert matrix_power_entry(1) == 4

    def test_closed_form_small(self):
        assert closed_form_entry(0) == pytest.approx(1.0, rel=1e-14)
        assert closed_form_entry(1) == pytest.approx(4.0, rel=1e-14)

    @pytest.mark.parametrize("K", list(range(26)))
    def test_power_equals_closed_form(self, K):
        exact = matrix_power_entry(K)
        closed = closed_form_entry(K)
        assert abs(exact - closed) / max(closed, 1.0) < 1e-6

    def test_dominates_growth_rate(self):
        for K in range(31):
            assert closed_form_entry(K) >= (2.0 + SQRT2) ** K * (1 - 1e-12)

    def test_bipartite_odd_powers(self):
        # under the (even, odd) split of the 6-cycle the diagonal blocks of
        # odd powers vanish
        M = np.asarray(cycle_matrix(), dtype=int)
        odd = np.linalg.matrix_power(M, 5)
        even_idx = [0, 2, 4]
        assert np.all(odd[np.ix_(even_idx, even_idx)] == 0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            matrix_power_entry(-1)


class TestPerturbedMatrix:
    def test_entries(self):
        P = 0.01
        M = perturbed_matrix(P)
        assert M[3, 1] == 2.0          # doubled entry absorbing state 1''
        assert M[0, 1] == P and M[1, 2] == P and M[5, 4] == P
        assert M[1, 0] == 1.0

    @pytest.mark.parametrize("P", [1e-2, 1e-4])
    def test_characteristic_polynomial(self, P):
        got = char_poly_coeffs(perturbed_matrix(P) / math.sqrt(P))
        want = expected_char_poly_coeffs(P)
        assert np.max(np.abs(got - want)) <= 1e-10

    @pytest.mark.parametrize("P", [1e-2, 1e-4])
    def test_closed_form_roots_solve_quartic(self, P):
        s = math.sqrt(P)
        for z in perturbed_eigenvalues(P):
            if abs(abs(z) - 1.0) < 1e-9:
                continue
            assert abs(z ** 4 - 4 * z ** 2 + 2 - 4 * z * s - P) < 1e-10

    def test_eigenvalues_near_limits(self):
        P = 1e-4
        got = np.sort(perturbed_eigenvalues(P).real)
        want = np.sort(unperturbed_eigenvalues())
        assert np.max(np.abs(got - want)) <= 10 * math.sqrt(P)

    def test_limit_sequence(self):
        prev = None
        for k in range(2, 7):
            P = 10.0 ** -k
            drift = np.max(np.abs(np.sort(perturbed_eigenvalues(P).real)
                                  - np.sort(unperturbed_eigenvalues())))
            if prev is not None:
                assert drift < prev
            prev = drift

    def test_closed_form_matches_eigensolver(self):
        for P in (1e-2, 1e-3, 1e-4):
            closed = np.sort_complex(perturbed_eigenvalues(P))
            direct = np.sort_complex(
                np.linalg.eigvals(perturbed_matrix(P) / math.sqrt(P)))
            assert np.max(np.abs(closed - direct)) < 1e-9

    def test_spectral_radius_bound(self):
        for P in np.geomspace(1e-6, 1e-2, 9):
            rho = perturbed_spectral_radius(P)
            bound = math.sqrt(2.0 + SQRT2) * math.sqrt(P) * math.exp(math.sqrt(P))
            assert rho <= bound

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            perturbed_matrix(0.3)


class TestNorms:
    def test_operator_norm_diagonal(self):
        assert operator_norm(np.diag([1.0, -3.0, 2.0])) == pytest.approx(3.0,
                                                                         abs=1e-9)

    def test_operator_norm_matches_svd(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            M = rng.normal(size=(6, 6))
            want = float(np.linalg.svd(M, compute_uv=False)[0])
            assert operator_norm(M) == pytest.approx(want, rel=1e-8)

    def test_frobenius(self):
        assert frobenius_norm(np.eye(6)) == pytest.approx(math.sqrt(6.0))


class TestLagrangeBound:
    def test_diagonal_case(self):
        M = np.diag([1.0, 2.0, 3.0])
        for n in (1, 5, 10):
            assert lagrange_norm_bound(M, n) >= 2.0 ** n

    def test_dominates_random_matrices(self):
        rng = np.random.default_rng(32)
        for _ in range(30):
            M = rng.normal(size=(6, 6))
            for n in (1, 5, 20):
                bound = lagrange_norm_bound(M, n)
                direct = operator_norm(np.linalg.matrix_power(M, n))
                assert bound >= direct * (1 - 1e-12)

    def test_dominates_for_frobenius_norm(self):
        rng = np.random.default_rng(33)
        for _ in range(10):
            M = rng.normal(size=(5, 5))
            bound = lagrange_norm_bound(M, 7, norm_id="frobenius")
            direct = frobenius_norm(np.linalg.matrix_power(M, 7))
            assert bound >= direct * (1 - 1e-12)

    def test_perturbed_matrix_case(self):
        M = perturbed_matrix(0.01)
        bound = lagrange_norm_bound(M, 10)
        direct = operator_norm(np.linalg.matrix_power(M, 10))
        assert bound >= direct

    def test_rejects_repeated_eigenvalues(self):
        with pytest.raises(ValueError):
            lagrange_norm_bound(np.eye(4), 3)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            lagrange_norm_bound(np.diag([1.0, 2.0]), -1)
        with pytest.raises(ValueError):
            lagrange_norm_bound(np.diag([1.0, 2.0]), 2, norm_id="taxicab")
