"""Quadrature rule, system assembly and the generalized eigensolve."""

import numpy as np
import pytest

from tribound.errors import ParameterError, SolverError
from tribound.oracle import direct_matrix
from tribound.potential import PotentialParams
from tribound.recursion import BasisParams, auto_nu, recursion_coeffs
from tribound.solver import (
    AssembledSystem,
    assemble_system,
    bound_states,
    build_x_matrix,
    generalized_spectrum,
    physical_state_bound,
    plateau_scan,
    quadrature_matrix,
    quadrature_rule,
    solve_bound_states,
    symtridiag_eig,
)

REFERENCE_POTENTIAL = PotentialParams(A=-300.0, B=5.0, C=3.0)


def sized_basis(size, mu=1.5):
    return BasisParams.from_size(mu, auto_nu(mu, size), size)


class TestXMatrix:
    def test_scalar_basis(self):
        basis = BasisParams(mu=1.5, nu=-25.5, N=0)
        x = build_x_matrix(basis)
        c = recursion_coeffs(basis)
        assert x.shape == (1, 1) and x[0, 0] == c.F[0]

    def test_first_diagonal_entry(self):
        x = build_x_matrix(BasisParams(mu=1.5, nu=-25.5, N=10))
        assert x[0, 0] == pytest.approx(648.0 / 528.0, rel=1e-14)

    def test_symmetric_tridiagonal_structure(self):
        x = build_x_matrix(sized_basis(6))
        assert np.array_equal(x, x.T)
        assert np.all(np.triu(x, 2) == 0.0)

    def test_matches_integration_oracle(self):
        basis = sized_basis(4)
        x = build_x_matrix(basis)
        direct = direct_matrix(basis, lambda x_: x_)
        assert np.abs(x - direct).max() < 1e-8


class TestSymtridiagEig:
    def test_one_by_one(self):
        rule = symtridiag_eig(np.array([[3.7]]))
        assert rule.tau.tolist() == [3.7]
        assert rule.Lam.tolist() == [[1.0]]

    def test_two_by_two_antidiagonal(self):
        rule = symtridiag_eig(np.array([[0.0, 2.5], [2.5, 0.0]]))
        assert rule.tau == pytest.approx([-2.5, 2.5], rel=1e-14)

    def test_rule_contracts(self):
        basis = sized_basis(10)
        x = build_x_matrix(basis)
        rule = symtridiag_eig(x)
        m = rule.size
        assert np.abs(rule.Lam.T @ rule.Lam - np.eye(m)).max() < 1e-10
        assert np.abs((rule.Lam * rule.tau) @ rule.Lam.T - x).max() < 1e-10
        assert np.all(np.diff(rule.tau) > 0.0)
        assert rule.tau.min() > 1.0

    def test_rejects_non_tridiagonal(self):
        bad = np.ones((4, 4))
        with pytest.raises(ParameterError):
            symtridiag_eig(bad)

    def test_rejects_asymmetric(self):
        bad = np.diag(np.ones(3)) + np.diag([1.0, 2.0], 1) + np.diag([1.0, 1.0], -1)
        with pytest.raises(ParameterError):
            symtridiag_eig(bad)

    def test_node_positivity_randomized(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            mu = rng.uniform(-0.9, 3.0)
            size = int(rng.integers(1, 30))
            margin = rng.uniform(1.5, 30.0)
            nu = -2.0 * size - 1.0 - mu - margin
            rule = quadrature_rule(BasisParams.from_size(mu, nu, size))
            assert rule.tau.min() > 1.0


class TestQuadratureMatrix:
    def test_unit_kernel_gives_identity(self):
        rule = quadrature_rule(sized_basis(8))
        q = quadrature_matrix(rule, lambda t: np.ones_like(t))
        assert np.abs(q - np.eye(8)).max() < 1e-12

    def test_coordinate_kernel_reconstructs_x(self):
        basis = sized_basis(8)
        rule = quadrature_rule(basis)
        q = quadrature_matrix(rule, lambda t: t)
        assert np.abs(q - build_x_matrix(basis)).max() < 1e-12

    def test_polynomial_exactness_against_oracle(self):
        # Gauss rule of size M integrates degree <= 2M-1 exactly, so entries
        # with n + m + deg(w) <= 2M - 1 match the direct integrals; the far
        # corner of the square kernel lies outside that budget.
        basis = sized_basis(5)
        rule = quadrature_rule(basis)
        q = quadrature_matrix(rule, lambda t: t * t)
        direct = direct_matrix(basis, lambda x: x * x)
        for n in range(5):
            for m in range(5):
                if n + m + 2 <= 2 * 5 - 1:
                    assert abs(q[n, m] - direct[n, m]) < 1e-9

    def test_pole_at_node_rejected(self):
        rule = quadrature_rule(sized_basis(4))
        bad_point = rule.tau[1]
        with pytest.raises(ParameterError):
            quadrature_matrix(rule, lambda t: 1.0 / (t - bad_point))


class TestAssembly:
    def test_scalar_system_closed_form(self):
        basis = sized_basis(1)
        p = REFERENCE_POTENTIAL
        c = recursion_coeffs(basis)
        f0 = c.F[0]
        sys = assemble_system(basis, p)
        mu, nu = basis.mu, basis.nu
        h00 = (0.25 - p.B - (0.5 * (mu + nu + 1.0)) ** 2 + p.C * f0
               + (mu**2 / 2) / (1.0 - f0) + ((nu**2 + p.A) / 2) / (1.0 + f0))
        w00 = 1.0 / (f0**2 - 1.0)
        assert sys.H[0, 0] == pytest.approx(h00, rel=1e-13)
        assert sys.omega[0, 0] == pytest.approx(w00, rel=1e-13)
        assert generalized_spectrum(sys)[0] == pytest.approx(h00 / w00, rel=1e-12)

    @pytest.mark.parametrize("size", [10, 20, 50, 100])
    def test_overlap_positive_definite(self, size):
        sys = assemble_system(sized_basis(size), REFERENCE_POTENTIAL)
        np.linalg.cholesky(sys.omega)  # raises if not PD

    def test_symmetry(self):
        sys = assemble_system(sized_basis(30), REFERENCE_POTENTIAL)
        assert np.abs(sys.H - sys.H.T).max() < 1e-12 * max(1.0, np.abs(sys.H).max())
        assert np.abs(sys.omega - sys.omega.T).max() < 1e-12


class TestGeneralizedSpectrum:
    def test_identity_pencil(self):
        m = np.eye(4)
        sys = AssembledSystem(H=m, omega=m)
        assert generalized_spectrum(sys) == pytest.approx(np.ones(4), rel=1e-12)

    def test_one_by_one(self):
        sys = AssembledSystem(H=np.array([[6.0]]), omega=np.array([[2.0]]))
        assert generalized_spectrum(sys)[0] == pytest.approx(3.0, rel=1e-14)

    def test_non_definite_overlap_rejected(self):
        sys = AssembledSystem(H=np.eye(2), omega=np.diag([1.0, -1.0]))
        with pytest.raises(SolverError):
            generalized_spectrum(sys)

    def test_table_energies_small_basis(self):
        sys = assemble_system(sized_basis(10), REFERENCE_POTENTIAL)
        eigs = generalized_spectrum(sys)
        neg = eigs[eigs < 0]
        want = [-249.6186960, -121.1023091, -54.5612094, -20.1791388, -4.8218491]
        assert neg == pytest.approx(want, abs=5e-7)

    def test_eigenpair_residual_contract(self):
        # the residual bound is enforced internally; large sizes exercise the
        # refinement path
        for size in (50, 150):
            sys = assemble_system(sized_basis(size), REFERENCE_POTENTIAL)
            generalized_spectrum(sys)  # raises SolverError on violation


class TestBoundStates:
    def test_all_positive_input_empty(self):
        basis = sized_basis(3)
        spectrum = bound_states([0.5, 1.0, 2.0], basis)
        assert len(spectrum) == 0 and spectrum.discarded_count == 3

    def test_filtering_and_ordering(self):
        basis = sized_basis(4)
        spectrum = bound_states([3.0, -1.0, -7.0, 1e-12], basis)
        assert spectrum.epsilons.tolist() == [-7.0, -1.0]
        assert spectrum.report_units.tolist() == [7.0, 1.0]
        assert spectrum.discarded_count == 2
        assert spectrum.basis_size == 4

    def test_count_within_physical_bound(self):
        assert physical_state_bound(REFERENCE_POTENTIAL) == 12
        for size in (10, 50, 100):
            spectrum = solve_bound_states(REFERENCE_POTENTIAL, size)
            assert len(spectrum) <= 12

    def test_lambda_invariance(self):
        specs = [solve_bound_states(PotentialParams(A=-300.0, B=5.0, C=3.0, lam=lam), 40)
                 for lam in (0.5, 1.0, 2.0)]
        for other in specs[1:]:
            assert np.max(np.abs(other.epsilons - specs[0].epsilons)) < 1e-12

    def test_shallow_potential_has_no_bound_states(self):
        spectrum = solve_bound_states(PotentialParams(A=-0.4, B=5.0, C=3.0), 30)
        assert len(spectrum) == 0


class TestPlateauScan:
    def test_single_point_grid(self):
        scan = plateau_scan(REFERENCE_POTENTIAL, 20, [1.5])
        assert len(scan.spectra) == 1
        assert all(s.delta is None for s in scan.stats)

    def test_invalid_grid(self):
        with pytest.raises(ParameterError):
            plateau_scan(REFERENCE_POTENTIAL, 20, [])
        with pytest.raises(ParameterError):
            plateau_scan(REFERENCE_POTENTIAL, 20, [2.0, 1.0])

    def test_small_scan_structure(self):
        grid = [1.3, 1.5, 1.7]
        scan = plateau_scan(REFERENCE_POTENTIAL, 30, grid)
        assert scan.state_count == 5
        assert scan.table().shape == (3, 5)
        assert [s.state for s in scan.stats] == [0, 1, 2, 3, 4]
        # deterministic ordering by mu regardless of execution order
        assert scan.mu_grid.tolist() == grid
