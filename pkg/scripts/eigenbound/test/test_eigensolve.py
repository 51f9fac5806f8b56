import math
import unittest

import numpy as np
import numpy.testing as npt

from eigenbound.assembly import assemble_system
from eigenbound.eigensolve import (
    ConvergenceError,
    fd_laplacian_1d,
    fd_laplacian_1d_eigenvalues,
    mode_quantities,
    rayleigh_quotient,
    relative_residuals,
    solve_smallest,
)
from eigenbound.fields import constant_drift, diagonal_tensor, gaussian_soliton, identity_tensor
from eigenbound.geometry import build_mesh, rectangle, refine

PI2 = math.pi**2


def scalar_system(resolution, T=None, eta=None):
    mesh = build_mesh(rectangle(), resolution)
    T = identity_tensor() if T is None else T
    eta = constant_drift() if eta is None else eta
    return mesh, assemble_system(mesh, T, eta, vector=False)


class TestFiniteDifferenceReference(unittest.TestCase):
    def test_three_points(self):
        A, M = fd_laplacian_1d(3)
        spectrum = solve_smallest(A, M, 1)
        self.assertAlmostEqual(spectrum.sigmas[0], 32.0 * (1.0 - math.cos(math.pi / 4)), delta=1e-10)
        self.assertAlmostEqual(spectrum.sigmas[0], 9.3726, delta=1e-4)

    def test_closed_form(self):
        A, M = fd_laplacian_1d(100)
        spectrum = solve_smallest(A, M, 10)
        expected = fd_laplacian_1d_eigenvalues(100)[:10]
        npt.assert_allclose(spectrum.sigmas, expected, rtol=1e-10)
        self.assertEqual(spectrum.method, "dense")

    def test_iterative_closed_form(self):
        A, M = fd_laplacian_1d(100)
        spectrum = solve_smallest(A, M, 4, dense_limit=0)
        self.assertEqual(spectrum.method, "lobpcg")
        npt.assert_allclose(spectrum.sigmas, fd_laplacian_1d_eigenvalues(100)[:4], rtol=1e-8)

    def test_rejects_bad_k(self):
        A, M = fd_laplacian_1d(5)
        self.assertRaises(ValueError, solve_smallest, A, M, 0)
        self.assertRaises(ValueError, solve_smallest, A, M, 5)


class TestSquareLaplacian(unittest.TestCase):
    def test_first_five_eigenvalues(self):
        _, system = scalar_system(64)
        spectrum = solve_smallest(system.A, system.M, 5)
        self.assertEqual(spectrum.method, "lobpcg")
        npt.assert_allclose(spectrum.sigmas, PI2 * np.array([2, 5, 5, 8, 10]), rtol=5e-3)
        self.assertTrue(spectrum.converged)

    def test_dense_and_iterative_agree(self):
        _, system = scalar_system(24, eta=gaussian_soliton(1.0))
        dense = solve_smallest(system.A, system.M, 6)
        iterative = solve_smallest(system.A, system.M, 6, dense_limit=0)
        npt.assert_allclose(iterative.sigmas, dense.sigmas, rtol=1e-8)

    def test_eigenvectors_are_mass_orthonormal(self):
        _, system = scalar_system(16)
        spectrum = solve_smallest(system.A, system.M, 6)
        gram = spectrum.vectors.T @ system.M.apply(spectrum.vectors)
        npt.assert_allclose(gram, np.eye(6), atol=1e-10)
        self.assertLessEqual(spectrum.residuals.max(), spectrum.tol)

    def test_rayleigh_quotient(self):
        _, system = scalar_system(12)
        spectrum = solve_smallest(system.A, system.M, 2)
        q = rayleigh_quotient(system.A, system.M, spectrum.vectors[:, 0])
        self.assertAlmostEqual(q, spectrum.sigmas[0], delta=1e-12 * spectrum.sigmas[0])

    def test_reproducible(self):
        _, system = scalar_system(24)
        a = solve_smallest(system.A, system.M, 4, dense_limit=0, seed=7)
        b = solve_smallest(system.A, system.M, 4, dense_limit=0, seed=7)
        npt.assert_array_equal(a.sigmas, b.sigmas)

    def test_drift_shift_invariance(self):
        mesh = build_mesh(rectangle(), 12)
        eta = gaussian_soliton(1.0)
        base = assemble_system(mesh, identity_tensor(), eta, vector=False)
        shifted = assemble_system(mesh, identity_tensor(), eta.shifted(5.0), vector=False)
        a = solve_smallest(base.A, base.M, 6).sigmas
        b = solve_smallest(shifted.A, shifted.M, 6).sigmas
        npt.assert_allclose(b, a, rtol=1e-12)

    def test_convergence_failure_carries_residuals(self):
        _, system = scalar_system(16)
        with self.assertRaises(ConvergenceError) as ctx:
            solve_smallest(system.A, system.M, 3, tol=1e-17, max_iter=2, dense_limit=0)
        self.assertEqual(ctx.exception.residuals.shape, (3,))

    def test_residual_scaled_by_operator_and_mass_norm(self):
        _, system = scalar_system(6)
        a, m = system.A.matrix(), system.M.matrix()
        rng = np.random.default_rng(3)
        vectors = rng.standard_normal((system.A.dimension, 2))
        sigmas = np.array([20.0, 50.0])
        residuals = relative_residuals(a, m, sigmas, vectors)
        dense_a, dense_m = a.toarray(), m.toarray()
        scale = np.abs(dense_a).sum(axis=1).max()
        for j in range(2):
            u = vectors[:, j]
            expected = np.linalg.norm(dense_a @ u - sigmas[j] * dense_m @ u) / (scale * np.sqrt(u @ dense_m @ u))
            self.assertAlmostEqual(residuals[j], expected, delta=1e-12 * expected)

    def test_residual_is_scale_invariant_in_the_vector(self):
        _, system = scalar_system(6)
        spectrum = solve_smallest(system.A, system.M, 2)
        a, m = system.A.matrix(), system.M.matrix()
        base = relative_residuals(a, m, spectrum.sigmas, spectrum.vectors)
        scaled = relative_residuals(a, m, spectrum.sigmas, 1e3 * spectrum.vectors)
        npt.assert_allclose(scaled, base, rtol=1e-10)

    def test_rayleigh_quotient_bounded_below_by_sigma_1(self):
        _, system = scalar_system(8)
        sigma_1 = solve_smallest(system.A, system.M, 1).sigmas[0]
        rng = np.random.default_rng(11)
        for x in rng.standard_normal((100, system.A.dimension)):
            self.assertGreaterEqual(rayleigh_quotient(system.A, system.M, x), sigma_1 * (1 - 1e-12))

    def test_refinement_error_ratio(self):
        mesh = build_mesh(rectangle(), 8)
        errors = []
        for _ in range(3):
            system = assemble_system(mesh, identity_tensor(), constant_drift(), vector=False)
            errors.append(solve_smallest(system.A, system.M, 1).sigmas[0] - 2 * PI2)
            mesh = refine(mesh)
        self.assertTrue(all(e > 0 for e in errors))
        self.assertTrue(3.6 <= errors[1] / errors[2] <= 4.4, errors)


class TestVectorProblem(unittest.TestCase):
    def setUp(self):
        self.mesh = build_mesh(rectangle(), 12)

    def solve(self, alpha, k, T=None, eta=None):
        T = identity_tensor() if T is None else T
        eta = constant_drift() if eta is None else eta
        system = assemble_system(self.mesh, T, eta, alpha=alpha)
        return system, solve_smallest(system.A, system.M, k)

    def test_decoupled_multiplicity(self):
        scalar = assemble_system(self.mesh, identity_tensor(), constant_drift(), vector=False)
        expected = solve_smallest(scalar.A, scalar.M, 3).sigmas
        _, spectrum = self.solve(0.0, 6)
        npt.assert_allclose(spectrum.sigmas, np.repeat(expected, 2), rtol=1e-10)

    def test_alpha_monotonicity(self):
        _, free = self.solve(0.0, 8)
        _, coupled = self.solve(1.0, 8)
        self.assertTrue(np.all(coupled.sigmas >= free.sigmas - 1e-10))
        self.assertTrue(np.all(coupled.sigmas > 0))

    def test_energy_identity(self):
        T, eta = diagonal_tensor(2.0, 3.0), gaussian_soliton(0.5)
        system, spectrum = self.solve(1.0, 8, T, eta)
        modes = mode_quantities(spectrum, system.stiffness, system.coupling, self.mesh, T, eta, 1.0)
        npt.assert_allclose(modes.t_energy + modes.divnorm, spectrum.sigmas, rtol=1e-10)
        self.assertTrue(np.all(modes.divnorm >= 0))

    def test_gradient_bound(self):
        T, eta = diagonal_tensor(2.0, 3.0), constant_drift()
        system, spectrum = self.solve(0.5, 6, T, eta)
        modes = mode_quantities(spectrum, system.stiffness, system.coupling, self.mesh, T, eta, 0.5)
        delta = 3.0
        self.assertTrue(np.all(modes.t_gradnorm_sq <= delta * (spectrum.sigmas - 0.5 * modes.divnorm) * (1 + 1e-10)))

    def test_identity_gradient_norm_equals_energy(self):
        system, spectrum = self.solve(1.0, 4)
        modes = mode_quantities(spectrum, system.stiffness, system.coupling, self.mesh, identity_tensor(), constant_drift(), 1.0)
        npt.assert_allclose(modes.t_gradnorm_sq, modes.t_energy, rtol=1e-10)

    def test_scalar_modes(self):
        scalar = assemble_system(self.mesh, identity_tensor(), constant_drift(), vector=False)
        spectrum = solve_smallest(scalar.A, scalar.M, 3)
        modes = mode_quantities(spectrum, scalar.stiffness, None, self.mesh, identity_tensor(), constant_drift(), 0.0)
        npt.assert_array_equal(modes.divnorm, 0.0)
        npt.assert_allclose(modes.t_energy, spectrum.sigmas, rtol=1e-10)


if __name__ == "__main__":
    unittest.main()
