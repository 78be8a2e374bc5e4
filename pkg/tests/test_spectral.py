import numpy as np
import pytest

import akgrowth as ak
from akgrowth import (
    Grid,
    GridFunction,
    GridMismatchError,
    OperatorMatrix,
    PositivityError,
    SpectrumCollisionError,
    inner_l2,
)

TWO_PI = 2.0 * np.pi

# leading eigenvalues of sigma=1, A(theta) = 1 + 0.5*cos(theta), frozen from an
# independent Fourier-Galerkin oracle (coefficient-space truncation at 256 modes)
GALERKIN_LAMBDA0 = 1.1137846510470
GALERKIN_LAMBDA1 = 0.0207438067371


def homogeneous_params(grid, sigma=1.0, A0=1.0, rho=0.75, gamma=0.5):
    one = GridFunction.constant(grid, 1.0)
    return ak.ModelParams(
        sigma=sigma, rho=rho, gamma=gamma, q=0.0,
        A=GridFunction.constant(grid, A0), eta=one,
    )


class TestModelParams:
    def test_rejects_gamma_one(self):
        grid = Grid(16)
        with pytest.raises(ValueError):
            homogeneous_params(grid, gamma=1.0)

    @pytest.mark.parametrize("field,value", [("sigma", 0.0), ("rho", -1.0), ("q", -0.1)])
    def test_rejects_bad_scalars(self, field, value):
        grid = Grid(16)
        kwargs = dict(sigma=1.0, rho=1.0, gamma=0.5, q=0.0)
        kwargs[field] = value
        one = GridFunction.constant(grid, 1.0)
        with pytest.raises(ValueError):
            ak.ModelParams(A=one, eta=one, **kwargs)

    def test_rejects_nonpositive_profiles(self):
        grid = Grid(16)
        one = GridFunction.constant(grid, 1.0)
        signed = GridFunction.from_callable(grid, np.sin)
        with pytest.raises(ValueError):
            ak.ModelParams(sigma=1.0, rho=1.0, gamma=0.5, q=0.0, A=signed, eta=one)

    def test_rejects_profile_grid_mismatch(self):
        with pytest.raises(GridMismatchError):
            ak.ModelParams(
                sigma=1.0, rho=1.0, gamma=0.5, q=0.0,
                A=GridFunction.constant(Grid(16), 1.0),
                eta=GridFunction.constant(Grid(32), 1.0),
            )


class TestAssemble:
    def test_pure_diffusion_on_cosine(self):
        grid = Grid(64)
        # A is strictly positive by contract; emulate A == 0 with the raw matrix
        d2 = ak.fourier_second_derivative(64)
        cos = np.cos(grid.nodes)
        np.testing.assert_allclose(d2 @ cos, -cos, atol=1e-10)

    def test_constant_profile_on_constant(self):
        grid = Grid(64)
        op = ak.assemble_generator(homogeneous_params(grid), grid)
        one = GridFunction.constant(grid, 1.0)
        np.testing.assert_allclose(op.apply(one).values, 1.0, atol=1e-10)

    @pytest.mark.parametrize("n", [16, 128])
    def test_diffusion_row_sums_vanish(self, n):
        d2 = ak.fourier_second_derivative(n)
        assert np.abs(d2.sum(axis=1)).max() < 1e-10

    def test_symmetry(self):
        grid = Grid(128)
        A = GridFunction.from_callable(grid, lambda t: 1 + 0.5 * np.cos(t))
        eta = GridFunction.constant(grid, 1.0)
        params = ak.ModelParams(sigma=0.7, rho=1.0, gamma=0.5, q=0.0, A=A, eta=eta)
        op = ak.assemble_generator(params, grid)
        assert op.symmetry_defect() <= 1e-12 * np.abs(op.entries).max()

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatchError):
            ak.assemble_generator(homogeneous_params(Grid(16)), Grid(32))


class TestEigendecompose:
    def test_homogeneous_closed_form(self):
        grid = Grid(128)
        A0, sigma = 1.3, 0.7
        basis = ak.eigendecompose(
            ak.assemble_generator(homogeneous_params(grid, sigma=sigma, A0=A0), grid)
        )
        assert basis.lambda0 == pytest.approx(A0, abs=1e-9)
        assert basis.eigenvalues[1] == pytest.approx(A0 - sigma, abs=1e-9)
        assert basis.eigenvalues[2] == pytest.approx(A0 - sigma, abs=1e-9)
        assert np.abs(basis.b0.values - 1.0 / np.sqrt(TWO_PI)).max() < 1e-9

    def test_homogeneous_mode_pairs(self, window):
        # pairs A0 - sigma*k^2 below the Nyquist mode
        lam = window.basis.eigenvalues
        for k in range(1, 6):
            expected = 1.0 - float(k**2)
            assert lam[2 * k - 1] == pytest.approx(expected, abs=1e-9)
            assert lam[2 * k] == pytest.approx(expected, abs=1e-9)

    def test_variable_profile_against_galerkin_oracle(self, variable):
        assert variable.basis.lambda0 == pytest.approx(GALERKIN_LAMBDA0, abs=1e-8)
        assert variable.basis.lambda1 == pytest.approx(GALERKIN_LAMBDA1, abs=1e-8)
        assert variable.basis.lambda0 - variable.basis.lambda1 > 1e-3
        assert variable.basis.b0.values.min() > 0

    def test_variable_profile_resolution_stability(self, variable):
        grid = Grid(256)
        A = GridFunction.from_callable(grid, lambda t: 1 + 0.5 * np.cos(t))
        eta = GridFunction.from_callable(grid, lambda t: 1 + 0.3 * np.sin(2 * t))
        params = ak.ModelParams(sigma=1.0, rho=0.8, gamma=0.5, q=0.5, A=A, eta=eta)
        fine = ak.eigendecompose(ak.assemble_generator(params, grid))
        assert abs(fine.lambda0 - variable.basis.lambda0) < 1e-8

    def test_orthonormality(self, variable):
        basis = variable.basis
        weight = basis.grid.weight
        gram = weight * basis.vectors.T @ basis.vectors
        assert np.abs(gram - np.eye(basis.grid.n_points)).max() < 1e-8

    def test_b0_normalized(self, window):
        assert abs(inner_l2(window.basis.b0, window.basis.b0) - 1.0) < 1e-10

    def test_positivity_violation_detected(self):
        # symmetric matrix whose leading eigenvector has zero entries
        grid = Grid(8)
        op = OperatorMatrix(np.diag(np.arange(8.0)), grid)
        with pytest.raises(PositivityError):
            ak.eigendecompose(op)


class TestResolvent:
    def test_eigenvector_identity(self, variable):
        # with mu = lambda0 - 1 the resolvent leaves b0 unchanged
        basis = variable.basis
        mu = basis.lambda0 - 1.0
        out = ak.resolvent_apply(basis, mu, basis.b0)
        np.testing.assert_allclose(out.values, basis.b0.values, atol=1e-10)

    def test_inverse_property(self, variable):
        basis, op = variable.basis, variable.op
        rng = np.random.default_rng(5)
        x = GridFunction(basis.grid, rng.standard_normal(basis.grid.n_points))
        mu = 0.31
        r = ak.resolvent_apply(basis, mu, x)
        back = op.entries @ r.values - mu * r.values
        np.testing.assert_allclose(back, x.values, atol=1e-8)

    def test_pole_collision(self, window):
        basis = window.basis
        with pytest.raises(SpectrumCollisionError):
            ak.resolvent_apply(basis, basis.lambda1, basis.b0)


class TestSemigroup:
    def test_identity_at_zero(self, variable):
        basis = variable.basis
        x = GridFunction.from_callable(basis.grid, lambda t: 1 + 0.2 * np.sin(t))
        np.testing.assert_allclose(
            ak.semigroup_apply(basis, 0.0, x).values, x.values, atol=1e-12
        )

    def test_eigenvector_flow(self, window):
        basis = window.basis
        t = 0.7
        out = ak.semigroup_apply(basis, t, basis.b0)
        np.testing.assert_allclose(
            out.values, np.exp(basis.lambda0 * t) * basis.b0.values, rtol=1e-10
        )

    def test_preserves_strict_positivity(self, window):
        basis = window.basis
        rng = np.random.default_rng(11)
        x = GridFunction(basis.grid, 0.5 + rng.random(basis.grid.n_points))
        out = ak.semigroup_apply(basis, 0.5, x)
        assert out.values.min() > 0

    @pytest.mark.parametrize("t", [0.1, 0.5, 2.0])
    def test_preserves_nonnegativity(self, variable, t):
        # nonnegative data may touch zero; the flow stays above -1e-10
        x = GridFunction.from_callable(variable.grid, lambda s: 1.0 + np.cos(s))
        out = ak.semigroup_apply(variable.basis, t, x)
        assert out.values.min() > -1e-10

    def test_semigroup_property(self, variable):
        basis = variable.basis
        x = GridFunction.from_callable(basis.grid, lambda t: 1 + 0.3 * np.cos(2 * t))
        t, s = 0.4, 0.9
        once = ak.semigroup_apply(basis, t + s, x)
        twice = ak.semigroup_apply(basis, t, ak.semigroup_apply(basis, s, x))
        scale = np.abs(once.values).max()
        assert np.abs(once.values - twice.values).max() < 1e-8 * scale

    def test_negative_time_rejected(self, window):
        with pytest.raises(ValueError):
            ak.semigroup_apply(window.basis, -0.1, window.basis.b0)

    def test_self_adjointness(self, variable):
        basis, op = variable.basis, variable.op
        rng = np.random.default_rng(3)
        x = GridFunction(basis.grid, rng.standard_normal(basis.grid.n_points))
        y = GridFunction(basis.grid, rng.standard_normal(basis.grid.n_points))
        lhs = inner_l2(op.apply(x), y)
        rhs = inner_l2(x, op.apply(y))
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))
