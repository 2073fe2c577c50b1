"""Unit tests for the finite-difference reference solver."""

import math

import numpy as np
import pytest

from buoyancy.assembly import LegBasisSpec, assemble, bundled_profile
from buoyancy.eigen import build_pencil, smallest_rayleigh
from buoyancy.oracle import FdGrid, fd_blocks, fd_reference, fd_smallest_rayleigh


def test_grid_validation_and_nodes():
    with pytest.raises(ValueError):
        FdGrid(7)
    grid = FdGrid(9)
    assert grid.h == pytest.approx(0.1)
    assert np.allclose(grid.nodes(), np.arange(1, 10) * 0.1)
    assert np.allclose(np.diff(grid.nodes()), grid.h)


def test_discrete_eigenvalue_closed_form():
    # at eps = 0 the difference operator diagonalizes in sine modes, so the
    # discrete answer is exactly (a2 + (2 - 2 cos(pi h))/h^2)^3 / a2
    for m in (50, 127):
        for a2 in (4.92, 9.0):
            grid = FdGrid(m)
            h = grid.h
            mu = (2.0 - 2.0 * math.cos(math.pi * h)) / h ** 2
            expected = (a2 + mu) ** 3 / a2
            got = fd_smallest_rayleigh(grid, a2, bundled_profile("linear", 0.0))
            assert got.rayleigh_sq == pytest.approx(expected, rel=1e-10)
            assert got.residual < 1e-8
            assert got.spectrum_real


def test_classical_limit_at_m400():
    profile = bundled_profile("linear", 0.0)
    a2 = math.pi ** 2 / 2
    got = fd_smallest_rayleigh(FdGrid(400), a2, profile).rayleigh_sq
    assert got == pytest.approx(27 * math.pi ** 4 / 4, rel=5e-4)
    got = fd_smallest_rayleigh(FdGrid(400), 4.92, profile).rayleigh_sq
    assert got == pytest.approx((math.pi ** 2 + 4.92) ** 3 / 4.92, rel=5e-4)


def test_second_order_convergence_ratio():
    cases = [
        (bundled_profile("linear", 0.0), math.pi ** 2 / 2),
        (bundled_profile("mixed", 0.5), 9.0),
    ]
    for profile, a2 in cases:
        r = {m: fd_smallest_rayleigh(FdGrid(m), a2, profile).rayleigh_sq
             for m in (100, 200, 400)}
        ratio = abs(r[100] - r[200]) / abs(r[200] - r[400])
        assert 4.0 * 0.85 <= ratio <= 4.0 * 1.15, f"ratio {ratio} off for {profile.name}"


def test_richardson_reference_beats_plain_grid():
    profile = bundled_profile("linear", 0.0)
    a2 = math.pi ** 2 / 2
    exact = 27 * math.pi ** 4 / 4
    plain = fd_smallest_rayleigh(FdGrid(400), a2, profile).rayleigh_sq
    extrapolated = fd_reference(a2, profile, m=400)
    assert abs(extrapolated - exact) < abs(plain - exact) / 100
    assert extrapolated == pytest.approx(exact, rel=1e-7)


def test_oracle_matches_galerkin():
    profile = bundled_profile("linear", 0.2)
    ref = fd_reference(9.0, profile, m=400)
    mats = assemble(LegBasisSpec(16), 9.0, profile)
    galerkin = smallest_rayleigh(build_pencil(mats)).rayleigh_sq
    assert galerkin == pytest.approx(ref, rel=1e-3)
    # the published quoted-order value sits within about a percent of it
    assert ref == pytest.approx(829.44, rel=0.01)


def test_fd_blocks_shapes_and_gravity_diagonal():
    grid = FdGrid(10)
    profile = bundled_profile("mixed", 0.5)
    K, M, G = fd_blocks(grid, 4.92, profile)
    assert K.shape == M.shape == G.shape == (10, 10)
    assert np.array_equal(M, np.eye(10))
    assert np.allclose(np.diag(G), [profile.gravity(z) for z in grid.nodes()])
    assert np.count_nonzero(G - np.diag(np.diag(G))) == 0
    # tridiagonal structure of K
    assert np.count_nonzero(K - np.diag(np.diag(K)) - np.diag(np.diag(K, 1), 1)
                            - np.diag(np.diag(K, -1), -1)) == 0
