"""Finite-difference reference discretization of the same eigenproblem.

Second-order central differences on a uniform interior grid discretize the
first-order-in-operators system for (W, Psi, Theta) with Dirichlet rows
eliminated, giving an independent ground truth for both Galerkin routes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import build_pencil_blocks, smallest_rayleigh


@dataclass(frozen=True)
class FdGrid:
    """Uniform interior grid z_j = j h, j = 1..m, h = 1/(m+1)."""

    m: int

    def __post_init__(self):
        if self.m < 8:
            raise ValueError("need at least 8 interior points")

    @property
    def h(self):
        return 1.0 / (self.m + 1)

    def nodes(self):
        return np.arange(1, self.m + 1) * self.h


def fd_blocks(grid, a2, profile):
    """K = tridiag(1, -2 - a2 h^2, 1)/h^2, M = I, G = diag(1 + eps h(z_j))."""
    m = grid.m
    h = grid.h
    main = np.full(m, -2.0 / h ** 2 - a2)
    off = np.full(m - 1, 1.0 / h ** 2)
    K = np.diag(main) + np.diag(off, 1) + np.diag(off, -1)
    M = np.eye(m)
    G = np.diag(np.array([profile.gravity(z) for z in grid.nodes()]))
    return K, M, G


def fd_smallest_rayleigh(grid, a2, profile, **solver_kwargs):
    """Smallest neutral Rayleigh number on the grid, as a NeutralResult."""
    K, M, G = fd_blocks(grid, a2, profile)
    pencil = build_pencil_blocks(K, M, G, a2)
    return smallest_rayleigh(pencil, **solver_kwargs)


def fd_reference(a2, profile, m=400):
    """Richardson-extrapolated reference value R^2.

    Combines the m and m/2 grids assuming the observed second-order
    convergence: R2(h) = R2 + C h^2 gives R2 = R2(m) + (R2(m) - R2(m/2))/3.
    """
    coarse = fd_smallest_rayleigh(FdGrid(m // 2), a2, profile).rayleigh_sq
    fine = fd_smallest_rayleigh(FdGrid(m), a2, profile).rayleigh_sq
    return fine + (fine - coarse) / 3.0
