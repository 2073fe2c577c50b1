"""Galerkin matrix assembly for the two trial sets.

Builds the stiffness K = ((D^2 - a^2) chi_k, chi_i), mass M = (chi_k, chi_i)
and gravity-weighted mass G = ((1 + eps h(z)) chi_k, chi_i) matrices. The
Chebyshev path uses the weighted inner product with w*(z) = 1/sqrt(z(1-z))
and exact rational coefficient algebra; the Legendre path uses degree-exact
Gauss-Legendre quadrature of the polynomial integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .bases import (
    BasisKind,
    ChebBasisSpec,
    LegBasisSpec,
    PolyCoeffs,
    cheb_second_derivative,
    eval_shifted_legendre,
    leg_trial_function,
    monomial_times_cheb,
)

MAX_PROFILE_DEGREE = 8


@dataclass(frozen=True)
class GravityProfile:
    """Gravity variation H(z) = 1 + epsilon * h(z), h(z) = sum_j h_j z^j.

    monomial_coeffs holds h_1..h_d (no constant term; a constant offset is
    what epsilon = 0 already covers).
    """

    name: str
    monomial_coeffs: tuple
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, "monomial_coeffs", tuple(float(c) for c in self.monomial_coeffs))
        if len(self.monomial_coeffs) > MAX_PROFILE_DEGREE:
            raise ValueError(f"profile degree {len(self.monomial_coeffs)} > {MAX_PROFILE_DEGREE} unsupported")
        if not all(math.isfinite(c) for c in self.monomial_coeffs):
            raise ValueError("profile coefficients must be finite")
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0):
            raise ValueError("epsilon must be finite and >= 0")

    def h(self, z):
        acc = 0.0
        for j, hj in enumerate(self.monomial_coeffs, start=1):
            acc += hj * z ** j
        return acc

    def gravity(self, z):
        return 1.0 + self.epsilon * self.h(z)

    def min_gravity(self, samples=1001):
        zz = np.linspace(0.0, 1.0, samples)
        return float(min(self.gravity(z) for z in zz))


_FAMILIES = {
    "linear": (-1.0,),
    "quadratic": (0.0, -1.0),
    "mixed": (-2.0, 1.0),
}


def bundled_profile(family, epsilon):
    """One of the three studied decreasing-gravity profiles.

    linear: h = -z; quadratic: h = -z^2; mixed: h = z^2 - 2z.
    """
    try:
        coeffs = _FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown profile family {family!r}; choose from {sorted(_FAMILIES)}")
    return GravityProfile(family, coeffs, epsilon)


@dataclass(frozen=True)
class GalerkinMatrices:
    basis: object  # ChebBasisSpec | LegBasisSpec
    a2: float
    K: np.ndarray
    M: np.ndarray
    G: np.ndarray


def weighted_inner_product(f, g):
    """Chebyshev-weighted inner product int_0^1 f g / sqrt(z(1-z)) dz.

    For T*-expansions this is diagonal: sum_r (pi/2) c_r f_r g_r with
    c_0 = 2 and c_r = 1 otherwise. Exact rational part times pi/2.
    """
    for p in (f, g):
        if not isinstance(p, PolyCoeffs) or p.kind is not BasisKind.SHIFTED_CHEBYSHEV:
            raise ValueError("weighted inner product is defined for shifted-Chebyshev coefficients only")
    acc = Fraction(0)
    for r in range(min(len(f.coeffs), len(g.coeffs))):
        c_r = 2 if r == 0 else 1
        acc += c_r * Fraction(f.coeffs[r]) * Fraction(g.coeffs[r])
    return float(acc) * (math.pi / 2.0)


def _rational_diagonal_ip(f, g):
    """The rational part of weighted_inner_product (the pi/2 factor left off)."""
    acc = Fraction(0)
    for r in range(min(len(f), len(g))):
        c_r = 2 if r == 0 else 1
        acc += c_r * Fraction(f[r]) * Fraction(g[r])
    return acc


def _cheb_trial_coeffs(k):
    """T*-coefficients of Phi*_k = T*_k - T*_{k+2}, exact."""
    out = [Fraction(0)] * (k + 3)
    out[k] = Fraction(1)
    out[k + 2] = Fraction(-1)
    return tuple(out)


def _profile_x_coeffs(profile):
    """Coefficients beta_p of eps * h(z) written in x = 2z - 1.

    z^j = ((1 + x)/2)^j expands binomially; everything stays rational (the
    float inputs convert exactly).
    """
    d = len(profile.monomial_coeffs)
    beta = [Fraction(0)] * (d + 1)
    eps = Fraction(profile.epsilon)
    for j, hj in enumerate(profile.monomial_coeffs, start=1):
        cj = eps * Fraction(hj)
        for p in range(j + 1):
            beta[p] += cj * comb(j, p) / Fraction(2 ** j)
    return beta


def gravity_product_coeffs(profile, k):
    """Exact T*-expansion of (1 + eps h(z)) Phi*_k(z).

    The profile is rewritten as a polynomial in x = 2z - 1 and each power
    multiplies T*_k and T*_{k+2} through the monomial product rule with
    index folding.
    """
    if k < 0:
        raise ValueError("index must be nonnegative")
    if len(profile.monomial_coeffs) > MAX_PROFILE_DEGREE:
        raise ValueError("profile degree unsupported")
    out = {k: Fraction(1), k + 2: Fraction(-1)}
    beta = _profile_x_coeffs(profile)
    for p, bp in enumerate(beta):
        if bp == 0:
            continue
        for s, sign in ((k, 1), (k + 2, -1)):
            prod = monomial_times_cheb(p, s)
            for idx, c in enumerate(prod.coeffs):
                if c != 0:
                    out[idx] = out.get(idx, Fraction(0)) + sign * bp * c
    top = max(out)
    dense = tuple(out.get(j, Fraction(0)) for j in range(top + 1))
    return PolyCoeffs(BasisKind.SHIFTED_CHEBYSHEV, dense)


def _unweighted_ip_cheb(f, g):
    """Plain int_0^1 f g dz for two T*-expansions, by degree-exact quadrature."""
    deg = (len(f) - 1) + (len(g) - 1)
    q = deg // 2 + 1
    x, w = np.polynomial.legendre.leggauss(q)
    fa = np.array([float(c) for c in f])
    ga = np.array([float(c) for c in g])
    fv = np.polynomial.chebyshev.chebval(x, fa)
    gv = np.polynomial.chebyshev.chebval(x, ga)
    # z = (1 + x)/2, dz = dx/2
    return float(np.sum(w * fv * gv)) * 0.5


def _assemble_chebyshev(spec, a2, profile, weighted=True):
    idx = list(spec.indices)
    n = len(idx)
    K = np.empty((n, n))
    M = np.empty((n, n))
    G = np.empty((n, n))
    trial = {k: _cheb_trial_coeffs(k) for k in idx}
    d2 = {k: cheb_second_derivative(k).coeffs for k in idx}
    grav = {k: gravity_product_coeffs(profile, k).coeffs for k in idx}
    half_pi = math.pi / 2.0
    a2_frac = Fraction(a2)
    for col, k in enumerate(idx):
        for row, i in enumerate(idx):
            ti = trial[i]
            if weighted:
                m_r = _rational_diagonal_ip(trial[k], ti)
                k_r = _rational_diagonal_ip(d2[k], ti) - a2_frac * m_r
                g_r = _rational_diagonal_ip(grav[k], ti)
                M[row, col] = float(m_r) * half_pi
                K[row, col] = float(k_r) * half_pi
                G[row, col] = float(g_r) * half_pi
            else:
                m_e = _unweighted_ip_cheb(trial[k], ti)
                M[row, col] = m_e
                K[row, col] = _unweighted_ip_cheb(d2[k], ti) - a2 * m_e
                G[row, col] = _unweighted_ip_cheb(grav[k], ti)
    return K, M, G


def _assemble_legendre(spec, a2, profile):
    """Entries by Gauss-Legendre quadrature, exact for the polynomial degrees.

    K uses the integrated-by-parts form ((D^2 - a^2) phi_k, phi_i) =
    -(phi_k', phi_i') - a^2 (phi_k, phi_i); the boundary terms vanish since
    the trial functions are zero at the endpoints, and phi_i' = Q_i exactly.
    """
    idx = list(spec.indices)
    n = len(idx)
    deg = 2 * (idx[-1] + 1) + len(profile.monomial_coeffs)
    q = deg // 2 + 1
    x, w = np.polynomial.legendre.leggauss(q)
    z = 0.5 * (x + 1.0)
    w = 0.5 * w
    phi = np.array([[leg_trial_function(i, zz) for zz in z] for i in idx])
    dphi = np.array([[eval_shifted_legendre(i, zz) for zz in z] for i in idx])
    Hz = np.array([profile.gravity(zz) for zz in z])
    M = np.empty((n, n))
    K = np.empty((n, n))
    G = np.empty((n, n))
    for col in range(n):
        for row in range(n):
            m_e = float(np.sum(w * phi[col] * phi[row]))
            M[row, col] = m_e
            K[row, col] = -float(np.sum(w * dphi[col] * dphi[row])) - a2 * m_e
            G[row, col] = float(np.sum(w * Hz * phi[col] * phi[row]))
    return K, M, G


def assemble(basis_spec, a2, profile, weighted=True):
    """Galerkin matrices K, M, G for the given trial set, wavenumber, profile.

    weighted selects the Chebyshev inner product: True is the w*-weighted
    form that makes the T* family orthogonal; False is the plain L2 product
    (kept as a diagnostic alternative). Legendre assembly always uses the
    plain product.
    """
    if not (math.isfinite(a2) and a2 > 0):
        raise ValueError("a2 must be positive")
    if isinstance(basis_spec, ChebBasisSpec):
        K, M, G = _assemble_chebyshev(basis_spec, a2, profile, weighted=weighted)
    elif isinstance(basis_spec, LegBasisSpec):
        K, M, G = _assemble_legendre(basis_spec, a2, profile)
    else:
        raise TypeError(f"unsupported basis spec {type(basis_spec).__name__}")
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= sv[0] * 1e-14:
        raise np.linalg.LinAlgError(
            f"singular mass matrix for {basis_spec} (singular values {sv[0]:.3e}..{sv[-1]:.3e})"
        )
    return GalerkinMatrices(basis=basis_spec, a2=float(a2), K=K, M=M, G=G)


def assemble_chebyshev_by_quadrature(spec, a2, profile, nodes=64):
    """Chebyshev K, M, G by Gauss-Chebyshev quadrature, as an assembly oracle.

    Independent of the coefficient-space route: trial functions and their
    second derivatives are evaluated through numpy's Chebyshev module
    (chebder with scl = 2 accounts for x = 2z - 1), and the weighted
    integrals use the Gauss-Chebyshev rule, which absorbs w* into the
    uniform weights pi/nodes.
    """
    cheb = np.polynomial.chebyshev
    idx = list(spec.indices)
    n = len(idx)
    j = np.arange(1, nodes + 1)
    x = np.cos((2 * j - 1) * math.pi / (2 * nodes))
    z = 0.5 * (x + 1.0)
    wq = math.pi / nodes
    vals = {}
    d2vals = {}
    for k in idx:
        c = np.zeros(k + 3)
        c[k] = 1.0
        c[k + 2] = -1.0
        vals[k] = cheb.chebval(x, c)
        d2vals[k] = cheb.chebval(x, cheb.chebder(c, m=2, scl=2.0))
    Hz = np.array([profile.gravity(zz) for zz in z])
    K = np.empty((n, n))
    M = np.empty((n, n))
    G = np.empty((n, n))
    for col, k in enumerate(idx):
        for row, i in enumerate(idx):
            M[row, col] = wq * float(np.sum(vals[k] * vals[i]))
            K[row, col] = wq * float(np.sum(d2vals[k] * vals[i])) - a2 * M[row, col]
            G[row, col] = wq * float(np.sum(Hz * vals[k] * vals[i]))
    return K, M, G
