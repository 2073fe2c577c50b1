"""Shifted Chebyshev and shifted Legendre polynomials on [0, 1].

Provides the two expansion sets that satisfy the free-boundary conditions,
plus the exact coefficient-space derivative and product expansions that the
Galerkin assembly needs. Coefficient computations are done in rational
arithmetic (fractions.Fraction) and only converted to float downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb, isfinite


class BasisKind(Enum):
    SHIFTED_CHEBYSHEV = "shifted_chebyshev"
    SHIFTED_LEGENDRE = "shifted_legendre"


def _check_domain(z):
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z = {z} outside [0, 1]")


def eval_shifted_chebyshev(k, z):
    """T*_k(z) = T_k(2z - 1) by the three-term recurrence."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    _check_domain(z)
    x = 2.0 * z - 1.0
    if k == 0:
        return 1.0
    prev, cur = 1.0, x
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def eval_shifted_legendre(k, z):
    """Q_k(z) = L_k(2z - 1) by the Legendre three-term recurrence."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    _check_domain(z)
    x = 2.0 * z - 1.0
    if k == 0:
        return 1.0
    prev, cur = 1.0, x
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1) * x * cur - j * prev) / (j + 1)
    return cur


def cheb_trial_function(k, z):
    """Trial function Phi*_k = T*_k - T*_{k+2}; vanishes at z = 0 and z = 1."""
    if k < 0:
        raise ValueError("index must be nonnegative")
    return eval_shifted_chebyshev(k, z) - eval_shifted_chebyshev(k + 2, z)


def leg_trial_function(i, z):
    """Trial function phi_i = (Q_{i+1} - Q_{i-1}) / (2(2i+1)), i >= 1.

    This is the antiderivative of Q_i from 0 to z, so it vanishes at both
    endpoints by orthogonality of Q_i to Q_0.
    """
    if i < 1:
        raise ValueError("index must be >= 1")
    return (eval_shifted_legendre(i + 1, z) - eval_shifted_legendre(i - 1, z)) / (2.0 * (2 * i + 1))


@dataclass(frozen=True)
class PolyCoeffs:
    """A polynomial as coefficients c_0..c_N over T*_k or Q_k.

    Coefficients may be floats or Fractions; Fractions are kept exact until
    a caller converts.
    """

    kind: BasisKind
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 1:
            raise ValueError("need at least one coefficient")
        for c in self.coeffs:
            if not isfinite(float(c)):
                raise ValueError("coefficients must be finite")

    def eval(self, z):
        if self.kind is BasisKind.SHIFTED_CHEBYSHEV:
            basis = eval_shifted_chebyshev
        else:
            basis = eval_shifted_legendre
        return sum(float(c) * basis(k, z) for k, c in enumerate(self.coeffs))

    def coeff(self, k):
        """Coefficient of index k, zero beyond the stored length."""
        return self.coeffs[k] if k < len(self.coeffs) else Fraction(0)


@dataclass(frozen=True)
class ChebBasisSpec:
    """Chebyshev trial set Phi*_k for k = index_start .. index_start + n - 1."""

    n: int
    index_start: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one expansion function")
        if self.index_start not in (0, 1):
            raise ValueError("index_start must be 0 or 1")

    @property
    def indices(self):
        return range(self.index_start, self.index_start + self.n)


@dataclass(frozen=True)
class LegBasisSpec:
    """Legendre trial set phi_i for i = 1 .. n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one expansion function")

    @property
    def indices(self):
        return range(1, self.n + 1)


def _halve_zeroth(raw):
    """Dense tuple from an index->Fraction dict, halving the r = 0 entry.

    Sums over T*_r that start at r = 0 carry a 1/2 on the first term; this
    applies that convention once, after accumulation.
    """
    if not raw:
        return (Fraction(0),)
    top = max(raw)
    out = [raw.get(r, Fraction(0)) for r in range(top + 1)]
    out[0] = out[0] / 2
    return tuple(out)


def cheb_first_derivative(k):
    """Exact T*_r coefficients of (Phi*_k)'.

    (T*_k)' = 4k sum over r < k, k-1-r even, of T*_r; subtracting the k+2
    term gives the trial-function derivative. Empty index ranges contribute
    zero (relevant at k = 0).
    """
    if k < 0:
        raise ValueError("index must be nonnegative")
    raw = {}
    for r in range(0, k):
        if (k - 1 - r) % 2 == 0:
            raw[r] = raw.get(r, Fraction(0)) + Fraction(4 * k)
    for r in range(0, k + 2):
        if (k + 1 - r) % 2 == 0:
            raw[r] = raw.get(r, Fraction(0)) - Fraction(4 * (k + 2))
    return PolyCoeffs(BasisKind.SHIFTED_CHEBYSHEV, _halve_zeroth(raw))


def cheb_second_derivative(k):
    """Exact T*_r coefficients of (Phi*_k)''.

    (T*_k)'' = 4 sum over r <= k-2, k-r even, of (k-r)k(k+r) T*_r; the
    trial function subtracts the same expansion at k+2. The r = 0
    coefficient is halved.
    """
    if k < 0:
        raise ValueError("index must be nonnegative")
    raw = {}
    for r in range(0, k - 1):
        if (k - r) % 2 == 0:
            raw[r] = raw.get(r, Fraction(0)) + Fraction(4 * (k - r) * k * (k + r))
    for r in range(0, k + 1):
        if (k + 2 - r) % 2 == 0:
            raw[r] = raw.get(r, Fraction(0)) - Fraction(4 * (k + 2 - r) * (k + 2) * (k + 2 + r))
    return PolyCoeffs(BasisKind.SHIFTED_CHEBYSHEV, _halve_zeroth(raw))


def monomial_times_cheb(r, s):
    """Exact Chebyshev coefficients of x^r T_s(x).

    x^r T_s = (1/2^r) sum over i of C(r, i) T_{s-r+2i}, with negative
    indices folded back by T_{-m} = T_m. The identity is algebraic in the
    recurrence, so it reads verbatim for the shifted family with x = 2z - 1:
    the result is the T*-expansion of (2z-1)^r T*_s(z).
    """
    if r < 0 or s < 0:
        raise ValueError("power and degree must be nonnegative")
    raw = {}
    for i in range(r + 1):
        idx = abs(s - r + 2 * i)
        raw[idx] = raw.get(idx, Fraction(0)) + Fraction(comb(r, i), 2 ** r)
    top = max(raw)
    dense = tuple(raw.get(j, Fraction(0)) for j in range(top + 1))
    return PolyCoeffs(BasisKind.SHIFTED_CHEBYSHEV, dense)


def shifted_cheb_monomial_coeffs(k):
    """Exact monomial coefficients (ascending powers of z) of T*_k.

    Runs the recurrence T*_{j+1} = (4z - 2) T*_j - T*_{j-1} in rational
    arithmetic; used as an independent oracle for the coefficient-space
    derivative formulas.
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    prev = [Fraction(1)]
    if k == 0:
        return tuple(prev)
    cur = [Fraction(-1), Fraction(2)]
    for _ in range(k - 1):
        nxt = [Fraction(0)] * (len(cur) + 1)
        for j, c in enumerate(cur):
            nxt[j] += -2 * c
            nxt[j + 1] += 4 * c
        for j, c in enumerate(prev):
            nxt[j] -= c
        prev, cur = cur, nxt
    return tuple(cur)


def cheb_expansion_to_monomials(coeffs):
    """Monomial coefficients (ascending powers of z) of sum c_r T*_r, exact."""
    out = [Fraction(0)]
    for r, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = shifted_cheb_monomial_coeffs(r)
        if len(mono) > len(out):
            out.extend([Fraction(0)] * (len(mono) - len(out)))
        for j, m in enumerate(mono):
            out[j] += Fraction(c) * m
    return tuple(out)
