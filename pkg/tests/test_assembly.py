"""Unit tests for Galerkin matrix assembly."""

import math

import numpy as np
import pytest

from buoyancy.assembly import (
    GravityProfile,
    assemble,
    assemble_chebyshev_by_quadrature,
    bundled_profile,
    gravity_product_coeffs,
    weighted_inner_product,
)
from buoyancy.bases import (
    BasisKind,
    ChebBasisSpec,
    LegBasisSpec,
    PolyCoeffs,
    cheb_trial_function,
)


def test_gravity_profile_validation():
    with pytest.raises(ValueError):
        GravityProfile("too_steep", tuple(range(1, 10)), 0.1)
    with pytest.raises(ValueError):
        GravityProfile("bad_eps", (-1.0,), -0.5)
    with pytest.raises(ValueError):
        bundled_profile("cubic", 0.1)
    p = bundled_profile("mixed", 0.5)
    assert p.h(1.0) == pytest.approx(-1.0)
    assert p.gravity(1.0) == pytest.approx(0.5)


def test_bundled_profiles_keep_gravity_nonnegative():
    # largest epsilon used per family in the published tables
    for family, eps in (("linear", 0.75), ("quadratic", 0.75), ("mixed", 0.75)):
        assert bundled_profile(family, eps).min_gravity() >= 0.0


def test_legendre_small_entries():
    p0 = bundled_profile("linear", 0.0)
    mats = assemble(LegBasisSpec(1), 4.92, p0)
    assert mats.M[0, 0] == pytest.approx(1.0 / 30.0, abs=1e-14)
    assert mats.K[0, 0] == pytest.approx(-1.0 / 3.0 - 4.92 / 30.0, abs=1e-13)
    # the a2 -> 0 limit of K is -(Q_1, Q_1) = -1/3; check via two values
    mats2 = assemble(LegBasisSpec(1), 1e-9, p0)
    assert mats2.K[0, 0] == pytest.approx(-1.0 / 3.0, abs=1e-9)
    p1 = bundled_profile("linear", 1.0)
    g = assemble(LegBasisSpec(1), 4.92, p1)
    assert g.G[0, 0] == pytest.approx(1.0 / 60.0, abs=1e-14)


def test_gravity_equals_mass_at_zero_epsilon():
    for spec in (ChebBasisSpec(6), LegBasisSpec(6)):
        for family in ("linear", "quadratic", "mixed"):
            mats = assemble(spec, 4.92, bundled_profile(family, 0.0))
            assert np.array_equal(mats.G, mats.M)


def test_gravity_block_linear_in_epsilon():
    for spec in (ChebBasisSpec(5), LegBasisSpec(5)):
        for family in ("linear", "quadratic", "mixed"):
            m1 = assemble(spec, 7.5, bundled_profile(family, 0.25))
            m2 = assemble(spec, 7.5, bundled_profile(family, 0.5))
            lhs = m2.G - m1.M
            rhs = 2.0 * (m1.G - m1.M)
            assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_legendre_symmetry_and_definiteness():
    for a2 in (1.0, 4.92, 9.0, 10.0):
        mats = assemble(LegBasisSpec(12), a2, bundled_profile("mixed", 0.5))
        for mat in (mats.K, mats.M, mats.G):
            assert np.max(np.abs(mat - mat.T)) < 1e-12
        assert np.all(np.linalg.eigvalsh(mats.K) < 0)
        assert np.all(np.linalg.eigvalsh(mats.M) > 0)


def test_legendre_mass_bandwidth():
    mats = assemble(LegBasisSpec(12), 4.92, bundled_profile("linear", 0.0))
    idx = list(range(1, 13))
    for a, i in enumerate(idx):
        for b, k in enumerate(idx):
            if abs(i - k) not in (0, 2):
                assert abs(mats.M[a, b]) < 1e-13


def test_chebyshev_analytic_matches_quadrature():
    for family, eps in (("linear", 0.33), ("quadratic", 0.75), ("mixed", 0.5)):
        profile = bundled_profile(family, eps)
        spec = ChebBasisSpec(8)
        mats = assemble(spec, 4.92, profile)
        Kq, Mq, Gq = assemble_chebyshev_by_quadrature(spec, 4.92, profile, nodes=64)
        assert np.max(np.abs(mats.K - Kq)) < 1e-9
        assert np.max(np.abs(mats.M - Mq)) < 1e-9
        assert np.max(np.abs(mats.G - Gq)) < 1e-9


def test_weighted_inner_product_values():
    t0 = PolyCoeffs(BasisKind.SHIFTED_CHEBYSHEV, (1.0,))
    t1 = PolyCoeffs(BasisKind.SHIFTED_CHEBYSHEV, (0.0, 1.0))
    t2 = PolyCoeffs(BasisKind.SHIFTED_CHEBYSHEV, (0.0, 0.0, 1.0))
    t3 = PolyCoeffs(BasisKind.SHIFTED_CHEBYSHEV, (0.0, 0.0, 0.0, 1.0))
    assert weighted_inner_product(t0, t0) == pytest.approx(math.pi, abs=1e-15)
    assert weighted_inner_product(t3, t3) == pytest.approx(math.pi / 2, abs=1e-15)
    assert weighted_inner_product(t1, t2) == 0.0


def test_weighted_inner_product_rejects_other_kinds():
    t1 = PolyCoeffs(BasisKind.SHIFTED_CHEBYSHEV, (0.0, 1.0))
    q1 = PolyCoeffs(BasisKind.SHIFTED_LEGENDRE, (0.0, 1.0))
    with pytest.raises(ValueError):
        weighted_inner_product(t1, q1)
    with pytest.raises(ValueError):
        weighted_inner_product(q1, q1)


def test_gravity_product_coeffs_pointwise():
    zz = np.linspace(0.0, 1.0, 21)
    cases = [
        (bundled_profile("linear", 1.0), 0),
        (bundled_profile("mixed", 0.5), 2),
        (bundled_profile("quadratic", 0.75), 3),
    ]
    for profile, k in cases:
        p = gravity_product_coeffs(profile, k)
        for z in zz:
            direct = profile.gravity(z) * cheb_trial_function(k, z)
            assert p.eval(z) == pytest.approx(direct, abs=1e-12)


def test_gravity_product_coeffs_trivial_epsilon():
    p = gravity_product_coeffs(bundled_profile("linear", 0.0), 3)
    assert [float(c) for c in p.coeffs] == [0.0, 0.0, 0.0, 1.0, 0.0, -1.0]


def test_assemble_rejects_bad_inputs():
    with pytest.raises(ValueError):
        assemble(ChebBasisSpec(4), -1.0, bundled_profile("linear", 0.0))
    with pytest.raises(TypeError):
        assemble("not a spec", 4.92, bundled_profile("linear", 0.0))


def test_unweighted_variant_converges_to_same_answer():
    # the plain-L2 Chebyshev projection is a different discretization of the
    # same problem, so at moderate order it must agree with the closed form
    from buoyancy.eigen import build_pencil, smallest_rayleigh

    profile = bundled_profile("linear", 0.0)
    a2 = math.pi ** 2 / 2
    mats = assemble(ChebBasisSpec(10), a2, profile, weighted=False)
    r2 = smallest_rayleigh(build_pencil(mats)).rayleigh_sq
    exact = 27 * math.pi ** 4 / 4
    assert r2 == pytest.approx(exact, rel=1e-3)
