"""Parameter sweeps, table reproduction, and critical-point search.

Holds the published reference tables for the three gravity profiles, the
one-time calibration that fixes the Chebyshev index range, and the sweep
drivers used by the command-line front end.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .assembly import ChebBasisSpec, LegBasisSpec, assemble, bundled_profile
from .eigen import build_pencil, smallest_rayleigh
from .oracle import FdGrid, fd_reference, fd_smallest_rayleigh


class BracketError(RuntimeError):
    """The search bracket does not contain an interior minimum."""


def classical_r2(a2):
    """Closed-form neutral value (pi^2 + a2)^3 / a2 for constant gravity."""
    return (math.pi ** 2 + a2) ** 3 / a2


# The nine (epsilon, a2) parameter pairs shared by all three published tables,
# in row order.
TABLE_PARAMS = (
    (0.0, 4.92),
    (0.01, 4.92),
    (0.03, 4.92),
    (0.33, 4.92),
    (0.2, 5.00),
    (0.2, 9.00),
    (0.5, 7.5),
    (0.5, 9.00),
    (0.75, 10.0),
)

# Published reference values, kept verbatim as strings so comparison views can
# render them exactly as printed; convert with float() for numerics.
PUBLISHED = {
    "linear": {
        "scp": ("657.512", "660.747", "667.653", "787.363", "730.459",
                "829.44", "930.982", "994.393", "1251.178"),
        "slp": ("675.05", "678.45", "685.33", "808.303", "749.95",
                "846.70", "952.07", "1015.27", "1276.05"),
    },
    "quadratic": {
        "scp": ("657.512", "659.41", "663.17", "725.06", "696.80",
                "791.24", "813.28", "868.72", "993.51"),
        "slp": ("675.05", "676.99", "680.90", "745.21", "715.87",
                "808.22", "833.21", "888.54", "1016.20"),
    },
    "mixed": {
        "scp": ("657.512", "662.29", "671.95", "861.25", "767.40",
                "871.37", "1088.2", "1162.4", "1687.8"),
        "slp": ("675.05", "679.91", "689.83", "882.05", "787.44",
                "889.03", "1110.46", "1184.11", "1713.45"),
    },
}

FAMILIES = tuple(PUBLISHED)


@dataclass(frozen=True)
class TableRow:
    epsilon: float
    a2: float
    r2_scp: float
    r2_slp: float

    def __post_init__(self):
        if not (self.r2_scp > 0 and self.r2_slp > 0):
            raise ValueError("Rayleigh numbers must be positive")


@dataclass(frozen=True)
class CriticalPoint:
    a2_crit: float
    r2_crit: float
    profile: object
    method: str


def _map_ordered(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


def _cheb_r2(n_funcs, a2, profile):
    mats = assemble(ChebBasisSpec(n_funcs), a2, profile)
    return smallest_rayleigh(build_pencil(mats)).rayleigh_sq


_calibration = None


def calibration_info():
    """Resolve the Chebyshev index-range ambiguity once and freeze the choice.

    An expansion order quoted as n could mean trial indices k = 0..n-1 or
    k = 0..n. Both candidates are evaluated on the first published table row
    (linear profile, eps = 0, a2 = 4.92) and whichever lands closer to the
    published 657.512 is kept for every later table reproduction.
    """
    global _calibration
    if _calibration is None:
        n = 4
        target = float(PUBLISHED["linear"]["scp"][0])
        profile = bundled_profile("linear", 0.0)
        a2 = TABLE_PARAMS[0][1]
        exclusive = _cheb_r2(n, a2, profile)
        inclusive = _cheb_r2(n + 1, a2, profile)
        chosen = "0..n" if abs(inclusive - target) <= abs(exclusive - target) else "0..n-1"
        _calibration = {
            "requested_n": n,
            "target": target,
            "candidates": {"0..n-1": exclusive, "0..n": inclusive},
            "chosen_span": chosen,
        }
    return _calibration


def calibrated_cheb_spec(n, calibration="auto"):
    """ChebBasisSpec realizing a quoted order n under the frozen calibration."""
    if calibration == "auto":
        calibration = calibration_info()["chosen_span"]
    if calibration == "0..n":
        return ChebBasisSpec(n + 1)
    if calibration == "0..n-1":
        return ChebBasisSpec(n)
    raise ValueError(f"unknown calibration {calibration!r}")


def solve_neutral(method, profile, a2, n=4, fd_m=400, calibration="auto"):
    """One neutral-value solve by the named method: scp, slp, or fd."""
    if method == "fd":
        return fd_smallest_rayleigh(FdGrid(fd_m), a2, profile)
    if method == "scp":
        spec = calibrated_cheb_spec(n, calibration)
    elif method == "slp":
        spec = LegBasisSpec(n)
    else:
        raise ValueError(f"unknown method {method!r}; choose scp, slp, or fd")
    return smallest_rayleigh(build_pencil(assemble(spec, a2, profile)))


def reproduce_table(family, n=4, calibration="auto", workers=1):
    """Both spectral columns for the nine published rows of one profile family."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")

    def one(params):
        eps, a2 = params
        profile = bundled_profile(family, eps)
        try:
            scp = solve_neutral("scp", profile, a2, n=n, calibration=calibration).rayleigh_sq
            slp = solve_neutral("slp", profile, a2, n=n).rayleigh_sq
        except Exception as exc:
            raise RuntimeError(f"row (eps={eps}, a2={a2}) of {family} table failed: {exc}") from exc
        return TableRow(epsilon=eps, a2=a2, r2_scp=scp, r2_slp=slp)

    return _map_ordered(one, TABLE_PARAMS, workers)


def neutral_curve(method, profile, a2_grid, n=8, fd_m=400, workers=1):
    """R^2 along an increasing a2 grid; failed points are warned and skipped."""
    grid = [float(a) for a in a2_grid]
    if any(a <= 0 for a in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("a2 grid must be positive and strictly increasing")

    def one(a2):
        try:
            return a2, solve_neutral(method, profile, a2, n=n, fd_m=fd_m).rayleigh_sq
        except Exception as exc:
            warnings.warn(f"neutral curve: skipping a2={a2}: {exc}")
            return None

    return [pt for pt in _map_ordered(one, grid, workers) if pt is not None]


def critical_point(method, profile, a2_lo, a2_hi, n=8, fd_m=400,
                   tol=1e-4, scan_points=50, workers=1):
    """Minimize R^2 over a2 in [a2_lo, a2_hi] by golden-section search.

    Converges to |delta a2| < tol with ties broken toward smaller a2, then
    verifies on a scan grid that the result is a true interior minimum of
    the bracket; a minimum sitting on the bracket edge raises BracketError.
    """
    if not (0 < a2_lo < a2_hi):
        raise ValueError("need 0 < a2_lo < a2_hi")

    def f(a2):
        return solve_neutral(method, profile, a2, n=n, fd_m=fd_m).rayleigh_sq

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = a2_lo, a2_hi
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
    a2_crit = x1 if f1 <= f2 else x2
    r2_crit = f1 if f1 <= f2 else f2

    step = (a2_hi - a2_lo) / (scan_points - 1)
    scan = neutral_curve(method, profile,
                         [a2_lo + i * step for i in range(scan_points)],
                         n=n, fd_m=fd_m, workers=workers)
    values = [r2 for _, r2 in scan]
    imin = values.index(min(values))
    if imin in (0, len(values) - 1):
        raise BracketError(
            f"minimum of R^2 sits at the bracket edge a2={scan[imin][0]:.6g}; widen the range"
        )
    slack = 1e-9 * (1.0 + abs(r2_crit))
    if r2_crit > min(values) + slack:
        raise BracketError("golden-section result exceeds a scanned value; bracket is not unimodal")
    return CriticalPoint(a2_crit=a2_crit, r2_crit=r2_crit, profile=profile,
                         method=method)


def slp_deviation_report(n_low=4, n_high=16, fd_m=400, workers=1, fd_values=None):
    """Deviation report for the Legendre column of the published tables.

    The published Legendre values are reproduced not by the quoted order
    n = 4 but by the two-term truncation n = 2 (the quoted-order results
    are far more accurate than the published column). This report tabulates
    published vs n = 2, n = n_low and n = n_high values with the
    finite-difference reference, so the discrepancy is documented instead
    of force-matched.

    fd_values may supply precomputed references keyed (family, row_index).
    """
    tasks = [(family, i, eps, a2)
             for family in FAMILIES
             for i, (eps, a2) in enumerate(TABLE_PARAMS)]

    def one(task):
        family, i, eps, a2 = task
        profile = bundled_profile(family, eps)
        slp2 = solve_neutral("slp", profile, a2, n=2).rayleigh_sq
        slp_low = solve_neutral("slp", profile, a2, n=n_low).rayleigh_sq
        slp_high = solve_neutral("slp", profile, a2, n=n_high).rayleigh_sq
        if fd_values is not None and (family, i) in fd_values:
            ref = fd_values[(family, i)]
        else:
            ref = fd_reference(a2, profile, m=fd_m)
        return task, slp2, slp_low, slp_high, ref

    rows = _map_ordered(one, tasks, workers)
    lines = [
        "Legendre column deviation report",
        f"columns: published | n=2 | n={n_low} | n={n_high} | fd reference (m={fd_m}, extrapolated)",
    ]
    max_pub_vs_2 = 0.0
    max_high_vs_fd = 0.0
    for (family, i, eps, a2), slp2, slp_low, slp_high, ref in rows:
        pub = float(PUBLISHED[family]["slp"][i])
        dev2 = abs(slp2 - pub) / pub
        devf = abs(slp_high - ref) / ref
        max_pub_vs_2 = max(max_pub_vs_2, dev2)
        max_high_vs_fd = max(max_high_vs_fd, devf)
        lines.append(
            f"{family:>9} eps={eps:<5g} a2={a2:<5g} published={pub:<9g} "
            f"n2={slp2:<12.6f} n{n_low}={slp_low:<12.6f} n{n_high}={slp_high:<12.6f} fd={ref:<12.6f} "
            f"|n2-published|/published={dev2:.2%}"
        )
    lines.append(f"max relative gap, published vs n=2 reconstruction: {max_pub_vs_2:.3%}")
    lines.append(f"max relative gap, n={n_high} vs fd reference: {max_high_vs_fd:.4%}")
    lines.append("conclusion: the published column matches the n=2 truncation; "
                 "the quoted-order and converged values agree with the fd reference instead")
    return "\n".join(lines)
