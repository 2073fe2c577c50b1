"""Neutral Rayleigh numbers as generalized eigenvalues of a matrix pencil.

The discretized system (either Galerkin basis, or the finite-difference
grid) couples W, Psi = (D^2 - a^2)W and Theta through blocks K, M, G. The
neutral condition det(A + R B) = 0 is realized as the linear pencil

    A = [[K, -M, 0], [0, K, 0], [0, 0, K]]
    B = [[0, 0, 0], [0, 0, -a2 G], [M, 0, 0]]

whose finite eigenvalues R come in +/- pairs; the smallest positive real
one squared is the neutral Rayleigh number. Small pencils go through dense
QZ; large ones use an inverse-product reduction that keeps the target
eigenvalue the dominant one, followed by an inverse-iteration polish of the
full-pencil residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class NoNeutralValueError(RuntimeError):
    """No admissible positive real eigenvalue was found."""


class ResidualError(RuntimeError):
    """Eigenpair residual exceeded tolerance; carries the residual value."""

    def __init__(self, residual, tol):
        super().__init__(f"pencil residual {residual:.3e} exceeds tolerance {tol:.1e}")
        self.residual = residual


@dataclass(frozen=True)
class PencilProblem:
    A: np.ndarray
    B: np.ndarray
    n: int
    a2: float
    K: np.ndarray
    M: np.ndarray
    G: np.ndarray


@dataclass(frozen=True)
class NeutralResult:
    rayleigh_sq: float
    r_signed: float
    eigvec: np.ndarray
    residual: float
    spectrum_real: bool
    selected_imag: float = 0.0


def build_pencil_blocks(K, M, G, a2):
    """Assemble the 3n x 3n pencil from same-sized blocks K, M, G."""
    K = np.asarray(K, dtype=float)
    M = np.asarray(M, dtype=float)
    G = np.asarray(G, dtype=float)
    n = K.shape[0]
    for name, mat in (("K", K), ("M", M), ("G", G)):
        if mat.shape != (n, n):
            raise ValueError(f"block {name} has shape {mat.shape}, expected {(n, n)}")
    A = np.zeros((3 * n, 3 * n))
    B = np.zeros((3 * n, 3 * n))
    A[:n, :n] = K
    A[:n, n:2 * n] = -M
    A[n:2 * n, n:2 * n] = K
    A[2 * n:, 2 * n:] = K
    B[n:2 * n, 2 * n:] = -a2 * G
    B[2 * n:, :n] = M
    return PencilProblem(A=A, B=B, n=n, a2=float(a2), K=K, M=M, G=G)


def build_pencil(mats):
    """Pencil from assembled Galerkin matrices."""
    return build_pencil_blocks(mats.K, mats.M, mats.G, mats.a2)


def _polish(A, B, r, x, steps=2):
    """Inverse iteration on A + rB plus a least-squares update of r.

    The shifted matrix is numerically singular at a converged eigenvalue,
    which is exactly what makes the iteration contract onto the null vector.
    """
    for _ in range(steps):
        try:
            lu = scipy.linalg.lu_factor(A + r * B)
            y = scipy.linalg.lu_solve(lu, x)
        except (scipy.linalg.LinAlgError, ValueError):
            break
        nrm = np.linalg.norm(y)
        if not np.isfinite(nrm) or nrm == 0.0:
            break
        x = y / nrm
        Bx = B @ x
        denom = float(Bx @ Bx)
        if denom == 0.0:
            break
        r = -float(Bx @ (A @ x)) / denom
    return r, x


def _realize(vec):
    """Rotate a complex eigenvector by a phase so its real part dominates."""
    piv = np.argmax(np.abs(vec))
    phase = vec[piv] / abs(vec[piv])
    out = (vec / phase).real
    return out / np.linalg.norm(out)


def _finish(pencil, r, x, residual_tol):
    res = np.linalg.norm(pencil.A @ x + r * (pencil.B @ x))
    if res > residual_tol / 10.0:
        r, x = _polish(pencil.A, pencil.B, r, x)
        res = np.linalg.norm(pencil.A @ x + r * (pencil.B @ x))
    if res > residual_tol:
        raise ResidualError(res, residual_tol)
    return r, x, float(res)


def _smallest_by_qz(pencil, reality_tol, spurious_threshold):
    ev, vr = scipy.linalg.eig(pencil.A, -pencil.B)
    finite = np.isfinite(ev) & (np.abs(ev) <= spurious_threshold)
    real = np.abs(ev.imag) <= reality_tol * (1.0 + np.abs(ev.real))
    spectrum_real = bool(np.all(real[finite]))
    cand = finite & real & (ev.real > 0)
    if not np.any(cand):
        raise NoNeutralValueError("no positive real eigenvalue below the spurious threshold")
    pick = np.where(cand)[0][np.argmin(ev.real[cand])]
    r = float(ev[pick].real)
    x = _realize(vr[:, pick])
    return r, x, spectrum_real, float(ev[pick].imag)


def _smallest_by_reduction(pencil, reality_tol, spurious_threshold):
    """Eigenvalues nu = -1/(a2 R^2) of K^-1 M K^-1 G K^-1 M.

    Eliminating Psi and Theta from the pencil gives
    W = -R^2 a2 K^-1 M K^-1 G K^-1 M W, so the smallest Rayleigh number is
    the most negative nu. The product of inverses keeps the matrix norm of
    the order of the target eigenvalue, unlike the direct cubic product
    whose norm grows like ||K||^3 and buries the answer in roundoff.
    """
    K, M, G, a2 = pencil.K, pencil.M, pencil.G, pencil.a2
    S1 = scipy.linalg.solve(K, M)
    S2 = scipy.linalg.solve(K, G)
    D = S1 @ S2 @ S1
    nu, V = np.linalg.eig(D)
    tiny = 1.0 / (a2 * spurious_threshold ** 2)
    meaningful = np.abs(nu) > tiny
    real = np.abs(nu.imag) <= reality_tol * (1.0 + np.abs(nu))
    spectrum_real = bool(np.all((real & (nu.real < 0))[meaningful]))
    cand = meaningful & real & (nu.real < 0)
    if not np.any(cand):
        raise NoNeutralValueError("no negative real reduced eigenvalue; no real neutral value exists")
    pick = np.where(cand)[0][np.argmin(nu.real[cand])]
    r_complex = 1.0 / np.sqrt(-a2 * (nu[pick] + 0j))
    r = float(r_complex.real)
    W = _realize(V[:, pick])
    Psi = scipy.linalg.solve(M, K @ W)
    Theta = -r * scipy.linalg.solve(K, M @ W)
    x = np.concatenate([W, Psi, Theta])
    return r, x / np.linalg.norm(x), spectrum_real, float(r_complex.imag)


def smallest_rayleigh(pencil, residual_tol=1e-8, reality_tol=1e-6,
                      spurious_threshold=1e12, qz_max_n=64):
    """Smallest admissible neutral Rayleigh number of the pencil.

    Solves A x = -R B x, discards infinite and out-of-range eigenvalues,
    keeps those real to within reality_tol, and returns the smallest
    positive one. qz_max_n selects dense QZ for block sizes up to that
    bound and the structured inverse reduction above it.
    """
    if pencil.n <= qz_max_n:
        r, x, spectrum_real, sel_imag = _smallest_by_qz(pencil, reality_tol, spurious_threshold)
    else:
        r, x, spectrum_real, sel_imag = _smallest_by_reduction(pencil, reality_tol, spurious_threshold)
    r, x, res = _finish(pencil, r, x, residual_tol)
    if not (np.isfinite(r) and r > 0):
        raise NoNeutralValueError(f"eigenvalue polish left the non-admissible value {r}")
    return NeutralResult(rayleigh_sq=r * r, r_signed=r, eigvec=x,
                         residual=res, spectrum_real=spectrum_real,
                         selected_imag=sel_imag)


def _det_sign(pencil, r):
    sign, _ = np.linalg.slogdet(pencil.A + r * pencil.B)
    return sign


def determinant_scan(pencil, r_min, r_max, steps):
    """Sign-change brackets of det(A + R B) on a uniform R grid.

    The determinant is evaluated through its sign and log magnitude so that
    large pencils cannot overflow. Returns (lo, hi) pairs; [] if the sign
    never changes.
    """
    if not (0 < r_min < r_max):
        raise ValueError("need 0 < r_min < r_max")
    if steps < 2:
        raise ValueError("need at least 2 scan points")
    grid = np.linspace(r_min, r_max, steps)
    signs = [_det_sign(pencil, r) for r in grid]
    brackets = []
    for i in range(len(grid) - 1):
        if signs[i] * signs[i + 1] < 0:
            brackets.append((float(grid[i]), float(grid[i + 1])))
        elif signs[i + 1] == 0 and signs[i] != 0:
            brackets.append((float(grid[i]), float(grid[i + 1])))
    return brackets


def refine_bracket(pencil, lo, hi, rel_tol=1e-10):
    """Bisect a sign-change bracket of det(A + R B) to relative width rel_tol."""
    s_lo = _det_sign(pencil, lo)
    s_hi = _det_sign(pencil, hi)
    if s_lo * s_hi > 0:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > rel_tol * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        s_mid = _det_sign(pencil, mid)
        if s_mid == 0:
            return mid
        if s_mid * s_lo < 0:
            hi = mid
        else:
            lo, s_lo = mid, s_mid
    return 0.5 * (lo + hi)
