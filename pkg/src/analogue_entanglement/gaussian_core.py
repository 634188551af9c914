"""Phase-space primitives for Gaussian states.

Conventions: quadratures are ordered (q1, p1, q2, p2, ...), with
q = (a + a^dag)/sqrt(2) and p = -i(a - a^dag)/sqrt(2).  Covariance
matrices are normalized so that the vacuum is the identity.  Temperatures
are in natural units (hbar = k_B = 1), i.e. they carry the unit of an
angular frequency.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NotSymplecticError, UnphysicalStateError

DEFAULT_TOL = 1e-9

PARTIAL_TRANSPOSE = np.diag([1.0, -1.0, 1.0, 1.0])

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with one [[0, 1], [-1, 0]] block per mode."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise DomainError(f"n_modes must be a positive integer, got {n_modes!r}")
    return np.kron(np.eye(int(n_modes)), _J)


def _n_modes(matrix: np.ndarray) -> int:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
        raise ValueError(f"expected a square 2n x 2n matrix, got shape {matrix.shape}")
    return matrix.shape[0] // 2


def symplectic_residual(s: np.ndarray) -> float:
    """max |S Omega S^T - Omega|."""
    s = np.asarray(s, dtype=float)
    omega = symplectic_form(_n_modes(s))
    return float(np.max(np.abs(s @ omega @ s.T - omega)))


def is_symplectic(s: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    # rounding in S Omega S^T grows with |S|^2, so the bound is relative for large S
    s = np.asarray(s, dtype=float)
    scale = max(1.0, float(np.max(np.abs(s))) ** 2)
    return symplectic_residual(s) <= tol * scale


def thermal_factor(omega: float, temperature: float) -> float:
    """coth(omega / 2T), with the T = 0 limit taken exactly as 1."""
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega!r}")
    if temperature < 0:
        raise DomainError(f"temperature must be nonnegative, got {temperature!r}")
    if temperature == 0:
        return 1.0
    return 1.0 / math.tanh(omega / (2.0 * temperature))


def thermal_cm(omega_in: float, temperature: float) -> np.ndarray:
    """Two-mode thermal covariance matrix coth(omega_in / 2T) * 1_4."""
    return thermal_factor(omega_in, temperature) * np.eye(4)


def apply_symplectic(s: np.ndarray, gamma: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return S Gamma S^T, symmetrized against rounding asymmetry."""
    s = np.asarray(s, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if s.shape != gamma.shape:
        raise ValueError(f"dimension mismatch: S is {s.shape}, Gamma is {gamma.shape}")
    if not is_symplectic(s, tol):
        raise NotSymplecticError(
            f"matrix is not symplectic (residual {symplectic_residual(s):.3e})"
        )
    out = s @ gamma @ s.T
    return 0.5 * (out + out.T)


def reduced_cm(gamma: np.ndarray, mode_index: int) -> np.ndarray:
    """2x2 diagonal block of a two-mode covariance matrix."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (4, 4):
        raise ValueError(f"expected a 4x4 covariance matrix, got {gamma.shape}")
    if mode_index not in (0, 1):
        raise IndexError(f"mode_index must be 0 or 1, got {mode_index!r}")
    i = 2 * mode_index
    return gamma[i : i + 2, i : i + 2].copy()


def _two_mode_blocks(gamma):
    return gamma[:2, :2], gamma[2:, 2:], gamma[:2, 2:]


def _eigs_from_invariants(delta: float, det: float) -> tuple[float, float]:
    # nu_pm^2 = (delta +- sqrt(delta^2 - 4 det)) / 2, small root taken in the
    # cancellation-free form det / nu_plus^2
    disc = math.sqrt(max(delta * delta - 4.0 * det, 0.0))
    nu_plus_sq = 0.5 * (delta + disc)
    nu_minus_sq = det / nu_plus_sq if nu_plus_sq > 0 else 0.0
    return math.sqrt(max(nu_plus_sq, 0.0)), math.sqrt(max(nu_minus_sq, 0.0))


def williamson_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a positive-definite matrix, ascending.

    Spectrum of the Hermitian matrix i L^T Omega L with gamma = L L^T, which
    stays accurate when eigenvalues are degenerate.
    """
    gamma = np.asarray(gamma, dtype=float)
    n = _n_modes(gamma)
    chol = np.linalg.cholesky(0.5 * (gamma + gamma.T))
    ev = np.linalg.eigvalsh(1j * chol.T @ symplectic_form(n) @ chol)
    return np.sort(ev[n:])


def symplectic_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a covariance matrix, ascending."""
    return williamson_eigenvalues(gamma)


def is_physical(gamma: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Uncertainty relation Gamma + i Omega >= 0, within ``tol`` relative to |Gamma|."""
    gamma = np.asarray(gamma, dtype=float)
    scale = max(1.0, float(np.max(np.abs(gamma))))
    if not np.allclose(gamma, gamma.T, rtol=0.0, atol=tol * scale):
        return False
    herm = 0.5 * (gamma + gamma.T) + 1j * symplectic_form(_n_modes(gamma))
    return bool(np.linalg.eigvalsh(herm)[0] >= -tol * scale)


def _require_physical(gamma, tol):
    if not is_physical(gamma, tol):
        herm = 0.5 * (gamma + gamma.T) + 1j * symplectic_form(_n_modes(gamma))
        raise UnphysicalStateError(
            f"covariance matrix is unphysical (min eigenvalue of Gamma + i Omega "
            f"{np.linalg.eigvalsh(herm)[0]:.6g})"
        )


def ppt_nu_minus(gamma: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """Smaller symplectic eigenvalue of the partially transposed two-mode CM.

    Uses the invariants Delta~ = det A + det B - 2 det C and det Gamma.  Values
    below 1 certify entanglement.  When the two partially transposed
    eigenvalues nearly coincide the square root in the invariant formula
    loses half the digits, and the Hermitian eigenvalue route is used instead.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (4, 4):
        raise ValueError(f"expected a 4x4 covariance matrix, got {gamma.shape}")
    _require_physical(gamma, tol)
    a, b, c = _two_mode_blocks(gamma)
    delta_pt = np.linalg.det(a) + np.linalg.det(b) - 2.0 * np.linalg.det(c)
    det = np.linalg.det(gamma)
    if delta_pt * delta_pt - 4.0 * det < 1e-6 * delta_pt * delta_pt:
        return ppt_nu_minus_eig(gamma)
    return _eigs_from_invariants(delta_pt, det)[1]


def ppt_nu_minus_eig(gamma: np.ndarray) -> float:
    """Same quantity as :func:`ppt_nu_minus`, from the eigenvalues of i Omega P Gamma P."""
    gamma = np.asarray(gamma, dtype=float)
    pt = PARTIAL_TRANSPOSE @ gamma @ PARTIAL_TRANSPOSE
    return float(williamson_eigenvalues(pt)[0])


def is_passive(s: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    s = np.asarray(s, dtype=float)
    return bool(np.max(np.abs(s.T @ s - np.eye(s.shape[0]))) <= tol)


def tms(r: float) -> np.ndarray:
    """Two-mode squeezer exp(r (a^dag b^dag - a b)) in phase space."""
    c, s = math.cosh(r), math.sinh(r)
    z = np.diag([1.0, -1.0])
    return np.block([[c * np.eye(2), s * z], [s * z, c * np.eye(2)]])


def rotation(phi_a: float, phi_b: float = 0.0) -> np.ndarray:
    """Local phase rotations of both modes (a passive transformation)."""

    def r2(phi):
        c, s = math.cos(phi), math.sin(phi)
        return np.array([[c, s], [-s, c]])

    out = np.zeros((4, 4))
    out[:2, :2] = r2(phi_a)
    out[2:, 2:] = r2(phi_b)
    return out
