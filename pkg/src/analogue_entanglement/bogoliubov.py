"""Two-mode-mixing Bogoliubov transformations and their phase-space form.

Only the coefficients alpha_kk, alpha_(-k)(-k), beta_k(-k) and beta_(-k)k are
nonzero.  The partner-mode coefficients follow from a single phase Theta:
alpha_(-k)(-k) = exp(-i Theta) alpha_kk and beta_(-k)k = exp(-i Theta) beta_k(-k).

A matrix built by :func:`to_symplectic` acts on the quadrature vector of the
old modes to give that of the new ones, in the same direction as the
coefficients.  Chaining the coefficient sets of two transformations applied
one after the other therefore multiplies their matrices in chronological
order, first on the left: ``S_total = S_first @ S_second``.  The generic
:func:`compose` keeps the operator convention (later on the left); see
:func:`chain_coefficient_maps`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidCoefficientsError, NotSymplecticError, SingleModeSqueezingError
from .gaussian_core import DEFAULT_TOL, is_symplectic, symplectic_form, symplectic_residual

SQUEEZING_TOL = 1e-8


@dataclass(frozen=True)
class BogoliubovCoefficients:
    alpha: complex
    beta: complex
    theta: float = 0.0

    @property
    def alpha_partner(self) -> complex:
        return cmath.exp(-1j * self.theta) * self.alpha

    @property
    def beta_partner(self) -> complex:
        return cmath.exp(-1j * self.theta) * self.beta

    def unitarity_defect(self) -> float:
        return abs(abs(self.alpha) ** 2 - abs(self.beta) ** 2 - 1.0)


@dataclass(frozen=True)
class ModePair:
    k: float
    omega_in: float
    omega_out: float

    def __post_init__(self):
        if not (self.omega_in > 0 and self.omega_out > 0):
            raise DomainError(
                f"mode frequencies must be positive, got {self.omega_in!r}, {self.omega_out!r}"
            )


def validate(coeffs: BogoliubovCoefficients, tol: float = DEFAULT_TOL) -> bool:
    """True iff |alpha|^2 - |beta|^2 = 1 within ``tol`` (relative for large |alpha|)."""
    scale = max(1.0, abs(coeffs.alpha) ** 2)
    return coeffs.unitarity_defect() <= tol * scale


def _alpha_block(a: complex) -> np.ndarray:
    return np.array([[a.real, a.imag], [-a.imag, a.real]])


def _beta_block(b: complex) -> np.ndarray:
    return np.array([[-b.real, b.imag], [b.imag, b.real]])


def to_symplectic(coeffs: BogoliubovCoefficients, tol: float = DEFAULT_TOL) -> np.ndarray:
    """4x4 symplectic matrix of a two-mode Bogoliubov transformation."""
    if not validate(coeffs, tol):
        raise InvalidCoefficientsError(
            f"|alpha|^2 - |beta|^2 - 1 = {coeffs.unitarity_defect():.3e} "
            f"for alpha={coeffs.alpha!r}, beta={coeffs.beta!r}"
        )
    alpha, beta = complex(coeffs.alpha), complex(coeffs.beta)
    return np.block(
        [
            [_alpha_block(alpha), _beta_block(beta)],
            [_beta_block(coeffs.beta_partner), _alpha_block(coeffs.alpha_partner)],
        ]
    )


def _check_pair(s1, s2, tol):
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    if s1.shape != s2.shape:
        raise ValueError(f"dimension mismatch: {s1.shape} vs {s2.shape}")
    for s in (s1, s2):
        if not is_symplectic(s, tol):
            raise NotSymplecticError(f"matrix is not symplectic (residual {symplectic_residual(s):.3e})")
    return s1, s2


def compose(s1: np.ndarray, s2: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Apply ``s1`` first, then ``s2``: returns ``s2 @ s1``."""
    s1, s2 = _check_pair(s1, s2, tol)
    return s2 @ s1


def chain_coefficient_maps(first: np.ndarray, second: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Total matrix for two Bogoliubov coefficient maps in chronological order.

    Coefficient maps chain contravariantly, so this is ``first @ second``,
    i.e. ``compose(second, first)``.
    """
    return compose(second, first, tol)


def inverse(s: np.ndarray) -> np.ndarray:
    """Symplectic inverse -Omega S^T Omega (exact, no linear solve)."""
    s = np.asarray(s, dtype=float)
    omega = symplectic_form(s.shape[0] // 2)
    return -omega @ s.T @ omega


def single_mode_squeezing_defect(s: np.ndarray) -> float:
    """Relative deviation of the reduced blocks of S S^T from multiples of the identity."""
    m = np.asarray(s, dtype=float)
    m = m @ m.T
    worst = 0.0
    for i in (0, 2):
        block = m[i : i + 2, i : i + 2]
        scale = 0.5 * np.trace(block)
        worst = max(worst, float(np.max(np.abs(block - scale * np.eye(2)))) / max(1.0, scale))
    return worst


def effective_squeezing(s: np.ndarray, tol: float = SQUEEZING_TOL) -> float:
    """Two-mode squeezing parameter r >= 0 of the active part of S.

    For S without single-mode squeezing, S S^T has diagonal cosh 2r and an
    off-diagonal block with singular values sinh 2r; the latter is used since
    arccosh loses half the digits near r = 0.
    """
    s = np.asarray(s, dtype=float)
    if s.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {s.shape}")
    defect = single_mode_squeezing_defect(s)
    if defect > tol:
        raise SingleModeSqueezingError(f"reduced blocks of S S^T are not isotropic (defect {defect:.3e})")
    m = s @ s.T
    sigma = float(np.linalg.svd(m[:2, 2:], compute_uv=False)[0])
    return 0.5 * math.asinh(sigma)
