"""Entanglement resonances of repeated transformations.

A transformation S with [S, S^T] = 0 acting on identity-proportional inputs
behaves as a two-mode squeezer up to a passive part that leaves its output
invariant, so N repetitions squeeze by N times the single-shot amount.

For a sudden quench the repeatable building block is a double quench,
omega_in -> omega_out at t1 followed by omega_out -> omega_in at t2.  With
t_minus = t1 - t2 and omega_pm = omega_in +/- omega_out, it is resonant when
sin(omega_out t_minus) = 0 (trivial: only local rotations remain) or when

    sin(omega_minus t_minus) / omega_minus^2 = sin(omega_plus t_minus) / omega_plus^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np
from scipy.optimize import brentq

from .bogoliubov import chain_coefficient_maps, effective_squeezing, to_symplectic
from .entanglement import EntanglementReport, eof_from_nu, entanglement_temperature
from .errors import DomainError, NotResonantError
from .gaussian_core import DEFAULT_TOL
from .quench import QuenchSpec, coefficients_from_frequencies, quench_frequencies

Kind = Literal["analytic_rational", "numeric_root", "trivial"]

TRIVIAL_REL_TOL = 1e-9


@dataclass(frozen=True)
class DoubleQuench:
    spec: QuenchSpec
    t1: float
    t2: float

    def __post_init__(self):
        if not self.t2 > self.t1:
            raise DomainError(f"second quench must follow the first (t1={self.t1!r}, t2={self.t2!r})")

    @property
    def t_minus(self) -> float:
        return self.t1 - self.t2


@dataclass(frozen=True)
class ResonanceSolution:
    t_minus: float
    kind: Kind
    m: int | None = None
    n: int | None = None


def resonance_residual(s: np.ndarray) -> float:
    """max |S S^T - S^T S|."""
    s = np.asarray(s, dtype=float)
    return float(np.max(np.abs(s @ s.T - s.T @ s)))


def double_quench_from_frequencies(omega_in: float, omega_out: float, t1: float, t2: float) -> np.ndarray:
    first = to_symplectic(coefficients_from_frequencies(omega_in, omega_out, t1))
    second = to_symplectic(coefficients_from_frequencies(omega_out, omega_in, t2))
    return chain_coefficient_maps(first, second)


def double_quench_symplectic(dq: DoubleQuench, k: float) -> np.ndarray:
    """Symplectic matrix of the round trip omega_in -> omega_out -> omega_in at wave number k."""
    w_in, w_out = quench_frequencies(k, dq.spec)
    return double_quench_from_frequencies(w_in, w_out, dq.t1, dq.t2)


def residual_conditions(omega_in: float, omega_out: float, t1: float, t2: float) -> tuple[float, float, float]:
    """Both necessary resonance conditions of the double quench, and their common factor f."""
    if not (omega_in > 0 and omega_out > 0):
        raise DomainError(f"frequencies must be positive, got {omega_in!r}, {omega_out!r}")
    t_plus, t_minus = t1 + t2, t1 - t2
    w_plus, w_minus = omega_in + omega_out, omega_in - omega_out
    f = w_plus**2 * math.sin(w_minus * t_minus) - w_minus**2 * math.sin(w_plus * t_minus)
    common = math.sin(omega_out * t_minus) * f
    return math.cos(omega_in * t_plus) * common, math.sin(omega_in * t_plus) * common, f


def transcendent_lhs_minus_rhs(omega_in: float, omega_out: float, t_minus):
    w_plus, w_minus = omega_in + omega_out, omega_in - omega_out
    return np.sin(w_minus * t_minus) / w_minus**2 - np.sin(w_plus * t_minus) / w_plus**2


def is_trivial(t_minus: float, omega_out: float, rel_tol: float = TRIVIAL_REL_TOL) -> bool:
    """True when |t_minus| sits on the lattice l * pi / omega_out."""
    spacing = math.pi / omega_out
    l = round(abs(t_minus) / spacing)
    return abs(abs(t_minus) - l * spacing) < rel_tol * spacing


def trivial_times(omega_out: float, window: tuple[float, float]) -> list[float]:
    lo, hi = window
    spacing = math.pi / omega_out
    first = math.ceil(lo / spacing - TRIVIAL_REL_TOL)
    last = math.floor(hi / spacing + TRIVIAL_REL_TOL)
    return [l * spacing for l in range(first, last + 1)]


def solve_transcendent(
    omega_in: float, omega_out: float, search_window: tuple[float, float], tol: float = 1e-13
) -> list[ResonanceSolution]:
    """All roots in the closed window, tagged ``trivial`` or ``numeric_root``.

    Brackets are found by sign changes on a grid of step pi / (8 omega_plus),
    an eighth of the fastest half-period; each bracket is refined with Brent's
    method to ``tol``.  The grid overhangs the window by one step so roots on
    the endpoints are not lost to rounding.
    """
    if not (omega_in > 0 and omega_out > 0):
        raise DomainError(f"frequencies must be positive, got {omega_in!r}, {omega_out!r}")
    if omega_in == omega_out:
        raise DomainError("omega_in == omega_out: no quench, the equation is degenerate")
    lo, hi = map(float, search_window)
    if not hi > lo:
        raise DomainError(f"empty search window {search_window!r}")

    step = math.pi / (8.0 * (omega_in + omega_out))
    n_cells = math.ceil((hi - lo) / step) + 2
    ts = lo - step + step * np.arange(n_cells + 1)
    g = transcendent_lhs_minus_rhs(omega_in, omega_out, ts)

    def fun(t):
        return float(transcendent_lhs_minus_rhs(omega_in, omega_out, t))

    roots = []
    for i in range(n_cells):
        if g[i] == 0.0:
            roots.append(float(ts[i]))
        elif g[i] * g[i + 1] < 0.0:
            roots.append(brentq(fun, ts[i], ts[i + 1], xtol=tol, rtol=4 * np.finfo(float).eps))
    slack = max(tol, 1e-12 * max(abs(lo), abs(hi), 1.0))
    out = []
    for t in roots:
        if lo - slack <= t <= hi + slack:
            kind = "trivial" if is_trivial(t, omega_out) else "numeric_root"
            out.append(ResonanceSolution(t_minus=t, kind=kind))
    return out


def _rational_ratio(omega_in, omega_out, m, n, rel_tol):
    w_plus, w_minus = omega_in + omega_out, abs(omega_in - omega_out)
    return abs(m * w_minus - n * w_plus) <= rel_tol * max(m * w_minus, n * w_plus)


def analytic_resonances(omega_in: float, omega_out: float, m: int, n: int, rel_tol: float = 1e-12) -> ResonanceSolution:
    """Closed-form resonance t_minus = n pi / |omega_minus| for m |omega_minus| = n omega_plus.

    Requires (m - n) odd; an even separation lands on the trivial lattice.
    """
    if not (omega_in > 0 and omega_out > 0) or omega_in == omega_out:
        raise DomainError("need distinct positive frequencies")
    if m <= 0 or n <= 0:
        raise DomainError(f"m and n must be positive integers, got {m!r}, {n!r}")
    if not _rational_ratio(omega_in, omega_out, m, n, rel_tol):
        raise DomainError(
            f"m |omega_-| != n omega_+ for m={m}, n={n} "
            f"(omega_+/|omega_-| = {(omega_in + omega_out) / abs(omega_in - omega_out):.12g})"
        )
    if (m - n) % 2 == 0:
        raise DomainError(
            f"m - n = {m - n} is even: t_minus = {n}pi/|omega_-| is a trivial solution "
            "(the composite reduces to local rotations)"
        )
    return ResonanceSolution(t_minus=n * math.pi / abs(omega_in - omega_out), kind="analytic_rational", m=m, n=n)


def analytic_family(omega_in: float, omega_out: float, n_max: int = 20, max_denominator: int = 1000) -> list[ResonanceSolution]:
    """Analytic resonances with n <= n_max when omega_plus / |omega_minus| is rational."""
    ratio = (omega_in + omega_out) / abs(omega_in - omega_out)
    frac = Fraction(ratio).limit_denominator(max_denominator)
    if abs(float(frac) - ratio) > 1e-12 * ratio:
        return []
    out = []
    for n in range(frac.denominator, n_max + 1, frac.denominator):
        m = n * frac.numerator // frac.denominator
        if (m - n) % 2:
            out.append(analytic_resonances(omega_in, omega_out, m, n))
    return out


def accumulate(
    s_resonant: np.ndarray,
    repetitions: int,
    initial: np.ndarray,
    omega: float | None = None,
    tol: float = DEFAULT_TOL,
) -> list[EntanglementReport]:
    """Entanglement after 1..N repetitions of a resonant transformation.

    ``initial`` must be gamma0 * identity.  Each report follows from the
    effective squeezing r_N of S^N as nu_minus = gamma0 exp(-2 r_N).  Passing
    the mode frequency ``omega`` fills in T_E and T_SD; otherwise they are None.
    """
    s = np.asarray(s_resonant, dtype=float)
    initial = np.asarray(initial, dtype=float)
    if repetitions < 1:
        raise DomainError(f"repetitions must be >= 1, got {repetitions!r}")
    scale = max(1.0, float(np.max(np.abs(s))) ** 2)
    residual = resonance_residual(s)
    if residual > tol * scale:
        raise NotResonantError(f"[S, S^T] != 0 (residual {residual:.3e})")
    gamma0 = float(initial[0, 0])
    if initial.shape != (4, 4) or np.max(np.abs(initial - gamma0 * np.eye(4))) > tol * abs(gamma0):
        raise DomainError("initial covariance matrix must be proportional to the identity")
    if gamma0 < 1.0 - tol:
        raise DomainError(f"initial state is unphysical (gamma0 = {gamma0!r} < 1)")

    reports = []
    power = np.eye(4)
    for _ in range(repetitions):
        power = power @ s
        r = effective_squeezing(power)
        nu = gamma0 * math.exp(-2.0 * r)
        sinh_sq = math.sinh(r) ** 2
        if omega is not None:
            t_e = entanglement_temperature(math.sqrt(sinh_sq), omega)
            t_sd = 2.0 * t_e
        else:
            t_e = t_sd = None
        reports.append(
            EntanglementReport(
                nu_minus=nu,
                eof_nats=eof_from_nu(nu),
                entangled=nu < 1.0,
                t_entanglement=t_e,
                t_sudden_death=t_sd,
                # 0.5 * (gamma0 cosh 2r - 1)
                avg_particle_number=gamma0 * sinh_sq + 0.5 * (gamma0 - 1.0),
            )
        )
    return reports
