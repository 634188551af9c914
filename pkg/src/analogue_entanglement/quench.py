"""Sudden change of the speed of sound with a quartic dispersion correction.

Frequencies follow omega^2 = c^2 k^2 +/- eps^2 k^4.  The dispersion strength
is configured through ``epsilon2`` (eps^2, in m^4/s^2), so eps itself carries
m^2/s.  Both frequencies of a quench share one ``epsilon2``.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Literal, Sequence

import numpy as np

from .bogoliubov import BogoliubovCoefficients
from .entanglement import (
    eof_from_nu,
    entanglement_temperature,
    nu_minus,
    sudden_death_temperature,
    thermal_occupation,
    avg_particle_number,
)
from .errors import DomainError

Sign = Literal["super", "sub"]


def _check_sign(sign):
    if sign not in ("super", "sub"):
        raise DomainError(f"dispersion sign must be 'super' or 'sub', got {sign!r}")


@dataclass(frozen=True)
class DispersionParams:
    c: float
    epsilon2: float = 0.0
    sign: Sign = "super"

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError(f"sound speed must be positive, got {self.c!r}")
        if self.epsilon2 < 0:
            raise DomainError(f"epsilon2 must be nonnegative, got {self.epsilon2!r}")
        _check_sign(self.sign)


@dataclass(frozen=True)
class QuenchSpec:
    c_in: float
    c_out: float
    epsilon2: float = 0.0
    sign: Sign = "super"
    t0: float = 0.0

    def __post_init__(self):
        if not (self.c_in > 0 and self.c_out > 0):
            raise DomainError(f"sound speeds must be positive, got {self.c_in!r}, {self.c_out!r}")
        if self.epsilon2 < 0:
            raise DomainError(f"epsilon2 must be nonnegative, got {self.epsilon2!r}")
        _check_sign(self.sign)

    @property
    def dispersion_in(self) -> DispersionParams:
        return DispersionParams(self.c_in, self.epsilon2, self.sign)

    @property
    def dispersion_out(self) -> DispersionParams:
        return DispersionParams(self.c_out, self.epsilon2, self.sign)

    def with_linear_dispersion(self) -> "QuenchSpec":
        return replace(self, epsilon2=0.0)


def omega(k: float, params: DispersionParams) -> float:
    """Mode frequency sqrt(c^2 k^2 +/- eps^2 k^4)."""
    k2 = k * k
    quartic = params.epsilon2 * k2 * k2
    w2 = params.c**2 * k2 + (quartic if params.sign == "super" else -quartic)
    if w2 < 0:
        raise DomainError(
            f"subsonic dispersion has no real frequency at k={k!r} "
            f"(|k| must be below c/eps = {params.c / math.sqrt(params.epsilon2):.6g})"
        )
    return math.sqrt(w2)


def coefficients_from_frequencies(omega_in: float, omega_out: float, t0: float = 0.0) -> BogoliubovCoefficients:
    """Bogoliubov coefficients of an instantaneous jump omega_in -> omega_out at t0."""
    if not (omega_in > 0 and omega_out > 0):
        raise DomainError(f"frequencies must be positive, got {omega_in!r}, {omega_out!r}")
    x = math.sqrt(omega_out / omega_in)
    alpha = 0.5 * (x + 1.0 / x) * cmath.exp(1j * (omega_out - omega_in) * t0)
    beta = 0.5 * (x - 1.0 / x) * cmath.exp(-1j * (omega_out + omega_in) * t0)
    return BogoliubovCoefficients(alpha, beta, 0.0)


def quench_frequencies(k: float, spec: QuenchSpec) -> tuple[float, float]:
    if k == 0:
        raise DomainError("k = 0 is a zero-frequency mode; the quench coefficients are singular")
    return omega(k, spec.dispersion_in), omega(k, spec.dispersion_out)


def quench_coefficients(k: float, spec: QuenchSpec) -> BogoliubovCoefficients:
    w_in, w_out = quench_frequencies(k, spec)
    return coefficients_from_frequencies(w_in, w_out, spec.t0)


@dataclass(frozen=True)
class SpectrumPoint:
    k: float
    omega_in: float = math.nan
    omega_out: float = math.nan
    alpha: complex = complex(math.nan, math.nan)
    beta: complex = complex(math.nan, math.nan)
    nu_minus: float = math.nan
    eof_nats: float = math.nan
    n_avg_initial: float = math.nan
    n_avg_final: float = math.nan
    t_entanglement: float = math.nan
    t_sudden_death: float = math.nan
    error: str | None = None

    @property
    def beta_sq(self) -> float:
        return abs(self.beta) ** 2


def spectrum_point(k: float, spec: QuenchSpec, temperature: float) -> SpectrumPoint:
    """Full per-k pipeline; domain failures are returned in ``error``, not raised."""
    try:
        w_in, w_out = quench_frequencies(k, spec)
        coeffs = coefficients_from_frequencies(w_in, w_out, spec.t0)
        nu = nu_minus(coeffs, w_in, temperature)
        t_e = entanglement_temperature(abs(coeffs.beta), w_out)
        return SpectrumPoint(
            k=k,
            omega_in=w_in,
            omega_out=w_out,
            alpha=coeffs.alpha,
            beta=coeffs.beta,
            nu_minus=nu,
            eof_nats=eof_from_nu(nu),
            n_avg_initial=thermal_occupation(w_in, temperature),
            n_avg_final=avg_particle_number(coeffs, w_in, w_out, temperature),
            t_entanglement=t_e,
            t_sudden_death=sudden_death_temperature(w_in, w_out, t_e),
        )
    except DomainError as exc:
        return SpectrumPoint(k=k, error=str(exc))


def _chunk(args):
    ks, spec, temperature = args
    return [spectrum_point(k, spec, temperature) for k in ks]


def scan_spectrum(
    k_grid: Sequence[float], spec: QuenchSpec, temperature: float, jobs: int = 1
) -> list[SpectrumPoint]:
    """Evaluate :func:`spectrum_point` over a grid, results in input order."""
    ks = [float(k) for k in k_grid]
    if not ks:
        raise DomainError("k grid is empty")
    if temperature < 0:
        raise DomainError(f"temperature must be nonnegative, got {temperature!r}")
    if jobs <= 1 or len(ks) < 2 * jobs:
        return _chunk((ks, spec, temperature))
    size = -(-len(ks) // jobs)
    chunks = [(ks[i : i + size], spec, temperature) for i in range(0, len(ks), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return [p for part in pool.map(_chunk, chunks) for p in part]


def make_k_grid(k_min: float, k_max: float, count: int, scale: str = "linear") -> np.ndarray:
    """Inclusive grid of ``count`` wave numbers, linear or logarithmic."""
    if count < 1:
        raise DomainError(f"grid count must be >= 1, got {count!r}")
    if not k_min > 0:
        raise DomainError(f"k_min must be positive, got {k_min!r}")
    if k_max < k_min:
        raise DomainError(f"k_max ({k_max!r}) is below k_min ({k_min!r})")
    if count == 1:
        return np.array([float(k_min)])
    if scale == "linear":
        return np.linspace(k_min, k_max, count)
    if scale == "log":
        return np.geomspace(k_min, k_max, count)
    raise DomainError(f"grid scale must be 'linear' or 'log', got {scale!r}")
