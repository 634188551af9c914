"""Closed-form entanglement of symmetric two-mode Gaussian states.

A Bogoliubov transformation acting on a thermal pair of modes k, -k at
initial frequency omega_in yields a symmetric state whose entanglement is
fixed by the single number

    nu_minus(T) = coth(omega_in / 2T) * (|alpha| - |beta|)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bogoliubov import BogoliubovCoefficients, validate
from .errors import DomainError, InvalidCoefficientsError
from .gaussian_core import thermal_factor

LN2 = math.log(2.0)


@dataclass(frozen=True)
class EntanglementReport:
    nu_minus: float
    eof_nats: float
    entangled: bool
    t_entanglement: float | None
    t_sudden_death: float | None
    avg_particle_number: float


def _require_valid(coeffs):
    if not validate(coeffs):
        raise InvalidCoefficientsError(
            f"|alpha|^2 - |beta|^2 - 1 = {coeffs.unitarity_defect():.3e}"
        )


def _require_positive(**freqs):
    for name, value in freqs.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value!r}")


def nu_minus(coeffs: BogoliubovCoefficients, omega_in: float, temperature: float) -> float:
    _require_valid(coeffs)
    _require_positive(omega_in=omega_in)
    # (|a| - |b|)^2 = 1 / (|a| + |b|)^2 avoids cancellation for strong squeezing
    return thermal_factor(omega_in, temperature) / (abs(coeffs.alpha) + abs(coeffs.beta)) ** 2


def eof_from_nu(nu: float) -> float:
    """Entanglement of formation (nats) of a symmetric Gaussian state.

    Zero for nu >= 1; +inf for nu == 0.
    """
    if nu < 0 or math.isnan(nu):
        raise DomainError(f"nu must be nonnegative, got {nu!r}")
    if nu >= 1.0:
        return 0.0
    if nu == 0.0:
        return math.inf
    # with b = (1 - nu)^2 / (4 nu), a = b + 1:
    # a ln a - b ln b = ln(1 + b) + b ln(1 + 1/b)
    b = (1.0 - nu) ** 2 / (4.0 * nu)
    return math.log1p(b) + b * math.log1p(1.0 / b)


def nats_to_bits(value: float) -> float:
    return value / LN2


def entanglement_temperature(beta_abs: float, omega_out: float) -> float:
    """T_E defined by coth(omega_out / 2 T_E) = 2|beta|^2 + 1; zero when beta = 0."""
    _require_positive(omega_out=omega_out)
    beta_abs = abs(beta_abs)
    if beta_abs == 0.0:
        return 0.0
    # 2 arccoth(2 b^2 + 1) = ln(1 + 1/b^2)
    return omega_out / math.log1p(1.0 / beta_abs**2)


def sudden_death_temperature(omega_in: float, omega_out: float, t_entanglement: float) -> float:
    _require_positive(omega_in=omega_in, omega_out=omega_out)
    return 2.0 * omega_in / omega_out * t_entanglement


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation 1 / (exp(omega/T) - 1)."""
    _require_positive(omega=omega)
    if temperature < 0:
        raise DomainError(f"temperature must be nonnegative, got {temperature!r}")
    if temperature == 0:
        return 0.0
    x = omega / temperature
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def avg_particle_number(
    coeffs: BogoliubovCoefficients, omega_in: float, omega_out: float, temperature: float
) -> float:
    """Mean occupation of mode k after the transformation."""
    _require_valid(coeffs)
    _require_positive(omega_in=omega_in, omega_out=omega_out)
    gamma = thermal_factor(omega_in, temperature)
    beta_sq = abs(coeffs.beta) ** 2
    # 0.5 * (gamma * (2|b|^2 + 1) - 1), arranged to stay exact when beta = 0
    return gamma * beta_sq + thermal_occupation(omega_in, temperature)


def full_report(
    coeffs: BogoliubovCoefficients, omega_in: float, omega_out: float, temperature: float
) -> EntanglementReport:
    nu = nu_minus(coeffs, omega_in, temperature)
    t_e = entanglement_temperature(abs(coeffs.beta), omega_out)
    return EntanglementReport(
        nu_minus=nu,
        eof_nats=eof_from_nu(nu),
        entangled=nu < 1.0,
        t_entanglement=t_e,
        t_sudden_death=sudden_death_temperature(omega_in, omega_out, t_e),
        avg_particle_number=avg_particle_number(coeffs, omega_in, omega_out, temperature),
    )


@dataclass(frozen=True)
class OccupationInference:
    beta_sq: float
    t_entanglement: float
    t_sudden_death: float
    entangled: bool
    verdict: str


def sudden_death_from_occupation(
    n_avg: float, omega_in: float, omega_out: float, temperature: float, tol: float = 1e-12
) -> OccupationInference:
    """Infer T_SD from a measured mean occupation and the initial temperature.

    No Bogoliubov coefficients are needed: the occupation fixes
    coth(omega_out / 2 T_E) = (2 n_avg + 1) / coth(omega_in / 2T).
    Measurements within ``tol`` (relative) of the thermal value, or below it,
    imply beta = 0.
    """
    _require_positive(omega_in=omega_in, omega_out=omega_out)
    if n_avg < 0:
        raise DomainError(f"n_avg must be nonnegative, got {n_avg!r}")
    gamma = thermal_factor(omega_in, temperature)
    beta_sq = 0.5 * ((2.0 * n_avg + 1.0) / gamma - 1.0)
    if beta_sq <= tol * max(1.0, n_avg):
        beta_sq = 0.0
    t_e = entanglement_temperature(math.sqrt(beta_sq), omega_out)
    t_sd = sudden_death_temperature(omega_in, omega_out, t_e)
    if t_sd == 0.0:
        return OccupationInference(beta_sq, t_e, t_sd, False, "no entanglement possible")
    entangled = temperature < t_sd
    return OccupationInference(beta_sq, t_e, t_sd, entangled, "entangled" if entangled else "separable")
