"""Entanglement of phonon pairs created by sudden changes of the speed of sound.

Gaussian phase-space tools (``gaussian_core``), Bogoliubov transformations
(``bogoliubov``), entanglement measures and temperatures (``entanglement``),
dispersive quenches (``quench``), double-quench resonances (``resonance``)
and a truncated Fock-space cross-check (``fock_oracle``).
"""

from .bogoliubov import BogoliubovCoefficients, ModePair, compose, effective_squeezing, to_symplectic
from .entanglement import (
    EntanglementReport,
    entanglement_temperature,
    eof_from_nu,
    full_report,
    nu_minus,
    sudden_death_from_occupation,
    sudden_death_temperature,
)
from .errors import (
    DomainError,
    InvalidCoefficientsError,
    NotResonantError,
    NotSymplecticError,
    SingleModeSqueezingError,
    TruncationLeakageError,
    UnphysicalStateError,
)
from .gaussian_core import apply_symplectic, ppt_nu_minus, thermal_cm, tms
from .output import TOOL_VERSION as __version__
from .quench import QuenchSpec, quench_coefficients, scan_spectrum
from .resonance import DoubleQuench, accumulate, solve_transcendent
