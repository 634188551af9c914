"""Brute-force two-mode states in a truncated number basis.

This module knows nothing about covariance-matrix algebra: states are density
matrices, squeezing is the matrix exponential of the truncated generator
r (a^dag b^dag - a b), covariance matrices come from traces against
quadrature operators, and entanglement is read off the spectrum of the partial
transpose.  It exists to cross-check :mod:`gaussian_core`.

Density matrices are kept as scipy sparse arrays.  Expensive dense steps
(``expm``, ``eigvalsh``) run per connected component of the sparsity graph,
which for number-conserving structure splits the problem into blocks of at
most ``cutoff`` levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import DomainError, TruncationLeakageError
from .gaussian_core import apply_symplectic, ppt_nu_minus, tms

DEFAULT_CUTOFF = 40
DEFAULT_LEAKAGE_BOUND = 1e-8
NEGATIVITY_THRESHOLD = 1e-8


@dataclass(frozen=True)
class FockState:
    rho: sp.csr_array
    cutoff: int
    n_modes: int = 2

    @property
    def dim(self) -> int:
        return self.cutoff**self.n_modes

    def trace(self) -> complex:
        return complex(self.rho.diagonal().sum())

    def populations(self) -> np.ndarray:
        return self.rho.diagonal().real.reshape((self.cutoff,) * self.n_modes)

    def tail_population(self) -> float:
        """Population with any mode in the top 10% of its levels."""
        first_tail = self.cutoff - max(1, math.ceil(0.1 * self.cutoff))
        pops = self.populations()
        if self.n_modes == 1:
            return float(pops[first_tail:].sum())
        inner = pops[:first_tail, :first_tail].sum()
        return float(max(pops.sum() - inner, 0.0))


def annihilation(cutoff: int) -> sp.csr_array:
    return sp.csr_array(sp.diags(np.sqrt(np.arange(1, cutoff, dtype=float)), 1))


def _check_cutoff(cutoff):
    if int(cutoff) != cutoff or cutoff < 2:
        raise DomainError(f"cutoff must be an integer >= 2, got {cutoff!r}")


def thermal_fock(nbar: float, cutoff: int = DEFAULT_CUTOFF, leakage_bound: float = DEFAULT_LEAKAGE_BOUND) -> FockState:
    """Single-mode thermal state, renormalized on the truncated space."""
    _check_cutoff(cutoff)
    if nbar < 0:
        raise DomainError(f"nbar must be nonnegative, got {nbar!r}")
    q = nbar / (nbar + 1.0)
    if q**cutoff >= leakage_bound:
        raise TruncationLeakageError(
            q**cutoff, leakage_bound, f"cutoff {cutoff} too small for nbar={nbar}: tail {q**cutoff:.3e}"
        )
    p = q ** np.arange(cutoff)
    p /= p.sum()
    return FockState(sp.csr_array(sp.diags(p)), cutoff, 1)


def coherent_fock(amplitude: complex, cutoff: int = DEFAULT_CUTOFF) -> FockState:
    """Pure single-mode coherent state (normalized after truncation)."""
    _check_cutoff(cutoff)
    n = np.arange(cutoff)
    log_fact = np.array([math.lgamma(k + 1.0) for k in n])
    amp = complex(amplitude)
    mag = np.exp(-0.5 * abs(amp) ** 2 + n * math.log(abs(amp)) - 0.5 * log_fact) if amp != 0 else (n == 0) * 1.0
    psi = mag * np.exp(1j * n * np.angle(amp))
    psi /= np.linalg.norm(psi)
    return FockState(sp.csr_array(np.outer(psi, psi.conj())), cutoff, 1)


def tensor(a: FockState, b: FockState) -> FockState:
    if a.n_modes != 1 or b.n_modes != 1 or a.cutoff != b.cutoff:
        raise ValueError("tensor expects two single-mode states with equal cutoff")
    return FockState(sp.csr_array(sp.kron(a.rho, b.rho, format="csr")), a.cutoff, 2)


def two_mode_thermal(nbar: float, cutoff: int = DEFAULT_CUTOFF, leakage_bound: float = DEFAULT_LEAKAGE_BOUND) -> FockState:
    one = thermal_fock(nbar, cutoff, leakage_bound)
    return tensor(one, one)


def _components(matrix):
    pattern = abs(sp.csr_array(matrix))
    n, labels = connected_components(pattern + pattern.T, directed=False)
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(n + 1))
    return [order[bounds[i] : bounds[i + 1]] for i in range(n)]


def _blockwise_expm(gen):
    rows, cols, vals = [], [], []
    gen = sp.csr_array(gen)
    for idx in _components(gen):
        block = scipy.linalg.expm(gen[idx][:, idx].toarray())
        r, c = np.meshgrid(idx, idx, indexing="ij")
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(block.ravel())
    n = gen.shape[0]
    out = sp.coo_array((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    out = sp.csr_array(out)
    out.eliminate_zeros()
    return out


def squeeze_generator(r: float, cutoff: int) -> sp.csr_array:
    a = annihilation(cutoff)
    eye = sp.identity(cutoff, format="csr")
    ab = sp.kron(a, eye) @ sp.kron(eye, a)
    return sp.csr_array(r * (ab.T - ab))


def squeeze_unitary(r: float, cutoff: int) -> sp.csr_array:
    """exp(r (a^dag b^dag - a b)) on the truncated two-mode space."""
    _check_cutoff(cutoff)
    if r == 0:
        return sp.csr_array(sp.identity(cutoff * cutoff, format="csr"))
    return _blockwise_expm(squeeze_generator(r, cutoff))


def apply_two_mode_squeeze(
    state: FockState, r: float, leakage_bound: float = DEFAULT_LEAKAGE_BOUND, check: bool = True
) -> FockState:
    """Squeeze a two-mode state; raises :class:`TruncationLeakageError` unless ``check`` is off."""
    if state.n_modes != 2:
        raise ValueError("two-mode squeezing needs a two-mode state")
    u = squeeze_unitary(r, state.cutoff)
    rho = sp.csr_array(u @ state.rho @ u.T.conj())
    out = FockState(rho, state.cutoff, 2)
    if check:
        leak = out.tail_population()
        if leak > leakage_bound:
            raise TruncationLeakageError(leak, leakage_bound)
    return out


def quadratures(cutoff: int) -> list[sp.csr_array]:
    """(q_a, p_a, q_b, p_b) on the truncated two-mode space."""
    a = annihilation(cutoff)
    eye = sp.identity(cutoff, format="csr")
    q = (a + a.T) / math.sqrt(2.0)
    p = -1j * (a - a.T) / math.sqrt(2.0)
    return [sp.csr_array(sp.kron(op, eye)) if i < 2 else sp.csr_array(sp.kron(eye, op)) for i, op in enumerate((q, p, q, p))]


def _expect(rho, op):
    return complex((rho.multiply(op.T)).sum())


def cm_from_state(state: FockState) -> np.ndarray:
    """Covariance matrix <X_i X_j + X_j X_i> - 2 <X_i><X_j> of a two-mode state."""
    if state.n_modes != 2:
        raise ValueError("cm_from_state expects a two-mode state")
    xs = quadratures(state.cutoff)
    rho = state.rho
    mean = np.array([_expect(rho, x).real for x in xs])
    gamma = np.empty((4, 4))
    for i in range(4):
        for j in range(i, 4):
            sym = xs[i] @ xs[j] + xs[j] @ xs[i]
            gamma[i, j] = gamma[j, i] = _expect(rho, sym).real - 2.0 * mean[i] * mean[j]
    return gamma


def partial_transpose(rho, cutoff: int) -> sp.csr_array:
    """Transpose the second mode: <na nb|rho^T_B|ma mb> = <na mb|rho|ma nb>."""
    coo = sp.coo_array(rho)
    na, nb = np.divmod(coo.row, cutoff)
    ma, mb = np.divmod(coo.col, cutoff)
    return sp.csr_array(sp.coo_array((coo.data, (na * cutoff + mb, ma * cutoff + nb)), shape=coo.shape))


def min_pt_eigenvalue(state: FockState) -> float:
    pt = partial_transpose(state.rho, state.cutoff)
    lowest = math.inf
    for idx in _components(pt):
        block = pt[idx][:, idx].toarray()
        lowest = min(lowest, float(scipy.linalg.eigvalsh(0.5 * (block + block.conj().T))[0]))
    return lowest


def negativity_verdict(state: FockState, threshold: float = NEGATIVITY_THRESHOLD) -> bool:
    """True (entangled) iff the partial transpose has an eigenvalue below -threshold."""
    return min_pt_eigenvalue(state) < -threshold


# --- agreement suite -------------------------------------------------------------


@dataclass(frozen=True)
class OraclePoint:
    r: float
    nbar: float
    cutoff: int
    cm_deviation: float
    leakage: float
    leakage_ok: bool
    nu_minus: float
    min_pt_eigenvalue: float
    gaussian_entangled: bool
    fock_entangled: bool

    @property
    def agree(self) -> bool:
        return self.gaussian_entangled == self.fock_entangled


@dataclass
class OracleReport:
    points: list[OraclePoint] = field(default_factory=list)
    deviation_tol: float = 1e-5

    @property
    def max_deviation(self) -> float:
        return max((p.cm_deviation for p in self.points), default=0.0)

    @property
    def leakage_failures(self) -> list[OraclePoint]:
        return [p for p in self.points if not p.leakage_ok]

    @property
    def disagreements(self) -> list[OraclePoint]:
        return [p for p in self.points if not p.agree or p.cm_deviation >= self.deviation_tol]

    @property
    def passed(self) -> bool:
        return not self.leakage_failures and not self.disagreements


def gaussian_prediction(r: float, nbar: float) -> np.ndarray:
    return apply_symplectic(tms(r), (2.0 * nbar + 1.0) * np.eye(4))


def _suggest_cutoff(state, leakage_bound):
    # marginal tails of squeezed thermal states are geometric in n
    pops = state.populations()
    mean_n = float((pops.sum(axis=1) * np.arange(state.cutoff)).sum())
    q = mean_n / (mean_n + 1.0)
    if q <= 0:
        return state.cutoff
    return math.ceil(math.log(leakage_bound / 10.0) / math.log(q) / 0.9) + 2


def oracle_point(
    r: float,
    nbar: float,
    cutoff: int | None = DEFAULT_CUTOFF,
    leakage_bound: float = DEFAULT_LEAKAGE_BOUND,
    max_cutoff: int = 200,
) -> OraclePoint:
    """Compare one (r, nbar) point against the Gaussian prediction.

    ``cutoff=None`` starts at the default and grows the truncation until the
    leakage bound holds (or ``max_cutoff`` is reached).
    """
    adaptive = cutoff is None
    c = DEFAULT_CUTOFF if adaptive else int(cutoff)
    while True:
        # the thermal input itself must fit; grow before squeezing if not
        thermal_leak = 0.0
        try:
            start = two_mode_thermal(nbar, c, leakage_bound)
        except TruncationLeakageError as exc:
            if adaptive and c < max_cutoff:
                c = min(max_cutoff, 2 * c)
                continue
            start = two_mode_thermal(nbar, c, math.inf)
            thermal_leak = exc.leakage
        state = apply_two_mode_squeeze(start, r, leakage_bound, check=False)
        leak = max(thermal_leak, state.tail_population())
        if leak <= leakage_bound or not adaptive or c >= max_cutoff:
            break
        c = min(max_cutoff, max(c + 10, _suggest_cutoff(state, leakage_bound)))

    gamma_fock = cm_from_state(state)
    gamma_gauss = gaussian_prediction(r, nbar)
    nu = ppt_nu_minus(gamma_gauss)
    lowest = min_pt_eigenvalue(state)
    return OraclePoint(
        r=r,
        nbar=nbar,
        cutoff=c,
        cm_deviation=float(np.max(np.abs(gamma_fock - gamma_gauss))),
        leakage=leak,
        leakage_ok=leak <= leakage_bound,
        nu_minus=nu,
        min_pt_eigenvalue=lowest,
        gaussian_entangled=nu < 1.0,
        fock_entangled=lowest < -NEGATIVITY_THRESHOLD,
    )


def agreement_suite(
    r_values,
    nbar_values,
    cutoff: int | None = DEFAULT_CUTOFF,
    leakage_bound: float = DEFAULT_LEAKAGE_BOUND,
    deviation_tol: float = 1e-5,
) -> OracleReport:
    report = OracleReport(deviation_tol=deviation_tol)
    for r in r_values:
        for nbar in nbar_values:
            report.points.append(oracle_point(float(r), float(nbar), cutoff, leakage_bound))
    return report
