"""Information-theoretic functionals of averaged states.

Includes purity, trace distance, logarithmic negativity, observable
expectations, revival counting, and the closed-form reference expressions
for the qubit and spin-1 cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import hamiltonians, linalg, maps
from .disorder import Distribution

REVIVAL_THRESHOLD = 1e-9
IMAG_TOL = 1e-10

WITNESS_KINDS = ("purity", "normalized_purity", "trace_distance", "log_negativity", "observable", "decay_rate")


class WitnessError(ValueError):
    pass


@dataclass
class WitnessSeries:
    kind: str
    times: np.ndarray
    values: np.ndarray
    stderr: np.ndarray | None = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in WITNESS_KINDS:
            raise WitnessError(f"unknown witness kind {self.kind!r}")
        if self.times.shape != self.values.shape:
            raise WitnessError("times and values must have the same length")


def _trace(rho) -> float:
    tr = np.trace(rho)
    if abs(tr.imag) > IMAG_TOL * max(1.0, abs(tr)):
        raise WitnessError("state has a complex trace")
    return float(tr.real)


def purity(rho) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.vdot(rho.conj().T, rho)))


def normalized_purity(rho) -> float:
    tr = _trace(rho)
    if tr == 0:
        raise WitnessError("normalized purity of a zero-trace operator")
    return purity(rho) / tr**2


def trace_distance(rho1, rho2) -> float:
    a, b = np.asarray(rho1), np.asarray(rho2)
    if a.shape != b.shape:
        raise WitnessError(f"dimension mismatch {a.shape} vs {b.shape}")
    return 0.5 * linalg.trace_norm(a - b)


def maximally_entangled(d: int) -> np.ndarray:
    """Projector onto ``sum_i |ii> / sqrt(d)`` (system first, ancilla second)."""
    phi = np.eye(d, dtype=complex).reshape(-1) / math.sqrt(d)
    return np.outer(phi, phi.conj())


def choi_state(dmap: maps.DynamicalMap) -> np.ndarray:
    """``(Lambda_t (x) id)`` applied to the maximally entangled probe."""
    d = dmap.system_dim
    probe = maximally_entangled(d).reshape(d, d, d, d)  # [s, a, s', a']
    out = np.empty_like(probe)
    for a in range(d):
        for a2 in range(d):
            out[:, a, :, a2] = dmap.apply(probe[:, a, :, a2])
    return out.reshape(d * d, d * d)


def log_negativity(dmap: maps.DynamicalMap, d: int | None = None) -> float:
    d = dmap.system_dim if d is None else d
    if d != dmap.system_dim:
        raise WitnessError("dimension does not match the map")
    rho = choi_state(dmap)
    tr = _trace(rho)
    return math.log2(linalg.trace_norm(linalg.partial_transpose_system(rho / tr, d, d)))


def observable(rho, op, normalize: bool = False) -> float:
    rho, op = np.asarray(rho), np.asarray(op)
    if linalg.max_abs(op - op.conj().T) > IMAG_TOL:
        raise WitnessError("observable must be Hermitian")
    val = np.trace(op @ rho)
    if abs(val.imag) > IMAG_TOL * max(1.0, abs(val)):
        raise WitnessError(f"expectation value has imaginary part {val.imag:.3g}")
    if normalize:
        tr = _trace(rho)
        if tr == 0:
            raise WitnessError("cannot normalize a zero-trace operator")
        return float(val.real) / tr
    return float(val.real)


def dephasing_probability(dist: Distribution, t) -> float:
    return (1 - dist.G(t)) / 2


def revival_count(series: WitnessSeries, threshold: float = REVIVAL_THRESHOLD) -> tuple[int, float]:
    """Number of maximal runs of increasing values, and the summed increase."""
    if series.values.size < 3:
        raise WitnessError("revival detection needs at least 3 points")
    steps = np.diff(series.times)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
        raise WitnessError("revival detection needs a uniform time grid")
    inc = np.diff(series.values)
    rising = inc > threshold
    count = int(rising[0]) + int(np.sum(rising[1:] & ~rising[:-1]))
    return count, float(np.sum(inc[rising]))


def revival_onsets(series: WitnessSeries, threshold: float = REVIVAL_THRESHOLD) -> np.ndarray:
    """Times at which each revival (run of increases) starts."""
    rising = np.diff(series.values) > threshold
    starts = np.flatnonzero(rising & ~np.concatenate([[False], rising[:-1]]))
    return series.times[starts]


def multiqubit_purity_coefficients(N: int, n=hamiltonians.DEFAULT_AXIS) -> tuple[float, float]:
    """``(c0, c2)`` with ``purity = c0 + c2 * G**2`` for ``|up>^N`` under the N-fold axis Hamiltonian."""
    if not 1 <= N <= 6:
        raise WitnessError(f"N={N} out of range [1, 6]")
    pot = hamiltonians.build_pauli_tensor_power(n, N)
    up = np.zeros((2**N, 2**N), dtype=complex)
    up[0, 0] = 1
    # purity is c0 + c2 * G^2: G = 1 and G = 0 give two equations.
    p1 = purity(maps.evolve(maps.map_case1(pot, 1.0), up))
    p0 = purity(maps.evolve(maps.map_case1(pot, 0.0), up))
    c0, c2 = p0, p1 - p0
    expected = (3**N + 1) / (3**N - 1)
    if abs(c0 / c2 - expected) > 1e-8 * expected:
        raise WitnessError(f"coefficient ratio {c0 / c2} differs from {expected}")
    return c0, c2


# Closed-form references for the default axis (1,1,1)/sqrt(3).


def case1_purity(G):
    return (2 + np.asarray(G) ** 2) / 3


def case1_trace_distance(G):
    return np.sqrt((1 + 2 * np.asarray(G) ** 2) / 3)


def case1_log_negativity(G):
    return np.log2(1 + np.abs(G))


def case1_magnetization(G):
    return (1 + 2 * np.asarray(G)) / 3


def case3_purity(G, Gp):
    return (9 + np.asarray(G) ** 2 + 8 * np.asarray(Gp) ** 2) / 18


def case3_trace_distance(Gp):
    return np.sqrt((1 + 2 * np.asarray(Gp) ** 2) / 3)


def case3_magnetization(Gp):
    return (1 + 2 * np.asarray(Gp)) / 3
