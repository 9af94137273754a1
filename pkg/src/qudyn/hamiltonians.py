"""Potent Hamiltonian families ``H = h * Ht`` with ``Ht**p == Ht**q``."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from . import linalg

POTENCY_TOL = 1e-10
HERMITIAN_FLAG_TOL = 1e-12
MAX_DIM = 64

OMEGA3 = np.exp(2j * np.pi / 3)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_R2 = 1 / np.sqrt(2)
SPIN1 = {
    "X": _R2 * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex),
    "Y": _R2 * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex),
    "Z": np.diag([1.0, 0.0, -1.0]).astype(complex),
}

DEFAULT_AXIS = (1 / np.sqrt(3),) * 3


class HamiltonianError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PotentHamiltonian:
    """Dimensionless generator ``Ht`` with verified potency ``Ht**p == Ht**q``.

    The physical Hamiltonian is ``h * Ht`` with ``h`` the disorder variable.
    """

    generator: np.ndarray
    p: int
    q: int
    hermitian: bool
    label: str = "custom"
    powers: tuple = field(init=False, repr=False)

    def __post_init__(self):
        g = np.array(self.generator, dtype=complex)
        g.setflags(write=False)
        object.__setattr__(self, "generator", g)
        if not (self.p >= 1 and 0 <= self.q < self.p):
            raise HamiltonianError(f"invalid potency class (p={self.p}, q={self.q})")
        pw = linalg.matrix_power_basis(g, self.p + 1)
        if linalg.max_abs(pw[self.p] - pw[self.q]) > POTENCY_TOL:
            raise HamiltonianError(f"generator does not satisfy H^{self.p} = H^{self.q}")
        for a in pw:
            a.setflags(write=False)
        object.__setattr__(self, "powers", tuple(pw[: self.p]))

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    @property
    def potency(self) -> tuple[int, int]:
        return self.p, self.q

    def reduce_exponent(self, m: int) -> int:
        """Index into ``powers`` of ``Ht**m`` under the potency reduction rule."""
        if m < self.p:
            return m
        return self.q + (m - self.q) % (self.p - self.q)

    def power(self, m: int) -> np.ndarray:
        return self.powers[self.reduce_exponent(m)]


def _make(generator, label, p=None, q=None) -> PotentHamiltonian:
    g = np.asarray(generator, dtype=complex)
    if g.shape[0] > MAX_DIM:
        raise HamiltonianError(f"dimension {g.shape[0]} exceeds cap {MAX_DIM}")
    detected = detect_potency(g)
    if detected is None:
        raise HamiltonianError(f"{label}: generator is not potent")
    if p is not None and detected != (p, q):
        raise HamiltonianError(f"{label}: expected potency ({p},{q}), detected {detected}")
    herm = linalg.max_abs(g - g.conj().T) <= HERMITIAN_FLAG_TOL
    return PotentHamiltonian(g, detected[0], detected[1], herm, label)


def _unit(n) -> np.ndarray:
    v = np.asarray(n, dtype=float).reshape(3)
    norm = np.linalg.norm(v)
    if norm == 0 or not np.isfinite(norm):
        raise HamiltonianError("axis vector must be finite and nonzero")
    return v / norm


def detect_potency(m, p_max: int = 8, tol: float = POTENCY_TOL) -> tuple[int, int] | None:
    """Smallest ``(p, q)`` with ``m**p == m**q``; scans p then q ascending.

    Returns None when no pair with ``p <= p_max`` matches.
    """
    a = linalg.as_matrix(m)
    if linalg.max_abs(a) == 0:
        raise HamiltonianError("zero matrix has no potency class")
    pw = linalg.matrix_power_basis(a, p_max + 1)
    for p in range(1, p_max + 1):
        for q in range(p):
            if linalg.max_abs(pw[p] - pw[q]) <= tol:
                return p, q
    return None


def build_qubit(n=DEFAULT_AXIS) -> PotentHamiltonian:
    v = _unit(n)
    g = sum(c * PAULI[k] for c, k in zip(v, "XYZ"))
    return _make(g, "qubit_axis", 2, 0)


def build_pauli_tensor_power(n=DEFAULT_AXIS, N: int = 1) -> PotentHamiltonian:
    if not 1 <= N <= 6:
        raise HamiltonianError(f"N={N} out of range [1, 6]")
    single = build_qubit(n).generator
    g = reduce(np.kron, [single] * N)
    return _make(g, f"pauli_tensor_power_{N}", 2, 0)


def build_pauli_string(labels) -> PotentHamiltonian:
    labels = [str(s).upper() for s in labels]
    if not labels or any(s not in PAULI for s in labels):
        raise HamiltonianError(f"labels must be drawn from I, X, Y, Z: {labels}")
    if all(s == "I" for s in labels):
        raise HamiltonianError("all-identity Pauli string is not a valid generator")
    if len(labels) > 6:
        raise HamiltonianError("Pauli strings are capped at 6 sites")
    g = reduce(np.kron, [PAULI[s] for s in labels])
    return _make(g, "pauli_string_" + "".join(labels), 2, 0)


def clock_operators(d: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Phase (clock) operator sigma and cyclic shift tau (ones below the diagonal and top-right)."""
    w = np.exp(2j * np.pi / d)
    sigma = np.diag(w ** np.arange(d))
    tau = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    return sigma, tau


def build_clock_qutrit() -> PotentHamiltonian:
    sigma, tau = clock_operators(3)
    eye = np.eye(3)
    if (
        linalg.max_abs(np.linalg.matrix_power(sigma, 3) - eye) > 1e-14
        or linalg.max_abs(np.linalg.matrix_power(tau, 3) - eye) > 1e-14
        or linalg.max_abs(sigma @ tau - OMEGA3 * tau @ sigma) > 1e-14
    ):
        raise HamiltonianError("clock/shift algebra self-check failed")
    return _make((sigma + tau) / 2 ** (1 / 3), "clock_qutrit", 3, 0)


def build_spin1(n=DEFAULT_AXIS) -> PotentHamiltonian:
    v = _unit(n)
    g = sum(c * SPIN1[k] for c, k in zip(v, "XYZ"))
    return _make(g, "spin1_axis", 3, 1)


def build_custom(matrix, p: int | None = None, q: int | None = None) -> PotentHamiltonian:
    return _make(matrix, "custom", p, q)


def _complex_matrix_from_json(rows) -> np.ndarray:
    out = []
    for row in rows:
        out.append([complex(e[0], e[1]) if isinstance(e, (list, tuple)) else complex(e) for e in row])
    return np.array(out, dtype=complex)


def complex_matrix_to_json(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def from_spec(spec: dict) -> PotentHamiltonian:
    """Build a Hamiltonian from its JSON description."""
    try:
        kind = spec["type"]
        if kind == "qubit_axis":
            return build_qubit(spec.get("n", DEFAULT_AXIS))
        if kind == "pauli_tensor_power":
            return build_pauli_tensor_power(spec.get("n", DEFAULT_AXIS), int(spec["N"]))
        if kind == "pauli_string":
            return build_pauli_string(spec["labels"])
        if kind == "clock_qutrit":
            return build_clock_qutrit()
        if kind == "spin1_axis":
            return build_spin1(spec.get("n", DEFAULT_AXIS))
        if kind == "custom":
            return build_custom(_complex_matrix_from_json(spec["matrix"]), spec.get("p"), spec.get("q"))
    except KeyError as exc:
        raise HamiltonianError(f"hamiltonian spec missing field {exc}") from None
    raise HamiltonianError(f"unknown hamiltonian type {spec.get('type')!r}")
