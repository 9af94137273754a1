"""Disorder-averaged dynamical maps.

A map acts on column-stacked density matrices.  Every route expresses it in
the operator basis ``kron(conj(Ht**j), Ht**k)`` with a ``p x p`` coefficient
matrix ``M``::

    Lambda_t = sum_jk M[j, k] * kron(conj(Ht**j), Ht**k)

The closed forms fix ``M`` analytically, the series route sums the moment
expansion of ``E[exp(-iHt) . exp(iH^dagger t)]`` term by term, and the
quadrature route averages exact single-realization propagator coefficients
``M[j, k] = E[conj(a_j(ht)) a_k(ht)]`` over Gauss nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .disorder import Distribution
from .hamiltonians import OMEGA3, PotentHamiltonian

STATE_TOL = 1e-10
UNITAL_TOL = 1e-10
SERIES_TOL = 1e-16
MAX_SERIES_ORDER = 200
DEFAULT_NODES = 64


class MapError(ValueError):
    pass


class PotencyClassError(MapError):
    pass


class TruncationError(MapError):
    """The moment series cannot reach the requested accuracy at this order."""


class UnsupportedClosedForm(MapError):
    pass


class StateError(MapError):
    pass


@dataclass(frozen=True, eq=False)
class DynamicalMap:
    superoperator: np.ndarray
    time: float
    provenance: str
    system_dim: int
    meta: dict = field(default_factory=dict)

    def apply(self, rho) -> np.ndarray:
        return linalg.devectorize(self.superoperator @ linalg.vectorize(rho), self.system_dim)

    def to_json(self) -> dict:
        return {
            "dim": self.system_dim,
            "time": self.time,
            "provenance": self.provenance,
            "meta": dict(self.meta),
            "entries": [[float(z.real), float(z.imag)] for z in self.superoperator.reshape(-1)],
        }

    @classmethod
    def from_json(cls, d: dict) -> DynamicalMap:
        dim = int(d["dim"])
        flat = np.array([complex(re, im) for re, im in d["entries"]])
        return cls(flat.reshape(dim * dim, dim * dim), float(d["time"]), d["provenance"], dim, d.get("meta", {}))


# -- propagator coefficients -------------------------------------------------


def _multiplication_matrix(p: int, q: int) -> np.ndarray:
    """Matrix of ``X -> Ht @ X`` on the basis Ht**0..Ht**(p-1)."""
    c = np.zeros((p, p), dtype=complex)
    for m in range(p - 1):
        c[m + 1, m] = 1
    c[q, p - 1] += 1
    return c


def propagator_coefficients(pot: PotentHamiltonian, x) -> np.ndarray:
    """Coefficients ``a_j`` with ``exp(-i x Ht) = sum_j a_j Ht**j``.

    ``x`` may be an array; the result has shape ``x.shape + (p,)``.
    """
    x = np.asarray(x, dtype=float)
    p, q = pot.potency
    if (p, q) == (2, 0):
        return np.stack([np.cos(x) + 0j, -1j * np.sin(x)], axis=-1)
    if (p, q) == (3, 0):
        w = OMEGA3
        e0, e1, e2 = np.exp(-1j * x), np.exp(-1j * w * x), np.exp(-1j * w * w * x)
        return np.stack([(e0 + w ** (2 * j) * e1 + w ** (4 * j) * e2) / 3 for j in range(3)], axis=-1)
    if (p, q) == (3, 1):
        return np.stack([np.ones_like(x) + 0j, -1j * np.sin(x), np.cos(x) - 1 + 0j], axis=-1)
    if (p, q) == (1, 0):
        return np.exp(-1j * x)[..., None]
    cmat = _multiplication_matrix(p, q)
    flat = x.reshape(-1)
    out = np.empty((flat.size, p), dtype=complex)
    for i, xi in enumerate(flat):
        out[i] = linalg.expm(-1j * xi * cmat)[:, 0]
    return out.reshape(x.shape + (p,))


def propagator(pot: PotentHamiltonian, x: float) -> np.ndarray:
    """Single-realization propagator ``exp(-i x Ht)``."""
    a = propagator_coefficients(pot, x)
    return np.tensordot(a, np.array(pot.powers), axes=(0, 0))


# -- assembling maps ---------------------------------------------------------


def _basis_superoperators(pot: PotentHamiltonian) -> np.ndarray:
    """Array ``B[j, k] = kron(conj(Ht**j), Ht**k)``."""
    p, d = pot.p, pot.dim
    b = np.empty((p, p, d * d, d * d), dtype=complex)
    for j in range(p):
        for k in range(p):
            b[j, k] = np.kron(pot.powers[j].conj(), pot.powers[k])
    return b


def map_from_coefficients(pot: PotentHamiltonian, coeffs, t: float, provenance: str, **meta) -> DynamicalMap:
    coeffs = np.asarray(coeffs, dtype=complex)
    sup = np.tensordot(coeffs, _basis_superoperators(pot), axes=([0, 1], [0, 1]))
    return DynamicalMap(sup, float(t), provenance, pot.dim, meta)


def _require(pot: PotentHamiltonian, p: int, q: int):
    if pot.potency != (p, q):
        raise PotencyClassError(f"expected potency ({p},{q}), got {pot.potency}")


def map_case1(pot: PotentHamiltonian, G: float, t: float = math.nan) -> DynamicalMap:
    _require(pot, 2, 0)
    m = np.array([[(1 + G) / 2, 0], [0, (1 - G) / 2]], dtype=complex)
    return map_from_coefficients(pot, m, t, "closed_form")


def map_case2(pot: PotentHamiltonian, G1, G2, G3, t: float = math.nan) -> DynamicalMap:
    _require(pot, 3, 0)
    # M[j, k] multiplies kron(conj(Ht)**j, Ht**k)
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0] = m[2, 1] = m[1, 2] = 3
    m[0, 0] += 2 * G1
    m[2, 1] -= G1
    m[1, 2] -= G1
    m[1, 1] += 2 * G2
    m[2, 0] -= G2
    m[0, 2] -= G2
    m[2, 2] += 2 * G3
    m[1, 0] -= G3
    m[0, 1] -= G3
    return map_from_coefficients(pot, m / 9, t, "closed_form")


def map_case3(pot: PotentHamiltonian, G: float, G_prime: float, t: float = math.nan) -> DynamicalMap:
    _require(pot, 3, 1)
    if not pot.hermitian:
        raise PotencyClassError("the (3,1) closed form assumes a Hermitian generator")
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0] = 1
    m[2, 0] = m[0, 2] = G_prime - 1
    m[1, 1] = (1 - G) / 2
    m[2, 2] = (3 + G - 4 * G_prime) / 2
    return map_from_coefficients(pot, m, t, "closed_form")


def map_closed_form(pot: PotentHamiltonian, dist: Distribution, t: float) -> DynamicalMap:
    """Dispatch to the closed form for the generator's potency class."""
    pq = pot.potency
    if pq == (2, 0):
        return map_case1(pot, dist.G(t), t)
    if pq == (3, 0):
        if dist.kind != "gaussian":
            raise UnsupportedClosedForm("no closed form for the (3,0) class with uniform disorder; use quadrature")
        return map_case2(pot, *dist.G123(t), t=t)
    if pq == (3, 1):
        return map_case3(pot, dist.G(t), dist.G_prime(t), t)
    raise UnsupportedClosedForm(f"no closed form for potency class {pq}; use series or quadrature")


# -- moment series -------------------------------------------------------------


def _binomial_pattern(pot: PotentHamiltonian, n: int) -> np.ndarray:
    """``sum_k C(n,k) (-1)**(n-k)`` grouped by reduced powers ``(n-k, k)``."""
    c = np.zeros((pot.p, pot.p))
    for k in range(n + 1):
        c[pot.reduce_exponent(n - k), pot.reduce_exponent(k)] += math.comb(n, k) * (-1) ** (n - k)
    return c


def _series_log_bound(pot: PotentHamiltonian, dist: Distribution, t: float, n: int) -> float:
    growth = max(np.linalg.norm(a, 2) for a in pot.powers)
    growth = max(growth, 1.0)
    return n * math.log(2 * growth * t) + dist.log_abs_moment(n) - math.lgamma(n + 1)


def map_series(pot: PotentHamiltonian, dist: Distribution, t: float, order: int = 40) -> DynamicalMap:
    """Truncated moment expansion of the averaged map.

    Raises :class:`TruncationError` when the first omitted term is not below
    ``SERIES_TOL``.
    """
    if order < 0 or order % 2 or order > MAX_SERIES_ORDER:
        raise MapError(f"series order must be even and in [0, {MAX_SERIES_ORDER}], got {order}")
    t = float(t)
    if t < 0:
        raise MapError("time must be non-negative")
    if t > 0 and _series_log_bound(pot, dist, t, order + 2) > math.log(SERIES_TOL):
        raise TruncationError(f"series of order {order} does not converge to {SERIES_TOL:g} at t={t:g}")
    m = np.zeros((pot.p, pot.p), dtype=complex)
    m += _binomial_pattern(pot, 0)
    if t > 0:
        for n in range(2, order + 1, 2):
            log_s = n * math.log(t) + dist.log_abs_moment(n) - math.lgamma(n + 1)
            s = (-1) ** (n // 2) * math.exp(log_s)
            m += s * _binomial_pattern(pot, n)
    return map_from_coefficients(pot, m, t, "series", order=order)


# -- quadrature ----------------------------------------------------------------


def quadrature_coefficient_matrix(pot: PotentHamiltonian, dist: Distribution, t: float, nodes: int = DEFAULT_NODES):
    h, w = dist.quadrature(nodes)
    a = propagator_coefficients(pot, h * float(t))
    return np.einsum("i,ij,ik->jk", w, a.conj(), a)


def map_quadrature(pot: PotentHamiltonian, dist: Distribution, t: float, nodes: int = DEFAULT_NODES) -> DynamicalMap:
    if nodes < 32:
        raise MapError("quadrature needs at least 32 nodes")
    m = quadrature_coefficient_matrix(pot, dist, t, nodes)
    return map_from_coefficients(pot, m, t, "quadrature", nodes=nodes)


def build_map(engine: str, pot: PotentHamiltonian, dist: Distribution, t: float, **kw) -> DynamicalMap:
    if engine == "closed_form":
        return map_closed_form(pot, dist, t)
    if engine == "series":
        return map_series(pot, dist, t, kw.get("order", 40))
    if engine == "quadrature":
        return map_quadrature(pot, dist, t, kw.get("nodes", DEFAULT_NODES))
    raise MapError(f"unknown analytic engine {engine!r}")


# -- applying maps -------------------------------------------------------------


def hermitian_partner(row: int, col: int, d: int) -> tuple[int, int]:
    """Entry paired with ``(row, col)`` in a Hermiticity-preserving superoperator.

    With column stacking, ``S[(i,j),(k,l)] == conj(S[(j,i),(l,k)])``.
    """
    i, j = row % d, row // d
    k, l = col % d, col // d
    return j + d * i, l + d * k


def validate_state(rho, tol: float = STATE_TOL) -> np.ndarray:
    """Check that ``rho`` is a density matrix and return it as an array."""
    try:
        r = linalg.as_matrix(rho)
        if r.shape[0] != r.shape[1]:
            raise StateError("density matrix must be square")
        if linalg.max_abs(r - r.conj().T) > tol:
            raise StateError("density matrix is not Hermitian")
        if abs(np.trace(r) - 1) > tol:
            raise StateError(f"density matrix trace {np.trace(r).real:.6g} != 1")
        if linalg.hermitian_eigenvalues(r)[0] < -tol:
            raise StateError("density matrix is not positive semidefinite")
    except linalg.LinalgError as exc:
        raise StateError(str(exc)) from None
    return r


def evolve(dmap: DynamicalMap, rho0, validate: bool = True) -> np.ndarray:
    """Averaged (possibly unnormalized) state ``Lambda_t[rho0]``."""
    r = validate_state(rho0) if validate else linalg.as_matrix(rho0)
    if r.shape[0] != dmap.system_dim:
        raise StateError(f"state dimension {r.shape[0]} does not match map dimension {dmap.system_dim}")
    out = dmap.apply(r)
    dev = linalg.max_abs(out - out.conj().T)
    if dev > STATE_TOL * max(1.0, linalg.max_abs(out)):
        raise MapError(f"map output is not Hermitian (deviation {dev:.3g})")
    return 0.5 * (out + out.conj().T)


# -- Case I master equation and unitality --------------------------------------


def lindblad_generator_case1(pot: PotentHamiltonian, dist: Distribution, t: float) -> tuple[float, np.ndarray]:
    """Decay rate and jump operator of the time-local Case-I master equation."""
    _require(pot, 2, 0)
    if dist.gamma_pole(t):
        raise MapError(f"decay rate has a pole at t={t:g} (G(t) = 0)")
    return dist.decay_rate_gamma(t), np.array(pot.generator)


def lindblad_rhs(gamma: float, jump, rho) -> np.ndarray:
    """``gamma * (L rho L^dagger - {L^dagger L, rho} / 2)``."""
    L = np.asarray(jump)
    Ld = L.conj().T
    return gamma * (L @ rho @ Ld - 0.5 * (Ld @ L @ rho + rho @ Ld @ L))


def inverse_case1(pot: PotentHamiltonian, G: float) -> np.ndarray:
    """Inverse superoperator ``(A + B / G) / 2`` of the Case-I map."""
    _require(pot, 2, 0)
    if abs(G) < 1e-12:
        raise MapError("Case-I map is singular where G(t) = 0")
    d = pot.dim
    eye = np.eye(d * d)
    hh = np.kron(pot.generator.conj(), pot.generator)
    return 0.5 * ((eye + hh) + (eye - hh) / G)


@dataclass(frozen=True)
class UnitalityResult:
    unital: bool
    deviation: float

    def __str__(self):
        return "unital" if self.unital else f"non_unital({self.deviation:.3g})"


def unitality_check(dmap: DynamicalMap, tol: float = UNITAL_TOL) -> UnitalityResult:
    eye = np.eye(dmap.system_dim, dtype=complex)
    dev = linalg.max_abs(dmap.apply(eye) - eye)
    return UnitalityResult(dev <= tol, dev)
