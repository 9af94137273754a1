"""Monte-Carlo disorder averaging, the independent oracle for the analytic maps.

Samples are generated in fixed-size blocks.  Block ``b`` draws from its own
substream ``SeedSequence(seed, spawn_key=(b,))`` so the sample set, and every
reported number, is independent of how blocks are distributed over shards.
Per-block statistics are merged in block order.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import maps
from .disorder import Distribution
from .hamiltonians import PotentHamiltonian

BLOCK_SIZE = 4096
COVARIANCE_MAX_DIM = 8
CSV_HEADER = ["t", "observable", "value", "stderr", "n_samples", "seed"]


@dataclass
class McRunConfig:
    n_samples: int
    seed: int
    time_grid: np.ndarray
    dist: Distribution
    pot: PotentHamiltonian
    rho0: np.ndarray
    shards: int = 1
    observables: dict = field(default_factory=dict)
    normalize: bool = False

    def __post_init__(self):
        self.time_grid = np.asarray(self.time_grid, dtype=float).reshape(-1)
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.shards < 1:
            raise ValueError("shards must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.time_grid.size == 0 or np.any(self.time_grid < 0) or np.any(np.diff(self.time_grid) <= 0):
            raise ValueError("time grid must be non-negative and strictly ascending")
        self.rho0 = maps.validate_state(self.rho0)
        if self.rho0.shape[0] != self.pot.dim:
            raise ValueError("initial state dimension does not match the Hamiltonian")
        self.observables = {k: np.asarray(v, dtype=complex) for k, v in self.observables.items()}


def evolve_single(pot: PotentHamiltonian, h: float, t: float, rho0) -> np.ndarray:
    """``U rho0 U^dagger`` with ``U = exp(-i h t Ht)``; never renormalized."""
    u = maps.propagator(pot, h * t)
    return u @ np.asarray(rho0, dtype=complex) @ u.conj().T


def _evolve_batch(pot: PotentHamiltonian, x: np.ndarray, rho0: np.ndarray) -> np.ndarray:
    a = maps.propagator_coefficients(pot, x)
    u = np.einsum("np,pij->nij", a, np.array(pot.powers))
    return u @ rho0 @ np.conj(np.swapaxes(u, 1, 2))


# -- streaming statistics --------------------------------------------------------


@dataclass
class _Moments:
    """Count, sum, and centered second moment of a batch of vectors (Chan merge)."""

    n: int
    total: np.ndarray
    comp: np.ndarray
    m2: np.ndarray | None

    @classmethod
    def of(cls, x: np.ndarray, with_m2: bool) -> _Moments:
        total = x.sum(axis=0)
        m2 = None
        if with_m2:
            c = x - total / len(x)
            m2 = c.T @ c
        return cls(len(x), total, np.zeros_like(total), m2)

    @property
    def mean(self) -> np.ndarray:
        return self.total / self.n

    def merge(self, other: _Moments) -> None:
        if self.m2 is not None:
            delta = other.mean - self.mean
            self.m2 = self.m2 + other.m2 + np.outer(delta, delta) * (self.n * other.n / (self.n + other.n))
        # Neumaier-compensated running sum
        s = self.total + other.total
        big = np.abs(self.total) >= np.abs(other.total)
        self.comp = self.comp + np.where(big, (self.total - s) + other.total, (other.total - s) + self.total)
        self.comp = self.comp + other.comp
        self.total = s
        self.n += other.n

    def finalize(self) -> None:
        self.total = self.total + self.comp
        self.comp = np.zeros_like(self.total)

    def covariance(self) -> np.ndarray:
        if self.n < 2:
            return np.zeros_like(self.m2)
        return self.m2 / (self.n - 1)


def _real_coords(rho: np.ndarray) -> np.ndarray:
    flat = rho.reshape(rho.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def _from_real_coords(y: np.ndarray, d: int) -> np.ndarray:
    n = d * d
    return (y[:n] + 1j * y[n:]).reshape(d, d)


def _hermitian_point(y: np.ndarray, d: int) -> np.ndarray:
    # Samples are Hermitian, so the covariance only sees Hermitian directions.
    m = _from_real_coords(y, d)
    return 0.5 * (m + m.conj().T)


def _block_stats(cfg: McRunConfig, block: int) -> list[tuple[_Moments, _Moments]]:
    start = block * BLOCK_SIZE
    n = min(BLOCK_SIZE, cfg.n_samples - start)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed, spawn_key=(block,))))
    h = cfg.dist.sample(rng, n)
    names = list(cfg.observables)
    with_cov = cfg.pot.dim <= COVARIANCE_MAX_DIM
    out = []
    for t in cfg.time_grid:
        rho = _evolve_batch(cfg.pot, h * t, cfg.rho0)
        scal = [np.einsum("ij,nji->n", cfg.observables[k], rho).real for k in names]
        scal.append(np.einsum("nii->n", rho).real)
        out.append((_Moments.of(_real_coords(rho), with_cov), _Moments.of(np.stack(scal, axis=1), True)))
    return out


# -- results ---------------------------------------------------------------------


@dataclass
class McResult:
    times: np.ndarray
    rho_mean: np.ndarray
    values: dict
    stderr: dict
    n_samples: int
    seed: int
    normalized: bool
    trace_mean: np.ndarray
    state_cov: np.ndarray | None = None

    def estimate(self, fn, i: int) -> tuple[float, float]:
        """Value of ``fn(rho_mean)`` at time index ``i`` and its delta-method standard error."""
        rho = self.rho_mean[i]
        value = float(np.real(fn(rho)))
        if self.state_cov is None:
            return value, math.nan
        d = rho.shape[0]
        y0 = np.concatenate([rho.reshape(-1).real, rho.reshape(-1).imag])
        step = 1e-5 * max(1.0, float(np.max(np.abs(y0))))
        grad = np.empty_like(y0)
        for k in range(y0.size):
            e = np.zeros_like(y0)
            e[k] = step
            grad[k] = (np.real(fn(_hermitian_point(y0 + e, d))) - np.real(fn(_hermitian_point(y0 - e, d)))) / (2 * step)
        var = grad @ self.state_cov[i] @ grad / self.n_samples
        return value, math.sqrt(max(var, 0.0))

    def gradient_se(self, fn, i: int) -> float:
        """Delta-method standard error of ``fn(rho_mean)`` alone (see :meth:`estimate`)."""
        return self.estimate(fn, i)[1]

    def series(self, fn) -> tuple[np.ndarray, np.ndarray]:
        pairs = [self.estimate(fn, i) for i in range(len(self.times))]
        return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])

    def rows(self):
        for i, t in enumerate(self.times):
            for name in self.values:
                yield t, name, self.values[name][i], self.stderr[name][i], self.n_samples, self.seed

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for t, name, v, se, n, seed in self.rows():
            w.writerow([repr(float(t)), name, repr(float(v)), repr(float(se)), n, seed])
        return buf.getvalue()


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("QUDYN_THREADS", os.cpu_count() or 1)))
    except ValueError:
        return 1


def run(cfg: McRunConfig) -> McResult:
    """Average ``n_samples`` disorder realizations on the configured time grid."""
    n_blocks = -(-cfg.n_samples // BLOCK_SIZE)
    shards = min(cfg.shards, n_blocks)
    bounds = np.linspace(0, n_blocks, shards + 1).astype(int)

    def work(s):
        return [_block_stats(cfg, b) for b in range(bounds[s], bounds[s + 1])]

    workers = min(shards, _thread_cap())
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_shard = list(pool.map(work, range(shards)))
    else:
        per_shard = [work(s) for s in range(shards)]
    blocks = [blk for shard in per_shard for blk in shard]

    merged = blocks[0]
    for blk in blocks[1:]:
        for (ys, ss), (yo, so) in zip(merged, blk):
            ys.merge(yo)
            ss.merge(so)
    for ys, ss in merged:
        ys.finalize()
        ss.finalize()

    d = cfg.pot.dim
    names = list(cfg.observables)
    rho_mean = np.array([_from_real_coords(ys.mean, d) for ys, _ in merged])
    rho_mean = 0.5 * (rho_mean + np.conj(np.swapaxes(rho_mean, 1, 2)))
    values = {k: np.empty(len(cfg.time_grid)) for k in names}
    stderr = {k: np.empty(len(cfg.time_grid)) for k in names}
    trace_mean = np.empty(len(cfg.time_grid))
    n = cfg.n_samples
    for i, (_, ss) in enumerate(merged):
        mean = ss.mean
        cov = ss.covariance()
        tr = mean[-1]
        trace_mean[i] = tr
        for k, name in enumerate(names):
            if cfg.normalize:
                # delta method for mean(o) / mean(tr)
                g = np.zeros(len(mean))
                g[k] = 1 / tr
                g[-1] = -mean[k] / tr**2
                values[name][i] = mean[k] / tr
                stderr[name][i] = math.sqrt(max(g @ cov @ g / n, 0.0))
            else:
                values[name][i] = mean[k]
                stderr[name][i] = math.sqrt(max(cov[k, k] / n, 0.0))
    state_cov = None
    if d <= COVARIANCE_MAX_DIM:
        state_cov = np.array([ys.covariance() for ys, _ in merged])
    return McResult(cfg.time_grid.copy(), rho_mean, values, stderr, n, cfg.seed, cfg.normalize, trace_mean, state_cov)


# -- convergence -------------------------------------------------------------------


def fit_exponent(ns, errors) -> float:
    """Slope of log(error) against log(N)."""
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    return float(np.polyfit(np.log(ns), np.log(errors), 1)[0])


@dataclass
class ConvergenceReport:
    rows: list
    exponents: dict

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n_samples", "observable", "rms_error", "mean_stderr", "runs"])
        for r in self.rows:
            w.writerow([r["n_samples"], r["observable"], repr(r["rms_error"]), repr(r["mean_stderr"]), r["runs"]])
        return buf.getvalue()


def convergence_report(results, reference: dict | None = None) -> ConvergenceReport:
    """Error versus sample size for each observable.

    Results sharing a sample size are pooled (independent repetitions).  With a
    ``reference`` mapping observable name to exact values on the time grid, the
    error is the RMS deviation from it; otherwise the mean reported standard
    error is used.
    """
    by_n: dict[int, list[McResult]] = {}
    for r in results:
        by_n.setdefault(r.n_samples, []).append(r)
    if len(by_n) < 2:
        raise ValueError("convergence report needs at least two sample sizes")
    names = list(results[0].values)
    rows = []
    exponents = {}
    for name in names:
        ns, errs = [], []
        for n in sorted(by_n):
            group = by_n[n]
            se = float(np.mean([g.stderr[name] for g in group]))
            if reference is not None:
                dev = np.concatenate([g.values[name] - np.asarray(reference[name]) for g in group])
                err = float(np.sqrt(np.mean(dev**2)))
            else:
                err = se
            rows.append({"n_samples": n, "observable": name, "rms_error": err, "mean_stderr": se, "runs": len(group)})
            ns.append(n)
            errs.append(err)
        exponents[name] = fit_exponent(ns, errs)
    return ConvergenceReport(rows, exponents)


def sample_map(pot: PotentHamiltonian, dist: Distribution, t: float, n_samples: int, seed: int):
    """Monte-Carlo estimate of the averaged superoperator and its entrywise standard error.

    Each sample contributes ``kron(conj(U), U)``; real and imaginary parts get
    separate standard errors, combined in quadrature.
    """
    d2 = pot.dim**2
    powers = np.array(pot.powers)
    total = np.zeros((d2, d2), dtype=complex)
    sq_re = np.zeros((d2, d2))
    sq_im = np.zeros((d2, d2))
    n_blocks = -(-n_samples // BLOCK_SIZE)
    for b in range(n_blocks):
        n = min(BLOCK_SIZE, n_samples - b * BLOCK_SIZE)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(b,))))
        h = dist.sample(rng, n)
        u = np.einsum("np,pij->nij", maps.propagator_coefficients(pot, h * t), powers)
        sup = np.einsum("nab,ncd->nacbd", u.conj(), u).reshape(n, d2, d2)
        total += sup.sum(axis=0)
        sq_re += (sup.real**2).sum(axis=0)
        sq_im += (sup.imag**2).sum(axis=0)
    mean = total / n_samples
    denom = max(n_samples - 1, 1)
    var_re = np.maximum(sq_re / n_samples - mean.real**2, 0) * n_samples / denom
    var_im = np.maximum(sq_im / n_samples - mean.imag**2, 0) * n_samples / denom
    se = np.sqrt((var_re + var_im) / n_samples)
    dmap = maps.DynamicalMap(mean, float(t), "monte_carlo", pot.dim, {"samples": n_samples, "seed": seed})
    return dmap, se


def estimate_pair(res_a: McResult, res_b: McResult, fn, i: int) -> tuple[float, float]:
    """``fn(rho_a, rho_b)`` for two runs and a conservative standard error.

    The runs may share samples, so their covariance is unknown; ``sd(A + B) <= sd(A) + sd(B)``
    bounds it regardless.
    """
    a, b = res_a.rho_mean[i], res_b.rho_mean[i]
    value = float(np.real(fn(a, b)))
    sa = res_a.gradient_se(lambda r: fn(r, b), i)
    sb = res_b.gradient_se(lambda r: fn(a, r), i)
    return value, sa + sb


def map_functional_se(dmap: maps.DynamicalMap, se: np.ndarray, fn) -> float:
    """Conservative error of ``fn(dmap)`` from entrywise standard errors.

    Entries are correlated, so the linearized errors are summed in absolute value.
    """
    s = np.asarray(dmap.superoperator)
    step = 1e-6 * max(1.0, float(np.max(np.abs(s))))
    base = dict(time=dmap.time, provenance=dmap.provenance, system_dim=dmap.system_dim, meta=dmap.meta)
    total = 0.0
    d = dmap.system_dim
    for r, c in zip(*np.nonzero(se)):
        pr, pc = maps.hermitian_partner(r, c, d)
        if (pr, pc) < (r, c):
            continue
        for unit in (1.0, 1j):
            if (pr, pc) == (r, c) and unit == 1j:
                continue
            e = np.zeros_like(s)
            e[r, c] += step * unit
            e[pr, pc] += np.conj(step * unit) if (pr, pc) != (r, c) else 0
            hi = fn(maps.DynamicalMap(s + e, **base))
            lo = fn(maps.DynamicalMap(s - e, **base))
            total += abs((hi - lo) / (2 * step)) * se[r, c]
    return float(total)
