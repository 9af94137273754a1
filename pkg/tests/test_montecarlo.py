import math

import numpy as np
import pytest

from qudyn import disorder, hamiltonians, linalg, maps, montecarlo, witnesses
from conftest import CLOCK, QUBIT, SPIN1, projector

GAUSS = disorder.gaussian(1.0)
UNIF = disorder.uniform(math.sqrt(3))
X, Z = hamiltonians.PAULI["X"], hamiltonians.PAULI["Z"]
SZ = hamiltonians.SPIN1["Z"]


def config(n, seed=12345, times=(0.5,), pot=QUBIT, dist=GAUSS, rho0=None, **kw):
    rho0 = projector(pot.dim, 0) if rho0 is None else rho0
    return montecarlo.McRunConfig(n, seed, np.asarray(times, dtype=float), dist, pot, rho0, **kw)


def test_evolve_single_examples(rng):
    rho = projector(2, 0)
    np.testing.assert_array_equal(montecarlo.evolve_single(QUBIT, 0.0, 1.0, rho), rho)
    plus = np.full((2, 2), 0.5, dtype=complex)
    zpot = hamiltonians.build_qubit((0, 0, 1))
    out = montecarlo.evolve_single(zpot, math.pi / 2, 1.0, plus)
    assert np.trace(X @ out).real == pytest.approx(-1, abs=1e-14)
    for pot in (QUBIT, CLOCK, SPIN1):
        for _ in range(10):
            h, t = rng.normal(), rng.uniform(0, 3)
            u = linalg.expm(-1j * h * t * pot.generator)
            assert np.max(np.abs(maps.propagator(pot, h * t) - u)) <= 1e-10


def test_evolve_single_not_renormalized():
    out = montecarlo.evolve_single(CLOCK, 0.9, 1.0, projector(3, 0))
    assert abs(np.trace(out).real - 1) > 1e-3


def test_single_sample_equals_first_draw():
    seed = 99
    res = montecarlo.run(config(1, seed=seed, times=(0.3, 1.1)))
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(0,))))
    h = GAUSS.sample(rng, 1)[0]
    for i, t in enumerate((0.3, 1.1)):
        ref = montecarlo.evolve_single(QUBIT, h, t, projector(2, 0))
        assert np.max(np.abs(res.rho_mean[i] - ref)) <= 1e-15


def test_case1_magnetization_within_four_se():
    times = np.linspace(0, 3, 61)
    res = montecarlo.run(config(10_000, times=times, observables={"sz": Z}))
    exact = witnesses.case1_magnetization(GAUSS.G(times))
    se = res.stderr["sz"]
    assert np.all(np.abs(res.values["sz"] - exact) <= 4 * se + 1e-15)
    assert np.all(se >= 0)


def test_determinism_across_shards():
    times = np.linspace(0, 2, 11)
    csvs = {s: montecarlo.run(config(20_000, times=times, shards=s, observables={"sz": Z})).to_csv() for s in (1, 3, 4, 8)}
    assert len(set(csvs.values())) == 1
    a = montecarlo.run(config(20_000, times=times, shards=1))
    b = montecarlo.run(config(20_000, times=times, shards=8))
    np.testing.assert_array_equal(a.rho_mean, b.rho_mean)


def test_thread_cap_does_not_change_results(monkeypatch):
    times = np.linspace(0, 1, 5)
    monkeypatch.setenv("QUDYN_THREADS", "1")
    a = montecarlo.run(config(10_000, times=times, shards=4)).to_csv()
    monkeypatch.setenv("QUDYN_THREADS", "4")
    b = montecarlo.run(config(10_000, times=times, shards=4)).to_csv()
    assert a == b


def test_different_seeds_differ():
    a = montecarlo.run(config(1000, seed=1, observables={"sz": Z}))
    b = montecarlo.run(config(1000, seed=2, observables={"sz": Z}))
    assert a.values["sz"][0] != b.values["sz"][0]


def test_mean_state_hermitian():
    res = montecarlo.run(config(5000, times=np.linspace(0, 3, 7), pot=CLOCK, rho0=projector(3, 0)))
    for rho in res.rho_mean:
        assert np.max(np.abs(rho - rho.conj().T)) <= 1e-12 * max(1, np.max(np.abs(rho)))


def test_unbiased_superoperator_entries():
    for t in (0.4, 1.2):
        dmap, se = montecarlo.sample_map(QUBIT, GAUSS, t, 100_000, 7)
        exact = maps.map_closed_form(QUBIT, GAUSS, t).superoperator
        dev = np.abs(dmap.superoperator - exact)
        assert np.all(dev <= 5 * se + 1e-14)


def test_case2_normalized_observables_match_map():
    times = np.linspace(0, 1.5, 16)
    res = montecarlo.run(config(100_000, times=times, pot=CLOCK, rho0=projector(3, 0), observables={"sz": SZ}, normalize=True))
    for i, t in enumerate(times):
        rho = maps.evolve(maps.map_closed_form(CLOCK, GAUSS, t), projector(3, 0))
        assert abs(res.values["sz"][i] - witnesses.observable(rho, SZ, normalize=True)) <= 4 * res.stderr["sz"][i] + 1e-12
        val, se = res.estimate(witnesses.normalized_purity, i)
        assert abs(val - witnesses.normalized_purity(rho)) <= 4 * se + 1e-12


def test_delta_method_se_matches_repetition_spread():
    # the reported purity SE should match the spread of independent estimates
    vals, ses = [], []
    for seed in range(200):
        res = montecarlo.run(config(400, seed=seed, times=(0.8,)))
        v, se = res.estimate(witnesses.purity, 0)
        vals.append(v)
        ses.append(se)
    ratio = np.std(vals, ddof=1) / np.mean(ses)
    assert 0.8 <= ratio <= 1.2


def test_doubling_n_halves_variance():
    t = 0.6
    exact = witnesses.case1_magnetization(GAUSS.G(t))
    err2 = {}
    for n in (250, 500):
        dev = [montecarlo.run(config(n, seed=10_000 * n + k, times=(t,), observables={"sz": Z})).values["sz"][0] - exact for k in range(2000)]
        err2[n] = np.mean(np.square(dev))
    assert 1.6 <= err2[250] / err2[500] <= 2.4


def test_convergence_report_exponent():
    times = np.linspace(0.2, 2.0, 10)
    exact = {"sz": witnesses.case1_magnetization(GAUSS.G(times))}
    results = [
        montecarlo.run(config(n, seed=1000 * k + n, times=times, observables={"sz": Z}))
        for n in (100, 1000, 10_000)
        for k in range(8)
    ]
    report = montecarlo.convergence_report(results, exact)
    assert -0.65 <= report.exponents["sz"] <= -0.35
    assert report.to_csv().startswith("n_samples,observable,rms_error")
    se_report = montecarlo.convergence_report(results)
    assert se_report.exponents["sz"] == pytest.approx(-0.5, abs=0.05)
    with pytest.raises(ValueError):
        montecarlo.convergence_report(results[:3])


def test_fit_exponent_exact():
    ns = np.array([10, 100, 1000])
    assert montecarlo.fit_exponent(ns, 3 * ns**-0.5) == pytest.approx(-0.5)


def test_config_validation():
    with pytest.raises(ValueError):
        config(0)
    with pytest.raises(ValueError):
        config(10, times=(1.0, 0.5))
    with pytest.raises(ValueError):
        config(10, times=(-1.0,))
    with pytest.raises(ValueError):
        config(10, seed=-1)
    with pytest.raises(ValueError):
        config(10, shards=0)
    with pytest.raises(maps.StateError):
        config(10, rho0=np.diag([0.5, 0.6]))
    with pytest.raises(ValueError):
        config(10, rho0=projector(3, 0))


def test_seed_accepts_full_u64_range():
    res = montecarlo.run(config(10, seed=2**64 - 1))
    assert res.seed == 2**64 - 1


def test_csv_schema():
    res = montecarlo.run(config(50, times=(0.0, 0.5), observables={"sz": Z}))
    lines = res.to_csv().splitlines()
    assert lines[0] == ",".join(montecarlo.CSV_HEADER)
    assert len(lines) == 3
    t, name, value, se, n, seed = lines[1].split(",")
    assert (float(t), name, float(value), float(se), int(n), int(seed)) == (0.0, "sz", 1.0, 0.0, 50, 12345)
