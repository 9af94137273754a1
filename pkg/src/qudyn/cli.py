"""Command-line front end.

    qudyn evolve   --config cfg.json [--out DIR] [--seed N]
    qudyn compare  --config cfg.json [--out DIR] [--seed N] [--tolerance TOL]
    qudyn channel  --config cfg.json [--out DIR]
    qudyn figures  fig1|fig2|fig3|fig4|fig5 [--config cfg.json] [--out DIR] [--seed N]

Exit codes: 0 success, 1 runtime failure (or a failed comparison), 2 config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import disorder, hamiltonians, linalg, maps, montecarlo, witnesses
from .disorder import Distribution
from .hamiltonians import PotentHamiltonian

log = logging.getLogger("qudyn")

SCHEMA_LINE = "# qudyn-csv v1"
WITNESS_HEADER = ["t", "kind", "value", "stderr", "case", "distribution", "params"]
ENGINES = ("closed_form", "series", "quadrature", "mc")
MC_SIGMAS = 4.0


class ConfigError(ValueError):
    pass


# -- configuration ------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    pot: PotentHamiltonian
    dist: Distribution
    times: np.ndarray
    rho0: np.ndarray | None
    partner: np.ndarray | None
    engines: list
    outputs: list
    observables: dict
    normalize: bool
    series_order: int = 40
    nodes: int = maps.DEFAULT_NODES
    mc: dict = field(default_factory=dict)
    corrupt: str | None = None
    bell_probe: bool = False


def _named_state(name: str, d: int) -> tuple[np.ndarray, np.ndarray]:
    """A named initial state and its orthogonal partner for trace distances."""
    first = np.zeros((d, d), dtype=complex)
    last = np.zeros((d, d), dtype=complex)
    first[0, 0] = 1
    last[-1, -1] = 1
    if name == "up":
        return first, last
    if name == "sz_plus1":
        if d != 3:
            raise ConfigError("sz_plus1 requires a three-level system")
        return first, last
    raise ConfigError(f"unknown named state {name!r}")


def _named_observable(name: str, d: int) -> np.ndarray:
    if name == "sz" and d == 2:
        return hamiltonians.PAULI["Z"]
    if name == "sz" and d == 3:
        return hamiltonians.SPIN1["Z"]
    if name in ("sx", "sy") and d == 2:
        return hamiltonians.PAULI[name[1].upper()]
    if name in ("sx", "sy") and d == 3:
        return hamiltonians.SPIN1[name[1].upper()]
    raise ConfigError(f"no named observable {name!r} for dimension {d}")


def time_grid(spec: dict) -> np.ndarray:
    try:
        start, stop, points = float(spec.get("start", 0.0)), float(spec.get("stop", 5.0)), int(spec.get("points", 501))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad time grid: {exc}") from None
    if points < 2 or start < 0 or stop <= start:
        raise ConfigError("time grid needs points >= 2 and 0 <= start < stop")
    return np.linspace(start, stop, points)


def parse_config(raw: dict, seed: int | None = None) -> ExperimentConfig:
    try:
        pot = hamiltonians.from_spec(raw["hamiltonian"])
        dist = Distribution.from_json(raw.get("distribution", {"kind": "gaussian", "sigma": 1.0}))
    except KeyError as exc:
        raise ConfigError(f"missing config field {exc}") from None
    except (hamiltonians.HamiltonianError, disorder.DisorderError) as exc:
        raise ConfigError(str(exc)) from None
    times = time_grid(raw.get("time_grid", {}))
    engines = list(raw.get("engines", []))
    if not engines:
        raise ConfigError("at least one engine is required")
    bad = [e for e in engines if e not in ENGINES]
    if bad:
        raise ConfigError(f"unknown engines {bad}; choose from {list(ENGINES)}")

    d = pot.dim
    state = raw.get("initial_state", "up")
    bell = state == "bell_probe"
    rho0 = partner = None
    if bell:
        if "mc" in engines:
            raise ConfigError("bell_probe is not supported by the mc engine")
    elif isinstance(state, str):
        rho0, partner = _named_state(state, d)
    else:
        try:
            rho0 = hamiltonians._complex_matrix_from_json(state["matrix"])
            if "partner" in state:
                partner = hamiltonians._complex_matrix_from_json(state["partner"])
            for r in (rho0, partner):
                if r is not None:
                    maps.validate_state(r)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad custom initial state: {exc}") from None
        except maps.StateError as exc:
            raise ConfigError(str(exc)) from None
        if rho0.shape[0] != d:
            raise ConfigError("initial state dimension does not match the Hamiltonian")

    observables = {}
    for name, mat in raw.get("observables", {}).items():
        observables[name] = hamiltonians._complex_matrix_from_json(mat)
    outputs = list(raw.get("outputs", ["purity"]))
    for out in outputs:
        kind = out.split(":", 1)[0]
        if kind not in witnesses.WITNESS_KINDS:
            raise ConfigError(f"unknown output {out!r}")
        if kind == "observable":
            name = out.split(":", 1)[1] if ":" in out else ""
            if name not in observables:
                observables[name] = _named_observable(name, d)
        if kind == "trace_distance" and partner is None and not bell:
            raise ConfigError("trace_distance needs a partner state")
        if kind == "decay_rate" and pot.potency != (2, 0):
            raise ConfigError("decay_rate output is defined for the (2,0) class only")
    mc = dict(raw.get("mc", {}))
    mc.setdefault("n_samples", 10_000)
    mc.setdefault("shards", 1)
    mc["seed"] = int(seed if seed is not None else mc.get("seed", 0))
    if "closed_form" in engines and pot.potency == (3, 0) and dist.kind != "gaussian":
        raise ConfigError("no closed form for the clock qutrit with uniform disorder; use the quadrature engine")
    if "closed_form" in engines and pot.potency not in ((2, 0), (3, 0), (3, 1)):
        raise ConfigError(f"no closed form for potency class {pot.potency}; use series or quadrature")
    return ExperimentConfig(
        pot=pot,
        dist=dist,
        times=times,
        rho0=rho0,
        partner=partner,
        engines=engines,
        outputs=outputs,
        observables=observables,
        normalize=bool(raw.get("normalize", not pot.hermitian)),
        series_order=int(raw.get("series", {}).get("order", 40)),
        nodes=int(raw.get("quadrature", {}).get("nodes", maps.DEFAULT_NODES)),
        mc=mc,
        corrupt=raw.get("corrupt", {}).get("engine"),
        bell_probe=bell,
    )


def load_config(path, seed=None) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    return parse_config(raw, seed)


# -- computing witness series -------------------------------------------------------


def case_label(pot: PotentHamiltonian) -> str:
    return {(2, 0): "I", (3, 0): "II", (3, 1): "III"}.get(pot.potency, f"p{pot.p}q{pot.q}")


def dist_params(dist: Distribution) -> str:
    key = "sigma" if dist.kind == "gaussian" else "b"
    return f"{key}={dist.scale!r}"


def _corrupted(dmap: maps.DynamicalMap, rho0=None) -> maps.DynamicalMap:
    """Negative control: flip the sign of the largest off-diagonal superoperator entry.

    Only rows producing populations and columns in the support of ``rho0`` are
    considered, so the defect reaches purity and diagonal observables. The
    conjugate partner entry is flipped too so the output stays Hermitian.
    """
    s = np.array(dmap.superoperator)
    d = dmap.system_dim
    population_rows = np.array([r % d == r // d for r in range(d * d)])
    off = np.abs(s - np.diag(np.diag(s)))
    off[~population_rows, :] = 0
    if rho0 is not None:
        off[:, np.abs(linalg.vectorize(rho0)) == 0] = 0
    if not off.any():
        return dmap
    r, c = np.unravel_index(np.argmax(off), s.shape)
    pr, pc = maps.hermitian_partner(r, c, d)
    s[r, c] = -s[r, c]
    if (pr, pc) != (r, c):
        s[pr, pc] = -s[pr, pc]
    return maps.DynamicalMap(s, dmap.time, dmap.provenance + "+corrupted", dmap.system_dim, dmap.meta)


def _state_witnesses(cfg: ExperimentConfig, dmap: maps.DynamicalMap) -> dict:
    out = {}
    if cfg.bell_probe:
        rho = witnesses.choi_state(dmap)
        partner = None
    else:
        rho = maps.evolve(dmap, cfg.rho0)
        partner = maps.evolve(dmap, cfg.partner) if cfg.partner is not None else None
    for name in cfg.outputs:
        kind = name.split(":", 1)[0]
        if kind == "purity":
            out[name] = witnesses.normalized_purity(rho) if cfg.normalize else witnesses.purity(rho)
        elif kind == "normalized_purity":
            out[name] = witnesses.normalized_purity(rho)
        elif kind == "trace_distance":
            if partner is None:
                raise ConfigError("trace_distance is unavailable for bell_probe")
            a, b = rho, partner
            if cfg.normalize:
                a, b = a / np.trace(a).real, b / np.trace(b).real
            out[name] = witnesses.trace_distance(a, b)
        elif kind == "log_negativity":
            out[name] = witnesses.log_negativity(dmap)
        elif kind == "observable":
            op = cfg.observables[name.split(":", 1)[1]]
            out[name] = witnesses.observable(rho, op, normalize=cfg.normalize)
        elif kind == "decay_rate":
            out[name] = cfg.dist.decay_rate_gamma(dmap.time)
    return out


def analytic_series(cfg: ExperimentConfig, engine: str) -> list[tuple]:
    rows = []
    for t in cfg.times:
        dmap = maps.build_map(engine, cfg.pot, cfg.dist, t, order=cfg.series_order, nodes=cfg.nodes)
        if cfg.corrupt == engine:
            dmap = _corrupted(dmap, cfg.rho0)
        for name, v in _state_witnesses(cfg, dmap).items():
            rows.append((float(t), name, float(v), math.nan))
    return rows


def _trace_distance_fn(normalize: bool):
    if not normalize:
        return witnesses.trace_distance
    return lambda a, b: witnesses.trace_distance(a / np.trace(a).real, b / np.trace(b).real)


def mc_series(cfg: ExperimentConfig) -> list[tuple]:
    ops = {n.split(":", 1)[1]: cfg.observables[n.split(":", 1)[1]] for n in cfg.outputs if n.startswith("observable:")}
    mc = cfg.mc
    run_cfg = montecarlo.McRunConfig(
        int(mc["n_samples"]), int(mc["seed"]), cfg.times, cfg.dist, cfg.pot, cfg.rho0,
        shards=int(mc["shards"]), observables=ops, normalize=cfg.normalize,
    )
    res = montecarlo.run(run_cfg)
    partner = None
    if any(n == "trace_distance" for n in cfg.outputs):
        partner = montecarlo.run(
            montecarlo.McRunConfig(
                run_cfg.n_samples, run_cfg.seed, cfg.times, cfg.dist, cfg.pot, cfg.partner, shards=run_cfg.shards
            )
        )
    norm_pur = witnesses.normalized_purity
    rows = []
    for i, t in enumerate(cfg.times):
        for name in cfg.outputs:
            kind = name.split(":", 1)[0]
            se = math.nan
            if kind == "observable":
                key = name.split(":", 1)[1]
                v, se = res.values[key][i], res.stderr[key][i]
            elif kind == "purity":
                v, se = res.estimate(norm_pur if cfg.normalize else witnesses.purity, i)
            elif kind == "normalized_purity":
                v, se = res.estimate(norm_pur, i)
            elif kind == "trace_distance":
                v, se = montecarlo.estimate_pair(res, partner, _trace_distance_fn(cfg.normalize), i)
            elif kind == "log_negativity":
                dmap, dse = montecarlo.sample_map(cfg.pot, cfg.dist, t, run_cfg.n_samples, run_cfg.seed)
                v = witnesses.log_negativity(dmap)
                se = montecarlo.map_functional_se(dmap, dse, witnesses.log_negativity)
            else:
                v = cfg.dist.decay_rate_gamma(t)
            rows.append((float(t), name, float(v), float(se)))
    return rows


def engine_series(cfg: ExperimentConfig, engine: str) -> list[tuple]:
    if engine == "mc":
        return mc_series(cfg)
    return analytic_series(cfg, engine)


def witness_csv(cfg: ExperimentConfig, rows) -> str:
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(WITNESS_HEADER)
    case, dname, params = case_label(cfg.pot), cfg.dist.kind, dist_params(cfg.dist)
    for t, kind, v, se in rows:
        w.writerow([repr(t), kind, repr(v), "" if math.isnan(se) else repr(se), case, dname, params])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


# -- commands -----------------------------------------------------------------------


def cmd_evolve(cfg: ExperimentConfig, out: Path) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for engine in cfg.engines:
        path = out / f"evolve_{engine}.csv"
        path.write_text(witness_csv(cfg, engine_series(cfg, engine)))
        written.append(path)
        log.info("wrote %s", path)
    return written


def cmd_compare(cfg: ExperimentConfig, out: Path, tolerance: float) -> tuple[bool, Path]:
    """Cross-check engines pairwise; MC pairs use a 4-sigma band instead of ``tolerance``."""
    if len(cfg.engines) < 2:
        raise ConfigError("compare needs at least two engines")
    out.mkdir(parents=True, exist_ok=True)
    data = {e: {(t, k): (v, se) for t, k, v, se in engine_series(cfg, e)} for e in cfg.engines}
    report = io.StringIO()
    report.write(SCHEMA_LINE + "\n")
    w = csv.writer(report, lineterminator="\n")
    w.writerow(["t", "engine_a", "engine_b", "quantity", "deviation", "allowed", "status"])
    ok = True
    for i, ea in enumerate(cfg.engines):
        for eb in cfg.engines[i + 1 :]:
            for t in cfg.times:
                for q in cfg.outputs:
                    va, sa = data[ea][(float(t), q)]
                    vb, sb = data[eb][(float(t), q)]
                    dev = abs(va - vb)
                    se = max(0.0 if math.isnan(sa) else sa, 0.0 if math.isnan(sb) else sb)
                    if "mc" in (ea, eb) and (se > 0 or dev == 0):
                        allowed = MC_SIGMAS * se + 1e-12
                    else:
                        allowed = tolerance * max(1.0, abs(va), abs(vb))
                    passed = dev <= allowed
                    ok &= passed
                    w.writerow([repr(float(t)), ea, eb, q, repr(dev), repr(allowed), "PASS" if passed else "FAIL"])
    path = out / "compare.csv"
    path.write_text(report.getvalue())
    (out / "compare_summary.json").write_text(json.dumps({"status": "PASS" if ok else "FAIL", "tolerance": tolerance}, indent=2) + "\n")
    return ok, path


def channel_rows(dist: Distribution, times) -> list[tuple]:
    rows = []
    for t in times:
        pole = dist.gamma_pole(t)
        rows.append((float(t), float(dist.G(t)), float(witnesses.dephasing_probability(dist, t)), dist.decay_rate_gamma(t), pole))
    return rows


def cmd_channel(dist: Distribution, times, out: Path) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "G", "p_d", "gamma", "pole", "distribution", "params"])
    for t, g, pd, gamma, pole in channel_rows(dist, times):
        w.writerow([repr(t), repr(g), repr(pd), "" if pole else repr(gamma), int(pole), dist.kind, dist_params(dist)])
    path = out / "channel.csv"
    path.write_text(buf.getvalue())
    return path


# -- figures ------------------------------------------------------------------------

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")


def _fig_rows(series: str, times, values, stderr=None):
    for i, t in enumerate(times):
        se = math.nan if stderr is None else stderr[i]
        yield series, float(t), float(values[i]), float(se)


def figure_data(fig: str, seed: int = 0, times=None, mc_samples: int | None = None) -> list[tuple]:
    """Data series ``(series, t, value, stderr)`` behind one of the reference figures."""
    gauss, unif = disorder.gaussian(1.0), disorder.uniform(math.sqrt(3))
    qubit, spin1, clock = hamiltonians.build_qubit(), hamiltonians.build_spin1(), hamiltonians.build_clock_qutrit()
    up2, dn2 = _named_state("up", 2)
    up3, dn3 = _named_state("sz_plus1", 3)
    rows = []
    if fig == "fig1":
        ts = np.linspace(0, 5, 501) if times is None else times
        n = mc_samples or 1000
        for dist in (gauss, unif):
            for pot, rho, op, name in ((qubit, up2, hamiltonians.PAULI["Z"], "qubit"), (spin1, up3, hamiltonians.SPIN1["Z"], "spin1")):
                exact = [witnesses.observable(maps.evolve(maps.map_closed_form(pot, dist, t), rho), op) for t in ts]
                rows += _fig_rows(f"{name}_{dist.kind}_exact", ts, exact)
                res = montecarlo.run(montecarlo.McRunConfig(n, seed, ts, dist, pot, rho, observables={"sz": op}))
                rows += _fig_rows(f"{name}_{dist.kind}_mc", ts, res.values["sz"], res.stderr["sz"])
    elif fig == "fig2":
        ts = np.linspace(0, 5, 501) if times is None else times
        for dist in (gauss, unif):
            pur, td, en = [], [], []
            for t in ts:
                m = maps.map_closed_form(qubit, dist, t)
                r = maps.evolve(m, up2)
                pur.append(witnesses.purity(r))
                td.append(witnesses.trace_distance(r, maps.evolve(m, dn2)))
                en.append(witnesses.log_negativity(m))
            rows += _fig_rows(f"purity_{dist.kind}", ts, pur)
            rows += _fig_rows(f"trace_distance_{dist.kind}", ts, td)
            rows += _fig_rows(f"log_negativity_{dist.kind}", ts, en)
            gam = [math.nan if dist.gamma_pole(t) else dist.decay_rate_gamma(t) for t in ts]
            rows += _fig_rows(f"gamma_{dist.kind}", ts, gam)
    elif fig == "fig3":
        ts = np.linspace(0, 5, 501) if times is None else times
        for N in range(1, 5):
            pot = hamiltonians.build_pauli_tensor_power(hamiltonians.DEFAULT_AXIS, N)
            up = np.zeros((2**N, 2**N), dtype=complex)
            up[0, 0] = 1
            pur = [witnesses.purity(maps.evolve(maps.map_case1(pot, gauss.G(t), t), up)) for t in ts]
            rows += _fig_rows(f"purity_N{N}", ts, pur)
    elif fig == "fig4":
        ts = np.linspace(0, 3, 301) if times is None else times
        n = mc_samples or 10_000
        op = hamiltonians.SPIN1["Z"]
        mz, pur, td = [], [], []
        for t in ts:
            m = maps.map_closed_form(clock, gauss, t)
            a, b = maps.evolve(m, up3), maps.evolve(m, dn3)
            mz.append(witnesses.observable(a, op, normalize=True))
            pur.append(witnesses.normalized_purity(a))
            td.append(witnesses.trace_distance(a / np.trace(a).real, b / np.trace(b).real))
        rows += _fig_rows("magnetization_exact", ts, mz)
        rows += _fig_rows("normalized_purity_exact", ts, pur)
        rows += _fig_rows("trace_distance_exact", ts, td)
        res = montecarlo.run(montecarlo.McRunConfig(n, seed, ts, gauss, clock, up3, observables={"sz": op}, normalize=True))
        rows += _fig_rows("magnetization_mc", ts, res.values["sz"], res.stderr["sz"])
        rows += _fig_rows("normalized_purity_mc", ts, *res.series(witnesses.normalized_purity))
    elif fig == "fig5":
        ts = np.linspace(0, 5, 501) if times is None else times
        for dist in (gauss, unif):
            pur, td = [], []
            for t in ts:
                m = maps.map_closed_form(spin1, dist, t)
                r = maps.evolve(m, up3)
                pur.append(witnesses.purity(r))
                td.append(witnesses.trace_distance(r, maps.evolve(m, dn3)))
            rows += _fig_rows(f"purity_{dist.kind}", ts, pur)
            rows += _fig_rows(f"trace_distance_{dist.kind}", ts, td)
    else:
        raise ConfigError(f"unknown figure {fig!r}; choose from {list(FIGURES)}")
    return rows


def cmd_figures(fig: str, out: Path, seed: int = 0, times=None, mc_samples=None) -> Path:
    rows = figure_data(fig, seed, times, mc_samples)
    out.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "t", "value", "stderr"])
    for series, t, v, se in rows:
        w.writerow([series, repr(t), repr(v), "" if math.isnan(se) else repr(se)])
    path = out / f"{fig}.csv"
    path.write_text(buf.getvalue())
    return path


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qudyn", description="Disorder-averaged dynamics of potent Hamiltonians.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="ExperimentConfig JSON file")
        p.add_argument("--out", default="qudyn_out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="Monte-Carlo seed (unsigned 64-bit)")
        p.add_argument("-v", "--verbose", action="store_true")

    common(sub.add_parser("evolve", help="time series of witnesses per engine"))
    p = sub.add_parser("compare", help="cross-validate engines")
    common(p)
    p.add_argument("--tolerance", type=float, default=1e-8)
    common(sub.add_parser("channel", help="dephasing-channel parameters G, p_d, gamma"))
    p = sub.add_parser("figures", help="data series behind the reference figures")
    p.add_argument("figure_id", choices=FIGURES)
    common(p, config_required=False)
    p.add_argument("--mc-samples", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    out = Path(args.out)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("qudyn: error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 2
    try:
        if args.command == "evolve":
            for path in cmd_evolve(load_config(args.config, args.seed), out):
                print(path)
        elif args.command == "compare":
            ok, path = cmd_compare(load_config(args.config, args.seed), out, args.tolerance)
            print(f"{'PASS' if ok else 'FAIL'} {path}")
            return 0 if ok else 1
        elif args.command == "channel":
            try:
                raw = json.loads(Path(args.config).read_text())
                dist = Distribution.from_json(raw.get("distribution", {"kind": "gaussian", "sigma": 1.0}))
            except (OSError, json.JSONDecodeError, disorder.DisorderError) as exc:
                raise ConfigError(str(exc)) from None
            print(cmd_channel(dist, time_grid(raw.get("time_grid", {})), out))
        elif args.command == "figures":
            times = None
            mc_samples = args.mc_samples
            seed = args.seed if args.seed is not None else 0
            if args.config:
                try:
                    raw = json.loads(Path(args.config).read_text())
                except (OSError, json.JSONDecodeError) as exc:
                    raise ConfigError(str(exc)) from None
                if "time_grid" in raw:
                    times = time_grid(raw["time_grid"])
                mc_samples = mc_samples or raw.get("mc", {}).get("n_samples")
                if args.seed is None:
                    seed = int(raw.get("mc", {}).get("seed", 0))
            print(cmd_figures(args.figure_id, out, seed, times, mc_samples))
    except ConfigError as exc:
        print(f"qudyn: config error: {exc}", file=sys.stderr)
        return 2
    except (maps.MapError, witnesses.WitnessError, OverflowError, ValueError) as exc:
        print(f"qudyn: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
