"""Command line: ``polaronlab run CONFIG.yaml`` and ``polaronlab plot ARTIFACT.csv``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.

Config keys (all optional except where noted)::

    seed: 0
    experiments: [simulate, dress, conjugation-test, energy-scan,
                  picard-verify, quantum-check, regularity-check]
    model:   {d: 1, cutoff: 2.0, K: 1.0}
    grid:    {resolution: 64, tol: 0.02}
    initial: {q: [0.0], p: [1.0], field: smooth | zero, amplitude: 0.5}
    flow:    {system: undressed, integrator: strang, dt: 1.0e-3, horizon: 10.0,
              frame: lab, stride: 100}
    output:  {dir: out}
    workers: 1
    dress:        {theta: 1.0}
    conjugation:  {horizon: 2.0, dt: 1.0e-3}
    energy_scan:  {cutoffs: [1, 2, 4, 8]}
    picard:       {dt: 1.0e-4}
    regularity:   {s: [1, 2], horizon: 5.0, dt: 1.0e-3}
    quantum:      {hbar: [0.4, 0.2, 0.1], N_c: 20, mode_resolution: 16, modes: [1.375],
                   q: 0.0, p: 1.0, alpha: [0.5], T: 1.0, identity_N_c: [8, 12, 16],
                   identity_hbar: 0.5, identity_n_x: 32}

The default dt = 1e-3 suits cutoffs up to about 8: the stiff scale is the unit
field rotation plus ||k f||.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .dressing import DressingMap, apply as apply_dressing
from .dynamics import (
    FlowConfig,
    IntegrationError,
    PicardRefusal,
    conjugation_residuals,
    integrate,
    lipschitz_constant,
    local_existence_time,
    picard_solve,
)
from .energy import energy_dressed, energy_undressed
from .formfactor import ModelParams, closed_form_scalars, form_factors, translate
from .phasespace import (
    DEFAULT_GRID_TOL,
    ParameterError,
    PhasePoint,
    WeightSpec,
    h_norm,
    make_grid,
    smooth_field,
    weighted_norm,
)

log = logging.getLogger("polaronlab")

EXPERIMENTS = (
    "simulate",
    "dress",
    "conjugation-test",
    "energy-scan",
    "picard-verify",
    "quantum-check",
    "regularity-check",
)
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line else msg)


# ---------------------------------------------------------------- config


def _line_index(node, path=(), out=None):
    """Map key paths to 1-based source lines from a composed YAML node tree."""
    out = {} if out is None else out
    out.setdefault(path, node.start_mark.line + 1)
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            p = path + (k.value,)
            out[p] = k.start_mark.line + 1
            _line_index(v, p, out)
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            _line_index(v, path + (i,), out)
    return out


@dataclass
class RunConfig:
    raw: dict
    lines: dict
    seed: int = 0
    experiments: list = field(default_factory=list)
    params: ModelParams | None = None
    resolution: int = 64
    tol: float = DEFAULT_GRID_TOL
    flow: FlowConfig | None = None
    outdir: Path = Path("out")
    workers: int = 1

    def line(self, *path):
        while path and path not in self.lines:
            path = path[:-1]
        return self.lines.get(path)

    def section(self, name) -> dict:
        sec = self.raw.get(name, {}) or {}
        if not isinstance(sec, dict):
            raise ConfigError(f"'{name}' must be a mapping", self.line(name))
        return sec


_KNOWN = {"seed", "experiments", "model", "grid", "initial", "flow", "output", "workers", "dress",
          "conjugation", "energy_scan", "picard", "regularity", "quantum"}


def parse_config(text: str, base: Path | None = None) -> RunConfig:
    try:
        node = yaml.compose(text)
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"unparseable config: {getattr(exc, 'problem', exc)}",
                          mark.line + 1 if mark else None) from None
    raw = raw or {}
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping", 1)
    lines = _line_index(node) if node is not None else {}
    cfg = RunConfig(raw, lines)
    for key in raw:
        if key not in _KNOWN:
            raise ConfigError(f"unknown key '{key}'", cfg.line(key))

    def guard(path, fn):
        try:
            return fn()
        except ConfigError:
            raise
        except (ValueError, TypeError, KeyError) as exc:
            raise ConfigError(str(exc), cfg.line(*path)) from None

    cfg.seed = guard(("seed",), lambda: int(raw.get("seed", 0)))
    exps = raw.get("experiments", []) or []
    if not isinstance(exps, list):
        raise ConfigError("'experiments' must be a list", cfg.line("experiments"))
    for i, e in enumerate(exps):
        if e not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment '{e}'; expected one of {', '.join(EXPERIMENTS)}",
                              cfg.line("experiments", i))
    cfg.experiments = list(exps)
    m = cfg.section("model")
    for key in ("cutoff", "K", "hbar", "g"):
        if key in m:
            guard(("model", key), lambda: float(m[key]))
    K_, cut_ = float(m.get("K", 1.0)), float(m.get("cutoff", 2.0))
    if not 0 < K_ < cut_:
        raise ConfigError(f"need 0 < K < cutoff, got K={K_}, cutoff={cut_}",
                          cfg.line("model", "K" if "K" in m else "cutoff"))
    cfg.params = guard(("model",),lambda: ModelParams(int(m.get("d", 1)), float(m.get("cutoff", 2.0)),
                                                       float(m.get("K", 1.0)), float(m.get("hbar", 0.0)),
                                                       float(m.get("g", 1.0))))
    if cfg.params.d not in (1, 2, 3):
        raise ConfigError(f"dimension must be 1, 2 or 3, got {cfg.params.d}", cfg.line("model", "d"))
    gsec = cfg.section("grid")
    cfg.resolution = guard(("grid", "resolution"), lambda: int(gsec.get("resolution", 64)))
    cfg.tol = guard(("grid", "tol"), lambda: float(gsec.get("tol", DEFAULT_GRID_TOL)))
    guard(("grid", "resolution"), lambda: make_grid(cfg.params.d, cfg.params.cutoff, cfg.params.K,
                                                    cfg.resolution, cfg.tol))
    f = cfg.section("flow")
    cfg.flow = guard(("flow",), lambda: FlowConfig(
        system=f.get("system", "undressed"), integrator=f.get("integrator", "strang"),
        dt=float(f.get("dt", 1e-3)), horizon=float(f.get("horizon", 1.0)), frame=f.get("frame", "lab"),
        g=float(f.get("g", 1.0)), stride=int(f.get("stride", 1))))
    if cfg.flow.system == "generalized":
        raise ConfigError("the generalized system needs a profile and is library-only", cfg.line("flow", "system"))
    ini = cfg.section("initial")
    for key in ("q", "p"):
        v = ini.get(key, [0.0] * cfg.params.d)
        if len(np.atleast_1d(v)) != cfg.params.d:
            raise ConfigError(f"initial.{key} must have {cfg.params.d} entries", cfg.line("initial", key))
    if ini.get("field", "smooth") not in ("smooth", "zero"):
        raise ConfigError("initial.field must be 'smooth' or 'zero'", cfg.line("initial", "field"))
    out = cfg.section("output")
    cfg.outdir = Path(out.get("dir", "out"))
    if base is not None and not cfg.outdir.is_absolute():
        cfg.outdir = base / cfg.outdir
    cfg.workers = guard(("workers",), lambda: int(raw.get("workers", 1)))
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1", cfg.line("workers"))
    q = cfg.section("quantum")
    if "quantum-check" in cfg.experiments and any(h <= 0 for h in q.get("hbar", [0.4, 0.2, 0.1])):
        raise ConfigError("quantum.hbar entries must be > 0", cfg.line("quantum", "hbar"))
    return cfg


# ---------------------------------------------------------------- helpers


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def _setup(cfg: RunConfig):
    p = cfg.params
    grid = make_grid(p.d, p.cutoff, p.K, cfg.resolution, cfg.tol)
    ff = form_factors(grid)
    rng = np.random.default_rng(cfg.seed)
    ini = cfg.section("initial")
    q = np.asarray(ini.get("q", [0.0] * p.d), dtype=float)
    pp = np.asarray(ini.get("p", [0.0] * p.d), dtype=float)
    if ini.get("field", "smooth") == "zero":
        alpha = np.zeros(grid.n, complex)
    else:
        alpha = smooth_field(grid, rng, float(ini.get("amplitude", 0.5)))
    return grid, ff, PhasePoint(q, pp, alpha), rng


def _trajectory_rows(traj, ff):
    d = ff.grid.d
    rows = []
    for t, u in zip(traj.times, traj.states):
        rows.append([t, *u.q, *u.p, energy_undressed(u, ff).value, energy_dressed(u, ff).value,
                     np.sqrt(ff.norm2(u.alpha)), weighted_norm(u.alpha, ff.grid, WeightSpec(1.0))])
    header = ["t", *[f"q_{j + 1}" for j in range(d)], *[f"p_{j + 1}" for j in range(d)],
              "E", "E_hat", "norm_alpha", "norm_bracket_alpha"]
    return header, rows


# ------------------------------------------------------------ experiments


def exp_simulate(cfg, out, manifest):
    grid, ff, u0, _ = _setup(cfg)
    try:
        traj = integrate(cfg.flow, u0, ff)
    except IntegrationError as exc:
        header, rows = _trajectory_rows(exc.trajectory, ff)
        write_csv(out / "simulate_trajectory.csv", header, rows)
        raise
    header, rows = _trajectory_rows(traj, ff)
    write_csv(out / "simulate_trajectory.csv", header, rows)
    E = traj.energy_values
    write_csv(out / "simulate_energy.csv", ["t", "E", "drift"], [[t, e, e - E[0]] for t, e in zip(traj.times, E)])
    summary = {"endpoint": traj.final.to_record(), "relative_drift": traj.relative_drift(),
               "max_relative_deviation": traj.max_relative_deviation(), "steps": traj.meta.get("steps")}
    (out / "simulate_summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    manifest["results"]["simulate"] = {k: summary[k] for k in ("relative_drift", "max_relative_deviation")}


def exp_dress(cfg, out, manifest):
    grid, ff, u0, _ = _setup(cfg)
    theta = float(cfg.section("dress").get("theta", 1.0))
    u1 = apply_dressing(DressingMap(theta, ff), u0)
    d = grid.d
    header = ["which", *[f"q_{j + 1}" for j in range(d)], *[f"p_{j + 1}" for j in range(d)], "E", "E_hat"]
    rows = [[name, *u.q, *u.p, energy_undressed(u, ff).value, energy_dressed(u, ff).value]
            for name, u in (("input", u0), ("dressed", u1))]
    write_csv(out / "dress.csv", header, rows)
    (out / "dress_state.json").write_text(json.dumps({"theta": theta, "input": u0.to_record(),
                                                      "output": u1.to_record()}, sort_keys=True) + "\n")
    manifest["results"]["dress"] = {"theta": theta}


def exp_conjugation(cfg, out, manifest):
    grid, ff, u0, _ = _setup(cfg)
    sec = cfg.section("conjugation")
    T, dt = float(sec.get("horizon", 2.0)), float(sec.get("dt", 1e-3))
    rows = []
    for h in (dt, dt / 2):
        r = conjugation_residuals(T, u0, ff, h)
        rows += [[h, "D(-1)PhiD(1)", r["dress-first"]], [h, "D(1)PhiD(-1)", r["undress-first"]]]
    order = float(np.log2(rows[0][2] / rows[2][2])) if rows[2][2] > 0 else float("inf")
    write_csv(out / "conjugation.csv", ["dt", "order", "residual"], rows)
    manifest["results"]["conjugation-test"] = {"observed_order": order,
                                               "residual_D-1PhiD1": rows[0][2], "residual_D1PhiD-1": rows[1][2]}


def exp_energy_scan(cfg, out, manifest):
    p = cfg.params
    rows = []
    for lam in cfg.section("energy_scan").get("cutoffs", [1, 2, 4, 8]):
        lam = float(lam)
        if lam <= p.K:
            raise ConfigError(f"energy_scan cutoff {lam} must exceed K={p.K}", cfg.line("energy_scan", "cutoffs"))
        grid = make_grid(p.d, lam, p.K, cfg.resolution, cfg.tol)
        ff = form_factors(grid)
        cf = closed_form_scalars(ModelParams(p.d, lam, p.K))
        q = np.zeros(p.d)
        umin = PhasePoint(q, np.zeros(p.d), -translate(ff.f, q, grid) / np.sqrt(2))
        rows.append([lam, ff.norm2_f, cf["norm2_f"], -0.5 * ff.norm2_f, energy_undressed(umin, ff).value,
                     -0.5 * ff.norm2_fK, cf["C"]])
    write_csv(out / "energy_scan.csv",
              ["cutoff", "norm2_f_grid", "norm2_f_exact", "inf_E", "E_at_minimizer", "inf_E_hat", "C"], rows)
    manifest["results"]["energy-scan"] = {"rows": len(rows)}


def exp_picard(cfg, out, manifest):
    grid, ff, u0, _ = _setup(cfg)
    dt = float(cfg.section("picard").get("dt", 1e-4))
    C = lipschitz_constant(ff)
    R = h_norm(u0, grid)
    T = local_existence_time(R, C)
    res = picard_solve(FlowConfig("undressed", "picard", dt, T), u0, ff)
    strang = integrate(FlowConfig("undressed", "strang", dt, T), u0, ff).final
    dist = h_norm(res.endpoint_lab() - strang, grid)
    write_csv(out / "picard.csv", ["iteration", "increment"], [[i + 1, v] for i, v in enumerate(res.increments)])
    manifest["results"]["picard-verify"] = {"R": R, "T_R": T, "max_ratio": res.max_ratio,
                                            "iterations": res.iterations, "endpoint_distance": dist}


def exp_regularity(cfg, out, manifest):
    grid, ff, u0, _ = _setup(cfg)
    sec = cfg.section("regularity")
    T, dt = float(sec.get("horizon", 5.0)), float(sec.get("dt", 1e-3))
    traj = integrate(FlowConfig("undressed", "strang", dt, T, stride=max(1, int(round(0.01 / dt)))), u0, ff)
    rows, worst = [], -np.inf
    for s in sec.get("s", [1, 2]):
        w = WeightSpec(float(s))
        a0, fs = weighted_norm(u0.alpha, grid, w), weighted_norm(ff.f, grid, w)
        for t, u in zip(traj.times, traj.states):
            lhs, bound = weighted_norm(u.alpha, grid, w), a0 + abs(t) / np.sqrt(2) * fs
            worst = max(worst, lhs - bound)
            rows.append([float(s), t, lhs, bound])
    write_csv(out / "regularity.csv", ["s", "t", "weighted_norm", "bound"], rows)
    manifest["results"]["regularity-check"] = {"max_excess": worst}


def _quantum_row(args):
    from .quantumdesk import QuantumLattice, commensurate_box, particle_points, semiclassical_check

    scenario, hb, qsec, p = args
    base = make_grid(1, p.cutoff, p.K, int(qsec.get("mode_resolution", 16)))
    modes = base.subset([base.index_of([k]) for k in qsec.get("modes", [1.375])])
    q0, p0, T = float(qsec.get("q", 0.0)), float(qsec.get("p", 1.0)), float(qsec.get("T", 1.0))
    L = commensurate_box(float(np.min(np.abs(modes.nodes))), abs(q0) + abs(p0) * T + 1.0 + 6 * np.sqrt(0.4))
    lat = QuantumLattice(particle_points(hb, L), L, hb, modes, int(qsec.get("N_c", 20)))
    u0 = PhasePoint([q0], [p0], np.asarray(qsec.get("alpha", [0.5]), dtype=complex))
    return semiclassical_check(scenario, u0, lat, p.K, p.cutoff, T)


def exp_quantum(cfg, out, manifest):
    from .quantumdesk import SCENARIOS, QuantumLattice, commensurate_box, dressing_identity_residual

    p = cfg.params
    if p.d != 1:
        raise ConfigError("quantum-check runs in d = 1 only", cfg.line("model", "d"))
    qsec = cfg.section("quantum")
    jobs = [(sc, float(h), qsec, p) for sc in SCENARIOS for h in qsec.get("hbar", [0.4, 0.2, 0.1])]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            rows = list(ex.map(_quantum_row, jobs))
    else:
        rows = [_quantum_row(j) for j in jobs]
    cols = ["hbar", "scenario", "t", "err_q", "err_p", "err_alpha", "fidelity"]
    write_csv(out / "quantum_semiclassical.csv", cols + ["err_alpha_Dminus", "truncation_warning"],
              [[r[c] for c in cols] + [r.get("err_alpha_Dminus", ""), r["truncation_warning"]] for r in rows])
    base = make_grid(1, p.cutoff, p.K, int(qsec.get("mode_resolution", 16)))
    modes = base.subset([base.index_of([k]) for k in qsec.get("modes", [1.375])[:1]])
    L = commensurate_box(float(abs(modes.nodes[0, 0])), 2.0)
    idrows = []
    for Nc in qsec.get("identity_N_c", [8, 12, 16]):
        lat = QuantumLattice(int(qsec.get("identity_n_x", 32)), L, float(qsec.get("identity_hbar", 0.5)), modes,
                             int(Nc))
        r = dressing_identity_residual(lat, p.K, p.cutoff)
        lit = dressing_identity_residual(lat, p.K, p.cutoff, "literal")
        idrows.append([int(Nc), r["residual"], r["C"], lit["residual"], lit["C"]])
    write_csv(out / "quantum_identity.csv", ["N_c", "residual", "C", "residual_literal_C", "C_literal"], idrows)
    manifest["results"]["quantum-check"] = {"identity_residuals": [r[1] for r in idrows]}


RUNNERS = {
    "simulate": exp_simulate,
    "dress": exp_dress,
    "conjugation-test": exp_conjugation,
    "energy-scan": exp_energy_scan,
    "picard-verify": exp_picard,
    "quantum-check": exp_quantum,
    "regularity-check": exp_regularity,
}


def _manifest(cfg: RunConfig) -> dict:
    import scipy

    p = cfg.params
    grid = make_grid(p.d, p.cutoff, p.K, cfg.resolution, cfg.tol)
    ff = form_factors(grid)
    _, _, u0, _ = _setup(cfg)
    C = lipschitz_constant(ff)
    return {
        "config": cfg.raw,
        "constants": {
            "lipschitz_C": C,
            "T_R": local_existence_time(h_norm(u0, grid), C),
            "R": h_norm(u0, grid),
            "dressing_C": closed_form_scalars(p)["C"],
            "grid_tol": cfg.tol,
            "grid_volume_error": grid.volume_error(),
            "grid_nodes": grid.n,
        },
        "versions": {"polaronlab": __version__, "python": platform.python_version(),
                     "numpy": np.__version__, "scipy": scipy.__version__},
        "results": {},
        "status": "running",
    }


def run(config_path, outdir: str | None = None) -> int:
    path = Path(config_path)
    try:
        text = path.read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text, path.parent)
        if outdir is not None:
            cfg.outdir = Path(outdir)
        manifest = _manifest(cfg)
    except ConfigError as exc:
        print(f"{path}:{exc}", file=sys.stderr)
        return EXIT_CONFIG
    cfg.outdir.mkdir(parents=True, exist_ok=True)
    manifest["started"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    code = EXIT_OK
    try:
        for name in cfg.experiments:
            log.info("running %s", name)
            RUNNERS[name](cfg, cfg.outdir, manifest)
        manifest["status"] = "ok"
    except (ConfigError, PicardRefusal, ParameterError) as exc:
        manifest["status"] = "config-error"
        manifest["error"] = str(exc)
        print(f"{path}:{exc}", file=sys.stderr)
        code = EXIT_CONFIG
    except (IntegrationError, ArithmeticError, FloatingPointError, np.linalg.LinAlgError) as exc:
        manifest["status"] = "numerical-failure"
        manifest["error"] = str(exc)
        print(f"numerical failure: {exc}", file=sys.stderr)
        code = EXIT_NUMERIC
    manifest["finished"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    (cfg.outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return code


# ------------------------------------------------------------------- plot

PLOT_SCHEMAS = {
    "energy-drift": ["t", "drift"],
    "hbar-convergence": ["hbar", "scenario", "err_q", "err_p", "err_alpha"],
    "trajectory": ["t", "q_1", "p_1"],
}


def plot(csv_path, svg_path) -> None:
    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{csv_path} has no data rows")
    cols = set(rows[0])
    schema = next((s for s, need in PLOT_SCHEMAS.items() if set(need) <= cols), None)
    if schema is None:
        expected = "; ".join(f"{s}: {', '.join(c)}" for s, c in PLOT_SCHEMAS.items())
        raise ValueError(f"unrecognized columns {sorted(cols)}; expected one of [{expected}]")
    plt.rcParams["svg.hashsalt"] = "polaronlab"
    fig, ax = plt.subplots(figsize=(6, 4))
    col = lambda name, rs=rows: np.array([float(r[name]) for r in rs])  # noqa: E731
    if schema == "energy-drift":
        ax.plot(col("t"), col("drift"))
        ax.set_xlabel("t")
        ax.set_ylabel("E(t) - E(0)")
    elif schema == "trajectory":
        for name in sorted(c for c in cols if c[:2] in ("q_", "p_")):
            ax.plot(col("t"), col(name), label=name)
        ax.set_xlabel("t")
        ax.legend()
    else:
        for sc in sorted({r["scenario"] for r in rows}):
            sub = [r for r in rows if r["scenario"] == sc]
            for name in ("err_q", "err_p", "err_alpha"):
                y = col(name, sub)
                if np.all(y > 0):
                    ax.loglog(col("hbar", sub), y, marker="o", label=f"{sc} {name}")
        ax.set_xlabel("hbar")
        ax.set_ylabel("error")
        ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(svg_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="polaronlab", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run the experiments listed in a YAML config")
    r.add_argument("config")
    r.add_argument("--out", default=None, help="override output.dir")
    pl = sub.add_parser("plot", help="render an artifact CSV as SVG")
    pl.add_argument("csv")
    pl.add_argument("-o", "--output", required=True)
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.cmd == "run":
        return run(args.config, args.out)
    try:
        plot(args.csv, args.output)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
