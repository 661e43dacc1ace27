"""Figure drivers: each returns a :class:`Table` that :func:`write_csv` serialises."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .avg_secrecy import avg_cs_mc, avg_cs_quad, optimize_alpha
from .config import ExperimentConfig, Sweep
from .errors import ValidationError
from .geometry import alpha_upper
from .los_solver import cs_los, solve_near_optimal
from .outage import sop_mc_many

FIGURES = ("fig2", "fig3", "fig4", "fig5")

# grids used when the config has no [sweep] section
DEFAULT_SWEEPS = {
    "fig3": Sweep("p_dbm", 14.0, 30.0, 2.0),
    "fig4": Sweep("r_s", 0.0, 3.0, 0.5),
    "fig5": Sweep("p_dbm", 14.0, 30.0, 1.0),
}
FIG_VARIABLE = {"fig2": "alpha", "fig3": "p_dbm", "fig4": "r_s", "fig5": "p_dbm"}
DEFAULT_UPSILONS = {"fig3": (0.0, 30.0), "fig4": (0.0, 30.0, 45.0), "fig5": (0.0, 30.0, 45.0)}
DEFAULT_KS = (1.0, 5.0)
FIG4_P_DBM = 25.0


@dataclass
class Table:
    name: str
    config: ExperimentConfig
    columns: tuple[str, ...]
    rows: list[tuple[float, ...]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])


def _sweep(cfg: ExperimentConfig, fig: str) -> Sweep | None:
    if cfg.sweep is None:
        return DEFAULT_SWEEPS.get(fig)
    if cfg.sweep.variable != FIG_VARIABLE[fig]:
        raise ValidationError(f"{fig} sweeps {FIG_VARIABLE[fig]}, config sweeps "
                              f"{cfg.sweep.variable}")
    return cfg.sweep


def _upsilons(cfg: ExperimentConfig, fig: str):
    if cfg.upsilon_e is None:
        # explicit q_e: a single curve, labelled with its elevation angle
        q = cfg.scenario.q_e
        return (None,), [math.degrees(math.atan2(q[2], math.hypot(q[0], q[1])))]
    ups = cfg.figure.upsilons or DEFAULT_UPSILONS[fig]
    return tuple(ups), list(ups)


def run_fig2(cfg: ExperimentConfig) -> Table:
    """E[C_s] (MC and quadrature) and the LoS capacity along the alpha grid."""
    s = cfg.scenario
    est = cfg.estimator
    spec = est.quadrature
    hi = alpha_upper(s)
    sweep = _sweep(cfg, "fig2")
    if sweep is None:
        alphas = np.linspace(1.0, hi, cfg.figure.alpha_points)
    else:
        alphas = sweep.values()
        if alphas[-1] > hi * (1 + 1e-12):
            raise ValidationError(f"alpha grid exceeds alpha_max = {hi:.6g}")
    table = Table("fig2", cfg, ("alpha", "avg_cs_mc", "avg_cs_mc_se", "avg_cs_quad", "cs_los"))
    for a in alphas:
        a = float(a)
        mc = avg_cs_mc(s, a, est.samples, est.seed)
        table.rows.append((a, mc.value, mc.std_error, avg_cs_quad(s, a, spec).value, cs_los(s, a)))
    opt = optimize_alpha(s, est.tol_alpha, spec)
    los = solve_near_optimal(s)
    near = avg_cs_quad(s, los.alpha_opt, spec).value
    table.notes += [
        f"optimum numeric: alpha = {opt.alpha_opt:.12e}, avg_cs = {opt.value.value:.12e}",
        f"optimum los: alpha = {los.alpha_opt:.12e}, avg_cs = {near:.12e}, branch = {los.branch}",
        f"optimum gap: {opt.value.value - near:.12e}",
    ]
    return table


def run_fig3(cfg: ExperimentConfig) -> Table:
    """Optimal vs near-optimal E[C_s] against transmit power."""
    est = cfg.estimator
    spec = est.quadrature
    powers = _sweep(cfg, "fig3").values()
    ks = cfg.figure.ks or DEFAULT_KS
    ups, labels = _upsilons(cfg, "fig3")
    table = Table("fig3", cfg, ("p_dbm", "K", "upsilon", "ecs_optimal", "ecs_near_optimal"))
    for k in ks:
        for u, label in zip(ups, labels):
            for p in powers:
                s = cfg.scenario_at(upsilon=u, K=k, p_dbm=float(p))
                opt = optimize_alpha(s, est.tol_alpha, spec)
                los = solve_near_optimal(s)
                table.rows.append((float(p), float(k), float(label), opt.value.value,
                                   avg_cs_quad(s, los.alpha_opt, spec).value))
    return table


def _sop_rows(table, cfg, s, rates, label, first):
    los = solve_near_optimal(s)
    est = cfg.estimator
    pts = sop_mc_many(s, los.alpha_opt, rates, est.sop_samples, est.seed)
    for pt in pts:
        theory = pt.sop_theory if pt.sop_theory is not None else math.nan
        table.rows.append((first(pt), float(label), theory, pt.sop_mc, pt.ci95_halfwidth,
                           pt.ci_center))


def run_fig4(cfg: ExperimentConfig, p_dbm: float | None = None) -> Table:
    """Outage probability against target rate at fixed power (25 dBm by default)."""
    p = FIG4_P_DBM if p_dbm is None else p_dbm
    cfg = replace(cfg, scenario=cfg.scenario.with_power(p))
    rates = _sweep(cfg, "fig4").values()
    ups, labels = _upsilons(cfg, "fig4")
    table = Table("fig4", cfg, ("r_s", "upsilon", "sop_theory", "sop_mc", "ci95", "ci_center"))
    for u, label in zip(ups, labels):
        _sop_rows(table, cfg, cfg.scenario_at(upsilon=u), rates, label, lambda pt: pt.r_s)
    table.notes.append("alpha: closed-form LoS solution per curve")
    return table


def run_fig5(cfg: ExperimentConfig) -> Table:
    """Outage probability against transmit power at a fixed target rate."""
    powers = _sweep(cfg, "fig5").values()
    ups, labels = _upsilons(cfg, "fig5")
    r_s = cfg.figure.r_s
    table = Table("fig5", cfg, ("p_dbm", "upsilon", "sop_theory", "sop_mc", "ci95", "ci_center"))
    for u, label in zip(ups, labels):
        for p in powers:
            s = cfg.scenario_at(upsilon=u, p_dbm=float(p))
            _sop_rows(table, cfg, s, [r_s], label, lambda pt: pt.p_dbm)
    table.notes.append(f"r_s = {r_s!r}; alpha: closed-form LoS solution per point")
    return table


RUNNERS = {"fig2": run_fig2, "fig3": run_fig3, "fig4": run_fig4, "fig5": run_fig5}


def run_figure(name: str, cfg: ExperimentConfig) -> Table:
    try:
        return RUNNERS[name](cfg)
    except KeyError:
        raise ValidationError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}") \
            from None


def _fmt(v: float) -> str:
    return f"{v:.11e}"


def to_csv(table: Table) -> str:
    """Comma-separated text, ``#`` comment header, 12 significant digits."""
    out = io.StringIO()
    out.write(f"# figure: {table.name}\n")
    out.write(f"# seed: {table.config.estimator.seed}\n")
    for line in table.config.to_text().splitlines():
        out.write(f"# {line}\n")
    for note in table.notes:
        out.write(f"# {note}\n")
    out.write(",".join(table.columns) + "\n")
    for row in table.rows:
        out.write(",".join(_fmt(float(v)) for v in row) + "\n")
    return out.getvalue()


def write_csv(table: Table, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv(table))


def read_csv(path: str) -> tuple[dict[str, np.ndarray], list[str]]:
    """Inverse of :func:`write_csv`: ``(columns by name, comment lines)``."""
    comments, lines = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                comments.append(line[1:].strip())
            elif line:
                lines.append(line)
    names = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]]).reshape(-1, len(names))
    return {n: data[:, i] for i, n in enumerate(names)}, comments
