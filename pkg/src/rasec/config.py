"""Experiment configuration: INI-style ``key = value`` text with ``[section]`` headers.

Recognised sections and keys (everything is optional)::

    [scenario]
    q_b = 25, 0, 43.30127      # or d_b / upsilon_b (meters / degrees)
    q_e = ...                  # or d_e / upsilon (alias upsilon_e)
    zeta_0, beta, beta_b, beta_e, K, K_b, K_e, G_0, wavelength, sigma2_dbm, p_dbm

    [sweep]
    variable = p_dbm           # alpha | p_dbm | r_s | upsilon | K
    start, stop, step

    [figure]
    upsilons = 0, 30, 45       # eavesdropper angles swept as separate curves
    ks = 1, 5                  # Rician factors (fig3)
    r_s = 1                    # target rate for the SOP-vs-power figure
    alpha_points = 64          # fig2 grid size when no alpha sweep is given

    [estimator]
    samples, sop_samples, seed, atol, rtol, limit, tail_eps, tol_alpha

    [output]
    path = out.csv
"""
from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import ParseError, ValidationError
from .geometry import Scenario, alpha_max, position
from .specfun import QuadratureSpec

SWEEP_VARIABLES = ("alpha", "p_dbm", "r_s", "upsilon", "K")

DEFAULT_D_B, DEFAULT_UPS_B = 50.0, 60.0
DEFAULT_D_E, DEFAULT_UPS_E = 70.0, 30.0

_SCENARIO_KEYS = {
    "q_b", "q_e", "d_b", "upsilon_b", "d_e", "upsilon", "upsilon_e", "zeta_0", "beta",
    "beta_b", "beta_e", "k", "k_b", "k_e", "g_0", "wavelength", "sigma2_dbm", "p_dbm",
}
_SECTIONS = {
    "scenario": _SCENARIO_KEYS,
    "sweep": {"variable", "start", "stop", "step"},
    "figure": {"upsilons", "ks", "r_s", "alpha_points"},
    "estimator": {"samples", "sop_samples", "seed", "atol", "rtol", "limit", "tail_eps",
                  "tol_alpha"},
    "output": {"path"},
}


@dataclass(frozen=True)
class Sweep:
    variable: str
    start: float
    stop: float
    step: float

    def values(self) -> np.ndarray:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return np.round(self.start + self.step * np.arange(n), 12)


@dataclass(frozen=True)
class EstimatorConfig:
    samples: int = 1_000_000
    sop_samples: int = 10_000_000
    seed: int = 0
    atol: float = 1e-8
    rtol: float = 1e-8
    limit: int = 200
    tail_eps: float = 1e-10
    tol_alpha: float = 1e-4

    @property
    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(self.atol, self.rtol, self.limit, self.tail_eps)


@dataclass(frozen=True)
class FigureOptions:
    upsilons: tuple[float, ...] | None = None
    ks: tuple[float, ...] | None = None
    r_s: float = 1.0
    alpha_points: int = 64


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: Scenario
    upsilon_e: float | None = DEFAULT_UPS_E   # None when q_e was given explicitly
    d_e: float = DEFAULT_D_E
    sweep: Sweep | None = None
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    figure: FigureOptions = field(default_factory=FigureOptions)
    output: str | None = None

    def scenario_at(self, upsilon: float | None = None, K: float | None = None,
                    p_dbm: float | None = None) -> Scenario:
        """Copy of the base scenario with the eavesdropper angle, K or power replaced."""
        from dataclasses import replace
        s = self.scenario
        changes = {}
        if upsilon is not None:
            changes["q_e"] = position(self.d_e, upsilon)
        if K is not None:
            changes["K_b"] = changes["K_e"] = float(K)
        if p_dbm is not None:
            changes["p_dbm"] = float(p_dbm)
        return replace(s, **changes) if changes else s

    def to_text(self) -> str:
        """Canonical fully-resolved form, parseable by :func:`parse_config`."""
        s = self.scenario
        lines = ["[scenario]"]
        lines.append("q_b = " + ", ".join(repr(float(v)) for v in s.q_b))
        if self.upsilon_e is None:
            lines.append("q_e = " + ", ".join(repr(float(v)) for v in s.q_e))
        else:
            lines.append(f"d_e = {self.d_e!r}")
            lines.append(f"upsilon = {self.upsilon_e!r}")
        for name in ("zeta_0", "beta_b", "beta_e", "K_b", "K_e", "G_0", "wavelength",
                     "sigma2_dbm", "p_dbm"):
            lines.append(f"{name} = {getattr(s, name)!r}")
        if self.sweep is not None:
            lines.append("[sweep]")
            for f in fields(self.sweep):
                lines.append(f"{f.name} = {getattr(self.sweep, f.name)}")
        fo = self.figure
        lines.append("[figure]")
        if fo.upsilons is not None:
            lines.append("upsilons = " + ", ".join(repr(v) for v in fo.upsilons))
        if fo.ks is not None:
            lines.append("ks = " + ", ".join(repr(v) for v in fo.ks))
        lines.append(f"r_s = {fo.r_s!r}")
        lines.append(f"alpha_points = {fo.alpha_points}")
        lines.append("[estimator]")
        for f in fields(self.estimator):
            lines.append(f"{f.name} = {getattr(self.estimator, f.name)!r}")
        if self.output is not None:
            lines.append("[output]")
            lines.append(f"path = {self.output}")
        return "\n".join(lines) + "\n"


def _key_line(text: str, section: str, key: str) -> int | None:
    """Line number of ``key`` inside ``[section]`` (1-based), for messages."""
    current = None
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"\[([^\]]+)\]", line)
        if m:
            current = m.group(1).strip().lower()
            continue
        if current == section and re.match(rf"{re.escape(key)}\s*[=:]", line, re.IGNORECASE):
            return i
    return None


def _read(text: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    cp.optionxform = str.lower
    try:
        cp.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError("key outside of any [section]", exc.lineno) from None
    except configparser.DuplicateOptionError as exc:
        raise ParseError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno) from None
    except configparser.DuplicateSectionError as exc:
        raise ParseError(f"duplicate section [{exc.section}]", exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0]
        line = text.splitlines()[lineno - 1].strip()
        raise ParseError(f"cannot parse {line!r}; expected 'key = value'",
                         lineno) from None
    return cp


class _Section:
    def __init__(self, cp, text, name):
        self.name = name
        self.text = text
        self.data = dict(cp[name]) if cp.has_section(name) else {}

    def line(self, key):
        return _key_line(self.text, self.name, key)

    def has(self, key):
        return key in self.data

    def _raw(self, key):
        return self.data[key].strip()

    def float(self, key, default=None):
        if key not in self.data:
            return default
        try:
            value = float(self._raw(key))
        except ValueError:
            raise ParseError(f"[{self.name}] {key}: expected a number, got {self._raw(key)!r}",
                             self.line(key)) from None
        if not math.isfinite(value):
            raise ValidationError(f"[{self.name}] {key} must be finite")
        return value

    def int(self, key, default=None):
        if key not in self.data:
            return default
        raw = self._raw(key).replace("_", "")
        try:
            value = float(raw)
        except ValueError:
            value = math.nan
        if not (math.isfinite(value) and value == int(value)):
            raise ParseError(f"[{self.name}] {key}: expected an integer, got {self._raw(key)!r}",
                             self.line(key))
        return int(value)

    def floats(self, key, default=None, n=None):
        if key not in self.data:
            return default
        parts = [p for p in re.split(r"[,\s]+", self._raw(key).strip("()[] ")) if p]
        try:
            values = tuple(float(p) for p in parts)
        except ValueError:
            raise ParseError(f"[{self.name}] {key}: expected numbers, got {self._raw(key)!r}",
                             self.line(key)) from None
        if n is not None and len(values) != n:
            raise ParseError(f"[{self.name}] {key}: expected {n} numbers, got {len(values)}",
                             self.line(key))
        if not values:
            raise ParseError(f"[{self.name}] {key}: empty list", self.line(key))
        return values

    def str(self, key, default=None):
        return self._raw(key) if key in self.data else default


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate configuration text; defaults reproduce the reference scenario."""
    cp = _read(text)
    for name in cp.sections():
        if name not in _SECTIONS:
            raise ParseError(f"unknown section [{name}]", _section_line(text, name))
        for key in cp[name]:
            if key not in _SECTIONS[name]:
                raise ParseError(f"unknown key {key!r} in [{name}]", _key_line(text, name, key))

    sc = _Section(cp, text, "scenario")
    if sc.has("q_b") and (sc.has("d_b") or sc.has("upsilon_b")):
        raise ValidationError("give either q_b or d_b/upsilon_b, not both")
    if sc.has("q_e") and (sc.has("d_e") or sc.has("upsilon") or sc.has("upsilon_e")):
        raise ValidationError("give either q_e or d_e/upsilon, not both")
    if sc.has("upsilon") and sc.has("upsilon_e"):
        raise ValidationError("upsilon and upsilon_e are aliases; give only one")
    d_e = sc.float("d_e", DEFAULT_D_E)
    if sc.has("q_b"):
        q_b = sc.floats("q_b", n=3)
    else:
        d_b = sc.float("d_b", DEFAULT_D_B)
        if d_b <= 0:
            raise ValidationError("d_b must be positive")
        q_b = position(d_b, sc.float("upsilon_b", DEFAULT_UPS_B))
    if sc.has("q_e"):
        q_e = sc.floats("q_e", n=3)
        ups_e = None
    else:
        if d_e <= 0:
            raise ValidationError("d_e must be positive")
        ups_e = sc.float("upsilon", sc.float("upsilon_e", DEFAULT_UPS_E))
        q_e = position(d_e, ups_e)

    def pair(common, b, e, default):
        both = sc.float(common, default)
        return sc.float(b, both), sc.float(e, both)

    beta_b, beta_e = pair("beta", "beta_b", "beta_e", 3.0)
    k_b, k_e = pair("k", "k_b", "k_e", 1.0)
    scenario = Scenario(
        q_b=q_b, q_e=q_e, zeta_0=sc.float("zeta_0", 1e-3), beta_b=beta_b, beta_e=beta_e,
        K_b=k_b, K_e=k_e, G_0=sc.float("g_0", 4.0), wavelength=sc.float("wavelength", 0.125),
        sigma2_dbm=sc.float("sigma2_dbm", -60.0), p_dbm=sc.float("p_dbm", 16.0))

    sw = _Section(cp, text, "sweep")
    sweep = None
    if sw.data:
        variable = sw.str("variable")
        if variable is not None and variable.lower() == "k":
            variable = "K"
        if variable is None:
            raise ValidationError("[sweep] needs exactly one 'variable'")
        if variable not in SWEEP_VARIABLES:
            raise ValidationError(f"[sweep] variable must be one of {', '.join(SWEEP_VARIABLES)},"
                                  f" got {variable!r}")
        missing = [k for k in ("start", "stop", "step") if not sw.has(k)]
        if missing:
            raise ValidationError(f"[sweep] missing {', '.join(missing)}")
        sweep = Sweep(variable, sw.float("start"), sw.float("stop"), sw.float("step"))
        if not sweep.step > 0:
            raise ValidationError("[sweep] step must be > 0")
        if sweep.stop < sweep.start:
            raise ValidationError("[sweep] grid is empty (stop < start)")
        if variable == "alpha" and sweep.start < 1.0:
            raise ValidationError("[sweep] alpha grid must start at >= 1")
        if variable == "r_s" and sweep.start < 0.0:
            raise ValidationError("[sweep] r_s grid must be >= 0")
        if variable == "K" and sweep.start < 0.0:
            raise ValidationError("[sweep] K grid must be >= 0")
        if variable == "upsilon" and ups_e is None:
            raise ValidationError("[sweep] upsilon sweep needs the d_e/upsilon form of q_e")

    fg = _Section(cp, text, "figure")
    figure = FigureOptions(upsilons=fg.floats("upsilons"), ks=fg.floats("ks"),
                           r_s=fg.float("r_s", 1.0), alpha_points=fg.int("alpha_points", 64))
    if figure.r_s < 0:
        raise ValidationError("[figure] r_s must be >= 0")
    if figure.alpha_points < 2:
        raise ValidationError("[figure] alpha_points must be >= 2")
    if figure.ks is not None and min(figure.ks) < 0:
        raise ValidationError("[figure] ks must be >= 0")
    if figure.upsilons is not None and ups_e is None:
        raise ValidationError("[figure] upsilons needs the d_e/upsilon form of q_e")

    es = _Section(cp, text, "estimator")
    est = EstimatorConfig(
        samples=es.int("samples", 1_000_000), sop_samples=es.int("sop_samples", 10_000_000),
        seed=es.int("seed", 0), atol=es.float("atol", 1e-8), rtol=es.float("rtol", 1e-8),
        limit=es.int("limit", 200), tail_eps=es.float("tail_eps", 1e-10),
        tol_alpha=es.float("tol_alpha", 1e-4))
    if est.samples < 1 or est.sop_samples < 1:
        raise ValidationError("[estimator] sample counts must be >= 1")
    if est.seed < 0:
        raise ValidationError("[estimator] seed must be a nonnegative integer")
    if not (est.atol > 0 and est.rtol > 0 and est.tail_eps > 0 and est.tol_alpha > 0):
        raise ValidationError("[estimator] tolerances must be > 0")
    if est.limit < 1:
        raise ValidationError("[estimator] limit must be >= 1")

    out = _Section(cp, text, "output").str("path")
    return ExperimentConfig(scenario, ups_e, d_e, sweep, est, figure, out)


def _section_line(text: str, name: str) -> int | None:
    for i, raw in enumerate(text.splitlines(), start=1):
        if raw.strip().lower() == f"[{name}]":
            return i
    return None


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path!r}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ParseError(f"config {path!r} is not valid UTF-8") from None
    return parse_config(text)


def describe(cfg: ExperimentConfig) -> list[str]:
    """Short human summary used by the ``validate`` command."""
    s = cfg.scenario
    lines = [f"q_b = {tuple(float(v) for v in s.q_b)}",
             f"q_e = {tuple(float(v) for v in s.q_e)}",
             f"alpha_max = {alpha_max(s):.6g}",
             f"gamma = {s.gamma:.6g} ({s.p_dbm - s.sigma2_dbm:.4g} dB)"]
    if cfg.sweep is not None:
        lines.append(f"sweep {cfg.sweep.variable}: {len(cfg.sweep.values())} points")
    return lines
