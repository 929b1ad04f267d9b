"""Scenario configuration, execution and deterministic serialization."""
import json
import math
import time
from dataclasses import dataclass, field, fields

import numpy as np

from .bloch import BlochParameters
from .errors import ConfigError, NumericalError, UndefinedPolarizationError
from .lindblad import (
    DephasingParams,
    dephasing_model,
    evolve,
    trajectory_observables,
)
from .phase import (
    PHASE_ANGLES,
    ParameterLoop,
    berry_phase_quasicyclic,
    pancharatnam_phase,
    phase_decomposition,
    wrap_angle,
)
from .polarization import (
    PolarizationModel,
    PolarizationModelKind,
    analytic_polarization_decay,
    build_basis,
    build_block,
    build_model,
    degree_of_polarization,
    expectations,
    one_photon_state,
    stokes_operators,
)

SCENARIOS = ("dephasing3", "berry_loop", "polarization")
FORMATS = ("csv", "json")
DEPHASING_COLUMNS = (
    "t", "n1", "n2", "n3", "n4", "n5", "n6", "n7", "n8", "r", "purity",
    "re_rho12", "im_rho12", "re_rho13", "im_rho13", "re_rho23", "im_rho23",
)
LOOP_COLUMNS = (
    "loop", "samples",
    "pancharatnam_raw", "pancharatnam_wrapped",
    "decomposition_raw", "decomposition_wrapped",
    "line_integral", "line_integral_wrapped",
    "closed_form", "closed_form_wrapped",
    "max_route_gap",
)
BASE_KEYS = ("r", "theta", "phi") + PHASE_ANGLES


@dataclass(frozen=True)
class LoopSpec:
    """Linear sweep of phase angles around fixed sphere coordinates."""

    base: BlochParameters
    sweep: tuple
    samples: int

    def to_dict(self):
        return {
            "base": dict(zip(BASE_KEYS, self.base.as_tuple())),
            "sweep": {name: [start, stop] for name, start, stop in self.sweep},
            "samples": self.samples,
        }

    def parameter_loop(self):
        ranges = {name: (start, stop) for name, start, stop in self.sweep}
        return ParameterLoop.sweep(self.base, self.samples, **ranges)

    def closed_form(self):
        """Line integral for fixed ``theta, phi``: weights times angle increments."""
        b = self.base
        inc = {name: stop - start for name, start, stop in self.sweep}
        s2, c2 = math.sin(b.theta) ** 2, math.cos(b.theta) ** 2
        return -(
            s2 * math.cos(b.phi) ** 2 * (inc.get("alpha", 0.0) - inc.get("gamma", 0.0))
            + s2 * math.sin(b.phi) ** 2 * (inc.get("beta", 0.0) - inc.get("chi", 0.0))
            + c2 * inc.get("xi", 0.0)
        )


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario description; see README for the schema."""

    scenario: str
    omega: float = None
    eta: float = None
    delta: tuple = None
    gamma_plus: float = None
    gamma_minus: float = None
    gamma: float = None
    n_max: int = None
    model: str = None
    loop: tuple = None
    stokes0: tuple = None
    t_max: float = None
    dt: float = None
    sample_every: int = 1
    output_path: str = None
    format: str = "csv"

    @classmethod
    def from_dict(cls, data):
        """Parse and validate a JSON-like mapping.

        Raises
        ------
        ConfigError
            Listing every offending field.
        """
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object", ["<root>"])
        known = {f.name for f in fields(cls)}
        bad = {}
        for key in data:
            if key not in known:
                bad[key] = "unknown field"
        values = {}
        for key in known & data.keys():
            try:
                values[key] = _PARSERS[key](data[key])
            except (TypeError, ValueError, KeyError) as exc:
                bad[key] = str(exc) or type(exc).__name__
        if "scenario" not in data:
            bad["scenario"] = "required"
        if "scenario" in values:
            for key, why in cls(**values)._problems().items():
                bad.setdefault(key, why)
        if bad:
            detail = "; ".join(f"{k}: {v}" for k, v in sorted(bad.items()))
            raise ConfigError(f"invalid config: {detail}", sorted(bad))
        return cls(**values)

    def to_dict(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if f.name == "delta":
                v = [list(pair) for pair in v]
            elif f.name == "loop":
                v = [spec.to_dict() for spec in v]
            elif f.name == "stokes0":
                v = list(v)
            out[f.name] = v
        return out

    def _problems(self):
        bad = {}
        need = {
            "dephasing3": ("omega", "eta", "delta", "t_max", "dt"),
            "berry_loop": ("loop",),
            "polarization": ("model", "stokes0", "t_max", "dt"),
        }[self.scenario]
        for name in need:
            if getattr(self, name) is None:
                bad[name] = f"required for scenario {self.scenario}"
        if self.scenario == "polarization" and self.model is not None:
            rates = ("gamma",) if self.model == "atomic_bath" else ("gamma_plus", "gamma_minus")
            for name in rates:
                if getattr(self, name) is None:
                    bad[name] = f"required for model {self.model}"
            if self.model != "atomic_bath":
                if self.n_max is None:
                    bad["n_max"] = f"required for model {self.model}"
                elif self.n_max < 1:
                    bad["n_max"] = "must be >= 1 to hold a photon"
        for name in ("eta", "gamma_plus", "gamma_minus", "gamma"):
            v = getattr(self, name)
            if v is not None and v < 0:
                bad[name] = "rates must be non-negative"
        if self.dt is not None and not self.dt > 0:
            bad["dt"] = "must be positive"
        if self.t_max is not None and not self.t_max >= 0:
            bad["t_max"] = "must be non-negative"
        if self.sample_every < 1:
            bad["sample_every"] = "must be >= 1"
        if self.delta is not None:
            norm = sum(re * re + im * im for re, im in self.delta)
            if abs(norm - 1.0) > 1e-9:
                bad["delta"] = f"squared norm {norm:.12g} != 1"
        if self.stokes0 is not None and math.sqrt(sum(s * s for s in self.stokes0)) > 1 + 1e-12:
            bad["stokes0"] = "length exceeds 1"
        return bad


def _real(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise TypeError(f"expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ValueError("must be finite")
    return v


def _count(v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError(f"expected an integer, got {v!r}")
    return v


def _choice(options):
    def parse(v):
        if v not in options:
            raise ValueError(f"expected one of {list(options)}, got {v!r}")
        return v

    return parse


def _text(v):
    if not isinstance(v, str):
        raise TypeError(f"expected a string, got {v!r}")
    return v


def _delta(v):
    if not isinstance(v, list) or len(v) != 3:
        raise ValueError("expected 3 [re, im] pairs")
    out = []
    for pair in v:
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValueError("complex numbers are [re, im] pairs")
        out.append((_real(pair[0]), _real(pair[1])))
    return tuple(out)


def _stokes(v):
    if not isinstance(v, list) or len(v) != 3:
        raise ValueError("expected [s_x, s_y, s_z]")
    return tuple(_real(x) for x in v)


def _loop_spec(v):
    if not isinstance(v, dict):
        raise TypeError("loop must be an object")
    extra = set(v) - {"base", "sweep", "samples"}
    if extra:
        raise ValueError(f"unknown loop keys {sorted(extra)}")
    base = v.get("base", {})
    unknown = set(base) - set(BASE_KEYS)
    if unknown:
        raise ValueError(f"unknown base keys {sorted(unknown)}")
    params = {k: _real(base[k]) for k in base}
    params.setdefault("r", 1.0)
    if "theta" not in params or "phi" not in params:
        raise ValueError("loop base needs theta and phi")
    if not 0 <= params["r"]:
        raise ValueError("loop base r must be non-negative")
    sweep = v.get("sweep")
    if not isinstance(sweep, dict) or not sweep:
        raise ValueError("loop sweep must map angle names to [start, stop]")
    entries = []
    for name in sorted(sweep):
        if name not in PHASE_ANGLES:
            raise ValueError(f"cannot sweep {name!r}; choose from {list(PHASE_ANGLES)}")
        rng = sweep[name]
        if not isinstance(rng, list) or len(rng) != 2:
            raise ValueError(f"sweep {name} needs [start, stop]")
        entries.append((name, _real(rng[0]), _real(rng[1])))
    samples = _count(v.get("samples", 10000))
    if samples < 1:
        raise ValueError("loop samples must be >= 1")
    return LoopSpec(BlochParameters(**params), tuple(entries), samples)


def _loops(v):
    items = v if isinstance(v, list) else [v]
    if not items:
        raise ValueError("at least one loop required")
    return tuple(_loop_spec(item) for item in items)


_PARSERS = {
    "scenario": _choice(SCENARIOS),
    "omega": _real,
    "eta": _real,
    "delta": _delta,
    "gamma_plus": _real,
    "gamma_minus": _real,
    "gamma": _real,
    "n_max": _count,
    "model": _choice(tuple(k.value for k in PolarizationModelKind)),
    "loop": _loops,
    "stokes0": _stokes,
    "t_max": _real,
    "dt": _real,
    "sample_every": _count,
    "output_path": _text,
    "format": _choice(FORMATS),
}


def load_config(path):
    """Read and validate a JSON config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}", ["<file>"]) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}", ["<file>"]) from exc
    return ScenarioConfig.from_dict(data)


@dataclass
class RunReport:
    """Summary of one scenario run."""

    scenario: str
    rows: int
    max_trace_drift: float
    wall_time: float
    warnings: list = field(default_factory=list)

    def summary(self):
        lines = [
            f"scenario {self.scenario}: {self.rows} rows, "
            f"max trace drift {self.max_trace_drift:.3e}, {self.wall_time:.3f} s"
        ]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines)


@dataclass(frozen=True)
class Table:
    """Column names and rows of numbers."""

    columns: tuple
    rows: list


def _dephasing_table(cfg):
    delta = tuple(complex(re, im) for re, im in cfg.delta)
    norm = math.sqrt(sum(abs(d) ** 2 for d in delta))
    params = DephasingParams(tuple(d / norm for d in delta), cfg.omega, cfg.eta)
    tr = evolve(dephasing_model(cfg.omega, cfg.eta), params.rho0, cfg.t_max, cfg.dt, cfg.sample_every)
    obs = trajectory_observables(tr)
    rows = []
    for k, rho in enumerate(tr.states):
        row = [obs.t[k], *obs.n[k], obs.r[k], obs.purity[k]]
        for a, b in ((0, 1), (0, 2), (1, 2)):
            row += [rho[a, b].real, rho[a, b].imag]
        rows.append(row)
    return Table(DEPHASING_COLUMNS, rows), tr.max_trace_drift, []


def _loop_table(cfg):
    rows = []
    for i, spec in enumerate(cfg.loop):
        loop = spec.parameter_loop()
        tr = loop.ray_trajectory()
        pan = pancharatnam_phase(tr, closed=True)
        dec = phase_decomposition(tr)
        line = berry_phase_quasicyclic(loop)
        closed = spec.closed_form()
        wrapped = [pan.wrapped, dec.geometric, wrap_angle(line)]
        gap = max(abs(wrap_angle(a - b)) for a in wrapped for b in wrapped)
        rows.append([
            i, spec.samples,
            pan.raw, pan.wrapped,
            dec.geometric_raw, dec.geometric,
            line, wrap_angle(line),
            closed, wrap_angle(closed),
            gap,
        ])
    return Table(LOOP_COLUMNS, rows), 0.0, []


def _polarization_table(cfg):
    model = PolarizationModel(
        cfg.model,
        gamma_plus=cfg.gamma_plus or 0.0,
        gamma_minus=cfg.gamma_minus or 0.0,
        gamma=cfg.gamma or 0.0,
        omega=cfg.omega or 0.0,
    )
    warnings = []
    if model.kind is PolarizationModelKind.ATOMIC_BATH:
        basis = build_block(1)
        if cfg.n_max is not None:
            warnings.append("n_max ignored: the atomic-bath model runs on the one-photon block")
    else:
        basis = build_basis(cfg.n_max)
    ops = stokes_operators(basis)
    rho0 = one_photon_state(cfg.stokes0, basis)
    tr = evolve(build_model(model, basis), rho0, cfg.t_max, cfg.dt, cfg.sample_every)
    analytic = model.kind is not PolarizationModelKind.LOSSY
    columns = ("t", "s1", "s2", "s3", "s0_expect", "P") + (("P_analytic",) if analytic else ())
    rows = []
    for t, rho in zip(tr.times, tr.states):
        s0, s1, s2, s3 = expectations(rho, ops)
        try:
            p = degree_of_polarization(rho, ops)
        except UndefinedPolarizationError as exc:
            raise NumericalError(f"at t = {t:.6g}: {exc}") from exc
        row = [t, s1, s2, s3, s0, p]
        if analytic:
            row.append(analytic_polarization_decay(model, cfg.stokes0, t))
        rows.append(row)
    return Table(columns, rows), tr.max_trace_drift, warnings


_RUNNERS = {
    "dephasing3": _dephasing_table,
    "berry_loop": _loop_table,
    "polarization": _polarization_table,
}


def compute_scenario(cfg):
    """Run a scenario and return ``(table, max_trace_drift, warnings)``."""
    table, drift, warnings = _RUNNERS[cfg.scenario](cfg)
    for row in table.rows:
        for v in row:
            if not math.isfinite(v):
                raise NumericalError("non-finite value produced; refusing to write output")
    return table, drift, warnings


def format_number(v):
    """Integers verbatim; floats with 17 significant digits in e-notation."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return f"{float(v):.16e}"


def render(table, fmt):
    """Serialize a table to CSV or JSON text (deterministic)."""
    if fmt == "csv":
        lines = [",".join(table.columns)]
        lines += [",".join(format_number(v) for v in row) for row in table.rows]
        return "\n".join(lines) + "\n"
    cols = []
    for j, name in enumerate(table.columns):
        values = ", ".join(format_number(row[j]) for row in table.rows)
        cols.append(f'  "{name}": [{values}]')
    return "{\n" + ",\n".join(cols) + "\n}\n"


def run_scenario(cfg, output_path=None, fmt=None):
    """Compute a scenario and write it.

    Parameters
    ----------
    cfg : ScenarioConfig
    output_path : str, optional
        Overrides ``cfg.output_path``. When both are absent nothing is
        written and the text is only returned.
    fmt : {"csv", "json"}, optional
        Overrides ``cfg.format``.

    Returns
    -------
    RunReport, str
        The report and the rendered text.
    """
    start = time.perf_counter()
    table, drift, warnings = compute_scenario(cfg)
    text = render(table, fmt or cfg.format)
    path = output_path or cfg.output_path
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    report = RunReport(cfg.scenario, len(table.rows), drift, time.perf_counter() - start, warnings)
    return report, text
