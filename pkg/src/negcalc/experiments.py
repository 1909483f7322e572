"""Parameter sweeps over the model systems and their delimited output formats."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__, tolerances
from .errors import ConfigError, NegcalcError, SingularityError
from .models import (
    CavityMixingTrajectory,
    CavityTimeTrajectory,
    JCMAnalyticTrajectory,
    JCMParams,
    bound_entangled_trajectory,
)
from .negativity import (
    Trajectory,
    invertibility_report,
    log_negativity,
    negativity,
    negativity_d1,
    negativity_d2,
    renyi2_entropy,
    resummed_expansion,
    taylor_expand,
)

EXPERIMENTS = ("jcm-2x2", "jcm-bound", "cavity-time", "cavity-p", "invariants")
FORMATS = ("csv", "json")
COLUMNS = ("mu", "negativity", "d1", "d2", "log_negativity", "renyi2", "min_abs_eig", "resummed", "validated")
META_PREFIX = "# meta: "


class NumericalFailure(NegcalcError):
    """A grid point failed for a reason other than a singular partial transpose."""

    def __init__(self, mu: float, cause: Exception):
        self.mu = mu
        self.cause = cause
        super().__init__(f"evaluation failed at mu={mu!r}: {type(cause).__name__}: {cause}")


@dataclass(frozen=True)
class SweepRecord:
    mu: float
    negativity: float
    d1: float | None
    d2: float | None
    log_negativity: float
    renyi2: float
    min_abs_eig: float
    resummed: float | None = None
    validated: bool | None = None


# ------------------------------------------------------------------ configuration


@dataclass(frozen=True)
class ExperimentSpec:
    mu: str
    defaults: Callable[[dict], dict]
    allowed: frozenset


def _jcm_defaults(p: dict) -> dict:
    omega, delta, g = p.get("omega", 10.0), p.get("delta", 1.0), p.get("g", 5.0)
    rabi = math.hypot(delta, 4.0 * g)
    return {"omega": omega, "delta": delta, "g": g, "mu_min": 0.0, "mu_max": 2 * math.pi / rabi, "n": 201}


def _bound_defaults(p: dict) -> dict:
    base = _jcm_defaults(p)
    base.update(mu_max=2 * math.pi / base["g"], n=401, n_fock=8, field_space="support")
    return base


_JCM_KEYS = {"omega", "delta", "g"}
_GRID_KEYS = {"mu_min", "mu_max", "n", "t0", "resum_t0", "workers"}

SPECS = {
    "jcm-2x2": ExperimentSpec("t", _jcm_defaults, frozenset(_JCM_KEYS | _GRID_KEYS)),
    "jcm-bound": ExperimentSpec("t", _bound_defaults, frozenset(_JCM_KEYS | _GRID_KEYS | {"n_fock", "field_space"})),
    "cavity-time": ExperimentSpec(
        "t", lambda p: {"p": 0.35, "mu_min": 0.0, "mu_max": 2.0, "n": 201, "t0": [0.4, 0.8, 1.2]},
        frozenset({"p"} | _GRID_KEYS),
    ),
    "cavity-p": ExperimentSpec(
        "p", lambda p: {"t": 0.4, "mu_min": 0.0, "mu_max": 1.0, "n": 1001}, frozenset({"t"} | _GRID_KEYS)
    ),
}

_STRING_KEYS = {"field_space"}
_INT_KEYS = {"n", "n_fock", "workers"}
_LIST_KEYS = {"t0"}


def _coerce(key: str, raw):
    if not isinstance(raw, str):
        return raw
    try:
        if key in _STRING_KEYS:
            return raw
        if key in _INT_KEYS:
            return int(raw)
        if key in _LIST_KEYS:
            return [float(x) for x in raw.split(",") if x.strip()]
        return float(raw)
    except ValueError:
        raise ConfigError(f"parameter {key}={raw!r} is not a valid value") from None


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    output: Path | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.experiment == "invariants":
            object.__setattr__(self, "params", dict(self.params))
            return
        spec = SPECS[self.experiment]
        unknown = set(self.params) - spec.allowed
        if unknown:
            raise ConfigError(f"{self.experiment} does not accept {sorted(unknown)}; allowed: {sorted(spec.allowed)}")
        given = {k: _coerce(k, v) for k, v in self.params.items()}
        merged = {**spec.defaults(given), **given}
        if "t0" in merged and not isinstance(merged["t0"], list):
            merged["t0"] = [float(merged["t0"])]
        if merged["n"] < 2:
            raise ConfigError("grid count n must be >= 2")
        if not merged["mu_max"] > merged["mu_min"]:
            raise ConfigError("empty range: mu_max must exceed mu_min")
        if merged.get("workers", 1) < 1:
            raise ConfigError("workers must be >= 1")
        if self.experiment.startswith("cavity"):
            lo, hi = (0.0, 1.0) if self.experiment == "cavity-p" else (0.0, math.inf)
            fixed = ("t", 0.0, math.inf) if self.experiment == "cavity-p" else ("p", 0.0, 1.0)
            if merged["mu_min"] < lo or merged["mu_max"] > hi:
                raise ConfigError(f"{spec.mu} range must lie within [{lo}, {hi}]")
            if not fixed[1] <= merged[fixed[0]] <= fixed[2]:
                raise ConfigError(f"{fixed[0]} out of range")
        if self.experiment.startswith("jcm") and merged["g"] == 0:
            raise ConfigError("g must be nonzero")
        if merged.get("field_space", "support") not in ("support", "2x4"):
            raise ConfigError("field_space must be 'support' or '2x4'")
        object.__setattr__(self, "params", merged)

    @property
    def mu_name(self) -> str:
        return SPECS[self.experiment].mu


def grid(mu_min: float, mu_max: float, n: int) -> np.ndarray:
    """Evenly spaced points; doubling ``n - 1`` reproduces every old point bit-for-bit."""
    return np.array([mu_min + (mu_max - mu_min) * (k / (n - 1)) for k in range(n)])


def build_trajectory(cfg: RunConfig) -> Trajectory:
    p = cfg.params
    if cfg.experiment == "jcm-2x2":
        return JCMAnalyticTrajectory(JCMParams(p["omega"], p["delta"], p["g"]))
    if cfg.experiment == "jcm-bound":
        params = JCMParams(p["omega"], p["delta"], p["g"], int(p["n_fock"]))
        return bound_entangled_trajectory(params, p["field_space"])
    if cfg.experiment == "cavity-time":
        return CavityTimeTrajectory(p["p"])
    if cfg.experiment == "cavity-p":
        return CavityMixingTrajectory(p["t"])
    raise ConfigError(f"{cfg.experiment} is not a sweep")


def plot_units(cfg: RunConfig) -> dict:
    p = cfg.params
    if cfg.experiment == "jcm-2x2":
        rabi = math.hypot(p["delta"], 4 * p["g"])
        return {"unit": "2*pi/Omega", "scale": rabi / (2 * math.pi)}
    if cfg.experiment == "jcm-bound":
        return {"unit": "2*pi/g", "scale": p["g"] / (2 * math.pi)}
    if cfg.experiment == "cavity-time":
        return {"unit": "1/decay constant", "scale": 1.0}
    return {"unit": "dimensionless", "scale": 1.0}


# ------------------------------------------------------------------ evaluation


def evaluate_point(traj: Trajectory, mu: float, resum_t0: float | None = None) -> SweepRecord:
    try:
        rho = traj.state_at(mu)
        report = invertibility_report(rho)
        d1 = d2 = None
        if report.invertible:
            try:
                drho, d2rho = traj.partial_at(mu, 1), traj.partial_at(mu, 2)
                d1 = negativity_d1(rho, drho)
                d2 = negativity_d2(rho, drho, d2rho)
            except SingularityError:
                d1 = d2 = None
        resummed = validated = None
        if resum_t0 is not None:
            try:
                resummed, validated = resummed_expansion(traj, resum_t0, mu)
            except SingularityError:
                pass
        return SweepRecord(
            mu=float(mu),
            negativity=negativity(rho),
            d1=d1,
            d2=d2,
            log_negativity=log_negativity(rho),
            renyi2=renyi2_entropy(rho),
            min_abs_eig=report.min_abs_eig,
            resummed=resummed,
            validated=validated,
        )
    except SingularityError:
        raise
    except (NegcalcError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        raise NumericalFailure(float(mu), exc) from exc


def expansion_metadata(traj: Trajectory, t0s) -> list[dict]:
    out = []
    for t0 in t0s:
        entry = {"t0": float(t0)}
        try:
            res = taylor_expand(traj, t0, order=2)
            entry.update(value=res.value, d1=res.d1, d2=res.d2, min_abs_eig=res.min_abs_eig)
        except SingularityError as exc:
            entry.update(value=None, d1=None, d2=None, min_abs_eig=exc.min_abs_eig)
        out.append(entry)
    return out


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


def run_sweep(cfg: RunConfig) -> tuple[dict, list[SweepRecord]]:
    traj = build_trajectory(cfg)
    p = cfg.params
    mus = grid(p["mu_min"], p["mu_max"], int(p["n"]))
    resum_t0 = p.get("resum_t0")
    workers = int(p.get("workers", default_workers()))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        records = list(pool.map(lambda mu: evaluate_point(traj, mu, resum_t0), mus))
    meta = {
        "experiment": cfg.experiment,
        "mu": cfg.mu_name,
        "params": {k: v for k, v in sorted(p.items()) if k != "workers"},
        "plot": plot_units(cfg),
        "version": __version__,
        "tolerances": tolerances.get().as_dict(),
        "expansions": expansion_metadata(traj, p.get("t0", [])),
    }
    return meta, records


# ------------------------------------------------------------------ kinks


def locate_kink(records: list[SweepRecord], threshold: float | None = None) -> list[float]:
    """Parameter values where ``d1`` jumps between neighbouring defined points.

    Gaps (singular points) are bridged; a run of consecutive flagged
    intervals is reported once, at its midpoint.
    """
    pts = [(r.mu, r.d1) for r in records if r.d1 is not None]
    if len(pts) < 3:
        return []
    mu = np.array([m for m, _ in pts])
    d1 = np.array([d for _, d in pts])
    jumps = np.abs(np.diff(d1))
    if threshold is None:
        threshold = max(1e-3, 10.0 * float(np.median(jumps)))
    flagged = np.flatnonzero(jumps > threshold)
    kinks, run = [], []
    for i in flagged:
        if run and i != run[-1] + 1:
            kinks.append(0.5 * (mu[run[0]] + mu[run[-1] + 1]))
            run = []
        run.append(i)
    if run:
        kinks.append(0.5 * (mu[run[0]] + mu[run[-1] + 1]))
    return [float(k) for k in kinks]


# ------------------------------------------------------------------ I/O


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(float(v))


def _parse_field(name: str, text: str):
    if text == "":
        return None
    if name == "validated":
        if text not in ("true", "false"):
            raise ValueError(f"bad validated flag {text!r}")
        return text == "true"
    return float(text)


def _dump_meta(meta: dict) -> str:
    return json.dumps(meta, sort_keys=True, separators=(",", ":"), allow_nan=False)


def records_to_csv(meta: dict, records: list[SweepRecord]) -> str:
    buf = io.StringIO()
    buf.write(META_PREFIX + _dump_meta(meta) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        writer.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def records_from_csv(text: str) -> tuple[dict, list[SweepRecord]]:
    first, _, rest = text.partition("\n")
    if not first.startswith(META_PREFIX):
        raise ValueError("missing metadata line")
    meta = json.loads(first[len(META_PREFIX):])
    rows = list(csv.reader(io.StringIO(rest)))
    if not rows or tuple(rows[0]) != COLUMNS:
        raise ValueError(f"unexpected header {rows[0] if rows else None}")
    records = [SweepRecord(**{c: _parse_field(c, v) for c, v in zip(COLUMNS, row)}) for row in rows[1:]]
    return meta, records


def records_to_json(meta: dict, records: list[SweepRecord]) -> str:
    body = {"meta": meta, "records": [{c: getattr(r, c) for c in COLUMNS} for r in records]}
    return json.dumps(body, indent=2, allow_nan=False) + "\n"


def records_from_json(text: str) -> tuple[dict, list[SweepRecord]]:
    body = json.loads(text)
    names = {f.name for f in fields(SweepRecord)}
    records = []
    for row in body["records"]:
        if set(row) != names:
            raise ValueError(f"record fields {sorted(row)} do not match {sorted(names)}")
        records.append(SweepRecord(**row))
    return body["meta"], records


def dumps(meta: dict, records: list[SweepRecord], fmt: str) -> str:
    return records_to_csv(meta, records) if fmt == "csv" else records_to_json(meta, records)


def loads(text: str, fmt: str) -> tuple[dict, list[SweepRecord]]:
    return records_from_csv(text) if fmt == "csv" else records_from_json(text)


def read(path: Path) -> tuple[dict, list[SweepRecord]]:
    path = Path(path)
    fmt = "json" if path.suffix.lower() == ".json" else "csv"
    return loads(path.read_text(encoding="utf-8"), fmt)


def record_dict(r: SweepRecord) -> dict:
    return asdict(r)
