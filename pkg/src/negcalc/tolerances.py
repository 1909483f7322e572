"""Numerical tolerances, overridable through the ``NEGCALC_TOL`` variable.

``NEGCALC_TOL`` holds comma-separated ``name=value`` pairs, for example
``NEGCALC_TOL="singular=1e-9,hermitian=1e-11"``.  A bare number is read as
the relative singularity threshold.
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

ENV_VAR = "NEGCALC_TOL"


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10  # max |A - A^dagger| entry
    trace: float = 1e-10  # |Tr rho - 1|
    psd: float = 1e-10  # smallest admissible eigenvalue is -psd
    singular: float = 1e-8  # relative: min|lam| <= singular * max(1, max|lam|)
    crosscheck: float = 1e-12  # eigensum vs trace-norm negativity
    rank: float = 1e-10  # singular values above this count toward rank
    resummed: float = 1e-8  # resummed expansion vs exact negativity
    max_order: int = 4  # highest directional differential order

    def singular_threshold(self, scale: float) -> float:
        return self.singular * max(1.0, float(scale))

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def parse_overrides(text: str) -> dict:
    text = text.strip()
    if not text:
        return {}
    names = {f.name: f.type for f in dataclasses.fields(Tolerances)}
    try:
        return {"singular": float(text)}
    except ValueError:
        pass
    out = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise ValueError(f"bad {ENV_VAR} entry {item!r}; known names: {sorted(names)}")
        out[key] = int(value) if key == "max_order" else float(value)
    return out


def from_env(environ=None) -> Tolerances:
    environ = os.environ if environ is None else environ
    return Tolerances(**parse_overrides(environ.get(ENV_VAR, "")))


_current: Tolerances | None = None


def get() -> Tolerances:
    """Tolerances in effect for this process (read from the environment on first use)."""
    global _current
    if _current is None:
        _current = from_env()
    return _current


def set_tolerances(tol: Tolerances | None) -> Tolerances | None:
    """Replace the process-wide tolerances; ``None`` re-reads the environment lazily."""
    global _current
    previous, _current = _current, tol
    return previous
