"""Static figures for sweep output (Agg canvas, no display needed)."""
from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .experiments import SweepRecord

STYLE = {
    "negativity": dict(color="#1f4e9c", lw=1.4, label=r"$\mathcal{N}$"),
    "log_negativity": dict(color="#2a8c4a", lw=1.1, ls="-.", label=r"$E_\mathcal{N}$"),
    "renyi2": dict(color="#9c5a1f", lw=1.1, ls="--", label=r"$S_2$"),
    "d1": dict(color="#1f4e9c", lw=1.2, label=r"$\partial\mathcal{N}$"),
    "d2": dict(color="#b0342c", lw=1.0, ls=":", label=r"$\partial^2\mathcal{N}$"),
}


def _column(records: list[SweepRecord], name: str) -> np.ndarray:
    return np.array([np.nan if getattr(r, name) is None else getattr(r, name) for r in records], dtype=float)


def sweep_figure(meta: dict, records: list[SweepRecord]) -> Figure:
    """Measures in the top panel, derivatives below; gaps stay blank."""
    scale = meta.get("plot", {}).get("scale", 1.0)
    unit = meta.get("plot", {}).get("unit", "")
    mu = _column(records, "mu")
    x = mu * scale

    fig = Figure(figsize=(6.4, 6.0), constrained_layout=True)
    FigureCanvasAgg(fig)
    top, bottom = fig.subplots(2, 1, sharex=True)
    for name in ("negativity", "log_negativity", "renyi2"):
        top.plot(x, _column(records, name), **STYLE[name])
    span = 0.08 * (mu[-1] - mu[0])
    for exp in meta.get("expansions", []):
        if exp.get("d1") is None:
            continue
        t0 = exp["t0"]
        local = np.linspace(t0 - span, t0 + span, 41)
        dt = local - t0
        top.plot(local * scale, exp["value"] + exp["d1"] * dt + 0.5 * exp["d2"] * dt**2, color="#e08a1e", lw=1.8, alpha=0.8)
        top.plot([t0 * scale], [exp["value"]], "o", color="#e08a1e", ms=3)
    if np.any([r.resummed is not None for r in records]):
        top.plot(x, _column(records, "resummed"), color="0.4", lw=0.8, ls=(0, (1, 2)), label="resummed")
    top.set_ylabel("entanglement")
    top.legend(loc="best", frameon=False, fontsize=8)

    for name in ("d1", "d2"):
        bottom.plot(x, _column(records, name), **STYLE[name])
    bottom.axhline(0.0, color="0.6", lw=0.6)
    bottom.set_ylabel("derivative")
    label = meta.get("mu", "mu")
    bottom.set_xlabel(f"{label} [{unit}]" if unit else label)
    bottom.legend(loc="best", frameon=False, fontsize=8)
    fig.suptitle(meta.get("experiment", ""), fontsize=10)
    return fig


def write_sweep_figure(meta: dict, records: list[SweepRecord], path: Path, dpi: int = 150) -> Path:
    path = Path(path)
    sweep_figure(meta, records).savefig(path, dpi=dpi)
    return path
