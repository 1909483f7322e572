import numpy as np

from negcalc.experiments import RunConfig, run_sweep
from negcalc.plotting import sweep_figure, write_sweep_figure


def test_figure_panels_and_gaps(tmp_path):
    meta, records = run_sweep(RunConfig("jcm-bound", {"n": "41", "t0": "0.2"}))
    fig = sweep_figure(meta, records)
    top, bottom = fig.axes
    assert len(top.lines) >= 3 + 2  # three measures plus one expansion
    d1_line = bottom.lines[0]
    assert np.isnan(d1_line.get_ydata()[0])  # singular initial state stays blank
    path = write_sweep_figure(meta, records, tmp_path / "bound.png", dpi=60)
    assert path.stat().st_size > 1000


def test_resummed_curve_drawn():
    meta, records = run_sweep(RunConfig("cavity-time", {"n": "21", "resum_t0": "0.4"}))
    labels = [line.get_label() for line in sweep_figure(meta, records).axes[0].lines]
    assert "resummed" in labels
