"""Self-contained SVG and CSV output for complexity curves."""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .experiment import ComplexityCurve

__all__ = ["emit_plots", "svg_plot"]

WIDTH, HEIGHT = 480, 360
MARGIN = dict(left=60, right=20, top=30, bottom=50)


def _nice_ticks(lo: float, hi: float, count: int = 5) -> np.ndarray:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    step = 10 ** np.floor(np.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * step:
            step *= mult
            break
    return np.arange(np.ceil(lo / step) * step, hi + 0.5 * step, step)


def svg_plot(x, y, yerr=None, xlabel: str = "", ylabel: str = "", title: str = "") -> str:
    """Scatter-and-line plot with optional symmetric error bars.

    Each data point is one ``<circle class="marker">``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    err = np.zeros_like(y) if yerr is None else np.nan_to_num(np.asarray(yerr, dtype=float))
    finite = np.isfinite(y)
    ylo = min(0.0, float(np.min((y - err)[finite]))) if finite.any() else 0.0
    yhi = float(np.max((y + err)[finite])) if finite.any() else 1.0
    xlo, xhi = float(x.min()), float(x.max())
    if xhi == xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    if yhi <= ylo:
        yhi = ylo + 1.0
    yhi += 0.05 * (yhi - ylo)

    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(v):
        return MARGIN["left"] + (v - xlo) / (xhi - xlo) * pw

    def py(v):
        return MARGIN["top"] + (1.0 - (v - ylo) / (yhi - ylo)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="18" text-anchor="middle">{escape(title)}</text>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(xlo, xhi):
        if xlo <= t <= xhi:
            out.append(f'<line x1="{px(t):.2f}" y1="{MARGIN["top"] + ph}" x2="{px(t):.2f}" '
                       f'y2="{MARGIN["top"] + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{px(t):.2f}" y="{MARGIN["top"] + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(ylo, yhi):
        if ylo <= t <= yhi:
            out.append(f'<line x1="{MARGIN["left"] - 5}" y1="{py(t):.2f}" x2="{MARGIN["left"]}" '
                       f'y2="{py(t):.2f}" stroke="black"/>')
            out.append(f'<text x="{MARGIN["left"] - 8}" y="{py(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{MARGIN["left"] + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text transform="translate(16 {MARGIN["top"] + ph / 2}) rotate(-90)" '
               f'text-anchor="middle">{escape(ylabel)}</text>')

    pts = [(px(a), py(b)) for a, b in zip(x[finite], y[finite])]
    if len(pts) > 1:
        path = " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
    for a, b, e in zip(x[finite], y[finite], err[finite]):
        if e > 0:
            out.append(f'<line class="errorbar" x1="{px(a):.2f}" y1="{py(b - e):.2f}" x2="{px(a):.2f}" '
                       f'y2="{py(b + e):.2f}" stroke="steelblue"/>')
        out.append(f'<circle class="marker" cx="{px(a):.2f}" cy="{py(b):.2f}" r="3.5" fill="steelblue"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plots(curve: ComplexityCurve, out_path, cost_panel: bool = True) -> list[Path]:
    """Write ``<stem>.csv``, ``<stem>.svg`` and optionally ``<stem>_dpll.svg``.

    ``out_path`` is a file stem; any suffix is dropped.
    """
    if len(curve) == 0:
        raise ValueError("cannot plot an empty curve")
    stem = Path(out_path)
    stem = stem.with_suffix("") if stem.suffix else stem
    written = []
    csv_path = stem.with_name(stem.name + ".csv")
    csv_path.write_text(curve.to_csv())
    written.append(csv_path)

    f = curve.column("f")
    svg = svg_plot(f, curve.column("mean_q_max"), curve.column("stderr_q_max"),
                   "clause-to-variable ratio f", "mean maximal Brody q", "Spectral complexity vs f")
    svg_path = stem.with_name(stem.name + ".svg")
    svg_path.write_text(svg)
    written.append(svg_path)

    if cost_panel:
        cost = svg_plot(f, curve.column("median_dpll"), None,
                        "clause-to-variable ratio f", "median DPLL nodes", "Classical cost vs f")
        cost_path = stem.with_name(stem.name + "_dpll.svg")
        cost_path.write_text(cost)
        written.append(cost_path)
    return written
