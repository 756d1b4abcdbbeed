"""Phase portraits on the Poincaré–Lyapunov disk, written as SVG."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib
import numpy as np
import structlog
from matplotlib.figure import Figure
from matplotlib.patches import Circle
from scipy import integrate

from qhflow.config import Settings, get_settings
from qhflow.services.field_core import QHField
from qhflow.services.geometry import (
    InfinitySingularity,
    SingularityKind,
    polar_radius,
    trig_samples,
)
from qhflow.services.poly_core import Axis, WeightSignature

logger = structlog.get_logger()

_RC = {"svg.hashsalt": "qhflow", "svg.fonttype": "none", "path.simplify": False}
_INNER, _OUTER = 1e-3, 1e3
_CURVE_SAMPLES = 200


@dataclass(frozen=True)
class PlotSummary:
    path: Path
    trajectories: int
    points: int


def to_disk(w: WeightSignature, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Map plane points into the unit disk by ρ = R / (1 + R) along the (p,q)-direction."""
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    R = polar_radius(w, xs, ys)
    safe = np.where(R > 0, R, 1.0)
    cs, sn = xs / safe**w.p, ys / safe**w.q
    norm = np.hypot(cs, sn)
    norm = np.where(norm > 0, norm, 1.0)
    rho = R / (1 + R)
    return np.stack([rho * cs / norm, rho * sn / norm])


def equator_point(w: WeightSignature, point: InfinitySingularity) -> tuple[float, float]:
    """Position of an infinite singular point on the unit circle."""
    if point.chart is Axis.Y_POS:
        return 0.0, 1.0
    if point.chart is Axis.Y_NEG:
        return 0.0, -1.0
    lam = point.root.approx
    base = w.p + w.q * lam ** (2 * w.p)
    cs = base ** (-1 / (2 * w.q))
    sn = lam * base ** (-1 / (2 * w.p))
    if point.chart is Axis.X_NEG:
        cs = -cs
    norm = np.hypot(cs, sn)
    return float(cs / norm), float(sn / norm)


def _curve(w: WeightSignature, point: InfinitySingularity) -> np.ndarray:
    """The invariant curve from the origin to an equator point."""
    s = np.logspace(-3, 3, _CURVE_SAMPLES)
    if point.chart in (Axis.Y_POS, Axis.Y_NEG):
        direction = 1.0 if point.chart is Axis.Y_POS else -1.0
        return to_disk(w, np.zeros_like(s), direction * s)
    direction = 1.0 if point.chart is Axis.X_POS else -1.0
    return to_disk(w, direction * s**w.p, point.root.approx * s**w.q)


def _rescaled_rhs(X: QHField):
    P, Q = X.P.numeric(), X.Q.numeric()

    def rhs(_t, state):
        u, v = P(state[0], state[1]), Q(state[0], state[1])
        scale = 1.0 + np.hypot(u, v)
        return [float(u / scale), float(v / scale)]

    return rhs


def _escape_events(w: WeightSignature):
    def inner(_t, state):
        return float(polar_radius(w, state[0], state[1])) - _INNER

    def outer(_t, state):
        return float(polar_radius(w, state[0], state[1])) - _OUTER

    inner.terminal = True
    outer.terminal = True
    return [inner, outer]


def trajectories(X: QHField, settings: Settings | None = None) -> list[np.ndarray]:
    """Forward and backward orbits from seeds on the ring R = 1, in disk coordinates."""
    settings = settings or get_settings()
    count = settings.plot_trajectories
    if count == 0:
        return []
    _, cs, sn = trig_samples(X.w, count + 1, settings)
    rhs = _rescaled_rhs(X)
    events = _escape_events(X.w)
    paths: list[np.ndarray] = []
    for x0, y0 in zip(cs[:-1], sn[:-1], strict=True):
        for horizon in (settings.plot_horizon, -settings.plot_horizon):
            solution = integrate.solve_ivp(
                rhs,
                (0.0, horizon),
                [float(x0), float(y0)],
                method="RK45",
                events=events,
                max_step=0.05,
                rtol=1e-8,
                atol=1e-10,
            )
            paths.append(to_disk(X.w, solution.y[0], solution.y[1]))
    return paths


_MARKERS = {
    SingularityKind.STABLE_NODE: {"marker": "o", "markerfacecolor": "black"},
    SingularityKind.UNSTABLE_NODE: {"marker": "o", "markerfacecolor": "white"},
    SingularityKind.SADDLE: {"marker": "x", "markerfacecolor": "black"},
    SingularityKind.SADDLE_NODE: {"marker": "s", "markerfacecolor": "gray"},
}


def render_portrait(
    X: QHField,
    points: list[InfinitySingularity],
    out: Path,
    settings: Settings | None = None,
) -> PlotSummary:
    """Draw the equator, invariant curves, singular points and trajectories to ``out``."""
    settings = settings or get_settings()
    inches = settings.plot_size / 100
    paths = trajectories(X, settings)

    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=(inches, inches), dpi=100)
        ax = fig.add_axes((0.02, 0.02, 0.96, 0.96))
        ax.set_xlim(-1.05, 1.05)
        ax.set_ylim(-1.05, 1.05)
        ax.set_aspect("equal")
        ax.axis("off")

        ax.add_patch(Circle((0.0, 0.0), 1.0, fill=False, linewidth=1.2, color="black"))
        for path in paths:
            ax.plot(path[0], path[1], linewidth=0.6, color="tab:blue")
        for point in points:
            curve = _curve(X.w, point)
            ax.plot(curve[0], curve[1], linewidth=1.0, color="tab:red")
        for point in points:
            px, py = equator_point(X.w, point)
            ax.plot(
                [px],
                [py],
                linestyle="none",
                markersize=7,
                markeredgecolor="black",
                **_MARKERS[point.kind],
            )
        ax.plot([0.0], [0.0], marker="o", markersize=3, color="black")

        out = Path(out)
        fig.savefig(out, format="svg", metadata={"Date": None})

    logger.info("portrait_written", path=str(out), trajectories=len(paths), points=len(points))
    return PlotSummary(out, len(paths), len(points))
