"""Contours, winding numbers, real-axis scans and method comparisons."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .continuation import continue_frames
from .errors import (
    ImaginaryResidueError,
    NearZeroOnContour,
    ParameterError,
    ProjectionGapError,
    RefinementDepthExceeded,
    SpectralSeparationFailure,
)
from .evans import EvansSample, SchemeConfig, evaluate

__all__ = [
    "ContourSpec",
    "ContourResult",
    "ScanResult",
    "ComparisonRow",
    "contour_points",
    "winding_number",
    "adaptive_winding",
    "evaluate_contour",
    "find_sign_changes",
    "bisect_root",
    "scan_real",
    "compare_methods",
    "REFERENCE_CONFIG",
]

MAX_INCREMENT = math.pi / 2
MAX_DEPTH = 12
ZERO_FLOOR = 1e-12
IMAG_TOL = 1e-6
ROOT_WIDTH = 1e-4
REFERENCE_CONFIG = SchemeConfig("exterior", abs_tol=1e-12, rel_tol=1e-10)


def _workers(workers):
    if workers is None:
        workers = int(os.environ.get("EVANS_THREADS", "1") or 1)
    return max(1, workers)


def _map(fn, items, workers=None):
    workers = _workers(workers)
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class ContourSpec:
    """Circle ``center + radius * exp(2 pi i t)``, sampled at ``t = j / points``."""

    center: complex
    radius: float
    points: int = 20

    def __post_init__(self):
        if not self.radius > 0:
            raise ParameterError("contour radius must be positive")
        if self.points < 8:
            raise ParameterError("a contour needs at least 8 points")

    def at(self, t):
        return self.center + self.radius * np.exp(2j * np.pi * np.asarray(t))

    @property
    def ts(self):
        return np.arange(self.points) / self.points


def contour_points(spec: ContourSpec):
    return spec.at(spec.ts)


@dataclass
class ContourResult:
    samples: list
    winding: int
    refinements: int
    ts: np.ndarray = field(default=None, repr=False)

    @property
    def values(self):
        return np.array([s.D for s in self.samples])


def winding_number(values, tol=1e-6):
    """Winding of a closed polygon of nonzero complex samples about 0."""
    values = np.asarray(values, dtype=complex)
    total = np.sum(np.angle(np.roll(values, -1) / values)) / (2 * np.pi)
    w = int(round(total))
    if abs(total - w) > tol:
        raise RefinementDepthExceeded(f"phase sum {total:.6f} is not an integer multiple of 2 pi")
    return w


@dataclass
class _Node:
    t: float
    value: complex
    payload: object
    depth: int = 0


def adaptive_winding(nodes, insert, max_increment=MAX_INCREMENT, max_depth=MAX_DEPTH):
    """Refine a closed loop of samples until every phase step is small.

    ``nodes`` is a list of ``_Node`` in increasing ``t`` on ``[0, 1)``;
    ``insert(left_node, t_mid)`` must return a new node at ``t_mid``.
    Returns ``(nodes, winding, refinements)``.
    """
    nodes = list(nodes)
    added = 0
    i = 0
    while i < len(nodes):
        a = nodes[i]
        b = nodes[(i + 1) % len(nodes)]
        if abs(np.angle(b.value / a.value)) <= max_increment:
            i += 1
            continue
        depth = max(a.depth, b.depth) + 1
        if depth > max_depth:
            raise RefinementDepthExceeded(
                f"phase still jumps by more than {max_increment:.3g} between t={a.t:.6f} and the next sample"
            )
        t_b = b.t if i + 1 < len(nodes) else b.t + 1.0
        node = insert(a, (a.t + t_b) / 2)
        node.depth = depth
        nodes.insert(i + 1, node)
        added += 1
    return nodes, winding_number([n.value for n in nodes]), added


def _check_floor(values):
    mags = np.abs(values)
    peak = mags.max()
    if not np.all(np.isfinite(mags)) or np.any(mags <= ZERO_FLOOR * peak) or peak == 0:
        raise NearZeroOnContour("the Evans function (nearly) vanishes on the contour")


def evaluate_contour(problem, spec: ContourSpec, config: SchemeConfig, workers=None) -> ContourResult:
    """Evans function around a circle and its winding number.

    Frames are continued once around the contour; refinement midpoints
    continue the frames of their left neighbour.
    """
    lams = contour_points(spec)
    fm = continue_frames(problem, lams, "minus")
    fp = continue_frames(problem, lams, "plus")
    samples = _map(lambda j: evaluate(problem, lams[j], config, (fm[j], fp[j])), range(len(lams)), workers)
    _check_floor(np.array([s.D for s in samples]))
    nodes = [
        _Node(float(t), s.D, (s, fm[j].W, fp[j].W)) for j, (t, s) in enumerate(zip(spec.ts, samples))
    ]

    def insert(left, t):
        lam_left = left.payload[0].lam
        lam = complex(spec.at(t))
        Wm = continue_frames(problem, [lam_left, lam], "minus", start=left.payload[1])[-1].W
        Wp = continue_frames(problem, [lam_left, lam], "plus", start=left.payload[2])[-1].W
        s = evaluate(problem, lam, config, (Wm, Wp))
        return _Node(t, s.D, (s, Wm, Wp))

    nodes, winding, added = adaptive_winding(nodes, insert)
    values = np.array([n.value for n in nodes])
    _check_floor(values)
    return ContourResult(
        samples=[n.payload[0] for n in nodes],
        winding=winding,
        refinements=added,
        ts=np.array([n.t for n in nodes]),
    )


@dataclass
class ScanResult:
    """Samples on a real interval.

    ``samples[j]`` is ``None`` where the asymptotic spectrum does not
    split at ``lambdas[j]`` (for instance ``lam = 0`` for travelling waves).
    """

    lambdas: np.ndarray
    samples: list
    brackets: list
    roots: list

    @property
    def values(self):
        return np.array([np.nan if s is None else s.D for s in self.samples], dtype=complex)


def find_sign_changes(xs, values):
    """Brackets ``(x_j, x_{j+1})`` where a real sequence changes sign.

    NaN entries break the sequence; an exact zero is reported as a
    degenerate bracket ``(x, x)``.
    """
    brackets = []
    for j, (x, v) in enumerate(zip(xs, values)):
        if v == 0:
            brackets.append((x, x))
        elif j + 1 < len(xs):
            w = values[j + 1]
            if np.isfinite(v) and np.isfinite(w) and v * w < 0:
                brackets.append((x, xs[j + 1]))
    return brackets


def bisect_root(f, a, b, fa=None, width=ROOT_WIDTH):
    """Bisect a sign change of the real function ``f`` down to ``width``."""
    fa = f(a) if fa is None else fa
    while b - a > width:
        mid = (a + b) / 2
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return (a + b) / 2


class _RealAxis:
    """Evans function on the real line with frames continued left to right."""

    def __init__(self, problem, config):
        self.problem = problem
        self.config = config
        self.known = {}

    def frames_from(self, lam, left=None):
        if left is None:
            fm = continue_frames(self.problem, [lam], "minus")[0].W
            fp = continue_frames(self.problem, [lam], "plus")[0].W
            return fm, fp
        Wm, Wp = self.known[left]
        fm = continue_frames(self.problem, [left, lam], "minus", start=Wm)[-1].W
        fp = continue_frames(self.problem, [left, lam], "plus", start=Wp)[-1].W
        return fm, fp

    def sample(self, lam, left=None):
        frames = self.frames_from(lam, left)
        s = evaluate(self.problem, lam, self.config, frames)
        if abs(s.D.imag) > IMAG_TOL * abs(s.D):
            raise ImaginaryResidueError(f"Im D / |D| = {abs(s.D.imag) / abs(s.D):.2e} at lam={lam}")
        self.known[lam] = frames
        return s


def scan_real(problem, a, b, points, config: SchemeConfig, width=ROOT_WIDTH) -> ScanResult:
    """Sample ``Re D`` on ``[a, b]``, bracket sign changes and bisect them.

    Points where the asymptotic matrices have an eigenvalue on the
    imaginary axis are skipped and break frame continuation; no bracket
    spans such a gap.
    """
    a, b = float(a), float(b)
    if not b > a:
        raise ParameterError(f"empty or inverted interval [{a}, {b}]")
    if points < 2:
        raise ParameterError("a scan needs at least 2 points")
    lams = np.linspace(a, b, points)
    axis = _RealAxis(problem, config)
    samples, left = [], None
    for lam in lams:
        lam = float(lam)
        try:
            samples.append(axis.sample(lam, left))
            left = lam
        except (SpectralSeparationFailure, ProjectionGapError):
            samples.append(None)
            left = None
    re = np.array([np.nan if s is None else s.D.real for s in samples])
    brackets = find_sign_changes(lams, re)
    roots = []
    for lo, hi in brackets:
        if lo == hi:
            roots.append(float(lo))
            continue
        start = float(lo)

        def f(lam, _start=start):
            return axis.sample(lam, _start).D.real

        roots.append(float(bisect_root(f, start, float(hi), re[np.searchsorted(lams, lo)], width)))
    return ScanResult(lams, samples, [(float(lo), float(hi)) for lo, hi in brackets], roots)


@dataclass(frozen=True)
class ComparisonRow:
    method: str
    c: float
    stiefel_err: float
    mesh: float
    time_seconds: float
    abs_diff: float
    rel_diff: float


def _contour_values(problem, lams, frames, config, workers):
    fm, fp = frames
    start = time.perf_counter()
    samples = _map(lambda j: evaluate(problem, lams[j], config, (fm[j], fp[j])), range(len(lams)), workers)
    return samples, time.perf_counter() - start


def compare_methods(problem, spec: ContourSpec, methods, reference=REFERENCE_CONFIG, workers=None):
    """One comparison row per scheme against a tight exterior-product reference.

    ``mesh`` is the median mesh count over all contour points and both
    sides; differences are maxima over the contour.
    """
    lams = contour_points(spec)
    frames = (continue_frames(problem, lams, "minus"), continue_frames(problem, lams, "plus"))
    ref, _ = _contour_values(problem, lams, frames, reference, workers)
    ref_D = np.array([s.D for s in ref])
    rows = []
    for config in methods:
        samples, elapsed = _contour_values(problem, lams, frames, config, workers)
        D = np.array([s.D for s in samples])
        diff = np.abs(D - ref_D)
        meshes = [s.mesh_minus for s in samples] + [s.mesh_plus for s in samples]
        rows.append(
            ComparisonRow(
                method=config.variant,
                c=config.c,
                stiefel_err=max(max(s.stiefel_minus, s.stiefel_plus) for s in samples),
                mesh=float(np.median(meshes)),
                time_seconds=elapsed,
                abs_diff=float(diff.max()),
                rel_diff=float(np.max(diff / np.abs(ref_D))),
            )
        )
    return rows
