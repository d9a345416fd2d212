"""Numerical measures of curves: lengths, ball intersections, blow-ups,
covering estimates and the resulting area-formula diagnostics.

Conventions.  The 1-d measure of a curve piece under an ambient metric
("left" for the metric that makes the frame orthonormal, "euclidean"
for the coordinate metric) is the integral of the corresponding speed.
Parameter sets cut out by balls are located by a grid scan refined with
bisection at every boundary crossing, so disconnected intersections are
handled; the component through the center is always resolved separately
because it can be far narrower than a grid cell.

Spherical-measure upper bounds come from a greedy walk: at the first
uncovered parameter, a ball of the current radius is centered as far
ahead along the curve as possible while still covering that parameter,
and the walk jumps past the covered component.  The reported value is
sum(r^q) over the balls placed, an upper estimate by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .curve import (Curve, DegreeProfile, degree_profile, pointwise_degree,
                    tangent_projection)
from .frame import METRIC_EUCLIDEAN, METRIC_LEFT, _normalize_metric, speed
from .metric import HomogeneousDistance, degree_constant, map_ordered


class NumericalResolutionError(RuntimeError):
    """A scan or walk could not make progress at the requested resolution."""


# -- lengths -------------------------------------------------------------------


def riemannian_length(law, curve: Curve, interval=None, metric: str = METRIC_LEFT,
                      tol: float = 1e-9) -> float:
    """Adaptive-quadrature length of the curve over one parameter interval."""
    metric = _normalize_metric(metric)
    a, b = curve.domain if interval is None else interval
    if b <= a:
        return 0.0
    frame = law.frame

    def integrand(t: float) -> float:
        return speed(frame, curve.position_at(t), curve.velocity_at(t), metric)

    val, _ = quad(integrand, a, b, epsabs=tol, epsrel=tol, limit=200)
    return float(val)


def _length_over_intervals(law, curve, intervals, metric, tol=1e-9) -> float:
    return sum(riemannian_length(law, curve, iv, metric, tol) for iv in intervals)


# -- parameter sets cut out by balls --------------------------------------------


def _bisect_edge(f: Callable[[float], float], lo: float, hi: float,
                 inside_lo: bool, iters: int = 60) -> float:
    """Root of f between lo and hi; f(lo) side is 'inside' (negative)."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if (f(mid) < 0.0) == inside_lo:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(lo)):
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class BallIntersection:
    measure: float
    intervals: tuple          # disjoint parameter intervals inside the ball
    truncated: bool           # the set touches a domain endpoint
    radius: float
    center_parameter: float


def ball_param_set(dist: HomogeneousDistance, curve: Curve, t0: float, r: float,
                   grid_per_unit: int = 4096):
    """Parameter set {t : d(gamma(t0), gamma(t)) < r} as intervals.

    Open versus closed balls only differ on a measure-zero boundary, so a
    single scanner serves both.  Returns (intervals, truncated).
    """
    a, b = curve.domain
    if not a < t0 < b:
        raise ValueError(f"center parameter {t0} outside the open domain")
    x0 = curve.position_at(t0)
    dfun = dist.distance_from(x0)

    m = max(257, int(grid_per_unit * (b - a)) + 1)
    ts = np.linspace(a, b, m)
    ts = np.unique(np.concatenate([ts, [t0]]))
    dvals = dist.norm(dist.law.multiply(-x0, curve.positions(ts))) - r
    inside = dvals < 0.0

    def f(t: float) -> float:
        return dfun(curve.position_at(t)) - r

    # the central component: expand outward from t0, where d = 0
    def expand(direction: int) -> float:
        limit = b if direction > 0 else a
        span = abs(limit - t0)
        lo = 0.0
        h = span * 1e-9 + 1e-300
        while h < span and f(t0 + direction * h) < 0.0:
            lo = h
            h = min(h * 2.0, span)
        if h >= span and f(t0 + direction * span) < 0.0:
            return limit
        return t0 + direction * _bisect_edge(
            lambda s: f(t0 + direction * s), lo, h, True)

    left = expand(-1)
    right = expand(+1)

    edges = []
    for i in range(len(ts) - 1):
        if inside[i] != inside[i + 1]:
            edges.append(_bisect_edge(f, ts[i], ts[i + 1], bool(inside[i])))
    intervals = []
    open_at = ts[0] if inside[0] else None
    for e in edges:
        if open_at is None:
            open_at = e
        else:
            intervals.append((open_at, e))
            open_at = None
    if open_at is not None:
        intervals.append((open_at, ts[-1]))

    # merge in the precisely resolved central component
    intervals.append((left, right))
    intervals.sort()
    merged = [intervals[0]]
    for lo, hi in intervals[1:]:
        if lo <= merged[-1][1] + 1e-15 * (b - a):
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    truncated = merged[0][0] <= a + 1e-12 * (b - a) or merged[-1][1] >= b - 1e-12 * (b - a)
    return tuple(merged), truncated


def ball_intersection_measure(dist: HomogeneousDistance, curve: Curve, t0: float,
                              r: float, metric: str = METRIC_EUCLIDEAN,
                              grid_per_unit: int = 4096) -> BallIntersection:
    """Measure of the curve piece inside the ball around gamma(t0)."""
    intervals, truncated = ball_param_set(dist, curve, t0, r, grid_per_unit)
    total = _length_over_intervals(dist.law, curve, intervals, metric)
    return BallIntersection(measure=total, intervals=intervals, truncated=truncated,
                            radius=r, center_parameter=t0)


# -- blow-up and divergence ------------------------------------------------------


@dataclass(frozen=True)
class BlowupReport:
    t0: float
    q: int
    radii: tuple
    ratios: tuple              # measure / r^q per radius
    predicted: float           # metric factor over the size of the top projection
    diagnostic: float          # relative gap of the last ratio to the prediction
    truncated: bool


def blowup_sequence(dist: HomogeneousDistance, curve: Curve, t0: float,
                    radii: Sequence[float], metric: str = METRIC_EUCLIDEAN,
                    q: int | None = None, grid_points: int = 512) -> BlowupReport:
    """Ratios measure(ball r) / r^q against the predicted density.

    Only defined where the curve realizes its full degree q; at other
    points the ratio diverges and :func:`density_divergence` applies.
    """
    law = dist.law
    if q is None:
        q = degree_profile(law, curve, grid_points).degree
    if pointwise_degree(law, curve, t0) != q:
        raise ValueError(
            f"t0 = {t0} does not realize the curve degree {q}; blow-up undefined here")

    from .metric import metric_factor

    proj, mag = tangent_projection(law, curve, t0, q, metric)
    predicted = metric_factor(dist, proj) / mag

    def one(r: float):
        bi = ball_intersection_measure(dist, curve, t0, r, metric)
        return bi.measure / r ** q, bi.truncated

    results = map_ordered(one, list(radii))
    ratios = tuple(v for v, _ in results)
    truncated = any(t for _, t in results)
    diagnostic = abs(ratios[-1] - predicted) / predicted
    return BlowupReport(t0=t0, q=q, radii=tuple(float(r) for r in radii),
                        ratios=ratios, predicted=predicted,
                        diagnostic=diagnostic, truncated=truncated)


@dataclass(frozen=True)
class DivergenceReport:
    t0: float
    q: int
    radii: tuple
    ratios: tuple
    slope: float               # log-log slope of ratio against radius
    certified: bool            # slope at most -margin
    margin: float


def density_divergence(dist: HomogeneousDistance, curve: Curve, t0: float,
                       radii: Sequence[float], metric: str = METRIC_LEFT,
                       q: int | None = None, margin: float = 0.5,
                       grid_points: int = 512) -> DivergenceReport:
    """Certify measure(ball r) / r^q blowing up at a low-degree point.

    Fits the log-log slope of the ratio sequence; divergence is certified
    when the slope is at most -margin.  Refuses points of full degree,
    where the ratio converges instead.
    """
    law = dist.law
    if q is None:
        q = degree_profile(law, curve, grid_points).degree
    if pointwise_degree(law, curve, t0) >= q:
        raise ValueError(
            f"t0 = {t0} realizes the full degree {q}; the ratio does not diverge here")

    def one(r: float) -> float:
        return ball_intersection_measure(dist, curve, t0, r, metric).measure / r ** q

    ratios = tuple(map_ordered(one, list(radii)))
    slope = float(np.polyfit(np.log(list(radii)), np.log(ratios), 1)[0])
    return DivergenceReport(t0=t0, q=q, radii=tuple(float(r) for r in radii),
                            ratios=ratios, slope=slope,
                            certified=slope <= -margin, margin=margin)


# -- greedy covering --------------------------------------------------------------


@dataclass(frozen=True)
class CoveringEstimate:
    q: int
    delta: float
    value: float               # sum of r^q over the balls placed
    ball_count: int
    centers: tuple             # center parameters (radii all equal delta)


def _forward_reach(dfun_from: Callable[[float], float], start: float, cap: float,
                   r: float, guess: float | None) -> float:
    """Largest parameter s in [start, cap] found with d(s) <= r.

    d is the distance to a fixed anchor, zero at start.  Expands a bracket
    (warm-started by ``guess``) and bisects the first crossing; the inside
    endpoint is returned, so coverage claims stay conservative.
    """
    if cap <= start:
        return start
    width = cap - start
    h = guess if guess and guess > 0 else width * 1e-3
    h = min(h, width)
    while dfun_from(start + h) > r:
        h *= 0.5
        if h < 1e-18 * max(1.0, abs(start)) + 1e-300:
            return start
    lo = h
    hi = min(2.0 * h, width)
    while dfun_from(start + hi) <= r:
        if hi >= width:
            return cap
        lo = hi
        hi = min(2.0 * hi, width)
    # tight tolerance: the per-ball shortfall accumulates over the whole walk
    while hi - lo > 1e-12 * lo + 1e-16:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if dfun_from(start + mid) <= r:
            lo = mid
        else:
            hi = mid
    return start + lo


def spherical_measure_upper(dist: HomogeneousDistance, curve: Curve, q: float,
                            delta: float, intervals=None,
                            max_balls: int = 5_000_000) -> CoveringEstimate:
    """Greedy covering value sum(r^q) at scale delta.

    Covers the given parameter intervals (the whole domain by default)
    with closed balls of radius delta centered on the curve.  Each ball is
    pushed as far forward as possible while still containing the first
    uncovered parameter, so a ball typically covers a full two-sided
    component of new parameters.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    a, b = curve.domain
    if intervals is None:
        intervals = [(a, b)]
    guard = 1e-12 * curve.span()
    value = 0.0
    centers = []

    for lo, hi in intervals:
        lo = max(lo, a)
        hi = min(hi, b)
        if hi < lo:
            continue
        t = lo
        prev_step = None
        while True:
            anchor = curve.position_at(t)
            d_anchor = dist.distance_from(anchor)
            reach = lambda s: d_anchor(curve.position_at(s))
            center = _forward_reach(reach, t, b, delta, prev_step)
            centers.append(center)
            value += delta ** q
            if len(centers) > max_balls:
                raise NumericalResolutionError(
                    f"covering at delta = {delta} exceeded {max_balls} balls")
            if center > t:
                d_center = dist.distance_from(curve.position_at(center))
                ahead = lambda s: d_center(curve.position_at(s))
                edge = _forward_reach(ahead, center, b, delta, center - t)
            else:
                # ball centered at t itself; its forward edge still advances
                edge = _forward_reach(reach, t, b, delta, prev_step)
            if edge <= t + guard:
                raise NumericalResolutionError(
                    f"covering walk stalled at t = {t} (delta = {delta})")
            prev_step = max(edge - center, guard)
            t = edge
            if t >= hi - guard:
                break

    return CoveringEstimate(q=q, delta=delta, value=value,
                            ball_count=len(centers), centers=tuple(centers))


def richardson_extrapolate(values: Sequence[float]) -> float:
    """Limit estimate for a sequence sampled at geometrically shrinking delta.

    Assumes v_k ~ v + C * rho^k for some 0 < rho < 1 and eliminates the
    leading term from the last three entries.  Falls back to the final
    value when the differences are not shrinking with one sign: covering
    values approach their limit monotonically, so alternating differences
    are quantization noise that extrapolation would amplify.
    """
    v = [float(x) for x in values]
    if len(v) < 3:
        return v[-1]
    d1 = v[-1] - v[-2]
    d0 = v[-2] - v[-3]
    if abs(d1) < 1e-12 * max(1.0, abs(v[-1])):
        return v[-1]
    rho = d0 / d1
    if rho < 1.2:
        return v[-1]
    return v[-1] + d1 / (rho - 1.0)


@dataclass(frozen=True)
class CoveringSchedule:
    q: float
    deltas: tuple
    values: tuple
    extrapolated: float
    ball_counts: tuple


def covering_values(dist: HomogeneousDistance, curve: Curve, q: float,
                    deltas: Sequence[float], intervals=None) -> CoveringSchedule:
    ests = [spherical_measure_upper(dist, curve, q, d, intervals) for d in deltas]
    values = tuple(e.value for e in ests)
    return CoveringSchedule(q=q, deltas=tuple(float(d) for d in deltas),
                            values=values,
                            extrapolated=richardson_extrapolate(values),
                            ball_counts=tuple(e.ball_count for e in ests))


# -- area formula, negligibility, density lemma ------------------------------------


@dataclass(frozen=True)
class AreaFormulaReport:
    q: int
    c_q: float
    covering: CoveringSchedule
    lhs: float                 # c_q times the extrapolated covering value
    rhs: float                 # integral of the top tangent projection size
    residual: float            # |lhs - rhs| / rhs
    low_degree_warning: bool


def area_formula_residual(dist: HomogeneousDistance, curve: Curve,
                          metric: str = METRIC_EUCLIDEAN,
                          deltas: Sequence[float] | None = None,
                          interval=None, q: int | None = None,
                          grid_points: int = 512) -> AreaFormulaReport:
    """Compare c_q * (covering estimate) with the tangent-projection integral.

    The right-hand side integrates |top-layer part of the unit tangent|
    against the curve measure induced by the chosen ambient metric; the
    product is metric independent, so any choice here is a consistency
    check rather than a tuning knob.
    """
    law = dist.law
    profile = degree_profile(law, curve, grid_points)
    if q is None:
        q = profile.degree
    if deltas is None:
        deltas = [2.0 ** -k for k in range(2, 9)]
    a, b = curve.domain if interval is None else interval

    cq = degree_constant(dist, q)
    cov = covering_values(dist, curve, q, deltas, intervals=[(a, b)])
    lhs = cq * cov.extrapolated

    metric = _normalize_metric(metric)
    frame = law.frame

    def integrand(t: float) -> float:
        _, mag = tangent_projection(law, curve, t, q, metric)
        return mag * speed(frame, curve.position_at(t), curve.velocity_at(t), metric)

    # integrable kinks sit where the degree drops; help the quadrature there
    breaks = sorted({p for iv in profile.low_degree_intervals for p in iv if a < p < b})
    rhs, _ = quad(integrand, a, b, epsabs=1e-10, epsrel=1e-9, limit=400,
                  points=breaks or None)
    rhs = float(rhs)

    low_warning = any(hi - lo > 2.0 * curve.span() / grid_points
                      for lo, hi in profile.low_degree_intervals)
    residual = abs(lhs - rhs) / abs(rhs) if rhs != 0 else float("inf")
    return AreaFormulaReport(q=q, c_q=cq, covering=cov, lhs=lhs, rhs=rhs,
                             residual=residual, low_degree_warning=low_warning)


@dataclass(frozen=True)
class NegligibilityReport:
    q: int
    deltas: tuple
    values: tuple              # covering value of the low-degree set per delta
    intervals: tuple
    ball_counts: tuple


def negligibility_estimate(dist: HomogeneousDistance, curve: Curve,
                           deltas: Sequence[float], q: int | None = None,
                           profile: DegreeProfile | None = None,
                           grid_points: int = 512) -> NegligibilityReport:
    """Covering values of the low-degree parameter set along a delta schedule.

    Shrinking values certify that the set is null for the q-dimensional
    spherical measure.  An empty low-degree set reports all zeros.
    """
    law = dist.law
    if profile is None:
        profile = degree_profile(law, curve, grid_points)
    if q is None:
        q = profile.degree
    intervals = profile.low_degree_intervals
    if not intervals:
        zeros = tuple(0.0 for _ in deltas)
        return NegligibilityReport(q=q, deltas=tuple(map(float, deltas)),
                                   values=zeros, intervals=(), ball_counts=zeros)
    values = []
    counts = []
    for d in deltas:
        est = spherical_measure_upper(dist, curve, q, d, intervals)
        values.append(est.value)
        counts.append(est.ball_count)
    return NegligibilityReport(q=q, deltas=tuple(float(d) for d in deltas),
                               values=tuple(values), intervals=intervals,
                               ball_counts=tuple(counts))


@dataclass(frozen=True)
class FedererReport:
    a: float
    kappa: float
    sample_parameters: tuple
    ratios: tuple              # per sample: tuple of measure / r^a over radii
    all_dense: bool            # every sampled ratio exceeded kappa
    mu: float                  # measure of the set
    covering_upper: float      # extrapolated covering value at exponent a
    inequality_ok: bool        # mu >= kappa * covering_upper (within tolerance)
    vacuous: bool


def federer_density_check(dist: HomogeneousDistance, curve: Curve, intervals,
                          a: float, kappa: float,
                          radii: Sequence[float] | None = None,
                          deltas: Sequence[float] | None = None,
                          samples_per_interval: int = 3,
                          metric: str = METRIC_LEFT,
                          tol: float = 0.02) -> FedererReport:
    """Sample the density hypothesis of the comparison lemma and test its
    conclusion: if measure(ball r)/r^a stays above kappa on the set, then the
    measure of the set dominates kappa times its covering value.
    """
    if radii is None:
        radii = [2.0 ** -k for k in range(4, 11)]
    if deltas is None:
        deltas = [2.0 ** -k for k in range(2, 9)]
    intervals = [tuple(iv) for iv in intervals]
    if not intervals:
        return FedererReport(a=a, kappa=kappa, sample_parameters=(), ratios=(),
                             all_dense=True, mu=0.0, covering_upper=0.0,
                             inequality_ok=True, vacuous=True)

    samples = []
    for lo, hi in intervals:
        if hi <= lo:
            samples.append(lo)
        else:
            offs = np.linspace(0.2, 0.8, samples_per_interval)
            samples.extend(lo + (hi - lo) * o for o in offs)

    ratios = []
    for t in samples:
        row = tuple(
            ball_intersection_measure(dist, curve, t, r, metric).measure / r ** a
            for r in radii)
        ratios.append(row)
    all_dense = all(min(row) > kappa for row in ratios)

    mu = _length_over_intervals(dist.law, curve, intervals, metric)
    cov = covering_values(dist, curve, a, deltas, intervals=intervals)
    inequality_ok = mu >= kappa * cov.extrapolated * (1.0 - tol)
    return FedererReport(a=a, kappa=kappa,
                         sample_parameters=tuple(float(t) for t in samples),
                         ratios=tuple(ratios), all_dense=all_dense, mu=mu,
                         covering_upper=cov.extrapolated,
                         inequality_ok=inequality_ok, vacuous=False)
