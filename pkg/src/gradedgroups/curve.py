"""C1 curves in exponential coordinates and their degree theory.

A curve carries its open parameter domain and position/velocity
callables.  The pointwise degree at t is the largest layer the velocity
touches when written in the left-invariant frame; the degree of the
curve is the maximum over a parameter grid, and parameters realizing a
smaller degree form the low-degree set.  Near a point of maximal degree
one distinguished coordinate dominates; the adapted basis rotates the
top layer so that coordinate comes first, and the little-o check fits
log-log slopes of the translated coordinates against the graded targets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .frame import FrameCoordinates, METRIC_EUCLIDEAN, METRIC_LEFT, _normalize_metric, speed
from .group import GroupLaw


class ZeroVelocityError(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    """Parametrized curve with explicit velocity.

    position/velocity take a float (or an ndarray of parameters, for the
    vectorized fixtures) and return points of length n.  The domain is an
    open interval; operations clip slightly inside it.
    """

    domain: tuple
    n: int
    position: Callable
    velocity: Callable
    name: str = ""
    description: str = ""

    def position_at(self, t: float) -> np.ndarray:
        return np.asarray(self.position(float(t)), dtype=float).reshape(self.n)

    def velocity_at(self, t: float) -> np.ndarray:
        return np.asarray(self.velocity(float(t)), dtype=float).reshape(self.n)

    def _batch(self, fn, ts: np.ndarray) -> np.ndarray:
        try:
            out = np.asarray(fn(ts), dtype=float)
            if out.shape == ts.shape + (self.n,):
                return out
        except Exception:
            pass
        return np.stack([np.asarray(fn(float(t)), dtype=float).reshape(self.n) for t in ts])

    def positions(self, ts) -> np.ndarray:
        return self._batch(self.position, np.asarray(ts, dtype=float))

    def velocities(self, ts) -> np.ndarray:
        return self._batch(self.velocity, np.asarray(ts, dtype=float))

    def span(self) -> float:
        return self.domain[1] - self.domain[0]


def curve_from_samples(samples, n: int, name: str = "") -> Curve:
    """Cubic interpolation through (t, position, velocity) samples.

    The velocities are honored exactly at the nodes (piecewise cubic
    Hermite), which keeps the interpolant C1.
    """
    from scipy.interpolate import CubicHermiteSpline

    ts = np.asarray([s["t"] for s in samples], dtype=float)
    pos = np.asarray([s["position"] for s in samples], dtype=float)
    vel = np.asarray([s["velocity"] for s in samples], dtype=float)
    if ts.ndim != 1 or len(ts) < 2 or pos.shape != (len(ts), n) or vel.shape != pos.shape:
        raise ValueError("need two or more samples of matching dimension")
    if not np.all(np.diff(ts) > 0):
        raise ValueError("sample parameters must be strictly increasing")
    spline = CubicHermiteSpline(ts, pos, vel)
    dspline = spline.derivative()
    return Curve(domain=(float(ts[0]), float(ts[-1])), n=n,
                 position=spline, velocity=dspline, name=name,
                 description="cubic interpolant of sampled data")


# -- degrees -----------------------------------------------------------------


def pointwise_degree(law: GroupLaw, curve: Curve, t: float, tol_rel: float = 1e-8) -> int:
    """Largest layer whose frame component of the velocity is non-negligible.

    A component counts when |lam_j| > tol_rel * |lam|.  Zero velocity is an
    error: the degree of a point is defined through a nonvanishing tangent.
    """
    v = curve.velocity_at(t)
    if float(np.linalg.norm(v)) == 0.0:
        raise ZeroVelocityError(f"velocity vanishes at t = {t}")
    lam = law.frame.coordinates(curve.position_at(t), v)
    scale = float(np.linalg.norm(lam))
    best = 0
    for j, d in enumerate(law.degrees):
        if abs(lam[j]) > tol_rel * scale and d > best:
            best = d
    return best


@dataclass(frozen=True)
class DegreeProfile:
    grid: np.ndarray
    lam: np.ndarray            # frame coordinates of the velocity per grid point
    degrees: np.ndarray        # pointwise degree per grid point
    degree: int                # max over the grid = degree of the curve
    exponents: tuple           # d_j / degree for every coordinate
    low_degree_intervals: tuple  # maximal parameter intervals below full degree
    tol_rel: float


def degree_profile(law: GroupLaw, curve: Curve, grid_points: int = 512,
                   tol_rel: float = 1e-8, refine: bool = True) -> DegreeProfile:
    """Sample the degree along the curve and locate the low-degree set.

    The low-degree set is reported as closed parameter intervals around
    grid runs of submaximal degree; with ``refine`` the interval ends are
    sharpened by bisection between neighboring grid points.  Features
    narrower than a grid cell that sit strictly between grid points can
    be missed, which is the usual resolution caveat of a sampled scan.
    """
    a, b = curve.domain
    inset = 1e-9 * curve.span()
    ts = np.linspace(a + inset, b - inset, grid_points + 1)
    frame = law.frame
    pos = curve.positions(ts)
    vel = curve.velocities(ts)
    lam = np.empty_like(vel)
    degs = np.empty(len(ts), dtype=int)
    degarr = np.array(law.degrees)
    for i in range(len(ts)):
        if float(np.linalg.norm(vel[i])) == 0.0:
            raise ZeroVelocityError(f"velocity vanishes at t = {ts[i]}")
        lam[i] = frame.coordinates(pos[i], vel[i])
        mask = np.abs(lam[i]) > tol_rel * float(np.linalg.norm(lam[i]))
        degs[i] = int(degarr[mask].max())
    top = int(degs.max())

    def deg_at(t: float) -> int:
        return pointwise_degree(law, curve, t, tol_rel)

    def edge_between(t_full: float, t_low: float) -> float:
        # bisect the jump; returns a parameter on the low side of the edge
        for _ in range(60):
            mid = 0.5 * (t_full + t_low)
            if deg_at(mid) < top:
                t_low = mid
            else:
                t_full = mid
            if abs(t_full - t_low) < 1e-12 * curve.span():
                break
        return t_low

    intervals = []
    i = 0
    while i < len(ts):
        if degs[i] == top:
            i += 1
            continue
        j = i
        while j + 1 < len(ts) and degs[j + 1] < top:
            j += 1
        lo = ts[i]
        hi = ts[j]
        if refine:
            if i > 0:
                lo = edge_between(ts[i - 1], ts[i])
            if j + 1 < len(ts):
                hi = edge_between(ts[j + 1], ts[j])
        intervals.append((float(lo), float(hi)))
        i = j + 1

    return DegreeProfile(grid=ts, lam=lam, degrees=degs, degree=top,
                         exponents=tuple(d / top for d in law.degrees),
                         low_degree_intervals=tuple(intervals), tol_rel=tol_rel)


# -- tangent projections ------------------------------------------------------


def tangent_projection(law: GroupLaw, curve: Curve, t: float, layer: int,
                       metric: str = METRIC_LEFT):
    """Layer part of the unit tangent, in frame coordinates.

    The velocity is normalized by its length under the chosen ambient
    metric, its frame coordinates are restricted to the requested layer,
    and the euclidean size of that block is returned alongside.
    """
    metric = _normalize_metric(metric)
    x = curve.position_at(t)
    v = curve.velocity_at(t)
    sp = speed(law.frame, x, v, metric)
    if sp == 0.0:
        raise ZeroVelocityError(f"velocity vanishes at t = {t}")
    lam = law.frame.coordinates(x, v) / sp
    sl = law.algebra.layer_slice(layer)
    proj = np.zeros_like(lam)
    proj[sl] = lam[sl]
    return FrameCoordinates(lam=proj, base_point=x), float(np.linalg.norm(proj[sl]))


# -- adapted bases -------------------------------------------------------------


@dataclass(frozen=True)
class AdaptedBasis:
    """Degree-preserving rotation that puts the dominant direction first.

    ``rotation`` columns are the new basis vectors in old coordinates; it
    is orthogonal and block diagonal across layers, so degrees are kept.
    ``i0`` is the 0-based index of the distinguished coordinate (the first
    slot of layer q).
    """

    rotation: np.ndarray
    q: int
    i0: int


def adapted_basis(law: GroupLaw, curve: Curve, t0: float, q: int,
                  tol_rel: float = 1e-8) -> AdaptedBasis:
    """Rotate layer q so the translated tangent points along its first axis.

    Requires t0 to realize the full degree q: the layer-q block of the
    velocity in frame coordinates (equivalently, of the velocity of the
    curve translated to the identity) must not vanish.
    """
    alg = law.algebra
    if not 1 <= q <= alg.step:
        raise ValueError(f"layer {q} out of range")
    x = curve.position_at(t0)
    v = curve.velocity_at(t0)
    lam = law.frame.coordinates(x, v)
    if pointwise_degree(law, curve, t0, tol_rel) != q:
        raise ValueError(f"t0 = {t0} does not have degree {q}; adapted basis undefined")
    sl = alg.layer_slice(q)
    block = lam[sl]
    u = block / np.linalg.norm(block)

    dim = sl.stop - sl.start
    m = np.eye(dim)
    m[:, 0] = u
    qmat, _ = np.linalg.qr(m)
    # qr may flip signs; force the first column to be u exactly
    if np.dot(qmat[:, 0], u) < 0:
        qmat[:, 0] = -qmat[:, 0]
    qmat[:, 0] = u
    # re-orthogonalize the remaining columns against the exact first column
    for c in range(1, dim):
        col = qmat[:, c]
        for prev in range(c):
            col = col - np.dot(qmat[:, prev], col) * qmat[:, prev]
        qmat[:, c] = col / np.linalg.norm(col)

    rot = np.eye(alg.n)
    rot[sl, sl] = qmat
    return AdaptedBasis(rotation=rot, q=q, i0=sl.start)


def adapted_structure_tensor(law: GroupLaw, basis: AdaptedBasis) -> np.ndarray:
    """Structure constants conjugated into the adapted basis (float).

    Because the rotation is block diagonal by layer, entries violating the
    grading rule stay identically zero; the Jacobi identity holds to
    rounding.
    """
    c = law.algebra.structure_tensor()
    r = basis.rotation
    return np.einsum("ia,jb,ijk,kc->abc", r, r, c, r)


# -- curve transforms ----------------------------------------------------------


def translate_curve(law: GroupLaw, z, curve: Curve) -> Curve:
    """Left translation t -> z * gamma(t), with the pushed-forward velocity."""
    z = np.asarray(z, dtype=float)

    def position(ts):
        pts = curve.positions(np.asarray(ts, dtype=float)) if np.ndim(ts) else curve.position_at(ts)
        return law.multiply(z, pts)

    def velocity(t):
        if np.ndim(t):
            return np.stack([velocity(float(s)) for s in np.asarray(t, float)])
        y = curve.position_at(t)
        return law.left_jacobian(z, y) @ curve.velocity_at(t)

    return Curve(domain=curve.domain, n=curve.n, position=position, velocity=velocity,
                 name=f"{curve.name}+translated" if curve.name else "translated",
                 description=curve.description)


def dilate_curve(law: GroupLaw, s: float, curve: Curve) -> Curve:
    """Image under the dilation of factor s (an automorphism)."""
    if not s > 0:
        raise ValueError("dilation factor must be positive")
    weights = np.array([float(s) ** d for d in law.degrees])

    return Curve(domain=curve.domain, n=curve.n,
                 position=lambda t: curve.positions(np.asarray(t, float)) * weights
                 if np.ndim(t) else curve.position_at(t) * weights,
                 velocity=lambda t: curve.velocities(np.asarray(t, float)) * weights
                 if np.ndim(t) else curve.velocity_at(t) * weights,
                 name=f"{curve.name}+dilated" if curve.name else "dilated",
                 description=curve.description)


def linear_image_curve(m: np.ndarray, curve: Curve) -> Curve:
    """Image under a linear coordinate map (meant for graded isometries)."""
    m = np.asarray(m, dtype=float)

    return Curve(domain=curve.domain, n=curve.n,
                 position=lambda t: curve.positions(np.asarray(t, float)) @ m.T
                 if np.ndim(t) else m @ curve.position_at(t),
                 velocity=lambda t: curve.velocities(np.asarray(t, float)) @ m.T
                 if np.ndim(t) else m @ curve.velocity_at(t),
                 name=f"{curve.name}+mapped" if curve.name else "mapped",
                 description=curve.description)


def recentered_curve(law: GroupLaw, curve: Curve, t0: float,
                     rotation: np.ndarray | None = None) -> Curve:
    """The curve seen from gamma(t0): h -> R^T (gamma(t0)^-1 * gamma(t0+h)).

    This is the normal form used by the local estimates; the origin of the
    new parameter h is the old t0.
    """
    x0inv = -curve.position_at(t0)
    rt = None if rotation is None else np.asarray(rotation, dtype=float).T

    def position(h):
        if np.ndim(h):
            pts = law.multiply(x0inv, curve.positions(np.asarray(h, float) + t0))
            return pts if rt is None else pts @ rt.T
        p = law.multiply(x0inv, curve.position_at(t0 + h))
        return p if rt is None else rt @ p

    def velocity(h):
        if np.ndim(h):
            return np.stack([velocity(float(s)) for s in np.asarray(h, float)])
        y = curve.position_at(t0 + h)
        v = law.left_jacobian(x0inv, y) @ curve.velocity_at(t0 + h)
        return v if rt is None else rt @ v

    a, b = curve.domain
    return Curve(domain=(a - t0, b - t0), n=curve.n, position=position,
                 velocity=velocity, name=f"{curve.name}@{t0}" if curve.name else "recentered",
                 description=curve.description)


# -- little-o slope checks ------------------------------------------------------


@dataclass(frozen=True)
class SlopeRow:
    index: int          # 0-based coordinate
    degree: int
    target: float       # required power of |h|
    slope: float        # fitted log-log slope (inf when vacuous)
    points: int         # samples used in the fit
    vacuous: bool       # coordinate identically zero on the schedule
    excluded: bool      # the distinguished coordinate in max-degree mode
    passed: bool


@dataclass(frozen=True)
class LittleOReport:
    t0: float
    q: int
    mode: str           # "max-degree" or "low-degree"
    i0: int | None
    margin: float
    rows: tuple

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)


def little_o_check(law: GroupLaw, curve: Curve, t0: float, q: int,
                   basis: AdaptedBasis | None = None, h0: float = 0.1,
                   levels: int = 20, margin: float = 0.05,
                   tol_rel: float = 1e-8) -> LittleOReport:
    """Fit decay rates of the recentered coordinates against graded targets.

    With an adapted ``basis`` (max-degree mode) every coordinate except the
    distinguished one must decay strictly faster than |h|^(d_i / q); at a
    point of submaximal degree (``basis`` None, low-degree mode) every
    coordinate must beat |h|^(d_j / q) where q is the degree of the curve.
    A pass requires the fitted slope to exceed the target by ``margin``.
    Coordinates that vanish identically on the schedule pass vacuously
    with slope +inf.
    """
    deg_here = pointwise_degree(law, curve, t0, tol_rel)
    if basis is not None:
        mode = "max-degree"
        if deg_here != q:
            raise ValueError(f"t0 = {t0} has degree {deg_here}, not the full degree {q}")
        rot, i0 = basis.rotation, basis.i0
    else:
        mode = "low-degree"
        if deg_here >= q:
            raise ValueError(
                f"t0 = {t0} has full degree {deg_here}; the low-degree bound does not apply")
        rot, i0 = None, None

    local = recentered_curve(law, curve, t0, rotation=rot)
    hs = h0 * 0.5 ** np.arange(levels + 1)
    a, b = local.domain
    guard = 1e-9 * curve.span()

    vals = np.zeros((len(hs), curve.n))
    used = np.zeros(len(hs), dtype=bool)
    for k, h in enumerate(hs):
        sides = []
        if h < b - guard:
            sides.append(local.position_at(h))
        if -h > a + guard:
            sides.append(local.position_at(-h))
        if sides:
            vals[k] = np.max(np.abs(np.stack(sides)), axis=0)
            used[k] = True

    rows = []
    logh = np.log(hs[used])
    for i in range(curve.n):
        target = law.degrees[i] / q
        excluded = mode == "max-degree" and i == i0
        v = vals[used, i]
        keep = v > 1e-250
        pts = int(np.sum(keep))
        if pts == 0:
            rows.append(SlopeRow(i, law.degrees[i], target, float("inf"), 0,
                                 True, excluded, True))
            continue
        if pts < 3:
            # too few nonzero samples to fit; treat as vacuous rather than guess
            rows.append(SlopeRow(i, law.degrees[i], target, float("inf"), pts,
                                 True, excluded, True))
            continue
        slope = float(np.polyfit(logh[keep], np.log(v[keep]), 1)[0])
        passed = excluded or slope >= target + margin
        rows.append(SlopeRow(i, law.degrees[i], target, slope, pts,
                             False, excluded, passed))
    return LittleOReport(t0=t0, q=q, mode=mode, i0=i0, margin=margin, rows=tuple(rows))
