"""Geometry of direction sets and their intersection.

Each qualifying demonstration sample yields a set of desired directions:
in 2-D the sector spanned between the actual motion direction and the
contact-force direction, in 3-D that sector widened perpendicularly into a
four-generator cone. Intersecting the sets over a whole motion, with a
tolerated fraction of outliers, yields the window of directions able to
drive the tool through everything demonstrated; the window's center is the
learned desired direction.

2-D sets are handled exactly as angular intervals. 3-D sets are mapped by
gnomonic projection onto the plane tangent at the mean generator direction
(great circles map to straight lines, so the cones become convex polygons)
and clipped against each other there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from ..errors import DegenerateSectorError, NoConsistentDirectionError

_EPS = 1e-12
_ANGLE_TOL = 1e-9


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    return v / n


def _cross2(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _wrap_angle(a):
    """Wrap to (-pi, pi]."""
    return np.pi - np.mod(np.pi - a, 2.0 * np.pi)


@dataclass(frozen=True)
class DirectionSet:
    """Set of desired directions at one sample.

    ``generators`` has shape (2, 2) in 2-D (motion direction, force
    direction) or (4, 3) in 3-D; rows are unit vectors. ``alpha`` is the
    perpendicular extension half-angle used to build the 3-D cone.
    """

    generators: np.ndarray
    alpha: float = 0.0

    def __post_init__(self):
        g = np.asarray(self.generators, dtype=float)
        object.__setattr__(self, "generators", g)
        if g.shape not in ((2, 2), (4, 3)):
            raise ValueError("generators must be (2,2) for 2-D or (4,3) for 3-D")
        norms = np.linalg.norm(g, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise ValueError("generators must be unit length")

    @property
    def dimension(self) -> int:
        return self.generators.shape[1]

    def angular_interval(self):
        """(center, half_width) of the 2-D sector, radians."""
        if self.dimension != 2:
            raise ValueError("angular_interval is defined for 2-D sets only")
        t1 = np.arctan2(self.generators[0, 1], self.generators[0, 0])
        t2 = np.arctan2(self.generators[1, 1], self.generators[1, 0])
        delta = _wrap_angle(t2 - t1)
        return _wrap_angle(t1 + 0.5 * delta), 0.5 * abs(delta)

    def contains(self, direction, tol: float = 1e-9) -> bool:
        d = _unit(direction)
        if self.dimension == 2:
            center, half = self.angular_interval()
            theta = np.arctan2(d[1], d[0])
            return bool(abs(_wrap_angle(theta - center)) <= half + tol)
        frame = _tangent_frame(_unit(self.generators.mean(axis=0)))
        try:
            poly = _project_set(self, frame)
            point = _project_direction(d, frame)
        except DegenerateSectorError:
            return False
        return _point_in_polygon(point, poly, tol)


def build_direction_set(motion_dir, force_dir, alpha: float = 0.0) -> DirectionSet:
    """Direction set from one (motion, force) direction pair.

    In 2-D the set is the sector between the two directions (the shorter
    arc); coincident directions give a zero-width sector. In 3-D both
    directions are displaced by +/- epsilon, the vector orthogonal to both
    with magnitude tan(alpha), giving the four cone generators.

    Raises:
        DegenerateSectorError: antiparallel generators, or parallel ones in
            3-D where the orthogonal extension is undefined.
    """
    v = _unit(motion_dir)
    f = _unit(force_dir)
    if v.shape != f.shape or v.shape[0] not in (2, 3):
        raise ValueError("directions must both be 2-D or both 3-D")
    cos = float(np.dot(v, f))
    if v.shape[0] == 2:
        if cos <= -1.0 + 1e-9:
            raise DegenerateSectorError("motion and force directions are antiparallel")
        return DirectionSet(np.array([v, f]), alpha=0.0)
    cross = np.cross(f, v)
    norm = np.linalg.norm(cross)
    if norm < 1e-9:
        raise DegenerateSectorError(
            "parallel generators leave the perpendicular extension undefined"
        )
    eps = np.tan(alpha) * cross / norm
    rows = [v + eps, v - eps, f - eps, f + eps]
    return DirectionSet(np.array([r / np.linalg.norm(r) for r in rows]), alpha=alpha)


@dataclass(frozen=True)
class AngularWindow:
    """Arc of consistent directions in 2-D: {start + u, 0 <= u <= width}."""

    start: float
    width: float
    support: int = 0

    def contains(self, angle, tol: float = 1e-9) -> bool:
        u = np.mod(angle - self.start, 2.0 * np.pi)
        return bool(u <= self.width + tol or u >= 2.0 * np.pi - tol)

    @property
    def midpoint(self) -> float:
        return float(_wrap_angle(self.start + 0.5 * self.width))


@dataclass(frozen=True)
class PlanarWindow:
    """Convex polygon of consistent directions on the 3-D tangent plane."""

    vertices: np.ndarray  # (m, 2), counter-clockwise
    tangent_point: np.ndarray  # unit 3-vector the plane touches
    basis: np.ndarray  # (2, 3) orthonormal in-plane axes
    support: int = 0

    def to_direction(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=float)
        return _unit(self.tangent_point + p @ self.basis)


def intersect_direction_sets(sets, outlier_fraction: float = 0.0):
    """Directions contained in at least ceil((1-rho) * N) of the sets.

    Data from several demonstrations is expected concatenated into one
    list. Returns an AngularWindow (2-D) or PlanarWindow (3-D).

    Raises:
        NoConsistentDirectionError: nothing survives even after the
            allowed outlier fraction; the demonstrations do not share a
            desired direction.
    """
    sets = list(sets)
    if not sets:
        raise ValueError("need at least one direction set")
    if not 0.0 <= outlier_fraction < 0.5:
        raise ValueError("outlier_fraction must lie in [0, 0.5)")
    dims = {s.dimension for s in sets}
    if len(dims) != 1:
        raise ValueError("direction sets mix dimensions")
    needed = int(np.ceil((1.0 - outlier_fraction) * len(sets)))
    if dims.pop() == 2:
        return _intersect_2d(sets, needed)
    return _intersect_3d(sets, needed)


def choose_desired_direction(window) -> np.ndarray:
    """Representative direction from a window: the angular midpoint in
    2-D, the Chebyshev center of the polygon in 3-D."""
    if isinstance(window, AngularWindow):
        return np.array([np.cos(window.midpoint), np.sin(window.midpoint)])
    if isinstance(window, PlanarWindow):
        return window.to_direction(_chebyshev_center(window.vertices))
    raise TypeError(f"not a direction window: {window!r}")


# ---------------------------------------------------------------------------
# 2-D: exact membership counting on the circle


def _intersect_2d(sets, needed: int) -> AngularWindow:
    intervals = [s.angular_interval() for s in sets]
    bounds = []
    for center, half in intervals:
        bounds.append(_wrap_angle(center - half))
        bounds.append(_wrap_angle(center + half))
    bounds = np.unique(bounds)

    def count(angle: float) -> int:
        return sum(
            1
            for center, half in intervals
            if abs(_wrap_angle(angle - center)) <= half + _ANGLE_TOL
        )

    # Closed elementary pieces between consecutive boundaries (plus the
    # boundaries themselves, so zero-width windows survive).
    pieces = []  # (start, width, support)
    n = len(bounds)
    for i in range(n):
        a = bounds[i]
        b = bounds[(i + 1) % n] if n > 1 else bounds[i] + 2.0 * np.pi
        width = np.mod(b - a, 2.0 * np.pi)
        if n == 1:
            width = 2.0 * np.pi
        c_point = count(a)
        if c_point >= needed:
            pieces.append((a, 0.0, c_point))
        if width > _ANGLE_TOL:
            c_mid = count(_wrap_angle(a + 0.5 * width))
            if c_mid >= needed:
                pieces.append((a, width, c_mid))
    if not pieces:
        raise NoConsistentDirectionError(
            f"no direction lies in {needed} of {len(sets)} sectors"
        )
    merged = _merge_arcs(pieces)
    merged.sort(key=lambda arc: (-arc[2], -arc[1], arc[0]))
    start, width, support = merged[0]
    return AngularWindow(start=float(_wrap_angle(start)), width=float(width), support=support)


def _merge_arcs(pieces):
    """Join arcs that touch end-to-start on the circle; keep max support."""
    pieces = sorted(pieces, key=lambda arc: arc[0])
    merged = []
    for start, width, support in pieces:
        if merged:
            p_start, p_width, p_support = merged[-1]
            gap = np.mod(start - (p_start + p_width), 2.0 * np.pi)
            if gap <= _ANGLE_TOL or np.mod(start - p_start, 2.0 * np.pi) <= p_width + _ANGLE_TOL:
                end = max(p_start + p_width, start + width)
                merged[-1] = (p_start, end - p_start, max(p_support, support))
                continue
        merged.append((start, width, support))
    # Wrap join: last piece running into the first.
    if len(merged) > 1:
        f_start, f_width, f_support = merged[0]
        l_start, l_width, l_support = merged[-1]
        if np.mod(f_start - (l_start + l_width), 2.0 * np.pi) <= _ANGLE_TOL:
            merged[0] = (l_start, l_width + f_width + np.mod(f_start - (l_start + l_width), 2.0 * np.pi), max(f_support, l_support))
            merged.pop()
    return merged


# ---------------------------------------------------------------------------
# 3-D: gnomonic projection and convex polygon clipping


def _tangent_frame(tangent_point: np.ndarray):
    """Orthonormal (e1, e2) spanning the plane tangent at the unit vector."""
    t = _unit(tangent_point)
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(t)))] = 1.0
    e1 = _unit(helper - np.dot(helper, t) * t)
    e2 = np.cross(t, e1)
    return t, np.vstack([e1, e2])


def _project_direction(direction: np.ndarray, frame) -> np.ndarray:
    """Gnomonic projection: intersect the ray with the tangent plane."""
    t, basis = frame
    along = float(np.dot(direction, t))
    if along <= 1e-9:
        raise DegenerateSectorError("direction lies outside the tangent hemisphere")
    return (basis @ direction) / along


def _project_set(dirset: DirectionSet, frame) -> np.ndarray:
    points = np.array([_project_direction(g, frame) for g in dirset.generators])
    return _convex_order(points)


def _convex_order(points: np.ndarray) -> np.ndarray:
    """Order a handful of points counter-clockwise around their mean."""
    center = points.mean(axis=0)
    angles = np.arctan2(points[:, 1] - center[1], points[:, 0] - center[0])
    return points[np.argsort(angles)]


def _polygon_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _clip_polygon(subject: np.ndarray, clip: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman clip of a polygon by a convex CCW polygon."""
    output = list(subject)
    m = len(clip)
    for i in range(m):
        if not output:
            break
        a, b = clip[i], clip[(i + 1) % m]
        edge = b - a
        inputs, output = output, []
        prev = inputs[-1]
        prev_in = _cross2(edge, prev - a) >= -_EPS
        for cur in inputs:
            cur_in = _cross2(edge, cur - a) >= -_EPS
            if cur_in != prev_in:
                denom = _cross2(edge, cur - prev)
                if abs(denom) > _EPS:
                    s = _cross2(edge, a - prev) / denom
                    output.append(prev + s * (cur - prev))
            if cur_in:
                output.append(cur)
            prev, prev_in = cur, cur_in
    return np.array(output) if output else np.zeros((0, 2))


def _point_in_polygon(point: np.ndarray, vertices: np.ndarray, tol: float) -> bool:
    if len(vertices) == 0:
        return False
    if len(vertices) < 3:
        return bool(min(np.linalg.norm(vertices - point, axis=1)) <= tol)
    m = len(vertices)
    for i in range(m):
        a, b = vertices[i], vertices[(i + 1) % m]
        if _cross2(b - a, point - a) < -tol:
            return False
    return True


def _intersect_3d(sets, needed: int) -> PlanarWindow:
    all_generators = np.concatenate([s.generators for s in sets], axis=0)
    frame = _tangent_frame(all_generators.mean(axis=0))
    polygons = []
    dropped = 0
    for s in sets:
        try:
            polygons.append(_project_set(s, frame))
        except DegenerateSectorError:
            dropped += 1  # far-hemisphere set; can only ever be an outlier
            polygons.append(None)
    budget = len(sets) - needed

    # Canonical processing order keeps the result independent of input
    # permutation: greedily skip sets that would empty the intersection.
    order = sorted(
        (i for i, p in enumerate(polygons) if p is not None),
        key=lambda i: tuple(np.round(polygons[i].mean(axis=0), 12)),
    )
    current: np.ndarray | None = None
    for i in order:
        candidate = polygons[i] if current is None else _clip_polygon(current, polygons[i])
        if len(candidate) == 0:
            dropped += 1
            continue
        current = candidate
    if current is None or dropped > budget:
        raise NoConsistentDirectionError(
            f"no direction lies in {needed} of {len(sets)} direction sets"
        )
    if _polygon_area(current) < 0.0:
        current = current[::-1]
    t, basis = frame
    return PlanarWindow(
        vertices=current,
        tangent_point=t,
        basis=basis,
        support=len(sets) - dropped,
    )


def _chebyshev_center(vertices: np.ndarray) -> np.ndarray:
    """Center of the largest circle inscribed in a convex CCW polygon."""
    if len(vertices) == 1:
        return vertices[0]
    if len(vertices) == 2:
        return vertices.mean(axis=0)
    a_rows, b_vals = [], []
    m = len(vertices)
    for i in range(m):
        a, b = vertices[i], vertices[(i + 1) % m]
        edge = b - a
        norm = np.linalg.norm(edge)
        if norm < _EPS:
            continue
        inward = np.array([-edge[1], edge[0]]) / norm
        # inward . x >= inward . a  ->  -inward . x + r <= -inward . a
        a_rows.append([-inward[0], -inward[1], 1.0])
        b_vals.append(float(-np.dot(inward, a)))
    result = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=np.array(a_rows),
        b_ub=np.array(b_vals),
        bounds=[(None, None), (None, None), (0.0, None)],
        method="highs",
    )
    if not result.success:
        return vertices.mean(axis=0)
    return result.x[:2]
