"""Exact planar convex geometry kernel.

Convex hulls of finite point sets with explicit handling of the degenerate
cases (a single point, a collinear segment), plus the classical functionals
on convex compact sets: perimeter with the lower-dimensional convention
(a segment counts its length twice), area, support function, Hausdorff
distance via support-function sampling, Steiner parallel-body area, and a
Cauchy-formula quadrature that serves as an independent perimeter oracle.

All functions are pure; nothing here keeps mutable state, so everything is
safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import EmptyInputError, NonUnitDirectionError, OriginOutsideError

# Relative tolerance (times the diameter) for point-membership tests.
MEMBERSHIP_RTOL = 1e-9


class Degeneracy(Enum):
    POINT = "point"
    SEGMENT = "segment"
    FULL_DIM = "full_dim"


@dataclass(frozen=True)
class Vec2:
    """A point or vector in the plane with finite coordinates."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Vec2 coordinates must be finite, got ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


def _points_array(points) -> np.ndarray:
    """Normalize a point collection to a finite float array of shape (m, 2)."""
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
    else:
        seq = list(points)
        if len(seq) == 0:
            raise EmptyInputError("need at least one point")
        arr = np.array([tuple(p) for p in seq], dtype=float)
    if arr.ndim == 1 and arr.shape == (2,):
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected points of shape (m, 2), got {arr.shape}")
    if arr.shape[0] == 0:
        raise EmptyInputError("need at least one point")
    if not np.isfinite(arr).all():
        raise ValueError("points must have finite coordinates")
    return arr


def _point_array(p) -> np.ndarray:
    arr = np.asarray(tuple(p) if not isinstance(p, np.ndarray) else p, dtype=float)
    if arr.shape != (2,):
        raise ValueError(f"expected a single point, got shape {arr.shape}")
    return arr


def _chain(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Monotone-chain hull of lexicographically sorted points, CCW.

    The orientation predicate is the plain double-precision cross product
    with a strict zero threshold: popping collinear-within-a-tolerance
    triples can delete genuine vertices on near-vertical configurations, so
    only exact collinearity collapses.  Walk coordinates stay far below the
    scale where double cross products lose the sign of a turn.
    """
    lower: list[tuple[float, float]] = []
    for p in points:
        while len(lower) >= 2:
            o, a = lower[-2], lower[-1]
            if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0.0:
                lower.pop()
            else:
                break
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(points):
        while len(upper) >= 2:
            o, a = upper[-2], upper[-1]
            if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0.0:
                upper.pop()
            else:
                break
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class ConvexPolygon:
    """A convex compact set given by its extreme points in CCW order.

    ``vertices`` has shape (k, 2).  A single vertex is a point, two vertices
    are a segment, and three or more form a full-dimensional polygon whose
    consecutive vertex triples all turn strictly left.
    """

    vertices: np.ndarray
    _diameter: float = field(init=False, repr=False, compare=False, default=0.0)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] == 0:
            raise ValueError(f"vertices must have shape (k, 2) with k >= 1, got {v.shape}")
        if not np.isfinite(v).all():
            raise ValueError("vertices must be finite")
        k = v.shape[0]
        if k >= 2:
            nxt = np.roll(v, -1, axis=0)
            if np.all(nxt == v, axis=1).any():
                raise ValueError("duplicate consecutive vertices")
        if k >= 3:
            prv = np.roll(v, 1, axis=0)
            nxt = np.roll(v, -1, axis=0)
            cross = (v[:, 0] - prv[:, 0]) * (nxt[:, 1] - prv[:, 1]) - (
                v[:, 1] - prv[:, 1]
            ) * (nxt[:, 0] - prv[:, 0])
            if not (cross > 0.0).all():
                raise ValueError("vertices are not in strictly convex CCW position")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        d = 0.0
        if k >= 2:
            diff = v[:, None, :] - v[None, :, :]
            d = float(np.sqrt((diff * diff).sum(axis=2)).max())
        object.__setattr__(self, "_diameter", d)

    @property
    def degeneracy(self) -> Degeneracy:
        k = len(self.vertices)
        if k == 1:
            return Degeneracy.POINT
        if k == 2:
            return Degeneracy.SEGMENT
        return Degeneracy.FULL_DIM

    @property
    def diameter(self) -> float:
        return self._diameter

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Start and end points of the boundary edges (the closed cycle)."""
        v = self.vertices
        if len(v) == 1:
            return v, v
        if len(v) == 2:
            return v[:1], v[1:]
        return v, np.roll(v, -1, axis=0)

    def contains(self, point, rtol: float = MEMBERSHIP_RTOL) -> bool:
        """Membership test with tolerance ``rtol`` times the diameter."""
        p = _point_array(point)
        v = self.vertices
        tol = rtol * max(self.diameter, 1.0e-30)
        if len(v) == 1:
            return bool(np.hypot(*(p - v[0])) <= tol)
        if len(v) == 2:
            return _dist_to_segments(p, v[:1], v[1:]) <= tol
        a, b = self.edge_arrays()
        e = b - a
        elen = np.hypot(e[:, 0], e[:, 1])
        cross = e[:, 0] * (p[1] - a[:, 1]) - e[:, 1] * (p[0] - a[:, 0])
        return bool((cross >= -tol * elen).all())


def _dist_to_segments(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Minimum distance from point p to a family of segments [a_i, b_i]."""
    d = b - a
    denom = (d * d).sum(axis=1)
    denom_safe = np.where(denom > 0, denom, 1.0)
    t = np.clip(((p - a) * d).sum(axis=1) / denom_safe, 0.0, 1.0)
    proj = a + t[:, None] * d
    return float(np.hypot(proj[:, 0] - p[0], proj[:, 1] - p[1]).min())


def convex_hull(points) -> ConvexPolygon:
    """Convex hull of a finite point set (Andrew's monotone chain).

    Returns the extreme points in CCW order.  Collinear input collapses to a
    segment and coincident input to a point.

    Raises:
        EmptyInputError: if no points are given.
    """
    arr = _points_array(points)
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    pts = [tuple(q) for q in arr[order]]
    dedup = [pts[0]]
    for q in pts[1:]:
        if q != dedup[-1]:
            dedup.append(q)
    if len(dedup) == 1:
        return ConvexPolygon(np.array(dedup))
    hull = _chain(dedup)
    return ConvexPolygon(np.array(hull))


def perimeter(poly: ConvexPolygon) -> float:
    """Perimeter length with the degenerate convention.

    A full-dimensional polygon contributes the sum of its edge lengths, a
    segment twice its length (the boundary of a flat set is walked in both
    directions), and a point zero.
    """
    v = poly.vertices
    if len(v) == 1:
        return 0.0
    if len(v) == 2:
        return 2.0 * float(np.hypot(*(v[1] - v[0])))
    e = np.roll(v, -1, axis=0) - v
    return float(np.hypot(e[:, 0], e[:, 1]).sum())


def area(poly: ConvexPolygon) -> float:
    """Area by the shoelace formula; zero for points and segments."""
    v = poly.vertices
    if len(v) <= 2:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def support(poly: ConvexPolygon, direction) -> float:
    """Support function h(e) = max over vertices of v . e for a unit direction e.

    Raises:
        NonUnitDirectionError: if the direction is not unit length to 1e-12.
    """
    e = _point_array(direction)
    norm = float(np.hypot(e[0], e[1]))
    if abs(norm - 1.0) > 1e-12:
        raise NonUnitDirectionError(f"direction has norm {norm!r}, expected 1")
    return float((poly.vertices @ e).max())


def _outward_normal_angles(poly: ConvexPolygon) -> np.ndarray:
    v = poly.vertices
    if len(v) == 1:
        return np.empty(0)
    if len(v) == 2:
        d = v[1] - v[0]
        ang = math.atan2(-d[0], d[1])
        return np.array([ang, ang + math.pi])
    e = np.roll(v, -1, axis=0) - v
    # CCW boundary: the outward normal of edge (dx, dy) is (dy, -dx).
    return np.arctan2(-e[:, 0], e[:, 1])


def hausdorff(a: ConvexPolygon, b: ConvexPolygon, n_angles: int = 4096) -> float:
    """Hausdorff distance via the support-function characterization.

    Evaluates sup over directions of |h_a - h_b| on a uniform grid of
    ``n_angles`` angles joined with the outward edge-normal angles of both
    polygons, so translations and parallel bodies are resolved exactly and
    everything else to O(diameter / n_angles).
    """
    angles = np.concatenate(
        [
            np.arange(n_angles) * (2.0 * math.pi / n_angles),
            _outward_normal_angles(a),
            _outward_normal_angles(b),
        ]
    )
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    ha = (a.vertices @ dirs.T).max(axis=0)
    hb = (b.vertices @ dirs.T).max(axis=0)
    return float(np.abs(ha - hb).max())


def cauchy_perimeter(points, n_angles: int) -> float:
    """Perimeter of hull(points) by midpoint quadrature of Cauchy's formula.

    Integrates the projected range max_i(z_i . e_theta) - min_i(z_i . e_theta)
    over theta in [0, pi).  Independent of the hull construction, hence usable
    as an oracle for ``perimeter(convex_hull(points))``; it reproduces the
    factor-two convention for flat sets automatically.

    Raises:
        EmptyInputError: if no points are given.
    """
    if n_angles < 4:
        raise ValueError(f"n_angles must be >= 4, got {n_angles}")
    arr = _points_array(points)
    theta = (np.arange(n_angles) + 0.5) * (math.pi / n_angles)
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    proj = arr @ dirs.T
    widths = proj.max(axis=0) - proj.min(axis=0)
    return float(widths.sum() * (math.pi / n_angles))


def dist_origin_to_boundary(poly: ConvexPolygon) -> float:
    """Distance from the origin to the polygon boundary.

    The origin must lie inside the polygon (for walk hulls it always does,
    since the walk starts at the origin).

    Raises:
        OriginOutsideError: if the membership test fails.
    """
    origin = np.zeros(2)
    if not poly.contains(origin):
        raise OriginOutsideError("origin is not inside the polygon")
    v = poly.vertices
    if len(v) == 1:
        return 0.0
    a, b = poly.edge_arrays()
    return _dist_to_segments(origin, a, b)


def triangle_area(u, v) -> float:
    """Area of the triangle with side vectors u and v, via the cross product.

    Equals (1/2) sqrt(|u|^2 |v|^2 - (u.v)^2) but avoids the cancellation in
    the square-root form for nearly parallel sides.
    """
    ux, uy = _point_array(u)
    vx, vy = _point_array(v)
    return 0.5 * abs(ux * vy - uy * vx)


def steiner_area(poly: ConvexPolygon, r: float) -> float:
    """Area of the r-parallel body: area + r * perimeter + pi r^2.

    Uses the same perimeter convention as ``perimeter`` (segment counted
    twice), which makes the identity exact for degenerate sets as well: the
    stadium around a segment of length s has area 2rs + pi r^2.
    """
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    return area(poly) + r * perimeter(poly) + math.pi * r * r


def hull_functionals(points) -> tuple[float, float, float]:
    """(perimeter, area, distance origin-to-boundary) of hull(points).

    Convenience wrapper used by the batch recomputation oracle.
    """
    poly = convex_hull(points)
    return perimeter(poly), area(poly), dist_origin_to_boundary(poly)
