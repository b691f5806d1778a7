"""Hyperbolic geodesics of the upper half plane and h-convex hulls.

Geodesics are circular arcs centered on the real axis; the hull is computed
by mapping the upper half plane to the Poincare disk (Cayley transform),
then to the Klein model where geodesics are straight chords, taking the
Euclidean convex hull there and mapping the extreme points back.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, QhullError

_LIFT = 1e-12   # ideal points on the real axis are lifted by this before mapping


def arc_min(z1: complex, z2: complex, n: int = 64) -> np.ndarray:
    """Sampled geodesic between two upper-half-plane points.

    The geodesic lies on the unique circle through z1, z2 centered on the
    real axis; for equal real parts (center at infinity) it degenerates to
    the vertical segment.
    """
    if z1.imag < -1e-12 or z2.imag < -1e-12:
        raise ValueError("arc_min endpoints must lie in the closed upper half plane")
    if z1 == z2:
        return np.array([z1], dtype=complex)
    scale = max(abs(z1), abs(z2), 1.0)
    if abs(z1.real - z2.real) <= 1e-12 * scale:
        t = np.linspace(0.0, 1.0, n)
        return z1 + t * (z2 - z1)
    x = (abs(z2) ** 2 - abs(z1) ** 2) / (2.0 * (z2.real - z1.real))
    t1 = np.angle(z1 - x)
    t2 = np.angle(z2 - x)
    theta = np.linspace(t1, t2, n)
    r = abs(z1 - x)
    out = x + r * np.exp(1j * theta)
    out[0], out[-1] = z1, z2
    return out


def circ_center(z1: complex, z2: complex) -> float:
    """Real center of the circle through z1 and z2 (distinct real parts)."""
    return (abs(z2) ** 2 - abs(z1) ** 2) / (2.0 * (z2.real - z1.real))


def to_klein(z: np.ndarray) -> np.ndarray:
    """Upper half plane -> Poincare disk -> Klein disk."""
    w = (z - 1j) / (z + 1j)
    return 2.0 * w / (1.0 + np.abs(w) ** 2)


def from_klein(k: np.ndarray) -> np.ndarray:
    mag2 = np.clip(np.abs(k) ** 2, 0.0, 1.0)
    w = k / (1.0 + np.sqrt(1.0 - mag2))
    return 1j * (1.0 + w) / (1.0 - w)


def hull_ring(points: np.ndarray, samples_per_edge: int = 64) -> np.ndarray | None:
    """Closed boundary ring of the h-convex hull of upper-half-plane points.

    Input points are reflected into the closed upper half plane; real points
    are lifted slightly so they act as ideal points of the disk models.
    Returns None when the hull is degenerate (all points collinear on the
    real axis).
    """
    z = np.asarray(points, dtype=complex)
    z = z[np.isfinite(z)]
    if len(z) == 0:
        raise ValueError("empty point set")
    z = np.where(z.imag < 0.0, np.conj(z), z)
    z = np.where(z.imag < _LIFT, z.real + 1j * _LIFT, z)
    if len(z) < 3:
        return None

    k = to_klein(z)
    pts = np.column_stack([k.real, k.imag])
    try:
        hull = ConvexHull(pts)
    except QhullError:
        try:
            hull = ConvexHull(pts, qhull_options="QJ")
        except QhullError:
            return None
    verts = hull.vertices          # counterclockwise
    zh = z[verts]
    if np.max(zh.imag) <= 4.0 * _LIFT:
        return None

    ring = []
    m = len(zh)
    for i in range(m):
        a, b = zh[i], zh[(i + 1) % m]
        seg = arc_min(a, b, n=samples_per_edge)
        ring.append(seg[:-1])
    ring = np.concatenate(ring)
    # clamp the lifted boundary back onto the real axis
    ring = np.where(ring.imag <= 4.0 * _LIFT, ring.real + 0.0j, ring)
    return ring
