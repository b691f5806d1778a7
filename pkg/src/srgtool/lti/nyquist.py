"""Nyquist curves along the D-contour, winding numbers and the criterion.

The D-contour runs from -jR to +jR along the imaginary axis and closes with
the arc R*exp(j*phi), phi from pi/2 to -pi/2.  Poles on the imaginary axis
are kept to the left of the contour by small right indentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import DEFAULT_GEOMETRY, GeometryConfig
from .tf import TransferFunction


class WindingError(RuntimeError):
    """The probe point is too close to the curve for a reliable winding count."""


class MarginalStabilityError(RuntimeError):
    pass


class NotStableError(ValueError):
    pass


# contour segment kinds
_AXIS = 0        # s = j*param
_INDENT = 1      # s = j*w0 + rho*exp(j*param)
_BIGARC = 2      # s = R*exp(j*param)


@dataclass
class _Segment:
    kind: int
    a: float            # parameter start
    b: float            # parameter end
    w0: float = 0.0     # indent centre frequency
    rho: float = 0.0    # indent radius / big-arc radius

    def eval_s(self, param: np.ndarray) -> np.ndarray:
        if self.kind == _AXIS:
            return 1j * param
        if self.kind == _INDENT:
            return 1j * self.w0 + self.rho * np.exp(1j * param)
        return self.rho * np.exp(1j * param)


@dataclass
class NyquistCurve:
    """Image of the D-contour, ordered and closed."""

    samples: np.ndarray                 # complex image points
    spoints: np.ndarray                 # contour locations in the s-plane
    seg_ids: np.ndarray                 # segment index per sample
    params: np.ndarray                  # segment parameter per sample
    segments: list = field(default_factory=list)
    indentations: list = field(default_factory=list)   # indented pole locations
    closed: bool = True
    tf: TransferFunction | None = None

    @property
    def frequencies(self) -> np.ndarray:
        """The D-contour parameter, reported as Im(s)."""
        return self.spoints.imag

    def finite_scale(self) -> float:
        """Robust magnitude scale of the curve (ignores blown-up tails)."""
        mags = np.abs(self.samples)
        mags = mags[np.isfinite(mags)]
        if len(mags) == 0:
            return 1.0
        return float(np.percentile(mags, 90)) or 1.0

    def refine_between(self, mask: np.ndarray) -> int:
        """Insert parameter midpoints where mask[i] marks gap (i, i+1).

        Only gaps interior to one segment are refined.  Returns the number of
        points inserted.
        """
        if self.tf is None:
            return 0
        idx = np.nonzero(mask)[0]
        idx = idx[self.seg_ids[idx] == self.seg_ids[idx + 1]]
        if len(idx) == 0:
            return 0
        mid_param = 0.5 * (self.params[idx] + self.params[idx + 1])
        seg = self.seg_ids[idx]
        new_s = np.empty(len(idx), dtype=complex)
        for sid in np.unique(seg):
            sel = seg == sid
            new_s[sel] = self.segments[sid].eval_s(mid_param[sel])
        new_val = self.tf(new_s)
        pos = idx + 1
        self.samples = np.insert(self.samples, pos, new_val)
        self.spoints = np.insert(self.spoints, pos, new_s)
        self.seg_ids = np.insert(self.seg_ids, pos, seg)
        self.params = np.insert(self.params, pos, mid_param)
        return len(idx)


def _log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.logspace(np.log10(lo), np.log10(hi), n)


def nyquist_curve(f: TransferFunction,
                  cfg: GeometryConfig = DEFAULT_GEOMETRY) -> NyquistCurve:
    """Sample f along the D-contour with adaptive refinement."""
    rho = cfg.indent_radius
    R = cfg.closure_radius
    imag_poles = f.imag_axis_poles(cfg)
    pole_ws = sorted({round(abs(p.imag), 12) for p in imag_poles})
    has_origin_pole = len(pole_ws) > 0 and pole_ws[0] <= rho
    pos_pole_ws = [w for w in pole_ws if w > rho]

    segments: list[_Segment] = []

    def add_axis(w_lo: float, w_hi: float, n: int):
        if w_hi <= w_lo:
            return
        segments.append(_Segment(_AXIS, w_lo, w_hi))
        if w_lo > 0 and w_hi > 0:
            grid = _log_grid(w_lo, w_hi, n)
        elif w_lo < 0 and w_hi < 0:
            grid = -_log_grid(-w_lo, -w_hi, n)
        else:
            grid = np.linspace(w_lo, w_hi, n)
        base_params.append(grid)
        base_ids.append(np.full(len(grid), len(segments) - 1))

    def add_indent(w0: float):
        segments.append(_Segment(_INDENT, -np.pi / 2, np.pi / 2, w0=w0, rho=rho))
        grid = np.linspace(-np.pi / 2, np.pi / 2, cfg.arc_samples)
        base_params.append(grid)
        base_ids.append(np.full(len(grid), len(segments) - 1))

    base_params: list[np.ndarray] = []
    base_ids: list[np.ndarray] = []

    # breakpoints along the positive imaginary axis
    stops = [(w - rho, w + rho) for w in pos_pole_ws]
    n_decades = max(np.log10(R / cfg.omega_min), 1.0)

    def axis_points(lo, hi):
        decades = np.log10(max(hi, 1e-300) / max(lo, 1e-300))
        return max(48, int(cfg.omega_points * decades / n_decades))

    # negative axis, from -R upwards (mirror of the positive structure)
    neg_breaks = [(-hi, -lo) for (lo, hi) in reversed(stops)]
    w_start = -R
    for (lo, hi) in neg_breaks:
        add_axis(w_start, lo, axis_points(-lo, -w_start))
        add_indent((lo + hi) / 2.0)
        w_start = hi
    if has_origin_pole:
        add_axis(w_start, -rho, axis_points(rho, -w_start))
        add_indent(0.0)
        w_start = rho
    else:
        add_axis(w_start, -cfg.omega_min, axis_points(cfg.omega_min, -w_start))
        # bridge across omega = 0 where the image is continuous
        segments.append(_Segment(_AXIS, -cfg.omega_min, cfg.omega_min))
        grid = np.linspace(-cfg.omega_min, cfg.omega_min, 33)
        base_params.append(grid)
        base_ids.append(np.full(len(grid), len(segments) - 1))
        w_start = cfg.omega_min
    for (lo, hi) in stops:
        add_axis(w_start, lo, axis_points(w_start, lo))
        add_indent((lo + hi) / 2.0)
        w_start = hi
    add_axis(w_start, R, axis_points(w_start, R))

    # closing arc through the right half plane
    segments.append(_Segment(_BIGARC, np.pi / 2, -np.pi / 2, rho=R))
    grid = np.linspace(np.pi / 2, -np.pi / 2, cfg.arc_samples)
    base_params.append(grid)
    base_ids.append(np.full(len(grid), len(segments) - 1))

    params = np.concatenate(base_params)
    seg_ids = np.concatenate(base_ids).astype(int)
    spoints = np.empty(len(params), dtype=complex)
    for sid, seg in enumerate(segments):
        sel = seg_ids == sid
        spoints[sel] = seg.eval_s(params[sel])
    samples = f(spoints)

    curve = NyquistCurve(samples=samples, spoints=spoints, seg_ids=seg_ids,
                         params=params, segments=segments,
                         indentations=[1j * w for w in pole_ws], tf=f)
    _adaptive_refine(curve, cfg)
    return curve


def _adaptive_refine(curve: NyquistCurve, cfg: GeometryConfig):
    scale = curve.finite_scale()
    lo = scale * 1e-4
    hi = scale * 10.0
    while len(curve.samples) < cfg.refine_max_points:
        z = curve.samples
        d = np.abs(np.diff(z))
        local = np.minimum(np.abs(z[:-1]), np.abs(z[1:]))
        local = np.clip(local, lo, hi)
        mask = d > cfg.refine_rel * local
        if not np.any(mask) or curve.refine_between(mask) == 0:
            break


def winding_number(curve: NyquistCurve, z: complex,
                   cfg: GeometryConfig = DEFAULT_GEOMETRY) -> int:
    """Clockwise encirclements of z by the curve.

    Raises WindingError when z sits on (or numerically too close to) the
    curve, after trying local refinement.
    """
    for _ in range(24):
        v = curve.samples - z
        if curve.closed:
            v = np.concatenate([v, v[:1]])
        mags = np.abs(v)
        if np.min(mags) == 0.0:
            raise WindingError(f"probe point {z} lies on the curve")
        dang = np.angle(v[1:] / v[:-1])
        bad = np.abs(dang) > 0.5 * np.pi
        if not np.any(bad):
            total = float(np.sum(dang))
            w = -total / (2.0 * np.pi)
            n = int(round(w))
            if abs(w - n) > cfg.winding_frac_tol:
                raise WindingError(
                    f"ill-conditioned winding at {z}: fractional part {w - n:.3f}")
            return n
        if curve.refine_between(bad[: len(curve.samples) - 1]) == 0:
            # cannot refine further (segment joints); accept if mild
            total = float(np.sum(dang))
            w = -total / (2.0 * np.pi)
            n = int(round(w))
            if abs(w - n) > cfg.winding_frac_tol:
                raise WindingError(
                    f"ill-conditioned winding at {z}: fractional part {w - n:.3f}")
            return n
    raise WindingError(f"winding refinement did not settle near {z}")


def nyquist_criterion(L: TransferFunction,
                      cfg: GeometryConfig = DEFAULT_GEOMETRY) -> dict:
    """Closed-loop stability of unit feedback around L: n_z = n_n + n_p."""
    curve = nyquist_curve(L, cfg)
    n_p = L.unstable_pole_count(cfg)
    gap = float(np.min(np.abs(curve.samples + 1.0)))
    if gap < cfg.band(curve.finite_scale()):
        raise MarginalStabilityError(
            f"Nyquist curve passes through -1 (clearance {gap:.3g})")
    n_n = winding_number(curve, -1.0 + 0.0j, cfg)
    n_z = n_n + n_p
    return {"n_p": n_p, "n_n": n_n, "n_z": n_z, "stable": n_z == 0, "curve": curve}
