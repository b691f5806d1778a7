"""Shared numeric defaults for geometry, frequency sweeps and simulation.

Every tolerance that the library relies on lives here so that callers can
override a single object instead of chasing keyword arguments through the
stack.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class GeometryConfig:
    # boundary sampling
    boundary_samples: int = 2048        # samples per closed boundary curve
    interior_samples: int = 1200        # target size of interior fill clouds
    geom_tol: float = 1e-9              # tolerance for exact shapes (disks, points)
    clip_radius: float = 1e6            # working window is the square |Re|,|Im| <= clip_radius
    # membership band: one boundary-sample spacing unless overridden (<0 = auto)
    membership_band: float = -1.0

    # frequency grid for Nyquist sweeps
    omega_min: float = 1e-3
    omega_max: float = 1e4
    omega_points: int = 600             # base log-spaced points per sign of omega
    refine_rel: float = 0.01            # refine while image spacing exceeds this * local scale
    refine_max_points: int = 60000
    indent_radius: float = 1e-6         # right indentation around imaginary-axis poles
    closure_radius: float = 1e7         # big-R arc of the D-contour
    arc_samples: int = 512              # samples along indentations / the big arc

    # rational arithmetic
    cancel_tol: float = 1e-8            # pole/zero cancellation tolerance
    near_cancel_tol: float = 1e-4       # wider band reported as a diagnostic only
    degree_cap: int = 64
    root_tol: float = 1e-12
    root_max_iter: int = 1000
    pole_class_tol: float = 1e-9        # |Re p| below this counts as imaginary-axis

    # winding / faces
    winding_frac_tol: float = 0.1       # fractional part beyond this is ill-conditioned
    face_margin: float = 1.5            # face box = this * finite curve bounding box
    face_min_extent: float = 8.0        # face box always covers at least this square
    face_area_tol: float = 1e-12        # faces smaller than this (rel.) are ignored

    # set-operation sampling budgets
    paint_boundary: int = 360           # copies taken along an operand boundary when painting
    paint_inner_rings: int = 12         # inward offset rings used to fill product interiors
    simplify_rel: float = 2e-4          # polygon simplification, relative to region scale

    def band(self, scale: float) -> float:
        """Membership tolerance band for a region of the given diameter."""
        if self.membership_band >= 0:
            return self.membership_band
        if scale <= 0:
            return self.geom_tol
        return max(self.geom_tol, scale / self.boundary_samples)

    def with_(self, **kw) -> "GeometryConfig":
        return replace(self, **kw)


@dataclass(frozen=True)
class SimConfig:
    h: float = 1e-3                     # integrator step
    horizon: float = 100.0              # default simulation length (s)
    input_band: tuple = (1e-2, 1e2)     # sinusoid frequencies drawn from this band (rad/s)
    max_tones: int = 5
    tukey_alpha: float = 0.2
    blowup_norm: float = 1e9            # abort threshold on the state norm
    seed: int = 0

    def with_(self, **kw) -> "SimConfig":
        return replace(self, **kw)


DEFAULT_GEOMETRY = GeometryConfig()
DEFAULT_SIM = SimConfig()
