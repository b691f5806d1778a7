"""Simultaneous polynomial root finding (Durand-Kerner iteration)."""

from __future__ import annotations

import numpy as np


class RootConvergenceError(RuntimeError):
    pass


def polyval_ascending(coeffs: np.ndarray, z):
    """Evaluate sum coeffs[k] * z**k (Horner, ascending coefficients)."""
    acc = np.zeros_like(np.asarray(z, dtype=complex))
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def durand_kerner(coeffs, tol: float = 1e-12, max_iter: int = 1000,
                  seed: int = 12345) -> np.ndarray:
    """All complex roots of a polynomial with ascending coefficients.

    Runs the Weierstrass/Durand-Kerner simultaneous iteration from a scaled
    circle of initial guesses; on stagnation the guesses are re-perturbed and
    the iteration restarted.  Raises RootConvergenceError if the update norm
    never falls below ``tol``.
    """
    c = np.asarray(coeffs, dtype=complex)
    # strip trailing (high-order) zeros
    nz = np.nonzero(np.abs(c) > 0)[0]
    if len(nz) == 0:
        raise ValueError("zero polynomial has no well-defined roots")
    c = c[: nz[-1] + 1]
    n = len(c) - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return np.array([-c[0] / c[1]], dtype=complex)

    monic = c / c[-1]
    # Cauchy bound on root moduli
    radius = 1.0 + float(np.max(np.abs(monic[:-1])))
    rng = np.random.default_rng(seed)

    for attempt in range(4):
        angles = 2.0 * np.pi * (np.arange(n) + 0.25) / n
        z = radius * np.exp(1j * angles)
        if attempt > 0:
            z = z * (1.0 + 0.1 * rng.standard_normal(n)) + \
                0.1 * radius * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        prev_step = np.inf
        for _ in range(max_iter):
            p = polyval_ascending(monic, z)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            denom = np.prod(diff, axis=1)
            bad = np.abs(denom) < 1e-300
            if np.any(bad):
                z = z + 1e-8 * radius * np.exp(2j * np.pi * rng.random(n))
                continue
            step = p / denom
            z = z - step
            norm = float(np.max(np.abs(step)))
            if norm < tol * max(1.0, radius):
                return _polish(monic, z)
            if norm > 1e12 * radius or not np.isfinite(norm):
                break
            prev_step = norm
        if prev_step < 1e-6 * max(1.0, radius):
            return _polish(monic, z)
    raise RootConvergenceError(
        f"Durand-Kerner did not converge for degree {n} after {max_iter} iterations")


def _polish(monic: np.ndarray, z: np.ndarray) -> np.ndarray:
    """A few Newton steps per root, then snap conjugate pairs / real roots."""
    dcoef = monic[1:] * np.arange(1, len(monic))
    for _ in range(3):
        p = polyval_ascending(monic, z)
        dp = polyval_ascending(dcoef, z)
        safe = np.abs(dp) > 1e-300
        z = np.where(safe, z - p / np.where(safe, dp, 1.0), z)
    # real-coefficient polynomials: tiny imaginary parts are numerical noise
    scale = np.maximum(np.abs(z), 1.0)
    z = np.where(np.abs(z.imag) < 1e-10 * scale, z.real + 0j, z)
    return np.sort_complex(z)
