"""Conic wave functions xi(r, t) and their unitary propagation.

A conic wave carries complex amplitude samples on a uniform grid of the
signed horizontal offset r from a cone vertex (r runs across the vertex
onto the rising flank, so negative r is allowed).  The free generator
H = -(hbar^2 / 2m) d^2/dr^2 advances the wave from one conic surface to
the next; time stepping uses the Cayley (implicit midpoint) form

    (1 + i dt H / 2 hbar) xi_next = (1 - i dt H / 2 hbar) xi,

which conserves the discrete norm to round-off.  The hot stepping loop
lives in a compiled kernel when available, with a NumPy/SciPy fallback
selected at import time (set QRULESIM_PURE_PYTHON=1 to force the
fallback).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .geometry import Event


def _load_kernel():
    if not os.environ.get("QRULESIM_PURE_PYTHON"):
        try:
            from . import _cayley

            return _cayley, True
        except ImportError:
            pass
    from . import _cayley_py

    return _cayley_py, False


_kernel, USING_COMPILED_KERNEL = _load_kernel()

NORM_DRIFT_TOL = 1e-6
_EDGE_FRACTION = 0.05
_EDGE_MASS_TOL = 1e-9
_SPECTRAL_MASS = 1e-8


class WaveError(ValueError):
    """Base class for conic-wave failures."""


class GridMismatch(WaveError):
    """A grid cannot hold the requested support or does not align."""


class NormDrift(WaveError):
    """Relative norm change beyond tolerance after stepping."""


class UnresolvedWave(WaveError):
    """The grid does not resolve the wave (spectral or edge check failed)."""


@dataclass(frozen=True)
class SliceWave:
    """Amplitude samples psi(x) on a horizontal t = t0 slice."""

    x0: float
    dx: float
    amplitudes: np.ndarray
    t0: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitudes", _frozen_complex(self.amplitudes))
        if self.dx <= 0 or not math.isfinite(self.dx):
            raise ValueError("dx must be positive and finite")

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(len(self.amplitudes))

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.dx)


@dataclass(frozen=True)
class ConicWave:
    """Amplitude samples xi(r) on the backward cone of ``vertex``."""

    vertex: Event
    r0: float
    dr: float
    amplitudes: np.ndarray
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitudes", _frozen_complex(self.amplitudes))
        if self.dr <= 0 or not math.isfinite(self.dr):
            raise ValueError("dr must be positive and finite")
        if self.mass <= 0:
            raise ValueError("mass must be positive")

    @property
    def r(self) -> np.ndarray:
        return self.r0 + self.dr * np.arange(len(self.amplitudes))

    @property
    def norm(self) -> float:
        return qvalue(self)

    def mean_position(self) -> float:
        p = np.abs(self.amplitudes) ** 2
        total = np.sum(p)
        return float(np.sum(self.r * p) / total)

    def position_spread(self) -> float:
        p = np.abs(self.amplitudes) ** 2
        total = np.sum(p)
        mean = np.sum(self.r * p) / total
        return float(np.sqrt(np.sum((self.r - mean) ** 2 * p) / total))


def _frozen_complex(a) -> np.ndarray:
    arr = np.array(a, dtype=np.complex128, copy=True)
    if arr.ndim != 1:
        raise ValueError("amplitudes must be one-dimensional")
    arr.setflags(write=False)
    return arr


def qvalue(w: ConicWave) -> float:
    """Integrated square modulus sum(|xi|^2) dr."""
    return float(np.sum(np.abs(w.amplitudes) ** 2) * w.dr)


def map_to_cone(
    psi: SliceWave,
    vertex: Event,
    r_min: Optional[float] = None,
    r_max: Optional[float] = None,
    hbar: float = 1.0,
    mass: float = 1.0,
) -> ConicWave:
    """Relabel a horizontal slice onto the cone of ``vertex``.

    The shift is r = x - vertex.x (offsets are preserved sample for
    sample), so the norm is carried over exactly.  When a target r-range
    is given, its grid must align with the source spacing and hold the
    slice's support.
    """
    if abs(psi.t0 - vertex.t) > 1e-12 * max(1.0, abs(psi.t0)):
        raise GridMismatch(
            f"slice time {psi.t0} differs from vertex time {vertex.t}"
        )
    r_src = psi.x0 - vertex.x
    if r_min is None and r_max is None:
        return ConicWave(vertex, r_src, psi.dx, psi.amplitudes, hbar, mass)
    if r_min is None or r_max is None:
        raise GridMismatch("specify both r_min and r_max, or neither")
    n = int(round((r_max - r_min) / psi.dx)) + 1
    offset = (r_src - r_min) / psi.dx
    if abs(offset - round(offset)) > 1e-9:
        raise GridMismatch("target grid does not align with the slice spacing")
    k0 = int(round(offset))
    out = np.zeros(n, dtype=np.complex128)
    support = np.nonzero(psi.amplitudes)[0]
    for i in support:
        j = k0 + i
        if j < 0 or j >= n:
            raise GridMismatch("target grid cannot hold the slice's support")
        out[j] = psi.amplitudes[i]
    return ConicWave(vertex, r_min, psi.dx, out, hbar, mass)


def gaussian_packet(
    center: float,
    sigma0: float,
    momentum: float,
    r_min: float,
    r_max: float,
    n: int,
    vertex: Event = Event(0.0, 0.0),
    hbar: float = 1.0,
    mass: float = 1.0,
) -> ConicWave:
    """Normalized Gaussian with a plane-wave phase for the given momentum."""
    if sigma0 <= 0:
        raise ValueError("sigma0 must be positive")
    if r_max - r_min < 8 * sigma0:
        raise GridMismatch("grid must span at least 8 sigma0")
    if not (r_min + 2 * sigma0 <= center <= r_max - 2 * sigma0):
        raise GridMismatch("packet center too close to a grid edge")
    r = np.linspace(r_min, r_max, n)
    dr = r[1] - r[0]
    amp = np.exp(-((r - center) ** 2) / (4 * sigma0**2) + 1j * momentum * r)
    amp /= math.sqrt(float(np.sum(np.abs(amp) ** 2) * dr))
    return ConicWave(vertex, r_min, dr, amp, hbar, mass)


def default_time_step(w: ConicWave) -> float:
    """Accuracy heuristic for the second-order spatial operator."""
    return 0.25 * w.dr**2 * w.mass / w.hbar


def propagate(w: ConicWave, dt: float, n_steps: int) -> ConicWave:
    """Advance the wave by n_steps * dt of conic time.

    The vertex event moves up in time accordingly.  Raises
    UnresolvedWave when the grid cannot resolve the wave's spectral
    content (fewer than 8 points per shortest wavelength) or when
    support reaches the outer 5% of the grid; raises NormDrift when the
    discrete norm moves by more than 1e-6 relative.
    """
    if dt <= 0 or not math.isfinite(dt):
        raise ValueError("dt must be positive and finite")
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    if n_steps == 0:
        return w
    _check_resolved(w)
    _check_edges(w)
    norm0 = qvalue(w)
    mu = w.hbar * dt / (4.0 * w.mass * w.dr**2)
    xi = np.array(w.amplitudes, dtype=np.complex128, copy=True)
    _kernel.advance(xi, 1.0 + 2j * mu, -1j * mu, 1.0 - 2j * mu, 1j * mu, n_steps)
    out = replace(
        w,
        vertex=Event(w.vertex.x, w.vertex.t + n_steps * dt),
        amplitudes=xi,
    )
    norm1 = qvalue(out)
    if norm0 > 0 and abs(norm1 - norm0) / norm0 > NORM_DRIFT_TOL:
        raise NormDrift(
            f"norm drifted from {norm0} to {norm1} over {n_steps} steps"
        )
    _check_edges(out)
    return out


def _check_resolved(w: ConicWave) -> None:
    """Require at least 8 grid points per shortest wavelength present."""
    n = len(w.amplitudes)
    power = np.abs(np.fft.fft(w.amplitudes)) ** 2
    total = float(np.sum(power))
    if total == 0.0:
        return
    k = 2 * math.pi * np.fft.fftfreq(n, d=w.dr)
    order = np.argsort(np.abs(k))
    cum = np.cumsum(power[order])
    idx = int(np.searchsorted(cum, (1.0 - _SPECTRAL_MASS) * total))
    idx = min(idx, n - 1)
    k_max = float(np.abs(k[order][idx]))
    if k_max * w.dr > 2 * math.pi / 8:
        raise UnresolvedWave(
            f"spectral content up to |k| = {k_max:.4g} needs dr < "
            f"{2 * math.pi / (8 * k_max):.4g}, grid has dr = {w.dr:.4g}"
        )


def _check_edges(w: ConicWave) -> None:
    """Hard-wall guard: support must stay clear of the outer 5% of the grid."""
    n = len(w.amplitudes)
    edge = max(1, int(_EDGE_FRACTION * n))
    p = np.abs(w.amplitudes) ** 2
    total = float(np.sum(p))
    if total == 0.0:
        return
    edge_mass = float(np.sum(p[:edge]) + np.sum(p[-edge:]))
    if edge_mass / total > _EDGE_MASS_TOL:
        raise UnresolvedWave(
            f"wave support reaches the grid edges (edge mass fraction "
            f"{edge_mass / total:.3g})"
        )


def dispersion_spread(sigma0: float, t: float, hbar: float = 1.0, mass: float = 1.0) -> float:
    """Analytic free-packet spread sigma(t) = sigma0 sqrt(1 + (hbar t / 2 m sigma0^2)^2)."""
    return sigma0 * math.sqrt(1.0 + (hbar * t / (2.0 * mass * sigma0**2)) ** 2)
