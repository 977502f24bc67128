"""Antenna arrays: element layouts, radiation pattern, steering vectors.

Array elements live on a wall-mounted plane (see :class:`geometry.Plane`) on
a uniform grid with configurable spacing (default half-wavelength). Element
``(i_h, i_v)`` sits at in-plane offset ``(i_h * s, i_v * s)`` from the
reference corner element, and flattens to index ``i_h * n_v + i_v``, so a
vertical column is contiguous and a uniform linear array is the ``n_v = 1``
row along the horizontal axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DirectionAngles, Plane, SurfaceOrientation, direction_unit

__all__ = [
    "ArrayGeometry",
    "ElementPattern",
    "element_gain",
    "steering_vector",
    "steering_matrix",
    "reflection_matrix",
]


@dataclass(frozen=True)
class ArrayGeometry:
    """A planar uniform array: grid shape, spacing, mounting plane.

    ``spacing_wavelengths`` scales with the carrier, so one geometry object
    is valid at any frequency; physical spacing comes out of
    :meth:`spacing_m`.
    """

    n_h: int
    n_v: int = 1
    spacing_wavelengths: float = 0.5
    orientation: SurfaceOrientation = SurfaceOrientation(Plane.YZ)

    def __post_init__(self) -> None:
        if self.n_h < 1 or self.n_v < 1:
            raise ValueError(f"array grid must be >= 1 in both axes, got {self.n_h}x{self.n_v}")
        if self.spacing_wavelengths <= 0:
            raise ValueError(f"spacing_wavelengths must be > 0, got {self.spacing_wavelengths!r}")

    @property
    def size(self) -> int:
        return self.n_h * self.n_v

    def spacing_m(self, wavelength: float) -> float:
        return self.spacing_wavelengths * wavelength

    def element_offsets(self, wavelength: float) -> np.ndarray:
        """(size, 3) world-frame offsets of each element from the corner."""
        s = self.spacing_m(wavelength)
        ih = np.repeat(np.arange(self.n_h), self.n_v)
        iv = np.tile(np.arange(self.n_v), self.n_h)
        out = np.zeros((self.size, 3))
        if self.orientation.plane is Plane.XZ:
            out[:, 0] = ih * s
        else:
            out[:, 1] = ih * s
        out[:, 2] = iv * s
        return out

    def element_centers(self, wavelength: float, center: np.ndarray) -> np.ndarray:
        """(size, 3) absolute element positions for a panel centered on
        ``center`` (used by near-field models where the absolute grid
        matters; steering phases are unaffected by the shift)."""
        offsets = self.element_offsets(wavelength)
        return np.asarray(center, dtype=float) + offsets - offsets.mean(axis=0)


@dataclass(frozen=True)
class ElementPattern:
    """Cosine-power element pattern, G(psi) = 2 (2q + 1) cos(psi)^(2q).

    Radiation is confined to the front hemisphere (zero for psi > pi/2);
    the normalization makes the pattern integrate to exactly 4 pi over the
    sphere for every q >= 0, i.e. it redistributes rather than creates
    power. The default q gives a ~5 dBi boresight element.
    """

    q: float = 0.285

    def __post_init__(self) -> None:
        if self.q < 0:
            raise ValueError(f"pattern exponent q must be >= 0, got {self.q!r}")

    @property
    def boresight_gain(self) -> float:
        return 2.0 * (2.0 * self.q + 1.0)


def element_gain(pattern: ElementPattern, boresight_angle) -> np.ndarray:
    """Pattern gain at angle(s) from the element normal; 0 behind."""
    psi = np.asarray(boresight_angle, dtype=float)
    front = psi <= math.pi / 2
    c = np.where(front, np.cos(np.where(front, psi, 0.0)), 0.0)
    g = np.where(front, pattern.boresight_gain * c ** (2.0 * pattern.q), 0.0)
    return g if g.ndim else float(g)

def steering_matrix(
    geometry: ArrayGeometry, azimuth, elevation, wavelength: float
) -> np.ndarray:
    """Unit-magnitude array responses, one column per direction.

    Phase of element p toward direction u is (2 pi / lambda) <offset_p, u>;
    returns shape (size, M) for M directions (or (size,) for scalars).
    """
    az = np.atleast_1d(np.asarray(azimuth, dtype=float))
    el = np.atleast_1d(np.asarray(elevation, dtype=float))
    if az.shape != el.shape:
        raise ValueError(f"azimuth/elevation shapes differ: {az.shape} vs {el.shape}")
    u = direction_unit(az, el)  # (M, 3)
    phase = (2.0 * math.pi / wavelength) * geometry.element_offsets(wavelength) @ u.T
    a = np.exp(1j * phase)
    if np.isscalar(azimuth) or np.asarray(azimuth).ndim == 0:
        return a[:, 0]
    return a

def steering_vector(
    geometry: ArrayGeometry, angles: DirectionAngles, wavelength: float
) -> np.ndarray:
    """Array response toward one direction, shape (size,)."""
    return steering_matrix(geometry, angles.azimuth, angles.elevation, wavelength)

def reflection_matrix(phases) -> np.ndarray:
    """Diagonal unit-modulus reflection matrix from a phase vector.

    Accepts a plain array of radians or any object with a ``phases``
    attribute (see :class:`rischan.control.RisPhaseConfig`).
    """
    phi = np.asarray(getattr(phases, "phases", phases), dtype=float)
    if phi.ndim != 1:
        raise ValueError(f"phases must be a 1-d vector, got shape {phi.shape}")
    return np.diag(np.exp(1j * phi))
