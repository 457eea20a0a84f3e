"""Scene description and incident-field expansion.

Geometry: a circular impedance sheet of radius ``radius`` sits at the
origin.  A transmitting aperture of halfwidth ``aperture_halfwidth`` is
centered at distance ``source_distance`` from the origin at azimuth
``source_angle``, boresight aimed at the cylinder and then rotated by
``misalignment``.  The aperture is discretized into ``aperture_samples``
equally spaced 2-D line sources with a cosine amplitude taper
(normalized to unit total amplitude); halfwidth 0 collapses to a single
omnidirectional line source.

Conventions (shared by every module downstream): time dependence
e^{+i omega t}, outgoing waves carried by the Hankel function of the
second kind, sheet admittance stored normalized by the free-space wave
impedance (y = Y * eta0).  Re[y] > 0 absorbs, Re[y] < 0 pumps,
Im[y] > 0 is dielectric-like, Im[y] < 0 plasmonic-like.
"""

from __future__ import annotations

import cmath
import enum
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceError
from . import specfun

ETA0 = 376.730313668  # free-space wave impedance, ohms

TAIL_RATIO_LIMIT = 1e-10
MAX_TRUNCATION = 256


@dataclass(frozen=True)
class Scene:
    """Physical configuration of one illumination problem (SI units)."""

    wavelength: float = 0.1
    radius: float = 0.05
    source_distance: float = 1.0
    aperture_halfwidth: float = 0.025  # quarter wavelength of the reference setup
    misalignment: float = 0.0
    source_angle: float = math.pi / 2
    admittance: complex = 0j
    polarization: str = "TM"
    aperture_samples: int = 9

    def __post_init__(self):
        if self.wavelength <= 0.0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        if self.radius <= 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.source_distance <= self.radius:
            raise ValueError("source must lie outside the cylinder")
        if self.aperture_halfwidth < 0.0:
            raise ValueError("aperture halfwidth cannot be negative")
        if self.polarization not in ("TM", "TE"):
            raise ValueError(f"polarization must be 'TM' or 'TE', got {self.polarization!r}")
        if self.aperture_samples < 1:
            raise ValueError("need at least one aperture sample")
        if not (math.isfinite(self.admittance.real) and math.isfinite(self.admittance.imag)):
            raise ValueError("admittance must be finite")
        radii = np.hypot(*source_points(self)[:2])
        if np.min(radii) <= self.radius:
            raise ValueError("aperture extends into the cylinder")

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def size_parameter(self) -> float:
        """k0 * radius, the electrical size of the cylinder."""
        return self.wavenumber * self.radius

    def with_admittance(self, y: complex) -> "Scene":
        return replace(self, admittance=complex(y))

    def to_json(self) -> str:
        return json.dumps(scene_to_dict(self), indent=2, sort_keys=True)


def scene_to_dict(scene: Scene) -> dict:
    return {
        "lambda_m": scene.wavelength,
        "radius_m": scene.radius,
        "source_distance_m": scene.source_distance,
        "aperture_halfwidth_m": scene.aperture_halfwidth,
        "misalignment_rad": scene.misalignment,
        "source_angle_rad": scene.source_angle,
        "admittance_re": scene.admittance.real,
        "admittance_im": scene.admittance.imag,
        "polarization": scene.polarization,
    }


def scene_from_dict(doc: dict) -> Scene:
    try:
        return Scene(
            wavelength=float(doc["lambda_m"]),
            radius=float(doc["radius_m"]),
            source_distance=float(doc["source_distance_m"]),
            aperture_halfwidth=float(doc["aperture_halfwidth_m"]),
            misalignment=float(doc["misalignment_rad"]),
            source_angle=float(doc["source_angle_rad"]),
            admittance=complex(float(doc["admittance_re"]), float(doc["admittance_im"])),
            polarization=str(doc["polarization"]),
            aperture_samples=int(doc.get("aperture_samples", 9)),
        )
    except KeyError as exc:
        raise ValueError(f"scene document missing key {exc}") from exc


def scene_from_json(text: str) -> Scene:
    return scene_from_dict(json.loads(text))


def source_points(scene: Scene):
    """(x, y, amplitude) arrays of the discretized aperture.

    Sample amplitudes follow a cosine taper over the aperture and are
    normalized to unit sum, so shrinking the halfwidth to zero reproduces
    a single unit line source exactly.
    """
    cx = scene.source_distance * math.cos(scene.source_angle)
    cy = scene.source_distance * math.sin(scene.source_angle)
    d = scene.aperture_halfwidth
    m = scene.aperture_samples
    if d == 0.0 or m == 1:
        return np.array([cx]), np.array([cy]), np.array([1.0])
    boresight = scene.source_angle + math.pi + scene.misalignment
    tangent = boresight + 0.5 * math.pi
    xi = np.linspace(-d, d, m)
    amp = np.cos(0.5 * math.pi * xi / d)
    amp = amp / amp.sum()
    return cx + xi * math.cos(tangent), cy + xi * math.sin(tangent), amp


@dataclass(eq=False, frozen=True)
class ModalCoefficients:
    """Coefficients c_n for n = -truncation .. truncation.

    ``values[i]`` holds the order ``i - truncation``.  ``tail_ratio`` is
    the boundary-weighted convergence certificate
    max(|c_{+-N} J_{+-N}(k a)|) / max_n |c_n J_n(k a)| recorded when the
    expansion was built.
    """

    values: np.ndarray
    truncation: int
    tail_ratio: float

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.truncation, self.truncation + 1)

    def coeff(self, n: int) -> complex:
        if abs(n) > self.truncation:
            return 0.0 + 0.0j
        return complex(self.values[n + self.truncation])


def _incident_for_truncation(scene: Scene, n_max: int) -> np.ndarray:
    sx, sy, amp = source_points(scene)
    rho = np.hypot(sx, sy)
    alpha = np.arctan2(sy, sx)
    k = scene.wavenumber
    orders = np.arange(-n_max, n_max + 1)
    parity = np.where((orders < 0) & (np.abs(orders) % 2 == 1), -1.0, 1.0)
    coeffs = np.zeros(2 * n_max + 1, dtype=complex)
    for r, a, w in zip(rho, alpha, amp):
        h = specfun.hankel2_seq(n_max, k * r)
        coeffs += w * parity * h[np.abs(orders)] * np.exp(-1j * orders * a)
    return coeffs


def incident_coefficients(scene: Scene, truncation: int | None = None,
                          certify_radius: float | None = None) -> ModalCoefficients:
    """Incident-field expansion about the origin, E/H_z = sum B_n J_n(kr) e^{in phi}.

    Each line source enters through the addition theorem
    H_0^(2)(k|r - r_s|) = sum_n J_n(kr) H_n^(2)(k rho_s) e^{in(phi - phi_s)},
    valid for r below the smallest source radius.  The truncation starts
    at ceil(k a) + 15 and doubles until the boundary-weighted tail ratio
    drops under 1e-10 (cap 256); an explicit ``truncation`` skips the
    doubling but still records the achieved certificate.
    """
    k = scene.wavenumber
    r_cert = scene.radius if certify_radius is None else certify_radius
    if truncation is not None:
        n = int(truncation)
        coeffs = _incident_for_truncation(scene, n)
        return ModalCoefficients(coeffs, n, _tail_ratio(coeffs, n, k * r_cert))
    n = int(math.ceil(scene.size_parameter)) + 15
    while True:
        n = min(n, MAX_TRUNCATION)
        coeffs = _incident_for_truncation(scene, n)
        ratio = _tail_ratio(coeffs, n, k * r_cert)
        if ratio <= TAIL_RATIO_LIMIT:
            return ModalCoefficients(coeffs, n, ratio)
        if n >= MAX_TRUNCATION:
            raise ConvergenceError(
                f"incident expansion not certified at N={n} "
                f"(tail ratio {ratio:.3e} > {TAIL_RATIO_LIMIT:.0e})",
                tail_ratio=ratio,
            )
        n *= 2


def _tail_ratio(coeffs: np.ndarray, n_max: int, x_cert: float) -> float:
    j = specfun.bessel_j_seq(n_max, x_cert)
    orders = np.arange(-n_max, n_max + 1)
    weighted = np.abs(coeffs) * np.abs(j[np.abs(orders)])
    peak = float(weighted.max())
    if peak == 0.0:
        return 0.0
    return float(max(weighted[0], weighted[-1]) / peak)


class LossClass(enum.Enum):
    PASSIVE = "passive"
    ACTIVE = "active"
    LOSSLESS = "lossless"


class ReactiveClass(enum.Enum):
    DIELECTRIC = "dielectric"
    PLASMONIC = "plasmonic"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class AdmittanceClass:
    loss: LossClass
    reactive: ReactiveClass


def classify_admittance(y: complex, tol: float = 1e-12) -> AdmittanceClass:
    """Loss/reactive classification of a normalized sheet admittance."""
    scale = max(1.0, abs(y))
    if abs(y.real) <= tol * scale:
        loss = LossClass.LOSSLESS
    elif y.real > 0:
        loss = LossClass.PASSIVE
    else:
        loss = LossClass.ACTIVE
    if abs(y.imag) <= tol * scale:
        reactive = ReactiveClass.NEUTRAL
    elif y.imag > 0:
        reactive = ReactiveClass.DIELECTRIC
    else:
        reactive = ReactiveClass.PLASMONIC
    return AdmittanceClass(loss, reactive)


def lambertian_gain(theta):
    """cos(theta) clipped to zero beyond +/- pi/2 off the emitter normal."""
    return np.clip(np.cos(theta), 0.0, None)


def equivalent_slab_permittivity(y: complex, thickness: float, wavelength: float) -> complex:
    """Relative permittivity of the thin slab equivalent to sheet admittance y.

    eps - 1 = y / (i k0 g) for slab thickness g; purely reactive sheets map
    to real permittivities (dielectric for Im[y] > 0).
    """
    if thickness <= 0.0:
        raise ValueError("slab thickness must be positive")
    if wavelength <= 0.0:
        raise ValueError("wavelength must be positive")
    k0 = 2.0 * math.pi / wavelength
    return 1.0 + complex(y) / (1j * k0 * thickness)


def slab_equivalent_admittance(epsilon: complex, thickness: float, wavelength: float) -> complex:
    """Inverse of :func:`equivalent_slab_permittivity`."""
    if thickness <= 0.0:
        raise ValueError("slab thickness must be positive")
    if wavelength <= 0.0:
        raise ValueError("wavelength must be positive")
    k0 = 2.0 * math.pi / wavelength
    return 1j * k0 * thickness * (complex(epsilon) - 1.0)
