"""Secrecy-outage analysis wired to the coating's EM response.

Both receivers see Rayleigh fading, so the instantaneous SNRs are
exponential with means gamma_b, gamma_e.  The outage event compares the
unclipped capacity difference log2((1+g_b)/(1+g_e)) against the target
secrecy rate; clipping at zero would make every zero-rate curve trivial.
The closed form below integrates the exponential pair directly and is
cross-checked against two Monte Carlo routes in the tests.

Spatial maps couple the statistics to the boundary solver: the
eavesdropper's mean SNR at a point combines distance path loss with the
actual field intensity ratio (coated over bare) at that point, while the
legitimate receiver's gain comes from the angular coating-gain pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import mode_matching
from .errors import InfeasibleTargetError
from .scene import Scene, source_points

DEFAULT_PATH_LOSS_EXPONENT = 3.0
DEFAULT_REFERENCE_SNR = 1e6
DEFAULT_NOISE_DBM = -94.0
DEFAULT_BOB_RX_DBM = 10.0
DEFAULT_SOP_REGION = (-40.0, 40.0, -40.0, 40.0)
DEFAULT_SOP_RESOLUTION = (321, 321)
_MC_CHUNK = 1 << 20


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0.0:
        raise ValueError("dB conversion needs a positive ratio")
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class SecrecyLink:
    """Mean SNRs (linear) of the legitimate and intruder channels."""

    mean_snr_bob: float
    mean_snr_eve: float
    secrecy_rate: float = 0.0

    def __post_init__(self):
        if not self.mean_snr_bob > 0.0:
            raise ValueError("legitimate mean SNR must be positive")
        if not self.mean_snr_eve > 0.0:
            raise ValueError("intruder mean SNR must be positive")
        if self.secrecy_rate < 0.0:
            raise ValueError("secrecy rate cannot be negative")


@dataclass(frozen=True)
class LinkModel:
    """Distance-ratio model: bob SNR = gamma0 * gain_ratio * rho^-alpha."""

    gain_ratio: float = 1.0
    path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT
    reference_snr: float = DEFAULT_REFERENCE_SNR

    def __post_init__(self):
        if not self.gain_ratio > 0.0:
            raise ValueError("gain ratio must be positive")
        if not self.path_loss_exponent > 0.0:
            raise ValueError("path-loss exponent must be positive")
        if not self.reference_snr > 0.0:
            raise ValueError("reference SNR must be positive")


@dataclass(eq=False, frozen=True)
class GainPattern:
    """Coating gain at a feed point versus illumination angle."""

    angles: np.ndarray
    gains: np.ndarray

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        gains = np.asarray(self.gains, dtype=float)
        if angles.shape != gains.shape or angles.ndim != 1 or angles.size < 2:
            raise ValueError("pattern needs matching 1-D angle and gain arrays")
        if angles[0] != 0.0 or np.any(np.diff(angles) <= 0) or angles[-1] >= 2.0 * math.pi:
            raise ValueError("angles must increase from 0 within [0, 2 pi)")
        if not np.all(gains > 0.0):
            raise ValueError("gains must be positive")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "gains", gains)

    @property
    def max_gain(self) -> float:
        return float(self.gains.max())

    def gain_at(self, psi):
        """Periodic linear interpolation of the pattern."""
        wrapped = np.mod(psi, 2.0 * math.pi)
        ang = np.append(self.angles, 2.0 * math.pi)
        g = np.append(self.gains, self.gains[0])
        return np.interp(wrapped, ang, g)


def _sop_core(gamma_b, gamma_e, rate: float):
    if rate == 0.0:
        # exact simplification of the closed form at zero target rate
        return gamma_e / (gamma_b + gamma_e)
    t = 2.0 ** rate
    return 1.0 - (gamma_b / (gamma_b + t * gamma_e)) * np.exp(-(t - 1.0) / gamma_b)


def sop_closed_form(link: SecrecyLink) -> float:
    """Secrecy outage probability for exponential SNR pairs."""
    return float(_sop_core(link.mean_snr_bob, link.mean_snr_eve,
                           link.secrecy_rate))


def sop_monte_carlo(link: SecrecyLink, samples: int, seed: int):
    """(estimate, binomial stderr) from counter-based exponential draws.

    Samples are generated in fixed-size chunks on independently advanced
    Philox streams, so the result depends only on (samples, seed), not
    on how the chunks are scheduled.
    """
    if samples < 10_000:
        raise ValueError("Monte Carlo needs at least 1e4 samples")
    threshold = 2.0 ** link.secrecy_rate
    hits = 0
    done = 0
    index = 0
    while done < samples:
        count = min(_MC_CHUNK, samples - done)
        stream = np.random.Philox(key=seed).advance(index << 64)
        rng = np.random.Generator(stream)
        g_b = rng.exponential(link.mean_snr_bob, count)
        g_e = rng.exponential(link.mean_snr_eve, count)
        hits += int(np.count_nonzero((1.0 + g_b) < threshold * (1.0 + g_e)))
        done += count
        index += 1
    p = hits / samples
    return p, math.sqrt(max(p * (1.0 - p), 0.0) / samples)


def max_distance_ratio(model: LinkModel, sop_target: float,
                       secrecy_rate: float = 0.0) -> float:
    """Largest d_bob/d_eve ratio keeping the outage at or below target.

    The outage grows monotonically with the ratio (the legitimate SNR
    falls as rho^-alpha while the intruder SNR stays fixed), so a
    geometric bisection brackets the crossing.
    """
    if not 0.0 < sop_target < 1.0:
        raise ValueError("SOP target must lie strictly inside (0, 1)")

    def outage(rho: float) -> float:
        bob = model.reference_snr * model.gain_ratio * rho ** (-model.path_loss_exponent)
        return float(_sop_core(bob, model.reference_snr, secrecy_rate))

    lo = 1e-9
    if outage(lo) > sop_target:
        raise InfeasibleTargetError(
            f"outage target {sop_target:g} unreachable even at distance ratio {lo:g}")
    hi = 1.0
    while outage(hi) <= sop_target:
        hi *= 2.0
    while hi / lo > 1.0 + 1e-13:
        mid = math.sqrt(lo * hi)
        if outage(mid) <= sop_target:
            lo = mid
        else:
            hi = mid
    return lo


def coating_gain_pattern(scene: Scene, feed_point=None, n_angles: int = 360,
                         truncation: int | None = None) -> GainPattern:
    """Feed-point gain versus illumination angle, from a single solve.

    Rotating the illumination by psi is equivalent to evaluating the
    fixed solution at the feed point rotated by -psi, so one boundary
    solve covers the whole pattern.  Gains are normalized pointwise by
    the bare-cylinder field at the same rotated point.
    """
    a = scene.radius
    if feed_point is None:
        feed_point = (0.5 * a, 0.0)
    r_fp, phi_fp = float(feed_point[0]), float(feed_point[1])
    if not 0.0 <= r_fp < a:
        raise ValueError("feed point must lie strictly inside the cylinder")
    if n_angles < 4:
        raise ValueError("pattern needs at least 4 angles")
    sol = mode_matching.solve(scene, truncation=truncation)
    base = mode_matching.solve(scene.with_admittance(0j), truncation=sol.truncation)
    psi = np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)
    eval_angle = phi_fp + scene.source_angle - psi
    px = r_fp * np.cos(eval_angle)
    py = r_fp * np.sin(eval_angle)
    field, field0 = mode_matching.evaluate_points(sol, px, py, baseline=base)
    gains = np.abs(field) ** 2 / np.abs(field0) ** 2
    return GainPattern(psi, gains)


@dataclass(eq=False, frozen=True)
class SpatialSOPMap:
    """log10 of the outage probability over a Cartesian grid.

    Region is in units of the cylinder radius, matching the field maps.
    Grid points coincident with a radiating element are NaN and listed
    in ``flagged``.
    """

    region: tuple
    resolution: tuple
    values: np.ndarray
    flagged: tuple
    scene: Scene
    tx_position: tuple
    secrecy_rate: float
    gamma_bob: float
    gain_bob: float
    orientation: str

    @property
    def x_axis(self) -> np.ndarray:
        x_min, x_max, _, _ = self.region
        return np.linspace(x_min, x_max, self.resolution[0]) * self.scene.radius

    @property
    def y_axis(self) -> np.ndarray:
        _, _, y_min, y_max = self.region
        return np.linspace(y_min, y_max, self.resolution[1]) * self.scene.radius


def _check_source_matches_tx(scene: Scene, tx_position):
    tx, ty = tx_position
    cx = scene.source_distance * math.cos(scene.source_angle + scene.misalignment)
    cy = scene.source_distance * math.sin(scene.source_angle + scene.misalignment)
    if math.hypot(cx - tx, cy - ty) > 1e-9 * scene.source_distance:
        raise ValueError(
            "transmitter position must coincide with the scene's aperture center; "
            f"scene puts it at ({cx:g}, {cy:g})")


def _eve_modulation(scene: Scene, sol, base, px: np.ndarray, py: np.ndarray):
    """(modulation, on_source_mask): field intensity ratio, NaN-safe."""
    sx, sy, _ = source_points(scene)
    on_source = np.zeros(px.shape, dtype=bool)
    for x0, y0 in zip(sx, sy):
        on_source |= (px == x0) & (py == y0)
    good = ~on_source
    modulation = np.full(px.shape, np.nan)
    if good.any():
        f, f0 = mode_matching.evaluate_points(sol, px[good], py[good], baseline=base)
        modulation[good] = np.abs(f) ** 2 / np.abs(f0) ** 2
    return modulation, on_source


def bob_gain(pattern: GainPattern, scene: Scene, tx_position, orientation: str) -> float:
    """Receiver gain used for the legitimate link.

    "steered" assumes the coated receiver is rotated for maximum gain;
    "fixed" reads the pattern at the transmitter bearing as-is.
    """
    if orientation == "steered":
        return pattern.max_gain
    if orientation == "fixed":
        bearing = math.atan2(tx_position[1], tx_position[0])
        return float(pattern.gain_at(bearing))
    raise ValueError("orientation must be 'steered' or 'fixed'")


def sop_spatial_map(scene: Scene, pattern: GainPattern,
                    tx_position=(0.0, -1.0),
                    bob_rx_power_dbm: float = DEFAULT_BOB_RX_DBM,
                    noise_dbm: float = DEFAULT_NOISE_DBM,
                    region: tuple = DEFAULT_SOP_REGION,
                    resolution: tuple = DEFAULT_SOP_RESOLUTION,
                    secrecy_rate: float = 0.0,
                    path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT,
                    orientation: str = "steered",
                    truncation: int | None = None) -> SpatialSOPMap:
    """Outage map for an intruder wandering the plane around the receiver.

    The transmit power is back-solved so the legitimate receiver at the
    origin sees ``bob_rx_power_dbm``; that normalization cancels into a
    single ratio, so only relative gains and distances remain.
    """
    _check_source_matches_tx(scene, tx_position)
    x_min, x_max, y_min, y_max = (float(v) for v in region)
    n_x, n_y = (int(v) for v in resolution)
    if not (x_max > x_min and y_max > y_min):
        raise ValueError("map region must have positive extent")
    if n_x < 2 or n_y < 2:
        raise ValueError("map needs at least 2 points per axis")
    a = scene.radius
    gamma_bob = db_to_linear(bob_rx_power_dbm - noise_dbm)
    g_bob = bob_gain(pattern, scene, tx_position, orientation)
    sol = mode_matching.solve(scene, truncation=truncation)
    base = mode_matching.solve(scene.with_admittance(0j), truncation=sol.truncation)
    xs = np.linspace(x_min, x_max, n_x) * a
    ys = np.linspace(y_min, y_max, n_y) * a
    px, py = np.meshgrid(xs, ys)
    modulation, on_source = _eve_modulation(
        scene, sol, base, px.ravel(), py.ravel())
    d_eve = np.hypot(px.ravel() - tx_position[0], py.ravel() - tx_position[1])
    d_bob = math.hypot(*tx_position)
    with np.errstate(divide="ignore", invalid="ignore"):
        path = (d_eve / d_bob) ** (-path_loss_exponent)
        gamma_eve = gamma_bob * path * modulation / g_bob
        sop = _sop_core(gamma_bob, gamma_eve, secrecy_rate)
        values = np.log10(sop)
    bad = on_source | (d_eve == 0.0)
    values[bad] = np.nan
    values = values.reshape(n_y, n_x)
    flagged = tuple((int(r), int(c)) for r, c in zip(*np.nonzero(
        bad.reshape(n_y, n_x))))
    return SpatialSOPMap((x_min, x_max, y_min, y_max), (n_x, n_y), values,
                         flagged, scene, tuple(tx_position), secrecy_rate,
                         gamma_bob, g_bob, orientation)


def ring_secrecy_fraction(scene: Scene, pattern: GainPattern,
                          tx_position=(0.0, -1.0),
                          sop_threshold: float = 1e-4,
                          secrecy_rate: float = 0.0,
                          orientation: str = "steered",
                          n_angles: int = 720,
                          truncation: int | None = None) -> float:
    """Fraction of the equal-distance ring where the outage stays under
    the threshold.

    On the ring |p - tx| = |bob - tx| the path losses cancel, so the
    intruder's disadvantage is purely the coating: receiver gain against
    the local field modulation.
    """
    _check_source_matches_tx(scene, tx_position)
    g_bob = bob_gain(pattern, scene, tx_position, orientation)
    sol = mode_matching.solve(scene, truncation=truncation)
    base = mode_matching.solve(scene.with_admittance(0j), truncation=sol.truncation)
    d_bob = math.hypot(*tx_position)
    theta = np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)
    px = tx_position[0] + d_bob * np.cos(theta)
    py = tx_position[1] + d_bob * np.sin(theta)
    modulation, on_source = _eve_modulation(scene, sol, base, px, py)
    usable = ~on_source
    gamma_bob = db_to_linear(DEFAULT_BOB_RX_DBM - DEFAULT_NOISE_DBM)
    gamma_eve = gamma_bob * modulation[usable] / g_bob
    sop = _sop_core(gamma_bob, gamma_eve, secrecy_rate)
    return float(np.count_nonzero(sop <= sop_threshold)) / float(np.count_nonzero(usable))
