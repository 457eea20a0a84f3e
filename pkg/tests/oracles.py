"""Independent oracles used by the test suite.

Everything in this module is deliberately built from primitive math only
(power series, finite differences, plain quadrature, stdlib RNG) and never
imports the package under test, so agreement is a two-route check rather
than a tautology.
"""

import math
import random

EULER_GAMMA = 0.5772156649015329


def j0_series(x: float) -> float:
    """Maclaurin series of J_0; accurate for |x| <~ 12 in double precision."""
    q = 0.25 * x * x
    term = 1.0
    s = 1.0
    for k in range(1, 200):
        term *= -q / (k * k)
        s += term
        if abs(term) < 1e-18:
            break
    return s


def jn_series(n: int, x: float) -> float:
    """Maclaurin series of J_n for n >= 0; valid while x^2/4 <~ n + few."""
    q = 0.25 * x * x
    term = 1.0
    s = 1.0
    for k in range(1, 400):
        term *= -q / (k * (n + k))
        s += term
        if abs(term) < 1e-18 * max(1.0, abs(s)):
            break
    pref = math.exp(n * math.log(0.5 * x) - math.lgamma(n + 1.0)) if x > 0 else (1.0 if n == 0 else 0.0)
    return pref * s


def y0_ascending_series(x: float) -> float:
    """Ascending series of Y_0 with the Euler-Mascheroni term.

    Y_0 = (2/pi)[(ln(x/2) + gamma) J_0 + sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k / (k!)^2]

    Catastrophic cancellation limits this to roughly x <= 10 in doubles,
    which is exactly why it lives here as an oracle and not in the package.
    """
    q = 0.25 * x * x
    term = 1.0
    harmonic = 0.0
    s = 0.0
    for k in range(1, 200):
        term *= q / (k * k)
        harmonic += 1.0 / k
        contrib = ((-1.0) ** (k + 1)) * harmonic * term
        s += contrib
        if abs(contrib) < 1e-18 * max(1.0, abs(s)):
            break
    return (2.0 / math.pi) * ((math.log(0.5 * x) + EULER_GAMMA) * j0_series(x) + s)


def first_j0_zero(lo: float = 2.0, hi: float = 3.0) -> float:
    """First positive zero of J_0 by bisection on the series oracle."""
    flo = j0_series(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = j0_series(mid)
        if flo * fmid <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
        if hi - lo < 1e-15:
            break
    return 0.5 * (lo + hi)


def hankel2_asymptotic(n: int, x: float) -> complex:
    """Leading-order large-argument form sqrt(2/(pi x)) e^{-i(x - n pi/2 - pi/4)}."""
    amp = math.sqrt(2.0 / (math.pi * x))
    phase = x - 0.5 * n * math.pi - 0.25 * math.pi
    return amp * complex(math.cos(phase), -math.sin(phase))


def central_difference(f, x: float, h: float):
    """Five-point central difference, O(h^4)."""
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12.0 * h)


def gauss_legendre_nodes(npts: int, a: float, b: float):
    """Gauss-Legendre nodes/weights on [a, b] by Newton iteration on P_n."""
    xs = []
    ws = []
    for i in range(1, npts + 1):
        t = math.cos(math.pi * (i - 0.25) / (npts + 0.5))
        for _ in range(100):
            p0, p1 = 1.0, t
            for k in range(2, npts + 1):
                p0, p1 = p1, ((2 * k - 1) * t * p1 - (k - 1) * p0) / k
            dp = npts * (t * p1 - p0) / (t * t - 1.0)
            dt = p1 / dp
            t -= dt
            if abs(dt) < 1e-15:
                break
        p0, p1 = 1.0, t
        for k in range(2, npts + 1):
            p0, p1 = p1, ((2 * k - 1) * t * p1 - (k - 1) * p0) / k
        dp = npts * (t * p1 - p0) / (t * t - 1.0)
        xs.append(0.5 * (b - a) * t + 0.5 * (b + a))
        ws.append((b - a) / ((1.0 - t * t) * dp * dp))
    return xs, ws


def disc_integral_square(field, radius: float, n_r: int = 64, n_phi: int = 256):
    """integral over the disc of |field(r, phi)|^2, tensor Gauss x trapezoid."""
    rs, wr = gauss_legendre_nodes(n_r, 0.0, radius)
    total = 0.0
    dphi = 2.0 * math.pi / n_phi
    for r, w in zip(rs, wr):
        ring = 0.0
        for i in range(n_phi):
            v = field(r, i * dphi)
            ring += abs(v) ** 2
        total += w * r * ring * dphi
    return total


def sop_reference_mc(gamma_b: float, gamma_e: float, rate_bits: float,
                     samples: int, seed: int):
    """Secrecy-outage estimate with the stdlib Mersenne Twister.

    A deliberately different generator family from the package's
    counter-based stream; returns (estimate, standard error).
    """
    rng = random.Random(seed)
    threshold = 2.0 ** rate_bits
    hits = 0
    for _ in range(samples):
        gb = -gamma_b * math.log(1.0 - rng.random())
        ge = -gamma_e * math.log(1.0 - rng.random())
        if (1.0 + gb) < threshold * (1.0 + ge):
            hits += 1
    p = hits / samples
    return p, math.sqrt(max(p * (1.0 - p), 1e-300) / samples)
