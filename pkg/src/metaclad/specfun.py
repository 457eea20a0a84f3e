"""Integer-order Bessel and Hankel functions on the positive real axis.

Self-contained machinery with no external special-function dependency,
built on two classical schemes:

* ``J_n`` by Miller's downward recurrence, normalized through the
  even-order sum ``J_0 + 2 (J_2 + J_4 + ...) = 1``, with dynamic-range
  rescaling.  A direct ascending series with a log-scaled prefactor takes
  over when the order sits far above the argument, where the value
  under-ranges the recurrence.
* ``Y_0``, ``Y_1`` from Neumann's J-weighted series

      Y_0 = (2/pi) (ln(x/2) + gamma) J_0 + (4/pi) sum_{k>=1} (-1)^{k+1} J_{2k} / k

  and its term-by-term derivative for ``Y_1``, both accumulated during
  the same downward pass.  Unlike the textbook ascending power series,
  these sums involve only O(1) Bessel values and stay cancellation-free
  at large arguments.  Higher orders follow by upward recurrence, stable
  because Y is the growing solution in the order.

Accuracy: relative error is a few parts in 1e14 for 0 < x <= 100 and
|n| <= 128 (checked against independent series oracles and a reference
library in the test suite), degrading to small absolute error near zeros
of the functions.  Magnitudes outside the double range saturate to 0 or
+/-inf.  With the e^{+i omega t} time convention used downstream,
``hankel2`` (J - iY) is the outgoing wave.
"""

from __future__ import annotations

import math

import numpy as np

EULER_GAMMA = 0.5772156649015329

_BIG = 1e250
_BIGI = 1e-250
_TINY_X = 1e-8
_SEED = 1e-35
_TWO_OVER_PI = 2.0 / math.pi
_FOUR_OVER_PI = 4.0 / math.pi


def _start_order(nmax: int, xmax: float) -> int:
    # margin ~ 11 x^{1/3} clears the Airy transition zone to below 1e-15
    return max(nmax, int(math.ceil(xmax))) + 12 + int(11.0 * xmax ** (1.0 / 3.0))


def _engine(nmax: int, x: np.ndarray):
    """One downward Miller pass over an array of positive arguments.

    Returns ``(j_table, y0, y1)`` with ``j_table[k] = J_k(x)`` for
    k = 0..nmax.  Callers guarantee ``x >= _TINY_X`` elementwise.
    """
    nmax = max(int(nmax), 1)
    x = np.asarray(x, dtype=float)
    start = _start_order(nmax, float(x.max()))
    inv_x = 1.0 / x
    jp = np.zeros_like(x)  # J_{k+1}, common unnormalized scale
    jc = np.full_like(x, _SEED)  # J_k
    table = np.zeros((nmax + 1,) + x.shape)
    norm = np.zeros_like(x)
    y0s = np.zeros_like(x)
    y1s = np.zeros_like(x)
    for k in range(start, -1, -1):
        mask = np.abs(jc) > _BIG
        if mask.any():
            jc[mask] *= _BIGI
            jp[mask] *= _BIGI
            table[:, mask] *= _BIGI
            norm[mask] *= _BIGI
            y0s[mask] *= _BIGI
            y1s[mask] *= _BIGI
        if k <= nmax:
            table[k] = jc
        if k == 0:
            norm += jc
        elif k % 2 == 0:
            norm += 2.0 * jc
            half = k // 2
            y0s += (_FOUR_OVER_PI * (-1.0) ** (half + 1) / half) * jc
        else:
            m = (k - 1) // 2
            if m == 0:
                beta = -_TWO_OVER_PI
            else:
                beta = _TWO_OVER_PI * (-1.0) ** (m + 1) * (1.0 / m + 1.0 / (m + 1))
            y1s += beta * jc
        if k > 0:
            jm = (2.0 * k) * inv_x * jc - jp
            jp, jc = jc, jm
    table /= norm
    y0s /= norm
    y1s /= norm
    ell = np.log(0.5 * x) + EULER_GAMMA
    j0 = table[0]
    j1 = table[1]
    y0 = _TWO_OVER_PI * ell * j0 + y0s
    y1 = _TWO_OVER_PI * (ell * j1 - j0 * inv_x) + y1s
    return table, y0, y1


def _j_series(n: int, x: float) -> float:
    """Ascending series with log-scaled prefactor; requires x^2 <~ 2(n+1)."""
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    q = 0.25 * x * x
    term = 1.0
    s = 1.0
    for k in range(1, 500):
        term *= -q / (k * (n + k))
        s += term
        if abs(term) <= 1e-17 * abs(s):
            break
    ln_pref = n * math.log(0.5 * x) - math.lgamma(n + 1.0)
    if ln_pref < -745.0:
        return 0.0
    return math.exp(ln_pref) * s


def _y_upward(nmax: int, x: np.ndarray, y0: np.ndarray, y1: np.ndarray) -> np.ndarray:
    out = np.empty((nmax + 1,) + np.shape(x))
    out[0] = y0
    if nmax >= 1:
        out[1] = y1
    inv_x = 1.0 / x
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, nmax):
            out[k + 1] = (2.0 * k) * inv_x * out[k] - out[k - 1]
    return out


def _parity(n: int) -> float:
    return -1.0 if n % 2 else 1.0


# ---------------------------------------------------------------------------
# scalar interface
# ---------------------------------------------------------------------------


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for integer n (any sign) and x >= 0."""
    if x < 0.0:
        raise ValueError(f"bessel_j requires x >= 0, got {x}")
    sign = _parity(n) if n < 0 else 1.0
    n = abs(int(n))
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x < _TINY_X or (n >= 2 and x * x <= 2.0 * (n + 1)):
        return sign * _j_series(n, x)
    table, _, _ = _engine(n, np.atleast_1d(float(x)))
    return sign * float(table[n, 0])


def bessel_y(n: int, x: float) -> float:
    """Y_n(x) for integer n (any sign); requires x > 0."""
    if x <= 0.0:
        raise ValueError(f"bessel_y requires x > 0, got {x}")
    sign = _parity(n) if n < 0 else 1.0
    n = abs(int(n))
    return sign * float(bessel_y_seq(n, x)[n])


def hankel1(n: int, x: float) -> complex:
    return complex(bessel_j(n, x), bessel_y(n, x))


def hankel2(n: int, x: float) -> complex:
    return complex(bessel_j(n, x), -bessel_y(n, x))


def bessel_j_prime(n: int, x: float) -> float:
    if n == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))


def bessel_y_prime(n: int, x: float) -> float:
    if n == 0:
        return -bessel_y(1, x)
    return 0.5 * (bessel_y(n - 1, x) - bessel_y(n + 1, x))


def hankel2_prime(n: int, x: float) -> complex:
    return complex(bessel_j_prime(n, x), -bessel_y_prime(n, x))


# ---------------------------------------------------------------------------
# sequences at a scalar argument (orders 0..nmax)
# ---------------------------------------------------------------------------


def bessel_j_seq(nmax: int, x: float) -> np.ndarray:
    """[J_0(x), ..., J_nmax(x)] for x >= 0."""
    if x < 0.0:
        raise ValueError(f"bessel_j_seq requires x >= 0, got {x}")
    nmax = int(nmax)
    if x < _TINY_X:
        return np.array([_j_series(k, x) for k in range(nmax + 1)])
    table, _, _ = _engine(nmax, np.atleast_1d(float(x)))
    return table[: nmax + 1, 0].copy()


def _y01_tiny(x: np.ndarray):
    # x < _TINY_X: the J-series corrections are below double precision
    j0 = 1.0 - 0.25 * x * x
    j1 = 0.5 * x
    y0 = _TWO_OVER_PI * (np.log(0.5 * x) + EULER_GAMMA) * j0
    y1 = (j1 * y0 - _TWO_OVER_PI / x) / j0
    return y0, y1


def bessel_y_seq(nmax: int, x: float) -> np.ndarray:
    """[Y_0(x), ..., Y_nmax(x)] for x > 0; overflow saturates to +/-inf."""
    if x <= 0.0:
        raise ValueError(f"bessel_y_seq requires x > 0, got {x}")
    nmax = int(nmax)
    xa = np.atleast_1d(float(x))
    if x < _TINY_X:
        y0, y1 = _y01_tiny(xa)
    else:
        _, y0, y1 = _engine(1, xa)
    return _y_upward(nmax, xa, y0, y1)[:, 0].copy()


def hankel2_seq(nmax: int, x: float) -> np.ndarray:
    return bessel_j_seq(nmax, x) - 1j * bessel_y_seq(nmax, x)


# ---------------------------------------------------------------------------
# vectorized tables over an array of arguments
# ---------------------------------------------------------------------------


def jy_tables(nmax: int, x: np.ndarray):
    """(j_table, y_table) of shape (nmax+1, len(x)) from one downward pass.

    Requires x > 0 elementwise.  The main evaluation path for field maps;
    callers chunk large point sets to bound the table memory.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("jy_tables requires x > 0 elementwise")
    nmax = int(nmax)
    tiny = x < _TINY_X
    xs = np.where(tiny, 1.0, x)  # keep the engine well-conditioned
    table, y0, y1 = _engine(nmax, xs)
    if tiny.any():
        # recompute the affected columns with the small-argument forms
        xt = x[tiny]
        q = 0.25 * xt * xt
        with np.errstate(divide="ignore"):
            lg = np.log(0.5 * xt)
        for k in range(nmax + 1):
            ln_pref = k * lg - math.lgamma(k + 1.0)
            table[k, tiny] = np.exp(ln_pref) * (1.0 - q / (k + 1.0))
        y0t, y1t = _y01_tiny(xt)
        y0 = np.array(y0)
        y1 = np.array(y1)
        y0[tiny] = y0t
        y1[tiny] = y1t
    y_table = _y_upward(nmax, x, y0, y1)
    return table, y_table


def bessel_j_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """J_k(x) table, shape (nmax+1, len(x)), for x >= 0 elementwise."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("bessel_j_table requires x >= 0 elementwise")
    nmax = int(nmax)
    zero = x == 0.0
    xs = np.where(zero, 1.0, x)
    table, _ = jy_tables(nmax, xs)
    if zero.any():
        table[:, zero] = 0.0
        table[0, zero] = 1.0
    return table


def hankel2_table(nmax: int, x: np.ndarray) -> np.ndarray:
    j, y = jy_tables(nmax, x)
    return j - 1j * y
