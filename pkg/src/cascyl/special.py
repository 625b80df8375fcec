r"""Bessel-function backbone: scaled modified Bessel functions, log-domain
evaluation valid deep into the large-order regime, ordinary Bessel functions,
and the Debye uniform-asymptotic ingredients.

The mode functions of the cylinder problem are built from ratios
:math:`I_n(x)/K_n(x)` (and the primed analogues), which grow like
:math:`e^{2x}/\pi` and therefore are only ever exposed in log-signed form.
Direct evaluation through :func:`scipy.special.ive`/:func:`~scipy.special.kve`
covers most of the ``(n, x)`` plane; where the scaled values themselves leave
the double range (order large compared to argument) the logs are computed from
a power series, a small-argument sum, or the uniform large-order (Debye)
expansion, see https://dlmf.nist.gov/10.41.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

__all__ = [
    "LogSigned",
    "DebyeData",
    "bessel_i_scaled",
    "bessel_k_scaled",
    "bessel_j",
    "bessel_y",
    "bessel_j_prime",
    "bessel_y_prime",
    "log_bessel_ik",
    "log_ik_rows_with_primes",
    "log_ratio_ik",
    "debye",
]

_LN2 = math.log(2.0)

# Outside these bounds the scaled values carry too few (or no) bits and the
# log-domain branches take over.
_IVE_FLOOR = 1e-280
_KVE_CEIL = 1e280


@dataclass(frozen=True)
class LogSigned:
    """A real number stored as ``sign * exp(log_magnitude)``."""

    log_magnitude: float
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class DebyeData:
    """Ingredients of the uniform large-order expansion at a given argument."""

    eta: float
    t: float
    d1: float
    m1: float


def _validate_order_arg(n, x):
    if n < 0 or n != int(n):
        raise ValueError(f"order must be a nonnegative integer, got {n}")
    if not x > 0.0:
        raise ValueError(f"argument must be positive, got {x}")


# ---------------------------------------------------------------------------
# log-domain evaluation of I_n and K_n
# ---------------------------------------------------------------------------

def _log_i_series(n, x):
    """log I_n(x) from the ascending power series, elementwise on flat arrays.

    Used only where ``ive`` has underflowed, which implies x**2/4 << n, so the
    series converges in a handful of terms.
    """
    q = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for m in range(200):
        term = term * q / ((m + 1.0) * (n + m + 1.0))
        total += term
        if np.all(term <= 1e-18 * total):
            break
    return n * np.log(0.5 * x) - sp.gammaln(n + 1.0) + np.log(total)


def _log_k_smallx(n, x):
    """log K_n(x), n >= 1, in the regime where ``kve`` overflows.

    There K_n(x) = (1/2) Gamma(n) (2/x)^n * S with
    S = sum_{m=0}^{n-1} [(n-m-1)! / (m! (n-1)!)] (-x^2/4)^m; the omitted
    log-type remainder is smaller by a factor ~ (x/2)^(2n)/Gamma(n)^2 and far
    below double precision whenever this branch is reachable.
    """
    q = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    m_cap = int(np.max(n)) - 1
    for m in range(min(m_cap, 200)):
        active = (m + 1.0) <= (n - 1.0)
        denom = np.where(active, (m + 1.0) * (n - m - 1.0), 1.0)
        term = np.where(active, -term * q / denom, 0.0)
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return -_LN2 + sp.gammaln(n) + n * np.log(2.0 / x) + np.log(total)


def _debye_u(k, t):
    # Polynomials u_k(t) of https://dlmf.nist.gov/10.41#E10
    t2 = t * t
    if k == 1:
        return t * (3.0 - 5.0 * t2) / 24.0
    if k == 2:
        return t2 * (81.0 - t2 * (462.0 - 385.0 * t2)) / 1152.0
    if k == 3:
        return t * t2 * (30375.0 - t2 * (369603.0 - t2 * (765765.0 - 425425.0 * t2))) / 414720.0
    if k == 4:
        return t2 * t2 * (
            4465125.0 - t2 * (94121676.0 - t2 * (349922430.0 - t2 * (446185740.0 - 185910725.0 * t2)))
        ) / 39813120.0
    raise ValueError(k)


def _log_ik_debye(n, x):
    """Uniform large-order asymptotics for (log I_n, log K_n).

    Only reachable for orders in the hundreds (smaller orders are always
    covered by scipy or the series branches), where the truncation error of
    the four-term expansion is below ~1e-12 relative.
    """
    z = x / n
    w = np.sqrt(1.0 + z * z)
    t = 1.0 / w
    eta = w + np.log(z / (1.0 + w))
    u1 = _debye_u(1, t)
    u2 = _debye_u(2, t)
    u3 = _debye_u(3, t)
    u4 = _debye_u(4, t)
    si = 1.0 + (((u4 / n + u3) / n + u2) / n + u1) / n
    sk = 1.0 + (((u4 / n - u3) / n + u2) / n - u1) / n
    ln_i = n * eta - 0.5 * np.log(2.0 * np.pi * n) - 0.5 * np.log(w) + np.log(si)
    ln_k = -n * eta + 0.5 * np.log(0.5 * np.pi / n) - 0.5 * np.log(w) + np.log(sk)
    return ln_i, ln_k


def log_bessel_ik(n, x):
    """Natural logs of I_n(x) and K_n(x) for nonnegative integer orders.

    Parameters
    ----------
    n, x : array_like, broadcastable
        Orders (integer-valued) and positive arguments.

    Returns
    -------
    (ndarray, ndarray)
        ``log I_n(x)`` and ``log K_n(x)``, finite over the whole domain even
        where the functions themselves (or their exponentially scaled forms)
        leave the double range.
    """
    n_b, x_b = np.broadcast_arrays(np.asarray(n, dtype=float), np.asarray(x, dtype=float))
    shape = n_b.shape
    n_b = np.ascontiguousarray(n_b).reshape(-1) if n_b.ndim == 0 else np.ascontiguousarray(n_b)
    x_b = np.ascontiguousarray(x_b).reshape(-1) if x_b.ndim == 0 else np.ascontiguousarray(x_b)
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        iv = sp.ive(n_b, x_b)
        kv = sp.kve(n_b, x_b)
        ok_i = iv > _IVE_FLOOR
        ok_k = np.isfinite(kv) & (kv < _KVE_CEIL)
        ln_i = np.where(ok_i, np.log(np.where(ok_i, iv, 1.0)) + x_b, 0.0)
        ln_k = np.where(ok_k, np.log(np.where(ok_k, kv, 1.0)) - x_b, 0.0)

    bad_i = np.flatnonzero(~ok_i.ravel())
    if bad_i.size:
        nn = n_b.ravel()[bad_i]
        xx = x_b.ravel()[bad_i]
        in_series = xx * xx < 1.8 * (nn + 1.0)
        fill = np.empty(bad_i.size)
        if in_series.any():
            fill[in_series] = _log_i_series(nn[in_series], xx[in_series])
        if (~in_series).any():
            fill[~in_series] = _log_ik_debye(nn[~in_series], xx[~in_series])[0]
        ln_i.flat[bad_i] = fill

    bad_k = np.flatnonzero(~ok_k.ravel())
    if bad_k.size:
        nn = n_b.ravel()[bad_k]
        xx = x_b.ravel()[bad_k]
        in_series = xx * xx < 1.8 * (nn + 1.0)
        fill = np.empty(bad_k.size)
        if in_series.any():
            fill[in_series] = _log_k_smallx(nn[in_series], xx[in_series])
        if (~in_series).any():
            fill[~in_series] = _log_ik_debye(nn[~in_series], xx[~in_series])[1]
        ln_k.flat[bad_k] = fill

    return ln_i.reshape(shape), ln_k.reshape(shape)


def log_ik_rows_with_primes(n_max, x):
    """Tables of log I_n, log K_n, log I_n', log |K_n'| for n = 0..n_max.

    Derivatives follow the recurrences I_n' = (I_{n-1} + I_{n+1})/2 and
    K_n' = -(K_{n-1} + K_{n+1})/2 (with I_0' = I_1, K_0' = -K_1); as sums of
    positive quantities they are evaluated with ``logaddexp``, so I_n' > 0
    and K_n' < 0 hold by construction.

    Parameters
    ----------
    n_max : int
        Highest order.
    x : ndarray
        1D array of positive arguments.

    Returns
    -------
    tuple of ndarray
        Four arrays of shape ``(n_max + 1, len(x))``.
    """
    x = np.asarray(x, dtype=float)
    orders = np.arange(n_max + 2, dtype=float)[:, None]
    ln_i, ln_k = log_bessel_ik(orders, x[None, :])
    ln_ip = np.empty((n_max + 1, x.size))
    ln_kp = np.empty((n_max + 1, x.size))
    ln_ip[0] = ln_i[1]
    ln_kp[0] = ln_k[1]
    if n_max >= 1:
        ln_ip[1:] = np.logaddexp(ln_i[:n_max], ln_i[2:]) - _LN2
        ln_kp[1:] = np.logaddexp(ln_k[:n_max], ln_k[2:]) - _LN2
    return ln_i[: n_max + 1], ln_k[: n_max + 1], ln_ip, ln_kp


# ---------------------------------------------------------------------------
# public scalar operations
# ---------------------------------------------------------------------------

def bessel_i_scaled(n, x):
    """Exponentially scaled modified Bessel function ``exp(-x) I_n(x)``.

    Returns 0.0 when the true scaled value lies below the double range
    (small argument at large order).
    """
    _validate_order_arg(n, x)
    val = float(sp.ive(n, x))
    if val > _IVE_FLOOR:
        return val
    ln_i, _ = log_bessel_ik(float(n), float(x))
    with np.errstate(under="ignore"):
        return float(np.exp(ln_i - x))


def bessel_k_scaled(n, x):
    """Exponentially scaled modified Bessel function ``exp(x) K_n(x)``.

    Returns ``inf`` when the true scaled value exceeds the double range
    (small argument at large order); use :func:`log_bessel_ik` there.
    """
    _validate_order_arg(n, x)
    val = float(sp.kve(n, x))
    if math.isfinite(val) and val < _KVE_CEIL:
        return val
    _, ln_k = log_bessel_ik(float(n), float(x))
    with np.errstate(over="ignore"):
        return float(np.exp(ln_k + x))


def log_ratio_ik(n, x, primed=False):
    """Log-signed ratio ``I_n(x)/K_n(x)`` or ``I_n'(x)/K_n'(x)``.

    The unprimed ratio is positive.  For the primed ratio the sign follows
    from I_n'(x) > 0 and K_n'(x) < 0 (valid for every n >= 0 and x > 0
    because I_n' and -K_n' are half-sums of positive Bessel values), hence
    sign = -1 uniformly; it is derived from those computed signs rather than
    fixed per order.

    Parameters
    ----------
    n : int
        Nonnegative order.
    x : float
        Positive argument.
    primed : bool
        Use the derivative ratio.

    Returns
    -------
    LogSigned
    """
    _validate_order_arg(n, x)
    if not primed:
        ln_i, ln_k = log_bessel_ik(float(n), float(x))
        return LogSigned(float(ln_i - ln_k), +1)
    if n == 0:
        ln_i, ln_k = log_bessel_ik(1.0, float(x))
        ln_ip = float(ln_i)
        ln_kp_abs = float(ln_k)
    else:
        ln_i, ln_k = log_bessel_ik(np.array([n - 1.0, n + 1.0]), float(x))
        ln_ip = float(np.logaddexp(ln_i[0], ln_i[1]) - _LN2)
        ln_kp_abs = float(np.logaddexp(ln_k[0], ln_k[1]) - _LN2)
    sign_ip = +1   # half-sum of positive I values
    sign_kp = -1   # negated half-sum of positive K values
    return LogSigned(ln_ip - ln_kp_abs, sign_ip * sign_kp)


def bessel_j(n, x):
    """Ordinary Bessel function J_n(x)."""
    return float(sp.jv(n, x))


def bessel_y(n, x):
    """Ordinary Bessel function Y_n(x); requires x > 0."""
    if not x > 0.0:
        raise ValueError(f"Y_n requires a positive argument, got {x}")
    return float(sp.yv(n, x))


def bessel_j_prime(n, x):
    """Derivative J_n'(x) via J_n' = (J_{n-1} - J_{n+1})/2."""
    return float(sp.jvp(n, x))


def bessel_y_prime(n, x):
    """Derivative Y_n'(x) via Y_n' = (Y_{n-1} - Y_{n+1})/2; requires x > 0."""
    if not x > 0.0:
        raise ValueError(f"Y_n' requires a positive argument, got {x}")
    return float(sp.yvp(n, x))


def debye(z):
    """Uniform-asymptotic ingredients eta(z), t(z), D1(t), M1(t).

    eta(z) = sqrt(1+z^2) + log(z / (1 + sqrt(1+z^2))),  t(z) = 1/sqrt(1+z^2),
    D1(t) = t/8 - 5 t^3/24,  M1(t) = -3 t/8 + 7 t^3/24.
    """
    if not z > 0.0:
        raise ValueError(f"debye requires z > 0, got {z}")
    w = math.sqrt(1.0 + z * z)
    t = 1.0 / w
    eta = w + math.log(z / (1.0 + w))
    d1 = t / 8.0 - 5.0 * t**3 / 24.0
    m1 = -3.0 * t / 8.0 + 7.0 * t**3 / 24.0
    return DebyeData(eta=eta, t=t, d1=d1, m1=m1)
