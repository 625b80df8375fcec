r"""Reflection kernel for two concentric cylinders.

For angular index ``n`` and imaginary frequency ``xi`` the round-trip mode
function is the ratio of inner and outer reflection factors,

.. math::
    M_n(\xi) = \frac{\mathcal{Z}_n(a_1\xi)}{\mathcal{Z}_n(a_2\xi)},

where each factor is :math:`I_n/K_n` (Dirichlet wall) or :math:`I_n'/K_n'`
(Neumann wall).  Homogeneous walls give :math:`M_n > 0` (attraction) with
:math:`|M_n| < 1` (both ratios grow strictly with the argument), so the
interaction integrand :math:`\ln(1 - M_n)` is real.  Mixed walls give
:math:`M_n < 0` (repulsion), which keeps the integrand real even where
:math:`|M_n|` exceeds one, as the n = 0 channel does at small frequency.

Everything here works on logs; raw ratios are never formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import log_bessel_ik

__all__ = [
    "DIRICHLET",
    "NEUMANN",
    "CylinderGeometry",
    "FieldConfig",
    "ModeValue",
    "DD",
    "NN",
    "DN",
    "ND",
    "PCPC",
    "PCIP",
    "SCALAR_CONFIGS",
    "EM_CONFIGS",
    "ALL_CONFIGS",
    "log1m_signed_exp",
    "mode_a",
    "mode_m",
    "mode_log_term_rows",
    "mode_log_term_single",
    "cutoff_estimate",
]

DIRICHLET = "dirichlet"
NEUMANN = "neumann"

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class CylinderGeometry:
    """Two concentric cylinders with radii ``a1 < a2``."""

    a1: float
    a2: float

    def __post_init__(self):
        if not (self.a1 > 0.0 and self.a2 > self.a1):
            raise ValueError(f"need 0 < a1 < a2, got a1={self.a1}, a2={self.a2}")

    @property
    def d(self):
        """Gap width a2 - a1."""
        return self.a2 - self.a1

    @property
    def eps(self):
        """Dimensionless gap (a2 - a1)/a1."""
        return (self.a2 - self.a1) / self.a1

    @classmethod
    def from_gap(cls, a1, eps):
        """Geometry from inner radius and dimensionless gap."""
        return cls(a1=a1, a2=a1 * (1.0 + eps))


_SCALAR_LABELS = ("DD", "NN", "DN", "ND")
_EM_LABELS = ("PCPC", "PCIP")
# electromagnetic configurations decompose into two scalar channels
_EM_CHANNELS = {"PCPC": ("DD", "NN"), "PCIP": ("DN", "ND")}


@dataclass(frozen=True)
class FieldConfig:
    """Boundary-condition pair: scalar DD/NN/DN/ND or electromagnetic
    PCPC (conductor-conductor) / PCIP (conductor-permeable)."""

    label: str

    def __post_init__(self):
        if self.label not in _SCALAR_LABELS + _EM_LABELS:
            raise ValueError(f"unknown field configuration {self.label!r}")

    @classmethod
    def from_label(cls, label):
        return cls(label.upper().replace("-", ""))

    @property
    def kind(self):
        return "em" if self.label in _EM_LABELS else "scalar"

    @property
    def is_em(self):
        return self.label in _EM_LABELS

    @property
    def em_kind(self):
        if not self.is_em:
            raise ValueError(f"{self.label} is not an electromagnetic configuration")
        return self.label

    @property
    def inner_bc(self):
        if self.is_em:
            raise ValueError(f"{self.label} has no single scalar boundary condition")
        return DIRICHLET if self.label[0] == "D" else NEUMANN

    @property
    def outer_bc(self):
        if self.is_em:
            raise ValueError(f"{self.label} has no single scalar boundary condition")
        return DIRICHLET if self.label[1] == "D" else NEUMANN

    @property
    def is_mixed(self):
        """True for DN/ND (repulsive channels)."""
        return self.inner_bc != self.outer_bc

    def channels(self):
        """Scalar channels this configuration sums over."""
        if self.is_em:
            return tuple(FieldConfig(lbl) for lbl in _EM_CHANNELS[self.label])
        return (self,)


DD = FieldConfig("DD")
NN = FieldConfig("NN")
DN = FieldConfig("DN")
ND = FieldConfig("ND")
PCPC = FieldConfig("PCPC")
PCIP = FieldConfig("PCIP")
SCALAR_CONFIGS = (DD, NN, DN, ND)
EM_CONFIGS = (PCPC, PCIP)
ALL_CONFIGS = SCALAR_CONFIGS + EM_CONFIGS


@dataclass(frozen=True)
class ModeValue:
    """One mode function value in log-signed form.

    ``log_abs_m`` is log|M_n|, ``sign`` the sign of M_n and ``log_term`` the
    interaction integrand log(1 - M_n).
    """

    log_abs_m: float
    sign: int
    log_term: float


def log1m_signed_exp(log_abs, sign):
    """Cancellation-safe ``log(1 - sign*exp(log_abs))``.

    For sign=+1 (requires ``log_abs < 0``) this is the standard log1mexp
    split: ``log(-expm1(s))`` keeps full precision as s -> 0- while
    ``log1p(-exp(s))`` does for s << 0.  For sign=-1 any ``log_abs`` is
    valid; large arguments use ``s + log1p(exp(-s))``.  Works elementwise.
    """
    s = np.asarray(log_abs, dtype=float)
    if sign == 1:
        with np.errstate(divide="ignore"):
            out = np.where(s > -_LN2, np.log(-np.expm1(np.minimum(s, 0.0))), np.log1p(-np.exp(np.minimum(s, 0.0))))
    elif sign == -1:
        with np.errstate(over="ignore"):
            out = np.where(s > 0.0, s + np.log1p(np.exp(-np.abs(s))), np.log1p(np.exp(np.minimum(s, 0.0))))
    else:
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if np.ndim(log_abs) == 0:
        return float(out)
    return out


def _channel_signs(cfg):
    # reflection factor is I/K (> 0) on a Dirichlet wall, I'/K' (< 0) on a
    # Neumann wall; the mode sign is the product of the two wall signs
    s_in = -1 if cfg.inner_bc == NEUMANN else +1
    s_out = -1 if cfg.outer_bc == NEUMANN else +1
    return s_in, s_out


def _log_ratio_scalar(n, x, primed):
    if not primed:
        ln_i, ln_k = log_bessel_ik(float(n), x)
        return float(ln_i - ln_k)
    if n == 0:
        ln_i, ln_k = log_bessel_ik(1.0, x)
        return float(ln_i - ln_k)
    ln_i, ln_k = log_bessel_ik(np.array([n - 1.0, n + 1.0]), x)
    ln_ip = np.logaddexp(ln_i[0], ln_i[1]) - _LN2
    ln_kp = np.logaddexp(ln_k[0], ln_k[1]) - _LN2
    return float(ln_ip - ln_kp)


def mode_a(n, omega, eps, cfg):
    """Mode function in dimensionless form (inner radius scaled to 1).

    Parameters
    ----------
    n : int
        Nonnegative angular index.
    omega : float
        Positive dimensionless imaginary frequency, omega = a1*xi.
    eps : float
        Positive dimensionless gap.
    cfg : FieldConfig
        Scalar configuration.

    Returns
    -------
    ModeValue
    """
    if n < 0 or n != int(n):
        raise ValueError(f"angular index must be a nonnegative integer, got {n}")
    if not omega > 0.0:
        raise ValueError(f"frequency must be positive, got {omega}")
    if not eps > 0.0:
        raise ValueError(f"gap must be positive, got {eps}")
    if cfg.is_em:
        raise ValueError("mode functions are defined per scalar channel")
    inner_primed = cfg.inner_bc == NEUMANN
    outer_primed = cfg.outer_bc == NEUMANN
    log_abs = (
        _log_ratio_scalar(n, omega, inner_primed)
        - _log_ratio_scalar(n, omega * (1.0 + eps), outer_primed)
    )
    s_in, s_out = _channel_signs(cfg)
    sign = s_in * s_out
    # 1 - M must stay positive for the log to be real.  Homogeneous walls
    # have M > 0 and |M| < 1 (both reflection ratios grow with the argument);
    # mixed walls have M < 0, where |M| may exceed 1 (the n = 0 channel does
    # so at small frequency) without harm.
    if sign == 1 and not log_abs < 0.0:
        raise RuntimeError(
            f"|M_{n}| >= 1 encountered (log|M| = {log_abs}) at omega={omega}, "
            f"eps={eps}, cfg={cfg.label}; this must never happen for valid inputs"
        )
    return ModeValue(log_abs_m=log_abs, sign=sign, log_term=log1m_signed_exp(log_abs, sign))


def mode_m(n, xi, geom, cfg):
    """Mode function for an explicit geometry; same contract as :func:`mode_a`
    with ``omega = a1*xi``."""
    if not xi > 0.0:
        raise ValueError(f"frequency must be positive, got {xi}")
    return mode_a(n, geom.a1 * xi, geom.eps, cfg)


def _log_ratio_rows(n_max, x, primed):
    """Rows of log|ratio| for orders 0..n_max over the argument vector x.

    For the primed ratio the common -log(2) of numerator and denominator
    cancels, so the half-sums are combined with plain logaddexp.
    """
    if primed:
        orders = np.arange(n_max + 2, dtype=float)[:, None]
        ln_i, ln_k = log_bessel_ik(orders, x[None, :])
        out = np.empty((n_max + 1, x.size))
        out[0] = ln_i[1] - ln_k[1]
        if n_max >= 1:
            out[1:] = np.logaddexp(ln_i[:n_max], ln_i[2:]) - np.logaddexp(ln_k[:n_max], ln_k[2:])
        return out
    orders = np.arange(n_max + 1, dtype=float)[:, None]
    ln_i, ln_k = log_bessel_ik(orders, x[None, :])
    return ln_i - ln_k


def mode_log_term_rows(n_max, omega, eps, cfg):
    """Vectorized interaction integrand log(1 - M_n) for n = 0..n_max.

    Parameters
    ----------
    n_max : int
        Highest angular index.
    omega : ndarray
        1D array of positive dimensionless frequencies.
    eps : float
        Positive dimensionless gap.
    cfg : FieldConfig
        Scalar configuration.

    Returns
    -------
    ndarray
        Shape ``(n_max + 1, len(omega))`` array of log(1 - M_n(omega)).
    """
    omega = np.asarray(omega, dtype=float)
    log_abs = (
        _log_ratio_rows(n_max, omega, cfg.inner_bc == NEUMANN)
        - _log_ratio_rows(n_max, omega * (1.0 + eps), cfg.outer_bc == NEUMANN)
    )
    s_in, s_out = _channel_signs(cfg)
    sign = s_in * s_out
    if sign == 1 and not np.all(log_abs < 0.0):
        raise RuntimeError("|M_n| >= 1 encountered in vectorized kernel evaluation")
    return log1m_signed_exp(log_abs, sign)


def mode_log_term_single(n, omega, eps, cfg):
    """log(1 - M_n(omega)) for a single angular index over a frequency array."""
    omega = np.asarray(omega, dtype=float)
    inner_primed = cfg.inner_bc == NEUMANN
    outer_primed = cfg.outer_bc == NEUMANN

    def ratio(x, primed):
        if not primed:
            ln_i, ln_k = log_bessel_ik(float(n), x)
            return ln_i - ln_k
        if n == 0:
            ln_i, ln_k = log_bessel_ik(1.0, x)
            return ln_i - ln_k
        orders = np.array([n - 1.0, n + 1.0])[:, None]
        ln_i, ln_k = log_bessel_ik(orders, x[None, :])
        return (np.logaddexp(ln_i[0], ln_i[1]) - np.logaddexp(ln_k[0], ln_k[1]))

    log_abs = ratio(omega, inner_primed) - ratio(omega * (1.0 + eps), outer_primed)
    s_in, s_out = _channel_signs(cfg)
    sign = s_in * s_out
    if sign == 1 and not np.all(log_abs < 0.0):
        raise RuntimeError("|M_n| >= 1 encountered in kernel row evaluation")
    return log1m_signed_exp(log_abs, sign)


def cutoff_estimate(tol, geom, cfg=None):
    """Truncation bounds for the mode sum and frequency integrals.

    The integrand envelopes decay like ``exp(-2 d xi)`` in frequency and like
    ``exp(-2 n log(1+eps))`` in the angular index, so dropped tails stay below
    ``tol`` (relative to the running totals) once ``2 d xi_max`` and
    ``2 n_max log(1+eps)`` both exceed ``log(1/tol)``, with an additive safety
    margin absorbing the algebraic prefactors.

    Parameters
    ----------
    tol : float
        Target relative tolerance, 0 < tol < 1.
    geom : CylinderGeometry
    cfg : FieldConfig, optional
        Unused by the envelope bound (it is shared by all configurations) but
        accepted for interface symmetry.

    Returns
    -------
    (int, float)
        ``(n_max, xi_max)``.
    """
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tol must be in (0, 1), got {tol}")
    margin = 8.0
    half_log = 0.5 * math.log(1.0 / tol)
    xi_max = (half_log + margin) / geom.d
    n_max = int(math.ceil((half_log + margin) / math.log1p(geom.eps)))
    return n_max, xi_max
