r"""Small-gap asymptotic expansions, proximity-force leading terms, and the
gamma-function coefficient integrals with quadrature cross-checks.

Every expansion evaluated here is a truncated series in the dimensionless gap
``eps = (a2 - a1)/a1``: the displayed orders are kept literally (including
``eps^2 log(eps)`` pieces, evaluated at the supplied eps with no resummation)
and nothing beyond them is resummed or guessed.  Comparisons against direct
mode-sum numerics are therefore meaningful only up to the dropped order,
``O(eps^2)`` relative to the leading term.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.integrate import quad

from .energy import REGIME_CLASSICAL, REGIME_ZERO_T
from .errors import GammaPoleError, IntegralDivergenceError
from .kernel import CylinderGeometry, FieldConfig

__all__ = [
    "ZETA3",
    "DebyeCoefficients",
    "ExpansionResult",
    "MellinCheckReport",
    "pfa_leading",
    "expansion",
    "script_e",
    "script_e_n0",
    "mellin_A",
    "mellin_B",
    "mellin_C",
    "mellin_G",
    "mellin_integral_check",
]

ZETA3 = 1.2020569031595942854
_PI = math.pi
_LN2 = math.log(2.0)

# polynomial coefficients (c0*t + c1*t^3) of the two first-order Debye
# correction polynomials
_D1 = (1.0 / 8.0, -5.0 / 24.0)
_M1 = (-3.0 / 8.0, 7.0 / 24.0)


@dataclass(frozen=True)
class DebyeCoefficients:
    """First-order Debye polynomial coefficients attached to a scalar channel.

    ``P1 = lambda0 t + lambda1 t^3`` belongs to the inner wall, ``Q1 = varpi0 t
    + varpi1 t^3`` to the outer wall; homogeneous channels have Q1 = P1.
    """

    lambda0: float
    lambda1: float
    varpi0: float
    varpi1: float

    @property
    def kappa0(self):
        return self.varpi0 - self.lambda0

    @property
    def kappa1(self):
        return self.varpi1 - self.lambda1

    @classmethod
    def for_config(cls, cfg):
        if cfg.is_em:
            raise ValueError("Debye coefficients are defined per scalar channel")
        inner = _D1 if cfg.inner_bc == "dirichlet" else _M1
        outer = _D1 if cfg.outer_bc == "dirichlet" else _M1
        return cls(lambda0=inner[0], lambda1=inner[1], varpi0=outer[0], varpi1=outer[1])


@dataclass(frozen=True)
class ExpansionResult:
    """Evaluated truncated series with a per-term breakdown.

    ``terms`` holds (power descriptor, bracket coefficient, contribution)
    triples in strictly decreasing order; ``value`` is exactly the sum of the
    contributions.
    """

    value: float
    terms: tuple
    regime: str


def _require_regime(regime):
    if regime not in (REGIME_ZERO_T, REGIME_CLASSICAL):
        raise ValueError(
            f"no displayed expansion for regime {regime!r}; "
            f"use {REGIME_ZERO_T!r} or {REGIME_CLASSICAL!r}"
        )


def pfa_leading(cfg, regime, geom, T=None):
    """Proximity-force leading term per unit length for the given regime."""
    _require_regime(regime)
    a1 = geom.a1
    eps = geom.eps
    if regime == REGIME_ZERO_T:
        per_channel = {
            "DD": -_PI**3 / 720.0,
            "NN": -_PI**3 / 720.0,
            "DN": 7.0 * _PI**3 / 5760.0,
            "ND": 7.0 * _PI**3 / 5760.0,
        }
        scale = 1.0 / (a1 * a1 * eps**3)
    else:
        if T is None:
            raise ValueError("classical regime requires a temperature")
        per_channel = {
            "DD": -ZETA3 / 8.0,
            "NN": -ZETA3 / 8.0,
            "DN": 3.0 * ZETA3 / 32.0,
            "ND": 3.0 * ZETA3 / 32.0,
        }
        scale = T / (a1 * eps**2)
    return sum(per_channel[ch.label] for ch in cfg.channels()) * scale


# bracket coefficients of the displayed series: (c1, c2, c2log) multiply
# eps, eps^2 and eps^2*log(eps) relative to the leading term
_ZERO_T_BRACKETS = {
    "DD": (0.5, -0.1, 0.0),
    "NN": (0.5, -(0.1 + 4.0 / _PI**2), 0.0),
    "PCPC": (0.5, -(0.1 + 2.0 / _PI**2), 0.0),
    "DN": (
        0.5 + 40.0 / (7.0 * _PI**2),
        -0.1 - 8.0 / (7.0 * _PI**2) - (720.0 / (7.0 * _PI**4)) * _LN2 + 192.0 / (7.0 * _PI**4),
        0.0,
    ),
    "ND": (
        0.5 - 40.0 / (7.0 * _PI**2),
        -0.1 - 8.0 / (7.0 * _PI**2) + (720.0 / (7.0 * _PI**4)) * _LN2 + 192.0 / (7.0 * _PI**4),
        0.0,
    ),
    "PCIP": (0.5, -0.1 - 8.0 / (7.0 * _PI**2) + 192.0 / (7.0 * _PI**4), 0.0),
}
_ZERO_T_PREFACTORS = {
    "DD": -_PI**3 / 720.0,
    "NN": -_PI**3 / 720.0,
    "PCPC": -_PI**3 / 360.0,
    "DN": 7.0 * _PI**3 / 5760.0,
    "ND": 7.0 * _PI**3 / 5760.0,
    "PCIP": 7.0 * _PI**3 / 2880.0,
}
_CLASSICAL_BRACKETS = {
    "DD": (0.5, 0.0, 1.0 / 16.0),
    "NN": (0.5, 0.0, 5.0 / 16.0),
    "PCPC": (0.5, 0.0, 3.0 / 16.0),
    "DN": (0.5 + 4.0 * _LN2 / (3.0 * ZETA3), 0.0, 8.0 / (3.0 * _PI * ZETA3) - 1.0 / (4.0 * ZETA3)),
    "ND": (0.5 - 4.0 * _LN2 / (3.0 * ZETA3), 0.0, -(8.0 / (3.0 * _PI * ZETA3) + 1.0 / (4.0 * ZETA3))),
    "PCIP": (0.5, 0.0, -1.0 / (4.0 * ZETA3)),
}
_CLASSICAL_PREFACTORS = {
    "DD": -ZETA3 / 8.0,
    "NN": -ZETA3 / 8.0,
    "PCPC": -ZETA3 / 4.0,
    "DN": 3.0 * ZETA3 / 32.0,
    "ND": 3.0 * ZETA3 / 32.0,
    "PCIP": 3.0 * ZETA3 / 16.0,
}

# soft validity bound: beyond this the leading-to-subleading ratio drops
# under ~3 and the truncated series stops being quantitative
EPS_VALIDITY = 0.3


def expansion(cfg, regime, geom, T=None):
    """Full displayed small-gap series for the given configuration and regime.

    Warns (without refusing) for eps beyond the soft validity bound.
    """
    _require_regime(regime)
    eps = geom.eps
    if eps > EPS_VALIDITY:
        warnings.warn(
            f"eps = {eps:g} exceeds the expansion validity bound {EPS_VALIDITY}",
            RuntimeWarning,
            stacklevel=2,
        )
    a1 = geom.a1
    log_eps = math.log(eps)
    if regime == REGIME_ZERO_T:
        pref = _ZERO_T_PREFACTORS[cfg.label] / (a1 * a1 * eps**3)
        c1, c2, c2l = _ZERO_T_BRACKETS[cfg.label]
        terms = [
            ("eps^-3", 1.0, pref),
            ("eps^-2", c1, pref * c1 * eps),
            ("eps^-1", c2, pref * c2 * eps * eps),
        ]
        if c2l:
            terms.append(("eps^-1*log(eps)", c2l, pref * c2l * eps * eps * log_eps))
    else:
        if T is None:
            raise ValueError("classical regime requires a temperature")
        pref = _CLASSICAL_PREFACTORS[cfg.label] * T / (a1 * eps**2)
        c1, c2, c2l = _CLASSICAL_BRACKETS[cfg.label]
        terms = [
            ("eps^-2", 1.0, pref),
            ("eps^-1", c1, pref * c1 * eps),
        ]
        if c2:
            terms.append(("eps^0", c2, pref * c2 * eps * eps))
        if c2l:
            terms.append(("eps^0*log(eps)", c2l, pref * c2l * eps * eps * log_eps))
    value = math.fsum(contribution for _, _, contribution in terms)
    return ExpansionResult(value=value, terms=tuple(terms), regime=regime)


def script_e_n0(chi, cfg, eps):
    """Leading small-gap value of the n = 0 channel of the combined integral
    (homogeneous: attractive; mixed: repulsive, halved by the alternating
    reflection sign)."""
    if chi not in (0, 1):
        raise ValueError("chi must be 0 or 1")
    if cfg.is_em:
        raise ValueError("defined per scalar channel")
    if cfg.is_mixed:
        return _PI**2 / (48.0 * eps) if chi == 0 else 3.0 * ZETA3 / (32.0 * eps * eps)
    return -_PI**2 / (24.0 * eps) if chi == 0 else -ZETA3 / (8.0 * eps * eps)


def script_e(chi, cfg, eps):
    """Combined dimensionless mode-sum integral, expanded for small eps.

    ``chi = 1`` relates to the zero-temperature energy through
    ``E = script_e(1)/(2 pi a1^2)`` and ``chi = 0`` to the classical term
    through ``E = T script_e(0)/(pi a1)``.
    """
    if chi not in (0, 1):
        raise ValueError("chi must be 0 or 1")
    if cfg.is_em:
        raise ValueError("defined per scalar channel")
    coef = DebyeCoefficients.for_config(cfg)
    log_eps = math.log(eps)
    if not cfg.is_mixed:
        l0, l1 = coef.lambda0, coef.lambda1
        if chi == 0:
            return -(_PI * ZETA3 / (8.0 * eps * eps)) * (
                1.0 + eps / 2.0 - (2.0 * l0 + 1.5 * l1) * eps * eps * log_eps
            )
        return -(_PI**4 / (360.0 * eps**3)) * (
            1.0 + eps / 2.0 - eps * eps / 10.0 + (eps * eps / _PI**2) * (20.0 * l0 + 12.0 * l1)
        )
    k0, k1 = coef.kappa0, coef.kappa1
    w0, w1 = coef.varpi0, coef.varpi1
    if chi == 0:
        return (
            (3.0 * _PI * ZETA3 / (32.0 * eps * eps)) * (1.0 + eps / 2.0)
            - (_PI / (4.0 * eps)) * (2.0 * k0 + k1) * _LN2
            - log_eps * (k0 / 2.0 + (_PI / 4.0) * (k0 * k0 + k0 * k1 + 0.375 * k1 * k1))
        )
    return (
        (7.0 * _PI**4 / (2880.0 * eps**3)) * (1.0 + eps / 2.0 - eps * eps / 10.0)
        - (_PI**2 / (72.0 * eps * eps)) * (3.0 * k0 + k1)
        + (_PI**2 / (24.0 * eps)) * ((2.0 * w0 - k0) / 3.0 + (2.0 * w1 - k1) / 5.0)
        + (_LN2 / (2.0 * eps)) * k0
        + (1.0 / (2.0 * eps)) * (k0 * k0 + (2.0 / 3.0) * k0 * k1 + 0.2 * k1 * k1)
    )


# ---------------------------------------------------------------------------
# gamma-function coefficient integrals
# ---------------------------------------------------------------------------

def _gamma(arg):
    if arg <= 0.0 and arg == round(arg):
        raise GammaPoleError(f"gamma argument {arg} is a nonpositive integer")
    try:
        return math.gamma(arg)
    except ValueError as exc:
        raise GammaPoleError(f"gamma pole at argument {arg}") from exc


def mellin_A(chi, z, eps):
    """Gamma-function closed form of the geometric coefficient integral
    (shared by all boundary pairs), including its eps and eps^2 brackets."""
    head = (
        _gamma((chi + 1.0) / 2.0) / 2.0
        * _gamma((z - chi - 1.0) / 2.0) / _gamma(z / 2.0)
    )
    bracket = (
        1.0
        + eps * (z - chi - 1.0) / 2.0
        + eps * eps * (z - chi - 1.0)
        * (3.0 * z * z - 2.0 * z - 17.0 - 7.0 * chi - 3.0 * chi * z)
        / (24.0 * (z + 2.0))
    )
    return head * bracket


def mellin_B(chi, z, cfg):
    """Closed form of the first-order Debye correction integral for a
    homogeneous channel (the inner-wall polynomial enters)."""
    coef = DebyeCoefficients.for_config(cfg)
    l0, l1 = coef.lambda0, coef.lambda1
    head = (
        _gamma((chi + 1.0) / 2.0) / 2.0
        * _gamma((z - chi + 1.0) / 2.0) / _gamma((z + 2.0) / 2.0)
    )
    u = (z - chi + 1.0) / (z + 2.0)
    v = (z - chi + 1.0) * (z - chi + 3.0) / ((z + 2.0) * (z + 4.0))
    return head * (-l0 + (l0 - 3.0 * l1) * u + 3.0 * l1 * v)


def mellin_C(chi, z, eps, cfg):
    """Closed form of the mixed-channel correction integral, including the
    1/eps piece generated by the wall asymmetry."""
    coef = DebyeCoefficients.for_config(cfg)
    w0, w1 = coef.varpi0, coef.varpi1
    k0, k1 = coef.kappa0, coef.kappa1
    head = (
        _gamma((chi + 1.0) / 2.0) / 2.0
        * _gamma((z - chi + 1.0) / 2.0) / _gamma((z + 2.0) / 2.0)
    )
    u = (z - chi + 1.0) / (z + 2.0)
    v = (z - chi + 1.0) * (z - chi + 3.0) / ((z + 2.0) * (z + 4.0))
    return head * (
        -w0
        + (w0 - 3.0 * w1 + (z + 1.0) / 2.0 * k0) * u
        + (3.0 * w1 + (z + 1.0) / 2.0 * k1) * v
        + (k0 + k1 * u) / eps
    )


def mellin_G(chi, z, cfg):
    """Closed form of the squared wall-asymmetry integral (mixed channels)."""
    coef = DebyeCoefficients.for_config(cfg)
    k0, k1 = coef.kappa0, coef.kappa1
    head = (
        _gamma((chi + 1.0) / 2.0) / 2.0
        * _gamma((z - chi + 3.0) / 2.0) / _gamma((z + 4.0) / 2.0)
    )
    u = (z - chi + 3.0) / (z + 4.0)
    v = (z - chi + 3.0) * (z - chi + 5.0) / ((z + 4.0) * (z + 6.0))
    return head * (k0 * k0 + 2.0 * k0 * k1 * u + k1 * k1 * v)


@dataclass(frozen=True)
class MellinCheckReport:
    which: str
    chi: int
    z: float
    eps: float
    closed_form: float
    integral: float
    integral_err: float
    abs_dev: float
    rel_dev: float
    tol: float
    passed: bool


_MELLIN_DOMAIN = {"A": lambda chi, z: z > chi + 1.0,
                  "B": lambda chi, z: z > chi - 1.0,
                  "C": lambda chi, z: z > chi - 1.0,
                  "G": lambda chi, z: z > chi - 3.0}


def mellin_integral_check(which, chi, z, eps, cfg, tol=1e-8):
    """Quadrature of the defining integral versus the gamma closed form.

    The integrands are written with the elementary reductions
    eta'(w) = sqrt(1+w^2)/w, eta''/eta' = -1/(w(1+w^2)),
    eta'''/eta' = (2+3w^2)/(w^2(1+w^2)^2) and t' = -w t^3 folded in, so that
    w^(chi-z) eta'^(-z) combines to the overflow-free w^chi (1+w^2)^(-z/2).
    """
    which = which.upper()
    if which not in _MELLIN_DOMAIN:
        raise ValueError(f"unknown coefficient integral {which!r}")
    if chi not in (0, 1):
        raise ValueError("chi must be 0 or 1")
    if not _MELLIN_DOMAIN[which](chi, z):
        raise IntegralDivergenceError(
            f"defining integral {which} diverges at chi={chi}, z={z}"
        )

    if which == "A":
        closed = mellin_A(chi, z, eps)

        def integrand(w):
            s = 1.0 + w * w
            bracket = (
                1.0
                + z * eps / (2.0 * s)
                + eps * eps * (z * (z + 1.0) / 8.0 - z * (2.0 + 3.0 * w * w) / 6.0) / (s * s)
            )
            return w**chi * s ** (-z / 2.0) * bracket
    elif which == "B":
        closed = mellin_B(chi, z, cfg)
        coef = DebyeCoefficients.for_config(cfg)

        def integrand(w):
            s = 1.0 + w * w
            t2 = 1.0 / s
            return -(w**chi) * s ** (-z / 2.0) * (coef.lambda0 + 3.0 * coef.lambda1 * t2) * w * w * t2 * t2
    elif which == "C":
        closed = mellin_C(chi, z, eps, cfg)
        coef = DebyeCoefficients.for_config(cfg)

        def integrand(w):
            s = 1.0 + w * w
            t2 = 1.0 / s
            qprime_part = -(coef.varpi0 + 3.0 * coef.varpi1 * t2) * w * w * t2 * t2
            diff_part = 0.5 * (z + 1.0) * (coef.kappa0 * t2 * t2 + coef.kappa1 * t2**3)
            inv_eps_part = (coef.kappa0 * t2 + coef.kappa1 * t2 * t2) / eps
            return w**chi * s ** (-z / 2.0) * (qprime_part + diff_part + inv_eps_part)
    else:
        closed = mellin_G(chi, z, cfg)
        coef = DebyeCoefficients.for_config(cfg)

        def integrand(w):
            s = 1.0 + w * w
            t = 1.0 / math.sqrt(s)
            return w**chi * s ** (-(z + 2.0) / 2.0) * (coef.kappa0 * t + coef.kappa1 * t**3) ** 2

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        integral, ierr = quad(integrand, 0.0, math.inf, epsabs=1e-13, epsrel=1e-12, limit=400)
    abs_dev = abs(integral - closed)
    rel_dev = abs_dev / max(abs(closed), 1e-300)
    return MellinCheckReport(
        which=which, chi=chi, z=z, eps=eps,
        closed_form=closed, integral=integral, integral_err=ierr,
        abs_dev=abs_dev, rel_dev=rel_dev, tol=tol,
        passed=bool(min(abs_dev, rel_dev) <= tol),
    )
