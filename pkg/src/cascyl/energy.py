r"""Interaction observables assembled from the reflection kernel.

All energies are reported per unit cylinder length in natural units
(hbar = c = k_B = 1).  With the dimensionless frequency ``w = a1*xi`` and the
mode rows ``g_n(w) = log(1 - A_n(w))`` the implemented observables are

* zero temperature:          ``E = (1/(2 pi a1^2)) sum'_n int_0^inf w g_n(w) dw``
  (equivalently the double (xi, k) quadrant integral of the same kernel),
* Matsubara free energy:     ``E = (2T/(pi a1)) sum'_n sum'_l int_0^inf
  g_n(sqrt(w_l^2 + kappa^2)) dkappa`` with ``w_l = 2 pi l T a1``,
* classical term (l = 0):    ``E = (T/(pi a1)) sum'_n int_0^inf g_n(w) dw``,
* low-temperature correction as the oscillatory resummed series
  ``(1/(pi a1^2)) sum'_n sum_{l>=1} int_0^inf w J_0(l w/(a1 T)) g_n(w) dw``.

Primed sums give weight one half to the zero index.  Electromagnetic
configurations are exact sums of their two scalar channels.  Evaluation of
distinct (n, l) terms is independent; reductions run in a fixed order so
results are deterministic for a fixed spec.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as sp
from scipy.integrate import quad_vec

from .errors import ToleranceError
from .kernel import (
    DIRICHLET,
    NEUMANN,
    CylinderGeometry,
    FieldConfig,
    cutoff_estimate,
    mode_log_term_rows,
    mode_log_term_single,
)
from .special import bessel_j, bessel_j_prime, bessel_y, bessel_y_prime

__all__ = [
    "REGIME_ZERO_T",
    "REGIME_MATSUBARA",
    "REGIME_POISSON",
    "REGIME_CLASSICAL",
    "REGIME_THERMAL_LEADING",
    "NumericsSpec",
    "ThermalState",
    "EnergyResult",
    "DEFAULT_SPEC",
    "zero_temperature_energy",
    "zero_temperature_energy_double_form",
    "free_energy_matsubara",
    "classical_term",
    "thermal_correction_poisson",
    "thermal_leading",
    "abel_plana_phase",
]

REGIME_ZERO_T = "ZeroT"
REGIME_MATSUBARA = "Matsubara"
REGIME_POISSON = "PoissonLowT"
REGIME_CLASSICAL = "Classical"
REGIME_THERMAL_LEADING = "ThermalLeading"


@dataclass(frozen=True)
class NumericsSpec:
    """Tolerances and hard truncation limits for the quadrature engines."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    n_max_hard: int = 8000
    l_max_hard: int = 100000
    quad_limit: int = 200
    panel_points: int = 16

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol must be nonnegative")
        if min(self.n_max_hard, self.l_max_hard, self.quad_limit, self.panel_points) < 4:
            raise ValueError("hard limits are implausibly small")


DEFAULT_SPEC = NumericsSpec()


@dataclass(frozen=True)
class ThermalState:
    """Temperature in natural units together with the Matsubara ladder."""

    temperature: float

    def __post_init__(self):
        if self.temperature < 0.0:
            raise ValueError("temperature must be nonnegative")

    def matsubara_frequency(self, l):
        """xi_l = 2 pi l T."""
        return 2.0 * math.pi * l * self.temperature


@dataclass(frozen=True)
class EnergyResult:
    """Energy per unit length with an error estimate and truncation diagnostics."""

    value: float
    err_estimate: float
    n_used: int
    l_used: int
    regime: str


# ---------------------------------------------------------------------------
# quadrature helpers
# ---------------------------------------------------------------------------

_leggauss_cache = {}


def _leggauss(p):
    if p not in _leggauss_cache:
        _leggauss_cache[p] = np.polynomial.legendre.leggauss(p)
    return _leggauss_cache[p]


def _panel_nodes(breaks, points):
    """Composite Gauss-Legendre nodes/weights over consecutive break intervals."""
    x, w = _leggauss(points)
    a = breaks[:-1]
    b = breaks[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return nodes, wts

# decay-scale multiples used to lay out panels along the kappa axis
_DECAY_MULTIPLES = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0)


def _kappa_breaks(omega_scale, kappa_max, eps, refine_zero=False):
    """Panel boundaries for integrals over the transverse wavenumber.

    Panels follow the exp(-2 eps r) decay scale 1/(2 eps), resolve the
    crossover at kappa ~ omega_scale, and optionally refine geometrically
    toward zero (needed for the soft n = 0 Dirichlet log singularity).
    """
    pts = {0.0, kappa_max}
    decay = 0.5 / eps
    for m in _DECAY_MULTIPLES:
        v = m * decay
        if 0.0 < v < kappa_max:
            pts.add(v)
    if omega_scale > 0.0:
        for m in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0):
            v = m * omega_scale
            if 0.0 < v < kappa_max:
                pts.add(v)
    if refine_zero:
        v = 0.25 * min(decay, kappa_max)
        for _ in range(22):
            v *= 0.25
            if v <= 1e-14 * kappa_max:
                break
            pts.add(v)
    return np.array(sorted(pts))


def _geometric_ratio(values, lag=3, cap=0.98):
    """Decay ratio per step inferred from trailing magnitudes, capped below 1."""
    tail = np.abs(np.asarray(values[-(lag + 1):], dtype=float))
    if tail[-1] == 0.0:
        return 0.0
    if tail[0] == 0.0 or tail[-1] >= tail[0]:
        return cap
    steps = len(tail) - 1
    return min((tail[-1] / tail[0]) ** (1.0 / steps), cap)


def _sum_primed(values):
    w = np.ones(len(values))
    w[0] = 0.5
    return float(w @ np.asarray(values, dtype=float)), w


def _channel_sum(compute_one, geom, cfg, *rest):
    parts = [compute_one(geom, ch, *rest) for ch in cfg.channels()]
    if len(parts) == 1:
        return parts[0]
    return EnergyResult(
        value=parts[0].value + parts[1].value,
        err_estimate=parts[0].err_estimate + parts[1].err_estimate,
        n_used=max(p.n_used for p in parts),
        l_used=max(p.l_used for p in parts),
        regime=parts[0].regime,
    )


def _tail_tol(spec):
    # tolerance fed to cutoff_estimate; stricter than rel_tol so the envelope
    # margin keeps dropped tails subdominant
    return max(min(spec.rel_tol * 1e-2, 1e-6), 1e-15)


def _check_tolerance(result, spec):
    target = max(spec.abs_tol, spec.rel_tol * abs(result.value))
    if result.err_estimate > 50.0 * target:
        raise ToleranceError(
            f"estimated error {result.err_estimate:.3e} exceeds the requested "
            f"tolerance (target {target:.3e})",
            partial=result,
        )
    return result


# ---------------------------------------------------------------------------
# zero temperature and classical term (single-frequency integrals)
# ---------------------------------------------------------------------------

def _row_integrals(geom, cfg, spec, weight_power):
    """Adaptive integrals int_0^wmax w^chi g_n(w) dw for n = 0..n_rows.

    Returns (per-row integrals, quadrature error, w_max, n_rows).  Rows are
    extended until the geometric tail of the mode sum is negligible.
    """
    eps = geom.eps
    n_rows, xi_max = cutoff_estimate(_tail_tol(spec), geom)
    n_rows = min(n_rows, spec.n_max_hard)
    w_max = geom.a1 * xi_max
    epsrel = spec.rel_tol * 1e-2
    epsabs = max(spec.abs_tol * 0.1, 1e-300)

    while True:
        def integrand(w, _n_rows=n_rows):
            rows = mode_log_term_rows(_n_rows, np.array([w]), eps, cfg)[:, 0]
            if weight_power:
                rows = w * rows
            return rows

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vals, qerr = quad_vec(
                integrand, 0.0, w_max,
                epsabs=epsabs, epsrel=epsrel, norm="max", limit=spec.quad_limit,
            )
        ratio = _geometric_ratio(vals)
        tail_n = abs(vals[-1]) * ratio / (1.0 - ratio) if ratio < 1.0 else np.inf
        total = abs(_sum_primed(vals)[0])
        # on a hard-cap hit the unresolved tail stays in the error estimate
        # and the tolerance check downstream raises with the partial result
        if tail_n <= 0.25 * max(spec.rel_tol * total, epsabs) or n_rows >= spec.n_max_hard:
            return vals, qerr, tail_n, w_max, n_rows
        n_rows = min(int(n_rows * 1.6) + 4, spec.n_max_hard)


def _frequency_tail(geom, cfg, n_rows, w_max, weight_power):
    """Envelope bound on the dropped w > w_max part of each row integral."""
    eps = geom.eps
    rows = np.abs(mode_log_term_rows(n_rows, np.array([w_max]), eps, cfg)[:, 0])
    if weight_power:
        per_row = rows * (w_max / (2.0 * eps) + 0.25 / (eps * eps))
    else:
        per_row = rows / (2.0 * eps)
    return _sum_primed(per_row)[0]


def _zero_t_scalar(geom, cfg, spec):
    vals, qerr, tail_n, w_max, n_rows = _row_integrals(geom, cfg, spec, weight_power=True)
    bracket, _ = _sum_primed(vals)
    tail_w = _frequency_tail(geom, cfg, n_rows, w_max, weight_power=True)
    n_sig = int(np.count_nonzero(np.abs(vals) > qerr)) + 1
    pref = 1.0 / (2.0 * math.pi * geom.a1**2)
    result = EnergyResult(
        value=float(pref * bracket),
        err_estimate=float(pref * (qerr * n_sig + tail_n + abs(tail_w))),
        n_used=n_rows,
        l_used=0,
        regime=REGIME_ZERO_T,
    )
    return _check_tolerance(result, spec)


def _classical_scalar(geom, cfg, T, spec):
    vals, qerr, tail_n, w_max, n_rows = _row_integrals(geom, cfg, spec, weight_power=False)
    bracket, _ = _sum_primed(vals)
    tail_w = _frequency_tail(geom, cfg, n_rows, w_max, weight_power=False)
    n_sig = int(np.count_nonzero(np.abs(vals) > qerr)) + 1
    pref = T / (math.pi * geom.a1)
    result = EnergyResult(
        value=float(pref * bracket),
        err_estimate=float(abs(pref) * (qerr * n_sig + tail_n + abs(tail_w))),
        n_used=n_rows,
        l_used=0,
        regime=REGIME_CLASSICAL,
    )
    return _check_tolerance(result, spec)


def zero_temperature_energy(geom, cfg, spec=DEFAULT_SPEC):
    """Zero-temperature interaction energy per unit length.

    Negative (attractive) for DD/NN/PCPC, positive (repulsive) for
    DN/ND/PCIP.  Raises :class:`ToleranceError` (carrying the partial result)
    if the requested tolerance cannot be certified.
    """
    return _channel_sum(_zero_t_scalar, geom, cfg, spec)


def classical_term(geom, cfg, T, spec=DEFAULT_SPEC):
    """Classical (zero Matsubara frequency) free energy per unit length;
    exactly linear in T."""
    if not T > 0.0:
        raise ValueError("classical term requires T > 0")
    return _channel_sum(_classical_scalar, geom, cfg, T, spec)


# ---------------------------------------------------------------------------
# zero temperature, double-integral form
# ---------------------------------------------------------------------------

def _transverse_integral_rows(n_rows, omega, w_max, eps, cfg, points):
    # the soft n = 0 log structure near r -> 0 only needs resolving while the
    # longitudinal frequency itself is small
    refine_zero = omega < 1.0
    kappa_max = math.sqrt(max(w_max * w_max - omega * omega, 0.0))
    kappa_max = max(kappa_max, 1e-8 * w_max)
    breaks = _kappa_breaks(omega, kappa_max, eps, refine_zero=refine_zero)
    nodes, wts = _panel_nodes(breaks, points)
    r = np.sqrt(omega * omega + nodes * nodes)
    rows = mode_log_term_rows(n_rows, r, eps, cfg)
    return rows @ wts


def _zero_t_double_scalar(geom, cfg, spec):
    eps = geom.eps
    n_rows, xi_max = cutoff_estimate(_tail_tol(spec), geom)
    n_rows = min(n_rows, spec.n_max_hard)
    w_max = geom.a1 * xi_max

    # trim the angular range to the realized decay profile (it is shared by
    # all longitudinal frequencies); the dropped tail is bounded below
    probe = _transverse_integral_rows(n_rows, 1e-3 * w_max, w_max, eps, cfg, spec.panel_points)
    if np.any(np.abs(probe) > 0.0):
        floor = spec.rel_tol * 1e-3 * float(np.max(np.abs(probe)))
        significant = np.flatnonzero(np.abs(probe) > floor)
        if significant.size:
            n_rows = min(int(significant[-1]) + 8, n_rows)

    def integrand(w):
        return _transverse_integral_rows(n_rows, w, w_max, eps, cfg, spec.panel_points)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        vals, qerr = quad_vec(
            integrand, 0.0, w_max,
            epsabs=max(spec.abs_tol * 0.1, 1e-300),
            epsrel=spec.rel_tol * 0.5,
            norm="max", limit=spec.quad_limit,
        )
    bracket, _ = _sum_primed(vals)

    # transverse-quadrature error from a halved-order comparison
    rel_inner = 0.0
    for w_probe in (1e-3 * w_max, w_max / 5.0):
        full = _sum_primed(_transverse_integral_rows(
            n_rows, w_probe, w_max, eps, cfg, spec.panel_points))[0]
        half = _sum_primed(_transverse_integral_rows(
            n_rows, w_probe, w_max, eps, cfg, max(spec.panel_points // 2, 6)))[0]
        rel_inner = max(rel_inner, abs(full - half) / max(abs(full), 1e-300))

    ratio = _geometric_ratio(vals)
    tail_n = abs(vals[-1]) * ratio / (1.0 - ratio) if ratio < 1.0 else np.inf
    tail_w = 0.5 * math.pi * _frequency_tail(geom, cfg, n_rows, w_max, weight_power=True)
    n_sig = int(np.count_nonzero(np.abs(vals) > qerr)) + 1
    pref = 1.0 / (math.pi**2 * geom.a1**2)
    err = pref * (qerr * n_sig + 2.0 * rel_inner * float(np.sum(np.abs(vals))) + tail_n + abs(tail_w))
    result = EnergyResult(
        value=float(pref * bracket),
        err_estimate=float(err),
        n_used=n_rows,
        l_used=0,
        regime=REGIME_ZERO_T,
    )
    return _check_tolerance(result, spec)


def zero_temperature_energy_double_form(geom, cfg, spec=DEFAULT_SPEC):
    """Zero-temperature energy from the double (frequency, wavenumber)
    quadrant integral; agrees with :func:`zero_temperature_energy` within the
    combined error estimates (polar-coordinates identity)."""
    return _channel_sum(_zero_t_double_scalar, geom, cfg, spec)


# ---------------------------------------------------------------------------
# Matsubara free energy
# ---------------------------------------------------------------------------

_DIRECT_L = 24          # Matsubara indices summed term by term
_CHEB_POINTS = 16       # interpolation nodes per geometric block


def _matsubara_scalar(geom, cfg, T, spec):
    classical = _classical_scalar(geom, cfg, T, spec)
    eps = geom.eps
    a1 = geom.a1
    thermal = ThermalState(T)
    n_rows, xi_max = cutoff_estimate(_tail_tol(spec), geom)
    n_rows = min(n_rows, spec.n_max_hard)
    dw = a1 * thermal.matsubara_frequency(1)
    w_max = max(a1 * xi_max, 1.05 * dw)
    pref = 2.0 * T / (math.pi * a1)
    rho_env = min(math.exp(-2.0 * eps * dw), 0.9995)

    state = {"n_eff": n_rows, "rel_q": 0.0, "tail_n_ratio": 0.0, "checks": 0}

    def term(w_l, check=False):
        """sum'_n of the transverse integrals at one (continuous) frequency."""
        kappa_max = math.sqrt(max(w_max * w_max - w_l * w_l, 1e-16 * w_max * w_max))
        breaks = _kappa_breaks(w_l, kappa_max, eps, refine_zero=False)
        nodes, wts = _panel_nodes(breaks, spec.panel_points)
        n_eff = state["n_eff"]
        rows = mode_log_term_rows(n_eff, np.sqrt(w_l * w_l + nodes * nodes), eps, cfg)
        F = rows @ wts
        S = float(_sum_primed(F)[0])
        if check and S != 0.0:
            nodes2, wts2 = _panel_nodes(breaks, max(spec.panel_points // 2, 6))
            rows2 = mode_log_term_rows(n_eff, np.sqrt(w_l * w_l + nodes2 * nodes2), eps, cfg)
            S2 = float(_sum_primed(rows2 @ wts2)[0])
            state["rel_q"] = max(state["rel_q"], abs(S - S2) / abs(S))
            ratio_n = _geometric_ratio(F)
            if ratio_n < 1.0 and abs(S) > 0.0:
                state["tail_n_ratio"] = max(
                    state["tail_n_ratio"],
                    abs(F[-1]) * ratio_n / (1.0 - ratio_n) / abs(S),
                )
        return S, F

    acc = 0.0
    abs_acc = 0.0
    err_interp = 0.0
    tail_l = 0.0
    l_used = 0
    converged = False

    def target():
        running = abs(classical.value + pref * acc)
        return max(spec.abs_tol, spec.rel_tol * running)

    # direct part: the structured small-frequency region
    history = []
    l = 1
    while l <= _DIRECT_L:
        w_l = l * dw
        if w_l >= w_max:
            tail_l = abs(history[-1]) * rho_env / (1.0 - rho_env) if history else 0.0
            converged = True
            break
        S, F = term(w_l, check=(l <= 3))
        if l == 1 and np.any(np.abs(F) > 0.0):
            # the angular decay profile is frequency independent: rows that are
            # negligible at the first frequency stay negligible; the dropped
            # remainder is covered by tail_n_ratio
            floor = spec.rel_tol * 1e-3 * float(np.max(np.abs(F)))
            significant = np.flatnonzero(np.abs(F) > floor)
            if significant.size:
                state["n_eff"] = min(int(significant[-1]) + 8, n_rows)
        acc += S
        abs_acc += abs(S)
        history.append(S)
        l_used = l
        rho = max(rho_env, _geometric_ratio(history, lag=min(5, len(history) - 1))) if len(history) > 1 else rho_env
        tail_l = abs(S) * rho / (1.0 - rho)
        if (l >= 4 and pref * tail_l < 0.25 * target()) or S == 0.0:
            converged = True
            break
        l += 1

    # geometric blocks summed through a validated Chebyshev interpolant of
    # the smooth per-frequency term; on natural exit of the direct loop the
    # index l is the first uncomputed one
    l_lo = l
    while not converged:
        if l_lo > spec.l_max_hard:
            partial = EnergyResult(
                value=classical.value + pref * acc, err_estimate=np.inf,
                n_used=n_rows, l_used=l_used, regime=REGIME_MATSUBARA,
            )
            raise ToleranceError("Matsubara sum hit the hard cap", partial=partial)
        l_hi = min(2 * l_lo, spec.l_max_hard)
        while l_hi * dw >= w_max and l_hi > l_lo:
            l_hi -= 1
        if l_hi < l_lo:
            tail_l = abs(history[-1]) * rho_env / (1.0 - rho_env) if history else 0.0
            break
        count = l_hi - l_lo + 1
        w_lo = l_lo * dw
        w_hi = l_hi * dw
        if count <= _CHEB_POINTS + 4:
            block = 0.0
            for ll in range(l_lo, l_hi + 1):
                S, _ = term(ll * dw)
                block += S
                abs_acc += abs(S)
                last_S = S
        else:
            mid = 0.5 * (w_lo + w_hi)
            half = 0.5 * (w_hi - w_lo)
            theta = (2.0 * np.arange(_CHEB_POINTS) + 1.0) * math.pi / (2.0 * _CHEB_POINTS)
            xs = mid + half * np.cos(theta)
            ys = np.array([term(float(x))[0] for x in xs])
            poly = np.polynomial.chebyshev.Chebyshev.fit(xs, ys, deg=_CHEB_POINTS - 1, domain=[w_lo, w_hi])
            w_all = dw * np.arange(l_lo, l_hi + 1)
            interp = poly(w_all)
            block = float(np.sum(interp))
            abs_acc += float(np.sum(np.abs(interp)))
            S_v, _ = term(mid)
            err_interp += abs(S_v - float(poly(mid))) * count
            last_S = float(interp[-1])
        acc += block
        l_used = l_hi
        history.append(last_S)
        tail_l = abs(last_S) * rho_env / (1.0 - rho_env)
        if pref * tail_l < 0.25 * target() or last_S == 0.0:
            break
        l_lo = l_hi + 1

    value = classical.value + pref * acc
    err = classical.err_estimate + pref * (
        2.0 * state["rel_q"] * abs_acc
        + state["tail_n_ratio"] * abs_acc
        + err_interp
        + tail_l
    )
    result = EnergyResult(
        value=float(value),
        err_estimate=float(err),
        n_used=max(classical.n_used, n_rows),
        l_used=l_used,
        regime=REGIME_MATSUBARA,
    )
    return _check_tolerance(result, spec)


def free_energy_matsubara(geom, cfg, T, spec=DEFAULT_SPEC):
    """Finite-temperature free energy per unit length (Matsubara sum).

    ``T = 0`` routes to :func:`zero_temperature_energy`, where the Matsubara
    representation is ill defined.
    """
    if T < 0.0:
        raise ValueError("temperature must be nonnegative")
    if T == 0.0:
        return zero_temperature_energy(geom, cfg, spec)
    return _channel_sum(_matsubara_scalar, geom, cfg, T, spec)


# ---------------------------------------------------------------------------
# Poisson-resummed thermal correction (validation-grade path)
# ---------------------------------------------------------------------------

_J0_ZEROS_CACHE = {}
_SEGMENT_CAP = 72


def _j0_zeros(count):
    if count not in _J0_ZEROS_CACHE:
        _J0_ZEROS_CACHE[count] = sp.jn_zeros(0, count)
    return _J0_ZEROS_CACHE[count]


def _euler_accelerate(partials):
    """Limit of oscillating partial sums by iterated averaging.

    Returns (value, error estimate from the difference of the two deepest
    averaging depths).
    """
    def collapse(seq):
        s = np.asarray(seq, dtype=float)
        while s.size > 1:
            s = 0.5 * (s[:-1] + s[1:])
        return float(s[0])

    window = min(len(partials), 24)
    full = collapse(partials[-window:])
    coarse = collapse(partials[-(window - 1):]) if window > 1 else full
    return full, abs(full - coarse)


def _oscillatory_row_integral(n, alpha, w_max, eps, cfg, points):
    """int_0^~inf w J0(alpha w) g_n(w) dw split at the J0 zeros.

    If the envelope cutoff w_max is reached the segment sum is exact (up to
    panel error); otherwise the alternating tail is accelerated.
    """
    zeros = _j0_zeros(_SEGMENT_CAP)
    bounds = zeros / alpha
    covered = bounds[-1] >= w_max
    if covered:
        last = int(np.searchsorted(bounds, w_max))
        edges = np.concatenate(([0.0], bounds[:last], [w_max]))
    else:
        edges = np.concatenate(([0.0], bounds))
    x, gw = _leggauss(points)
    a = edges[:-1]
    b = edges[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    wts = half[:, None] * gw[None, :]
    flat = nodes.ravel()
    g = mode_log_term_single(n, flat, eps, cfg).reshape(nodes.shape)
    seg = np.sum(wts * nodes * sp.j0(alpha * nodes) * g, axis=1)
    if covered:
        return float(np.sum(seg)), 1e-12 * float(np.sum(np.abs(seg)))
    partials = np.cumsum(seg)
    value, acc_err = _euler_accelerate(partials)
    return value, acc_err + 1e-12 * float(np.sum(np.abs(seg)))


def _poisson_scalar(geom, cfg, T, spec):
    if geom.a1 * T > 1.0:
        warnings.warn(
            "Poisson-resummed correction converges slowly for a1*T > 1; "
            "use the Matsubara representation instead",
            RuntimeWarning,
            stacklevel=3,
        )
    eps = geom.eps
    a1 = geom.a1
    _, xi_max = cutoff_estimate(_tail_tol(spec), geom)
    w_max = a1 * xi_max
    pref = 1.0 / (math.pi * a1 * a1)

    acc = 0.0
    err_acc = 0.0
    n = 0
    n_terms = []
    l_deep = 0
    while True:
        phi_sum = 0.0
        phi_hist = []
        l = 1
        while True:
            alpha = l / (a1 * T)
            phi, perr = _oscillatory_row_integral(n, alpha, w_max, eps, cfg, 12)
            phi_sum += phi
            err_acc += perr
            phi_hist.append(phi)
            target = max(spec.abs_tol, spec.rel_tol * abs(acc + phi_sum))
            if l >= 4:
                # polynomial decay in l: fit the local power and bound the tail
                p_lo = abs(phi_hist[-3])
                p_hi = abs(phi_hist[-1])
                if p_hi == 0.0:
                    tail = 0.0
                else:
                    power = math.log(max(p_lo / p_hi, 1.001)) / math.log(l / (l - 2.0))
                    power = max(power, 1.2)
                    tail = p_hi * l / (power - 1.0)
                if tail < 0.25 * target:
                    err_acc += tail
                    break
            l += 1
            if l > spec.l_max_hard:
                raise ToleranceError("oscillatory sum hit the hard cap", partial=None)
        l_deep = max(l_deep, l)
        weight = 0.5 if n == 0 else 1.0
        acc += weight * phi_sum
        n_terms.append(weight * phi_sum)
        ratio = _geometric_ratio(n_terms) if len(n_terms) > 1 else 0.9
        tail_n = abs(n_terms[-1]) * ratio / (1.0 - ratio)
        if n >= 3 and tail_n < 0.25 * max(spec.abs_tol, spec.rel_tol * abs(acc)):
            err_acc += tail_n
            break
        n += 1
        if n > spec.n_max_hard:
            raise ToleranceError("oscillatory mode sum hit the hard cap", partial=None)

    result = EnergyResult(
        value=float(pref * acc),
        err_estimate=float(pref * err_acc),
        n_used=n,
        l_used=l_deep,
        regime=REGIME_POISSON,
    )
    return result


def thermal_correction_poisson(geom, cfg, T, spec=DEFAULT_SPEC):
    """Thermal correction as the oscillatory (Poisson-resummed) series.

    Validation-grade: adding it to the zero-temperature energy reproduces the
    Matsubara free energy.  The Matsubara path is the production one.
    """
    if not T > 0.0:
        raise ValueError("thermal correction requires T > 0")
    return _channel_sum(_poisson_scalar, geom, cfg, T, spec)


# ---------------------------------------------------------------------------
# low-temperature leading correction and its phase function
# ---------------------------------------------------------------------------

def thermal_leading(inner_bc, a1, T):
    """Leading low-temperature thermal correction per unit length.

    Depends only on the boundary condition of the *inner* cylinder:
    Dirichlet gives pi T^2 / (6 log(a1 T)) (order T^2/log T, negative);
    Neumann gives (pi^3/90) a1^2 T^4 (order T^4).  Valid for a1*T < 1.
    """
    if inner_bc not in (DIRICHLET, NEUMANN):
        raise ValueError(f"unknown boundary condition {inner_bc!r}")
    if not (a1 > 0.0 and T > 0.0):
        raise ValueError("need a1 > 0 and T > 0")
    x = a1 * T
    if x >= 1.0:
        raise ValueError(f"thermal_leading requires a1*T < 1, got {x}")
    if inner_bc == DIRICHLET:
        value = math.pi * T * T / (6.0 * math.log(x))
        err = abs(value) / abs(math.log(x))
    else:
        value = (math.pi**3 / 90.0) * a1 * a1 * T**4
        err = abs(value) * x
    return EnergyResult(
        value=value, err_estimate=err, n_used=0, l_used=0, regime=REGIME_THERMAL_LEADING
    )


def abel_plana_phase(n, omega, inner_bc):
    """Real phase 2*arctan of the inner-cylinder standing-wave ratio.

    Uses J_n/Y_n for a Dirichlet inner cylinder and J_n'/Y_n' for a Neumann
    one; poles of the ratio are absorbed by the arctangent.
    """
    if not omega > 0.0:
        raise ValueError("omega must be positive")
    if inner_bc == DIRICHLET:
        num, den = bessel_j(n, omega), bessel_y(n, omega)
    elif inner_bc == NEUMANN:
        num, den = bessel_j_prime(n, omega), bessel_y_prime(n, omega)
    else:
        raise ValueError(f"unknown boundary condition {inner_bc!r}")
    if den == 0.0:
        return math.copysign(math.pi, num)
    return 2.0 * math.atan(num / den)
