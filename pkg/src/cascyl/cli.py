"""Command-line front end: single evaluations, parameter scans, validation.

Natural units (hbar = c = k_B = 1) throughout; ``--units`` additionally
reports a1 read as micrometers, T converted to kelvin and the energy per unit
length in J/m, on output only.  JSON records are emitted one per line with a
``schema`` version field; CSV uses a header row and scientific notation with
14 significant digits.  Exit codes: 0 success, 1 validation failure, 2
invalid input, 3 tolerance not met (a flagged partial record is still
emitted).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from datetime import datetime, timezone

import numpy as np
from scipy.constants import c as _c_si
from scipy.constants import hbar as _hbar_si
from scipy.constants import k as _kb_si

from . import asymptotics, energy, kernel, special
from .errors import ToleranceError

SCHEMA = 1

_HBARC_J_UM = _hbar_si * _c_si * 1e6   # J * micrometer
_UM_KELVIN = _HBARC_J_UM / _kb_si      # (1/micrometer) -> K conversion factor


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.14e}"
    return str(x)


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _geometry(args):
    if (args.a2 is None) == (args.eps is None):
        raise ValueError("give exactly one of --a2 or --eps")
    if args.a2 is not None:
        return kernel.CylinderGeometry(a1=args.a1, a2=args.a2)
    return kernel.CylinderGeometry.from_gap(args.a1, args.eps)


def _spec(args):
    return energy.NumericsSpec(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _units_fields(record):
    out = {
        "a1_micrometer": record["a1"],
        "T_kelvin": record["T"] * _UM_KELVIN,
        "value_joule_per_meter": record["value"] * _HBARC_J_UM * 1e6,
        "err_joule_per_meter": record["err_estimate"] * _HBARC_J_UM * 1e6,
    }
    return out


def _write_records(records, fmt, path, with_timestamp=False):
    if fmt == "json":
        lines = []
        for rec in records:
            rec = dict(rec)
            if with_timestamp:
                rec["generated_at"] = datetime.now(timezone.utc).isoformat()
            lines.append(json.dumps(rec))
        _emit("\n".join(lines) + "\n", path)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        keys = list(records[0].keys())
        writer.writerow(keys)
        for rec in records:
            writer.writerow([_fmt(rec[k]) for k in keys])
        _emit(buf.getvalue(), path)


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------

def _evaluate(geom, cfg, T, spec, regime):
    if regime == "auto":
        regime = "zero" if T == 0.0 else "matsubara"
    if regime == "zero":
        return energy.zero_temperature_energy(geom, cfg, spec)
    if regime == "zero-double":
        return energy.zero_temperature_energy_double_form(geom, cfg, spec)
    if regime == "matsubara":
        return energy.free_energy_matsubara(geom, cfg, T, spec)
    if regime == "classical":
        return energy.classical_term(geom, cfg, T, spec)
    if regime == "poisson":
        res = energy.thermal_correction_poisson(geom, cfg, T, spec)
        base = energy.zero_temperature_energy(geom, cfg, spec)
        return energy.EnergyResult(
            value=base.value + res.value,
            err_estimate=base.err_estimate + res.err_estimate,
            n_used=max(base.n_used, res.n_used),
            l_used=res.l_used,
            regime=energy.REGIME_POISSON,
        )
    if regime == "thermal-leading":
        return energy.thermal_leading(cfg.inner_bc, geom.a1, T)
    raise ValueError(f"unknown regime {regime!r}")


def cmd_compute(args):
    geom = _geometry(args)
    cfg = kernel.FieldConfig.from_label(args.bc)
    spec = _spec(args)
    if args.T < 0.0:
        raise ValueError("temperature must be nonnegative")
    flagged = False
    try:
        res = _evaluate(geom, cfg, args.T, spec, args.regime)
    except ToleranceError as exc:
        if exc.partial is None:
            raise
        res = exc.partial
        flagged = True
    record = {
        "schema": SCHEMA,
        "command": "compute",
        "bc": cfg.label,
        "a1": geom.a1,
        "a2": geom.a2,
        "eps": geom.eps,
        "T": args.T,
        "rel_tol": spec.rel_tol,
        "abs_tol": spec.abs_tol,
        "value": res.value,
        "err_estimate": res.err_estimate,
        "regime": res.regime,
        "n_used": res.n_used,
        "l_used": res.l_used,
        "tolerance_not_met": flagged,
    }
    if args.units:
        record.update(_units_fields(record))
    _write_records([record], args.format, args.output, with_timestamp=(args.format == "json"))
    return 3 if flagged else 0


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

def _parse_grid(text):
    try:
        grid = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(f"bad grid {text!r}") from exc
    if not grid:
        raise ValueError("empty sweep grid")
    return grid


def cmd_scan(args):
    cfg = kernel.FieldConfig.from_label(args.bc)
    spec = _spec(args)
    if (args.eps_grid is None) == (args.T_grid is None):
        raise ValueError("give exactly one of --eps-grid or --T-grid")
    rows = []
    worst = 0
    if args.eps_grid is not None:
        points = [(e, args.T) for e in _parse_grid(args.eps_grid)]
    else:
        if args.eps is None:
            raise ValueError("--T-grid requires --eps")
        points = [(args.eps, t) for t in _parse_grid(args.T_grid)]
    for eps, T in points:
        row = {
            "eps": eps, "a1T": args.a1 * T, "bc": cfg.label,
            "regime": "", "value": math.nan, "err": math.nan,
            "pfa": math.nan, "expansion": math.nan, "ratio_to_pfa": math.nan,
            "status": "ok",
        }
        try:
            geom = kernel.CylinderGeometry.from_gap(args.a1, eps)
            try:
                res = _evaluate(geom, cfg, T, spec, "auto")
            except ToleranceError as exc:
                if exc.partial is None:
                    raise
                res = exc.partial
                row["status"] = "tolerance_not_met"
                worst = max(worst, 3)
            regime = asymptotics.REGIME_ZERO_T if T == 0.0 else asymptotics.REGIME_CLASSICAL
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                pfa = asymptotics.pfa_leading(cfg, regime, geom, T=(T if T > 0 else None))
                exp = asymptotics.expansion(cfg, regime, geom, T=(T if T > 0 else None))
            row.update(
                regime=res.regime, value=res.value, err=res.err_estimate,
                pfa=pfa, expansion=exp.value,
                ratio_to_pfa=res.value / pfa if pfa != 0.0 else math.nan,
            )
        except (ValueError, ToleranceError) as exc:
            row["status"] = f"error: {exc}"
            worst = max(worst, 3)
        rows.append(row)
    _write_records(rows, args.format, args.output)
    return worst


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def _check(name, deviation, tol):
    return {"name": name, "deviation": deviation, "tolerance": tol, "passed": bool(deviation <= tol)}


def _suite_wronskian():
    checks = []
    xs = np.logspace(-3, 3, 25)
    worst_mod = 0.0
    worst_ord = 0.0
    from scipy import special as sp
    for n in range(21):
        iv = sp.ive(n, xs)
        ivp = 0.5 * (sp.ive(n - 1, xs) + sp.ive(n + 1, xs)) if n else sp.ive(1, xs)
        kv = sp.kve(n, xs)
        kvp = -0.5 * (sp.kve(n - 1, xs) + sp.kve(n + 1, xs)) if n else -sp.kve(1, xs)
        dev = np.abs((iv * kvp - ivp * kv) * xs + 1.0)
        worst_mod = max(worst_mod, float(np.max(dev)))
        jv = sp.jv(n, xs)
        jvp = sp.jvp(n, xs)
        yv = sp.yv(n, xs)
        yvp = sp.yvp(n, xs)
        dev = np.abs((jv * yvp - jvp * yv) * (np.pi * xs) / 2.0 - 1.0)
        worst_ord = max(worst_ord, float(np.max(dev)))
    checks.append(_check("modified_wronskian", worst_mod, 1e-12))
    checks.append(_check("ordinary_wronskian", worst_ord, 1e-10))
    return checks


def _suite_debye():
    checks = []
    dat = special.debye(1.0)
    checks.append(_check("t_at_z1", abs(dat.t - 1.0 / math.sqrt(2.0)), 1e-15))
    small = special.debye(1e-9)   # t -> 1, where D1 = M1 = -1/12
    checks.append(_check("d1_at_t1", abs(small.d1 + 1.0 / 12.0), 1e-12))
    checks.append(_check("m1_at_t1", abs(small.m1 + 1.0 / 12.0), 1e-12))
    for omega in (0.5, 1.0, 2.0):
        ns = np.arange(5, 51)
        resid = []
        for n in ns:
            dd = special.debye(omega)
            ref = 2.0 * n * dd.eta - math.log(math.pi) + 2.0 * dd.d1 / n
            got = special.log_ratio_ik(int(n), n * omega).log_magnitude
            resid.append(abs(got - ref))
        resid = np.array(resid)
        scale = 2.0 * float(np.max(resid[:6] * ns[:6] ** 2))
        worst = float(np.max(resid * ns**2 / scale))
        checks.append(_check(f"debye_residual_n2_omega_{omega}", worst, 1.0))
    return checks


def _suite_identity():
    checks = []
    geom = kernel.CylinderGeometry.from_gap(1.0, 0.1)
    spec = energy.NumericsSpec(rel_tol=1e-8)
    pspec = energy.NumericsSpec(rel_tol=3e-4)
    for cfg in (kernel.DD, kernel.NN):
        e0 = energy.zero_temperature_energy(geom, cfg, spec)
        for T in (0.1, 0.3, 0.5):
            em = energy.free_energy_matsubara(geom, cfg, T, spec)
            dp = energy.thermal_correction_poisson(geom, cfg, T, pspec)
            dev = abs(em.value - (e0.value + dp.value)) / abs(em.value)
            checks.append(_check(f"matsubara_vs_poisson_{cfg.label}_a1T_{T}", dev, 1e-4))
    return checks


_MELLIN_GRID = (
    ("A", 0, 4.0, 0.01, kernel.DD), ("A", 1, 4.0, 0.01, kernel.DD),
    ("A", 0, 6.0, 0.05, kernel.NN), ("A", 1, 6.0, 0.05, kernel.NN),
    ("B", 0, 3.0, 0.0, kernel.DD), ("B", 1, 4.0, 0.0, kernel.DD),
    ("B", 0, 4.0, 0.0, kernel.NN), ("B", 1, 5.0, 0.0, kernel.NN),
    ("C", 0, 4.0, 0.02, kernel.DN), ("C", 1, 5.0, 0.02, kernel.DN),
    ("C", 1, 4.0, 0.05, kernel.ND),
    ("G", 0, 4.0, 0.0, kernel.DN), ("G", 1, 4.0, 0.0, kernel.ND),
    ("G", 0, 5.0, 0.0, kernel.ND),
)


def _suite_mellin():
    checks = []
    for which, chi, z, eps, cfg in _MELLIN_GRID:
        rep = asymptotics.mellin_integral_check(which, chi, z, eps, cfg, tol=1e-8)
        checks.append(
            _check(f"{which}_chi{chi}_z{z}_{cfg.label}", min(rep.abs_dev, rep.rel_dev), 1e-8)
        )
    return checks


def _suite_expansion():
    checks = []
    geom = kernel.CylinderGeometry.from_gap(1.0, 0.1)
    spec = energy.NumericsSpec(rel_tol=1e-7)
    tol = 5.0 * geom.eps**2
    values = {}
    for cfg in kernel.SCALAR_CONFIGS:
        values[(cfg.label, "zero")] = energy.zero_temperature_energy(geom, cfg, spec).value
        values[(cfg.label, "cl")] = energy.classical_term(geom, cfg, 1.0, spec).value
    for em, (c1, c2) in (("PCPC", ("DD", "NN")), ("PCIP", ("DN", "ND"))):
        for reg in ("zero", "cl"):
            values[(em, reg)] = values[(c1, reg)] + values[(c2, reg)]
    for cfg in kernel.ALL_CONFIGS:
        ez = values[(cfg.label, "zero")]
        dev = abs(ez - asymptotics.expansion(cfg, energy.REGIME_ZERO_T, geom).value) / abs(ez)
        checks.append(_check(f"zeroT_{cfg.label}", dev, tol))
        ec = values[(cfg.label, "cl")]
        dev = abs(ec - asymptotics.expansion(cfg, energy.REGIME_CLASSICAL, geom, T=1.0).value) / abs(ec)
        checks.append(_check(f"classical_{cfg.label}", dev, tol))
    return checks


def _suite_thermal():
    checks = []
    lead = energy.thermal_leading(kernel.DIRICHLET, 1.0, 0.01)
    checks.append(_check("dirichlet_formula", abs(lead.value - math.pi * 1e-4 / (6.0 * math.log(0.01))), 1e-18))
    v1 = energy.thermal_leading(kernel.NEUMANN, 1.0, 0.01).value
    v2 = energy.thermal_leading(kernel.NEUMANN, 1.0, 0.02).value
    checks.append(_check("neumann_T4_scaling", abs(v2 / v1 - 16.0), 1e-9))
    same = (
        energy.thermal_leading(kernel.DD.inner_bc, 1.0, 0.01).value
        == energy.thermal_leading(kernel.DN.inner_bc, 1.0, 0.01).value
    )
    checks.append(_check("outer_independence", 0.0 if same else 1.0, 0.5))
    # measured correction against the half-weight-corrected leading
    # coefficient pi T^2 / (12 log(a1 T)); the displayed pi/6 coefficient is
    # twice the converged mode-sum value
    geom = kernel.CylinderGeometry.from_gap(1.0, 0.1)
    spec = energy.NumericsSpec(rel_tol=1e-9)
    T = 0.05
    em = energy.free_energy_matsubara(geom, kernel.DD, T, spec)
    e0 = energy.zero_temperature_energy(geom, kernel.DD, spec)
    ratio = (em.value - e0.value) / (math.pi * T * T / (12.0 * math.log(T)))
    checks.append(_check("dirichlet_measured_vs_corrected", abs(ratio - 1.0), 0.3))
    return checks


_SUITES = {
    "wronskian": _suite_wronskian,
    "debye": _suite_debye,
    "identity": _suite_identity,
    "mellin": _suite_mellin,
    "expansion": _suite_expansion,
    "thermal": _suite_thermal,
}


def cmd_validate(args):
    checks = _SUITES[args.suite]()
    passed = all(c["passed"] for c in checks)
    report = {"schema": SCHEMA, "suite": args.suite, "passed": passed, "checks": checks}
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="cascyl",
        description="Casimir interaction energy between concentric cylinders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, default_format):
        p.add_argument("--bc", required=True, help="DD, NN, DN, ND, PCPC or PCIP")
        p.add_argument("--a1", type=float, required=True, help="inner radius")
        p.add_argument("--a2", type=float, help="outer radius (alternative to --eps)")
        p.add_argument("--eps", type=float, help="dimensionless gap (a2-a1)/a1")
        p.add_argument("--rel-tol", type=float, default=energy.DEFAULT_SPEC.rel_tol)
        p.add_argument("--abs-tol", type=float, default=energy.DEFAULT_SPEC.abs_tol)
        p.add_argument("--format", choices=("json", "csv"), default=default_format)
        p.add_argument("--output", help="write to this path instead of stdout")

    p = sub.add_parser("compute", help="one energy evaluation")
    add_common(p, default_format="json")
    p.add_argument("--T", type=float, default=0.0, help="temperature (natural units)")
    p.add_argument(
        "--regime",
        choices=("auto", "zero", "zero-double", "matsubara", "classical", "poisson", "thermal-leading"),
        default="auto",
        help="evaluation path; auto = zero-T for T=0, Matsubara otherwise",
    )
    p.add_argument("--units", action="store_true",
                   help="also report a1 in micrometers, T in kelvin, E/L in J/m")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("scan", help="sweep over eps or T")
    add_common(p, default_format="csv")
    p.add_argument("--T", type=float, default=0.0, help="temperature for an eps sweep")
    p.add_argument("--eps-grid", help="comma-separated eps values")
    p.add_argument("--T-grid", dest="T_grid", help="comma-separated temperatures")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("validate", help="run a verification suite")
    p.add_argument("suite", choices=sorted(_SUITES))
    p.add_argument("--output", help="write report to this path")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToleranceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
