"""Verification campaigns and their CSV/JSON reports.

Each subcommand runs one campaign: `verify-main` compares the exact sum
against its leading asymptotic at fixed u, `verify-ah` does the u = 0
specialization, `verify-phi0` checks the growth-rate sign and monotonicity
properties on a u grid, `contour-oracle` replays the integral-representation
identity, and `torus` exercises the torus-knot closed forms.  Campaigns
produce VerificationRow records, serialized with 40 significant digits so
that every stored ratio can be recomputed from the file itself well below
the assertion tolerances.

Reports are written in N order, computed sequentially: the row math is pure
and could fan out, but a fixed arithmetic order keeps reruns byte-identical
(elapsed_ms, which times wall clock, is the one column exempt from that).

Exit codes: 0 all assertions passed, 1 an assertion failed, 2 the
configuration was rejected before any math ran.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from mpmath import mp, mpf, mpc

from .cjones import KnotParam, eval_at_xi, u_ceiling
from .dilog import li2
from .errors import ArgError, AssertionFailure, DomainError
from .geometry import (fourth_quadrant_sqrt, potential, s_of_u, saddle_point,
                       t_of_u, torus_T_k, _r_root)
from .precision import BigComplex, default_prec_bits
from .saddle import N_MAX_CONTOUR, reconstruct_jn_via_contour

DIGITS = 40
CSV_HEADER = "n,u,exact_re,exact_im,pred_re,pred_im,ratio_re,ratio_im,abs_err,elapsed_ms"
MODES = ("main", "ah", "phi0", "contour-oracle", "torus-formulas")
_PHI0_ENDPOINT_OFFSET = mpf("1e-6")
_PHI0_ENDPOINT_CAP = mpf("1e-7")


@dataclass(frozen=True)
class VerificationRow:
    N: int
    u: mpf
    exact: BigComplex
    predicted: BigComplex
    ratio: BigComplex
    abs_ratio_minus_1: mpf
    elapsed_ms: int


@dataclass(frozen=True)
class CampaignConfig:
    mode: str
    u: str = "0.5"
    N_list: tuple = (50, 100, 200)
    tol: str = "0.1"
    out_format: str = "csv"
    prec_bits: int = 0
    grid_points: int = 20
    torus_a: int = 2
    torus_b: int = 3

    def __post_init__(self):
        if self.mode not in MODES:
            raise ArgError(f"unknown mode {self.mode!r}")
        if self.out_format not in ("csv", "json"):
            raise ArgError(f"unknown output format {self.out_format!r}")
        if list(self.N_list) != sorted(set(self.N_list)):
            raise ArgError(f"N_list must be strictly increasing, got {self.N_list}")
        if self.N_list and self.N_list[0] < 1:
            raise ArgError(f"N_list entries must be positive, got {self.N_list}")
        if self.grid_points < 2:
            raise ArgError(f"grid_points must be at least 2, got {self.grid_points}")


def _finish_row(N, u, exact: BigComplex, predicted: BigComplex, t0,
                prec: int) -> VerificationRow:
    elapsed = int(round((time.perf_counter() - t0) * 1000))
    with mp.workprec(prec + 10):
        pc = predicted.to_mpc()
        if pc == 0:
            # torus rows at vanishing k: ratio is conventionally 1 and the
            # error column switches to the absolute difference
            ratio = mpc(1)
            dev = abs(exact.to_mpc() - pc)
        else:
            ratio = exact.to_mpc() / pc
            dev = abs(ratio - 1)
    with mp.workprec(prec):
        return VerificationRow(N, +mpf(u), exact, predicted,
                               BigComplex(+ratio.real, +ratio.imag, prec),
                               +dev, elapsed)


def _predicted_main(u: mpf, N: int, prec: int) -> BigComplex:
    """Leading asymptotic of J_N at xi = u + 2 pi i, in the display form
    sqrt(2 pi N) exp(N S(u)/xi) / (2 sinh(u/2) root4q(-xi r)) whose single
    root keeps the branch unambiguous."""
    with mp.workprec(prec + 10):
        xi = mpc(u, 2 * mp.pi)
        S = s_of_u(u, prec).to_mpc()
        r = _r_root(mp.exp(u) + mp.exp(-u))
        den = fourth_quadrant_sqrt(BigComplex.make(-xi * r, prec + 10)).to_mpc()
        val = mp.sqrt(2 * mp.pi * N) * mp.exp(N * S / xi) \
            / (2 * mp.sinh(u / 2) * den)
        lit = _predicted_main_literal(u, N)
        if abs(val - lit) > abs(val) * mpf(2) ** (-(prec // 2)):
            raise AssertionFailure(
                "asymptotic branch forms disagree", offenders=[(u, N)])
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def _predicted_main_literal(u: mpf, N: int) -> mpc:
    # sqrt(-pi)/(2 sinh(u/2)) T(u)^{1/2} (N/xi)^{1/2} exp(N S(u)/xi); the
    # T and N/xi roots are fourth-quadrant, sqrt(-pi) is the principal
    # +i sqrt(pi) (its lower root flips the product to the wrong sheet)
    prec = mp.prec
    xi = mpc(u, 2 * mp.pi)
    S = s_of_u(u, prec).to_mpc()
    rt_T = fourth_quadrant_sqrt(t_of_u(u, prec)).to_mpc()
    rt_Nxi = fourth_quadrant_sqrt(BigComplex.make(mpc(N) / xi, prec)).to_mpc()
    return mp.sqrt(-mp.pi) / (2 * mp.sinh(u / 2)) * rt_T * rt_Nxi \
        * mp.exp(N * S / xi)


def verify_main(u, N_list, prec_bits: int | None = None) -> list:
    """Exact J_N against the leading asymptotic, one row per N."""
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        uu = mpf(u)
        if not (0 < uu < u_ceiling(prec)):
            raise DomainError(f"u = {uu} outside (0, u_max)")
    rows = []
    for N in N_list:
        t0 = time.perf_counter()
        exact = eval_at_xi(KnotParam.make(N, u, prec))
        predicted = _predicted_main(uu, N, prec)
        rows.append(_finish_row(N, uu, exact, predicted, t0, prec))
    return rows


def volume_constant(prec_bits: int | None = None) -> mpf:
    """Hyperbolic volume of the knot complement, 2 Im Li2(e^{i pi/3})."""
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        arg = BigComplex.make(mp.exp(mpc(0, mp.pi / 3)), prec + 10)
        vol = 2 * li2(arg).to_mpc().imag
    with mp.workprec(prec):
        return +vol


def verify_ah(N_list, prec_bits: int | None = None) -> list:
    """u = 0 specialization: J_N at the root of unity against
    3^{-1/4} N^{3/2} exp(N Vol / 2 pi)."""
    prec = prec_bits or default_prec_bits()
    vol = volume_constant(prec)
    rows = []
    for N in N_list:
        t0 = time.perf_counter()
        exact = eval_at_xi(KnotParam.make(N, 0, prec))
        with mp.workprec(prec + 10):
            pred = N ** mpf("1.5") * mp.exp(N * vol / (2 * mp.pi)) / mp.root(3, 4)
        with mp.workprec(prec):
            predicted = BigComplex(+pred, mpf(0), prec)
        rows.append(_finish_row(N, mpf(0), exact, predicted, t0, prec))
    return rows


def _phi0_point(u: mpf, prec: int):
    # growth rate along the exact ray: xi Phi(w0) = S(u) - 2 pi i u
    with mp.workprec(prec + 10):
        S = s_of_u(u, prec).to_mpc()
        return S - mpc(0, 2 * mp.pi) * u


def _phi0_campaign(grid_points: int, prec: int):
    """Rows pair xi Phi(w0), evaluated through the potential at the critical
    point, with its closed form S(u) - 2 pi i u; the assertions then check
    the sign and monotonicity of the shared imaginary part."""
    rows = []
    offenders = []
    with mp.workprec(prec + 10):
        umax = u_ceiling(prec)
        xi_im = 2 * mp.pi
        grid = [umax * j / (grid_points + 1) for j in range(1, grid_points + 1)]
        prev = None
        for u in grid:
            t0 = time.perf_counter()
            w0 = saddle_point(u, prec).w0.to_mpc()
            thru = mpc(u, xi_im) * potential(w0, u, prec).to_mpc()
            val = _phi0_point(u, prec)
            exact = BigComplex(+thru.real, +thru.imag, prec)
            predicted = BigComplex(+val.real, +val.imag, prec)
            rows.append(_finish_row(0, u, exact, predicted, t0, prec))
            # positivity of the growth rate and monotone decrease toward u_max
            if not val.imag > 0:
                offenders.append((u, "Im(xi Phi(w0)) <= 0"))
            if prev is not None and not val.imag < prev:
                offenders.append((u, "Im(xi Phi(w0)) not decreasing"))
            prev = val.imag
        edge = umax * (1 - _PHI0_ENDPOINT_OFFSET)
        if not abs(_phi0_point(edge, prec).imag) < _PHI0_ENDPOINT_CAP:
            offenders.append((edge, "Im(xi Phi(w0)) does not vanish at u_max"))
    return rows, offenders


def verify_phi0(grid_points: int = 20, prec_bits: int | None = None) -> list:
    """Growth-rate checks on a u grid; raises AssertionFailure on offenders."""
    prec = prec_bits or default_prec_bits()
    rows, offenders = _phi0_campaign(grid_points, prec)
    if offenders:
        raise AssertionFailure("growth-rate properties violated",
                               offenders=offenders)
    return rows


def _contour_campaign(u, N_list, tol, prec: int) -> list:
    rows = []
    with mp.workprec(prec + 10):
        quad_tol = mpf(tol) / 1000
        uu = mpf(u)
    for N in N_list:
        t0 = time.perf_counter()
        p = KnotParam.make(N, u, prec)
        exact = eval_at_xi(p)
        predicted = reconstruct_jn_via_contour(p, quad_tol=quad_tol)
        rows.append(_finish_row(N, uu, exact, predicted, t0, prec))
    return rows


def _torus_campaign(a: int, b: int, k_list, prec: int) -> list:
    rows = []
    for k in k_list:
        t0 = time.perf_counter()
        exact_val = torus_T_k(a, b, k, prec)
        with mp.workprec(prec + 10):
            if k % a == 0 or k % b == 0:
                pred = mpf(0)
            else:
                pred = 16 * mp.sin(k * mp.pi / a) ** 2 \
                    * mp.sin(k * mp.pi / b) ** 2 / (a * b)
        with mp.workprec(prec):
            exact = BigComplex(+mpf(exact_val), mpf(0), prec)
            predicted = BigComplex(+pred, mpf(0), prec)
        rows.append(_finish_row(k, mpf(0), exact, predicted, t0, prec))
    return rows


# -- report writing ------------------------------------------------------


def _fmt(x) -> str:
    return mp.nstr(mpf(x), DIGITS)


def _row_fields(row: VerificationRow) -> list:
    with mp.workprec(row.exact.prec_bits):
        e, p, r = row.exact.to_mpc(), row.predicted.to_mpc(), row.ratio.to_mpc()
        return [str(row.N), _fmt(row.u),
                _fmt(e.real), _fmt(e.imag),
                _fmt(p.real), _fmt(p.imag),
                _fmt(r.real), _fmt(r.imag),
                _fmt(row.abs_ratio_minus_1), str(row.elapsed_ms)]


def write_report(rows, sink, out_format: str) -> None:
    if out_format == "csv":
        sink.write(CSV_HEADER + "\n")
        for row in rows:
            sink.write(",".join(_row_fields(row)) + "\n")
    else:
        keys = CSV_HEADER.split(",")
        payload = []
        for row in rows:
            fields = _row_fields(row)
            rec = dict(zip(keys, fields))
            rec["n"] = row.N
            rec["elapsed_ms"] = row.elapsed_ms
            payload.append(rec)
        json.dump(payload, sink, indent=1)
        sink.write("\n")


# -- campaign assertions -------------------------------------------------


def _trend_offenders(rows, tol: mpf) -> list:
    """Strict decrease of |ratio - 1| plus a cap on the final row; a single
    row is reported, never judged."""
    if len(rows) < 2:
        return []
    bad = []
    for left, right in zip(rows, rows[1:]):
        if not right.abs_ratio_minus_1 < left.abs_ratio_minus_1:
            bad.append((right.N, "|ratio - 1| did not decrease"))
    if not rows[-1].abs_ratio_minus_1 < tol:
        bad.append((rows[-1].N, f"final |ratio - 1| not below {tol}"))
    return bad


def _log_slope_offenders(rows, prec: int) -> list:
    """(log|J_2N| - log|J_N|)/N against Vol/(2 pi), for the largest doubled
    pair in the campaign.  The N^{3/2} prefactor contributes 3 ln(2) / (2N),
    which the bound subtracts before applying a fixed 0.01 slack."""
    by_N = {row.N: row for row in rows}
    pairs = [N for N in by_N if 2 * N in by_N]
    if not pairs:
        return []
    N = max(pairs)
    with mp.workprec(prec + 10):
        target = volume_constant(prec) / (2 * mp.pi)
        slope = (mp.log(abs(by_N[2 * N].exact.to_mpc()))
                 - mp.log(abs(by_N[N].exact.to_mpc()))) / N
        drift = abs(slope - target - mpf(3) * mp.log(2) / (2 * N))
        if not drift < mpf("0.01"):
            return [(N, f"log-slope {mp.nstr(slope, 12)} off target "
                        f"{mp.nstr(target, 12)}")]
    return []


def run(config: CampaignConfig, sink) -> int:
    """Execute one campaign and write its report; returns the exit code."""
    prec = config.prec_bits or default_prec_bits()
    try:
        with mp.workprec(prec + 10):
            tol = mpf(config.tol)
            if config.mode in ("main", "contour-oracle"):
                uu = mpf(config.u)
                if not (0 < uu < u_ceiling(prec)):
                    raise ArgError(f"u = {config.u} outside (0, u_max)")
            if config.mode == "contour-oracle":
                if config.N_list and config.N_list[-1] > N_MAX_CONTOUR:
                    raise ArgError(
                        f"contour oracle capped at N = {N_MAX_CONTOUR}")
    except (ArgError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    offenders = []
    if config.mode == "main":
        rows = verify_main(config.u, config.N_list, prec)
        offenders = _trend_offenders(rows, tol)
    elif config.mode == "ah":
        rows = verify_ah(config.N_list, prec)
        offenders = _trend_offenders(rows, tol) \
            + _log_slope_offenders(rows, prec)
    elif config.mode == "phi0":
        rows, offenders = _phi0_campaign(config.grid_points, prec)
    elif config.mode == "contour-oracle":
        rows = _contour_campaign(config.u, config.N_list, tol, prec)
        offenders = [(row.N, f"|ratio - 1| above {tol}")
                     for row in rows if not row.abs_ratio_minus_1 <= tol]
    else:
        rows = _torus_campaign(config.torus_a, config.torus_b,
                               config.N_list, prec)
        offenders = [(row.N, "torus value off its closed form")
                     for row in rows if not row.abs_ratio_minus_1 <= tol]

    write_report(rows, sink, config.out_format)
    if offenders:
        for where, what in offenders:
            print(f"FAIL at {where}: {what}", file=sys.stderr)
        return 1
    return 0


# -- CLI -----------------------------------------------------------------


_MODE_BY_COMMAND = {
    "verify-main": "main",
    "verify-ah": "ah",
    "verify-phi0": "phi0",
    "contour-oracle": "contour-oracle",
    "torus": "torus-formulas",
}

_DEFAULTS = {
    "main": {"N_list": (50, 100, 200), "tol": "0.1"},
    "ah": {"N_list": (50, 100, 200), "tol": "0.1"},
    "phi0": {"N_list": (), "tol": "0.1"},
    "contour-oracle": {"N_list": (5, 8, 13, 21), "tol": "1e-6"},
    "torus-formulas": {"N_list": (1, 2, 3, 4, 5), "tol": "1e-30"},
}


def _parse_n_list(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ArgError(f"bad N list {text!r}") from None


def build_config(command: str, args, file_config: dict) -> CampaignConfig:
    mode = _MODE_BY_COMMAND[command]
    merged = dict(_DEFAULTS[mode])
    merged.update(file_config)
    for key in ("u", "tol", "out_format", "prec_bits", "grid_points",
                "torus_a", "torus_b"):
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    if getattr(args, "n_list", None) is not None:
        merged["N_list"] = _parse_n_list(args.n_list)
    merged["N_list"] = tuple(merged.get("N_list", ()))
    merged.setdefault("u", "0.5")
    merged["prec_bits"] = int(merged.get("prec_bits") or 0)
    return CampaignConfig(mode=mode, **merged)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fig8jones",
        description="verification campaigns for the figure-eight "
                    "colored Jones asymptotics")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in _MODE_BY_COMMAND:
        p = sub.add_parser(command)
        p.add_argument("--u", default=None)
        p.add_argument("--n-list", dest="n_list", default=None)
        p.add_argument("--tol", default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", dest="out_format",
                       choices=("csv", "json"), default=None)
        p.add_argument("--prec-bits", dest="prec_bits", type=int, default=None)
        p.add_argument("--config", default=None)
        if command == "verify-phi0":
            p.add_argument("--grid-points", dest="grid_points", type=int,
                           default=None)
        if command == "torus":
            p.add_argument("--a", dest="torus_a", type=int, default=None)
            p.add_argument("--b", dest="torus_b", type=int, default=None)
    args = parser.parse_args(argv)

    file_config = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2

    try:
        config = build_config(args.command, args, file_config)
    except (ArgError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.out and args.out != "-":
        with open(args.out, "w") as sink:
            return run(config, sink)
    return run(config, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
