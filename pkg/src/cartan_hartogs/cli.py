"""Command-line interface.

Subcommands: verify, scan-curvature, scan-equivalence, eval.  Exit codes:
0 on success, 1 when a verification check or domain membership fails, 2 on
usage or configuration errors.  CHG_SEED is the fallback seed when --seed is
not given.  Reports are deterministic for fixed flags and seed once
--no-timestamp is passed.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import bergman
from .bergman import BergmanCoeffs, fit_coeffs_p1, read_coeffs
from .curvature import Tangent, curvature_bounds, hsc
from .domain import DomainParams, Point, contains, special_K
from .errors import (
    CoefficientError,
    ConditioningError,
    DomainMembershipError,
    FitError,
    ProbeError,
    ShapeError,
    SingularityError,
    StencilError,
    SymmetryError,
)
from .kemetric import generating_function, metric_pullback
from .report import fmt, render_table
from .suites import DEFAULT_TOLS, curvature_scan_rows, equivalence_scan_rows, verify_suite


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartan-hartogs",
        description="Kähler-Einstein and Bergman geometry of Y_II(r, p; K)",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(sp, count_default=1000):
        sp.add_argument("--p", type=int, required=True, help="matrix size of the Cartan factor")
        sp.add_argument("--r", type=int, required=True, help="fiber dimension")
        sp.add_argument("--K", type=float, default=None, help="domain exponent K > 0")
        sp.add_argument(
            "--special-K",
            action="store_true",
            help="use K = p/2 + 1/(p+1)",
        )
        sp.add_argument("--seed", type=int, default=None, help="RNG seed (fallback: CHG_SEED)")
        sp.add_argument("--count", type=int, default=count_default, help="sample size")
        sp.add_argument("--out", type=Path, default=None, help="write the report here")
        sp.add_argument("--no-timestamp", action="store_true", help="omit the timestamp line")

    sp = sub.add_parser("verify", help="run the full invariant suite")
    common(sp)
    sp.add_argument(
        "--tol-overrides",
        default="",
        help="comma-separated name=value tolerance overrides",
    )
    sp.add_argument(
        "--near-boundary",
        action="store_true",
        help="raise the sampling cap to 1 - 1e-6",
    )

    sp = sub.add_parser("scan-curvature", help="sample the sectional curvature")
    common(sp)
    sp.add_argument("--jobs", type=int, default=1, help="parallel batch width")

    sp = sub.add_parser("scan-equivalence", help="scan the Bergman/KE metric ratios")
    common(sp, count_default=0)
    sp.add_argument("--coeffs", type=Path, default=None, help="Bergman coefficient file")
    sp.add_argument("--grid", type=int, default=256, help="scan grid size per axis")

    sp = sub.add_parser("eval", help="evaluate one quantity at one point")
    common(sp, count_default=0)
    sp.add_argument("--point", required=True, help="point file or inline 'Z = ...; w = ...'")
    sp.add_argument(
        "--what",
        required=True,
        choices=("g", "metric", "kernel", "curvature"),
        help="quantity to evaluate",
    )
    sp.add_argument("--tangent", default=None, help="tangent 'dz = ...; dw = ...' (curvature)")
    sp.add_argument("--coeffs", type=Path, default=None, help="Bergman coefficient file (kernel)")
    return parser


def _resolve_params(args) -> DomainParams:
    if args.p < 1 or args.r < 1:
        raise UsageError(f"need --p >= 1 and --r >= 1, got p={args.p}, r={args.r}")
    if args.K is not None and args.special_K:
        raise UsageError("--K and --special-K are mutually exclusive")
    if args.K is None and not args.special_K:
        if args.cmd in ("scan-curvature", "scan-equivalence"):
            return DomainParams(r=args.r, p=args.p, K=special_K(args.p))
        raise UsageError("one of --K or --special-K is required")
    K = special_K(args.p) if args.special_K else args.K
    if not K > 0.0:
        raise UsageError(f"need K > 0, got {K}")
    return DomainParams(r=args.r, p=args.p, K=K)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("CHG_SEED", "0"))


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


_PAIR = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")


def _parse_pairs(text: str) -> np.ndarray:
    values = [complex(float(a), float(b)) for a, b in _PAIR.findall(text)]
    return np.asarray(values, dtype=complex)


def _parse_sections(source: str, keys: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Parse 'key = (re,im) (re,im) ...' sections from a file or inline text."""
    path = Path(source)
    text = path.read_text(encoding="utf-8") if path.is_file() else source
    out: dict[str, np.ndarray] = {}
    for raw in re.split(r"[;\n]", text):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"expected 'name = (re,im) ...', got {line!r}")
        key, body = (part.strip() for part in line.split("=", 1))
        if key not in keys:
            raise UsageError(f"unknown field {key!r}; expected one of {keys}")
        out[key] = _parse_pairs(body)
    missing = set(keys) - out.keys()
    if missing:
        raise UsageError(f"missing fields: {sorted(missing)}")
    return out


def _parse_point(args, params: DomainParams) -> Point:
    fields = _parse_sections(args.point, ("Z", "w"))
    zvals = fields["Z"]
    if zvals.size != params.p * params.p:
        raise UsageError(
            f"Z needs p^2 = {params.p * params.p} row-major entries, got {zvals.size}"
        )
    if fields["w"].size != params.r:
        raise UsageError(f"w needs r = {params.r} entries, got {fields['w'].size}")
    try:
        return Point(zvals.reshape(params.p, params.p), fields["w"])
    except (ShapeError, SymmetryError) as exc:
        raise UsageError(f"bad point: {exc}") from exc


def _parse_tangent(args, params: DomainParams) -> Tangent:
    if args.tangent is None:
        raise UsageError("--tangent is required for --what curvature")
    fields = _parse_sections(args.tangent, ("dz", "dw"))
    if fields["dz"].size != params.m or fields["dw"].size != params.r:
        raise UsageError(
            f"tangent needs m = {params.m} dz entries and r = {params.r} dw entries"
        )
    return Tangent(fields["dz"], fields["dw"])


def _load_scan_coeffs(args, params: DomainParams) -> BergmanCoeffs:
    if args.coeffs is not None:
        if not args.coeffs.is_file():
            raise UsageError(f"coefficient file not found: {args.coeffs}")
        try:
            coeffs = read_coeffs(args.coeffs)
        except CoefficientError as exc:
            raise UsageError(f"bad coefficient file: {exc}") from exc
        if coeffs.p != params.p or coeffs.r != params.r:
            raise UsageError(
                f"coefficient file is for (r={coeffs.r}, p={coeffs.p}), "
                f"domain is (r={params.r}, p={params.p})"
            )
        return coeffs
    if params.p == 1:
        return fit_coeffs_p1(params.r)
    raise UsageError("--coeffs is required for p > 1")


def _cmd_verify(args) -> int:
    params = _resolve_params(args)
    if args.count < 1:
        raise UsageError(f"--count must be >= 1, got {args.count}")
    tols = {}
    if args.tol_overrides:
        for item in args.tol_overrides.split(","):
            if "=" not in item:
                raise UsageError(f"bad tolerance override {item!r}")
            name, value = item.split("=", 1)
            name = name.strip()
            if name not in DEFAULT_TOLS:
                raise UsageError(f"unknown tolerance {name!r}")
            tols[name] = float(value)
    report = verify_suite(
        params,
        seed=_resolve_seed(args),
        count=args.count,
        tols=tols,
        near_boundary=args.near_boundary,
    )
    _emit(report.render(timestamp=not args.no_timestamp), args.out)
    return 0 if report.passed else 1


def _cmd_scan_curvature(args) -> int:
    params = _resolve_params(args)
    if args.count < 1:
        raise UsageError(f"--count must be >= 1, got {args.count}")
    if args.jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
    rows, omin, omax = curvature_scan_rows(
        params, _resolve_seed(args), args.count, jobs=args.jobs
    )
    lo, hi = curvature_bounds(params)
    lines = [render_table(("X", "dz_sq", "dw_sq", "omega", "lower_bound", "upper_bound"), rows)]
    lines.append(f"# summary_omega_min = {fmt(omin)}\n")
    lines.append(f"# summary_omega_max = {fmt(omax)}\n")
    if not args.no_timestamp:
        import datetime

        now = datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0)
        lines.append(f"# generated = {now.isoformat()}\n")
    _emit("".join(lines), args.out)
    return 0 if omin >= lo - 1e-6 and omax <= hi + 1e-6 else 1


def _cmd_scan_equivalence(args) -> int:
    params = _resolve_params(args)
    if args.grid < 2:
        raise UsageError(f"--grid must be >= 2, got {args.grid}")
    coeffs = _load_scan_coeffs(args, params)
    rows, bounds = equivalence_scan_rows(params, coeffs, args.grid)
    lines = [render_table(("X", "lambda", "Phi", "Psi", "Upsilon"), rows)]
    lines.append(f"# a = {fmt(bounds.a)}\n# b = {fmt(bounds.b)}\n# grid = {bounds.grid}\n")
    if not args.no_timestamp:
        import datetime

        now = datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0)
        lines.append(f"# generated = {now.isoformat()}\n")
    _emit("".join(lines), args.out)
    limit = params.N + 1.0
    x_max = max(row[0] for row in rows)
    tail_ok = all(
        abs(val - limit) <= 1e-3 * limit
        for row in rows
        if row[0] == x_max
        for val in row[2:5]
    )
    return 0 if bounds.b > 0.0 and tail_ok else 1


def _cmd_eval(args) -> int:
    params = _resolve_params(args)
    point = _parse_point(args, params)
    lines = [
        "command = eval",
        f"what = {args.what}",
        f"p = {params.p}",
        f"r = {params.r}",
        f"K = {fmt(params.K)}",
    ]
    if not contains(params, point.Z, point.w):
        lines.append("status = domain-violation")
        lines.append("error = point is outside the domain")
        _emit("\n".join(lines) + "\n", args.out)
        return 1
    if args.what == "g":
        lines.append("status = ok")
        lines.append(f"value = {fmt(generating_function(params, point))}")
        body = "\n".join(lines) + "\n"
    elif args.what == "metric":
        T = metric_pullback(params, point)
        lines.append("status = ok")
        rows = [
            (a + 1, b + 1, T[a, b].real, T[a, b].imag)
            for a in range(params.N)
            for b in range(params.N)
        ]
        body = "\n".join(lines) + "\n" + render_table(("alpha", "beta", "re", "im"), rows)
    elif args.what == "kernel":
        coeffs = _load_scan_coeffs(args, params)
        lines.append("status = ok")
        lines.append(f"value = {fmt(bergman.bergman_kernel(params, coeffs, point))}")
        body = "\n".join(lines) + "\n"
    else:  # curvature
        tangent = _parse_tangent(args, params)
        lo, hi = curvature_bounds(params)
        lines.append("status = ok")
        lines.append(f"value = {fmt(hsc(params, point, tangent))}")
        lines.append(f"lower_bound = {fmt(lo)}")
        lines.append(f"upper_bound = {fmt(hi)}")
        body = "\n".join(lines) + "\n"
    _emit(body, args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "verify": _cmd_verify,
        "scan-curvature": _cmd_scan_curvature,
        "scan-equivalence": _cmd_scan_equivalence,
        "eval": _cmd_eval,
    }
    try:
        return handlers[args.cmd](args)
    except (UsageError, CoefficientError, ShapeError, SymmetryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        DomainMembershipError,
        SingularityError,
        ProbeError,
        StencilError,
        ConditioningError,
        FitError,
        ArithmeticError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
