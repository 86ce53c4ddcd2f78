"""Command-line driver: coefficient errors, series, convolutions and benchmarks.

Every file is written atomically. Failures print one JSON line on stderr,
``{"error": <kind>, "field": <name or null>, "message": <text>}``, and exit
with status 2 (usage) or 1 (runtime).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import statistics
import sys
import time

import numpy as np

from . import conv, dft3, ffs, oracle, sfld, testlib
from .grid import BandLimit, DimensionError, GridSpec, SampledField, SamplingError, sample

GRAD_GRID = (64, 64, 64)


class CliError(Exception):
    def __init__(self, kind: str, message: str, field: str | None = None, status: int = 2):
        super().__init__(message)
        self.kind = kind
        self.field = field
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message)


def _fmt(v: float) -> str:
    # repr gives the shortest string that round-trips a float64
    return repr(float(v))


def _triple(text: str, field: str) -> tuple[int, int, int]:
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError:
        raise CliError("usage", f"expected integers a,b,c, got {text!r}", field) from None
    if len(parts) == 1:
        parts = parts * 3
    if len(parts) != 3:
        raise CliError("usage", f"expected three integers, got {text!r}", field)
    return tuple(parts)


def _int_list(text: str, field: str) -> list[int]:
    """Comma list with optional inclusive ranges, e.g. ``1:30`` or ``4,8,16``."""
    out = []
    try:
        for part in text.split(","):
            if ":" in part:
                a, b = part.split(":")
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise CliError("usage", f"bad integer list {text!r}", field) from None
    if not out:
        raise CliError("usage", "empty list", field)
    return out


def _descriptor(text: str | None, field: str):
    if text is None:
        raise CliError("usage", "required", field)
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError("usage", f"cannot read {text[1:]!r}: {exc.strerror}", field) from None
    try:
        return testlib.from_json(text)
    except testlib.DescriptorError as exc:
        sub = f"{field}.{exc.field}" if exc.field else field
        raise CliError("usage", str(exc), sub) from None


def _band(args) -> BandLimit:
    if args.K is None:
        raise CliError("usage", "required", "K")
    try:
        return BandLimit(_triple(args.K, "K"))
    except DimensionError as exc:
        raise CliError("usage", str(exc), "K") from None


def _out_grid(args, K: BandLimit) -> GridSpec:
    if args.N is None:
        return K.grid
    try:
        N = GridSpec(_triple(args.N, "N"))
    except DimensionError as exc:
        raise CliError("usage", str(exc), "N") from None
    if not N >= K.grid:
        raise CliError("usage", f"N={N.dims} must be >= 2K+1 = {K.grid.dims}", "N")
    return N


def _out_path(args, name: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def _write_text(path: str, text: str) -> None:
    sfld.atomic_write_bytes(path, text.encode("utf-8"))


def _csv_text(header, rows, comment: str | None = None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\r\n")
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _field_rows(field: SampledField, theta_index: int | None = None):
    x, y, t = field.spec.axes()
    ls = range(len(t)) if theta_index is None else [theta_index]
    v = field.values
    for i in range(len(x)):
        for j in range(len(y)):
            for l in ls:
                c = v[i, j, l]
                yield [_fmt(x[i]), _fmt(y[j]), _fmt(t[l]), _fmt(c.real), _fmt(c.imag)]


def _emit_field(args, field: SampledField, stem: str, meta: dict) -> list[str]:
    """Write a field in the requested format; returns the paths written."""
    fmt = args.format or "sfld"
    if fmt == "sfld":
        path = _out_path(args, stem + ".sfld")
        sfld.write_field(path, field)
    elif fmt == "csv":
        path = _out_path(args, stem + ".csv")
        _write_text(path, _csv_text(["x", "y", "theta", "re", "im"], _field_rows(field)))
    else:
        path = _out_path(args, stem + ".json")
        summary = dict(meta)
        summary.update(
            dims=list(field.dims),
            max_abs=float(np.max(np.abs(field.values))),
            max_abs_imag=float(np.max(np.abs(field.values.imag))),
        )
        _write_text(path, json.dumps(summary, indent=2) + "\n")
    return [path]


def _parse_slice(text: str | None):
    if text is None:
        return None
    key, _, val = text.partition("=")
    if key.strip() != "theta" or not val:
        raise CliError("usage", f"expected theta=<radians>, got {text!r}", "slice")
    try:
        return float(val)
    except ValueError:
        raise CliError("usage", f"bad angle {val!r}", "slice") from None


def _nearest_theta_index(theta: float, n: int) -> int:
    step = 2 * math.pi / n
    return int(round((theta % (2 * math.pi)) / step)) % n


def _sample(f, spec, field):
    try:
        return sample(f, spec)
    except SamplingError as exc:
        raise CliError("sampling", str(exc), field, status=1) from None


def cmd_ffc_error(args) -> dict:
    f = _descriptor(args.func, "func")
    if args.k is None:
        raise CliError("usage", "required", "k")
    k = _triple(args.k, "k")
    Ks = _int_list(args.K or "1:30", "K")
    if min(Ks) < 1:
        raise CliError("usage", "K values must be >= 1", "K")
    q = oracle.QuadratureSpec(args.oracle_resolution, "midpoint")
    ref = oracle.fourier_coeff_quadrature(f, k, q)
    G = testlib.grad_sup_estimate(f, GRAD_GRID)
    kinf = max(abs(a) for a in k)
    rows = []
    for K in Ks:
        if K < kinf:
            continue
        L = BandLimit((K, K, K)).grid
        err = abs(ffs.ffc(_sample(f, L, "func"), k) - ref)
        rows.append((K, err, 32.0 * G / K))
    if args.format == "json":
        body = json.dumps(
            {"k": list(k), "grad_sup": G, "reference": [ref.real, ref.imag],
             "rows": [{"K": K, "abs_error": e, "bound": b} for K, e, b in rows]},
            indent=2,
        ) + "\n"
        name = "ffc_error.json"
    else:
        body = _csv_text(["K", "abs_error", "bound"], [[K, _fmt(e), _fmt(b)] for K, e, b in rows])
        name = "ffc_error.csv"
    if args.out:
        path = _out_path(args, name)
        _write_text(path, body)
        return {"outputs": [path]}
    sys.stdout.write(body)
    return {"outputs": []}


def cmd_series(args) -> dict:
    f = _descriptor(args.func, "func")
    K = _band(args)
    N = _out_grid(args, K)
    theta = _parse_slice(args.slice)
    F = _sample(f, K.grid, "func")
    t0 = time.perf_counter()
    S = ffs.series_eval_grid(dft3.dft3(F), K, N)
    elapsed = time.perf_counter() - t0
    _require_out(args)
    meta = {"command": "series", "K": list(K.K), "N": list(N.dims)}
    paths = _emit_field(args, S, "series", meta)
    if theta is not None:
        l = _nearest_theta_index(theta, N.dims[2])
        actual = N.axes()[2][l]
        path = _out_path(args, "series_slice.csv")
        text = _csv_text(
            ["x", "y", "theta", "re", "im"], _field_rows(S, l),
            comment=f"theta={_fmt(actual)} requested={_fmt(theta)} index={l}",
        )
        _write_text(path, text)
        paths.append(path)
    return {"outputs": paths, "seconds": elapsed}


def _require_out(args):
    if not args.out:
        raise CliError("usage", "required for this command", "out")


def cmd_convolve(args) -> dict:
    f = _descriptor(args.func, "func")
    rho = _descriptor(args.rho, "rho")
    K = _band(args)
    N = _out_grid(args, K)
    _require_out(args)
    F = _sample(f, K.grid, "func")
    P = _sample(rho, K.grid, "rho")
    plan = conv.ConvPlan(K, N)
    t0 = time.perf_counter()
    S = conv.conv_ffs_grid(F, P, plan)
    fft_seconds = time.perf_counter() - t0
    paths = _emit_field(args, S, "convolve", {"command": "convolve"})
    timing = {"K": list(K.K), "N": list(N.dims), "fft_seconds": fft_seconds}
    if args.compare_oracle:
        q = oracle.trapezoid_on_grid(K.grid)
        t0 = time.perf_counter()
        T = oracle.se2_convolution_direct_grid(f, rho, N, q)
        oracle_seconds = time.perf_counter() - t0
        timing.update(
            oracle_seconds=oracle_seconds,
            speedup=oracle_seconds / fft_seconds if fft_seconds > 0 else math.inf,
            max_abs_diff=float(np.max(np.abs(S.values - T))),
        )
        paths += _emit_field(args, SampledField(N, T), "oracle", {"command": "oracle"})
    tpath = _out_path(args, "timing.json")
    _write_text(tpath, json.dumps(timing, indent=2) + "\n")
    return {"outputs": paths + [tpath], **timing}


def cmd_multi_convolve(args) -> dict:
    f = _descriptor(args.func, "func")
    rho = _descriptor(args.rho, "rho")
    K = _band(args)
    if args.q is None or args.q < 1:
        raise CliError("usage", "q must be >= 1", "q")
    _require_out(args)
    F = _sample(f, K.grid, "func")
    P = _sample(rho, K.grid, "rho")
    modes = ["fast", "naive"] if args.mode == "both" else [args.mode]
    results, timing = {}, {"K": list(K.K), "q": args.q}
    for mode in modes:
        fields = []
        t0 = time.perf_counter()
        if mode == "fast":
            conv.multi_conv_stream(F, P, args.q, K, lambda p, x: fields.append(x))
        else:
            plan = conv.ConvPlan(K)
            fields = [conv.multi_conv_grid(F, P, p, plan) for p in range(1, args.q + 1)]
        timing[f"{mode}_seconds"] = time.perf_counter() - t0
        results[mode] = fields
    if len(modes) == 2:
        timing["max_abs_diff"] = max(
            float(np.max(np.abs(a.values - b.values))) for a, b in zip(results["fast"], results["naive"])
        )
    paths = []
    for p, field in enumerate(results[modes[0]], start=1):
        if not np.all(np.isfinite(field.values)):
            raise CliError("numeric", f"non-finite output at order {p}", None, status=1)
        paths += _emit_field(args, field, f"multi_p{p}", {"command": "multi-convolve", "p": p})
    tpath = _out_path(args, "timing.json")
    _write_text(tpath, json.dumps(timing, indent=2) + "\n")
    return {"outputs": paths + [tpath], **timing}


def cmd_bench(args) -> dict:
    """Median-of-3 FFT convolution time against the direct trapezoidal sum.

    With ``--subsample n`` the direct path is timed on n seeded output
    points and extrapolated linearly to the full grid.
    """
    f = _descriptor(args.func, "func")
    rho = _descriptor(args.rho, "rho")
    K = _band(args)
    N = _out_grid(args, K)
    F = _sample(f, K.grid, "func")
    P = _sample(rho, K.grid, "rho")
    plan = conv.ConvPlan(K, N)
    times = []
    for _ in range(3):
        t0 = time.perf_counter()
        conv.conv_ffs_grid(F, P, plan)
        times.append(time.perf_counter() - t0)
    fft_seconds = statistics.median(times)
    q = oracle.trapezoid_on_grid(K.grid)
    X, Y, T = N.mesh()
    X, Y, T = X.ravel(), Y.ravel(), T.ravel()
    n_points = X.size
    if args.subsample and args.subsample < n_points:
        rng = np.random.default_rng(args.seed)
        idx = rng.choice(n_points, size=args.subsample, replace=False)
        X, Y, T = X[idx], Y[idx], T[idx]
    t0 = time.perf_counter()
    oracle.se2_convolution_direct_many(f, rho, X, Y, T, q)
    measured = time.perf_counter() - t0
    direct_seconds = measured * n_points / X.size
    report = {
        "K": list(K.K), "N": list(N.dims), "fft_seconds": fft_seconds, "fft_runs": times,
        "direct_seconds": direct_seconds, "direct_points_timed": int(X.size),
        "direct_extrapolated": bool(X.size < n_points),
        "speedup": direct_seconds / fft_seconds if fft_seconds > 0 else math.inf,
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        path = _out_path(args, "bench.json")
        _write_text(path, text)
        return {"outputs": [path], **report}
    sys.stdout.write(text)
    return {"outputs": [], **report}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=["csv", "sfld", "json"])
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for reproducibility records; transforms run single-threaded")

    p = _Parser(prog="se2fft", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ffc-error", parents=[common], help="coefficient error versus K")
    s.add_argument("--func", help="descriptor JSON or @file")
    s.add_argument("--k", help="coefficient index a,b,c")
    s.add_argument("--K", help="orders, e.g. 1:30 or 6,12,24")
    s.add_argument("--oracle-resolution", type=int, default=128)

    s = sub.add_parser("series", parents=[common], help="finite Fourier series on an N-grid")
    s.add_argument("--func")
    s.add_argument("--K")
    s.add_argument("--N")
    s.add_argument("--slice", help="theta=<radians>")

    for name, hlp in (("convolve", "S_K[f, rho] on an N-grid"), ("bench", "FFT versus direct timing")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--func")
        s.add_argument("--rho")
        s.add_argument("--K")
        s.add_argument("--N")
        if name == "convolve":
            s.add_argument("--compare-oracle", action="store_true")
        else:
            s.add_argument("--subsample", type=int, default=0)

    s = sub.add_parser("multi-convolve", parents=[common], help="f * rho^(p) for p = 1..q")
    s.add_argument("--func")
    s.add_argument("--rho")
    s.add_argument("--K")
    s.add_argument("--q", type=int)
    s.add_argument("--mode", choices=["fast", "naive", "both"], default="fast")
    return p


COMMANDS = {
    "ffc-error": cmd_ffc_error,
    "series": cmd_series,
    "convolve": cmd_convolve,
    "multi-convolve": cmd_multi_convolve,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except CliError as exc:
        sys.stderr.write(json.dumps({"error": exc.kind, "field": exc.field, "message": str(exc)}) + "\n")
        return exc.status
    except (DimensionError, sfld.SfldFormatError, ValueError, OSError) as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "field": None, "message": msg}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
