"""Command-line front end.

    nbk pmf    --k 2 --r 2 --p 1/2 --n-max 10
    nbk mode   --k 2 --r 3 --p 0.5
    nbk bounds --k 3 --r 3 --p 0.5
    nbk table  [--k 2..5] [--r 2..5] [--p 0.5,0.6,...]
    nbk verify --k 3 --r 2 --p 0.7 --n-max 40
    nbk sample --k 2 --r 2 --p 0.5 --n 100000 --seed 7

Exit status: 0 ok, 2 bad arguments, 3 a size cap was hit, 4 verification
mismatch.  Machine formats (csv, json) carry probabilities as "num/den"
strings only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .bounds import mode_bounds
from .core import Params, parse_probability, pmf_table, validate_params
from .errors import CapExceeded, InvalidParams, NBKError
from .modes import mode_search
from .oracle import pmf_direct
from .sampler import empirical_pmf

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_MISMATCH = 4

DEFAULT_KS = "2..5"
DEFAULT_RS = "2..5"
DEFAULT_PS = "0.5,0.6,0.7,0.8,0.9,0.95,0.99"


def fmt_decimal(x: Fraction) -> str:
    return f"{float(x):.15g}"


def fmt_modes(modes, sep: str = ",") -> str:
    return sep.join(str(m) for m in modes)


def parse_int_range(text: str) -> list[int]:
    """``"2..5"`` -> [2, 3, 4, 5]; ``"2,4"`` -> [2, 4]; ``"3"`` -> [3]."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            values.extend(range(lo, hi + 1))
        elif part:
            values.append(int(part))
    if not values:
        raise ValueError(f"empty range {text!r}")
    return values


def parse_p_list(text: str) -> list[tuple[str, Fraction]]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if part:
            out.append((part, parse_probability(part)))
    if not out:
        raise InvalidParams(f"empty p list {text!r}")
    return out


# -- output helpers ------------------------------------------------------


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _params_obj(params: Params) -> dict:
    return {"k": params.k, "r": params.r, "p": str(params.p)}


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------


def cmd_pmf(args) -> int:
    params = validate_params(args.k, args.r, args.p)
    table = pmf_table(params, args.n_max)
    rows = [(n, str(x)) for n, x in enumerate(table.probs, start=table.offset)]
    if args.format == "csv":
        text = _csv_text(["n", "prob"], rows)
    elif args.format == "json":
        text = _json_text(
            {"params": _params_obj(params), "rows": [{"n": n, "prob": s} for n, s in rows]}
        )
    else:
        lines = [f"{'n':>6}  {'P_n':<40}  decimal"]
        for n, x in enumerate(table.probs, start=table.offset):
            lines.append(f"{n:>6}  {str(x):<40}  {fmt_decimal(x)}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_mode(args) -> int:
    params = validate_params(args.k, args.r, args.p)
    res = mode_search(params)
    if args.format == "json":
        text = _json_text(
            {
                "params": _params_obj(params),
                "modes": list(res.modes),
                "max_prob": str(res.max_prob),
                "search_ceiling": res.search_ceiling,
                "exactness": res.exactness,
            }
        )
    elif args.format == "csv":
        text = _csv_text(
            ["k", "r", "p", "modes", "max_prob", "search_ceiling"],
            [[params.k, params.r, str(params.p), fmt_modes(res.modes),
              str(res.max_prob), res.search_ceiling]],
        )
    else:
        text = (
            f"modes: {fmt_modes(res.modes, ', ')}\n"
            f"max_prob: {res.max_prob} ({fmt_decimal(res.max_prob)})\n"
            f"search_ceiling: {res.search_ceiling}\n"
        )
    _emit(text, args.output)
    return EXIT_OK


def cmd_bounds(args) -> int:
    params = validate_params(args.k, args.r, args.p)
    b = mode_bounds(params)
    lower = b.lower if b.lower is not None else "n/a"
    if args.format == "json":
        text = _json_text(
            {
                "params": _params_obj(params),
                "upper": b.upper,
                "lower": b.lower,
                "lower_reason": b.lower_reason,
                "rho_floor": b.rho_floor,
                "branch": b.branch,
            }
        )
    elif args.format == "csv":
        text = _csv_text(
            ["k", "r", "p", "upper", "lower", "rho_floor", "branch"],
            [[params.k, params.r, str(params.p), b.upper, lower,
              "" if b.rho_floor is None else b.rho_floor, b.branch]],
        )
    else:
        low = str(b.lower) if b.lower is not None else f"n/a ({b.lower_reason})"
        rho = "n/a" if b.rho_floor is None else str(b.rho_floor)
        text = f"upper: {b.upper}\nlower: {low}\nrho_floor: {rho}\nbranch: {b.branch}\n"
    _emit(text, args.output)
    return EXIT_OK


def _table_cell(cell):
    k, r, p = cell
    res = mode_search(Params(k, r, p))
    return res.modes, res.max_prob, res.search_ceiling


def compute_grid(ks, rs, ps, jobs: int = 1) -> list[dict]:
    """Mode search over every (k, r, p) cell, ordered by p label, k, r."""
    cells = []
    for label, p in ps:
        for k in ks:
            for r in rs:
                validate_params(k, r, p)
                cells.append((label, k, r, p))
    work = [(k, r, p) for _, k, r, p in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_table_cell, work))
    else:
        results = [_table_cell(c) for c in work]
    return [
        {"k": k, "r": r, "p": str(p), "p_label": label, "modes": list(modes),
         "max_prob": str(mp), "search_ceiling": ceil}
        for (label, k, r, p), (modes, mp, ceil) in zip(cells, results)
    ]


TABLE_CSV_HEADER = ["k", "r", "p", "modes", "max_prob", "search_ceiling"]


def render_grid(grid: list[dict], fmt: str) -> str:
    if fmt == "csv":
        return _csv_text(
            TABLE_CSV_HEADER,
            [[c["k"], c["r"], c["p"], fmt_modes(c["modes"]), c["max_prob"],
              c["search_ceiling"]] for c in grid],
        )
    if fmt == "json":
        return _json_text({"cells": grid})
    blocks = []
    labels = list(dict.fromkeys(c["p_label"] for c in grid))
    for label in labels:
        cells = [c for c in grid if c["p_label"] == label]
        ks = list(dict.fromkeys(c["k"] for c in cells))
        rs = list(dict.fromkeys(c["r"] for c in cells))
        lookup = {(c["k"], c["r"]): fmt_modes(c["modes"], ", ") for c in cells}
        width = max(8, *(len(v) for v in lookup.values())) + 2
        lines = [f"m_k(r, {label})", "k/r".ljust(5) + "".join(str(r).rjust(width) for r in rs)]
        for k in ks:
            lines.append(str(k).ljust(5) + "".join(lookup[k, r].rjust(width) for r in rs))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def parse_grid(text: str, fmt: str) -> list[dict]:
    """Inverse of :func:`render_grid` for the machine formats."""
    if fmt == "json":
        return json.loads(text)["cells"]
    if fmt == "csv":
        rows = list(csv.DictReader(io.StringIO(text)))
        return [
            {"k": int(row["k"]), "r": int(row["r"]), "p": row["p"],
             "modes": [int(m) for m in row["modes"].split(",")],
             "max_prob": row["max_prob"], "search_ceiling": int(row["search_ceiling"])}
            for row in rows
        ]
    raise ValueError(f"cannot parse format {fmt!r}")


def cmd_table(args) -> int:
    try:
        ks = parse_int_range(args.k)
        rs = parse_int_range(args.r)
    except ValueError as exc:
        raise InvalidParams(str(exc)) from None
    ps = parse_p_list(args.p)
    grid = compute_grid(ks, rs, ps, jobs=args.jobs)
    _emit(render_grid(grid, args.format), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    params = validate_params(args.k, args.r, args.p)
    table = pmf_table(params, args.n_max)
    mismatches = []
    for n, x in enumerate(table.probs, start=table.offset):
        direct = pmf_direct(params, n)
        if direct != x:
            mismatches.append((n, x, direct))
    checked = len(table)
    if args.format == "json":
        text = _json_text(
            {"params": _params_obj(params), "checked": checked,
             "mismatches": [{"n": n, "recurrence": str(a), "direct": str(b)}
                            for n, a, b in mismatches]}
        )
    else:
        text = f"checked {checked} values n={table.offset}..{args.n_max}: "
        text += "all equal\n" if not mismatches else f"{len(mismatches)} mismatches\n"
        for n, a, b in mismatches:
            text += f"  n={n}: recurrence {a} != direct {b}\n"
    _emit(text, args.output)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_sample(args) -> int:
    params = validate_params(args.k, args.r, args.p)
    if args.n < 1:
        raise InvalidParams("--n must be >= 1")
    emp = empirical_pmf(params, args.n, args.seed, args.n_cap)
    items = sorted(emp.histogram.items())
    if args.format == "json":
        text = _json_text(
            {"params": _params_obj(params), "samples": emp.sample_count, "seed": emp.seed,
             "histogram": {str(n): c for n, c in items}, "tv_distance": emp.tv_distance}
        )
    elif args.format == "csv":
        text = _csv_text(["n", "count"], items)
    else:
        lines = [f"samples: {emp.sample_count}  seed: {emp.seed}",
                 f"tv_distance: {emp.tv_distance:.6g}", f"{'n':>8}  count"]
        lines += [f"{n:>8}  {c}" for n, c in items]
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nbk", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("text", "json", "csv")):
        sp.add_argument("--format", choices=formats, default="text")
        sp.add_argument("--output", "-o", help="write here instead of stdout")

    def params(sp):
        sp.add_argument("--k", required=True, type=int)
        sp.add_argument("--r", required=True, type=int)
        sp.add_argument("--p", required=True, help="e.g. 0.95 or 19/20")

    sp = sub.add_parser("pmf", help="tabulate exact probabilities")
    params(sp)
    sp.add_argument("--n-max", required=True, type=int)
    common(sp)
    sp.set_defaults(func=cmd_pmf)

    sp = sub.add_parser("mode", help="exact mode set")
    params(sp)
    common(sp)
    sp.set_defaults(func=cmd_mode)

    sp = sub.add_parser("bounds", help="upper and lower mode bounds")
    params(sp)
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("table", help="grid of mode sets")
    sp.add_argument("--k", default=DEFAULT_KS)
    sp.add_argument("--r", default=DEFAULT_RS)
    sp.add_argument("--p", default=DEFAULT_PS)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("verify", help="recurrence vs direct sum")
    params(sp)
    sp.add_argument("--n-max", required=True, type=int)
    common(sp, ("text", "json"))
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sample", help="Monte Carlo histogram and TV distance")
    params(sp)
    sp.add_argument("--n", required=True, type=int, help="number of samples")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n-cap", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_sample)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidParams, ValueError) as exc:
        print(f"nbk: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"nbk: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NBKError as exc:
        print(f"nbk: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
