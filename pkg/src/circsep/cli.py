"""Command line: find, gen and bench.

Exit codes: 0 success, 2 unreadable or malformed input, 3 segment interiors
intersect, 4 disagreement with the enumeration oracle.
"""

import argparse
import json
import math
import random
import sys
import time
import warnings

from .geom import DEFAULT_TOL, InvalidInput, Point2, Segment, Tolerance
from .oracle import TooLarge, gen_equispaced, gen_maxgap, gen_random, oracle_enumerate
from .separator import canonical_order, find_all_largest, find_all_largest_with_info, validate

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INTERSECT = 3
EXIT_MISMATCH = 4

MAXGAP_PRESET = (0.0, 1.0, 4.0, 5.0)


class ParseError(Exception):
    pass


# -- serialization ----------------------------------------------------------------

def _num(x: float) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        raise ValueError("non-finite number in output")
    s = "%.17g" % x
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 0, step: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent + step)
    end = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float)):
        return _num(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + step, step)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_num(v) for v in obj) + "]"
        items = [pad + dumps(v, indent + step, step) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _segment_list(raw, name):
    if not isinstance(raw, list):
        raise ParseError(f"{name} must be a list of segments")
    out = []
    for k, s in enumerate(raw):
        try:
            (x1, y1), (x2, y2) = s
            vals = [float(v) for v in (x1, y1, x2, y2)]
        except (TypeError, ValueError):
            raise ParseError(f"{name}[{k}] is not [[x1, y1], [x2, y2]]") from None
        if not all(math.isfinite(v) for v in vals):
            raise ParseError(f"{name}[{k}] has a non-finite coordinate")
        out.append(Segment(Point2(vals[0], vals[1]), Point2(vals[2], vals[3])))
    if not out:
        raise ParseError(f"{name} must be nonempty")
    return out


def parse_instance(text: str):
    """(P, Q, meta) from InstanceFile text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "P" not in doc or "Q" not in doc:
        raise ParseError('instance needs keys "P" and "Q"')
    return _segment_list(doc["P"], "P"), _segment_list(doc["Q"], "Q"), doc.get("meta", {})


def instance_doc(P, Q, meta=None) -> dict:
    doc = {
        "P": [[[s.a.x, s.a.y], [s.b.x, s.b.y]] for s in P],
        "Q": [[[s.a.x, s.a.y], [s.b.x, s.b.y]] for s in Q],
    }
    if meta:
        doc["meta"] = meta
    return doc


def result_doc(records, wall_ms) -> dict:
    recs = []
    for r in records:
        recs.append({
            "center": [r.circle.center.x, r.circle.center.y],
            "radius": r.circle.radius,
            "inside": r.inside,
            "condition": r.condition,
            "contacts": [
                {"set": k.set, "site_index": k.index, "point": [k.point.x, k.point.y], "kind": k.kind}
                for k in r.contacts
            ],
            "source": {"kind": r.source[0], "id": r.source[1]},
        })
    largest = None
    for i, r in enumerate(records):
        if largest is None or r.circle.radius > records[largest].circle.radius:
            largest = i
    return {
        "records": recs,
        "summary": {"count": len(records), "largest_index": largest, "wall_time_ms": wall_ms},
    }


def parse_result(text: str) -> dict:
    doc = json.loads(text)
    if "records" not in doc or "summary" not in doc:
        raise ParseError("result needs keys records and summary")
    return doc


# -- SVG --------------------------------------------------------------------------

def render_svg(P, Q, records) -> str:
    pts = [p for s in P + Q for p in (s.a, s.b)]
    xmin, xmax = min(p.x for p in pts), max(p.x for p in pts)
    ymin, ymax = min(p.y for p in pts), max(p.y for p in pts)
    w = max(xmax - xmin, ymax - ymin, 1e-9)
    x0, y0, size = (xmin + xmax) / 2 - w, (ymin + ymax) / 2 - w, 2 * w
    sw = size / 400
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.6g} {-(y0 + size):.6g} {size:.6g} {size:.6g}" '
        'width="800" height="800">',
        '<g transform="scale(1,-1)">',
    ]
    for name, S, color in (("P", P, "#1f5fbf"), ("Q", Q, "#c0392b")):
        for s in S:
            if s.is_point:
                lines.append(f'<circle cx="{s.a.x:.9g}" cy="{s.a.y:.9g}" r="{2 * sw:.6g}" fill="{color}"/>')
            else:
                lines.append(
                    f'<line x1="{s.a.x:.9g}" y1="{s.a.y:.9g}" x2="{s.b.x:.9g}" y2="{s.b.y:.9g}" '
                    f'stroke="{color}" stroke-width="{sw:.6g}"/>'
                )
    for r in records:
        dash = "" if r.inside == "P" else f' stroke-dasharray="{4 * sw:.6g} {3 * sw:.6g}"'
        c = r.circle
        lines.append(
            f'<circle cx="{c.center.x:.9g}" cy="{c.center.y:.9g}" r="{c.radius:.9g}" fill="none" '
            f'stroke="#2e8b57" stroke-width="{0.7 * sw:.6g}"{dash}/>'
        )
        for k in r.contacts:
            lines.append(f'<circle cx="{k.point.x:.9g}" cy="{k.point.y:.9g}" r="{1.5 * sw:.6g}" fill="#222"/>')
    lines += ["</g>", "</svg>"]
    return "\n".join(lines) + "\n"


# -- commands ---------------------------------------------------------------------

def _same(a, b, tol=1e-6) -> bool:
    return (
        a.inside == b.inside
        and a.condition == b.condition
        and abs(a.circle.center.x - b.circle.center.x) <= tol
        and abs(a.circle.center.y - b.circle.center.y) <= tol
        and abs(a.circle.radius - b.circle.radius) <= tol
    )


def compare_with_oracle(found, expected):
    """(missing, extra): oracle circles without a match, and reported circles without one."""
    missing = [e for e in expected if not any(_same(f, e) for f in found)]
    extra = [f for f in found if not any(_same(f, e) for e in expected)]
    return missing, extra


def cmd_find(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        with open(args.input) as fh:
            P, Q, _ = parse_instance(fh.read())
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    try:
        tol = Tolerance(eps_predicate=args.eps, eps_merge=max(args.eps, DEFAULT_TOL.eps_merge))
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    try:
        validate(P, Q, tol)
    except InvalidInput as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INTERSECT
    t0 = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        records = find_all_largest(P, Q, tol, threads=max(1, args.threads))
    wall = 0 if args.no_timing else round((time.perf_counter() - t0) * 1000.0, 3)
    for w in caught:
        print(f"warning: {w.message}", file=err)
    records = canonical_order(records)
    text = dumps(result_doc(records, wall)) + "\n"
    if args.output in (None, "-"):
        out.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(P, Q, records))
    if args.oracle_check:
        try:
            expected = oracle_enumerate(P, Q)
        except TooLarge as exc:
            print(f"note: oracle check skipped ({exc})", file=err)
            return EXIT_OK
        missing, extra = compare_with_oracle(records, expected)
        if missing or extra:
            for e in missing:
                print(f"oracle mismatch: missing {e.inside}-inside {e.condition} at {tuple(e.circle.center)} r={e.circle.radius}", file=err)
            for f in extra:
                print(f"oracle mismatch: extra {f.inside}-inside {f.condition} at {tuple(f.circle.center)} r={f.circle.radius}", file=err)
            return EXIT_MISMATCH
        print(f"oracle check passed ({len(expected)} circles)", file=err)
    return EXIT_OK


def make_instance(kind: str, n: int, seed: int):
    if n < 2:
        raise ValueError("--n must be at least 2")
    if kind == "random":
        P, Q = gen_random(n, seed)
        return P, Q, {"name": f"random-{n}", "seed": seed}
    if kind == "maxgap":
        if n == len(MAXGAP_PRESET):
            X = list(MAXGAP_PRESET)
        else:
            rng = random.Random(seed)
            X = sorted(rng.sample(range(10 * n), n))
        P, Q = gen_maxgap(X)
        return P, Q, {"name": f"maxgap-{n}", "seed": seed}
    if kind == "equispaced":
        P, Q = gen_equispaced(n)
        return P, Q, {"name": f"equispaced-{n}"}
    raise ValueError(f"unknown kind {kind!r}")


def cmd_gen(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        P, Q, meta = make_instance(args.kind, args.n, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    text = dumps(instance_doc(P, Q, meta)) + "\n"
    if args.output in (None, "-"):
        out.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return EXIT_OK


def bench_rows(n_list, seed):
    rows = []
    for n in n_list:
        P, Q = gen_random(n, seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            t0 = time.perf_counter()
            records, infos = find_all_largest_with_info(P, Q)
            total = time.perf_counter() - t0
        rows.append({
            "n": n,
            "build_s": sum(i.build_seconds for i in infos),
            "query_s": sum(i.query_seconds for i in infos),
            "total_s": total,
            "voronoi_vertices": sum(i.voronoi_vertices for i in infos),
            "voronoi_edges": sum(i.voronoi_edges for i in infos),
            "outputs": len(records),
        })
    return rows


def doubling_ratios(rows):
    return [(a["n"], b["n"], b["total_s"] / a["total_s"]) for a, b in zip(rows, rows[1:])]


def cmd_bench(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
    except ValueError:
        print("error: --n-list must be comma separated integers", file=err)
        return EXIT_PARSE
    if not n_list or min(n_list) < 2:
        print("error: every n must be at least 2", file=err)
        return EXIT_PARSE
    rows = bench_rows(n_list, args.seed)
    out.write(f"{'n':>8} {'build_s':>9} {'query_s':>9} {'total_s':>9} {'vor_V':>8} {'vor_E':>8} {'outputs':>8}\n")
    for r in rows:
        out.write(
            f"{r['n']:>8} {r['build_s']:>9.3f} {r['query_s']:>9.3f} {r['total_s']:>9.3f} "
            f"{r['voronoi_vertices']:>8} {r['voronoi_edges']:>8} {r['outputs']:>8}\n"
        )
    for a, b, ratio in doubling_ratios(rows):
        out.write(f"ratio {a} -> {b}: {ratio:.2f}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="circsep", description="Largest circles separating two sets of segments.")
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("find", help="compute all locally largest separating circles")
    f.add_argument("--input", required=True)
    f.add_argument("--eps", type=float, default=1e-9)
    f.add_argument("--output", default="-")
    f.add_argument("--svg")
    f.add_argument("--oracle-check", action="store_true")
    f.add_argument("--threads", type=int, default=1)
    f.add_argument("--no-timing", action="store_true", help="write wall_time_ms as 0 for byte-stable output")
    f.set_defaults(func=cmd_find)

    g = sub.add_parser("gen", help="write a generated instance")
    g.add_argument("--kind", choices=["random", "maxgap", "equispaced"], required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", default="-")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time build and query phases on random instances")
    b.add_argument("--n-list", default="4096,8192,16384,32768")
    b.add_argument("--seed", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
