"""Command-line entry point: verification suites, example builders and golden
regression.

Exit codes: 0 when every suite passes, 1 on a violation or a false
certificate, 2 on usage or internal errors (including missing goldens).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import cantor, fintop, gallery, omega, zigzag
from .errors import PreslabError
from .report import Report, dumps, fmt_rat, jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITES = (
    "finite-lemma",
    "finite-theorem",
    "drop-hypothesis",
    "omega-fiber",
    "zigzag",
    "arc",
    "eersteex",
    "derdeex",
)
EXAMPLES = ("eersteex", "tweedeex", "derdeex", "zigzag")

# Bounds pinned for acceptance and for regression.
DEFAULTS: dict[str, dict[str, int]] = {
    "finite-lemma": {"max_x": 3},
    "finite-theorem": {"max_x": 3, "max_y": 3},
    "drop-hypothesis": {"max_x": 2, "max_y": 2},
    "omega-fiber": {"max_exceptions": 3, "max_value": 4},
    "zigzag": {"samples": 200, "seed": 0, "depth": 64},
    "arc": {"depth": 12},
    "eersteex": {"samples": 50, "seed": 0, "depth": 32},
    "derdeex": {"depth": 10},
}
BUILD_DEPTH = {"eersteex": 8, "tweedeex": 8, "derdeex": 6, "zigzag": 6}


def _drop_hypothesis(p: dict) -> Report:
    report = Report("drop-hypothesis", dict(p))
    with report.timed():
        for variant in fintop.VARIANTS:
            sub = fintop.search_hypothesis_variants(variant, p["max_x"], p["max_y"])
            report.instances_checked += sub.instances_checked
            report.hypothesis_not_met += sub.hypothesis_not_met
            report.violations += [{"variant": variant, **v} for v in sub.violations]
            report.diagnostics[variant] = {
                "connectedness_preserving": sub.diagnostics["connectedness_preserving"],
                "counterexample_count": len(sub.diagnostics["counterexamples"]),
                "first_counterexample": (sub.diagnostics["counterexamples"] or [None])[0],
            }
    return report


def _zigzag(p: dict) -> Report:
    report = zigzag.check_interval_preservation(p["samples"], p["seed"])
    earlier = report.elapsed_ms
    with report.timed():
        rng = random.Random(p["seed"])
        for _ in range(50):
            h = Fraction(rng.randint(1, 10**6), 10**6)
            report.instances_checked += 1
            img = zigzag.zig_image(zigzag.RatInterval.closed(0, h))
            if img != zigzag.FULL_RANGE:
                report.violations.append({"h": h, "image": img})
        z = gallery.zigzag_descriptor()
        u = zigzag.RatInterval.open(Fraction(-1, 2), Fraction(1, 2))
        report.certificates.append(gallery.disconnection_witness(z, z, (0, 0), (u, u), p["depth"]))
    report.elapsed_ms += earlier
    report.params = dict(p)
    return report


def _arc(p: dict) -> Report:
    report = Report("arc", dict(p))
    with report.timed():
        arc = gallery.build_arc(p["depth"])
        again = gallery.build_arc(p["depth"])
        report.instances_checked = len(arc.segments())
        report.violations += gallery.arc_constraint_failures(arc)
        if dumps(arc) != dumps(again):
            report.violations.append("rebuilt arc differs")
        report.certificates.append(gallery.certify_arc_noncompact(arc))
        report.diagnostics["pieces"] = len(arc.ledger.pieces)
        report.diagnostics["ledger"] = arc.ledger
        report.diagnostics["disjoint"] = arc.ledger.verify_disjointness()
        if not report.diagnostics["disjoint"]:
            report.violations.append("ledger pieces overlap")
    return report


def _eersteex(p: dict) -> Report:
    report = Report("eersteex", dict(p))
    with report.timed():
        rng = random.Random(p["seed"])
        fixed = [
            gallery.RationalCompactum((zigzag.RatInterval.closed(0, Fraction(3, 4)),)),
            gallery.RationalCompactum(points=(Fraction(1),)),
            gallery.RationalCompactum((zigzag.UNIT,)),
        ]
        compacta = fixed + [gallery.random_compactum(rng) for _ in range(p["samples"])]
        for k in compacta:
            report.instances_checked += 1
            cert = gallery.eersteex_compactness_check(k)
            if not cert.conclusion:
                report.violations.append({"compactum": k, "certificate": cert})
        report.certificates.append(gallery.eersteex_square_witness(p["depth"]))
    return report


def _derdeex(p: dict) -> Report:
    report = Report("derdeex", dict(p))
    with report.timed():
        cert = gallery.certify_derdeex(p["depth"])
        report.instances_checked = 2 ** p["depth"] - 1
        report.certificates.append(cert)
    return report


RUNNERS: dict[str, Callable[[dict], Report]] = {
    "finite-lemma": lambda p: fintop.verify_lemma(p["max_x"]),
    "finite-theorem": lambda p: fintop.verify_product_theorem(p["max_x"], p["max_y"]),
    "drop-hypothesis": _drop_hypothesis,
    "omega-fiber": lambda p: omega.verify_fiber_theorem(p["max_exceptions"], p["max_value"]),
    "zigzag": _zigzag,
    "arc": _arc,
    "eersteex": _eersteex,
    "derdeex": _derdeex,
}


def suite_params(name: str, overrides: dict[str, Any] | None = None) -> dict[str, int]:
    params = dict(DEFAULTS[name])
    for key, value in (overrides or {}).items():
        if key in params and value is not None:
            params[key] = value
    return params


def run_suite(name: str, overrides: dict[str, Any] | None = None) -> Report:
    if name not in RUNNERS:
        raise KeyError(name)
    return RUNNERS[name](suite_params(name, overrides))


# -- builders ------------------------------------------------------------------


def build_example(name: str, depth: int) -> tuple[Any, list[list[str]]]:
    """The constructed object as JSON data, plus CSV rows (header first)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if name == "zigzag":
        rows = [["k", "x", "z"]]
        rows += [[str(k), fmt_rat(Fraction(1, k)), fmt_rat(zigzag.node_value(k))] for k in range(1, 2 ** depth + 1)]
        return {"example": "zigzag", "depth": depth, "nodes": 2 ** depth}, rows
    if name == "eersteex":
        table = [{"n": n, "p": gallery.odd_prime(n), "t": gallery.threshold(n)} for n in range(depth + 1)]
        rows = [["x", "f"]]
        for n in range(depth + 1):
            p = gallery.odd_prime(n)
            for num in range(p):
                x = Fraction(num, p)
                rows.append([fmt_rat(x), str(gallery.eersteex_eval(x))])
        rows.append(["1", "omega"])
        return {"example": "eersteex", "depth": depth, "primes": table}, rows
    if name == "tweedeex":
        arc = gallery.build_arc(depth)
        rows = [["segment", "x0", "y0", "x1", "y1"]]
        for seg, (x0, y0), (x1, y1) in arc.segments():
            rows.append([seg, *map(fmt_rat, (x0, y0, x1, y1))])
        return {"example": "tweedeex", "arc": arc}, rows
    if name == "derdeex":
        ledger = cantor.CantorLedger()
        cert = gallery.certify_derdeex(depth, ledger)
        piece = ledger.pieces[0]
        rows = [["t", "x"]]
        for u in range(1, 2 ** depth):
            t = Fraction(u, 2 ** depth)
            rows.append([fmt_rat(t), fmt_rat(cantor.dyadic_preimage(piece, t))])
        return {"example": "derdeex", "depth": depth, "ledger": ledger, "certificate": cert}, rows
    raise KeyError(name)


def _csv_text(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# -- regression ----------------------------------------------------------------


def regress(golden_dir: Path, update: bool = False, suites: tuple[str, ...] = SUITES) -> int:
    if not update:
        if not golden_dir.is_dir():
            print(f"error: golden directory {golden_dir} not found", file=sys.stderr)
            return EXIT_USAGE
        absent = [s for s in suites if not (golden_dir / f"{s}.json").is_file()]
        if absent:
            print(f"error: missing goldens: {', '.join(absent)}", file=sys.stderr)
            return EXIT_USAGE
    golden_dir.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    for name in suites:
        text = run_suite(name).dumps(timing=False)
        path = golden_dir / f"{name}.json"
        if update:
            path.write_text(text)
            print(f"{name}: written")
            continue
        same = path.read_text() == text
        print(f"{name}: {'identical' if same else 'DIFFERS'}")
        if not same:
            status = EXIT_FAIL
    return status


# -- argument handling ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="preslab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    suite = sub.add_parser("suite", help="run a verification suite")
    suite.add_argument("name", choices=SUITES)
    for flag in ("--max-x", "--max-y", "--max-exceptions", "--max-value", "--depth", "--samples", "--seed"):
        suite.add_argument(flag, type=int, default=None)
    suite.add_argument("--json", type=Path, help="write the report here")

    build = sub.add_parser("build", help="serialize a constructed example")
    build.add_argument("name", choices=EXAMPLES)
    build.add_argument("--depth", type=int, default=None)
    build.add_argument("--json", type=Path, help="write the object here instead of stdout")
    build.add_argument("--csv", type=Path, help="write sampled points here")

    reg = sub.add_parser("regress", help="compare pinned suites with golden reports")
    reg.add_argument("golden_dir", type=Path)
    reg.add_argument("--update", action="store_true", help="rewrite the goldens")
    return parser


def _summary(report: Report) -> str:
    verdict = "PASS" if report.passed else "FAIL"
    certs = "".join(f", certificate {c.conclusion}" for c in report.certificates)
    return (
        f"{report.suite}: {verdict} checked={report.instances_checked} "
        f"not_met={report.hypothesis_not_met} violations={len(report.violations)}{certs} "
        f"({report.elapsed_ms} ms)"
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "suite":
            overrides = {k: getattr(args, k) for k in ("max_x", "max_y", "max_exceptions", "max_value", "depth", "samples", "seed")}
            report = run_suite(args.name, overrides)
            if args.json:
                args.json.write_text(report.dumps())
            print(_summary(report))
            return EXIT_OK if report.passed else EXIT_FAIL
        if args.command == "build":
            depth = BUILD_DEPTH[args.name] if args.depth is None else args.depth
            data, rows = build_example(args.name, depth)
            text = json.dumps(jsonable(data), indent=2, sort_keys=True) + "\n"
            if args.json:
                args.json.write_text(text)
            else:
                sys.stdout.write(text)
            if args.csv:
                args.csv.write_text(_csv_text(rows))
            cert = data.get("certificate")
            return EXIT_OK if cert is None or cert.conclusion else EXIT_FAIL
        return regress(args.golden_dir, args.update)
    except (PreslabError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
