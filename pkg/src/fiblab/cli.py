"""Command-line front end.

Exit codes: 0 success, 1 self-check failure, 2 usage error, 3 internal
inconsistency between independent decision paths.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from . import __version__
from . import homotopy_data as hd
from .bundlecmp import j_verdict
from .classifier import (AttachingClass, condition_I, condition_II, count_realizable, g_count,
                         is_fibration, linking_form_of, m_coefficient, star)
from .fgab import FgAbGroup
from .serre import (FibrationModel, Kind, apply_d2k, apply_d4k1, build_E2, fiber_homology,
                    normalize_hopf, sphere_fiber_check)

EXIT_OK, EXIT_SELFCHECK, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class Inconsistency(RuntimeError):
    pass


@dataclass
class Report:
    command: str
    params: dict
    result: Any
    citations: list = field(default_factory=list)
    tool_version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, ensure_ascii=False, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls(**json.loads(text))


def _group_str(g: FgAbGroup) -> str:
    return str(g)


def _rows_of(report: Report) -> list[dict]:
    res = report.result
    if isinstance(res, dict) and "rows" in res:
        return res["rows"]
    if isinstance(res, list):
        return res
    return [res] if isinstance(res, dict) else [{"value": res}]


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    rows = _rows_of(report)
    cols: list[str] = []
    for r in rows:
        cols += [c for c in r if c not in cols]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: _cell(r.get(c, "")) for c in cols})
        return buf.getvalue()
    widths = {c: max([len(c)] + [len(_cell(r.get(c, ""))) for r in rows]) for c in cols}
    lines = ["  ".join(c.ljust(widths[c]) for c in cols)]
    lines.append("  ".join("-" * widths[c] for c in cols))
    lines += ["  ".join(_cell(r.get(c, "")).ljust(widths[c]) for c in cols) for r in rows]
    if report.citations:
        lines.append("")
        lines += [f"source: {c}" for c in report.citations]
    return "\n".join(lines) + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(x) for x in v)
    return "" if v is None else str(v)


# ----------------------------------------------------------------- commands

def _check_k(k: int, lo: int = 2, hi: int | None = 6) -> None:
    if k < lo or (hi is not None and k > hi):
        raise UsageError(f"k must be in [{lo}, {hi}]" if hi else f"k must be >= {lo}")


def cmd_classify(k: int, n: int, a: int, gamma: Sequence[int] | None = None,
                 gamma_group: Sequence[int] | None = None) -> Report:
    _check_k(k, 2, None)
    if n < 1:
        raise UsageError("n must be >= 1")
    group = FgAbGroup.from_cyclic_orders(gamma_group) if gamma_group else None
    try:
        if gamma is not None and group is not None and len(gamma) != len(group.torsion):
            raise ValueError("gamma must have one coordinate per invariant factor of its group")
        f = AttachingClass.of(k, n, a, gamma, group)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    direct = is_fibration(f)
    linking = condition_I(f) and condition_II(linking_form_of(f))
    lam = m_coefficient(f).value % n
    witness = normalize_hopf(k, n, lam)
    if not direct == linking == (witness is not None):
        raise Inconsistency(f"decision paths disagree: direct={direct}, linking={linking}, "
                            f"hopf={witness is not None}")
    cite = [hd.i_star_K(k, n).describe()] if n >= 2 else []
    result = {
        "k": k, "n": n, "a": f.a.value, "a_modulus": f.a.modulus,
        "m": m_coefficient(f).value, "realizable": direct,
        "condition_I": condition_I(f), "condition_II": condition_II(linking_form_of(f)),
        "hopf_witness": None if witness is None else
        {"u": witness.u, "h": witness.h, "sign": witness.sign, "lifted_lambda": witness.lifted_lambda},
    }
    return Report("classify", {"k": k, "n": n, "a": a, "gamma": list(gamma) if gamma else None},
                  result, cite)


def cmd_gtable(k: int, n_min: int, n_max: int) -> Report:
    _check_k(k)
    if n_min < 2 or n_max < n_min:
        raise UsageError("need 2 <= n-min <= n-max")
    rows = []
    for n in range(n_min, n_max + 1):
        r = g_count(k, n)
        rows.append({"n": n, "gcd": r.d, "star": r.star,
                     "count": r.count if r.count is not None else "uncovered",
                     "uncovered": r.is_uncovered, "column": r.column})
    return Report("gtable", {"k": k, "n_min": n_min, "n_max": n_max}, {"rows": rows},
                  ["homotopy-type count tables for S^{2k-1}-fibrations over S^{2k}"])


def cmd_count_realizable(k: int, n: int) -> Report:
    _check_k(k, 2, None)
    if n < 1:
        raise UsageError("n must be >= 1")
    return Report("count-realizable", {"k": k, "n": n},
                  {"k": k, "n": n, "n2": hd.n2(k, n), "count": count_realizable(k, n)})


def cmd_star(n_min: int, n_max: int) -> Report:
    if n_min < 2 or n_max < n_min:
        raise UsageError("need 2 <= n-min <= n-max")
    rows = [{"n": n, "star": star(n)} for n in range(n_min, n_max + 1)]
    return Report("star", {"n_min": n_min, "n_max": n_max}, {"rows": rows})


def cmd_fiber(k: int, lam: int, max_degree: int) -> Report:
    _check_k(k, 2, None)
    if max_degree < 0:
        raise UsageError("max-degree must be >= 0")
    rows = [{"degree": d, "group": _group_str(g)} for d, g in fiber_homology(k, lam, max_degree)]
    sphere = sphere_fiber_check(k, lam)
    return Report("fiber", {"k": k, "lambda": lam, "max_degree": max_degree},
                  {"rows": rows, "homology_sphere": sphere,
                   "summary": f"fiber is homology S^{2 * k - 1}: {'true' if sphere else 'false'}"})


def cmd_ss_page(k: int, n: int, lam: int, max_degree: int, page: str) -> Report:
    _check_k(k, 2, None)
    if n < 1 or max_degree < 0:
        raise UsageError("need n >= 1 and max-degree >= 0")
    model = FibrationModel(Kind.LOOP_FIBER_OVER_X, k, n, lam)
    pg = build_E2(model, max_degree)
    if page in ("d2k", "inf"):
        pg = apply_d2k(pg, model)
    if page == "inf":
        pg = apply_d4k1(pg, model, lam)
    rows = [{"p": p, "q": q, "group": _group_str(e.group), "generator": ";".join(e.labels)}
            for (p, q), e in sorted(pg.entries.items())]
    return Report("ss-page", {"k": k, "n": n, "lambda": lam, "max_degree": max_degree,
                              "page": page},
                  {"rows": rows, "r": pg.r, "dump": pg.dump()})


def cmd_bundlecmp(k: int) -> Report:
    if not 2 <= k <= 6:
        raise UsageError(f"k={k} unsupported; bundle comparison covers 2 <= k <= 6")
    v = j_verdict(k)
    return Report("bundlecmp", {"k": k},
                  {"k": k, "verdict": v.verdict.value, "obstruction_prime": v.obstruction_prime,
                   "detail": v.detail, "trace": list(v.trace)},
                  list(v.citations) or ["no registry citation (inconclusive)"])


def cmd_selfcheck(budget: float) -> tuple[Report, int]:
    from .selfcheck import run_selfcheck, sweep_registry

    if budget <= 0:
        return Report("selfcheck", {"budget": budget},
                      {"status": "skipped", "warning": "budget 0: no suites were run",
                       "rows": []}), EXIT_OK
    try:
        hd.default_registry().validate()
    except hd.RegistryError as exc:
        return Report("selfcheck", {"budget": budget},
                      {"status": "fail", "rows": [{"suite": "registry", "status": "FAIL",
                                                   "detail": str(exc)}]}), EXIT_SELFCHECK
    results = run_selfcheck(budget)
    rows = [{"suite": r.name, "status": "PASS" if r.passed else "FAIL", "checks": r.checked,
             "complete": r.complete, "seconds": round(r.seconds, 3),
             "detail": "" if r.passed else repr(r.mismatches[:3])} for r in results]
    ok = all(r.passed for r in results)
    return (Report("selfcheck", {"budget": budget},
                   {"status": "pass" if ok else "fail", "rows": rows}),
            EXIT_OK if ok else EXIT_SELFCHECK)


# ------------------------------------------------------------------- parser

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON")
    fmt.add_argument("--csv", action="store_true", help="emit CSV rows")
    common.add_argument("--registry", help="registry file (overrides $FIBLAB_REGISTRY)")

    p = argparse.ArgumentParser(prog="fiblab", description=__doc__.splitlines()[0],
                                parents=[common])
    p.add_argument("--version", action="version", version=f"fiblab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="decide realizability of (k, n, a)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--gamma", type=_int_list, help="γ coordinates, comma-separated")
    s.add_argument("--gamma-group", type=_int_list, help="orders of the γ quotient")

    s = sub.add_parser("gtable", parents=[common], help="G_k^n table rows")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, help="a single n")
    s.add_argument("--n-min", type=int, default=2)
    s.add_argument("--n-max", type=int, default=50)

    s = sub.add_parser("count-realizable", parents=[common],
                       help="number of realizable a-coordinates")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("star", parents=[common], help="the star predicate on a range of n")
    s.add_argument("--n", type=int)
    s.add_argument("--n-min", type=int, default=2)
    s.add_argument("--n-max", type=int, default=50)

    s = sub.add_parser("fiber", parents=[common], help="homology of the homotopy fiber")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=int, required=True)
    s.add_argument("--max-degree", type=int, default=None)

    s = sub.add_parser("ss-page", parents=[common], help="dump a spectral sequence page")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=int, default=0)
    s.add_argument("--max-degree", type=int, default=None)
    s.add_argument("--page", choices=("e2", "d2k", "inf"), default="inf")

    s = sub.add_parser("bundlecmp", parents=[common], help="J-homomorphism verdict for k")
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("selfcheck", parents=[common], help="run oracle-agreement suites")
    s.add_argument("--budget", type=float, default=120.0, help="seconds (0 skips)")
    return p


def _dispatch(args) -> tuple[Report, int]:
    c = args.command
    if c == "classify":
        return cmd_classify(args.k, args.n, args.a, args.gamma, args.gamma_group), EXIT_OK
    if c == "gtable":
        lo, hi = (args.n, args.n) if args.n is not None else (args.n_min, args.n_max)
        return cmd_gtable(args.k, lo, hi), EXIT_OK
    if c == "count-realizable":
        return cmd_count_realizable(args.k, args.n), EXIT_OK
    if c == "star":
        lo, hi = (args.n, args.n) if args.n is not None else (args.n_min, args.n_max)
        return cmd_star(lo, hi), EXIT_OK
    if c == "fiber":
        top = args.max_degree if args.max_degree is not None else 4 * (2 * args.k - 1)
        return cmd_fiber(args.k, args.lam, top), EXIT_OK
    if c == "ss-page":
        top = args.max_degree if args.max_degree is not None else 4 * args.k + 2 * (2 * args.k - 1)
        return cmd_ss_page(args.k, args.n, args.lam, top, args.page), EXIT_OK
    if c == "bundlecmp":
        return cmd_bundlecmp(args.k), EXIT_OK
    if c == "selfcheck":
        return cmd_selfcheck(args.budget)
    raise UsageError(f"unknown command {c}")


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    path = hd.resolve_registry_path(args.registry)
    try:
        hd.set_default_registry(hd.Registry.load(path) if path else None)
        report, code = _dispatch(args)
    except hd.RegistryError as exc:
        print(f"fiblab: registry error: {exc}", file=sys.stderr)
        if args.command == "selfcheck":
            report = Report("selfcheck", {"budget": getattr(args, "budget", None)},
                            {"status": "fail", "rows": [{"suite": "registry", "status": "FAIL",
                                                         "detail": str(exc)}]})
            stdout.write(render(report, _format(args, stdout)))
            return EXIT_SELFCHECK
        return EXIT_USAGE
    except (UsageError, OSError) as exc:
        print(f"fiblab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Inconsistency as exc:
        print(f"fiblab: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    finally:
        if path:
            hd.set_default_registry(None)
    if report.command == "selfcheck" and report.result.get("status") == "skipped":
        print(f"fiblab: warning: {report.result['warning']}", file=sys.stderr)
    stdout.write(render(report, _format(args, stdout)))
    return code


def _format(args, stdout) -> str:
    if args.json:
        return "json"
    if args.csv:
        return "csv"
    return "table" if getattr(stdout, "isatty", lambda: False)() else "json"


if __name__ == "__main__":
    sys.exit(main())
