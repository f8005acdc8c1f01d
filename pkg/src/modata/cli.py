"""Command-line front end.

Commands: validate, bantay, rmatrix, check, catalog, oracle, search.
Exit codes: 0 success/pass, 1 mathematical failure, 2 I/O or parse failure.
Human tables print phases both as decimals and, when they are roots of
unity, as turn fractions p/q (q <= 240).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .axioms import AxiomReport, validate
from .bantay import (
    eigen_multiplicities,
    fs_indicators,
    realizability_report,
    trace_table,
)
from .modular_data import (
    InvalidModularData,
    ModularData,
    derive,
    load_modular_data,
    save_modular_data,
)
from .numerics import DEFAULT_POLICY, TolerancePolicy, turns_fraction
from .oracle import brute_trace, catalog, catalog_names, get_model
from .rmatrix import canonical_r, monodromy_check
from .search import FusionRingError, load_fusion_ring, search_pipeline

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_PARSE = 2


def fmt_complex(z: complex, pol: TolerancePolicy = DEFAULT_POLICY) -> str:
    """Decimal form plus the nearest turn fraction when within tolerance."""
    z = complex(z)
    if abs(z) <= pol.eq_tol:
        return "0"
    if abs(z.imag) <= pol.eq_tol:
        return f"{z.real:+.6f}"
    body = f"{z.real:+.6f}{z.imag:+.6f}i"
    frac = turns_fraction(z / abs(z), 240, pol)
    if frac is not None:
        mag = "" if abs(abs(z) - 1.0) <= pol.int_tol else f"{abs(z):.6f}*"
        return f"{body} ({mag}e[{frac.numerator}/{frac.denominator} turn])"
    return f"{body} (approx)"


def _print_matrix(name: str, M, labels, pol) -> None:
    print(f"{name}:")
    width = max(len(x) for x in labels)
    for i, row in enumerate(M):
        cells = "  ".join(fmt_complex(z, pol) for z in row)
        print(f"  {labels[i]:>{width}} | {cells}")


def _print_int_matrix(name: str, M, labels) -> None:
    print(f"{name}:")
    width = max(len(x) for x in labels)
    for i, row in enumerate(M):
        cells = " ".join(f"{int(v):>3d}" for v in row)
        print(f"  {labels[i]:>{width}} | {cells}")


def _print_report(report: AxiomReport, quiet: bool) -> None:
    print(f"verdict: {report.verdict}", f"(max deviation {report.max_deviation:.3e})")
    if report.convention_note:
        print(f"note: {report.convention_note}")
    if quiet:
        return
    for d in report.diagnostics:
        idx = ",".join(str(t) for t in d.indices)
        print(f"  [{d.severity}] {d.check_id} at {idx}: {d.message} "
              f"(deviation {d.measured:.3e})")


def _emit_json(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=False))


def _load_md(path: str) -> ModularData:
    return load_modular_data(path)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(args, pol) -> int:
    md = _load_md(args.file)
    report = validate(md, pol)
    if args.json:
        _emit_json(report.to_json_dict())
    else:
        _print_report(report, args.quiet)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_check(args, pol) -> int:
    md = _load_md(args.file)
    report = realizability_report(md, pol)
    if args.json:
        _emit_json(report.to_json_dict())
    else:
        _print_report(report, args.quiet)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_bantay(args, pol) -> int:
    md = _load_md(args.file)
    report = validate(md, pol)
    if not report.passed:
        if args.json:
            _emit_json(report.to_json_dict())
        else:
            print("data fails the modularity axioms; not computing traces",
                  file=sys.stderr)
            _print_report(report, args.quiet)
        return EXIT_FAIL
    dd = derive(md, pol)
    tt = trace_table(md, dd, pol)
    nu = fs_indicators(md, dd, tt, pol)
    mt = eigen_multiplicities(md, dd, tt, pol)
    if args.json:
        doc = {**tt.to_json_dict(), **nu.to_json_dict(), **mt.to_json_dict()}
        _emit_json(doc)
        return EXIT_PASS
    labels = list(md.labels)
    _print_matrix("self-braiding traces tau[k][i] (rows k, columns i)",
                  tt.tau, labels, pol)
    print("Frobenius-Schur indicators:")
    for i, v in enumerate(nu.nu):
        print(f"  {labels[i]:>8} : {v:+d}" if v else f"  {labels[i]:>8} :  0")
    if not args.quiet:
        _print_int_matrix("m_plus[k][i]", mt.m_plus, labels)
        _print_int_matrix("m_minus[k][i]", mt.m_minus, labels)
        # |t| and parity let the user re-derive the labels under the other
        # square-root branch (which just swaps m+ and m-)
        print("self-braiding channels (k, i): t = m+ - m-, N = N^k_ii:")
        for k in range(md.rank):
            for i in range(md.rank):
                n_ch = int(mt.m_plus[k, i] + mt.m_minus[k, i])
                if n_ch == 0:
                    continue
                t = int(mt.m_plus[k, i] - mt.m_minus[k, i])
                parity = "even" if n_ch % 2 == 0 else "odd"
                print(f"  ({labels[k]},{labels[i]}): t = {t:+d}, |t| = {abs(t)}, "
                      f"N = {n_ch} ({parity})")
    return EXIT_PASS


def cmd_rmatrix(args, pol) -> int:
    md = _load_md(args.file)
    report = realizability_report(md, pol)
    if not report.passed:
        if args.json:
            _emit_json(report.to_json_dict())
        else:
            print("not realizable; no canonical R-matrices", file=sys.stderr)
            _print_report(report, args.quiet)
        return EXIT_FAIL
    dd = derive(md, pol)
    tt = trace_table(md, dd, pol)
    mt = eigen_multiplicities(md, dd, tt, pol)
    blocks = canonical_r(md, dd, mt, pol)
    mono = monodromy_check(blocks, dd, pol)
    if args.json:
        _emit_json({"blocks": [b.to_json_dict() for b in blocks],
                    "monodromy": mono.to_json_dict()})
        return EXIT_PASS if mono.passed else EXIT_FAIL
    labels = list(md.labels)
    for b in blocks:
        i, j, k = b.channel
        ch = f"({labels[i]},{labels[j]};{labels[k]})"
        if b.form == "scalar":
            print(f"  {ch:>18}  scalar  {fmt_complex(b.value, pol)}  x 1_{b.size}")
        else:
            print(f"  {ch:>18}  signed  {fmt_complex(b.value, pol)}  "
                  f"(E+ rank {b.dim_plus}, E- rank {b.dim_minus})")
    print("monodromy check:", mono.verdict,
          f"(max deviation {mono.max_deviation:.3e})")
    return EXIT_PASS if mono.passed else EXIT_FAIL


def cmd_catalog(args, pol) -> int:
    entries = catalog()
    if args.name is None:
        if args.json:
            _emit_json([{"name": e.name, "rank": e.md.rank, "notes": e.notes}
                        for e in entries])
        else:
            for e in entries:
                dd = derive(e.md, pol)
                print(f"  {e.name:<16} rank {e.md.rank}  |sigma| = "
                      f"{dd.total_dim:.6f}  {e.notes}")
        return EXIT_PASS
    for e in entries:
        if e.name == args.name:
            if args.json:
                _emit_json(e.md.to_json_dict(exact_t=True))
            else:
                dd = derive(e.md, pol)
                print(f"{e.name}: rank {e.md.rank}, |sigma| = {dd.total_dim:.6f}")
                print(f"notes: {e.notes}")
                _print_matrix("S", e.md.S, list(e.md.labels), pol)
                print("T diagonal:")
                for i, z in enumerate(e.md.T):
                    print(f"  {e.md.labels[i]:>8} : {fmt_complex(z, pol)}")
            return EXIT_PASS
    print(f"unknown catalog entry {args.name!r}; known: {', '.join(catalog_names())}",
          file=sys.stderr)
    return EXIT_PARSE


def cmd_oracle(args, pol) -> int:
    try:
        model = get_model(args.model)
    except KeyError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    md = model.modular_data
    dd = derive(md, pol)
    tt = trace_table(md, dd, pol)
    rows = []
    worst = 0.0
    for i in range(md.rank):
        for k in range(md.rank):
            b = brute_trace(model, i, k)
            f = tt.tau[k, i]
            delta = abs(f - b)
            worst = max(worst, delta)
            rows.append((i, k, b, f, delta))
    if args.json:
        _emit_json({
            "model": model.name,
            "channels": [{"i": i, "k": k, "brute": [b.real, b.imag],
                          "formula": [f.real, f.imag], "delta": d}
                         for i, k, b, f, d in rows],
            "max_delta": worst,
        })
    else:
        if not args.quiet:
            print(f"model {model.name}: definition vs modular-data formula")
            for i, k, b, f, d in rows:
                print(f"  (i={model.labels[i]}, k={model.labels[k]})  "
                      f"brute {fmt_complex(b, pol):<40} formula "
                      f"{fmt_complex(f, pol):<40} |delta| {d:.3e}")
        print(f"max |delta| = {worst:.3e}")
    return EXIT_PASS if worst <= pol.eq_tol else EXIT_FAIL


def cmd_search(args, pol) -> int:
    fr = load_fusion_ring(args.file)
    stats: dict = {}
    results = search_pipeline(fr, max_order=args.max_order, pol=pol, jobs=args.jobs,
                              stats_out=stats)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    for idx, res in enumerate(results):
        path = out_dir / f"result_{idx:03d}.json"
        save_modular_data(res.md, path)
        files.append(str(path))
    families = sorted({res.provenance[:2] for res in results})
    if args.json:
        _emit_json({
            "rank": fr.rank,
            "max_order": args.max_order,
            "results": [{"provenance": list(res.provenance), "file": f,
                         "data": res.md.to_json_dict()}
                        for res, f in zip(results, files)],
            "result_count": len(results),
            "family_count": len(families),
            "stats": stats,
        })
    else:
        print(f"{len(results)} admissible data in {len(families)} twist families "
              f"-> {out_dir}")
        print(f"({stats['s_candidates']} S candidate(s); "
              f"{stats['skipped_assignments']} twist assignments skipped by the "
              f"modular relation; {stats['t_candidates']} T candidates filtered)")
        if not args.quiet:
            for res, f in zip(results, files):
                w = res.md.T / res.md.T[0]
                tw = ", ".join(fmt_complex(z, pol) for z in w[1:])
                print(f"  {res.provenance}  twists ({tw})  -> {f}")
    return EXIT_PASS


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common_flags(parser: argparse.ArgumentParser, top: bool) -> None:
    # on subparsers the defaults are SUPPRESS so flags given before the
    # subcommand are not clobbered by unset subcommand-level copies
    kw = {} if top else {"default": argparse.SUPPRESS}
    parser.add_argument("--tol", type=float, metavar="EPS",
                        help="override eq_tol (default 1e-9)",
                        **({"default": None} if top else kw))
    parser.add_argument("--int-tol", type=float, metavar="EPS",
                        help="override int_tol (default 1e-6)",
                        **({"default": None} if top else kw))
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output", **kw)
    parser.add_argument("--quiet", action="store_true",
                        help="suppress detail rows", **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modata",
        description="modular-data toolkit: validation, self-braiding traces, "
                    "FS indicators, canonical R-matrices and small-rank search",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common_flags(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, func, with_file=True):
        p = sub.add_parser(name, help=help_text)
        if with_file:
            p.add_argument("file")
        _common_flags(p, top=False)
        p.set_defaults(func=func)
        return p

    add("validate", "check a modular-data file against the axioms", cmd_validate)
    add("bantay", "trace table, FS indicators and multiplicities", cmd_bantay)
    add("rmatrix", "canonical R blocks plus monodromy check", cmd_rmatrix)
    add("check", "full realizability report", cmd_check)

    p = add("catalog", "list or show shipped modular data", cmd_catalog, with_file=False)
    p.add_argument("name", nargs="?", default=None)

    p = add("oracle", "brute-force vs formula trace comparison", cmd_oracle, with_file=False)
    p.add_argument("model")

    p = add("search", "search a fusion ring for admissible data", cmd_search)
    p.add_argument("--max-order", type=int, default=16, metavar="Q",
                   help="largest twist denominator (default 16)")
    p.add_argument("--out", default="search-results", metavar="DIR",
                   help="directory for result files (default ./search-results)")
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="parallel evaluation workers (default 1)")
    return parser


def make_policy(args) -> TolerancePolicy:
    eq = args.tol if args.tol is not None else DEFAULT_POLICY.eq_tol
    it = args.int_tol if args.int_tol is not None else max(eq, DEFAULT_POLICY.int_tol)
    return TolerancePolicy(eq_tol=eq, int_tol=it)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        pol = make_policy(args)
    except ValueError as exc:
        print(f"bad tolerance: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args, pol)
    except (InvalidModularData, FusionRingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
