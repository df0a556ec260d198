"""Command-line front end.

Three subcommands: ``compute`` emits Betti tables for one genus pair,
``verify`` runs the full verification suite over a genus grid, and ``table1``
recomputes the six tabulated low-genus columns and diffs every filled cell
against the bundled fixture.  Output is deterministic: the same configuration
always produces byte-identical files.

Exit codes: 0 success, 1 failed checks or table mismatches, 2 invalid
arguments, 3 internal assembly error (the witness is printed), 4 missing or
corrupt fixture.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from . import blocks, moduli, pointcount, weil
from .blocks import GenusPair
from .exactpoly import InexactDivision, NotPolynomial
from .moduli import BettiTable, Component, betti_table
from .pointcount import NegativePowerResidue

CACHE_ENV_VAR = "NODALBETTI_CACHE"
_FIXTURE_RESOURCE = "table1_fixture.json"
_ASSEMBLY_ERRORS = (InexactDivision, NotPolynomial, NegativePowerResidue)


@dataclass(frozen=True)
class RunConfig:
    command: str                      # compute | verify | table1
    g1: int = 0
    g2: int = 0
    component: str = "m12"            # m12 | m21 | intersection | all
    grid_max: int = 6
    format: str = "json"              # json | csv | md
    output_path: Optional[str] = None
    cache_path: Optional[str] = None
    fixture_path: Optional[str] = None


# --------------------------------------------------------------------------
# serialization

def table_to_doc(table: BettiTable) -> dict:
    """JSON document for one Betti table.  Betti numbers are decimal strings
    because they outgrow fixed-width integers at higher genus."""
    return {
        "g1": table.genus.g1,
        "g2": table.genus.g2,
        "component": table.component.value,
        "degree": table.degree,
        "euler_char": table.euler_char,
        "betti": [str(c) for c in table.coeffs],
    }


def tables_to_json(tables: list) -> str:
    docs = [table_to_doc(t) for t in tables]
    payload = docs[0] if len(docs) == 1 else docs
    return json.dumps(payload, indent=2) + "\n"


def table_to_csv(table: BettiTable) -> str:
    lines = ["i,B_i"]
    lines += [f"{i},{c}" for i, c in enumerate(table.coeffs)]
    return "\n".join(lines) + "\n"


def tables_to_md(tables: list) -> str:
    """Markdown table, rows = Betti index, one column per table (mirrors the
    orientation of the published table for visual diffing)."""
    heads = [f"({t.genus.g1},{t.genus.g2}) {t.component.value}" for t in tables]
    max_degree = max(t.degree for t in tables)
    lines = ["| i | " + " | ".join(heads) + " |",
             "|---:|" + "---:|" * len(tables)]
    for i in range(max_degree + 1):
        cells = [str(t.coeffs[i]) if i <= t.degree else "" for t in tables]
        lines.append(f"| {i} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def render_tables(tables: list, fmt: str) -> str:
    if fmt == "json":
        return tables_to_json(tables)
    if fmt == "csv":
        return table_to_csv(tables[0])
    if fmt == "md":
        return tables_to_md(tables)
    raise ValueError(f"unknown format {fmt!r}")


def _check_rows(results) -> list:
    rows = [{"g1": g1, "g2": g2, "name": c.name, "passed": c.passed,
             "advisory": c.advisory, "witness": c.witness}
            for g1, g2, report in results for c in report]
    rows.sort(key=lambda r: (r["g1"], r["g2"], r["name"]))
    return rows


def render_checks(rows: list, grid_max: int, fmt: str) -> str:
    passed = all(r["passed"] for r in rows if not r["advisory"])
    if fmt == "json":
        return json.dumps({"grid_max": grid_max, "passed": passed,
                           "checks": rows}, indent=2) + "\n"
    if fmt == "csv":
        lines = ["g1,g2,name,passed,advisory,witness"]
        for r in rows:
            witness = r["witness"].replace('"', "'")
            lines.append(f'{r["g1"]},{r["g2"]},{r["name"]},'
                         f'{str(r["passed"]).lower()},{str(r["advisory"]).lower()},"{witness}"')
        return "\n".join(lines) + "\n"
    if fmt == "md":
        lines = ["| g1 | g2 | check | passed | advisory | witness |",
                 "|---:|---:|---|---|---|---|"]
        for r in rows:
            lines.append(f'| {r["g1"]} | {r["g2"]} | {r["name"]} | '
                         f'{str(r["passed"]).lower()} | {str(r["advisory"]).lower()} | '
                         f'{r["witness"]} |')
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


# --------------------------------------------------------------------------
# cache (compute only; never consulted by verification commands)

def _formula_version() -> str:
    """Content hash of the formula-bearing modules, so cache entries become
    stale the moment any formula changes."""
    digest = hashlib.sha256()
    for module in (blocks, pointcount, weil, moduli):
        with open(module.__file__, "rb") as handle:
            digest.update(handle.read())
    return digest.hexdigest()[:16]


def _cache_key(gp: GenusPair, component: Component) -> str:
    return f"{gp.g1}:{gp.g2}:{component.value}:{_formula_version()}"


def _cache_load(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        return data if isinstance(data, dict) else {}
    except (OSError, ValueError):
        return {}


def _cached_table(gp: GenusPair, component: Component, cache_path: Optional[str]) -> BettiTable:
    if not cache_path:
        return betti_table(gp, component)
    store = _cache_load(cache_path)
    key = _cache_key(gp, component)
    entry = store.get(key)
    if isinstance(entry, list) and entry:
        coeffs = tuple(int(c) for c in entry)
        euler = sum(c if i % 2 == 0 else -c for i, c in enumerate(coeffs))
        return BettiTable(genus=gp, component=component, coeffs=coeffs,
                          degree=len(coeffs) - 1, euler_char=euler)
    table = betti_table(gp, component)
    store[key] = [str(c) for c in table.coeffs]
    try:
        with open(cache_path, "w", encoding="utf-8") as handle:
            json.dump(store, handle, indent=1, sort_keys=True)
    except OSError:
        pass  # cache is best-effort
    return table


# --------------------------------------------------------------------------
# fixture

class FixtureError(Exception):
    pass


def load_table1_fixture(path: Optional[str] = None) -> dict:
    """Fixture mapping "(g1,g2)" -> {betti index -> value}, filled cells only."""
    try:
        if path is None:
            text = resources.files(__package__).joinpath(_FIXTURE_RESOURCE).read_text("utf-8")
        else:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        raw = json.loads(text)
    except (OSError, ValueError) as exc:
        raise FixtureError(f"cannot load fixture: {exc}") from exc
    if not isinstance(raw, dict) or not raw:
        raise FixtureError("fixture must be a nonempty JSON object")
    fixture = {}
    for key, cells in raw.items():
        try:
            g1, g2 = (int(part) for part in key.strip("()").split(","))
            fixture[(g1, g2)] = {int(i): int(v) for i, v in cells.items()}
        except (AttributeError, TypeError, ValueError) as exc:
            raise FixtureError(f"corrupt fixture entry {key!r}: {exc}") from exc
    return fixture


# --------------------------------------------------------------------------
# commands

def _emit(text: str, output_path: Optional[str]) -> None:
    if output_path:
        with open(output_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def run_compute(cfg: RunConfig) -> int:
    gp = GenusPair(cfg.g1, cfg.g2)
    components = (list(Component) if cfg.component == "all"
                  else [Component(cfg.component)])
    tables = [_cached_table(gp, comp, cfg.cache_path) for comp in components]
    _emit(render_tables(tables, cfg.format), cfg.output_path)
    return 0


def run_verify(cfg: RunConfig) -> int:
    results = []
    for g1 in range(3, cfg.grid_max + 1):
        for g2 in range(3, cfg.grid_max + 1):
            gp = GenusPair(g1, g2)
            combined = weil.verify_kirwan_consistency(gp)
            combined.extend(weil.verify_decomposition(gp))
            for component in Component:
                sub = moduli.verify_component(gp, component)
                for c in sub:
                    combined.add(f"{component.value}_{c.name}", c.passed,
                                 c.witness, c.advisory)
            results.append((g1, g2, combined))
    rows = _check_rows(results)
    _emit(render_checks(rows, cfg.grid_max, cfg.format), cfg.output_path)
    hard = [r for r in rows if not r["advisory"]]
    failures = [r for r in hard if not r["passed"]]
    print(f"verify: {len(hard)} checks over grid 3..{cfg.grid_max}, "
          f"{len(failures)} failures", file=sys.stderr)
    return 0 if not failures else 1


def run_table1(cfg: RunConfig) -> int:
    try:
        fixture = load_table1_fixture(cfg.fixture_path)
    except FixtureError as exc:
        print(f"table1: {exc}", file=sys.stderr)
        return 4
    columns = []
    total_mismatches = 0
    for (g1, g2) in sorted(fixture):
        gp = GenusPair(g1, g2)
        cells = fixture[(g1, g2)]
        poly = moduli.poincare_m12(gp)
        degree = 2 * gp.dimension
        mismatches = []
        for i, expected in sorted(cells.items()):
            got = poly.coeff(i)
            if got != expected:
                mismatches.append({"index": i, "fixture": str(expected),
                                   "computed": str(got)})
        # blank cells are pinned by duality instead of the fixture: when the
        # mirror cell is filled, the computed value must agree with it
        duality_checked = 0
        for i in range(degree + 1):
            if i in cells:
                continue
            mirror = degree - i
            if mirror in cells:
                duality_checked += 1
                if poly.coeff(i) != cells[mirror]:
                    mismatches.append({"index": i,
                                       "fixture": f"{cells[mirror]} (dual of B_{mirror})",
                                       "computed": str(poly.coeff(i))})
        total_mismatches += len(mismatches)
        columns.append({"g1": g1, "g2": g2, "filled_cells": len(cells),
                        "duality_checked_blanks": duality_checked,
                        "mismatches": mismatches})
    report = {"columns": columns, "total_mismatches": total_mismatches}
    _emit(_render_table1(report, cfg.format), cfg.output_path)
    print(f"table1: {total_mismatches} mismatches across all filled cells",
          file=sys.stderr)
    return 0 if total_mismatches == 0 else 1


def _render_table1(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    lines = []
    if fmt == "md":
        lines += ["| g1 | g2 | filled cells | duality-checked blanks | mismatches |",
                  "|---:|---:|---:|---:|---:|"]
        for col in report["columns"]:
            lines.append(f'| {col["g1"]} | {col["g2"]} | {col["filled_cells"]} | '
                         f'{col["duality_checked_blanks"]} | {len(col["mismatches"])} |')
    else:  # csv
        lines.append("g1,g2,index,fixture,computed")
    for col in report["columns"]:
        for m in col["mismatches"]:
            if fmt == "md":
                lines.append(f'MISMATCH ({col["g1"]},{col["g2"]}) B_{m["index"]}: '
                             f'fixture {m["fixture"]}, computed {m["computed"]}')
            else:
                lines.append(f'{col["g1"]},{col["g2"]},{m["index"]},'
                             f'{m["fixture"]},{m["computed"]}')
    if fmt == "md":
        lines.append("")
        lines.append(f'{report["total_mismatches"]} mismatches across all filled cells')
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nodalbetti",
        description="Exact Betti tables for the two-component fixed-determinant "
                    "moduli space of a two-component nodal curve.")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="compute Betti table(s) for one genus pair")
    compute.add_argument("--g1", type=int, required=True, help="genus of the first component (>= 2)")
    compute.add_argument("--g2", type=int, required=True, help="genus of the second component (>= 2)")
    compute.add_argument("--component", choices=["m12", "m21", "intersection", "all"],
                         default="m12")
    compute.add_argument("--format", choices=["json", "csv", "md"], default="json")
    compute.add_argument("--output", help="write to this file instead of stdout")
    compute.add_argument("--cache", help=f"cache file (also ${CACHE_ENV_VAR})")

    verify = sub.add_parser("verify", help="run the verification suite over a genus grid")
    verify.add_argument("--grid-max", type=int, default=6,
                        help="run all 3 <= g1,g2 <= grid-max (default 6)")
    verify.add_argument("--format", choices=["json", "csv", "md"], default="json")
    verify.add_argument("--output", help="write to this file instead of stdout")

    table1 = sub.add_parser("table1", help="recompute the six tabulated columns "
                                           "and diff against the bundled fixture")
    table1.add_argument("--format", choices=["json", "csv", "md"], default="md")
    table1.add_argument("--output", help="write to this file instead of stdout")
    table1.add_argument("--fixture", help="override the bundled fixture file")
    return parser


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.command == "compute":
        if args.g1 < 2 or args.g2 < 2:
            raise SystemExit(2)
        cache = args.cache or os.environ.get(CACHE_ENV_VAR) or None
        if args.component == "all" and args.format == "csv":
            # csv is single-table by definition (one i,B_i series)
            print("compute: --component all cannot be rendered as csv",
                  file=sys.stderr)
            raise SystemExit(2)
        return RunConfig(command="compute", g1=args.g1, g2=args.g2,
                         component=args.component, format=args.format,
                         output_path=args.output, cache_path=cache)
    if args.command == "verify":
        if args.grid_max < 3:
            print("verify: --grid-max must be at least 3", file=sys.stderr)
            raise SystemExit(2)
        return RunConfig(command="verify", grid_max=args.grid_max,
                         format=args.format, output_path=args.output)
    return RunConfig(command="table1", format=args.format,
                     output_path=args.output, fixture_path=args.fixture)


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if cfg.command == "compute":
            return run_compute(cfg)
        if cfg.command == "verify":
            return run_verify(cfg)
        return run_table1(cfg)
    except _ASSEMBLY_ERRORS as exc:
        print(f"internal assembly error: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3


def app() -> None:
    sys.exit(main())


if __name__ == "__main__":
    app()
