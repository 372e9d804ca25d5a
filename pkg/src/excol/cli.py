"""Command-line driver.

    excol <command> <input> [--json] [--max-page R] [--anticanonical]
          [--hoh d0,d1,...] [--field Q|Fp]

Commands: validate, pseudoheight, e1, ss, height, report, fullness, fixture.
Inputs name a collection document on disk, a file under the directory in
EXCOL_FIXTURES, or a built-in fixture.  JSON output is canonical (sorted
keys), so identical runs are byte-identical.  Exit codes: 0 success,
1 validation or engine failure, 2 I/O or format error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import fixtures, fullness, heights, model, nhh
from .exactlin import ContainmentError, ExactLinError
from .model import INF, SpecError
from .pseudoheight import pseudoheight as compute_ph
from .pseudoheight import qualitative_ph_bounds


class CliFormatError(Exception):
    """Exit code 2: unusable input."""


def _load_document(path):
    candidates = [path, path + ".json"]
    env_dir = os.environ.get("EXCOL_FIXTURES")
    base = os.path.basename(path)
    base_noext = base[:-5] if base.endswith(".json") else base
    if env_dir:
        candidates += [
            os.path.join(env_dir, base),
            os.path.join(env_dir, base_noext + ".json"),
        ]
    for cand in candidates:
        if os.path.isfile(cand):
            try:
                with open(cand, "r", encoding="utf-8") as fh:
                    return fh.read()
            except OSError as exc:
                raise CliFormatError(f"cannot read {cand}: {exc}") from exc
    try:
        return fixtures.fixture_document(base_noext)
    except KeyError:
        raise CliFormatError(
            f"no such input: {path} (not a file, not in EXCOL_FIXTURES, "
            f"not a built-in fixture)"
        ) from None


def _load_spec(args):
    doc = _load_document(args.input)
    try:
        spec = model.parse(doc)
    except SpecError as exc:
        raise CliFormatError(f"bad collection document: {exc}") from exc
    if args.field:
        if args.field != "Q" and not (
            args.field.startswith("F") and args.field[1:].isdigit()
        ):
            raise CliFormatError(f"bad field {args.field!r}")
        spec.field_name = args.field
    return spec


def _jval(v):
    if v is None:
        return None
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    if isinstance(v, float):
        return int(v)
    return v


def _emit(payload, as_json, lines):
    if as_json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        for line in lines:
            print(line)


def _grid_lines(title, table):
    if not table:
        return [f"{title}: empty"]
    mps = sorted({mp for mp, _ in table})
    qs = sorted({q for _, q in table}, reverse=True)
    width = max(4, max(len(str(d)) for d in table.values()) + 2)
    out = [f"{title} (rows q, columns -p):"]
    header = "      " + "".join(str(mp).rjust(width) for mp in mps)
    out.append(header)
    for q in qs:
        cells = []
        for mp in mps:
            d = table.get((mp, q))
            cells.append((str(d) if d else ".").rjust(width))
        out.append(f"  q={q:<3}" + "".join(cells))
    return out


def _table_json(table):
    return [[mp, q, d] for (mp, q), d in sorted(table.items())]


def cmd_validate(args):
    spec = _load_spec(args)
    report = model.validate(spec)
    lines = []
    payload = {"checks": [], "ok": report.ok}
    for check in report.checks:
        status = "ok" if check.passed else "FAIL"
        suffix = f": {check.detail}" if check.detail else ""
        lines.append(f"{status:4s} {check.name}{suffix}")
        payload["checks"].append(
            {"name": check.name, "passed": check.passed, "detail": check.detail}
        )
    lines.append("all checks passed" if report.ok else "validation failed")
    _emit(payload, args.json, lines)
    return 0 if report.ok else 1


def cmd_pseudoheight(args):
    spec = _load_spec(args)
    if spec.is_exact:
        res = compute_ph(spec)
        payload = {
            "ph": _jval(res.value),
            "ph_ac": _jval(res.value_ac),
            "witness": list(res.witness) if res.witness else None,
        }
        lines = [
            f"pseudoheight: {_jval(res.value)}",
            f"anticanonical pseudoheight: {_jval(res.value_ac)}",
            f"witness chain: {res.witness}",
        ]
        if args.anticanonical:
            lines = lines[1:] + lines[:1]
        _emit(payload, args.json, lines)
        return 0
    bounds = qualitative_ph_bounds(spec)
    payload = {
        "ph_ac_lower": _jval(bounds.lower),
        "ph_ac_upper": _jval(bounds.upper),
        "witness": list(bounds.witness_chain) if bounds.witness_chain else None,
    }
    lines = [
        "anticanonical pseudoheight interval: "
        f"[{_jval(bounds.lower)}, {_jval(bounds.upper)}]",
        f"upper bound witness chain: {bounds.witness_chain}",
    ]
    _emit(payload, args.json, lines)
    return 0


def cmd_e1(args):
    spec = _load_spec(args)
    table, _ = nhh.build_e1(spec)
    nonzero_t = [mp + q for (mp, q), d in table.items() if d]
    payload = {
        "entries": _table_json(table),
        "min_total_degree": _jval(min(nonzero_t) if nonzero_t else INF),
    }
    lines = _grid_lines("first page", table)
    lines.append(f"minimal total degree: {payload['min_total_degree']}")
    _emit(payload, args.json, lines)
    return 0


def cmd_ss(args):
    spec = _load_spec(args)
    cx = nhh.assemble_differential(spec)
    ss = nhh.spectral_sequence(cx, max_page=args.max_page)
    payload = {
        "pages": {str(r): _table_json(t) for r, t in sorted(ss.pages.items())},
        "stable_page": ss.stable_page,
        "infinity": _table_json(ss.infinity),
    }
    lines = []
    shown = args.max_page or ss.stable_page
    for r in sorted(ss.pages):
        if r > shown:
            break
        lines += _grid_lines(f"page {r}", ss.pages[r])
    lines.append(f"stabilizes at page {ss.stable_page}")
    lines += _grid_lines("limit page", ss.infinity)
    _emit(payload, args.json, lines)
    return 0


def cmd_height(args):
    spec = _load_spec(args)
    if spec.is_exact:
        ph = compute_ph(spec)
        h, nhh_dims = heights.height(spec)
        payload = {
            "ph": _jval(ph.value),
            "ph_ac": _jval(ph.value_ac),
            "he_lo": _jval(h.lo),
            "he_hi": _jval(h.hi),
            "nhh": {str(t): d for t, d in sorted(nhh_dims.items())},
        }
        lines = [
            f"pseudoheight: {_jval(ph.value)} (witness {ph.witness})",
            f"height: {h}",
            "normal cohomology dims: "
            + ", ".join(f"{t}: {d}" for t, d in sorted(nhh_dims.items())),
        ]
        if h.nhh_vanishes:
            lines.append(
                "warning: normal cohomology vanishes entirely; "
                "see the fullness command"
            )
        _emit(payload, args.json, lines)
        return 0
    bounds = qualitative_ph_bounds(spec)
    h, _ = heights.height(spec)
    payload = {
        "ph_ac_lower": _jval(bounds.lower),
        "ph_ac_upper": _jval(bounds.upper),
        "he_lo": _jval(h.lo),
        "he_hi": _jval(h.hi),
        "witness": list(bounds.witness_chain) if bounds.witness_chain else None,
    }
    lines = [
        "anticanonical pseudoheight interval: "
        f"[{_jval(bounds.lower)}, {_jval(bounds.upper)}]",
        f"height: {h}",
    ]
    _emit(payload, args.json, lines)
    return 0


def cmd_report(args):
    spec = _load_spec(args)
    hoh = None
    if args.hoh:
        try:
            hoh = [int(x) for x in args.hoh.split(",")]
        except ValueError:
            raise CliFormatError(f"bad --hoh list {args.hoh!r}") from None
    rep = heights.build_report(spec, hoh_x_dims=hoh)
    payload = {
        "ph": _jval(rep.ph),
        "ph_ac": _jval(rep.ph_ac),
        "he_lo": _jval(rep.height.lo),
        "he_hi": _jval(rep.height.hi),
        "he_ac_lo": _jval(rep.height_ac.lo),
        "he_ac_hi": _jval(rep.height_ac.hi),
        "used_shortcut": rep.used_shortcut,
        "iso_range": _jval(rep.iso_range),
        "mono_degree": _jval(rep.mono_degree),
        "deformation_equivalent": rep.deformation_equivalent,
        "witness": list(rep.witness) if rep.witness else None,
    }
    if rep.nhh_dims is not None:
        payload["nhh"] = {str(t): d for t, d in sorted(rep.nhh_dims.items())}
    if rep.hoh_x_dims is not None:
        payload["hoh_x"] = rep.hoh_x_dims
        payload["hoh_a"] = rep.hoh_a_dims
    if rep.ph is None and rep.ph_bounds is not None:
        b = rep.ph_bounds
        ph_line = (
            "anticanonical pseudoheight interval: "
            f"[{_jval(b.lower)}, {_jval(b.upper)}]"
        )
    else:
        ph_line = f"pseudoheight: {_jval(rep.ph)} (anticanonical {_jval(rep.ph_ac)})"
    lines = [
        ph_line,
        f"height: {rep.height} (anticanonical {rep.height_ac})",
        f"shortcut used: {rep.used_shortcut}",
        f"restriction map: isomorphism for k <= {_jval(rep.iso_range)}, "
        f"monomorphism at k = {_jval(rep.mono_degree)}",
        f"deformation spaces agree: {rep.deformation_equivalent}",
    ]
    if rep.hoh_a_dims is not None:
        shown = [
            f"HOH^{k}(complement) = {d}"
            for k, d in enumerate(rep.hoh_a_dims)
            if d is not None
        ]
        lines.append("; ".join(shown) if shown else "no complement dims implied")
    _emit(payload, args.json, lines)
    return 0


def cmd_fullness(args):
    spec = _load_spec(args)
    h, _ = heights.height(spec)
    verdict = fullness.not_full_check(h)
    if verdict is None:
        if spec.is_exact:
            verdict = fullness.full_check(spec)
        else:
            verdict = fullness.FullnessVerdict(
                fullness.INCONCLUSIVE,
                "no exact data: cannot run the cocycle certificate",
            )
    payload = {"status": verdict.status, "evidence": verdict.evidence}
    _emit(payload, args.json, [f"{verdict.status}: {verdict.evidence}"])
    return 0


def cmd_fixture(args):
    if args.list or args.input is None:
        names = fixtures.fixture_list()
        _emit({"fixtures": names}, args.json, names)
        return 0
    try:
        spec = fixtures.fixture_spec(args.input)
    except KeyError:
        raise CliFormatError(f"unknown fixture {args.input!r}") from None
    sys.stdout.write(model.serialize(spec))
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "pseudoheight": cmd_pseudoheight,
    "e1": cmd_e1,
    "ss": cmd_ss,
    "height": cmd_height,
    "report": cmd_report,
    "fullness": cmd_fullness,
    "fixture": cmd_fixture,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="excol",
        description="heights and fullness certificates for exceptional "
        "collections",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("input", nargs="?", help="document path or fixture name")
    parser.add_argument("--json", action="store_true", help="canonical JSON output")
    parser.add_argument("--max-page", type=int, default=None)
    parser.add_argument("--anticanonical", action="store_true")
    parser.add_argument("--hoh", help="comma-separated ambient Hochschild dims")
    parser.add_argument("--field", help="Q or Fp, overriding the document")
    parser.add_argument("--list", action="store_true", help="list fixtures")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command != "fixture" and args.input is None:
        print("error: an input document is required", file=sys.stderr)
        return 2
    if args.max_page is not None and args.max_page < 1:
        print("error: --max-page must be >= 1", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except CliFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SpecError, nhh.DifferentialError, ContainmentError, ExactLinError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
