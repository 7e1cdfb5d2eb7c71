"""Command-line front end.

Every command prints a data section (deterministic for fixed inputs) and a
trailing ``wall-time`` line.  Exit status: 0 computed, 1 invalid input,
2 inconclusive search.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import time
from typing import List, Optional, Sequence

from .assoc import (
    AssocError,
    center,
    fingerprint,
    format_assoc_algebra,
    ideal_closure,
    parse_assoc_algebra,
    quotient_algebra,
)
from .catalog import CatalogError, catalog_entry, catalog_get, catalog_list
from .envelope import EnvelopeError, monomial_weight, parse_element, truncated_envelope
from .field import FieldError, FieldSpec
from .lie import (
    LieAlgebra,
    LieError,
    ParseError,
    graded_algebra,
    homogeneous_basis,
    is_homogeneous,
    lcs_term,
    format_lie_algebra,
    lie_center,
    lower_central_series,
    parse_lie_algebra,
    validate,
    vector_weights,
)
from .iso.lifting import filtered_iso_search
from .iso.maps import Status, parse_map_file, verify_certificate
from .iso.screen import (
    ScreenError,
    enveloping_iso_table,
    gr_invariants,
    load_entries,
    screen_pairs,
)
from .iso.targets import TargetError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


class Report:
    """Collects labeled output; ``machine`` switches to key=value lines."""

    def __init__(self, machine: bool):
        self.machine = machine
        self.lines: List[str] = []

    def kv(self, key: str, value) -> None:
        if self.machine:
            self.lines.append(f"{key.replace(' ', '_')}={value}")
        else:
            self.lines.append(f"{key}: {value}")

    def eq(self, key: str, value) -> None:
        if self.machine:
            self.lines.append(f"{key.replace(' ', '_')}={value}")
        else:
            self.lines.append(f"{key} = {value}")

    def text(self, line: str) -> None:
        if self.machine:
            self.lines.append(f"# {line}")
        else:
            self.lines.append(line)

    def emit(self) -> None:
        for ln in self.lines:
            print(ln)


# ---------------------------------------------------------------------------
# loading inputs

_CAT_RE = re.compile(r"^([LK]\d+\.\d+)(?:\((.+)\))?$")


def _field(args) -> Optional[FieldSpec]:
    return FieldSpec.parse(args.field) if args.field else None


def _param(F: FieldSpec, text: Optional[str]):
    if text is None:
        return None
    try:
        return F(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad parameter {text!r}: {exc}") from None


def _load_lie(spec: str, F: Optional[FieldSpec], param: Optional[str]) -> LieAlgebra:
    """A catalog name (``K6.24(4)`` allowed) or a Lie algebra file."""
    m = _CAT_RE.match(spec)
    if m and not os.path.exists(spec):
        F = F or FieldSpec.parse("Q")
        p = m.group(2) if m.group(2) is not None else param
        entry = catalog_entry(m.group(1))
        if entry.parametric and p is None:
            raise UsageError(f"{m.group(1)} needs --param")
        return catalog_get(m.group(1), F, _param(F, p) if p is not None else None)
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {spec}: {exc.strerror}") from None
    L = parse_lie_algebra(text, name=os.path.basename(spec))
    if F is not None and F != L.field:
        L = L.over(F)
    return L


def _source(args) -> LieAlgebra:
    if args.catalog:
        return _load_lie(args.catalog, _field(args), args.param)
    if not args.file:
        raise UsageError("give a Lie algebra file or --catalog NAME")
    return _load_lie(args.file, _field(args), args.param)


def _homogeneous(L: LieAlgebra, rep: Report) -> LieAlgebra:
    rv = validate(L)
    if not rv.ok:
        raise UsageError(f"not a nilpotent Lie algebra: {rv.first()}")
    if L.weights and is_homogeneous(L) and tuple(L.weights) == vector_weights(L):
        return L
    R = homogeneous_basis(L)
    if not R.is_identity:
        rep.text("note: re-based on a homogeneous basis")
    return R.algebra


def _is_assoc_file(path: Optional[str]) -> bool:
    if not path or not os.path.exists(path):
        return False
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                return line == "assoc"
    return False


def _algebra(args, rep: Report):
    """The associative algebra a command works on: file, or Ω(L)/Ω^t."""
    if _is_assoc_file(args.file) and not args.catalog:
        with open(args.file, encoding="utf-8") as fh:
            A = parse_assoc_algebra(fh.read())
        F = _field(args)
        if F is not None and F != A.field:
            raise UsageError("--field differs from the file's field")
        return A
    L = _homogeneous(_source(args), rep)
    E = truncated_envelope(L, args.truncate)
    rep.kv("truncation", E.t)
    return E


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args, rep: Report) -> int:
    L = _source(args)
    rep.kv("algebra", L.name or "-")
    rep.kv("field", L.field)
    rep.kv("dim", L.dim)
    rv = validate(L)
    reason = rv.first()
    if reason is None:
        try:
            rep_lcs = lower_central_series(L)
        except LieError as exc:
            reason = f"not nilpotent: {exc}"
    if reason is not None:
        rep.kv("valid", "no")
        rep.kv("reason", reason)
        return 1
    rep.kv("valid", "yes")
    rep.kv("class", rep_lcs.nilpotency_class)
    return 0


def cmd_lcs(args, rep: Report) -> int:
    L = _source(args)
    rv = validate(L)
    if not rv.ok:
        raise UsageError(f"not a nilpotent Lie algebra: {rv.first()}")
    lcs = lower_central_series(L)
    rep.kv("algebra", L.name or "-")
    rep.kv("field", L.field)
    rep.kv("lcs dims", lcs.dims)
    rep.kv("class", lcs.nilpotency_class)
    return 0


def cmd_gr(args, rep: Report) -> int:
    L = _homogeneous(_source(args), rep)
    G = graded_algebra(L)
    inv = gr_invariants(L)
    rep.kv("algebra", L.name or "-")
    rep.kv("field", L.field)
    rep.kv("component dims", G.component_dims)
    rep.kv("center dim", inv.center_dim)
    rep.kv("upper central dims", inv.upper_central_dims)
    rep.kv("lcs centralizer dims", inv.lcs_centralizer_dims)
    rep.kv("weights", " ".join(map(str, G.algebra.weights)))
    rep.text("brackets:")
    for ln in G.algebra.brackets_text():
        rep.text("  " + ln)
    return 0


def cmd_env(args, rep: Report) -> int:
    L = _homogeneous(_source(args), rep)
    E = truncated_envelope(L, args.truncate)
    rep.kv("algebra", L.name or "-")
    rep.kv("field", L.field)
    rep.kv("truncation", E.t)
    rep.kv("dim", E.dim)
    rep.text("basis:")
    for n, mono in enumerate(E.monomials):
        rep.text(f"  {n + 1:>4}  w={monomial_weight(mono, L.weights)}  {E.labels[n]}")
    if args.table:
        rep.text("table:")
        for ln in E.table_lines():
            rep.text("  " + ln)
    return 0


def cmd_center(args, rep: Report) -> int:
    if args.truncate is None and not _is_assoc_file(args.file):
        L = _source(args)
        Z = lie_center(L)
        rep.kv("algebra", L.name or "-")
        rep.kv("field", L.field)
        rep.eq("dim Z", Z.dim)
        return 0
    A = _algebra(args, rep)
    Z = center(A)
    rep.kv("field", A.field)
    rep.kv("dim A", A.dim)
    rep.eq("dim Z", Z.dim)
    return 0


def cmd_fingerprint(args, rep: Report) -> int:
    A = _algebra(args, rep)
    fp = fingerprint(A)
    rep.kv("field", A.field)
    rep.kv("dim A", A.dim)
    for ln in fp.as_lines():
        key, _, val = ln.partition(" = ")
        rep.kv(key, val)
    return 0


def cmd_quotient(args, rep: Report) -> int:
    L = _homogeneous(_source(args), rep)
    E = truncated_envelope(L, args.truncate)
    gens = []
    if args.lcs_term:
        term = lcs_term(L, args.lcs_term)
        for v in term.basis:
            gens.append(E.element({(k,): c for k, c in enumerate(v) if c != 0}).vector())
    for text in args.ideal or []:
        gens.append(parse_element(text, E).vector())
    if not gens:
        raise UsageError("give --ideal elements or --lcs-term")
    I = ideal_closure(E, gens)
    Q = quotient_algebra(E, I)
    rep.kv("algebra", L.name or "-")
    rep.kv("field", L.field)
    rep.kv("truncation", E.t)
    rep.kv("dim A", E.dim)
    rep.kv("dim I", I.dim)
    rep.kv("dim A/I", Q.dim)
    for ln in fingerprint(Q).as_lines():
        key, _, val = ln.partition(" = ")
        rep.kv(key, val)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(format_assoc_algebra(Q))
        rep.kv("written", args.out)
    return 0


def _verdict_lines(rep: Report, v) -> None:
    for ln in v.lines():
        key, _, val = ln.partition(": ")
        if val and not ln.startswith(" "):
            rep.kv(key, val)
        else:
            rep.text(ln)


def cmd_iso(args, rep: Report) -> int:
    F = _field(args)
    L = _homogeneous(_load_lie(args.a, F, args.param), rep)
    K = _homogeneous(_load_lie(args.b, F if F is not None else L.field, args.param_b), rep)
    if L.field != K.field:
        raise UsageError("both algebras must be over the same field")
    F = L.field
    rep.kv("source", L.name or "-")
    rep.kv("target", K.name or "-")
    rep.kv("field", F)
    if args.certificate:
        if args.truncate is None:
            raise UsageError("--certificate needs --truncate")
        with open(args.certificate, encoding="utf-8") as fh:
            text = fh.read()
        E = truncated_envelope(K, args.truncate)
        m = parse_map_file(text, L, E)
        v = verify_certificate(L, K, args.truncate, m)
    else:
        if not F.is_finite:
            raise UsageError("searches need a finite field (use --certificate over Q)")
        t = None if args.lie else (args.truncate or max(L.nilpotency_class, K.nilpotency_class) + 1)
        v = filtered_iso_search(L, K, t, budget=args.budget)
    rep.kv("level", "Lie algebras" if args.lie else "truncated enveloping algebras")
    _verdict_lines(rep, v)
    return v.exit_code


def cmd_screen(args, rep: Report) -> int:
    F = _field(args) or FieldSpec.parse("Q")
    entries = load_entries(args.dim, F)
    r = screen_pairs(entries, F, args.truncate, search=args.search, budget=args.budget)
    for ln in r.lines():
        rep.text(ln)
    return 2 if args.search and any(row.verdict.status is Status.INCONCLUSIVE for row in r.rows) else 0


def cmd_table(args, rep: Report) -> int:
    F = _field(args) or FieldSpec.parse("Q")
    tab = enveloping_iso_table(F, args.dim, budget=args.budget)
    for ln in tab.lines():
        rep.text(ln)
    return 0


def cmd_catalog(args, rep: Report) -> int:
    F = _field(args)
    if args.action == "show":
        if not args.name:
            raise UsageError("catalog show needs an entry name")
        L = _load_lie(args.name, F, args.param)
        for ln in format_lie_algebra(L).splitlines():
            rep.text(ln)
        return 0
    if args.name:
        raise UsageError("catalog list takes no entry name")
    rows = catalog_list(args.dim, F)
    for e in rows:
        flags = []
        if not e.has_table:
            flags.append("no-table")
        if e.parametric:
            flags.append("param")
        rep.text(f"{e.name:<7} dim={e.dim} class={e.nilpotency_class} lcs={e.lcs_dims} {' '.join(flags)}".rstrip())
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser, file_arg: bool = True) -> None:
    if file_arg:
        p.add_argument("file", nargs="?", help="Lie algebra file (or assoc file where accepted)")
        p.add_argument("--catalog", metavar="NAME", help="use a catalog entry, e.g. K6.3")
        p.add_argument("--param", metavar="a/b", help="parameter of a parametric entry")
    p.add_argument("--field", metavar="F", help="Q or GF(p); overrides the file's field")
    p.add_argument("--machine", action="store_true", help="emit key=value lines")
    p.add_argument("--jobs", type=int, default=1, help="worker cap (searches run sequentially)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ueaiso", description="Enveloping algebras of nilpotent Lie algebras.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn, helptext in (
        ("validate", cmd_validate, "check the Jacobi identity and nilpotency"),
        ("lcs", cmd_lcs, "lower central series dimensions"),
        ("gr", cmd_gr, "associated graded Lie algebra"),
    ):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("env", help="truncated enveloping algebra")
    _common(p)
    p.add_argument("--truncate", type=int, help="t (default class+1)")
    p.add_argument("--table", action="store_true", help="print the multiplication table")
    p.set_defaults(func=cmd_env)

    for name, fn, helptext in (
        ("center", cmd_center, "center dimension"),
        ("fingerprint", cmd_fingerprint, "invariant fingerprint"),
    ):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--truncate", type=int, help="t for Ω(L)/Ω^t")
        p.set_defaults(func=fn)

    p = sub.add_parser("quotient", help="quotient of Ω(L)/Ω^t by an ideal")
    _common(p)
    p.add_argument("--truncate", type=int)
    p.add_argument("--ideal", action="append", metavar="POLY", help="ideal generator, e.g. e.6")
    p.add_argument("--lcs-term", type=int, metavar="i", help="add the image of L^i")
    p.add_argument("--out", metavar="FILE", help="write the quotient in assoc format")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("iso", help="isomorphism of truncated enveloping algebras")
    p.add_argument("a", help="Lie algebra file or catalog name")
    p.add_argument("b", help="Lie algebra file or catalog name")
    _common(p, file_arg=False)
    p.add_argument("--param", help="parameter for the first algebra")
    p.add_argument("--param-b", help="parameter for the second algebra")
    p.add_argument("--truncate", type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--search", action="store_true", help="filtered search (default)")
    mode.add_argument("--certificate", metavar="MAP", help="verify a map file")
    p.add_argument("--lie", action="store_true", help="decide Lie isomorphism instead")
    p.add_argument("--budget", type=int, default=10**8)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("screen", help="bucket a catalog dimension by gr and fingerprints")
    _common(p, file_arg=False)
    p.add_argument("--dim", type=int, required=True, choices=(5, 6))
    p.add_argument("--truncate", type=int)
    p.add_argument("--search", action="store_true")
    p.add_argument("--budget", type=int, default=10**8)
    p.set_defaults(func=cmd_screen)

    p = sub.add_parser("table", help="isomorphism table of enveloping algebras")
    _common(p, file_arg=False)
    p.add_argument("--dim", type=int, required=True, choices=(5, 6))
    p.add_argument("--budget", type=int, default=10**8)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("catalog", help="list catalog entries or show one")
    p.add_argument("action", nargs="?", choices=("list", "show"), default="list")
    p.add_argument("name", nargs="?", help="entry for show, e.g. K6.24")
    _common(p, file_arg=False)
    p.add_argument("--param", metavar="a/b", help="parameter of a parametric entry")
    p.add_argument("--dim", type=int)
    p.set_defaults(func=cmd_catalog)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    rep = Report(args.machine)
    start = time.perf_counter()
    rep.kv("command", " ".join([args.command] + [a for a in (argv if argv is not None else sys.argv[1:])][1:]))
    try:
        code = args.func(args, rep)
    except (UsageError, ParseError, LieError, CatalogError, FieldError, EnvelopeError,
            AssocError, TargetError, ScreenError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rep.emit()
    print(f"wall-time: {time.perf_counter() - start:.3f}s")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
