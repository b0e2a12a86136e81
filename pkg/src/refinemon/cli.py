"""Command-line front end.

Exit codes: 0 success, 1 mathematical violation or exhausted budget,
2 malformed input, 3 internal oracle failure.
"""

import argparse
import json
import os
import sys

from . import __version__, lattice
from .divisibility import weak_divide
from .errors import (BudgetError, DomainError, InsufficientDepth, InvariantError,
                     NotWeaklyDivisible, PreconditionError, RefinemonError,
                     SpecFormatError)
from .oracles import FiniteMonoid, verify_axioms
from .resolution import DEFAULT_RANK_BUDGET, build_tower
from .specfile import load_spec, oracle_hash
from . import towerfile

OK, VIOLATION, BAD_INPUT, ORACLE_FAILURE = 0, 1, 2, 3
RANK_BUDGET_ENV = "REFINEMON_RANK_BUDGET"


def _err(msg):
    print(f"refinemon: {msg}", file=sys.stderr)


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _default_budget():
    raw = os.environ.get(RANK_BUDGET_ENV)
    if raw is None:
        return DEFAULT_RANK_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise SpecFormatError(f"{RANK_BUDGET_ENV}={raw!r} is not an integer") from None
    return value


def cmd_check(args):
    oracle = load_spec(args.spec)
    report = verify_axioms(oracle)
    for line in report.lines():
        print(line)
    return OK if report.ok else VIOLATION


def cmd_resolve(args):
    oracle = load_spec(args.spec)
    budget = args.rank_budget if args.rank_budget is not None else _default_budget()
    if args.depth < 0:
        raise SpecFormatError("--depth must be nonnegative")
    if budget < 1:
        raise SpecFormatError("rank budget must be at least 1")
    report = verify_axioms(oracle)
    if not report.ok:
        for line in report.lines():
            _err(line)
        return VIOLATION
    tower = build_tower(oracle, args.depth, budget)
    doc = towerfile.tower_to_document(tower)
    problems, counts = towerfile.verify_document(doc, oracle)
    if problems:
        for p in problems:
            _err(_describe(p))
        raise InvariantError("freshly built tower failed re-verification")
    doc["manifest"] = {k: {"checked": v, "verified": True} for k, v in sorted(counts.items())}
    _emit(towerfile.dumps(doc), args.out)
    return OK


def _describe(p):
    where = f"stage {p['stage']}"
    if "basis" in p:
        where += f", basis index {p['basis']}"
    return f"{where}: {p['message']}"


def cmd_verify_tower(args):
    doc = towerfile.load_document(args.tower)
    oracle = load_spec(args.spec)
    problems, counts = towerfile.verify_document(doc, oracle)
    if problems:
        for p in problems:
            print(_describe(p))
        return VIOLATION
    for key in sorted(counts):
        print(f"{key}: {counts[key]} checks passed")
    return OK


def _element_names(oracle, members):
    return [oracle.label(x) for x in members]


def cmd_nabla(args):
    oracle = load_spec(args.spec)
    q = lattice.nabla(oracle)
    finite = isinstance(oracle, FiniteMonoid)
    classes = []
    for k, members in enumerate(q.classes):
        entry = {"index": k, "label": q.semilattice.label(k)}
        if finite:
            entry["members"] = _element_names(oracle, members)
        else:
            entry["support"] = list(members)
        classes.append(entry)
    doc = {
        "kind": "nabla",
        "oracle": oracle_hash(oracle),
        "size": q.size,
        "zero": q.semilattice.zero,
        "classes": classes,
        "table": [list(row) for row in q.semilattice.table],
    }
    _emit(towerfile.dumps(doc), args.out)
    return OK


def cmd_ideals(args):
    oracle = load_spec(args.spec)
    lat = lattice.enumerate_ideals(oracle)
    ideals = []
    for k, ideal in enumerate(lat.ideals):
        entry = {"index": k}
        if ideal.simplicial:
            entry["basis"] = sorted(ideal.members)
        else:
            entry["members"] = _element_names(oracle, sorted(ideal.members))
        ideals.append(entry)
    doc = {
        "kind": "ideals",
        "oracle": oracle_hash(oracle),
        "count": len(ideals),
        "ideals": ideals,
        "hasse": [list(e) for e in lat.hasse_edges()],
    }
    _emit(towerfile.dumps(doc), args.out)
    return OK


def _parse_element(oracle, text):
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    try:
        return oracle.decode(value)
    except (DomainError, TypeError, ValueError) as exc:
        raise SpecFormatError(f"bad element {text!r}: {exc}") from exc


def _parse_targets(text):
    try:
        targets = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise SpecFormatError(f"bad targets {text!r}") from None
    if not targets or any(t < 1 for t in targets):
        raise SpecFormatError("targets must be positive integers")
    return targets


def cmd_divide(args):
    oracle = load_spec(args.spec)
    x = _parse_element(oracle, args.element)
    targets = _parse_targets(args.targets)
    cert = weak_divide(oracle, x, targets)
    doc = cert.to_json(oracle)
    _emit(towerfile.dumps(doc), args.out)
    return OK if doc["verified"] else ORACLE_FAILURE


def build_parser():
    p = argparse.ArgumentParser(prog="refinemon", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"refinemon {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="verify the monoid axioms of a spec")
    c.add_argument("spec")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("resolve", help="build a tower of simplicial monoids")
    r.add_argument("spec")
    r.add_argument("--depth", type=int, default=3)
    r.add_argument("--rank-budget", type=int, default=None,
                   help=f"per-stage rank cap (default ${RANK_BUDGET_ENV} or {DEFAULT_RANK_BUDGET})")
    r.add_argument("--out", default=None, help="output file (default stdout)")
    r.set_defaults(func=cmd_resolve)

    v = sub.add_parser("verify-tower", help="re-check a tower document")
    v.add_argument("tower")
    v.add_argument("spec")
    v.set_defaults(func=cmd_verify_tower)

    for name, func, text in (("nabla", cmd_nabla, "maximal semilattice quotient"),
                             ("ideals", cmd_ideals, "lattice of order-ideals")):
        s = sub.add_parser(name, help=text)
        s.add_argument("spec")
        s.add_argument("--out", default=None)
        s.set_defaults(func=func)

    d = sub.add_parser("divide", help="weak-divisibility certificate")
    d.add_argument("spec")
    d.add_argument("--element", required=True)
    d.add_argument("--targets", required=True, help="comma separated, e.g. 2,3")
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_divide)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except SpecFormatError as exc:
        _err(str(exc))
        return BAD_INPUT
    except InvariantError as exc:
        _err(f"internal failure: {exc}")
        return ORACLE_FAILURE
    except (BudgetError, NotWeaklyDivisible, PreconditionError, InsufficientDepth) as exc:
        _err(str(exc))
        return VIOLATION
    except DomainError as exc:
        _err(str(exc))
        return VIOLATION
    except RefinemonError as exc:
        _err(str(exc))
        return ORACLE_FAILURE
    except OSError as exc:
        _err(str(exc))
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
