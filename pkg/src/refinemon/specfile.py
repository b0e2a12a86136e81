"""Monoid specification files.

A specification is a UTF-8 JSON object::

    {"kind": "naturals"}
    {"kind": "simplicial", "rank": 2}
    {"kind": "cayley" | "semilattice",
     "names": ["0", "u"], "table": [[0, 1], [1, 1]], "zero": 0}

``table[a][b]`` is the index of a+b.  ``names`` defaults to the indices
and ``zero`` to the unique neutral element.  Unknown fields are rejected.
"""

import hashlib
import json
from importlib.resources import files

from .errors import DomainError, SpecFormatError
from .oracles import FiniteMonoid, FreeOracle, NaturalsOracle, SemilatticeMonoid

ALLOWED = {
    "naturals": {"kind"},
    "simplicial": {"kind", "rank"},
    "cayley": {"kind", "names", "table", "zero"},
    "semilattice": {"kind", "names", "table", "zero"},
}


def parse_spec(doc):
    if not isinstance(doc, dict):
        raise SpecFormatError("specification must be a JSON object")
    kind = doc.get("kind")
    if kind not in ALLOWED:
        raise SpecFormatError(f"unknown kind {kind!r}")
    extra = set(doc) - ALLOWED[kind]
    if extra:
        raise SpecFormatError(f"unknown field(s) for kind {kind!r}: {sorted(extra)}")
    try:
        if kind == "naturals":
            return NaturalsOracle()
        if kind == "simplicial":
            rank = doc.get("rank")
            if not isinstance(rank, int) or isinstance(rank, bool):
                raise SpecFormatError("simplicial spec needs an integer rank")
            return FreeOracle(rank)
        if "table" not in doc or not isinstance(doc["table"], list):
            raise SpecFormatError(f"{kind} spec needs a table")
        cls = SemilatticeMonoid if kind == "semilattice" else FiniteMonoid
        zero = doc.get("zero")
        if zero is not None and (not isinstance(zero, int) or isinstance(zero, bool)):
            raise SpecFormatError("zero must be an element index")
        return cls(doc["table"], doc.get("names"), zero)
    except DomainError as exc:
        raise SpecFormatError(str(exc)) from exc
    except TypeError as exc:
        raise SpecFormatError(f"malformed {kind} spec: {exc}") from exc


def load_spec(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SpecFormatError(f"cannot read {path}: {exc}") from exc
    return parse_spec(doc)


def canonical_json(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def oracle_hash(oracle):
    """Content hash identifying the monoid a tower was built over."""
    digest = hashlib.sha256(canonical_json(oracle.to_spec()).encode("utf-8"))
    return "sha256:" + digest.hexdigest()


FIXTURES = ("naturals", "free_rank2", "semilattice2", "chain3", "diamond",
            "z2_with_zero", "z3_with_zero")
FINITE_FIXTURES = ("semilattice2", "chain3", "diamond", "z2_with_zero", "z3_with_zero")
SEMILATTICE_FIXTURES = ("semilattice2", "chain3", "diamond")


def fixture_path(name):
    return files("refinemon") / "fixtures" / f"{name}.json"


def load_fixture(name):
    return parse_spec(json.loads(fixture_path(name).read_text(encoding="utf-8")))
