"""Tower interchange documents and their independent re-verification.

The verifier below deliberately shares no code with :mod:`resolution`: it
works from the serialized numbers and the oracle's primitive operations
only.
"""

import json

from . import __version__
from .errors import SpecFormatError
from .resolution import Stage, Tower
from .core import Morphism
from .specfile import oracle_hash

FORMAT = "refinemon-tower/1"
EXHAUSTIVE_PAIR_RANK = 10


def dumps(doc):
    """Byte-stable JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def tower_to_document(t, manifest=None):
    oracle = t.oracle
    stages = []
    for j, st in enumerate(t.stages):
        stages.append({
            "index": j,
            "rank": st.rank,
            "alpha": [oracle.encode(a) for a in st.alpha],
            "adjoined": st.adjoined,
            "beta": None if st.beta is None else {
                "target_rank": st.beta.target_rank,
                "columns": [list(c) for c in st.beta.columns],
            },
        })
    return {
        "format": FORMAT,
        "generator": f"refinemon {__version__}",
        "oracle": {"hash": oracle_hash(oracle), "kind": oracle.kind},
        "depth": t.depth,
        "enumeration_depth": t.enumeration_depth,
        "rank_budget": t.rank_budget,
        "stages": stages,
        "manifest": manifest if manifest is not None else {},
    }


def _require(cond, message):
    if not cond:
        raise SpecFormatError(message)


def _int_list(value, what):
    _require(isinstance(value, list), f"{what} must be a list")
    for v in value:
        _require(isinstance(v, int) and not isinstance(v, bool), f"{what} must hold integers")
    return value


def check_document_shape(doc):
    """Raise SpecFormatError unless ``doc`` has the tower document layout."""
    _require(isinstance(doc, dict), "tower document must be a JSON object")
    _require(doc.get("format") == FORMAT, f"format must be {FORMAT!r}")
    oracle = doc.get("oracle")
    _require(isinstance(oracle, dict) and isinstance(oracle.get("hash"), str),
             "missing oracle hash")
    stages = doc.get("stages")
    _require(isinstance(stages, list) and stages, "stages must be a nonempty list")
    for j, st in enumerate(stages):
        _require(isinstance(st, dict), f"stage {j} must be an object")
        for key in ("rank", "alpha", "beta"):
            _require(key in st, f"stage {j} lacks {key!r}")
        _require(isinstance(st["alpha"], list), f"stage {j} alpha must be a list")
        beta = st["beta"]
        if j == len(stages) - 1:
            _require(beta is None, "the newest stage has no beta")
        else:
            _require(isinstance(beta, dict) and isinstance(beta.get("columns"), list),
                     f"stage {j} lacks beta columns")
            for i, col in enumerate(beta["columns"]):
                _int_list(col, f"stage {j} beta column {i}")


def load_document(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SpecFormatError(f"cannot read {path}: {exc}") from exc
    check_document_shape(doc)
    return doc


def document_to_tower(doc, oracle):
    check_document_shape(doc)
    stages = []
    for st in doc["stages"]:
        alpha = tuple(oracle.decode(a) for a in st["alpha"])
        beta = None
        if st["beta"] is not None:
            cols = st["beta"]["columns"]
            target = st["beta"].get("target_rank", len(cols[0]) if cols else 0)
            beta = Morphism(len(cols), target, cols)
        stages.append(Stage(alpha, beta, bool(st.get("adjoined", False))))
    return Tower(oracle, tuple(stages), doc.get("rank_budget", 24))


def _image(oracle, alpha, coeffs):
    s = oracle.zero
    for c, a in zip(coeffs, alpha):
        if c:
            s = oracle.add(s, oracle.mul(c, a))
    return s


def verify_document(doc, oracle):
    """Re-check every recorded invariant; return (problems, counts).

    Each problem is a dict with ``stage``, optional ``basis`` and ``message``.
    """
    check_document_shape(doc)
    problems = []
    counts = {"commutativity": 0, "surjectivity": 0, "rank_laws": 0, "propagation": 0}

    def bad(stage, message, basis=None):
        entry = {"stage": stage, "message": message}
        if basis is not None:
            entry["basis"] = basis
        problems.append(entry)

    if doc["oracle"]["hash"] != oracle_hash(oracle):
        raise SpecFormatError("tower was built over a different monoid (oracle hash mismatch)")

    stages = doc["stages"]
    alphas = []
    for j, st in enumerate(stages):
        try:
            alphas.append([oracle.decode(a) for a in st["alpha"]])
        except Exception as exc:  # noqa: BLE001 - any decoding failure is a format error
            raise SpecFormatError(f"stage {j}: bad oracle element: {exc}") from exc

    # rank laws
    for j, st in enumerate(stages):
        counts["rank_laws"] += 1
        if st["rank"] != len(alphas[j]):
            bad(j, f"rank {st['rank']} but {len(alphas[j])} basis images")
        if j == 0 and st["rank"] != 1:
            bad(0, "stage 0 must have rank 1")
        if st["beta"] is None:
            continue
        cols = st["beta"]["columns"]
        nxt = len(alphas[j + 1])
        if len(cols) != len(alphas[j]):
            bad(j, f"beta has {len(cols)} columns for rank {len(alphas[j])}")
        for i, col in enumerate(cols):
            if len(col) != nxt:
                bad(j, f"beta column has length {len(col)}, next rank is {nxt}", i)
            if any(v < 0 for v in col):
                bad(j, "beta column has a negative entry", i)
    if problems:
        return problems, counts

    # commutativity, basis by basis
    for j in range(len(stages) - 1):
        for i, col in enumerate(stages[j]["beta"]["columns"]):
            counts["commutativity"] += 1
            if _image(oracle, alphas[j + 1], col) != alphas[j][i]:
                bad(j, f"alpha_{j + 1}(beta_{j}(e_{i})) != alpha_{j}(e_{i})", i)

    # {x_0, ..., x_j} inside the image of stage j
    prefix = []
    for j in range(len(stages)):
        x = oracle.element(j)
        if x is not None:
            prefix.append(x)
        for x in prefix:
            counts["surjectivity"] += 1
            if not oracle.in_span(x, alphas[j]):
                bad(j, f"enumeration element {oracle.label(x)} is not in the image")

    # propagation on subset pairs
    for j in range(len(stages) - 1):
        cols = stages[j]["beta"]["columns"]
        counts["propagation"] += _check_propagation(oracle, alphas[j], cols, j, bad)
    return problems, counts


def _check_propagation(oracle, alpha, cols, j, bad):
    r = len(alpha)
    supp = []
    for col in cols:
        m = 0
        for k, v in enumerate(col):
            if v:
                m |= 1 << k
        supp.append(m)
    vals, smask = [oracle.zero], [0]
    for S in range(1, 1 << r):
        low = S & -S
        i = low.bit_length() - 1
        vals.append(oracle.add(vals[S ^ low], alpha[i]))
        smask.append(smask[S ^ low] | supp[i])
    cache = {}

    def prop(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = oracle.propto(a, b)
        return cache[(a, b)]

    checked = 0
    if r <= EXHAUSTIVE_PAIR_RANK:
        for I in range(1 << r):
            for J in range(1 << r):
                checked += 1
                if prop(vals[J], vals[I]) and smask[J] & ~smask[I]:
                    culprit = next(i for i in range(r)
                                   if J >> i & 1 and supp[i] & ~smask[I])
                    bad(j, f"propagation fails for J={_bits(J)}, I={_bits(I)}", culprit)
                    return checked
    else:
        # proportionality to a fixed target is checked basis element by basis element
        for I in range(1 << r):
            for i in range(r):
                checked += 1
                if prop(alpha[i], vals[I]) and supp[i] & ~smask[I]:
                    bad(j, f"propagation fails for J={[i]}, I={_bits(I)}", i)
                    return checked
    return checked


def _bits(mask):
    return [i for i in range(mask.bit_length()) if mask >> i & 1]
