"""The algebra file format.

A file is a JSON object with these keys, in this order:

    field     "QQ" or "GF(p)"
    basis     [{"name": str, "degree": int, "source": tag, "target": tag}, ...]
              (source/target optional, given for all elements or for none)
    unit      [name, ...]  basis elements summing to 1
    d         optional, [{"args": [name], "value": [[name, "coeff"], ...]}, ...]
    m         {"2": [entries], "3": [entries], ...}, entries shaped like d;
              absent entries and absent arities are zero
    metadata  optional free-form object (for example {"smooth": "..."})

Coefficients are strings in the declared field ("-3/2", or "4" over GF(p)).
A file with no nonzero m_n for n >= 3 parses to a DgAlgebra; otherwise to
an AInfAlgebra, in which case d becomes m_1.

``serialize`` writes the canonical form: keys in the order above, basis in
declaration order, entries sorted by argument indices, one entry per line.
Parsing a canonical file and serializing it again reproduces the same bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .ainf import AInfAlgebra, verify_ainf
from .algebra import GradedAlgebra, verify_algebra
from .dg import DgAlgebra, verify_dg
from .errors import ParseError
from .field import field_from_name
from .sparse import add_into, clean_table

KEYS = ("field", "basis", "unit", "d", "m", "metadata")
CORPUS = Path(__file__).parent / "corpus"


@dataclass
class AlgebraFile:
    algebra: object  # DgAlgebra or AInfAlgebra
    metadata: dict = dc_field(default_factory=dict)
    digest: str = ""


def corpus_names() -> list[str]:
    return sorted(p.stem for p in CORPUS.glob("*.alg"))


def resolve(path: str) -> Path:
    """An existing path, or else a corpus entry by name (with or without .alg)."""
    p = Path(path)
    if p.exists():
        return p
    stem = p.name[:-4] if p.name.endswith(".alg") else p.name
    q = CORPUS / f"{stem}.alg"
    if q.exists():
        return q
    raise FileNotFoundError(f"no such file or corpus entry: {path}")


def load(path: str, validate: bool = True) -> AlgebraFile:
    p = resolve(path)
    text = p.read_text()
    return parse(text, validate=validate, source=str(p))


def load_corpus(name: str, validate: bool = True):
    return load(name, validate=validate).algebra


def parse(text: str, validate: bool = True, source: str = "<string>") -> AlgebraFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: syntax error at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(raw, dict):
        raise ParseError(f"{source}: top level must be an object")
    unknown = [k for k in raw if k not in KEYS]
    if unknown:
        raise ParseError(f"{source}: unknown key {unknown[0]!r}")
    for k in ("field", "basis", "unit"):
        if k not in raw:
            raise ParseError(f"{source}: missing key {k!r}")
    try:
        F = field_from_name(raw["field"])
    except (ValueError, AttributeError) as e:
        raise ParseError(f"{source}: bad field: {e}") from None

    names, degrees, verts = [], [], []
    for j, b in enumerate(raw["basis"]):
        if not isinstance(b, dict) or "name" not in b or "degree" not in b:
            raise ParseError(f"{source}: basis entry {j} needs 'name' and 'degree'")
        extra = set(b) - {"name", "degree", "source", "target"}
        if extra:
            raise ParseError(f"{source}: basis entry {b['name']!r} has unknown key {sorted(extra)[0]!r}")
        if not isinstance(b["degree"], int) or isinstance(b["degree"], bool):
            raise ParseError(f"{source}: degree of {b['name']!r} must be an integer")
        if b["name"] in names:
            raise ParseError(f"{source}: duplicate basis name {b['name']!r}")
        names.append(b["name"])
        degrees.append(b["degree"])
        verts.append((b.get("source"), b.get("target")))
    tagged = [v != (None, None) for v in verts]
    if any(tagged) and not all(tagged):
        raise ParseError(f"{source}: source/target tags must be given for all basis elements or none")
    idx = {n: i for i, n in enumerate(names)}

    def lookup(n, where):
        if n not in idx:
            raise ParseError(f"{source}: unknown basis name {n!r} in {where}")
        return idx[n]

    def coeff(c, where):
        if not isinstance(c, str):
            raise ParseError(f"{source}: coefficient {c!r} in {where} must be a string")
        try:
            return F.parse(c)
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"{source}: {e} in {where}") from None

    def table(entries, arity, where):
        out = {}
        if not isinstance(entries, list):
            raise ParseError(f"{source}: {where} must be a list")
        for e in entries:
            if not isinstance(e, dict) or set(e) != {"args", "value"}:
                raise ParseError(f"{source}: entries of {where} need exactly 'args' and 'value'")
            args = e["args"]
            if len(args) != arity:
                raise ParseError(f"{source}: {where} entry {args} has {len(args)} arguments, expected {arity}")
            key = tuple(lookup(n, where) for n in args)
            if key in out:
                raise ParseError(f"{source}: {where} entry {args} given twice")
            vec = {}
            for pair in e["value"]:
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ParseError(f"{source}: values in {where} are [name, coefficient] pairs")
                add_into(vec, {lookup(pair[0], where): coeff(pair[1], where)})
            out[key] = vec
        return clean_table(out)

    unit = {}
    for n in raw["unit"]:
        add_into(unit, {lookup(n, "unit"): F.one})
    d = table(raw.get("d", []), 1, "d")
    ops = {}
    for k, entries in (raw.get("m") or {}).items():
        try:
            n = int(k)
        except ValueError:
            raise ParseError(f"{source}: arity key {k!r} is not an integer") from None
        if n < 2:
            raise ParseError(f"{source}: m blocks start at arity 2; use 'd' for the differential")
        ops[n] = table(entries, n, f"m_{n}")
    metadata = raw.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise ParseError(f"{source}: metadata must be an object")

    vt = tuple(verts) if all(tagged) and verts else None
    g = GradedAlgebra(F, tuple(names), tuple(degrees), ops.get(2, {}), unit, vt)
    higher = {n: t for n, t in ops.items() if n >= 3 and t}
    if higher:
        full = {2: g.product, **higher}
        if d:
            full[1] = d
        alg = AInfAlgebra(F, g.names, g.degrees, full, dict(unit), vt)
        if validate:
            diag = verify_ainf(alg)
            if not diag:
                raise ParseError(f"{source}: not an A-infinity algebra: {diag}")
    else:
        alg = DgAlgebra(g, {i: v for (i,), v in d.items()})
        if validate:
            diag = verify_algebra(g) if not d else verify_dg(alg)
            if not diag:
                raise ParseError(f"{source}: axiom violation: {diag}")
    return AlgebraFile(alg, metadata, hashlib.sha256(text.encode()).hexdigest())


def _entries(F, names, table) -> list[dict]:
    out = []
    for key in sorted(table):
        vec = table[key]
        if not vec:
            continue
        out.append({"args": [names[i] for i in key],
                    "value": [[names[j], F.format(vec[j])] for j in sorted(vec)]})
    return out


def to_dict(alg, metadata: dict | None = None) -> dict:
    if isinstance(alg, DgAlgebra):
        g = alg.algebra
        F, names, degrees, vt, unit = g.field, g.names, g.degrees, g.vertices, g.unit
        d = {(i,): v for i, v in alg.d.items()}
        ops = {2: g.product}
    elif isinstance(alg, AInfAlgebra):
        F, names, degrees, vt, unit = alg.field, alg.names, alg.degrees, alg.vertices, alg.unit
        d = alg.ops.get(1, {})
        ops = {n: t for n, t in alg.ops.items() if n >= 2}
    elif isinstance(alg, GradedAlgebra):
        return to_dict(DgAlgebra(alg, {}), metadata)
    else:
        raise TypeError(f"cannot serialize {type(alg).__name__}")
    basis = []
    for j, (n, deg) in enumerate(zip(names, degrees)):
        b = {"name": n, "degree": deg}
        if vt is not None:
            b["source"], b["target"] = vt[j]
        basis.append(b)
    out = {"field": F.name, "basis": basis}
    out["unit"] = [names[i] for i in sorted(unit) if unit[i] == F.one]
    if sorted(unit) != sorted(i for i in unit if unit[i] == F.one):
        raise ValueError("unit must be a sum of basis elements to be written")
    dd = _entries(F, names, d)
    if dd:
        out["d"] = dd
    out["m"] = {str(n): _entries(F, names, ops[n]) for n in sorted(ops) if ops[n] or n == 2}
    if metadata:
        out["metadata"] = metadata
    return out


def serialize(alg, metadata: dict | None = None) -> str:
    data = to_dict(alg, metadata)
    dump = lambda x: json.dumps(x, ensure_ascii=False)  # noqa: E731
    lines = ["{", f'  "field": {dump(data["field"])},', '  "basis": [']
    lines += [f"    {dump(b)}," for b in data["basis"]]
    _close(lines)
    lines.append(f'  "unit": {dump(data["unit"])},')
    if "d" in data:
        lines.append('  "d": [')
        lines += [f"    {dump(e)}," for e in data["d"]]
        _close(lines)
    lines.append('  "m": {')
    for n, entries in data["m"].items():
        lines.append(f"    {dump(n)}: [")
        lines += [f"      {dump(e)}," for e in entries]
        _close(lines, "    ")
    _close(lines, "  ", "}")
    if "metadata" in data:
        lines.append(f'  "metadata": {dump(data["metadata"])},')
    lines[-1] = lines[-1].rstrip(",")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _close(lines, indent="  ", bracket="]"):
    if lines[-1].endswith(","):
        lines[-1] = lines[-1][:-1]
    lines.append(f"{indent}{bracket},")
