"""Text formats for surfaces and maps, and JSON-ready serialization.

Surface file::

    # comment
    variables: x, y, z, t
    x^3 + 2*y^3 + 3*z^3 + 4*t^3

Map file (stages apply top to bottom; without ``stage:`` lines all forms
make one stage)::

    variables: x, y, z, t
    degree: 2
    stage:
    x*y + y^2
    ...
"""

from flint import fmpq

from .errors import ParseError, ValidationError
from .maps import BirationalMap
from .numberfield import FieldElement
from .poly import PolyRing, parse_poly
from .schemes import Surface

_NAME_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789")


def _read_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line))
    return out


def _header(lines, path):
    if not lines or not lines[0][1].lower().startswith("variables:"):
        lineno = lines[0][0] if lines else 1
        raise ParseError(f"{path}: first line must be 'variables: ...'", lineno, 1)
    lineno, line = lines[0]
    names = [v.strip() for v in line.split(":", 1)[1].split(",")]
    for v in names:
        if not v or v[0].isdigit() or not set(v) <= _NAME_CHARS:
            raise ParseError(f"{path}: bad variable name {v!r}", lineno, 1)
    if len(set(names)) != len(names):
        raise ParseError(f"{path}: repeated variable name", lineno, 1)
    return names, lines[1:]


def parse_surface_text(lines, path="<surface>", validate=True):
    names, body = _header(lines, path)
    if not body:
        raise ParseError(f"{path}: no forms", lines[0][0], 1)
    ring = PolyRing(names)
    forms = [parse_poly(ring, text, line=no) for no, text in body]
    return Surface(forms, validate=validate)


def parse_surface_file(path, validate=True):
    return parse_surface_text(_read_lines(path), path, validate)


def parse_map_file(path, X):
    """A BirationalMap on X read from a map file."""
    lines = _read_lines(path)
    names, body = _header(lines, path)
    if names != list(X.names):
        raise ValidationError(f"{path}: variables {names} differ from the surface's {list(X.names)}", "ambient")
    ring = X.ring
    declared = None
    stages = []
    current = None
    for no, text in body:
        low = text.lower()
        if low.startswith("degree:"):
            try:
                declared = int(text.split(":", 1)[1])
            except ValueError:
                raise ParseError(f"{path}: degree must be an integer", no, 8) from None
            continue
        if low.rstrip(":") == "stage":
            current = []
            stages.append(current)
            continue
        if current is None:
            current = []
            stages.append(current)
        current.append((no, parse_poly(ring, text, line=no)))
    stages = [s for s in stages if s]
    if not stages:
        raise ParseError(f"{path}: no forms", lines[-1][0], 1)
    for s in stages:
        if len(s) != ring.n:
            raise ValidationError(f"{path}: stage at line {s[0][0]} has {len(s)} forms, expected {ring.n}", "ambient")
        degs = {f.degree() for _, f in s if f}
        if len(degs) > 1 or not all(f.is_homogeneous() for _, f in s):
            raise ValidationError(f"{path}: stage at line {s[0][0]} is not homogeneous of one degree", "homogeneity")
    first = [f for _, f in stages[0]]
    if all(X.in_ideal(f) for f in first):
        raise ValidationError(f"{path}: every form lies in the surface ideal", "map")
    if declared is None and len(stages) == 1:
        declared = max(f.degree() for f in first if f)
    return BirationalMap(X, [[f for _, f in s] for s in stages], declared_degree=declared)


def parse_point(text, n):
    parts = [p.strip() for p in text.replace(":", ",").split(",")]
    if len(parts) != n:
        raise ParseError(f"point needs {n} coordinates, got {len(parts)}")
    try:
        coords = [fmpq(*map(int, p.split("/"))) for p in parts]
    except (ValueError, TypeError):
        raise ParseError(f"bad point coordinates {text!r}") from None
    if all(c == 0 for c in coords):
        raise ValidationError("the zero vector is not a projective point", "point")
    return coords


def parse_forms_list(text, ring):
    return [parse_poly(ring, part.strip()) for part in text.split(",")]


# output

def qstr(c):
    c = fmpq(c)
    return f"{c.p}/{c.q}" if c.q != 1 else f"{c.p}"


def form_json(f):
    ring = f.ring
    return {ring.mono_str(m): qstr(c) for m, c in f.sorted_terms()}


def matrix_json(M):
    return [[qstr(c) for c in row] for row in M]


def field_json(K):
    if K.degree == 1:
        return "Q"
    return {"minpoly": _upoly_str(K.minpoly), "generator": "a"}


def _upoly_str(p):
    terms = []
    for k in range(p.degree(), -1, -1):
        c = fmpq(p[k])
        if c == 0:
            continue
        mono = "" if k == 0 else ("a" if k == 1 else f"a^{k}")
        if mono and c in (1, -1):
            s = mono if c == 1 else "-" + mono
        else:
            s = qstr(c) + ("*" + mono if mono else "")
        terms.append(s)
    return " + ".join(terms).replace("+ -", "- ") or "0"


def element_str(x):
    if isinstance(x, FieldElement):
        if x.field.degree == 1:
            return qstr(x.coords[0])
        out = []
        for k, c in enumerate(x.coords):
            if c == 0:
                continue
            mono = "" if k == 0 else ("a" if k == 1 else f"a^{k}")
            if mono and c in (1, -1):
                out.append(mono if c == 1 else "-" + mono)
            else:
                out.append(qstr(c) + ("*" + mono if mono else ""))
        return " + ".join(out).replace("+ -", "- ") or "0"
    return qstr(x)


def point_json(field, coords):
    return {"field": field_json(field), "coordinates": [element_str(c) for c in coords]}


def closed_point_json(P):
    d = point_json(P.field, P.representative)
    d["degree"] = P.degree
    return d


def point_text(P):
    body = "(" + " : ".join(element_str(c) for c in P.representative) + ")"
    if P.degree == 1:
        return body
    return f"degree {P.degree}, {body} where {_upoly_str(P.field.minpoly)} = 0"


def map_text(forms, indent="  "):
    return "\n".join(indent + f.to_string() for f in forms)


def matrix_text(M, indent="  "):
    return "\n".join(indent + "[" + ", ".join(qstr(c) for c in row) + "]" for row in M)


def write_map_file(path, X, fmap):
    lines = ["variables: " + ", ".join(X.names)]
    if fmap.declared_degree is not None and len(fmap.stages) == 1:
        lines.append(f"degree: {fmap.declared_degree}")
    for s in fmap.stages:
        lines.append("stage:")
        lines.extend(f.to_string() for f in s)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
