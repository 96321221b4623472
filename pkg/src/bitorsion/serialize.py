"""JSON input schemas and deterministic CSV output.

Complex numbers travel as [re, im] pairs in JSON and as split _re/_im columns
in CSV. Schema violations raise SchemaError carrying the offending field.
"""

import csv
import io
import json

import numpy as np

from .circle import make_circle_model
from .complexes import BilinearStructure, CohomologyData, GradedComplex
from .errors import SchemaError
from .morse import CriticalForms, CriticalPoint, Instanton, MorseSystem
from .turaev import KnotPresentation

__all__ = [
    "decode_complex_number",
    "decode_matrix",
    "load_graded_complex",
    "load_morse_system",
    "load_knot",
    "load_circle_model",
    "write_rows_csv",
    "format_complex",
]


def decode_complex_number(obj, field="value"):
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        try:
            return complex(float(obj[0]), float(obj[1]))
        except (TypeError, ValueError):
            pass
    raise SchemaError(f"{field}: expected number or [re, im] pair, got {obj!r}", field=field)


def decode_matrix(obj, field="matrix"):
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{field}: expected a nonempty row-major matrix", field=field)
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise SchemaError(f"{field}[{i}]: expected a list row", field=f"{field}[{i}]")
        rows.append([decode_complex_number(x, f"{field}[{i}][{j}]") for j, x in enumerate(row)])
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise SchemaError(f"{field}: ragged rows", field=field)
    return np.array(rows, dtype=complex)


def _require(doc, key, where):
    if key not in doc:
        raise SchemaError(f"missing required field '{key}' in {where}", field=key)
    return doc[key]


def _load_json(path_or_doc, where):
    if isinstance(path_or_doc, dict):
        return path_or_doc
    try:
        with open(path_or_doc) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{where}: invalid JSON ({exc})", field=None) from exc
    except OSError as exc:
        raise SchemaError(f"{where}: cannot read ({exc})", field=None) from exc


def load_graded_complex(path_or_doc):
    """complex.json: { dims, differentials, grams, cohomology? }."""
    doc = _load_json(path_or_doc, "complex.json")
    dims = tuple(int(d) for d in _require(doc, "dims", "complex.json"))
    diffs = []
    raw = doc.get("differentials", [])
    for i, entry in enumerate(raw):
        if not entry:
            rows = dims[i + 1] if i + 1 < len(dims) else 0
            diffs.append(np.zeros((rows, dims[i]), dtype=complex))
        else:
            diffs.append(decode_matrix(entry, f"differentials[{i}]"))
    while len(diffs) < max(len(dims) - 1, 0):
        i = len(diffs)
        diffs.append(np.zeros((dims[i + 1], dims[i]), dtype=complex))
    complex_ = GradedComplex(dims, tuple(diffs))
    grams = doc.get("grams")
    if grams is None:
        structure = BilinearStructure.standard(dims)
    else:
        structure = BilinearStructure(
            tuple(decode_matrix(g, f"grams[{i}]") if g else np.eye(dims[i], dtype=complex)
                  for i, g in enumerate(grams))
        )
    h = None
    if doc.get("cohomology") is not None:
        h = CohomologyData(
            tuple(
                decode_matrix(b, f"cohomology[{i}]")
                if b else np.zeros((dims[i], 0), dtype=complex)
                for i, b in enumerate(doc["cohomology"])
            )
        )
    return complex_, structure, h


def load_morse_system(path_or_doc):
    """morse.json: { rank, points: [{id,index}], instantons: [...], forms: {id: [[..]]} }."""
    doc = _load_json(path_or_doc, "morse.json")
    rank = int(doc.get("rank", 1))
    points = []
    for i, p in enumerate(_require(doc, "points", "morse.json")):
        points.append(CriticalPoint(str(_require(p, "id", f"points[{i}]")),
                                    int(_require(p, "index", f"points[{i}]"))))
    instantons = []
    for i, ins in enumerate(doc.get("instantons", [])):
        hol = ins.get("holonomy")
        mat = decode_matrix(hol, f"instantons[{i}].holonomy") if hol is not None else np.eye(rank, dtype=complex)
        instantons.append(
            Instanton(
                str(_require(ins, "from", f"instantons[{i}]")),
                str(_require(ins, "to", f"instantons[{i}]")),
                int(_require(ins, "sign", f"instantons[{i}]")),
                mat,
            )
        )
    ms = MorseSystem(tuple(points), tuple(instantons), rank=rank)
    forms_doc = doc.get("forms")
    if forms_doc:
        forms = CriticalForms({k: decode_matrix(v, f"forms[{k}]") for k, v in forms_doc.items()})
    else:
        forms = CriticalForms.standard(ms)
    return ms, forms


def load_knot(path_or_doc):
    """knot.json: { generators: [...], relators: ["a b A B", ...] }."""
    doc = _load_json(path_or_doc, "knot.json")
    gens = tuple(str(g) for g in _require(doc, "generators", "knot.json"))
    rels = tuple(str(r) for r in doc.get("relators", []))
    return KnotPresentation(gens, rels)


def load_circle_model(path_or_doc):
    """circle.json: { L, lambda, phi: {kind, amp}, f: {kind, wells}, N?, T? }."""
    doc = _load_json(path_or_doc, "circle.json")
    length = float(doc.get("L", 2.0 * np.pi))
    lam_doc = _require(doc, "lambda", "circle.json")
    if isinstance(lam_doc, list) and lam_doc and isinstance(lam_doc[0], list):
        lam = decode_matrix(lam_doc, "lambda")
    else:
        lam = decode_complex_number(lam_doc, "lambda")
    phi_doc = doc.get("phi", {"kind": "zero"})
    phi = (str(phi_doc.get("kind", "zero")), float(phi_doc.get("amp", 0.0)))
    f_doc = doc.get("f")
    f = (str(f_doc.get("kind", "cos")), int(f_doc.get("wells", 1))) if f_doc else None
    model = make_circle_model(lam, length=length, phi=phi, f=f,
                              flat_windows=bool(doc.get("flat", False)))
    extras = {"N": int(doc.get("N", 256)), "T": float(doc.get("T", 0.0))}
    return model, extras


def format_complex(z):
    z = complex(z)
    return f"{z.real:.17g}", f"{z.imag:.17g}"


def write_rows_csv(rows, header, out=None):
    """Deterministic CSV: fixed header, %.17g complex columns, \n newlines."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        flat = []
        for item in row:
            if isinstance(item, complex):
                flat.extend(format_complex(item))
            elif isinstance(item, float):
                flat.append(f"{item:.17g}")
            else:
                flat.append(str(item))
        writer.writerow(flat)
    text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    return text
