"""Text containers for fields, kernels and spectra.

Every file is a JSON object: a ``header`` object followed by flat ``re`` and
``im`` arrays (fields, kernels) or by ``records`` rows ``[m, n, re, im]``
(spectra).  Floats are written with 17 significant digits and read back with
``parse_int=float`` so every value, ``-0.0`` included, survives bit-exactly.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError
from .sampling import Grid, SampledField

__all__ = [
    "fmt",
    "write_field",
    "read_field",
    "write_table",
    "read_table",
    "write_spectrum",
    "read_spectrum",
]


def fmt(value: float) -> str:
    return "%.17g" % value


def _array(values) -> str:
    return "[" + ",".join(fmt(v) for v in np.asarray(values, dtype=float).ravel()) + "]"


def _dump(path, header: dict, body: dict[str, str]) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    parts = ['{\n"header": ' + json.dumps(header, sort_keys=True)]
    parts += [f'"{key}": {text}' for key, text in body.items()]
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(",\n".join(parts) + "\n}\n")
    os.replace(tmp, path)


def _load(path) -> dict:
    return json.loads(Path(path).read_text(), parse_int=float)


def _int(v) -> int:
    if int(v) != v:
        raise InvalidArgumentError(f"expected an integer header value, got {v}")
    return int(v)


def write_table(path, table: np.ndarray, header: dict) -> None:
    """Write a square complex table row-major with an arbitrary header."""
    table = np.asarray(table, dtype=complex)
    head = {"L": int(table.shape[0]), "layout": "row-major"}
    head.update(header)
    _dump(path, head, {"re": _array(table.real), "im": _array(table.imag)})


def read_table(path) -> tuple[dict, np.ndarray]:
    doc = _load(path)
    head = doc["header"]
    L = _int(head["L"])
    head["L"] = L
    if head.get("layout", "row-major") != "row-major":
        raise InvalidArgumentError(f"unsupported layout {head.get('layout')!r}")
    re = np.asarray(doc["re"], dtype=float)
    im = np.asarray(doc["im"], dtype=float)
    if re.size != L * L or im.size != L * L:
        raise InvalidArgumentError(f"expected {L * L} entries per array")
    for key in ("m", "n", "K", "M", "N"):
        if key in head:
            head[key] = _int(head[key])
    out = np.empty(L * L, dtype=complex)
    # assign parts separately: re + 1j * im would turn an imaginary -0.0 into +0.0
    out.real, out.imag = re, im
    return head, out.reshape(L, L)


def write_field(path, fld: SampledField) -> None:
    header = {"a": float(fld.a)}
    header.update(fld.meta)
    write_table(path, fld.values, header)


def read_field(path) -> SampledField:
    head, values = read_table(path)
    a = float(head.pop("a", 1.0))
    for key in ("L", "layout"):
        head.pop(key, None)
    return SampledField(Grid(values.shape[0]), values, a, head)


def write_spectrum(path, spec) -> None:
    header = {"M": spec.M, "N": spec.N, "K": spec.K, "a": float(spec.a)}
    rows = []
    for (m, n), c in sorted(spec.coeffs.items()):
        rows.append(f"[{m},{n},{fmt(c.real)},{fmt(c.imag)}]")
    _dump(path, header, {"records": "[\n" + ",\n".join(rows) + "\n]"})


def read_spectrum(path):
    from .transform import Spectrum

    doc = _load(path)
    head = doc["header"]
    coeffs = {}
    for m, n, re, im in doc["records"]:
        coeffs[(_int(m), _int(n))] = complex(re, im)
    return Spectrum(
        M=_int(head["M"]),
        N=_int(head["N"]),
        K=_int(head["K"]),
        a=float(head.get("a", 1.0)),
        coeffs=coeffs,
    )
