"""JSON/CSV serialization: rationals as "num/den" strings, complex
numbers as [re, im] pairs, lattice / frame / coefficient-table files, and
deterministic report emission."""
from __future__ import annotations

import csv
import json
from fractions import Fraction

import numpy as np

from .lattice import GramLattice, build_lattice, split_data, SplitData
from .grassmannian import (SplitFrame, split_frame, grass_point,
                           isometry_to_base, eichler)
from .theta import CuspFormData


class IOError_(Exception):
    pass


# --- scalars ----------------------------------------------------------

def rat_str(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    raise IOError_(f"cannot parse rational from {s!r}")


def cx_pair(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def parse_cx(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(v[0], v[1])
    raise IOError_(f"cannot parse complex from {v!r}")


def parse_tau(s: str) -> complex:
    """Accepts forms like '3i', '0.2+2.5i', '-0.3+1.1j'."""
    return complex(s.strip().replace(" ", "").replace("i", "j"))


# --- lattice files ----------------------------------------------------

def lattice_from_dict(d: dict):
    """Returns (lattice, u, u_prime); u/u_prime are None if absent."""
    if "gram" not in d:
        raise IOError_("lattice file needs a 'gram' field")
    L = build_lattice(d["gram"])
    u = tuple(parse_rat(x) for x in d["u"]) if "u" in d else None
    up = (tuple(parse_rat(x) for x in d["u_prime"])
          if "u_prime" in d else None)
    return L, u, up


def load_lattice(path: str):
    with open(path, encoding="utf-8") as fh:
        return lattice_from_dict(json.load(fh))


def split_data_from_file(path: str) -> SplitData:
    L, u, up = load_lattice(path)
    if u is None or up is None:
        raise IOError_("lattice file needs 'u' and 'u_prime' for the "
                       "hyperbolic splitting")
    return split_data(L, u, up)


# --- frames -----------------------------------------------------------

def frame_from_spec(sd: SplitData, spec) -> SplitFrame:
    """A frame is either a JSON list of negative-definite basis vectors
    (a Grassmannian point, mapped to the base by Gram-Schmidt) or a dict
    {"eichler": [k-vectors...]} composing the base frame with the
    corresponding unipotent isometries."""
    if spec is None:
        return split_frame(sd)
    L = sd.lattice
    if isinstance(spec, list):
        z = grass_point(L, [[float(parse_rat(x)) if isinstance(x, str)
                             else float(x) for x in row] for row in spec])
        return split_frame(sd, g=isometry_to_base(L, z))
    if isinstance(spec, dict) and "eichler" in spec:
        g = None
        for kvec in spec["eichler"]:
            E = eichler(sd, tuple(parse_rat(x) for x in kvec))
            g = E if g is None else g @ E
        return split_frame(sd, g=g)
    raise IOError_(f"cannot build a frame from {spec!r}")


def load_frame(sd: SplitData, path: str | None) -> SplitFrame:
    if path is None:
        return split_frame(sd)
    with open(path, encoding="utf-8") as fh:
        return frame_from_spec(sd, json.load(fh))


# --- coefficient tables -----------------------------------------------

def cusp_form_to_dict(f: CuspFormData) -> dict:
    coeffs = [{"coset": list(key), "n": rat_str(n), "c": cx_pair(c)}
              for (key, n), c in sorted(f.coeffs.items())]
    return {"weight": rat_str(f.weight), "coeffs": coeffs}


def cusp_form_from_dict(d: dict) -> CuspFormData:
    weight = parse_rat(d["weight"])
    coeffs = {}
    n_max = Fraction(0)
    keys = set()
    for row in d["coeffs"]:
        key = tuple(int(x) for x in row["coset"])
        n = parse_rat(row["n"])
        coeffs[(key, n)] = parse_cx(row["c"])
        keys.add(key)
        n_max = max(n_max, n)
    return CuspFormData(weight, coeffs, sorted(keys), n_max)


def load_cusp_form(path: str) -> CuspFormData:
    with open(path, encoding="utf-8") as fh:
        return cusp_form_from_dict(json.load(fh))


def save_cusp_form(f: CuspFormData, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(cusp_form_to_dict(f)))


# --- reports ----------------------------------------------------------

def dump_json(obj) -> str:
    """Deterministic rendering: sorted keys, fixed separators, newline."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2,
                      separators=(",", ": ")) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return rat_str(obj)
    if isinstance(obj, complex):
        return cx_pair(obj)
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.complexfloating):
        return cx_pair(complex(obj))
    return obj


def write_report(records: list, path: str | None, fmt: str = "json"):
    """records: list of dicts with at least name/value/tolerance/pass."""
    if fmt == "json":
        text = dump_json({"records": records})
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text
    if fmt == "csv":
        import io as _io
        buf = _io.StringIO()
        fields = ["name", "value", "tolerance", "pass"]
        w = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore",
                           lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: r.get(k) for k in fields})
        text = buf.getvalue()
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text
    raise IOError_(f"unknown report format {fmt!r}")
