"""Bit-exact JSON round-tripping of data.

Ring elements are nested little-endian integer coefficient tuples, so they
serialize as nested lists with no encoding choices to make.  Matrices are
row-major; submodules are stored by their canonical generator rows, which
re-normalize to themselves on load.  dumps() output is stable: sorted keys,
no whitespace, same string for equal data.
"""

import json

from .errors import InvalidSpec
from .datum import DieudonneDatum, LiftedDatum, Params
from .linalg import Matrix, Submodule

FORMAT = "hasse-forge/1"


def _elt_out(x):
    return x if isinstance(x, int) else [_elt_out(c) for c in x]


def _elt_in(d):
    return d if isinstance(d, int) else tuple(_elt_in(c) for c in d)


def matrix_out(M):
    return [[_elt_out(x) for x in row] for row in M.rows]


def matrix_in(ring, data, n=None):
    return Matrix(ring, [[_elt_in(x) for x in row] for row in data], n=n)


def sub_out(S):
    return [[_elt_out(x) for x in v] for v in S.rows]


def sub_in(R, n, data):
    return Submodule.span(R, n, [tuple(_elt_in(x) for x in v) for v in data])


def params_out(params):
    return params.describe()


def params_in(d):
    return Params(d["p"], d["f"], d["e"], d["h1"], d["d1"],
                  field_modulus=d["field_modulus"], eisenstein=d["eisenstein"])


def datum_to_dict(D) -> dict:
    lifted = isinstance(D, LiftedDatum)
    # store flags explicitly even when e = 1 forced them, so equal data
    # always serializes to equal bytes
    flags = D.reduce().pr_flags if lifted else D.pr_flags
    return {
        "format": FORMAT,
        "params": params_out(D.params),
        "lifted": lifted,
        "F": [matrix_out(m.matrix) for m in D.F],
        "V": [matrix_out(m.matrix) for m in D.V],
        "pr_flags": [[sub_out(S) for S in flag] for flag in flags],
    }


def datum_from_dict(d, params=None):
    """Rebuild a datum.  Rings compare by identity, so a fresh load lives on
    its own tower; pass params= to adopt an existing one (it must describe
    the same shape)."""
    if not isinstance(d, dict) or d.get("format") != FORMAT:
        raise InvalidSpec("not a %s document" % FORMAT)
    if params is None:
        par = params_in(d["params"])
    elif params.describe() == d["params"]:
        par = params
    else:
        raise InvalidSpec("document params do not match the supplied Params")
    ring = par.W if d["lifted"] else par.R
    F = [matrix_in(ring, m, n=par.h1) for m in d["F"]]
    V = [matrix_in(ring, m, n=par.h1) for m in d["V"]]
    flags = d.get("pr_flags")
    if flags is not None:
        flags = [[sub_in(par.R, par.h1, S) for S in flag] for flag in flags]
    cls = LiftedDatum if d["lifted"] else DieudonneDatum
    return cls(par, F, V, pr_flags=flags)


def dumps(D) -> str:
    return json.dumps(datum_to_dict(D), sort_keys=True, separators=(",", ":"))


def loads(s: str, params=None):
    try:
        d = json.loads(s)
    except json.JSONDecodeError as exc:
        raise InvalidSpec("not valid JSON: %s" % exc) from exc
    return datum_from_dict(d, params=params)


def save(D, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps(D))
        fh.write("\n")


def load(path, params=None):
    with open(path, "r", encoding="ascii") as fh:
        return loads(fh.read(), params=params)
