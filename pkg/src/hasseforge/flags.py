"""Flags of submodules attached to a datum at each embedding index.

Three chains live on E_i = R^h1, all indexed by levels 0..2e (the
auxiliary one only 0..e-1):

  extended: the stored pi-compatible flag inside the hodge submodule,
    continued upward by pi-power preimages;
  auxiliary: pi-preimages of the individual extended levels;
  conjugate: the previous index's extended flag transported through F
    (lower half, images) and V (upper half, preimages).

Everything here is untwisted submodule arithmetic; the frobenius twists
of F and V only matter once maps between quotients get coordinates.
Results are cached on the datum since the invariant chains revisit the
same levels many times.
"""

from __future__ import annotations

from .errors import InvariantViolation
from .linalg import Matrix, SemilinearMap


def _pi_map(R, n: int, s: int) -> SemilinearMap:
    return SemilinearMap(Matrix.identity(R, n).scale(R.pi_pow(s)), 0)


def extended_flag(datum, i: int):
    """Levels 0..2e; level e-s is the stored flag, level e+s is the
    pi^s-preimage of level e-s.  Level e is the hodge submodule and
    level 2e is all of E_i."""
    p = datum.params
    i %= p.f
    key = ("ext", i)
    if key not in datum._cache:
        levels = list(datum.pr_flags[i])
        for s in range(1, p.e + 1):
            levels.append(_pi_map(p.R, p.h1, s).preimage(levels[p.e - s]))
        datum._cache[key] = tuple(levels)
    return datum._cache[key]


def aux_flag(datum, i: int):
    """Levels 0..e-1: the pi-preimage of each stored flag level.  Since
    level j of the stored flag is killed by pi^j it sits inside
    pi^(e-j) E_i, which pins the preimage's k-dimension at h1 + j*d1."""
    p = datum.params
    i %= p.f
    key = ("aux", i)
    if key not in datum._cache:
        pi1 = _pi_map(p.R, p.h1, 1)
        datum._cache[key] = tuple(pi1.preimage(datum.pr_flags[i][j]) for j in range(p.e))
    return datum._cache[key]


def conj_flag(datum, i: int):
    """Levels 0..2e: level j <= e is the F-image of the previous index's
    extended level e+j, level e+j is the V-preimage of the previous
    index's extended level j.  The two middle descriptions both compute
    im F = ker V and must agree."""
    p = datum.params
    i %= p.f
    key = ("conj", i)
    if key not in datum._cache:
        prev = extended_flag(datum, (i - 1) % p.f)
        lower = [datum.F[i].image_of(prev[p.e + j]) for j in range(p.e + 1)]
        upper = [datum.V[i].preimage(prev[j]) for j in range(p.e + 1)]
        if lower[p.e] != upper[0]:
            raise InvariantViolation("conjugate flag middle levels disagree at index %d" % i)
        datum._cache[key] = tuple(lower + upper[1:])
    return datum._cache[key]


def extended_dim(params, j: int) -> int:
    if j <= params.e:
        return j * params.d1
    s = j - params.e
    return s * params.h1 + (params.e - s) * params.d1


def conj_dim(params, j: int) -> int:
    if j <= params.e:
        return j * (params.h1 - params.d1)
    return params.e * (params.h1 - params.d1) + (j - params.e) * params.d1


def aux_dim(params, j: int) -> int:
    return params.h1 + j * params.d1


def pi_divisibility(datum, i: int) -> bool:
    """Whether pi^j carries conjugate level e+j onto conjugate level e-j
    for every j.  Holds whenever the datum is the reduction of a lift;
    a bare mod-p datum can fail it."""
    p = datum.params
    ft = conj_flag(datum, i)
    for j in range(1, p.e + 1):
        if ft[p.e + j].scaled(p.R.pi_pow(j)) != ft[p.e - j]:
            return False
    return True
