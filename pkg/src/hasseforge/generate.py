"""Random and named instances.

Lifted data comes from A * diag(pi^a_m) * B with the complementary diagonal
on the V side, so F V = V F = p holds exactly for any invertible A, B and
any exponent vector.  Mod-p data is built directly from its kernel/image
structure: two invertible matrices transport complementary pi-power
diagonals, which forces ker F = im V and ker V = im F.  Flags are sampled
greedily level by level; each level is a k-subspace pinched between the
forced lower bound and the pi-preimage of the previous level, and any such
subspace is automatically pi-stable, hence an R-submodule.
"""

from .errors import InvalidSpec, RetryExhausted
from .linalg import Matrix, SemilinearMap, Submodule, random_invertible, vadd, vscale
from .kspace import ksub_from_rsub, unrestrict_vec
from .datum import DieudonneDatum, LiftedDatum, Params


def _random_exponents(e, n, total, rng):
    """n integers in [0, e] summing to total."""
    if not 0 <= total <= n * e:
        raise InvalidSpec("exponent total %d out of range" % total)
    a = [0] * n
    for _ in range(total):
        m = rng.choice([m for m in range(n) if a[m] < e])
        a[m] += 1
    return a


def _pi_preimage(R, n, S):
    phi = SemilinearMap(Matrix.identity(R, n).scale(R.uniformizer), 0)
    return phi.preimage(S)


def _random_between(R, low, high, kdim, rng, tries=200):
    """Random R-submodule X with low <= X <= high of the given k-dimension,
    assuming pi * high <= low so that any intermediate k-subspace is
    R-stable.  None if the dimension window is infeasible."""
    k = R.k
    lowk = ksub_from_rsub(R, low)
    highk = ksub_from_rsub(R, high)
    if not (len(lowk.rows) <= kdim <= len(highk.rows)):
        return None
    X = lowk
    budget = tries
    while len(X.rows) < kdim:
        v = tuple(k.zero for _ in range(highk.n))
        for row in highk.rows:
            v = vadd(k, v, vscale(k, k.random_element(rng), row))
        X2 = X.add_sub(Submodule.span(k, highk.n, [v]))
        if len(X2.rows) > len(X.rows):
            X = X2
        budget -= 1
        if budget < 0:
            return None
    gens = [unrestrict_vec(R, row) for row in X.rows]
    return Submodule.span(R, low.n, gens)


def sample_flag(R, omega, d1, rng, budget=64):
    """Random flag 0 = flag[0] <= ... <= flag[e] = omega with k-dimensions
    j*d1 and pi * flag[j] <= flag[j-1]."""
    e = R.e
    n = omega.n
    for _ in range(budget):
        flag = [Submodule.zero(R, n)]
        ok = True
        for j in range(1, e):
            low = flag[j - 1].add_sub(omega.scaled(R.pi_pow(e - j)))
            high = omega.intersect(_pi_preimage(R, n, flag[j - 1]))
            X = _random_between(R, low, high, j * d1, rng)
            if X is None:
                ok = False
                break
            flag.append(X)
        if ok:
            flag.append(omega)
            return flag
    raise RetryExhausted("could not sample a flag in %d attempts" % budget)


def _column_span(M):
    return Submodule.span(M.ring, M.m, M.transpose().rows)


def random_lifted(params, rng) -> LiftedDatum:
    """Random mod-p^2 datum with exact F V = V F = p, plus random flags."""
    p = params
    W, R = p.W, p.R
    F_mats, V_mats = [], []
    for _ in range(p.f):
        A = random_invertible(W, p.h1, rng)
        B = random_invertible(W, p.h1, rng)
        exps = _random_exponents(p.e, p.h1, p.e * p.d1, rng)
        D = Matrix(W, [[W.pi_pow(exps[m]) if m == l else W.zero
                        for l in range(p.h1)] for m in range(p.h1)])
        Dc = Matrix(W, [[W.mul(W.unit_u, W.pi_pow(p.e - exps[m])) if m == l else W.zero
                         for l in range(p.h1)] for m in range(p.h1)])
        F_mats.append(A.mul(D).mul(B))
        V_mats.append(B.inverse().mul(Dc).mul(A.inverse()).frob(-1))
    flags = None
    if p.e > 1:
        red = p.tower.red_to_R
        flags = []
        for i in range(p.f):
            Vr = V_mats[(i + 1) % p.f].map(red, R)
            flags.append(sample_flag(R, _column_span(Vr), p.d1, rng))
    return LiftedDatum(p, F_mats, V_mats, pr_flags=flags)


def _stabilizing_twist(R, exps, rng, tries=200):
    """Random invertible M with M (sum pi^exps[m] R) = sum pi^exps[m] R:
    entry (m, l) needs valuation at least exps[m] - exps[l]."""
    n = len(exps)
    for _ in range(tries):
        rows = []
        for m in range(n):
            row = []
            for l in range(n):
                x = R.random_element(rng)
                gap = max(0, exps[m] - exps[l])
                if gap:
                    x = R.mul(R.pi_pow(gap), x)
                row.append(x)
            rows.append(row)
        M = Matrix(R, rows)
        if M.is_invertible():
            return M
    raise RetryExhausted("no invertible stabilizing twist in %d tries" % tries)


def random_charp(params, rng) -> DieudonneDatum:
    """Random mod-p datum (no lift involved), plus random flags.  The extra
    middle twist M ranges over the stabilizer of the diagonal's kernel
    decomposition, which makes the construction cover every valid pair, not
    just reductions of diagonal lifts."""
    p = params
    R = p.R
    F_mats, V_mats = [], []
    for _ in range(p.f):
        UH = random_invertible(R, p.h1, rng)
        UC = random_invertible(R, p.h1, rng)
        exps = _random_exponents(p.e, p.h1, p.e * (p.h1 - p.d1), rng)
        D = Matrix(R, [[R.pi_pow(exps[m]) if m == l else R.zero
                        for l in range(p.h1)] for m in range(p.h1)])
        Dp = Matrix(R, [[R.pi_pow(p.e - exps[m]) if m == l else R.zero
                         for l in range(p.h1)] for m in range(p.h1)])
        M = _stabilizing_twist(R, exps, rng)
        V_mats.append(UH.mul(D).mul(UC.inverse().frob(-1)))
        F_mats.append(UC.mul(Dp).mul(M).mul(UH.inverse().frob(1)))
    flags = None
    if p.e > 1:
        flags = []
        for i in range(p.f):
            hodge = _column_span(V_mats[(i + 1) % p.f])
            flags.append(sample_flag(R, hodge, p.d1, rng))
    return DieudonneDatum(p, F_mats, V_mats, pr_flags=flags)


def random_datum(params, rng, lifted=True):
    return random_lifted(params, rng) if lifted else random_charp(params, rng)


# ---------------------------------------------------------------------------
# named instances


def _wmat(W, rows):
    return Matrix(W, rows)


def _ord_split(p=3):
    par = Params(p, 1, 1, 2, 1)
    W = par.W
    F = _wmat(W, [[W.one, W.zero], [W.zero, W.from_int(p)]])
    V = _wmat(W, [[W.from_int(p), W.zero], [W.zero, W.one]])
    return LiftedDatum(par, [F], [V])


def _ss(p=3):
    par = Params(p, 1, 1, 2, 1)
    W = par.W
    M = _wmat(W, [[W.zero, W.one], [W.from_int(p), W.zero]])
    return LiftedDatum(par, [M], [M])


def _ram_split(p=3):
    par = Params(p, 1, 2, 2, 1, eisenstein=[(-p) % p**2, 0, 1])
    W = par.W
    pi2 = W.mul(W.uniformizer, W.uniformizer)
    F = _wmat(W, [[W.one, W.zero], [W.zero, pi2]])
    V = _wmat(W, [[W.from_int(p), W.zero], [W.zero, W.one]])
    R = par.R
    lvl1 = Submodule.span(R, 2, [(R.zero, R.uniformizer)])
    hodge = Submodule.span(R, 2, [(R.zero, R.one)])
    flag = [Submodule.zero(R, 2), lvl1, hodge]
    return LiftedDatum(par, [F], [V], pr_flags=[flag])


def _ram_ss(p=3):
    par = Params(p, 1, 2, 2, 1, eisenstein=[(-p) % p**2, 0, 1])
    W = par.W
    M = _wmat(W, [[W.zero, W.one], [W.from_int(p), W.zero]])
    R = par.R
    flag = [Submodule.zero(R, 2),
            Submodule.span(R, 2, [(R.uniformizer, R.zero)]),
            Submodule.span(R, 2, [(R.one, R.zero)])]
    return LiftedDatum(par, [M], [M], pr_flags=[flag])


def _ram_pi(p=3):
    par = Params(p, 1, 2, 2, 1, eisenstein=[(-p) % p**2, 0, 1])
    W = par.W
    M = _wmat(W, [[W.uniformizer, W.zero], [W.zero, W.uniformizer]])
    R = par.R
    flag = [Submodule.zero(R, 2),
            Submodule.span(R, 2, [(R.uniformizer, R.zero)]),
            Submodule.span(R, 2, [(R.uniformizer, R.zero), (R.zero, R.uniformizer)])]
    return LiftedDatum(par, [M], [M], pr_flags=[flag])


def _unram_f2(p=2):
    par = Params(p, 2, 1, 2, 1)
    W = par.W
    F = _wmat(W, [[W.one, W.zero], [W.zero, W.from_int(p)]])
    V = _wmat(W, [[W.from_int(p), W.zero], [W.zero, W.one]])
    return LiftedDatum(par, [F, F], [V, V])


_NAMED = {
    "ord-split": _ord_split,
    "ss": _ss,
    "ram-split": _ram_split,
    "ram-ss": _ram_ss,
    "ram-pi": _ram_pi,
    "unram-f2": _unram_f2,
}

NAMED_INSTANCES = tuple(sorted(_NAMED))


def named_instance(name) -> LiftedDatum:
    """One of the six built-in instances, freshly constructed."""
    if name not in _NAMED:
        raise InvalidSpec("unknown instance %r (have: %s)" % (name, ", ".join(NAMED_INSTANCES)))
    return _NAMED[name]()
