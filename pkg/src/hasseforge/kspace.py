"""k-linear layer on top of the R-module layer.

Everything that ends in an actual invariant value happens here: R-module
quotients num/den are presented as k-spaces with canonical bases, maps
between quotients become k-matrices (with their frobenius twist carried
along), and determinants of those matrices are the scalars the theory
multiplies together.

Restricted scalars convention: R^n -> k^(n*e) sends module coordinate m,
pi-power s to flat index m*e + s.

A Submodule over the field k (capacity 1) is exactly an RREF row basis,
so the same Howell machinery provides canonical k-subspaces for free.
"""

from __future__ import annotations

from .errors import InvariantViolation, NotComplementary, NotNested, WellDefinednessViolation
from .linalg import Matrix, SemilinearMap, Submodule, kernel_gens, vscale


def restrict_vec(R, v):
    """R-vector -> k-vector of length len(v)*e."""
    out = []
    for x in v:
        out.extend(x)
    return tuple(out)


def unrestrict_vec(R, kv):
    e = R.e
    assert len(kv) % e == 0
    return tuple(tuple(kv[i * e : (i + 1) * e]) for i in range(len(kv) // e))


def ksub_from_rsub(R, S: Submodule) -> Submodule:
    """The underlying k-subspace of an R-submodule of R^n, inside k^(n*e)."""
    gens = []
    for row in S.rows:
        for s in range(R.e):
            gens.append(restrict_vec(R, vscale(R, R.pi_pow(s), row)))
    return Submodule.span(R.k, S.n * R.e, gens)


def kdim_rsub(R, S: Submodule) -> int:
    return len(ksub_from_rsub(R, S).rows)


def residue_form(R, u, w) -> int:
    """<u, w> = coefficient of pi^(e-1) in sum_m u_m w_m.  k-bilinear,
    R-balanced, perfect on R^n x R^n, and frobenius-equivariant."""
    k, e = R.k, R.e
    acc = k.zero
    for x, y in zip(u, w):
        for i in range(e):
            if x[i] and y[e - 1 - i]:
                acc = k.add(acc, k.mul(x[i], y[e - 1 - i]))
    return acc


def annihilator(R, n, S: Submodule) -> Submodule:
    """{w : <u, w> = 0 for all u in S} under the residue form, as an
    R-submodule of R^n (the form is R-balanced, so this is R-stable).
    Computed by a k-linear solve, then renormalized to Howell form."""
    k = R.k
    kgens = [vscale(R, R.pi_pow(s), row) for row in S.rows for s in range(R.e)]
    if not kgens:
        return Submodule.full(R, n)
    basis = []
    for m in range(n):
        for s in range(R.e):
            v = [R.zero] * n
            v[m] = R.pi_pow(s)
            basis.append(tuple(v))
    G = Matrix(k, [[residue_form(R, g, b) for b in basis] for g in kgens], n=len(basis))
    return Submodule.span(R, n, [unrestrict_vec(R, kv) for kv in kernel_gens(G)])


class QuotientPresentation:
    """num/den for nested R-submodules of R^n, as a k-space with chosen lifts.

    The default basis: take the RREF basis of num's k-space, express den
    in those coordinates, and keep the basis vectors away from den's
    pivot set.  Their den-reduction is then a no-op, so the kept rows
    are simultaneously canonical representatives and lifts.
    """

    def __init__(self, R, n, num: Submodule, den: Submodule):
        if not num.contains_sub(den):
            raise NotNested("den is not contained in num")
        self.R, self.n = R, n
        self.num, self.den = num, den
        self.numk = ksub_from_rsub(R, num)
        self.denk = ksub_from_rsub(R, den)
        self.num_pivots = [j for j, _ in self.numk.pivots]
        d = len(self.numk.rows)
        dencoords = [self._num_coords(r) for r in self.denk.rows]
        self.den_in_num = Submodule.span(R.k, d, dencoords)
        taken = {j for j, _ in self.den_in_num.pivots}
        self._free_idx = [t for t in range(d) if t not in taken]
        self.dim = len(self._free_idx)
        self.lift_rows_k = [self.numk.rows[t] for t in self._free_idx]
        self.lifts_R = [unrestrict_vec(R, r) for r in self.lift_rows_k]
        self._post = None

    def _num_coords(self, kv):
        # RREF rows have unit pivots and zeros under each other's pivots,
        # so membership coordinates are plain pivot reads
        assert self.numk.contains(kv), "vector is not in num"
        return tuple(kv[p] for p in self.num_pivots)

    def coordinates_of_k(self, kv):
        c = self.den_in_num.reduce_vector(self._num_coords(kv))
        raw = tuple(c[t] for t in self._free_idx)
        return self._post.apply(raw) if self._post is not None else raw

    def coordinates_of_R(self, v):
        return self.coordinates_of_k(restrict_vec(self.R, v))

    def with_lifts(self, lifts_R) -> "QuotientPresentation":
        """Same quotient, custom lift basis (must be a basis mod den)."""
        qp = object.__new__(QuotientPresentation)
        qp.R, qp.n = self.R, self.n
        qp.num, qp.den = self.num, self.den
        qp.numk, qp.denk = self.numk, self.denk
        qp.num_pivots = self.num_pivots
        qp.den_in_num = self.den_in_num
        qp._free_idx = self._free_idx
        qp.dim = self.dim
        qp._post = None
        # new coords = T^{-1} (old coords), so that coords(lift_t) = e_t
        cols = [self.coordinates_of_R(l) for l in lifts_R]
        T = Matrix.from_cols(self.R.k, cols, m=self.dim)
        qp._post = T.inverse() if self._post is None else T.inverse().mul(self._post)
        qp.lifts_R = list(lifts_R)
        qp.lift_rows_k = [restrict_vec(self.R, l) for l in lifts_R]
        return qp

    def contains_R(self, v) -> bool:
        return self.numk.contains(restrict_vec(self.R, v))

    def __repr__(self):
        return "QuotientPresentation(dim %d over %r)" % (self.dim, self.R.k)


def subspace_in_qp(qp: QuotientPresentation, S: Submodule) -> Submodule:
    """Image of the R-submodule S (inside num) in the quotient's coordinate
    space k^dim, as a canonical k-subspace."""
    gens = []
    for row in S.rows:
        for s in range(qp.R.e):
            gens.append(qp.coordinates_of_R(vscale(qp.R, qp.R.pi_pow(s), row)))
    return Submodule.span(qp.R.k, qp.dim, gens)


def induced_semilinear(phi: SemilinearMap, src: QuotientPresentation, dst: QuotientPresentation) -> SemilinearMap:
    """k-matrix of the map src -> dst induced by the R-semilinear phi.
    Checks descent on R-generators; raises WellDefinednessViolation."""
    k = src.R.k
    for g in src.den.rows:
        if not dst.den.contains(phi.apply(g)):
            raise WellDefinednessViolation("phi does not map den into den")
    for g in src.num.rows:
        if not dst.num.contains(phi.apply(g)):
            raise WellDefinednessViolation("phi does not map num into num")
    cols = [dst.coordinates_of_R(phi.apply(l)) for l in src.lifts_R]
    return SemilinearMap(Matrix.from_cols(k, cols, m=dst.dim), phi.twist)


def induced_from_fun(fn, twist, src: QuotientPresentation, dst: QuotientPresentation, den_images=()) -> SemilinearMap:
    """Like induced_semilinear for a raw vector function fn that is only
    k-semilinear (twist given by the caller).  Descent is checked on all
    k-generators of src.den; den_images supplies extra ambient vectors
    (e.g. images of a division's ambiguity) that must also die in dst."""
    R = src.R
    k = R.k
    for row in src.den.rows:
        for s in range(R.e):
            w = fn(vscale(R, R.pi_pow(s), row))
            if not dst.denk.contains(restrict_vec(R, w)):
                raise WellDefinednessViolation("fn does not descend to the quotient")
    for v in den_images:
        if not dst.denk.contains(restrict_vec(R, v)):
            raise WellDefinednessViolation("fn is ambiguous modulo dst.den")
    cols = [dst.coordinates_of_R(fn(l)) for l in src.lifts_R]
    return SemilinearMap(Matrix.from_cols(k, cols, m=dst.dim), twist)


def pairing_matrix(form, left: QuotientPresentation, right: QuotientPresentation, check=True) -> Matrix:
    """Matrix P[u][v] = form(left lift u, right lift v) of a k-bilinear form
    descending to left x right.  Descent is checked on k-generators."""
    R = left.R
    k = R.k
    if check:
        lden = [vscale(R, R.pi_pow(s), r) for r in left.den.rows for s in range(R.e)]
        rnum = [vscale(R, R.pi_pow(s), r) for r in right.num.rows for s in range(R.e)]
        lnum = [vscale(R, R.pi_pow(s), r) for r in left.num.rows for s in range(R.e)]
        rden = [vscale(R, R.pi_pow(s), r) for r in right.den.rows for s in range(R.e)]
        for d in lden:
            for x in rnum:
                if form(d, x) != k.zero:
                    raise WellDefinednessViolation("pairing does not kill left.den")
        for x in lnum:
            for d in rden:
                if form(x, d) != k.zero:
                    raise WellDefinednessViolation("pairing does not kill right.den")
    rows = [[form(lu, rv) for rv in right.lifts_R] for lu in left.lifts_R]
    return Matrix(k, rows, n=right.dim)


def prop_dual(k, r: int, B: Submodule, C: Submodule):
    """Complementary-pair determinant identity inside k^r.

    For dim B + dim C = r, let x = det(C -> k^r/B) and y = det(B -> k^r/C)
    in the canonical RREF bases with standard-vector lifts.  Then

        x = iso * y,   iso = (-1)^(s(r-s)) * det[C|Q_C] * det[B|Q_B]^{-1}

    where s = dim B and Q_* are the standard lift columns.  iso is always
    a unit; x and y vanish together (exactly when B and C overlap)."""
    s, t = len(B.rows), len(C.rows)
    if s + t != r:
        raise NotComplementary("dim B + dim C = %d + %d != %d" % (s, t, r))

    def free_idx(S):
        taken = {j for j, _ in S.pivots}
        return [j for j in range(r) if j not in taken]

    def quot_matrix(rows, S, free):
        cols = [tuple(S.reduce_vector(v)[j] for j in free) for v in rows]
        return Matrix.from_cols(k, cols, m=len(free))

    freeB, freeC = free_idx(B), free_idx(C)
    x = quot_matrix(C.rows, B, freeB).det()
    y = quot_matrix(B.rows, C, freeC).det()

    def unit_col(j):
        return tuple(k.one if i == j else k.zero for i in range(r))

    dB = Matrix.from_cols(k, list(B.rows) + [unit_col(j) for j in freeB], m=r).det()
    dC = Matrix.from_cols(k, list(C.rows) + [unit_col(j) for j in freeC], m=r).det()
    sign = k.from_int((-1) ** (s * (r - s)))
    iso = k.mul(sign, k.mul(dC, k.inv(dB)))
    if x != k.mul(iso, y):
        raise InvariantViolation("complementary-pair determinant identity failed")
    return x, y, iso
