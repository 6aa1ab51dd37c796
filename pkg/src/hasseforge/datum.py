"""Data objects: shape parameters, mod-p data, and their mod-p^2 lifts.

A mod-p datum is a cyclic chain of h1 x h1 matrices over R indexed by
the f embeddings: F[i] maps E_{i-1} to E_i with frobenius twist +1,
V[i] maps E_i to E_{i-1} with twist -1, and at every index the kernel
of each is exactly the image of the other.  The hodge submodule at i is
im V[i+1] = ker F[i+1] inside E_i; a pi-compatible flag from 0 up to it
(levels 0..e, k-dimensions 0, d1, ..., e*d1, with pi shifting each
level into the previous one) is part of the data.

A lift replaces R by the length-two ramified Witt ring W and the
kernel/image axioms by the exact identities F V = V F = p.

Duality transposes the matrices, swaps F and V with a one-step
frobenius correction, and replaces every distinguished submodule by its
annihilator under the residue form.
"""

from __future__ import annotations

from .errors import InvalidDatum, InvalidLift, InvalidSpec
from .flags import extended_flag
from .kspace import annihilator, kdim_rsub
from .linalg import Matrix, SemilinearMap, Submodule
from .rings import SMALL_PRIMES, make_tower


class Params:
    """Shape of a datum: prime, field degree, ramification degree, height
    per embedding, hodge rank per embedding, plus the ring tower built
    from the chosen (or default) moduli."""

    def __init__(self, p, f, e, h1, d1, field_modulus=None, eisenstein=None):
        if p not in SMALL_PRIMES:
            raise InvalidSpec("prime must be one of %s" % (SMALL_PRIMES,))
        if f < 1 or e < 1:
            raise InvalidSpec("f and e must be positive")
        if h1 < 1:
            raise InvalidSpec("h1 must be positive")
        if not 0 <= d1 <= h1:
            raise InvalidSpec("need 0 <= d1 <= h1")
        self.p, self.f, self.e, self.h1, self.d1 = p, f, e, h1, d1
        self.tower = make_tower(p, f, e, field_modulus=field_modulus, eisenstein=eisenstein)
        self.k = self.tower.k
        self.R = self.tower.R
        self.W2 = self.tower.W2
        self.W = self.tower.W

    def dual(self) -> "Params":
        """Same shape with complementary hodge rank, sharing the ring tower
        (submodules and matrices compare by ring object, so the dual must
        not rebuild it)."""
        other = object.__new__(Params)
        other.__dict__.update(self.__dict__)
        other.d1 = self.h1 - self.d1
        return other

    def describe(self) -> dict:
        out = self.tower.describe()
        out["h1"] = self.h1
        out["d1"] = self.d1
        return out

    def __repr__(self):
        return "Params(p=%d, f=%d, e=%d, h1=%d, d1=%d)" % (self.p, self.f, self.e, self.h1, self.d1)


def _trivial_flags(params, hodges):
    # e = 1 leaves no room: the flag is forced to (0, hodge) everywhere
    zero = Submodule.zero(params.R, params.h1)
    return [[zero, hodges[i]] for i in range(params.f)]


class DieudonneDatum:
    """Mod-p datum with its flag data.  Construction validates unless
    check=False is passed (used internally right after validation has
    already happened on an equivalent object)."""

    def __init__(self, params: Params, F_mats, V_mats, pr_flags=None, check=True):
        self.params = params
        f = params.f
        if len(F_mats) != f or len(V_mats) != f:
            raise InvalidDatum("expected %d matrices for F and for V" % f)
        self.F = tuple(SemilinearMap(m, +1) for m in F_mats)
        self.V = tuple(SemilinearMap(m, -1) for m in V_mats)
        self._cache = {}
        if pr_flags is None:
            if params.e == 1:
                pr_flags = _trivial_flags(params, [self.hodge(i) for i in range(f)])
            else:
                raise InvalidDatum("flag data is required when e > 1")
        self.pr_flags = tuple(tuple(level for level in flag) for flag in pr_flags)
        if check:
            self.validate()

    # -- distinguished submodules ------------------------------------

    def hodge(self, i: int) -> Submodule:
        i %= self.params.f
        key = ("hodge", i)
        if key not in self._cache:
            self._cache[key] = self.V[(i + 1) % self.params.f].image()
        return self._cache[key]

    def conj(self, i: int) -> Submodule:
        i %= self.params.f
        key = ("conj0", i)
        if key not in self._cache:
            self._cache[key] = self.F[i].image()
        return self._cache[key]

    # -- validation ----------------------------------------------------

    def validate(self):
        p = self.params
        for i in range(p.f):
            for M in (self.F[i].matrix, self.V[i].matrix):
                if M.m != p.h1 or M.n != p.h1:
                    raise InvalidDatum("matrix at index %d is not %d x %d" % (i, p.h1, p.h1))
            if self.F[i].kernel() != self.V[i].image():
                raise InvalidDatum("ker F != im V at index %d" % i)
            if self.V[i].kernel() != self.F[i].image():
                raise InvalidDatum("ker V != im F at index %d" % i)
        for i in range(p.f):
            if kdim_rsub(p.R, self.hodge(i)) != p.e * p.d1:
                raise InvalidDatum("hodge submodule at index %d has wrong dimension" % i)
        if len(self.pr_flags) != p.f:
            raise InvalidDatum("expected one flag per index")
        zero = Submodule.zero(p.R, p.h1)
        for i in range(p.f):
            flag = self.pr_flags[i]
            if len(flag) != p.e + 1:
                raise InvalidDatum("flag at index %d must have levels 0..e" % i)
            if flag[0] != zero:
                raise InvalidDatum("flag at index %d does not start at 0" % i)
            if flag[p.e] != self.hodge(i):
                raise InvalidDatum("flag at index %d does not end at the hodge submodule" % i)
            for j in range(1, p.e + 1):
                if not flag[j].contains_sub(flag[j - 1]):
                    raise InvalidDatum("flag at index %d is not nested at level %d" % (i, j))
                if kdim_rsub(p.R, flag[j]) != j * p.d1:
                    raise InvalidDatum("flag at index %d has wrong dimension at level %d" % (i, j))
                if not flag[j - 1].contains_sub(flag[j].scaled(p.R.uniformizer)):
                    raise InvalidDatum("flag at index %d is not pi-compatible at level %d" % (i, j))

    # -- duality ---------------------------------------------------------

    def dualize(self) -> "DieudonneDatum":
        p = self.params
        Fd = [self.V[i].matrix.transpose().frob(1) for i in range(p.f)]
        Vd = [self.F[i].matrix.transpose().frob(-1) for i in range(p.f)]
        flags = []
        for i in range(p.f):
            ext = extended_flag(self, i)
            flags.append([annihilator(p.R, p.h1, ext[2 * p.e - j]) for j in range(p.e + 1)])
        return DieudonneDatum(p.dual(), Fd, Vd, pr_flags=flags)

    # -- misc ------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, DieudonneDatum):
            return NotImplemented
        return (
            self.params.describe() == other.params.describe()
            and all(self.F[i].matrix == other.F[i].matrix for i in range(self.params.f))
            and all(self.V[i].matrix == other.V[i].matrix for i in range(self.params.f))
            and self.pr_flags == other.pr_flags
        )

    def __repr__(self):
        return "DieudonneDatum(%r)" % (self.params,)


class LiftedDatum:
    """Mod-p^2 datum over W: the same shaped chain of matrices with the
    exact relations F V = p and V F = p at every index, carrying flag
    data for its reduction."""

    def __init__(self, params: Params, F_mats, V_mats, pr_flags=None, check=True):
        self.params = params
        f = params.f
        if len(F_mats) != f or len(V_mats) != f:
            raise InvalidLift("expected %d matrices for F and for V" % f)
        self.F = tuple(SemilinearMap(m, +1) for m in F_mats)
        self.V = tuple(SemilinearMap(m, -1) for m in V_mats)
        self._pr_flags = pr_flags
        self._reduction = None
        if check:
            self.validate()

    def validate(self):
        p = self.params
        W = p.W
        pI = Matrix.identity(W, p.h1).scale(W.from_int(p.p))
        for i in range(p.f):
            for M in (self.F[i].matrix, self.V[i].matrix):
                if M.m != p.h1 or M.n != p.h1:
                    raise InvalidLift("matrix at index %d is not %d x %d" % (i, p.h1, p.h1))
            FV = self.F[i].compose(self.V[i])
            if FV.twist != 0 or FV.matrix != pI:
                raise InvalidLift("F V != p at index %d" % i)
            VF = self.V[i].compose(self.F[i])
            if VF.twist != 0 or VF.matrix != pI:
                raise InvalidLift("V F != p at index %d" % i)
        try:
            self.reduce()
        except InvalidDatum as exc:
            raise InvalidLift("reduction is not a valid datum: %s" % exc) from exc

    def reduce(self) -> DieudonneDatum:
        if self._reduction is None:
            p = self.params
            red = p.tower.red_to_R
            Fr = [self.F[i].matrix.map(red, p.R) for i in range(p.f)]
            Vr = [self.V[i].matrix.map(red, p.R) for i in range(p.f)]
            self._reduction = DieudonneDatum(p, Fr, Vr, pr_flags=self._pr_flags)
        return self._reduction

    def dualize(self) -> "LiftedDatum":
        p = self.params
        Fd = [self.V[i].matrix.transpose().frob(1) for i in range(p.f)]
        Vd = [self.F[i].matrix.transpose().frob(-1) for i in range(p.f)]
        return LiftedDatum(p.dual(), Fd, Vd, pr_flags=self.reduce().dualize().pr_flags)

    def __eq__(self, other):
        if not isinstance(other, LiftedDatum):
            return NotImplemented
        return (
            self.params.describe() == other.params.describe()
            and all(self.F[i].matrix == other.F[i].matrix for i in range(self.params.f))
            and all(self.V[i].matrix == other.V[i].matrix for i in range(self.params.f))
            and self.reduce().pr_flags == other.reduce().pr_flags
        )

    def __repr__(self):
        return "LiftedDatum(%r)" % (self.params,)
