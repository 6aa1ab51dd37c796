"""Ring tower for ramified semilinear module data.

Four exact coefficient rings, all chain rings:

    k  = F_{p^f}                     capacity 1
    R  = k[pi]/(pi^e)                capacity e
    W2 = (Z/p^2)[x]/(ghat)           capacity 2, uniformizer p
    W  = W2[pi]/(E(pi))              capacity 2e, uniformizer pi

ghat is the canonical integer lift of the degree-f field modulus g; E is
Eisenstein over Z/p^2 (monic, reduces to X^e mod p, constant term of
p-valuation exactly one).  W plays the role of a length-2 Witt lift of R.

Elements are passive immutable data; the ring objects own the operations.
k elements are integer codes in [0, p^f) whose base-p digits are the
coefficients on the power basis.  R elements are e-tuples of k codes,
W2 elements f-tuples of ints mod p^2, W elements e-tuples of W2 elements.
All layers share one protocol: capacity, zero, one, uniformizer, size,
add/sub/neg/mul, is_unit, inv, frob(x, j), val_split(x) -> (val, unit),
pi_pow(n), from_int, elements(), random_element(rng).
"""

from __future__ import annotations

import itertools

from . import polyutil
from .errors import InvalidSpec

SMALL_PRIMES = (2, 3, 5, 7)


class FiniteField:
    """F_{p^f} on integer codes, multiplication through exp/log tables.

    q <= 7^4 in practice, so full tables are cheap and every operation
    is a couple of list lookups.
    """

    capacity = 1

    def __init__(self, p: int, f: int, modulus=None):
        if p not in SMALL_PRIMES:
            raise InvalidSpec("p must be one of %s, got %r" % (SMALL_PRIMES, p))
        if f < 1:
            raise InvalidSpec("f must be >= 1")
        if modulus is None:
            modulus = polyutil.smallest_irreducible(p, f)
        modulus = [c % p for c in polyutil.trim(list(modulus))] or [0]
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise InvalidSpec("field modulus must be monic of degree f")
        if not polyutil.is_irreducible_fp(modulus, p):
            raise InvalidSpec("field modulus is not irreducible mod p")
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = modulus
        self.zero = 0
        self.one = 1
        self.uniformizer = 0  # the maximal ideal of a field is (0)
        self.size = self.q
        self._build_tables()

    def __repr__(self):
        return "GF(%d^%d)" % (self.p, self.f)

    def to_poly(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            out.append(a % self.p)
            a //= self.p
        return polyutil.trim(out)

    def from_poly(self, coeffs) -> int:
        coeffs = polyutil.mod_monic(list(coeffs), self.modulus, self.p)
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c
        return code

    def _raw_mul(self, a: int, b: int) -> int:
        return self.from_poly(polyutil.mul(self.to_poly(a), self.to_poly(b), self.p))

    def _mult_order(self, a: int) -> int:
        n, acc = 1, a
        while acc != 1:
            acc = self._raw_mul(acc, a)
            n += 1
        return n

    def _build_tables(self):
        p, f, q = self.p, self.f, self.q
        if q == 2:
            gen = 1
        else:
            gen = next(c for c in range(2, q) if self._mult_order(c) == q - 1)
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._raw_mul(exp[i - 1], gen)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp, self._log = exp, log
        # frob(.,j) is y -> y^(p^j); on logs that is multiplication by p^j
        self._frob = []
        for j in range(f):
            shift = pow(p, j, q - 1) if q > 2 else 0
            tab = [0] * q
            for v in range(1, q):
                tab[v] = exp[(log[v] * shift) % (q - 1)]
            self._frob.append(tab)

    def add(self, a: int, b: int) -> int:
        p = self.p
        out, mult = 0, 1
        while a or b:
            out += ((a % p) + (b % p)) % p * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out, mult = 0, 1
        while a:
            out += (p - a % p) % p * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def is_unit(self, a: int) -> bool:
        return a != 0

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 is not invertible in %r" % self)
        return self._exp[-self._log[a] % (self.q - 1)]

    def frob(self, a: int, j: int = 1) -> int:
        return self._frob[j % self.f][a]

    def val_split(self, a: int):
        if a == 0:
            return 1, self.one
        return 0, a

    def pi_pow(self, n: int) -> int:
        return self.one if n == 0 else self.zero

    def from_int(self, n: int) -> int:
        return n % self.p

    def res(self, a: int) -> int:
        """Image in the residue field (the identity here)."""
        return a

    def lift_res(self, c: int) -> int:
        return c

    def elements(self):
        return range(self.q)

    def random_element(self, rng) -> int:
        return rng.randrange(self.q)


class PiChain:
    """R = k[pi]/(pi^e) on little-endian e-tuples of k codes."""

    def __init__(self, field: FiniteField, e: int):
        if e < 1:
            raise InvalidSpec("e must be >= 1")
        self.k = field
        self.e = e
        self.p = field.p
        self.f = field.f
        self.capacity = e
        self.zero = (field.zero,) * e
        self.one = tuple([field.one] + [field.zero] * (e - 1))
        # for e = 1 the class of pi is 0
        self.uniformizer = tuple(field.one if i == 1 else field.zero for i in range(e))
        self.size = field.q**e

    def __repr__(self):
        return "GF(%d^%d)[pi]/(pi^%d)" % (self.p, self.f, self.e)

    def add(self, a, b):
        k = self.k
        return tuple(k.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        k = self.k
        return tuple(k.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        k = self.k
        return tuple(k.neg(x) for x in a)

    def mul(self, a, b):
        k, e = self.k, self.e
        out = [k.zero] * e
        for i, x in enumerate(a):
            if x:
                for j in range(e - i):
                    if b[j]:
                        out[i + j] = k.add(out[i + j], k.mul(x, b[j]))
        return tuple(out)

    def scale_k(self, c: int, a):
        k = self.k
        return tuple(k.mul(c, x) for x in a)

    def is_unit(self, a) -> bool:
        return a[0] != self.k.zero

    def inv(self, a):
        if a[0] == self.k.zero:
            raise ZeroDivisionError("non-unit in %r" % self)
        z = self.from_k(self.k.inv(a[0]))
        two = self.from_int(2)
        for _ in range(self.capacity.bit_length() + 2):
            err = self.mul(a, z)
            if err == self.one:
                return z
            z = self.mul(z, self.sub(two, err))
        raise AssertionError("newton inversion failed to converge")

    def frob(self, a, j: int = 1):
        k = self.k
        return tuple(k.frob(x, j) for x in a)

    def val_split(self, a):
        for v in range(self.e):
            if a[v] != self.k.zero:
                return v, a[v:] + (self.k.zero,) * v
        return self.capacity, self.one

    def pi_pow(self, n: int):
        if n >= self.e:
            return self.zero
        return tuple(self.k.one if i == n else self.k.zero for i in range(self.e))

    def shift_down(self, a, s: int):
        """The canonical solution z of pi^s z = a; requires val(a) >= s."""
        assert all(c == self.k.zero for c in a[:s])
        return a[s:] + (self.k.zero,) * s

    def from_k(self, c: int):
        return (c,) + (self.k.zero,) * (self.e - 1)

    def from_int(self, n: int):
        return self.from_k(self.k.from_int(n))

    def res(self, a) -> int:
        return a[0]

    def lift_res(self, c: int):
        return self.from_k(c)

    def elements(self):
        return itertools.product(self.k.elements(), repeat=self.e)

    def random_element(self, rng):
        return tuple(self.k.random_element(rng) for _ in range(self.e))


class WittLength2:
    """W2(k) = (Z/p^2)[x]/(ghat), a length-2 Witt lift of k in polynomial form.

    The Frobenius lift is pinned by one Hensel step from x^p: the error
    ideal (p) squares to zero, so a single step is already exact.
    """

    capacity = 2

    def __init__(self, field: FiniteField):
        self.k = field
        self.p = field.p
        self.f = field.f
        self.m = field.p**2
        self.ghat = list(field.modulus)  # digits already live in [0, p)
        self.zero = (0,) * field.f
        self.one = self._pad([1])
        self.uniformizer = self._pad([field.p])
        self.size = self.m**field.f
        self._build_frobenius()

    def __repr__(self):
        return "W2(GF(%d^%d))" % (self.p, self.f)

    def _pad(self, coeffs):
        return tuple(coeffs + [0] * (self.f - len(coeffs)))

    def add(self, a, b):
        m = self.m
        return tuple((x + y) % m for x, y in zip(a, b))

    def sub(self, a, b):
        m = self.m
        return tuple((x - y) % m for x, y in zip(a, b))

    def neg(self, a):
        m = self.m
        return tuple(-x % m for x in a)

    def mul(self, a, b):
        prod = polyutil.mul(list(a), list(b), self.m)
        return self._pad(polyutil.mod_monic(prod, self.ghat, self.m))

    def scale_int(self, c: int, a):
        m = self.m
        return tuple(c * x % m for x in a)

    def reduce(self, a) -> int:
        """Reduction W2 -> k."""
        p = self.p
        code = 0
        for c in reversed(a):
            code = code * p + c % p
        return code

    def lift(self, a: int):
        """Canonical (digitwise) lift k -> W2."""
        return self._pad(self.k.to_poly(a))

    def is_unit(self, a) -> bool:
        return self.reduce(a) != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError("non-unit in %r" % self)
        # one newton step from the lifted k-inverse is exact: (a z0 - 1)^2 in (p^2) = 0
        z0 = self.lift(self.k.inv(self.reduce(a)))
        z = self.mul(z0, self.sub(self.from_int(2), self.mul(a, z0)))
        assert self.mul(a, z) == self.one
        return z

    def _eval_poly(self, coeffs, at):
        at = self._pad(polyutil.mod_monic(list(at), self.ghat, self.m))
        acc = self.zero
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, at), self.from_int(c))
        return acc

    def _build_frobenius(self):
        p, m, f = self.p, self.m, self.f
        s0 = polyutil.powmod([0, 1], p, self.ghat, m)
        g_at = self._eval_poly(self.ghat, s0)
        gp_at = self._eval_poly(polyutil.deriv(self.ghat, m), s0)
        # g separable, so g'(x^p) is a unit and the hensel step is legal
        s = self.sub(self._pad(s0), self.mul(g_at, self.inv(gp_at)))
        assert self._eval_poly(self.ghat, list(s)) == self.zero

        sig1_pows = [self.one]
        for _ in range(1, f):
            sig1_pows.append(self.mul(sig1_pows[-1], s))

        def apply1(a):
            acc = self.zero
            for i, c in enumerate(a):
                if c:
                    acc = self.add(acc, self.scale_int(c, sig1_pows[i]))
            return acc

        xred = self._pad(polyutil.mod_monic([0, 1], self.ghat, m))
        self._frob_pows = []  # [j][i] = (sigma^j x)^i
        cur = xred
        for _ in range(f):
            pows = [self.one]
            for _ in range(1, f):
                pows.append(self.mul(pows[-1], cur))
            self._frob_pows.append(pows)
            cur = apply1(cur)
        assert cur == xred  # sigma^f = id

    def frob(self, a, j: int = 1):
        j %= self.f
        if j == 0:
            return a
        pows = self._frob_pows[j]
        acc = self.zero
        for i, c in enumerate(a):
            if c:
                acc = self.add(acc, self.scale_int(c, pows[i]))
        return acc

    def val_split(self, a):
        if self.reduce(a) != 0:
            return 0, a
        if a == self.zero:
            return 2, self.one
        return 1, tuple(c // self.p for c in a)

    def pi_pow(self, n: int):
        if n >= 2:
            return self.zero
        return self.one if n == 0 else self.uniformizer

    def from_int(self, n: int):
        return self._pad([n % self.m])

    def res(self, a) -> int:
        return self.reduce(a)

    def lift_res(self, c: int):
        return self.lift(c)

    def elements(self):
        return itertools.product(range(self.m), repeat=self.f)

    def random_element(self, rng):
        return tuple(rng.randrange(self.m) for _ in range(self.f))


class EisensteinLift(object):
    """W = W2[pi]/(E(pi)): the ramified lift, a chain ring of capacity 2e.

    pi^e = p*c with c the unit -sum_j (E_j/p) pi^j; unit_u = c^{-1} turns
    powers of p into powers of pi: unit_u * pi^e = p exactly.
    """

    def __init__(self, w2: WittLength2, e: int, eisenstein):
        m, p = w2.m, w2.p
        E = [c % m for c in eisenstein]
        if len(E) != e + 1 or E[-1] != 1:
            raise InvalidSpec("eisenstein polynomial must be monic of degree e")
        if any(c % p for c in E[:-1]):
            raise InvalidSpec("eisenstein polynomial must reduce to X^e mod p")
        if E[0] == 0:
            raise InvalidSpec("eisenstein constant term needs p-valuation exactly 1")
        self.w2 = w2
        self.k = w2.k
        self.e = e
        self.p = p
        self.f = w2.f
        self.m = m
        self.E = E
        self.capacity = 2 * e
        self.zero = (w2.zero,) * e
        self.one = tuple([w2.one] + [w2.zero] * (e - 1))
        self.size = w2.size**e
        self._build_pi_table()
        self.uniformizer = self._pi_reps[1]
        self._compute_unit_u()

    def __repr__(self):
        return "W2(GF(%d^%d))[pi]/E, e=%d" % (self.p, self.f, self.e)

    def _build_pi_table(self):
        w2, e = self.w2, self.e
        rep_e = tuple(w2.from_int(-c) for c in self.E[:-1])

        def shift1(v):
            head = (w2.zero,) + v[:-1]
            top = v[-1]
            if top == w2.zero:
                return head
            return tuple(w2.add(h, w2.mul(top, c)) for h, c in zip(head, rep_e))

        reps = [tuple(w2.one if i == 0 else w2.zero for i in range(e))]
        for _ in range(2 * e):
            reps.append(shift1(reps[-1]))
        assert reps[2 * e] == self.zero  # pi^(2e) = p^2 * unit = 0
        self._pi_reps = reps

    def _compute_unit_u(self):
        w2, p = self.w2, self.p
        c = tuple(w2.from_int(-(Ej // p)) for Ej in self.E[:-1])
        self.unit_u = self.inv(c)
        assert self.mul(self.unit_u, self._pi_reps[self.e]) == self.from_int(p)
        assert self.frob(self.unit_u) == self.unit_u

    def add(self, a, b):
        w2 = self.w2
        return tuple(w2.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        w2 = self.w2
        return tuple(w2.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        w2 = self.w2
        return tuple(w2.neg(x) for x in a)

    def mul(self, a, b):
        w2, e = self.w2, self.e
        conv = [w2.zero] * (2 * e - 1)
        for i, x in enumerate(a):
            if x != w2.zero:
                for j, y in enumerate(b):
                    if y != w2.zero:
                        conv[i + j] = w2.add(conv[i + j], w2.mul(x, y))
        out = conv[:e]
        for d in range(e, 2 * e - 1):
            c = conv[d]
            if c != w2.zero:
                rep = self._pi_reps[d]
                out = [w2.add(o, w2.mul(c, r)) for o, r in zip(out, rep)]
        return tuple(out)

    def reduce(self, a):
        """Reduction W -> R, coefficientwise in pi."""
        w2 = self.w2
        return tuple(w2.reduce(c) for c in a)

    def lift(self, x):
        """Canonical coefficientwise lift R -> W."""
        w2 = self.w2
        return tuple(w2.lift(c) for c in x)

    def is_unit(self, a) -> bool:
        return self.w2.reduce(a[0]) != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError("non-unit in %r" % self)
        z = self.embed_w2(self.w2.inv(a[0]))
        two = self.from_int(2)
        for _ in range(self.capacity.bit_length() + 2):
            err = self.mul(a, z)
            if err == self.one:
                return z
            z = self.mul(z, self.sub(two, err))
        raise AssertionError("newton inversion failed to converge")

    def frob(self, a, j: int = 1):
        # E has Z/p^2 coefficients, so coefficientwise frobenius fixes pi
        w2 = self.w2
        return tuple(w2.frob(c, j) for c in a)

    def _div_p(self, a):
        assert all(c % self.p == 0 for w in a for c in w)
        return tuple(tuple(c // self.p for c in w) for w in a)

    def val_split(self, a):
        if a == self.zero:
            return self.capacity, self.one
        w2, e = self.w2, self.e
        av = next((i for i in range(e) if w2.reduce(a[i]) != 0), None)
        if av is not None:
            # unit part mod p, lifted, then the p-tail folded in via unit_u
            base = tuple(w2.lift(w2.reduce(c)) for c in a[av:]) + (w2.zero,) * av
            r = self.sub(a, self.mul(self._pi_reps[av], base))
            y = self._div_p(r)
            unit = self.add(base, self.mul(self.unit_u, self.mul(self._pi_reps[e - av], y)))
            assert self.mul(self._pi_reps[av], unit) == a
            return av, unit
        y = self._div_p(a)
        bv, wy = self.val_split(y)  # lands in the branch above
        assert bv < e
        unit = self.mul(self.unit_u, wy)
        assert self.mul(self._pi_reps[e + bv], unit) == a
        return e + bv, unit

    def pi_pow(self, n: int):
        return self._pi_reps[min(n, 2 * self.e)]

    def embed_w2(self, c):
        return (c,) + (self.w2.zero,) * (self.e - 1)

    def from_int(self, n: int):
        return self.embed_w2(self.w2.from_int(n))

    def res(self, a) -> int:
        return self.w2.reduce(a[0])

    def lift_res(self, c: int):
        return self.embed_w2(self.w2.lift(c))

    def elements(self):
        return itertools.product(self.w2.elements(), repeat=self.e)

    def random_element(self, rng):
        return tuple(self.w2.random_element(rng) for _ in range(self.e))


class RingTower:
    """k, R, W2, W built from (p, f, e) and optional moduli, plus the maps between layers."""

    def __init__(self, p, f, e, field_modulus=None, eisenstein=None):
        self.k = FiniteField(p, f, field_modulus)
        self.R = PiChain(self.k, e)
        self.W2 = WittLength2(self.k)
        if eisenstein is None:
            eisenstein = [(-p) % p**2] + [0] * (e - 1) + [1]
        self.W = EisensteinLift(self.W2, e, eisenstein)
        self.p, self.f, self.e = p, f, e
        self.field_modulus = self.k.modulus
        self.eisenstein = self.W.E
        self.unit_u = self.W.unit_u

    def lift_to_W(self, x):
        return self.W.lift(x)

    def red_to_R(self, xw):
        return self.W.reduce(xw)

    def describe(self) -> dict:
        return {
            "p": self.p,
            "f": self.f,
            "e": self.e,
            "field_modulus": list(self.field_modulus),
            "eisenstein": list(self.eisenstein),
        }


def make_tower(p, f, e, field_modulus=None, eisenstein=None) -> RingTower:
    return RingTower(p, f, e, field_modulus=field_modulus, eisenstein=eisenstein)


def pi_digits(ring, x) -> list[int]:
    """pi-adic digit expansion: k codes (d_0, ..., d_{cap-1}) with
    x = sum_i pi^i * lift_res(d_i), exactly.  Unique by counting."""
    out = []
    for _ in range(ring.capacity):
        c = ring.res(x)
        out.append(c)
        r = ring.sub(x, ring.lift_res(c))
        if r == ring.zero:
            x = ring.zero
        else:
            v, w = ring.val_split(r)
            assert v >= 1
            x = ring.mul(ring.pi_pow(v - 1), w)
    return out


def from_pi_digits(ring, digits):
    acc = ring.zero
    for i, c in enumerate(digits):
        if c:
            acc = ring.add(acc, ring.mul(ring.pi_pow(i), ring.lift_res(c)))
    return acc


def div_rem_pi(ring, x, a: int):
    """(q, r) with x = pi^a q + r, r the canonical representative mod (pi^a)."""
    if a <= 0:
        return x, ring.zero
    d = pi_digits(ring, x)
    return from_pi_digits(ring, d[a:]), from_pi_digits(ring, d[:a])
