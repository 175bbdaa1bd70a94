"""Exact arithmetic in GF(p) and polynomial factorization over prime fields.

Univariate factorization is distinct-degree decomposition followed by
Cantor-Zassenhaus equal-degree splitting (trace splitting for p = 2).
Multivariate factorization reduces to one variable through Kronecker
substitution and recombines univariate factors by trial division.
"""

from __future__ import annotations

import random

from .polyring import MAX_MODULUS, Polynomial, is_prime

KRONECKER_DEGREE_BOUND = 10 ** 6


class KroneckerBoundError(ValueError):
    """Kronecker substitution degree exceeds the configured bound."""


class GFElement:
    """Residue in GF(p); mixing moduli is a hard error."""

    __slots__ = ("value", "modulus")

    def __init__(self, value, modulus):
        if not is_prime(modulus) or modulus >= MAX_MODULUS:
            raise ValueError(f"modulus {modulus} is not a prime below 2^31")
        self.value = value % modulus
        self.modulus = modulus

    def _coerce(self, other):
        if isinstance(other, GFElement):
            if other.modulus != self.modulus:
                raise ValueError("modulus mismatch")
            return other
        if isinstance(other, int):
            return GFElement(other, self.modulus)
        raise TypeError(f"cannot coerce {other!r} into GF({self.modulus})")

    def __add__(self, other):
        o = self._coerce(other)
        return GFElement(self.value + o.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return GFElement(self.value - o.value, self.modulus)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return GFElement(self.value * o.value, self.modulus)

    __rmul__ = __mul__

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in GF(p)")
        return GFElement(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return GFElement(pow(self.value, n, self.modulus), self.modulus)

    def __neg__(self):
        return GFElement(-self.value, self.modulus)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.modulus
        return (isinstance(other, GFElement) and self.modulus == other.modulus
                and self.value == other.value)

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __repr__(self):
        return f"GF({self.modulus})[{self.value}]"


# ---------------------------------------------------------------------------
# univariate polynomials as coefficient lists (ascending), over GF(p)
# ---------------------------------------------------------------------------

def _trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _deg(f):
    return len(f) - 1


def uv_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def uv_add(f, g, p):
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] = a
    for i, b in enumerate(g):
        out[i] = (out[i] + b) % p
    return _trim(out)


def uv_sub(f, g, p):
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] = a
    for i, b in enumerate(g):
        out[i] = (out[i] - b) % p
    return _trim(out)


def uv_divmod(f, g, p):
    if not g:
        raise ZeroDivisionError("univariate division by zero")
    f = list(f)
    q = [0] * max(len(f) - len(g) + 1, 0)
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g) and _trim(f):
        if len(f) < len(g):
            break
        c = f[-1] * inv % p
        k = len(f) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            f[k + i] = (f[k + i] - c * b) % p
        _trim(f)
    return _trim(q), f


def uv_mod(f, g, p):
    return uv_divmod(f, g, p)[1]


def uv_gcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        f, g = g, uv_mod(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def uv_monic(f, p):
    if not f or f[-1] == 1:
        return list(f)
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def uv_pow_mod(f, n, mod, p):
    result = [1]
    base = uv_mod(f, mod, p)
    while n:
        if n & 1:
            result = uv_mod(uv_mul(result, base, p), mod, p)
        n >>= 1
        if n:
            base = uv_mod(uv_mul(base, base, p), mod, p)
    return result


def uv_deriv(f, p):
    return _trim([(i * c) % p for i, c in enumerate(f)][1:])


def _pth_root(f, p):
    # in GF(p)[x] a polynomial with zero derivative is g(x^p); a^(1/p) = a
    out = [0] * ((len(f) - 1) // p + 1)
    for i, c in enumerate(f):
        if c:
            out[i // p] = c
    return out


def uv_squarefree_decomposition(f, p):
    """[(g, multiplicity)] with f monic = prod g^mult, g squarefree, pairwise coprime."""
    out = []
    e = 1
    f = uv_monic(f, p)
    while _deg(f) > 0:
        df = uv_deriv(f, p)
        if not df:
            f = _pth_root(f, p)
            e *= p
            continue
        g = uv_gcd(f, df, p)
        w = uv_divmod(f, g, p)[0]
        i = 1
        while _deg(w) > 0:
            w1 = uv_gcd(w, g, p)
            h = uv_divmod(w, w1, p)[0]
            if _deg(h) > 0:
                out.append((h, i * e))
            w = w1
            g = uv_divmod(g, w1, p)[0]
            i += 1
        f = g
    return out


def _distinct_degree(f, p):
    """[(product of irreducibles of degree d, d)] for monic squarefree f."""
    out = []
    x = [0, 1]
    h = list(x)
    d = 0
    while _deg(f) > 0:
        d += 1
        if 2 * d > _deg(f):
            out.append((f, _deg(f)))
            break
        h = uv_pow_mod(h, p, f, p)
        g = uv_gcd(uv_sub(h, x, p), f, p)
        if _deg(g) > 0:
            out.append((g, d))
            f = uv_divmod(f, g, p)[0]
            h = uv_mod(h, f, p)
    return out


def _equal_degree_split(f, d, p, rng):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    n = _deg(f)
    if n == d:
        return [f]
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = _trim(a)
        if _deg(a) < 1:
            continue
        if p == 2:
            b = list(a)
            t = list(a)
            for _ in range(d - 1):
                t = uv_pow_mod(t, 2, f, p)
                b = uv_add(b, t, p)
        else:
            b = uv_sub(uv_pow_mod(a, (p ** d - 1) // 2, f, p), [1], p)
        g = uv_gcd(b, f, p)
        if 0 < _deg(g) < n:
            left = _equal_degree_split(g, d, p, rng)
            right = _equal_degree_split(uv_divmod(f, g, p)[0], d, p, rng)
            return left + right


def factor_univariate_list(f, p, rng=None):
    """(unit, [(factor coeff list, multiplicity)]) for a nonzero f over GF(p)."""
    rng = rng or random.Random(0)
    f = _trim([c % p for c in f])
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    unit = f[-1]
    f = uv_monic(f, p)
    factors = {}
    for g, mult in uv_squarefree_decomposition(f, p):
        for h, d in _distinct_degree(g, p):
            for q in _equal_degree_split(h, d, p, rng):
                key = tuple(q)
                factors[key] = factors.get(key, 0) + mult
    ordered = sorted(factors.items(), key=lambda t: (len(t[0]), t[0]))
    return unit, [(list(q), m) for q, m in ordered]


def is_irreducible_univariate(f, p) -> bool:
    """gcd certificate: f of degree d divides x^(p^d) - x and no smaller one."""
    f = uv_monic(_trim([c % p for c in f]), p)
    d = _deg(f)
    if d <= 0:
        return False
    if d == 1:
        return True
    x = [0, 1]
    h = list(x)
    for e in range(1, d):
        h = uv_pow_mod(h, p, f, p)
        if d % e == 0:
            if _deg(uv_gcd(uv_sub(h, x, p), f, p)) > 0:
                return False
    h = uv_pow_mod(h, p, f, p)
    return not uv_mod(uv_sub(h, x, p), f, p)


# ---------------------------------------------------------------------------
# field operation helpers on plain integers
# ---------------------------------------------------------------------------

def gf_add(p, a, b):
    return (GFElement(a, p) + GFElement(b, p)).value


def gf_sub(p, a, b):
    return (GFElement(a, p) - GFElement(b, p)).value


def gf_mul(p, a, b):
    return (GFElement(a, p) * GFElement(b, p)).value


def gf_div(p, a, b):
    return (GFElement(a, p) / GFElement(b, p)).value


def gf_inv(p, a):
    return GFElement(a, p).inverse().value


def gf_pow(p, a, n):
    return (GFElement(a, p) ** n).value


# ---------------------------------------------------------------------------
# polynomial-level factorization
# ---------------------------------------------------------------------------

def _poly_to_uv(f: Polynomial, var_index):
    out = [0] * (f.degree_in(f.ring.names[var_index]) + 1)
    for e, c in f.terms:
        out[e[var_index]] = c
    return out


def _uv_to_poly(coeffs, ring, var_index):
    d = {}
    nv = ring.nvars
    for i, c in enumerate(coeffs):
        if c:
            e = [0] * nv
            e[var_index] = i
            d[tuple(e)] = c
    return ring.poly(d)


def factor_univariate(f: Polynomial, seed=0):
    """(unit, [(irreducible monic factor, multiplicity)]); deterministic per seed."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    used = f.support_vars()
    if len(used) > 1:
        raise ValueError("factorUnivariate needs a univariate input")
    ring = f.ring
    p = ring.p
    if not used:
        return f.constant_value(), []
    i = used[0]
    rng = random.Random(seed)
    unit, factors = factor_univariate_list(_poly_to_uv(f, i), p, rng)
    out = [(_uv_to_poly(q, ring, i), m) for q, m in factors]
    out.sort(key=lambda t: (t[0].total_degree(), _canon_key(t[0])))
    return unit, out


def _canon_key(f: Polynomial):
    return tuple((e, c) for e, c in f.terms)


def _multiset_combinations(indexed, size):
    """Combinations of indices of a multiset without duplicate selections."""
    n = len(indexed)

    def rec(start, need, acc):
        if need == 0:
            yield tuple(acc)
            return
        if n - start < need:
            return
        prev = None
        for i in range(start, n):
            if indexed[i] == prev:
                continue
            # skipping equal pieces at the same level avoids duplicates
            prev = indexed[i]
            acc.append(i)
            yield from rec(i + 1, need - 1, acc)
            acc.pop()

    yield from rec(0, size, [])


def _try_divide(f: Polynomial, g: Polynomial):
    """Quotient f/g or None; g nonconstant."""
    from .gb import _exact_divide
    try:
        return _exact_divide(f, g)
    except ArithmeticError:
        return None


def factor_multivariate(f: Polynomial, seed=0, bound=KRONECKER_DEGREE_BOUND):
    """Factor into irreducibles over GF(p) via Kronecker substitution.

    Returns (unit, [(factor, multiplicity)]).  Factors are monic with respect
    to the ring order and sorted deterministically.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    ring = f.ring
    if ring.quotient:
        raise ValueError("factorization works over polynomial rings only")
    p = ring.p
    rng = random.Random(seed)
    factors = {}
    unit = 1

    # monomial content: each variable power splits off
    min_exps = [min(e[i] for e, _ in f.terms) for i in range(ring.nvars)]
    if any(min_exps):
        d = {tuple(a - b for a, b in zip(e, min_exps)): c for e, c in f.terms}
        f = ring.poly(d)
        for i, m in enumerate(min_exps):
            if m:
                factors[_canon_key(ring.var(ring.names[i]))] = m

    while True:
        used = f.support_vars()
        if not used:
            unit = unit * f.constant_value() % p
            break
        if len(used) == 1:
            u, parts = factor_univariate_list(_poly_to_uv(f, used[0]), p, rng)
            unit = unit * u % p
            for q, m in parts:
                g = _uv_to_poly(q, ring, used[0])
                key = _canon_key(g)
                factors[key] = factors.get(key, 0) + m
            break
        g = _kronecker_step(f, used, p, rng, bound)
        if g is None:
            lc = f.lead_coeff()
            unit = unit * lc % p
            key = _canon_key(f.monic())
            factors[key] = factors.get(key, 0) + 1
            break
        quo = _try_divide(f, g)
        assert quo is not None
        lc = g.lead_coeff()
        key = _canon_key(g.monic())
        factors[key] = factors.get(key, 0) + 1
        unit = unit * lc % p
        f = quo

    out = [(Polynomial(ring, key), m) for key, m in factors.items()]
    out.sort(key=lambda t: (t[0].total_degree(), _canon_key(t[0])))
    return unit, out


def _restrict_to_line(f: Polynomial, used, p, rng):
    """f evaluated along a random affine line, as a univariate coeffs list."""
    line = {i: (rng.randrange(p), rng.randrange(p)) for i in used}
    powcache = {}
    acc = []
    for e, c in f.terms:
        piece = [c]
        for i in used:
            k = e[i]
            if not k:
                continue
            key = (i, k)
            pw = powcache.get(key)
            if pw is None:
                a, b = line[i]
                pw = [1]
                for _ in range(k):
                    pw = uv_mul(pw, [b, a], p)
                powcache[key] = pw
            piece = uv_mul(piece, pw, p)
        acc = uv_add(acc, piece, p)
    return acc


def _line_certifies_irreducible(f: Polynomial, used, p, rng, attempts=12):
    """Sound one-sided test: if a full-degree line restriction is
    irreducible then so is f (factors would restrict to factors)."""
    d = f.total_degree()
    if d == 1:
        return True
    for _ in range(attempts):
        g = _restrict_to_line(f, used, p, rng)
        if len(g) - 1 == d and is_irreducible_univariate(g, p):
            return True
    return False


def _kronecker_step(f: Polynomial, used, p, rng, bound):
    """One irreducible factor of f (nonconstant, truly multivariate), or
    None when f is irreducible."""
    ring = f.ring
    if _line_certifies_irreducible(f, used, p, rng):
        return None
    degs = {i: f.degree_in(ring.names[i]) for i in used}
    D = max(degs.values()) + 1
    # higher-degree variables get the low Kronecker digits: smaller image
    order = sorted(used, key=lambda i: (-degs[i], i))
    weight = {}
    w = 1
    for i in order:
        weight[i] = w
        w *= D
        if w > bound:
            raise KroneckerBoundError(
                f"Kronecker substitution degree {w} exceeds bound {bound}")
    image = [0] * (sum(degs[i] * weight[i] for i in used) + 1)
    for e, c in f.terms:
        k = sum(e[i] * weight[i] for i in used)
        image[k] = (image[k] + c) % p
    _trim(image)
    _, pieces = factor_univariate_list(image, p, rng)
    expanded = []
    for q, m in pieces:
        expanded.extend([tuple(q)] * m)
    expanded.sort()
    if len(expanded) > 26:
        raise KroneckerBoundError(
            f"too many Kronecker pieces ({len(expanded)}) to recombine")

    def decode(coeffs):
        d = {}
        nv = ring.nvars
        for k, c in enumerate(coeffs):
            if not c:
                continue
            e = [0] * nv
            for i in order:
                e[i] = k % D
                k //= D
            if k:
                return None
            for i in used:
                if e[i] > degs[i]:
                    return None
            d[tuple(e)] = c
        return ring.poly(d)

    total = len(expanded)
    budget = 200_000
    for size in range(1, total):
        for combo in _multiset_combinations(expanded, size):
            budget -= 1
            if budget < 0:
                raise KroneckerBoundError(
                    "Kronecker recombination budget exceeded")
            prod = [1]
            for i in combo:
                prod = uv_mul(prod, list(expanded[i]), p)
            cand = decode(prod)
            if cand is None or cand.is_constant():
                continue
            if _try_divide(f, cand) is not None:
                return cand
    return None
