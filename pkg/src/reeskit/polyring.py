"""Sparse multivariate polynomials over GF(p), monomial orders, ring descriptors.

A ring is described by a characteristic, named variable blocks, a monomial
order and an optional quotient ideal (stored as a reduced Groebner basis of
the ambient polynomial ring).  Towers like R[w_0..w_n] are always flattened
into one descriptor with several blocks.
"""

from __future__ import annotations

import random
import re

MAX_EXPONENT = 1 << 15
MAX_MODULUS = 1 << 31


class RingMismatchError(ValueError):
    """Raised when operands belong to different rings or fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3,317,044,064,679,887,385,961,981
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# monomial orders
#
# An order spec is a hashable tuple:
#   ("grevlex",)
#   ("lex",)
#   ("block", (idx_tuple, idx_tuple, ...))   -- elimination/block order,
#       graded reverse lex inside each block, earlier blocks dominate.
# Keys compare so that bigger key == bigger monomial.
# ---------------------------------------------------------------------------

def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def make_key_function(order_spec, nvars):
    kind = order_spec[0]
    if kind == "grevlex":
        return _grevlex_key
    if kind == "lex":
        return lambda e: e
    if kind == "block":
        blocks = order_spec[1]
        seen = sorted(i for b in blocks for i in b)
        if seen != list(range(nvars)):
            raise ValueError("block order must partition the variables")

        def key(e):
            return tuple(
                (sum(e[i] for i in b), tuple(-e[i] for i in reversed(b)))
                for b in blocks
            )

        return key
    raise ValueError(f"unknown order spec {order_spec!r}")


def elimination_spec(elim_indices, nvars):
    """Block order putting `elim_indices` in front of the remaining variables."""
    first = tuple(sorted(elim_indices))
    rest = tuple(i for i in range(nvars) if i not in set(first))
    blocks = tuple(b for b in (first, rest) if b)
    return ("block", blocks)


def is_degree_compatible(order_spec) -> bool:
    return order_spec[0] == "grevlex"


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*\Z")


class RingDescriptor:
    """Polynomial ring over GF(p), possibly modulo a quotient ideal."""

    __slots__ = (
        "p", "blocks", "names", "degrees", "order_spec", "quotient",
        "rees_block", "_index", "_keyf", "_key_cache", "_sig", "_hash",
        "_ambient", "_qprep",
    )

    def __init__(self, p, blocks, order_spec=("grevlex",), degrees=None,
                 quotient=(), rees_block=None):
        self.p = p
        self.blocks = tuple(tuple(b) for b in blocks)
        self.names = tuple(n for b in self.blocks for n in b)
        self.degrees = tuple(degrees) if degrees else (1,) * len(self.names)
        self.order_spec = order_spec
        self.quotient = tuple(quotient)
        self.rees_block = rees_block
        self._index = {n: i for i, n in enumerate(self.names)}
        self._keyf = make_key_function(order_spec, len(self.names))
        self._key_cache = {}
        qsig = tuple(g.terms for g in self.quotient)
        self._sig = (p, self.blocks, self.degrees, order_spec, qsig)
        self._hash = hash(self._sig)
        self._ambient = None
        self._qprep = None

    # -- identity ----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, RingDescriptor) and self._sig == other._sig

    def __hash__(self):
        return self._hash

    def __repr__(self):
        s = f"zmod {self.p} [" + " | ".join(",".join(b) for b in self.blocks) + "]"
        if self.quotient:
            s += " / (" + ", ".join(str(g) for g in self.quotient) + ")"
        return s

    # -- basic queries -------------------------------------------------------
    @property
    def nvars(self):
        return len(self.names)

    def var_index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def key(self, exps):
        cache = self._key_cache
        k = cache.get(exps)
        if k is None:
            k = cache[exps] = self._keyf(exps)
        return k

    @property
    def ambient(self):
        """The same ring without its quotient ideal."""
        if not self.quotient:
            return self
        if self._ambient is None:
            self._ambient = RingDescriptor(
                self.p, self.blocks, self.order_spec, self.degrees,
                (), self.rees_block)
        return self._ambient

    def with_quotient(self, gens):
        """Descriptor with quotient replaced by the reduced GB of `gens`."""
        from . import gb  # deferred: gb builds on this module
        amb = self.ambient
        lifted = [transport(g, amb) for g in gens if not g.is_zero()]
        if not lifted:
            return amb
        basis = gb.reduced_groebner_raw(lifted, amb)
        if basis == [amb.one()]:
            raise ValueError("quotient ideal is the unit ideal")
        r = RingDescriptor(self.p, self.blocks, self.order_spec, self.degrees,
                           tuple(basis), self.rees_block)
        r._ambient = amb
        return r

    def with_rees_block(self, idx):
        r = RingDescriptor(self.p, self.blocks, self.order_spec, self.degrees,
                           self.quotient, idx)
        return r

    # -- element constructors ------------------------------------------------
    def poly(self, termdict):
        """Normalized polynomial from {exponent tuple: coefficient}."""
        p = self.p
        terms = {e: c % p for e, c in termdict.items() if c % p}
        if self.quotient:
            terms = _reduce_terms(terms, self._quotient_prepped(), p, self.key)
        items = sorted(terms.items(), key=lambda t: self.key(t[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def zero(self):
        return Polynomial(self, ())

    def one(self):
        return self.const(1)

    def const(self, c):
        c %= self.p
        if c == 0:
            return self.zero()
        return Polynomial(self, (((0,) * self.nvars, c),))

    def var(self, name):
        i = self.var_index(name)
        e = [0] * self.nvars
        e[i] = 1
        return self.poly({tuple(e): 1})

    def gens(self):
        return [self.var(n) for n in self.names]

    def monomial(self, exps, coeff=1):
        return self.poly({tuple(exps): coeff})

    def _quotient_prepped(self):
        if self._qprep is None:
            self._qprep = [
                (g.terms[0][0], pow(g.terms[0][1], -1, self.p), g.terms[1:])
                for g in self.quotient
            ]
        return self._qprep


def make_ring(p, blocks, order="grevlex", quotient=None, degrees=None,
              rees_block=None) -> RingDescriptor:
    """Build a ring descriptor, replacing quotient generators by their reduced GB."""
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"characteristic {p!r} is not prime")
    if p >= MAX_MODULUS:
        raise ValueError("characteristic must be below 2^31")
    if blocks and isinstance(blocks[0], str):
        blocks = [blocks]
    names = [n for b in blocks for n in b]
    if len(set(names)) != len(names):
        raise ValueError("duplicate variable names")
    for n in names:
        if not _NAME_RE.match(n):
            raise ValueError(f"bad variable name {n!r}")
    if isinstance(order, str):
        order_spec = (order,)
    else:
        order_spec = order
    if order_spec[0] == "block" and order_spec[1] and isinstance(order_spec[1][0], int):
        # sizes form: ("block", (n1, n2, ...)) -> index partition
        sizes = order_spec[1]
        if sum(sizes) != len(names):
            raise ValueError("block sizes must cover all variables")
        idx, parts = 0, []
        for s in sizes:
            parts.append(tuple(range(idx, idx + s)))
            idx += s
        order_spec = ("block", tuple(parts))
    ring = RingDescriptor(p, blocks, order_spec, degrees, (), rees_block)
    if quotient:
        for g in quotient:
            if not isinstance(g, Polynomial) or g.ring.ambient != ring:
                raise ValueError("quotient generators from another ring")
        ring = ring.with_quotient(quotient)
    return ring


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def _reduce_terms(terms, prepped, p, key):
    """Long division of a term dict by prepared divisors; returns remainder dict."""
    work = dict(terms)
    rem = {}
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        if not c:
            continue
        for lead, lcinv, tail in prepped:
            if all(a >= b for a, b in zip(m, lead)):
                q = tuple(a - b for a, b in zip(m, lead))
                f = c * lcinv % p
                for e, d in tail:
                    me = tuple(a + b for a, b in zip(e, q))
                    work[me] = (work.get(me, 0) - f * d) % p
                break
        else:
            rem[m] = c
    return rem


class Polynomial:
    """Immutable sparse polynomial; terms sorted descending in the ring order."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- queries -------------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or not any(self.terms[0][0])

    def lead_exps(self):
        return self.terms[0][0]

    def lead_coeff(self):
        return self.terms[0][1]

    def constant_value(self):
        if self.is_zero():
            return 0
        return self.terms[0][1]

    def total_degree(self, weights=None):
        if not self.terms:
            return -1
        if weights is None:
            return max(sum(e) for e, _ in self.terms)
        return max(sum(a * w for a, w in zip(e, weights)) for e, _ in self.terms)

    def degree_in(self, name):
        i = self.ring.var_index(name)
        return max((e[i] for e, _ in self.terms), default=-1)

    def is_homogeneous(self, weights=None):
        if not self.terms:
            return True
        if weights is None:
            weights = self.ring.degrees
        degs = {sum(a * w for a, w in zip(e, weights)) for e, _ in self.terms}
        return len(degs) == 1

    def support_vars(self):
        used = set()
        for e, _ in self.terms:
            for i, a in enumerate(e):
                if a:
                    used.add(i)
        return sorted(used)

    def coeff_dict(self):
        return dict(self.terms)

    def monic(self):
        if not self.terms:
            return self
        lc = self.terms[0][1]
        if lc == 1:
            return self
        return self * pow(lc, -1, self.ring.p)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError("polynomials from different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        self._check(other)
        d = dict(self.terms)
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return self.ring.poly(d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, tuple((e, p - c) for e, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.ring.p
            if c == 0:
                return self.ring.zero()
            p = self.ring.p
            return Polynomial(self.ring,
                              tuple((e, d * c % p) for e, d in self.terms))
        self._check(other)
        p = self.ring.p
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(e1, e2))
                d[m] = (d.get(m, 0) + c1 * c2) % p
        if d and max(max(e) for e in d) > MAX_EXPONENT:
            raise ValueError("exponent overflow beyond 2^15")
        return self.ring.poly(d)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base2 = base * base if n > 1 else base
            base, n = base2, n >> 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ring.const(other)
        return (isinstance(other, Polynomial) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring._hash, self.terms))

    # -- calculus / substitution ---------------------------------------------
    def derivative(self, name):
        i = self.ring.var_index(name)
        p = self.ring.p
        d = {}
        for e, c in self.terms:
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                cc = c * e[i] % p
                if cc:
                    d[tuple(ne)] = cc
        return self.ring.poly(d)

    def substitute(self, images: dict):
        """Substitute polynomials for variables (by name); result in self.ring."""
        ring = self.ring
        idx = {ring.var_index(n): f for n, f in images.items()}
        out = ring.zero()
        powcache = {}
        for e, c in self.terms:
            piece = ring.const(c)
            rest = list(e)
            for i, f in idx.items():
                k = e[i]
                if k:
                    rest[i] = 0
                    key = (i, k)
                    pw = powcache.get(key)
                    if pw is None:
                        pw = powcache[key] = f ** k
                    piece = piece * pw
            piece = piece * ring.monomial(tuple(rest))
            out = out + piece
        return out

    def __str__(self):
        return format_terms(self.terms, self.ring)

    __repr__ = __str__


def format_terms(terms, ring):
    if not terms:
        return "0"
    p = ring.p
    parts = []
    for e, c in terms:
        if 2 * c > p:
            sign, c = "-", p - c
        else:
            sign = "+"
        mono = "*".join(
            n if k == 1 else f"{n}^{k}"
            for n, k in zip(ring.names, e) if k
        )
        if not mono:
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        parts.append((sign, body))
    s0, b0 = parts[0]
    out = ("-" if s0 == "-" else "") + b0
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


def transport(f: Polynomial, target: RingDescriptor, rename=None) -> Polynomial:
    """Move a polynomial into another ring by matching variable names.

    Only variables actually occurring in f need to exist in the target.
    """
    if f.ring == target:
        return f
    rename = rename or {}
    src_names = f.ring.names
    idx = {}
    nv = target.nvars
    d = {}
    for e, c in f.terms:
        ne = [0] * nv
        for i, a in enumerate(e):
            if a:
                j = idx.get(i)
                if j is None:
                    n = src_names[i]
                    j = idx[i] = target.var_index(rename.get(n, n))
                ne[j] += a
        m = tuple(ne)
        d[m] = (d.get(m, 0) + c) % target.p
    return target.poly(d)


# ---------------------------------------------------------------------------
# ring maps and module maps
# ---------------------------------------------------------------------------

class RingMap:
    """Map between rings given by the image of every source variable."""

    __slots__ = ("source", "target", "images", "_powcache")

    def __init__(self, source, target, images, check=True):
        if len(images) != source.nvars:
            raise ValueError("one image per source variable required")
        for f in images:
            if not isinstance(f, Polynomial) or f.ring != target:
                raise RingMismatchError("images must live in the target ring")
        self.source = source
        self.target = target
        self.images = tuple(images)
        self._powcache = {}
        if check:
            for q in source.quotient:
                if not self.apply_ambient(q).is_zero():
                    raise ValueError(
                        "map does not kill the source quotient ideal")

    def apply_ambient(self, f):
        """Apply to a polynomial given by ambient term data of the source."""
        tgt = self.target
        out = tgt.zero()
        cache = self._powcache
        for e, c in f.terms:
            piece = tgt.const(c)
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    pw = cache.get(key)
                    if pw is None:
                        pw = cache[key] = self.images[i] ** a
                    piece = piece * pw
            out = out + piece
        return out

    def __call__(self, x):
        if isinstance(x, Polynomial):
            if x.ring != self.source:
                raise RingMismatchError("argument not in the source ring")
            return self.apply_ambient(x)
        if hasattr(x, "gens") and hasattr(x, "ring"):
            if x.ring != self.source:
                raise RingMismatchError("argument not in the source ring")
            return x.__class__(self.target, tuple(self(g) for g in x.gens))
        raise TypeError(f"cannot apply ring map to {type(x).__name__}")

    def __repr__(self):
        ims = ", ".join(f"{n} -> {f}" for n, f in zip(self.source.names, self.images))
        return f"ringmap[ {ims} ]"


def identity_map(ring):
    return RingMap(ring, ring, ring.gens(), check=False)


class FreeModuleMap:
    """Matrix of polynomials presenting a map R^s -> R^m (columns = images)."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, entries, rows=None, cols=None):
        entries = tuple(tuple(row) for row in entries)
        if entries:
            rows = len(entries)
            cols = len(entries[0])
            for row in entries:
                if len(row) != cols:
                    raise ValueError("ragged matrix")
                for f in row:
                    if f.ring != ring:
                        raise RingMismatchError("matrix entries from different rings")
        else:
            rows = rows or 0
            cols = cols or 0
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = entries

    def column(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        ent = tuple(tuple(self.entries[i][j] for i in range(self.rows))
                    for j in range(self.cols))
        return FreeModuleMap(self.ring, ent, rows=self.cols, cols=self.rows)

    def is_zero(self):
        return all(f.is_zero() for row in self.entries for f in row)

    def __eq__(self, other):
        return (isinstance(other, FreeModuleMap) and self.ring == other.ring
                and self.entries == other.entries
                and (self.rows, self.cols) == (other.rows, other.cols))

    def __hash__(self):
        return hash((self.ring._hash, self.rows, self.cols, self.entries))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(f) for f in row) + "]"
                         for row in self.entries)
        return f"matrix[ {body} ]" if body else f"matrix[ {self.rows} x {self.cols} ]"


def matrix_from_columns(ring, columns, rows=None):
    if not columns:
        return FreeModuleMap(ring, (), rows=rows or 0, cols=0)
    m = len(columns[0])
    ent = [[columns[j][i] for j in range(len(columns))] for i in range(m)]
    return FreeModuleMap(ring, ent)


def row_times_matrix(row, mat: FreeModuleMap):
    """(1 x m) row of polynomials times an m x s matrix -> list of s entries."""
    if len(row) != mat.rows:
        raise ValueError("row length must match matrix rows")
    out = []
    for j in range(mat.cols):
        acc = mat.ring.zero()
        for i in range(mat.rows):
            acc = acc + row[i] * mat.entries[i][j]
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# homogenization, random elements, text parsing
# ---------------------------------------------------------------------------

def extend_ring(ring, new_names, degrees=None, block=None):
    """Append a fresh block of variables to a ring (ambient, no quotient)."""
    amb = ring.ambient
    for n in new_names:
        if n in amb._index:
            raise ValueError(f"variable {n!r} already exists")
    blocks = amb.blocks + (tuple(new_names),)
    degs = amb.degrees + tuple(degrees or (1,) * len(new_names))
    return RingDescriptor(amb.p, blocks, ("grevlex",), degs, (), amb.rees_block)


def homogenize_ideal(I, new_name):
    """Homogenize a Groebner basis of I with a fresh variable (projective closure)."""
    from . import gb
    ring = I.ring
    if not is_degree_compatible(ring.order_spec):
        raise ValueError("homogenization needs a degree-compatible order")
    if new_name in ring.ambient._index:
        raise ValueError(f"variable {new_name!r} already exists")
    ext = extend_ring(ring, [new_name])
    basis = gb.reduced_groebner_raw(
        [transport(g, ring.ambient) for g in I.gens] + list(ring.quotient),
        ring.ambient)
    out = []
    for g in basis:
        d = g.total_degree()
        terms = {}
        for e, c in g.terms:
            terms[e + (d - sum(e),)] = c
        out.append(ext.poly(terms))
    return gb.Ideal(ext, tuple(out))


def _degree_vectors(nvars, degree):
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    for a in range(degree, -1, -1):
        for rest in _degree_vectors(nvars - 1, degree - a):
            yield (a,) + rest


def random_poly(ring, degree, seed_or_rng=0, homogeneous=False):
    """Dense polynomial with seeded uniform coefficients; deterministic.

    By default every monomial of degree up to ``degree`` gets a coefficient;
    with ``homogeneous`` only the top degree is used (a random form, the way
    generic forms enter the constructions here).
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    rng = seed_or_rng if isinstance(seed_or_rng, random.Random) \
        else random.Random(seed_or_rng)
    degrees = [degree] if homogeneous else range(degree + 1)
    while True:
        d = {}
        for dd in degrees:
            for e in _degree_vectors(ring.nvars, dd):
                d[e] = rng.randrange(ring.p)
        f = ring.poly(d)
        if not f.is_zero():
            return f


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_']*)|(?P<op>[-+*^()]))")


def parse_poly(ring, text: str) -> Polynomial:
    """Parse the canonical text syntax, e.g. ``3*x^2*y - w_0 + 1``."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"bad character in polynomial at {text[pos:]!r}")
        tokens.append(m.group("int") or m.group("name") or m.group("op"))
        pos = m.end()
    out = _PolyParser(ring, tokens).expr()
    return out


class _PolyParser:
    def __init__(self, ring, tokens):
        self.ring = ring
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def expr(self):
        f = self.term_sum()
        if self.peek() is not None:
            raise ValueError(f"unexpected token {self.peek()!r}")
        return f

    def term_sum(self):
        neg = False
        while self.peek() in ("+", "-"):
            if self.next() == "-":
                neg = not neg
        f = self.product()
        if neg:
            f = -f
        while self.peek() in ("+", "-"):
            op = self.next()
            g = self.product()
            f = f - g if op == "-" else f + g
        return f

    def product(self):
        f = self.power()
        while True:
            t = self.peek()
            if t == "*":
                self.next()
                f = f * self.power()
            elif t is not None and t not in ("+", "-", ")", "^", "(", "*"):
                f = f * self.power()  # implicit product, e.g. ``3x``
            else:
                return f

    def power(self):
        f = self.atom()
        while self.peek() == "^":
            self.next()
            n = self.next()
            if n is None or not n.isdigit():
                raise ValueError("exponent must be an integer")
            f = f ** int(n)
        return f

    def atom(self):
        t = self.next()
        if t is None:
            raise ValueError("unexpected end of polynomial")
        if t == "(":
            f = self.term_sum()
            if self.next() != ")":
                raise ValueError("missing closing parenthesis")
            return f
        if t == "-":
            return -self.atom()
        if t.isdigit():
            return self.ring.const(int(t))
        return self.ring.var(t)
