"""Groebner engine (Buchberger, ideals and submodules) and the ideal calculus.

Everything runs over the ambient polynomial ring: for a ring with quotient
ideal Q the generators of Q are adjoined to every computation and results
are reduced back.  Module elements are dicts mapping (component, exponents)
to coefficients; ideals are rank-one modules with component 0.  The module
order is position-over-term on top of the ring order, which gives both
submodule Groebner bases and syzygies by the usual graph construction.
"""

from __future__ import annotations

import heapq
import itertools
import math

from .polyring import (
    FreeModuleMap, Polynomial, RingDescriptor, RingMap, RingMismatchError,
    elimination_spec, extend_ring, is_degree_compatible, make_key_function,
    matrix_from_columns, transport,
)

INFINITY = math.inf


# ---------------------------------------------------------------------------
# engine primitives
# ---------------------------------------------------------------------------

def _memo(fn):
    cache = {}

    def wrapped(x):
        v = cache.get(x)
        if v is None:
            v = cache[x] = fn(x)
        return v

    return wrapped


def _module_key(rkey):
    def mkey(m):
        return (-m[0], rkey(m[1]))
    return _memo(mkey)


def _poly_to_vec(f: Polynomial, comp=0):
    return {(comp, e): c for e, c in f.terms}


def _vec_to_polys(vec, amb, rank):
    buckets = [dict() for _ in range(rank)]
    for (c, e), v in vec.items():
        buckets[c][e] = v
    return tuple(amb.poly(b) for b in buckets)


def _reduce_vec(vec, prepped, p, mkey, track=None):
    """Full normal form of a vector against prepared monic reducers.

    ``track``, when given, is a list of dicts receiving the multiplier
    monomials used against each reducer (the division quotients).
    """
    bycomp = {}
    for i, (lead, _) in enumerate(prepped):
        bycomp.setdefault(lead[0], []).append((lead[1], i))
    work = dict(vec)
    rem = {}
    while work:
        m = max(work, key=mkey)
        c = work.pop(m)
        if not c:
            continue
        hit = -1
        cands = bycomp.get(m[0])
        if cands:
            me = m[1]
            for le, gi in cands:
                ok = True
                for a, b in zip(le, me):
                    if a > b:
                        ok = False
                        break
                if ok:
                    hit = gi
                    break
        if hit < 0:
            rem[m] = c
            continue
        lead, tail = prepped[hit]
        q = tuple(b - a for a, b in zip(lead[1], m[1]))
        for (gc, ge), gco in tail:
            nm = (gc, tuple(a + b for a, b in zip(ge, q)))
            nv = (work.get(nm, 0) - c * gco) % p
            if nv:
                work[nm] = nv
            else:
                work.pop(nm, None)
        if track is not None:
            tq = track[hit]
            tq[q] = (tq.get(q, 0) + c) % p
    return rem


def _gb_core(vectors, amb, rkey=None, padding=None, want_rep=False):
    """Reduced Groebner basis of the module generated by ``vectors``.

    Returns (basis, reps): ``basis`` a list of monic term dicts sorted by
    ascending lead, each dict carrying its lead under the key ``"_lead"``;
    ``reps`` (when requested) expresses each basis element as a combination
    of the input vectors, as dicts {input index: {exps: coeff}}.
    """
    p = amb.p
    rkey = rkey or amb.key
    mkey = _module_key(rkey)
    if padding is None:
        padding = [False] * len(vectors)

    G, Glead, Gpad, Grep = [], [], [], []
    Gsingle = []  # element lives in a single component (coprime criterion OK)
    bycomp = {}
    pending = set()
    heap = []

    def find_reducer(m):
        cands = bycomp.get(m[0])
        if not cands:
            return -1
        me = m[1]
        for le, gi in cands:
            ok = True
            for a, b in zip(le, me):
                if a > b:
                    ok = False
                    break
            if ok:
                return gi
        return -1

    def nf(vec, rep):
        work = dict(vec)
        rem = {}
        while work:
            m = max(work, key=mkey)
            c = work.pop(m)
            if not c:
                continue
            gi = find_reducer(m)
            if gi < 0:
                rem[m] = c
                continue
            lead = Glead[gi]
            g = G[gi]
            q = tuple(b - a for a, b in zip(lead[1], m[1]))
            for gm, gco in g.items():
                if gm == lead:
                    continue
                nm = (gm[0], tuple(a + b for a, b in zip(gm[1], q)))
                nv = (work.get(nm, 0) - c * gco) % p
                if nv:
                    work[nm] = nv
                else:
                    work.pop(nm, None)
            if rep is not None:
                grep = Grep[gi]
                for idx, terms in grep.items():
                    dst = rep.setdefault(idx, {})
                    for e, d in terms.items():
                        ne = tuple(a + b for a, b in zip(e, q))
                        nv = (dst.get(ne, 0) - c * d) % p
                        if nv:
                            dst[ne] = nv
                        else:
                            dst.pop(ne, None)
        return rem

    def add(vec, rep, pad):
        lc = None
        lead = max(vec, key=mkey)
        lc = vec[lead]
        if lc != 1:
            inv = pow(lc, -1, p)
            vec = {m: c * inv % p for m, c in vec.items()}
            if rep is not None:
                rep = {i: {e: c * inv % p for e, c in t.items()}
                       for i, t in rep.items()}
        gi = len(G)
        G.append(vec)
        Glead.append(lead)
        Gpad.append(pad)
        Grep.append(rep)
        Gsingle.append(len({m[0] for m in vec}) == 1)
        bycomp.setdefault(lead[0], []).append((lead[1], gi))
        for gj in range(gi):
            lj = Glead[gj]
            if lj[0] != lead[0]:
                continue
            lcm = (lead[0], tuple(max(a, b) for a, b in zip(lj[1], lead[1])))
            pair = (gj, gi)
            pending.add(pair)
            heapq.heappush(heap, (mkey(lcm), gj, gi))
        return gi

    zero_unit = (0,) * amb.nvars
    for k, vec in enumerate(vectors):
        vec = {m: c % p for m, c in vec.items() if c % p}
        if not vec:
            continue
        rep0 = {k: {zero_unit: 1}} if want_rep else None
        red = nf(vec, rep0)
        if red:
            add(red, rep0, padding[k] and red == vec)

    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        li, lj = Glead[i], Glead[j]
        lcm = tuple(max(a, b) for a, b in zip(li[1], lj[1]))
        if Gpad[i] and Gpad[j]:
            continue  # both copies of the quotient basis: S-pair reduces to 0
        if (Gsingle[i] and Gsingle[j]
                and all(a + b == m for a, b, m in zip(li[1], lj[1], lcm))):
            continue  # coprime leads; only sound for single-component elements
        skip = False
        for k in range(len(G)):
            if k in (i, j) or Glead[k][0] != li[0]:
                continue
            if all(a <= b for a, b in zip(Glead[k][1], lcm)):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik not in pending and pjk not in pending:
                    skip = True
                    break
        if skip:
            continue
        qi = tuple(m - a for a, m in zip(li[1], lcm))
        qj = tuple(m - a for a, m in zip(lj[1], lcm))
        s = {}
        for gm, gco in G[i].items():
            nm = (gm[0], tuple(a + b for a, b in zip(gm[1], qi)))
            s[nm] = (s.get(nm, 0) + gco) % p
        for gm, gco in G[j].items():
            nm = (gm[0], tuple(a + b for a, b in zip(gm[1], qj)))
            s[nm] = (s.get(nm, 0) - gco) % p
        s = {m: c for m, c in s.items() if c}
        rep = None
        if want_rep:
            rep = {}
            for src, sign, q in ((i, 1, qi), (j, -1, qj)):
                for idx, terms in Grep[src].items():
                    dst = rep.setdefault(idx, {})
                    for e, d in terms.items():
                        ne = tuple(a + b for a, b in zip(e, q))
                        nv = (dst.get(ne, 0) + sign * d) % p
                        if nv:
                            dst[ne] = nv
                        else:
                            dst.pop(ne, None)
        red = nf(s, rep)
        if red:
            add(red, rep, False)

    # final inter-reduction to the unique reduced basis
    alive = list(range(len(G)))
    changed = True
    while changed:
        changed = False
        for pos, gi in enumerate(list(alive)):
            others = [G[k] for k in alive if k != gi]
            prepped = []
            for k in alive:
                if k == gi:
                    continue
                prepped.append((Glead[k], tuple(
                    (m, c) for m, c in G[k].items() if m != Glead[k])))
            track = [dict() for _ in prepped] if want_rep else None
            red = _reduce_vec(G[gi], prepped, p, mkey, track)
            if red != G[gi]:
                changed = True
                if not red:
                    alive.remove(gi)
                    continue
                lead = max(red, key=mkey)
                lc = red[lead]
                if want_rep:
                    rep = dict()
                    for idx, terms in Grep[gi].items():
                        rep[idx] = dict(terms)
                    kpos = 0
                    for k in alive:
                        if k == gi:
                            continue
                        quo = track[kpos]
                        kpos += 1
                        for q, c in quo.items():
                            for idx, terms in Grep[k].items():
                                dst = rep.setdefault(idx, {})
                                for e, d in terms.items():
                                    ne = tuple(a + b for a, b in zip(e, q))
                                    nv = (dst.get(ne, 0) - c * d) % p
                                    if nv:
                                        dst[ne] = nv
                                    else:
                                        dst.pop(ne, None)
                else:
                    rep = None
                if lc != 1:
                    inv = pow(lc, -1, p)
                    red = {m: c * inv % p for m, c in red.items()}
                    if rep is not None:
                        rep = {i2: {e: c * inv % p for e, c in t.items()}
                               for i2, t in rep.items()}
                G[gi] = red
                Glead[gi] = lead
                Grep[gi] = rep
        # rebuild reducer index after a full sweep
        bycomp.clear()
        for k in alive:
            bycomp.setdefault(Glead[k][0], []).append((Glead[k][1], k))

    alive.sort(key=lambda k: mkey(Glead[k]))
    basis, reps = [], []
    for k in alive:
        d = dict(G[k])
        d["_lead"] = Glead[k]
        basis.append(d)
        reps.append(Grep[k])
    return basis, reps


def _basis_polys(basis, amb):
    out = []
    for g in basis:
        terms = {e: c for (comp, e), c in
                 ((m, c) for m, c in g.items() if m != "_lead")}
        out.append(amb.poly(terms))
    return out


def reduced_groebner_raw(polys, amb, rkey=None):
    """Reduced GB of an ideal given by polynomials of an ambient ring."""
    vecs = [_poly_to_vec(f) for f in polys if not f.is_zero()]
    basis, _ = _gb_core(vecs, amb, rkey=rkey)
    return _basis_polys(basis, amb)


# ---------------------------------------------------------------------------
# public types
# ---------------------------------------------------------------------------

class Ideal:
    """Finitely generated ideal; generator list is kept verbatim."""

    __slots__ = ("ring", "gens", "_cache")

    def __init__(self, ring, gens=()):
        out = []
        for g in gens:
            if isinstance(g, int):
                g = ring.const(g)
            if not isinstance(g, Polynomial):
                raise TypeError("ideal generators must be polynomials")
            if g.ring != ring:
                raise RingMismatchError("generators from different rings")
            out.append(g)
        self.ring = ring
        self.gens = tuple(out)
        self._cache = {}

    def groebner(self, want_rep=False) -> "GroebnerBasis":
        key = "gb_rep" if want_rep else "gb"
        got = self._cache.get(key)
        if got is None:
            got = groebner_basis(self, want_rep=want_rep)
            self._cache[key] = got
            if want_rep and "gb" not in self._cache:
                self._cache["gb"] = got
        return got

    def display_gens(self):
        ring = self.ring
        basis = self.groebner().ambient_elements
        if not ring.quotient:
            return list(basis)
        out = []
        for g in basis:
            h = transport(g, ring)
            if not h.is_zero():
                out.append(h)
        return out

    def contains(self, f) -> bool:
        return normal_form(f, self).is_zero()

    def is_zero(self):
        return not self.groebner().ambient_elements or (
            bool(self.ring.quotient) and not self.display_gens())

    def is_unit(self):
        b = self.groebner().ambient_elements
        return len(b) == 1 and b[0].is_constant() and not b[0].is_zero()

    def __eq__(self, other):
        if not isinstance(other, Ideal) or self.ring != other.ring:
            return False
        a = tuple(g.terms for g in self.groebner().ambient_elements)
        b = tuple(g.terms for g in other.groebner().ambient_elements)
        return a == b

    def __hash__(self):
        return hash((self.ring, self.gens))

    def __add__(self, other):
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatchError("ideals from different rings")
            return Ideal(self.ring, self.gens + other.gens)
        raise TypeError("can only add ideals")

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            other = Ideal(self.ring, (other,))
        if not isinstance(other, Ideal) or other.ring != self.ring:
            raise RingMismatchError("ideal product needs matching rings")
        gens = tuple(a * b for a in self.gens for b in other.gens)
        return Ideal(self.ring, gens)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative ideal power")
        if n == 0:
            return Ideal(self.ring, (self.ring.one(),))
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def __str__(self):
        gens = self.display_gens()
        if not gens:
            return "ideal[ 0 ]"
        return "ideal[ " + ", ".join(str(g) for g in gens) + " ]"

    __repr__ = __str__


class GroebnerBasis:
    """Reduced basis of an ideal or of a submodule of a free module."""

    __slots__ = ("ring", "rank", "ambient_elements", "elements",
                 "order_spec", "representation")

    def __init__(self, ring, rank, ambient_elements, elements, order_spec,
                 representation=None):
        self.ring = ring
        self.rank = rank          # 0 for ideals, free-module rank otherwise
        self.ambient_elements = tuple(ambient_elements)
        self.elements = tuple(elements)
        self.order_spec = order_spec
        self.representation = representation

    def __str__(self):
        if self.rank == 0:
            return "gb[ " + ", ".join(str(g) for g in self.elements) + " ]"
        cols = ", ".join(
            "(" + ", ".join(str(f) for f in v) + ")" for v in self.elements)
        return f"gb[ rank {self.rank}: {cols} ]"

    __repr__ = __str__


def ideal(ring, *gens) -> Ideal:
    return Ideal(ring, gens)


def _ambient_input(I: Ideal):
    """Lift generators and adjoin the quotient basis; padding flags mark Q.

    Vector positions track generator positions so that representation
    coefficients line up with I.gens.
    """
    ring = I.ring
    amb = ring.ambient
    vecs, padding = [], []
    for g in I.gens:
        vecs.append(_poly_to_vec(transport(g, amb)))
        padding.append(False)
    for q in ring.quotient:
        vecs.append(_poly_to_vec(q))
        padding.append(True)
    return amb, vecs, padding


def groebner_basis(target, want_rep=False) -> GroebnerBasis:
    if isinstance(target, Ideal):
        ring = target.ring
        amb, vecs, padding = _ambient_input(target)
        basis, reps = _gb_core(vecs, amb, padding=padding, want_rep=want_rep)
        ambient_elements = _basis_polys(basis, amb)
        if ring.quotient:
            elements = [h for h in
                        (transport(g, ring) for g in ambient_elements)
                        if not h.is_zero()]
        else:
            elements = list(ambient_elements)
        representation = None
        if want_rep:
            representation = tuple(
                {i: amb.poly(t) for i, t in r.items()} if r else {}
                for r in reps)
        return GroebnerBasis(ring, 0, ambient_elements, elements,
                             amb.order_spec, representation)
    if isinstance(target, FreeModuleMap):
        ring = target.ring
        amb = ring.ambient
        rank = target.rows
        vecs, padding = [], []
        for col in target.columns():
            v = {}
            for i, f in enumerate(col):
                v.update(_poly_to_vec(transport(f, amb), comp=i))
            if v:
                vecs.append(v)
                padding.append(False)
        for q in ring.quotient:
            for i in range(rank):
                vecs.append(_poly_to_vec(q, comp=i))
                padding.append(True)
        basis, _ = _gb_core(vecs, amb, padding=padding)
        vectors = [_vec_to_polys({m: c for m, c in g.items() if m != "_lead"},
                                 amb, rank) for g in basis]
        return GroebnerBasis(ring, rank, vectors, vectors, amb.order_spec)
    raise TypeError("groebner_basis wants an Ideal or a FreeModuleMap")


def normal_form(f: Polynomial, basis, want_quotients=False):
    """Remainder of f modulo a Groebner basis (or ideal), optionally with
    the division quotients so that f = sum(q_i * b_i) + r."""
    if isinstance(basis, Ideal):
        basis = basis.groebner()
    ring = basis.ring
    if f.ring != ring:
        raise RingMismatchError("polynomial not in the basis ring")
    if basis.rank != 0:
        raise ValueError("normal form of a polynomial needs an ideal basis")
    amb = ring.ambient
    mkey = _module_key(amb.key)
    prepped = []
    for g in basis.ambient_elements:
        lead = (0, g.terms[0][0])
        tail = tuple(((0, e), c) for e, c in g.terms[1:])
        prepped.append((lead, tail))
    track = [dict() for _ in prepped] if want_quotients else None
    vec = _poly_to_vec(transport(f, amb))
    rem = _reduce_vec(vec, prepped, amb.p, mkey, track)
    r = transport(amb.poly({e: c for (_, e), c in rem.items()}), ring)
    if not want_quotients:
        return r
    quotients = []
    for g, t in zip(basis.ambient_elements, track):
        gq = transport(amb.poly(t), ring)
        quotients.append((transport(g, ring), gq))
    return r, quotients


# ---------------------------------------------------------------------------
# elimination, kernels, colon / saturation / intersection
# ---------------------------------------------------------------------------

def _fresh_name(taken, stem):
    if stem not in taken:
        return stem
    k = 0
    while f"{stem}{k}" in taken:
        k += 1
    return f"{stem}{k}"


def _subring_without(amb, names):
    gone = set(names)
    blocks, degrees = [], []
    rees_block = None
    new_i = 0
    for bi, block in enumerate(amb.blocks):
        keep = [n for n in block if n not in gone]
        if keep:
            blocks.append(tuple(keep))
            degrees.extend(amb.degrees[amb.var_index(n)] for n in keep)
            if amb.rees_block == bi:
                rees_block = new_i
            new_i += 1
    return RingDescriptor(amb.p, blocks, ("grevlex",), degrees, (), rees_block)


def _eliminate_raw(polys, amb, names):
    idxs = [amb.var_index(n) for n in names]
    keyf = _memo(make_key_function(elimination_spec(idxs, amb.nvars), amb.nvars))
    vecs = [_poly_to_vec(f) for f in polys if not f.is_zero()]
    basis, _ = _gb_core(vecs, amb, rkey=keyf)
    idxset = set(idxs)
    sub = _subring_without(amb, names)
    kept = []
    for g in basis:
        lead = g["_lead"]
        if any(lead[1][i] for i in idxset):
            continue
        terms = {e: c for (_, e), c in
                 ((m, c) for m, c in g.items() if m != "_lead")}
        f = amb.poly(terms)
        kept.append(transport(f, sub))
    return sub, kept


def eliminate(I: Ideal, names) -> Ideal:
    """I intersected with the subring on the remaining variables."""
    names = list(names)
    if not names:
        return I
    ring = I.ring
    amb = ring.ambient
    for n in names:
        amb.var_index(n)
    polys = [transport(g, amb) for g in I.gens] + list(ring.quotient)
    sub, kept = _eliminate_raw(polys, amb, names)
    return Ideal(sub, tuple(kept))


def kernel_of_ring_map(phi: RingMap) -> Ideal:
    """Kernel via the graph construction; source variables whose image is a
    plain target variable are identified instead of eliminated."""
    S, T = phi.source, phi.target
    if S.p != T.p:
        raise RingMismatchError("kernel needs equal characteristics")
    Samb, Tamb = S.ambient, T.ambient
    taken = set(Samb.names)
    joint_name = {}         # target var index -> joint name
    identified = {}         # target var index -> source var index
    for i, img in enumerate(phi.images):
        if len(img.terms) == 1:
            e, c = img.terms[0]
            if c == 1 and sum(e) == 1:
                j = e.index(1)
                if j not in identified:
                    identified[j] = i
                    joint_name[j] = Samb.names[i]
    fresh = []
    for j, tn in enumerate(Tamb.names):
        if j not in joint_name:
            name = _fresh_name(taken, f"#k{j}")
            taken.add(name)
            joint_name[j] = name
            fresh.append(name)
    blocks = ((tuple(fresh),) if fresh else ()) + Samb.blocks
    nv = len(fresh) + Samb.nvars
    order = elimination_spec(range(len(fresh)), nv) if fresh else ("grevlex",)
    joint = RingDescriptor(S.p, blocks, order, None, ())
    rename_t = {Tamb.names[j]: joint_name[j] for j in range(Tamb.nvars)}
    gens = [transport(q, joint, rename_t) for q in T.quotient]
    identified_sources = set(identified.values())
    for i, img in enumerate(phi.images):
        if i in identified_sources:
            continue
        gens.append(joint.var(Samb.names[i]) - transport(img, joint, rename_t))
    if fresh:
        _, kept = _eliminate_raw(gens, joint, fresh)
        kept = [transport(g, S) for g in kept]
    else:
        basis = reduced_groebner_raw(gens, joint)
        kept = [transport(g, S) for g in basis]
    kept = [g for g in kept if not g.is_zero()]
    return Ideal(S, tuple(kept))


def _intersect_raw(gens_a, gens_b, amb):
    """Intersection of two ideals of an ambient ring, by the t-trick."""
    t_name = _fresh_name(set(amb.names), "#t")
    ext = extend_ring(amb, [t_name])
    t = ext.var(t_name)
    one = ext.one()
    gens = [t * transport(g, ext) for g in gens_a if not g.is_zero()]
    gens += [(one - t) * transport(g, ext) for g in gens_b if not g.is_zero()]
    _, kept = _eliminate_raw(gens, ext, [t_name])
    return [transport(g, amb) for g in kept]


def intersect_ideals(I: Ideal, J: Ideal) -> Ideal:
    if I.ring != J.ring:
        raise RingMismatchError("intersection needs matching rings")
    ring = I.ring
    amb = ring.ambient
    ga = [transport(g, amb) for g in I.gens] + list(ring.quotient)
    gb_ = [transport(g, amb) for g in J.gens] + list(ring.quotient)
    kept = _intersect_raw(ga, gb_, amb)
    return Ideal(ring, tuple(transport(g, ring) for g in kept))


def _exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g in the ambient ring; raises if the division is not exact."""
    amb = f.ring
    p = amb.p
    mkey = _module_key(amb.key)
    glead = (0, g.terms[0][0])
    lcinv = pow(g.terms[0][1], -1, p)
    prepped = [(glead, tuple(((0, e), c * lcinv % p) for e, c in g.terms[1:]))]
    track = [dict()]
    rem = _reduce_vec(_poly_to_vec(f), prepped, p, mkey, track)
    if rem:
        raise ArithmeticError("division is not exact")
    return amb.poly({e: c * lcinv % p for e, c in track[0].items()})


def colon(I: Ideal, by) -> Ideal:
    """Ideal quotient I : f or I : J."""
    ring = I.ring
    amb = ring.ambient
    if isinstance(by, Polynomial):
        if by.ring != ring:
            raise RingMismatchError("colon needs matching rings")
        f = transport(by, amb)
        if f.is_zero():
            raise ValueError("colon by zero")
        if f.is_constant():
            return Ideal(ring, tuple(I.display_gens()))
        ga = [transport(g, amb) for g in I.gens] + list(ring.quotient)
        meet = _intersect_raw(ga, [f], amb)
        gens = [transport(_exact_divide(w, f), ring) for w in meet]
        return Ideal(ring, tuple(g for g in gens if not g.is_zero()))
    if isinstance(by, Ideal):
        if by.ring != ring:
            raise RingMismatchError("colon needs matching rings")
        gens = [g for g in by.gens if not g.is_zero()]
        if not gens:
            raise ValueError("colon by the empty (zero) ideal")
        out = None
        for g in gens:
            piece = colon(I, g)
            out = piece if out is None else intersect_ideals(out, piece)
        return out
    raise TypeError("colon by a polynomial or an ideal")


def _same_ideal(I: Ideal, J: Ideal) -> bool:
    return I == J


def saturate(I: Ideal, by, method="colon", max_rounds=64):
    """I : by^infinity, by iterated colon (default) or Rabinowitsch."""
    if method == "rabinowitsch":
        if not isinstance(by, Polynomial):
            raise ValueError("Rabinowitsch saturation needs a single element")
        ring = I.ring
        amb = ring.ambient
        z_name = _fresh_name(set(amb.names), "#z")
        ext = extend_ring(amb, [z_name])
        z = ext.var(z_name)
        gens = [transport(g, ext) for g in I.gens if not g.is_zero()]
        gens += [transport(q, ext) for q in ring.quotient]
        gens.append(transport(by, ext) * z - ext.one())
        _, kept = _eliminate_raw(gens, ext, [z_name])
        return Ideal(ring, tuple(transport(g, ring) for g in kept))
    current = I
    for _ in range(max_rounds):
        nxt = colon(current, by)
        if _same_ideal(nxt, current):
            return current
        current = nxt
    raise RuntimeError("saturation did not stabilize")


def saturation_exponent(I: Ideal, by, cap=64):
    """Smallest n with I : by^n stable, plus the saturation itself."""
    current = I
    n = 0
    while n < cap:
        nxt = colon(current, by)
        if _same_ideal(nxt, current):
            return n, current
        current = nxt
        n += 1
    raise RuntimeError("saturation did not stabilize")


def radical_membership(f: Polynomial, I: Ideal) -> bool:
    """Rabinowitsch test: f in rad(I) iff 1 in I + (f*z - 1)."""
    ring = I.ring
    if f.ring != ring:
        raise RingMismatchError("radical membership needs matching rings")
    if f.is_zero():
        return True
    amb = ring.ambient
    z_name = _fresh_name(set(amb.names), "#z")
    ext = extend_ring(amb, [z_name])
    gens = [transport(g, ext) for g in I.gens if not g.is_zero()]
    gens += [transport(q, ext) for q in ring.quotient]
    gens.append(transport(transport(f, amb), ext) * ext.var(z_name) - ext.one())
    basis = reduced_groebner_raw(gens, ext)
    return len(basis) == 1 and basis[0].is_constant()


# ---------------------------------------------------------------------------
# dimension, degree, Hilbert series
# ---------------------------------------------------------------------------

def _minimal_monomials(exps_list):
    out = []
    for e in sorted(set(exps_list), key=lambda t: (sum(t), t)):
        if not any(all(a >= b for a, b in zip(e, m)) for m in out):
            out.append(e)
    return out


def _min_hitting(supports):
    supports = [s for s in supports if s]
    minimal = []
    for s in sorted(supports, key=len):
        if not any(m <= s for m in minimal):
            minimal.append(s)
    best = [len(set().union(*minimal))] if minimal else [0]

    def rec(sups, chosen):
        if chosen >= best[0]:
            return
        if not sups:
            best[0] = chosen
            return
        pivot = min(sups, key=len)
        for v in sorted(pivot):
            rec([s for s in sups if v not in s], chosen + 1)

    rec(minimal, 0)
    return best[0]


def _hilbert_numerator(lt, weights):
    """Numerator of the Hilbert series of S/(lt) over prod(1 - T^w_i)."""
    memo = {}

    def add_into(dst, src, shift, sign):
        for d, c in src.items():
            dst[d + shift] = dst.get(d + shift, 0) + sign * c

    def rec(gens):
        if not gens:
            return {0: 1}
        key = gens
        got = memo.get(key)
        if got is not None:
            return got
        g = gens[-1]
        rest = gens[:-1]
        n1 = rec(rest)
        col = _minimal_monomials(
            [tuple(max(a - b, 0) for a, b in zip(h, g)) for h in rest])
        n2 = rec(tuple(sorted(col)))
        deg = sum(a * w for a, w in zip(g, weights))
        out = dict(n1)
        add_into(out, n2, deg, -1)
        out = {d: c for d, c in out.items() if c}
        memo[key] = out
        return out

    gens = tuple(sorted(_minimal_monomials(lt), key=lambda t: (sum(t), t)))
    return rec(gens)


def _poly_div_1mt(coeffs, d):
    """Divide an integer polynomial (dict deg->coeff) by 1 - T^d.

    Returns the quotient dict, or None when the division is not exact.
    """
    work = {k: c for k, c in coeffs.items() if c}
    if not work:
        return {}
    top = max(work)
    out = {}
    while work:
        k = min(work)
        c = work.pop(k)
        if k > top - d:
            return None
        out[k] = c
        nk = k + d
        nv = work.get(nk, 0) + c
        if nv:
            work[nk] = nv
        else:
            work.pop(nk, None)
    return {k: c for k, c in out.items() if c}


class HilbertSeries:
    """Rational function numerator / prod(1 - T^d) in lowest such terms."""

    __slots__ = ("numerator", "denominator_degrees")

    def __init__(self, numerator, denominator_degrees):
        self.numerator = dict(numerator)
        self.denominator_degrees = tuple(sorted(denominator_degrees))

    def __eq__(self, other):
        return (isinstance(other, HilbertSeries)
                and self.numerator == other.numerator
                and self.denominator_degrees == other.denominator_degrees)

    def equivalent(self, other) -> bool:
        """Equality as rational functions (cross multiplication)."""
        def mul_in(num, d):
            out = dict(num)
            for k, c in num.items():
                out[k + d] = out.get(k + d, 0) - c
            return {k: c for k, c in out.items() if c}

        a = dict(self.numerator)
        for d in other.denominator_degrees:
            a = mul_in(a, d)
        b = dict(other.numerator)
        for d in self.denominator_degrees:
            b = mul_in(b, d)
        return a == b

    def coefficients(self, upto):
        """First coefficients of the power-series expansion."""
        out = [0] * (upto + 1)
        for d, c in self.numerator.items():
            if d <= upto:
                out[d] += c
        for d in self.denominator_degrees:
            # multiply by 1/(1 - T^d)
            for k in range(d, upto + 1):
                out[k] += out[k - d]
        return out

    def _num_str(self):
        if not self.numerator:
            return "0"
        parts = []
        for d in sorted(self.numerator):
            c = self.numerator[d]
            body = "1" if d == 0 else ("T" if d == 1 else f"T^{d}")
            if d == 0:
                body = str(abs(c))
            elif abs(c) != 1:
                body = f"{abs(c)}*{body}"
            parts.append(("-" if c < 0 else "+", body))
        s0, b0 = parts[0]
        s = ("-" if s0 == "-" else "") + b0
        for sg, b in parts[1:]:
            s += f" {sg} {b}"
        return s

    def __str__(self):
        num = self._num_str()
        if not self.denominator_degrees:
            return num
        den = "*".join(
            "(1 - T)" if d == 1 else f"(1 - T^{d})"
            for d in self.denominator_degrees)
        return f"({num}) / ({den})"

    __repr__ = __str__


def hilbert_series(I: Ideal) -> HilbertSeries:
    """Hilbert series of ring/I for homogeneous I (weighted by variable degrees)."""
    ring = I.ring
    weights = ring.degrees
    for g in list(I.gens) + list(ring.quotient):
        if not g.is_homogeneous(weights):
            raise ValueError("hilbertSeries needs a homogeneous ideal")
    basis = I.groebner().ambient_elements
    if len(basis) == 1 and basis[0].is_constant() and not basis[0].is_zero():
        return HilbertSeries({}, ())
    lt = [g.terms[0][0] for g in basis]
    num = _hilbert_numerator(lt, weights)
    dens = list(weights)
    dens.sort()
    out_d = []
    for d in dens:
        q = _poly_div_1mt(num, d)
        if q is not None:
            num = q
        else:
            out_d.append(d)
    return HilbertSeries(num, out_d)


def dimension_and_degree(I: Ideal):
    """Krull dimension of ring/I and degree of the projective closure."""
    ring = I.ring
    if not is_degree_compatible(ring.order_spec):
        raise ValueError("dimension needs a degree-compatible order")
    basis = I.groebner().ambient_elements
    amb = ring.ambient
    n = amb.nvars
    if len(basis) == 1 and basis[0].is_constant() and not basis[0].is_zero():
        return (-1, 0)
    if not basis:
        return (n, 1)
    lt = _minimal_monomials([g.terms[0][0] for g in basis])
    supports = [frozenset(i for i, a in enumerate(e) if a) for e in lt]
    dim = n - _min_hitting(supports)
    num = _hilbert_numerator(lt, (1,) * n)
    for _ in range(n - dim):
        num = _poly_div_1mt(num, 1)
        if num is None:
            raise AssertionError("degree cancellation failed")
    degree = sum(num.values())
    return (dim, degree)


def ring_dimension(ring) -> int:
    return dimension_and_degree(Ideal(ring, ()))[0]


def codimension(I: Ideal):
    d = dimension_and_degree(I)[0]
    if d < 0:
        return INFINITY
    return ring_dimension(I.ring) - d


# ---------------------------------------------------------------------------
# standard monomials and graded pieces
# ---------------------------------------------------------------------------

def _pure_power_bounds(lt, nvars):
    bounds = [None] * nvars
    for e in lt:
        nz = [i for i, a in enumerate(e) if a]
        if len(nz) == 1:
            i = nz[0]
            if bounds[i] is None or e[i] < bounds[i]:
                bounds[i] = e[i]
    return bounds


def _count_standard(lt, weights, degree):
    """Number of monomials of the given weighted degree outside (lt)."""
    n = len(weights)
    if any(not any(e) for e in lt):
        return 0  # unit ideal: no standard monomials at all
    bounds = _pure_power_bounds(lt, n)
    for i in range(n):
        if weights[i] == 0 and bounds[i] is None:
            raise ValueError("infinite-dimensional graded piece")
    count = 0
    expo = [0] * n

    def rec(i, rem):
        nonlocal count
        if i == n:
            if rem == 0:
                e = tuple(expo)
                if not any(all(a >= b for a, b in zip(e, m)) for m in lt):
                    count += 1
            return
        w = weights[i]
        cap = bounds[i] - 1 if bounds[i] is not None else None
        if w > 0:
            wcap = rem // w
            cap = wcap if cap is None else min(cap, wcap)
        for a in range(cap + 1):
            expo[i] = a
            rec(i + 1, rem - a * w)
        expo[i] = 0

    rec(0, degree)
    return count


def vector_space_dimension(I: Ideal) -> int:
    """dim_k of ring/I for a zero-dimensional ideal."""
    basis = I.groebner().ambient_elements
    amb = I.ring.ambient
    if len(basis) == 1 and basis[0].is_constant() and not basis[0].is_zero():
        return 0
    lt = _minimal_monomials([g.terms[0][0] for g in basis])
    n = amb.nvars
    bounds = _pure_power_bounds(lt, n)
    if any(b is None for b in bounds):
        raise ValueError("quotient is not finite dimensional")
    count = 0
    expo = [0] * n

    def rec(i):
        nonlocal count
        if i == n:
            e = tuple(expo)
            if not any(all(a >= b for a, b in zip(e, m)) for m in lt):
                count += 1
            return
        for a in range(bounds[i]):
            expo[i] = a
            rec(i + 1)
        expo[i] = 0

    rec(0)
    return count


def standard_monomials(I: Ideal):
    """Monomial basis of ring/I for zero-dimensional I (exponent tuples)."""
    basis = I.groebner().ambient_elements
    amb = I.ring.ambient
    if len(basis) == 1 and basis[0].is_constant() and not basis[0].is_zero():
        return []
    lt = _minimal_monomials([g.terms[0][0] for g in basis])
    n = amb.nvars
    bounds = _pure_power_bounds(lt, n)
    if any(b is None for b in bounds):
        raise ValueError("quotient is not finite dimensional")
    out = []
    expo = [0] * n

    def rec(i):
        if i == n:
            e = tuple(expo)
            if not any(all(a >= b for a, b in zip(e, m)) for m in lt):
                out.append(e)
            return
        for a in range(bounds[i]):
            expo[i] = a
            rec(i + 1)
        expo[i] = 0

    rec(0)
    out.sort(key=amb.key)
    return out


def _grading_weights(ring, grading):
    if grading in ("total", None):
        return ring.degrees
    if grading in ("wblock", "w-block", "w"):
        if ring.rees_block is None:
            raise ValueError("ring has no tagged w-block")
        wnames = set(ring.blocks[ring.rees_block])
        return tuple(1 if n in wnames else 0 for n in ring.names)
    raise ValueError(f"unknown grading {grading!r}")


def graded_piece_dim(degree, I: Ideal, grading="total") -> int:
    """k-dimension of the degree-d graded piece of the ideal I."""
    ring = I.ring
    weights = _grading_weights(ring, grading)
    for g in list(I.gens) + list(ring.quotient):
        if not g.is_homogeneous(weights):
            raise ValueError("ideal is not homogeneous for this grading")
    basis = I.groebner().ambient_elements
    lt_full = _minimal_monomials([g.terms[0][0] for g in basis]) if basis else []
    lt_q = (_minimal_monomials([q.terms[0][0] for q in ring.quotient])
            if ring.quotient else [])
    total = _count_standard(lt_q, weights, degree)
    rest = _count_standard(lt_full, weights, degree)
    return total - rest


# ---------------------------------------------------------------------------
# syzygies, minors, trim
# ---------------------------------------------------------------------------

def kernel_of_matrix(A: FreeModuleMap) -> FreeModuleMap:
    """Columns generating ker(A) for A : R^s -> R^m."""
    ring = A.ring
    amb = ring.ambient
    m, s = A.rows, A.cols
    if s == 0:
        return FreeModuleMap(ring, (), rows=0, cols=0)
    if s == 1:
        entries = [transport(A.entries[i][0], amb) for i in range(m)]
        nonzero = [f for f in entries if not f.is_zero()]
        if not nonzero:
            return FreeModuleMap(ring, ((ring.one(),),))
        out = None
        for f in nonzero:
            piece = _annihilator_of_element(f, ring)
            out = piece if out is None else intersect_ideals(out, piece)
        cols = [(g,) for g in out.display_gens()]
        return matrix_from_columns(ring, cols, rows=1)
    rank = m + s
    vecs, padding = [], []
    for j in range(s):
        v = {}
        for i in range(m):
            v.update(_poly_to_vec(transport(A.entries[i][j], amb), comp=i))
        v[(m + j, (0,) * amb.nvars)] = 1
        vecs.append(v)
        padding.append(False)
    for q in ring.quotient:
        for i in range(m):
            vecs.append(_poly_to_vec(q, comp=i))
            padding.append(True)
    basis, _ = _gb_core(vecs, amb, padding=padding)
    cols = []
    for g in basis:
        lead = g["_lead"]
        if lead[0] < m:
            continue
        terms = [(mc, co) for mc, co in g.items() if mc != "_lead"]
        vec = {(c - m, e): co for (c, e), co in terms}
        polys = _vec_to_polys(vec, amb, s)
        col = tuple(transport(f, ring) for f in polys)
        if any(not f.is_zero() for f in col):
            cols.append(col)
    if not cols:
        return FreeModuleMap(ring, (), rows=s, cols=0)
    return matrix_from_columns(ring, cols, rows=s)


def _annihilator_of_element(f: Polynomial, ring) -> Ideal:
    """{g : g*f = 0 in ring} = (Q : f) for the ambient lift."""
    amb = ring.ambient
    if not ring.quotient:
        return Ideal(ring, ())
    meet = _intersect_raw(list(ring.quotient), [transport(f, amb)], amb)
    gens = [transport(_exact_divide(w, transport(f, amb)), ring) for w in meet]
    return Ideal(ring, tuple(g for g in gens if not g.is_zero()))


def module_contains(gb: GroebnerBasis, vector) -> bool:
    """Membership of a vector of polynomials in a submodule GB."""
    amb = gb.ring.ambient
    mkey = _module_key(amb.key)
    prepped = []
    for v in gb.ambient_elements:
        vec = {}
        for i, f in enumerate(v):
            vec.update(_poly_to_vec(f, comp=i))
        lead = max(vec, key=mkey)
        lc = vec[lead]
        inv = pow(lc, -1, amb.p)
        vec = {m: c * inv % amb.p for m, c in vec.items()}
        tail = tuple((m, c) for m, c in vec.items() if m != lead)
        prepped.append((lead, tail))
    target = {}
    for i, f in enumerate(vector):
        target.update(_poly_to_vec(transport(f, amb), comp=i))
    rem = _reduce_vec(target, prepped, amb.p, mkey)
    return not rem


def minors_ideal(k: int, A: FreeModuleMap) -> Ideal:
    """Ideal of all k x k minors (Laplace expansion with memoization)."""
    ring = A.ring
    if k < 0:
        raise ValueError("minor size must be >= 0")
    if k == 0:
        return Ideal(ring, (ring.one(),))
    if k > min(A.rows, A.cols):
        return Ideal(ring, ())
    memo = {}

    def det(rows, cols):
        key = (rows, cols)
        got = memo.get(key)
        if got is not None:
            return got
        if len(rows) == 1:
            out = A.entries[rows[0]][cols[0]]
        else:
            out = ring.zero()
            r0 = rows[0]
            rest = rows[1:]
            for t, c in enumerate(cols):
                sub = det(rest, cols[:t] + cols[t + 1:])
                term = A.entries[r0][c] * sub
                out = out + term if t % 2 == 0 else out - term
        memo[key] = out
        return out

    gens = []
    for rows in itertools.combinations(range(A.rows), k):
        for cols in itertools.combinations(range(A.cols), k):
            gens.append(det(rows, cols))
    return Ideal(ring, tuple(gens))


def trim_homogeneous(I: Ideal) -> Ideal:
    """Minimal homogeneous generating set, degree by degree."""
    ring = I.ring
    weights = ring.degrees
    gens = [g for g in I.gens if not g.is_zero()]
    for g in gens:
        if not g.is_homogeneous(weights):
            raise ValueError("trim needs a homogeneous ideal")
    gens.sort(key=lambda g: (g.total_degree(weights),
                             ring.key(g.terms[0][0])))
    kept = []
    for g in gens:
        if not kept:
            kept.append(g)
            continue
        if not Ideal(ring, tuple(kept)).contains(g):
            kept.append(g)
    return Ideal(ring, tuple(kept))
