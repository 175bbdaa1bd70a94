"""Minimal primes of an ideal, complete at desk scale.

The pipeline splits along factors of Groebner basis elements, radicalizes
and splits zero-dimensional ideals through univariate eliminants
(Seidenberg), and certifies primality either by a primitive-element check
in dimension zero or by a triangular-tower argument in positive dimension.
Candidates that resist certification are returned flagged ``unverified``
rather than silently guessed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .coeff import factor_multivariate, factor_univariate_list, uv_monic, _trim
from .gb import (Ideal, dimension_and_degree, normal_form, standard_monomials)
from .polyring import Polynomial, transport


@dataclass(frozen=True)
class ComponentReport:
    """A minimal-prime candidate with its certification status."""
    prime: Ideal
    certified: bool

    def __str__(self):
        tag = "certified" if self.certified else "unverified"
        return f"{self.prime} {tag}"


def _canon_ideal_key(J: Ideal):
    return tuple(g.terms for g in J.groebner().ambient_elements)


def _contains_ideal(A: Ideal, B: Ideal) -> bool:
    """A subseteq B, by normal forms of the generators."""
    return all(normal_form(g, B).is_zero() for g in A.display_gens())


def _uv_squarefree_part(f, p):
    """Radical of a monic univariate polynomial: product of distinct factors."""
    from .coeff import uv_mul, uv_squarefree_decomposition
    out = [1]
    for g, _ in uv_squarefree_decomposition(uv_monic(list(f), p), p):
        out = uv_mul(out, g, p)
    return uv_monic(out, p)


def _min_poly(f: Polynomial, J: Ideal, std, index):
    """Monic minimal polynomial of f modulo the zero-dimensional ideal J.

    Returns the ascending coefficient list over GF(p)."""
    ring = J.ring
    p = ring.p
    rows = []      # (pivot, rowvec, combo)
    g = ring.one()
    k = 0
    while True:
        nf = normal_form(g, J)
        vec = [0] * len(std)
        for e, c in nf.terms:
            vec[index[e]] = c
        combo = [0] * (k + 1)
        combo[k] = 1
        for pivot, rvec, rcombo in rows:
            c = vec[pivot]
            if c:
                for i, a in enumerate(rvec):
                    if a:
                        vec[i] = (vec[i] - c * a) % p
                for i, a in enumerate(rcombo):
                    if a:
                        if i >= len(combo):
                            combo.extend([0] * (i + 1 - len(combo)))
                        combo[i] = (combo[i] - c * a) % p
        nz = next((i for i, a in enumerate(vec) if a), None)
        if nz is None:
            return uv_monic(_trim(combo), p)
        inv = pow(vec[nz], -1, p)
        vec = [a * inv % p for a in vec]
        combo = [a * inv % p for a in combo]
        rows.append((nz, vec, combo))
        g = normal_form(g * f, J)
        k += 1
        if k > len(std) + 1:
            raise RuntimeError("minimal polynomial search exceeded dimension")


def _uv_as_poly(coeffs, f: Polynomial):
    """Evaluate a univariate coefficient list at the polynomial f."""
    ring = f.ring
    out = ring.zero()
    power = ring.one()
    for c in coeffs:
        if c:
            out = out + power * c
        power = power * f
    return out


class _Decomposer:
    def __init__(self, amb, seed, shape_retries, factor_seed=0):
        self.amb = amb
        self.rng = random.Random(seed)
        self.retries = shape_retries
        self.factor_seed = factor_seed
        self.factor_cache = {}
        self.found = []            # (Ideal over amb, certified, dim)
        self.seen = set()

    def factors_of(self, g: Polynomial):
        key = g.terms
        got = self.factor_cache.get(key)
        if got is None:
            got = factor_multivariate(g, seed=self.factor_seed)[1]
            self.factor_cache[key] = got
        return got

    def run(self, start: Ideal):
        stack = [start]
        while stack:
            J = stack.pop()
            if J.is_unit():
                continue
            key = _canon_ideal_key(J)
            if key in self.seen:
                continue
            self.seen.add(key)
            basis = J.groebner().ambient_elements
            split = None
            for g in basis:
                fs = self.factors_of(g)
                if len(fs) == 1 and fs[0][1] == 1:
                    continue
                parts = [q for q, _ in fs]
                if all(not normal_form(q, J).is_zero() for q in parts):
                    split = parts
                    break
            if split is not None:
                for q in reversed(split):
                    stack.append(Ideal(self.amb, J.gens + (q,)))
                continue
            dim = dimension_and_degree(J)[0]
            if dim == 0:
                self.zero_dimensional(J, stack)
            else:
                self.found.append((J, self.tower_certified(basis), dim))

    # -- dimension zero ------------------------------------------------------
    def zero_dimensional(self, J: Ideal, stack):
        amb = self.amb
        p = amb.p
        # Seidenberg radicalization: squarefree eliminant for every variable
        changed = True
        while changed:
            changed = False
            std = standard_monomials(J)
            index = {e: i for i, e in enumerate(std)}
            for name in amb.names:
                v = amb.var(name)
                e = _min_poly(v, J, std, index)
                sf = _uv_squarefree_part(e, p)
                if len(sf) != len(e):
                    J = Ideal(amb, J.gens + (_uv_as_poly(sf, v),))
                    changed = True
                    break
        std = standard_monomials(J)
        index = {e: i for i, e in enumerate(std)}
        # split along factored variable eliminants
        for name in amb.names:
            v = amb.var(name)
            e = _min_poly(v, J, std, index)
            _, parts = factor_univariate_list(e, p, random.Random(0))
            if len(parts) > 1:
                for q, _ in reversed(parts):
                    stack.append(Ideal(amb, J.gens + (_uv_as_poly(q, v),)))
                return
        # primitive element certificate
        D = len(std)
        for _ in range(self.retries):
            lam = amb.zero()
            for name in amb.names:
                lam = lam + amb.var(name) * self.rng.randrange(p)
            if lam.is_zero() or lam.is_constant():
                continue
            e = _min_poly(lam, J, std, index)
            _, parts = factor_univariate_list(e, p, random.Random(0))
            if len(parts) > 1 or parts[0][1] > 1:
                for q, _ in reversed(parts):
                    stack.append(Ideal(amb, J.gens + (_uv_as_poly(q, lam),)))
                return
            if len(e) - 1 == D:
                self.found.append((J, True, 0))
                return
        self.found.append((J, False, 0))

    # -- positive dimension ---------------------------------------------------
    def tower_certified(self, basis) -> bool:
        """Prime certificate: peel variables that appear linearly with a
        constant coefficient, then ask for one irreducible generator."""
        gens = [g for g in basis]
        while True:
            sub_done = False
            for g in gens:
                hit = None
                for i in g.support_vars():
                    coeff_terms = [(e, c) for e, c in g.terms if e[i]]
                    if (len(coeff_terms) == 1 and coeff_terms[0][0][i] == 1
                            and sum(coeff_terms[0][0]) == 1):
                        hit = (i, coeff_terms[0][1])
                        break
                if hit is None:
                    continue
                i, c = hit
                name = self.amb.names[i]
                rest = self.amb.poly(
                    {e: cc for e, cc in g.terms if not e[i]})
                image = rest * (-pow(c, -1, self.amb.p))
                gens = [h.substitute({name: image})
                        for h in gens if h is not g]
                gens = [h for h in gens if not h.is_zero()]
                sub_done = True
                break
            if not sub_done:
                break
        if not gens:
            return True
        if len(gens) == 1:
            fs = self.factors_of(gens[0])
            return len(fs) == 1 and fs[0][1] == 1
        return False


def minimal_primes(I: Ideal, seed=0, shape_retries=5):
    """Minimal primes over I, as a deterministic list of ComponentReports."""
    ring = I.ring
    amb = ring.ambient
    start = Ideal(amb, tuple(transport(g, amb) for g in I.gens)
                  + ring.quotient)
    if start.is_unit():
        raise ValueError("minimal primes of the unit ideal")
    dec = _Decomposer(amb, seed, shape_retries)
    dec.run(start)

    # dedupe and drop non-minimal candidates
    by_key = {}
    for J, cert, dim in dec.found:
        key = _canon_ideal_key(J)
        old = by_key.get(key)
        if old is None or (cert and not old[1]):
            by_key[key] = (J, cert, dim)
    cands = list(by_key.values())
    keep = []
    for i, (J, cert, dim) in enumerate(cands):
        minimal = True
        for k, (K, _, _) in enumerate(cands):
            if k == i:
                continue
            if _contains_ideal(K, J) and not _contains_ideal(J, K):
                minimal = False
                break
        if minimal:
            keep.append((J, cert, dim))
    keep.sort(key=lambda t: (-t[2], _canon_ideal_key(t[0])))

    out = []
    for J, cert, _ in keep:
        gens = []
        for g in J.groebner().ambient_elements:
            h = transport(g, ring)
            if not h.is_zero():
                gens.append(h)
        out.append(ComponentReport(Ideal(ring, tuple(gens)), cert))
    return out
