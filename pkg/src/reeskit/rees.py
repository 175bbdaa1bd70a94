"""Rees algebras of ideals and modules, and the invariants built on them.

The Rees ring of a module with m chosen generators is the flattened tower
base[w_0..w_{m-1}]; the Rees ideal is the kernel of the symmetric-algebra
map induced by an embedding into a free module.  For an ideal the inclusion
into the base ring itself is such an embedding and the kernel becomes the
classical elimination computation; for general modules the versal map is
computed first from the presentation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .gb import (
    Ideal, codimension, dimension_and_degree, eliminate, groebner_basis,
    kernel_of_matrix, kernel_of_ring_map, minors_ideal,
    module_contains, normal_form, ring_dimension, saturate,
    trim_homogeneous, vector_space_dimension, INFINITY,
)
from .polyring import (
    FreeModuleMap, Polynomial, RingDescriptor, RingMap, RingMismatchError,
    matrix_from_columns, row_times_matrix, transport,
)

DEFAULT_REDUCTION_CAP = 20
DEFAULT_MULTIPLICITY_CAP = 30


# ---------------------------------------------------------------------------
# presented modules
# ---------------------------------------------------------------------------

class PresentedModule:
    """Module given by generators and a presentation matrix R^s -> R^m."""

    def __init__(self, ring, presentation=None, gens=None, is_ideal=False):
        self.ring = ring
        self._presentation = presentation
        self.gens = tuple(gens) if gens is not None else None
        self.is_ideal = is_ideal
        self._cache = {}

    @classmethod
    def from_ideal(cls, I: Ideal) -> "PresentedModule":
        got = I._cache.get("module")
        if got is None:
            got = cls(I.ring, gens=I.gens, is_ideal=True)
            I._cache["module"] = got
        return got

    @classmethod
    def from_matrix(cls, phi: FreeModuleMap) -> "PresentedModule":
        return cls(phi.ring, presentation=phi)

    @property
    def generator_count(self):
        if self.gens is not None:
            return len(self.gens)
        return self._presentation.rows

    @property
    def presentation(self) -> FreeModuleMap:
        if self._presentation is None:
            row = FreeModuleMap(self.ring, [list(self.gens)])
            syz = kernel_of_matrix(row)
            self._presentation = minimal_columns(syz)
        return self._presentation

    def generator_row(self) -> FreeModuleMap:
        if self.gens is None:
            raise ValueError("module has no distinguished generators")
        return FreeModuleMap(self.ring, [list(self.gens)])

    def is_zero(self):
        return self.gens is not None and all(g.is_zero() for g in self.gens)

    def __repr__(self):
        if self.gens is not None:
            return "module[ " + ", ".join(str(g) for g in self.gens) + " ]"
        return f"module[ coker {self._presentation.rows} x {self._presentation.cols} ]"


def as_module(x) -> PresentedModule:
    if isinstance(x, PresentedModule):
        return x
    if isinstance(x, Ideal):
        return PresentedModule.from_ideal(x)
    if isinstance(x, FreeModuleMap):
        return PresentedModule.from_matrix(x)
    raise TypeError(f"cannot view {type(x).__name__} as a module")


def minimal_columns(mat: FreeModuleMap) -> FreeModuleMap:
    """Drop matrix columns lying in the span of the others (greedy)."""
    ring = mat.ring
    cols = [c for c in mat.columns() if any(not f.is_zero() for f in c)]
    if len(cols) <= 1:
        return matrix_from_columns(ring, cols, rows=mat.rows)
    cols.sort(key=lambda c: (max(f.total_degree() for f in c),
                             tuple(f.terms for f in c)))
    kept = []
    for i, col in enumerate(cols):
        others = kept + cols[i + 1:]
        if others:
            span = groebner_basis(
                matrix_from_columns(ring, others, rows=mat.rows))
            if module_contains(span, col):
                continue
        kept.append(col)
    return matrix_from_columns(ring, kept, rows=mat.rows)


# ---------------------------------------------------------------------------
# Rees rings and the two Rees ideal strategies
# ---------------------------------------------------------------------------

def _fresh_block_names(base, count, stem="w"):
    taken = set(base.ambient.names)
    for candidate in (stem, stem * 2, stem * 3, f"{stem}r"):
        names = [f"{candidate}_{i}" for i in range(count)]
        if not any(n in taken for n in names):
            return names
    raise ValueError("could not find fresh Rees variable names")


def rees_ring(base: RingDescriptor, count, stem="w") -> RingDescriptor:
    """base with an appended w-block; the base quotient is carried along."""
    amb = base.ambient
    names = _fresh_block_names(base, count, stem)
    blocks = amb.blocks + (tuple(names),)
    degrees = amb.degrees + (1,) * count
    big_amb = RingDescriptor(base.p, blocks, ("grevlex",), degrees, (),
                             len(amb.blocks))
    if not base.quotient:
        return big_amb
    # appending variables keeps grevlex comparisons of old monomials, so the
    # reduced quotient basis stays reduced and can be installed directly
    lifted = tuple(transport(q, big_amb) for q in base.quotient)
    out = RingDescriptor(base.p, blocks, ("grevlex",), degrees, lifted,
                         len(amb.blocks))
    out._ambient = big_amb
    return out


def rees_variable_names(ring: RingDescriptor):
    if ring.rees_block is None:
        raise ValueError("ring has no tagged w-block")
    return list(ring.blocks[ring.rees_block])


def base_variable_names(ring: RingDescriptor):
    if ring.rees_block is None:
        raise ValueError("ring has no tagged w-block")
    out = []
    for bi, block in enumerate(ring.blocks):
        if bi != ring.rees_block:
            out.extend(block)
    return out


def symmetric_kernel(f: FreeModuleMap) -> Ideal:
    """Kernel of Sym(base[w..]) -> Sym(base[u..]) for the map with matrix f.

    Columns of f are the images of the module generators inside the free
    module; the result is the Rees ideal for that embedding.
    """
    base = f.ring
    g, m = f.rows, f.cols
    W = rees_ring(base, m)
    U = rees_ring(base, g, stem="#u")
    wnames = rees_variable_names(W)
    unames = rees_variable_names(U)
    uvars = [U.var(n) for n in unames]
    images = []
    for n in base.ambient.names:
        images.append(U.var(n))
    for i in range(m):
        acc = U.zero()
        for j in range(g):
            acc = acc + transport(f.entries[j][i], U) * uvars[j]
        images.append(acc)
    phi = RingMap(W, U, images, check=False)
    K = kernel_of_ring_map(phi)
    return K


def symmetric_algebra_ideal(M) -> Ideal:
    """The linear ideal (w-row times presentation) defining Sym(M)."""
    M = as_module(M)
    pres = M.presentation
    W = rees_ring(M.ring, M.generator_count)
    wrow = [W.var(n) for n in rees_variable_names(W)]
    lifted = FreeModuleMap(
        W, [[transport(e, W) for e in row] for row in pres.entries],
        rows=pres.rows, cols=pres.cols)
    entries = row_times_matrix(wrow, lifted)
    return Ideal(W, tuple(e for e in entries if not e.is_zero()))


def universal_embedding(M) -> FreeModuleMap:
    """Versal map M -> R^r through which every map to a free module factors."""
    M = as_module(M)
    pres = M.presentation
    ker = kernel_of_matrix(pres.transpose())
    return ker.transpose()


def rees_ideal(M, f: Polynomial | None = None) -> Ideal:
    """Rees ideal of a module or ideal, in base[w_0..w_{m-1}].

    Default: symmetric kernel of an embedding into a free module.  For an
    ideal the inclusion into the base ring is used (the Rees algebra of an
    ideal does not depend on the embedding); general modules go through the
    universal embedding.  With ``f``: the
    saturation strategy I0 : f^infinity, legal when f is a non-zerodivisor
    with M[1/f] of linear type.
    """
    M = as_module(M)
    if f is not None:
        if f.is_zero():
            raise ValueError("saturation strategy needs a nonzero element")
        I0 = symmetric_algebra_ideal(M)
        return saturate(I0, transport(f, I0.ring))
    got = M._cache.get("rees_ideal")
    if got is not None:
        return got
    if M.is_ideal:
        emb = M.generator_row()
    else:
        emb = universal_embedding(M)
        if emb.rows == 0:
            ring = M.ring
            W = rees_ring(ring, M.generator_count)
            out = Ideal(W, tuple(W.var(n) for n in rees_variable_names(W)))
            M._cache["rees_ideal"] = out
            return out
    out = symmetric_kernel(emb)
    M._cache["rees_ideal"] = out
    return out


def is_linear_type(M) -> bool:
    return rees_ideal(M) == symmetric_algebra_ideal(M)


@dataclass(frozen=True)
class ReesAlgebraPresentation:
    """Rees ring, Rees ideal, and the structural images of the w-variables."""
    ring: RingDescriptor
    ideal: Ideal
    generators: tuple

    def __str__(self):
        return f"rees[ {self.ring!r} ; {self.ideal} ]"


def rees_presentation(I) -> ReesAlgebraPresentation:
    M = as_module(I)
    RI = rees_ideal(M)
    gens = M.gens if M.gens is not None else ()
    return ReesAlgebraPresentation(RI.ring, RI, tuple(gens))


def normal_cone(I: Ideal) -> RingDescriptor:
    """Rees ring modulo (Rees ideal + I); alias: associated graded ring."""
    if I.is_unit():
        raise ValueError("normal cone of the unit ideal")
    got = I._cache.get("normal_cone")
    if got is not None:
        return got
    rp = rees_presentation(I)
    W = rp.ring
    gens = list(rp.ideal.gens)
    gens += [transport(g, W) for g in I.gens]
    # base quotient generators must be lifted to the ambient ring, where
    # they do not reduce away
    gens += [transport(q, W.ambient) for q in I.ring.quotient]
    nc = W.ambient.with_quotient(gens)
    nc = RingDescriptor(nc.p, nc.blocks, nc.order_spec, nc.degrees,
                        nc.quotient, W.rees_block)
    I._cache["normal_cone"] = nc
    return nc


associated_graded_ring = normal_cone


# ---------------------------------------------------------------------------
# multiplicity, special fiber, analytic spread
# ---------------------------------------------------------------------------

def multiplicity(I: Ideal, cap=DEFAULT_MULTIPLICITY_CAP) -> int:
    """Hilbert-Samuel multiplicity via lengths of the powers.

    Computes len(ring/I^(n+1)) until d+2 consecutive values fit a degree-d
    polynomial that also predicts the next two (d = ring dimension); the
    normalized leading coefficient is the d-th finite difference.
    """
    ring = I.ring
    if any(d != 1 for d in ring.degrees):
        raise ValueError("multiplicity needs a standard graded ring")
    for q in ring.quotient:
        if not q.is_homogeneous():
            raise ValueError("multiplicity needs a graded base ring")
    d = ring_dimension(ring)
    if dimension_and_degree(I)[0] != 0:
        raise ValueError("multiplicity needs a zero-dimensional ideal")
    lengths = []
    power = None
    for n in range(cap + 1):
        power = I if power is None else power * I
        lengths.append(vector_space_dimension(power))
        if len(lengths) >= d + 4:
            window = lengths[-(d + 4):]
            diffs = window
            for _ in range(d):
                diffs = [b - a for a, b in zip(diffs, diffs[1:])]
            if all(x == diffs[0] for x in diffs):
                return diffs[0]
    raise RuntimeError(f"multiplicity did not stabilize within {cap} powers")


def special_fiber_ideal(I: Ideal, mm: Ideal | None = None) -> Ideal:
    """Defining ideal of ReesAlgebra/I modulo the (ir)relevant maximal ideal,
    returned over the pure w-ring."""
    ring = I.ring
    if mm is None:
        got = I._cache.get("special_fiber")
        if got is not None:
            return got
        mm = Ideal(ring, tuple(ring.var(n) for n in ring.names))
        default_mm = True
    else:
        default_mm = False
    for g in I.gens:
        if not normal_form(g, mm).is_zero():
            raise ValueError("ideal is not contained in the chosen maximal ideal")
    rp = rees_presentation(I)
    W = rp.ring
    big = Ideal(W, rp.ideal.gens + tuple(transport(g, W) for g in mm.gens))
    out = eliminate(big, base_variable_names(W))
    if default_mm:
        I._cache["special_fiber"] = out
    return out


def analytic_spread(I: Ideal) -> int:
    fib = special_fiber_ideal(I)
    return dimension_and_degree(fib)[0]


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionCertificate:
    accepted: bool
    witness: int | None
    cap: int

    def __str__(self):
        if self.accepted:
            return f"reduction[ r = {self.witness} ]"
        return f"not-a-reduction[ cap = {self.cap} ]"


def is_reduction(I: Ideal, J: Ideal, cap=DEFAULT_REDUCTION_CAP):
    """Search the smallest r <= cap with J * I^r = I^(r+1)."""
    if I.ring != J.ring:
        raise RingMismatchError("reduction test needs matching rings")
    for g in J.gens:
        if not normal_form(g, I).is_zero():
            raise ValueError("J is not contained in I")
    Ir = I ** 0
    for r in range(cap + 1):
        Inext = Ir * I
        if J * Ir == Inext:
            return ReductionCertificate(True, r, cap)
        # regenerate from the Groebner basis to keep products small
        Ir = Ideal(I.ring, tuple(Inext.display_gens()))
    return ReductionCertificate(False, None, cap)


def reduction_number(I: Ideal, J: Ideal, cap=DEFAULT_REDUCTION_CAP) -> int:
    cert = is_reduction(I, J, cap)
    if not cert.accepted:
        raise ValueError(f"not a reduction within cap {cap}")
    return cert.witness


def minimal_reduction(I: Ideal, seed=0, tries=10,
                      cap=DEFAULT_REDUCTION_CAP) -> Ideal:
    """ell(I) random scalar combinations of the generators, retried until
    they pass the reduction test; deterministic per seed.

    When the generators are homogeneous of mixed degrees, scalar
    combinations of all of them generically vanish outside V(I) and the
    global identity J*I^r = I^(r+1) cannot hold; in that case combinations
    of the lowest-degree generators (then widening the degree window) are
    attempted as well.
    """
    ring = I.ring
    ell = analytic_spread(I)
    rng = random.Random(seed)
    gens = [g for g in I.gens if not g.is_zero()]
    if ell >= len(gens):
        return Ideal(ring, tuple(gens))
    all_homog = all(g.is_homogeneous() for g in gens)
    pools = [list(enumerate(I.gens))]
    if all_homog:
        degs = sorted({g.total_degree() for g in gens})
        windows = []
        for k in range(1, len(degs)):
            allowed = set(degs[:k])
            pool = [(i, g) for i, g in enumerate(I.gens)
                    if not g.is_zero() and g.total_degree() in allowed]
            if len(pool) >= ell:
                windows.append(pool)
        # mixed degrees: scalar combinations across all generators pick up
        # zeros outside V(I), so prefer the low-degree windows
        pools = windows + pools
    fiber = None
    for pool in pools:
        equigenerated = all_homog and len(
            {g.total_degree() for _, g in pool}) == 1
        for _ in range(max(1, tries // len(pools))):
            coeffs = [[rng.randrange(ring.p) for _ in pool]
                      for _ in range(ell)]
            combos = []
            for row in coeffs:
                acc = ring.zero()
                for c, (_, g) in zip(row, pool):
                    acc = acc + g * c
                combos.append(acc)
            if any(g.is_zero() for g in combos):
                continue
            if equigenerated:
                # Northcott-Rees: homogeneous J is a reduction iff its image
                # cuts the special fiber down to dimension 0
                if fiber is None:
                    fiber = special_fiber_ideal(I)
                fring = fiber.ring
                wnames = list(fring.names)
                lins = []
                for row in coeffs:
                    acc = fring.zero()
                    for c, (i, _) in zip(row, pool):
                        acc = acc + fring.var(wnames[i]) * c
                    lins.append(acc)
                cut = Ideal(fring, tuple(fiber.gens) + tuple(lins))
                if dimension_and_degree(cut)[0] != 0:
                    continue
            J = Ideal(ring, tuple(combos))
            if is_reduction(I, J, cap).accepted:
                return J
    raise RuntimeError(
        f"no minimal reduction found in {tries} tries; try another seed")


# ---------------------------------------------------------------------------
# Jacobian dual, G_m, expected Rees ideal
# ---------------------------------------------------------------------------

def which_gm(I: Ideal):
    """Largest m with codim I_{n-p}(phi) > p for all 1 <= p < m (INF if all)."""
    M = as_module(I)
    phi = M.presentation
    n = M.generator_count
    for p_ in range(1, n):
        mi = minors_ideal(n - p_, phi)
        cd = codimension(mi)
        if not cd > p_:
            return p_
    return INFINITY


def jacobian_dual(phi_or_ideal, X=None, T=None) -> FreeModuleMap:
    """Matrix psi over the Rees ring with T*phi = X*psi, entry by entry.

    Defaults: phi the presentation of an ideal, X the base variables, T the
    w-block row.  Entries of T*phi must lie in (X); psi is produced by
    Groebner division with remainder tracking.
    """
    if isinstance(phi_or_ideal, Ideal):
        I = phi_or_ideal
        M = as_module(I)
        pres = M.presentation
        W = rees_ring(I.ring, M.generator_count)
        phi = FreeModuleMap(
            W, [[transport(e, W) for e in row] for row in pres.entries],
            rows=pres.rows, cols=pres.cols)
        if X is None:
            X = [W.var(n) for n in base_variable_names(W)]
        if T is None:
            T = [W.var(n) for n in rees_variable_names(W)]
    else:
        phi = phi_or_ideal
        if X is None or T is None:
            raise ValueError("explicit X and T rows required for a raw matrix")
    ring = phi.ring
    if len(T) != phi.rows:
        raise ValueError("T row length must match the matrix rows")
    if phi.cols == 0 or phi.is_zero():
        return FreeModuleMap(ring, tuple(
            tuple(ring.zero() for _ in range(phi.cols)) for _ in X),
            rows=len(X), cols=phi.cols)
    tphi = row_times_matrix(list(T), phi)
    XI = Ideal(ring, tuple(X))
    gbX = XI.groebner(want_rep=True)
    psi = [[ring.zero() for _ in range(phi.cols)] for _ in X]
    for col, entry in enumerate(tphi):
        rem, quots = normal_form(entry, gbX, want_quotients=True)
        if not rem.is_zero():
            raise ValueError(
                "entries of T*phi do not lie in the ideal of X")
        for k, (b, q) in enumerate(quots):
            if q.is_zero():
                continue
            rep = gbX.representation[k]
            for idx, coefpoly in rep.items():
                if idx >= len(X):
                    continue  # quotient-padding contribution, zero mod Q
                psi[idx][col] = psi[idx][col] + q * transport(coefpoly, ring)
    return FreeModuleMap(ring, psi, rows=len(X), cols=phi.cols)


def expected_rees_ideal(I: Ideal) -> Ideal:
    """Symmetric algebra ideal plus the maximal minors of the Jacobian dual."""
    I0 = symmetric_algebra_ideal(I)
    psi = jacobian_dual(I)
    J1 = minors_ideal(psi.rows, psi)
    E = Ideal(I0.ring, I0.gens + J1.gens)
    try:
        return trim_homogeneous(E)
    except ValueError:
        return E
