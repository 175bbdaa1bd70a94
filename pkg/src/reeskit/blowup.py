"""Blowup as Proj of the Rees algebra: transforms and smoothness checks.

A chart is global: one flattened Rees ring with the Rees ideal installed as
its quotient.  Smoothness of a transform is decided after saturating the
Jacobian-minor locus by the irrelevant ideal (the w-block), exactly like
testing Proj instead of the affine cone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gb import Ideal, dimension_and_degree, minors_ideal, saturate
from .polyring import FreeModuleMap, RingDescriptor, RingMap, transport
from .rees import rees_presentation, rees_variable_names


@dataclass(frozen=True)
class BlowupChart:
    """Global chart of the blowup along a center."""
    ring: RingDescriptor          # Rees ring modulo the Rees ideal
    projection: RingMap           # base ring -> chart ring
    irrelevant: Ideal             # (w-block) in the chart ring
    exceptional: Ideal            # image of the center

    def __str__(self):
        return f"blowup[ {self.ring!r} ]"


def blowup_of(center: Ideal) -> BlowupChart:
    if center.is_unit():
        raise ValueError("cannot blow up the unit ideal")
    if center.is_zero():
        raise ValueError("cannot blow up the zero ideal")
    base = center.ring
    rp = rees_presentation(center)
    W = rp.ring
    quot = list(rp.ideal.gens) + [transport(q, W.ambient)
                                  for q in base.quotient]
    B = W.ambient.with_quotient(quot) if quot else W.ambient
    proj = RingMap(base, B, [B.var(n) for n in base.ambient.names])
    irrelevant = Ideal(B, tuple(B.var(n) for n in rees_variable_names(B)))
    exceptional = Ideal(B, tuple(transport(g, B) for g in center.gens))
    return BlowupChart(B, proj, irrelevant, exceptional)


def total_transform(chart: BlowupChart, X: Ideal) -> Ideal:
    return chart.projection(X)


def strict_transform(chart: BlowupChart, X: Ideal) -> Ideal:
    return saturate(total_transform(chart, X), chart.exceptional)


def singular_locus_ideal(X: Ideal, expected_codim=None) -> Ideal:
    """(X + Q) plus the size-c Jacobian minors, c the codimension."""
    ring = X.ring
    amb = ring.ambient
    full = [transport(g, amb) for g in X.gens if not g.is_zero()]
    full += list(ring.quotient)
    I_amb = Ideal(amb, tuple(full))
    if not full:
        return Ideal(ring, (ring.one(),))
    if expected_codim is None:
        c = amb.nvars - dimension_and_degree(I_amb)[0]
    else:
        c = expected_codim
    if c <= 0:
        return Ideal(ring, (ring.one(),))
    jac = FreeModuleMap(
        amb, [[g.derivative(n) for n in amb.names] for g in full])
    mins = minors_ideal(c, jac)
    gens = tuple(transport(g, ring) for g in full) + tuple(
        transport(g, ring) for g in mins.gens)
    return Ideal(ring, tuple(g for g in gens if not g.is_zero()))


def is_smooth_away_from_irrelevant(chart: BlowupChart, X: Ideal) -> bool:
    sing = singular_locus_ideal(X)
    cleaned = saturate(sing, chart.irrelevant)
    return cleaned.is_unit()
