"""Script language and command line driver.

The grammar is deliberately small::

    ring R = zmod 101 [x,y | w_0,w_1] / (x^2 - y);
    ideal I = x^2 - y;
    let L = intersectInP(I, ideal(y));
    print L;
    assertEqual(reesIdeal(I), symmetricAlgebraIdeal(I));
    assertTrue(isLinearType(I));

Every public operation of every module is reachable through the function
registry; ``reeskit run FILE`` executes a script, ``reeskit eval EXPR``
evaluates one expression.  Exit codes: 0 ok, 1 assertion failure,
2 parse or runtime error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

from . import blowup as blowup_mod
from . import coeff as coeff_mod
from . import decompose as decompose_mod
from . import gb as gb_mod
from . import intersection as intersection_mod
from . import rees as rees_mod
from .blowup import BlowupChart
from .decompose import ComponentReport
from .gb import GroebnerBasis, HilbertSeries, Ideal
from .intersection import WeightedComponent
from .polyring import (FreeModuleMap, Polynomial, RingDescriptor, RingMap,
                       make_ring)
from .rees import PresentedModule, ReductionCertificate, ReesAlgebraPresentation


class ScriptError(Exception):
    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"line {line} col {col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class AssertionFailure(Exception):
    pass


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str       # int | name | string | punct
    text: str
    line: int
    col: int


_PUNCT = set("()[]{},;=+-*^/|")


def tokenize(text: str):
    out = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("int", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            out.append(Token("name", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 1
            if j >= n:
                raise ScriptError("unterminated string", line, start_col)
            out.append(Token("string", text[i + 1:j], line, start_col))
            col += j - i + 1
            i = j + 1
            continue
        if ch in _PUNCT:
            out.append(Token("punct", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ScriptError(f"unexpected character {ch!r}", line, col)
    return out


# ---------------------------------------------------------------------------
# AST and parser
# ---------------------------------------------------------------------------

@dataclass
class Node:
    kind: str
    data: dict
    line: int
    col: int


@dataclass
class Script:
    statements: list


STATEMENT_KEYWORDS = {"ring", "use", "let", "ideal", "poly", "module",
                      "matrix", "map", "print", "assertEqual",
                      "assertNotEqual", "assertTrue"}


class Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self, offset=0):
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else Token("punct", "", 1, 1)
            raise ScriptError("unexpected end of input", last.line, last.col)
        self.i += 1
        return t

    def expect(self, text):
        t = self.next()
        if t.text != text:
            raise ScriptError(f"expected {text!r}, found {t.text!r}",
                              t.line, t.col)
        return t

    def expect_name(self):
        t = self.next()
        if t.kind != "name":
            raise ScriptError(f"expected a name, found {t.text!r}",
                              t.line, t.col)
        return t

    # -- statements -----------------------------------------------------------
    def parse_script(self) -> Script:
        statements = []
        while self.peek() is not None:
            statements.append(self.parse_statement())
        return Script(statements)

    def parse_statement(self) -> Node:
        t = self.peek()
        if t.kind != "name":
            raise ScriptError(f"statement cannot start with {t.text!r}",
                              t.line, t.col)
        if t.text == "ring":
            return self.parse_ring()
        if t.text == "use":
            self.next()
            e = self.parse_expr()
            self.expect(";")
            return Node("use", {"expr": e}, t.line, t.col)
        if t.text in ("let", "ideal", "poly", "module", "matrix", "map") and \
                self.peek(1) is not None and self.peek(1).kind == "name" and \
                self.peek(2) is not None and self.peek(2).text == "=":
            kw = self.next().text
            name = self.expect_name().text
            self.expect("=")
            e = self.parse_expr()
            self.expect(";")
            return Node("bind", {"kw": kw, "name": name, "expr": e},
                        t.line, t.col)
        if t.text == "print":
            self.next()
            e = self.parse_expr()
            self.expect(";")
            return Node("print", {"expr": e}, t.line, t.col)
        if t.text in ("assertEqual", "assertNotEqual"):
            self.next()
            self.expect("(")
            a = self.parse_expr()
            self.expect(",")
            b = self.parse_expr()
            self.expect(")")
            self.expect(";")
            return Node("assert2", {"op": t.text, "a": a, "b": b},
                        t.line, t.col)
        if t.text == "assertTrue":
            self.next()
            self.expect("(")
            a = self.parse_expr()
            self.expect(")")
            self.expect(";")
            return Node("assert1", {"a": a}, t.line, t.col)
        e = self.parse_expr()
        self.expect(";")
        return Node("expr", {"expr": e}, t.line, t.col)

    def parse_ring(self) -> Node:
        t = self.expect("ring")
        name = self.expect_name().text
        self.expect("=")
        self.expect("zmod")
        p_tok = self.next()
        if p_tok.kind != "int":
            raise ScriptError("characteristic must be an integer",
                              p_tok.line, p_tok.col)
        self.expect("[")
        blocks = [[]]
        while True:
            v = self.expect_name().text
            blocks[-1].append(v)
            nxt = self.next()
            if nxt.text == ",":
                continue
            if nxt.text == "|":
                blocks.append([])
                continue
            if nxt.text == "]":
                break
            raise ScriptError(f"unexpected {nxt.text!r} in variable list",
                              nxt.line, nxt.col)
        quotient = None
        if self.peek() is not None and self.peek().text == "/":
            self.next()
            self.expect("(")
            quotient = [self.parse_expr()]
            while self.peek().text == ",":
                self.next()
                quotient.append(self.parse_expr())
            self.expect(")")
        self.expect(";")
        return Node("ring", {"name": name, "p": int(p_tok.text),
                             "blocks": blocks, "quotient": quotient},
                    t.line, t.col)

    # -- expressions -----------------------------------------------------------
    def parse_expr(self) -> Node:
        return self.parse_sum()

    def parse_sum(self) -> Node:
        t = self.peek()
        node = self.parse_product()
        while self.peek() is not None and self.peek().text in ("+", "-"):
            op = self.next().text
            rhs = self.parse_product()
            node = Node("binop", {"op": op, "a": node, "b": rhs},
                        t.line, t.col)
        return node

    def parse_product(self) -> Node:
        t = self.peek()
        node = self.parse_power()
        while self.peek() is not None and self.peek().text == "*":
            self.next()
            rhs = self.parse_power()
            node = Node("binop", {"op": "*", "a": node, "b": rhs},
                        t.line, t.col)
        return node

    def parse_power(self) -> Node:
        t = self.peek()
        node = self.parse_unary()
        if self.peek() is not None and self.peek().text == "^":
            self.next()
            e = self.next()
            if e.kind != "int":
                raise ScriptError("exponent must be an integer",
                                  e.line, e.col)
            node = Node("pow", {"a": node, "n": int(e.text)}, t.line, t.col)
        return node

    def parse_unary(self) -> Node:
        t = self.peek()
        if t is not None and t.text == "-":
            self.next()
            return Node("neg", {"a": self.parse_unary()}, t.line, t.col)
        return self.parse_atom()

    def parse_atom(self) -> Node:
        t = self.next()
        if t.kind == "int":
            return Node("int", {"value": int(t.text)}, t.line, t.col)
        if t.kind == "string":
            return Node("string", {"value": t.text}, t.line, t.col)
        if t.text == "(":
            e = self.parse_expr()
            self.expect(")")
            return e
        if t.text == "matrix":
            self.expect("[")
            rows = []
            while True:
                self.expect("[")
                row = [self.parse_expr()]
                while self.peek().text == ",":
                    self.next()
                    row.append(self.parse_expr())
                self.expect("]")
                rows.append(row)
                nxt = self.next()
                if nxt.text == ",":
                    continue
                if nxt.text == "]":
                    break
                raise ScriptError("malformed matrix literal",
                                  nxt.line, nxt.col)
            return Node("matrix", {"rows": rows}, t.line, t.col)
        if t.text == "[":
            items = []
            if self.peek().text != "]":
                items.append(self.parse_expr())
                while self.peek().text == ",":
                    self.next()
                    items.append(self.parse_expr())
            self.expect("]")
            return Node("list", {"items": items}, t.line, t.col)
        if t.kind == "name":
            if self.peek() is not None and self.peek().text == "(":
                self.next()
                args = []
                if self.peek().text != ")":
                    args.append(self.parse_expr())
                    while self.peek().text == ",":
                        self.next()
                        args.append(self.parse_expr())
                self.expect(")")
                return Node("call", {"name": t.text, "args": args},
                            t.line, t.col)
            return Node("ident", {"name": t.text}, t.line, t.col)
        raise ScriptError(f"unexpected token {t.text!r}", t.line, t.col)


def parse_script(text: str) -> Script:
    return Parser(tokenize(text)).parse_script()


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

@dataclass
class Config:
    seed: int = 0
    cap_reduction: int = rees_mod.DEFAULT_REDUCTION_CAP
    cap_multiplicity: int = rees_mod.DEFAULT_MULTIPLICITY_CAP
    json: bool = False
    verify: bool = False


@dataclass
class ResultEntry:
    statement: int
    kind: str
    value: object
    flags: tuple = ()


@dataclass
class ResultDocument:
    entries: list = field(default_factory=list)
    status: int = 0
    message: str = ""


def _as_ideal(ctx, x):
    if isinstance(x, Ideal):
        return x
    if isinstance(x, Polynomial):
        return Ideal(x.ring, (x,))
    if isinstance(x, int):
        ring = ctx.require_ring()
        return Ideal(ring, (ring.const(x),))
    raise ScriptError(f"expected an ideal, got {_kind_name(x)}")


def _as_poly(ctx, x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        return ctx.require_ring().const(x)
    raise ScriptError(f"expected a polynomial, got {_kind_name(x)}")


def _as_int(x):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ScriptError(f"expected an integer, got {_kind_name(x)}")
    return x


def _as_matrix(x):
    if not isinstance(x, FreeModuleMap):
        raise ScriptError(f"expected a matrix, got {_kind_name(x)}")
    return x


def _as_module(ctx, x):
    if isinstance(x, PresentedModule):
        return x
    if isinstance(x, (Ideal, Polynomial)):
        return PresentedModule.from_ideal(_as_ideal(ctx, x))
    if isinstance(x, FreeModuleMap):
        return PresentedModule.from_matrix(x)
    raise ScriptError(f"expected a module, got {_kind_name(x)}")


def _var_names(ctx, args):
    names = []
    for a in args:
        if isinstance(a, str):
            names.append(a)
        elif isinstance(a, Polynomial) and len(a.terms) == 1 \
                and a.terms[0][1] == 1 and sum(a.terms[0][0]) == 1:
            names.append(a.ring.names[a.terms[0][0].index(1)])
        else:
            raise ScriptError("expected variable names")
    return names


def _kind_name(x):
    return type(x).__name__


def _sub_seed(seed, k):
    return seed * 1_000_003 + k


# every public operation, callable from the script language
def _registry():
    R = {}

    def op(name, module):
        def deco(fn):
            R[name] = (module, fn)
            return fn
        return deco

    # coeff ------------------------------------------------------------
    @op("gfAdd", "coeff")
    def _(ctx, p, a, b):
        return coeff_mod.gf_add(_as_int(p), _as_int(a), _as_int(b))

    @op("gfSub", "coeff")
    def _(ctx, p, a, b):
        return coeff_mod.gf_sub(_as_int(p), _as_int(a), _as_int(b))

    @op("gfMul", "coeff")
    def _(ctx, p, a, b):
        return coeff_mod.gf_mul(_as_int(p), _as_int(a), _as_int(b))

    @op("gfDiv", "coeff")
    def _(ctx, p, a, b):
        return coeff_mod.gf_div(_as_int(p), _as_int(a), _as_int(b))

    @op("gfInv", "coeff")
    def _(ctx, p, a):
        return coeff_mod.gf_inv(_as_int(p), _as_int(a))

    @op("gfPow", "coeff")
    def _(ctx, p, a, n):
        return coeff_mod.gf_pow(_as_int(p), _as_int(a), _as_int(n))

    @op("factorUnivariate", "coeff")
    def _(ctx, f):
        return coeff_mod.factor_univariate(_as_poly(ctx, f), seed=ctx.config.seed)

    @op("factorMultivariate", "coeff")
    def _(ctx, f):
        return coeff_mod.factor_multivariate(_as_poly(ctx, f),
                                             seed=ctx.config.seed)

    # polyring ----------------------------------------------------------
    @op("homogenize", "polyring")
    def _(ctx, I, name):
        if not isinstance(name, str):
            raise ScriptError("homogenize needs a fresh variable name string")
        from .polyring import homogenize_ideal
        return homogenize_ideal(_as_ideal(ctx, I), name)

    @op("applyRingMap", "polyring")
    def _(ctx, f, x):
        if not isinstance(f, RingMap):
            raise ScriptError("applyRingMap needs a ring map")
        return f(x)

    @op("randomPoly", "polyring")
    def _(ctx, degree, sub=0, homogeneous=False):
        ring = ctx.require_ring()
        from .polyring import random_poly
        if not isinstance(homogeneous, bool):
            raise ScriptError("randomPoly flag must be true or false")
        return random_poly(ring, _as_int(degree),
                           _sub_seed(ctx.config.seed, _as_int(sub)),
                           homogeneous=homogeneous)

    @op("ringmap", "polyring")
    def _(ctx, target, source, images):
        if not isinstance(target, RingDescriptor) or \
                not isinstance(source, RingDescriptor):
            raise ScriptError("ringmap(target, source, [images])")
        if not isinstance(images, list):
            raise ScriptError("ringmap images must be a list")
        from .polyring import transport
        imgs = []
        for i in images:
            f = i if isinstance(i, Polynomial) else _as_poly(ctx, i)
            # images are matched into the target ring by variable name
            imgs.append(transport(f, target) if f.ring != target else f)
        return RingMap(source, target, imgs)

    @op("ringOf", "polyring")
    def _(ctx, x):
        if isinstance(x, (Polynomial, Ideal, FreeModuleMap)):
            return x.ring
        if isinstance(x, BlowupChart):
            return x.ring
        if isinstance(x, RingDescriptor):
            return x
        raise ScriptError(f"no ring attached to {_kind_name(x)}")

    @op("transpose", "polyring")
    def _(ctx, A):
        return _as_matrix(A).transpose()

    # gb ------------------------------------------------------------------
    @op("groebnerBasis", "gb")
    def _(ctx, x):
        if isinstance(x, FreeModuleMap):
            return gb_mod.groebner_basis(x)
        return gb_mod.groebner_basis(_as_ideal(ctx, x))

    @op("normalForm", "gb")
    def _(ctx, f, I):
        return gb_mod.normal_form(_as_poly(ctx, f), _as_ideal(ctx, I))

    @op("eliminate", "gb")
    def _(ctx, I, *vars_):
        return gb_mod.eliminate(_as_ideal(ctx, I), _var_names(ctx, vars_))

    @op("kernelOfRingMap", "gb")
    def _(ctx, f):
        if not isinstance(f, RingMap):
            raise ScriptError("kernelOfRingMap needs a ring map")
        return gb_mod.kernel_of_ring_map(f)

    @op("colonIdeal", "gb")
    def _(ctx, I, by):
        by2 = by if isinstance(by, (Polynomial, Ideal)) else _as_poly(ctx, by)
        return gb_mod.colon(_as_ideal(ctx, I), by2)

    @op("saturate", "gb")
    def _(ctx, I, by):
        by2 = by if isinstance(by, (Polynomial, Ideal)) else _as_poly(ctx, by)
        out = gb_mod.saturate(_as_ideal(ctx, I), by2)
        if ctx.config.verify and isinstance(by2, Polynomial):
            alt = gb_mod.saturate(_as_ideal(ctx, I), by2,
                                  method="rabinowitsch")
            if alt != out:
                raise ScriptError("saturation cross-check failed")
        return out

    @op("intersectIdeals", "gb")
    def _(ctx, I, J):
        return gb_mod.intersect_ideals(_as_ideal(ctx, I), _as_ideal(ctx, J))

    @op("dimensionAndDegree", "gb")
    def _(ctx, I):
        return gb_mod.dimension_and_degree(_as_ideal(ctx, I))

    @op("dim", "gb")
    def _(ctx, I):
        return gb_mod.dimension_and_degree(_as_ideal(ctx, I))[0]

    @op("degree", "gb")
    def _(ctx, I):
        return gb_mod.dimension_and_degree(_as_ideal(ctx, I))[1]

    @op("codim", "gb")
    def _(ctx, I):
        return gb_mod.codimension(_as_ideal(ctx, I))

    @op("hilbertSeries", "gb")
    def _(ctx, I):
        return gb_mod.hilbert_series(_as_ideal(ctx, I))

    @op("kernelOfMatrix", "gb")
    def _(ctx, A):
        return gb_mod.kernel_of_matrix(_as_matrix(A))

    @op("minorsIdeal", "gb")
    def _(ctx, k, A):
        return gb_mod.minors_ideal(_as_int(k), _as_matrix(A))

    @op("trimHomogeneous", "gb")
    def _(ctx, I):
        return gb_mod.trim_homogeneous(_as_ideal(ctx, I))

    @op("gradedPieceDim", "gb")
    def _(ctx, d, I, grading="total"):
        return gb_mod.graded_piece_dim(_as_int(d), _as_ideal(ctx, I), grading)

    @op("radicalMembership", "gb")
    def _(ctx, f, I):
        return gb_mod.radical_membership(_as_poly(ctx, f), _as_ideal(ctx, I))

    # decompose -------------------------------------------------------------
    @op("minimalPrimes", "decompose")
    def _minimal_primes_op(ctx, I):
        return decompose_mod.minimal_primes(_as_ideal(ctx, I),
                                            seed=ctx.config.seed)

    R["decompose"] = ("decompose", _minimal_primes_op)

    # rees -------------------------------------------------------------------
    @op("universalEmbedding", "rees")
    def _(ctx, M):
        return rees_mod.universal_embedding(_as_module(ctx, M))

    @op("symmetricKernel", "rees")
    def _(ctx, A):
        return rees_mod.symmetric_kernel(_as_matrix(A))

    @op("symmetricAlgebraIdeal", "rees")
    def _(ctx, M):
        return rees_mod.symmetric_algebra_ideal(_as_module(ctx, M))

    @op("reesIdeal", "rees")
    def _(ctx, M, f=None):
        M2 = _as_module(ctx, M)
        if f is not None:
            return rees_mod.rees_ideal(M2, f=_as_poly(ctx, f))
        out = rees_mod.rees_ideal(M2)
        if ctx.config.verify and M2.is_ideal:
            nz = next((g for g in M2.gens if not g.is_zero()), None)
            if nz is not None and not M2.ring.quotient:
                alt = rees_mod.rees_ideal(M2, f=nz)
                if alt != out:
                    raise ScriptError("reesIdeal strategy cross-check failed")
        return out

    @op("isLinearType", "rees")
    def _(ctx, M):
        return rees_mod.is_linear_type(_as_module(ctx, M))

    @op("normalCone", "rees")
    def _normal_cone_op(ctx, I):
        return rees_mod.normal_cone(_as_ideal(ctx, I))

    R["associatedGradedRing"] = ("rees", _normal_cone_op)

    @op("reesAlgebra", "rees")
    def _(ctx, M):
        return rees_mod.rees_presentation(_as_module(ctx, M))

    @op("multiplicity", "rees")
    def _(ctx, I):
        return rees_mod.multiplicity(_as_ideal(ctx, I),
                                     cap=ctx.config.cap_multiplicity)

    @op("specialFiberIdeal", "rees")
    def _(ctx, I, mm=None):
        mm2 = _as_ideal(ctx, mm) if mm is not None else None
        return rees_mod.special_fiber_ideal(_as_ideal(ctx, I), mm2)

    @op("analyticSpread", "rees")
    def _(ctx, I):
        return rees_mod.analytic_spread(_as_ideal(ctx, I))

    @op("minimalReduction", "rees")
    def _(ctx, I, sub=0):
        return rees_mod.minimal_reduction(
            _as_ideal(ctx, I), seed=_sub_seed(ctx.config.seed, _as_int(sub)),
            cap=ctx.config.cap_reduction)

    @op("isReduction", "rees")
    def _(ctx, I, J, cap=None):
        cap2 = _as_int(cap) if cap is not None else ctx.config.cap_reduction
        return rees_mod.is_reduction(_as_ideal(ctx, I), _as_ideal(ctx, J),
                                     cap=cap2)

    @op("reductionNumber", "rees")
    def _(ctx, I, J):
        return rees_mod.reduction_number(_as_ideal(ctx, I), _as_ideal(ctx, J),
                                         cap=ctx.config.cap_reduction)

    @op("whichGm", "rees")
    def _(ctx, I):
        return rees_mod.which_gm(_as_ideal(ctx, I))

    @op("jacobianDual", "rees")
    def _(ctx, x, X=None, T=None):
        if isinstance(x, FreeModuleMap):
            if not isinstance(X, list) or not isinstance(T, list):
                raise ScriptError(
                    "jacobianDual(matrix, [X...], [T...]) needs both rows")
            return rees_mod.jacobian_dual(x, [_as_poly(ctx, e) for e in X],
                                          [_as_poly(ctx, e) for e in T])
        return rees_mod.jacobian_dual(_as_ideal(ctx, x))

    @op("expectedReesIdeal", "rees")
    def _(ctx, I):
        return rees_mod.expected_rees_ideal(_as_ideal(ctx, I))

    # intersection -------------------------------------------------------------
    @op("distinguished", "intersection")
    def _(ctx, f, I):
        if not isinstance(f, RingMap):
            raise ScriptError("distinguished needs a ring map and an ideal")
        return intersection_mod.distinguished(f, _as_ideal(ctx, I),
                                              seed=ctx.config.seed)

    @op("intersectInP", "intersection")
    def _(ctx, I, J):
        return intersection_mod.intersect_in_p(
            _as_ideal(ctx, I), _as_ideal(ctx, J), seed=ctx.config.seed)

    # blowup ---------------------------------------------------------------
    @op("blowupOf", "blowup")
    def _(ctx, center):
        return blowup_mod.blowup_of(_as_ideal(ctx, center))

    @op("totalTransform", "blowup")
    def _(ctx, chart, X):
        if not isinstance(chart, BlowupChart):
            raise ScriptError("totalTransform needs a blowup chart")
        return blowup_mod.total_transform(chart, _as_ideal(ctx, X))

    @op("strictTransform", "blowup")
    def _(ctx, chart, X):
        if not isinstance(chart, BlowupChart):
            raise ScriptError("strictTransform needs a blowup chart")
        return blowup_mod.strict_transform(chart, _as_ideal(ctx, X))

    @op("singularLocusIdeal", "blowup")
    def _(ctx, X, c=None):
        c2 = _as_int(c) if c is not None else None
        return blowup_mod.singular_locus_ideal(_as_ideal(ctx, X), c2)

    @op("isSmoothAwayFromIrrelevant", "blowup")
    def _(ctx, chart, X):
        if not isinstance(chart, BlowupChart):
            raise ScriptError("needs a blowup chart")
        return blowup_mod.is_smooth_away_from_irrelevant(
            chart, _as_ideal(ctx, X))

    @op("chartRing", "blowup")
    def _(ctx, chart):
        return chart.ring

    @op("chartProjection", "blowup")
    def _(ctx, chart):
        return chart.projection

    @op("chartIrrelevant", "blowup")
    def _(ctx, chart):
        return chart.irrelevant

    @op("chartExceptional", "blowup")
    def _(ctx, chart):
        return chart.exceptional

    # logic helpers -----------------------------------------------------------
    @op("eq", "cli")
    def _(ctx, a, b):
        return _values_equal(a, b)

    @op("neq", "cli")
    def _(ctx, a, b):
        return not _values_equal(a, b)

    @op("ge", "cli")
    def _(ctx, a, b):
        return a >= b

    @op("gt", "cli")
    def _(ctx, a, b):
        return a > b

    @op("le", "cli")
    def _(ctx, a, b):
        return a <= b

    @op("lt", "cli")
    def _(ctx, a, b):
        return a < b

    R["not"] = ("cli", lambda ctx, a: not a)

    @op("idealGens", "cli")
    def _(ctx, I):
        return list(_as_ideal(ctx, I).display_gens())

    return R


REGISTRY = _registry()


def _values_equal(a, b) -> bool:
    if isinstance(a, Ideal) and isinstance(b, Ideal):
        return a == b
    if isinstance(a, HilbertSeries) and isinstance(b, HilbertSeries):
        return a.equivalent(b)
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            return False
        return all(_values_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, WeightedComponent) and isinstance(b, WeightedComponent):
        return (a.multiplicity == b.multiplicity
                and _values_equal(a.prime, b.prime))
    if isinstance(a, ComponentReport) and isinstance(b, ComponentReport):
        return _values_equal(a.prime, b.prime)
    return a == b


class Context:
    def __init__(self, config: Config):
        self.config = config
        self.env = {}
        self.active_ring = None

    def require_ring(self) -> RingDescriptor:
        if self.active_ring is None:
            raise ScriptError("no ring declared yet")
        return self.active_ring


def _eval(node: Node, ctx: Context):
    k = node.kind
    try:
        if k == "int":
            return node.data["value"]
        if k == "string":
            return node.data["value"]
        if k == "ident":
            name = node.data["name"]
            if name in ("true", "false"):
                return name == "true"
            if name == "infinity":
                return math.inf
            if name in ctx.env:
                return ctx.env[name]
            ring = ctx.active_ring
            if ring is not None and name in ring._index:
                return ring.var(name)
            raise ScriptError(f"unknown identifier {name!r}",
                              node.line, node.col)
        if k == "call":
            name = node.data["name"]
            if name == "ideal":
                args = [_eval(a, ctx) for a in node.data["args"]]
                gens = []
                ring = None
                for a in args:
                    if isinstance(a, Ideal):
                        gens.extend(a.gens)
                        ring = a.ring
                    else:
                        f = a if isinstance(a, Polynomial) else None
                        if f is None:
                            f = ctx.require_ring().const(_as_int(a))
                        gens.append(f)
                        ring = f.ring
                if ring is None:
                    ring = ctx.require_ring()
                return Ideal(ring, tuple(gens))
            if name not in REGISTRY:
                raise ScriptError(f"unknown operation {name!r}",
                                  node.line, node.col)
            args = [_eval(a, ctx) for a in node.data["args"]]
            _, fn = REGISTRY[name]
            return fn(ctx, *args)
        if k == "list":
            return [_eval(a, ctx) for a in node.data["items"]]
        if k == "matrix":
            rows = [[_eval(e, ctx) for e in row] for row in node.data["rows"]]
            ring = None
            for row in rows:
                for v in row:
                    if isinstance(v, Polynomial):
                        ring = v.ring
            if ring is None:
                ring = ctx.require_ring()
            rows = [[v if isinstance(v, Polynomial) else ring.const(_as_int(v))
                     for v in row] for row in rows]
            return FreeModuleMap(ring, rows)
        if k == "neg":
            v = _eval(node.data["a"], ctx)
            if isinstance(v, (int, Polynomial)):
                return -v
            raise ScriptError(f"cannot negate {_kind_name(v)}",
                              node.line, node.col)
        if k == "pow":
            v = _eval(node.data["a"], ctx)
            n = node.data["n"]
            if isinstance(v, (int, Polynomial, Ideal)):
                return v ** n
            raise ScriptError(f"cannot raise {_kind_name(v)} to a power",
                              node.line, node.col)
        if k == "binop":
            a = _eval(node.data["a"], ctx)
            b = _eval(node.data["b"], ctx)
            op = node.data["op"]
            if isinstance(a, Ideal) or isinstance(b, Ideal):
                if op == "+":
                    return _as_ideal(ctx, a) + _as_ideal(ctx, b)
                if op == "*":
                    return _as_ideal(ctx, a) * _as_ideal(ctx, b)
                raise ScriptError(f"operation {op!r} undefined on ideals",
                                  node.line, node.col)
            if isinstance(a, Polynomial) or isinstance(b, Polynomial):
                if op == "+":
                    return a + b
                if op == "-":
                    return a - b
                if op == "*":
                    return a * b
            if isinstance(a, int) and isinstance(b, int):
                return {"+": a + b, "-": a - b, "*": a * b}[op]
            raise ScriptError(
                f"operation {op!r} undefined on {_kind_name(a)}, "
                f"{_kind_name(b)}", node.line, node.col)
        raise ScriptError(f"cannot evaluate node kind {k!r}",
                          node.line, node.col)
    except ScriptError:
        raise
    except Exception as exc:
        raise ScriptError(str(exc), node.line, node.col) from exc


def execute_script(script: Script, config: Config | None = None) -> ResultDocument:
    config = config or Config()
    ctx = Context(config)
    doc = ResultDocument()
    for idx, st in enumerate(script.statements):
        try:
            if st.kind == "ring":
                base = make_ring(st.data["p"], st.data["blocks"])
                ctx.active_ring = base
                quotient = st.data["quotient"]
                if quotient:
                    gens = []
                    for qn in quotient:
                        v = _eval(qn, ctx)
                        if isinstance(v, Ideal):
                            gens.extend(v.gens)
                        else:
                            gens.append(_as_poly(ctx, v))
                    base = make_ring(st.data["p"], st.data["blocks"],
                                     quotient=gens)
                    ctx.active_ring = base
                ctx.env[st.data["name"]] = base
            elif st.kind == "use":
                v = _eval(st.data["expr"], ctx)
                if isinstance(v, BlowupChart):
                    v = v.ring
                if not isinstance(v, RingDescriptor):
                    raise ScriptError("use needs a ring", st.line, st.col)
                ctx.active_ring = v
            elif st.kind == "bind":
                v = _eval(st.data["expr"], ctx)
                kw = st.data["kw"]
                if kw == "ideal":
                    v = _as_ideal(ctx, v)
                elif kw == "poly":
                    v = _as_poly(ctx, v)
                elif kw == "module":
                    v = _as_module(ctx, v)
                elif kw == "matrix":
                    v = _as_matrix(v)
                elif kw == "map":
                    if not isinstance(v, RingMap):
                        raise ScriptError("map binding needs a ring map",
                                          st.line, st.col)
                ctx.env[st.data["name"]] = v
            elif st.kind == "print":
                v = _eval(st.data["expr"], ctx)
                doc.entries.append(ResultEntry(idx, _value_kind(v),
                                               v, _value_flags(v)))
            elif st.kind == "assert2":
                a = _eval(st.data["a"], ctx)
                b = _eval(st.data["b"], ctx)
                equal = _values_equal(a, b)
                want = st.data["op"] == "assertEqual"
                if equal != want:
                    raise AssertionFailure(
                        f"{st.data['op']} failed at statement {idx}: "
                        f"{render_value(a)} vs {render_value(b)}")
            elif st.kind == "assert1":
                a = _eval(st.data["a"], ctx)
                if a is not True:
                    raise AssertionFailure(
                        f"assertTrue failed at statement {idx}: "
                        f"{render_value(a)}")
            elif st.kind == "expr":
                _eval(st.data["expr"], ctx)
        except AssertionFailure as exc:
            doc.status = 1
            doc.message = str(exc)
            return doc
        except ScriptError as exc:
            doc.status = 2
            doc.message = str(exc)
            return doc
        except Exception as exc:
            doc.status = 2
            doc.message = f"statement {idx}: {exc}"
            return doc
    return doc


# ---------------------------------------------------------------------------
# canonical rendering
# ---------------------------------------------------------------------------

def _value_kind(v):
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, float) and math.isinf(v):
        return "infinity"
    if isinstance(v, Polynomial):
        return "poly"
    if isinstance(v, Ideal):
        return "ideal"
    if isinstance(v, GroebnerBasis):
        return "gb"
    if isinstance(v, FreeModuleMap):
        return "matrix"
    if isinstance(v, RingDescriptor):
        return "ring"
    if isinstance(v, RingMap):
        return "ringmap"
    if isinstance(v, PresentedModule):
        return "module"
    if isinstance(v, BlowupChart):
        return "blowup"
    if isinstance(v, ReesAlgebraPresentation):
        return "rees"
    if isinstance(v, HilbertSeries):
        return "hilbertSeries"
    if isinstance(v, ReductionCertificate):
        return "reduction"
    if isinstance(v, tuple):
        return "tuple"
    if isinstance(v, list):
        if v and isinstance(v[0], WeightedComponent):
            return "components"
        if v and isinstance(v[0], ComponentReport):
            return "primes"
        return "list"
    if isinstance(v, WeightedComponent):
        return "component"
    if isinstance(v, ComponentReport):
        return "prime"
    return "value"


def _value_flags(v):
    flags = []
    if isinstance(v, list):
        for item in v:
            if isinstance(item, (WeightedComponent, ComponentReport)) \
                    and not item.certified:
                flags.append("unverified-component")
                break
    return tuple(flags)


def render_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float) and math.isinf(v):
        return "infinity"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Ideal):
        gens = v.display_gens()
        if not gens:
            return "ideal[ 0 ]"
        return "ideal[ " + ", ".join(str(g) for g in gens) + " ]"
    if isinstance(v, tuple) and not isinstance(v, (WeightedComponent,)):
        if v and isinstance(v[1], list):  # factorization (unit, factors)
            unit, factors = v
            parts = [str(unit)]
            for f, m in factors:
                parts.append(f"({f})" + (f"^{m}" if m > 1 else ""))
            return " * ".join(parts)
        return "(" + ", ".join(render_value(x) for x in v) + ")"
    if isinstance(v, list):
        if v and isinstance(v[0], WeightedComponent):
            body = ", ".join(
                f"({w.multiplicity}, {render_value(w.prime)})"
                + ("" if w.certified else " unverified") for w in v)
            return "{ " + body + " }"
        if v and isinstance(v[0], ComponentReport):
            body = ", ".join(
                render_value(c.prime)
                + (" certified" if c.certified else " unverified") for c in v)
            return "{ " + body + " }"
        return "[" + ", ".join(render_value(x) for x in v) + "]"
    return str(v)


def as_script_text(v) -> str:
    """Script-language expression reproducing the value (ideals, matrices,
    polynomials); parse(as_script_text(v)) evaluates back to v."""
    if isinstance(v, Polynomial):
        return str(v)
    if isinstance(v, Ideal):
        gens = v.display_gens()
        if not gens:
            return "ideal(0)"
        return "ideal(" + ", ".join(str(g) for g in gens) + ")"
    if isinstance(v, FreeModuleMap):
        body = ", ".join("[" + ", ".join(str(f) for f in row) + "]"
                         for row in v.entries)
        return f"matrix[{body}]"
    raise TypeError(f"no script form for {_kind_name(v)}")


def _json_value(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, float) and math.isinf(v):
        return "infinity"
    if isinstance(v, int):
        return v
    if isinstance(v, Ideal):
        return {"generators": [str(g) for g in v.display_gens()]}
    if isinstance(v, list):
        if v and isinstance(v[0], WeightedComponent):
            return [{"m": w.multiplicity,
                     "generators": [str(g) for g in w.prime.display_gens()],
                     "certified": w.certified} for w in v]
        if v and isinstance(v[0], ComponentReport):
            return [{"generators": [str(g) for g in c.prime.display_gens()],
                     "certified": c.certified} for c in v]
        return [_json_value(x) for x in v]
    if isinstance(v, tuple):
        if v and isinstance(v[1], list):
            unit, factors = v
            return {"unit": unit,
                    "factors": [{"factor": str(f), "multiplicity": m}
                                for f, m in factors]}
        return [_json_value(x) for x in v]
    return render_value(v)


def emit(doc: ResultDocument, mode="text") -> bytes:
    if mode == "json":
        payload = {
            "schema": 1,
            "status": doc.status,
            "results": [
                {"statement": e.statement, "kind": e.kind,
                 "value": _json_value(e.value), "flags": list(e.flags)}
                for e in doc.entries
            ],
        }
        if doc.message:
            payload["message"] = doc.message
        return (json.dumps(payload, sort_keys=True, indent=None,
                           separators=(",", ":")) + "\n").encode()
    lines = [render_value(e.value) for e in doc.entries]
    return ("\n".join(lines) + "\n" if lines else "").encode()


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_config(args) -> Config:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("REESKIT_SEED", "0"))
    return Config(seed=seed, cap_reduction=args.cap_reduction,
                  cap_multiplicity=args.cap_multiplicity,
                  json=args.json, verify=args.verify)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="reeskit",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=None,
                        help="random seed (default env REESKIT_SEED or 0)")
    parser.add_argument("--cap-reduction", type=int,
                        default=rees_mod.DEFAULT_REDUCTION_CAP)
    parser.add_argument("--cap-multiplicity", type=int,
                        default=rees_mod.DEFAULT_MULTIPLICITY_CAP)
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--verify", action="store_true",
                        help="enable cross-strategy oracles")
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="execute a script file")
    runp.add_argument("file")
    evalp = sub.add_parser("eval", help="evaluate one expression")
    evalp.add_argument("expr")
    args = parser.parse_args(argv)
    config = _build_config(args)
    if args.command == "run":
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        try:
            script = parse_script(text)
        except ScriptError as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return 2
        doc = execute_script(script, config)
        out = emit(doc, "json" if config.json else "text")
        sys.stdout.buffer.write(out)
        if doc.status and not config.json:
            print(doc.message, file=sys.stderr)
        return doc.status
    if args.command == "eval":
        text = f"print {args.expr};"
        try:
            script = parse_script(text)
        except ScriptError as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return 2
        doc = execute_script(script, config)
        sys.stdout.buffer.write(emit(doc, "json" if config.json else "text"))
        if doc.status:
            print(doc.message, file=sys.stderr)
        return doc.status
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
