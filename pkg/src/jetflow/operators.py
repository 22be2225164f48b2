"""Scalar pseudo-differential operators a*Dx^j plus two-sided a*Dx^-1*b terms.

The representable class is a finite sum of local terms (coefficient times a
non-negative power of the total derivative) and nonlocal terms of the fixed
shape a*Dx^-1*b.  It is closed under addition, adjoints, and composition with
local operators; compositions that would need Dx^-1 on both sides fail with
ClosureError instead of approximating.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Mapping, Sequence, Tuple

from .errors import ClosureError, NotVariational, OrderMismatch, Unsupported
from .jets import (DiffPoly, EvolutionSystem, Functional, Monomial,
                   diff_partial, dt_total, dx_total, dx_total_n, integrate_x)
from .ring import EpsPoly


def _normalize_nonlocal(pairs, eps_order):
    """Prune zero terms, scale each b to a canonical rational multiple,
    and merge terms that share the same b."""
    merged: dict = {}
    order: list = []
    for a, b in pairs:
        if a.is_zero() or b.is_zero():
            continue
        lead_mon = min(b.terms)
        r = b.terms[lead_mon].lowest_coefficient()
        if r != 1:
            b = b / r
            a = a * r
        key = tuple(sorted((m, c.coeffs) for m, c in b.terms.items()))
        if key in merged:
            prev_a, _ = merged[key]
            merged[key] = (prev_a + a, b)
        else:
            merged[key] = (a, b)
            order.append(key)
    out = []
    for key in sorted(order):
        a, b = merged[key]
        if not a.is_zero():
            out.append((a, b))
    return tuple(out)


class PseudoDiffOp:
    """An operator sum(a_j * Dx^j) + sum(a * Dx^-1 * b), scalar in u."""

    __slots__ = ("local_terms", "nonlocal_terms", "eps_order")

    def __init__(self, local: Mapping[int, DiffPoly] = (),
                 nonlocal_terms: Sequence[Tuple[DiffPoly, DiffPoly]] = (),
                 eps_order: int = None):
        local = dict(local)
        coeffs = list(local.values()) + [p for pair in nonlocal_terms for p in pair]
        if eps_order is None:
            if not coeffs:
                raise ValueError("cannot infer the eps order of an empty operator")
            eps_order = coeffs[0].eps_order
        for c in coeffs:
            if c.eps_order != eps_order:
                raise OrderMismatch("operator coefficients must share the eps order")
            if c.num_components != 1 or any(v[0] != 0 for v in c.jet_vars()):
                raise Unsupported("operators are scalar: single-component coefficients only")
        clean = {j: c for j, c in local.items() if not c.is_zero()}
        if any(j < 0 for j in clean):
            raise ValueError("local exponents must be non-negative; use Dxi for Dx^-1")
        object.__setattr__(self, "local_terms", clean)
        object.__setattr__(self, "nonlocal_terms",
                           _normalize_nonlocal(nonlocal_terms, eps_order))
        object.__setattr__(self, "eps_order", eps_order)

    def __setattr__(self, name, value):
        raise AttributeError("PseudoDiffOp is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, eps_order: int) -> "PseudoDiffOp":
        return cls({}, (), eps_order)

    @classmethod
    def from_poly(cls, c: DiffPoly) -> "PseudoDiffOp":
        """Multiplication operator f -> c*f."""
        return cls({0: c}, (), c.eps_order)

    @classmethod
    def dx(cls, eps_order: int, power: int = 1) -> "PseudoDiffOp":
        one = DiffPoly.constant(1, eps_order)
        return cls({power: one}, (), eps_order)

    @classmethod
    def dxi(cls, eps_order: int) -> "PseudoDiffOp":
        one = DiffPoly.constant(1, eps_order)
        return cls({}, ((one, one),), eps_order)

    @classmethod
    def identity(cls, eps_order: int) -> "PseudoDiffOp":
        return cls.dx(eps_order, 0)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.local_terms and not self.nonlocal_terms

    def is_local(self) -> bool:
        return not self.nonlocal_terms

    def max_local_order(self) -> int:
        return max(self.local_terms, default=-1)

    def __eq__(self, other):
        if not isinstance(other, PseudoDiffOp):
            return NotImplemented
        return (self.eps_order == other.eps_order
                and self.local_terms == other.local_terms
                and self.nonlocal_terms == other.nonlocal_terms)

    def __repr__(self):
        from .printing import format_operator

        return f"PseudoDiffOp({format_operator(self)!r}, p={self.eps_order})"

    # -- linear structure ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, DiffPoly):
            other = PseudoDiffOp.from_poly(other)
        if not isinstance(other, PseudoDiffOp):
            return NotImplemented
        if self.eps_order != other.eps_order:
            raise OrderMismatch("mixed truncation orders")
        local = dict(self.local_terms)
        for j, c in other.local_terms.items():
            local[j] = local[j] + c if j in local else c
        return PseudoDiffOp(local, self.nonlocal_terms + other.nonlocal_terms,
                            self.eps_order)

    __radd__ = __add__

    def __neg__(self):
        return PseudoDiffOp({j: -c for j, c in self.local_terms.items()},
                            tuple((-a, b) for a, b in self.nonlocal_terms),
                            self.eps_order)

    def __sub__(self, other):
        if isinstance(other, DiffPoly):
            other = PseudoDiffOp.from_poly(other)
        if not isinstance(other, PseudoDiffOp):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if isinstance(other, DiffPoly):
            return PseudoDiffOp.from_poly(other) + (-self)
        return NotImplemented

    def scale(self, factor) -> "PseudoDiffOp":
        """Multiply by a constant of the ring (rational or EpsPoly).

        Constants commute with Dx^-1, so this is safe for nonlocal terms.
        """
        if isinstance(factor, (int, Fraction)):
            factor = EpsPoly.from_rational(factor, self.eps_order)
        return PseudoDiffOp({j: c * factor for j, c in self.local_terms.items()},
                            tuple((a * factor, b) for a, b in self.nonlocal_terms),
                            self.eps_order)

    def __mul__(self, other):
        """Operator composition (with promotion of polynomials on the right)."""
        if isinstance(other, DiffPoly):
            other = PseudoDiffOp.from_poly(other)
        if isinstance(other, PseudoDiffOp):
            return compose(self, other)
        if isinstance(other, (int, Fraction, EpsPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, DiffPoly):
            return compose(PseudoDiffOp.from_poly(other), self)
        if isinstance(other, (int, Fraction, EpsPoly)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("operator powers must be non-negative integers")
        result = PseudoDiffOp.identity(self.eps_order)
        for _ in range(n):
            result = compose(result, self)
        return result


# ---------------------------------------------------------------------------
# Action on differential functions


def apply_op(A: PseudoDiffOp, Q: DiffPoly) -> DiffPoly:
    """Apply the operator to a differential function.

    Nonlocal terms need b*Q to be an exact x-derivative; otherwise NotExact
    is raised with the Euler obstruction.
    """
    if A.eps_order != Q.eps_order:
        raise OrderMismatch("operator and argument have different eps orders")
    out = DiffPoly.zero(Q.eps_order, Q.num_components)
    for j, c in A.local_terms.items():
        out = out + c * dx_total_n(Q, j)
    for a, b in A.nonlocal_terms:
        out = out + a * integrate_x(b * Q)
    return out


# ---------------------------------------------------------------------------
# Composition


def _compose_local_local(j: int, a: DiffPoly, k: int, b: DiffPoly) -> Dict[int, DiffPoly]:
    """(a Dx^j) o (b Dx^k) by the Leibniz rule."""
    out: Dict[int, DiffPoly] = {}
    db = b
    for m in range(j + 1):
        coeff = a * db if m == 0 else a * db * Fraction(comb(j, m))
        exp = j - m + k
        out[exp] = out.get(exp, DiffPoly.zero(a.eps_order)) + coeff
        db = dx_total(db)
    return out


def _compose_local_nonlocal(j: int, c: DiffPoly, a: DiffPoly, b: DiffPoly):
    """(c Dx^j) o (a Dx^-1 b) -> (local dict, nonlocal list).

    Uses Dx o (a Dx^-1 b) = a_x Dx^-1 b + a*b, peeling one Dx at a time.
    """
    local: Dict[int, DiffPoly] = {}
    nonlocal_terms = []
    zero = DiffPoly.zero(c.eps_order)
    while j > 0:
        j -= 1
        prod = _compose_local_local(j, c, 0, a * b)
        for exp, coeff in prod.items():
            local[exp] = local.get(exp, zero) + coeff
        a = dx_total(a)
    nonlocal_terms.append((c * a, b))
    return local, nonlocal_terms


def _compose_nonlocal_local(a: DiffPoly, b: DiffPoly, j: int, c: DiffPoly):
    """(a Dx^-1 b) o (c Dx^j) -> (local dict, nonlocal list).

    Uses Dx^-1 o (g Dx) = g - Dx^-1 o g_x to lower the right exponent.
    """
    local: Dict[int, DiffPoly] = {}
    nonlocal_terms = []
    zero = DiffPoly.zero(a.eps_order)
    g = b * c
    while j > 0:
        j -= 1
        local[j] = local.get(j, zero) + a * g
        g = -dx_total(g)
    nonlocal_terms.append((a, g))
    return local, nonlocal_terms


def compose(A: PseudoDiffOp, B: PseudoDiffOp) -> PseudoDiffOp:
    """Operator composition A o B inside the representable class."""
    if A.eps_order != B.eps_order:
        raise OrderMismatch("mixed truncation orders")
    p = A.eps_order
    local: Dict[int, DiffPoly] = {}
    nonlocal_terms: list = []

    def add_local(parts: Mapping[int, DiffPoly]):
        for exp, coeff in parts.items():
            local[exp] = local.get(exp, DiffPoly.zero(p)) + coeff

    for j, a in A.local_terms.items():
        for k, b in B.local_terms.items():
            add_local(_compose_local_local(j, a, k, b))
        for (c, d) in B.nonlocal_terms:
            loc, nl = _compose_local_nonlocal(j, a, c, d)
            add_local(loc)
            nonlocal_terms.extend(nl)
    for (a, b) in A.nonlocal_terms:
        for k, c in B.local_terms.items():
            loc, nl = _compose_nonlocal_local(a, b, k, c)
            add_local(loc)
            nonlocal_terms.extend(nl)
        if B.nonlocal_terms:
            from .printing import format_operator

            raise ClosureError(
                "composition of two nonlocal operators leaves the class: "
                f"({format_operator(A)}) o ({format_operator(B)})"
            )
    return PseudoDiffOp(local, nonlocal_terms, p)


def adjoint(A: PseudoDiffOp) -> PseudoDiffOp:
    """Formal adjoint: (a Dx^j)* = (-Dx)^j o a, (a Dx^-1 b)* = -b Dx^-1 a."""
    p = A.eps_order
    local: Dict[int, DiffPoly] = {}
    for j, a in A.local_terms.items():
        # (-1)^j Dx^j o a expanded to coefficient-first normal form
        sign = Fraction(-1) ** j
        da = a
        for m in range(j + 1):
            coeff = da * (sign * comb(j, m))
            exp = j - m
            local[exp] = local.get(exp, DiffPoly.zero(p)) + coeff
            da = dx_total(da)
    nonlocal_terms = tuple((-b, a) for a, b in A.nonlocal_terms)
    return PseudoDiffOp(local, nonlocal_terms, p)


def commutator(A: PseudoDiffOp, B: PseudoDiffOp) -> PseudoDiffOp:
    """[A, B] = A o B - B o A; propagates ClosureError."""
    return compose(A, B) - compose(B, A)


def op_time_derivative(A: PseudoDiffOp, sys: EvolutionSystem) -> PseudoDiffOp:
    """Differentiate the operator's coefficients along the flow of the system."""
    local = {j: dt_total(c, sys) for j, c in A.local_terms.items()}
    nonlocal_terms = []
    for a, b in A.nonlocal_terms:
        nonlocal_terms.append((dt_total(a, sys), b))
        nonlocal_terms.append((a, dt_total(b, sys)))
    return PseudoDiffOp(local, nonlocal_terms, A.eps_order)


# ---------------------------------------------------------------------------
# Frechet derivative and the variational side


def frechet(P: DiffPoly) -> PseudoDiffOp:
    """The linearization sum_k (dP/du_k) Dx^k as a local operator."""
    if P.num_components != 1 or any(v[0] != 0 for v in P.jet_vars()):
        raise Unsupported("frechet operators are implemented for scalar u only")
    local = {}
    for var in P.jet_vars():
        _, k = var
        c = diff_partial(P, var)
        local[k] = local.get(k, DiffPoly.zero(P.eps_order)) + c
    return PseudoDiffOp(local, (), P.eps_order)


def helmholtz_selfadjoint(g: DiffPoly) -> bool:
    """True when the linearization of g is self-adjoint (g is variational)."""
    D = frechet(g)
    return adjoint(D) == D


def reconstruct_density(g: DiffPoly) -> Functional:
    """Invert the variational derivative with the homotopy formula.

    For a variational g the density int_0^1 u*g[lambda*u] d(lambda) collapses
    termwise to u*m/(jet degree of m + 1); its Euler derivative is g again.
    """
    if not helmholtz_selfadjoint(g):
        obstruction = frechet(g) - adjoint(frechet(g))
        raise NotVariational("linearization is not self-adjoint", obstruction)
    u = DiffPoly.monomial(Monomial(0, 0, (((0, 0), 1),)),
                          EpsPoly.one(g.eps_order), g.eps_order,
                          g.num_components)
    density = DiffPoly.zero(g.eps_order, g.num_components)
    for mon, coeff in g.terms.items():
        share = Fraction(1, mon.jet_degree() + 1)
        piece = DiffPoly.monomial(mon, coeff.scale(share), g.eps_order,
                                  g.num_components)
        density = density + u * piece
    return Functional(density)
