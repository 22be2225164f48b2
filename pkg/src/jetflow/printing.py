"""Canonical text and LaTeX rendering of ring elements, polynomials, operators.

The ASCII forms are exactly the model-file syntax, so printing a value and
parsing it back yields the same value.  Term order is deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .jets import DiffPoly, Monomial
from .ring import EpsPoly


def _jet_name(var, ascii_style=True):
    comp, order = var
    if comp == 0:
        if order == 0:
            return "u"
        if not ascii_style:
            return "u_x" if order == 1 else "u_{" + "x" * order + "}"
        return "u_" + "x" * order if order <= 4 else f"u{{{order}}}"
    # multi-component values never reach the DSL; label them unambiguously
    base = f"u[{comp}]"
    return base if order == 0 else f"{base}_{order}"


def _frac_str(r: Fraction, latex=False) -> str:
    if latex and r.denominator != 1:
        sign = "-" if r < 0 else ""
        return f"{sign}\\frac{{{abs(r.numerator)}}}{{{r.denominator}}}"
    return str(r)


def format_eps_poly(c: EpsPoly, latex=False) -> str:
    """Render an eps polynomial, e.g. '8 + 22*eps' or '3/2'."""
    eps = "\\varepsilon" if latex else "eps"
    parts = []
    for i, a in enumerate(c.coeffs):
        if a == 0:
            continue
        if i == 0:
            core = _frac_str(a, latex)
        else:
            power = eps if i == 1 else (f"{eps}^{{{i}}}" if latex else f"{eps}^{i}")
            if abs(a) == 1:
                core = power if a > 0 else f"-{power}"
            else:
                mul = "" if latex else "*"
                core = f"{_frac_str(a, latex)}{mul}{power}"
        parts.append(core)
    if not parts:
        return "0"
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out


def _monomial_factors(mon: Monomial, latex=False):
    factors = []
    caret = (lambda n: f"^{{{n}}}") if latex else (lambda n: f"^{n}")
    if mon.x:
        factors.append("x" + (caret(mon.x) if mon.x > 1 else ""))
    if mon.t:
        factors.append("t" + (caret(mon.t) if mon.t > 1 else ""))
    for var, e in mon.jets:
        name = _jet_name(var, ascii_style=not latex)
        factors.append(name + (caret(e) if e > 1 else ""))
    return factors


def _single_degree(c: EpsPoly):
    """(degree, value) when exactly one eps coefficient is nonzero, else None."""
    found = None
    for i, a in enumerate(c.coeffs):
        if a != 0:
            if found is not None:
                return None
            found = (i, a)
    return found


def _term_str(mon: Monomial, coeff: EpsPoly, latex=False):
    """Render one term as (negated, text-without-sign)."""
    mul = "" if latex else "*"
    factors = _monomial_factors(mon, latex)
    single = _single_degree(coeff)
    if single is None:
        inner = format_eps_poly(coeff, latex)
        core = f"({inner})"
        if factors:
            core += mul + mul.join(factors) if latex else "*" + "*".join(factors)
        return False, core
    deg, val = single
    neg = val < 0
    val = abs(val)
    eps = "\\varepsilon" if latex else "eps"
    pieces = []
    if val != 1 or (deg == 0 and not factors):
        pieces.append(_frac_str(val, latex))
    if deg == 1:
        pieces.append(eps)
    elif deg > 1:
        pieces.append(f"{eps}^{{{deg}}}" if latex else f"{eps}^{deg}")
    pieces.extend(factors)
    if not pieces:
        pieces.append("1")
    return neg, ("" if latex else "*").join(pieces)


def format_poly(P: DiffPoly, latex=False) -> str:
    """Canonical rendering of a differential polynomial."""
    if P.is_zero():
        return "0"
    # factor a common pure eps^k out front when every term carries it
    degrees = set()
    for coeff in P.terms.values():
        single = _single_degree(coeff)
        degrees.add(single[0] if single else -1)
    prefix = ""
    if len(P.terms) > 1 and len(degrees) == 1 and degrees != {-1} and degrees != {0}:
        k = degrees.pop()
        eps = "\\varepsilon" if latex else "eps"
        power = eps if k == 1 else (f"{eps}^{{{k}}}" if latex else f"{eps}^{k}")
        prefix = power + ("(" if latex else "*(")
        stripped = {}
        for mon, coeff in P.terms.items():
            _, val = _single_degree(coeff)
            stripped[mon] = EpsPoly.from_rational(val, P.eps_order)
        P = DiffPoly(stripped, P.eps_order, P.num_components)
    out = []
    for mon in sorted(P.terms):
        neg, text = _term_str(mon, P.terms[mon], latex)
        if not out:
            out.append(("-" if neg else "") + text)
        else:
            out.append(("- " if neg else "+ ") + text)
    body = " ".join(out)
    if prefix:
        return prefix + body + ")"
    return body


def _coeff_factor(P: DiffPoly, latex=False):
    """A polynomial as a multiplicative factor: (negated, text)."""
    if len(P.terms) == 1:
        ((mon, coeff),) = P.terms.items()
        if _single_degree(coeff) is not None:
            return _term_str(mon, coeff, latex)
    return False, f"({format_poly(P, latex)})"


def format_operator(A, latex=False) -> str:
    """Canonical rendering of a pseudo-differential operator."""
    mul = "" if latex else "*"
    dx = "D_x" if latex else "Dx"
    dxi = "D_x^{-1}" if latex else "Dxi"
    parts = []
    for j in sorted(A.local_terms):
        coeff = A.local_terms[j]
        if j == 0:
            text = format_poly(coeff, latex)
            parts.append((text.startswith("-"), text.lstrip("-")))
            continue
        op = dx if j == 1 else (f"{dx}^{{{j}}}" if latex else f"{dx}^{j}")
        if coeff == DiffPoly.constant(1, coeff.eps_order, coeff.num_components):
            parts.append((False, op))
        elif coeff == DiffPoly.constant(-1, coeff.eps_order, coeff.num_components):
            parts.append((True, op))
        else:
            neg, text = _coeff_factor(coeff, latex)
            parts.append((neg, text + mul + op))
    for a, b in A.nonlocal_terms:
        one = DiffPoly.constant(1, a.eps_order, a.num_components)
        neg = False
        text = dxi
        if a != one:
            neg, left = _coeff_factor(a, latex)
            text = left + mul + text
        if b != one:
            bneg, right = _coeff_factor(b, latex)
            if bneg:
                right = f"(-{right})"
            text = text + mul + right
        parts.append((neg, text))
    if not parts:
        return "0"
    neg, text = parts[0]
    out = ("-" if neg else "") + text
    for neg, text in parts[1:]:
        out += (" - " if neg else " + ") + text
    return out


def format_value(v, latex=False) -> str:
    from .operators import PseudoDiffOp

    if isinstance(v, DiffPoly):
        return format_poly(v, latex)
    if isinstance(v, PseudoDiffOp):
        return format_operator(v, latex)
    if isinstance(v, EpsPoly):
        return format_eps_poly(v, latex)
    return str(v)
