from fractions import Fraction

import pytest
from hypothesis import strategies as st

from jetflow import (Context, DiffPoly, EpsPoly, Monomial, PseudoDiffOp,
                     adjoint, load_fixture)

P = 1  # truncation order used throughout the suite


@pytest.fixture(scope="session")
def ctx():
    return Context(eps_order=P)


@pytest.fixture(scope="session")
def gardner():
    return load_fixture("gardner")


@pytest.fixture(scope="session")
def burgers():
    return load_fixture("potential_burgers")


@pytest.fixture(scope="session")
def gardner_sys(gardner):
    return gardner.systems["gardner"]


@pytest.fixture(scope="session")
def burgers_sys(burgers):
    return burgers.systems["potential_burgers"]


# ---------------------------------------------------------------------------
# hypothesis strategies

rationals = st.fractions(min_value=Fraction(-4), max_value=Fraction(4),
                         max_denominator=3)


def eps_polys(order=P, nonzero=False):
    base = st.lists(rationals, min_size=order + 1, max_size=order + 1)
    strat = base.map(lambda cs: EpsPoly(cs, order=order))
    if nonzero:
        strat = strat.filter(lambda e: not e.is_zero())
    return strat


@st.composite
def monomials(draw, max_jet_order=4, max_degree=3, with_xt=True):
    degree_budget = draw(st.integers(0, max_degree))
    x = t = 0
    if with_xt:
        x = draw(st.integers(0, min(1, degree_budget)))
        degree_budget -= x
        t = draw(st.integers(0, min(1, degree_budget)))
        degree_budget -= t
    jets = {}
    while degree_budget > 0:
        stop = draw(st.booleans())
        if stop:
            break
        k = draw(st.integers(0, max_jet_order))
        jets[(0, k)] = jets.get((0, k), 0) + 1
        degree_budget -= 1
    return Monomial(x, t, tuple(sorted(jets.items())))


@st.composite
def diff_polys(draw, max_terms=3, max_jet_order=4, max_degree=3,
               with_xt=True, order=P):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        mon = draw(monomials(max_jet_order=max_jet_order,
                             max_degree=max_degree, with_xt=with_xt))
        terms[mon] = draw(eps_polys(order=order))
    return DiffPoly(terms, order)


@st.composite
def local_ops(draw, max_order=3, coeff_terms=2, coeff_degree=2,
              coeff_jet_order=2, order=P):
    terms = {}
    for j in range(max_order + 1):
        include = draw(st.booleans())
        if include:
            terms[j] = draw(diff_polys(max_terms=coeff_terms,
                                       max_jet_order=coeff_jet_order,
                                       max_degree=coeff_degree,
                                       with_xt=False, order=order))
    return PseudoDiffOp(terms, (), order)


@st.composite
def nonlocal_ops(draw, order=P):
    base = draw(local_ops(max_order=2, order=order))
    pairs = []
    if draw(st.booleans()):
        a = draw(diff_polys(max_terms=2, max_jet_order=2, max_degree=2,
                            with_xt=False, order=order))
        b = draw(diff_polys(max_terms=2, max_jet_order=2, max_degree=2,
                            with_xt=False, order=order))
        pairs.append((a, b))
    return PseudoDiffOp(base.local_terms, pairs, order)


def skew_ops(order=P):
    return local_ops(max_order=2, order=order).map(lambda A: A - adjoint(A))
