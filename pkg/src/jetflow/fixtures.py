"""Built-in models: the Gardner equation and the potential Burgers equation,
with their named characteristics, densities and structure operators.

Both ship as model-file source so the fixture path exercises the parser.
"""

from __future__ import annotations

from .dsl import ModelIR, parse_model

GARDNER_SOURCE = """\
# Gardner equation u_t = 6(u + eps*u^2)u_x - u_xxx and its structures
set eps_order = 1;

system gardner { rhs: 6*(u + eps*u^2)*u_x - u_xxx; }

operator D { Dx }
operator E { 4*u*Dx + 2*u_x + 3*eps*(u*u_x + u^2*Dx) - Dx^3 }
# recursion operator E * Dx^-1
operator R { 4*u + 3*eps*u^2 + (2 + 3*eps*u)*u_x*Dxi - Dx^2 }

char Q1 = u_x;
char Q2 = 6*(u + eps*u^2)*u_x - u_xxx;
char Q3 = 6*t*u_x + 1 - 2*eps*u;
char Q4 = eps*u_x;
char Q5 = eps*(6*u*u_x - u_xxx);
char Q6 = eps*(6*t*u_x + 1);
char Q7 = eps*(2*u + x*u_x + 3*t*(6*u*u_x - u_xxx));
# Hamiltonian symmetry generated by P5 through E
char Qbar5 = eps*(u{5} - 10*u*u_xxx - 20*u_x*u_xx + 30*u^2*u_x);
char Kbar1 = eps*(6*u*u_x - u_xxx);

density M = u;
density H0 = u^2/2;
density H1 = u^3 + eps/2*u^4 + u_x^2/2;
density P1 = u^2/2;
density P2 = u^3 + eps/2*u^4 + u_x^2/2;
density P4 = eps/2*u^2;
density P5 = eps*(u^3 + u_x^2/2);
density P6 = eps*(3*t*u^2 + x*u);
density Pt2 = u^2/2;
density Pt4 = eps/2*u;
density Pt5 = eps/2*u^2;
density Pt7 = eps/2*(3*t*u^2 + x*u);
density Pbar5 = eps/2*(u_xx^2 - 5*u^2*u_xx + 5*u^4);
density Hbar2 = eps/2*(u_xx^2 - 5*u^2*u_xx + 5*u^4);
density Hbar3 = 7*eps*(u_xxx^2/14 + u*u_xx^2 + 5*u^2*u_x^2 + u^5);
"""

POTENTIAL_BURGERS_SOURCE = """\
# potential Burgers equation u_t = u_xx + eps*u_x^2
set eps_order = 1;

system potential_burgers { rhs: u_xx + eps*u_x^2; }

operator R1 { Dx + eps*u_x }
operator R2 { t*R1 + x/2 }

char Q1 = u_x;
char Q2 = u_xx + eps*u_x^2;
char Q3 = x*u_x + 2*t*(u_xx + eps*u_x^2);
char Q4 = x*u + 2*t*u_x - eps*x*u^2/2;
char Q5 = u - eps*u^2/2;
char Q6 = (x^2 + 2*t)*(u - eps*u^2/2) + 4*x*t*u_x + 4*t^2*(u_xx + eps*u_x^2);
char Q7 = eps*u_x;
char Q8 = eps*u_xx;
char Q9 = eps*(x*u_x + 2*t*u_xx);
char Q10 = eps*(x*u + 2*t*u_x);
char Q11 = eps*u;
char Q12 = eps*((x^2 + 2*t)*u + 4*x*t*u_x + 4*t^2*u_xx);
"""

FIXTURES = {
    "gardner": GARDNER_SOURCE,
    "potential_burgers": POTENTIAL_BURGERS_SOURCE,
}


def fixture_names():
    return sorted(FIXTURES)


def load_fixture(name: str) -> ModelIR:
    if name not in FIXTURES:
        raise KeyError(f"no built-in model named {name!r}; "
                       f"available: {', '.join(fixture_names())}")
    return parse_model(FIXTURES[name])
