import pytest

from jetflow import (ParseError, PseudoDiffOp, UnknownName, compose,
                     parse_model, print_model)
from jetflow.fixtures import FIXTURES, load_fixture


def test_parse_system_matches_handbuilt():
    model = parse_model("system gardner { rhs: 6*(u + eps*u^2)*u_x - u_xxx; }")
    ctx = model.context
    u, u1, u3, eps = ctx.u(0), ctx.u(1), ctx.u(3), ctx.eps
    assert model.systems["gardner"].rhs[0] == 6 * (u + eps * u ** 2) * u1 - u3


def test_parse_operator_matches_handbuilt():
    model = parse_model(
        "operator E { 4*u*Dx + 2*u_x + 3*eps*(u*u_x + u^2*Dx) - Dx^3 }")
    ctx = model.context
    u, u1, eps = ctx.u(0), ctx.u(1), ctx.eps
    Dx = PseudoDiffOp.dx(1)
    expected = (4 * u * Dx + (2 * u1 + 3 * eps * u * u1) * PseudoDiffOp.identity(1)
                + 3 * eps * u ** 2 * Dx - PseudoDiffOp.dx(1, 3))
    assert model.operators["E"] == expected


def test_nonlocal_operator_expression():
    model = parse_model("operator R { u*Dxi*u_x - Dx^2 }")
    op = model.operators["R"]
    assert len(op.nonlocal_terms) == 1
    ctx = model.context
    a, b = op.nonlocal_terms[0]
    assert a == ctx.u(0) and b == ctx.u(1)


def test_indexed_jets_and_density():
    model = parse_model("density H = u{5}*u + u_xxxx^2/2;")
    ctx = model.context
    assert model.densities["H"].density == ctx.u(5) * ctx.u(0) + ctx.u(4) ** 2 / 2


def test_unknown_name_has_position():
    with pytest.raises(UnknownName) as err:
        parse_model("char bad = u_y;")
    assert err.value.name == "u_y"
    assert err.value.line == 1
    assert err.value.column == 12


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as err:
        parse_model("system s { rhs: u_x }")  # missing semicolon
    assert err.value.line == 1
    assert ";" in err.value.expected


def test_parse_error_cases():
    cases = [
        "char a = u +;",                     # dangling operator
        "char a = 2 ^ u;",                   # non-integer exponent
        "char a = u / u;",                   # division by a non-constant
        "char a = u / 0;",                   # division by zero
        "char a = (u;",                      # unbalanced parenthesis
        "density d = Dx;",                   # operator where a poly is needed
        "system s { rhs: u_x; } char s = u;",  # duplicate name
        "char u = u;",                       # reserved name
        "set speed = 3;",                    # unknown setting
        "char a = u; set eps_order = 2;",    # setting after declarations
        "char a = u{};",                     # malformed jet index
        "char a = 3 $ 4;",                   # stray character
    ]
    for source in cases:
        with pytest.raises(ParseError):
            parse_model(source)


def test_eps_order_setting_controls_ring():
    model = parse_model("set eps_order = 2;\nchar c = eps^2;")
    assert model.eps_order == 2
    assert not model.characteristics["c"].is_zero()
    truncated = parse_model("char c = eps^2;")
    assert truncated.characteristics["c"].is_zero()


def test_operator_composition_in_dsl_matches_api():
    model = parse_model(
        "operator E { 4*u*Dx + 2*u_x - Dx^3 }\n"
        "operator R { E*Dxi }\n")
    assert model.operators["R"] == compose(model.operators["E"],
                                           PseudoDiffOp.dxi(1))


def test_name_references_between_categories():
    model = parse_model(
        "system s { rhs: u_xx; }\n"
        "char doubled = 2*s;\n"
        "density d = u^2/2;\n"
        "char from_density = d + u;\n")
    ctx = model.context
    assert model.characteristics["doubled"] == 2 * ctx.u(2)
    assert model.characteristics["from_density"] == ctx.u(0) ** 2 / 2 + ctx.u(0)


def test_comments_and_whitespace():
    model = parse_model("# leading comment\nchar a = u; # trailing\n\n")
    assert "a" in model.characteristics


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_round_trip(name):
    model = load_fixture(name)
    text = print_model(model)
    reparsed = parse_model(text)
    assert reparsed == model
    assert print_model(reparsed) == text  # canonical form is a fixed point


def test_print_deterministic():
    model = load_fixture("gardner")
    assert print_model(model) == print_model(load_fixture("gardner"))
