"""Model-file language: systems, operators, characteristics, densities.

A model file is a sequence of declarations::

    set eps_order = 1;
    system gardner { rhs: 6*(u + eps*u^2)*u_x - u_xxx; }
    operator E { 4*u*Dx + 2*u_x + 3*eps*(u*u_x + u^2*Dx) - Dx^3 }
    char Q3 = 6*t*u_x + 1 - 2*eps*u;
    density H0 = u^2/2;

Expressions know rationals, ``x``, ``t``, ``eps``, the dependent variable
``u`` with derivatives ``u_x``/``u_xx``/... or ``u{k}``, the operator atoms
``Dx`` (with ``Dx^k``) and ``Dxi`` (for Dx^-1), ``+ - * / ^`` and
parentheses.  ``*`` between operators is composition; a plain function used
in operator position acts by multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from .engine import DEFAULT_MAX_JET_ORDER
from .errors import JetflowError, ParseError, UnknownName
from .jets import Context, DiffPoly, EvolutionSystem, Functional
from .operators import PseudoDiffOp
from .printing import format_operator, format_poly

KEYWORDS = {"set", "system", "operator", "char", "density", "rhs"}
RESERVED = {"x", "t", "eps", "u", "Dx", "Dxi"} | KEYWORDS

Value = Union[DiffPoly, PseudoDiffOp]


@dataclass(frozen=True)
class Token:
    kind: str  # INT IDENT JET PUNCT EOF
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
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
            tokens.append(Token("INT", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            col += j - i
            i = j
            # u{k}: an indexed jet variable, consumed as one token
            if word == "u" and i < n and text[i] == "{":
                j = i + 1
                while j < n and text[j].isdigit():
                    j += 1
                if j == i + 1 or j >= n or text[j] != "}":
                    raise ParseError("malformed jet index after 'u{'", line, start_col)
                tokens.append(Token("JET", text[i + 1:j], line, start_col))
                col += j + 1 - i
                i = j + 1
                continue
            tokens.append(Token("IDENT", word, line, start_col))
            continue
        if ch in "{}()=;:+-*/^":
            tokens.append(Token("PUNCT", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


@dataclass
class ModelIR:
    """Parsed model: named values plus session settings."""

    eps_order: int = 1
    max_jet_order: int = DEFAULT_MAX_JET_ORDER
    systems: Dict[str, EvolutionSystem] = field(default_factory=dict)
    operators: Dict[str, PseudoDiffOp] = field(default_factory=dict)
    characteristics: Dict[str, DiffPoly] = field(default_factory=dict)
    densities: Dict[str, Functional] = field(default_factory=dict)

    @property
    def context(self) -> Context:
        return Context(eps_order=self.eps_order)

    def lookup(self, name: str):
        for table in (self.systems, self.operators,
                      self.characteristics, self.densities):
            if name in table:
                return table[name]
        return None

    def __eq__(self, other):
        if not isinstance(other, ModelIR):
            return NotImplemented
        return (self.eps_order == other.eps_order
                and self.max_jet_order == other.max_jet_order
                and {k: v.rhs for k, v in self.systems.items()}
                    == {k: v.rhs for k, v in other.systems.items()}
                and self.operators == other.operators
                and self.characteristics == other.characteristics
                and {k: v.density for k, v in self.densities.items()}
                    == {k: v.density for k, v in other.densities.items()})


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0
        self.model = ModelIR()
        self.ctx = Context(eps_order=self.model.eps_order)
        self.declared = False

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            expected = {text if text is not None else kind.lower()}
            raise ParseError(f"found {tok.text!r}" if tok.text else "unexpected end of input",
                             tok.line, tok.column, expected)
        return self.advance()

    def fail(self, message: str, tok: Optional[Token] = None, expected=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column, expected)

    # -- grammar -----------------------------------------------------------

    def parse_model(self) -> ModelIR:
        while self.peek().kind != "EOF":
            tok = self.peek()
            if tok.kind != "IDENT":
                self.fail(f"found {tok.text!r}",
                          expected={"set", "system", "operator", "char", "density"})
            if tok.text == "set":
                self.parse_set()
            elif tok.text == "system":
                self.parse_system()
            elif tok.text == "operator":
                self.parse_operator()
            elif tok.text == "char":
                self.parse_char()
            elif tok.text == "density":
                self.parse_density()
            else:
                self.fail(f"found {tok.text!r}",
                          expected={"set", "system", "operator", "char", "density"})
        return self.model

    def parse_set(self):
        self.expect("IDENT", "set")
        key = self.expect("IDENT")
        self.expect("PUNCT", "=")
        value_tok = self.expect("INT")
        self.expect("PUNCT", ";")
        value = int(value_tok.text)
        if key.text == "eps_order":
            if self.declared:
                self.fail("set eps_order must precede all declarations", key)
            if value < 0:
                self.fail("eps_order must be non-negative", value_tok)
            self.model.eps_order = value
            self.ctx = Context(eps_order=value)
        elif key.text == "max_jet_order":
            if value < 1:
                self.fail("max_jet_order must be positive", value_tok)
            self.model.max_jet_order = value
        else:
            self.fail(f"unknown setting {key.text!r}", key,
                      expected={"eps_order", "max_jet_order"})

    def declare(self, name_tok: Token) -> str:
        name = name_tok.text
        if name in RESERVED:
            self.fail(f"{name!r} is reserved", name_tok)
        if self.model.lookup(name) is not None:
            self.fail(f"name {name!r} is already declared", name_tok)
        self.declared = True
        return name

    def parse_system(self):
        self.expect("IDENT", "system")
        name = self.declare(self.expect("IDENT"))
        self.expect("PUNCT", "{")
        self.expect("IDENT", "rhs")
        self.expect("PUNCT", ":")
        rhs = self.require_poly(self.parse_expr(), "system right-hand side")
        self.expect("PUNCT", ";")
        self.expect("PUNCT", "}")
        self.model.systems[name] = EvolutionSystem(rhs, name=name)

    def parse_operator(self):
        self.expect("IDENT", "operator")
        name = self.declare(self.expect("IDENT"))
        self.expect("PUNCT", "{")
        value = self.parse_expr()
        if self.peek().kind == "PUNCT" and self.peek().text == ";":
            self.advance()
        self.expect("PUNCT", "}")
        if isinstance(value, DiffPoly):
            value = PseudoDiffOp.from_poly(value)
        self.model.operators[name] = value

    def parse_char(self):
        self.expect("IDENT", "char")
        name = self.declare(self.expect("IDENT"))
        self.expect("PUNCT", "=")
        value = self.require_poly(self.parse_expr(), "characteristic")
        self.expect("PUNCT", ";")
        self.model.characteristics[name] = value

    def parse_density(self):
        self.expect("IDENT", "density")
        name = self.declare(self.expect("IDENT"))
        self.expect("PUNCT", "=")
        value = self.require_poly(self.parse_expr(), "density")
        self.expect("PUNCT", ";")
        self.model.densities[name] = Functional(value, name=name)

    def require_poly(self, value: Value, what: str) -> DiffPoly:
        if isinstance(value, PseudoDiffOp):
            self.fail(f"{what} must be a differential polynomial, not an operator")
        return value

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> Value:
        value = self.parse_term()
        while self.peek().kind == "PUNCT" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.parse_term()
            value = self.binary(op, value, rhs)
        return value

    def parse_term(self) -> Value:
        value = self.parse_factor()
        while self.peek().kind == "PUNCT" and self.peek().text in "*/":
            op = self.advance().text
            rhs = self.parse_factor()
            value = self.binary(op, value, rhs)
        return value

    def parse_factor(self) -> Value:
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.text in "+-":
            self.advance()
            value = self.parse_factor()
            return value if tok.text == "+" else -value
        value = self.parse_atom()
        if self.peek().kind == "PUNCT" and self.peek().text == "^":
            caret = self.advance()
            exp_tok = self.expect("INT")
            exponent = int(exp_tok.text)
            try:
                value = value ** exponent
            except JetflowError as err:
                self.fail(str(err), caret)
        return value

    def parse_atom(self) -> Value:
        tok = self.advance()
        if tok.kind == "INT":
            return self.ctx.const(int(tok.text))
        if tok.kind == "JET":
            return self.ctx.u(int(tok.text))
        if tok.kind == "PUNCT" and tok.text == "(":
            value = self.parse_expr()
            self.expect("PUNCT", ")")
            return value
        if tok.kind == "IDENT":
            name = tok.text
            if name == "x":
                return self.ctx.x
            if name == "t":
                return self.ctx.t
            if name == "eps":
                return self.ctx.eps
            if name == "u":
                return self.ctx.u(0)
            if name.startswith("u_") and name[2:] and set(name[2:]) == {"x"}:
                return self.ctx.u(len(name) - 2)
            if name == "Dx":
                return PseudoDiffOp.dx(self.model.eps_order)
            if name == "Dxi":
                return PseudoDiffOp.dxi(self.model.eps_order)
            if name in KEYWORDS:
                self.fail(f"keyword {name!r} cannot appear in an expression", tok)
            value = self.model.lookup(name)
            if value is None:
                raise UnknownName(name, tok.line, tok.column)
            if isinstance(value, EvolutionSystem):
                return value.rhs[0]
            if isinstance(value, Functional):
                return value.density
            return value
        self.fail(f"found {tok.text!r}" if tok.text else "unexpected end of input",
                  tok, expected={"an expression"})

    def binary(self, op: str, left: Value, right: Value) -> Value:
        try:
            if op == "+":
                return self.promote_pair(left, right, add=True)
            if op == "-":
                return self.promote_pair(left, right, add=False)
            if op == "*":
                return left * right
            if op == "/":
                if not isinstance(right, DiffPoly):
                    self.fail("division only by rational constants")
                r = right.rational_constant()
                if r is None or r == 0:
                    self.fail("division only by nonzero rational constants")
                return left / r
        except ParseError:
            raise
        except JetflowError as err:
            self.fail(str(err))
        raise AssertionError(op)

    def promote_pair(self, left: Value, right: Value, add: bool) -> Value:
        if isinstance(left, PseudoDiffOp) and isinstance(right, DiffPoly):
            right = PseudoDiffOp.from_poly(right)
        elif isinstance(left, DiffPoly) and isinstance(right, PseudoDiffOp):
            left = PseudoDiffOp.from_poly(left)
        return left + right if add else left - right


def parse_model(text: str) -> ModelIR:
    """Parse a model file into its IR; raises ParseError / UnknownName."""
    return _Parser(tokenize(text)).parse_model()


def print_model(model: ModelIR) -> str:
    """Canonical, re-parseable rendering of a model (deterministic)."""
    lines = [f"set eps_order = {model.eps_order};",
             f"set max_jet_order = {model.max_jet_order};"]
    for name, system in model.systems.items():
        lines.append(f"system {name} {{ rhs: {format_poly(system.rhs[0])}; }}")
    for name, op in model.operators.items():
        lines.append(f"operator {name} {{ {format_operator(op)} }}")
    for name, poly in model.characteristics.items():
        lines.append(f"char {name} = {format_poly(poly)};")
    for name, functional in model.densities.items():
        lines.append(f"density {name} = {format_poly(functional.density)};")
    return "\n".join(lines) + "\n"
