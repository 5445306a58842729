"""A small arithmetic expression grammar for config-supplied fields.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' unary)?
    atom   := NUMBER | NAME | FUNC '(' expr (',' expr)? ')' | '(' expr ')'

Functions: ln (alias log), exp, sqrt, pow(a, b).  Expressions evaluate under
plain reals and under :class:`~nscurve.calculus.Jet2` alike.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Tuple

from . import calculus as C
from .errors import ConfigError

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)|([A-Za-z_]\w*)|(\*\*|[-+*/^(),]))")

_FUNCS = {
    "ln": (1, C.log),
    "log": (1, C.log),
    "exp": (1, C.exp),
    "sqrt": (1, C.sqrt),
    "pow": (2, C.power),
}


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ConfigError(f"cannot parse expression {text!r} at position {pos}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", float(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, variables):
        self.toks = tokens
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (val and tok[1] != val):
            raise ConfigError(f"unexpected token {tok[1]!r}, expected {val or kind}")
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.i != len(self.toks):
            raise ConfigError(f"trailing input at token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            node = (op, node, self.unary())
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return ("neg", self.unary())
        return self.factor()

    def factor(self):
        node = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            node = ("^", node, self.unary())
        return node

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return ("num", val)
        if kind == "name":
            self.take()
            if val in _FUNCS:
                arity = _FUNCS[val][0]
                self.take("op", "(")
                args = [self.expr()]
                while self.peek() == ("op", ","):
                    self.take()
                    args.append(self.expr())
                self.take("op", ")")
                if len(args) != arity:
                    raise ConfigError(f"{val} takes {arity} argument(s), got {len(args)}")
                return ("call", val, *args)
            if val not in self.variables:
                raise ConfigError(f"unknown name {val!r}; allowed: {sorted(self.variables)}")
            return ("var", val)
        if (kind, val) == ("op", "("):
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        raise ConfigError(f"unexpected token {val!r}")


def _evaluate(node, env: Dict[str, Any]):
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "var":
        return env[node[1]]
    if tag == "neg":
        return -_evaluate(node[1], env)
    if tag == "call":
        fn = _FUNCS[node[1]][1]
        return fn(*(_evaluate(a, env) for a in node[2:]))
    a, b = _evaluate(node[1], env), _evaluate(node[2], env)
    if tag == "+":
        return a + b
    if tag == "-":
        return a - b
    if tag == "*":
        return a * b
    if tag == "/":
        return a / b
    return C.power(a, b)


def _render(node) -> str:
    tag = node[0]
    if tag == "num":
        return repr(node[1])
    if tag == "var":
        return node[1]
    if tag == "neg":
        return f"(-{_render(node[1])})"
    if tag == "call":
        return f"{node[1]}({', '.join(_render(a) for a in node[2:])})"
    return f"({_render(node[1])} {tag} {_render(node[2])})"


@dataclass(frozen=True)
class Expression:
    """A parsed expression over a fixed set of variable names."""

    text: str
    variables: Tuple[str, ...]
    tree: tuple

    def __call__(self, *args):
        if len(args) != len(self.variables):
            raise TypeError(f"expected {len(self.variables)} arguments")
        return _evaluate(self.tree, dict(zip(self.variables, args)))

    def __str__(self) -> str:
        return self.text


def parse(text: str, variables: Iterable[str] = ("x", "y")) -> Expression:
    if not isinstance(text, str):
        text = repr(float(text))
    variables = tuple(variables)
    tree = _Parser(_tokenize(text), set(variables)).parse()
    return Expression(text, variables, tree)


def render(tree) -> str:
    return _render(tree)
