# src/besovlab/specparse.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Parser for the small call-style grammar shared by function, kernel
#              and omega specs, e.g. `indicator(0,1)`, `radialize(uniform(r=1),0.5)`,
#              `comp(pow(0.5),log1p)`. Whitespace is ignored.
#
#   spec  := NAME [ '(' [ arg (',' arg)* ] ')' ]
#   arg   := NAME '=' value | value
#   value := NUMBER | 'inf' | spec

import math
import re
from dataclasses import dataclass

from .errors import ConfigError

_TOKEN = re.compile(
    r"\s*(?:(?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),=]))"
)


@dataclass(frozen=True)
class SpecCall:
    name: str
    args: tuple = ()
    kwargs: tuple = ()

    def kw(self) -> dict:
        return dict(self.kwargs)

    def render(self) -> str:
        parts = [_render_value(a) for a in self.args]
        parts += [f"{k}={_render_value(v)}" for k, v in self.kwargs]
        if not parts:
            return f"{self.name}()"
        return f"{self.name}({','.join(parts)})"


def _render_value(value) -> str:
    if isinstance(value, SpecCall):
        return value.render()
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return repr(float(value))


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens, pos = [], 0
    stripped = text.rstrip()
    while pos < len(stripped):
        match = _TOKEN.match(stripped, pos)
        if not match:
            raise ConfigError(f"cannot parse spec {text!r} at column {pos + 1}")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def _fail(self, what: str):
        _, _, col = self._peek()
        raise ConfigError(f"cannot parse spec {self.text!r} at column {col + 1}: expected {what}")

    def _take(self, value: str):
        kind, tok, _ = self._peek()
        if kind != 'punct' or tok != value:
            self._fail(repr(value))
        self.i += 1

    def spec(self) -> SpecCall:
        kind, tok, _ = self._peek()
        if kind != 'name':
            self._fail('a name')
        self.i += 1
        args, kwargs = [], []
        kind, nxt, _ = self._peek()
        if kind == 'punct' and nxt == '(':
            self.i += 1
            kind, nxt, _ = self._peek()
            if not (kind == 'punct' and nxt == ')'):
                while True:
                    key = self._keyword()
                    value = self.value()
                    if key is None:
                        if kwargs:
                            self._fail('a keyword argument')
                        args.append(value)
                    else:
                        kwargs.append((key, value))
                    kind, nxt, _ = self._peek()
                    if kind == 'punct' and nxt == ',':
                        self.i += 1
                        continue
                    break
            self._take(')')
        return SpecCall(tok, tuple(args), tuple(kwargs))

    def _keyword(self) -> str | None:
        if self.i + 1 < len(self.tokens):
            kind, tok, _ = self.tokens[self.i]
            nkind, ntok, _ = self.tokens[self.i + 1]
            if kind == 'name' and nkind == 'punct' and ntok == '=':
                self.i += 2
                return tok
        return None

    def value(self):
        kind, tok, _ = self._peek()
        if kind == 'number':
            self.i += 1
            return float(tok)
        if kind == 'name' and tok == 'inf':
            self.i += 1
            return math.inf
        if kind == 'name':
            return self.spec()
        self._fail('a number or a spec')


def parse_spec(text: str) -> SpecCall:
    """Parses a call-style spec string into a SpecCall tree."""
    if not text or not text.strip():
        raise ConfigError("empty spec string")
    parser = _Parser(text)
    call = parser.spec()
    if parser.i != len(parser.tokens):
        parser._fail('end of spec')
    return call


def as_call(spec) -> SpecCall:
    return spec if isinstance(spec, SpecCall) else parse_spec(spec)
