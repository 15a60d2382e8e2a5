"""Text grammar for games.

    expr := ATOM | '{' expr (',' expr)* '|' expr (',' expr)* '}'

Atoms may be parenthesised pairs such as ``(a,b)``; commas inside
parentheses belong to the atom.  An optional environment maps extra names
to already-built game ids.
"""
from __future__ import annotations

from .errors import ParseError


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def skip(self):
        t = self.text
        while self.pos < len(t) and t[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, got {got!r}", *self.where())
        self.pos += 1

    def atom(self):
        self.skip()
        t = self.text
        start = self.pos
        depth = 0
        while self.pos < len(t):
            ch = t[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth < 0:
                    break
            elif depth == 0 and (ch.isspace() or ch in "{}|,"):
                break
            elif depth > 0 and ch.isspace():
                break
            self.pos += 1
        if depth > 0:
            raise ParseError("unbalanced parenthesis in atom", *self.where(start))
        if self.pos == start:
            got = t[start] if start < len(t) else "end of input"
            raise ParseError(f"expected an atom or '{{', got {got!r}", *self.where(start))
        return t[start:self.pos], start


def parse_game(u, text: str, env=None) -> int:
    lx = _Lexer(text)
    g = _expr(u, lx, env or {})
    if lx.peek():
        raise ParseError(f"trailing input {lx.peek()!r}", *lx.where())
    return g


def _expr(u, lx, env):
    if lx.peek() == "{":
        lx.pos += 1
        left = _list(u, lx, env, "|")
        lx.expect("|")
        right = _list(u, lx, env, "}")
        lx.expect("}")
        return u.compose(left, right)
    name, start = lx.atom()
    if name in env:
        return env[name]
    if name not in u.poset.index:
        raise ParseError(f"unknown atom {name!r}", *lx.where(start))
    return u.atomic(name)


def _list(u, lx, env, closer):
    if lx.peek() in (closer, ""):
        raise ParseError("empty option list", *lx.where())
    items = [_expr(u, lx, env)]
    while lx.peek() == ",":
        lx.pos += 1
        items.append(_expr(u, lx, env))
    return items


def format_game(u, g: int, names=None) -> str:
    """Print with options ordered by a structural key, independent of ids."""
    memo = {}

    def fmt(x):
        s = memo.get(x)
        if s is not None:
            return s
        if names and x in names:
            s = names[x]
        elif u.is_atomic(x):
            s = u.poset.atoms[u.atom_of[x]]
        else:
            L = sorted((fmt(y) for y in u.left[x]), key=_skey)
            R = sorted((fmt(y) for y in u.right[x]), key=_skey)
            s = "{" + ",".join(L) + "|" + ",".join(R) + "}"
        memo[x] = s
        return s

    return fmt(g)


def _skey(s):
    return (len(s), s)


def parse_game_list(u, text: str) -> list:
    """Parse a whitespace/comma separated list of games at top level."""
    out = []
    lx = _Lexer(text)
    while lx.peek():
        out.append(_expr(u, lx, {}))
        if lx.peek() == ",":
            lx.pos += 1
    return out


def parse_definitions(u, text: str) -> dict:
    """Parse lines ``NAME = expr`` where expr may use earlier names."""
    env: dict = {}
    order = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected NAME = expr", lineno, 1)
        name, expr = (s.strip() for s in line.split("=", 1))
        if not name:
            raise ParseError("missing name", lineno, 1)
        try:
            env[name] = parse_game(u, expr, env)
        except ParseError as e:
            raise ParseError(f"{name}: {e}", lineno, 1) from None
        order.append(name)
    return {k: env[k] for k in order}
