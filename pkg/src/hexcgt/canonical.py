"""Canonical forms: passing options, dominated options, reversible options.

Options are canonicalised first (bottom-up), then each node is reduced by the
loop  passing -> dominated -> reversible  until nothing changes.  Options of a
canonical game are canonical, so a bypass never needs to recurse.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InternalConsistencyError, InvalidArgumentError

PASSING = "passing"
DOMINATED = "dominated"
REVERSIBLE = "reversible"


@dataclass(frozen=True)
class Step:
    """One reduction applied to the node ``before``, producing ``after``."""
    kind: str
    before: int
    after: int
    side: str = ""          # "L" or "R"; empty for passing steps
    option: int = -1
    via: int = -1           # reversing option (reversible steps)
    atomic: bool = False    # via was atomic and was inserted itself

    def describe(self, u) -> str:
        f = u.format
        if self.kind == PASSING:
            return f"passing {f(self.option)}"
        if self.kind == DOMINATED:
            return f"dominated {self.side} {f(self.option)}"
        how = "atom" if self.atomic else "options"
        return f"reversible {self.side} {f(self.option)} via {f(self.via)} ({how})"


class Trace(list):
    """Ordered list of :class:`Step`."""

    def lines(self, u):
        return [s.describe(u) for s in self]


def _composite(u, g, what):
    if u.is_atomic(g):
        raise InvalidArgumentError(f"{what} needs a composite game")


# single-node reductions ----------------------------------------------------

def _find_passing(u, g):
    for x in u.left[g] + u.right[g]:
        if u.equivalent(x, g):
            return x
    return None


def _find_dominated(u, g):
    L, R = u.left[g], u.right[g]
    for x in L:
        for y in L:
            if x != y and u.leq(x, y):
                return "L", x
    for x in R:
        for y in R:
            if x != y and u.leq(y, x):
                return "R", x
    return None


def _find_reversible(u, g):
    for x in u.left[g]:
        for xr in u.right[x]:
            if u.leq(xr, g):
                return "L", x, xr
    for x in u.right[g]:
        for xl in u.left[x]:
            if u.leq(g, xl):
                return "R", x, xl
    return None


def _drop(u, g, side, x):
    if side == "L":
        return u.compose([y for y in u.left[g] if y != x], u.right[g])
    return u.compose(u.left[g], [y for y in u.right[g] if y != x])


def _bypass(u, g, side, x, via):
    if side == "L":
        repl = (via,) if u.is_atomic(via) else u.left[via]
        return u.compose([y for y in u.left[g] if y != x] + list(repl), u.right[g])
    repl = (via,) if u.is_atomic(via) else u.right[via]
    return u.compose(u.left[g], [y for y in u.right[g] if y != x] + list(repl))


def apply_step(u, g, step: Step) -> int:
    """Re-execute a recorded step on ``g`` using only the step's data."""
    if step.kind == PASSING:
        if step.option not in u.left[g] + u.right[g]:
            raise InternalConsistencyError("passing option is not an option")
        return step.option
    if step.kind == DOMINATED:
        return _drop(u, g, step.side, step.option)
    return _bypass(u, g, step.side, step.option, step.via)


def remove_dominated(u, g: int) -> int:
    _composite(u, g, "remove_dominated")
    while True:
        d = _find_dominated(u, g)
        if d is None:
            return g
        g = _drop(u, g, *d)


def bypass_reversible(u, g: int) -> int:
    _composite(u, g, "bypass_reversible")
    while not u.is_atomic(g):
        r = _find_reversible(u, g)
        if r is None:
            break
        g = _bypass(u, g, *r)
    return g


def simplify_passing(u, g: int) -> int:
    _composite(u, g, "simplify_passing")
    x = _find_passing(u, g)
    return g if x is None else canonical_form(u, x)


# full canonical form ----------------------------------------------------------

def _reduce_node(u, g, trace):
    """Reduce a node whose options are already canonical."""
    while not u.is_atomic(g):
        x = _find_passing(u, g)
        if x is not None:
            if trace is not None:
                trace.append(Step(PASSING, g, x, option=x))
            return x
        d = _find_dominated(u, g)
        if d is not None:
            h = _drop(u, g, *d)
            if trace is not None:
                trace.append(Step(DOMINATED, g, h, side=d[0], option=d[1]))
            g = h
            continue
        r = _find_reversible(u, g)
        if r is None:
            return g
        side, x, via = r
        h = _bypass(u, g, side, x, via)
        if trace is not None:
            trace.append(Step(REVERSIBLE, g, h, side=side, option=x, via=via,
                              atomic=u.is_atomic(via)))
        g = h
    return g


def canonical_form(u, g: int, trace: Optional[Trace] = None) -> int:
    """Canonical form of g; with ``trace`` given, steps are appended to it.

    Tracing skips the shared cache so that every step is observed.
    """
    u.check(g)
    cache = u.canon_cache if trace is None else {}
    for x in u.positions(g):
        if x in cache:
            continue
        if u.is_atomic(x):
            cache[x] = x
            continue
        h = u.compose([cache[y] for y in u.left[x]], [cache[y] for y in u.right[x]])
        if trace is None and h in cache:
            cache[x] = cache[h]
            continue
        c = _reduce_node(u, h, trace)
        cache[x] = c
        if trace is None:
            cache[h] = c
            cache[c] = c
    return cache[g]


def replay(u, g: int, trace: Trace) -> int:
    """Rebuild g bottom-up, applying the recorded steps wherever they match."""
    by_node = {}
    for s in trace:
        by_node.setdefault(s.before, s)
    done: dict[int, int] = {}
    for x in u.positions(g):
        if u.is_atomic(x):
            done[x] = x
            continue
        h = u.compose([done[y] for y in u.left[x]], [done[y] for y in u.right[x]])
        seen = set()
        while h in by_node and h not in seen:
            seen.add(h)
            s = by_node[h]
            h2 = apply_step(u, h, s)
            if h2 != s.after:
                raise InternalConsistencyError("trace step does not reproduce its result")
            h = h2
        done[x] = h
    return done[g]


def is_canonical(u, g: int) -> bool:
    return canonical_form(u, g) == g


def assert_unique(u, g: int, h: int) -> bool:
    eq = u.equivalent(g, h)
    same = canonical_form(u, g) == canonical_form(u, h)
    if eq != same:
        raise InternalConsistencyError(
            f"equivalence {eq} but canonical ids {'equal' if same else 'differ'}")
    return eq
