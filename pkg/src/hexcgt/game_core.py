"""Hash-consed games over a poset and the mutually recursive relations <= and <|.

A game is an integer id into a :class:`Universe`.  Atomic games carry an atom
index; composite games carry sorted, duplicate-free tuples of option ids.
Options are always created before the games that use them, so ids give a
well-founded order.
"""
from __future__ import annotations

import sys
from typing import Iterable, NamedTuple

from .errors import (
    InternalConsistencyError,
    InvalidArgumentError,
    PreconditionError,
    UnsupportedPosetError,
)
from .poset import Poset

if sys.getrecursionlimit() < 50000:
    sys.setrecursionlimit(50000)

NOATOM = -1


class Universe:
    """Interning store and relation caches for games over one poset."""

    def __init__(self, poset: Poset, memo: bool = True):
        self.poset = poset
        self.memo = memo
        self.atom_of: list[int] = []
        self.left: list[tuple] = []
        self.right: list[tuple] = []
        self.depth: list[int] = []
        self._intern: dict = {}
        self.leq_cache: dict[int, bool] = {}
        self.tri_cache: dict[int, bool] = {}
        self._passable: dict[int, bool] = {}
        self._monotone: dict[int, bool] = {}
        self._semi: dict[int, bool] = {}
        self.canon_cache: dict[int, int] = {}
        self._atoms = [self._new(("a", i), i, (), (), 0) for i in range(len(poset))]

    # construction ----------------------------------------------------------

    def _new(self, key, atom, left, right, depth):
        gid = len(self.atom_of)
        self.atom_of.append(atom)
        self.left.append(left)
        self.right.append(right)
        self.depth.append(depth)
        self._intern[key] = gid
        return gid

    def __len__(self):
        return len(self.atom_of)

    def atomic(self, a) -> int:
        if isinstance(a, str):
            a = self.poset.atom(a)
        if not 0 <= a < len(self._atoms):
            raise InvalidArgumentError(f"atom index {a} out of range")
        return self._atoms[a]

    def compose(self, left: Iterable[int], right: Iterable[int]) -> int:
        L = tuple(sorted(set(left)))
        R = tuple(sorted(set(right)))
        if not L or not R:
            raise InvalidArgumentError("a composite game needs non-empty left and right option sets")
        key = (L, R)
        gid = self._intern.get(key)
        if gid is not None:
            return gid
        n = len(self.atom_of)
        if L[-1] >= n or R[-1] >= n or L[0] < 0 or R[0] < 0:
            raise InvalidArgumentError("option id not in this universe")
        d = self.depth
        depth = 1 + max(max(d[x] for x in L), max(d[x] for x in R))
        return self._new(key, NOATOM, L, R, depth)

    def is_atomic(self, g: int) -> bool:
        return self.atom_of[g] != NOATOM

    @property
    def top(self) -> int:
        if self.poset.top is None:
            raise UnsupportedPosetError(f"poset {self.poset.name} has no top")
        return self._atoms[self.poset.top]

    @property
    def bottom(self) -> int:
        if self.poset.bottom is None:
            raise UnsupportedPosetError(f"poset {self.poset.name} has no bottom")
        return self._atoms[self.poset.bottom]

    def check(self, *games):
        n = len(self.atom_of)
        for g in games:
            if not (isinstance(g, int) and 0 <= g < n):
                raise InvalidArgumentError(f"{g!r} is not a game of universe {self.poset.name}")

    # relations -------------------------------------------------------------

    def leq(self, g: int, h: int) -> bool:
        key = (g << 32) | h
        if self.memo:
            r = self.leq_cache.get(key)
            if r is not None:
                return r
        r = True
        tri = self.tri
        for gl in self.left[g]:
            if not tri(gl, h):
                r = False
                break
        if r:
            for hr in self.right[h]:
                if not tri(g, hr):
                    r = False
                    break
        if r and (self.atom_of[g] != NOATOM or self.atom_of[h] != NOATOM):
            r = tri(g, h)
        if self.memo:
            self.leq_cache[key] = r
        return r

    def tri(self, g: int, h: int) -> bool:
        key = (g << 32) | h
        if self.memo:
            r = self.tri_cache.get(key)
            if r is not None:
                return r
        r = False
        leq = self.leq
        for gr in self.right[g]:
            if leq(gr, h):
                r = True
                break
        if not r:
            for hl in self.left[h]:
                if leq(g, hl):
                    r = True
                    break
        if not r:
            a, b = self.atom_of[g], self.atom_of[h]
            if a != NOATOM and b != NOATOM:
                r = bool(self.poset.up[a] >> b & 1)
        if self.memo:
            self.tri_cache[key] = r
        return r

    def equivalent(self, g: int, h: int) -> bool:
        return g == h or (self.leq(g, h) and self.leq(h, g))

    def clear_caches(self):
        self.leq_cache.clear()
        self.tri_cache.clear()
        self._passable.clear()
        self._monotone.clear()
        self._semi.clear()
        self.canon_cache.clear()

    # lattice ---------------------------------------------------------------

    def _composite(self, g):
        if self.is_atomic(g):
            return self.compose([g], [g])
        return g

    def join(self, games: Iterable[int]) -> int:
        S = sorted({self._composite(g) for g in games})
        bot = self.bottom
        if not S:
            return bot
        lefts = [x for g in S for x in self.left[g]]
        return self.compose(lefts, [self.compose(S, [bot])])

    def meet(self, games: Iterable[int]) -> int:
        S = sorted({self._composite(g) for g in games})
        top = self.top
        if not S:
            return top
        rights = [x for g in S for x in self.right[g]]
        return self.compose([self.compose([top], S)], rights)

    # classification ----------------------------------------------------------

    def is_locally_passable(self, g: int) -> bool:
        return self.tri(g, g)

    def is_passable(self, g: int) -> bool:
        r = self._passable.get(g)
        if r is None:
            r = self.tri(g, g) and all(self.is_passable(x) for x in self.left[g] + self.right[g])
            self._passable[g] = r
        return r

    def good_left(self, g: int):
        return [x for x in self.left[g] if self.leq(g, x)]

    def good_right(self, g: int):
        return [x for x in self.right[g] if self.leq(x, g)]

    def is_monotone(self, g: int) -> bool:
        r = self._monotone.get(g)
        if r is None:
            L, R = self.left[g], self.right[g]
            r = (all(self.leq(g, x) for x in L) and all(self.leq(x, g) for x in R)
                 and all(self.is_monotone(x) for x in L + R))
            self._monotone[g] = r
        return r

    def is_semi_monotone(self, g: int) -> bool:
        r = self._semi.get(g)
        if r is None:
            if self.is_atomic(g):
                r = True
            else:
                r = (bool(self.good_left(g)) and bool(self.good_right(g))
                     and all(self.is_semi_monotone(x) for x in self.left[g] + self.right[g]))
            self._semi[g] = r
        return r

    def passable_atom_bound(self, g: int, a) -> bool:
        if self.is_atomic(g) or not self.is_passable(g):
            raise PreconditionError("passable_atom_bound needs a passable composite game")
        ga = self.atomic(a)
        result = self.leq(g, ga)
        if all(self.leq(x, ga) for x in self.left[g]) and not result:
            raise InternalConsistencyError("left options below an atom but the game is not")
        return result

    def linear_totality(self, g: int, h: int) -> "Totality":
        if not self.poset.is_linear():
            raise PreconditionError("linear_totality needs a linearly ordered poset")
        if not (self.is_passable(g) and self.is_passable(h)):
            raise PreconditionError("linear_totality needs passable games")
        t = Totality(self.tri(g, h), self.leq(h, g))
        if not (t.g_tri_h or t.h_leq_g):
            raise InternalConsistencyError("neither G <| H nor H <= G for passable games")
        return t

    # structure -------------------------------------------------------------

    def positions(self, g: int):
        """All subpositions of g (including g), children before parents."""
        seen = set()
        order = []
        stack = [(g, False)]
        while stack:
            x, done = stack.pop()
            if done:
                order.append(x)
                continue
            if x in seen:
                continue
            seen.add(x)
            stack.append((x, True))
            for y in self.left[x] + self.right[x]:
                if y not in seen:
                    stack.append((y, False))
        return order

    def node_count(self, g: int) -> int:
        return len(self.positions(g))

    def add_left(self, g: int, h: int) -> int:
        return self.compose(self.left[g] + (h,), self.right[g])

    def add_right(self, g: int, h: int) -> int:
        return self.compose(self.left[g], self.right[g] + (h,))

    def format(self, g: int) -> str:
        from .textio import format_game
        return format_game(self, g)

    def parse(self, text: str, env=None) -> int:
        from .textio import parse_game
        return parse_game(self, text, env)


class Totality(NamedTuple):
    g_tri_h: bool
    h_leq_g: bool


_UNIVERSES: dict[str, Universe] = {}


def universe_for(poset: Poset) -> Universe:
    """Shared universe per poset (identified by content hash)."""
    u = _UNIVERSES.get(poset.key)
    if u is None:
        u = Universe(poset)
        _UNIVERSES[poset.key] = u
    return u
