"""Sum, opposite, map and fused sum-map of games; copy-cat and context checks."""
from __future__ import annotations

from dataclasses import dataclass, field

from .canonical import canonical_form
from .errors import (
    InvalidArgumentError,
    ParseError,
    PreconditionError,
    PropertyViolation,
    ResourceLimitError,
)
from .game_core import universe_for
from .poset import Poset, linear_poset, opposite_poset, product_poset

BOOL = linear_poset(2)


class MonotoneMap:
    """Order-preserving atom map; ``table[i]`` is the target index of atom i."""

    def __init__(self, source: Poset, target: Poset, table, name="f"):
        if isinstance(table, dict):
            for a in source.atoms:
                if a not in table:
                    raise InvalidArgumentError(f"map is not total: {a} has no image")
            idx = []
            for a in source.atoms:
                b = table[a]
                if isinstance(b, str):
                    if b not in target.index:
                        raise InvalidArgumentError(f"map sends {a} to unknown atom {b!r}")
                    b = target.index[b]
                idx.append(b)
        else:
            idx = list(table)
            if len(idx) != len(source):
                raise InvalidArgumentError("map table has the wrong length")
        for b in idx:
            if not 0 <= b < len(target):
                raise InvalidArgumentError(f"map target index {b} out of range")
        self.source = source
        self.target = target
        self.table = tuple(idx)
        self.name = name
        for i in range(len(source)):
            for j in range(len(source)):
                if source.leq(i, j) and not target.leq(idx[i], idx[j]):
                    raise InvalidArgumentError(
                        f"map {name} is not monotone: {source.atoms[i]} <= {source.atoms[j]}")
        self.key = (source.key, target.key, self.table)

    def __call__(self, i: int) -> int:
        return self.table[i]

    def compose(self, other: "MonotoneMap") -> "MonotoneMap":
        """self after other."""
        if other.target != self.source:
            raise InvalidArgumentError("maps do not compose")
        return MonotoneMap(other.source, self.target,
                           [self.table[t] for t in other.table], f"{self.name}.{other.name}")

    @classmethod
    def identity(cls, A: Poset):
        return cls(A, A, range(len(A)), "id")

    @classmethod
    def from_function(cls, source, target, fn, name="f"):
        """``fn`` receives atom names and returns a target atom name."""
        return cls(source, target, {a: fn(a) for a in source.atoms}, name)


def parse_map(text: str, source: Poset, target: Poset) -> MonotoneMap:
    """Lines ``map: a b -> c`` (pair atoms of a product source) or ``map: a -> c``."""
    table = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("map:") or "->" not in line:
            raise ParseError("expected 'map: x [y] -> z'", lineno, 1)
        lhs, rhs = line[4:].split("->", 1)
        parts = lhs.split()
        if not parts:
            raise ParseError("empty map source", lineno, 1)
        key = parts[0] if len(parts) == 1 else "(" + ",".join(parts) + ")"
        table[key] = rhs.strip()
    return MonotoneMap(source, target, table)


# sum / opposite / map -----------------------------------------------------------

_SUM_MEMO: dict = {}
_MAP_MEMO: dict = {}


def sum_games(ua, g: int, ub, h: int):
    """G + H over A x B.  Returns (universe, id)."""
    uc = universe_for(product_poset(ua.poset, ub.poset))
    memo = _SUM_MEMO.setdefault((ua.poset.key, ub.poset.key), {})
    nb = len(ub.poset)

    def go(x, y):
        r = memo.get((x, y))
        if r is not None:
            return r
        ax, ay = ua.atom_of[x], ub.atom_of[y]
        if ax >= 0 and ay >= 0:
            r = uc.atomic(ax * nb + ay)
        else:
            L = [go(xl, y) for xl in ua.left[x]] + [go(x, yl) for yl in ub.left[y]]
            R = [go(xr, y) for xr in ua.right[x]] + [go(x, yr) for yr in ub.right[y]]
            r = uc.compose(L, R)
        memo[(x, y)] = r
        return r

    return uc, go(g, h)


def opposite(u, g: int):
    """Swap the players; atoms are kept and read in the opposite poset."""
    uo = universe_for(opposite_poset(u.poset))
    memo = {}
    for x in u.positions(g):
        a = u.atom_of[x]
        if a >= 0:
            memo[x] = uo.atomic(a)
        else:
            memo[x] = uo.compose([memo[y] for y in u.right[x]], [memo[y] for y in u.left[x]])
    return uo, memo[g]


def map_game(f: MonotoneMap, u, g: int):
    if u.poset != f.source:
        raise InvalidArgumentError("game is not over the source poset of the map")
    ut = universe_for(f.target)
    memo = _MAP_MEMO.setdefault(f.key, {})
    for x in u.positions(g):
        if x in memo:
            continue
        a = u.atom_of[x]
        if a >= 0:
            memo[x] = ut.atomic(f.table[a])
        else:
            memo[x] = ut.compose([memo[y] for y in u.left[x]], [memo[y] for y in u.right[x]])
    return ut, memo[g]


class SumMap:
    """G (+)_f H with atoms mapped on the fly.

    With ``reduce`` set, every node is canonicalised as it is built; this keeps
    intermediate games small and is sound for passable arguments, where the
    value of a sum depends only on the values of its parts.
    """

    def __init__(self, f: MonotoneMap, ua, ub, reduce: bool = False):
        A, B = ua.poset, ub.poset
        if f.source != product_poset(A, B):
            raise InvalidArgumentError("map source must be the product of the argument posets")
        self.f, self.ua, self.ub, self.reduce = f, ua, ub, reduce
        self.uc = universe_for(f.target)
        self.nb = len(B)
        self.memo: dict = {}

    def __call__(self, g: int, h: int) -> int:
        ua, ub, uc, memo = self.ua, self.ub, self.uc, self.memo
        table, nb, reduce = self.f.table, self.nb, self.reduce

        def go(x, y):
            r = memo.get((x, y))
            if r is not None:
                return r
            ax, ay = ua.atom_of[x], ub.atom_of[y]
            if ax >= 0 and ay >= 0:
                r = uc.atomic(table[ax * nb + ay])
            else:
                L = [go(xl, y) for xl in ua.left[x]] + [go(x, yl) for yl in ub.left[y]]
                R = [go(xr, y) for xr in ua.right[x]] + [go(x, yr) for yr in ub.right[y]]
                r = uc.compose(L, R)
                if reduce:
                    r = canonical_form(uc, r)
            memo[(x, y)] = r
            return r

        return go(g, h)


def sum_map(f: MonotoneMap, ua, g: int, ub, h: int, reduce: bool = False):
    sm = SumMap(f, ua, ub, reduce)
    return sm.uc, sm(g, h)


# lambda / rho ----------------------------------------------------------------------

def lam(A: Poset) -> MonotoneMap:
    """lambda(a, b) = T iff b <= a, on A x A^op."""
    n = len(A)
    tab = [1 if A.leq(j, i) else 0 for i in range(n) for j in range(n)]
    return MonotoneMap(product_poset(A, opposite_poset(A)), BOOL, tab, "lambda")


def rho(A: Poset) -> MonotoneMap:
    """rho(a, b) = T iff not a <= b, on A x A^op."""
    n = len(A)
    tab = [0 if A.leq(i, j) else 1 for i in range(n) for j in range(n)]
    return MonotoneMap(product_poset(A, opposite_poset(A)), BOOL, tab, "rho")


@dataclass
class Report:
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def expect(self, cond: bool, what: str):
        self.checks += 1
        if not cond:
            self.failures.append(what)

    def raise_on_failure(self):
        if self.failures:
            raise PropertyViolation("; ".join(self.failures[:5]))
        return self


def copycat_check(u, g: int, others=(), strict: bool = False) -> Report:
    """Copy-cat lemma for G, plus the order biconditionals against ``others``."""
    if not u.is_passable(g):
        raise PreconditionError("copycat_check needs a passable game")
    A = u.poset
    uo, gop = opposite(u, g)
    L, Rh = lam(A), rho(A)
    ub = universe_for(BOOL)
    T, Bt = ub.top, ub.bottom
    sl = SumMap(L, u, uo)
    sr = SumMap(Rh, u, uo)
    rep = Report()
    rep.expect(ub.equivalent(sl(g, gop), T), "G +lambda G^op is not T")
    rep.expect(ub.equivalent(sr(g, gop), Bt), "G +rho G^op is not B")
    for h in others:
        _, hop = opposite(u, h)
        x = sl(h, gop)
        y = sr(g, hop)
        le, tr = u.leq(g, h), u.tri(g, h)
        rep.expect(le == ub.leq(T, x), "G<=H vs T<=H+lambda G^op")
        rep.expect(le == ub.leq(y, Bt), "G<=H vs G+rho H^op<=B")
        rep.expect(tr == ub.tri(T, x), "G<|H vs T<|H+lambda G^op")
        rep.expect(tr == ub.tri(y, Bt), "G<|H vs G+rho H^op<|B")
    if strict:
        rep.raise_on_failure()
    return rep


def standard_contexts(u, g: int, h: int):
    """The contexts used to separate G from H: (A^op, rho, H^op), (A^op, lambda, G^op)."""
    A = u.poset
    uo, gop = opposite(u, g)
    _, hop = opposite(u, h)
    return [(uo, rho(A), hop), (uo, lam(A), gop)]


def contextual_probe(u, g: int, h: int, contexts) -> Report:
    """Check the contextual-order implications on each context (B, f, K).

    Left wins X over Bool moving first iff T <| X, moving second iff T <= X.
    """
    ub = universe_for(BOOL)
    T = ub.top
    le, tr = u.leq(g, h), u.tri(g, h)
    rep = Report()
    for i, (uk, f, k) in enumerate(contexts):
        if not uk.is_passable(k):
                raise PreconditionError(f"context {i} game is not passable")
        if f.target != BOOL:
            raise InvalidArgumentError("context maps must land in Bool")
        sm = SumMap(f, u, uk)
        x, y = sm(g, k), sm(h, k)
        first_x, first_y = ub.tri(T, x), ub.tri(T, y)
        second_x, second_y = ub.leq(T, x), ub.leq(T, y)
        if le:
            rep.expect(not first_x or first_y, f"context {i}: first-player win lost")
            rep.expect(not second_x or second_y, f"context {i}: second-player win lost")
        if tr:
            rep.expect(not second_x or first_y, f"context {i}: second to first-player win lost")
    return rep


# set colouring games ------------------------------------------------------------------

MAX_CELLS = 12


def boolean_cube_poset(n: int) -> Poset:
    """Subsets of n cells under inclusion; atom ``x0110`` lists cell colours."""
    if n > 8:
        raise ResourceLimitError("boolean_cube_poset is limited to 8 cells")
    names = ["x" + "".join(str(m >> (n - 1 - i) & 1) for i in range(n)) for m in range(1 << n)]
    up = [sum(1 << m2 for m2 in range(1 << n) if m & m2 == m) for m in range(1 << n)]
    return Poset(names, name=f"Bool^{n}", up_masks=up)


def set_coloring_value(cells: int, payoff, target: Poset = None) -> tuple:
    """Value of the monotone set colouring game with the given payoff.

    ``payoff`` is a MonotoneMap from boolean_cube_poset(cells), or a callable
    from a black-cell bitmask to a target atom index (``target`` required).
    Cell i corresponds to bit ``cells-1-i``.  Returns (universe, id).
    """
    if not 0 <= cells <= MAX_CELLS:
        raise ResourceLimitError(f"set_coloring_value supports at most {MAX_CELLS} cells")
    if isinstance(payoff, MonotoneMap):
        target = payoff.target
        fn = payoff.table.__getitem__
    else:
        if target is None:
            raise InvalidArgumentError("a callable payoff needs a target poset")
        fn = payoff
        for m in range(1 << cells):
            for i in range(cells):
                if not m >> i & 1 and not target.leq(fn(m), fn(m | 1 << i)):
                    raise InvalidArgumentError("payoff is not monotone")
    u = universe_for(target)
    memo: dict = {}

    # state: (mask of coloured cells, mask of black cells)
    def go(done, black):
        r = memo.get((done, black))
        if r is not None:
            return r
        free = [i for i in range(cells) if not done >> i & 1]
        if not free:
            r = u.atomic(fn(black))
        else:
            L = [go(done | 1 << i, black | 1 << i) for i in free]
            R = [go(done | 1 << i, black) for i in free]
            r = canonical_form(u, u.compose(L, R))
        memo[(done, black)] = r
        return r

    return u, go(0, 0)
