"""Open regions of height k: frontier automaton, column-wise values, best patterns.

Cells are (row, column) with rows 1..k from the top edge and columns 1..n
from the left edge.  Black owns the left and right edges, White the top and
bottom edges.  Cell (r, c) touches (r, c+1) and (r-1, c+1) in the next column.

A column fill is named k<i>, where the binary digits of i list the column's
cells from the top, 1 for Black.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional

from .algebra import BOOL, MonotoneMap, SumMap, map_game, set_coloring_value
from .canonical import canonical_form
from .errors import InvalidArgumentError, PropertyViolation, ResourceLimitError
from .game_core import universe_for
from .poset import Poset, product_poset

WIN = ("white",)          # absorbing state: White's edges are joined
MAX_K = 5

# width-1 and width-2 representatives of the printed height-4 outcomes,
# one string per column listing rows from the top
OUTCOME_NAMES_4 = {
    "B": ["WWWW"], "a": ["WWWB"], "b": ["WWBW"], "c": ["BBWW"], "d": ["BWWW"],
    "e": ["WWBB"], "f": ["BWWB"], "g": ["BBBW"], "h": ["BWWW", "BWBB"], "T": ["BBBB"],
}


def column_index(fill: str) -> int:
    """Fill string such as "BWBW" (top row first) to its k-index."""
    i = 0
    for ch in fill:
        if ch not in "BW":
            raise InvalidArgumentError(f"bad column fill {fill!r}")
        i = 2 * i + (ch == "B")
    return i


def column_fill(i: int, k: int) -> str:
    return "".join("B" if i >> (k - 1 - r) & 1 else "W" for r in range(k))


# frontier automaton -------------------------------------------------------------

def _find(p, i):
    while p[i] != i:
        p[i] = p[p[i]]
        i = p[i]
    return i


def _relabel(roots, fixed):
    """Labels for a root list: fixed roots keep their label, the rest get
    2, 3, ... in order of first appearance; None stays None."""
    out, fresh = [], {}
    for r in roots:
        if r is None:
            out.append(None)
        elif r in fixed:
            out.append(fixed[r])
        else:
            if r not in fresh:
                fresh[r] = 2 + len(fresh)
            out.append(fresh[r])
    return tuple(out)


def start_state(k):
    # the left edge behaves like a black column joined to it
    return ((1 << k) - 1, (0,) * k, (None,) * k)


def step(state, letter: int, k: int):
    """Attach one column (k-index ``letter``) to a frontier state."""
    if state == WIN:
        return WIN
    mask, blab, wlab = state
    L, T, Bm = 2 * k, 2 * k + 1, 2 * k + 2
    p = list(range(2 * k + 3))
    prev = [bool(mask >> (k - 1 - r) & 1) for r in range(k)]
    new = [bool(letter >> (k - 1 - r) & 1) for r in range(k)]
    first = {}
    for r in range(k):
        if prev[r]:
            lab = blab[r]
            if lab == 0:
                p[_find(p, r)] = _find(p, L)
            elif lab in first:
                p[_find(p, r)] = _find(p, first[lab])
            else:
                first[lab] = r
    first = {}
    for r in range(k):
        if not prev[r]:
            lab = wlab[r]
            if lab == 0:
                p[_find(p, r)] = _find(p, T)
            elif lab == 1:
                p[_find(p, r)] = _find(p, Bm)
            elif lab in first:
                p[_find(p, r)] = _find(p, first[lab])
            else:
                first[lab] = r
    for r in range(k):
        x = k + r
        if r + 1 < k and new[r] == new[r + 1]:
            p[_find(p, x)] = _find(p, x + 1)
        for q in (r, r + 1):
            if q < k and prev[q] == new[r]:
                p[_find(p, x)] = _find(p, q)
        if not new[r]:
            if r == 0:
                p[_find(p, x)] = _find(p, T)
            if r == k - 1:
                p[_find(p, x)] = _find(p, Bm)
    if _find(p, T) == _find(p, Bm):
        return WIN
    roots = [_find(p, k + r) for r in range(k)]
    blab = _relabel([roots[r] if new[r] else None for r in range(k)], {_find(p, L): 0})
    wlab = _relabel([None if new[r] else roots[r] for r in range(k)],
                    {_find(p, T): 0, _find(p, Bm): 1})
    return (letter, blab, wlab)


def closing(state) -> int:
    """1 if Black wins once the right edge is attached."""
    return 0 if state == WIN else int(any(lab == 0 for lab in state[1]))


@dataclass
class StripModel:
    """Minimised frontier automaton and the derived outcome/column posets."""
    k: int
    poset: Poset                 # open outcomes
    columns: Poset               # column fills, ordered pointwise
    transfer: MonotoneMap        # open x column -> open
    closing: MonotoneMap         # open -> Bool
    start: int                   # outcome index of the empty region
    delta: list                  # delta[o][letter] -> o
    nstates: int
    _colval: dict = field(default_factory=dict, repr=False)
    _summap: Optional[SumMap] = field(default=None, repr=False)
    frontiers: list = field(default_factory=list, repr=False)

    @property
    def universe(self):
        return universe_for(self.poset)

    def f(self, o, c) -> str:
        """Transfer on names: f("c", "k10") -> "d"."""
        i = self.poset.atom(o)
        j = self.columns.atom(c)
        return self.poset.atoms[self.delta[i][j]]

    def column_value(self, col: str):
        """Value over the column poset of a column position (B/W/. per row)."""
        col = col.upper().replace("E", ".")
        if len(col) != self.k or any(ch not in "BW." for ch in col):
            raise InvalidArgumentError(f"bad column {col!r} for height {self.k}")
        hit = self._colval.get(col)
        if hit is not None:
            return hit
        empty = [r for r, ch in enumerate(col) if ch == "."]
        m = len(empty)

        def payoff(mask):
            fill = list(col)
            for i, r in enumerate(empty):
                fill[r] = "B" if mask >> (m - 1 - i) & 1 else "W"
            return column_index("".join(fill))

        _, g = set_coloring_value(m, payoff, self.columns)
        self._colval[col] = g
        return g

    def add_column(self, g: int, col: str) -> int:
        if self._summap is None:
            self._summap = SumMap(self.transfer, self.universe, universe_for(self.columns),
                                  reduce=True)
        return self._summap(g, self.column_value(col))

    def close(self, g: int):
        """Value over Bool once the right edge is attached."""
        return map_game(self.closing, self.universe, g)


def _minimise(states, delta, close, nletters):
    """Moore refinement; returns class id per state."""
    cls = [close[s] for s in range(len(states))]
    while True:
        sig = {}
        new = []
        for s in range(len(states)):
            key = (cls[s],) + tuple(cls[delta[s][c]] for c in range(nletters))
            new.append(sig.setdefault(key, len(sig)))
        if len(set(new)) == len(set(cls)):
            return new
        cls = new


def _simulation(delta, close, n, nletters):
    """Greatest relation R with (p,q) in R => close p <= close q and
    (delta p c, delta q c) in R for every letter."""
    R = [[close[p] <= close[q] for q in range(n)] for p in range(n)]
    changed = True
    while changed:
        changed = False
        for p in range(n):
            for q in range(n):
                if R[p][q] and not all(R[delta[p][c]][delta[q][c]] for c in range(nletters)):
                    R[p][q] = False
                    changed = True
    return R


def frontier_partition(state, k):
    """Black connectivity among the left edge "L" and the k cells of the next
    column, as a set of frozensets; None for the White-wins state."""
    if state == WIN:
        return None
    blab = state[1]
    p = list(range(k + 1))          # 0..k-1 frontier cells, k = L
    owner = {0: k}
    for j in range(k):
        for r in (j, j + 1):
            if r < k and blab[r] is not None:
                lab = blab[r]
                if lab in owner:
                    p[_find(p, j)] = _find(p, owner[lab])
                else:
                    owner[lab] = j
    blocks: dict = {}
    for j in range(k + 1):
        blocks.setdefault(_find(p, j), set()).add("L" if j == k else j + 1)
    return frozenset(frozenset(b) for b in blocks.values())


def _meet(parts):
    """Common refinement of partitions of the same set."""
    parts = list(parts)
    out = parts[0]
    for q in parts[1:]:
        out = frozenset(a & b for a in out for b in q if a & b)
    return out


def _refines(p, q) -> bool:
    return all(any(a <= b for b in q) for a in p)


def _refinement(states, cls, m):
    """Connection-refinement order on classes: White-wins at the bottom, else
    the class's finest frontier partition refines the other's."""
    members: dict = {}
    for s, c in enumerate(cls):
        members.setdefault(c, []).append(frontier_partition(states[s], len(states[s][1]))
                                         if states[s] != WIN else None)
    canon = {}
    for c, ps in members.items():
        real = [p for p in ps if p is not None]
        canon[c] = None if len(real) < len(ps) else _meet(real)
    R = [[False] * m for _ in range(m)]
    for p in range(m):
        for q in range(m):
            a, b = canon[p], canon[q]
            R[p][q] = a is None or (b is not None and _refines(a, b))
    return R, canon


ORDERS = ("refinement", "simulation")


@lru_cache(maxsize=None)
def strip_model(k: int, order: str = "refinement") -> StripModel:
    if not 1 <= k <= MAX_K:
        raise ResourceLimitError(f"strip height must be 1..{MAX_K}")
    if order not in ORDERS:
        raise InvalidArgumentError(f"order must be one of {ORDERS}")
    nl = 1 << k
    start = start_state(k)
    index = {start: 0}
    states = [start]
    delta = []
    i = 0
    while i < len(states):
        row = []
        for c in range(nl):
            t = step(states[i], c, k)
            if t not in index:
                index[t] = len(states)
                states.append(t)
            row.append(index[t])
        delta.append(row)
        i += 1
    close = [closing(s) for s in states]
    cls = _minimise(states, delta, close, nl)
    m = max(cls) + 1
    cdelta = [None] * m
    cclose = [0] * m
    for s, c in enumerate(cls):
        if cdelta[c] is None:
            cdelta[c] = [cls[t] for t in delta[s]]
            cclose[c] = close[s]
    sim = _simulation(cdelta, cclose, m, nl)
    ref, _ = _refinement(states, cls, m)
    for p in range(m):
        for q in range(m):
            if ref[p][q] and not sim[p][q]:
                raise PropertyViolation("refinement order is not contained in the simulation order")
    R = ref if order == "refinement" else sim
    for p in range(m):
        for q in range(m):
            if p != q and R[p][q] and R[q][p]:
                raise PropertyViolation(f"{order} order is not antisymmetric")
    names = _names(k, m, R, cdelta, cls[0])
    order_ = sorted(range(m), key=lambda c: (names[c] != "B", names[c] == "T", names[c]))
    pos = {c: i for i, c in enumerate(order_)}
    atoms = [names[c] for c in order_]
    up = [sum(1 << pos[q] for q in range(m) if R[p][q]) for p in order_]
    P = Poset(atoms, name=f"Open{k}" + ("" if order == "refinement" else "s"), up_masks=up)
    C = Poset([f"k{i}" for i in range(nl)], name=f"Col{k}",
              up_masks=[sum(1 << j for j in range(nl) if i & j == i) for i in range(nl)])
    cd = [[pos[cdelta[c][x]] for x in range(nl)] for c in order_]
    transfer = MonotoneMap(product_poset(P, C), P,
                           [cd[i][x] for i in range(m) for x in range(nl)], name=f"f{k}")
    close_map = MonotoneMap(P, BOOL, [cclose[c] for c in order_], name=f"close{k}")
    return StripModel(k, P, C, transfer, close_map, pos[cls[0]], cd, len(states))


def _names(k, m, R, cdelta, start):
    bottom = [c for c in range(m) if all(R[c][q] for q in range(m))]
    top = [c for c in range(m) if all(R[q][c] for q in range(m))]
    names = {}
    if k == 4 and m == 10:
        for name, cols in OUTCOME_NAMES_4.items():
            c = start
            for col in cols:
                c = cdelta[c][column_index(col)]
            names.setdefault(c, name)
        if len(names) == m:
            return names
        names = {}
    rest = iter(f"o{i}" for i in range(1, m + 1))
    for c in range(m):
        names[c] = "B" if c in bottom else "T" if c in top else next(rest)
    return names


def build_outcome_poset(k: int):
    """(outcome poset, transfer map, closing map) for open regions of height k."""
    sm = strip_model(k)
    return sm.poset, sm.transfer, sm.closing


# values of strip positions ------------------------------------------------------------

def parse_grid(k: int, rows):
    """Rows (top first) of B/W/. characters, or a list of black (r, c) stones
    together with a width: ``("stones", n, [(r, c), ...])``."""
    if isinstance(rows, tuple) and rows and rows[0] == "stones":
        _, n, stones = rows
        grid = [["."] * n for _ in range(k)]
        for r, c in stones:
            if not (1 <= r <= k and 1 <= c <= n):
                raise InvalidArgumentError(f"stone ({r},{c}) outside the {k}x{n} strip")
            grid[r - 1][c - 1] = "B"
        return ["".join(row) for row in grid]
    rows = [str(r).strip() for r in rows]
    if len(rows) != k or len({len(r) for r in rows}) > 1:
        raise InvalidArgumentError(f"a strip of height {k} needs {k} rows of equal length")
    return rows


def strip_value(k: int, stones, canonical_each: bool = True):
    """Value of an open position over the outcome poset.  Returns (universe, id)."""
    sm = strip_model(k)
    rows = parse_grid(k, stones)
    n = len(rows[0])
    u = sm.universe
    g = u.atomic(sm.start)
    if canonical_each:
        for c in range(n):
            g = sm.add_column(g, "".join(rows[r][c] for r in range(k)))
        return u, g
    # fold without intermediate reduction, canonicalise once at the end
    uc = universe_for(sm.columns)
    plain = SumMap(sm.transfer, u, uc, reduce=False)
    for c in range(n):
        g = plain(g, sm.column_value("".join(rows[r][c] for r in range(k))))
    return u, canonical_form(u, g)


# best patterns -----------------------------------------------------------------------

@dataclass(frozen=True)
class PatternTriple:
    value: int              # canonical id over the outcome poset
    stones: int
    width: int
    pattern: tuple          # black stones (r, c), row-major

    def key(self):
        return (self.value, self.stones)


def _black_columns(k):
    return [column_fill(i, k).replace("W", ".") for i in range(1 << k)]


def _extend(sm, frontier, width):
    u = sm.universe
    bot = u.bottom
    cands: dict = {}
    for t in frontier:
        for col in _black_columns(sm.k):
            g = sm.add_column(t.value, col)
            if u.tri(g, bot):
                continue            # unacceptable
            added = tuple((r + 1, width) for r, ch in enumerate(col) if ch == "B")
            pat = tuple(sorted(t.pattern + added))
            s = t.stones + len(added)
            old = cands.get((g, s))
            if old is None or pat < old.pattern:
                cands[(g, s)] = PatternTriple(g, s, width, pat)
    items = list(cands.values())
    best = []
    for t in items:
        dominated = False
        for o in items:
            if o is t:
                continue
            if u.leq(t.value, o.value) and o.stones <= t.stones and not (
                    u.leq(o.value, t.value) and t.stones <= o.stones):
                dominated = True
                break
        if not dominated:
            best.append(t)
    best.sort(key=lambda t: (t.stones, t.pattern))
    return best


def best_patterns(k: int, n: int, budget: int = 64):
    """Best triples of width n (one representative per equivalence class)."""
    if n < 0:
        raise InvalidArgumentError("width must be non-negative")
    if n > budget:
        raise ResourceLimitError(f"width {n} exceeds the frontier budget {budget}")
    sm = strip_model(k)
    if not sm.frontiers:
        sm.frontiers.append([PatternTriple(sm.universe.atomic(sm.start), 0, 0, ())])
    while len(sm.frontiers) <= n:
        w = len(sm.frontiers)
        sm.frontiers.append(_extend(sm, sm.frontiers[-1], w))
    return list(sm.frontiers[n])


def triple_multiset(k: int, n: int) -> Counter:
    return Counter(t.key() for t in best_patterns(k, n))


@dataclass
class Period:
    p: Optional[int]
    q: Optional[int]
    base: Optional[int]
    checked_to: int

    @property
    def found(self) -> bool:
        return self.p is not None

    def __iter__(self):
        return iter((self.p, self.q, self.base))


HORIZONS = {1: 10, 2: 12, 3: 14, 4: 16, 5: 14}


def default_horizon(k: int) -> int:
    if k < 1:
        raise InvalidArgumentError("strip height must be positive")
    if k not in HORIZONS:
        raise ResourceLimitError(f"strip height {k} is beyond the supported range 1..5")
    return HORIZONS[k]


def detect_period(k: int, horizon: Optional[int] = None, max_p: int = 6) -> Period:
    """Smallest (p, q, base) with best(n+p) = best(n) shifted by q stones for
    every n >= base up to the horizon.  At least one full period must be
    checked; otherwise the result is inconclusive (p is None)."""
    W = horizon or default_horizon(k)
    ms = [triple_multiset(k, n) for n in range(W + 1)]
    best = None
    for p in range(1, max_p + 1):
        for base in range(1, W - 2 * p + 1):    # width 0 is not a board
            a, b = ms[base], ms[base + p]
            if sum(a.values()) != sum(b.values()) or not a:
                continue
            q = min(s for _, s in b) - min(s for _, s in a)
            ok = all(ms[n + p] == Counter({(g, s + q): c for (g, s), c in ms[n].items()})
                     for n in range(base, W - p + 1))
            if ok:
                best = (p, q, base)
                break
        if best:
            break
    if best is None:
        return Period(None, None, None, W)
    return Period(*best, W)


def _closes_to_top(sm, g) -> bool:
    ub, h = sm.close(g)
    return ub.equivalent(h, ub.top)


def min_stones_direct(k: int, n: int) -> Optional[int]:
    sm = strip_model(k)
    vals = [t.stones for t in best_patterns(k, n) if _closes_to_top(sm, t.value)]
    return min(vals) if vals else None


def min_connecting_stones(k: int, n: int, period: Optional[Period] = None) -> Optional[int]:
    """Fewest black stones forming a virtual connection on a k x n board."""
    if n < 1:
        raise InvalidArgumentError("board width must be positive")
    W = default_horizon(k)
    if n <= W:
        return min_stones_direct(k, n)
    per = period or detect_period(k)
    if not per.found:
        raise ResourceLimitError(f"no period found for k={k}; width {n} is beyond the horizon")
    t = math.ceil((n - W) / per.p)
    m = n - t * per.p
    if m < per.base:
        raise ResourceLimitError("period base lies above the reduced width")
    s = min_stones_direct(k, m)
    return None if s is None else s + t * per.q


# certificate ------------------------------------------------------------------------------

# value tiers of the benefit function, lowest first
BENEFIT_TIERS = [
    ["G21", "G22"],
    ["G1", "G2"],
    ["G13", "G14", "G15", "G16", "G17", "G18"],
    ["G3", "G7", "G23", "G24", "G25", "G26"],
    ["G4", "G5", "G6", "G8"],
    ["G12", "G19", "G20"],
    ["G9", "G27", "G28"],
]
NEG_INF = float("-inf")


def load_best_fixture():
    """The shipped best-pattern fixtures: list of (width, stones, label, [(r, c)])."""
    text = resources.files("hexcgt").joinpath("data/strip/best4.txt").read_text()
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, body = line.partition(":")
        n, s, lab = head.split()
        stones = [tuple(int(v) for v in tok.split(",")) for tok in body.split()]
        out.append((int(n), int(s), lab, stones))
    return out


def fixture_values(k: int = 4) -> dict:
    """Label -> canonical id, each evaluated from its fixture pattern.  All
    patterns sharing a label must agree."""
    vals: dict = {}
    for n, s, lab, stones in load_best_fixture():
        u, g = strip_value(k, ("stones", n, stones))
        if lab in vals and vals[lab] != g:
            raise PropertyViolation(f"fixture patterns labelled {lab} have different values")
        vals[lab] = g
    return vals


def cost_pattern(s: int, n: int) -> int:
    return 6 + 3 * s - 2 * n


def cost_column(s: int) -> int:
    return 3 * s - 2


class Benefit:
    def __init__(self, k: int = 4, values: Optional[dict] = None):
        self.sm = strip_model(k)
        self.u = self.sm.universe
        self.values = values or fixture_values(k)
        self.tiers = [[self.values[x] for x in tier] for tier in BENEFIT_TIERS]
        self._memo: dict = {}

    def __call__(self, g: int):
        r = self._memo.get(g)
        if r is None:
            u = self.u
            if u.tri(g, u.bottom):
                r = NEG_INF
            else:
                r = len(self.tiers)
                for i, tier in enumerate(self.tiers):
                    if any(u.leq(g, h) for h in tier):
                        r = i
                        break
            self._memo[g] = r
        return r


@dataclass
class CertificateReport:
    cases: list = field(default_factory=list)     # (section, description, ok)
    base_patterns: int = 0

    def add(self, section, what, ok):
        self.cases.append((section, what, bool(ok)))

    def count(self, section):
        return sum(1 for s, _, _ in self.cases if s == section)

    @property
    def failures(self):
        return [c for c in self.cases if not c[2]]

    @property
    def ok(self):
        return not self.failures

    def lines(self):
        return [f"{'pass' if ok else 'FAIL'}\t{s}\t{w}" for s, w, ok in self.cases]


def verify_certificate(k: int = 4, exhaustive_base: bool = True) -> CertificateReport:
    if k != 4:
        raise InvalidArgumentError("the certificate is stated for height 4")
    sm = strip_model(k)
    u = sm.universe
    rep = CertificateReport()
    vals = fixture_values(k)
    ben = Benefit(k, vals)
    cols = _black_columns(k)

    # (i) cost arithmetic on every fixture pattern and column
    for n, s, lab, stones in load_best_fixture():
        rep.add("cost", f"{lab} width {n}",
                cost_pattern(s, n) == 6 + 3 * len(stones) - 2 * n)
        for col in cols:
            sc = col.count("B")
            rep.add("cost", f"{lab}+{col}",
                    cost_pattern(s + sc, n + 1) == cost_pattern(s, n) + cost_column(sc))

    # (ii) the benefit table: tier members sit at or below their tier, T at 7
    named = [f"G{i}" for i in range(1, 29)]
    for i, tier in enumerate(BENEFIT_TIERS):
        for lab in tier:
            rep.add("benefit", f"ben({lab}) <= {i}", ben(vals[lab]) <= i)
    rep.add("benefit", "ben(T) = 7", ben(u.top) == 7)
    universe_vals = [vals[x] for x in named] + [u.top]
    for g in universe_vals:
        for h in universe_vals:
            if u.leq(g, h):
                rep.add("benefit", f"monotone {u.format(g)[:20]} <= {u.format(h)[:20]}",
                        ben(g) <= ben(h))

    # (iii) the 464 induction-step cases
    for lab, g in zip(named + ["T"], universe_vals):
        for col in cols:
            h = sm.add_column(g, col)
            c = cost_column(col.count("B"))
            rep.add("step", f"ben({lab}+{col.replace('.', '-')}) <= ben({lab}) + {c}",
                    ben(h) <= ben(g) + c)

    # (iv) base case at width 4
    if exhaustive_base:
        level = {((), 0): u.atomic(sm.start)}
        for _ in range(4):
            nxt = {}
            step_memo: dict = {}
            for (hist, s), g in level.items():
                for ci, col in enumerate(cols):
                    key = (g, ci)
                    if key not in step_memo:
                        step_memo[key] = sm.add_column(g, col)
                    nxt[(hist + (ci,), s + col.count("B"))] = step_memo[key]
            level = nxt
        bad = 0
        rep.base_patterns = len(level)
        for (hist, s), g in level.items():
            if not ben(g) <= cost_pattern(s, 4):
                bad += 1
                rep.add("base", f"pattern {hist}", False)
        rep.add("base", f"{len(level)} width-4 patterns, {bad} failures", bad == 0)
    else:
        for t in best_patterns(k, 4):
            rep.add("base", f"best pattern {t.pattern}",
                    ben(t.value) <= cost_pattern(t.stones, 4))
    return rep
