"""Hex regions as board graphs: completions, outcomes and game values.

Coordinates are pairs (r, c).  Cell (r, c) touches (r±1, c), (r, c±1),
(r+1, c-1) and (r-1, c+1) when those cells are present, unless adjacency
overrides say otherwise.  Black plays Left.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from .algebra import MonotoneMap
from .canonical import canonical_form
from .errors import (
    InvalidArgumentError,
    ParseError,
    PropertyViolation,
    ResourceLimitError,
)
from .game_core import universe_for
from .poset import (
    Poset,
    is_non_crossing,
    linear_poset,
    non_crossing_poset,
    partition_name,
)

BLACK, WHITE, EMPTY = "B", "W", "."
HEX_DIRS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))  # cyclic order
DEFAULT_BUDGET = 14


def hex_neighbors(cell):
    r, c = cell
    return [(r + dr, c + dc) for dr, dc in HEX_DIRS]


@dataclass(frozen=True)
class Terminal:
    """A terminal group: pre-placed stones, or a board edge touching ``cells``."""
    cells: tuple
    edge: bool = False


@dataclass
class Region:
    name: str
    cells: list
    stones: dict = field(default_factory=dict)
    terminals: list = field(default_factory=list)
    wterminals: list = field(default_factory=list)
    adj_add: list = field(default_factory=list)
    adj_remove: list = field(default_factory=list)
    external: list = field(default_factory=list)
    gap: Optional[tuple] = None
    quotient: Optional[str] = None
    label: Optional[str] = None

    def __post_init__(self):
        self.cells = [tuple(c) for c in self.cells]
        self.external = [tuple(c) for c in self.external]
        allc = self.cells + self.external
        if len(set(allc)) != len(allc):
            raise InvalidArgumentError(f"region {self.name}: duplicate cell")
        self.index = {c: i for i, c in enumerate(allc)}
        for c, col in self.stones.items():
            if c not in self.index or c in self.external:
                raise InvalidArgumentError(f"region {self.name}: stone on unknown cell {c}")
            if col not in (BLACK, WHITE):
                raise InvalidArgumentError(f"region {self.name}: bad stone colour {col!r}")
        if self.gap is not None and self.gap not in self.index:
            raise InvalidArgumentError(f"region {self.name}: gap {self.gap} is not a cell")
        self._build_graph()
        self._check_terminals()
        self.empty = [c for c in self.cells if c not in self.stones]

    # graph -----------------------------------------------------------------

    def _build_graph(self):
        n = len(self.index)
        adj = [set() for _ in range(n)]
        for c, i in self.index.items():
            for d in hex_neighbors(c):
                j = self.index.get(d)
                if j is not None:
                    adj[i].add(j)
        for a, b in self.adj_add:
            i, j = self._idx(a), self._idx(b)
            adj[i].add(j)
            adj[j].add(i)
        for a, b in self.adj_remove:
            i, j = self._idx(a), self._idx(b)
            adj[i].discard(j)
            adj[j].discard(i)
        self.adj = [sorted(s) for s in adj]
        self.cell_edges = [(i, j) for i in range(n) for j in self.adj[i] if i < j]
        # virtual nodes for edge terminals follow the cells
        self.bnode, self.wnode = [], []
        self.bedges, self.wedges = [], []
        nxt = n
        for terms, nodes, edges in ((self.terminals, self.bnode, self.bedges),
                                     (self.wterminals, self.wnode, self.wedges)):
            for t in terms:
                if t.edge:
                    nodes.append(nxt)
                    edges.extend((nxt, self._idx(c)) for c in t.cells)
                    nxt += 1
                else:
                    nodes.append(self._idx(t.cells[0]))
        self.nnodes = nxt

    def _idx(self, c):
        try:
            return self.index[tuple(c)]
        except KeyError:
            raise InvalidArgumentError(f"region {self.name}: unknown cell {tuple(c)}") from None

    def _check_terminals(self):
        seen = set()
        for kind, terms, col in (("terminal", self.terminals, BLACK),
                                 ("wterminal", self.wterminals, WHITE)):
            for k, t in enumerate(terms, 1):
                if not t.cells:
                    raise InvalidArgumentError(f"region {self.name}: empty {kind} {k}")
                for c in t.cells:
                    self._idx(c)
                if t.edge:
                    continue
                if any(self.stones.get(c) != col for c in t.cells):
                    raise InvalidArgumentError(
                        f"region {self.name}: {kind} {k} must consist of {col} stones")
                if seen & set(t.cells):
                    raise InvalidArgumentError(f"region {self.name}: terminals overlap")
                seen |= set(t.cells)
                # connected among its own stones
                own = {self.index[c] for c in t.cells}
                stack, reach = [next(iter(own))], set()
                while stack:
                    i = stack.pop()
                    if i in reach:
                        continue
                    reach.add(i)
                    stack.extend(j for j in self.adj[i] if j in own)
                if reach != own:
                    raise InvalidArgumentError(
                        f"region {self.name}: {kind} {k} is not connected")

    # colourings ------------------------------------------------------------

    def colours(self, completion, external=()):
        """Colour list over all cells for a completion of the empty cells.

        ``completion`` is a dict cell->colour or a string/sequence in the
        order of ``self.empty``; ``external`` colours the external cells.
        """
        col = [None] * len(self.index)
        for c, s in self.stones.items():
            col[self.index[c]] = s
        if isinstance(completion, dict):
            if set(completion) != set(self.empty):
                raise InvalidArgumentError("completion must be total over the empty cells")
            for c, s in completion.items():
                col[self.index[c]] = s
        else:
            if len(completion) != len(self.empty):
                raise InvalidArgumentError("completion must be total over the empty cells")
            for c, s in zip(self.empty, completion):
                col[self.index[c]] = s
        if len(external) != len(self.external):
            raise InvalidArgumentError("external colouring has the wrong length")
        for c, s in zip(self.external, external):
            col[self.index[c]] = s
        if any(s not in (BLACK, WHITE) for s in col):
            raise InvalidArgumentError("colours must be B or W")
        return col

    def fill(self, assignment: dict, name=None) -> "Region":
        """Copy of the region with extra stones placed."""
        stones = dict(self.stones)
        stones.update(assignment)
        return Region(name or self.name, self.cells, stones, self.terminals,
                      self.wterminals, self.adj_add, self.adj_remove, self.external,
                      self.gap, self.quotient, self.label)

    def to_text(self) -> str:
        out = [f"region {self.name}"]
        for c in self.cells:
            out.append(f"cell {c[0]} {c[1]} {self.stones.get(c, EMPTY)}")
        for c in self.external:
            out.append(f"external {c[0]} {c[1]}")
        if self.gap is not None:
            out.append(f"gap {self.gap[0]} {self.gap[1]}")
        for kind, terms in (("terminal", self.terminals), ("wterminal", self.wterminals)):
            for k, t in enumerate(terms, 1):
                cells = " ".join(f"({r},{c})" for r, c in t.cells)
                out.append(f"{kind} {k}: {'edge ' if t.edge else ''}{cells}")
        for a, b in self.adj_add:
            out.append(f"adjacency add {a[0]} {a[1]} {b[0]} {b[1]}")
        for a, b in self.adj_remove:
            out.append(f"adjacency remove {a[0]} {a[1]} {b[0]} {b[1]}")
        if self.quotient:
            out.append(f"quotient {self.quotient}")
        if self.label:
            out.append(f"label {self.label}")
        return "\n".join(out) + "\n"


# connectivity ----------------------------------------------------------------

def _find(p, i):
    while p[i] != i:
        p[i] = p[p[i]]
        i = p[i]
    return i


class Snapshot:
    """Black and white connectivity of one fully coloured board."""

    def __init__(self, region: Region, col):
        self.region = region
        self.col = col
        self._b = self._w = None

    def _uf(self, colour, extra_edges):
        p = list(range(self.region.nnodes))
        col = self.col
        for i, j in self.region.cell_edges:
            if col[i] == colour and col[j] == colour:
                p[_find(p, i)] = _find(p, j)
        for v, j in extra_edges:
            if col[j] == colour:
                p[_find(p, v)] = _find(p, j)
        return p

    @property
    def black_roots(self):
        if self._b is None:
            p = self._uf(BLACK, self.region.bedges)
            self._b = [_find(p, v) for v in self.region.bnode]
        return self._b

    @property
    def white_roots(self):
        if self._w is None:
            p = self._uf(WHITE, self.region.wedges)
            self._w = [_find(p, v) for v in self.region.wnode]
        return self._w

    def bconn(self, i, j) -> bool:
        r = self.black_roots
        return r[i - 1] == r[j - 1]

    def wconn(self, i, j) -> bool:
        r = self.white_roots
        return r[i - 1] == r[j - 1]

    def partition(self):
        blocks = {}
        for t, root in enumerate(self.black_roots, 1):
            blocks.setdefault(root, []).append(t)
        return list(blocks.values())

    def colour(self, cell):
        return self.col[self.region.index[tuple(cell)]]


# quotients --------------------------------------------------------------------

@dataclass(frozen=True)
class Quotient:
    """How a fully coloured board (per external colouring) becomes an outcome."""
    name: str
    poset: Callable        # region -> Poset
    classify: Callable     # (region, snap_for) -> atom name
    externals: bool = False


def _nc_poset(region):
    return non_crossing_poset(len(region.terminals))


def _nc_classify(region, snap_for):
    blocks = snap_for(()).partition()
    if not is_non_crossing(blocks):
        raise InvalidArgumentError(
            f"region {region.name}: crossing partition {partition_name(blocks)}")
    return partition_name(blocks)


def _need(region, n, w=None, gap=False):
    # w=None: white terminals are allowed but not consulted
    if len(region.terminals) != n or (w is not None and len(region.wterminals) != w):
        raise InvalidArgumentError(
            f"region {region.name}: quotient needs {n} black and {w or 0} white terminals")
    if gap and region.gap is None:
        raise InvalidArgumentError(f"region {region.name}: quotient needs a gap cell")


def _bool_classify(region, snap_for):
    _need(region, 2)
    return "T" if snap_for(()).bconn(1, 2) else "B"


FORK = Poset.from_covers(["B", "a", "b", "T"],
                         [("B", "a"), ("B", "b"), ("a", "T"), ("b", "T")], name="Fork")


def _fork_classify(region, snap_for):
    # 1/2/3 and 12/3 are identified
    _need(region, 3)
    s = snap_for(())
    if s.bconn(1, 3) and s.bconn(2, 3):
        return "T"
    if s.bconn(2, 3):
        return "a"
    if s.bconn(1, 3):
        return "b"
    return "B"


def _osf_classify(region, snap_for):
    # terminals: 1 and 3 are board edges, 2 is the stone between them
    _need(region, 3)
    s = snap_for(())
    if s.bconn(1, 3):
        return "T"
    return "a" if s.bconn(2, 3) else "B"


def _osf_gap_classify(region, snap_for):
    _need(region, 2, 2, gap=True)
    s = snap_for(())
    if s.bconn(1, 2):
        return "T"
    if s.wconn(1, 2):
        return "B"
    return "b" if s.colour(region.gap) == BLACK else "a"


def _gap2_classify(region, snap_for):
    # the gap is an external cell; both of its colours are inspected
    _need(region, 2)
    if len(region.external) != 1:
        raise InvalidArgumentError(f"region {region.name}: gap2 needs one external cell")
    if snap_for((WHITE,)).bconn(1, 2):
        return "T"
    return "a" if snap_for((BLACK,)).bconn(1, 2) else "B"


QUOTIENTS = {
    "none": Quotient("none", _nc_poset, _nc_classify),
    "bool": Quotient("bool", lambda r: linear_poset(2), _bool_classify),
    "fork": Quotient("fork", lambda r: FORK, _fork_classify),
    "one-sided-fork": Quotient("one-sided-fork", lambda r: linear_poset(3), _osf_classify),
    "one-sided-fork-gap": Quotient("one-sided-fork-gap", lambda r: linear_poset(4),
                                   _osf_gap_classify),
    "gap2": Quotient("gap2", lambda r: linear_poset(3), _gap2_classify, externals=True),
}


def _quotient(region, name=None) -> Quotient:
    q = name or region.quotient or "none"
    try:
        quo = QUOTIENTS[q]
    except KeyError:
        raise InvalidArgumentError(f"unknown region quotient {q!r}") from None
    if region.external and not quo.externals:
        raise InvalidArgumentError(f"quotient {q} does not support external cells")
    return quo


def outcome_poset(region: Region, quotient=None) -> Poset:
    if isinstance(quotient, MonotoneMap):
        return quotient.target
    return _quotient(region, quotient).poset(region)


class _Evaluator:
    """Atom index of the outcome of a completion, optionally mapped."""

    def __init__(self, region, quotient=None):
        self.region = region
        self.f = quotient if isinstance(quotient, MonotoneMap) else None
        self.q = _quotient(region, None if self.f else quotient)
        self.base = self.q.poset(region)
        if self.f is not None and self.f.source != self.base:
            raise InvalidArgumentError("quotient map source must be the region's outcome poset")
        self.poset = self.f.target if self.f else self.base

    def __call__(self, completion) -> int:
        r = self.region
        cache = {}

        def snap_for(ext):
            s = cache.get(ext)
            if s is None:
                s = cache[ext] = Snapshot(r, r.colours(completion, ext))
            return s

        i = self.base.atom(self.q.classify(r, snap_for))
        return self.f(i) if self.f else i


def outcome_of(region: Region, completion, quotient=None) -> str:
    ev = _Evaluator(region, quotient)
    return ev.poset.atoms[ev(completion)]


def _completions(m):
    for bits in itertools.product((WHITE, BLACK), repeat=m):
        yield "".join(bits)


def outcome_table(region: Region, quotient=None, budget=DEFAULT_BUDGET):
    """Outcome index for every completion, keyed by black mask (bit i = empty cell i)."""
    m = len(region.empty)
    if m > budget:
        raise ResourceLimitError(f"region has {m} empty cells; budget is {budget}")
    ev = _Evaluator(region, quotient)
    table = []
    for mask in range(1 << m):
        table.append(ev([BLACK if mask >> i & 1 else WHITE for i in range(m)]))
    return ev.poset, table


def realized_outcomes(region: Region, quotient=None, budget=DEFAULT_BUDGET):
    P, table = outcome_table(region, quotient, budget)
    return sorted({P.atoms[i] for i in table}, key=P.index.__getitem__)


def derived_order(region: Region, quotient=None, budget=DEFAULT_BUDGET):
    """Order on realized outcomes generated by turning single white cells black.

    Returns (poset, realized atom names, set of (lower, upper) name pairs),
    reflexive and transitively closed.
    """
    P, table = outcome_table(region, quotient, budget)
    m = len(region.empty)
    real = sorted(set(table))
    rel = {(a, a) for a in real}
    for mask in range(1 << m):
        for i in range(m):
            if not mask >> i & 1:
                rel.add((table[mask], table[mask | 1 << i]))
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c in real:
                if (b, c) in rel and (a, c) not in rel:
                    rel.add((a, c))
                    changed = True
    names = P.atoms
    return P, [names[a] for a in real], {(names[a], names[b]) for a, b in rel}


def check_outcome_order(region: Region, quotient=None, budget=DEFAULT_BUDGET):
    """Compare the derived order with the outcome poset restricted to realized outcomes.

    Raises PropertyViolation on a monotonicity failure (a flip moving an
    outcome down or sideways); returns the Hasse covers of the derived order.
    """
    P, real, rel = derived_order(region, quotient, budget)
    for a, b in rel:
        if not P.leq_names(a, b):
            raise PropertyViolation(f"outcome order violated: {a} -> {b}")
    want = {(a, b) for a in real for b in real if P.leq_names(a, b)}
    if want != rel:
        missing = sorted(want - rel)
        raise PropertyViolation(f"derived order misses relations {missing}")
    return sorted((a, b) for a, b in rel if a != b
                  and not any((a, c) in rel and (c, b) in rel for c in real if c not in (a, b)))


# game values ---------------------------------------------------------------------

def region_value(region: Region, quotient=None, budget=DEFAULT_BUDGET,
                 cache: bool = True, prune_dead: bool = False):
    """Game value of the region by exhaustive play.  Returns (universe, id)."""
    m = len(region.empty)
    if m > budget:
        raise ResourceLimitError(f"region has {m} empty cells; budget is {budget}")
    if prune_dead:
        dead = dead_cells(region, quotient, budget)
        if dead:
            region = region.fill({c: WHITE for c in dead})
            m = len(region.empty)
    ev = _Evaluator(region, quotient)
    u = universe_for(ev.poset)
    memo: dict = {}

    def go(state):
        if cache:
            r = memo.get(state)
            if r is not None:
                return r
        free = [i for i, s in enumerate(state) if s == EMPTY]
        if not free:
            r = u.atomic(ev(state))
        else:
            L = [go(state[:i] + BLACK + state[i + 1:]) for i in free]
            R = [go(state[:i] + WHITE + state[i + 1:]) for i in free]
            r = canonical_form(u, u.compose(L, R))
        if cache:
            memo[state] = r
        return r

    return u, go(EMPTY * m)


def dead_cells(region: Region, quotient=None, budget=DEFAULT_BUDGET):
    """Empty cells whose colour never changes the outcome of a completion."""
    _, table = outcome_table(region, quotient, budget)
    m = len(region.empty)
    dead = []
    for i in range(m):
        bit = 1 << i
        if all(table[mask] == table[mask | bit] for mask in range(1 << m) if not mask & bit):
            dead.append(region.empty[i])
    return dead


def black_components(region: Region, col) -> int:
    """Number of connected components of black cells (edge nodes ignored)."""
    n = len(region.index)
    p = list(range(n))
    for i, j in region.cell_edges:
        if col[i] == BLACK and col[j] == BLACK:
            p[_find(p, i)] = _find(p, j)
    return len({_find(p, i) for i in range(n) if col[i] == BLACK})


def component_delta_check(region: Region, completion, cell) -> int:
    """Change in black component count when the black ``cell`` turns white."""
    col = region.colours(completion, [WHITE] * len(region.external))
    i = region._idx(cell)
    if col[i] != BLACK:
        raise InvalidArgumentError(f"cell {tuple(cell)} is not black")
    before = black_components(region, col)
    col[i] = WHITE
    delta = black_components(region, col) - before
    if delta > 2:
        raise PropertyViolation(f"flipping {tuple(cell)} added {delta} black components")
    return delta


# 4-terminal sweep --------------------------------------------------------------------

def _normalize(cells):
    r0 = min(r for r, _ in cells)
    c0 = min(c for r, c in cells if r == r0)
    return tuple(sorted((r - r0, c - c0) for r, c in cells))


def _symmetries(cells):
    out = []
    cur = list(cells)
    for _ in range(6):
        cur = [(-c, r + c) for r, c in cur]       # rotate by 60 degrees
        out.append(_normalize(cur))
        out.append(_normalize([(c, r) for r, c in cur]))
    return out


def polyhexes(n: int):
    """Free polyhexes with n cells, one representative each."""
    if n <= 0:
        return []
    level = {((0, 0),)}
    for _ in range(n - 1):
        nxt = set()
        for shape in level:
            s = set(shape)
            for c in shape:
                for d in hex_neighbors(c):
                    if d not in s:
                        nxt.add(min(_symmetries(s | {d})))
        level = nxt
    return sorted(min(_symmetries(s)) for s in level)


def boundary_walk(cells):
    """Boundary sides (cell, direction) in cyclic order, or None if there are holes."""
    s = set(cells)
    sides = [(c, k) for c in cells for k, (dr, dc) in enumerate(HEX_DIRS)
             if (c[0] + dr, c[1] + dc) not in s]
    start = sides[0]
    walk, cur = [], start
    while True:
        walk.append(cur)
        c, k = cur
        k2 = (k + 1) % 6
        nb = (c[0] + HEX_DIRS[k2][0], c[1] + HEX_DIRS[k2][1])
        if nb not in s:
            cur = (c, k2)
        else:
            o = (c[0] + HEX_DIRS[k][0], c[1] + HEX_DIRS[k][1])
            cur = (nb, HEX_DIRS.index((o[0] - nb[0], o[1] - nb[1])))
        if cur == start:
            break
    return walk if len(walk) == len(sides) else None


def four_terminal_regions(max_empty: int):
    """Template family: a hole-free polyhex whose boundary sides are split into
    eight arcs, alternately black and white; black arcs are terminals 1..4."""
    for n in range(1, max_empty + 1):
        for shape in polyhexes(n):
            walk = boundary_walk(shape)
            if walk is None or len(walk) < 8:
                continue
            seen = set()
            E = len(walk)
            for cuts in itertools.combinations(range(1, E), 7):
                bounds = (0,) + cuts + (E,)
                sig = tuple(frozenset(walk[j][0] for j in range(bounds[a], bounds[a + 1]))
                            for a in range(0, 8, 2))
                if sig in seen:
                    continue
                seen.add(sig)
                terms = [Terminal(tuple(sorted(t)), edge=True) for t in sig]
                yield Region(f"poly{n}", list(shape), terminals=terms)


def hex_distance(a, b=(0, 0)) -> int:
    dr, dc = a[0] - b[0], a[1] - b[1]
    return (abs(dr) + abs(dc) + abs(dr + dc)) // 2


def n_terminal_region(n: int, radius: int = 1) -> Region:
    """Empty hexagon of the given radius inside a ring of stones that forms
    n black terminals separated by single white stones."""
    inner = [(r, c) for r in range(-radius, radius + 1) for c in range(-radius, radius + 1)
             if hex_distance((r, c)) <= radius]
    k = radius + 1
    ring, cur = [], (k, 0)
    for d in (HEX_DIRS[2], HEX_DIRS[3], HEX_DIRS[4], HEX_DIRS[5], HEX_DIRS[0], HEX_DIRS[1]):
        for _ in range(k):
            ring.append(cur)
            cur = (cur[0] + d[0], cur[1] + d[1])
    if not 1 <= n <= len(ring) // 2:
        raise InvalidArgumentError(f"a ring of {len(ring)} stones holds at most {len(ring) // 2} terminals")
    # spread n white separators evenly; the stretches between them are black
    cuts = sorted({(i * len(ring)) // n for i in range(n)})
    stones = {c: BLACK for c in ring}
    for i in cuts:
        stones[ring[i]] = WHITE
    terms, cur_t = [], []
    for i in list(range(cuts[0] + 1, len(ring))) + list(range(0, cuts[0])):
        if stones[ring[i]] == WHITE:
            if cur_t:
                terms.append(Terminal(tuple(cur_t)))
            cur_t = []
        else:
            cur_t.append(ring[i])
    if cur_t:
        terms.append(Terminal(tuple(cur_t)))
    return Region(f"ring{n}", inner + ring, stones, terms)


def octagon_region() -> Region:
    """One empty cell touching eight stones that alternate black and white."""
    ring = [(0, 1), (1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (2, -1), (-2, 1)]
    cells = [(0, 0)] + ring
    order = [(0, 1), (1, 0), (2, -1), (1, -1), (0, -1), (-1, 0), (-2, 1), (-1, 1)]
    stones = {c: (BLACK if k % 2 == 0 else WHITE) for k, c in enumerate(order)}
    adj_add = [((0, 0), (2, -1)), ((0, 0), (-2, 1))]
    # the ring stones touch only the centre
    adj_remove = [(a, b) for a in ring for b in ring
                  if a < b and b in hex_neighbors(a)]
    terms = [Terminal((c,)) for c in order[::2]]
    return Region("octagon", cells, stones, terms, adj_add=adj_add, adj_remove=adj_remove)


def is_star_valued(region: Region) -> bool:
    u, g = region_value(region)
    return u.equivalent(g, u.compose([u.top], [u.bottom]))


def no_star_4terminal(max_empty: int, stats: Optional[dict] = None) -> bool:
    """Sweep the template family; raise PropertyViolation if some region is {T|B}."""
    if not 0 <= max_empty <= 7:
        raise ResourceLimitError("no_star_4terminal supports max_empty <= 7")
    count = 0
    for region in four_terminal_regions(max_empty):
        count += 1
        if is_star_valued(region):
            raise PropertyViolation(
                f"4-terminal region with value {{T|B}}:\n{region.to_text()}")
    if stats is not None:
        stats["regions"] = count
    return True


# text format ------------------------------------------------------------------------

_COORD = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def parse_region(text: str) -> Region:
    name, cells, stones = None, [], {}
    terms: dict = {}
    wterms: dict = {}
    adj_add, adj_remove, external = [], [], []
    gap = quotient = label = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        try:
            if kw == "region":
                name = parts[1] if len(parts) > 1 else "region"
            elif kw == "cell":
                c = (int(parts[1]), int(parts[2]))
                cells.append(c)
                st = parts[3] if len(parts) > 3 else EMPTY
                if st not in (BLACK, WHITE, EMPTY):
                    raise ValueError(f"bad cell state {st!r}")
                if st != EMPTY:
                    stones[c] = st
            elif kw in ("terminal", "wterminal"):
                head, _, body = line.partition(":")
                k = int(head.split()[1])
                edge = body.strip().startswith("edge")
                coords = tuple((int(a), int(b)) for a, b in _COORD.findall(body))
                if not coords:
                    raise ValueError("terminal lists no cells")
                (terms if kw == "terminal" else wterms)[k] = Terminal(coords, edge)
            elif kw == "adjacency":
                a = (int(parts[2]), int(parts[3]))
                b = (int(parts[4]), int(parts[5]))
                if parts[1] == "add":
                    adj_add.append((a, b))
                elif parts[1] == "remove":
                    adj_remove.append((a, b))
                else:
                    raise ValueError(f"unknown adjacency action {parts[1]!r}")
            elif kw == "external":
                external.append((int(parts[1]), int(parts[2])))
            elif kw == "gap":
                gap = (int(parts[1]), int(parts[2]))
            elif kw == "quotient":
                quotient = parts[1]
            elif kw == "label":
                label = line.split(None, 1)[1]
            else:
                raise ValueError(f"unknown keyword {kw!r}")
        except (ValueError, IndexError) as e:
            raise ParseError(f"region file: {e}", ln, 1) from None
    if name is None:
        raise ParseError("region file has no 'region' line", 1, 1)
    for d, what in ((terms, "terminal"), (wterms, "wterminal")):
        if sorted(d) != list(range(1, len(d) + 1)):
            raise ParseError(f"{what} numbers must be 1..n")
    return Region(name, cells, stones, [terms[k] for k in sorted(terms)],
                  [wterms[k] for k in sorted(wterms)], adj_add, adj_remove,
                  external, gap, quotient, label)


def load_region(path) -> Region:
    with open(path) as fh:
        return parse_region(fh.read())
