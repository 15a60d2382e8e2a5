import random
from functools import lru_cache

import pytest

from conftest import DATA, SEED, golden
from hexcgt import hex_region as hx
from hexcgt.algebra import MonotoneMap
from hexcgt.errors import InvalidArgumentError, ParseError, PropertyViolation, ResourceLimitError
from hexcgt.poset import linear_poset

REGIONS = DATA / "regions"


def load(name):
    return hx.load_region(REGIONS / f"{name}.region")


def test_three_terminal_outcomes():
    r = load("three_terminal")
    assert sorted(hx.realized_outcomes(r)) == sorted(["1/2/3", "1/23", "13/2", "12/3", "123"])
    assert hx.check_outcome_order(r) == sorted([
        ("1/2/3", "1/23"), ("1/2/3", "13/2"), ("1/2/3", "12/3"),
        ("1/23", "123"), ("13/2", "123"), ("12/3", "123")])
    for lab in ("1_2_3", "1_23", "13_2", "12_3", "123"):
        filled = load(f"three_terminal_{lab}")
        assert hx.outcome_of(filled, "") == lab.replace("_", "/")


def test_fork_and_gap_orders():
    assert hx.check_outcome_order(load("fork")) == [("B", "a"), ("B", "b"), ("a", "T"), ("b", "T")]
    assert hx.check_outcome_order(load("gap")) == [("B", "a"), ("a", "T")]
    for lab in "BaT":
        r = load(f"gap_{lab}")
        assert hx.outcome_of(r, "") == lab


def test_lin3_fixture_values_and_pruning():
    gu, defs = golden(3)
    for kind in ("gap", "fork"):
        for i in range(8):
            r = load(f"lin3_{kind}_G{i}")
            u, g = hx.region_value(r)
            assert u.equivalent(g, defs[f"G{i}"])
            assert hx.region_value(r, prune_dead=True)[1] == g
            assert hx.region_value(r, cache=False)[1] == g


def test_quotient_as_map():
    # collapse the gap quotient onto Bool: only T counts
    r = load("lin3_gap_G5")
    P = hx.outcome_poset(r)
    f = MonotoneMap.from_function(P, linear_poset(2), lambda a: "T" if a == "T" else "B")
    u, g = hx.region_value(r, f)
    assert u.poset == linear_poset(2)
    gu, defs = golden(3)
    assert u.format(g) == "{T|B}"


def test_dead_cells():
    r = load("lin4_forkgap_G0")
    dead = hx.dead_cells(r)
    assert set(dead) <= set(r.empty)


def test_budget_guard():
    r = hx.n_terminal_region(4, radius=2)
    with pytest.raises(ResourceLimitError):
        hx.region_value(r)


def test_component_delta():
    fl = hx.Region("flower", [(0, 0)] + list(hx.hex_neighbors((0, 0))))
    ns = list(hx.hex_neighbors((0, 0)))
    comp = "".join("B" if c == (0, 0) or ns.index(c) % 2 == 0 else "W" for c in fl.empty)
    assert hx.component_delta_check(fl, comp, (0, 0)) == 2
    with pytest.raises(InvalidArgumentError):
        hx.component_delta_check(fl, comp, (1, -1))


def test_octagon_is_star_but_hex_templates_are_not():
    assert hx.is_star_valued(hx.octagon_region())
    stats = {}
    assert hx.no_star_4terminal(3, stats)
    assert stats["regions"] == 87
    with pytest.raises(ResourceLimitError):
        hx.no_star_4terminal(8)


def test_catalan_small():
    # radius 1 suffices up to four terminals; five need radius 2 (acceptance suite)
    for n, want in ((2, 2), (3, 5), (4, 14)):
        assert len(hx.realized_outcomes(hx.n_terminal_region(n, 1))) == want
    assert len(hx.realized_outcomes(hx.n_terminal_region(5, 1))) < 42


def test_region_text_round_trip():
    for name in ("fork", "gap", "lin4_forkgap_G17", "three_terminal"):
        r = load(name)
        r2 = hx.parse_region(r.to_text())
        assert r2.cells == r.cells and r2.stones == r.stones
        assert r2.terminals == r.terminals and r2.quotient == r.quotient
        if len(r.empty) <= 8:
            assert hx.region_value(r2)[1] == hx.region_value(r)[1]


@pytest.mark.parametrize("text", [
    "cell 0 0\n",
    "region x\ncell 0 zero\n",
    "region x\ncell 0 0 Q\n",
    "region x\ncell 0 0\nterminal 2: (0,0)\n",
    "region x\nfrobnicate\n",
    "region x\ncell 0 0\nterminal 1:\n",
])
def test_region_parse_errors(text):
    with pytest.raises(ParseError):
        hx.parse_region(text)


def test_region_semantic_errors():
    with pytest.raises(InvalidArgumentError):
        hx.parse_region("region x\ncell 0 0\ncell 0 0\n")
    with pytest.raises(InvalidArgumentError):
        hx.parse_region("region x\ncell 0 0\nterminal 1: (5,5)\n")


def test_crossing_partition_rejected():
    cells = [(0, 0), (0, 1), (1, 0), (1, 1)]
    # four single-stone terminals on a 2x2 rhombus, no empty cells
    st = {(0, 0): "B", (1, 1): "B", (0, 1): "B", (1, 0): "W"}
    r = hx.Region("cross", cells, st, [hx.Terminal(((0, 0),)), hx.Terminal(((0, 1),)),
                                       hx.Terminal(((1, 1),))])
    assert hx.outcome_of(r, "") == "123"


# n-terminal limit -------------------------------------------------------------------

def _groups(region, state):
    col = region.colours(state, ["W"] * len(region.external))
    p = list(range(len(region.index)))

    def find(x):
        while p[x] != x:
            x = p[x]
        return x

    for i, j in region.cell_edges:
        if col[i] == "B" and col[j] == "B":
            p[find(i)] = find(j)
    roots = [find(region.index[t.cells[0]]) for t in region.terminals]
    return len(set(roots)), max(roots.count(x) for x in roots)


def _solve(region, free, measure):
    """White's best result (min-max) with ``free`` extra White moves up front,
    then alternating play with White to move."""
    @lru_cache(None)
    def go(state, k, white):
        if "." not in state:
            return measure(_groups(region, state))
        nxt = [state[:i] + ("W" if white or k else "B") + state[i + 1:]
               for i, c in enumerate(state) if c == "."]
        vals = [go(s, k - 1 if k else 0, True if k else not white) for s in nxt]
        return max(vals) if (white or k) else min(vals)
    return go("." * len(region.empty), free, True)


def _random_boards(rng, count):
    cells = [(r, c) for r in range(4) for c in range(4)]
    for _ in range(count):
        n = rng.randint(3, 6)
        black = rng.sample(cells, n)
        rest = [c for c in cells if c not in black]
        white = rng.sample(rest, len(rest) - rng.randint(5, 8))
        st = {c: "B" for c in black}
        st.update({c: "W" for c in white})
        yield hx.Region("fuzz", cells, st, [hx.Terminal((c,)) for c in black])


def test_free_white_moves_split_at_most_2k_plus_1_ways():
    rng = random.Random(SEED)
    count_groups = lambda g: g[0]            # noqa: E731
    checked = 0
    for r in _random_boards(rng, 600):
        if _solve(r, 0, count_groups) != 1:
            continue
        for k in (1, 2):
            assert _solve(r, k, count_groups) <= 2 * k + 1
            checked += 1
    assert checked > 100


def test_single_white_move_can_halve_a_group():
    # six terminals, all joinable; one free White move leaves two groups of three
    r = hx.Region("halve", [(r, c) for r in range(4) for c in range(4)],
                  {(0, 0): "W", (0, 2): "W", (1, 1): "W", (1, 2): "W",
                   (0, 3): "B", (1, 3): "B", (2, 1): "B", (2, 3): "B", (3, 0): "B", (3, 1): "B"},
                  [hx.Terminal((c,)) for c in [(2, 1), (3, 0), (1, 3), (3, 1), (0, 3), (2, 3)]])
    assert _solve(r, 0, lambda g: g[0]) == 1
    largest = -_solve(r, 1, lambda g: -g[1])
    assert largest == 3
    assert _solve(r, 1, lambda g: g[0]) == 2


def test_octagon_breaks_delta_bound():
    with pytest.raises(PropertyViolation):
        hx.component_delta_check(*_octagon_split())


def _octagon_split():
    oc = hx.octagon_region()
    # treat the ring stones as empty so the centre can join four black arms
    cells = oc.cells
    reg = hx.Region("oct-open", cells, {}, [], adj_add=oc.adj_add, adj_remove=oc.adj_remove)
    order = [(0, 1), (1, 0), (2, -1), (1, -1), (0, -1), (-1, 0), (-2, 1), (-1, 1)]
    col = {c: ("B" if k % 2 == 0 else "W") for k, c in enumerate(order)}
    col[(0, 0)] = "B"
    comp = "".join(col[c] for c in reg.empty)
    return reg, comp, (0, 0)
