"""Acceptance criteria 1-9.  Each test records one PASS/FAIL line, printed in
the terminal summary (and directly when run as a script)."""
import math
import random
from collections import Counter

import pytest

from conftest import ACCEPTANCE, DATA, SEED, golden, golden_order, random_game
from hexcgt import hex_region, strip_solver
from hexcgt.algebra import copycat_check, sum_games
from hexcgt.canonical import canonical_form
from hexcgt.enumerate import brute_force_values, enumerate_canonical_passable, increasing_chain
from hexcgt.game_core import universe_for
from hexcgt.monotone import shrink_monotone, to_monotone
from hexcgt.poset import antichain_poset, linear_poset, load_poset


class Criterion:
    def __init__(self, key, title):
        self.key, self.title = key, title
        self.failures = []
        self.checks = 0

    def check(self, cond, what):
        self.checks += 1
        if not cond:
            self.failures.append(what)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        ok = exc_type is None and not self.failures
        detail = self.title
        if exc_type is not None:
            detail += f" ({exc_type.__name__}: {exc})"
        elif self.failures:
            detail += f" ({len(self.failures)} of {self.checks} checks failed: {self.failures[:3]})"
        else:
            detail += f" ({self.checks} checks)"
        ACCEPTANCE[self.key] = (ok, detail)
        print(f"{'PASS' if ok else 'FAIL'}  criterion {self.key}: {detail}")
        assert not self.failures, self.failures
        return False


def catalog_names(cat, defs, u):
    return [next(k for k, v in defs.items() if u.equivalent(g, v)) for g in cat.ids]


def groups(cat, labels, names):
    out: dict = {}
    for i, lab in enumerate(labels):
        out.setdefault(lab, set()).add(names[i])
    return {frozenset(s) for s in out.values()}


# 1 ---------------------------------------------------------------------------------

def test_criterion_1_enumeration_counts():
    with Criterion("1", "enumeration counts") as c:
        cases = [
            (linear_poset(2), 8, None, 3),
            (linear_poset(3), 2, None, 8),
            (linear_poset(4), 4, None, 31),
            (linear_poset(5), 4, [5, 10, 40, 178, 2962], 3195),
            (antichain_poset(2), 2, [4, 11, 291], 306),
            (antichain_poset(3), 1, [5, 33], 38),
        ]
        for P, d, per, total in cases:
            cat = enumerate_canonical_passable(P, d)
            c.check(len(cat) == total, f"{P.name} depth {d}: {len(cat)} != {total}")
            if per:
                c.check(cat.counts() == per, f"{P.name} per depth {cat.counts()}")
        # Bool is closed: depth 1 already gives all three values
        c.check(enumerate_canonical_passable(linear_poset(2), 1).counts()[-1] == 1, "Bool depth 1")


# 2 ---------------------------------------------------------------------------------

def test_criterion_2_golden_catalogs():
    with Criterion("2", "Lin3/Lin4 golden catalogs, Hasse covers, class boxes") as c:
        for n, d, size in ((3, 2, 8), (4, 4, 31)):
            u, defs = golden(n)
            cat = enumerate_canonical_passable(linear_poset(n), d)
            c.check(len(defs) == size and len(cat) == size, f"Lin{n} sizes")
            names = catalog_names(cat, defs, u)
            c.check(sorted(names) == sorted(defs), f"Lin{n} values do not match the golden file")
            for name, g in defs.items():
                c.check(u.equivalent(canonical_form(u, g), g), f"Lin{n} {name} canonical")
                c.check(u.is_passable(g), f"Lin{n} {name} passable")
            covers, left, right = golden_order(n)
            c.check({(names[i], names[j]) for i, j in cat.hasse()} == covers, f"Lin{n} covers")
            c.check(groups(cat, cat.left_class_labels(), names) == left, f"Lin{n} left classes")
            c.check(groups(cat, cat.right_class_labels(), names) == right, f"Lin{n} right classes")
        u3, d3 = golden(3)
        c.check(u3.format(d3["G6"]) == "{{T|a}|B}", "Lin3 G6 form")
        c.check(len(golden_order(3)[0]) == 8, "Lin3 cover count")


# 3 ---------------------------------------------------------------------------------

def test_criterion_3_canonical_fixtures():
    with Criterion("3", "canonical-form fixtures") as c:
        u = universe_for(load_poset(DATA / "posets" / "fork.poset"))
        G = u.parse("{{T|a},{T|{b|B}}|B}")
        c.check(u.is_monotone(G), "G = {K,H|B} is monotone")
        cf = canonical_form(u, G)
        c.check(cf == u.parse("{{T|a},b|B}"), f"canonical form is {u.format(cf)}")
        c.check(u.is_passable(cf) and not u.is_monotone(cf), "canonical form passable, not monotone")

        g = u.parse("{a,b|a}")
        m = to_monotone(u, g)
        c.check(u.is_monotone(m) and u.equivalent(m, g), "to_monotone({a,b|a})")
        g3 = u.parse("{{T|{{T|a},{T|{b|B}}|B}}|a}")
        c.check(u.is_monotone(g3) and u.equivalent(g3, g), "G''' monotone and equivalent")
        c.check(canonical_form(u, g3) == g, "canonical form of G''' is {a,b|a}")
        s = shrink_monotone(u, m)
        c.check(u.is_monotone(s) and u.equivalent(s, g), "shrink_monotone keeps value")


# 4 ---------------------------------------------------------------------------------

def test_criterion_4_property_suites():
    rng = random.Random(SEED)
    with Criterion("4", "randomized property suites (fixed seed)") as c:
        posets = [linear_poset(3), linear_poset(4), antichain_poset(2)]
        for P in posets:
            u = universe_for(P)
            pool = [random_game(u, rng, 3) for _ in range(36)]
            pool += [u.atomic(i) for i in range(len(P))]
            passable = [g for g in pool if u.is_passable(g)]
            for g in pool:
                c.check(u.leq(g, g), "reflexivity")
            leq = {(g, h): u.leq(g, h) for g in pool for h in pool}
            tri = {(g, h): u.tri(g, h) for g in pool for h in pool}
            for g in pool:
                for h in pool:
                    for k in pool:
                        if tri[g, h] and leq[h, k]:
                            c.check(tri[g, k], "G <| H <= K implies G <| K")
                        if leq[g, h] and tri[h, k]:
                            c.check(tri[g, k], "G <= H <| K implies G <| K")
                        if leq[g, h] and leq[h, k]:
                            c.check(leq[g, k], "G <= H <= K implies G <= K")
            for _ in range(600):
                g = random_game(u, rng, 3)
                if u.is_atomic(g):
                    continue
                h = random_game(u, rng, 2)
                c.check(u.tri(h, g) == u.equivalent(g, u.add_left(g, h)), "gift horse")
                c.check(u.leq(g, u.add_left(g, h)), "more options")
                c.check(u.leq(u.add_right(g, h), g), "more right options")
                if u.is_monotone(g):
                    c.check(u.is_passable(g), "monotone implies passable")
                if u.is_passable(g):
                    cf = canonical_form(u, g)
                    c.check(u.is_passable(cf) and u.equivalent(cf, g), "canonical form passable")
            for g in passable[:12]:
                c.check(u.is_passable(to_monotone(u, g)), "constructed monotone game")
            for _ in range(150):
                a, b = rng.sample(passable, 2)
                j = u.join([a, b])
                c.check(u.leq(a, j) and u.leq(b, j), "join is an upper bound")
                c.check(u.is_passable(j), "join of passable games is passable")
                for x in pool:
                    if leq[a, x] and leq[b, x]:
                        c.check(u.leq(j, x), "join is least among sampled bounds")

        # sum monotonicity over passable games, Lin3 x Bool
        u3, ub = universe_for(linear_poset(3)), universe_for(linear_poset(2))
        cat3 = enumerate_canonical_passable(linear_poset(3), 2).ids
        catb = enumerate_canonical_passable(linear_poset(2), 1).ids
        extra = [g for g in (random_game(u3, rng, 2) for _ in range(60)) if u3.is_passable(g)]
        lhs = cat3 + extra
        for g in lhs:
            for g2 in lhs:
                if not u3.leq(g, g2):
                    continue
                for h in catb:
                    uc, s1 = sum_games(u3, g, ub, h)
                    _, s2 = sum_games(u3, g2, ub, h)
                    c.check(uc.leq(s1, s2), "sum monotone on passable games")

        # the non-monotonicity counterexample, reproduced exactly
        G, G2, H = u3.parse("a"), u3.parse("{a|a}"), ub.parse("{B|T}")
        c.check(u3.equivalent(G, G2), "[a] equivalent to {a|a}")
        uc, s1 = sum_games(u3, G, ub, H)
        _, s2 = sum_games(u3, G2, ub, H)
        c.check(s1 == uc.parse("{(a,B)|(a,T)}"), "G+H printed form")
        c.check(s2 == uc.parse("{{(a,B)|(a,B)},{(a,B)|(a,T)}|{(a,T)|(a,T)},{(a,B)|(a,T)}}"),
                "G'+H printed form")
        c.check(not uc.leq(s1, s2) and not uc.leq(s2, s1), "G+H and G'+H incomparable")

        # copy-cat for every Lin3 catalog value
        for g in cat3:
            rep = copycat_check(u3, g, others=cat3)
            c.check(rep.ok, f"copy-cat {u3.format(g)}: {rep.failures[:1]}")

        # brute force agrees with the engine
        for P, d in ((linear_poset(2), 2), (linear_poset(3), 2)):
            u = universe_for(P)
            bf = [x for lev in brute_force_values(P, d) for x in lev]
            cat = enumerate_canonical_passable(P, d)
            c.check(set(bf) == set(cat.ids) and len(bf) == len(cat.ids), f"brute force {P.name}")
        assert c.checks >= 10_000, c.checks


# 5 ---------------------------------------------------------------------------------

def test_criterion_5_hex_realizability():
    with Criterion("5", "Hex realizability positions and Catalan counts") as c:
        gold = {3: golden(3), 4: golden(4)}
        groups_seen = Counter()
        for path in sorted((DATA / "regions").glob("*.region")):
            r = hex_region.load_region(path)
            if r.label is None:
                continue
            if r.name.startswith("three-terminal"):
                groups_seen["three"] += 1
                c.check(hex_region.outcome_of(r, "") == r.label, f"{r.name}")
                continue
            u, g = hex_region.region_value(r)
            if r.name.startswith("lin3"):
                groups_seen["lin3-" + r.quotient] += 1
                gu, defs = gold[3]
                want = defs[r.label]
            elif r.name.startswith("lin4"):
                groups_seen["lin4"] += 1
                gu, defs = gold[4]
                want = defs[r.label]
            else:
                groups_seen["other"] += 1
                gu, want = u, u.parse(r.label)
            c.check(gu is u and u.equivalent(g, want), f"{r.name}: {u.format(g)} vs {r.label}")
        lin2 = sorted((DATA / "regions").glob("lin2_*.region"))
        realizability = (len(lin2), groups_seen["lin3-gap2"],
                         groups_seen["lin3-one-sided-fork"], groups_seen["lin4"])
        c.check(realizability == (3, 8, 8, 31), f"fixture counts {realizability}")
        for name in ("lin2_bot", "lin2_star", "lin2_top"):
            r = hex_region.load_region(DATA / "regions" / f"{name}.region")
            u, g = hex_region.region_value(r)
            c.check(u.equivalent(g, u.parse(r.label)), name)
        for n, want in ((2, 2), (3, 5), (4, 14), (5, 42)):
            r = hex_region.n_terminal_region(n, radius=2)
            got = len(hex_region.realized_outcomes(r, budget=20))
            c.check(got == want, f"{n} terminals: {got} outcomes")


# 6 ---------------------------------------------------------------------------------

P_VALUE = ("{{T|g},{T|{{T|h},{T|e}|{h|B},{e|B}}}|{g|{{g|d},{g|b}|{d|B},{b|B}}},"
           "{{{T|h},{T|g}|{h|d},{g|d}},{{T|h},{T|e}|{h|B},{e|B}},{{T|g},{T|e}|{g|b},{e|b}}"
           "|{{h|d}|B},{{g|d},{g|b}|{d|B},{b|B}},{{e|b}|B}}}")
STRIP4_COVERS = {("B", "a"), ("B", "b"), ("B", "d"), ("a", "e"), ("a", "f"), ("b", "e"),
                 ("b", "g"), ("c", "g"), ("d", "c"), ("d", "f"), ("d", "h"), ("e", "T"),
                 ("f", "T"), ("g", "T"), ("h", "T")}


def test_criterion_6_strip_pipeline():
    with Criterion("6", "k=4 strip pipeline and closed forms for k=1..3") as c:
        sm = strip_solver.strip_model(4)
        P = sm.poset
        c.check(len(P) == 10, f"{len(P)} outcomes")
        c.check(set(P.covers()) == STRIP4_COVERS, "outcome Hasse diagram")
        c.check(len(sm.columns) == 16, "16 columns")
        c.check(sm.f("c", "k10") == "d", "f(c, k10) = d")
        u, g = strip_solver.strip_value(4, ("stones", 7, [(2, 3), (2, 6), (3, 4), (3, 7)]))
        c.check(g == u.parse(P_VALUE), f"example position value {u.format(g)[:40]}...")

        vals = strip_solver.fixture_values(4)
        fig: dict = {}
        for n, s, lab, _ in strip_solver.load_best_fixture():
            fig.setdefault(n, Counter())[(vals[lab], s)] += 1
        for n in range(4, 8):
            got = strip_solver.triple_multiset(4, n)
            c.check(got == fig[n], f"best triples at width {n}")
        c.check([sum(fig[n].values()) for n in range(4, 8)] == [13, 11, 13, 13], "fixture sizes")

        c.check(tuple(strip_solver.detect_period(4)) == (3, 2, 4), "period (3, 2, 4)")
        table = [strip_solver.min_connecting_stones(4, n) for n in range(4, 17)]
        c.check(table == [1, 2, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 9], f"table {table}")
        for n in range(4, 31):
            c.check(strip_solver.min_connecting_stones(4, n) == math.ceil(2 * n / 3 - 2), f"k=4 n={n}")

        forms = {1: lambda n: n, 2: lambda n: math.ceil(2 * (n - 1) / 3),
                 3: lambda n: math.ceil(2 * n / 3 - 1)}
        for k, form in forms.items():
            # an empty board narrower than its height is already connected
            for n in range(k, 16):
                got = strip_solver.min_connecting_stones(k, n)
                c.check(got == form(n), f"k={k} n={n}: {got} vs {form(n)}")
        c.check(strip_solver.min_connecting_stones(3, 2) == 0, "3x2 board needs no stones")


# 7 ---------------------------------------------------------------------------------

def test_criterion_7_certificate():
    with Criterion("7", "width-4 certificate") as c:
        rep = strip_solver.verify_certificate(4)
        c.check(rep.count("step") == 464, f"{rep.count('step')} step cases")
        c.check(rep.base_patterns == 65536, f"{rep.base_patterns} base patterns")
        c.check(rep.ok, f"failures {rep.failures[:3]}")


# 8 ---------------------------------------------------------------------------------

def test_criterion_8_falsification_guards():
    rng = random.Random(SEED)
    with Criterion("8", "component delta fuzz, 4-terminal star sweep, octagon") as c:
        board = hex_region.Region("board", [(r, q) for r in range(7) for q in range(7)])
        worst = 0
        for _ in range(10_000):
            comp = "".join(rng.choice("BW") for _ in board.empty)
            blacks = [cell for cell, ch in zip(board.empty, comp) if ch == "B"]
            if not blacks:
                continue
            d = hex_region.component_delta_check(board, comp, rng.choice(blacks))
            worst = max(worst, d)
            c.check(d <= 2, "delta above 2")
        c.check(worst == 2, f"largest delta seen {worst}")
        stats: dict = {}
        c.check(hex_region.no_star_4terminal(4, stats), "4-terminal sweep")
        c.check(stats["regions"] > 1000, f"{stats['regions']} regions swept")
        c.check(hex_region.is_star_valued(hex_region.octagon_region()), "octagon is {T|B}")


# 9 ---------------------------------------------------------------------------------

def test_criterion_9_increasing_chain():
    with Criterion("9a", "increasing chains over antichains (stretch)") as c:
        for k in (2, 3):
            u = universe_for(antichain_poset(k))
            chain = increasing_chain(u, 10)
            c.check(len(chain) == 11, "chain length")
            for i in range(10):
                c.check(u.leq(chain[i], chain[i + 1]) and not u.leq(chain[i + 1], chain[i]),
                        f"G{i} < G{i + 1}")
            for g in chain:
                c.check(u.is_passable(g), "passable")


@pytest.mark.slow
def test_criterion_9_k5_min_stones():
    with Criterion("9b", "k=5 min stones (stretch, slow)") as c:
        c.check(strip_solver.min_connecting_stones(5, 6) == 2, "5x6 exception")
        for n in range(7, 13):
            c.check(strip_solver.min_connecting_stones(5, n) == math.ceil(2 * n / 3 - 3), f"n={n}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
