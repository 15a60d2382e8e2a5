"""Command-line entry point.

Exit codes: 0 success, 2 parse error, 3 precondition error, 4 resource
limit, 5 property violation.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

from . import algebra, canonical, enumerate as enum_mod, hex_region, lr_equiv, monotone
from . import strip_solver
from .errors import HexcgtError, InvalidArgumentError
from .game_core import universe_for
from .poset import (
    antichain_poset,
    linear_poset,
    load_poset,
    non_crossing_poset,
    parse_poset,
)


# output -------------------------------------------------------------------------

class Out:
    def __init__(self, fmt, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def human(self, line=""):
        if self.fmt == "human":
            print(line, file=self.stream)

    def rec(self, key, value):
        if self.fmt == "records":
            print(f"{key}\t{value}", file=self.stream)

    def both(self, key, value, line=None):
        if self.fmt == "records":
            self.rec(key, value)
        else:
            self.human(value if line is None else line)


# input helpers --------------------------------------------------------------------

def resolve_poset(spec: str):
    if os.path.exists(spec):
        return load_poset(spec)
    low = spec.lower()
    m = re.fullmatch(r"(lin|anti|nc)(\d+)", low)
    if m:
        n = int(m.group(2))
        return {"lin": linear_poset, "anti": antichain_poset, "nc": non_crossing_poset}[m.group(1)](n)
    if low == "bool":
        return linear_poset(2)
    data = resources.files("hexcgt").joinpath(f"data/posets/{low}.poset")
    if data.is_file():
        return parse_poset(data.read_text())
    raise InvalidArgumentError(f"unknown poset {spec!r}")


def read_text(arg: str) -> str:
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read().strip()
    return arg


def game_arg(u, arg):
    return u.parse(read_text(arg))


# subcommands ----------------------------------------------------------------------

def cmd_enumerate(a, out):
    P = resolve_poset(a.poset)
    cat = enum_mod.enumerate_canonical_passable(P, a.depth, budget_nodes=a.budget_nodes,
                                                budget_mb=a.budget_mb)
    names = cat.names()
    for i, g in enumerate(cat.ids):
        form = cat.format(i)
        out.both("value", f"{names[i]}\t{cat.depth[i]}\t{form}")
    out.rec("count", len(cat))
    out.rec("per_depth", " ".join(map(str, cat.counts())))
    if a.hasse:
        for i, j in sorted(cat.hasse()):
            out.both("cover", f"{names[i]} {names[j]}", f"cover {names[i]} < {names[j]}")
    if a.classes:
        for side, labels in (("left", cat.left_class_labels()), ("right", cat.right_class_labels())):
            groups: dict = {}
            for i, lab in enumerate(labels):
                groups.setdefault(lab, []).append(names[i])
            for members in groups.values():
                if len(members) > 1:
                    out.both(side, " ".join(members), f"{side} class: {' '.join(members)}")
    return 0


def cmd_canon(a, out):
    u = universe_for(resolve_poset(a.poset))
    g = game_arg(u, a.game)
    if a.trace:
        tr = canonical.Trace()
        c = canonical.canonical_form(u, g, tr)
        for line in tr.lines(u):
            out.both("step", line)
    else:
        c = canonical.canonical_form(u, g)
    out.both("canonical", u.format(c))
    return 0


def relation(u, g, h) -> str:
    le, ge = u.leq(g, h), u.leq(h, g)
    if le and ge:
        return "equivalent"
    if le:
        return "less"
    if ge:
        return "greater"
    return "incomparable"


def cmd_compare(a, out):
    u = universe_for(resolve_poset(a.poset))
    g, h = game_arg(u, a.g), game_arg(u, a.h)
    out.both("relation", relation(u, g, h))
    out.rec("leq", int(u.leq(g, h)))
    out.rec("geq", int(u.leq(h, g)))
    out.rec("tri", int(u.tri(g, h)))
    out.rec("tri_rev", int(u.tri(h, g)))
    return 0


def game_depth(u, g) -> int:
    d: dict = {}
    for x in u.positions(g):
        kids = u.left[x] + u.right[x] if not u.is_atomic(x) else ()
        d[x] = 1 + max(d[y] for y in kids) if kids else 0
    return d[g]


def cmd_monotonize(a, out):
    u = universe_for(resolve_poset(a.poset))
    g = game_arg(u, a.game)
    if a.semi:
        h = monotone.to_semi_monotone(u, g)
    else:
        h = monotone.to_monotone(u, g)
    stages = [("input", g), ("witness", h)]
    if a.shrink and not a.semi:
        h = monotone.shrink_monotone(u, h)
        stages.append(("shrunk", h))
    out.both("result", u.format(h))
    for name, x in stages:
        out.both(name, f"depth {game_depth(u, x)} nodes {u.node_count(x)}",
                 f"{name:8s}depth {game_depth(u, x)} nodes {u.node_count(x)}")
    out.both("equivalent", int(u.equivalent(g, h)), f"equivalent {'yes' if u.equivalent(g, h) else 'no'}")
    return 0


def cmd_sum(a, out):
    ua = universe_for(resolve_poset(a.poset))
    ub = universe_for(resolve_poset(a.poset2 or a.poset))
    uc, s = algebra.sum_games(ua, game_arg(ua, a.g), ub, game_arg(ub, a.h))
    if a.canonical:
        s = canonical.canonical_form(uc, s)
    out.both("sum", uc.format(s))
    return 0


def cmd_map(a, out):
    src = resolve_poset(a.poset)
    tgt = resolve_poset(a.target)
    f = algebra.parse_map(read_text(a.map), src, tgt)
    u = universe_for(src)
    ut, h = algebra.map_game(f, u, game_arg(u, a.game))
    out.both("mapped", ut.format(canonical.canonical_form(ut, h)))
    return 0


def cmd_opp(a, out):
    u = universe_for(resolve_poset(a.poset))
    uo, h = algebra.opposite(u, game_arg(u, a.game))
    out.both("opposite", uo.format(h))
    return 0


def cmd_lr_classes(a, out):
    u = universe_for(resolve_poset(a.poset))
    games = [game_arg(u, x) for x in a.games]
    for side, fn in (("left", lr_equiv.left_classes), ("right", lr_equiv.right_classes)):
        for rep in fn(u, games):
            text = "{" + ", ".join(u.format(x) for x in rep) + "}"
            out.both(side, text, f"{side} {text}")
    return 0


def _eval_region(args):
    path, quotient, prune, budget = args
    r = hex_region.load_region(path)
    P = hex_region.outcome_poset(r, quotient)
    u, g = hex_region.region_value(r, quotient, budget=budget, prune_dead=prune)
    return r.name, u.format(g), P.atoms, sorted(P.covers())


def cmd_hex_eval(a, out):
    budget = a.max_empty or hex_region.DEFAULT_BUDGET
    jobs = [(p, a.quotient, a.prune, budget) for p in a.regions]
    if a.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=a.jobs) as ex:
            results = list(ex.map(_eval_region, jobs))
    else:
        results = [_eval_region(j) for j in jobs]
    for name, value, atoms, covers in results:
        out.both("region", name, f"region {name}")
        out.both("value", value, f"  value    {value}")
        out.both("outcomes", " ".join(atoms), f"  outcomes {' '.join(atoms)}")
        cov = " ".join(f"{x}<{y}" for x, y in covers)
        out.both("covers", cov, f"  covers   {cov}")
    return 0


def cmd_strip(a, out):
    k = a.k
    if a.action == "min-stones":
        if a.n is None:
            raise InvalidArgumentError("strip min-stones needs -n")
        s = strip_solver.min_connecting_stones(k, a.n)
        out.both("min_stones", s)
    elif a.action == "table":
        lo = a.start if a.start is not None else max(k, 1)
        widths = list(range(lo, a.to + 1))
        stones = [strip_solver.min_connecting_stones(k, n) for n in widths]
        cells = [str(s) for s in stones]
        w = max(len(x) for x in map(str, widths + stones)) if widths else 1
        out.rec("width", " ".join(map(str, widths)))
        out.rec("stones", " ".join(cells))
        out.human("width  " + " ".join(str(x).rjust(w) for x in widths))
        out.human("stones " + " ".join(x.rjust(w) for x in cells))
    elif a.action == "period":
        p = strip_solver.detect_period(k)
        if p.found:
            out.both("period", f"{p.p} {p.q} {p.base}", f"period {p.p} stones {p.q} from width {p.base}")
        else:
            out.both("period", "inconclusive", f"no period up to width {p.checked_to}")
    elif a.action == "best":
        if a.n is None:
            raise InvalidArgumentError("strip best needs -n")
        u = strip_solver.strip_model(k).universe
        for t in strip_solver.best_patterns(k, a.n):
            out.both("triple", f"{u.format(t.value)}\t{t.stones}\t{t.width}",
                     f"triple ({u.format(t.value)}, {t.stones}, {t.width})")
            for r, c in t.pattern:
                out.both("stone", f"B {r} {c}", f"B {r} {c}")
    elif a.action == "value":
        if not a.rows:
            raise InvalidArgumentError("strip value needs the rows of the position")
        u, g = strip_solver.strip_value(k, a.rows)
        out.both("value", u.format(g))
    elif a.action == "outcomes":
        sm = strip_solver.strip_model(k)
        out.both("outcomes", " ".join(sm.poset.atoms))
        for x, y in sorted(sm.poset.covers()):
            out.both("cover", f"{x} {y}", f"cover {x} < {y}")
    elif a.action == "certify":
        rep = strip_solver.verify_certificate(k)
        if a.verbose:
            for line in rep.lines():
                out.both("case", line)
        for sec in ("cost", "benefit", "step", "base"):
            bad = sum(1 for s, _, ok in rep.cases if s == sec and not ok)
            out.both(sec, f"{rep.count(sec)} checked, {bad} failed",
                     f"{sec:8s}{rep.count(sec)} checked, {bad} failed")
        out.both("base_patterns", rep.base_patterns, f"base patterns {rep.base_patterns}")
        out.both("result", "pass" if rep.ok else "fail")
        if not rep.ok:
            return 5
    return 0


# parser ---------------------------------------------------------------------------

def positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser():
    def global_flags(parser, defaults=True):
        # subcommands repeat the flags without defaults so either position works
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        parser.add_argument("--format", choices=("human", "records"), default=d("human"))
        parser.add_argument("--jobs", type=positive, default=d(os.cpu_count() or 1))
        parser.add_argument("--budget-nodes", type=positive, default=d(None))
        parser.add_argument("--budget-mb", type=positive, default=d(None))

    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    global_flags(common, defaults=False)

    p = argparse.ArgumentParser(prog="hexcgt", allow_abbrev=False,
                                description="Games over partially ordered outcomes, and Hex.")
    global_flags(p)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common], allow_abbrev=False)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("enumerate", cmd_enumerate, "all canonical passable values up to a depth")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--hasse", action="store_true")
    sp.add_argument("--classes", action="store_true")

    sp = add("canon", cmd_canon, "canonical form")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("game")

    sp = add("compare", cmd_compare, "order relation between two games")
    sp.add_argument("--poset", required=True)
    sp.add_argument("g")
    sp.add_argument("h")

    sp = add("monotonize", cmd_monotonize, "monotone (or semi-monotone) equivalent")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--semi", action="store_true")
    sp.add_argument("--shrink", action="store_true")
    sp.add_argument("game")

    sp = add("sum", cmd_sum, "sum over the product poset")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--poset2")
    sp.add_argument("--canonical", action="store_true")
    sp.add_argument("g")
    sp.add_argument("h")

    sp = add("map", cmd_map, "apply a monotone atom map")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--map", required=True, help="map text or @file")
    sp.add_argument("game")

    sp = add("opp", cmd_opp, "opposite game")
    sp.add_argument("--poset", required=True)
    sp.add_argument("game")

    sp = add("lr-classes", cmd_lr_classes, "left/right class representatives")
    sp.add_argument("--poset", required=True)
    sp.add_argument("games", nargs="+")

    sp = add("hex-eval", cmd_hex_eval, "value of Hex region files")
    sp.add_argument("regions", nargs="+")
    sp.add_argument("--quotient")
    sp.add_argument("--prune", action="store_true", help="fill dead cells first")
    sp.add_argument("--max-empty", type=positive, help="largest number of empty cells to search")

    sp = add("strip", cmd_strip, "k x n strips: minimal connecting sets")
    sp.add_argument("action", choices=("min-stones", "table", "period", "best", "value",
                                       "outcomes", "certify"))
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("-n", type=int)
    sp.add_argument("--from", dest="start", type=int)
    sp.add_argument("--to", type=int, default=16)
    sp.add_argument("--verbose", action="store_true")
    sp.add_argument("--rows", nargs="+", help="rows of B/W/. from the top, for 'value'")
    return p


def main(argv=None):
    parser = build_parser()
    a = parser.parse_args(argv)
    out = Out(a.format)
    try:
        return a.fn(a, out)
    except HexcgtError as e:
        print(f"hexcgt: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"hexcgt: {e}", file=sys.stderr)
        return InvalidArgumentError.exit_code


if __name__ == "__main__":
    sys.exit(main())
