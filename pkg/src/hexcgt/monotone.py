"""Passable games to equivalent semi-monotone and monotone games."""
from __future__ import annotations

from .canonical import _bypass, _drop, _find_dominated, _find_passing
from .errors import InternalConsistencyError, PreconditionError
from .lr_equiv import downr, game_set, upl


def _require_passable(u, g):
    if not u.is_passable(g):
        raise PreconditionError("game is not passable")
    # both raise on posets lacking a top or bottom
    u.top
    u.bottom


def to_semi_monotone(u, g: int) -> int:
    _require_passable(u, g)
    memo: dict[int, int] = {}
    for x in u.positions(g):
        if u.is_atomic(x):
            memo[x] = x
            continue
        h = u.compose([memo[y] for y in u.left[x]], [memo[y] for y in u.right[x]])
        gl, gr = u.good_left(h), u.good_right(h)
        if gl and not gr:
            h = u.add_right(h, u.compose([gl[0]], [u.bottom]))
        elif gr and not gl:
            h = u.add_left(h, u.compose([u.top], [gr[0]]))
        elif not gl:
            raise InternalConsistencyError("passable position without a good option")
        memo[x] = h
    return memo[g]


def _monotone_of_semi(u, g):
    memo: dict[int, int] = {}
    for x in u.positions(g):
        # monotone subgames (atoms included) need no rebuilding
        if u.is_monotone(x):
            memo[x] = x
            continue
        L = [upl(u, [memo[y]]) for y in u.left[x]]
        R = [downr(u, [memo[y]]) for y in u.right[x]]
        memo[x] = u.compose([upl(u, L)], [downr(u, R)])
    return memo[g]


def to_monotone(u, g: int) -> int:
    """G'' = {up(L') | down(R')} over the semi-monotone equivalent, recursively."""
    return _monotone_of_semi(u, to_semi_monotone(u, g))


_LEVELS = {
    "monotone": "is_monotone",
    "semi-monotone": "is_semi_monotone",
    "passable": "is_passable",
}


def clique_embed(u, S, side: str, level: str = "monotone") -> int:
    """{T|S} for side "right", {S|B} for side "left"."""
    if level not in _LEVELS:
        raise PreconditionError(f"unknown level {level!r}")
    S = game_set(S)
    pred = getattr(u, _LEVELS[level])
    if not all(pred(x) for x in S):
        raise PreconditionError(f"members of S are not all {level}")
    if not all(u.tri(x, y) for x in S for y in S):
        raise PreconditionError("S is not a <|-clique")
    if side == "right":
        g = u.compose([u.top], S)
    elif side == "left":
        g = u.compose(S, [u.bottom])
    else:
        raise PreconditionError("side must be 'left' or 'right'")
    if not pred(g):
        raise InternalConsistencyError(f"clique embedding is not {level}")
    return g


def shrink_monotone(u, g: int) -> int:
    """Greedy size reduction that keeps the game monotone and equivalent.

    Dominated and passing options are always safe; a reversible option is
    bypassed only when the result stays monotone.
    """
    if not u.is_monotone(g):
        raise PreconditionError("shrink_monotone needs a monotone game")
    memo: dict[int, int] = {}
    for x in u.positions(g):
        if u.is_atomic(x):
            memo[x] = x
            continue
        h = u.compose([memo[y] for y in u.left[x]], [memo[y] for y in u.right[x]])
        memo[x] = _shrink_node(u, h)
    out = memo[g]
    if not (u.is_monotone(out) and u.equivalent(out, g)):
        raise InternalConsistencyError("shrink_monotone broke monotonicity or value")
    return out


def _shrink_node(u, h):
    while not u.is_atomic(h):
        p = _find_passing(u, h)
        if p is not None:
            return p
        d = _find_dominated(u, h)
        if d is not None:
            h = _drop(u, h, *d)
            continue
        moved = False
        for side, opts in (("L", u.left[h]), ("R", u.right[h])):
            for x in opts:
                rev = u.right[x] if side == "L" else u.left[x]
                for via in rev:
                    ok = u.leq(via, h) if side == "L" else u.leq(h, via)
                    if ok:
                        h2 = _bypass(u, h, side, x, via)
                        if u.is_monotone(h2):
                            h, moved = h2, True
                            break
                if moved:
                    break
            if moved:
                break
        if not moved:
            return h
    return h
