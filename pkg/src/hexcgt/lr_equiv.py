"""Left and right orders on non-empty sets of games, and the arrow operators.

S <=L T  iff every s in S satisfies s <| {T|B}
S <=R T  iff every t in T satisfies {T|S} <| t      (T the top atom here)

Left equivalence of S and T is equivalence of {S|B} and {T|B}, so the
canonical id of {S|B} serves as a class key (dually {T|S} on the right).
"""
from __future__ import annotations

from typing import Iterable

from .canonical import canonical_form
from .errors import InternalConsistencyError, InvalidArgumentError


def game_set(games: Iterable[int]) -> tuple:
    s = tuple(sorted(set(games)))
    if not s:
        raise InvalidArgumentError("a game set must be non-empty")
    return s


def _below(u, T):
    return u.compose(game_set(T), [u.bottom])


def _above(u, S):
    return u.compose([u.top], game_set(S))


def leql(u, S, T) -> bool:
    g = _below(u, T)
    return all(u.tri(s, g) for s in game_set(S))


def leqr(u, S, T) -> bool:
    g = _above(u, S)
    return all(u.tri(g, t) for t in game_set(T))


def left_equivalent(u, S, T) -> bool:
    return leql(u, S, T) and leql(u, T, S)


def right_equivalent(u, S, T) -> bool:
    return leqr(u, S, T) and leqr(u, T, S)


def upl(u, S) -> int:
    """The maximum of the left class of S: {T | {S|B}}."""
    return u.compose([u.top], [_below(u, S)])


def downr(u, S) -> int:
    """The minimum of the right class of S: {{T|S} | B}."""
    return u.compose([_above(u, S)], [u.bottom])


def left_key(u, S) -> int:
    return canonical_form(u, _below(u, S))


def right_key(u, S) -> int:
    return canonical_form(u, _above(u, S))


def _classes(u, games, key):
    reps: list[tuple] = []
    seen = set()
    for g in games:
        cands = [(g,)] + [game_set(r + (g,)) for r in reps]
        for c in cands:
            k = key(u, c)
            if k not in seen:
                seen.add(k)
                reps.append(c)
    return reps


def left_classes(u, games) -> list:
    """One representative set per left class of non-empty subsets of games.

    Incremental: with representatives for the subsets of the first k-1 games,
    the subsets of the first k games are represented by the old ones, {g_k},
    and each old representative with g_k added.
    """
    return _classes(u, games, left_key)


def right_classes(u, games) -> list:
    return _classes(u, games, right_key)


def leq_decomposition_check(u, h: int, k: int) -> bool:
    r = leql(u, [h], [k]) and leqr(u, [h], [k])
    if r != u.leq(h, k):
        raise InternalConsistencyError("H <= K disagrees with H <=L K and H <=R K")
    return r


def right_lub(u, h: int, k: int) -> int:
    """Least upper bound of H and K for the right order."""
    return u.join([downr(u, [h]), downr(u, [k])])


def left_glb(u, h: int, k: int) -> int:
    return u.meet([upl(u, [h]), upl(u, [k])])
