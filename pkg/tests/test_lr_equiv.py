import pytest

from conftest import golden
from hexcgt.errors import InvalidArgumentError
from hexcgt.lr_equiv import (
    downr,
    game_set,
    leq_decomposition_check,
    left_classes,
    left_equivalent,
    left_glb,
    right_classes,
    right_equivalent,
    right_lub,
    upl,
)


def test_empty_set_rejected():
    with pytest.raises(InvalidArgumentError):
        game_set([])


def test_lin3_classes_from_catalog():
    u, defs = golden(3)
    g = defs
    assert left_equivalent(u, [g["G1"]], [g["G7"]])
    assert right_equivalent(u, [g["G4"]], [g["G7"]])
    assert not left_equivalent(u, [g["G2"]], [g["G5"]])
    # the 8 values fall into 4 left classes and 4 right classes
    singles = list(defs.values())
    for side, eq in (("left", left_equivalent), ("right", right_equivalent)):
        reps = []
        for x in singles:
            if not any(eq(u, [x], [r]) for r in reps):
                reps.append(x)
        assert len(reps) == 4, side


def test_arrows_bound_their_classes():
    u, g = golden(3)
    for x in g.values():
        assert left_equivalent(u, [x], [upl(u, [x])])
        assert right_equivalent(u, [x], [downr(u, [x])])


def test_decomposition_and_bounds():
    u, g = golden(4)
    vals = list(g.values())
    for h in vals:
        for k in vals:
            leq_decomposition_check(u, h, k)
    a, b = g["G1"], g["G2"]
    j = right_lub(u, a, b)
    assert u.leq(downr(u, [a]), j) and u.leq(downr(u, [b]), j)
    m = left_glb(u, a, b)
    assert u.leq(m, upl(u, [a])) and u.leq(m, upl(u, [b]))


def test_class_enumeration_covers_subsets():
    u, g = golden(3)
    games = [g["G1"], g["G3"], g["G5"]]
    for reps in (left_classes(u, games), right_classes(u, games)):
        assert 1 <= len(reps) <= 7
        assert all(set(r) <= set(games) for r in reps)
