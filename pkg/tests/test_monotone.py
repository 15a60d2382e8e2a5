import pytest

from hexcgt.canonical import canonical_form
from hexcgt.enumerate import enumerate_canonical_passable
from hexcgt.errors import PreconditionError
from hexcgt.game_core import universe_for
from hexcgt.lr_equiv import downr, upl
from hexcgt.monotone import clique_embed, shrink_monotone, to_monotone, to_semi_monotone
from hexcgt.poset import antichain_poset, linear_poset


@pytest.fixture
def ua():
    return universe_for(antichain_poset(2))


def test_example_witness(ua):
    u = ua
    g = u.parse("{a,b|a}")
    a, b = u.parse("a"), u.parse("b")
    up_ta = upl(u, [u.parse("{T|a}")])
    want = u.compose([upl(u, [upl(u, [a]), upl(u, [b]), up_ta])], [downr(u, [downr(u, [a])])])
    assert to_monotone(u, g) == want
    assert u.is_monotone(want) and u.equivalent(want, g)


def test_both_steps_needed(ua):
    u = ua
    a, b = u.parse("a"), u.parse("b")
    ta = u.parse("{T|a}")
    one = u.compose([upl(u, [a]), upl(u, [b]), upl(u, [ta])], [downr(u, [a])])
    two = u.compose([upl(u, [a, b, ta])], [downr(u, [a])])
    assert not u.is_monotone(one)
    assert not u.is_monotone(two)


def test_semi_monotone(ua):
    u = ua
    g = u.parse("{a,b|a}")
    s = to_semi_monotone(u, g)
    assert u.is_semi_monotone(s) and u.equivalent(s, g)
    assert to_semi_monotone(u, u.parse("a")) == u.parse("a")
    with pytest.raises(PreconditionError):
        to_semi_monotone(u, u.parse("{B|T}"))


@pytest.mark.parametrize("P,d", [(linear_poset(3), 2), (linear_poset(4), 2), (antichain_poset(2), 2)],
                         ids=["lin3", "lin4", "anti2"])
def test_pipeline_on_catalog(P, d):
    u = universe_for(P)
    for g in enumerate_canonical_passable(P, d).ids:
        m = to_monotone(u, g)
        assert u.is_monotone(m) and u.equivalent(m, g)
        assert canonical_form(u, m) == g
        s = shrink_monotone(u, m)
        assert u.is_monotone(s) and u.equivalent(s, g)
        if P.is_linear():
            assert u.is_monotone(g)


def test_clique_embed(ua):
    u = ua
    a, b = u.parse("a"), u.parse("b")
    assert u.is_monotone(clique_embed(u, [a], "right"))
    S = [upl(u, [a]), upl(u, [b])]
    assert u.tri(S[0], S[1]) and u.tri(S[1], S[0])
    assert u.is_monotone(clique_embed(u, S, "left"))
    with pytest.raises(PreconditionError):
        clique_embed(u, [a, b], "left")
    with pytest.raises(PreconditionError):
        clique_embed(u, [a], "up")
