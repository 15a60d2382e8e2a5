"""Enumeration of canonical passable values by depth.

The catalog holds every value of depth <= d with the relation matrices
LEQ[x, y] = x <= y and TRI[x, y] = x <| y.  For a candidate G = {L|R} with
options in the catalog, four vectors over the catalog decide everything:

    b[x] = x <| G      a[x] = x <= G      d[x] = G <| x      c[x] = G <= x

They follow the recursive definitions, walking the catalog in index order
(options always come first).  G <| G holds iff a[r] for some r in R or c[l]
for some l in L; G is equivalent to the catalog value x iff a[x] and c[x];
two candidates are equivalent iff their (b, d) vectors agree, because
G^L <| G and G <| G^R always hold.

Candidates pair a left-class representative with a right-class one.  A set S
is keyed by the b vector of {S|B} (its d vector is constant) and dually by
the d vector of {T|S}.  Bitsets are packed along the right-class axis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .canonical import canonical_form
from .errors import (
    InternalConsistencyError,
    PreconditionError,
    ResourceLimitError,
)
from .game_core import universe_for

ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


@dataclass
class ValueCatalog:
    universe: object
    ids: list = field(default_factory=list)
    depth: list = field(default_factory=list)
    left_opts: list = field(default_factory=list)
    right_opts: list = field(default_factory=list)
    LEQ: np.ndarray = None
    TRI: np.ndarray = None
    complete: bool = True
    max_depth: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def poset(self):
        return self.universe.poset

    def __len__(self):
        return len(self.ids)

    @property
    def index(self):
        return {g: i for i, g in enumerate(self.ids)}

    def by_depth(self):
        out = [[] for _ in range(self.max_depth + 1)]
        for g, d in zip(self.ids, self.depth):
            out[d].append(g)
        return out

    def counts(self):
        return [len(x) for x in self.by_depth()]

    def is_atomic(self, i):
        return self.universe.is_atomic(self.ids[i])

    def hasse(self):
        """Covering pairs (i, j), i < j in the order, as catalog indices."""
        L = self.LEQ.copy()
        np.fill_diagonal(L, False)
        # i < k < j for some k
        via = (L.astype(np.uint8) @ L.astype(np.uint8)) > 0
        cov = L & ~via
        return [tuple(map(int, p)) for p in np.argwhere(cov)]

    def left_class_labels(self):
        return _singleton_labels(self, _left_keys)

    def right_class_labels(self):
        return _singleton_labels(self, _right_keys)

    def names(self):
        return [f"G{i}" for i in range(len(self.ids))]

    def format(self, i, names=None):
        return self.universe.format(self.ids[i]) if names is None else _format_named(self, i, names)


def _format_named(cat, i, names):
    u = cat.universe
    idx = cat.index
    g = cat.ids[i]
    if u.is_atomic(g):
        return u.format(g)
    L = sorted(names[idx[x]] if not u.is_atomic(x) else u.format(x) for x in u.left[g])
    R = sorted(names[idx[x]] if not u.is_atomic(x) else u.format(x) for x in u.right[g])
    return "{" + ",".join(L) + "|" + ",".join(R) + "}"


# key recursions ------------------------------------------------------------------

def _left_keys(cat, LB):
    """b vectors of {S|B} for the columns of LB[x] = OR_{s in S} x <= s."""
    N = len(cat.ids)
    bot = cat._bot
    tri_bot = cat.TRI[:, bot]
    a = np.zeros(LB.shape, dtype=bool)
    b = np.zeros(LB.shape, dtype=bool)
    for x in range(N):
        bx = LB[x].copy()
        for xr in cat.right_opts[x]:
            bx |= a[xr]
        b[x] = bx
        if tri_bot[x]:
            ax = np.ones(LB.shape[1], dtype=bool)
            for xl in cat.left_opts[x]:
                ax &= b[xl]
            if cat._atomic[x]:
                ax &= bx
            a[x] = ax
    return b


def _right_keys(cat, RD):
    """d vectors of {T|S} for the columns of RD[x] = OR_{s in S} s <= x."""
    N = len(cat.ids)
    top = cat._top
    tri_top = cat.TRI[top, :]
    c = np.zeros(RD.shape, dtype=bool)
    d = np.zeros(RD.shape, dtype=bool)
    for x in range(N):
        dx = RD[x].copy()
        for xl in cat.left_opts[x]:
            dx |= c[xl]
        d[x] = dx
        if tri_top[x]:
            cx = np.ones(RD.shape[1], dtype=bool)
            for xr in cat.right_opts[x]:
                cx &= d[xr]
            if cat._atomic[x]:
                cx &= dx
            c[x] = cx
    return d


def _singleton_labels(cat, keyfn):
    N = len(cat.ids)
    if keyfn is _left_keys:
        base = cat.LEQ.copy()                  # column s: x <= s
    else:
        base = cat.LEQ.T.copy()                # column s: s <= x
    keys = keyfn(cat, base)
    labels, seen = [], {}
    for s in range(N):
        k = np.packbits(keys[:, s]).tobytes()
        labels.append(seen.setdefault(k, len(seen)))
    return labels


def _classes(cat, keyfn, base_of, reps, start):
    """Extend class representatives with catalog entries start..N-1.

    reps: list of sorted index tuples; keys are recomputed over the current
    catalog (they stay exact because the options of {S|B} are catalog values).
    """
    N = len(cat.ids)
    if reps:
        base = np.zeros((N, len(reps)), dtype=bool)
        for j, r in enumerate(reps):
            base[:, j] = base_of[:, list(r)].any(axis=1)
        keys = keyfn(cat, base)
        seen = {np.packbits(keys[:, j]).tobytes() for j in range(len(reps))}
        bases = [base[:, j] for j in range(len(reps))]
    else:
        seen, bases = set(), []
    for g in range(start, N):
        col = base_of[:, g]
        cand = np.empty((N, len(reps) + 1), dtype=bool)
        cand[:, 0] = col
        for j, bv in enumerate(bases):
            cand[:, j + 1] = bv | col
        keys = keyfn(cat, cand)
        new = []
        for j in range(cand.shape[1]):
            k = np.packbits(keys[:, j]).tobytes()
            if k not in seen:
                seen.add(k)
                new.append(((g,) if j == 0 else reps[j - 1] + (g,), cand[:, j].copy()))
        for r, bv in new:
            reps.append(r)
            bases.append(bv)
    return reps


# the engine ------------------------------------------------------------------------

class _Budget:
    def __init__(self, nodes=None, mb=None):
        self.nodes = nodes
        self.mb = mb

    def check_candidates(self, n, cat):
        if self.nodes is not None and n > self.nodes:
            cat.complete = False
            raise ResourceLimitError(f"{n} candidates exceed the node budget {self.nodes}", partial=cat)

    def check_memory(self, nbytes, cat):
        if self.mb is not None and nbytes > self.mb * 2**20:
            cat.complete = False
            raise ResourceLimitError(f"working set {nbytes >> 20} MB exceeds the memory budget", partial=cat)


def _new_catalog(u):
    cat = ValueCatalog(universe=u)
    n = len(u.poset)
    cat.ids = [u.atomic(i) for i in range(n)]
    cat.depth = [0] * n
    cat.left_opts = [()] * n
    cat.right_opts = [()] * n
    cat.LEQ = np.array([[u.poset.leq(i, j) for j in range(n)] for i in range(n)], dtype=bool)
    cat.TRI = cat.LEQ.copy()
    cat._atomic = [True] * n
    cat._top = u.poset.top
    cat._bot = u.poset.bottom
    return cat


def _pack_rows(M):
    """Pack a (N, n) bool matrix along axis 1 into uint64 words."""
    N, n = M.shape
    W = (n + 63) // 64
    pad = np.zeros((N, W * 64), dtype=bool)
    pad[:, :n] = M
    packed = np.packbits(pad.reshape(N, W, 64), axis=2, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64).reshape(N, W)


def _grow(cat, lreps, rreps, d, budget, chunk):
    """Add all values of depth d+1."""
    u = cat.universe
    N = len(cat.ids)
    first_new = cat.depth.index(d) if d in cat.depth else N
    nL, nR = len(lreps), len(rreps)
    budget.check_candidates(nL * nR, cat)
    LEQ, TRI = cat.LEQ, cat.TRI
    Lmask = np.zeros((nL, N), dtype=bool)
    for i, s in enumerate(lreps):
        Lmask[i, list(s)] = True
    Rmask = np.zeros((nR, N), dtype=bool)
    for j, s in enumerate(rreps):
        Rmask[j, list(s)] = True
    Li = Lmask.astype(np.float32)
    Ri = Rmask.astype(np.float32)
    # per-left-rep bases: x <| G from L, G <= x from L
    LB = (Li @ LEQ.T.astype(np.float32)) > 0                 # (nL, N)  OR_l x<=l
    LC = (Li @ (~TRI).astype(np.float32)) == 0               # (nL, N)  AND_l l<|x
    RA = (Ri @ (~TRI).T.astype(np.float32)) == 0             # (nR, N)  AND_r x<|r
    RD = (Ri @ LEQ.astype(np.float32)) > 0                   # (nR, N)  OR_r r<=x
    RA_p = _pack_rows(RA.T)                                  # (N, W)
    RD_p = _pack_rows(RD.T)
    Rc_p = _pack_rows(Rmask.T)
    W = RA_p.shape[1]
    valid_tail = _pack_rows(np.ones((1, nR), dtype=bool))[0]
    Lnew = Lmask[:, first_new:].any(axis=1)
    Rnew_p = _pack_rows(Rmask[:, first_new:].any(axis=1)[None, :])[0]
    budget.check_memory(4 * N * chunk * W * 8, cat)

    found = {}          # key bytes -> (i, j, a, b, c, d)
    order = []
    cand_total = 0
    survivors = 0
    for c0 in range(0, nL, chunk):
        c1 = min(nL, c0 + chunk)
        C = c1 - c0
        A = np.zeros((N, C, W), dtype=np.uint64)
        B = np.zeros((N, C, W), dtype=np.uint64)
        Cc = np.zeros((N, C, W), dtype=np.uint64)
        D = np.zeros((N, C, W), dtype=np.uint64)
        lb = np.where(LB[c0:c1], ONES, np.uint64(0))          # (C, N)
        lc = np.where(LC[c0:c1], ONES, np.uint64(0))
        for x in range(N):
            bx = np.broadcast_to(lb[:, x:x + 1], (C, W)).copy()
            for xr in cat.right_opts[x]:
                bx |= A[xr]
            B[x] = bx
            dx = np.broadcast_to(RD_p[x], (C, W)).copy()
            for xl in cat.left_opts[x]:
                dx |= Cc[xl]
            D[x] = dx
            ax = bx & RA_p[x] if cat._atomic[x] else np.broadcast_to(RA_p[x], (C, W)).copy()
            for xl in cat.left_opts[x]:
                ax &= B[xl]
            A[x] = ax
            cx = np.broadcast_to(lc[:, x:x + 1], (C, W)).copy()
            if cat._atomic[x]:
                cx &= dx
            for xr in cat.right_opts[x]:
                cx &= D[xr]
            Cc[x] = cx
        passable = np.bitwise_or.reduce(A & Rc_p[:, None, :], axis=0)
        lcont = np.where(Lmask[c0:c1], ONES, np.uint64(0)).T[:, :, None]   # (N, C, 1)
        passable |= np.bitwise_or.reduce(Cc & lcont, axis=0)
        old = np.bitwise_or.reduce(A & Cc, axis=0)
        deep = np.where(Lnew[c0:c1, None], ONES, Rnew_p[None, :])
        ok = passable & ~old & deep & valid_tail[None, :]
        cand_total += C * nR
        if not ok.any():
            continue
        bits = np.unpackbits(np.ascontiguousarray(ok.astype("<u8")).view(np.uint8),
                             axis=1, bitorder="little")
        ii, jj = np.nonzero(bits)
        survivors += len(ii)
        wpos = jj // 64
        sh = (jj % 64).astype(np.uint64)
        one = np.uint64(1)
        kb = ((B[:, ii, wpos] >> sh) & one).astype(bool)      # (N, S)
        kd = ((D[:, ii, wpos] >> sh) & one).astype(bool)
        keys = np.packbits(np.concatenate([kb, kd]), axis=0).T  # (S, bytes)
        _, first = np.unique(np.ascontiguousarray(keys).view(
            np.dtype((np.void, keys.shape[1]))).ravel(), return_index=True)
        for s in sorted(first):
            k = keys[s].tobytes()
            if k in found:
                continue
            ka = ((A[:, ii[s], wpos[s]] >> sh[s]) & one).astype(bool)
            kc = ((Cc[:, ii[s], wpos[s]] >> sh[s]) & one).astype(bool)
            found[k] = (c0 + ii[s], jj[s], ka, kb[:, s], kc, kd[:, s])
            order.append(k)
    cat.stats.setdefault("candidates", []).append(cand_total)
    cat.stats.setdefault("survivors", []).append(survivors)
    cat.stats.setdefault("left_classes", []).append(nL)
    cat.stats.setdefault("right_classes", []).append(nR)
    if not order:
        return 0
    # sort new values by the id of their canonical form for stable numbering
    recs = []
    for k in order:
        i, j, a, b, c, dd = found[k]
        g = u.compose([cat.ids[x] for x in lreps[i]], [cat.ids[x] for x in rreps[j]])
        cg = canonical_form(u, g)
        if u.depth[cg] != d + 1:
            raise InternalConsistencyError("new value has unexpected canonical depth")
        recs.append((i, j, a, b, c, dd, cg))
    _extend(cat, recs, lreps, rreps, d + 1)
    return len(recs)


def _extend(cat, recs, lreps, rreps, depth):
    u = cat.universe
    N = len(cat.ids)
    M = len(recs)
    idx = cat.index
    A = np.array([r[2] for r in recs])      # (M, N): x <= G
    Bv = np.array([r[3] for r in recs])     # x <| G
    Cv = np.array([r[4] for r in recs])     # G <= x
    Dv = np.array([r[5] for r in recs])     # G <| x
    Lm = np.zeros((M, N), dtype=np.float32)
    Rm = np.zeros((M, N), dtype=np.float32)
    for m, r in enumerate(recs):
        Lm[m, list(lreps[r[0]])] = 1
        Rm[m, list(rreps[r[1]])] = 1
    # G <= G'  iff  all G^L <| G'  and  all G'^R: G <| G'^R
    nl = Lm @ (~Bv).T.astype(np.float32)                 # (M, M): count of G^L not <| G'
    nr = (~Dv).astype(np.float32) @ Rm.T                 # count of G'^R with not G <| .
    leq_nn = (nl == 0) & (nr == 0)
    # G <| G'  iff  some G^R <= G'  or  some G'^L with G <= G'^L
    tri_nn = ((Rm @ A.T.astype(np.float32)) > 0) | ((Cv.astype(np.float32) @ Lm.T) > 0)
    LEQ = np.zeros((N + M, N + M), dtype=bool)
    TRI = np.zeros((N + M, N + M), dtype=bool)
    LEQ[:N, :N] = cat.LEQ
    TRI[:N, :N] = cat.TRI
    LEQ[:N, N:] = A.T
    TRI[:N, N:] = Bv.T
    LEQ[N:, :N] = Cv
    TRI[N:, :N] = Dv
    LEQ[N:, N:] = leq_nn
    TRI[N:, N:] = tri_nn
    if not np.all(np.diag(leq_nn)) or not np.all(np.diag(tri_nn)):
        raise InternalConsistencyError("new values fail reflexivity or passability")
    cat.LEQ, cat.TRI = LEQ, TRI
    for r in recs:
        cg = r[6]
        cat.ids.append(cg)
        cat.depth.append(depth)
        try:
            cat.left_opts.append(tuple(sorted(idx[x] for x in u.left[cg])))
            cat.right_opts.append(tuple(sorted(idx[x] for x in u.right[cg])))
        except KeyError:
            raise InternalConsistencyError("canonical option missing from the catalog") from None
        cat._atomic.append(False)


def enumerate_canonical_passable(poset, max_depth: int, budget_nodes=None, budget_mb=None,
                                 chunk: int = 64, universe=None) -> ValueCatalog:
    if max_depth < 0:
        raise PreconditionError("max_depth must be >= 0")
    if poset.top is None or poset.bottom is None:
        raise PreconditionError("enumeration needs a poset with top and bottom")
    u = universe or universe_for(poset)
    budget = _Budget(budget_nodes, budget_mb)
    cat = _new_catalog(u)
    lreps: list = []
    rreps: list = []
    done = 0
    for d in range(max_depth):
        N = len(cat.ids)
        lreps = _classes(cat, _left_keys, cat.LEQ, lreps, done)
        rreps = _classes(cat, _right_keys, cat.LEQ.T, rreps, done)
        done = N
        try:
            n_new = _grow(cat, lreps, rreps, d, budget, chunk)
        except ResourceLimitError as e:
            e.partial = cat
            raise
        cat.max_depth = d + 1
        if n_new == 0:
            break
    cat.max_depth = max(cat.depth)
    return cat


def catalog_from_games(u, games) -> ValueCatalog:
    """Catalog of the given canonical passable ids (closed under options).

    Relations are computed with the recursive game relations; used for small
    catalogs and as an independent cross-check of the vector engine.
    """
    closure = set()
    for g in games:
        closure.update(u.positions(g))
    ids = sorted(closure, key=lambda g: (u.depth[g], g))
    cat = ValueCatalog(universe=u)
    cat.ids = ids
    cat.depth = [u.depth[g] for g in ids]
    idx = {g: i for i, g in enumerate(ids)}
    cat.left_opts = [tuple(sorted(idx[x] for x in u.left[g])) for g in ids]
    cat.right_opts = [tuple(sorted(idx[x] for x in u.right[g])) for g in ids]
    cat.LEQ = np.array([[u.leq(g, h) for h in ids] for g in ids], dtype=bool)
    cat.TRI = np.array([[u.tri(g, h) for h in ids] for g in ids], dtype=bool)
    cat._atomic = [u.is_atomic(g) for g in ids]
    cat._top = u.poset.top
    cat._bot = u.poset.bottom
    cat.max_depth = max(cat.depth) if ids else 0
    return cat


# brute force ---------------------------------------------------------------------------

def brute_force_values(poset, max_depth: int, max_candidates: int = 200000):
    """All canonical passable values up to max_depth from every option subset."""
    u = universe_for(poset)
    values = [u.atomic(i) for i in range(len(poset))]
    levels = [list(values)]
    for d in range(max_depth):
        n = len(values)
        if (2 ** n - 1) ** 2 > max_candidates:
            raise ResourceLimitError("brute force would exceed its candidate budget", partial=levels)
        subsets = [tuple(values[k] for k in range(n) if m >> k & 1) for m in range(1, 1 << n)]
        seen = set(values)
        new = []
        for L in subsets:
            for R in subsets:
                g = u.compose(L, R)
                if not u.is_passable(g):
                    continue
                c = canonical_form(u, g)
                if c not in seen:
                    seen.add(c)
                    new.append(c)
        new.sort()
        levels.append(new)
        values = values + new
    return levels


# increasing chains ------------------------------------------------------------------------

def increasing_chain(u, n: int, a=None, b=None):
    """G0 = a, Gk = {a,b | G(k-1)}: a strictly increasing chain of passable games."""
    P = u.poset
    if a is None or b is None:
        pair = next(((i, j) for i in range(len(P)) for j in range(len(P))
                     if not P.leq(i, j) and not P.leq(j, i)), None)
        if pair is None:
            raise PreconditionError("the poset has no incomparable pair of atoms")
        a, b = pair
    ga, gb = u.atomic(a), u.atomic(b)
    if u.leq(ga, gb) or u.leq(gb, ga):
        raise PreconditionError("chain atoms must be incomparable")
    chain = [ga]
    for _ in range(n):
        chain.append(u.compose([ga, gb], [chain[-1]]))
    for k, g in enumerate(chain):
        if not u.is_passable(g):
            raise InternalConsistencyError(f"G{k} is not passable")
        if k and not (u.leq(chain[k - 1], g) and not u.leq(g, chain[k - 1])):
            raise InternalConsistencyError(f"G{k - 1} < G{k} fails")
    return chain
