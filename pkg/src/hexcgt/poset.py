"""Finite outcome posets.

The order is stored as one up-set bitmask per atom: bit j of ``up[i]`` is set
iff atom i <= atom j.
"""
from __future__ import annotations

import hashlib
import itertools
import string

from .errors import InvalidArgumentError, ParseError, ResourceLimitError

_META = set("{}|,")


def check_atom_name(name: str) -> None:
    if not name or any(ch.isspace() for ch in name):
        raise InvalidArgumentError(f"bad atom name {name!r}")
    # product atoms "(x,y)" may contain commas, but only inside parentheses
    depth = 0
    for ch in name:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InvalidArgumentError(f"unbalanced parentheses in atom {name!r}")
        elif ch in _META and not (ch == "," and depth > 0):
            raise InvalidArgumentError(f"metacharacter {ch!r} in atom {name!r}")
    if depth:
        raise InvalidArgumentError(f"unbalanced parentheses in atom {name!r}")


class Poset:
    """Immutable finite partial order on named atoms."""

    __slots__ = ("name", "atoms", "index", "up", "down", "top", "bottom", "key")

    def __init__(self, atoms, leq_pairs=None, name="P", *, up_masks=None):
        atoms = list(atoms)
        if not atoms:
            raise InvalidArgumentError("a poset needs at least one atom")
        for a in atoms:
            check_atom_name(a)
        if len(set(atoms)) != len(atoms):
            raise InvalidArgumentError("duplicate atom names")
        n = len(atoms)
        index = {a: i for i, a in enumerate(atoms)}
        if up_masks is None:
            up = [0] * n
            for x, y in leq_pairs or ():
                up[index[x] if isinstance(x, str) else x] |= 1 << (index[y] if isinstance(y, str) else y)
        else:
            up = list(up_masks)
        _validate(atoms, up)
        self.name = name
        self.atoms = tuple(atoms)
        self.index = index
        self.up = tuple(up)
        down = [0] * n
        for i in range(n):
            for j in range(n):
                if up[i] >> j & 1:
                    down[j] |= 1 << i
        self.down = tuple(down)
        full = (1 << n) - 1
        self.top = next((i for i in range(n) if down[i] == full), None)
        self.bottom = next((i for i in range(n) if up[i] == full), None)
        h = hashlib.sha1(repr((self.atoms, self.up)).encode()).hexdigest()
        self.key = h[:16]

    @classmethod
    def from_covers(cls, atoms, covers, name="P"):
        """Build from cover pairs (x, y) meaning x < y, taking the closure."""
        atoms = list(atoms)
        index = {a: i for i, a in enumerate(atoms)}
        n = len(atoms)
        up = [1 << i for i in range(n)]
        for x, y in covers:
            if x not in index or y not in index:
                raise InvalidArgumentError(f"cover {x} < {y} mentions an unknown atom")
            up[index[x]] |= 1 << index[y]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                m = up[i]
                acc = m
                for j in range(n):
                    if m >> j & 1:
                        acc |= up[j]
                if acc != m:
                    up[i] = acc
                    changed = True
        return cls(atoms, name=name, up_masks=up)

    def __len__(self):
        return len(self.atoms)

    def __eq__(self, other):
        return isinstance(other, Poset) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Poset({self.name!r}, {len(self.atoms)} atoms)"

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def leq_names(self, x: str, y: str) -> bool:
        return self.leq(self.index[x], self.index[y])

    def atom(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise InvalidArgumentError(f"unknown atom {name!r} in poset {self.name}") from None

    def covers(self):
        """Hasse diagram as a list of (lower, upper) name pairs."""
        n = len(self.atoms)
        out = []
        for i in range(n):
            for j in range(n):
                if i != j and self.leq(i, j):
                    if not any(k not in (i, j) and self.leq(i, k) and self.leq(k, j) for k in range(n)):
                        out.append((self.atoms[i], self.atoms[j]))
        return out

    def is_linear(self) -> bool:
        n = len(self.atoms)
        return all(self.leq(i, j) or self.leq(j, i) for i in range(n) for j in range(n))

    def to_text(self) -> str:
        lines = [f"poset {self.name}", "atoms: " + " ".join(self.atoms)]
        lines += [f"cover: {x} < {y}" for x, y in self.covers()]
        return "\n".join(lines) + "\n"


def _validate(atoms, up):
    n = len(atoms)
    for i in range(n):
        if not up[i] >> i & 1:
            raise InvalidArgumentError(f"order is not reflexive at {atoms[i]}")
    for i in range(n):
        for j in range(n):
            if i != j and up[i] >> j & 1 and up[j] >> i & 1:
                raise InvalidArgumentError(f"order is not antisymmetric: {atoms[i]} and {atoms[j]}")
            if up[i] >> j & 1 and up[j] & ~up[i]:
                raise InvalidArgumentError(f"order is not transitive through {atoms[j]}")


def parse_poset(text: str) -> Poset:
    name = "P"
    atoms = None
    covers = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("poset"):
            parts = line.split(None, 1)
            name = parts[1].strip() if len(parts) > 1 else name
        elif line.startswith("atoms:"):
            atoms = line[len("atoms:"):].split()
        elif line.startswith("cover:"):
            body = line[len("cover:"):]
            if "<" not in body:
                raise ParseError("cover line needs 'x < y'", lineno, 1)
            x, y = (s.strip() for s in body.split("<", 1))
            covers.append((x, y))
        else:
            raise ParseError(f"unrecognised poset line {line!r}", lineno, 1)
    if atoms is None:
        raise ParseError("poset file has no atoms line")
    return Poset.from_covers(atoms, covers, name=name)


def load_poset(path) -> Poset:
    with open(path, encoding="utf-8") as fh:
        return parse_poset(fh.read())


def _middle_names(k):
    letters = [c for c in string.ascii_lowercase]
    if k <= len(letters):
        return letters[:k]
    return [f"m{i}" for i in range(1, k + 1)]


def linear_poset(n: int) -> Poset:
    if n < 1:
        raise InvalidArgumentError("linear_poset needs n >= 1")
    if n == 1:
        atoms = ["B"]
    else:
        atoms = ["B"] + _middle_names(n - 2) + ["T"]
    covers = list(zip(atoms, atoms[1:]))
    return Poset.from_covers(atoms, covers, name=f"Lin{n}")


def antichain_poset(k: int) -> Poset:
    if k < 1:
        raise InvalidArgumentError("antichain_poset needs k >= 1")
    mids = _middle_names(k)
    covers = [("B", m) for m in mids] + [(m, "T") for m in mids]
    return Poset.from_covers(["B"] + mids + ["T"], covers, name=f"Anti{k}")


# non-crossing partitions -------------------------------------------------

def is_non_crossing(blocks) -> bool:
    owner = {}
    for b, blk in enumerate(blocks):
        for x in blk:
            owner[x] = b
    pts = sorted(owner)
    for a, b, c, d in itertools.combinations(pts, 4):
        if owner[a] == owner[c] and owner[b] == owner[d] and owner[a] != owner[b]:
            return False
    return True


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def canonical_blocks(blocks):
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def partition_name(blocks) -> str:
    return "/".join("".join(str(x) for x in b) for b in canonical_blocks(blocks))


def partition_leq(p, q) -> bool:
    """p <= q iff every block of p lies inside a block of q."""
    owner = {}
    for i, blk in enumerate(q):
        for x in blk:
            owner[x] = i
    return all(len({owner[x] for x in blk}) == 1 for blk in p)


def non_crossing_partitions(n: int):
    out = [canonical_blocks(p) for p in set_partitions(range(1, n + 1)) if is_non_crossing(p)]
    # finest first, then by number of blocks descending, then lexicographic
    out.sort(key=lambda p: (-len(p), p))
    return out


def non_crossing_poset(n: int) -> Poset:
    if not 1 <= n <= 8:
        raise ResourceLimitError("non_crossing_poset supports 1 <= n <= 8")
    parts = non_crossing_partitions(n)
    names = [partition_name(p) for p in parts]
    m = len(parts)
    up = [0] * m
    for i in range(m):
        for j in range(m):
            if partition_leq(parts[i], parts[j]):
                up[i] |= 1 << j
    return Poset(names, name=f"NC{n}", up_masks=up)


def parse_partition_name(name: str):
    return canonical_blocks([[int(ch) for ch in blk] for blk in name.split("/")])


# constructions -------------------------------------------------------------

def product_poset(A: Poset, B: Poset) -> Poset:
    atoms = [f"({x},{y})" for x in A.atoms for y in B.atoms]
    nb = len(B.atoms)
    up = []
    for i in range(len(A.atoms)):
        for j in range(nb):
            m = 0
            for i2 in range(len(A.atoms)):
                if A.leq(i, i2):
                    for j2 in range(nb):
                        if B.leq(j, j2):
                            m |= 1 << (i2 * nb + j2)
            up.append(m)
    return Poset(atoms, name=f"{A.name}x{B.name}", up_masks=up)


def opposite_poset(A: Poset) -> Poset:
    name = A.name[:-3] if A.name.endswith("^op") else A.name + "^op"
    return Poset(A.atoms, name=name, up_masks=A.down)


def monotone_map_check(table: dict, A: Poset, B: Poset) -> bool:
    """True iff the atom map ``table`` (names to names) is order preserving."""
    for a in A.atoms:
        if a not in table:
            raise InvalidArgumentError(f"map is not total: {a} has no image")
        if table[a] not in B.index:
            raise InvalidArgumentError(f"map sends {a} to unknown atom {table[a]!r}")
    for x in A.atoms:
        for y in A.atoms:
            if A.leq_names(x, y) and not B.leq_names(table[x], table[y]):
                return False
    return True
