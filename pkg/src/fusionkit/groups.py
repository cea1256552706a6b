"""Finite groups as explicit multiplication tables, plus a small catalog.

Carriers are dense integer ids 0..n-1 with a separate label list.  Everything
is validated at construction; all queries are pure.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product

import numpy as np

from .errors import DomainError, ValidationError


class FiniteGroup:
    def __init__(self, labels, table, name: str | None = None):
        self.labels = tuple(str(x) for x in labels)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValidationError("duplicate group labels")
        self.table = np.asarray(table, dtype=np.int64)
        if self.table.shape != (n, n):
            raise ValidationError(f"table must be {n}x{n}")
        if ((self.table < 0) | (self.table >= n)).any():
            raise ValidationError("table entries out of range")
        self.table.setflags(write=False)
        self.name = name or f"group{n}"
        self._index = {lab: i for i, lab in enumerate(self.labels)}

        units = [e for e in range(n) if (self.table[e] == np.arange(n)).all() and (self.table[:, e] == np.arange(n)).all()]
        if len(units) != 1:
            raise ValidationError("table has no two-sided unit")
        self.unit = units[0]
        t = self.table
        left = t[t]               # left[a,b,c] = (ab)c
        right = t[:, t]           # right[a,b,c] = a(bc)
        if not (left == right).all():
            raise ValidationError("table is not associative")
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.nonzero(t[a] == self.unit)[0]
            if len(hits) != 1 or t[hits[0], a] != self.unit:
                raise ValidationError(f"element {self.labels[a]} has no two-sided inverse")
            inv[a] = hits[0]
        self.inv = inv
        self.inv.setflags(write=False)

    # ---- basics -------------------------------------------------------------

    def __len__(self):
        return len(self.labels)

    @property
    def order(self):
        return len(self.labels)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order {len(self)})"

    def index(self, label: str) -> int:
        return self._index[label]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    @cached_property
    def key(self) -> bytes:
        return repr((self.labels, self.table.tolist())).encode()

    @cached_property
    def table_key(self) -> bytes:
        return self.table.tobytes()

    @cached_property
    def orders(self) -> np.ndarray:
        return np.array([self.element_order(a) for a in range(len(self))])

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != self.unit:
            x = self.mul(x, a)
            k += 1
        return k

    # ---- subgroup machinery ---------------------------------------------

    def closure(self, seed) -> frozenset[int]:
        members = {self.unit, *seed}
        frontier = list(members)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(members):
                    for c in (self.mul(a, b), self.mul(b, a), self.inverse(a)):
                        if c not in members:
                            members.add(c)
                            nxt.append(c)
            frontier = nxt
        return frozenset(members)

    def generating_sequence(self) -> list[int]:
        gens: list[int] = []
        known = self.closure(gens)
        while len(known) < len(self):
            g = min(set(range(len(self))) - known)
            gens.append(g)
            known = self.closure(gens)
        return gens

    def subgroup(self, members) -> "FiniteGroup":
        ids = sorted(members)
        pos = {g: i for i, g in enumerate(ids)}
        table = [[pos[self.mul(a, b)] for b in ids] for a in ids]
        return FiniteGroup([self.labels[g] for g in ids], table, name=f"{self.name}<")

    def index2_subgroups(self) -> list[frozenset[int]]:
        """Subgroups of index 2, i.e. kernels of surjections onto Z2."""
        out = []
        for f in homomorphisms(self, cyclic(2)):
            if set(f.tolist()) == {0, 1}:
                out.append(frozenset(np.nonzero(f == 0)[0].tolist()))
        return sorted(set(out), key=sorted)

    # ---- constructors ---------------------------------------------------


def from_mul(labels, mul, name=None) -> FiniteGroup:
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    table = np.zeros((n, n), dtype=np.int64)
    for (i, a), (j, b) in product(enumerate(labels), repeat=2):
        table[i, j] = idx[mul(a, b)]
    return FiniteGroup(labels, table, name=name)


def trivial_group() -> FiniteGroup:
    return FiniteGroup(["1"], [[0]], name="1")


def cyclic(n: int, labels=None, name=None) -> FiniteGroup:
    if n < 1:
        raise DomainError("order must be positive")
    if labels is None:
        labels = ["1"] + [f"g{'' if k == 1 else '^%d' % k}" for k in range(1, n)]
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(labels, table, name=name or f"Z{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup, name=None) -> FiniteGroup:
    # labels must stay comma-free to survive the "x,y" JSON key format
    labels = [f"({x}|{y})" for x in g.labels for y in h.labels]
    nh = len(h)
    table = [
        [(g.mul(a1, a2)) * nh + h.mul(b1, b2) for a2 in range(len(g)) for b2 in range(nh)]
        for a1 in range(len(g))
        for b1 in range(nh)
    ]
    return FiniteGroup(labels, table, name=name or f"{g.name}x{h.name}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; D3 is the symmetric group S3."""
    if n < 1:
        raise DomainError("n must be positive")
    els = [("r", k) for k in range(n)] + [("s", k) for k in range(n)]
    labels = []
    for t, k in els:
        if t == "r":
            labels.append("1" if k == 0 else f"r{k}")
        else:
            labels.append(f"s{k}" if k else "s")

    def mul(x, y):
        (t1, k1), (t2, k2) = x, y
        if t1 == "r" and t2 == "r":
            return ("r", (k1 + k2) % n)
        if t1 == "r" and t2 == "s":
            return ("s", (k2 + k1) % n)
        if t1 == "s" and t2 == "r":
            return ("s", (k1 - k2) % n)
        return ("r", (k1 - k2) % n)

    idx = {e: i for i, e in enumerate(els)}
    table = [[idx[mul(a, b)] for b in els] for a in els]
    return FiniteGroup(labels, table, name=f"D{n}")


def quaternion() -> FiniteGroup:
    """The quaternion group Q8."""
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {"1": (1, "1"), "-1": (-1, "1"), "i": (1, "i"), "-i": (-1, "i"),
            "j": (1, "j"), "-j": (-1, "j"), "k": (1, "k"), "-k": (-1, "k")}
    mul1 = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("j", "1"): (1, "j"), ("k", "1"): (1, "k"),
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }

    def mul(a, b):
        sa, xa = base[a]
        sb, xb = base[b]
        s, x = mul1[(xa, xb)]
        sign = sa * sb * s
        return x if sign == 1 else ("-1" if x == "1" else "-" + x)

    return from_mul(labels, mul, name="Q8")


def klein_four() -> FiniteGroup:
    return direct_product(cyclic(2), cyclic(2), name="Z2xZ2")


# ---- homomorphism / isomorphism enumeration ---------------------------------

_HOM_CACHE: dict = {}


def _derivations(g: FiniteGroup):
    """BFS expressions of every element as prior * generator, in discovery order."""
    gens = g.generating_sequence()
    expr: dict[int, tuple] = {g.unit: ("unit",)}
    order = [g.unit]
    frontier = [g.unit]
    while frontier:
        nxt = []
        for a in frontier:
            for gen in gens:
                b = g.mul(a, gen)
                if b not in expr:
                    expr[b] = ("mul", a, gen)
                    order.append(b)
                    nxt.append(b)
        frontier = nxt
    if len(expr) != len(g):
        raise ValidationError("generators do not generate")  # cannot happen
    return gens, expr, order


def homomorphisms(g: FiniteGroup, h: FiniteGroup) -> list[np.ndarray]:
    """All group homomorphisms g -> h, as index arrays, deterministic order.

    Results are cached by table content (labels play no role); treat the
    returned arrays as read-only.
    """
    cache_key = (g.table_key, h.table_key)
    cached = _HOM_CACHE.get(cache_key)
    if cached is not None:
        return cached
    gens, expr, order = _derivations(g)
    results = []
    n = len(g)
    ht = h.table

    def build(images: dict[int, int]) -> np.ndarray:
        f = np.full(n, -1, dtype=np.int64)
        f[g.unit] = h.unit
        for e in order[1:]:  # discovery order: the prior element is resolved
            _, prior, gen = expr[e]
            f[e] = ht[f[prior], images[gen]]
        return f

    g_orders, h_orders = g.orders, h.orders
    candidates = [
        [img for img in range(len(h)) if g_orders[gen] % h_orders[img] == 0] for gen in gens
    ]
    for combo in product(*candidates):
        f = build(dict(zip(gens, combo)))
        ft = h.table[f][:, f]
        if (ft == f[g.table]).all():
            results.append(f)
    _HOM_CACHE[cache_key] = results
    return results


def isomorphisms(g: FiniteGroup, h: FiniteGroup) -> list[np.ndarray]:
    if len(g) != len(h):
        return []
    return [f for f in homomorphisms(g, h) if len(set(f.tolist())) == len(h)]


def automorphisms(g: FiniteGroup) -> list[np.ndarray]:
    return isomorphisms(g, g)


# ---- catalog -----------------------------------------------------------------

CATALOG_COMPLETE_THROUGH = 8


def standard_catalog(max_order: int = CATALOG_COMPLETE_THROUGH) -> list[FiniteGroup]:
    """One group per isomorphism class, complete for orders <= 8.

    Beyond 8 only cyclics, two-factor abelian products, and dihedrals are
    included; callers should surface a completeness warning there.
    """
    groups: list[FiniteGroup] = []
    for n in range(1, max_order + 1):
        groups.extend(_groups_of_order(n))
    return groups


def _groups_of_order(n: int) -> list[FiniteGroup]:
    if n == 1:
        return [trivial_group()]
    out = [cyclic(n)]
    seen = [out[0]]

    def add(g):
        if not any(len(g) == len(s) and isomorphisms(g, s) for s in seen):
            seen.append(g)
            out.append(g)

    for a in range(2, n):
        if n % a == 0:
            add(direct_product(cyclic(a), cyclic(n // a)))
    if n % 2 == 0 and n >= 6:
        add(dihedral(n // 2))
    if n == 8:
        add(direct_product(cyclic(2), klein_four(), name="Z2xZ2xZ2"))
        add(quaternion())
    return out


_NAMED = {}


def named_group(name: str) -> FiniteGroup:
    """Parse names like Z4, Z2xZ2, D4, Q8, S3, 1."""
    if not _NAMED:
        _NAMED.update({
            "1": trivial_group(), "Z1": trivial_group(), "Q8": quaternion(),
            "S3": dihedral(3),
        })
        for n in range(2, 17):
            _NAMED[f"Z{n}"] = cyclic(n)
        for n in range(2, 9):
            _NAMED[f"D{n}"] = dihedral(n)
        for a in range(2, 9):
            for b in range(2, 9):
                if a * b <= 16:
                    _NAMED[f"Z{a}xZ{b}"] = direct_product(cyclic(a), cyclic(b))
    if name not in _NAMED:
        raise DomainError(f"unknown group name {name!r}")
    return _NAMED[name]


def identify_group(g: FiniteGroup) -> str | None:
    """Catalog name of g's isomorphism class, when the order is cataloged."""
    if len(g) > CATALOG_COMPLETE_THROUGH:
        return None
    for cand in _groups_of_order(len(g)):
        if isomorphisms(g, cand):
            return cand.name
    return None
