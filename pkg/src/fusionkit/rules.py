"""Fusion rules: finite multimagmas with unit and duals, and their structure theory.

The carrier is dense integer ids 0..n-1 with a separate label list; the
product lives in a single (n, n, n) integer table where ``table[x, y, z]`` is
the multiplicity of z in x*y.  Multisets over the carrier are length-n
integer vectors.  All queries are exact and pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import DomainError, ResourceError, ValidationError
from .groups import FiniteGroup

WITNESS_CAP = 16


class FusionRule:
    def __init__(self, labels, table, unit, dual):
        self.labels = tuple(str(x) for x in labels)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValidationError("duplicate labels")
        self.table = np.asarray(table, dtype=np.int64)
        if self.table.shape != (n, n, n):
            raise ValidationError(f"table must have shape ({n},{n},{n})")
        if (self.table < 0).any():
            raise ValidationError("multiplicities must be nonnegative")
        self.table.setflags(write=False)
        self.unit = int(unit)
        self.dual = np.asarray(dual, dtype=np.int64)
        if self.dual.shape != (n,) or ((self.dual < 0) | (self.dual >= n)).any():
            raise ValidationError("dual must be a self-map of the carrier")
        self.dual.setflags(write=False)
        if not (0 <= self.unit < n):
            raise ValidationError("unit out of range")
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    # ---- carrier ----------------------------------------------------------

    def __len__(self):
        return len(self.labels)

    @property
    def n(self):
        return len(self.labels)

    def index(self, label: str) -> int:
        if label not in self._index:
            raise DomainError(f"unknown label {label!r}")
        return self._index[label]

    def __repr__(self):
        return f"FusionRule({list(self.labels)})"

    @cached_property
    def key(self) -> bytes:
        return repr((self.labels, self.unit, self.dual.tolist(), self.table.tolist())).encode()

    def __eq__(self, other):
        return isinstance(other, FusionRule) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    # ---- products ----------------------------------------------------------

    def fuse(self, x: int, y: int) -> np.ndarray:
        return self.table[x, y]

    @cached_property
    def _supports(self):
        return tuple(
            tuple(np.nonzero(self.table[x, y])[0].tolist()) for x in range(self.n) for y in range(self.n)
        )

    def support(self, x: int, y: int) -> tuple[int, ...]:
        return self._supports[x * self.n + y]

    @cached_property
    def is_multiplicity_free(self) -> bool:
        return bool((self.table <= 1).all())

    def restrict(self, members) -> "FusionRule":
        """Sub-multimagma on a dual-closed, fusion-closed member set."""
        ids = sorted(members)
        if self.unit not in ids:
            raise DomainError("restriction must contain the unit")
        pos = {g: i for i, g in enumerate(ids)}
        sub = self.table[np.ix_(ids, ids, ids)]
        outside = self.table[np.ix_(ids, ids)].sum(axis=2) - sub.sum(axis=2)
        if outside.any():
            raise DomainError("member set is not closed under fusion")
        dual = [pos[int(self.dual[g])] for g in ids]
        return FusionRule([self.labels[g] for g in ids], sub, pos[self.unit], dual)


def as_multiset(rule: FusionRule, x) -> np.ndarray:
    """Coerce labels / label->multiplicity dicts / vectors to a count vector."""
    if isinstance(x, np.ndarray):
        v = x.astype(np.int64)
        if v.shape != (rule.n,):
            raise DomainError("multiset vector has wrong length")
        return v
    v = np.zeros(rule.n, dtype=np.int64)
    if isinstance(x, dict):
        for lab, m in x.items():
            v[rule.index(lab) if isinstance(lab, str) else int(lab)] += int(m)
    elif isinstance(x, (int, np.integer)):
        v[int(x)] = 1
    else:
        for lab in x:
            v[rule.index(lab) if isinstance(lab, str) else int(lab)] += 1
    if (v < 0).any():
        raise DomainError("negative multiplicity")
    return v


def fuse_multisets(rule: FusionRule, X, Y) -> np.ndarray:
    """Convolution <X*Y, z> = sum_xy X(x) Y(y) <xy, z>."""
    Xv, Yv = as_multiset(rule, X), as_multiset(rule, Y)
    return np.einsum("x,y,xyz->z", Xv, Yv, rule.table)


# ---- axioms -----------------------------------------------------------------


@dataclass
class RuleReport:
    associative: bool
    assoc_witnesses: list[tuple[int, int, int]]
    unit_ok: bool
    unit_witnesses: list[int]
    duals_ok: bool
    dual_witnesses: list[tuple[int, int]]
    products_nonempty: bool
    empty_witnesses: list[tuple[int, int]]
    unit_unique: bool
    dual_involutive: bool
    multiplicity_free: bool

    @property
    def passed(self) -> bool:
        return self.associative and self.unit_ok and self.duals_ok

    @property
    def consequences_ok(self) -> bool:
        # nonempty products, unique unit, involutive dual all follow from the axioms
        return self.products_nonempty and self.unit_unique and self.dual_involutive

    def summary(self) -> str:
        parts = [
            f"associative={self.associative}",
            f"unit={self.unit_ok}",
            f"duals={self.duals_ok}",
            f"nonempty_products={self.products_nonempty}",
            f"unit_unique={self.unit_unique}",
            f"dual_involutive={self.dual_involutive}",
            f"multiplicity_free={self.multiplicity_free}",
        ]
        if self.assoc_witnesses:
            parts.append(f"assoc_fail_at={self.assoc_witnesses[:3]}")
        return ", ".join(parts)


def verify_fusion_rule(rule: FusionRule) -> RuleReport:
    """Check all defining axioms; failures are reported with witnesses, not raised."""
    T, n, e = rule.table, rule.n, rule.unit
    lhs = np.einsum("xyu,uzw->xyzw", T, T)
    rhs = np.einsum("yzv,xvw->xyzw", T, T)
    bad = np.argwhere((lhs != rhs).any(axis=3))
    assoc_witnesses = [tuple(map(int, w)) for w in bad[:WITNESS_CAP]]

    eye = np.eye(n, dtype=np.int64)
    unit_bad = [x for x in range(n) if (T[e, x] != eye[x]).any() or (T[x, e] != eye[x]).any()]

    dual_bad = []
    for x in range(n):
        want = eye[rule.dual[x]]
        if (T[x, :, e] != want).any() or (T[:, x, e] != want).any():
            dual_bad.append((x, int(rule.dual[x])))

    empt = np.argwhere(T.sum(axis=2) == 0)
    units = [
        u for u in range(n)
        if all((T[u, x] == eye[x]).all() and (T[x, u] == eye[x]).all() for x in range(n))
    ]
    dual_inv = bool((rule.dual[rule.dual] == np.arange(n)).all()) and rule.dual[e] == e

    return RuleReport(
        associative=not assoc_witnesses,
        assoc_witnesses=assoc_witnesses,
        unit_ok=not unit_bad,
        unit_witnesses=unit_bad[:WITNESS_CAP],
        duals_ok=not dual_bad,
        dual_witnesses=dual_bad[:WITNESS_CAP],
        products_nonempty=empt.size == 0,
        empty_witnesses=[tuple(map(int, w)) for w in empt[:WITNESS_CAP]],
        unit_unique=len(units) == 1,
        dual_involutive=dual_inv,
        multiplicity_free=rule.is_multiplicity_free,
    )


def require_valid(rule: FusionRule) -> FusionRule:
    rep = verify_fusion_rule(rule)
    if not rep.passed:
        raise ValidationError(f"not a fusion rule: {rep.summary()}")
    return rule


# ---- homomorphisms -----------------------------------------------------------


def is_homomorphism(mapping, rule: FusionRule, other: FusionRule) -> bool:
    """f(xy) contained in f(x)f(y), for multiplicity-free multimagmas."""
    if not (rule.is_multiplicity_free and other.is_multiplicity_free):
        raise DomainError("homomorphisms are defined between multiplicity-free rules")
    f = _as_map(mapping, rule, other)
    for x, y in product(range(rule.n), repeat=2):
        img = {int(f[z]) for z in rule.support(x, y)}
        if not img <= set(other.support(int(f[x]), int(f[y]))):
            return False
    return True


def _as_map(mapping, rule: FusionRule, other: FusionRule) -> np.ndarray:
    if isinstance(mapping, np.ndarray):
        f = mapping.astype(np.int64)
    elif isinstance(mapping, dict):
        f = np.full(rule.n, -1, dtype=np.int64)
        for k, v in mapping.items():
            ki = rule.index(k) if isinstance(k, str) else int(k)
            vi = other.index(v) if isinstance(v, str) else int(v)
            f[ki] = vi
    else:
        f = np.asarray(list(mapping), dtype=np.int64)
    if f.shape != (rule.n,) or (f < 0).any() or (f >= other.n).any():
        raise DomainError("map is not total on the carrier")
    return f


# ---- subrules, cosets, gradings ----------------------------------------------


def subrule_generated(rule: FusionRule, seed) -> frozenset[int]:
    """Least subset containing unit and seed, closed under duals and fusion support."""
    members = {rule.unit} | {rule.index(s) if isinstance(s, str) else int(s) for s in seed}
    frontier = list(members)
    while frontier:
        nxt = []
        for x in frontier:
            d = int(rule.dual[x])
            if d not in members:
                members.add(d)
                nxt.append(d)
        for x, y in product(list(members), repeat=2):
            for z in rule.support(x, y):
                if z not in members:
                    members.add(z)
                    nxt.append(z)
        frontier = nxt
    return frozenset(members)


def is_subrule(rule: FusionRule, members) -> bool:
    m = frozenset(members)
    return rule.unit in m and subrule_generated(rule, m) == m


@dataclass
class CosetDecomposition:
    cosets: tuple[frozenset[int], ...]
    table: np.ndarray  # (k, k, k): max-multiplicity operation on cosets
    partitions: bool

    @property
    def index(self) -> int:
        return len(self.cosets)

    def coset_of(self, x: int) -> int:
        for i, c in enumerate(self.cosets):
            if x in c:
                return i
        raise DomainError(f"element {x} lies in no coset")


def left_cosets(rule: FusionRule, members) -> CosetDecomposition:
    """All sets floor(xS) with the max-multiplicity operation, plus the index."""
    ind = as_multiset(rule, sorted(members))
    ind = (ind > 0).astype(np.int64)
    raw = np.einsum("s,xsz->xz", ind, rule.table)
    cosets: list[frozenset[int]] = []
    for x in range(rule.n):
        c = frozenset(np.nonzero(raw[x])[0].tolist())
        if c not in cosets:
            cosets.append(c)
    cosets.sort(key=sorted)
    k = len(cosets)
    members = [np.fromiter(sorted(c), dtype=np.int64) for c in cosets]
    # max-reduce one axis at a time: table[i,j,l] = max over the coset blocks
    m1 = np.stack([rule.table[:, :, m].max(axis=2) for m in members], axis=2)
    m2 = np.stack([m1[m].max(axis=0) for m in members], axis=0)
    table = np.stack([m2[:, m].max(axis=1) for m in members], axis=1)
    cover = set().union(*cosets) == set(range(rule.n)) if cosets else False
    disjoint = sum(len(c) for c in cosets) == rule.n
    return CosetDecomposition(tuple(cosets), table, cover and disjoint)


def adjoint_subrule(rule: FusionRule) -> frozenset[int]:
    """Smallest subrule containing the support of every x*xbar."""
    seed = set()
    for x in range(rule.n):
        seed.update(rule.support(x, int(rule.dual[x])))
    return subrule_generated(rule, seed)


def nilpotency_class(rule: FusionRule) -> int | None:
    """Steps for the iterated adjoint series to hit {1}; None if it stalls above."""
    current = rule
    k = 0
    while len(current) > 1:
        nxt = adjoint_subrule(current)
        if len(nxt) == len(current):
            return None
        current = current.restrict(nxt)
        k += 1
    return k


@dataclass
class GradingReport:
    subrule: frozenset[int]
    cosets: tuple[frozenset[int], ...]
    projection: np.ndarray
    group: FiniteGroup

    def coset_label(self, i: int) -> str:
        return self.group.labels[i]


def _coset_label(rule: FusionRule, c: frozenset[int]) -> str:
    if len(c) == 1:
        return rule.labels[next(iter(c))]
    # comma-free: these labels flow into JSON keys of the form "x,y"
    return "{" + "|".join(rule.labels[i] for i in sorted(c)) + "}"


def universal_grading(rule: FusionRule) -> GradingReport:
    """Quotient by the adjoint subrule, checked to be a group partitioning the carrier."""
    ad = adjoint_subrule(rule)
    dec = left_cosets(rule, ad)
    if not dec.partitions:
        raise ValidationError("adjoint cosets do not partition the carrier")
    k = dec.index
    gtab = np.zeros((k, k), dtype=np.int64)
    for i, j in product(range(k), repeat=2):
        hits = np.nonzero(dec.table[i, j])[0]
        if len(hits) != 1:
            raise ValidationError("adjoint quotient is not single-valued")
        gtab[i, j] = hits[0]
    group = FiniteGroup([_coset_label(rule, c) for c in dec.cosets], gtab, name="grading")
    proj = np.zeros(rule.n, dtype=np.int64)
    for i, c in enumerate(dec.cosets):
        for x in c:
            proj[x] = i
    if not is_grading(rule, proj, group):
        raise ValidationError("universal projection is not a grading")
    return GradingReport(ad, dec.cosets, proj, group)


def is_grading(rule: FusionRule, projection, group: FiniteGroup) -> bool:
    """Surjective homomorphism from the underlying multimagma onto the group."""
    proj = np.asarray(projection, dtype=np.int64)
    if set(proj.tolist()) != set(range(len(group))):
        return False
    target = group.table[proj][:, proj]  # (n, n): required class of every product
    mask = rule.table > 0
    return not (mask & (proj[None, None, :] != target[:, :, None])).any()


def simple_currents(rule: FusionRule) -> tuple[frozenset[int], int]:
    """The group {a : a abar = 1} together with its coset index."""
    e = rule.unit
    eye = np.eye(rule.n, dtype=np.int64)
    S = frozenset(
        a for a in range(rule.n) if (rule.table[a, int(rule.dual[a])] == eye[e]).all()
    )
    if any(int(rule.dual[a]) not in S for a in S):
        raise ValidationError("simple currents are not dual-closed")
    group_from_members(rule, S)  # raises if fusion on S is not a group
    return S, left_cosets(rule, S).index


def group_from_members(rule: FusionRule, members) -> FiniteGroup:
    """The member set as a group, when fusion restricted to it is single-valued."""
    ids = sorted(members)
    pos = {g: i for i, g in enumerate(ids)}
    table = np.zeros((len(ids), len(ids)), dtype=np.int64)
    for a, b in product(ids, repeat=2):
        supp = rule.support(a, b)
        if len(supp) != 1 or supp[0] not in pos or rule.table[a, b, supp[0]] != 1:
            raise ValidationError("member set does not fuse as a group")
        table[pos[a], pos[b]] = pos[supp[0]]
    return FiniteGroup([rule.labels[g] for g in ids], table)


# ---- isomorphism search --------------------------------------------------------


def rule_isomorphisms(
    a: FusionRule,
    b: FusionRule,
    *,
    sector: np.ndarray | None = None,
    first_only: bool = False,
    bound: int = 10,
) -> list[np.ndarray]:
    """Carrier bijections preserving unit, duals, and the full multiset table.

    ``sector`` optionally assigns each element of both rules an integer class
    that the bijection must preserve (used for graded isomorphisms).
    """
    if len(a) != len(b):
        return []
    if len(a) > bound:
        raise ResourceError(f"carrier of size {len(a)} exceeds search bound {bound}")
    n = len(a)
    sec_a = sector[0] if sector is not None else np.zeros(n, dtype=np.int64)
    sec_b = sector[1] if sector is not None else np.zeros(n, dtype=np.int64)

    # cheap invariants to prune candidates
    def profile(r: FusionRule, x: int, sec) -> tuple:
        row = tuple(sorted(int(v) for v in r.table[x].sum(axis=1)))
        col = tuple(sorted(int(v) for v in r.table[:, x].sum(axis=1)))
        return (int(sec[x]), x == r.unit, int(r.dual[x]) == x, row, col)

    prof_a = [profile(a, x, sec_a) for x in range(n)]
    prof_b = [profile(b, x, sec_b) for x in range(n)]
    cands = [[y for y in range(n) if prof_b[y] == prof_a[x]] for x in range(n)]
    if not all(cands):
        return []

    out: list[np.ndarray] = []
    perm = np.full(n, -1, dtype=np.int64)
    used = [False] * n
    ta, tb = a.table, b.table

    def consistent(x: int) -> bool:
        y = int(perm[x])
        xd = int(a.dual[x])
        if perm[xd] >= 0 and int(perm[xd]) != int(b.dual[y]):
            return False
        assigned = [z for z in range(n) if perm[z] >= 0]
        # only triples that mention the new point can break
        for u in assigned:
            pu = perm[u]
            for v in assigned:
                pv = perm[v]
                if (
                    ta[x, u, v] != tb[y, pu, pv]
                    or ta[u, x, v] != tb[pu, y, pv]
                    or ta[u, v, x] != tb[pu, pv, y]
                ):
                    return False
        return True

    if b.unit not in cands[a.unit]:
        return []
    perm[a.unit] = b.unit
    used[b.unit] = True
    order = sorted((x for x in range(n) if x != a.unit), key=lambda x: len(cands[x]))

    def rec(i: int):
        if out and first_only:
            return
        if i == len(order):
            out.append(perm.copy())
            return
        x = order[i]
        for y in cands[x]:
            if used[y]:
                continue
            perm[x] = y
            used[y] = True
            if consistent(x):
                rec(i + 1)
            perm[x] = -1
            used[y] = False

    rec(0)
    return out


def automorphisms(rule: FusionRule, bound: int = 10) -> list[np.ndarray]:
    """All table automorphisms fixing the unit and commuting with duals."""
    return rule_isomorphisms(rule, rule, bound=bound)
