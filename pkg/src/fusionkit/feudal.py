"""Feudal structure on fusion rules and its dictionary with group homomorphisms.

A feudal rule splits as serfs (a group) and lords (the odd part of a Z2
grading).  The two functors implemented here, :func:`phi` from homomorphism
data to graded rules and :func:`gamma` back, are mutually inverse up to the
labeling conventions that keep serf and lord carriers disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import DomainError, ValidationError
from .groups import FiniteGroup, cyclic, isomorphisms, standard_catalog, CATALOG_COMPLETE_THROUGH
from .rules import (
    FusionRule,
    adjoint_subrule,
    group_from_members,
    is_grading,
    nilpotency_class,
    require_valid,
    rule_isomorphisms,
    simple_currents,
    universal_grading,
    verify_fusion_rule,
)


@dataclass
class HomDatum:
    """A homomorphism u: S -> G whose image has index 2 in G."""

    source: FiniteGroup
    target: FiniteGroup
    mapping: np.ndarray

    def __post_init__(self):
        self.mapping = np.asarray(self.mapping, dtype=np.int64)
        S, G, u = self.source, self.target, self.mapping
        if self.mapping.shape != (len(S),):
            raise ValidationError("mapping must be total on the source")
        for a, b in product(range(len(S)), repeat=2):
            if G.mul(int(u[a]), int(u[b])) != int(u[S.mul(a, b)]):
                raise ValidationError("mapping is not a homomorphism")
        if 2 * len(self.image_ids) != len(G):
            raise ValidationError("cokernel must have order 2")

    @cached_property
    def image_ids(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.mapping.tolist())))

    @cached_property
    def kernel_ids(self) -> tuple[int, ...]:
        return tuple(int(a) for a in range(len(self.source)) if int(self.mapping[a]) == self.target.unit)

    @cached_property
    def lord_ids(self) -> tuple[int, ...]:
        im = set(self.image_ids)
        return tuple(m for m in range(len(self.target)) if m not in im)

    def __repr__(self):
        return f"HomDatum({self.source.name} -> {self.target.name}, |ker|={len(self.kernel_ids)})"


class FeudalRule:
    """A fusion rule with a chosen Z2 grading whose even part is a group."""

    def __init__(self, rule: FusionRule, serfs, grading_count: int = 1):
        self.rule = rule
        self.serfs = frozenset(serfs)
        self.lords = frozenset(range(rule.n)) - self.serfs
        self.grading_count = grading_count
        self.serf_ids = tuple(sorted(self.serfs))
        self.lord_ids = tuple(sorted(self.lords))
        self._validate()

    def _validate(self):
        r = self.rule
        if not self.lords:
            raise ValidationError("a feudal rule needs at least one lord")
        if not r.is_multiplicity_free:
            raise ValidationError("feudal rules are multiplicity-free")
        grading = np.array([0 if x in self.serfs else 1 for x in range(r.n)])
        if not is_grading(r, grading, cyclic(2)):
            raise ValidationError("serf/lord split is not a Z2 grading")
        group_from_members(r, self.serfs)  # serfs must fuse as a group
        # serf actions on lords are transitive on both sides
        for act in (lambda a, m: r.support(a, m), lambda a, m: r.support(m, a)):
            for m in self.lord_ids:
                orbit = {m}
                for a in self.serf_ids:
                    got = act(a, m)
                    if len(got) != 1:
                        raise ValidationError("serf action on lords is not single-valued")
                    orbit.add(got[0])
                if orbit != self.lords:
                    raise ValidationError("serf action on lords is not transitive")
        ad = self.adjoint_ids
        for m, l in product(self.lord_ids, repeat=2):
            prod_supp = set(r.support(m, l))
            if not prod_supp <= self.serfs:
                raise ValidationError("lords do not fuse into serfs")
            base = next(iter(prod_supp))
            coset = {r.support(a, base)[0] for a in ad}
            if prod_supp != coset:
                raise ValidationError("lord products are not adjoint cosets")

    # ---- derived structure -------------------------------------------------

    @cached_property
    def serf_group(self) -> FiniteGroup:
        return group_from_members(self.rule, self.serfs)

    @cached_property
    def adjoint_ids(self) -> tuple[int, ...]:
        return tuple(sorted(adjoint_subrule(self.rule)))

    def act_left(self, a: int, m: int) -> int:
        return self.rule.support(a, m)[0]

    def act_right(self, m: int, a: int) -> int:
        return self.rule.support(m, a)[0]

    def serf_mul(self, a: int, b: int) -> int:
        return self.rule.support(a, b)[0]

    def serf_inv(self, a: int) -> int:
        return int(self.rule.dual[a])

    def grading_of(self, x: int) -> int:
        return 1 if x in self.serfs else -1

    def __repr__(self):
        return f"FeudalRule({len(self.serfs)} serfs, {len(self.lords)} lords)"


# ---- named constructors --------------------------------------------------------


def group_rule(g: FiniteGroup) -> FusionRule:
    """A group, viewed as the fusion rule with single-valued fusion."""
    n = len(g)
    table = np.zeros((n, n, n), dtype=np.int64)
    for a, b in product(range(n), repeat=2):
        table[a, b, g.mul(a, b)] = 1
    return FusionRule(g.labels, table, g.unit, g.inv)


def graded_group(g: FiniteGroup, serfs) -> FeudalRule:
    """A Z2-graded group: even part the given index-2 subgroup."""
    serfs = frozenset(serfs)
    return FeudalRule(group_rule(g), serfs)


def tambara_yamagami(a: FiniteGroup, lord_label: str = "m") -> FeudalRule:
    """Serf group A plus a lone lord m with m*m = A."""
    n = len(a)
    labels = list(a.labels) + [lord_label]
    table = np.zeros((n + 1, n + 1, n + 1), dtype=np.int64)
    for x, y in product(range(n), repeat=2):
        table[x, y, a.mul(x, y)] = 1
    table[n, : n + 1, :], table[: n + 1, n, :] = 0, 0
    for x in range(n):
        table[x, n, n] = 1
        table[n, x, n] = 1
    table[n, n, :n] = 1
    dual = list(a.inv) + [n]
    rule = require_valid(FusionRule(labels, table, a.unit, dual))
    return FeudalRule(rule, range(n))


def moore_read() -> FeudalRule:
    """The six-element rule with serfs {1,-1,i,-i} and lords {i',-i'}."""
    labels = ["1", "-1", "i", "-i", "i'", "-i'"]
    vals = {"1": 1, "-1": -1, "i": 1j, "-i": -1j}
    serf_of = {v: k for k, v in vals.items()}
    lord_of = {1j: "i'", -1j: "-i'"}
    idx = {lab: k for k, lab in enumerate(labels)}
    table = np.zeros((6, 6, 6), dtype=np.int64)
    for x, p in vals.items():
        for y, q in vals.items():
            table[idx[x], idx[y], idx[serf_of[p * q]]] = 1
    for x, p in vals.items():
        for lm, q in (("i'", 1j), ("-i'", -1j)):
            table[idx[x], idx[lm], idx[lord_of[p * p * q]]] = 1
            table[idx[lm], idx[x], idx[lord_of[p * p * q]]] = 1
    # lord products: p' * q' = the two square roots of p*q
    table[idx["i'"], idx["i'"], idx["i"]] = 1
    table[idx["i'"], idx["i'"], idx["-i"]] = 1
    table[idx["-i'"], idx["-i'"], idx["i"]] = 1
    table[idx["-i'"], idx["-i'"], idx["-i"]] = 1
    table[idx["i'"], idx["-i'"], idx["1"]] = 1
    table[idx["i'"], idx["-i'"], idx["-1"]] = 1
    table[idx["-i'"], idx["i'"], idx["1"]] = 1
    table[idx["-i'"], idx["i'"], idx["-1"]] = 1
    dual = [idx["1"], idx["-1"], idx["-i"], idx["i"], idx["-i'"], idx["i'"]]
    rule = require_valid(FusionRule(labels, table, 0, dual))
    return FeudalRule(rule, [idx[x] for x in ("1", "-1", "i", "-i")])


# ---- detection -------------------------------------------------------------------


def z2_feudal_gradings(rule: FusionRule) -> list[frozenset[int]]:
    """All serf sets of valid feudal Z2 gradings, by exhaustive search."""
    out = []
    n = rule.n
    for bits in product((0, 1), repeat=n - 1):
        grading = np.zeros(n, dtype=np.int64)
        rest = [x for x in range(n) if x != rule.unit]
        for x, b in zip(rest, bits):
            grading[x] = b
        if not any(grading):
            continue  # not surjective
        if not is_grading(rule, grading, cyclic(2)):
            continue
        serfs = frozenset(np.nonzero(grading == 0)[0].tolist())
        try:
            FeudalRule(rule, serfs)
        except ValidationError:
            continue
        out.append(serfs)
    return out


def detect_feudal(rule: FusionRule) -> FeudalRule | None:
    """The unique feudal structure of a properly feudal rule, or a chosen one
    for a Z2-gradable group; None otherwise."""
    if not verify_fusion_rule(rule).passed or not rule.is_multiplicity_free:
        return None
    sc, index = simple_currents(rule)
    if index == 1:
        # a group: any index-2 subgroup gives a grading
        g = group_from_members(rule, range(rule.n))
        subs = g.index2_subgroups()
        if not subs:
            return None
        return FeudalRule(rule, subs[0], grading_count=len(subs))
    if index != 2 or nilpotency_class(rule) is None:
        return None
    return FeudalRule(rule, sc, grading_count=1)


# ---- the two functors -------------------------------------------------------------


def _fresh_lord_labels(serf_labels, lord_labels) -> list[str]:
    taken = set(serf_labels)
    out = []
    for lab in lord_labels:
        cand = lab
        while cand in taken:
            cand = cand + "'"
        taken.add(cand)
        out.append(cand)
    return out


def phi(h: HomDatum) -> FeudalRule:
    """The graded rule with serfs S, lords G - im(u), and fusion through u."""
    S, G, u = h.source, h.target, h.mapping
    ns = len(S)
    lords = list(h.lord_ids)
    nm = len(lords)
    lpos = {m: ns + i for i, m in enumerate(lords)}
    labels = list(S.labels) + _fresh_lord_labels(S.labels, [G.labels[m] for m in lords])
    n = ns + nm
    table = np.zeros((n, n, n), dtype=np.int64)
    for a, b in product(range(ns), repeat=2):
        table[a, b, S.mul(a, b)] = 1
    for a in range(ns):
        ua = int(u[a])
        for m in lords:
            table[a, lpos[m], lpos[G.mul(ua, m)]] = 1
            table[lpos[m], a, lpos[G.mul(m, ua)]] = 1
    for m, l in product(lords, repeat=2):
        ml = G.mul(m, l)
        for a in range(ns):
            if int(u[a]) == ml:
                table[lpos[m], lpos[l], a] = 1
    dual = [int(S.inv[a]) for a in range(ns)] + [lpos[int(G.inv[m])] for m in lords]
    rule = require_valid(FusionRule(labels, table, S.unit, dual))
    return FeudalRule(rule, range(ns))


def gamma(fr: FeudalRule) -> HomDatum:
    """Restriction to serfs of the universal grading."""
    grading = universal_grading(fr.rule)
    serf_group = fr.serf_group
    mapping = np.array([int(grading.projection[x]) for x in fr.serf_ids], dtype=np.int64)
    return HomDatum(serf_group, grading.group, mapping)


# ---- isomorphism of the two kinds of object ----------------------------------------


def hom_datum_isomorphic(h1: HomDatum, h2: HomDatum):
    """A commuting square of group isomorphisms mapping lords to lords, or None."""
    for h0 in isomorphisms(h1.source, h2.source):
        for t in isomorphisms(h1.target, h2.target):
            if any(int(t[h1.mapping[a]]) != int(h2.mapping[h0[a]]) for a in range(len(h1.source))):
                continue
            if any(int(t[m]) not in h2.lord_ids for m in h1.lord_ids):
                continue
            return h0, t
    return None


def graded_isomorphic(f1: FeudalRule, f2: FeudalRule):
    """A table isomorphism preserving the serf/lord split, or None."""
    if len(f1.rule) != len(f2.rule) or len(f1.serfs) != len(f2.serfs):
        return None
    sec1 = np.array([0 if x in f1.serfs else 1 for x in range(f1.rule.n)])
    sec2 = np.array([0 if x in f2.serfs else 1 for x in range(f2.rule.n)])
    found = rule_isomorphisms(
        f1.rule, f2.rule, sector=(sec1, sec2), first_only=True, bound=max(len(f1.rule), 10)
    )
    return found[0] if found else None


def round_trip_check(x) -> bool:
    """Gamma(Phi(H)) isomorphic to H, or Phi(Gamma(L)) graded-isomorphic to L."""
    if isinstance(x, HomDatum):
        return hom_datum_isomorphic(gamma(phi(x)), x) is not None
    if isinstance(x, FeudalRule):
        return graded_isomorphic(phi(gamma(x)), x) is not None
    raise DomainError("expected a HomDatum or FeudalRule")


# ---- enumeration --------------------------------------------------------------------


@dataclass
class FeudalEnumeration:
    hom_data: list[HomDatum]
    rules: list[FeudalRule]
    warnings: list[str]


def enumerate_feudal(max_order: int, catalog: list[FiniteGroup] | None = None) -> FeudalEnumeration:
    """All properly feudal rules with at most max_order elements, up to isomorphism.

    Produced as phi of homomorphisms with order-2 cokernel and nontrivial
    kernel, deduplicated by isomorphism of the underlying homomorphism data.
    """
    if max_order > 16:
        raise DomainError("max_order is capped at 16")
    warnings = []
    if catalog is None:
        catalog = standard_catalog(min(max_order, 15))
        needed = max_order - 1
        if needed > CATALOG_COMPLETE_THROUGH:
            warnings.append(
                f"group catalog is only curated through order {CATALOG_COMPLETE_THROUGH}; "
                f"orders up to {needed} may be incomplete"
            )
    from .groups import homomorphisms  # local import keeps module load light

    found: list[HomDatum] = []
    for S in catalog:
        for G in catalog:
            if len(G) % 2 or len(S) + len(G) // 2 > max_order:
                continue
            for u in homomorphisms(S, G):
                if 2 * len(set(u.tolist())) != len(G):
                    continue
                if sum(1 for a in range(len(S)) if int(u[a]) == G.unit) < 2:
                    continue  # properly feudal needs a nontrivial kernel
                h = HomDatum(S, G, u)
                if not any(hom_datum_isomorphic(h, other) for other in found):
                    found.append(h)
    return FeudalEnumeration(found, [phi(h) for h in found], warnings)
