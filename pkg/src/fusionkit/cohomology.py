"""Group cochains valued in unit groups, coboundaries, and H^3 by exact linear algebra.

Cochains take values either in GF(p)^x with the trivial action or in the
invertible part of an ambient algebra B = F^M with its two-sided actions.
All H^3 computation happens in discrete-log coordinates, where cocycle and
coboundary conditions are integer-linear over Z_(p-1); p - 1 is composite,
so kernels and images go through the gcd-pivot machinery in zmodlin.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .ambient import Ambi
from .errors import DomainError, ResourceError, ValidationError
from .fields import Field
from .groups import FiniteGroup
from .zmodlin import nullspace_mod, quotient_structure, solve_mod


class TrivialUnits:
    """GF(p)^x as a module with both actions trivial; values are ints."""

    def __init__(self, field: Field):
        self.field = field

    def one(self):
        return 1

    def mul(self, *xs):
        out = 1
        for x in xs:
            out = out * int(x) % self.field.p
        return out

    def inv(self, x):
        return self.field.inv(int(x))

    def act(self, a, x, b=None):
        return int(x) % self.field.p

    def eq(self, x, y):
        return (int(x) - int(y)) % self.field.p == 0

    def coerce(self, x):
        v = int(x) % self.field.p
        if v == 0:
            raise ValidationError("cochain values must be invertible")
        return v


class BimoduleUnits:
    """B^x for an ambient algebra, with the two-sided serf actions."""

    def __init__(self, ambi: Ambi):
        self.ambi = ambi
        self.field = ambi.field

    def one(self):
        return self.ambi.one()

    def mul(self, *xs):
        return self.ambi.mul(*xs)

    def inv(self, x):
        return self.ambi.inv(x)

    def act(self, a, x, b=None):
        unit = self.ambi.unit_serf
        return self.ambi.act(unit if a is None else a, x, unit if b is None else b)

    def eq(self, x, y):
        return self.ambi.eq(x, y)

    def coerce(self, x):
        v = np.asarray(x, dtype=np.int64) % self.field.p
        if (v == 0).any():
            raise ValidationError("cochain values must be invertible")
        return v


@dataclass
class Cochain:
    group: FiniteGroup
    degree: int
    values: dict
    module: object  # TrivialUnits or BimoduleUnits

    def __post_init__(self):
        if self.degree not in (1, 2, 3):
            raise DomainError("degree must be 1, 2, or 3")
        n = len(self.group)
        want = set(product(range(n), repeat=self.degree))
        vals = {tuple(int(i) for i in k): self.module.coerce(v) for k, v in self.values.items()}
        if set(vals) != want:
            raise ValidationError("cochain must be total on S^n")
        self.values = vals

    def __call__(self, *args):
        return self.values[args]

    def is_normalized(self) -> bool:
        e = self.group.unit
        one = self.module.one()
        return all(self.module.eq(v, one) for k, v in self.values.items() if e in k)

    def mul(self, other: "Cochain") -> "Cochain":
        vals = {k: self.module.mul(v, other.values[k]) for k, v in self.values.items()}
        return Cochain(self.group, self.degree, vals, self.module)

    def inv(self) -> "Cochain":
        return Cochain(self.group, self.degree, {k: self.module.inv(v) for k, v in self.values.items()}, self.module)

    def eq(self, other: "Cochain") -> bool:
        return all(self.module.eq(v, other.values[k]) for k, v in self.values.items())


def trivial_cochain(group: FiniteGroup, degree: int, field: Field) -> Cochain:
    mod = TrivialUnits(field)
    return Cochain(group, degree, {k: 1 for k in product(range(len(group)), repeat=degree)}, mod)


def coboundary(h: Cochain, side: str = "left") -> Cochain:
    """The left or right coboundary; raises on degree-3 right for real bimodules."""
    if side not in ("left", "right"):
        raise DomainError("side must be 'left' or 'right'")
    g, mod = h.group, h.module
    mul, inv, act = mod.mul, mod.inv, mod.act
    gm = g.mul
    n = len(g)
    out = {}
    if h.degree == 1:
        for a, b in product(range(n), repeat=2):
            if side == "left":
                out[(a, b)] = mul(h(a), act(a, h(b)), inv(h(gm(a, b))))
            else:
                out[(a, b)] = mul(act(None, h(a), b), h(b), inv(h(gm(a, b))))
        deg = 2
    elif h.degree == 2:
        for a, b, c in product(range(n), repeat=3):
            if side == "left":
                out[(a, b, c)] = mul(
                    h(a, gm(b, c)), act(a, h(b, c)), inv(mul(h(a, b), h(gm(a, b), c)))
                )
            else:
                out[(a, b, c)] = mul(
                    h(a, gm(b, c)), h(b, c), inv(mul(act(None, h(a, b), c), h(gm(a, b), c)))
                )
        deg = 3
    else:
        if side == "right":
            if isinstance(mod, BimoduleUnits) and len(mod.ambi.orbits) != mod.ambi.npoints:
                raise DomainError("degree-3 right coboundary is only defined for trivial actions")
            # for trivial actions both coboundaries agree; fall through to left
        for a, b, c, d in product(range(n), repeat=4):
            out[(a, b, c, d)] = mul(
                h(a, b, c),
                h(a, gm(b, c), d),
                act(a, h(b, c, d)),
                inv(mul(h(a, b, gm(c, d)), h(gm(a, b), c, d))),
            )
        deg = 4
    if deg == 4:
        res = object.__new__(Cochain)
        res.group, res.degree, res.values, res.module = g, 4, out, mod
        return res
    return Cochain(g, deg, out, mod)


def is_cocycle(h: Cochain) -> bool:
    db = coboundary(h, "left")
    one = h.module.one()
    return all(h.module.eq(v, one) for v in db.values.values())


def normalize_cocycle3(h: Cochain) -> tuple[Cochain, Cochain]:
    """(normalized cohomologous cocycle, witness 2-cochain k with h' = h * d(k))."""
    if h.degree != 3 or not is_cocycle(h):
        raise DomainError("input must be a 3-cocycle")
    g, mod = h.group, h.module
    k1 = Cochain(g, 2, {(a, b): h(g.unit, g.unit, b) for a, b in product(range(len(g)), repeat=2)}, mod)
    step1 = h.mul(coboundary(k1, "left").inv())
    k2 = Cochain(g, 2, {(a, b): step1(a, g.unit, g.unit) for a, b in product(range(len(g)), repeat=2)}, mod)
    out = step1.mul(coboundary(k2, "left"))
    if not out.is_normalized():
        raise ValidationError("normalization failed")
    witness = k2.mul(k1.inv())
    return out, witness


# ---- H^3 over GF(p)^x ------------------------------------------------------------


def _tuple_index(n: int, degree: int) -> dict:
    return {t: i for i, t in enumerate(product(range(n), repeat=degree))}


def _coboundary_matrix(g: FiniteGroup, degree: int) -> np.ndarray:
    """Exponent-space matrix of the left coboundary C^degree -> C^(degree+1)."""
    n = len(g)
    src = _tuple_index(n, degree)
    dst = _tuple_index(n, degree + 1)
    D = np.zeros((len(dst), len(src)), dtype=np.int64)
    gm = g.mul
    if degree == 2:
        for (a, b, c), row in dst.items():
            D[row, src[(a, gm(b, c))]] += 1
            D[row, src[(b, c)]] += 1
            D[row, src[(a, b)]] -= 1
            D[row, src[(gm(a, b), c)]] -= 1
    elif degree == 3:
        for (a, b, c, d), row in dst.items():
            D[row, src[(a, b, c)]] += 1
            D[row, src[(a, gm(b, c), d)]] += 1
            D[row, src[(b, c, d)]] += 1
            D[row, src[(a, b, gm(c, d))]] -= 1
            D[row, src[(gm(a, b), c, d)]] -= 1
    else:
        raise DomainError("only degrees 2 and 3 are needed here")
    return D


@dataclass
class H3Report:
    group: FiniteGroup
    field: Field
    order: int
    invariant_factors: list[int]
    representatives: list[Cochain]
    roots_table: dict | None  # rep index -> root of unity, for cyclic groups

    def to_dict(self) -> dict:
        reps = []
        for c in self.representatives:
            reps.append({",".join(self.group.labels[i] for i in k): int(v) for k, v in sorted(c.values.items())})
        out = {
            "group": self.group.name,
            "p": self.field.p,
            "order": self.order,
            "invariant_factors": self.invariant_factors,
            "representatives": reps,
        }
        if self.roots_table is not None:
            out["roots_of_unity"] = {str(k): int(v) for k, v in sorted(self.roots_table.items())}
        return out


def h3(g: FiniteGroup, field: Field) -> H3Report:
    """H^3(G, GF(p)^x) with trivial action: kernel/image over Z_(p-1)."""
    if len(g) > 8:
        raise ResourceError("h3 is bounded at |G| <= 8")
    if field.p > 257:
        raise ResourceError("h3 is bounded at p <= 257")
    n = field.p - 1
    D3 = _coboundary_matrix(g, 3)
    D2 = _coboundary_matrix(g, 2)
    kernel = nullspace_mod(D3, n)
    image = [D2[:, j] % n for j in range(D2.shape[1])]
    for v in image:
        if (D3 @ v % n).any():
            raise ValidationError("coboundary image is not closed")  # dd != 1
    quot = quotient_structure(kernel, image, D3.shape[1], n)
    reps = []
    mod = TrivialUnits(field)
    tindex = _tuple_index(len(g), 3)
    for vec in quot.representatives(limit=4096):
        vals = {t: field.exp(int(vec[i])) for t, i in tindex.items()}
        c = Cochain(g, 3, vals, mod)
        c, _ = normalize_cocycle3(c)
        reps.append(c)
    roots = None
    gen = _cyclic_generator(g)
    if gen is not None:
        roots = {i: _cyclic_trace(c, gen) for i, c in enumerate(reps)}
    return H3Report(g, field, quot.order, quot.invariant_factors, reps, roots)


def _cyclic_generator(g: FiniteGroup) -> int | None:
    for a in range(len(g)):
        if g.element_order(a) == len(g):
            return a
    return None


def _cyclic_trace(c: Cochain, gen: int) -> int:
    """prod_j c(gen, gen^j, gen): a coboundary-stable root of unity."""
    g = c.group
    out = 1
    x = g.unit
    for _ in range(len(g)):
        out = c.module.mul(out, c(gen, x, gen))
        x = g.mul(x, gen)
    return out


def cohomologous3(c1: Cochain, c2: Cochain, field: Field) -> Cochain | None:
    """A 2-cochain k with c2 = c1 * d(k), or None."""
    g = c1.group
    n = field.p - 1
    D2 = _coboundary_matrix(g, 2)
    tindex3 = _tuple_index(len(g), 3)
    target = np.zeros(len(tindex3), dtype=np.int64)
    for t, i in tindex3.items():
        target[i] = field.log(field.div(c2(*t), c1(*t)))
    sol = solve_mod(D2, target, n)
    if sol is None:
        return None
    tindex2 = _tuple_index(len(g), 2)
    vals = {t: field.exp(int(sol[i])) for t, i in tindex2.items()}
    return Cochain(g, 2, vals, TrivialUnits(field))


# ---- the bridge to fusion systems ---------------------------------------------------


def cocycle_to_fusion_system(g: FiniteGroup, omega: Cochain, field: Field):
    """The fusion system on the group rule with coefficients delta-supported on omega."""
    from .feudal import group_rule
    from .systems import FusionSystem, admissible_sextuples

    if omega.degree != 3 or not is_cocycle(omega):
        raise DomainError("omega must be a 3-cocycle")
    if not omega.is_normalized():
        omega, _ = normalize_cocycle3(omega)
    rule = group_rule(g)
    coeffs = {}
    for (x, y, z, u, r, v) in admissible_sextuples(rule):
        coeffs[(x, y, z, u, r, v)] = omega(x, y, z)
    return FusionSystem(rule, field, coeffs)


def fusion_system_to_cocycle(f) -> Cochain:
    """Read the 3-cocycle back off a fusion system on a group rule."""
    g_rule = f.rule
    n = g_rule.n
    from .rules import group_from_members

    g = group_from_members(g_rule, range(n))
    vals = {}
    for a, b, c in product(range(n), repeat=3):
        ab = g.mul(a, b)
        vals[(a, b, c)] = f.coeff(a, b, c, ab, g.mul(ab, c), g.mul(b, c))
    c = Cochain(g, 3, vals, TrivialUnits(f.field))
    if not is_cocycle(c):
        raise ValidationError("fusion system does not define a cocycle")
    return c


# ---- the cross-check through uberderivations ------------------------------------------


@dataclass
class H3ViaUberReport:
    group: FiniteGroup
    serfs: tuple[int, ...]
    field: Field
    count: int
    h3_order: int
    classification: object

    @property
    def agree(self) -> bool:
        return self.count == self.h3_order

    def to_dict(self) -> dict:
        return {
            "group": self.group.name,
            "serfs": [self.group.labels[s] for s in self.serfs],
            "p": self.field.p,
            "uber_classes": self.count,
            "h3_order": self.h3_order,
            "agree": self.agree,
        }


def h3_via_uber(g: FiniteGroup, serfs, field: Field) -> H3ViaUberReport:
    """Count gauge classes of uberderivations on an index-2 subgroup over F^(G-S),
    and check the count against h3 directly."""
    from .feudal import graded_group
    from .uber import enumerate_uber

    serfs = frozenset(int(s) for s in serfs)
    if 2 * len(serfs) != len(g):
        raise DomainError("serfs must form an index-2 subgroup")
    fr = graded_group(g, serfs)
    ambi = Ambi(fr, field)
    cls = enumerate_uber(ambi, with_orbits=False)
    direct = h3(g, field)
    report = H3ViaUberReport(g, tuple(sorted(serfs)), field, cls.gauge_classes, direct.order, cls)
    if not report.agree:
        raise ValidationError(
            f"uber count {report.count} disagrees with h3 order {report.h3_order}"
        )
    return report
