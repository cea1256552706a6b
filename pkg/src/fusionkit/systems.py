"""Fusion systems on multiplicity-free rules: recoupling tables over GF(p).

Coefficients are stored sparsely, keyed by admissible sextuple (x,y,z,u,r,v)
with u in xy, v in yz, r in uz and xv.  Verification compiles the pentagon
instances once per rule and then runs linear passes over flat tuples; this is
the hot loop for everything downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DomainError, ResourceError, ValidationError
from .fields import Field
from .rules import FusionRule

Sextuple = tuple[int, int, int, int, int, int]

_ADMISSIBLE_CACHE: dict[bytes, list[Sextuple]] = {}
_PENTAGON_CACHE: dict[bytes, list] = {}


def admissible_sextuples(rule: FusionRule) -> list[Sextuple]:
    """The exact support lattice of any fusion system on the rule."""
    if not rule.is_multiplicity_free:
        raise DomainError("only multiplicity-free rules carry fusion systems here")
    cached = _ADMISSIBLE_CACHE.get(rule.key)
    if cached is not None:
        return cached
    out: list[Sextuple] = []
    n = rule.n
    for x, y, z in product(range(n), repeat=3):
        for u in rule.support(x, y):
            uz = rule.support(u, z)
            for v in rule.support(y, z):
                xv = set(rule.support(x, v))
                for r in uz:
                    if r in xv:
                        out.append((x, y, z, u, r, v))
    _ADMISSIBLE_CACHE[rule.key] = out
    return out


class FusionSystem:
    def __init__(self, rule: FusionRule, field: Field, coeffs: dict):
        self.rule = rule
        self.field = field
        adm = admissible_sextuples(rule)
        support = set(adm)
        cleaned: dict[Sextuple, int] = {}
        for k, val in coeffs.items():
            k = tuple(int(i) for i in k)
            if k not in support:
                raise ValidationError(f"coefficient at inadmissible sextuple {k}")
            val = int(val) % field.p
            if val == 0:
                raise ValidationError(f"zero coefficient at {k}")
            cleaned[k] = val
        missing = support - set(cleaned)
        if missing:
            raise ValidationError(f"missing coefficients, e.g. {sorted(missing)[0]}")
        self.coeffs = {k: cleaned[k] for k in adm}

    def coeff(self, x, y, z, u, r, v) -> int:
        return self.coeffs.get((x, y, z, u, r, v), 0)

    def __eq__(self, other):
        return (
            isinstance(other, FusionSystem)
            and self.rule == other.rule
            and self.field.p == other.field.p
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"FusionSystem(|L|={self.rule.n}, p={self.field.p}, {len(self.coeffs)} coeffs)"


def recoupling_matrix(f: FusionSystem, x: int, y: int, z: int, r: int):
    """(matrix, v_index, u_index) with rows labeled by v and columns by u."""
    rule = f.rule
    us = [u for u in rule.support(x, y) if r in rule.support(u, z)]
    vs = [v for v in rule.support(y, z) if r in rule.support(x, v)]
    mat = np.zeros((len(vs), len(us)), dtype=np.int64)
    for i, v in enumerate(vs):
        for j, u in enumerate(us):
            mat[i, j] = f.coeff(x, y, z, u, r, v)
    return mat, vs, us


def matrix_inverse_modp(mat: np.ndarray, p: int) -> np.ndarray | None:
    """Inverse of a square matrix over GF(p), or None if singular."""
    n = mat.shape[0]
    a = mat.astype(np.int64) % p
    inv = np.eye(n, dtype=np.int64)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r, col] % p), None)
        if piv is None:
            return None
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            inv[[col, piv]] = inv[[piv, col]]
        w = pow(int(a[col, col]), -1, p)
        a[col] = a[col] * w % p
        inv[col] = inv[col] * w % p
        for r in range(n):
            if r != col and a[r, col] % p:
                q = int(a[r, col])
                a[r] = (a[r] - q * a[col]) % p
                inv[r] = (inv[r] - q * inv[col]) % p
    return inv


def pentagon_instances(rule: FusionRule) -> list:
    """All index tuples (w,x,y,z,p,u,r,v,q) on which the pentagon could bite.

    r ranges over the union of uz, wv, pq so one-sided-zero violations are
    caught as well; tuples outside this set hold vacuously.
    """
    cached = _PENTAGON_CACHE.get(rule.key)
    if cached is not None:
        return cached
    out = []
    n = rule.n
    for w, x, y, z in product(range(n), repeat=4):
        xy = rule.support(x, y)
        for pp in rule.support(w, x):
            for q in rule.support(y, z):
                for u in rule.support(pp, y):
                    for v in rule.support(x, q):
                        rs = set(rule.support(u, z)) | set(rule.support(w, v)) | set(rule.support(pp, q))
                        for r in sorted(rs):
                            out.append((w, x, y, z, pp, u, r, v, q, xy))
    _PENTAGON_CACHE[rule.key] = out
    return out


def pentagon_instance_value(f: FusionSystem, inst) -> tuple[int, int]:
    """(lhs, rhs) of one pentagon instance, mod p."""
    w, x, y, z, pp, u, r, v, q, xy = inst
    p = f.field.p
    lhs = f.coeff(w, x, q, pp, r, v) * f.coeff(pp, y, z, u, r, q) % p
    rhs = 0
    for s in xy:
        t = f.coeff(x, y, z, s, v, q)
        if not t:
            continue
        t = t * f.coeff(w, s, z, u, r, v) % p
        if not t:
            continue
        rhs = (rhs + t * f.coeff(w, x, y, pp, u, s)) % p
    return lhs, rhs


@dataclass
class SystemReport:
    invertibility_ok: bool
    non_invertible: list[tuple[int, int, int, int]]
    pentagon_ok: bool
    pentagon_failures: list
    pentagon_checked: int
    triangle_ok: bool
    triangle_failures: list
    rigidity_ok: bool
    rigidity_failures: list[int]
    one_top_ok: bool
    one_top_failures: list

    @property
    def passed(self) -> bool:
        return self.invertibility_ok and self.pentagon_ok and self.triangle_ok and self.rigidity_ok

    def summary(self) -> str:
        bits = [
            f"invertible={self.invertibility_ok}",
            f"pentagon={self.pentagon_ok} ({self.pentagon_checked} instances)",
            f"triangle={self.triangle_ok}",
            f"rigidity={self.rigidity_ok}",
            f"unit_matrices={self.one_top_ok}",
        ]
        if self.pentagon_failures:
            bits.append(f"pentagon_fail_at={self.pentagon_failures[:2]}")
        return ", ".join(bits)


def verify_fusion_system(f: FusionSystem, witness_cap: int = 16) -> SystemReport:
    rule, p = f.rule, f.field.p
    n = rule.n
    e = rule.unit

    non_inv = []
    for x, y, z in product(range(n), repeat=3):
        seen = set()
        for u in rule.support(x, y):
            for r in rule.support(u, z):
                if r in seen:
                    continue
                seen.add(r)
                mat, vs, us = recoupling_matrix(f, x, y, z, r)
                if mat.size == 0:
                    continue
                if mat.shape[0] != mat.shape[1] or matrix_inverse_modp(mat, p) is None:
                    non_inv.append((x, y, z, r))

    pent_fail = []
    insts = pentagon_instances(rule)
    for inst in insts:
        lhs, rhs = pentagon_instance_value(f, inst)
        if lhs != rhs:
            pent_fail.append(inst[:9])
            if len(pent_fail) >= witness_cap:
                break

    tri_fail = []
    for x, y in product(range(n), repeat=2):
        for r in rule.support(x, y):
            if f.coeff(x, e, y, x, r, y) != 1:
                tri_fail.append((x, y, r))

    rig_fail = []
    for r in range(n):
        rb = int(rule.dual[r])
        mat, vs, us = recoupling_matrix(f, rb, r, rb, rb)
        inv = matrix_inverse_modp(mat, p)
        ok = False
        if inv is not None and e in vs and e in us:
            # inverse is indexed (u, v); take the unit-unit entry
            entry = int(inv[us.index(e), vs.index(e)])
            ok = entry != 0 and f.coeff(r, rb, r, e, r, e) == entry
        if not ok:
            rig_fail.append(r)

    ot_fail = []
    for x, y in product(range(n), repeat=2):
        for r in rule.support(x, y):
            if f.coeff(e, x, y, x, r, r) != 1 or f.coeff(x, y, e, r, r, y) != 1:
                ot_fail.append((x, y, r))

    return SystemReport(
        invertibility_ok=not non_inv,
        non_invertible=non_inv[:witness_cap],
        pentagon_ok=not pent_fail,
        pentagon_failures=pent_fail,
        pentagon_checked=len(insts),
        triangle_ok=not tri_fail,
        triangle_failures=tri_fail[:witness_cap],
        rigidity_ok=not rig_fail,
        rigidity_failures=rig_fail[:witness_cap],
        one_top_ok=not ot_fail,
        one_top_failures=ot_fail[:witness_cap],
    )


# ---- gauge transformations ----------------------------------------------------


class GaugeXi:
    """Invertible rescaling xi with support {(x,y,r) : r in xy}, normalized at the unit."""

    def __init__(self, rule: FusionRule, field: Field, values: dict):
        self.rule = rule
        self.field = field
        support = {(x, y, r) for x, y in product(range(rule.n), repeat=2) for r in rule.support(x, y)}
        cleaned = {}
        for k, val in values.items():
            k = tuple(int(i) for i in k)
            if k not in support:
                raise ValidationError(f"gauge value at unsupported triple {k}")
            val = int(val) % field.p
            if val == 0:
                raise ValidationError(f"gauge value must be invertible at {k}")
            cleaned[k] = val
        if support - set(cleaned):
            raise ValidationError("gauge must be total on the support")
        e = rule.unit
        for r in range(rule.n):
            if cleaned[(e, r, r)] != 1 or cleaned[(r, e, r)] != 1:
                raise ValidationError("gauge must be normalized at the unit")
        self.values = {k: cleaned[k] for k in sorted(cleaned)}

    def __getitem__(self, key):
        return self.values[tuple(int(i) for i in key)]

    def inverse(self) -> "GaugeXi":
        inv = {k: self.field.inv(v) for k, v in self.values.items()}
        return GaugeXi(self.rule, self.field, inv)

    def __mul__(self, other: "GaugeXi") -> "GaugeXi":
        vals = {k: self.field.mul(v, other.values[k]) for k, v in self.values.items()}
        return GaugeXi(self.rule, self.field, vals)


def identity_gauge(rule: FusionRule, field: Field) -> GaugeXi:
    vals = {(x, y, r): 1 for x, y in product(range(rule.n), repeat=2) for r in rule.support(x, y)}
    return GaugeXi(rule, field, vals)


def random_gauge(rule: FusionRule, field: Field, rng) -> GaugeXi:
    e = rule.unit
    vals = {}
    for x, y in product(range(rule.n), repeat=2):
        for r in rule.support(x, y):
            vals[(x, y, r)] = 1 if e in (x, y) else rng.randrange(1, field.p)
    return GaugeXi(rule, field, vals)


def apply_gauge(f: FusionSystem, xi: GaugeXi) -> FusionSystem:
    """The system related to f by xi through the rectangle axiom."""
    if xi.rule != f.rule or xi.field.p != f.field.p:
        raise DomainError("gauge and system live on different data")
    F = f.field
    out = {}
    for (x, y, z, u, r, v), val in f.coeffs.items():
        num = F.mul(val, F.mul(xi[(y, z, v)], xi[(x, v, r)]))
        out[(x, y, z, u, r, v)] = F.div(num, F.mul(xi[(x, y, u)], xi[(u, z, r)]))
    return FusionSystem(f.rule, F, out)


# ---- brute-force enumeration ----------------------------------------------------

DEFAULT_BUDGET_BITS = 160


def enumerate_fusion_systems_bruteforce(
    rule: FusionRule,
    field: Field,
    budget_bits: int = DEFAULT_BUDGET_BITS,
    normal_slice: bool = True,
) -> list[FusionSystem]:
    """All fusion systems on a tiny rule, by backtracking with pentagon propagation.

    On feudal rules the search is restricted to the normal gauge slice
    (coefficients of lord-against-unit shape pinned to 1), which is what makes
    the search finite in practice; every gauge class contains such a point.
    """
    adm = admissible_sextuples(rule)
    bits = len(adm) * ((field.p - 1).bit_length() - 1)
    if bits > budget_bits:
        raise ResourceError(f"search space of {bits} bits exceeds budget {budget_bits}")

    e = rule.unit
    pinned: dict[Sextuple, int] = {}
    for x, y, z, u, r, v in adm:
        if y == e or x == e or z == e:
            pinned[(x, y, z, u, r, v)] = 1
    if normal_slice:
        from .feudal import detect_feudal

        fr = detect_feudal(rule)
        if fr is not None:
            for a in fr.serf_ids:
                ab = fr.serf_inv(a)
                for m in fr.lord_ids:
                    am = fr.act_left(a, m)
                    ma = fr.act_right(m, a)
                    mbar = int(rule.dual[m])
                    # beta1(a,1)(m) = f^{a,m,mbar abar}_{am,1,abar} = 1
                    z1 = fr.act_right(mbar, ab)
                    pinned[(a, m, z1, am, e, ab)] = 1
                    # beta2(a,1)(m) = f^{m,a,abar mbar}_{ma,1,mbar} = 1
                    z2 = fr.act_left(ab, mbar)
                    pinned[(m, a, z2, ma, e, mbar)] = 1

    variables = [k for k in adm if k not in pinned]
    var_index = {k: i for i, k in enumerate(variables)}
    insts = pentagon_instances(rule)

    # incidence: variable -> instances that mention it
    incidence: list[list[int]] = [[] for _ in variables]
    inst_keys = []
    for idx, inst in enumerate(insts):
        w, x, y, z, pp, u, r, v, q, xy = inst
        keys = [(w, x, q, pp, r, v), (pp, y, z, u, r, q)]
        for s in xy:
            keys += [(x, y, z, s, v, q), (w, s, z, u, r, v), (w, x, y, pp, u, s)]
        inst_keys.append(keys)
        seen = set()
        for k in keys:
            i = var_index.get(k)
            if i is not None and i not in seen:
                incidence[i].append(idx)
                seen.add(i)

    adm_set = set(adm)
    assign: dict[Sextuple, int] = dict(pinned)
    results: list[FusionSystem] = []
    p = field.p

    def coeff_of(k):
        if k not in adm_set:
            return 0
        return assign.get(k)  # None = unassigned

    def eval_instance(idx):
        """(status, payload): 'ok'/'fail'/'solve'(key,val)/'open'."""
        w, x, y, z, pp, u, r, v, q, xy = insts[idx]
        unknown = None
        count = 0

        def track(k):
            nonlocal unknown, count
            unknown = k
            count += 1

        lk1, lk2 = (w, x, q, pp, r, v), (pp, y, z, u, r, q)
        c1, c2 = coeff_of(lk1), coeff_of(lk2)
        lhs_known = True
        if c1 is None:
            track(lk1)
            lhs_known = False
        if c2 is None:
            track(lk2)
            lhs_known = False
        rhs_terms = []
        for s in xy:
            ks = [(x, y, z, s, v, q), (w, s, z, u, r, v), (w, x, y, pp, u, s)]
            cs = [coeff_of(k) for k in ks]
            if 0 in cs:
                continue
            for k, c in zip(ks, cs):
                if c is None:
                    track(k)
            rhs_terms.append((ks, cs))
        if count == 0:
            lhs = (c1 or 0) * (c2 or 0) % p
            rhs = sum(cs[0] * cs[1] * cs[2] for _, cs in rhs_terms) % p
            return ("ok", None) if lhs == rhs else ("fail", None)
        if count > 1:
            return ("open", None)
        # exactly one unknown occurrence: solve linearly
        k0 = unknown
        if k0 in (lk1, lk2) and lhs_known is False:
            other = c2 if k0 == lk1 else c1
            if other is None:
                return ("open", None)
            rhs = sum(cs[0] * cs[1] * cs[2] for _, cs in rhs_terms) % p
            if other == 0:
                # the unknown drops out; the instance reduces to 0 = rhs
                return ("ok", None) if rhs == 0 else ("fail", None)
            val = rhs * pow(other, -1, p) % p
            return ("solve", (k0, val))
        lhs = c1 * c2 % p
        known_sum = 0
        coef = None
        for ks, cs in rhs_terms:
            if None not in cs:
                known_sum = (known_sum + cs[0] * cs[1] * cs[2]) % p
            else:
                rest = 1
                for k, c in zip(ks, cs):
                    if c is not None:
                        rest = rest * c % p
                coef = rest
        val = (lhs - known_sum) * pow(coef, -1, p) % p
        return ("solve", (k0, val))

    order = list(range(len(variables)))

    def dfs(queue: list[int]):
        trail = []

        def undo():
            for k in trail:
                del assign[k]

        # propagate
        pending = list(queue)
        seen_q = set(pending)
        while pending:
            idx = pending.pop()
            seen_q.discard(idx)
            status, payload = eval_instance(idx)
            if status == "fail":
                undo()
                return
            if status == "solve":
                k0, val = payload
                if val == 0:
                    undo()
                    return
                assign[k0] = val
                trail.append(k0)
                for nxt in incidence[var_index[k0]]:
                    if nxt not in seen_q:
                        pending.append(nxt)
                        seen_q.add(nxt)
        free = next((variables[i] for i in order if variables[i] not in assign), None)
        if free is None:
            _finish()
            undo()
            return
        for val in range(1, p):
            assign[free] = val
            dfs(incidence[var_index[free]])
            del assign[free]
        undo()

    def _finish():
        cand = FusionSystem(rule, field, dict(assign))
        if verify_fusion_system(cand).passed:
            results.append(cand)

    dfs(list(range(len(insts))))
    results.sort(key=lambda f: tuple(sorted(f.coeffs.items())))
    return results
