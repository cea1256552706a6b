"""Uberderivations: the algebraic form of pentagon data on feudal rules.

A triple (chi, ups, tau) valued in the ambient algebra B = F^M classifies
fusion systems on a feudal rule up to gauge.  The dictionary runs through
psi() (read a triple off a system) and reconstruct() (build the unique normal
system with that triple back).  Gauge classing happens in discrete-log
coordinates: every multiplicative axiom is an affine-linear equation over
Z_(p-1), gauge shifts span a sublattice, and classes are coset
representatives of the quotient, post-filtered by the one non-monomial
condition (the character-sum nondegeneracy).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .ambient import Ambi
from .errors import DomainError, ResourceError, UnsupportedFieldError, ValidationError
from .fields import Field, nth_roots_of
from .feudal import FeudalRule, detect_feudal
from .rules import automorphisms as rule_automorphisms
from .systems import FusionSystem, GaugeXi, admissible_sextuples
from .zmodlin import nullspace_mod, quotient_structure, solve_mod


# ---- the triple ------------------------------------------------------------------


@dataclass
class Uberderivation:
    ambi: Ambi
    chi: dict
    ups: dict
    tau: np.ndarray

    def __post_init__(self):
        self.tau = np.asarray(self.tau, dtype=np.int64) % self.ambi.field.p
        self.chi = {tuple(k): np.asarray(v, dtype=np.int64) % self.ambi.field.p for k, v in self.chi.items()}
        self.ups = {tuple(k): np.asarray(v, dtype=np.int64) % self.ambi.field.p for k, v in self.ups.items()}

    def report(self) -> dict:
        A = self.ambi
        f = A.feudal
        e = A.unit_serf
        serfs = A.serf_ids
        issues = {}

        def check(name, ok):
            issues.setdefault(name, [])
            if ok is not True:
                issues[name].append(ok)

        for (a, b), v in list(self.chi.items()) + list(self.ups.items()):
            if not A.is_invertible(v):
                check("invertible", (a, b))
        if not A.is_invertible(self.tau):
            check("invertible", "tau")

        for b in serfs:
            for a in serfs:
                if (a == e or b == e) and not A.eq(self.ups[(a, b)], A.one()):
                    check("ups_normalized", (a, b))

        for a, b in product(serfs, repeat=2):
            ai, bi = f.serf_inv(a), f.serf_inv(b)
            lhs = A.bar(self.chi[(b, a)])
            rhs = A.mul(
                A.act(ai, self.chi[(a, b)], bi),
                A.act(ai, self.tau, bi),
                self.tau,
                A.inv(A.act(ai, self.tau)),
                A.inv(A.ract(self.tau, bi)),
            )
            if not A.eq(lhs, rhs):
                check("quasisymmetric", (a, b))

        for a, b, c in product(serfs, repeat=3):
            lhs = A.mul(
                self.ups[(a, b)],
                A.inv(A.ract(self.ups[(a, b)], c)),
                self.chi[(f.serf_mul(a, b), c)],
            )
            rhs = A.mul(self.chi[(a, c)], A.act(a, self.chi[(b, c)]))
            if not A.eq(lhs, rhs):
                check("biderivation", (a, b, c))

        acts = A.trivial_actors
        for a, b in product(acts, repeat=2):
            if not A.eq(self.chi[(a, b)], self.chi[(b, a)]):
                check("symmetric_on_A", (a, b))
            for c in acts:
                if not A.eq(
                    self.chi[(f.serf_mul(a, b), c)], A.mul(self.chi[(a, c)], self.chi[(b, c)])
                ):
                    check("bicharacter_on_A", (a, b, c))
        for a in acts:
            if a == e:
                continue
            total = A.zero()
            for b in acts:
                total = (total + self.chi[(a, b)]) % A.field.p
            if total.any():
                check("nondegenerate_on_A", a)

        normsq = A.mul(A.const(len(acts)), self.tau, A.bar(self.tau))
        if not A.eq(normsq, A.one()):
            check("tau_norm", "|A| tau taubar != 1")

        return {k: v for k, v in issues.items() if v}

    def is_valid(self) -> bool:
        return not self.report()

    def validate(self) -> "Uberderivation":
        rep = self.report()
        if rep:
            raise DomainError(f"not an uberderivation: {rep}")
        return self

    def __eq__(self, other):
        if not isinstance(other, Uberderivation):
            return NotImplemented
        A = self.ambi
        return (
            A.feudal.rule == other.ambi.feudal.rule
            and A.field.p == other.ambi.field.p
            and all(A.eq(self.chi[k], other.chi[k]) for k in self.chi)
            and all(A.eq(self.ups[k], other.ups[k]) for k in self.ups)
            and A.eq(self.tau, other.tau)
        )

    def __repr__(self):
        return f"Uberderivation(|S|={len(self.ambi.serf_ids)}, |M|={self.ambi.npoints}, p={self.ambi.field.p})"


@dataclass
class GaugeTriple:
    ambi: Ambi
    theta: dict  # (a,b) -> element of fix(S)
    phi: dict  # a -> B^x, normalized at the unit serf
    sigma: np.ndarray

    def __post_init__(self):
        A = self.ambi
        self.sigma = np.asarray(self.sigma, dtype=np.int64) % A.field.p
        self.theta = {tuple(k): np.asarray(v) % A.field.p for k, v in self.theta.items()}
        self.phi = {int(k): np.asarray(v) % A.field.p for k, v in self.phi.items()}
        if not A.eq(self.phi[A.unit_serf], A.one()):
            raise ValidationError("phi must be normalized")
        for k, v in self.theta.items():
            if not A.in_fix(v):
                raise ValidationError(f"theta{k} is not fixed by the actions")


def identity_gauge_triple(ambi: Ambi) -> GaugeTriple:
    theta = {(a, b): ambi.one() for a in ambi.serf_ids for b in ambi.serf_ids}
    phi = {a: ambi.one() for a in ambi.serf_ids}
    return GaugeTriple(ambi, theta, phi, ambi.one())


def gauge_shift(ambi: Ambi, g: GaugeTriple):
    """Multiplicative shifts (chi, ups, tau pointwise factors) of a gauge."""
    A = ambi
    f = A.feudal
    chi_s, ups_s = {}, {}
    for a, b in product(A.serf_ids, repeat=2):
        num = A.mul(
            g.phi[a],
            A.act(a, A.bar(g.phi[b]), b),
            A.act(a, g.sigma, b),
            g.sigma,
        )
        den = A.mul(
            A.ract(g.phi[a], b),
            A.ract(A.bar(g.phi[b]), b),
            A.act(a, g.sigma),
            A.ract(g.sigma, b),
        )
        chi_s[(a, b)] = A.div(num, den)
        dphi = A.div(A.mul(g.phi[a], A.act(a, g.phi[b])), g.phi[f.serf_mul(a, b)])
        ups_s[(a, b)] = A.div(dphi, g.theta[(a, b)])
    tau_s = A.div(A.bar(g.sigma), g.sigma)
    return chi_s, ups_s, tau_s


def apply_gauge_uber(u: Uberderivation, g: GaugeTriple) -> Uberderivation:
    A = u.ambi
    chi_s, ups_s, tau_s = gauge_shift(A, g)
    chi = {k: A.mul(v, chi_s[k]) for k, v in u.chi.items()}
    ups = {k: A.mul(v, ups_s[k]) for k, v in u.ups.items()}
    return Uberderivation(A, chi, ups, A.mul(u.tau, tau_s))


# ---- decomposition of a fusion system --------------------------------------------


@dataclass
class Decomposition:
    """A fusion system on a feudal rule, split into its eight index shapes."""

    feudal: FeudalRule
    field: Field
    alpha: dict  # (a,b,c) -> scalar
    alpha1: dict  # (a,b) -> B
    alpha2: dict
    alpha3: dict
    beta1: dict
    beta2: dict
    beta3: dict
    gamma: dict  # (a,b) -> B


def _lordness(fr: FeudalRule, x: int) -> bool:
    return x in fr.lords


def decompose(f: FusionSystem, fr: FeudalRule | None = None) -> Decomposition:
    """Read the eight coefficient functions off a fusion system."""
    if fr is None:
        fr = detect_feudal(f.rule)
        if fr is None:
            raise DomainError("rule carries no feudal structure")
    if fr.rule != f.rule:
        raise DomainError("feudal structure belongs to a different rule")
    serfs, lords = fr.serf_ids, fr.lord_ids
    pos = {m: i for i, m in enumerate(lords)}
    inv, mul = fr.serf_inv, fr.serf_mul
    L, R = fr.act_left, fr.act_right
    dual = lambda m: int(fr.rule.dual[m])
    nm = len(lords)

    def vec(fn):
        return np.array([fn(m) for m in lords], dtype=np.int64)

    alpha, alpha1, alpha2, alpha3 = {}, {}, {}, {}
    beta1, beta2, beta3, gamma = {}, {}, {}, {}
    for a, b in product(serfs, repeat=2):
        ai, bi = inv(a), inv(b)
        for c in serfs:
            alpha[(a, b, c)] = f.coeff(a, b, c, mul(a, b), mul(mul(a, b), c), mul(b, c))
        alpha1[(a, b)] = vec(lambda m: f.coeff(R(R(m, bi), ai), a, b, R(m, bi), m, mul(a, b)))
        alpha2[(a, b)] = vec(lambda m: f.coeff(a, R(L(ai, m), bi), b, R(m, bi), m, L(ai, m)))
        alpha3[(a, b)] = vec(lambda m: f.coeff(a, b, L(mul(bi, ai), m), mul(a, b), m, L(ai, m)))
        beta1[(a, b)] = vec(lambda m: f.coeff(a, m, R(R(dual(m), ai), b), L(a, m), b, mul(ai, b)))
        beta2[(a, b)] = vec(lambda m: f.coeff(m, a, R(L(ai, dual(m)), b), R(m, a), b, R(dual(m), b)))
        beta3[(a, b)] = vec(lambda m: f.coeff(L(mul(b, ai), dual(m)), m, a, mul(b, ai), b, R(m, a)))
        gamma[(a, b)] = vec(lambda m: f.coeff(R(m, ai), R(L(a, dual(m)), b), L(bi, m), b, m, a))
    return Decomposition(fr, f.field, alpha, alpha1, alpha2, alpha3, beta1, beta2, beta3, gamma)


def assemble(dec: Decomposition) -> FusionSystem:
    """Rebuild the sparse coefficient table from the eight functions."""
    fr, F = dec.feudal, dec.field
    rule = fr.rule
    pos = {m: i for i, m in enumerate(fr.lord_ids)}
    coeffs = {}
    for key in admissible_sextuples(rule):
        x, y, z, u, r, v = key
        lx, ly, lz = _lordness(fr, x), _lordness(fr, y), _lordness(fr, z)
        if not (lx or ly or lz):
            val = dec.alpha[(x, y, z)]
        elif lx and not ly and not lz:
            val = dec.alpha1[(y, z)][pos[r]]
        elif ly and not lx and not lz:
            val = dec.alpha2[(x, z)][pos[r]]
        elif lz and not lx and not ly:
            val = dec.alpha3[(x, y)][pos[r]]
        elif not lx and ly and lz:
            val = dec.beta1[(x, r)][pos[y]]
        elif lx and not ly and lz:
            val = dec.beta2[(y, r)][pos[x]]
        elif lx and ly and not lz:
            val = dec.beta3[(z, r)][pos[y]]
        else:
            val = dec.gamma[(v, u)][pos[r]]
        coeffs[key] = int(val) % F.p
    return FusionSystem(rule, F, coeffs)


def psi(f: FusionSystem, fr: FeudalRule | None = None, ambi: Ambi | None = None) -> Uberderivation:
    """The triple (chi, ups, tau) = (alpha2, alpha3, gamma(1,1)) of a system.

    On a normal system this is the literal read-off and is always a valid
    uberderivation.  On a non-normal system the literal triple does not
    classify (it can fail the tau-tied conditions, or land in a different
    gauge class even when it happens to satisfy them), so the triple is
    taken from the normal representative of f instead; either way the
    result represents f's gauge class.
    """
    dec = decompose(f, fr)
    if ambi is None:
        ambi = Ambi(dec.feudal, f.field)
    e = ambi.unit_serf
    p = f.field.p
    one = np.ones(ambi.npoints, dtype=np.int64)
    normal = all(
        (dec.beta1[(a, e)] % p == one).all() and (dec.beta2[(a, e)] % p == one).all()
        for a in dec.feudal.serf_ids
    )
    if normal:
        u = Uberderivation(ambi, dict(dec.alpha2), dict(dec.alpha3), dec.gamma[(e, e)])
        return u.validate()
    fn, _ = normalize(f, dec.feudal)
    return psi(fn, dec.feudal, ambi)


def xi_components(xi: GaugeXi, fr: FeudalRule):
    """(theta, phi, psi, omega) read off a fusion-system gauge."""
    serfs, lords = fr.serf_ids, fr.lord_ids
    inv = fr.serf_inv
    L, R = fr.act_left, fr.act_right
    dual = lambda m: int(fr.rule.dual[m])
    theta = {(a, b): xi[(a, b, fr.serf_mul(a, b))] for a in serfs for b in serfs}
    phi = {a: np.array([xi[(a, L(inv(a), m), m)] for m in lords], dtype=np.int64) for a in serfs}
    psi_ = {a: np.array([xi[(R(m, inv(a)), a, m)] for m in lords], dtype=np.int64) for a in serfs}
    omega = {a: np.array([xi[(m, R(dual(m), a), a)] for m in lords], dtype=np.int64) for a in serfs}
    return theta, phi, psi_, omega


def psi_gauge(xi: GaugeXi, fr: FeudalRule, ambi: Ambi | None = None) -> GaugeTriple:
    if ambi is None:
        ambi = Ambi(fr, xi.field)
    theta, phi, _, omega = xi_components(xi, fr)
    theta_b = {k: ambi.const(v) for k, v in theta.items()}
    return GaugeTriple(ambi, theta_b, phi, omega[ambi.unit_serf])


def gauge_xi_from_triple(g: GaugeTriple) -> GaugeXi:
    """Lift an uberderivation gauge to a fusion-system gauge via the morphism formulas."""
    A = g.ambi
    fr = A.feudal
    rule = fr.rule
    field = A.field
    inv = fr.serf_inv
    serfs, lords = fr.serf_ids, fr.lord_ids
    pos = {m: i for i, m in enumerate(lords)}
    psi_ = {a: A.mul(A.ract(A.bar(g.phi[a]), a), A.ract(g.sigma, a), A.inv(g.sigma)) for a in serfs}
    omega = {
        a: A.div(A.mul(A.act(a, g.phi[inv(a)]), A.act(a, g.sigma)), g.theta[(inv(a), a)])
        for a in serfs
    }
    vals = {}
    for x, y in product(range(rule.n), repeat=2):
        for r in rule.support(x, y):
            if x in fr.serfs and y in fr.serfs:
                vals[(x, y, r)] = int(g.theta[(x, y)][0])
            elif x in fr.serfs:
                vals[(x, y, r)] = int(g.phi[x][pos[r]])
            elif y in fr.serfs:
                vals[(x, y, r)] = int(psi_[y][pos[r]])
            else:
                vals[(x, y, r)] = int(omega[r][pos[x]])
    return GaugeXi(rule, field, vals)


# ---- normal systems and reconstruction --------------------------------------------


def is_normal(f: FusionSystem, fr: FeudalRule | None = None) -> bool:
    dec = decompose(f, fr)
    e = dec.feudal.rule.unit
    one = np.ones(len(dec.feudal.lord_ids), dtype=np.int64)
    return all(
        (dec.beta1[(a, e)] % f.field.p == one).all() and (dec.beta2[(a, e)] % f.field.p == one).all()
        for a in dec.feudal.serf_ids
    )


def normalize(f: FusionSystem, fr: FeudalRule | None = None) -> tuple[FusionSystem, GaugeXi]:
    """A normal system gauge equivalent to f, with the witnessing gauge."""
    from .systems import apply_gauge

    dec = decompose(f, fr)
    fr = dec.feudal
    A = Ambi(fr, f.field)
    e = A.unit_serf
    inv = fr.serf_inv
    omega = {a: A.inv(dec.beta1[(inv(a), e)]) for a in fr.serf_ids}
    psi_ = {a: A.ract(dec.beta2[(a, e)], a) for a in fr.serf_ids}
    lords = fr.lord_ids
    pos = {m: i for i, m in enumerate(lords)}
    rule = fr.rule
    vals = {}
    for x, y in product(range(rule.n), repeat=2):
        for r in rule.support(x, y):
            if x in fr.serfs and y in fr.serfs:
                vals[(x, y, r)] = 1
            elif x in fr.serfs:
                vals[(x, y, r)] = 1  # phi == 1
            elif y in fr.serfs:
                vals[(x, y, r)] = int(psi_[y][pos[r]])
            else:
                vals[(x, y, r)] = int(omega[r][pos[x]])
    xi = GaugeXi(rule, f.field, vals)
    out = apply_gauge(f, xi)
    if not is_normal(out, fr):
        raise ValidationError("normalization failed to produce a normal system")
    return out, xi


def reconstruct(u: Uberderivation) -> FusionSystem:
    """The unique normal fusion system whose triple is u."""
    u.validate()
    A = u.ambi
    fr = A.feudal
    F = A.field
    inv, mul = fr.serf_inv, fr.serf_mul
    serfs = fr.serf_ids
    chi, ups, tau = u.chi, u.ups, u.tau

    def dl_ups(a, b, c):
        return A.div(A.mul(ups[(a, mul(b, c))], A.act(a, ups[(b, c)])), A.mul(ups[(a, b)], ups[(mul(a, b), c)]))

    alpha = {}
    for a, b, c in product(serfs, repeat=3):
        v = A.inv(dl_ups(a, b, c))
        vals = set(v.tolist())
        if len(vals) != 1:
            raise DomainError("coboundary of ups is not scalar; input is not an uberderivation")
        alpha[(a, b, c)] = vals.pop()

    alpha1, alpha2, alpha3 = {}, {}, {}
    beta1, beta2, beta3, gamma = {}, {}, {}, {}
    for s, t in product(serfs, repeat=2):
        si, ti = inv(s), inv(t)
        alpha2[(s, t)] = chi[(s, t)].copy()
        alpha3[(s, t)] = ups[(s, t)].copy()
        alpha1[(s, t)] = A.inv(A.ract(A.bar(ups[(s, t)]), mul(s, t)))
        beta1[(s, t)] = A.div(
            A.const(alpha[(ti, s, mul(si, t))]), A.act(mul(si, t), ups[(ti, s)])
        )
        beta2[(s, t)] = A.mul(
            ups[(t, ti)], A.inv(A.ract(ups[(t, ti)], si)), A.ract(chi[(t, s)], si)
        )
        gamma[(s, t)] = A.div(
            A.act(t, A.div(A.mul(tau, A.bar(ups[(si, s)])), A.ract(ups[(ti, t)], s))),
            chi[(t, s)],
        )
        beta3[(s, t)] = A.div(
            A.mul(A.bar(ups[(s, ti)]), A.ract(tau, si)),
            A.mul(A.const(alpha[(s, ti, t)]), A.const(alpha[(mul(s, ti), mul(t, si), s)]), tau),
        )
    dec = Decomposition(fr, F, alpha, alpha1, alpha2, alpha3, beta1, beta2, beta3, gamma)
    return assemble(dec)


# ---- gauge equivalence by exponent-space solving ------------------------------------


def gauge_equivalent_uber(u1: Uberderivation, u2: Uberderivation) -> GaugeTriple | None:
    """A witnessing (theta, phi, sigma) from u1 to u2, or None.

    The chi and tau relations are affine-linear in the exponents of phi and
    sigma; theta is eliminated as dphi * ups1 / ups2 subject to membership in
    fix(S), which adds linear constancy constraints on each action orbit.
    """
    A = u1.ambi
    if A.feudal.rule != u2.ambi.feudal.rule or A.field.p != u2.ambi.field.p:
        raise DomainError("uberderivations live on different data")
    F = A.field
    n = F.p - 1
    fr = A.feudal
    e = A.unit_serf
    serfs, nm = A.serf_ids, A.npoints
    lords = A.lord_ids
    pos = {m: i for i, m in enumerate(lords)}
    inv = fr.serf_inv
    L, R = fr.act_left, fr.act_right

    unknowns = [("phi", a, j) for a in serfs if a != e for j in range(nm)]
    unknowns += [("sig", j) for j in range(nm)]
    uidx = {k: i for i, k in enumerate(unknowns)}
    N = len(unknowns)

    rows, rhs = [], []

    def phi_at(row, a, j, c=1):
        if a != e:
            row[uidx[("phi", a, j)]] += c

    def sig_at(row, j, c=1):
        row[uidx[("sig", j)]] += c

    bar = lambda j: int(A.bar_perm[j])
    for a, b in product(serfs, repeat=2):
        ai, bi = inv(a), inv(b)
        for j, m in enumerate(lords):
            amb = pos[R(L(ai, m), bi)]  # reading position of a mu b at m
            am = pos[L(ai, m)]
            mb = pos[R(m, bi)]
            row = np.zeros(N, dtype=np.int64)
            phi_at(row, a, j, +1)
            phi_at(row, b, bar(amb), +1)
            sig_at(row, amb, +1)
            sig_at(row, j, +1)
            phi_at(row, a, mb, -1)
            phi_at(row, b, bar(mb), -1)
            sig_at(row, am, -1)
            sig_at(row, mb, -1)
            want = F.log(F.div(int(u2.chi[(a, b)][j]), int(u1.chi[(a, b)][j])))
            rows.append(row)
            rhs.append(want)
    for j in range(nm):
        row = np.zeros(N, dtype=np.int64)
        sig_at(row, bar(j), +1)
        sig_at(row, j, -1)
        rows.append(row)
        rhs.append(F.log(F.div(int(u2.tau[j]), int(u1.tau[j]))))
    # theta = dphi * ups1/ups2 must be constant on each action orbit
    for a, b in product(serfs, repeat=2):
        ab = fr.serf_mul(a, b)
        known = [
            F.log(F.div(int(u1.ups[(a, b)][j]), int(u2.ups[(a, b)][j]))) for j in range(nm)
        ]
        for orb in A.orbits:
            j0 = orb[0]
            for j in orb[1:]:
                row = np.zeros(N, dtype=np.int64)
                for jj, sign in ((j, +1), (j0, -1)):
                    phi_at(row, a, jj, sign)
                    phi_at(row, b, pos[L(inv(a), lords[jj])], sign)
                    phi_at(row, ab, jj, -sign)
                rows.append(row)
                rhs.append((known[j0] - known[j]) % n)
    sol = solve_mod(np.vstack(rows), np.array(rhs), n)
    if sol is None:
        return None
    phi = {e: A.one()}
    for a in serfs:
        if a == e:
            continue
        phi[a] = np.array([F.exp(int(sol[uidx[("phi", a, j)]])) for j in range(nm)], dtype=np.int64)
    sigma = np.array([F.exp(int(sol[uidx[("sig", j)]])) for j in range(nm)], dtype=np.int64)
    theta = {}
    for a, b in product(serfs, repeat=2):
        dphi = A.div(A.mul(phi[a], A.act(a, phi[b])), phi[fr.serf_mul(a, b)])
        theta[(a, b)] = A.mul(dphi, u1.ups[(a, b)], A.inv(u2.ups[(a, b)]))
    g = GaugeTriple(A, theta, phi, sigma)
    if apply_gauge_uber(u1, g) != u2:
        raise ValidationError("gauge witness does not transform u1 to u2")
    return g


def transport(u: Uberderivation, perm: np.ndarray) -> Uberderivation:
    """Relabel an uberderivation along a graded rule automorphism."""
    A = u.ambi
    fr = A.feudal
    inv_perm = np.argsort(perm)
    lords = A.lord_ids
    pos = {m: i for i, m in enumerate(lords)}
    lperm = [pos[int(inv_perm[m])] for m in lords]  # read chi at preimage lord
    chi = {}
    ups = {}
    for a, b in u.chi:
        pa, pb = int(inv_perm[a]), int(inv_perm[b])
        chi[(a, b)] = u.chi[(pa, pb)][lperm]
        ups[(a, b)] = u.ups[(pa, pb)][lperm]
    return Uberderivation(A, chi, ups, u.tau[lperm])


def canonicalize_tau(u: Uberderivation) -> Uberderivation:
    """A gauge-equivalent uberderivation with constant tau (two-lord rules)."""
    A = u.ambi
    F = A.field
    if A.npoints == 1:
        return u
    if A.npoints != 2:
        raise DomainError("constant-tau form is only defined for two lords")
    acts = len(A.trivial_actors)
    if not nth_roots_of(F, F.inv(acts % F.p), 2):
        raise UnsupportedFieldError("no square root of 1/|A| in the field")
    t1, t2 = int(u.tau[0]), int(u.tau[1])
    if t1 == t2:
        return u
    if int(A.bar_perm[0]) != 1:
        # self-dual lords: sigma_bar = sigma, so tau is pointwise gauge-rigid
        raise DomainError("self-dual lords leave a nonconstant tau unreachable")
    roots = nth_roots_of(F, F.div(t1, t2), 2)
    if not roots:
        raise UnsupportedFieldError("tau ratio has no square root")
    best = None
    for s in roots:
        sigma = np.array([s, 1], dtype=np.int64)
        g = GaugeTriple(A, {k: A.one() for k in u.ups}, {a: A.one() for a in A.serf_ids}, sigma)
        cand = apply_gauge_uber(u, g)
        if best is None or int(cand.tau[0]) < int(best.tau[0]):
            best = cand
    assert best is not None and int(best.tau[0]) == int(best.tau[1])
    return best


# ---- obstructions -------------------------------------------------------------------


@dataclass
class ObstructionReport:
    items: list[tuple[str, bool, str]]

    @property
    def clear(self) -> bool:
        return all(ok for _, ok, _ in self.items)

    def to_dict(self) -> dict:
        return {
            "clear": self.clear,
            "items": [{"condition": c, "ok": ok, "detail": d} for c, ok, d in self.items],
        }


def check_existence_obstructions(fr: FeudalRule, field: Field) -> ObstructionReport:
    """Necessary conditions for any fusion system to exist on the rule."""
    from .rules import group_from_members

    A = group_from_members(fr.rule, fr.adjoint_ids)
    items = []
    items.append(("adjoint_abelian", A.is_abelian, f"|A| = {len(A)}"))
    items.append(
        ("char_does_not_divide_A", len(A) % field.p != 0, f"char {field.p} vs |A| = {len(A)}")
    )
    lords = fr.lord_ids
    self_dual = any(int(fr.rule.dual[m]) == m for m in lords)
    if len(lords) % 2 == 1 or self_dual:
        has_root = bool(nth_roots_of(field, len(A) % field.p, 2)) if len(A) % field.p else False
        items.append(
            (
                "sqrt_of_A_order",
                has_root,
                f"sqrt({len(A)}) needed (|M| odd or a self-dual lord); "
                + ("present" if has_root else "absent"),
            )
        )
    return ObstructionReport(items)


# ---- enumeration ---------------------------------------------------------------------


def uber_unknown_keys(ambi: Ambi) -> list[tuple]:
    serfs, nm = ambi.serf_ids, ambi.npoints
    keys = [("chi", a, b, j) for a in serfs for b in serfs for j in range(nm)]
    keys += [("ups", a, b, j) for a in serfs for b in serfs for j in range(nm)]
    keys += [("tau", j) for j in range(nm)]
    return keys


def uber_constraint_system(ambi: Ambi):
    """(matrix, rhs, keys): the multiplicative axioms in exponent coordinates.

    Homogeneous rows: ups normalization, quasisymmetry, the biderivation law,
    and symmetry of chi on A x A.  The single affine family is the norm
    |A| tau taubar = 1, whose right-hand side is -log|A|.
    """
    A = ambi
    F = A.field
    fr = A.feudal
    n = F.p - 1
    e = A.unit_serf
    serfs, nm = A.serf_ids, A.npoints
    lords = A.lord_ids
    pos = {m: i for i, m in enumerate(lords)}
    inv, mul = fr.serf_inv, fr.serf_mul
    L, R = fr.act_left, fr.act_right
    keys = uber_unknown_keys(ambi)
    idx = {k: i for i, k in enumerate(keys)}
    N = len(keys)
    bar = lambda j: int(A.bar_perm[j])

    rows, rhs = [], []

    def new_row():
        return np.zeros(N, dtype=np.int64)

    for a, b in product(serfs, repeat=2):
        if a == e or b == e:
            for j in range(nm):
                row = new_row()
                row[idx[("ups", a, b, j)]] = 1
                rows.append(row)
                rhs.append(0)

    for a, b in product(serfs, repeat=2):
        for j, m in enumerate(lords):
            q = pos[R(L(a, m), b)]  # a m b
            qa = pos[L(a, m)]
            qb = pos[R(m, b)]
            row = new_row()
            row[idx[("chi", b, a, bar(j))]] += 1
            row[idx[("chi", a, b, q)]] -= 1
            row[idx[("tau", q)]] -= 1
            row[idx[("tau", j)]] -= 1
            row[idx[("tau", qa)]] += 1
            row[idx[("tau", qb)]] += 1
            rows.append(row)
            rhs.append(0)

    for a, b, c in product(serfs, repeat=3):
        ab = mul(a, b)
        for j, m in enumerate(lords):
            row = new_row()
            row[idx[("ups", a, b, j)]] += 1
            row[idx[("ups", a, b, pos[R(m, inv(c))])]] -= 1
            row[idx[("chi", ab, c, j)]] += 1
            row[idx[("chi", a, c, j)]] -= 1
            row[idx[("chi", b, c, pos[L(inv(a), m)])]] -= 1
            rows.append(row)
            rhs.append(0)

    acts = A.trivial_actors
    for a, b in product(acts, repeat=2):
        if a >= b:
            continue
        for j in range(nm):
            row = new_row()
            row[idx[("chi", a, b, j)]] += 1
            row[idx[("chi", b, a, j)]] -= 1
            rows.append(row)
            rhs.append(0)

    if len(acts) % F.p == 0:
        return None, None, keys  # |A| vanishes in F; no solutions at all
    neg_log = (-F.log(len(acts) % F.p)) % n
    for j in range(nm):
        row = new_row()
        row[idx[("tau", j)]] += 1
        row[idx[("tau", bar(j))]] += 1
        rows.append(row)
        rhs.append(neg_log)

    return np.vstack(rows), np.array(rhs, dtype=np.int64), keys


def vec_to_uber(ambi: Ambi, vec: np.ndarray) -> Uberderivation:
    F = ambi.field
    keys = uber_unknown_keys(ambi)
    chi, ups = {}, {}
    tau = np.ones(ambi.npoints, dtype=np.int64)
    for k, eexp in zip(keys, vec):
        val = F.exp(int(eexp))
        if k[0] == "chi":
            chi.setdefault((k[1], k[2]), np.ones(ambi.npoints, dtype=np.int64))[k[3]] = val
        elif k[0] == "ups":
            ups.setdefault((k[1], k[2]), np.ones(ambi.npoints, dtype=np.int64))[k[3]] = val
        else:
            tau[k[1]] = val
    return Uberderivation(ambi, chi, ups, tau)


def uber_to_vec(u: Uberderivation) -> np.ndarray:
    F = u.ambi.field
    keys = uber_unknown_keys(u.ambi)
    out = np.zeros(len(keys), dtype=np.int64)
    for i, k in enumerate(keys):
        if k[0] == "chi":
            out[i] = F.log(int(u.chi[(k[1], k[2])][k[3]]))
        elif k[0] == "ups":
            out[i] = F.log(int(u.ups[(k[1], k[2])][k[3]]))
        else:
            out[i] = F.log(int(u.tau[k[1]]))
    return out


def _gauge_generators(ambi: Ambi) -> list[GaugeTriple]:
    A = ambi
    e = A.unit_serf
    g = A.field.generator
    out = []
    ones_theta = {(a, b): A.one() for a in A.serf_ids for b in A.serf_ids}
    ones_phi = {a: A.one() for a in A.serf_ids}
    for a, b in product(A.serf_ids, repeat=2):
        if a == e or b == e:
            continue
        for orb in A.orbits:
            theta = {k: v.copy() for k, v in ones_theta.items()}
            v = A.one()
            v[list(orb)] = g
            theta[(a, b)] = v
            out.append(GaugeTriple(A, theta, ones_phi, A.one()))
    for a in A.serf_ids:
        if a == e:
            continue
        for j in range(A.npoints):
            phi = {k: v.copy() for k, v in ones_phi.items()}
            phi[a] = A.one()
            phi[a][j] = g
            out.append(GaugeTriple(A, ones_theta, phi, A.one()))
    for j in range(A.npoints):
        sig = A.one()
        sig[j] = g
        out.append(GaugeTriple(A, ones_theta, ones_phi, sig))
    return out


def _shift_vector(ambi: Ambi, g: GaugeTriple) -> np.ndarray:
    F = ambi.field
    chi_s, ups_s, tau_s = gauge_shift(ambi, g)
    keys = uber_unknown_keys(ambi)
    out = np.zeros(len(keys), dtype=np.int64)
    for i, k in enumerate(keys):
        if k[0] == "chi":
            out[i] = F.log(int(chi_s[(k[1], k[2])][k[3]]))
        elif k[0] == "ups":
            out[i] = F.log(int(ups_s[(k[1], k[2])][k[3]]))
        else:
            out[i] = F.log(int(tau_s[k[1]]))
    return out


@dataclass
class UberClassification:
    ambi: Ambi
    obstructions: ObstructionReport
    class_reps: list[Uberderivation]
    invariants: list[dict]
    orbits: list[list[int]]
    lattice: dict

    @property
    def gauge_classes(self) -> int:
        return len(self.class_reps)

    @property
    def equivalence_classes(self) -> int:
        return len(self.orbits)


def class_invariants(u: Uberderivation) -> dict:
    """Gauge-stable summary of a class representative (canonical tau if possible)."""
    A = u.ambi
    fr = A.feudal
    try:
        u = canonicalize_tau(u)
    except (DomainError, UnsupportedFieldError):
        pass
    labels = fr.rule.labels
    chi_diag = {labels[a]: [int(v) for v in u.chi[(a, a)]] for a in A.serf_ids}
    return {
        "tau": [int(v) for v in u.tau],
        "chi_diag": chi_diag,
        "chi_on_A": {
            f"{labels[a]},{labels[b]}": [int(v) for v in u.chi[(a, b)]]
            for a in A.trivial_actors
            for b in A.trivial_actors
        },
    }


def enumerate_uber(
    ambi: Ambi,
    *,
    class_limit: int = 100_000,
    with_orbits: bool = True,
) -> UberClassification:
    """All uberderivations on the ambient algebra, up to gauge equivalence.

    Solves the monomial axioms plus the tau norm as one affine system over
    Z_(p-1), quotients the homogeneous solution lattice by the gauge-shift
    sublattice, then filters coset representatives by nondegeneracy of chi
    on A x A (a gauge-invariant condition, so filtering reps is sound).
    """
    A = ambi
    F = A.field
    if len(A.serf_ids) > 8:
        raise ResourceError("enumeration is bounded at 8 serfs")
    if F.p > 257:
        raise ResourceError("enumeration is bounded at p <= 257")
    n = F.p - 1
    obst = check_existence_obstructions(A.feudal, F)
    mat, rhs, keys = uber_constraint_system(A)
    lattice_info = {"unknowns": len(keys)}
    if mat is None:
        return UberClassification(A, obst, [], [], [], lattice_info | {"consistent": False})
    x0 = solve_mod(mat, rhs, n)
    if x0 is None:
        return UberClassification(A, obst, [], [], [], lattice_info | {"consistent": False})
    hom = nullspace_mod(mat, n)
    shifts = []
    for g in _gauge_generators(A):
        v = _shift_vector(A, g)
        if (mat @ v % n).any():
            raise ValidationError("gauge shift violates the monomial axioms")
        if v.any():
            shifts.append(v)
    quot = quotient_structure(hom, shifts, len(keys), n)
    lattice_info.update(
        consistent=True,
        quotient_order=quot.order,
        invariant_factors=quot.invariant_factors,
        gauge_generators=len(shifts),
    )
    reps = []
    for h in quot.representatives(limit=class_limit):
        cand = vec_to_uber(A, (x0 + h) % n)
        rep = cand.report()
        nondeg_only = set(rep) <= {"nondegenerate_on_A"}
        if not nondeg_only:
            raise ValidationError(f"lattice representative violates monomial axioms: {sorted(rep)}")
        if not rep:
            reps.append(cand)
    lattice_info["filtered_out"] = quot.order - len(reps)

    orbits: list[list[int]] = []
    if with_orbits and reps:
        fr = A.feudal
        all_perms = rule_automorphisms(fr.rule, bound=max(10, fr.rule.n))
        perms = [p for p in all_perms if all(int(p[s]) in fr.serfs for s in fr.serf_ids)]
        # orbits are formed under the graded pool; both pool sizes are reported
        lattice_info["automorphisms_all"] = len(all_perms)
        lattice_info["automorphisms_graded"] = len(perms)
        parent = list(range(len(reps)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in product(range(len(reps)), repeat=2):
            if i >= j or find(i) == find(j):
                continue
            for p in perms:
                if gauge_equivalent_uber(transport(reps[i], p), reps[j]) is not None:
                    parent[find(j)] = find(i)
                    break
        groups: dict[int, list[int]] = {}
        for i in range(len(reps)):
            groups.setdefault(find(i), []).append(i)
        orbits = sorted(groups.values())
    elif reps:
        orbits = [[i] for i in range(len(reps))]

    invariants = [class_invariants(u) for u in reps]
    return UberClassification(A, obst, reps, invariants, orbits, lattice_info)
