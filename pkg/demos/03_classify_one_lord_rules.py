"""Classifying pentagon data on one-lord rules over GF(17).

Fusion systems on a feudal rule correspond to uberderivation triples
(chi, ups, tau) on the serf group, up to gauge.  For a one-lord rule the
answer is classical: a nondegenerate symmetric bicharacter chi on the serf
group together with tau = +-sqrt(1/|A|).  Over GF(17) with two serfs that
means chi(g,g) = -1 and tau in {3, 14}: exactly two classes.

The brute-force system enumerator provides an independent oracle: it walks
the coefficient tables directly with pentagon propagation, and its gauge
classes match the lattice classification one for one.

Run:  python demos/03_classify_one_lord_rules.py
"""

from fusionkit import (
    Ambi,
    Field,
    cyclic,
    enumerate_fusion_systems_bruteforce,
    enumerate_uber,
    gauge_equivalent_uber,
    psi,
    reconstruct,
    tambara_yamagami,
    verify_fusion_system,
)
from fusionkit.uber import check_existence_obstructions

F = Field(17)
ty = tambara_yamagami(cyclic(2))
A = Ambi(ty, F)

cls = enumerate_uber(A)
print(f"gauge classes over GF(17): {cls.gauge_classes}")
for inv in cls.invariants:
    print("  chi(g,g) =", inv["chi_diag"]["g"][0], " tau =", inv["tau"][0])
print("lattice:", cls.lattice)

# reconstruct a pentagon table from each class and verify every instance
for u in cls.class_reps:
    f = reconstruct(u)
    rep = verify_fusion_system(f)
    print("reconstructed system verifies:", rep.passed, f"({rep.pentagon_checked} pentagon instances)")

# the oracle: enumerate whole coefficient tables by backtracking
systems = enumerate_fusion_systems_bruteforce(ty.rule, F)
print(f"\nbrute-force enumeration finds {len(systems)} systems in the normal slice")
buckets = []
for f in systems:
    u = psi(f, ty, A)
    if not any(gauge_equivalent_uber(b, u) for b in buckets):
        buckets.append(u)
print("grouped into", len(buckets), "gauge classes: matches the lattice count")

# the same rule over GF(7) supports nothing: sqrt(1/3) is missing
ty3 = tambara_yamagami(cyclic(3))
obst = check_existence_obstructions(ty3, Field(7))
print("\nthree-serf rule over GF(7):")
for name, ok, detail in obst.items:
    print(f"  {name}: {'ok' if ok else 'OBSTRUCTED'} ({detail})")
print("classes:", enumerate_uber(Ambi(ty3, Field(7)), with_orbits=False).gauge_classes)
