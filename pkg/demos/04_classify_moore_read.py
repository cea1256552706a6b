"""Classifying pentagon data on the six-element rule over GF(17).

The six-element rule (four serfs forming Z4, two mutually dual lords) admits
exactly one gauge class of fusion systems per fourth root of -1 in the
field.  Over GF(17) those roots are {2, 8, 9, 15}, so four classes.  The
invariant x is read off a constant-tau representative as chi(i,i).

Run:  python demos/04_classify_moore_read.py
"""

from fusionkit import (
    Ambi,
    Field,
    canonicalize_tau,
    enumerate_uber,
    gauge_equivalent_uber,
    moore_read,
    psi,
    reconstruct,
    verify_fusion_system,
)

F = Field(17)
mr = moore_read()
A = Ambi(mr, F)

print("fourth roots of -1 in GF(17):", [x for x in range(17) if pow(x, 4, 17) == 16])

cls = enumerate_uber(A)
print(f"\ngauge classes: {cls.gauge_classes}, orbits under automorphisms: {cls.equivalence_classes}")
print("lattice:", cls.lattice)

for k, u in enumerate(cls.class_reps):
    c = canonicalize_tau(u)
    x = int(c.chi[(mr.rule.index("i"), mr.rule.index("i"))][0])
    print(f"\nclass {k}: x = chi(i,i) = {x}, tau = {int(c.tau[0])} (constant)")
    p = c.chi[(mr.rule.index("-1"), mr.rule.index("i"))]
    r = c.chi[(mr.rule.index("i"), mr.rule.index("-i"))]
    print(f"  p = chi(-1,i) = {p.tolist()}  with p pbar = {int(p[0]) * int(p[1]) % 17} (= -1)")
    print(f"  r = chi(i,-i) = {r.tolist()}  with r rbar = {int(r[0]) * int(r[1]) % 17} (= -x^2)")
    f = reconstruct(u)
    rep = verify_fusion_system(f)
    assert psi(f, mr, A) == u
    print(f"  reconstructed table verifies: {rep.passed} ({rep.pentagon_checked} pentagon instances)")

# classes with equal x are gauge equivalent no matter how p and r were chosen
u0, u1 = cls.class_reps[0], cls.class_reps[1]
print("\ndistinct classes are inequivalent:", gauge_equivalent_uber(u0, u1) is None)
