"""H^3 of a small group over GF(p)^x, computed two independent ways.

Directly: cocycles and coboundaries become integer-linear conditions in
discrete-log coordinates, and H^3 is a kernel-mod-image computation over
Z_(p-1).  Indirectly: a group with an index-2 subgroup S is a graded group,
so its fusion systems are classified by uberderivation triples on S, and
gauge classes of those count H^3 as well.  The two routes must agree.

Note the coefficient module matters: over GF(17)^x = Z_16 the Klein group
has |H^3| = 16, not the characteristic-zero value 8, because the universal
coefficient Ext term contributes.

Run:  python demos/05_h3_two_ways.py
"""

from fusionkit import Field, cyclic, h3, h3_via_uber, klein_four
from fusionkit.cohomology import cocycle_to_fusion_system, fusion_system_to_cocycle
from fusionkit import verify_fusion_system

F = Field(17)

for g in (cyclic(2), cyclic(4), klein_four()):
    direct = h3(g, F)
    serfs = g.index2_subgroups()[0]
    via = h3_via_uber(g, serfs, F)
    print(
        f"{g.name:6s}  |H^3| = {direct.order:3d}  invariant factors {direct.invariant_factors}"
        f"   via uberderivations: {via.count}   agree: {via.agree}"
    )

rep = h3(cyclic(4), F)
print("\ncyclic of order four: representatives correspond to fourth roots of unity")
print("roots:", sorted(rep.roots_table.values()))

# each representative cocycle is literally a fusion system on the group
for c in rep.representatives[:2]:
    f = cocycle_to_fusion_system(cyclic(4), c, F)
    ok = verify_fusion_system(f).passed
    back = fusion_system_to_cocycle(f)
    print("cocycle -> system -> cocycle round trip:", ok and back.eq(c))
