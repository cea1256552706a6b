"""Tour of fusion-rule structure theory on the bundled six-element rule.

A fusion rule is a finite set with a multiset-valued product, a unit, and
duals.  This script walks through the structural queries: axioms, simple
currents, the adjoint series, and the universal grading.

Run:  python demos/01_fusion_rule_structure.py
"""

from fusionkit import (
    adjoint_subrule,
    automorphisms,
    fuse_multisets,
    left_cosets,
    moore_read,
    nilpotency_class,
    simple_currents,
    tambara_yamagami,
    universal_grading,
    verify_fusion_rule,
)
from fusionkit.groups import cyclic, identify_group

mr = moore_read()
rule = mr.rule
print("carrier:", rule.labels)

report = verify_fusion_rule(rule)
print("axioms pass:", report.passed)
print("multiplicity-free:", report.multiplicity_free)

# fusion is multiset-valued: two lords multiply to a pair of serfs
ip = rule.index("i'")
im = rule.index("-i'")
print("\ni' * i'     =", dict(zip(rule.labels, fuse_multisets(rule, [ip], [ip]))))
print("i' * -i'    =", dict(zip(rule.labels, fuse_multisets(rule, [ip], [im]))))

sc, index = simple_currents(rule)
print("\nsimple currents:", sorted(rule.labels[i] for i in sc))
print("simple current index:", index, "(groups are exactly index 1)")

ad = adjoint_subrule(rule)
print("adjoint subrule:", sorted(rule.labels[i] for i in ad))
print("nilpotency class:", nilpotency_class(rule))

grading = universal_grading(rule)
print("\nuniversal grading group:", identify_group(grading.group))
print("cosets:", [sorted(rule.labels[i] for i in c) for c in grading.cosets])

print("\nautomorphisms:", len(automorphisms(rule)))
for perm in automorphisms(rule):
    moved = {rule.labels[x]: rule.labels[int(perm[x])] for x in range(rule.n) if perm[x] != x}
    print("  ", moved or "identity")

# the same queries on a one-lord rule
ty = tambara_yamagami(cyclic(3))
print("\nthree-serf, one-lord rule:", ty.rule.labels)
print("adjoint subrule is the whole serf group:", sorted(adjoint_subrule(ty.rule)))
print("universal grading:", identify_group(universal_grading(ty.rule).group))
print("cosets of the unit alone:", left_cosets(ty.rule, [ty.rule.unit]).index)
