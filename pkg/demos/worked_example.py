"""A one-center tower end to end: F2_n1-cusp.

Builds the boundary D', prints the kernel relation, the linear form det m for each center,
the weights giving a Z-homology plane, and the automorphism group at weight 1.
"""
from fractions import Fraction

from qhp import catalog
from qhp.graph import graph_automorphisms
from qhp.homology import detm_symbolic, linear_form, zhp_weights

b = catalog.build_row("F2_n1-cusp")
print(f"{b.row.id} {b.row.label}: D' has {len(b.graph)} components, rank {b.lattice.rank}, n = {b.n}")
rel = b.kernel.relation(0)
print("kernel relation:", " ".join(f"{c:+d}*{k}" for k, c in rel.items()))
print("  restricted to C1, C2, E_q:", [rel.get(k, 0) for k in ("C1", "C2", "E_q")])

for cb in b.row.combos:
    center = cb.centers[0]
    p, s = detm_symbolic(b.kernel, [(center.U, center.W)])
    a, c = (int(s * x) for x in linear_form(p))
    z = zhp_weights((a, c), 1, count=5)
    found = " ".join(f"{u}/{w}" for u, w in z.pairs) if z.found else z.reason
    print(f"center {center}: det m = {a}u{c:+d}w   ZHP weights: {found}")

combo = b.row.find_combo(["C1,C2"])
for wt in (Fraction(1), Fraction(5), Fraction(7, 2), Fraction(6)):
    v, D = b.check(combo, [wt])
    if v.is_qhp:
        print(f"(C1,C2;{wt}): h1 = {v.h1_order}, d(D) = {v.d_of_D}, |Aut graph| = {graph_automorphisms(D).order}")
    else:
        print(f"(C1,C2;{wt}): not a QHP ({'; '.join(v.reasons)})")
