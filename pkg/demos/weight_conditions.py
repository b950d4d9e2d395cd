"""Compare each tabulated weight condition with the vanishing locus of det m.

A condition matches when det m is the condition times a polynomial with coefficients of
one sign, so both vanish at the same positive weights.
"""
from qhp import catalog
from qhp.homology import homogenize

match = total = 0
for r in catalog.list_rows():
    b = catalog.build_row(r)
    for cb in r.combos:
        if not cb.poly:
            continue
        detm, printed, ok = catalog.constraint_locus(b, cb)
        total += 1
        match += ok
        if not ok:
            print(f"{r.label:<20} {cb}")
            print(f"    tabulated {cb.poly}   ->  {homogenize(printed, cb.variables)}")
            print(f"    det m     {detm}")
print(f"{match} of {total} tabulated conditions agree with det m")
