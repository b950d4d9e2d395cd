"""Walk the catalog: degree, n, cokernel and the smallest H_1 found at low weight height."""
from qhp import catalog
from qhp.homology import qhp_check_direct

for r in catalog.list_rows():
    b = catalog.build_row(r)
    deg = r.load_arrangement().total_degree
    if r.n_centers == 0:
        v = qhp_check_direct(b.graph, b.lattice, b.classes)
        print(f"{r.id:>5} {r.label:<22} deg {deg:>2} n=0  h1 = {v.h1_order}")
        continue
    h1s = sorted({res.verdict.h1_order for res in catalog.enumerate(r, 5, built=b)})
    shown = " ".join(map(str, h1s[:6])) + (" ..." if len(h1s) > 6 else "")
    print(f"{r.id:>5} {r.label:<22} deg {deg:>2} n={r.n_centers}  coker {b.coker}  h1 at height<=5: {shown}")
