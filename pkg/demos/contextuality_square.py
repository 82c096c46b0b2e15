"""No fixed +-1 values fit the operator square, and spin-1 squares show why."""

import numpy as np

from qfound.contextuality import coloring_search, mermin_square, spin1_squares

sq = mermin_square()
print("row products:", [int(round(np.trace(p).real / 4)) for p in sq.row_products()])
print("col products:", [int(round(np.trace(p).real / 4)) for p in sq.col_products()])
res = coloring_search()
print(f"tried {res['assignments_examined']} fillings, found {res['colorings_found']}")
print("by rows the nine values multiply to", res["parity_by_rows"], "but by columns to", res["parity_by_columns"])

s1 = spin1_squares()
print("\nspin-1 squared components commute:", s1["commutator_norms"])
print("their sum minus 2 I:", s1["sum_residual"])
