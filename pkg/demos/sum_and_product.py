"""Adding and multiplying two MCFs with the bilinear engine."""

from mcfgosper import Mcf, eval_bilinear, product_forms, run_bilinear, sum_forms, verify_prefix
from mcfgosper.sources import RootSource, cube_root_pair

# m = 1: sqrt 2 * sqrt 3 = sqrt 6 = [2; 2, 4, 2, 4, ...]
s2, s3 = RootSource([2], 2), RootSource([3], 2)
res = run_bilinear(Mcf.from_source(s2), Mcf.from_source(s3), product_forms(1), 10)
print("sqrt2 * sqrt3:", [b[0] for b in res.outputs])

# m = 2: componentwise sum and product of two cube-root pairs
x, y = cube_root_pair(2), cube_root_pair(3)
for name, forms in (("sum", sum_forms(2)), ("product", product_forms(2))):
    res = run_bilinear(Mcf.from_source(x), Mcf.from_source(y), forms, 10)
    ok = verify_prefix(res.outputs, eval_bilinear(x, y, forms))
    print(f"{name}:", res.outputs[:5], "...", "inputs", res.log.inputs_at_output[-1], "oracle", bool(ok))
