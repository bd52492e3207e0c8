"""Transforming (cbrt d, cbrt d^2) and checking the result.

The engine output is compared with a direct interval evaluation of the
transformed pair, expanded independently.
"""

import sys

from mcfgosper import Mcf, eval_moebius, run, verify_prefix
from mcfgosper.sources import cube_root_pair

C3 = ((3, 5, 0), (5, 3, 0), (1, 0, 2))
d = int(sys.argv[1]) if len(sys.argv) > 1 else 2
x = cube_root_pair(d)

print(f"expansion of (cbrt {d}, cbrt {d}^2):", Mcf.from_source(x).take(8))
res = run(Mcf.from_source(x), C3, 25)
print("image under C3:", res.outputs[:8], "...")
print("inputs per output:", res.log.inputs_at_output)

report = verify_prefix(res.outputs, eval_moebius(x, C3))
print("oracle:", "agree" if report else f"mismatch at {report.mismatch_index}", f"({report.checked} checked)")
