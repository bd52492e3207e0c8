"""Partial output keeps the state entries small.

Both runs produce the same digits. The partial run logs extra shear steps
and tracks the largest entry in bits.
"""

from mcfgosper import Mcf, run
from mcfgosper.partial import run_with_partial
from mcfgosper.sources import cube_root_pair

C = ((3, 5, 0), (5, 3, 0), (1, 0, 2))
x = Mcf.from_source(cube_root_pair(7))

plain = run(x, C, 40)
part = run_with_partial(Mcf.from_source(cube_root_pair(7)), C, 40)
assert plain.outputs == part.outputs

print("largest entry, plain:  ", max(plain.log.entry_bits), "bits")
print("largest entry, partial:", max(part.log.entry_bits), "bits")
print("partial steps taken:", part.log.kinds.count("partial"))
