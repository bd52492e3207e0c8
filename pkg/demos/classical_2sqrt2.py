"""Doubling sqrt 2 with a 2x2 state.

With m = 1 the Möbius engine is the classical one: sqrt 2 = [1; 2, 2, ...]
goes in, and 2 sqrt 2 = [2; 1, 4, 1, 4, ...] comes out.
"""

from mcfgosper import Mcf, run

sqrt2 = Mcf(1, [(1,)], [(2,)])
res = run(sqrt2, ((2, 0), (0, 1)), 12, trace=True)

print("outputs:", [b[0] for b in res.outputs])
print("inputs used at each output:", res.log.inputs_at_output)
print("final state:", res.state.C)
