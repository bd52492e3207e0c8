"""Inputs needed per output on random MCFs, at several quotient bounds.

Larger quotients carry more information per input, so fewer inputs are
needed per output and the fitted slope drops as the bound grows.
"""

from mcfgosper import TrialConfig, run_random_suite

for bound in (10, 100, 1000, 10**4):
    cfg = TrialConfig(mode="random-mcf", m=2, trials=10, max_outputs=200, bound=bound, seed=1)
    suite = run_random_suite(cfg)
    print(f"B={bound:>6}  mean slope {float(suite.mean_slope):.3f}  guard hits {suite.guard_hits}")
