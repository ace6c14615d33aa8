"""
Classifying Markov chains
=========================

Walk through the four verdicts (ergodic, mixing, irreducible, primitive)
on small transition matrices, including the two classic boundary cases:
a map whose time averages fail to converge, and a mixing map whose dual
stationary vector sits on the cone boundary.
"""

import numpy as np

from conemix import (
    Orthant,
    cesaro_trajectory,
    classify,
    digraph_of,
    from_matrix,
    from_stochastic,
    period,
    power_trajectory,
    strongly_connected,
)

# A 4-state chain: state 0 feeds 1 and 2, state 2 feeds 3, and states 1
# and 3 return to 0.  Cycles of length 2 and 3 coexist, so the period is 1.
chain = from_stochastic([[0, 1, 0, 1],
                         ["1/2", 0, 0, 0],
                         ["1/2", 0, 0, 0],
                         [0, 0, 1, 0]])
report = classify(chain)
print("4-state chain:", report.verdicts())
print("  stationary distribution:", np.round(report.stationary, 4))

g = digraph_of(chain)
print("  strongly connected:", strongly_connected(g), " period:", period(g))

# The swap chain alternates between its two states forever: ergodic (the
# averages settle) but not mixing (the powers never do).
swap = from_stochastic([[0, 1], [1, 0]])
print("swap chain:", classify(swap).verdicts())

# A non-stochastic cone-preserving map on the orthant.  Its spectral
# radius 2 is a simple eigenvalue with a spectral gap, so the normalized
# powers converge -- but the dual stationary vector [1, 0] lies on the
# boundary, which rules out irreducibility.
triangular = from_matrix([[2, 0], [1, 1]], Orthant(2))
report = classify(triangular)
print("triangular map:", report.verdicts())
print("  flags:", report.hypothesis_flags)

trajectory = power_trajectory(triangular, [1, 0], 200, tol=1e-10)
print("  normalized powers converge to", trajectory.verdict.limit,
      "at step", trajectory.verdict.at_step)

# The unit shear keeps the orthant but its peak eigenvalue is defective
# (one Jordan block of size two): the time averages grow linearly and
# never converge.
shear = from_matrix([[1, 1], [0, 1]], Orthant(2))
report = classify(shear)
print("unit shear:", report.verdicts())
print("  radius multiplicities (geometric, algebraic):",
      tuple(report.multiplicity_r))

trajectory = cesaro_trajectory(shear, [0, 1], 1000)
print("  time averages:", trajectory.verdict.status,
      "with per-step growth", round(trajectory.verdict.growth, 4))
