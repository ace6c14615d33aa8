"""
Asymptotic decoupling of bipartite trajectories
===============================================

Track how far the normalized trajectory of a bipartite map stays from the
product of its own marginals.  A mixing map decouples every initial state;
a periodic map can keep correlations alive forever -- and a map that is
not even ergodic may still decouple, because decoupling only asks that
correlations die, not that the state converge.
"""

import numpy as np

from conemix import (
    BipartiteLayout,
    Orthant,
    TensorCone,
    decoupling_trace,
    from_matrix,
)

cone = TensorCone(Orthant(2), Orthant(2))
layout = BipartiteLayout(Orthant(2), Orthant(2))
shear = np.array([[1.0, 1.0], [0.0, 1.0]])
swap = np.array([[0.0, 1.0], [1.0, 0.0]])

# The shear is not ergodic, yet its two-fold product drives every joint
# distribution towards the corner e1 (x) e1 -- a product state.  Starting
# from the uniform distribution (itself a product), the decoupling
# distance is zero the whole way while the state drifts to the corner.
pair = from_matrix(np.kron(shear, shear), cone)
uniform = np.full(4, 0.25)
trace = decoupling_trace(pair, uniform, layout, 400, tol=1e-6)
print("shear (x) shear from uniform:", trace.verdict.status,
      "at step", trace.verdict.at_step)
print("  largest distance along the way:", max(trace.iterates))
print("  state after 400 steps:", np.round(trace.final_state, 4))

# Acting on one factor only: the sheared side collapses to its corner
# while the untouched side keeps the renormalized marginal of the
# components the shear feeds on.
half = from_matrix(np.kron(shear, np.eye(2)), cone)
x = np.array([0.1, 0.3, 0.2, 0.4])
trace = decoupling_trace(half, x, layout, 3000, tol=1e-3)
print("shear (x) identity:", trace.verdict.status,
      "final distance", round(trace.iterates[-1], 6))
print("  state heads to", np.round(trace.final_state, 4),
      "= e1 (x)", np.round([x[2], x[3]] / (x[2] + x[3]), 4))

# The swap chain has period two.  A perfectly correlated initial state
# cycles under swap (x) swap and its decoupling distance is stuck at 1/2.
sw = from_matrix(np.kron(swap, swap), cone)
correlated = np.array([0.5, 0.0, 0.0, 0.5])
trace = decoupling_trace(sw, correlated, layout, 50)
print("swap (x) swap from a correlated state:", trace.verdict.status)
print("  distance stays at", trace.iterates[0])
