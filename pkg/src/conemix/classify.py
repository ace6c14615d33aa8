"""Classification of cone-positive maps: ergodic, mixing, irreducible,
primitive.

Each verdict has at least two independent routes that are cross-checked:

* ergodic -- algebraic multiplicity of the spectral radius (exact when the
  radius is rational), the fixed-space dimension (exact, for maps whose
  adjoint fixes the unit), and float eigenvalue clustering;
* mixing -- kernel of ``A (x) A - r^2 I`` (exact), geometric multiplicity
  of ``r^2`` on the Kronecker square (float), and the spectral-gap
  condition computed from the full eigenvalue list;
* irreducible -- interior stationary pair (the definition), interior of
  ``(I + A)^(d-1) g`` for every extremal generator, pairwise support
  reachability, and strong connectivity of the transition digraph;
* primitive -- interior pair on top of mixing, strong connectivity of the
  Kronecker-square digraph, and aperiodicity.

Exact routes are authoritative when the map carries rational data.
Disagreements between routes are never silently resolved; they are
recorded as flags on the report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cones import (
    Cone,
    Orthant,
    Polyhedral,
    Psd,
    TensorCone,
    UnsupportedConeOperation,
)
from .linalg import (
    FLOAT_MODE,
    RATIONAL_MODE,
    MultiplicityPair,
    ScalarMode,
    ZeroSpectralRadiusError,
    exact_kron,
    exact_kernel_basis,
    exact_matvec,
    exact_power,
    exact_rank,
    exact_shift,
    multiplicities,
    spectral_radius,
)
from .maps import DynMap, PositivityVerdict, is_dup, is_positive

__all__ = [
    "Digraph",
    "ClassificationReport",
    "NotErgodicError",
    "NotStronglyConnectedError",
    "ZeroSpectralRadiusError",
    "digraph_of",
    "strongly_connected",
    "strongly_connected_components",
    "tensor_product_digraph",
    "tensor_scc_count",
    "period",
    "stationary_pair",
    "is_ergodic",
    "is_mixing",
    "is_irreducible",
    "is_primitive",
    "ergodic_routes",
    "mixing_routes",
    "irreducible_routes",
    "primitive_routes",
    "power_interior_probe",
    "classify",
]

#: relative floor below which a float spectral radius counts as zero
RADIUS_FLOOR = 1e-9


class NotErgodicError(Exception):
    """No stationary pair exists; carries the multiplicity diagnostics."""

    def __init__(self, reason, x0=None, y0=None, pairing=None,
                 geometric=None):
        super().__init__(reason)
        self.reason = reason
        self.x0 = x0
        self.y0 = y0
        self.pairing = pairing
        self.geometric = geometric


class NotStronglyConnectedError(Exception):
    """The digraph is not strongly connected, so the period is undefined."""


# ---------------------------------------------------------------------------
# digraphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Digraph:
    """Successor-list digraph on vertices 0..n-1."""

    n: int
    succ: tuple

    def edges(self):
        return [(u, v) for u in range(self.n) for v in self.succ[u]]


def digraph_of(m, mode: ScalarMode = FLOAT_MODE) -> Digraph:
    """Digraph of a map: edge i -> j present iff entry (j, i) is positive."""
    if isinstance(m, DynMap):
        m = m.exact if m.exact is not None else m.matrix
    if isinstance(m, list):
        n = len(m)
        succ = tuple(tuple(j for j in range(n) if m[j][i] > 0)
                     for i in range(n))
        return Digraph(n, succ)
    mf = np.asarray(m, dtype=float)
    n = mf.shape[0]
    thresh = mode.eps_interior * max(1.0, float(np.max(np.abs(mf))))
    succ = tuple(tuple(int(j) for j in np.nonzero(mf[:, i] > thresh)[0])
                 for i in range(n))
    return Digraph(n, succ)


def strongly_connected_components(g: Digraph):
    """Tarjan's algorithm, iterative to spare the recursion limit."""
    index = [-1] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack = []
    comps = []
    counter = 0
    for root in range(g.n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            succ = g.succ[v]
            while i < len(succ):
                w = succ[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def strongly_connected(g: Digraph) -> bool:
    """One strongly connected component covering all vertices?"""
    return len(strongly_connected_components(g)) == 1


def period(g: Digraph) -> int:
    """GCD of all cycle lengths of a strongly connected digraph.

    Computed from a BFS layering: every edge (u, v) contributes
    ``|level(u) + 1 - level(v)|`` to the gcd (tree edges contribute 0,
    which gcd ignores).
    """
    if not strongly_connected(g):
        raise NotStronglyConnectedError("period requires strong connectivity")
    level = [-1] * g.n
    level[0] = 0
    queue = [0]
    while queue:
        nxt = []
        for u in queue:
            for v in g.succ[u]:
                if level[v] == -1:
                    level[v] = level[u] + 1
                    nxt.append(v)
        queue = nxt
    p = 0
    for u in range(g.n):
        for v in g.succ[u]:
            p = math.gcd(p, abs(level[u] + 1 - level[v]))
    if p == 0:
        raise NotStronglyConnectedError("graph has no cycles")
    return p


def tensor_product_digraph(g: Digraph, h: Digraph) -> Digraph:
    """Edge (u1,u2) -> (v1,v2) iff u1 -> v1 and u2 -> v2."""
    succ = []
    for u1 in range(g.n):
        for u2 in range(h.n):
            succ.append(tuple(v1 * h.n + v2
                              for v1 in g.succ[u1] for v2 in h.succ[u2]))
    return Digraph(g.n * h.n, tuple(succ))


def tensor_scc_count(g: Digraph) -> int:
    """Number of strongly connected components of g (x) g.

    For a strongly connected g every vertex of the product lies on a cycle,
    and the count equals the period of g.
    """
    if not strongly_connected(g):
        raise NotStronglyConnectedError(
            "tensor SCC count requires strong connectivity")
    return len(strongly_connected_components(tensor_product_digraph(g, g)))


# ---------------------------------------------------------------------------
# spectral radius with exact snapping
# ---------------------------------------------------------------------------

def _cache(a: DynMap) -> dict:
    cache = getattr(a, "_route_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(a, "_route_cache", cache)
    return cache


def _mode_key(mode: ScalarMode):
    return (mode.kind, mode.eps_rank, mode.eps_cluster, mode.eps_interior)


def _rational_radius(a: DynMap, r: float):
    """Rational value of the spectral radius, verified exactly, or None.

    A cone-positive map whose adjoint fixes the unit has radius exactly 1;
    otherwise a small-denominator candidate near the float value is
    accepted only if it is exactly an eigenvalue of the exact matrix.
    """
    if a.exact is None:
        return None
    candidates = []
    if abs(r - 1.0) <= 1e-7 and is_dup(a):
        candidates.append(Fraction(1))
    cand = Fraction(r).limit_denominator(10 ** 6)
    if cand > 0 and abs(float(cand) - r) <= 1e-7 * max(1.0, r):
        candidates.append(cand)
    d = a.dim
    for c in candidates:
        if exact_rank(exact_shift(a.exact, c)) < d:
            return c
    return None


def _is_exact_nilpotent(a: DynMap) -> bool:
    if a.exact is None:
        return False
    if isinstance(a.cone, Orthant) and \
            all(v >= 0 for row in a.exact for v in row):
        # nonnegative matrix: nilpotent iff its digraph has no cycles
        g = digraph_of(a.exact)
        return all(len(c) == 1 and c[0] not in g.succ[c[0]]
                   for c in strongly_connected_components(g))
    power = exact_power(a.exact, a.dim)
    return all(v == 0 for row in power for v in row)


def _positive_radius(a: DynMap):
    """(float radius, exact radius or None); raises on a zero radius."""
    cache = _cache(a)
    if "radius" in cache:
        value = cache["radius"]
        if isinstance(value, ZeroSpectralRadiusError):
            raise value
        return value
    r = spectral_radius(a.matrix)
    scale = max(1.0, float(np.linalg.norm(a.matrix, 2)))
    err = None
    if a.exact is not None:
        if r <= 1e-3 * scale and _is_exact_nilpotent(a):
            err = ZeroSpectralRadiusError("the map is nilpotent")
    elif r <= RADIUS_FLOOR * scale:
        err = ZeroSpectralRadiusError(
            f"spectral radius {r} is numerically zero")
    if err is not None:
        cache["radius"] = err
        raise err
    value = (r, _rational_radius(a, r))
    cache["radius"] = value
    return value


# ---------------------------------------------------------------------------
# stationary pair
# ---------------------------------------------------------------------------

@dataclass
class _Stationary:
    x0: np.ndarray
    y0: np.ndarray
    x0_exact: list | None = None
    y0_exact: list | None = None


def _sign_fix_exact(v):
    pivot = max(v, key=abs)
    if pivot < 0:
        return [-x for x in v]
    return list(v)


def _eigvec_exact(m, lam):
    basis = exact_kernel_basis(exact_shift(m, lam))
    if len(basis) != 1:
        return None, len(basis)
    return _sign_fix_exact(basis[0]), 1


def _stationary_exact(a: DynMap, r_exact) -> _Stationary:
    x0, gx = _eigvec_exact(a.exact, r_exact)
    if x0 is None:
        raise NotErgodicError(
            f"eigenvalue {r_exact} has geometric multiplicity {gx}",
            geometric=gx)
    transposed = [list(col) for col in zip(*a.exact)]
    y0, gy = _eigvec_exact(transposed, r_exact)
    if y0 is None:
        raise NotErgodicError(
            f"adjoint eigenvalue {r_exact} has geometric multiplicity {gy}",
            geometric=gy)
    cone = a.cone
    for vec, member in ((x0, cone.contains), (y0, cone.dual_contains)):
        try:
            if not member(vec, RATIONAL_MODE):
                if member([-v for v in vec], RATIONAL_MODE):
                    vec[:] = [-v for v in vec]
                else:
                    raise NotErgodicError(
                        "no sign of the Perron eigenvector lies in the cone",
                        x0=np.array([float(v) for v in x0]))
        except UnsupportedConeOperation:
            pass
    pairing = sum(x * y for x, y in zip(x0, y0))
    if pairing == 0:
        raise NotErgodicError(
            "stationary and dual stationary vectors are orthogonal",
            x0=np.array([float(v) for v in x0]),
            y0=np.array([float(v) for v in y0]),
            pairing=0.0, geometric=1)
    scale = sum(abs(v) for v in x0)
    x0 = [v / scale for v in x0]
    pairing = sum(x * y for x, y in zip(x0, y0))
    y0 = [v / pairing for v in y0]
    return _Stationary(
        np.array([float(v) for v in x0]),
        np.array([float(v) for v in y0]),
        x0_exact=x0, y0_exact=y0)


def _phase_fixed_real(v):
    pivot = int(np.argmax(np.abs(v)))
    phase = v[pivot] / abs(v[pivot])
    w = (v / phase).real
    return w / np.sum(np.abs(w))


def _stationary_float(a: DynMap, r: float, mode: ScalarMode) -> _Stationary:
    geom = multiplicities(a.matrix / r, 1.0, mode).geometric
    if geom != 1:
        raise NotErgodicError(
            f"spectral radius has geometric multiplicity {geom}",
            geometric=geom)
    cone = a.cone
    vecs = []
    for mat, member in ((a.matrix, cone.contains),
                        (a.matrix.T, cone.dual_contains)):
        ev, vv = np.linalg.eig(mat)
        idx = int(np.argmin(np.abs(ev - r)))
        v = _phase_fixed_real(vv[:, idx])
        try:
            if not member(v, mode):
                if member(-v, mode):
                    v = -v
                else:
                    raise NotErgodicError(
                        "no sign of the Perron eigenvector lies in the cone",
                        x0=v)
        except UnsupportedConeOperation:
            pass
        vecs.append(v)
    x0, y0 = vecs
    pairing = float(y0 @ x0)
    if abs(pairing) <= 1e-9:
        raise NotErgodicError(
            "stationary and dual stationary vectors are orthogonal",
            x0=x0, y0=y0, pairing=pairing, geometric=1)
    return _Stationary(x0, y0 / pairing)


def _stationary(a: DynMap, mode: ScalarMode) -> _Stationary:
    cache = _cache(a)
    key = ("stationary", _mode_key(mode))
    if key in cache:
        value = cache[key]
        if isinstance(value, NotErgodicError):
            raise value
        return value
    r, r_exact = _positive_radius(a)
    try:
        if a.exact is not None and r_exact is not None:
            value = _stationary_exact(a, r_exact)
        else:
            value = _stationary_float(a, r, mode)
    except NotErgodicError as err:
        cache[key] = err
        raise
    cache[key] = value
    return value


def stationary_pair(a: DynMap, mode: ScalarMode = FLOAT_MODE):
    """Perron eigenvectors (x0, y0) of the map and its adjoint, with
    x0 in the cone, y0 in the dual cone, and <y0, x0> = 1.

    Raises :class:`NotErgodicError` (with diagnostics) when the pairing
    vanishes or the radius is not geometrically simple, and
    :class:`ZeroSpectralRadiusError` when the radius is zero.
    """
    st = _stationary(a, mode)
    return st.x0, st.y0


# ---------------------------------------------------------------------------
# route evaluations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Route:
    """One criterion's verdict, with its arithmetic provenance."""

    value: bool
    exact: bool
    marginal: bool = False

    def __bool__(self):
        return self.value


def _margin_probe(predicate, mode: ScalarMode) -> Route:
    """Evaluate at the working tolerance and flag 10x sensitivity."""
    mid = predicate(mode)
    marginal = predicate(mode.scaled(0.1)) != predicate(mode.scaled(10.0))
    return Route(mid, exact=False, marginal=marginal)


def ergodic_routes(a: DynMap, mode: ScalarMode = FLOAT_MODE) -> dict:
    """Every applicable ergodicity criterion, evaluated independently.

    Keys: ``algebraic-multiplicity`` (exact), ``fixed-space-dim`` (exact,
    only for maps whose adjoint fixes the unit), ``eigenvalue-cluster``
    (float).
    """
    cache = _cache(a)
    key = ("ergodic", _mode_key(mode))
    if key in cache:
        return cache[key]
    r, r_exact = _positive_radius(a)
    routes = {}
    if a.exact is not None and r_exact is not None:
        pair = multiplicities(a.exact, r_exact, RATIONAL_MODE)
        routes["algebraic-multiplicity"] = Route(pair.algebraic == 1, True)
        if is_dup(a):
            routes["fixed-space-dim"] = Route(pair.geometric == 1, True)
    routes["eigenvalue-cluster"] = _margin_probe(
        lambda m: multiplicities(a.matrix / r, 1.0, m).algebraic == 1, mode)
    cache[key] = routes
    return routes


def mixing_routes(a: DynMap, mode: ScalarMode = FLOAT_MODE) -> dict:
    """Every applicable mixing criterion, evaluated independently.

    Keys: ``kron-fixed-space-dim`` (exact kernel of the Kronecker square
    minus r^2), ``kron-geometric`` (float), ``spectral-gap`` (float oracle
    from the full eigenvalue list).
    """
    cache = _cache(a)
    key = ("mixing", _mode_key(mode))
    if key in cache:
        return cache[key]
    r, r_exact = _positive_radius(a)
    routes = {}
    if a.exact is not None and r_exact is not None:
        kron_exact = exact_kron(a.exact, a.exact)
        shifted = exact_shift(kron_exact, r_exact * r_exact)
        dim2 = a.dim * a.dim
        routes["kron-fixed-space-dim"] = Route(
            dim2 - exact_rank(shifted) == 1, True)

    big = np.kron(a.matrix, a.matrix) / (r * r)
    routes["kron-geometric"] = _margin_probe(
        lambda m: multiplicities(big, 1.0, m).geometric == 1, mode)

    moduli = np.abs(np.linalg.eigvals(a.matrix)) / r
    routes["spectral-gap"] = _margin_probe(
        lambda m: int(np.count_nonzero(moduli >= 1.0 - m.eps_cluster)) == 1,
        mode)
    cache[key] = routes
    return routes


def _finite_generator_pair(cone: Cone):
    """(exact generators of K, exact dual generators) or None."""
    inner = cone
    if isinstance(cone, TensorCone):
        inner = cone._inner()
        if inner is None:
            return None
    if isinstance(inner, Orthant):
        gens = inner.exact_extremal_generators()
        return gens, gens
    if isinstance(inner, Polyhedral):
        return inner.exact_extremal_generators(), inner.exact_dual_generators()
    return None


def _classical_pattern(cone: Cone) -> bool:
    if isinstance(cone, Orthant):
        return True
    return isinstance(cone, TensorCone) and isinstance(cone._inner(), Orthant)


def _interior_pair_route(a: DynMap, base: bool, mode: ScalarMode):
    """base verdict (ergodic/mixing) AND interior stationary pair."""
    if not base:
        return Route(False, a.exact is not None), None
    try:
        st = _stationary(a, mode)
    except NotErgodicError:
        return Route(False, a.exact is not None), None
    cone = a.cone
    try:
        if st.x0_exact is not None:
            inside = cone.interior_contains(st.x0_exact, RATIONAL_MODE)
            dual_inside = cone.interior_dual_contains(st.y0_exact,
                                                      RATIONAL_MODE)
            return Route(inside and dual_inside, True), st
        route = _margin_probe(
            lambda m: (cone.interior_contains(st.x0, m)
                       and cone.interior_dual_contains(st.y0, m)), mode)
        return route, st
    except UnsupportedConeOperation:
        return Route(False, False, marginal=True), st


def _binomial_power_route(a: DynMap, gens, mode: ScalarMode) -> Route:
    """(I + A)^(d-1) sends every extremal generator to the interior."""
    d = a.dim
    if a.exact is not None:
        shift = [[v + (1 if i == j else 0) for j, v in enumerate(row)]
                 for i, row in enumerate(a.exact)]
        power = exact_power(shift, d - 1)
        ok = all(a.cone.interior_contains(exact_matvec(power, g),
                                          RATIONAL_MODE)
                 for g in gens)
        return Route(ok, True)
    power = np.linalg.matrix_power(np.eye(d) + a.matrix, d - 1)
    gens_f = [np.array([float(v) for v in g]) for g in gens]
    return _margin_probe(
        lambda m: all(a.cone.interior_contains(power @ g, m)
                      for g in gens_f), mode)


def _reachability_route(a: DynMap, gens, dual_gens,
                        mode: ScalarMode) -> Route:
    """Every (generator, dual generator) pair has a strictly positive
    pairing within d-1 applications of the map (support reachability)."""
    d = a.dim
    n_dual = len(dual_gens)
    if a.exact is not None:
        for g in gens:
            v = list(g)
            hit = [False] * n_dual
            for _ in range(d):
                for k, h in enumerate(dual_gens):
                    if not hit[k] and sum(x * y for x, y in zip(h, v)) > 0:
                        hit[k] = True
                if all(hit):
                    break
                v = exact_matvec(a.exact, v)
            if not all(hit):
                return Route(False, True)
        return Route(True, True)

    gens_f = [np.array([float(v) for v in g]) for g in gens]
    duals_f = np.array([[float(v) for v in h] for h in dual_gens])

    def pred(m):
        for g in gens_f:
            v = g.copy()
            hit = np.zeros(n_dual, dtype=bool)
            for _ in range(d):
                scale = max(1e-300, float(np.linalg.norm(v)))
                hit |= (duals_f @ v) > m.eps_interior * scale
                if hit.all():
                    break
                v = a.matrix @ v
            if not hit.all():
                return False
        return True

    return _margin_probe(pred, mode)


def irreducible_routes(a: DynMap, mode: ScalarMode = FLOAT_MODE) -> dict:
    """Every applicable irreducibility criterion, evaluated independently.

    Keys: ``interior-pair`` (the definition: ergodic with interior
    stationary pair), and for cones with finitely many extremal rays
    ``binomial-power``, ``reachability``, and (classical maps)
    ``digraph``.
    """
    ergodic = _resolve(ergodic_routes(a, mode)).value
    routes = {}
    routes["interior-pair"], _ = _interior_pair_route(a, ergodic, mode)
    pair = _finite_generator_pair(a.cone)
    if pair is not None:
        gens, dual_gens = pair
        routes["binomial-power"] = _binomial_power_route(a, gens, mode)
        routes["reachability"] = _reachability_route(a, gens, dual_gens, mode)
    if _classical_pattern(a.cone):
        routes["digraph"] = Route(
            strongly_connected(digraph_of(a, mode)), a.exact is not None)
    return routes


def primitive_routes(a: DynMap, mode: ScalarMode = FLOAT_MODE) -> dict:
    """Every applicable primitivity criterion, evaluated independently.

    Keys: ``interior-pair`` (the definition: mixing with interior
    stationary pair), and for classical maps ``kron-digraph`` (strong
    connectivity of the Kronecker-square digraph) and ``aperiodic``
    (irreducible with period one).
    """
    mixing = _resolve(mixing_routes(a, mode)).value
    routes = {}
    routes["interior-pair"], _ = _interior_pair_route(a, mixing, mode)
    if _classical_pattern(a.cone):
        g = digraph_of(a, mode)
        exact = a.exact is not None
        routes["kron-digraph"] = Route(
            strongly_connected(tensor_product_digraph(g, g)), exact)
        aperiodic = strongly_connected(g) and period(g) == 1
        routes["aperiodic"] = Route(aperiodic, exact)
    return routes


def _resolve(routes: dict) -> Route:
    """Verdict with exact routes authoritative; insertion order breaks ties."""
    for route in routes.values():
        if route.exact:
            return route
    return next(iter(routes.values()))


def _route_flags(family: str, routes: dict) -> list:
    flags = []
    for name, route in routes.items():
        if route.marginal:
            flags.append(f"tolerance-marginal:{family}:{name}")
    if len({route.value for route in routes.values()}) > 1:
        detail = ",".join(f"{name}={route.value}"
                          for name, route in sorted(routes.items()))
        flags.append(f"route-disagreement:{family}:{detail}")
    return flags


def is_ergodic(a: DynMap, mode: ScalarMode = FLOAT_MODE) -> bool:
    """Do the time averages of the radius-normalized powers converge to a
    rank-one map?  Equivalent to the spectral radius being an algebraically
    simple eigenvalue."""
    return _resolve(ergodic_routes(a, mode)).value


def is_mixing(a: DynMap, mode: ScalarMode = FLOAT_MODE) -> bool:
    """Do the radius-normalized powers themselves converge?  Equivalent to
    the Kronecker square having a one-dimensional peak eigenspace."""
    return _resolve(mixing_routes(a, mode)).value


def is_irreducible(a: DynMap, mode: ScalarMode = FLOAT_MODE) -> bool:
    """Ergodic with a stationary pair interior to the cone and its dual."""
    return _resolve(irreducible_routes(a, mode)).value


def is_primitive(a: DynMap, mode: ScalarMode = FLOAT_MODE) -> bool:
    """Mixing with a stationary pair interior to the cone and its dual."""
    return _resolve(primitive_routes(a, mode)).value


# ---------------------------------------------------------------------------
# power-interior probe (diagnostic)
# ---------------------------------------------------------------------------

def power_interior_probe(a: DynMap, mode: ScalarMode = FLOAT_MODE,
                         samples: int = 32, seed: int = 5):
    """Iterate the map on boundary states until the image is interior.

    Returns (reached, n).  ``reached`` is False when a probe state is still
    on the boundary at the iteration cap, which for classical maps
    certifies non-primitivity (the cap is the classical power-positivity
    bound (d-1)^2 + 1; for a channel with N linearly independent Kraus
    operators it is h^2 (h^2 - N + 1)).
    """
    cone = a.cone
    if isinstance(cone, Orthant):
        d = a.dim
        cap = (d - 1) ** 2 + 1
        thresh = mode.eps_interior * max(1.0, float(np.max(np.abs(a.matrix))))
        pattern = (a.matrix > thresh).astype(np.int64)
        power = np.eye(d, dtype=np.int64)
        for n in range(1, cap + 1):
            power = np.minimum(pattern @ power, 1)
            if power.all():
                return True, n
        return False, None
    if isinstance(cone, Psd):
        h = cone.h
        n_kraus = a.kraus_rank if a.kraus_rank is not None else 1
        cap = (h * h) * (h * h - n_kraus + 1)
        rng = np.random.default_rng(seed)
        basis = cone.basis
        worst = 0
        for _ in range(samples):
            psi = rng.standard_normal(h) + 1j * rng.standard_normal(h)
            psi /= np.linalg.norm(psi)
            x = basis.vec(np.outer(psi, psi.conj()))
            reached = None
            for n in range(1, cap + 1):
                x = a.matrix @ x
                nrm = float(np.linalg.norm(x))
                if nrm == 0.0:
                    break
                x /= nrm
                if cone.interior_contains(x, mode):
                    reached = n
                    break
            if reached is None:
                return False, None
            worst = max(worst, reached)
        return True, worst
    raise UnsupportedConeOperation(f"no power-interior probe for {cone!r}")


# ---------------------------------------------------------------------------
# the full report
# ---------------------------------------------------------------------------

@dataclass
class ClassificationReport:
    """All verdicts, witnesses, and the criteria that produced them."""

    r: float
    ergodic: bool
    mixing: bool
    irreducible: bool
    primitive: bool
    dup: bool
    positivity: PositivityVerdict
    multiplicity_r: MultiplicityPair
    multiplicity_r2_kron: MultiplicityPair
    stationary: np.ndarray | None = None
    dual_stationary: np.ndarray | None = None
    pairing: float | None = None
    gap_ratio: float | None = None
    criteria_fired: list = field(default_factory=list)
    hypothesis_flags: list = field(default_factory=list)

    def verdicts(self) -> dict:
        return {"ergodic": self.ergodic, "mixing": self.mixing,
                "irreducible": self.irreducible, "primitive": self.primitive}


def classify(a: DynMap, mode: ScalarMode = FLOAT_MODE) -> ClassificationReport:
    """Run every applicable route, cross-check them, and assemble a report.

    Route disagreements and tolerance-marginal decisions become
    ``hypothesis_flags`` entries rather than being silently resolved, and
    the verdicts are forced onto the implication lattice
    (primitive => mixing and irreducible; mixing/irreducible => ergodic).
    """
    flags = []
    criteria = []
    pos = is_positive(a, mode)
    if pos.value == "no":
        flags.append(f"positivity-no: {pos.certificate}")
    elif pos.value == "unknown":
        flags.append("positivity-unknown")
    dup = is_dup(a)
    if not dup:
        flags.append("non-dup")

    try:
        r, r_exact = _positive_radius(a)
    except ZeroSpectralRadiusError as err:
        flags.append(f"zero-spectral-radius: {err}")
        return ClassificationReport(
            r=0.0, ergodic=False, mixing=False, irreducible=False,
            primitive=False, dup=dup, positivity=pos,
            multiplicity_r=MultiplicityPair(0, 0),
            multiplicity_r2_kron=MultiplicityPair(0, 0),
            hypothesis_flags=flags)
    if a.exact is not None:
        flags.append("spectral-radius-computed-in-float")

    if a.exact is not None and r_exact is not None:
        mult_r = multiplicities(a.exact, r_exact, RATIONAL_MODE)
        mult_r2 = multiplicities(exact_kron(a.exact, a.exact),
                                 r_exact * r_exact, RATIONAL_MODE)
    else:
        mult_r = multiplicities(a.matrix / r, 1.0, mode)
        mult_r2 = multiplicities(np.kron(a.matrix, a.matrix) / (r * r),
                                 1.0, mode)

    moduli = np.sort(np.abs(np.linalg.eigvals(a.matrix)))[::-1]
    gap_ratio = float(moduli[1] / r) if moduli.size > 1 else None

    families = {
        "ergodic": ergodic_routes(a, mode),
        "mixing": mixing_routes(a, mode),
        "irreducible": irreducible_routes(a, mode),
        "primitive": primitive_routes(a, mode),
    }
    verdicts = {}
    for family, routes in families.items():
        verdicts[family] = _resolve(routes).value
        criteria.extend(f"{family}:{name}" for name in sorted(routes))
        flags.extend(_route_flags(family, routes))

    stationary = dual_stationary = None
    pairing = None
    try:
        st = _stationary(a, mode)
        stationary, dual_stationary = st.x0, st.y0
        pairing = 1.0
        try:
            if not a.cone.interior_dual_contains(st.y0, mode):
                flags.append("dual-stationary-on-boundary")
        except UnsupportedConeOperation:
            flags.append("dual-interior-undecidable")
    except NotErgodicError as err:
        if err.x0 is not None:
            stationary = np.asarray(err.x0, dtype=float)
        if err.y0 is not None:
            dual_stationary = np.asarray(err.y0, dtype=float)
        pairing = err.pairing
        flags.append(f"no-stationary-pair: {err.reason}")

    ergodic = verdicts["ergodic"]
    mixing = verdicts["mixing"]
    irreducible = verdicts["irreducible"]
    primitive = verdicts["primitive"]
    # implication lattice: never report a stronger property without the
    # weaker ones it implies
    if mixing and not ergodic:
        flags.append("lattice-correction:mixing-without-ergodic")
        mixing = False
    if irreducible and not ergodic:
        flags.append("lattice-correction:irreducible-without-ergodic")
        irreducible = False
    if primitive and not (mixing and irreducible):
        flags.append("lattice-correction:primitive-needs-mixing-irreducible")
        primitive = False

    return ClassificationReport(
        r=r, ergodic=ergodic, mixing=mixing, irreducible=irreducible,
        primitive=primitive, dup=dup, positivity=pos,
        multiplicity_r=mult_r, multiplicity_r2_kron=mult_r2,
        stationary=stationary, dual_stationary=dual_stationary,
        pairing=pairing, gap_ratio=gap_ratio,
        criteria_fired=criteria,
        hypothesis_flags=list(dict.fromkeys(flags)))
