from fractions import Fraction

import numpy as np
import pytest

from conemix import (
    Digraph,
    NotErgodicError,
    NotStronglyConnectedError,
    Orthant,
    Polyhedral,
    Psd,
    TensorCone,
    ZeroSpectralRadiusError,
    adjoint,
    classify,
    digraph_of,
    from_kraus,
    from_matrix,
    from_stochastic,
    is_ergodic,
    is_irreducible,
    is_mixing,
    is_primitive,
    period,
    power_interior_probe,
    stationary_pair,
    strongly_connected,
    tensor_product_digraph,
    tensor_scc_count,
)
from conemix.classify import irreducible_routes, mixing_routes
from helpers import random_dense_stochastic, random_kraus_channel, \
    random_stochastic_map

CHAIN4 = [[0, 1, 0, 1], [Fraction(1, 2), 0, 0, 0],
          [Fraction(1, 2), 0, 0, 0], [0, 0, 1, 0]]


def shear():
    return from_matrix([[1, 1], [0, 1]], Orthant(2))


def lower_mixing():
    return from_matrix([[2, 0], [1, 1]], Orthant(2))


def swap_chain():
    return from_stochastic([[0, 1], [1, 0]])


def chain4():
    return from_stochastic(CHAIN4)


# ---------------------------------------------------------------------------
# stationary pairs
# ---------------------------------------------------------------------------

def test_stationary_pair_lower_triangular():
    x0, y0 = stationary_pair(lower_mixing())
    np.testing.assert_allclose(x0, [0.5, 0.5])
    np.testing.assert_allclose(y0, [2.0, 0.0])
    assert y0 @ x0 == pytest.approx(1.0)


def test_stationary_pair_shear_orthogonal():
    with pytest.raises(NotErgodicError) as info:
        stationary_pair(shear())
    err = info.value
    assert err.pairing == 0.0
    np.testing.assert_allclose(err.x0, [1.0, 0.0])
    np.testing.assert_allclose(err.y0, [0.0, 1.0])


def test_stationary_pair_swap_uniform():
    x0, y0 = stationary_pair(swap_chain())
    np.testing.assert_allclose(x0, [0.5, 0.5])
    np.testing.assert_allclose(y0, [1.0, 1.0])


def test_stationary_pair_identity_multiplicity():
    with pytest.raises(NotErgodicError) as info:
        stationary_pair(from_stochastic([[1, 0], [0, 1]]))
    assert info.value.geometric == 2


def test_stationary_pair_zero_radius():
    with pytest.raises(ZeroSpectralRadiusError):
        stationary_pair(from_matrix([[0, 1], [0, 0]], Orthant(2)))


# ---------------------------------------------------------------------------
# the four verdicts on the named maps
# ---------------------------------------------------------------------------

def test_shear_is_nothing():
    a = shear()
    assert not is_ergodic(a)
    assert not is_mixing(a)
    assert not is_irreducible(a)
    assert not is_primitive(a)


def test_lower_triangular_is_mixing_not_irreducible():
    a = lower_mixing()
    assert is_ergodic(a)
    assert is_mixing(a)
    assert not is_irreducible(a)
    assert not is_primitive(a)


def test_swap_is_ergodic_not_mixing():
    a = swap_chain()
    assert is_ergodic(a)
    assert not is_mixing(a)
    assert is_irreducible(a)
    assert not is_primitive(a)


def test_swap_kron_kernel_dimension():
    from conemix import RATIONAL_MODE, kernel_dim, linalg
    a = swap_chain()
    kron_exact = linalg.exact_kron(a.exact, a.exact)
    shifted = linalg.exact_sub(kron_exact, linalg.exact_identity(4))
    assert kernel_dim(shifted, RATIONAL_MODE) == 2


def test_chain4_is_primitive():
    a = chain4()
    assert is_ergodic(a)
    assert is_mixing(a)
    assert is_irreducible(a)
    assert is_primitive(a)


def test_deformation_pair():
    full = from_matrix([[2, 1], [0, 1]], Orthant(2))
    assert is_mixing(full)
    halved = from_matrix([[1, 1], [0, 1]], Orthant(2))
    assert not is_ergodic(halved)


def test_identity_not_irreducible():
    a = from_stochastic([[1, 0], [0, 1]])
    assert not is_ergodic(a)
    assert not is_irreducible(a)


def test_zero_radius_raises():
    nil = from_matrix([[0, 1], [0, 0]], Orthant(2))
    with pytest.raises(ZeroSpectralRadiusError):
        is_ergodic(nil)


# ---------------------------------------------------------------------------
# digraph criteria
# ---------------------------------------------------------------------------

def test_digraph_edges_follow_columns():
    g = digraph_of(chain4())
    assert set(g.edges()) == {(0, 1), (0, 2), (1, 0), (2, 3), (3, 0)}


def test_strongly_connected_examples():
    assert strongly_connected(digraph_of(chain4()))
    assert not strongly_connected(digraph_of(shear()))
    assert strongly_connected(Digraph(1, ((0,),)))


def test_period_examples():
    assert period(digraph_of(chain4())) == 1
    assert period(Digraph(2, ((1,), (0,)))) == 2
    assert period(Digraph(1, ((0,),))) == 1
    with pytest.raises(NotStronglyConnectedError):
        period(digraph_of(shear()))


def test_tensor_scc_count_examples():
    assert tensor_scc_count(digraph_of(chain4())) == 1
    assert tensor_scc_count(Digraph(2, ((1,), (0,)))) == 2
    cycle3 = Digraph(3, ((1,), (2,), (0,)))
    assert tensor_scc_count(cycle3) == 3
    with pytest.raises(NotStronglyConnectedError):
        tensor_scc_count(digraph_of(shear()))


def test_tensor_product_digraph_edges():
    g = Digraph(2, ((1,), (0,)))
    t = tensor_product_digraph(g, g)
    assert set(t.edges()) == {(0, 3), (3, 0), (1, 2), (2, 1)}


# ---------------------------------------------------------------------------
# full reports
# ---------------------------------------------------------------------------

def test_classify_shear_report():
    rep = classify(shear())
    assert rep.verdicts() == {"ergodic": False, "mixing": False,
                              "irreducible": False, "primitive": False}
    assert rep.multiplicity_r == (1, 2)
    assert rep.pairing == 0.0
    assert rep.r == pytest.approx(1.0)


def test_classify_lower_triangular_report():
    rep = classify(lower_mixing())
    assert rep.verdicts() == {"ergodic": True, "mixing": True,
                              "irreducible": False, "primitive": False}
    assert rep.r == pytest.approx(2.0, abs=1e-10)
    assert "dual-stationary-on-boundary" in rep.hypothesis_flags
    assert rep.gap_ratio == pytest.approx(0.5)


def test_classify_depolarizing_channel():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    z = np.diag([1.0, -1.0]).astype(complex)
    a = from_kraus([0.5 * np.eye(2), 0.5 * x, 0.5 * y, 0.5 * z])
    rep = classify(a)
    assert rep.verdicts() == {"ergodic": True, "mixing": True,
                              "irreducible": True, "primitive": True}
    # stationary state is proportional to the maximally mixed one
    state = a.cone.basis.mat(rep.stationary)
    np.testing.assert_allclose(state, np.eye(2) * state[0, 0], atol=1e-9)
    assert state[0, 0].real > 0


def test_classify_reports_positivity_violation():
    rep = classify(from_matrix([[1, -1], [0, 1]], Orthant(2)))
    assert rep.positivity.value == "no"
    assert any(f.startswith("positivity-no") for f in rep.hypothesis_flags)


def test_classify_nilpotent_map():
    rep = classify(from_matrix([[0, 1], [0, 0]], Orthant(2)))
    assert rep.r == 0.0
    assert not any(rep.verdicts().values())
    assert any(f.startswith("zero-spectral-radius")
               for f in rep.hypothesis_flags)


def test_classify_lattice_holds_on_random_corpus():
    rng = np.random.default_rng(31)
    for _ in range(40):
        d = int(rng.integers(2, 5))
        rep = classify(random_stochastic_map(rng, d))
        v = rep.verdicts()
        if v["primitive"]:
            assert v["mixing"] and v["irreducible"]
        if v["mixing"] or v["irreducible"]:
            assert v["ergodic"]
        assert not any(f.startswith("route-disagreement")
                       for f in rep.hypothesis_flags)


def test_adjoint_preserves_ergodicity_and_swaps_pair():
    rng = np.random.default_rng(32)
    checked = 0
    for _ in range(30):
        a = random_stochastic_map(rng, 3)
        if not is_ergodic(a):
            continue
        adj = adjoint(a)
        assert is_ergodic(adj)
        x0, y0 = stationary_pair(a)
        xa, ya = stationary_pair(adj)
        # the adjoint's stationary direction is the dual one of the map
        assert abs(abs(np.dot(xa, y0)) - np.linalg.norm(xa)
                   * np.linalg.norm(y0)) < 1e-8
        assert abs(abs(np.dot(ya, x0)) - np.linalg.norm(ya)
                   * np.linalg.norm(x0)) < 1e-8
        checked += 1
    assert checked >= 10


def test_deformation_preserves_irreducibility_and_primitivity():
    rng = np.random.default_rng(33)
    for _ in range(25):
        d = int(rng.integers(2, 5))
        a = random_stochastic_map(rng, d)
        rep = classify(a)
        if not rep.irreducible:
            continue
        # split entrywise into two nonnegative parts, reweight positively
        mask = [[Fraction(int(rng.integers(1, 4)), 4) for _ in range(d)]
                for _ in range(d)]
        w1, w2 = Fraction(int(rng.integers(1, 5))), Fraction(
            int(rng.integers(1, 5)))
        part1 = [[a.exact[i][j] * mask[i][j] for j in range(d)]
                 for i in range(d)]
        part2 = [[a.exact[i][j] * (1 - mask[i][j]) for j in range(d)]
                 for i in range(d)]
        deformed = [[w1 * part1[i][j] + w2 * part2[i][j] for j in range(d)]
                    for i in range(d)]
        b = from_matrix(deformed, Orthant(d))
        assert is_irreducible(b)
        if rep.primitive:
            assert is_primitive(b)


def test_polyhedral_cone_routes_agree():
    cone = Polyhedral([[1, 0], [1, 1]])
    positive_def = from_matrix([[2, 1], [1, 1]], cone)
    routes = irreducible_routes(positive_def)
    assert set(routes) >= {"interior-pair", "binomial-power", "reachability"}
    assert len({r.value for r in routes.values()}) == 1
    assert is_irreducible(positive_def)
    assert is_primitive(positive_def)

    ident = from_matrix([[1, 0], [0, 1]], cone)
    routes = irreducible_routes(ident)
    assert not any(r.value for r in routes.values())


def test_primitive_iff_tensor_square_irreducible_on_wedge():
    # the tensor-square characterization of primitivity, exercised on a
    # polyhedral cone where the product cone stays finitely generated
    from conemix.linalg import as_exact, exact_kron
    wedge = Polyhedral([[1, 0], [1, 1]])
    tensor = TensorCone(wedge, wedge)
    cases = ([[2, 1], [1, 1]], [[1, 0], [0, 1]], [[3, 0], [1, 1]])
    for m in cases:
        a = from_matrix(m, wedge)
        big = from_matrix(exact_kron(as_exact(m), as_exact(m)), tensor)
        assert is_primitive(a) == is_irreducible(big)
    # cone-dependence: this map is primitive on the wedge but its dual
    # Perron vector sits on the orthant's boundary
    assert is_primitive(from_matrix([[3, 0], [1, 1]], wedge))
    assert not is_primitive(from_matrix([[3, 0], [1, 1]], Orthant(2)))


def test_route_agreement_on_nonnegative_matrices():
    # irreducibility routes agree beyond stochastic matrices
    from fractions import Fraction as F
    rng = np.random.default_rng(36)
    for _ in range(60):
        d = int(rng.integers(2, 5))
        rows = [[F(int(rng.integers(0, 5)), int(rng.integers(1, 4)))
                 if rng.random() < 0.6 else F(0) for _ in range(d)]
                for _ in range(d)]
        if all(v == 0 for row in rows for v in row):
            continue
        a = from_matrix(rows, Orthant(d))
        try:
            routes = irreducible_routes(a)
        except ZeroSpectralRadiusError:
            continue
        assert len({r.value for r in routes.values()}) == 1, rows


def test_quantum_kron_of_mixing_channels_is_mixing():
    rng = np.random.default_rng(34)
    a = random_kraus_channel(rng, 2)
    b = random_kraus_channel(rng, 2)
    assert is_mixing(a) and is_mixing(b)
    cone = TensorCone(Psd(2), Psd(2))
    big = from_matrix(np.kron(a.matrix, b.matrix), cone)
    assert is_mixing(big)
    rep = classify(big)
    assert rep.mixing
    assert "positivity-unknown" in rep.hypothesis_flags


def test_power_interior_probe_classical():
    reached, n = power_interior_probe(chain4())
    assert reached and 1 <= n <= 10
    reached, n = power_interior_probe(swap_chain())
    assert not reached and n is None


def test_power_interior_probe_quantum():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    z = np.diag([1.0, -1.0]).astype(complex)
    dep = from_kraus([0.5 * np.eye(2), 0.5 * x, 0.5 * y, 0.5 * z])
    reached, n = power_interior_probe(dep)
    assert reached and n == 1
    ident = from_kraus([np.eye(2)])
    reached, n = power_interior_probe(ident)
    assert not reached


def test_stationary_pair_eigen_residuals():
    rng = np.random.default_rng(37)
    checked = 0
    for _ in range(30):
        a = random_stochastic_map(rng, int(rng.integers(2, 5)))
        if not is_ergodic(a):
            continue
        x0, y0 = stationary_pair(a)
        r = classify(a).r
        assert np.linalg.norm(a.matrix @ x0 - r * x0) <= 1e-8
        assert np.linalg.norm(a.matrix.T @ y0 - r * y0) <= 1e-8
        assert y0 @ x0 == pytest.approx(1.0, abs=1e-10)
        checked += 1
    assert checked >= 10


def test_custom_unit_dup_map():
    # adjoint fixes the unit [2, 1]: a weighted conservation law
    a = from_matrix([["1/2", "1/4"], [1, "1/2"]], Orthant(2), unit=[2, 1])
    from conemix import is_dup
    assert is_dup(a)
    rep = classify(a)
    assert rep.r == pytest.approx(1.0, abs=1e-10)
    assert rep.ergodic and rep.mixing
    assert rep.dup


def test_dense_random_chains_are_primitive():
    rng = np.random.default_rng(35)
    for _ in range(10):
        a = random_dense_stochastic(rng, int(rng.integers(2, 6)))
        rep = classify(a)
        assert rep.primitive and rep.mixing and rep.irreducible and rep.ergodic


def test_mixing_routes_all_present_for_exact_dup():
    routes = mixing_routes(chain4())
    assert set(routes) == {"kron-fixed-space-dim", "kron-geometric",
                           "spectral-gap"}
    assert all(r.value for r in routes.values())
