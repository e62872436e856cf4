"""Dual-space Poisson calculus: bivector, brackets, derivative, modular flow.

The orientation of the whole module hangs on one sign: the pairing of the
bivector against two coordinate forms at mu equals mu applied to the bracket
of the matching basis vectors. Several tests below pin that choice and the
identities that forced it.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from liemetric import (
    Metric,
    abelian,
    affine_line,
    bivector_at,
    contravariant_derivative,
    cyclic_schouten_residual,
    dpi_residual,
    euclidean_motions,
    form_bracket,
    heisenberg,
    heisenberg_split_metric,
    kahler_check_at,
    leaf_frame_at,
    levi_civita_product,
    metric_derivation_residual,
    modular_field_value,
    sharp_pi,
    sol,
    sol_split_metric,
    solvable_family,
)
from liemetric.dual import (
    BIVECTOR_SIGN,
    DegenerateRestrictionError,
    IrregularPointError,
    LeafRankError,
    PolyOneForm,
    Polynomial,
    apply_field,
    form_pairing,
    lie_derivative_form,
    pi_pairing,
    sharp_form,
)
from conftest import random_algebra, random_metric


def coframe(n, exact=True):
    return [PolyOneForm.coordinate(n, k, exact) for k in range(n)]


# --- bivector and sharp -------------------------------------------------

def test_bivector_sign_convention():
    """pi(de1, de2) at mu = e3* equals mu([e1,e2]) = +1 on the nilpotent
    3D algebra. This single entry orients every other sign in the module."""
    assert BIVECTOR_SIGN == 1
    b = bivector_at(heisenberg(), (0, 0, 1))
    assert b.matrix[0][1] == 1
    assert b.matrix[1][0] == -1


def test_bivector_linear_in_point():
    b2 = bivector_at(heisenberg(), (0, 0, 2))
    assert b2.matrix[0][1] == 2


def test_bivector_rank_even():
    assert bivector_at(heisenberg(), (0, 0, 1)).rank() == 2
    assert bivector_at(heisenberg(), (1, 1, 0)).rank() == 0
    assert bivector_at(sol(), (0, 1, 1)).rank() == 2


def test_sharp_of_kernel_dies():
    # at mu = e3*, the center direction de3 is in the kernel
    v = sharp_pi(heisenberg(), (0, 0, 1), [0, 0, 1])
    assert list(v) == [0, 0, 0]


def test_sharp_matches_pairing(rng):
    alg = random_algebra(rng, 3)
    mu = [Fraction(int(x)) for x in rng.integers(-3, 4, size=3)]
    alpha = [Fraction(int(x)) for x in rng.integers(-3, 4, size=3)]
    beta = [Fraction(int(x)) for x in rng.integers(-3, 4, size=3)]
    b = bivector_at(alg, mu)
    v = sharp_pi(alg, mu, alpha)
    pairing = sum(a * b_ij * c for (a, row) in zip(alpha, b.matrix)
                  for (b_ij, c) in zip(row, beta))
    assert sum(x * y for x, y in zip(v, beta)) == pairing


# --- hamiltonian fields and the form bracket ----------------------------

def test_hamiltonian_field_is_coadjoint_direction():
    # field of the linear function e1 on the algebra with [e1,e2]=e2,
    # [e1,e3]=-e3: components mu2, -mu3
    field = sharp_form(sol(), PolyOneForm.coordinate(3, 0))
    assert str(field[1]) == "mu2"
    assert str(field[2]) == "-mu3"


def test_linear_function_bracket_matches_algebra():
    """[du, dv] on coordinate forms returns d[u,v]: the chosen sign makes
    the differential a Lie algebra homomorphism, not an antihomomorphism."""
    for alg in [heisenberg(), sol(), euclidean_motions(),
                solvable_family(Fraction(1, 2), 1, Fraction(-1, 3))]:
        n = alg.dim
        de = coframe(n)
        for i, j in itertools.combinations(range(n), 2):
            got = form_bracket(alg, de[i], de[j])
            want = alg.bracket(alg.basis(i), alg.basis(j))
            for k in range(n):
                assert got.coeffs[k] == Polynomial.constant(n, want[k])


def test_form_bracket_heisenberg_example():
    de = coframe(3)
    out = form_bracket(heisenberg(), de[0], de[1])
    assert [str(p) for p in out.coeffs] == ["0", "0", "1"]


def test_form_bracket_antisymmetry(rng):
    alg = random_algebra(rng, 3)
    de = coframe(3)
    a = form_bracket(alg, de[0], de[1])
    b = form_bracket(alg, de[1], de[0])
    assert all((x + y).is_zero() for x, y in zip(a.coeffs, b.coeffs))


def test_anchor_is_homomorphism(rng):
    """sharp of the form bracket equals the commutator of the sharps,
    checked coefficientwise on polynomial vector fields."""
    alg = random_algebra(rng, 3)
    de = coframe(3)
    for i, j in [(0, 1), (0, 2), (1, 2)]:
        lhs = sharp_form(alg, form_bracket(alg, de[i], de[j]))
        xi = sharp_form(alg, de[i])
        xj = sharp_form(alg, de[j])
        for k in range(3):
            commut = apply_field(xi, xj[k]) - apply_field(xj, xi[k])
            assert (lhs[k] - commut).is_zero()


def test_jacobi_for_linear_functions(rng):
    # {mu_i, {mu_j, mu_k}} summed cyclically dies; polynomial identity
    alg = random_algebra(rng, 3)

    def pb(p, q):
        grad_p = [p.diff(t) for t in range(3)]
        grad_q = [q.diff(t) for t in range(3)]
        b = [[Polynomial.constant(3, 0)] * 3 for _ in range(3)]
        total = Polynomial.zero(3)
        for i, j in itertools.product(range(3), repeat=2):
            coef = alg.bracket(alg.basis(i), alg.basis(j))
            lin = Polynomial.zero(3)
            for k in range(3):
                lin = lin + Polynomial.coordinate(3, k) * coef[k]
            total = total + grad_p[i] * grad_q[j] * lin
        return total

    mu = [Polynomial.coordinate(3, k) for k in range(3)]
    s = (pb(mu[0], pb(mu[1], mu[2])) + pb(mu[1], pb(mu[2], mu[0]))
         + pb(mu[2], pb(mu[0], mu[1])))
    assert s.is_zero()


def test_lie_derivative_leibniz_on_pairing(rng):
    alg = random_algebra(rng, 3)
    a = random_metric(rng, 3)
    de = coframe(3)
    x = sharp_form(alg, de[0])
    # L_X <b, g> = <L_X b, g> + <b, L_X g> for the constant fiber metric
    for i, j in itertools.product(range(3), repeat=2):
        lhs = apply_field(x, form_pairing(de[i], de[j], a))
        rhs = (form_pairing(lie_derivative_form(x, de[i]), de[j], a)
               + form_pairing(de[i], lie_derivative_form(x, de[j]), a))
        assert (lhs - rhs).is_zero()


# --- contravariant derivative -------------------------------------------

def test_derivative_on_constants_is_connection(rng):
    for _ in range(6):
        alg = random_algebra(rng, 3)
        a = random_metric(rng, 3)
        conn = levi_civita_product(alg, a)
        de = coframe(3)
        for i, j in itertools.product(range(3), repeat=2):
            d = contravariant_derivative(alg, a, de[i], de[j])
            want = conn.product(i, j)
            for k in range(3):
                assert d.coeffs[k] == Polynomial.constant(3, want[k])


def test_derivative_heisenberg_identity_example():
    d = contravariant_derivative(heisenberg(), Metric.identity(3),
                                 PolyOneForm.coordinate(3, 0),
                                 PolyOneForm.coordinate(3, 1))
    assert [str(p) for p in d.coeffs] == ["0", "0", "1/2"]


def test_derivative_torsion_free(rng):
    alg = random_algebra(rng, 3)
    a = random_metric(rng, 3)
    de = coframe(3)
    for i, j in itertools.combinations(range(3), 2):
        dij = contravariant_derivative(alg, a, de[i], de[j])
        dji = contravariant_derivative(alg, a, de[j], de[i])
        fb = form_bracket(alg, de[i], de[j])
        diff = (dij - dji) - fb
        assert all(p.is_zero() for p in diff.coeffs)


def test_derivative_leibniz_in_second_slot():
    alg = sol()
    a = sol_split_metric()
    de = coframe(3)
    f = Polynomial.coordinate(3, 1)  # the function mu2
    scaled = PolyOneForm(tuple(f * p for p in de[2].coeffs), True)
    lhs = contravariant_derivative(alg, a, de[0], scaled)
    base = contravariant_derivative(alg, a, de[0], de[2])
    x0 = sharp_form(alg, de[0])
    want = [f * base.coeffs[k] + apply_field(x0, f) * de[2].coeffs[k]
            for k in range(3)]
    for k in range(3):
        assert (lhs.coeffs[k] - want[k]).is_zero()


# --- the three residual channels ----------------------------------------

CATALOG = [abelian(2), abelian(3), affine_line(), heisenberg(),
           euclidean_motions(), sol()]


def test_dual_compatibility_matches_primal(rng):
    pairs = [(heisenberg(), heisenberg_split_metric()),
             (heisenberg(), Metric.identity(3)),
             (sol(), sol_split_metric()),
             (sol(), Metric.identity(3)),
             (euclidean_motions(), Metric.identity(3)),
             (affine_line(), random_metric(rng, 2))]
    from liemetric import compatibility_residual
    for alg, a in pairs:
        primal_zero = compatibility_residual(alg, a).exact_zero
        dual_zero = dpi_residual(alg, a) == 0
        assert primal_zero == dual_zero


def test_universal_identities_zero_everywhere(rng):
    """Jacobi-cyclic and metric-transport channels vanish for every metric,
    compatible or not: they certify the calculus, not the pair."""
    for alg in CATALOG:
        for _ in range(3):
            a = random_metric(rng, alg.dim)
            assert cyclic_schouten_residual(alg, a) == 0
            assert metric_derivation_residual(alg, a) == 0


def test_residuals_at_points(rng):
    alg = sol()
    a = Metric.identity(3)
    pts = rng.standard_normal((5, 3)).tolist()
    assert dpi_residual(alg, a, pts) > 0
    assert cyclic_schouten_residual(alg, a, pts) == 0
    assert metric_derivation_residual(alg, a, pts) == 0


# --- casimirs -----------------------------------------------------------

def test_center_gives_casimir(rng):
    """Linear functions from center elements have vanishing hamiltonian
    field, identically in mu."""
    alg = heisenberg()
    for v in alg.center():
        form = PolyOneForm.from_linear(v, True)
        field = sharp_form(alg, form)
        assert all(p.is_zero() for p in field)


def test_casimir_derivative_vanishes_against_it(rng):
    # D_alpha applied to a casimir direction keeps <casimir, casimir>
    # constant: directly check D_de_i (dz) pairs to zero against dz
    alg = heisenberg()
    a = heisenberg_split_metric()
    z = PolyOneForm.from_linear(alg.center()[0], True)
    de = coframe(3)
    for i in range(3):
        d = contravariant_derivative(alg, a, de[i], z)
        val = form_pairing(d, z, a)
        lhs = apply_field(sharp_form(alg, de[i]), form_pairing(z, z, a))
        # metric transport: X.<z,z> = 2<D_X z, z>
        assert (lhs - (val + val)).is_zero()


# --- modular field ------------------------------------------------------

def test_modular_equals_negative_adjoint_trace(rng):
    for alg in CATALOG:
        n = alg.dim
        a = random_metric(rng, n)
        for k in range(n):
            f = [1 if t == k else 0 for t in range(n)]
            got = modular_field_value(alg, a, f)
            tr = sum(alg.adjoint_matrix(f)[i][i] for i in range(n))
            assert math.isclose(got, -float(tr), abs_tol=1e-9)


def test_modular_unimodular_vanishes(rng):
    a = random_metric(rng, 3)
    for _ in range(5):
        f = rng.standard_normal(3).tolist()
        mu = rng.standard_normal(3).tolist()
        assert abs(modular_field_value(heisenberg(), a, f, mu)) < 1e-12


def test_modular_counter_control():
    got = modular_field_value(affine_line(), Metric.identity(2), [1, 0])
    assert got == pytest.approx(-1.0, abs=1e-12)


def test_modular_metric_independent(rng):
    # same value for wildly different metrics
    f = [Fraction(2), Fraction(-1)]
    vals = {round(modular_field_value(affine_line(), random_metric(rng, 2), f), 9)
            for _ in range(6)}
    assert vals == {-2.0}


# --- leaves and the pointwise complex structure -------------------------

def test_leaf_frame_splits_dimensions():
    frame = leaf_frame_at(heisenberg(), Metric.identity(3), (0, 0, 1))
    assert frame.rank == 2
    assert len(frame.kernel_basis) == 1
    assert len(frame.tangent_basis) == 2


def test_leaf_frame_kernel_is_center_direction():
    frame = leaf_frame_at(heisenberg(), Metric.identity(3), (0, 0, 1))
    k = frame.kernel_basis[0]
    assert k[0] == 0 and k[1] == 0 and k[2] != 0


def test_leaf_frame_degenerate_restriction_raises():
    # kernel at mu=e3* is the e3 direction, and the antidiagonal form
    # pairs e3 to zero against itself
    alg = euclidean_motions()
    bad = Metric.from_rows([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    with pytest.raises(DegenerateRestrictionError):
        leaf_frame_at(alg, bad, (0, 0, 1))


def test_kahler_check_identity_metric():
    out = kahler_check_at(heisenberg(), Metric.identity(3), (0.2, -0.4, 1.0))
    assert out.rank == 2
    assert out.j_squared_residual < 1e-12
    assert out.metric_residual < 1e-12
    j = np.asarray(out.j)
    assert np.linalg.norm(j @ j + np.eye(2)) < 1e-10


def test_kahler_rejects_indefinite_metric():
    with pytest.raises(ValueError):
        kahler_check_at(heisenberg(), heisenberg_split_metric(), (0, 0, 1.0))


def test_kahler_rejects_rank_zero_point():
    with pytest.raises(LeafRankError):
        kahler_check_at(heisenberg(), Metric.identity(3), (1.0, 1.0, 0.0))


def test_kahler_irregular_point_detected():
    # two independent blocks: generic rank 4, but rank 2 where the second
    # block's coordinate nearly vanishes; nearby probes see the jump
    from liemetric import LieAlgebra
    two_lines = LieAlgebra.from_brackets(
        4, {(0, 1): [0, 1, 0, 0], (2, 3): [0, 0, 0, 1]})
    with pytest.raises(IrregularPointError):
        kahler_check_at(two_lines, Metric.identity(4), (0.0, 1.0, 0.0, 1e-12))


def test_kahler_on_found_riemannian_pair():
    from liemetric import SearchConfig, find_compatible_metric
    cfg = SearchConfig(signature_constraint="positive_definite", restarts=8,
                       max_iters=200, rng_seed=1)
    res = find_compatible_metric(euclidean_motions(), cfg)
    assert res.found
    rng = np.random.default_rng(11)
    for _ in range(5):
        mu = rng.standard_normal(3)
        mu[0] += 2.0  # keep away from the degenerate axis
        try:
            out = kahler_check_at(euclidean_motions(), res.best_metric, tuple(mu))
        except (LeafRankError, IrregularPointError):
            continue
        assert out.j_squared_residual < 1e-10
        assert out.metric_residual < 1e-10
