"""Feasibility search, its gradient, and the classification harness."""

from fractions import Fraction

import numpy as np
import pytest

from liemetric import (
    SearchConfig,
    abelian,
    affine_line,
    compat_objective,
    compatibility_residual,
    euclidean_motions,
    find_compatible_metric,
    heisenberg,
    predicted_existence,
    sol,
    solvable_family,
    verify_classification,
)
from liemetric.search import FamilyParams, param_count


def quick(mode="none", restarts=12, seed=0, iters=200):
    return SearchConfig(signature_constraint=mode, restarts=restarts,
                        max_iters=iters, rng_seed=seed)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(restarts=0)
    with pytest.raises(ValueError):
        SearchConfig(residual_tol=0.0)
    with pytest.raises(ValueError):
        SearchConfig(signature_constraint="diagonal")
    SearchConfig(signature_constraint=(2, 1))


def test_fixed_signature_must_fit_dimension():
    with pytest.raises(ValueError):
        find_compatible_metric(abelian(2), SearchConfig(signature_constraint=(2, 1)))


def test_abelian_found_immediately():
    for mode in ("none", "positive_definite"):
        res = find_compatible_metric(abelian(3), quick(mode, restarts=2))
        assert res.found and res.status == "found"
        assert res.best_residual == 0.0
        assert res.exact_certificate


def test_heisenberg_any_signature_finds_exact():
    res = find_compatible_metric(heisenberg(), quick())
    assert res.found and res.exact_certificate
    check = compatibility_residual(heisenberg(), res.best_metric)
    assert check.exact_zero is True


def test_heisenberg_positive_definite_fails():
    res = find_compatible_metric(heisenberg(), quick("positive_definite", restarts=30))
    assert res.status == "not_found"
    assert res.best_residual > 1e-3


def test_found_metric_respects_fixed_signature():
    res = find_compatible_metric(heisenberg(), quick((1, 2), restarts=30))
    if res.found:
        assert res.best_metric.signature() == (1, 2)


def test_affine_line_not_found_with_evidence():
    res = find_compatible_metric(affine_line(), quick(restarts=20))
    assert res.status == "not_found"
    assert res.best_residual > 0.9
    assert len(res.log) == 20
    assert res.config.rng_seed == 0


def test_determinism_bitwise():
    a = find_compatible_metric(sol(), quick(restarts=10, seed=7))
    b = find_compatible_metric(sol(), quick(restarts=10, seed=7))
    assert a.log == b.log
    assert a.best_residual == b.best_residual


def test_seed_changes_log():
    a = find_compatible_metric(affine_line(), quick(restarts=5, seed=1))
    b = find_compatible_metric(affine_line(), quick(restarts=5, seed=2))
    assert a.log != b.log


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    for alg in [heisenberg(), affine_line(), sol()]:
        n = alg.dim
        for mode in ("unconstrained", "positive_definite"):
            for _ in range(4):
                theta = rng.standard_normal(param_count(n)) * 0.6
                _, grad = compat_objective(alg, theta, mode=mode)
                eps = 1e-6
                for t in range(len(theta)):
                    up, down = theta.copy(), theta.copy()
                    up[t] += eps
                    down[t] -= eps
                    fu, _ = compat_objective(alg, up, mode=mode)
                    fd, _ = compat_objective(alg, down, mode=mode)
                    num = (fu - fd) / (2 * eps)
                    scale = max(1.0, abs(num), abs(grad[t]))
                    assert abs(num - grad[t]) / scale < 1e-5


def test_objective_zero_on_certificate():
    # encode the known flat certificate for the rotation-translation algebra
    n = 3
    theta = np.zeros(param_count(n))
    # identity in vech order
    from liemetric.search import _sym_positions
    for t, (i, j) in enumerate(_sym_positions(n)):
        theta[t] = 1.0 if i == j else 0.0
    val, _ = compat_objective(euclidean_motions(), theta)
    assert val < 1e-28


def test_predicted_existence_table():
    assert predicted_existence(FamilyParams(0, -1, 1), positive_definite=True)
    assert not predicted_existence(FamilyParams(0, 1, -1), positive_definite=True)
    assert not predicted_existence(FamilyParams(1, 0, 0), positive_definite=True)
    assert predicted_existence(FamilyParams(1, 0, 0), positive_definite=False)
    assert not predicted_existence(FamilyParams(0, 1, 0), positive_definite=False)


def test_family_params_helpers():
    p = FamilyParams(Fraction(1), Fraction(2), Fraction(-3))
    assert p.discriminant() == 1 - 6
    m = p.mirrored()
    assert m == FamilyParams(Fraction(-1), Fraction(-3), Fraction(2))
    assert m.discriminant() == p.discriminant()


def test_mirror_is_isomorphism():
    # swapping the last two basis vectors carries one presentation to the
    # mirrored one
    p = FamilyParams(Fraction(1, 2), Fraction(3), Fraction(-2))
    alg = solvable_family(*p)
    swap = [[Fraction(1), 0, 0], [0, 0, Fraction(1)], [0, Fraction(1), 0]]
    moved = alg.changed_basis(swap)
    mirrored = solvable_family(*p.mirrored())
    assert moved.c == mirrored.c


def test_gamma_beta_condition_is_presentation_bound():
    """The positive-definite criterion can fail verbatim yet hold after the
    swap isomorphism; search confirms the metric exists either way."""
    p = FamilyParams(0, 1, -1)
    assert not predicted_existence(p, positive_definite=True)
    assert predicted_existence(p.mirrored(), positive_definite=True)
    res = find_compatible_metric(solvable_family(*p),
                                 quick("positive_definite", restarts=12))
    assert res.found
    exact = compatibility_residual(solvable_family(*p), res.best_metric)
    assert exact.exact_zero is True or res.best_residual < 1e-11


def test_classification_smoke():
    rep = verify_classification(sample_count=6)
    assert rep.ok
    assert rep.hard_disagreements == 0
    names = {c.name for c in rep.cases}
    assert "heisenberg" in names and "abelian2" in names
    assert rep.tally("agree") >= 6


def test_classification_dim_filter():
    rep = verify_classification(sample_count=4, dims=(2,))
    assert {c.name for c in rep.cases} == {"abelian2", "affine_line"}
    assert rep.ok


def test_inadmissible_probes_logged_not_best():
    cfg = quick("positive_definite", restarts=20, iters=500)
    res = find_compatible_metric(heisenberg(), cfg)
    assert any(not rec.admissible for rec in res.log)
    for rec in res.log:
        if not rec.admissible:
            assert rec.residual == float("inf")
