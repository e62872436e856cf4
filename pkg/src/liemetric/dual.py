"""Linear Poisson geometry on the dual space of a Lie algebra.

Coordinates mu_1 .. mu_n on the dual pair with the basis e_1 .. e_n. The
Poisson bivector is linear in mu:

    pi(de_i, de_j)(mu) = BIVECTOR_SIGN * mu([e_i, e_j])

and every other object here (sharp map, form bracket, contravariant
derivative, modular value, leaf data) is derived from that single convention.
Differential forms carry polynomial coefficients so identities can be checked
coefficient by coefficient in exact mode instead of only at sampled points.

Constant one-forms pair through the metric a: <de_i, de_j> = a[i][j]. The
contravariant derivative D solves the six-term Koszul relation

    2<D_ab, g> = #pi(a).<b,g> + #pi(b).<a,g> - #pi(g).<a,b>
                 + <[a,b], g> + <[g,a], b> + <[g,b], a>

against the constant coordinate coframe, which reduces to one constant linear
system per coefficient. Points of the dual are plain length-n sequences.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rational
from .algebra import DimensionMismatchError, LieAlgebra
from .metric import Metric
from .poly import Polynomial
from .scalars import is_exact

# The one sign switch: +1 means pi(de_i, de_j)(mu) = mu([e_i, e_j]), which
# makes [du, dv] = d[u, v] and D_du dv = d(A_u v) hold with no extra signs.
BIVECTOR_SIGN = 1

DEFAULT_MAX_DEGREE = 3
SHARP_RANK_RTOL = 1e-9
PROBE_RADIUS = 1e-4
PROBE_COUNT = 8
EIG_POSITIVITY_TOL = 1e-12


class DegreeOverflowError(ValueError):
    """An operation produced a polynomial form beyond the degree cap."""


class DegenerateRestrictionError(ValueError):
    """The metric restricted to the kernel of the sharp map is degenerate."""


class LeafRankError(ValueError):
    """The bivector rank at the point is too small for the requested data."""


class IrregularPointError(ValueError):
    """Nearby points show a different bivector rank."""


@dataclass(frozen=True)
class PolyOneForm:
    """One-form sum_k coeffs[k] de_k with polynomial coefficients."""

    coeffs: tuple
    exact: bool = True

    def __post_init__(self):
        n = len(self.coeffs)
        for p in self.coeffs:
            if not isinstance(p, Polynomial):
                raise TypeError("coefficients must be Polynomial instances")
            if p.nvars != n:
                raise ValueError("coefficient variable count must equal the dimension")
            if p.exact != self.exact:
                raise ValueError("coefficient scalar mode mismatch")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def zero(cls, n: int, exact: bool = True):
        return cls(tuple(Polynomial.zero(n, exact) for _ in range(n)), exact)

    @classmethod
    def coordinate(cls, n: int, k: int, exact: bool = True):
        """The constant coframe element de_k (0-based k)."""
        coeffs = [Polynomial.zero(n, exact) for _ in range(n)]
        coeffs[k] = Polynomial.constant(n, 1, exact)
        return cls(tuple(coeffs), exact)

    @classmethod
    def from_linear(cls, u, exact: bool | None = None):
        """du for the linear function u = sum_k u[k] e_k; a constant form."""
        if exact is None:
            exact = all(is_exact(x) for x in u)
        n = len(u)
        return cls(tuple(Polynomial.constant(n, x, exact) for x in u), exact)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "PolyOneForm"):
        return PolyOneForm(tuple(p + q for p, q in zip(self.coeffs, other.coeffs)),
                           self.exact)

    def __sub__(self, other: "PolyOneForm"):
        return PolyOneForm(tuple(p - q for p, q in zip(self.coeffs, other.coeffs)),
                           self.exact)

    def __neg__(self):
        return PolyOneForm(tuple(-p for p in self.coeffs), self.exact)

    def scale(self, c):
        return PolyOneForm(tuple(p * c for p in self.coeffs), self.exact)

    def degree(self) -> int:
        return max(p.degree() for p in self.coeffs)

    def eval_at(self, mu) -> list:
        return [p.eval(list(mu)) for p in self.coeffs]

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(p.is_zero(tol) for p in self.coeffs)

    def max_coeff(self) -> float:
        return max(p.max_coeff() for p in self.coeffs)

    def to_float(self) -> "PolyOneForm":
        if not self.exact:
            return self
        return PolyOneForm(tuple(p.to_float() for p in self.coeffs), exact=False)


@dataclass(frozen=True, eq=False)
class BivectorAt:
    """Value of the Poisson bivector at one point; antisymmetric by build."""

    matrix: tuple
    exact: bool

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix])

    def rank(self, rtol: float = SHARP_RANK_RTOL) -> int:
        if self.exact:
            _, pivots = rational.rref([list(row) for row in self.matrix])
            return len(pivots)
        return _float_rank(self.as_array(), rtol)


@dataclass(frozen=True, eq=False)
class LeafFrame:
    """Pointwise splitting of covectors into sharp-kernel and its complement.

    All three bases are rows of coordinate tuples; tangent_basis[s] is the
    image of complement_basis[s] under the sharp map.
    """

    kernel_basis: tuple
    complement_basis: tuple
    tangent_basis: tuple
    rank: int
    exact: bool


@dataclass(frozen=True, eq=False)
class LeafGeometryAt:
    """Leaf symplectic form, induced metric, and almost complex structure.

    Matrices are in the tangent frame of the accompanying LeafFrame. The two
    residuals measure ||J^2 + I|| and ||J^T G J - G|| (largest entry).
    """

    omega: np.ndarray
    g: np.ndarray
    a_op: np.ndarray
    j: np.ndarray
    rank: int
    j_squared_residual: float
    metric_residual: float
    frame: LeafFrame


def _float_rank(m: np.ndarray, rtol: float) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def _exact_point(mu) -> bool:
    return all(is_exact(x) for x in mu)


def _check_dim(alg: LieAlgebra, mu):
    if len(mu) != alg.dim:
        raise DimensionMismatchError("point has wrong number of coordinates")


def _harmonize(alg: LieAlgebra, a: Metric | None, forms):
    """Put the algebra, metric, and forms in one scalar mode."""
    exact = alg.exact and (a is None or a.exact) and all(f.exact for f in forms)
    if not exact:
        alg = alg.to_float()
        a = a.to_float() if a is not None else None
        forms = [f.to_float() for f in forms]
    for f in forms:
        if f.dim != alg.dim:
            raise DimensionMismatchError("form dimension does not match the algebra")
    return exact, alg, a, list(forms)


def _pi_polys(alg: LieAlgebra) -> list:
    """Matrix of polynomials pi[i][j](mu), linear in mu."""
    n = alg.dim
    exact = alg.exact
    out = [[Polynomial.zero(n, exact) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            terms = {}
            for k in range(n):
                coef = alg.c[i][j][k]
                if coef != 0:
                    expo = tuple(1 if t == k else 0 for t in range(n))
                    terms[expo] = BIVECTOR_SIGN * coef
            if terms:
                out[i][j] = Polynomial(n, terms, exact)
    return out


def bivector_at(alg: LieAlgebra, mu) -> BivectorAt:
    """Antisymmetric matrix pi[i][j] = mu([e_i, e_j]) times the sign switch."""
    _check_dim(alg, mu)
    exact = alg.exact and _exact_point(mu)
    if exact:
        mu = [Fraction(x) for x in mu]
        zero = Fraction(0)
        c = alg.c
    else:
        mu = [float(x) for x in mu]
        zero = 0.0
        c = alg.to_float().c
    n = alg.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(BIVECTOR_SIGN * sum((c[i][j][k] * mu[k] for k in range(n)), zero))
        rows.append(tuple(row))
    return BivectorAt(matrix=tuple(rows), exact=exact)


def sharp_pi(alg: LieAlgebra, mu, alpha) -> list:
    """Vector v with beta(v) = pi(alpha, beta) for every covector beta."""
    _check_dim(alg, mu)
    if len(alpha) != alg.dim:
        raise DimensionMismatchError("covector has wrong length")
    p = bivector_at(alg, mu)
    exact = p.exact and all(is_exact(x) for x in alpha)
    if exact:
        alpha = [Fraction(x) for x in alpha]
        zero = Fraction(0)
        mat = p.matrix
    else:
        alpha = [float(x) for x in alpha]
        zero = 0.0
        mat = tuple(tuple(float(x) for x in row) for row in p.matrix)
    n = alg.dim
    return [sum((alpha[i] * mat[i][j] for i in range(n)), zero) for j in range(n)]


def sharp_form(alg: LieAlgebra, alpha: PolyOneForm) -> tuple:
    """Polynomial vector field components of the sharp image of a form."""
    exact, alg, _, (alpha,) = _harmonize(alg, None, [alpha])
    n = alg.dim
    pi = _pi_polys(alg)
    comps = []
    for m in range(n):
        total = Polynomial.zero(n, exact)
        for i in range(n):
            if alpha.coeffs[i].is_zero() or pi[i][m].is_zero():
                continue
            total = total + alpha.coeffs[i] * pi[i][m]
        comps.append(total)
    return tuple(comps)


def pi_pairing(alg: LieAlgebra, alpha: PolyOneForm, beta: PolyOneForm) -> Polynomial:
    """The polynomial pi(alpha, beta)."""
    exact, alg, _, (alpha, beta) = _harmonize(alg, None, [alpha, beta])
    n = alg.dim
    pi = _pi_polys(alg)
    total = Polynomial.zero(n, exact)
    for i in range(n):
        if alpha.coeffs[i].is_zero():
            continue
        for j in range(n):
            if beta.coeffs[j].is_zero() or pi[i][j].is_zero():
                continue
            total = total + alpha.coeffs[i] * beta.coeffs[j] * pi[i][j]
    return total


def form_pairing(alpha: PolyOneForm, beta: PolyOneForm, a: Metric) -> Polynomial:
    """The polynomial <alpha, beta> under the constant fiber metric."""
    exact = alpha.exact and beta.exact and a.exact
    if not exact:
        alpha, beta, a = alpha.to_float(), beta.to_float(), a.to_float()
    n = alpha.dim
    total = Polynomial.zero(n, exact)
    for i in range(n):
        if alpha.coeffs[i].is_zero():
            continue
        for j in range(n):
            if a.matrix[i][j] == 0 or beta.coeffs[j].is_zero():
                continue
            total = total + alpha.coeffs[i] * beta.coeffs[j] * a.matrix[i][j]
    return total


def apply_field(field, p: Polynomial) -> Polynomial:
    """Directional derivative of a polynomial along a polynomial vector field."""
    total = Polynomial.zero(p.nvars, p.exact)
    for m, comp in enumerate(field):
        if comp.is_zero():
            continue
        dm = p.diff(m)
        if not dm.is_zero():
            total = total + comp * dm
    return total


def lie_derivative_form(field, beta: PolyOneForm) -> PolyOneForm:
    """Lie derivative of a one-form along a polynomial vector field.

    Component k is sum_i X^i d_i(b_k) + sum_j b_j d_k(X^j).
    """
    n = beta.dim
    coeffs = []
    for k in range(n):
        term = apply_field(field, beta.coeffs[k])
        for j in range(n):
            if beta.coeffs[j].is_zero():
                continue
            dk = field[j].diff(k)
            if not dk.is_zero():
                term = term + beta.coeffs[j] * dk
        coeffs.append(term)
    return PolyOneForm(tuple(coeffs), beta.exact)


def differential(p: Polynomial) -> PolyOneForm:
    return PolyOneForm(tuple(p.diff(k) for k in range(p.nvars)), p.exact)


def _degree_guard(form: PolyOneForm, max_degree: int, what: str) -> PolyOneForm:
    if form.degree() > max_degree:
        raise DegreeOverflowError(
            f"{what} has degree {form.degree()}, above the cap {max_degree}")
    return form


def form_bracket(alg: LieAlgebra, alpha: PolyOneForm, beta: PolyOneForm,
                 max_degree: int = DEFAULT_MAX_DEGREE) -> PolyOneForm:
    """Bracket of one-forms induced by the bivector.

    L along sharp(alpha) of beta, minus the mirror term, minus
    d(pi(alpha, beta)). On differentials of linear functions u, v the result
    is the differential of the linear function [u, v].
    """
    exact, alg, _, (alpha, beta) = _harmonize(alg, None, [alpha, beta])
    xa = sharp_form(alg, alpha)
    xb = sharp_form(alg, beta)
    out = (lie_derivative_form(xa, beta) - lie_derivative_form(xb, alpha)
           - differential(pi_pairing(alg, alpha, beta)))
    return _degree_guard(out, max_degree, "form bracket")


def contravariant_derivative(alg: LieAlgebra, a: Metric, alpha: PolyOneForm,
                             beta: PolyOneForm,
                             max_degree: int = DEFAULT_MAX_DEGREE) -> PolyOneForm:
    """The derivative D_alpha beta from the six-term Koszul relation.

    Pairs the relation against each constant coframe element de_k, then
    solves the constant fiber-metric system coefficientwise. On constant
    forms du, dv the output is the constant form of the product A_u v.
    """
    exact, alg, a, (alpha, beta) = _harmonize(alg, a, [alpha, beta])
    if alg.dim != a.dim:
        raise DimensionMismatchError("metric dimension does not match the algebra")
    a.require_nondegenerate()
    n = alg.dim
    xa = sharp_form(alg, alpha)
    xb = sharp_form(alg, beta)
    ab = form_pairing(alpha, beta, a)
    bracket_ab = form_bracket(alg, alpha, beta, max_degree=max_degree)
    half = Fraction(1, 2) if exact else 0.5
    rhs = []
    for k in range(n):
        dek = PolyOneForm.coordinate(n, k, exact)
        xk = sharp_form(alg, dek)
        term = apply_field(xa, form_pairing(beta, dek, a))
        term = term + apply_field(xb, form_pairing(alpha, dek, a))
        term = term - apply_field(xk, ab)
        term = term + form_pairing(form_bracket(alg, dek, alpha, max_degree), beta, a)
        term = term + form_pairing(form_bracket(alg, dek, beta, max_degree), alpha, a)
        term = term + form_pairing(bracket_ab, dek, a)
        rhs.append(term)
    ainv = a.inverse_rows()
    coeffs = []
    for j in range(n):
        h = Polynomial.zero(n, exact)
        for k in range(n):
            if ainv[j][k] == 0 or rhs[k].is_zero():
                continue
            h = h + rhs[k] * ainv[j][k]
        coeffs.append(h * half)
    out = PolyOneForm(tuple(coeffs), exact)
    return _degree_guard(out, max_degree, "contravariant derivative")


def _coframe(n: int, exact: bool) -> list:
    return [PolyOneForm.coordinate(n, k, exact) for k in range(n)]


def _basis_derivatives(alg: LieAlgebra, a: Metric, exact: bool) -> list:
    """D_{de_i} de_k for all pairs, as a nested list [i][k]."""
    n = alg.dim
    de = _coframe(n, exact)
    return [[contravariant_derivative(alg, a, de[i], de[k]) for k in range(n)]
            for i in range(n)]


def _poly_sweep(polys, points) -> float:
    """Max coefficient magnitude, or max absolute value over sample points."""
    worst = 0.0
    if points is None:
        for p in polys:
            worst = max(worst, p.max_coeff())
        return worst
    for pt in points:
        pt = [float(x) for x in pt]
        for p in polys:
            v = abs(float(p.to_float().eval(pt)))
            worst = max(worst, v)
    return worst


def dpi_residual(alg: LieAlgebra, a: Metric, points=None) -> float:
    """Worst violation of pi(D_a df, b) + pi(a, D_b df) = 0 on basis data.

    With alpha = de_i, beta = de_j, f the linear function of e_k, the defect
    is a polynomial in mu. With points=None the max coefficient magnitude is
    returned, which vanishes iff the defect vanishes at every point;
    otherwise the defect is evaluated at the given points.
    """
    exact = alg.exact and a.exact
    if not exact:
        alg, a = alg.to_float(), a.to_float()
    n = alg.dim
    de = _coframe(n, exact)
    deriv = _basis_derivatives(alg, a, exact)
    defects = []
    for i, j, k in itertools.product(range(n), repeat=3):
        defects.append(pi_pairing(alg, deriv[i][k], de[j])
                       + pi_pairing(alg, de[i], deriv[j][k]))
    return _poly_sweep(defects, points)


def cyclic_schouten_residual(alg: LieAlgebra, a: Metric, points=None) -> float:
    """Cyclic sum of the derivative of pi; zero for every metric.

    Dpi(a, b, g) = sharp(a).pi(b, g) - pi(D_a b, g) - pi(b, D_a g), summed
    cyclically over basis coframe triples. The bivector satisfies the Jacobi
    identity, so the sum must vanish no matter the metric.
    """
    exact = alg.exact and a.exact
    if not exact:
        alg, a = alg.to_float(), a.to_float()
    n = alg.dim
    de = _coframe(n, exact)
    deriv = _basis_derivatives(alg, a, exact)
    sharp = [sharp_form(alg, de[i]) for i in range(n)]

    def dpi(i, j, k):
        lead = apply_field(sharp[i], pi_pairing(alg, de[j], de[k]))
        return (lead - pi_pairing(alg, deriv[i][j], de[k])
                - pi_pairing(alg, de[j], deriv[i][k]))

    sums = []
    for i, j, k in itertools.combinations(range(n), 3):
        sums.append(dpi(i, j, k) + dpi(j, k, i) + dpi(k, i, j))
    for i, j in itertools.product(range(n), repeat=2):
        # repeated-index triples, which the antisymmetry does not silence
        sums.append(dpi(i, i, j) + dpi(i, j, i) + dpi(j, i, i))
    return _poly_sweep(sums, points)


def metric_derivation_residual(alg: LieAlgebra, a: Metric, points=None) -> float:
    """Discrepancy between the two sides of the fiber-metric transport law.

    Left side: Lie derivative of the fiber metric along the hamiltonian field
    of a linear function, expanded directly. Right side: <D_a df, b> +
    <a, D_b df> through the Koszul solve. Equal for every metric.
    """
    exact = alg.exact and a.exact
    if not exact:
        alg, a = alg.to_float(), a.to_float()
    n = alg.dim
    de = _coframe(n, exact)
    deriv = _basis_derivatives(alg, a, exact)
    diffs = []
    for k in range(n):
        field = sharp_form(alg, de[k])
        lie = [lie_derivative_form(field, de[i]) for i in range(n)]
        for i, j in itertools.product(range(n), repeat=2):
            left = (apply_field(field, form_pairing(de[i], de[j], a))
                    - form_pairing(lie[i], de[j], a)
                    - form_pairing(de[i], lie[j], a))
            right = (form_pairing(deriv[i][k], de[j], a)
                     + form_pairing(de[i], deriv[j][k], a))
            diffs.append(left - right)
    return _poly_sweep(diffs, points)


def modular_field_value(alg: LieAlgebra, a: Metric, f, mu=None) -> float:
    """Value of the modular field on the linear function f = sum f[k] e_k.

    Equals the orthonormal-coframe sum of <D_coframe df, coframe> rewritten
    through the inverse metric, which also covers indefinite metrics (the
    signed pseudo-orthonormal sum collapses to the same expression).
    """
    if len(f) != alg.dim:
        raise DimensionMismatchError("linear function has wrong length")
    exact = alg.exact and a.exact and all(is_exact(x) for x in f)
    if not exact:
        alg, a = alg.to_float(), a.to_float()
        f = [float(x) for x in f]
    n = alg.dim
    a.require_nondegenerate()
    du = PolyOneForm.from_linear(f, exact)
    de = _coframe(n, exact)
    ainv = a.inverse_rows()
    if mu is None:
        mu = [Fraction(0) if exact else 0.0] * n
    mu = list(mu)
    total = Fraction(0) if exact else 0.0
    for p in range(n):
        dp = contravariant_derivative(alg, a, de[p], du)
        for q in range(n):
            if ainv[p][q] == 0:
                continue
            val = form_pairing(dp, de[q], a).eval([x if exact else float(x) for x in mu])
            total += ainv[p][q] * val
    return float(total)


def _standard_basis(n: int, exact: bool) -> list:
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def leaf_frame_at(alg: LieAlgebra, a: Metric, mu,
                  rtol: float = SHARP_RANK_RTOL) -> LeafFrame:
    """Split covectors at mu into the sharp kernel and its metric complement.

    Requires the metric restricted to the kernel to be nondegenerate; the
    error reports the kernel Gram determinant when it is not. The tangent
    basis collects the sharp images of the complement basis.
    """
    _check_dim(alg, mu)
    if alg.dim != a.dim:
        raise DimensionMismatchError("metric dimension does not match the algebra")
    p = bivector_at(alg, mu)
    exact = p.exact and a.exact
    n = alg.dim
    if exact:
        mat = [list(row) for row in p.matrix]
        kernel = rational.nullspace(mat)
        if kernel:
            gram = [[a.apply(u, v) for v in kernel] for u in kernel]
            gdet = rational.det(gram)
            if gdet == 0:
                raise DegenerateRestrictionError(
                    f"metric degenerates on the sharp kernel (Gram determinant {gdet})")
            rows = [[sum(u[i] * a.matrix[i][j] for i in range(n)) for j in range(n)]
                    for u in kernel]
            complement = rational.nullspace(rows)
        else:
            complement = _standard_basis(n, True)
        tangents = [[sum(cv[i] * p.matrix[i][j] for i in range(n)) for j in range(n)]
                    for cv in complement]
        rank = n - len(kernel)
    else:
        parr = p.as_array()
        aarr = a.as_array()
        _, s, vt = np.linalg.svd(parr)
        rank = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
        kernel = [vt[r] for r in range(rank, n)]
        if kernel:
            karr = np.array(kernel)
            gram = karr @ aarr @ karr.T
            ev = np.linalg.eigvalsh(gram)
            scale = max(np.max(np.abs(ev)), 1e-300)
            if np.min(np.abs(ev)) <= rtol * scale:
                raise DegenerateRestrictionError(
                    "metric degenerates on the sharp kernel "
                    f"(Gram determinant {float(np.linalg.det(gram)):.3e})")
            _, s2, vt2 = np.linalg.svd(karr @ aarr)
            complement = [vt2[r] for r in range(len(kernel), n)]
        else:
            complement = [row for row in np.eye(n)]
        tangents = [np.asarray(cv) @ parr for cv in complement]
        kernel = [tuple(float(x) for x in v) for v in kernel]
        complement = [tuple(float(x) for x in v) for v in complement]
        tangents = [tuple(float(x) for x in v) for v in tangents]
    return LeafFrame(kernel_basis=tuple(tuple(v) for v in kernel),
                     complement_basis=tuple(tuple(v) for v in complement),
                     tangent_basis=tuple(tuple(v) for v in tangents),
                     rank=rank, exact=exact)


def kahler_check_at(alg: LieAlgebra, a: Metric, mu, *,
                    probe_seed: int = 0, probe_radius: float = PROBE_RADIUS,
                    probe_count: int = PROBE_COUNT,
                    rtol: float = SHARP_RANK_RTOL,
                    eig_tol: float = EIG_POSITIVITY_TOL) -> LeafGeometryAt:
    """Leaf symplectic form, induced metric, and complex structure at a point.

    Needs a positive definite metric and a regular point of rank at least 2;
    regularity is probed by re-sampling the rank at nearby points. J is built
    as A(-A^2)^(-1/2) with the square root taken in the leaf metric's inner
    product via a Cholesky change of frame.
    """
    if not a.is_positive_definite():
        raise ValueError("leaf geometry needs a positive definite metric")
    _check_dim(alg, mu)
    algf = alg.to_float()
    muf = np.array([float(x) for x in mu])
    n = alg.dim

    def rank_at(point) -> int:
        return bivector_at(algf, list(point)).rank(rtol)

    rank = rank_at(muf)
    if rank < 2:
        raise LeafRankError(f"bivector rank {rank} at the point; need at least 2")
    rng = np.random.default_rng(probe_seed)
    for _ in range(probe_count):
        step = rng.standard_normal(n)
        step *= probe_radius / np.linalg.norm(step)
        if rank_at(muf + step) != rank:
            raise IrregularPointError(
                "bivector rank is not locally constant at this point")
    frame = leaf_frame_at(algf, a.to_float(), list(muf), rtol)
    parr = bivector_at(algf, list(muf)).as_array()
    aarr = a.as_array()
    c = np.array(frame.complement_basis)
    omega = c @ parr @ c.T
    omega = (omega - omega.T) / 2.0
    g = c @ aarr @ c.T
    g = (g + g.T) / 2.0
    a_op = -np.linalg.solve(g, omega)
    ell = np.linalg.cholesky(g)
    inv_lt = np.linalg.solve(ell.T, np.eye(rank))
    b = ell.T @ a_op @ inv_lt
    b = (b - b.T) / 2.0
    s = b.T @ b
    s = (s + s.T) / 2.0
    w, v = np.linalg.eigh(s)
    if w[-1] <= 0.0 or w[0] <= eig_tol * w[-1]:
        raise LeafRankError("leaf pairing is numerically degenerate")
    inv_sqrt = (v * (w ** -0.5)) @ v.T
    j_b = b @ inv_sqrt
    j = np.linalg.solve(ell.T, j_b @ ell.T)
    j_sq = float(np.max(np.abs(j @ j + np.eye(rank))))
    met = float(np.max(np.abs(j.T @ g @ j - g)))
    return LeafGeometryAt(omega=omega, g=g, a_op=a_op, j=j, rank=rank,
                          j_squared_residual=j_sq, metric_residual=met,
                          frame=frame)
