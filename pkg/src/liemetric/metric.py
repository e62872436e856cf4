"""Metrics on a Lie algebra and the compatibility test that pairs them.

A metric is a nondegenerate symmetric bilinear form ``a``. Together with the
bracket it determines a bilinear product ``A`` through

    2 a(A_u v, w) = a([u,v], w) + a([w,u], v) + a([w,v], u)

which is the unique product that is torsion-free (A_u v - A_v u = [u,v]) and
acts by a-skew maps (a(A_u v, w) + a(v, A_u w) = 0). The pair (algebra,
metric) is called compatible when [A_u v, w] + [u, A_w v] = 0 for all basis
triples; ``compatibility_residual`` measures the worst violation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import rational
from .algebra import DimensionMismatchError, LieAlgebra
from .scalars import DEFAULT_TOL, coerce, is_exact

DEGENERACY_RTOL = 1e-9


class DegenerateMetricError(ValueError):
    pass


class Signature(NamedTuple):
    """Counts of positive and negative eigenvalues; p + q = n when valid."""

    p: int
    q: int


@dataclass(frozen=True)
class Metric:
    """Symmetric nondegenerate bilinear form, exact or float entries."""

    matrix: tuple
    exact: bool

    @classmethod
    def from_rows(cls, rows, *, exact: bool | None = None, tol: float = DEFAULT_TOL):
        if exact is None:
            exact = all(is_exact(x) or isinstance(x, str)
                        for row in rows for x in row)
        data = [[coerce(x, exact) for x in row] for row in rows]
        n = len(data)
        if any(len(row) != n for row in data):
            raise DimensionMismatchError("metric matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                d = data[i][j] - data[j][i]
                if (d != 0) if exact else (abs(d) > tol):
                    raise ValueError(f"metric is not symmetric at ({i}, {j})")
        return cls(matrix=tuple(tuple(row) for row in data), exact=exact)

    @classmethod
    def identity(cls, n: int, *, exact: bool = True):
        rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(rows, exact=exact)

    @classmethod
    def diagonal(cls, entries, *, exact: bool | None = None):
        n = len(entries)
        rows = [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(rows, exact=exact)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def rows(self) -> list:
        return [list(row) for row in self.matrix]

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix])

    def det(self):
        if self.exact:
            return rational.det(self.rows())
        return float(np.linalg.det(self.as_array()))

    def apply(self, u: Sequence, v: Sequence):
        """The value a(u, v)."""
        zero = Fraction(0) if self.exact else 0.0
        return sum((u[i] * self.matrix[i][j] * v[j]
                    for i in range(self.dim) for j in range(self.dim)), zero)

    def is_nondegenerate(self, rtol: float = DEGENERACY_RTOL) -> bool:
        if self.exact:
            return self.det() != 0
        s = np.linalg.svd(self.as_array(), compute_uv=False)
        return bool(s[-1] > rtol * max(s[0], 1e-300))

    def require_nondegenerate(self, rtol: float = DEGENERACY_RTOL):
        if not self.is_nondegenerate(rtol):
            raise DegenerateMetricError("metric is degenerate or numerically near-degenerate")

    def signature(self, rtol: float = DEGENERACY_RTOL) -> Signature:
        """Sylvester inertia; raises on a zero eigenvalue (degenerate form)."""
        if self.exact:
            p, q, z = rational.inertia(self.rows())
            if z:
                raise DegenerateMetricError("metric is degenerate")
            return Signature(p, q)
        eig = np.linalg.eigvalsh(self.as_array())
        scale = max(abs(eig[0]), abs(eig[-1]), 1e-300)
        if np.any(np.abs(eig) <= rtol * scale):
            raise DegenerateMetricError("metric has an eigenvalue at zero within threshold")
        return Signature(int(np.sum(eig > 0)), int(np.sum(eig < 0)))

    def is_positive_definite(self) -> bool:
        try:
            sig = self.signature()
        except DegenerateMetricError:
            return False
        return sig.q == 0

    def transported(self, p) -> "Metric":
        """Pullback under the basis change f_q = sum_i p[i][q] e_i (congruence)."""
        if self.exact:
            p = [[coerce(x, True) for x in row] for row in p]
            pt = rational.transpose(p)
            return Metric.from_rows(rational.mat_mul(pt, rational.mat_mul(self.rows(), p)),
                                    exact=True)
        parr = np.array(p, dtype=float)
        return Metric.from_rows((parr.T @ self.as_array() @ parr).tolist(), exact=False)

    def to_float(self) -> "Metric":
        if not self.exact:
            return self
        return Metric.from_rows(self.as_array().tolist(), exact=False)

    def inverse_rows(self) -> list:
        if self.exact:
            return rational.inverse(self.rows())
        return np.linalg.inv(self.as_array()).tolist()


def signature(a: Metric, rtol: float = DEGENERACY_RTOL) -> Signature:
    return a.signature(rtol)


@dataclass(frozen=True)
class ConnectionTensor:
    """The product A as a rank-3 tensor: A_{e_i} e_j = sum_k A[i][j][k] e_k."""

    tensor: tuple
    exact: bool

    @property
    def dim(self) -> int:
        return len(self.tensor)

    def product(self, i: int, j: int) -> list:
        return list(self.tensor[i][j])

    def apply(self, u: Sequence, v: Sequence) -> list:
        """A_u v by bilinearity."""
        n = self.dim
        zero = Fraction(0) if self.exact else 0.0
        out = [zero] * n
        for i in range(n):
            if u[i] == 0:
                continue
            for j in range(n):
                if v[j] == 0:
                    continue
                f = u[i] * v[j]
                row = self.tensor[i][j]
                for k in range(n):
                    if row[k] != 0:
                        out[k] = out[k] + f * row[k]
        return out

    def as_array(self) -> np.ndarray:
        return np.array([[[float(x) for x in row] for row in plane]
                         for plane in self.tensor])

    def torsion_residual(self, alg: LieAlgebra):
        """Max-norm of A_{e_i}e_j - A_{e_j}e_i - [e_i, e_j] over basis pairs."""
        worst = Fraction(0) if self.exact else 0.0
        for i, j in itertools.product(range(self.dim), repeat=2):
            br = alg.c[i][j]
            for k in range(self.dim):
                d = abs(self.tensor[i][j][k] - self.tensor[j][i][k] - br[k])
                if d > worst:
                    worst = d
        return worst

    def skew_residual(self, a: Metric):
        """Max-norm of a(A_{e_i}e_j, e_k) + a(e_j, A_{e_i}e_k) over triples."""
        n = self.dim
        worst = Fraction(0) if self.exact else 0.0
        am = a.matrix
        for i, j, k in itertools.product(range(n), repeat=3):
            s = sum((self.tensor[i][j][m] * am[m][k] for m in range(n)),
                    Fraction(0) if self.exact else 0.0)
            s += sum((am[j][m] * self.tensor[i][k][m] for m in range(n)),
                     Fraction(0) if self.exact else 0.0)
            if abs(s) > worst:
                worst = abs(s)
        return worst


def levi_civita_product(alg: LieAlgebra, a: Metric) -> ConnectionTensor:
    """Solve the defining linear systems for A, one per basis pair.

    For each (i, j) the coordinate vector x of A_{e_i} e_j satisfies
    x . (2a) = b with b_k = a([e_i,e_j], e_k) + a([e_k,e_i], e_j)
    + a([e_k,e_j], e_i); nondegeneracy of a makes x unique.
    """
    if alg.dim != a.dim:
        raise DimensionMismatchError("algebra and metric dimensions differ")
    a.require_nondegenerate()
    n = alg.dim
    exact = alg.exact and a.exact
    if exact:
        two_a = [[2 * x for x in row] for row in a.rows()]
        tensor = []
        for i in range(n):
            plane = []
            ei = alg.basis(i)
            for j in range(n):
                ej = alg.basis(j)
                br = alg.bracket(ei, ej)
                b = []
                for k in range(n):
                    ek = alg.basis(k)
                    b.append(a.apply(br, ek) + a.apply(alg.bracket(ek, ei), ej)
                             + a.apply(alg.bracket(ek, ej), ei))
                try:
                    plane.append(rational.solve(two_a, b))
                except rational.SingularMatrixError as exc:
                    raise DegenerateMetricError(str(exc)) from exc
            tensor.append(plane)
        return ConnectionTensor(tensor=tuple(tuple(tuple(r) for r in p) for p in tensor),
                                exact=True)
    carr = alg.structure_array()
    aarr = a.as_array()
    x = _lc_product_array(carr, aarr)
    return ConnectionTensor(
        tensor=tuple(tuple(tuple(float(v) for v in x[i, j]) for j in range(n))
                     for i in range(n)),
        exact=False)


def _lc_product_array(c: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Vectorized float solve of the product's defining systems."""
    n = c.shape[0]
    b = (np.einsum("ijm,mk->ijk", c, a)
         + np.einsum("kim,mj->ijk", c, a)
         + np.einsum("kjm,mi->ijk", c, a))
    return np.linalg.solve(2.0 * a, b.reshape(-1, n).T).T.reshape(n, n, n)


def _defect_array(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Defect vectors [A_{e_i}e_j, e_k] + [e_i, A_{e_k}e_j], shape (n,n,n,n)."""
    return np.einsum("ijm,mkl->ijkl", x, c) + np.einsum("iml,kjm->ijkl", c, x)


class CompatibilityResidual(NamedTuple):
    """Worst defect size, an argmax triple (i,j,k), and whether it is exactly 0."""

    value: float
    worst_triple: tuple
    exact_zero: bool | None


def compatibility_residual(alg: LieAlgebra, a: Metric,
                           conn: ConnectionTensor | None = None) -> CompatibilityResidual:
    """Largest basis-triple defect of [A_u v, w] + [u, A_w v].

    Value is the max over triples of the Euclidean norm of the defect
    vector, which hands back an argmax certificate for diagnostics. In exact
    mode ``exact_zero`` is authoritative; the float value is for reporting.
    """
    if conn is None:
        conn = levi_civita_product(alg, a)
    n = alg.dim
    if conn.exact:
        best, best_triple = Fraction(0), (0, 0, 0)
        for i, j, k in itertools.product(range(n), repeat=3):
            d = alg.bracket(conn.product(i, j), alg.basis(k))
            other = alg.bracket(alg.basis(i), conn.product(k, j))
            sq = sum(((d[t] + other[t]) ** 2 for t in range(n)), Fraction(0))
            if sq > best:
                best, best_triple = sq, (i, j, k)
        return CompatibilityResidual(value=math.sqrt(float(best)),
                                     worst_triple=best_triple,
                                     exact_zero=(best == 0))
    d = _defect_array(alg.structure_array(), conn.as_array())
    norms = np.sqrt((d ** 2).sum(axis=3))
    idx = np.unravel_index(int(np.argmax(norms)), norms.shape)
    return CompatibilityResidual(value=float(norms[idx]), worst_triple=tuple(int(t) for t in idx),
                                 exact_zero=None)


def is_pseudo_riemannian(alg: LieAlgebra, a: Metric, tol: float = DEFAULT_TOL) -> bool:
    """Whether the pair is compatible: exact zero residual, or below tol in float."""
    res = compatibility_residual(alg, a)
    if res.exact_zero is not None:
        return res.exact_zero
    return res.value <= tol
