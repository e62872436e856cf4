"""Finite-dimensional Lie algebras given by structure constants.

The structure tensor ``c`` encodes the bracket through
``[e_i, e_j] = sum_k c[i][j][k] e_k`` over the basis ``e_0 .. e_{n-1}``.
Antisymmetry in the first two indices is enforced at construction; whether
the Jacobi identity holds is a separate, checkable property so that test
corpora may contain deliberately corrupted tensors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import rational
from .scalars import DEFAULT_TOL, coerce, is_exact


class DimensionMismatchError(ValueError):
    pass


class InvalidStructureError(ValueError):
    pass


@dataclass(frozen=True)
class UnimodularityReport:
    """Verdict plus the trace of each basis adjoint map."""

    unimodular: bool
    traces: tuple

    def __bool__(self) -> bool:
        return self.unimodular


def _freeze_tensor(c):
    return tuple(tuple(tuple(row) for row in plane) for plane in c)


@dataclass(frozen=True)
class LieAlgebra:
    """Immutable structure-constant presentation of a Lie algebra."""

    dim: int
    c: tuple
    exact: bool
    name: str = ""

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping, *, exact: bool = True,
                      check_jacobi: bool = True, tol: float = DEFAULT_TOL,
                      name: str = ""):
        """Build from ``{(i, j): coefficient vector of [e_i, e_j]}`` with i < j.

        Unlisted pairs are zero. The remaining entries are materialized by
        antisymmetry, which removes one class of inconsistent input.
        """
        if dim < 1:
            raise InvalidStructureError("dimension must be positive")
        zero = Fraction(0) if exact else 0.0
        c = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in brackets.items():
            if not (0 <= i < j < dim):
                raise InvalidStructureError(f"bracket pair {(i, j)} needs 0 <= i < j < dim")
            if len(coeffs) != dim:
                raise DimensionMismatchError(f"coefficient vector for {(i, j)} has wrong length")
            row = [coerce(x, exact) for x in coeffs]
            c[i][j] = row
            c[j][i] = [-x for x in row]
        alg = cls(dim=dim, c=_freeze_tensor(c), exact=exact, name=name)
        if check_jacobi:
            alg.require_jacobi(tol=tol)
        return alg

    @classmethod
    def from_structure(cls, c, *, exact: bool | None = None,
                       check_jacobi: bool = True, tol: float = DEFAULT_TOL,
                       name: str = ""):
        """Build from a full rank-3 tensor, validating antisymmetry."""
        dim = len(c)
        if exact is None:
            exact = all(is_exact(x) for plane in c for row in plane for x in row)
        data = [[[coerce(x, exact) for x in row] for row in plane] for plane in c]
        if any(len(plane) != dim or any(len(row) != dim for row in plane) for plane in data):
            raise DimensionMismatchError("structure tensor is not dim x dim x dim")
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    defect = data[i][j][k] + data[j][i][k]
                    if (defect != 0) if exact else (abs(defect) > tol):
                        raise InvalidStructureError(
                            f"antisymmetry fails at c[{i}][{j}][{k}]")
        alg = cls(dim=dim, c=_freeze_tensor(data), exact=exact, name=name)
        if check_jacobi:
            alg.require_jacobi(tol=tol)
        return alg

    # -- basic evaluation ---------------------------------------------------

    def basis(self, i: int):
        one = Fraction(1) if self.exact else 1.0
        zero = Fraction(0) if self.exact else 0.0
        return [one if k == i else zero for k in range(self.dim)]

    def _check_vector(self, u: Sequence):
        if len(u) != self.dim:
            raise DimensionMismatchError(
                f"vector of length {len(u)} in a {self.dim}-dimensional algebra")

    def bracket(self, u: Sequence, v: Sequence) -> list:
        """[u, v] by contraction of the structure tensor; bilinear, antisymmetric."""
        self._check_vector(u)
        self._check_vector(v)
        n = self.dim
        zero = Fraction(0) if self.exact else 0.0
        out = [zero] * n
        for i in range(n):
            ui = u[i]
            if ui == 0:
                continue
            for j in range(n):
                vj = v[j]
                if vj == 0:
                    continue
                row = self.c[i][j]
                f = ui * vj
                for k in range(n):
                    if row[k] != 0:
                        out[k] = out[k] + f * row[k]
        return out

    def jacobi_residual(self):
        """Max-norm of the Jacobi defect over basis triples; 0 iff a Lie algebra.

        The defect [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] is
        alternating once antisymmetry holds, so i < j < k triples suffice.
        """
        worst = Fraction(0) if self.exact else 0.0
        for i, j, k in itertools.combinations(range(self.dim), 3):
            ei, ej, ek = self.basis(i), self.basis(j), self.basis(k)
            d = self.bracket(self.bracket(ei, ej), ek)
            for t, x in enumerate(self.bracket(self.bracket(ej, ek), ei)):
                d[t] += x
            for t, x in enumerate(self.bracket(self.bracket(ek, ei), ej)):
                d[t] += x
            worst = max(worst, max((abs(x) for x in d), default=worst))
        return worst

    def worst_jacobi_triple(self):
        """The (residual, (i, j, k)) pair naming a worst Jacobi violation."""
        worst = Fraction(0) if self.exact else 0.0
        where = (0, 1, 2) if self.dim >= 3 else (0,) * min(self.dim, 3)
        for i, j, k in itertools.combinations(range(self.dim), 3):
            ei, ej, ek = self.basis(i), self.basis(j), self.basis(k)
            d = self.bracket(self.bracket(ei, ej), ek)
            for t, x in enumerate(self.bracket(self.bracket(ej, ek), ei)):
                d[t] += x
            for t, x in enumerate(self.bracket(self.bracket(ek, ei), ej)):
                d[t] += x
            here = max((abs(x) for x in d), default=worst)
            if here > worst:
                worst, where = here, (i, j, k)
        return worst, where

    def require_jacobi(self, tol: float = DEFAULT_TOL):
        r = self.jacobi_residual()
        bad = (r != 0) if self.exact else (abs(r) > tol)
        if bad:
            raise InvalidStructureError(f"Jacobi identity fails, residual {r}")

    def adjoint_matrix(self, u: Sequence):
        """Matrix of ad_u = [u, .]; column j is [u, e_j]."""
        self._check_vector(u)
        cols = [self.bracket(u, self.basis(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    # -- derived structure --------------------------------------------------

    def ad_traces(self) -> tuple:
        out = []
        for i in range(self.dim):
            m = self.adjoint_matrix(self.basis(i))
            out.append(sum((m[k][k] for k in range(self.dim)),
                           Fraction(0) if self.exact else 0.0))
        return tuple(out)

    def is_unimodular(self, tol: float = DEFAULT_TOL) -> UnimodularityReport:
        """True iff every adjoint map is trace-free."""
        traces = self.ad_traces()
        if self.exact:
            ok = all(t == 0 for t in traces)
        else:
            ok = all(abs(t) <= tol for t in traces)
        return UnimodularityReport(unimodular=ok, traces=traces)

    def center(self, tol: float = DEFAULT_TOL) -> list:
        """Basis of {v : [u, v] = 0 for all u}, via the stacked adjoints."""
        stacked = []
        for i in range(self.dim):
            stacked.extend(self.adjoint_matrix(self.basis(i)))
        if self.exact:
            return rational.nullspace(stacked)
        m = np.array(stacked, dtype=float)
        if not stacked:
            return []
        _, s, vt = np.linalg.svd(m)
        cutoff = tol * max(1.0, s[0] if len(s) else 1.0)
        null_rows = [vt[r] for r in range(vt.shape[0]) if r >= len(s) or s[r] <= cutoff]
        return [list(map(float, v)) for v in null_rows]

    # -- transforms ---------------------------------------------------------

    def changed_basis(self, p, *, check_jacobi: bool = False) -> "LieAlgebra":
        """Structure tensor in the basis f_q = sum_i p[i][q] e_i.

        A congruence action: c'[p][q][l] picks up two copies of p and one of
        its inverse. Exact algebras require exact p.
        """
        n = self.dim
        if self.exact:
            p = [[coerce(x, True) for x in row] for row in p]
            pinv = rational.inverse(p)
            new = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
            for a_, b_ in itertools.product(range(n), repeat=2):
                fa = [sum((p[i][a_] * self.c[i][j][k] * p[j][b_]
                           for i in range(n) for j in range(n)), Fraction(0))
                      for k in range(n)]
                # fa = [f_a, f_b] in the old coordinates; express in the new basis
                coords = rational.mat_vec(pinv, fa)
                new[a_][b_] = coords
            return LieAlgebra.from_structure(new, exact=True, check_jacobi=check_jacobi,
                                             name=self.name)
        parr = np.array(p, dtype=float)
        pinv = np.linalg.inv(parr)
        carr = self.structure_array()
        new = np.einsum("ia,jb,ijk,lk->abl", parr, parr, carr, pinv)
        return LieAlgebra.from_structure(new.tolist(), exact=False,
                                         check_jacobi=check_jacobi, name=self.name)

    def to_float(self) -> "LieAlgebra":
        if not self.exact:
            return self
        c = [[[float(x) for x in row] for row in plane] for plane in self.c]
        return LieAlgebra(dim=self.dim, c=_freeze_tensor(c), exact=False, name=self.name)

    def structure_array(self) -> np.ndarray:
        return np.array([[[float(x) for x in row] for row in plane] for plane in self.c])
