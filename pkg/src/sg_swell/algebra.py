"""Galerkin product calculus for Haar-type bases.

For a basis whose Galerkin matrices share constant eigenvectors, every matrix
function acts diagonally on the "cell values" ``lam = v @ Psi`` where
``Psi[j, c]`` tabulates basis function ``j`` on finest cell ``c``.  The
production path never assembles a K x K matrix; the dense route exists only as
an oracle for tests.

Two interchangeable algebra objects are provided.  ``GalerkinAlgebra`` takes
and returns coefficient vectors, ``CellAlgebra`` works directly on cell values.
The flux code is written against their shared interface (``mul``, ``solve``,
``inv``, ``sqrt``, ``pow_apply``, ``dot``, ``eigvals``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveHeight, SingularState

__all__ = [
    "EPS_POS",
    "TripleProductTensor",
    "Eigenstructure",
    "GalerkinAlgebra",
    "CellAlgebra",
    "triple_products",
    "sg_matrix",
    "eigenstructure",
    "sg_apply",
    "sg_inverse_apply",
    "sg_inverse",
    "sg_sqrt",
    "sg_compose_check",
]

EPS_POS = 1e-12


# {{{ triple products


@dataclass(frozen=True, eq=False)
class TripleProductTensor:
    """Nonzero entries ``M[i, j, k] = <psi_i psi_j psi_k>`` in coordinate form (0-based)."""

    K: int
    index: np.ndarray = field(repr=False)  # (nnz, 3)
    data: np.ndarray = field(repr=False)  # (nnz,)

    def dense(self) -> np.ndarray:
        out = np.zeros((self.K, self.K, self.K))
        i, j, k = self.index.T
        out[i, j, k] = self.data
        return out

    @property
    def nnz(self) -> int:
        return self.data.size


def triple_products(basis, tol: float = 1e-14) -> TripleProductTensor:
    """Exact triple products by summation over the finest cells."""
    psi = basis.values
    K = psi.shape[0]
    full = np.einsum("ic,jc,kc->ijk", psi, psi, psi) / K
    idx = np.argwhere(np.abs(full) > tol)
    return TripleProductTensor(K, idx, full[tuple(idx.T)])


def sg_matrix(tensor: TripleProductTensor, v) -> np.ndarray:
    """Dense Galerkin matrix ``P(v)_ij = sum_k v_k M_ijk`` (oracle route)."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != tensor.K:
        raise ValueError(f"coefficient length {v.shape[-1]} does not match K={tensor.K}")
    out = np.zeros((tensor.K, tensor.K))
    i, j, k = tensor.index.T
    np.add.at(out, (i, j), tensor.data * v[k])
    return out


# }}}


# {{{ eigenstructure


@dataclass(frozen=True, eq=False)
class Eigenstructure:
    """Constant eigenvectors ``V = Psi / sqrt(K)`` and the eigenvalue map."""

    V: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)

    @property
    def K(self) -> int:
        return self.psi.shape[0]

    def eigvals(self, v) -> np.ndarray:
        """``lam_k(v) = (sqrt(K) V^T v)_k``, i.e. the value of the expansion on cell ``k``."""
        return np.asarray(v, dtype=float) @ self.psi

    def from_eigvals(self, lam) -> np.ndarray:
        return np.asarray(lam, dtype=float) @ self.psi.T / self.K


def eigenstructure(basis, check: bool = True, seed: int = 0) -> Eigenstructure:
    psi = np.asarray(basis.values, dtype=float)
    K = psi.shape[0]
    eig = Eigenstructure(psi / np.sqrt(K), psi)
    if check and K > 1:
        probe = np.random.default_rng(seed).standard_normal(K)
        dense = sg_matrix(triple_products(basis), probe)
        rebuilt = eig.V @ np.diag(eig.eigvals(probe)) @ eig.V.T
        if np.max(np.abs(dense - rebuilt)) > 1e-10:
            raise ValueError("basis does not admit a constant-eigenvector decomposition")
    return eig


def sg_apply(eig: Eigenstructure, v, w) -> np.ndarray:
    """``P(v) w`` in O(K^2) through the eigenvalue map."""
    return eig.from_eigvals(eig.eigvals(v) * eig.eigvals(w))


def _check_invertible(lam, eps):
    if np.any(np.abs(lam) <= eps):
        raise SingularState(f"Galerkin matrix eigenvalue {np.min(np.abs(lam)):.3e} <= {eps:g}")


def sg_inverse_apply(eig: Eigenstructure, v, w, eps: float = EPS_POS) -> np.ndarray:
    """``P(v)^{-1} w``; raises ``SingularState`` if some ``|lam_j(v)| <= eps``."""
    lam = eig.eigvals(v)
    _check_invertible(lam, eps)
    return eig.from_eigvals(eig.eigvals(w) / lam)


def sg_inverse(eig: Eigenstructure, v, eps: float = EPS_POS) -> np.ndarray:
    """Coefficients of ``v^{-1} = P(v)^{-1} e_1``."""
    lam = eig.eigvals(v)
    _check_invertible(lam, eps)
    return eig.from_eigvals(1.0 / lam)


def sg_sqrt(eig: Eigenstructure, h, eps: float = EPS_POS) -> np.ndarray:
    """Principal square root ``h^{1/2}`` with ``P(h^{1/2}) h^{1/2} = h``."""
    lam = eig.eigvals(h)
    if np.any(lam <= eps):
        raise NonPositiveHeight(f"height eigenvalue {np.min(lam):.3e} <= {eps:g}")
    return eig.from_eigvals(np.sqrt(lam))


def sg_compose_check(eig: Eigenstructure, v, w) -> tuple[np.ndarray, np.ndarray]:
    """Return ``P(P(v) w)`` and ``P(v) P(w)`` as dense matrices built from the eigenstructure."""
    V = eig.V
    lhs = V @ np.diag(eig.eigvals(sg_apply(eig, v, w))) @ V.T
    rhs = (V @ np.diag(eig.eigvals(v)) @ V.T) @ (V @ np.diag(eig.eigvals(w)) @ V.T)
    return lhs, rhs


# }}}


# {{{ algebra objects


class CellAlgebra:
    """Pointwise arithmetic on stochastic cell values (last axis, length K).

    Inner products carry the cell mass ``1/K`` so that ``dot`` agrees with the
    Euclidean product of the corresponding coefficient vectors.
    """

    def __init__(self, K: int, eps_pos: float = EPS_POS):
        self.K = K
        self.eps_pos = eps_pos

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        _check_invertible(a, self.eps_pos)
        return 1.0 / a

    def solve(self, a, b):
        """``P(a)^{-1} b``."""
        _check_invertible(a, self.eps_pos)
        return b / a

    def solve_height(self, h, b):
        """``P(h)^{-1} b`` with the stricter positivity gate used for water heights."""
        self.check_height(h)
        return b / h

    def sqrt(self, h):
        self.check_height(h)
        return np.sqrt(h)

    def pow_apply(self, v, n: int, x):
        """``P(v)^n x``."""
        return v**n * x

    def dot(self, a, b):
        return np.sum(a * b, axis=-1) / self.K

    def eigvals(self, a):
        return a

    def check_height(self, h):
        if np.any(h <= self.eps_pos):
            raise NonPositiveHeight(f"height eigenvalue {np.min(h):.3e} <= {self.eps_pos:g}")


class GalerkinAlgebra:
    """Coefficient-space Galerkin calculus via the constant eigenvectors.

    All methods accept arrays with arbitrary leading axes; the last axis holds
    the K coefficients.  ``to_cells``/``from_cells`` switch to the pointwise
    representation used by ``CellAlgebra``.
    """

    def __init__(self, basis, eps_pos: float = EPS_POS, check: bool = True):
        self.basis = basis
        self.eig = eigenstructure(basis, check=check)
        self.psi = self.eig.psi
        self.K = self.eig.K
        self.eps_pos = eps_pos
        self._tensor = None

    @property
    def tensor(self) -> TripleProductTensor:
        if self._tensor is None:
            self._tensor = triple_products(self.basis)
        return self._tensor

    def cell_algebra(self) -> CellAlgebra:
        return CellAlgebra(self.K, self.eps_pos)

    def to_cells(self, v):
        return np.asarray(v, dtype=float) @ self.psi

    def from_cells(self, lam):
        return np.asarray(lam, dtype=float) @ self.psi.T / self.K

    def eigvals(self, v):
        return self.to_cells(v)

    def matrix(self, v) -> np.ndarray:
        """Dense ``P(v)`` from the triple-product tensor (oracle route)."""
        return sg_matrix(self.tensor, v)

    def mul(self, a, b):
        return self.from_cells(self.to_cells(a) * self.to_cells(b))

    def inv(self, a):
        lam = self.to_cells(a)
        _check_invertible(lam, self.eps_pos)
        return self.from_cells(1.0 / lam)

    def solve(self, a, b):
        lam = self.to_cells(a)
        _check_invertible(lam, self.eps_pos)
        return self.from_cells(self.to_cells(b) / lam)

    def solve_height(self, h, b):
        lam = self.to_cells(h)
        self._check_height_cells(lam)
        return self.from_cells(self.to_cells(b) / lam)

    def sqrt(self, h):
        lam = self.to_cells(h)
        self._check_height_cells(lam)
        return self.from_cells(np.sqrt(lam))

    def pow_apply(self, v, n: int, x):
        return self.from_cells(self.to_cells(v) ** n * self.to_cells(x))

    def dot(self, a, b):
        return np.sum(np.asarray(a) * np.asarray(b), axis=-1)

    def check_height(self, h):
        self._check_height_cells(self.to_cells(h))

    def _check_height_cells(self, lam):
        if np.any(lam <= self.eps_pos):
            raise NonPositiveHeight(f"height eigenvalue {np.min(lam):.3e} <= {self.eps_pos:g}")


# }}}
