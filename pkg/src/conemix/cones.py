"""Closed convex cones with membership, interior, and dual-cone tests.

Four cone families are supported:

* ``Orthant(d)`` -- the nonnegative orthant of R^d (self-dual).
* ``Psd(h)`` -- positive semidefinite matrices inside the h*h Hermitian
  matrices, coordinatized by an orthonormal Hermitian basis so the ambient
  space is R^(h^2) and the trace inner product is the standard dot product
  (self-dual).
* ``Polyhedral(generators)`` -- the conic hull of finitely many vectors.
  Construction enumerates the extreme rays of the dual cone exactly (over
  rationals), after which every membership query is a dot-product loop.
* ``TensorCone(left, right)`` -- the minimal tensor-product cone, i.e. the
  conic hull of pairwise products.  Fully supported for orthant/polyhedral
  operands; for PSD operands only product vectors can be tested (general
  separability testing is intractable) and other queries raise
  :class:`UnsupportedConeOperation`.

Query vectors may be float arrays (tolerance comparisons, scaled by the
vector norm) or sequences of ints/Fractions (exact comparisons where the
cone has exact data).
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

from .linalg import (
    FLOAT_MODE,
    ScalarMode,
    exact_kernel_basis,
    exact_rank,
    is_rational_entry,
)

__all__ = [
    "Cone",
    "Orthant",
    "Psd",
    "Polyhedral",
    "TensorCone",
    "HermBasis",
    "UnsupportedConeOperation",
    "DimensionMismatchError",
    "InvalidUnitError",
    "validate_unit",
]


class UnsupportedConeOperation(Exception):
    """The requested query has no finite certificate for this cone."""


class DimensionMismatchError(ValueError):
    """A vector or matrix does not match the cone's ambient dimension."""


class InvalidUnitError(ValueError):
    """The proposed unit element is not interior to the dual cone."""


def _exact_vector(x):
    """Fraction list if every entry is int/Fraction, else None."""
    if isinstance(x, np.ndarray):
        return None
    try:
        entries = list(x)
    except TypeError:
        return None
    if all(is_rational_entry(v) for v in entries):
        return [Fraction(v) for v in entries]
    return None


def _primitive(vec):
    """Scale a rational vector to a primitive integer vector (same sign)."""
    lcm = 1
    for v in vec:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _dot_exact(a, b):
    return sum(x * y for x, y in zip(a, b))


class Cone:
    """Base class; subclasses fill in the four membership predicates."""

    dim: int

    def _check_dim(self, x):
        if len(x) != self.dim:
            raise DimensionMismatchError(
                f"vector of length {len(x)} on a cone of dimension {self.dim}")

    def contains(self, x, mode: ScalarMode = FLOAT_MODE) -> bool:
        raise NotImplementedError

    def interior_contains(self, x, mode: ScalarMode = FLOAT_MODE) -> bool:
        raise NotImplementedError

    def dual_contains(self, y, mode: ScalarMode = FLOAT_MODE) -> bool:
        raise NotImplementedError

    def interior_dual_contains(self, y, mode: ScalarMode = FLOAT_MODE) -> bool:
        raise NotImplementedError

    def extremal_generators(self) -> list:
        raise NotImplementedError

    def default_unit(self) -> np.ndarray:
        raise NotImplementedError


def validate_unit(cone: Cone, u, mode: ScalarMode = FLOAT_MODE) -> np.ndarray:
    """Check u lies in the interior of the dual cone; return it as floats."""
    if not cone.interior_dual_contains(u, mode):
        raise InvalidUnitError("unit element is not interior to the dual cone")
    return np.asarray(u, dtype=float)


class Orthant(Cone):
    """Nonnegative orthant of R^d."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        self.dim = int(dim)

    def __repr__(self):
        return f"Orthant({self.dim})"

    def __eq__(self, other):
        return isinstance(other, Orthant) and other.dim == self.dim

    def __hash__(self):
        return hash(("orthant", self.dim))

    def contains(self, x, mode=FLOAT_MODE):
        self._check_dim(x)
        exact = _exact_vector(x)
        if exact is not None:
            return all(v >= 0 for v in exact)
        xf = np.asarray(x, dtype=float)
        return bool(np.all(xf >= -mode.eps_interior * np.linalg.norm(xf)))

    def interior_contains(self, x, mode=FLOAT_MODE):
        self._check_dim(x)
        exact = _exact_vector(x)
        if exact is not None:
            return all(v > 0 for v in exact)
        xf = np.asarray(x, dtype=float)
        return bool(np.all(xf > mode.eps_interior * np.linalg.norm(xf)))

    # self-dual
    def dual_contains(self, y, mode=FLOAT_MODE):
        return self.contains(y, mode)

    def interior_dual_contains(self, y, mode=FLOAT_MODE):
        return self.interior_contains(y, mode)

    def extremal_generators(self):
        return [np.eye(self.dim)[i] for i in range(self.dim)]

    def exact_extremal_generators(self):
        one, zero = Fraction(1), Fraction(0)
        return [[one if i == j else zero for j in range(self.dim)]
                for i in range(self.dim)]

    def default_unit(self):
        return np.ones(self.dim)


class HermBasis:
    """Orthonormal real basis of the h*h Hermitian matrices.

    Ordering: identity / sqrt(h), then the diagonal traceless matrices, then
    for each pair i < j the symmetric and the antisymmetric off-diagonal
    element.  Orthonormal under the trace inner product, so ``vec`` and
    ``mat`` are mutually inverse isometries between Hermitian matrices and
    R^(h^2).
    """

    def __init__(self, h: int):
        if h < 1:
            raise ValueError("matrix dimension must be at least 1")
        self.h = int(h)
        mats = [np.eye(h, dtype=complex) / math.sqrt(h)]
        for k in range(1, h):
            diag = np.zeros(h)
            diag[:k] = 1.0
            diag[k] = -float(k)
            mats.append(np.diag(diag).astype(complex) / math.sqrt(k * (k + 1)))
        for i in range(h):
            for j in range(i + 1, h):
                sym = np.zeros((h, h), dtype=complex)
                sym[i, j] = sym[j, i] = 1.0 / math.sqrt(2)
                mats.append(sym)
                asym = np.zeros((h, h), dtype=complex)
                asym[i, j] = -1j / math.sqrt(2)
                asym[j, i] = 1j / math.sqrt(2)
                mats.append(asym)
        self.mats = np.array(mats)

    @property
    def dim(self) -> int:
        return self.h * self.h

    def vec(self, matrix) -> np.ndarray:
        """Coordinates of a Hermitian matrix (imaginary parts discarded)."""
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (self.h, self.h):
            raise DimensionMismatchError(
                f"expected a {self.h}x{self.h} matrix, got {m.shape}")
        return np.einsum("kij,ji->k", self.mats, m).real

    def mat(self, x) -> np.ndarray:
        """Hermitian matrix with the given coordinates."""
        xf = np.asarray(x, dtype=float)
        if xf.shape != (self.dim,):
            raise DimensionMismatchError(
                f"expected a vector of length {self.dim}, got {xf.shape}")
        return np.einsum("k,kij->ij", xf, self.mats)


class Psd(Cone):
    """PSD matrices over h*h Hermitians, in orthonormal-basis coordinates."""

    def __init__(self, h: int):
        self.h = int(h)
        self.basis = HermBasis(h)
        self.dim = self.basis.dim

    def __repr__(self):
        return f"Psd({self.h})"

    def __eq__(self, other):
        return isinstance(other, Psd) and other.h == self.h

    def __hash__(self):
        return hash(("psd", self.h))

    def _min_eig(self, x) -> tuple:
        self._check_dim(x)
        xf = np.asarray(x, dtype=float)
        w = np.linalg.eigvalsh(self.basis.mat(xf))
        return float(w[0]), float(np.linalg.norm(xf))

    def contains(self, x, mode=FLOAT_MODE):
        lo, scale = self._min_eig(x)
        return lo >= -mode.eps_interior * scale

    def interior_contains(self, x, mode=FLOAT_MODE):
        lo, scale = self._min_eig(x)
        return lo > mode.eps_interior * scale

    def dual_contains(self, y, mode=FLOAT_MODE):
        return self.contains(y, mode)

    def interior_dual_contains(self, y, mode=FLOAT_MODE):
        return self.interior_contains(y, mode)

    def extremal_generators(self):
        raise UnsupportedConeOperation(
            "the PSD cone has a continuum of extremal rays (rank-one "
            "projectors); use eigenvector-based criteria instead")

    def default_unit(self):
        return self.basis.vec(np.eye(self.h))


class Polyhedral(Cone):
    """Conic hull of finitely many generators spanning R^d.

    The constructor verifies that the generators span the ambient space and
    that the cone is pointed, and enumerates the extreme rays of the dual
    cone exactly.  After that, ``contains`` is a dot-product loop against
    the dual rays and ``dual_contains`` against the generators.
    """

    #: guard against combinatorial blow-up of dual-ray enumeration
    MAX_SUBSETS = 500_000

    def __init__(self, generators):
        gens = [self._exact_gen(g) for g in generators]
        if not gens:
            raise ValueError("at least one generator is required")
        d = len(gens[0])
        if any(len(g) != d for g in gens):
            raise DimensionMismatchError("generators of unequal length")
        if all(v == 0 for g in gens for v in g):
            raise ValueError("all generators are zero")
        gens = [g for g in gens if any(v != 0 for v in g)]
        self.dim = d
        if exact_rank(gens) != d:
            raise ValueError("generators do not span the ambient space; "
                             "the cone would have empty interior")
        self._gens = gens
        self._dual_rays = self._enumerate_dual_rays(gens, d)
        if exact_rank(self._dual_rays) != d:
            raise ValueError("cone is not pointed: it contains a line")
        self._gens_f = _unit_rows(gens)
        self._dual_f = _unit_rows(self._dual_rays)
        self._extremal = self._minimal_generators()

    @staticmethod
    def _exact_gen(g):
        out = []
        for v in g:
            # Fraction(float) is exact, so float input keeps a consistent
            # (if ugly) rational meaning.
            out.append(Fraction(v))
        return out

    @classmethod
    def _enumerate_dual_rays(cls, gens, d):
        m = len(gens)
        if d >= 2 and math.comb(m, d - 1) > cls.MAX_SUBSETS:
            raise ValueError(
                f"dual-ray enumeration over {m} generators in dimension {d} "
                "is too large for this desk-scale implementation")
        rays = []
        seen = set()
        subsets = combinations(range(m), d - 1) if d >= 2 else [()]
        for subset in subsets:
            rows = [gens[i] for i in subset]
            if rows:
                null = exact_kernel_basis(rows)
            else:
                null = [[Fraction(i == j) for j in range(d)] for i in range(d)]
            if len(null) != 1:
                continue
            for cand in (null[0], [-v for v in null[0]]):
                if all(_dot_exact(g, cand) >= 0 for g in gens):
                    prim = _primitive(cand)
                    key = tuple(prim)
                    if key not in seen:
                        seen.add(key)
                        rays.append([Fraction(v) for v in prim])
                    break
        if not rays:
            raise ValueError("cone is not pointed: it contains a line")
        return rays

    def _minimal_generators(self):
        out = []
        seen = set()
        for g in self._gens:
            active = [y for y in self._dual_rays if _dot_exact(y, g) == 0]
            rank = exact_rank(active) if active else 0
            if rank == self.dim - 1:
                key = tuple(_primitive(g))
                if key not in seen:
                    seen.add(key)
                    out.append(g)
        return out

    def __repr__(self):
        return f"Polyhedral({len(self._gens)} generators, dim {self.dim})"

    def _dots(self, rows_exact, rows_float, x, mode, strict):
        self._check_dim(x)
        exact = _exact_vector(x)
        if exact is not None:
            dots = (_dot_exact(r, exact) for r in rows_exact)
            return all(v > 0 for v in dots) if strict else all(v >= 0 for v in dots)
        xf = np.asarray(x, dtype=float)
        margin = mode.eps_interior * np.linalg.norm(xf)
        dots = rows_float @ xf
        return bool(np.all(dots > margin) if strict else np.all(dots >= -margin))

    def contains(self, x, mode=FLOAT_MODE):
        return self._dots(self._dual_rays, self._dual_f, x, mode, strict=False)

    def interior_contains(self, x, mode=FLOAT_MODE):
        return self._dots(self._dual_rays, self._dual_f, x, mode, strict=True)

    def dual_contains(self, y, mode=FLOAT_MODE):
        return self._dots(self._gens, self._gens_f, y, mode, strict=False)

    def interior_dual_contains(self, y, mode=FLOAT_MODE):
        return self._dots(self._gens, self._gens_f, y, mode, strict=True)

    def extremal_generators(self):
        return [np.array([float(v) for v in g]) for g in self._extremal]

    def exact_extremal_generators(self):
        return [list(g) for g in self._extremal]

    def dual_generators(self):
        """Extreme rays of the dual cone (floats, cached from construction)."""
        return [np.array([float(v) for v in y]) for y in self._dual_rays]

    def exact_dual_generators(self):
        return [list(y) for y in self._dual_rays]

    def default_unit(self):
        # sum of dual extreme rays is strictly positive on every generator
        return np.sum(self.dual_generators(), axis=0)


def _unit_rows(rows):
    arr = np.array([[float(v) for v in r] for r in rows])
    norms = np.linalg.norm(arr, axis=1, keepdims=True)
    return arr / norms


def _product_enumerable(cone: Cone) -> bool:
    if isinstance(cone, (Orthant, Polyhedral)):
        return True
    if isinstance(cone, TensorCone):
        return cone._poly is not None or isinstance(cone._delegate, Orthant)
    return False


class TensorCone(Cone):
    """Minimal tensor-product cone of two cones.

    Vector index convention matches the Kronecker product: component
    ``i * right.dim + j`` multiplies (left basis i) x (right basis j).
    """

    def __init__(self, left: Cone, right: Cone):
        self.left = left
        self.right = right
        self.dim = left.dim * right.dim
        self._delegate = None
        self._poly = None
        if isinstance(left, Orthant) and isinstance(right, Orthant):
            # products of standard basis vectors are the standard basis
            self._delegate = Orthant(self.dim)
        elif _product_enumerable(left) and _product_enumerable(right):
            gens = []
            for g in _exact_gens_of(left):
                for h in _exact_gens_of(right):
                    gens.append([a * b for a in g for b in h])
            self._poly = Polyhedral(gens)

    def __repr__(self):
        return f"TensorCone({self.left!r}, {self.right!r})"

    def _inner(self):
        return self._delegate if self._delegate is not None else self._poly

    def _factor(self, x, mode):
        """Split x into (a, b) with x = a (x) b, or None if not a product."""
        xf = np.asarray(x, dtype=float)
        m = xf.reshape(self.left.dim, self.right.dim)
        u, sv, vt = np.linalg.svd(m)
        if sv[0] == 0.0:
            return None
        if sv.size > 1 and sv[1] > mode.eps_rank * sv[0]:
            return None
        a = u[:, 0] * math.sqrt(sv[0])
        b = vt[0] * math.sqrt(sv[0])
        return a, b

    def contains(self, x, mode=FLOAT_MODE):
        self._check_dim(x)
        inner = self._inner()
        if inner is not None:
            return inner.contains(x, mode)
        factors = self._factor(x, mode)
        if factors is None:
            raise UnsupportedConeOperation(
                "membership in a tensor cone with PSD operands is only "
                "decidable for product vectors")
        a, b = factors
        return ((self.left.contains(a, mode) and self.right.contains(b, mode))
                or (self.left.contains(-a, mode) and self.right.contains(-b, mode)))

    def interior_contains(self, x, mode=FLOAT_MODE):
        self._check_dim(x)
        inner = self._inner()
        if inner is not None:
            return inner.interior_contains(x, mode)
        # no finite description: product vectors a (x) b are interior iff
        # both factors are interior in their operand cones
        factors = self._factor(x, mode)
        if factors is None:
            raise UnsupportedConeOperation(
                "interior membership in a tensor cone with PSD operands is "
                "only decidable for product vectors")
        a, b = factors
        return ((self.left.interior_contains(a, mode)
                 and self.right.interior_contains(b, mode))
                or (self.left.interior_contains(-a, mode)
                    and self.right.interior_contains(-b, mode)))

    def dual_contains(self, y, mode=FLOAT_MODE):
        self._check_dim(y)
        inner = self._inner()
        if inner is not None:
            return inner.dual_contains(y, mode)
        raise UnsupportedConeOperation(
            "the dual of a tensor cone with PSD operands has no finite "
            "generator description")

    def interior_dual_contains(self, y, mode=FLOAT_MODE):
        self._check_dim(y)
        inner = self._inner()
        if inner is not None:
            return inner.interior_dual_contains(y, mode)
        factors = self._factor(y, mode)
        if factors is None:
            raise UnsupportedConeOperation(
                "dual-interior membership in a tensor cone with PSD operands "
                "is only decidable for product vectors")
        a, b = factors
        return ((self.left.interior_dual_contains(a, mode)
                 and self.right.interior_dual_contains(b, mode))
                or (self.left.interior_dual_contains(-a, mode)
                    and self.right.interior_dual_contains(-b, mode)))

    def extremal_generators(self):
        gens = []
        for g in self.left.extremal_generators():
            for h in self.right.extremal_generators():
                gens.append(np.kron(g, h))
        return gens

    def default_unit(self):
        return np.kron(self.left.default_unit(), self.right.default_unit())


def _exact_gens_of(cone: Cone):
    if isinstance(cone, Orthant):
        return cone.exact_extremal_generators()
    if isinstance(cone, Polyhedral):
        return cone.exact_extremal_generators()
    if isinstance(cone, TensorCone):
        inner = cone._inner()
        if isinstance(inner, Orthant):
            return inner.exact_extremal_generators()
        if isinstance(inner, Polyhedral):
            return inner.exact_extremal_generators()
    raise UnsupportedConeOperation(
        f"{cone!r} has no finite exact generator list")
