"""Dense matrix kernel with a floating-point path and an exact-rational path.

Floating-point work (eigenvalues, singular values, large products) runs on
numpy float64 arrays.  Rank and kernel questions, which decide the
classification verdicts, additionally have an exact path over
``fractions.Fraction`` entries: fraction-free (Bareiss) elimination over
cleared-denominator integers for ranks, and plain rational Gauss-Jordan for
kernel bases.  Exact matrices are represented as lists of lists of Fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

RATIONAL = "rational"
FLOAT = "float"

#: Matrix in the exact path: list of rows, entries ``fractions.Fraction``.
ExactMatrix = list

__all__ = [
    "RATIONAL",
    "FLOAT",
    "ScalarMode",
    "MultiplicityPair",
    "ZeroSpectralRadiusError",
    "kron",
    "mat_power",
    "kernel_dim",
    "kernel_basis",
    "spectral_radius",
    "eigenvalues",
    "multiplicities",
    "eigenvalue_degree",
    "as_exact",
    "as_float",
    "exact_rank",
    "exact_identity",
    "exact_sub",
    "exact_matmul",
    "is_rational_entry",
]


@dataclass(frozen=True)
class ScalarMode:
    """Computation context: arithmetic kind plus the float tolerances.

    ``eps_rank`` is a relative singular-value cutoff, ``eps_cluster`` an
    absolute eigenvalue clustering radius (callers normalize by the spectral
    radius first), ``eps_interior`` a relative strict-positivity margin.
    The epsilons are ignored on the rational path.
    """

    kind: str = FLOAT
    eps_rank: float = 1e-9
    eps_cluster: float = 1e-7
    eps_interior: float = 1e-10

    def __post_init__(self):
        if self.kind not in (RATIONAL, FLOAT):
            raise ValueError(f"unknown scalar mode {self.kind!r}")
        if min(self.eps_rank, self.eps_cluster, self.eps_interior) <= 0:
            raise ValueError("tolerances must be positive")

    @property
    def exact(self) -> bool:
        return self.kind == RATIONAL

    def scaled(self, factor: float) -> "ScalarMode":
        """Copy with all tolerances multiplied by ``factor``."""
        return ScalarMode(self.kind, self.eps_rank * factor,
                          self.eps_cluster * factor, self.eps_interior * factor)


FLOAT_MODE = ScalarMode(FLOAT)
RATIONAL_MODE = ScalarMode(RATIONAL)


class MultiplicityPair(NamedTuple):
    """Geometric and algebraic multiplicity of one probed eigenvalue.

    Both are 0 when the probed value is not an eigenvalue.
    """

    geometric: int
    algebraic: int


class ZeroSpectralRadiusError(ValueError):
    """Raised by consumers when a positive spectral radius is required."""


# ---------------------------------------------------------------------------
# exact-rational helpers
# ---------------------------------------------------------------------------

def is_rational_entry(x) -> bool:
    """True for values that carry exact rational information (int/Fraction)."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def as_exact(m) -> ExactMatrix:
    """Convert a matrix-like of ints/Fractions/strings to Fraction rows.

    Strings are accepted in ``p/q`` or decimal form.  Floats are rejected:
    reconstructing rationals from floats would fabricate exactness.
    """
    rows = []
    for row in m:
        out = []
        for x in row:
            if isinstance(x, float):
                raise TypeError("float entries have no exact rational value")
            out.append(Fraction(x))
        rows.append(out)
    return rows


def as_float(m) -> np.ndarray:
    """Float64 array view of either representation."""
    if isinstance(m, np.ndarray):
        return m.astype(float, copy=False)
    return np.array([[float(x) for x in row] for row in m], dtype=float)


def exact_identity(d: int) -> ExactMatrix:
    return [[Fraction(1 if i == j else 0) for j in range(d)] for i in range(d)]


def exact_sub(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def exact_shift(m: ExactMatrix, lam: Fraction) -> ExactMatrix:
    """m - lam * I."""
    return [[x - lam if i == j else x for j, x in enumerate(row)]
            for i, row in enumerate(m)]


def exact_matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    k = len(b)
    bt = list(zip(*b))
    return [[sum(ra[t] * bc[t] for t in range(k)) for bc in bt] for ra in a]


def exact_matvec(a: ExactMatrix, v: Sequence[Fraction]) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def _integer_rows(m: ExactMatrix) -> list:
    """Clear denominators row by row (rank-preserving)."""
    out = []
    for row in m:
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        out.append([int(x * lcm) for x in row])
    return out


def exact_rank(m: ExactMatrix) -> int:
    """Rank by fraction-free Bareiss elimination over integers."""
    a = _integer_rows(m)
    if not a:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        pr = a[rank]
        for i in range(rank + 1, n_rows):
            ri = a[i]
            f = ri[col]
            for j in range(col, n_cols):
                ri[j] = (ri[j] * pr[col] - f * pr[j]) // prev
        prev = pr[col]
        rank += 1
        if rank == n_rows:
            break
    return rank


def exact_kernel_basis(m: ExactMatrix) -> list:
    """Basis of the null space, as lists of Fractions (Gauss-Jordan)."""
    a = [list(row) for row in m]
    n_rows = len(a)
    n_cols = len(a[0]) if n_rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -a[row_idx][fc]
        basis.append(v)
    return basis


def exact_kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    p, q = len(b), len(b[0])
    out = []
    for ra in a:
        for rb in b:
            out.append([x * y for x in ra for y in rb])
    return out


def exact_power(m: ExactMatrix, n: int) -> ExactMatrix:
    if n < 0:
        raise ValueError("negative power")
    result = exact_identity(len(m))
    base = [list(row) for row in m]
    while n:
        if n & 1:
            result = exact_matmul(result, base)
        n >>= 1
        if n:
            base = exact_matmul(base, base)
    return result


# ---------------------------------------------------------------------------
# dispatching operations
# ---------------------------------------------------------------------------

def _is_exact_matrix(m) -> bool:
    return not isinstance(m, np.ndarray) and isinstance(m, list)


def kron(a, b):
    """Kronecker product; preserves the representation of its inputs."""
    if _is_exact_matrix(a) and _is_exact_matrix(b):
        return exact_kron(a, b)
    return np.kron(as_float(a), as_float(b))


def mat_power(m, n: int):
    """n-th matrix power by repeated squaring; ``n == 0`` gives identity."""
    if _is_exact_matrix(m):
        return exact_power(m, n)
    return np.linalg.matrix_power(as_float(m), n)


def _float_kernel_dim(m: np.ndarray, mode: ScalarMode,
                      scale: float = 0.0) -> int:
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or max(sv[0], scale) == 0.0:
        return m.shape[1]
    return int(np.count_nonzero(sv <= mode.eps_rank * max(sv[0], scale)))


def kernel_dim(m, mode: ScalarMode = FLOAT_MODE, scale: float = 0.0) -> int:
    """Null-space dimension of a square matrix.

    Exact matrices are eliminated exactly; float matrices count singular
    values below ``eps_rank`` times the largest one.  ``scale`` optionally
    anchors the cutoff for matrices that are differences of larger ones
    (e.g. ``A - I``), where a purely relative cutoff would mistake rounding
    noise for full rank.
    """
    if _is_exact_matrix(m) and mode.exact:
        return len(m) - exact_rank(m)
    return _float_kernel_dim(as_float(m), mode, scale)


def kernel_basis(m, mode: ScalarMode = FLOAT_MODE):
    """Orthonormal (float) or rational (exact) basis of the null space."""
    if _is_exact_matrix(m) and mode.exact:
        return exact_kernel_basis(m)
    a = as_float(m)
    u, sv, vt = np.linalg.svd(a)
    if sv.size and sv[0] > 0:
        null_mask = sv <= mode.eps_rank * sv[0]
    else:
        null_mask = np.ones_like(sv, dtype=bool)
    rank = int(np.count_nonzero(~null_mask))
    return [vt[i] for i in range(rank, a.shape[1])]


def eigenvalues(m) -> np.ndarray:
    """Complex eigenvalues (float path; exact inputs are converted)."""
    return np.linalg.eigvals(as_float(m))


def spectral_radius(m) -> float:
    """Largest absolute value among the eigenvalues."""
    ev = eigenvalues(m)
    if ev.size == 0:
        return 0.0
    return float(np.max(np.abs(ev)))


def multiplicities(m, lam, mode: ScalarMode = FLOAT_MODE) -> MultiplicityPair:
    """Geometric and algebraic multiplicity of ``lam`` as an eigenvalue of m.

    Exact path (rational ``lam``, exact matrix): geometric is
    ``d - rank(m - lam I)`` and algebraic is ``dim ker (m - lam I)^d``, the
    generalized eigenspace having stabilized by power d.  Float path:
    geometric from a singular-value rank, algebraic by counting computed
    eigenvalues within ``eps_cluster`` of ``lam``.  Returns (0, 0) when
    ``lam`` is not an eigenvalue.
    """
    if _is_exact_matrix(m) and mode.exact:
        lam = Fraction(lam)
        d = len(m)
        shifted = exact_shift(m, lam)
        geometric = d - exact_rank(shifted)
        if geometric == 0:
            return MultiplicityPair(0, 0)
        # kernel of (m - lam I)^k grows with k until the generalized
        # eigenspace is reached; doubling k detects stabilization without
        # ever forming the d-th power
        power = shifted
        rank = d - geometric
        k = 1
        while k < d:
            power = exact_matmul(power, power)
            k *= 2
            rank2 = exact_rank(power)
            if rank2 == rank:
                break
            rank = rank2
        return MultiplicityPair(geometric, d - rank)

    a = as_float(m)
    d = a.shape[0]
    lam = complex(lam)
    ev = np.linalg.eigvals(a)
    algebraic = int(np.count_nonzero(np.abs(ev - lam) <= mode.eps_cluster))
    if algebraic == 0:
        return MultiplicityPair(0, 0)
    shifted = a.astype(complex) - lam * np.eye(d)
    scale = float(np.linalg.norm(a, 2)) + abs(lam)
    geometric = _float_kernel_dim(shifted, mode, scale)
    geometric = max(1, min(geometric, algebraic))
    return MultiplicityPair(geometric, algebraic)


def eigenvalue_degree(m, lam, mode: ScalarMode = FLOAT_MODE) -> int:
    """Size of the largest Jordan block of ``lam`` (0 if not an eigenvalue).

    Diagnostic: the smallest k with ``dim ker (m - lam I)^k`` equal to the
    algebraic multiplicity.
    """
    pair = multiplicities(m, lam, mode)
    if pair.algebraic == 0:
        return 0
    if _is_exact_matrix(m) and mode.exact:
        shifted = exact_shift(m, Fraction(lam))
        power = exact_identity(len(m))
        for k in range(1, len(m) + 1):
            power = exact_matmul(power, shifted)
            if len(m) - exact_rank(power) == pair.algebraic:
                return k
        return len(m)
    a = as_float(m).astype(complex) - complex(lam) * np.eye(len(as_float(m)))
    power = np.eye(a.shape[0], dtype=complex)
    for k in range(1, a.shape[0] + 1):
        power = power @ a
        if _float_kernel_dim(power, mode) >= pair.algebraic:
            return k
    return a.shape[0]
