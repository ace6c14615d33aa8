"""Dynamical maps: raw matrices on a cone, stochastic matrices, channels.

A :class:`DynMap` couples a real square matrix with the cone it is supposed
to preserve and a unit element interior to the dual cone.  When every input
entry is rational the exact matrix is kept alongside the float one, and the
classification routines use it for kernel/rank questions.  Quantum channels
built from Kraus operators act on PSD-cone coordinates; their superoperator
entries are floats, so no exact matrix is attached (reconstructing rationals
from floats would fabricate exactness).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cones import (
    Cone,
    DimensionMismatchError,
    Orthant,
    Psd,
    Polyhedral,
    TensorCone,
    UnsupportedConeOperation,
    validate_unit,
)
from .linalg import FLOAT_MODE, ScalarMode, as_float, is_rational_entry

__all__ = [
    "DynMap",
    "PositivityVerdict",
    "NegativeEntryError",
    "ColumnSumViolationError",
    "from_matrix",
    "from_stochastic",
    "from_kraus",
    "adjoint",
    "is_dup",
    "is_positive",
    "choi_matrix",
]

_SAMPLING_SEED = 1904


class NegativeEntryError(ValueError):
    """A stochastic matrix entry is negative."""


class ColumnSumViolationError(ValueError):
    """A stochastic matrix column does not sum to one."""


@dataclass(eq=False)
class DynMap:
    """A linear map on the ambient space of a cone.

    ``matrix`` is the float representation used for spectral work; ``exact``
    is the same matrix over Fractions when the input was rational, else None.
    ``provenance`` is one of ``"raw"``, ``"stochastic"``, ``"kraus"``.
    """

    matrix: np.ndarray
    cone: Cone
    unit: np.ndarray
    exact: list | None = None
    unit_exact: list | None = None
    provenance: str = "raw"
    kraus_ops: list | None = None
    kraus_rank: int | None = None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise DimensionMismatchError("map matrix must be square")
        if self.matrix.shape[0] != self.cone.dim:
            raise DimensionMismatchError(
                f"{self.matrix.shape[0]}x{self.matrix.shape[0]} matrix on a "
                f"cone of dimension {self.cone.dim}")
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("map matrix has non-finite entries")
        self.unit = np.asarray(self.unit, dtype=float)

    @property
    def dim(self) -> int:
        return self.cone.dim


@dataclass(frozen=True)
class PositivityVerdict:
    """Outcome of a cone-preservation check with its certificate."""

    value: str  # "yes" | "no" | "unknown"
    certificate: str

    def __bool__(self):
        return self.value == "yes"


def _exact_rows(m):
    rows = []
    for row in m:
        out = []
        for v in row:
            if isinstance(v, str):
                v = Fraction(v)
            if not is_rational_entry(v):
                return None
            out.append(Fraction(v))
        rows.append(out)
    return rows


def from_matrix(m, cone: Cone, unit=None, mode: ScalarMode = FLOAT_MODE) -> DynMap:
    """Wrap a raw square matrix acting on ``cone``.

    Rational entries (ints, Fractions, or ``"p/q"`` strings) keep an exact
    copy for the exact classification routes.
    """
    exact = None if isinstance(m, np.ndarray) else _exact_rows(m)
    matrix = as_float(exact) if exact is not None else np.asarray(m, dtype=float)
    unit_exact = None
    if unit is None:
        unit_f = cone.default_unit()
        if isinstance(cone, Orthant):
            unit_exact = [Fraction(1)] * cone.dim
        elif isinstance(cone, Polyhedral):
            unit_exact = [sum(col) for col in zip(*cone.exact_dual_generators())]
    else:
        if not isinstance(unit, np.ndarray) and all(is_rational_entry(v) for v in unit):
            unit_exact = [Fraction(v) for v in unit]
        unit_f = validate_unit(cone, unit, mode)
    return DynMap(matrix, cone, unit_f, exact=exact, unit_exact=unit_exact)


def from_stochastic(w, mode: ScalarMode = FLOAT_MODE) -> DynMap:
    """Build a column-stochastic map on the orthant with the all-ones unit.

    Raises :class:`NegativeEntryError` / :class:`ColumnSumViolationError`
    when the input is not column-stochastic (exactly so for rational input,
    within 1e-12 for float input).
    """
    exact = None if isinstance(w, np.ndarray) else _exact_rows(w)
    if exact is not None:
        d = len(exact)
        if any(len(row) != d for row in exact):
            raise DimensionMismatchError("stochastic matrix must be square")
        for i, row in enumerate(exact):
            for j, v in enumerate(row):
                if v < 0:
                    raise NegativeEntryError(f"entry ({i},{j}) = {v} is negative")
        for j in range(d):
            s = sum(row[j] for row in exact)
            if s != 1:
                raise ColumnSumViolationError(f"column {j} sums to {s}, not 1")
        matrix = as_float(exact)
    else:
        matrix = np.asarray(w, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatchError("stochastic matrix must be square")
        d = matrix.shape[0]
        bad = np.argwhere(matrix < 0)
        if bad.size:
            i, j = bad[0]
            raise NegativeEntryError(
                f"entry ({i},{j}) = {matrix[i, j]} is negative")
        sums = matrix.sum(axis=0)
        off = np.argwhere(np.abs(sums - 1.0) > 1e-12)
        if off.size:
            j = int(off[0][0])
            raise ColumnSumViolationError(f"column {j} sums to {sums[j]}, not 1")
    cone = Orthant(d)
    unit_exact = [Fraction(1)] * d if exact is not None else None
    return DynMap(matrix, cone, np.ones(d), exact=exact,
                  unit_exact=unit_exact, provenance="stochastic")


def from_kraus(ops) -> DynMap:
    """Superoperator of rho -> sum_i K_i rho K_i^dag in Hermitian coordinates.

    The resulting matrix is real because conjugation by each Kraus operator
    preserves Hermiticity.  Trace preservation is not required (stochastic
    operations are allowed); it can be probed afterwards with
    :func:`is_dup`.
    """
    kraus = [np.asarray(k, dtype=complex) for k in ops]
    if not kraus:
        raise ValueError("at least one Kraus operator is required")
    h = kraus[0].shape[0]
    for k in kraus:
        if k.ndim != 2 or k.shape != (h, h):
            raise DimensionMismatchError(
                f"Kraus operators must all be {h}x{h}, got {k.shape}")
    cone = Psd(h)
    basis = cone.basis
    d = cone.dim
    images = np.zeros((d, h, h), dtype=complex)
    for k in kraus:
        kd = k.conj().T
        for idx in range(d):
            images[idx] += k @ basis.mats[idx] @ kd
    matrix = np.einsum("aij,bji->ab", basis.mats, images).real
    stacked = np.array([k.ravel() for k in kraus])
    rank = int(np.linalg.matrix_rank(stacked))
    return DynMap(matrix, cone, cone.default_unit(), provenance="kraus",
                  kraus_ops=kraus, kraus_rank=rank)


def adjoint(a: DynMap) -> DynMap:
    """Adjoint map: the transpose, acting on the dual cone.

    Coordinates are orthonormal for the ambient inner product, so the
    adjoint is literally the transpose.  Self-dual cones keep their cone;
    polyhedral cones are replaced by their dual (generated by the cached
    dual rays).
    """
    cone = a.cone
    if isinstance(cone, Polyhedral):
        dual = Polyhedral(cone.exact_dual_generators())
    elif isinstance(cone, TensorCone):
        inner = cone._inner()
        if isinstance(inner, Orthant):
            dual = cone
        elif isinstance(inner, Polyhedral):
            dual = Polyhedral(inner.exact_dual_generators())
        else:
            raise UnsupportedConeOperation(
                "the dual of a tensor cone with PSD operands has no finite "
                "description")
    else:
        dual = cone  # orthant and PSD are self-dual
    exact_t = None
    if a.exact is not None:
        exact_t = [list(col) for col in zip(*a.exact)]
    return DynMap(a.matrix.T.copy(), dual, a.unit.copy(), exact=exact_t,
                  unit_exact=a.unit_exact, provenance="raw")


def is_dup(a: DynMap, mode: ScalarMode = FLOAT_MODE) -> bool:
    """Does the adjoint fix the unit element (A* u = u)?

    Exact when both the matrix and the unit are rational; otherwise within
    a relative tolerance.
    """
    if a.exact is not None and a.unit_exact is not None:
        image = [sum(a.exact[i][j] * a.unit_exact[i] for i in range(a.dim))
                 for j in range(a.dim)]
        return image == list(a.unit_exact)
    image = a.matrix.T @ a.unit
    return bool(np.linalg.norm(image - a.unit)
                <= 1e-9 * max(1.0, np.linalg.norm(a.unit)))


def choi_matrix(a: DynMap) -> np.ndarray:
    """Choi matrix of a PSD-cone map (h^2 x h^2, Hermitian)."""
    if not isinstance(a.cone, Psd):
        raise UnsupportedConeOperation("Choi matrix requires a PSD-cone map")
    basis = a.cone.basis
    h = a.cone.h
    # images of the basis elements under the map, as matrices
    phi_b = np.array([basis.mat(a.matrix[:, k]) for k in range(a.dim)],
                     dtype=complex)
    # E_ij expands over the Hermitian basis with coefficients B_k[j, i]
    choi = np.einsum("kji,kab->iajb", basis.mats, phi_b).reshape(h * h, h * h)
    return choi


def _haar_state(rng, h):
    psi = rng.standard_normal(h) + 1j * rng.standard_normal(h)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def is_positive(a: DynMap, mode: ScalarMode = FLOAT_MODE,
                samples: int = 512) -> PositivityVerdict:
    """Does the map send its cone into itself?

    Orthant and polyhedral cones are decided exactly (image of every
    extremal generator).  For the PSD cone the question is only
    semi-decidable: a PSD Choi matrix certifies yes (complete positivity
    implies positivity), a sampled pure state whose image has a negative
    eigenvalue certifies no, and otherwise the verdict is unknown.
    """
    cone = a.cone
    if isinstance(cone, Orthant):
        if a.exact is not None:
            for i, row in enumerate(a.exact):
                for j, v in enumerate(row):
                    if v < 0:
                        return PositivityVerdict(
                            "no", f"entry ({i},{j}) = {v} is negative")
            return PositivityVerdict("yes", "all entries nonnegative")
        scale = np.max(np.abs(a.matrix)) if a.matrix.size else 0.0
        bad = np.argwhere(a.matrix < -mode.eps_interior * max(1.0, scale))
        if bad.size:
            i, j = (int(v) for v in bad[0])
            return PositivityVerdict(
                "no", f"entry ({i},{j}) = {a.matrix[i, j]} is negative")
        return PositivityVerdict("yes", "all entries nonnegative")

    if isinstance(cone, (Polyhedral, TensorCone)):
        try:
            gens = cone.extremal_generators()
        except UnsupportedConeOperation:
            return PositivityVerdict(
                "unknown", "tensor cone with PSD operands: no finite "
                "generator test")
        use_exact = a.exact is not None and isinstance(cone, Polyhedral)
        exact_gens = cone.exact_extremal_generators() if use_exact else None
        for idx, g in enumerate(gens):
            if use_exact:
                ge = exact_gens[idx]
                img = [sum(row[j] * ge[j] for j in range(a.dim))
                       for row in a.exact]
                inside = cone.contains(img, mode)
            else:
                inside = cone.contains(a.matrix @ g, mode)
            if not inside:
                return PositivityVerdict(
                    "no", f"image of extremal generator {idx} leaves the cone")
        return PositivityVerdict("yes", "every extremal generator maps into "
                                        "the cone")

    if isinstance(cone, Psd):
        choi = choi_matrix(a)
        w = np.linalg.eigvalsh(choi)
        scale = max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
        if w[0] >= -mode.eps_interior * scale:
            return PositivityVerdict(
                "yes", "completely positive (Choi matrix is PSD)")
        rng = np.random.default_rng(_SAMPLING_SEED)
        basis = cone.basis
        for k in range(samples):
            rho = _haar_state(rng, cone.h)
            out = a.matrix @ basis.vec(rho)
            lo = float(np.linalg.eigvalsh(basis.mat(out))[0])
            if lo < -mode.eps_interior * max(1.0, np.linalg.norm(out)):
                return PositivityVerdict(
                    "no", f"sampled pure state {k} maps to an output with "
                    f"eigenvalue {lo}")
        return PositivityVerdict(
            "unknown", f"Choi matrix is not PSD (min eigenvalue {w[0]:.3e}) "
            f"but no violation found on {samples} sampled pure states; the "
            "map may be positive without being completely positive")

    raise UnsupportedConeOperation(f"no positivity test for {cone!r}")
