"""Block-diagonal complex matrix algebra.

An algebra here is a finite direct sum of full complex matrix algebras,
described by an :class:`AlgebraShape`.  Its elements are stored as one
dense complex matrix per block.  Everything is pure: inputs are never
mutated and results are fresh values whose arrays are read-only.

Supports, polar parts and the center-valued norm are computed per block
with a relative singular-value cutoff: singular values at or below
``rank_rel * sigma_max`` count as zero.  The cutoff is what makes ranks
(and hence the whole projection lattice) discrete and stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import NotInvertible, ShapeMismatch

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "AlgebraShape",
    "Element",
    "Projection",
    "distance",
    "close",
    "left_support",
    "right_support",
    "invert",
    "polar_decompose",
    "center_valued_norm",
    "is_central",
    "cond",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical cutoffs shared by every operation.

    rank_rel: relative singular-value cutoff for ranks and supports.
    proj_tol: allowed operator-norm deviation from an exact projection.
    eq_tol: operator-norm tolerance for equality of elements.
    """

    rank_rel: float = 1e-9
    proj_tol: float = 1e-8
    eq_tol: float = 1e-8

    def __post_init__(self) -> None:
        for name in ("rank_rel", "proj_tol", "eq_tol"):
            value = getattr(self, name)
            if not (value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")
        if self.rank_rel >= 1:
            raise ValueError("rank_rel must be below 1")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True, init=False)
class AlgebraShape:
    """Block sizes of a direct sum of full matrix algebras."""

    blocks: tuple[int, ...]

    def __init__(self, blocks: Iterable[int]):
        blocks = tuple(int(n) for n in blocks)
        if not blocks:
            raise ValueError("a shape needs at least one block")
        if any(n < 1 for n in blocks):
            raise ValueError(f"block sizes must be positive, got {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def parse(cls, text: str) -> "AlgebraShape":
        """Parse a comma-separated list of block sizes, e.g. "2,3"."""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if not parts:
            raise ValueError(f"cannot parse shape from {text!r}")
        return cls(int(p) for p in parts)

    @property
    def total_dim(self) -> int:
        return sum(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __str__(self) -> str:
        return ",".join(str(n) for n in self.blocks)


def _as_block(matrix, n: int) -> np.ndarray:
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.shape != (n, n):
        raise ShapeMismatch(f"expected a {n}x{n} block, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("block contains non-finite entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def _opnorm(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    s = np.linalg.svd(a, compute_uv=False)
    return float(s[0]) if s.size else 0.0


class Element:
    """A block-diagonal operator: one complex matrix per block."""

    __slots__ = ("shape", "data")

    def __init__(self, shape: AlgebraShape, blocks: Sequence[np.ndarray]):
        if len(blocks) != len(shape.blocks):
            raise ShapeMismatch(
                f"shape {shape} wants {len(shape.blocks)} blocks, got {len(blocks)}"
            )
        self.shape = shape
        self.data = tuple(_as_block(b, n) for b, n in zip(blocks, shape.blocks))

    @classmethod
    def zeros(cls, shape: AlgebraShape) -> "Element":
        return cls(shape, [np.zeros((n, n)) for n in shape.blocks])

    @classmethod
    def identity(cls, shape: AlgebraShape) -> "Element":
        return cls(shape, [np.eye(n) for n in shape.blocks])

    @classmethod
    def from_scalars(cls, shape: AlgebraShape, scalars: Sequence[complex]) -> "Element":
        """Central element: one scalar multiple of the identity per block."""
        if len(scalars) != len(shape.blocks):
            raise ShapeMismatch("one scalar per block required")
        return cls(shape, [c * np.eye(n) for c, n in zip(scalars, shape.blocks)])

    def _require_same_shape(self, other: "Element") -> None:
        if self.shape != other.shape:
            raise ShapeMismatch(f"shapes differ: {self.shape} vs {other.shape}")

    def map_blocks(self, fn: Callable[[np.ndarray], np.ndarray]) -> "Element":
        return Element(self.shape, [fn(b) for b in self.data])

    def __add__(self, other):
        other = _coerce(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._require_same_shape(other)
        return Element(self.shape, [a + b for a, b in zip(self.data, other.data)])

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._require_same_shape(other)
        return Element(self.shape, [a - b for a, b in zip(self.data, other.data)])

    def __rsub__(self, other):
        other = _coerce(other)
        if not isinstance(other, Element):
            return NotImplemented
        return other.__sub__(self)

    def __neg__(self):
        return Element(self.shape, [-a for a in self.data])

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return Element(self.shape, [complex(other) * a for a in self.data])
        other = _coerce(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._require_same_shape(other)
        return Element(self.shape, [a @ b for a, b in zip(self.data, other.data)])

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.__mul__(other)
        return NotImplemented

    def adjoint(self) -> "Element":
        return Element(self.shape, [a.conj().T for a in self.data])

    def conj(self) -> "Element":
        """Entrywise complex conjugate."""
        return Element(self.shape, [a.conj() for a in self.data])

    def transpose(self) -> "Element":
        return Element(self.shape, [a.T for a in self.data])

    def block_norms(self) -> tuple[float, ...]:
        return tuple(_opnorm(a) for a in self.data)

    def norm(self) -> float:
        """Operator norm: the largest block operator norm."""
        return max(self.block_norms())

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.norm() <= tol

    def __repr__(self) -> str:
        return f"Element(shape=[{self.shape}], norm={self.norm():.3g})"


def _coerce(value):
    if isinstance(value, Projection):
        return value.element
    return value


def distance(x, y) -> float:
    """Operator-norm distance, accepting elements or projections."""
    a, b = _coerce(x), _coerce(y)
    return (a - b).norm()


def close(x, y, tol: float) -> bool:
    return distance(x, y) <= tol


def _complement_basis(u: np.ndarray, n: int) -> np.ndarray:
    r = u.shape[1]
    if r == 0:
        return np.eye(n, dtype=np.complex128)
    if r == n:
        return np.zeros((n, 0), dtype=np.complex128)
    full, _, _ = np.linalg.svd(u, full_matrices=True)
    return full[:, r:]


class Projection:
    """A Hermitian idempotent together with an orthonormal range basis.

    The basis is what the lattice operations actually consume; the dense
    matrix ``element`` is kept alongside it so that arithmetic against
    plain elements stays cheap and explicit.
    """

    __slots__ = ("element", "basis", "ranks")

    def __init__(self, element: Element, basis: Sequence[np.ndarray]):
        self.element = element
        bases = []
        for u, n in zip(basis, element.shape.blocks):
            u = np.asarray(u, dtype=np.complex128)
            if u.shape[0] != n or u.shape[1] > n:
                raise ShapeMismatch(f"basis block {u.shape} does not fit n={n}")
            u = u.copy()
            u.setflags(write=False)
            bases.append(u)
        self.basis = tuple(bases)
        self.ranks = tuple(u.shape[1] for u in self.basis)

    @classmethod
    def from_basis(cls, shape: AlgebraShape, bases: Sequence[np.ndarray]) -> "Projection":
        """Projection onto the span of orthonormal columns, per block."""
        blocks = []
        for u, n in zip(bases, shape.blocks):
            u = np.asarray(u, dtype=np.complex128)
            blocks.append(u @ u.conj().T if u.shape[1] else np.zeros((n, n)))
        return cls(Element(shape, blocks), bases)

    @classmethod
    def zero(cls, shape: AlgebraShape) -> "Projection":
        return cls.from_basis(shape, [np.zeros((n, 0)) for n in shape.blocks])

    @classmethod
    def identity(cls, shape: AlgebraShape) -> "Projection":
        return cls.from_basis(shape, [np.eye(n) for n in shape.blocks])

    @property
    def shape(self) -> AlgebraShape:
        return self.element.shape

    def complement(self) -> "Projection":
        bases = [
            _complement_basis(u, n) for u, n in zip(self.basis, self.shape.blocks)
        ]
        return Projection(Element.identity(self.shape) - self.element, bases)

    def rank(self) -> int:
        return sum(self.ranks)

    def is_zero(self) -> bool:
        return self.rank() == 0

    def is_identity(self) -> bool:
        return self.ranks == tuple(self.shape.blocks)

    # Arithmetic on projections drops down to elements; the results are
    # generally not projections, so they come back as plain elements.
    def __add__(self, other):
        return self.element + _coerce(other)

    def __radd__(self, other):
        return _coerce(other) + self.element

    def __sub__(self, other):
        return self.element - _coerce(other)

    def __rsub__(self, other):
        return _coerce(other) - self.element

    def __neg__(self):
        return -self.element

    def __mul__(self, other):
        return self.element * _coerce(other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.element * other
        return _coerce(other) * self.element

    def __repr__(self) -> str:
        return f"Projection(shape=[{self.shape}], ranks={list(self.ranks)})"


def _support_basis(a: np.ndarray, cutoff: float) -> np.ndarray:
    """Orthonormal basis of the column space under an absolute cutoff."""
    n = a.shape[0]
    if n == 0 or not np.any(a):
        return np.zeros((n, 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = int(np.count_nonzero(s > cutoff))
    return u[:, :r]


def left_support(x: Element, tol: Tolerances = DEFAULT_TOL) -> Projection:
    """Smallest projection p with p x = x (column-space projection).

    The rank cutoff is relative to the norm of the whole element, not
    of each block: a block that only carries roundoff from operations
    on the other blocks must contribute rank zero.
    """
    x = _coerce(x)
    cutoff = tol.rank_rel * x.norm()
    return Projection.from_basis(
        x.shape, [_support_basis(a, cutoff) for a in x.data]
    )


def right_support(x: Element, tol: Tolerances = DEFAULT_TOL) -> Projection:
    """Smallest projection q with x q = x; equals left_support(x*)."""
    return left_support(_coerce(x).adjoint(), tol)


def invert(x: Element, tol: Tolerances = DEFAULT_TOL) -> Element:
    """Blockwise inverse; raises NotInvertible on the first singular block."""
    x = _coerce(x)
    out = []
    for i, a in enumerate(x.data):
        s = np.linalg.svd(a, compute_uv=False)
        if s.size == 0 or s[-1] <= tol.rank_rel * s[0] or s[0] == 0:
            raise NotInvertible(i, float(s[-1]) if s.size else 0.0)
        out.append(np.linalg.inv(a))
    return Element(x.shape, out)


def polar_decompose(
    x: Element, tol: Tolerances = DEFAULT_TOL
) -> tuple[Element, Element]:
    """Polar form x = v |x|.

    Returns (v, abs_x) where abs_x = (x* x)^(1/2) is positive
    semidefinite and v is the partial isometry with
    v* v = right_support(x) and v v* = left_support(x).
    """
    x = _coerce(x)
    cutoff = tol.rank_rel * x.norm()
    vs, abss = [], []
    for a in x.data:
        u, s, vh = np.linalg.svd(a)
        r = int(np.count_nonzero(s > cutoff))
        vs.append(u[:, :r] @ vh[:r, :])
        abss.append((vh.conj().T * s) @ vh)
    return Element(x.shape, vs), Element(x.shape, abss)


def center_valued_norm(x: Element) -> Element:
    """Per-block operator norm times the block identity.

    This is the smallest central positive element c with x* x <= c^2,
    i.e. the center-valued analogue of the operator norm.
    """
    x = _coerce(x)
    return Element.from_scalars(x.shape, [_opnorm(a) for a in x.data])


def is_central(x: Element, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when every block is within eq_tol of a scalar matrix."""
    x = _coerce(x)
    for a, n in zip(x.data, x.shape.blocks):
        lam = np.trace(a) / n
        if _opnorm(a - lam * np.eye(n)) > tol.eq_tol:
            return False
    return True


def cond(x: Element) -> float:
    """Largest blockwise 2-norm condition number (inf on singular blocks)."""
    x = _coerce(x)
    worst = 1.0
    for a in x.data:
        s = np.linalg.svd(a, compute_uv=False)
        if s.size == 0 or s[-1] == 0:
            return float("inf")
        worst = max(worst, float(s[0] / s[-1]))
    return worst
