"""Frames of three equivalent orthogonal projections and graph projections.

A ThreeFrame splits every block into three equal slots via matrix units
w_ij (w_ij maps the j-th slot onto the i-th).  Internally the frame
carries one unitary V per block whose column groups are coordinates for
the slots, so that every slot operation reduces to the standard picture
of 3x3 operator matrices over the corner algebra.

The graph projection in slot (d, i) of a corner operator x is the
projection onto { xi in slot d, x xi in slot i }; concretely, in
standard coordinates for slot 12,

    P_12[x] = [[c, c x*, 0], [x c, x c x*, 0], [0, 0, 0]],
    c = (1 + x* x)^{-1}.

A projection Q is such a graph exactly when Q v e_i = e_d v e_i and Q
is LS-orthogonal to e_i; the operator is then recovered from the corner
ratio Q_{id} Q_{dd}^{-1}.  Products and sums of corner operators are
realized by pure meet/join expressions on graph projections, which is
what makes the lattice remember the ring.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DEFAULT_TOL,
    AlgebraShape,
    Element,
    Projection,
    Tolerances,
    distance,
)
from .errors import NotAFrame, NotAGraphProjection, ShapeMismatch
from .halmos import ls_orthogonal
from .lattice import join, meet

__all__ = [
    "ThreeFrame",
    "SLOTS",
    "graph_projection",
    "is_slot_graph_projection",
    "recover_operator",
    "lattice_product",
    "lattice_sum",
    "inverse_coincidence",
]

# slot name -> (domain, image), zero-indexed
SLOTS: dict[int, tuple[int, int]] = {12: (0, 1), 13: (0, 2), 23: (1, 2), 21: (1, 0)}


class ThreeFrame:
    """Three equivalent orthogonal projections summing to 1, with units."""

    __slots__ = ("shape", "corner_shape", "e1", "e2", "e3", "units", "_vmats")

    def __init__(
        self,
        shape: AlgebraShape,
        projections: tuple[Projection, Projection, Projection],
        units: tuple[tuple[Element, ...], ...],
        vmats: tuple[np.ndarray, ...],
    ):
        self.shape = shape
        self.corner_shape = AlgebraShape(n // 3 for n in shape.blocks)
        self.e1, self.e2, self.e3 = projections
        self.units = units
        vs = []
        for v in vmats:
            v = np.asarray(v, dtype=np.complex128).copy()
            v.setflags(write=False)
            vs.append(v)
        self._vmats = tuple(vs)

    @classmethod
    def standard(cls, shape: AlgebraShape, tol: Tolerances = DEFAULT_TOL) -> "ThreeFrame":
        """Frame from contiguous index thirds of every block."""
        if any(n % 3 for n in shape.blocks):
            raise NotAFrame(f"every block size must be divisible by 3, got {shape}")
        eyes = [np.eye(n, dtype=np.complex128) for n in shape.blocks]
        projections = []
        for i in range(3):
            bases = [
                eye[:, i * (n // 3) : (i + 1) * (n // 3)]
                for eye, n in zip(eyes, shape.blocks)
            ]
            projections.append(Projection.from_basis(shape, bases))
        units = []
        for i in range(3):
            row = []
            for j in range(3):
                blocks = []
                for eye, n in zip(eyes, shape.blocks):
                    k = n // 3
                    w = np.zeros((n, n), dtype=np.complex128)
                    w[i * k : (i + 1) * k, j * k : (j + 1) * k] = np.eye(k)
                    blocks.append(w)
                row.append(Element(shape, blocks))
            units.append(tuple(row))
        return cls(shape, tuple(projections), tuple(units), tuple(eyes))

    @classmethod
    def from_projections(
        cls,
        p1: Projection,
        p2: Projection,
        p3: Projection,
        w12: Element,
        w13: Element,
        tol: Tolerances = DEFAULT_TOL,
    ) -> "ThreeFrame":
        """Assemble a frame from projections and two isometry witnesses.

        w12, w13 must be partial isometries from the second/third slot
        onto the first: w w* = p1 and w* w = p2 (resp. p3).

        Raises:
            NotAFrame: the pieces do not satisfy the frame relations.
        """
        shape = p1.shape
        if p2.shape != shape or p3.shape != shape:
            raise NotAFrame("frame projections live in different algebras")
        if any(n % 3 for n in shape.blocks):
            raise NotAFrame(f"every block size must be divisible by 3, got {shape}")
        ps = (p1, p2, p3)
        for i in range(3):
            for j in range(i + 1, 3):
                if (ps[i].element * ps[j].element).norm() > tol.proj_tol:
                    raise NotAFrame(f"projections {i + 1} and {j + 1} not orthogonal")
        total = p1.element + p2.element + p3.element
        if distance(total, Element.identity(shape)) > tol.proj_tol:
            raise NotAFrame("frame projections do not sum to 1")
        for w, target, name in ((w12, p2, "w12"), (w13, p3, "w13")):
            if distance(w * w.adjoint(), p1) > tol.proj_tol:
                raise NotAFrame(f"{name} w* is not p1")
            if distance(w.adjoint() * w, target) > tol.proj_tol:
                raise NotAFrame(f"{name}* {name} is not the slot projection")

        w1 = [p1.element, w12, w13]
        units = tuple(
            tuple(w1[i].adjoint() * w1[j] for j in range(3)) for i in range(3)
        )
        vmats = []
        for b, n in enumerate(shape.blocks):
            u1 = p1.basis[b]
            cols = [u1] + [w1[j].data[b].conj().T @ u1 for j in (1, 2)]
            v = np.concatenate(cols, axis=1)
            if v.shape != (n, n):
                raise NotAFrame(f"slot ranks do not fill block {b}")
            defect = np.linalg.norm(v.conj().T @ v - np.eye(n), 2)
            if defect > 1e3 * tol.proj_tol:
                raise NotAFrame(
                    f"frame coordinates not unitary on block {b} (defect {defect:.3e})"
                )
            vmats.append(v)
        return cls(shape, ps, units, tuple(vmats))

    @property
    def projections(self) -> tuple[Projection, Projection, Projection]:
        return (self.e1, self.e2, self.e3)

    def to_coords(self, x) -> list[np.ndarray]:
        """Standard 3x3 slot coordinates of an element, one matrix per block."""
        if isinstance(x, Projection):
            x = x.element
        if x.shape != self.shape:
            raise ShapeMismatch("element does not live in the frame's algebra")
        return [v.conj().T @ a @ v for v, a in zip(self._vmats, x.data)]

    def from_coords(self, mats) -> Element:
        """Inverse of to_coords."""
        blocks = [v @ m @ v.conj().T for v, m in zip(self._vmats, mats)]
        return Element(self.shape, blocks)

    def corner(self, x, i: int, j: int) -> Element:
        """Corner-algebra coordinate of slot (i, j), zero-indexed."""
        out = []
        for v, a, n in zip(self._vmats, (_elem(x)).data, self.shape.blocks):
            k = n // 3
            m = v.conj().T @ a @ v
            out.append(m[i * k : (i + 1) * k, j * k : (j + 1) * k])
        return Element(self.corner_shape, out)

    def embed_corner(self, xhat: Element, i: int, j: int) -> Element:
        """Place a corner operator into slot (i, j) of the ambient algebra."""
        if xhat.shape != self.corner_shape:
            raise ShapeMismatch("operand is not a corner element of this frame")
        blocks = []
        for v, a, n in zip(self._vmats, xhat.data, self.shape.blocks):
            k = n // 3
            vi = v[:, i * k : (i + 1) * k]
            vj = v[:, j * k : (j + 1) * k]
            blocks.append(vi @ a @ vj.conj().T)
        return Element(self.shape, blocks)

    def slot_isometry(self, i: int, b: int) -> np.ndarray:
        """Columns of the frame unitary for slot i on block b."""
        n = self.shape.blocks[b]
        k = n // 3
        return self._vmats[b][:, i * k : (i + 1) * k]


def _elem(x) -> Element:
    return x.element if isinstance(x, Projection) else x


def graph_projection(
    frame: ThreeFrame, x: Element, slot: int = 12, tol: Tolerances = DEFAULT_TOL
) -> Projection:
    """Projection onto the graph of a corner operator in the given slot."""
    if slot not in SLOTS:
        raise ValueError(f"slot must be one of {sorted(SLOTS)}, got {slot}")
    if x.shape != frame.corner_shape:
        raise ShapeMismatch("graph operand must be a corner element of the frame")
    d, im = SLOTS[slot]
    bases = []
    for b, n in enumerate(frame.shape.blocks):
        k = n // 3
        std = np.zeros((n, k), dtype=np.complex128)
        std[d * k : (d + 1) * k] = np.eye(k)
        std[im * k : (im + 1) * k] = x.data[b]
        qmat, _ = np.linalg.qr(frame._vmats[b] @ std)
        bases.append(qmat)
    return Projection.from_basis(frame.shape, bases)


def is_slot_graph_projection(
    frame: ThreeFrame, q: Projection, slot: int = 12, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Lattice-side recognition of slot graph projections.

    Q is the graph of some corner operator in slot (d, i) exactly when
    join(Q, e_i) = e_d v e_i and Q is LS-orthogonal to e_i.
    """
    if slot not in SLOTS:
        raise ValueError(f"slot must be one of {sorted(SLOTS)}, got {slot}")
    d, im = SLOTS[slot]
    ps = frame.projections
    lhs = join(q, ps[im], tol)
    rhs = join(ps[d], ps[im], tol)
    if lhs.ranks != rhs.ranks or distance(lhs, rhs) > tol.proj_tol:
        return False
    return ls_orthogonal(q, ps[im], tol)


def recover_operator(
    frame: ThreeFrame,
    q: Projection,
    slot: int = 12,
    tol: Tolerances = DEFAULT_TOL,
    residual_tol: float = 1e-6,
) -> Element:
    """Read the corner operator off a slot graph projection.

    In slot coordinates the operator is the ratio Q_{id} Q_{dd}^{-1};
    the result is certified by rebuilding the graph projection and
    comparing it with Q.

    Raises:
        NotAGraphProjection: wrong rank profile, singular domain corner,
            or certification residual above residual_tol.
    """
    if slot not in SLOTS:
        raise ValueError(f"slot must be one of {sorted(SLOTS)}, got {slot}")
    d, im = SLOTS[slot]
    expected_ranks = tuple(n // 3 for n in frame.shape.blocks)
    if q.ranks != expected_ranks:
        raise NotAGraphProjection(
            f"rank profile {q.ranks} does not match the slot rank {expected_ranks}"
        )
    coords = frame.to_coords(q)
    out = []
    for b, n in enumerate(frame.shape.blocks):
        k = n // 3
        m = coords[b]
        qdd = m[d * k : (d + 1) * k, d * k : (d + 1) * k]
        qid = m[im * k : (im + 1) * k, d * k : (d + 1) * k]
        lam, vec = np.linalg.eigh((qdd + qdd.conj().T) / 2)
        if lam[-1] <= 0 or lam[0] <= tol.rank_rel * lam[-1]:
            raise NotAGraphProjection(f"domain corner singular on block {b}")
        out.append(qid @ (vec / lam) @ vec.conj().T)
    x = Element(frame.corner_shape, out)
    residual = distance(graph_projection(frame, x, slot, tol), q)
    if residual > residual_tol:
        raise NotAGraphProjection(
            f"not a slot-{slot} graph projection (residual {residual:.3e})"
        )
    return x


def lattice_product(
    frame: ThreeFrame, x: Element, y: Element, tol: Tolerances = DEFAULT_TOL
) -> Projection:
    """Graph projection of the product x y, computed only with meet/join:

    (P_23[-x] v P_12[y]) ^ (e1 v e3) = P_13[x y].
    """
    left = join(
        graph_projection(frame, -x, 23, tol),
        graph_projection(frame, y, 12, tol),
        tol,
    )
    return meet(left, join(frame.e1, frame.e3, tol), tol)


def lattice_sum(
    frame: ThreeFrame, x: Element, y: Element, tol: Tolerances = DEFAULT_TOL
) -> Projection:
    """Graph projection of the sum x + y, computed only with meet/join.

    With f = (P_12[x] v e3) ^ (P_13[1] v e2) and
    g = (P_12[y] v P_13[1]) ^ (e2 v e3), the projection
    (f v g) ^ (e1 v e2) equals P_12[x + y].
    """
    one = Element.identity(frame.corner_shape)
    f = meet(
        join(graph_projection(frame, x, 12, tol), frame.e3, tol),
        join(graph_projection(frame, one, 13, tol), frame.e2, tol),
        tol,
    )
    g = meet(
        join(
            graph_projection(frame, y, 12, tol),
            graph_projection(frame, one, 13, tol),
            tol,
        ),
        join(frame.e2, frame.e3, tol),
        tol,
    )
    return meet(join(f, g, tol), join(frame.e1, frame.e2, tol), tol)


def inverse_coincidence(
    frame: ThreeFrame, x: Element, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Invertibility of x read off the lattice: P_12[x] is also a
    slot-21 graph projection exactly when x is invertible (and the
    slot-21 recovery then returns the inverse)."""
    q = graph_projection(frame, x, 12, tol)
    return is_slot_graph_projection(frame, q, 21, tol)
