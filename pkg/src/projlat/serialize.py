"""JSON serialization for elements, projections, maps, and reports.

Complex entries are stored as [re, im] pairs, row-major per block, so a
round trip through json preserves every bit at double precision (Python
floats print in shortest exact form).  Projections are stored with
their rank profile; loading validates the projection laws but keeps the
stored bits exactly instead of re-snapping the spectrum.
"""

from __future__ import annotations

import json

import numpy as np

from .core import AlgebraShape, DEFAULT_TOL, Element, Projection, Tolerances
from .errors import NotAProjection
from .graphs import ThreeFrame
from .halmos import HalmosDecomposition
from .maps import (
    FromConjugation,
    FromSemilinear,
    LatticeMap,
    from_conjugation,
    from_semilinear,
)

__all__ = [
    "element_to_obj",
    "element_from_obj",
    "projection_to_obj",
    "projection_from_obj",
    "pair_to_obj",
    "pair_from_obj",
    "map_to_obj",
    "map_from_obj",
    "ring_iso_to_obj",
    "ring_iso_from_obj",
    "ConjugationRingIso",
    "halmos_to_obj",
    "frame_to_obj",
    "frame_from_obj",
    "save_json",
    "load_json",
]


def _matrix_to_lists(a: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def _matrix_from_lists(rows, n: int, where: str) -> np.ndarray:
    a = np.asarray(rows, dtype=np.float64)
    if a.shape != (n, n, 2):
        raise ValueError(f"{where}: expected {n}x{n} [re, im] entries, got {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def element_to_obj(x: Element) -> dict:
    return {
        "shape": list(x.shape.blocks),
        "blocks": [_matrix_to_lists(b) for b in x.data],
    }


def element_from_obj(d: dict) -> Element:
    try:
        shape = AlgebraShape(int(n) for n in d["shape"])
        raw = d["blocks"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed element object: {exc}") from exc
    if len(raw) != len(shape.blocks):
        raise ValueError(
            f"element has {len(raw)} blocks for shape {shape}"
        )
    blocks = [
        _matrix_from_lists(rows, n, f"block {i}")
        for i, (rows, n) in enumerate(zip(raw, shape.blocks))
    ]
    return Element(shape, blocks)


def projection_to_obj(p: Projection) -> dict:
    d = element_to_obj(p.element)
    d["ranks"] = list(p.ranks)
    return d


def projection_from_obj(d: dict, tol: Tolerances = DEFAULT_TOL) -> Projection:
    """Load a projection, validating the laws but keeping the bits.

    Raises:
        NotAProjection: the payload fails Hermiticity/idempotence within
            proj_tol or its spectrum disagrees with the stored ranks.
    """
    x = element_from_obj(d)
    if "ranks" not in d:
        raise ValueError("projection object lacks a ranks field")
    ranks = [int(r) for r in d["ranks"]]
    if len(ranks) != len(x.shape.blocks):
        raise ValueError("ranks field does not match the shape")
    herm = max(
        np.linalg.norm(b - b.conj().T, 2) for b in x.data
    )
    idem = max(np.linalg.norm(b @ b - b, 2) for b in x.data)
    if herm > tol.proj_tol or idem > tol.proj_tol:
        raise NotAProjection(
            f"stored element violates the projection laws "
            f"(hermiticity {herm:.3e}, idempotence {idem:.3e})"
        )
    bases = []
    for b, r in zip(x.data, ranks):
        lam, vec = np.linalg.eigh((b + b.conj().T) / 2)
        if int(np.count_nonzero(lam >= 0.5)) != r:
            raise NotAProjection(
                f"stored ranks disagree with the spectrum (expected {r})"
            )
        bases.append(vec[:, lam >= 0.5])
    return Projection(x, bases)


def pair_to_obj(p: Projection, q: Projection) -> dict:
    return {
        "kind": "projection-pair",
        "p": projection_to_obj(p),
        "q": projection_to_obj(q),
    }


def pair_from_obj(d: dict, tol: Tolerances = DEFAULT_TOL) -> tuple[Projection, Projection]:
    if d.get("kind") != "projection-pair":
        raise ValueError(f'expected kind "projection-pair", got {d.get("kind")!r}')
    return projection_from_obj(d["p"], tol), projection_from_obj(d["q"], tol)


def map_to_obj(phi: LatticeMap) -> dict:
    """Serialize by provenance; opaque and composite maps have none."""
    prov = phi.provenance
    if isinstance(prov, FromConjugation):
        return {
            "kind": "conjugation",
            "T": element_to_obj(prov.T),
            "sigma": "id",
        }
    if isinstance(prov, FromSemilinear):
        return {
            "kind": "conjugation",
            "T": element_to_obj(prov.T),
            "sigma": prov.sigma,
        }
    raise ValueError(
        f"maps with {type(prov).__name__} provenance are not serializable"
    )


def map_from_obj(d: dict, tol: Tolerances = DEFAULT_TOL) -> LatticeMap:
    if d.get("kind") != "conjugation":
        raise ValueError(f'expected kind "conjugation", got {d.get("kind")!r}')
    t = element_from_obj(d["T"])
    sigma = d.get("sigma", "id")
    if sigma == "id":
        return from_conjugation(t, tol)
    return from_semilinear(t, sigma, tol)


class ConjugationRingIso:
    """Concrete serializable ring isomorphism x -> T sigma(x) T^{-1}."""

    def __init__(self, T: Element, sigma, tol: Tolerances = DEFAULT_TOL):
        from .core import invert

        if isinstance(sigma, str):
            sigma = (sigma,) * len(T.shape.blocks)
        sigma = tuple(sigma)
        if len(sigma) != len(T.shape.blocks) or any(
            s not in ("id", "conj") for s in sigma
        ):
            raise ValueError(f"bad sigma spec {sigma!r}")
        self.T = T
        self.sigma = sigma
        self._tinv = invert(T, tol)

    def __call__(self, x: Element) -> Element:
        blocks = [
            b.conj() if s == "conj" else b for b, s in zip(x.data, self.sigma)
        ]
        return self.T * Element(x.shape, blocks) * self._tinv


def ring_iso_to_obj(T: Element, sigma) -> dict:
    if isinstance(sigma, str):
        sigma_obj = sigma
    else:
        sigma_obj = list(sigma)
    return {"kind": "ring-iso", "T": element_to_obj(T), "sigma": sigma_obj}


def ring_iso_from_obj(d: dict, tol: Tolerances = DEFAULT_TOL) -> ConjugationRingIso:
    if d.get("kind") != "ring-iso":
        raise ValueError(f'expected kind "ring-iso", got {d.get("kind")!r}')
    return ConjugationRingIso(element_from_obj(d["T"]), d.get("sigma", "id"), tol)


def halmos_to_obj(dec: HalmosDecomposition) -> dict:
    return {
        "kind": "halmos",
        "p_and_q": projection_to_obj(dec.p_and_q),
        "p_and_qc": projection_to_obj(dec.p_and_qc),
        "pc_and_q": projection_to_obj(dec.pc_and_q),
        "pc_and_qc": projection_to_obj(dec.pc_and_qc),
        "e1": projection_to_obj(dec.e1),
        "e2": projection_to_obj(dec.e2),
        "a": element_to_obj(dec.a),
        "b": element_to_obj(dec.b),
        "v": element_to_obj(dec.v),
        "angles": [[float(t) for t in blk] for blk in dec.angles],
    }


def frame_to_obj(frame: ThreeFrame) -> dict:
    return {
        "kind": "three-frame",
        "p1": projection_to_obj(frame.e1),
        "p2": projection_to_obj(frame.e2),
        "p3": projection_to_obj(frame.e3),
        "w12": element_to_obj(frame.units[0][1]),
        "w13": element_to_obj(frame.units[0][2]),
    }


def frame_from_obj(d: dict, tol: Tolerances = DEFAULT_TOL) -> ThreeFrame:
    if d.get("kind") != "three-frame":
        raise ValueError(f'expected kind "three-frame", got {d.get("kind")!r}')
    return ThreeFrame.from_projections(
        projection_from_obj(d["p1"], tol),
        projection_from_obj(d["p2"], tol),
        projection_from_obj(d["p3"], tol),
        element_from_obj(d["w12"]),
        element_from_obj(d["w13"]),
        tol,
    )


def save_json(obj: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
