"""Thom-Smale cochain complexes of Morse systems with flat holonomies.

A MorseSystem records critical points with indices and instantons (gradient
lines between points of adjacent index) carrying a sign and a parallel
transport matrix. The dual cochain complex has C^i of dimension rank * M_i;
its coboundary block from a point x of index i to a point z of index i+1 is
the signed sum of transposed instanton transports, which in rank 1 reduces
to sum of n_gamma * tau_gamma. The critical-point bilinear forms sit
block-diagonally.

``make_circle_morse`` generates the standard circle family: N minima and N
maxima alternating, all transports trivial except one carrying the holonomy.
Its Milnor torsion is (1 - holonomy)^{-2} in rank one.
"""

from dataclasses import dataclass

import numpy as np

from .complexes import BilinearStructure, CohomologyData, GradedComplex, cohomology, torsion_form
from .config import DEFAULT_TOL
from .errors import (
    ChainComplexError,
    DegenerateFormError,
    DimensionError,
    HolonomyError,
    ShapeError,
)
from .numkernel import as_cmatrix, lu_det

__all__ = [
    "CriticalPoint",
    "Instanton",
    "CircleGeometry",
    "MorseSystem",
    "CriticalForms",
    "build_thom_smale",
    "milnor_torsion",
    "milnor_anomaly_check",
    "make_circle_morse",
]


@dataclass(frozen=True)
class CriticalPoint:
    label: str
    index: int


@dataclass(frozen=True)
class Instanton:
    source: str        # higher-index endpoint
    target: str        # lower-index endpoint
    sign: int          # n_gamma in {+1, -1}
    holonomy: np.ndarray

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ShapeError(f"instanton sign must be +-1, got {self.sign}")
        h = as_cmatrix(self.holonomy, square=True, name="holonomy")
        if abs(lu_det(h)) == 0.0:
            raise HolonomyError(f"instanton {self.source}->{self.target} holonomy singular")
        object.__setattr__(self, "holonomy", h)


@dataclass(frozen=True)
class CircleGeometry:
    """Placement data for circle-shaped systems: angles and the seam location."""

    positions: dict          # label -> angle in [0, 2 pi)
    seam_angle: float        # the holonomy-carrying cut sits at this angle
    circumference: float = 2.0 * np.pi


@dataclass(frozen=True)
class MorseSystem:
    points: tuple
    instantons: tuple
    rank: int = 1
    geometry: CircleGeometry | None = None

    def __post_init__(self):
        labels = [p.label for p in self.points]
        if len(set(labels)) != len(labels):
            raise ShapeError("duplicate critical point labels")
        index = {p.label: p.index for p in self.points}
        for ins in self.instantons:
            if ins.source not in index or ins.target not in index:
                raise ShapeError(f"instanton endpoints {ins.source}->{ins.target} unknown")
            if index[ins.target] != index[ins.source] - 1:
                raise ShapeError(
                    f"instanton {ins.source}->{ins.target} violates the index relation"
                )
            if ins.holonomy.shape != (self.rank, self.rank):
                raise DimensionError("instanton holonomy has wrong rank")

    def degree_count(self):
        return max(p.index for p in self.points) + 1 if self.points else 0

    def points_of_index(self, i):
        return [p for p in self.points if p.index == i]

    def morse_counts(self):
        counts = [0] * self.degree_count()
        for p in self.points:
            counts[p.index] += 1
        return counts

    def euler_characteristic(self):
        return sum((-1) ** p.index for p in self.points)


@dataclass(frozen=True)
class CriticalForms:
    """Map label -> symmetric nondegenerate rank x rank matrix b_x."""

    forms: dict

    def __post_init__(self):
        checked = {}
        for label, g in self.forms.items():
            a = as_cmatrix(g, square=True, name=f"form[{label}]")
            scale = max(np.max(np.abs(a)), 1e-300)
            if np.max(np.abs(a - a.T)) > DEFAULT_TOL.symmetry_rel * scale:
                raise DegenerateFormError(f"critical form at {label} not symmetric")
            if abs(lu_det(a)) <= DEFAULT_TOL.nondegeneracy_rel * scale ** a.shape[0]:
                raise DegenerateFormError(f"critical form at {label} degenerate")
            checked[label] = a
        object.__setattr__(self, "forms", checked)

    @classmethod
    def standard(cls, ms: MorseSystem):
        return cls({p.label: np.eye(ms.rank, dtype=complex) for p in ms.points})


def _ordered_labels(ms: MorseSystem):
    """Stable per-degree point ordering used for all matrix layouts."""
    return [[p.label for p in ms.points_of_index(i)] for i in range(ms.degree_count())]


def build_thom_smale(ms: MorseSystem, forms: CriticalForms):
    """Assemble the cochain complex and the block-diagonal bilinear structure.

    Raises ChainComplexError naming an offending (x, z) pair if the signed
    instanton data fails d^2 = 0.
    """
    r = ms.rank
    order = _ordered_labels(ms)
    dims = tuple(r * len(labels) for labels in order)
    col_of = [{lab: j for j, lab in enumerate(labels)} for labels in order]
    index = {p.label: p.index for p in ms.points}

    diffs = []
    for i in range(len(dims) - 1):
        d = np.zeros((dims[i + 1], dims[i]), dtype=complex)
        for ins in ms.instantons:
            if index[ins.source] != i + 1:
                continue
            row = col_of[i + 1][ins.source]
            col = col_of[i][ins.target]
            # dual complex: cochains pick up the transposed transport
            d[row * r:(row + 1) * r, col * r:(col + 1) * r] += ins.sign * ins.holonomy.T
        diffs.append(d)

    try:
        complex_ = GradedComplex(dims, tuple(diffs))
    except ChainComplexError as exc:
        i, _ = exc.offending_pair
        pair = (order[i][0] if order[i] else "?", order[i + 2][0] if order[i + 2] else "?")
        raise ChainComplexError(
            f"instanton data inconsistent: d^2 != 0 near degrees {i}..{i + 2}",
            offending_pair=pair,
        ) from exc

    grams = []
    for i, labels in enumerate(order):
        g = np.zeros((dims[i], dims[i]), dtype=complex)
        for j, lab in enumerate(labels):
            if lab not in forms.forms:
                raise ShapeError(f"no critical form supplied for {lab}")
            g[j * r:(j + 1) * r, j * r:(j + 1) * r] = forms.forms[lab]
        grams.append(g)
    return complex_, BilinearStructure(tuple(grams))


def milnor_torsion(ms: MorseSystem, forms: CriticalForms, h: CohomologyData | None = None,
                   tol=DEFAULT_TOL, rng=None):
    """Milnor symmetric bilinear torsion of the Thom-Smale pair.

    ``h`` may be omitted; the computed cohomology representatives are used,
    which matters only in the non-acyclic case.
    """
    complex_, structure = build_thom_smale(ms, forms)
    if h is None:
        h = cohomology(complex_, tol)
    return torsion_form(complex_, structure, h, tol=tol, rng=rng)


def milnor_anomaly_check(ms: MorseSystem, forms: CriticalForms, forms1: CriticalForms):
    """Predicted torsion ratio prod_x det(b_x^{-1} b1_x)^{(-1)^{ind x}}."""
    ratio = 1.0 + 0.0j
    for p in ms.points:
        b0 = forms.forms[p.label]
        b1 = forms1.forms[p.label]
        det = lu_det(np.linalg.solve(b0, b1))
        ratio = ratio * det if p.index % 2 == 0 else ratio / det
    return ratio


def make_circle_morse(pair_count, holonomy, seam_arc=None, rank=None):
    """Circle with ``pair_count`` minima and maxima alternating.

    Points sit at angles k*pi/pair_count, minima on even slots. Arc j runs
    counterclockwise from point j to point j+1; exactly one instanton (the
    one whose arc contains the seam, by default the last arc, closing
    through angle 2 pi) carries the holonomy, every other transport is the
    identity. Signs alternate so that trivial holonomy yields the constant
    cocycle: the coboundary row of each maximum is (+1, -1) against its two
    neighbouring minima.
    """
    n = int(pair_count)
    if n < 1:
        raise DimensionError("pair_count must be >= 1")
    hol = np.asarray(holonomy, dtype=complex)
    if hol.ndim == 0:
        if hol == 0:
            raise HolonomyError("holonomy must be nonzero")
        hol = hol.reshape(1, 1)
    hol = as_cmatrix(hol, square=True, name="holonomy")
    r = hol.shape[0]
    if rank is not None and rank != r:
        raise DimensionError("rank does not match holonomy size")
    if abs(lu_det(hol)) == 0.0:
        raise HolonomyError("holonomy must be invertible")

    if seam_arc is None:
        seam_arc = 2 * n - 1
    seam_arc = int(seam_arc) % (2 * n)

    points = []
    positions = {}
    step = np.pi / n
    for k in range(2 * n):
        lab = f"m{k // 2}" if k % 2 == 0 else f"M{k // 2}"
        points.append(CriticalPoint(lab, k % 2))
        positions[lab] = k * step

    eye = np.eye(r, dtype=complex)
    instantons = []
    for k in range(n):
        maxi = f"M{k}"
        # arc 2k runs m_k -> M_k; arc 2k+1 runs M_k -> m_{k+1 mod n}
        left_arc, right_arc = 2 * k, 2 * k + 1
        left_min, right_min = f"m{k}", f"m{(k + 1) % n}"
        instantons.append(
            Instanton(maxi, left_min, -1, hol if left_arc == seam_arc else eye)
        )
        instantons.append(
            Instanton(maxi, right_min, +1, hol if right_arc == seam_arc else eye)
        )

    seam_angle = (seam_arc + 0.5) * step
    geometry = CircleGeometry(positions=positions, seam_angle=seam_angle)
    return MorseSystem(tuple(points), tuple(instantons), rank=r, geometry=geometry)
