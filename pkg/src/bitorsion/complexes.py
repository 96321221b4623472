"""Symmetric bilinear torsion of a finite cochain complex.

A graded complex 0 -> C^0 -> ... -> C^n -> 0 with a nondegenerate complex
symmetric form on each degree induces, through the canonical isomorphism
between det C^* and det H^*, a bilinear value on the determinant line of
cohomology. That value is what ``torsion_form`` returns.

Convention (pinned, inherited by every other module): the two-term acyclic
complex 0 -> C --a--> C -> 0 with unit forms has torsion a^{-2}. Concretely
the generator lift e^0 contributes Gram 1 in degree 0 and its image a e^1
contributes Gram a^2 in degree 1, entering with exponent (-1)^1.
"""

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL
from .errors import (
    ChainComplexError,
    ConditioningError,
    DegenerateFormError,
    DimensionError,
    ShapeError,
)
from .numkernel import as_cmatrix, lu_det

__all__ = [
    "GradedComplex",
    "BilinearStructure",
    "CohomologyData",
    "cohomology",
    "torsion_form",
    "anomaly_ratio",
    "random_graded_complex",
    "random_bilinear_structure",
]


@dataclass(frozen=True)
class GradedComplex:
    """Finite cochain complex: per-degree dimensions and differentials d_i: C^i -> C^{i+1}."""

    dims: tuple
    differentials: tuple = field(default=())

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if any(d < 0 for d in dims):
            raise DimensionError("negative dimension in complex")
        diffs = []
        for i, d in enumerate(self.differentials):
            a = as_cmatrix(d, name=f"differential[{i}]")
            want = (dims[i + 1], dims[i])
            if a.shape != want:
                raise DimensionError(
                    f"differential {i} has shape {a.shape}, expected {want}"
                )
            diffs.append(a)
        if len(diffs) != max(len(dims) - 1, 0):
            raise DimensionError(
                f"expected {max(len(dims) - 1, 0)} differentials, got {len(diffs)}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "differentials", tuple(diffs))
        scale = max((np.max(np.abs(d)) for d in diffs if d.size), default=0.0)
        for i in range(len(diffs) - 1):
            if diffs[i].size and diffs[i + 1].size:
                dd = diffs[i + 1] @ diffs[i]
                if dd.size and np.max(np.abs(dd)) > DEFAULT_TOL.d_squared_rel * max(scale**2, 1e-300):
                    raise ChainComplexError(
                        f"d^2 != 0 between degrees {i} and {i + 2}", offending_pair=(i, i + 2)
                    )

    @property
    def degree_count(self):
        return len(self.dims)

    def differential(self, i):
        """d_i as a matrix, zero-shaped outside the stored range."""
        if 0 <= i < len(self.differentials):
            return self.differentials[i]
        rows = self.dims[i + 1] if 0 <= i + 1 < len(self.dims) else 0
        cols = self.dims[i] if 0 <= i < len(self.dims) else 0
        return np.zeros((rows, cols), dtype=complex)

    def euler_characteristic(self):
        return sum((-1) ** i * d for i, d in enumerate(self.dims))


@dataclass(frozen=True)
class BilinearStructure:
    """Per-degree complex symmetric nondegenerate Gram matrices."""

    grams: tuple

    def __post_init__(self):
        checked = []
        for i, g in enumerate(self.grams):
            a = as_cmatrix(g, square=True, name=f"gram[{i}]")
            scale = max(np.max(np.abs(a)) if a.size else 0.0, 1e-300)
            if a.size and np.max(np.abs(a - a.T)) > DEFAULT_TOL.symmetry_rel * scale:
                raise DegenerateFormError(f"gram[{i}] not symmetric")
            if a.size and abs(lu_det(a)) <= DEFAULT_TOL.nondegeneracy_rel * scale ** a.shape[0]:
                raise DegenerateFormError(f"gram[{i}] degenerate")
            checked.append(a)
        object.__setattr__(self, "grams", tuple(checked))

    @classmethod
    def standard(cls, dims):
        return cls(tuple(np.eye(d, dtype=complex) for d in dims))

    def matching(self, c: GradedComplex):
        return len(self.grams) == len(c.dims) and all(
            g.shape[0] == d for g, d in zip(self.grams, c.dims)
        )


@dataclass(frozen=True)
class CohomologyData:
    """Per-degree column bases of cocycle representatives for H^i."""

    bases: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "bases", tuple(np.asarray(b, dtype=complex) for b in self.bases)
        )

    @property
    def dims(self):
        return tuple(b.shape[1] for b in self.bases)


def _orth_columns(a, tol_rel=DEFAULT_TOL.rank_rel, floor=0.0):
    """Orthonormal (Hermitian) basis of the column space, rank by relative SVD cut.

    ``floor`` supplies an external scale so that a matrix that is tiny only
    because it was projected to (numerical) zero reports rank zero.
    """
    if a.size == 0 or a.shape[1] == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    r = int(np.sum(s > tol_rel * max(s[0], floor)))
    return u[:, :r]


def _null_columns(a, tol_rel=DEFAULT_TOL.rank_rel):
    """Orthonormal basis of the kernel."""
    n = a.shape[1]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if a.shape[0] == 0 or not a.size:
        return np.eye(n, dtype=complex)
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    r = int(np.sum(s > tol_rel * s[0])) if s.size and s[0] > 0 else 0
    return vh[r:].conj().T


def cohomology(c: GradedComplex, tol=DEFAULT_TOL):
    """Representative bases for H^i = ker d_i / im d_{i-1}, by rank-revealing SVD."""
    bases = []
    for i in range(c.degree_count):
        ker = _null_columns(c.differential(i), tol.rank_rel)
        im = _orth_columns(c.differential(i - 1), tol.rank_rel) if i > 0 else None
        if im is None or im.shape[1] == 0:
            reps = ker
        else:
            # kernel components orthogonal to the coboundary image; the
            # projected columns have scale <= 1, so rank against floor 1
            proj = ker - im @ (im.conj().T @ ker)
            reps = _orth_columns(proj, tol.rank_rel, floor=1.0)
        bases.append(reps)
    return CohomologyData(tuple(bases))


def _lift_basis(d, tol, rng=None):
    """Columns of C^i on which d is injective with image spanning im(d).

    Default: leading right-singular vectors. With ``rng``: the same space,
    recombined by a random invertible matrix and smeared by kernel directions,
    exercising the claimed choice-independence of the torsion.
    """
    if d.size == 0 or min(d.shape) == 0:
        return np.zeros((d.shape[1], 0), dtype=complex)
    u, s, vh = np.linalg.svd(d, full_matrices=True)
    r = int(np.sum(s > tol.rank_rel * s[0])) if s.size and s[0] > 0 else 0
    lift = vh[:r].conj().T
    if rng is not None and r:
        mix = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
        mix += 3.0 * np.eye(r)
        lift = lift @ mix
        ker = vh[r:].conj().T
        if ker.shape[1]:
            noise = rng.standard_normal((ker.shape[1], r)) + 1j * rng.standard_normal(
                (ker.shape[1], r)
            )
            lift = lift + 0.5 * ker @ noise
    return lift


def _project_to_cocycles(reps, ker, tol):
    """Re-express representatives in the kernel, rejecting drifted input."""
    if reps.shape[1] == 0:
        return reps
    coeff = ker.conj().T @ reps
    proj = ker @ coeff
    scale = max(np.linalg.norm(reps), 1e-300)
    if np.linalg.norm(proj - reps) > tol.cocycle_rel * scale:
        raise ShapeError("cohomology representatives are not cocycles to tolerance")
    return proj


def torsion_form(c: GradedComplex, b: BilinearStructure, h: CohomologyData, tol=DEFAULT_TOL, rng=None):
    """b-value of the canonical determinant-line generator induced by h.

    Per degree i, assemble v_i = (d a~_{i-1} | h~_i | a~_i), where a~_i is a
    lift basis transverse to ker d_i and h~_i re-projects the supplied
    representatives into the kernel; return prod_i det(v_i^T G_i v_i)^{(-1)^i}.
    The result does not depend on the choice of lifts: every choice enters
    through a squared determinant.
    """
    if not b.matching(c):
        raise ShapeError("bilinear structure does not match the complex")
    if len(h.bases) != c.degree_count:
        raise ShapeError("cohomology data has wrong number of degrees")

    expected = cohomology(c, tol).dims
    if h.dims != expected:
        raise ShapeError(f"cohomology dims {h.dims} differ from computed {expected}")

    lifts = [_lift_basis(c.differential(i), tol, rng) for i in range(c.degree_count)]
    result = 1.0 + 0.0j
    for i in range(c.degree_count):
        n_i = c.dims[i]
        boundary = (
            c.differential(i - 1) @ lifts[i - 1]
            if i > 0 and lifts[i - 1].shape[1]
            else np.zeros((n_i, 0), dtype=complex)
        )
        ker = _null_columns(c.differential(i), tol.rank_rel)
        reps = _project_to_cocycles(h.bases[i], ker, tol)
        v = np.hstack([boundary, reps, lifts[i]])
        if v.shape[1] != n_i:
            raise ShapeError(
                f"degree {i}: assembled {v.shape[1]} generators for dimension {n_i}"
            )
        if n_i == 0:
            continue
        gram = v.T @ b.grams[i] @ v
        det = lu_det(gram)
        scale = max(np.max(np.abs(gram)), 1e-300)
        if abs(det) <= tol.nondegeneracy_rel * scale**n_i:
            raise ConditioningError(f"degree {i}: torsion Gram numerically singular")
        result = result * det if i % 2 == 0 else result / det
    return result


def anomaly_ratio(c: GradedComplex, automorphisms):
    """Predicted torsion ratio prod_i det(A_i)^{2 (-1)^i} under b'(x,y) = b(Ax, Ay)."""
    if len(automorphisms) != c.degree_count:
        raise ShapeError("need one automorphism per degree")
    ratio = 1.0 + 0.0j
    for i, a in enumerate(automorphisms):
        a = as_cmatrix(a, square=True, name=f"automorphism[{i}]")
        if a.shape[0] != c.dims[i]:
            raise DimensionError(f"automorphism {i} has wrong size")
        det = lu_det(a)
        if det == 0:
            raise DegenerateFormError(f"automorphism {i} is singular")
        ratio = ratio * det**2 if i % 2 == 0 else ratio / det**2
    return ratio


def transform_structure(b: BilinearStructure, automorphisms):
    """The bilinear structure b'(x, y) = b(Ax, Ay), degreewise."""
    grams = tuple(
        np.asarray(a, dtype=complex).T @ g @ np.asarray(a, dtype=complex)
        for g, a in zip(b.grams, automorphisms)
    )
    return BilinearStructure(grams)


def random_graded_complex(rng, dims=None, max_degrees=4, max_total=10):
    """Seeded random complex with exact d^2 = 0 (conjugated normal form)."""
    if dims is None:
        k = int(rng.integers(2, max_degrees + 1))
        while True:
            dims = [int(rng.integers(1, 4)) for _ in range(k)]
            if sum(dims) <= max_total:
                break
    dims = list(dims)
    k = len(dims)
    ranks = []
    prev = 0
    for i in range(k - 1):
        cap = min(dims[i] - prev, dims[i + 1])
        r = int(rng.integers(0, cap + 1)) if cap > 0 else 0
        ranks.append(r)
        prev = r
    normal = []
    for i in range(k - 1):
        n = np.zeros((dims[i + 1], dims[i]), dtype=complex)
        r_in = ranks[i - 1] if i > 0 else 0
        for t in range(ranks[i]):
            n[t, r_in + t] = 1.0
        normal.append(n)
    us = []
    for d in dims:
        while True:
            u = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            if d == 0 or abs(np.linalg.det(u)) > 1e-3:
                break
        us.append(u)
    diffs = [us[i + 1] @ normal[i] @ np.linalg.inv(us[i]) for i in range(k - 1)]
    return GradedComplex(tuple(dims), tuple(diffs))


def random_bilinear_structure(rng, dims):
    """Seeded random symmetric nondegenerate Gram per degree."""
    grams = []
    for d in dims:
        while True:
            a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            g = a + a.T + 2.0 * np.eye(d)
            if d == 0 or abs(np.linalg.det(g)) > 1e-6:
                break
        grams.append(g)
    return BilinearStructure(tuple(grams))
