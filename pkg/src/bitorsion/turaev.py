"""Euler structures on the circle, Turaev torsion, and Fox-calculus Alexander polynomials.

An Euler structure here is combinatorial: a base point and, for each critical
point, a spider path recorded as a winding count (full loops prepended to the
direct counterclockwise path from the base point). The Turaev torsion parallel
transports a single reference form b0 from the base point along each spider
path and feeds the resulting critical forms to the Milnor torsion. With
vanishing Euler characteristic the value depends only on the Euler structure,
which on the circle is classified by one integer.

The Alexander polynomial is computed by Fox free differential calculus on a
deficiency-1 presentation, abelianized to Z[t, 1/t]; determinants are taken
exactly (integer Bareiss elimination plus interpolation) and normalized so the
lowest exponent is zero and the leading coefficient positive.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DimensionError,
    EulerCharacteristicError,
    HolonomyError,
    PresentationError,
    ShapeError,
    UnsupportedSystemError,
)
from .morse import CriticalForms, MorseSystem, milnor_torsion
from .numkernel import as_cmatrix, lu_det

__all__ = [
    "Representation",
    "EulerStructure",
    "turaev_torsion",
    "euler_class_circle",
    "KnotPresentation",
    "fox_alexander",
    "knot_from_braid",
    "IntPoly",
]


@dataclass(frozen=True)
class Representation:
    """Fundamental-group representation: generator label -> invertible matrix."""

    images: dict
    rank: int

    def __post_init__(self):
        checked = {}
        for gen, m in self.images.items():
            a = as_cmatrix(m, square=True, name=f"rep[{gen}]")
            if a.shape != (self.rank, self.rank):
                raise DimensionError(f"rep[{gen}] has wrong size")
            if abs(lu_det(a)) == 0.0:
                raise HolonomyError(f"rep[{gen}] is singular")
            checked[gen] = a
        object.__setattr__(self, "images", checked)

    def loop(self):
        """Image of the distinguished circle generator."""
        if len(self.images) != 1:
            raise ShapeError("circle representation must have a single generator")
        return next(iter(self.images.values()))


@dataclass(frozen=True)
class EulerStructure:
    """Base point plus per-point spider windings (full loops before the direct path)."""

    base_point: str
    windings: dict


def _circle_data(ms: MorseSystem):
    if ms.geometry is None:
        raise UnsupportedSystemError("operation requires a circle-shaped Morse system")
    return ms.geometry


def ensure_circle_geometry(ms: MorseSystem):
    """Attach canonical circle geometry to a bare alternating min/max system.

    Points are laid out in their given order, minima on even slots, with the
    seam inside the closing arc, matching ``make_circle_morse``'s layout.
    """
    if ms.geometry is not None:
        return ms
    mins = [p for p in ms.points if p.index == 0]
    maxs = [p for p in ms.points if p.index == 1]
    if len(mins) != len(maxs) or not mins or ms.degree_count() != 2:
        raise UnsupportedSystemError(
            "cannot synthesize circle geometry: need equal counts of minima and maxima"
        )
    from dataclasses import replace
    from .morse import CircleGeometry

    step = np.pi / len(mins)
    positions = {}
    for k, (mn, mx) in enumerate(zip(mins, maxs)):
        positions[mn.label] = 2 * k * step
        positions[mx.label] = (2 * k + 1) * step
    seam = (2 * len(mins) - 0.5) * step
    return replace(ms, geometry=CircleGeometry(positions=positions, seam_angle=seam))


def _direct_path_crossings(geom, base_angle, target_angle):
    """Seam crossings of the direct counterclockwise path base -> target."""
    width = (target_angle - base_angle) % geom.circumference
    offset = (geom.seam_angle - base_angle) % geom.circumference
    return 1 if 0 < offset < width else 0


def spider_transport(ms: MorseSystem, rep: Representation, e: EulerStructure, label):
    """rho(sigma_x): loop^windings followed by the direct ccw path."""
    geom = _circle_data(ms)
    if e.base_point not in geom.positions:
        raise ShapeError(f"unknown base point {e.base_point}")
    loop = rep.loop()
    w = int(e.windings.get(label, 0))
    k = _direct_path_crossings(
        geom, geom.positions[e.base_point], geom.positions[label]
    )
    return np.linalg.matrix_power(loop, w + k)


def _check_rep_consistency(ms: MorseSystem, rep: Representation):
    """The loop image must reproduce the product of instanton transports around the circle."""
    loop = rep.loop()
    prod = np.eye(ms.rank, dtype=complex)
    for ins in ms.instantons:
        prod = prod @ ins.holonomy
    # all but the seam transport are the identity in canonical systems, so the
    # unordered product is the full monodromy
    if np.max(np.abs(prod - loop)) > 1e-9 * max(np.max(np.abs(loop)), 1.0):
        raise HolonomyError("representation inconsistent with instanton holonomies")


def turaev_torsion(ms: MorseSystem, rep: Representation, e: EulerStructure, b0, h=None, rng=None):
    """Milnor torsion with forms transported from b0 along the spider paths.

    Requires chi = 0. The value depends only on (bundle, Euler structure,
    flow): base point, b0 and individual spider representatives may be
    re-chosen freely at fixed Euler class.
    """
    if ms.euler_characteristic() != 0:
        raise EulerCharacteristicError(
            f"Turaev torsion needs chi = 0, got {ms.euler_characteristic()}"
        )
    _check_rep_consistency(ms, rep)
    b0 = as_cmatrix(b0, square=True, name="b0")
    if b0.shape != (ms.rank, ms.rank):
        raise DimensionError("b0 has wrong rank")
    forms = {}
    for p in ms.points:
        g = spider_transport(ms, rep, e, p.label)
        ginv = np.linalg.inv(g)
        forms[p.label] = ginv.T @ b0 @ ginv
    return milnor_torsion(ms, CriticalForms(forms), h=h, rng=rng)


def euler_class_circle(ms: MorseSystem, e: EulerStructure):
    """Integer class of sum_x (-1)^{ind x} sigma_x in the Eul(S^1) ~ Z torsor.

    Measured as the signed multiplicity with which the spider chain covers
    the seam point; canonical spiders (zero windings, base at the first
    minimum, seam on the closing arc) represent class zero.
    """
    geom = _circle_data(ms)
    base = geom.positions[e.base_point]
    total = 0
    for p in ms.points:
        w = int(e.windings.get(p.label, 0))
        k = _direct_path_crossings(geom, base, geom.positions[p.label])
        total += (-1) ** p.index * (w + k)
    return total


# ----------------------------------------------------------------------------
# Fox calculus
# ----------------------------------------------------------------------------


class IntPoly:
    """Sparse integer Laurent polynomial in one variable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {int(e): int(c) for e, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def const(cls, c):
        return cls({0: c})

    @classmethod
    def monomial(cls, e, c=1):
        return cls({e: c})

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return IntPoly(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) - c
        return IntPoly(out)

    def __neg__(self):
        return IntPoly({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return IntPoly(out)

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self):
        return not self.coeffs

    def __call__(self, t):
        return sum(c * t**e for e, c in self.coeffs.items())

    def min_exp(self):
        return min(self.coeffs) if self.coeffs else 0

    def max_exp(self):
        return max(self.coeffs) if self.coeffs else 0

    def shifted(self, k):
        return IntPoly({e + k: c for e, c in self.coeffs.items()})

    def reversed_var(self):
        """p(1/t), re-normalized to lowest exponent zero."""
        q = IntPoly({-e: c for e, c in self.coeffs.items()})
        return q.shifted(-q.min_exp())

    def normalized(self):
        """Lowest exponent zero, positive leading coefficient, content 1."""
        if self.is_zero():
            return IntPoly()
        p = self.shifted(-self.min_exp())
        from math import gcd
        g = 0
        for c in p.coeffs.values():
            g = gcd(g, abs(c))
        if g > 1:
            p = IntPoly({e: c // g for e, c in p.coeffs.items()})
        if p.coeffs[p.max_exp()] < 0:
            p = -p
        return p

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mono = "1" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if e == 0:
                body = f"{abs(c)}"
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            terms.append(("- " if c < 0 else "+ ") + body)
        lead = terms[0][2:] if terms[0].startswith("+ ") else "-" + terms[0][2:]
        return " ".join([lead] + terms[1:])

    __repr__ = __str__


@dataclass(frozen=True)
class KnotPresentation:
    """Deficiency-1 group presentation; relators are words like 'a b A B'.

    Uppercase letters denote inverses. Every relator must have zero total
    exponent sum, which every conjugation relation x w y^-1 w^-1 satisfies.
    """

    generators: tuple
    relators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise PresentationError("duplicate generators")
        if len(self.relators) != max(len(gens) - 1, 0):
            raise PresentationError(
                f"deficiency-1 presentation needs {len(gens) - 1} relators, "
                f"got {len(self.relators)}"
            )
        for word in self.relators:
            letters = parse_word(word, gens)
            if sum(s for _, s in letters) != 0:
                raise PresentationError(f"relator '{word}' has nonzero exponent sum")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(self.relators))


def parse_word(word, generators):
    """'a b A' -> [(idx_a, +1), (idx_b, +1), (idx_a, -1)]; whitespace optional for 1-char names."""
    gset = {g: i for i, g in enumerate(generators)}
    tokens = word.split() if " " in word.strip() else list(word.strip())
    out = []
    for tok in tokens:
        if not tok:
            continue
        if tok in gset:
            out.append((gset[tok], +1))
        elif tok.lower() in gset and tok != tok.lower():
            out.append((gset[tok.lower()], -1))
        else:
            raise PresentationError(f"unknown letter '{tok}' in word '{word}'")
    return out


def _fox_row(letters, n_gens):
    """Abelianized Fox derivatives of one relator with respect to every generator.

    d(uv)/dx = du/dx + u dv/dx with u abelianized to t^{exponent sum}.
    """
    row = [IntPoly() for _ in range(n_gens)]
    prefix = 0
    for g, s in letters:
        if s == +1:
            row[g] = row[g] + IntPoly.monomial(prefix)
            prefix += 1
        else:
            prefix -= 1
            row[g] = row[g] - IntPoly.monomial(prefix)
    return row


def _bareiss_int_det(mat):
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    n = len(mat)
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _poly_det(mat):
    """Exact determinant of an IntPoly matrix by evaluation/interpolation."""
    n = len(mat)
    if n == 0:
        return IntPoly.const(1)
    # clear negative exponents rowwise; track the total monomial shift
    shift = 0
    rows = []
    for row in mat:
        m = min((p.min_exp() for p in row if not p.is_zero()), default=0)
        m = min(m, 0)
        shift += m
        rows.append([p.shifted(-m) for p in row])
    degree = sum(
        max((p.max_exp() for p in row if not p.is_zero()), default=0) for row in rows
    )
    points = list(range(1, degree + 2))
    values = [_bareiss_int_det([[p(t) for p in row] for row in rows]) for t in points]
    # Lagrange interpolation with exact rationals
    coeffs = [Fraction(0)] * (degree + 1)
    for t_i, v in zip(points, values):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for t_j in points:
            if t_j == t_i:
                continue
            denom *= Fraction(t_i - t_j)
            new = [Fraction(0)] * (len(basis) + 1)
            for p_idx, c in enumerate(basis):
                new[p_idx + 1] += c
                new[p_idx] -= c * t_j
            basis = new
        w = Fraction(v) / denom
        for p_idx, c in enumerate(basis):
            coeffs[p_idx] += c * w
    out = {}
    for e, c in enumerate(coeffs):
        if c != 0:
            if c.denominator != 1:
                raise PresentationError("interpolation produced non-integer coefficients")
            out[e + shift] = int(c)
    return IntPoly(out)


def fox_alexander(p: KnotPresentation):
    """Alexander polynomial via the Fox matrix with one column deleted.

    Returns the normalized IntPoly (lowest exponent 0, positive leading
    coefficient, integer content 1).
    """
    n = len(p.generators)
    if n == 0:
        raise PresentationError("presentation needs at least one generator")
    if n == 1:
        return IntPoly.const(1)
    rows = [_fox_row(parse_word(w, p.generators), n) for w in p.relators]
    minor = [row[1:] for row in rows]  # delete the first generator's column
    det = _poly_det(minor)
    if det.is_zero():
        raise PresentationError("Alexander matrix minor vanished; not a knot presentation?")
    return det.normalized()


def knot_from_braid(word, strands):
    """Wirtinger-style presentation of the closure of a braid word.

    ``word`` lists nonzero integers: +i is the positive crossing of strands
    (i, i+1), -i the negative one. The closure must be a knot (single
    component). Generators are the diagram arcs; each crossing contributes a
    conjugation relator, closure identifications contribute the rest, and one
    redundant relator is dropped to reach deficiency 1.
    """
    k = int(strands)
    if k < 2:
        raise PresentationError("braid needs at least 2 strands")
    perm = list(range(k))
    for s in word:
        i = abs(int(s)) - 1
        if not 0 <= i < k - 1:
            raise PresentationError(f"crossing {s} out of range for {k} strands")
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    # single cycle check on the closure permutation
    seen, j, cnt = set(), 0, 0
    while j not in seen:
        seen.add(j)
        j = perm[j]
        cnt += 1
    if cnt != k:
        raise PresentationError("braid closure is a link, not a knot")

    arcs = [f"g{i}" for i in range(k)]
    current = list(arcs)
    gens = list(arcs)
    relators = []
    fresh = k
    for s in word:
        i = abs(int(s)) - 1
        a, b = current[i], current[i + 1]
        new = f"g{fresh}"
        fresh += 1
        gens.append(new)
        if s > 0:
            # strand i+1 passes over: arc a ends, new = b a b^{-1}
            relators.append(f"{b} {a} {_inv(b)} {_inv(new)}")
            current[i], current[i + 1] = b, new
        else:
            # strand i passes over: arc b ends, new = a^{-1} b a
            relators.append(f"{_inv(a)} {b} {a} {_inv(new)}")
            current[i], current[i + 1] = new, a
    closure = [f"{current[j]} {_inv(arcs[j])}" for j in range(k)]
    relators.extend(closure[:-1])  # drop one redundant relator
    return KnotPresentation(tuple(gens), tuple(relators))


def _inv(gen):
    return gen.upper() if gen == gen.lower() else gen.lower()
