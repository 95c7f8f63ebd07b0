"""The translation lattice Z^n modulo the diagonal, and its affine symmetry
group (translations extended by coordinate permutations).

Conventions used throughout the package:

* A lattice class is stored by its canonical representative, the integer
  vector shifted so that its minimum entry is 0.
* The type of a class is the coordinate sum mod n; the diagonal has sum n,
  so the type is representative-free.
* Length functions: project the translation part onto the fixed space of the
  permutation part (replace each entry by the average over its cycle), sort
  the result in descending order, and take consecutive gaps.  At the
  "geodesic" scale the gaps are returned as they are; at the "factorial"
  scale they are multiplied by n!, which clears every cycle denominator and
  makes all values integers.
* Faces of the dominant cone x1 >= ... >= xn are indexed by the set S of
  positions where equality is forced.  A face with blocks (n1, ..., nr) is
  coordinatized by the strictly decreasing block values t1 > ... > t_{r-1}
  > t_r = 0, so its lattice points live in Z^{r-1} ("t-coordinates").
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .errors import DivergentSeriesError, SingularMatrixError
from .intmat import fraction_inverse, mat_vec
from .polynomials import MultiRational, norm_exponent

GEODESIC = "geodesic"
FACTORIAL = "factorial"


def scale_factor(n: int, scale: str) -> int:
    if scale == GEODESIC:
        return 1
    if scale == FACTORIAL:
        return math.factorial(n)
    raise ValueError(f"unknown scale {scale!r}")


@dataclass(frozen=True)
class LatticeVector:
    """A class of Z^n modulo the diagonal, in canonical form (min entry 0)."""

    n: int
    coords: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("rank must be at least 2")
        if len(self.coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(self.coords)}")
        if min(self.coords) != 0:
            raise ValueError("not canonical: minimum coordinate must be 0")

    @classmethod
    def from_raw(cls, raw: Sequence[int]) -> "LatticeVector":
        raw = [int(x) for x in raw]
        m = min(raw)
        return cls(len(raw), tuple(x - m for x in raw))

    @classmethod
    def zero(cls, n: int) -> "LatticeVector":
        return cls(n, (0,) * n)

    @classmethod
    def basis_vector(cls, n: int, i: int) -> "LatticeVector":
        """The i-th standard direction, 1-based; i = n is minus the sum of the rest."""
        if not 1 <= i <= n:
            raise ValueError("index out of range")
        return cls.from_raw(tuple(1 if j == i - 1 else 0 for j in range(n)))

    @classmethod
    def from_basis_coords(cls, n: int, c: Sequence[int]) -> "LatticeVector":
        """From coordinates in the basis e_1 .. e_{n-1} (e_n = -sum e_i)."""
        if len(c) != n - 1:
            raise ValueError(f"expected {n - 1} basis coordinates")
        return cls.from_raw(tuple(c) + (0,))

    def to_basis_coords(self) -> Tuple[int, ...]:
        last = self.coords[-1]
        return tuple(x - last for x in self.coords[:-1])

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector.from_raw(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector.from_raw(tuple(-a for a in self.coords))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return self + (-other)

    def scaled(self, k: int) -> "LatticeVector":
        return LatticeVector.from_raw(tuple(k * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)


def canonicalize(raw: Sequence[int], n: Optional[int] = None) -> LatticeVector:
    """Canonical representative of a raw integer vector modulo the diagonal."""
    if n is not None and len(raw) != n:
        raise ValueError(f"expected length {n}, got {len(raw)}")
    if len(raw) < 2:
        raise ValueError("rank must be at least 2")
    return LatticeVector.from_raw(raw)


def type_of(a: LatticeVector) -> int:
    """Coordinate sum mod n; invariant under the choice of representative."""
    return sum(a.coords) % a.n


@dataclass(frozen=True)
class Permutation:
    """Permutation of {0, .., n-1}; images[i] is the image of i."""

    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"{self.images!r} is not a permutation")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)(cyc[:1])):
                images[a] = b
        return cls(tuple(images))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self*other)(i) = self(other(i))."""
        return Permutation(tuple(self.images[other.images[i]] for i in range(self.n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def act_raw(self, vec: Sequence) -> tuple:
        """Permute coordinates: entry i of vec moves to position images[i]."""
        out = [None] * self.n
        for i, x in enumerate(vec):
            out[self.images[i]] = x
        return tuple(out)

    def act(self, v: LatticeVector) -> LatticeVector:
        return LatticeVector.from_raw(self.act_raw(v.coords))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i]
            out.append(tuple(cyc))
        return out

    def basis_matrix(self) -> List[List[int]]:
        """Action on basis coordinates (e_1 .. e_{n-1}, with e_n = -sum)."""
        n = self.n
        cols = []
        for i in range(n - 1):
            img = self.images[i]
            if img < n - 1:
                col = [1 if r == img else 0 for r in range(n - 1)]
            else:
                col = [-1] * (n - 1)
            cols.append(col)
        return [[cols[j][i] for j in range(n - 1)] for i in range(n - 1)]


def all_permutations(n: int):
    for images in itertools.permutations(range(n)):
        yield Permutation(images)


@dataclass(frozen=True)
class AffineElement:
    """Element (v, p) of the affine group: translate by v after permuting by p."""

    v: LatticeVector
    p: Permutation

    def __post_init__(self):
        if self.v.n != self.p.n:
            raise ValueError("rank mismatch between translation and permutation")

    @property
    def n(self) -> int:
        return self.v.n

    @classmethod
    def identity(cls, n: int) -> "AffineElement":
        return cls(LatticeVector.zero(n), Permutation.identity(n))

    @classmethod
    def translation(cls, v: LatticeVector) -> "AffineElement":
        return cls(v, Permutation.identity(v.n))

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        return AffineElement(self.v + self.p.act(other.v), self.p.compose(other.p))

    def inverse(self) -> "AffineElement":
        pinv = self.p.inverse()
        return AffineElement(pinv.act(-self.v), pinv)

    def conjugate_by(self, h: "AffineElement") -> "AffineElement":
        return h * self * h.inverse()


@dataclass(frozen=True)
class LengthVector:
    """The n-1 conjugation-invariant lengths of an affine element."""

    values: Tuple[Fraction, ...]
    scale: str

    def __post_init__(self):
        if any(x < 0 for x in self.values):
            raise ValueError("length values must be nonnegative")

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.values)

    def exponent_tuple(self):
        return norm_exponent(self.values)

    def nonzero_positions(self) -> List[int]:
        return [j for j, x in enumerate(self.values, start=1) if x != 0]


def length_vector(g: AffineElement, scale: str = GEODESIC) -> LengthVector:
    """Lengths of g: cycle-average the translation part, sort, take gaps.

    Conjugation-invariant, and integer-valued on the whole group at the
    factorial scale.
    """
    n = g.n
    f = scale_factor(n, scale)
    avg = [Fraction(0)] * n
    for cyc in g.p.cycles():
        s = Fraction(sum(g.v.coords[i] for i in cyc), len(cyc))
        for i in cyc:
            avg[i] = s
    avg.sort(reverse=True)
    values = tuple(f * (avg[j] - avg[j + 1]) for j in range(n - 1))
    return LengthVector(values, scale)


def is_face(vertices: Sequence[LatticeVector]) -> bool:
    """Whether the classes span a face of the building's simplicial structure.

    True iff the classes admit representatives forming a chain
    w0 <= w1 <= ... <= wk <= w0 + 1 componentwise (all distinct, in some
    order).  Invariant under permuting the input and under a common
    translation.
    """
    if not vertices:
        raise ValueError("need at least one vertex")
    n = vertices[0].n
    if any(v.n != n for v in vertices):
        raise ValueError("mixed ranks")
    if len(set(vertices)) != len(vertices):
        raise ValueError("duplicate vertices")
    if len(vertices) > n:
        return False
    if len(vertices) == 1:
        return True
    # a chain rotates, so the first class may be fixed as the bottom w0
    base = vertices[0].coords
    lift_choices: List[List[Tuple[int, ...]]] = []
    for v in vertices[1:]:
        lo = max(b - c for b, c in zip(base, v.coords))
        hi = min(b + 1 - c for b, c in zip(base, v.coords))
        lifts = [tuple(c + m for c in v.coords) for m in range(lo, hi + 1)]
        if not lifts:
            return False
        lift_choices.append(lifts)

    def comparable(a, b):
        return all(x <= y for x, y in zip(a, b)) or all(x >= y for x, y in zip(a, b))

    for combo in itertools.product(*lift_choices):
        if all(comparable(a, b) for a, b in itertools.combinations(combo, 2)):
            return True
    return False


@dataclass(frozen=True)
class FaceDescriptor:
    """A face of the dominant cone: S is the set of forced equalities."""

    n: int
    zero_set: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not all(1 <= j <= self.n - 1 for j in self.zero_set):
            raise ValueError("zero_set must be a subset of {1, .., n-1}")

    @property
    def blocks(self) -> Tuple[int, ...]:
        sizes = []
        cur = 1
        for j in range(1, self.n):
            if j in self.zero_set:
                cur += 1
            else:
                sizes.append(cur)
                cur = 1
        sizes.append(cur)
        return tuple(sizes)

    @property
    def dim(self) -> int:
        """Dimension of the face cone in t-coordinates."""
        return len(self.blocks) - 1

    def boundary_positions(self) -> Tuple[int, ...]:
        """1-based positions j where the face's length l_j is supported."""
        out = []
        acc = 0
        for size in self.blocks[:-1]:
            acc += size
            out.append(acc)
        return tuple(out)


def all_faces(n: int):
    for r in range(n):
        for combo in itertools.combinations(range(1, n), r):
            yield FaceDescriptor(n, frozenset(combo))


@dataclass(frozen=True)
class ConeDecomposition:
    """cone ∩ lattice = disjoint union of base_point + N0-span of generators.

    Points are in the t-coordinates of the face (dimension r-1); the map
    (base, k1..kr) -> base + sum k_j a_j is a bijection onto the lattice
    points of the open cone.
    """

    base_points: Tuple[Tuple[int, ...], ...]
    generators: Tuple[Tuple[int, ...], ...]


def _face_alphas(k: int):
    """Linear forms cutting out t1 > t2 > ... > tk > 0 on t-coordinates."""
    def alpha(i, t):
        return t[i] - t[i + 1] if i + 1 < k else t[i]
    return [lambda t, i=i: alpha(i, t) for i in range(k)]


def cone_decompose(face: FaceDescriptor,
                   lattice_basis: Optional[Sequence[Sequence[int]]] = None
                   ) -> ConeDecomposition:
    """Decompose (open face cone) ∩ lattice into shifted free monoids.

    The lattice is given by a square integer basis matrix in t-coordinates
    (columns are generators); by default it is Z^{r-1}, the t-coordinate
    image of the full translation lattice.  Generator a_j is the minimal
    lattice vector on the j-th edge of the cone; base points are the unique
    coset representatives of the generator span that lie in the cone but
    leave it when any single generator is subtracted.
    """
    k = face.dim
    if k == 0:
        return ConeDecomposition(((),), ())
    if lattice_basis is None:
        basis = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    else:
        basis = [[int(x) for x in row] for row in lattice_basis]
        if len(basis) != k or any(len(row) != k for row in basis):
            raise ValueError(f"lattice basis must be {k}x{k} for this face")
    try:
        binv = fraction_inverse(basis)
    except SingularMatrixError:
        raise SingularMatrixError("degenerate lattice: basis is rank deficient")

    alphas = _face_alphas(k)

    def in_cone(t):
        return all(a(t) >= 1 for a in alphas)

    # minimal lattice vector on each edge ray (1,..,1,0,..,0)
    generators = []
    for j in range(1, k + 1):
        d = [1] * j + [0] * (k - j)
        x = [sum(row[i] * d[i] for i in range(k)) for row in binv]
        mult = 1
        for val in x:
            mult = mult * val.denominator // math.gcd(mult, val.denominator)
        generators.append(tuple(mult * di for di in d))

    # coset representatives of the generator span inside the lattice
    from .intmat import snf_with_transforms, snf_diagonal, unimodular_inverse

    gen_cols = [[generators[j][i] for j in range(k)] for i in range(k)]
    x_mat = [[None] * k for _ in range(k)]
    for j in range(k):
        col = [sum(binv[i][r] * gen_cols[r][j] for r in range(k)) for i in range(k)]
        for i in range(k):
            if col[i].denominator != 1:
                raise SingularMatrixError("generators do not lie in the lattice")
            x_mat[i][j] = int(col[i])
    u, d, v = snf_with_transforms(x_mat)
    diag = snf_diagonal(d)
    if any(x == 0 for x in diag):
        raise SingularMatrixError("degenerate lattice: generator span is rank deficient")
    uinv = unimodular_inverse(u)

    total_gen = tuple(sum(g[i] for g in generators) for i in range(k))
    gen_alpha = [alphas[i](generators[i]) for i in range(k)]

    base_points = []
    for combo in itertools.product(*(range(x) for x in diag)):
        y = mat_vec(uinv, list(combo))
        t = tuple(sum(basis[i][r] * y[r] for r in range(k)) for i in range(k))
        # push into the open cone along the sum of the generators
        shift = 0
        for i in range(k):
            need = 1 - alphas[i](t)
            if need > 0:
                shift = max(shift, -(-need // gen_alpha[i]))
        t = tuple(x + shift * s for x, s in zip(t, total_gen))
        # greedy minimal point of the coset inside the cone
        moved = True
        while moved:
            moved = False
            for g in generators:
                cand = tuple(x - y for x, y in zip(t, g))
                if in_cone(cand):
                    t = cand
                    moved = True
                    break
        base_points.append(t)
    return ConeDecomposition(tuple(sorted(base_points)), tuple(generators))


def face_length_exponents(face: FaceDescriptor, scale: str = GEODESIC
                          ) -> Callable[[Sequence[int]], Tuple[int, ...]]:
    """The linear map t-coordinates -> length exponents (l_1, .., l_{n-1}).

    On the face, l is supported on the block boundaries: the boundary after
    block i carries t_i - t_{i+1} (with t_r = 0).
    """
    n = face.n
    f = scale_factor(n, scale)
    positions = face.boundary_positions()
    k = face.dim

    def weight(t: Sequence[int]) -> Tuple[int, ...]:
        exps = [0] * (n - 1)
        for idx, pos in enumerate(positions):
            nxt = t[idx + 1] if idx + 1 < k else 0
            exps[pos - 1] = f * (t[idx] - nxt)
        return tuple(exps)

    return weight


def rational_cone_sum(dec: ConeDecomposition,
                      weight: Callable[[Sequence[int]], Sequence[int]],
                      nvars: Optional[int] = None) -> MultiRational:
    """Sum of u^{weight(x)} over the decomposed cone, as an exact rational.

    ``weight`` must be linear on the cone's span with nonnegative integer
    values on the lattice.  Each generator contributes a geometric factor
    1/(1 - u^{weight(a_j)}); a generator of weight zero makes the series
    diverge and raises.
    """
    if nvars is None:
        probe = dec.base_points[0] if dec.base_points else ()
        nvars = len(weight(probe))
    factors = []
    for g in dec.generators:
        w = tuple(int(x) for x in weight(g))
        if any(x < 0 for x in w):
            raise ValueError(f"negative weight exponent {w} on generator {g}")
        if all(x == 0 for x in w):
            raise DivergentSeriesError(f"generator {g} has zero weight")
        factors.append(w)
    numerator = {}
    for b in dec.base_points:
        w = tuple(int(x) for x in weight(b))
        if any(x < 0 for x in w):
            raise ValueError(f"negative weight exponent {w} on base point {b}")
        numerator[w] = numerator.get(w, 0) + 1
    out = MultiRational(nvars)
    out.add_piece(numerator, factors)
    return out
