"""Finite-index subgroups of the translation lattice and their quotients.

The lattice is identified with Z^{n-1} through the basis e_1, .., e_{n-1}
(with e_n = -(e_1 + ... + e_{n-1})), so a finite-index subgroup is a square
integer matrix whose columns are its generators.  The quotient group, its
characters and their Satake parameters are all computed exactly; characters
evaluate to fractions of a full turn rather than floating complex numbers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

from .errors import SingularMatrixError, TypeZeroViolationError
from .intmat import (
    adjugate_and_det,
    det_bareiss,
    mat_copy,
    mat_mul,
    mat_vec,
    snf_diagonal,
    snf_with_transforms,
)
from .lattice import LatticeVector, Permutation


def smith_normal_form(m: Sequence[Sequence[int]]):
    """Smith normal form of a nonsingular square integer matrix.

    Returns (U, D, V) with U m V = D diagonal, d1 | d2 | ..., and U, V
    unimodular.  Raises on singular input.
    """
    a = mat_copy(m)
    if not a or any(len(row) != len(a) for row in a):
        raise ValueError("matrix must be square")
    if det_bareiss(a) == 0:
        raise SingularMatrixError("matrix is singular")
    return snf_with_transforms(a)


class TranslationSubgroup:
    """Finite-index subgroup of the translation lattice.

    ``basis`` is an (n-1) x (n-1) integer matrix whose columns are the
    generators in e-coordinates.  By default every generator must have type
    zero mod n, so that vertex types descend to the quotient; pass
    ``check_types=False`` to allow untyped subgroups (only the plain Cayley
    graph and its classical zeta make sense then).
    """

    def __init__(self, n: int, basis: Sequence[Sequence[int]], *,
                 check_types: bool = True):
        self.n = int(n)
        if self.n < 2:
            raise ValueError("rank must be at least 2")
        self.basis = tuple(tuple(int(x) for x in row) for row in basis)
        k = self.n - 1
        if len(self.basis) != k or any(len(row) != k for row in self.basis):
            raise ValueError(f"basis must be {k}x{k}")
        self.det = det_bareiss(self.basis)
        if self.det == 0:
            raise SingularMatrixError("subgroup basis is singular")
        self.index = abs(self.det)
        self.type_checked = bool(check_types)
        if check_types:
            for col, tau in self.type_violations():
                raise TypeZeroViolationError(col, tau, self.n)
        # adjugate gives exact membership: x is in the subgroup iff
        # adjugate @ x vanishes mod det
        self.adjugate, self.adjugate_det = adjugate_and_det(self.basis)

    def generators(self) -> List[Tuple[int, ...]]:
        k = self.n - 1
        return [tuple(self.basis[i][j] for i in range(k)) for j in range(k)]

    def type_violations(self):
        for col in self.generators():
            tau = sum(col) % self.n
            if tau != 0:
                yield col, tau

    def contains(self, e_coords: Sequence[int]) -> bool:
        w = mat_vec(self.adjugate, e_coords)
        return all(x % self.adjugate_det == 0 for x in w)

    def contains_vector(self, v: LatticeVector) -> bool:
        return self.contains(v.to_basis_coords())

    def permuted(self, p: Permutation) -> "TranslationSubgroup":
        """The image subgroup after permuting coordinates."""
        new_basis = mat_mul(p.basis_matrix(), [list(r) for r in self.basis])
        return TranslationSubgroup(self.n, new_basis, check_types=False)

    def __repr__(self):
        return f"TranslationSubgroup(n={self.n}, basis={self.basis}, N={self.index})"


class AffineSubgroup:
    """Split finite-index subgroup: a translation part M and a permutation
    part P with P-stable M."""

    def __init__(self, lattice: TranslationSubgroup,
                 perm_generators: Sequence[Permutation]):
        self.lattice = lattice
        self.n = lattice.n
        for p in perm_generators:
            if p.n != self.n:
                raise ValueError("permutation rank mismatch")
        self.perms = self._close(perm_generators)
        for p in self.perms:
            for col in lattice.permuted(p).generators():
                if not lattice.contains(col):
                    raise ValueError(
                        f"lattice is not stable under permutation {p.images}")

    def _close(self, gens: Sequence[Permutation]) -> Tuple[Permutation, ...]:
        group = {Permutation.identity(self.n)}
        frontier = list(group)
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    prod = g.compose(h)
                    if prod not in group:
                        group.add(prod)
                        nxt.append(prod)
            frontier = nxt
        return tuple(sorted(group, key=lambda p: p.images))

    @property
    def index_in_affine_group(self) -> int:
        return math.factorial(self.n) * self.lattice.index // len(self.perms)

    def __repr__(self):
        return (f"AffineSubgroup(n={self.n}, N={self.lattice.index}, "
                f"|P|={len(self.perms)})")


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """The quotient lattice / subgroup, via Smith normal form.

    Elements are tuples (c_1, .., c_{n-1}) with c_i reduced mod the i-th
    elementary divisor; the projection of e-coordinates x is (U x) mod d,
    where U basis V = diag(divisors).
    """

    n: int
    divisors: Tuple[int, ...]
    u_matrix: Tuple[Tuple[int, ...], ...]
    v_matrix: Tuple[Tuple[int, ...], ...]
    gamma: TranslationSubgroup

    @property
    def order(self) -> int:
        return math.prod(self.divisors)

    def project(self, e_coords: Sequence[int]) -> Tuple[int, ...]:
        w = mat_vec([list(r) for r in self.u_matrix], e_coords)
        return tuple(x % d for x, d in zip(w, self.divisors))

    def project_vector(self, v: LatticeVector) -> Tuple[int, ...]:
        return self.project(v.to_basis_coords())

    def add(self, a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.divisors))

    def elements(self) -> Iterator[Tuple[int, ...]]:
        yield from itertools.product(*(range(d) for d in self.divisors))

    def element_order(self, cls: Sequence[int]) -> int:
        out = 1
        for x, d in zip(cls, self.divisors):
            m = d // math.gcd(d, x % d) if x % d else 1
            out = out * m // math.gcd(out, m)
        return out


def quotient_group(gamma: TranslationSubgroup) -> FiniteAbelianGroup:
    """Quotient of the lattice by the subgroup, as elementary divisors plus
    the projection transform."""
    u, d, v = snf_with_transforms([list(r) for r in gamma.basis])
    divisors = snf_diagonal(d)
    return FiniteAbelianGroup(
        n=gamma.n,
        divisors=tuple(divisors),
        u_matrix=tuple(tuple(row) for row in u),
        v_matrix=tuple(tuple(row) for row in v),
        gamma=gamma,
    )


def order_of(a: LatticeVector, q: FiniteAbelianGroup) -> int:
    """Order of the class of a in the quotient; divides the group order."""
    return q.element_order(q.project_vector(a))


@dataclass(frozen=True)
class Character:
    """A character of the quotient, stored by its exponent tuple.

    Values are exact fractions of a full turn; the Satake parameters are the
    turns of the n standard directions and always sum to a whole number of
    turns.
    """

    exponents: Tuple[int, ...]
    divisors: Tuple[int, ...]
    n: int

    def turn(self, cls: Sequence[int]) -> Fraction:
        """Value on a quotient element, as a turn fraction in [0, 1)."""
        t = Fraction(0)
        for k, x, d in zip(self.exponents, cls, self.divisors):
            t += Fraction(k * x, d)
        return t % 1

    def satake_turns(self, q: FiniteAbelianGroup) -> Tuple[Fraction, ...]:
        out = []
        for i in range(1, self.n + 1):
            e = LatticeVector.basis_vector(self.n, i)
            out.append(self.turn(q.project_vector(e)))
        return tuple(out)


def characters(q: FiniteAbelianGroup) -> List[Character]:
    """All characters of the quotient, in lexicographic exponent order."""
    return [Character(exps, q.divisors, q.n)
            for exps in itertools.product(*(range(d) for d in q.divisors))]
