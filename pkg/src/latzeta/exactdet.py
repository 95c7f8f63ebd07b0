"""Exact determinants of integer matrix polynomials.

det(sum_k C_k u^k) is recovered by evaluating it at deg+1 integer points
modulo a battery of 29-bit primes, interpolating modulo each prime, and
combining coefficients by CRT.  The reconstruction bound is the product of
the rows' total coefficient masses, which dominates the permanent expansion
of the determinant, so the lift to signed integers is rigorous.  A final
evaluation at a fresh prime and point certifies the reconstruction.
"""

from __future__ import annotations

from typing import List, Sequence

import numpy as np

from .polynomials import IntPolynomial

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_desc(start: int):
    n = start if start % 2 else start - 1
    while n > 2:
        if _is_prime(n):
            yield n
        n -= 2


def det_mod(matrix: np.ndarray, p: int) -> int:
    """Determinant mod p by elimination; destroys its working copy."""
    a = np.mod(matrix.astype(np.int64), p)
    n = a.shape[0]
    det = 1
    for k in range(n):
        nz = np.nonzero(a[k:, k])[0]
        if nz.size == 0:
            return 0
        r = k + int(nz[0])
        if r != k:
            a[[k, r], k:] = a[[r, k], k:]
            det = -det
        piv = int(a[k, k])
        det = det * piv % p
        if k + 1 < n:
            inv = pow(piv, p - 2, p)
            f = (a[k + 1:, k] * inv) % p
            a[k + 1:, k:] = (a[k + 1:, k:] - np.outer(f, a[k, k:])) % p
    return det % p


def _interpolate_mod(xs: Sequence[int], ys: Sequence[int], p: int) -> List[int]:
    """Coefficients of the unique interpolating polynomial mod p (Newton)."""
    k = len(xs)
    span = max(abs(a - b) for a in xs for b in xs) if k > 1 else 1
    inv_table = np.zeros(2 * span + 1, dtype=np.int64)
    for d in range(1, span + 1):
        inv = pow(d, p - 2, p)
        inv_table[span + d] = inv
        inv_table[span - d] = p - inv
    xs_np = np.asarray(xs, dtype=np.int64)
    dd = np.mod(np.asarray(ys, dtype=np.int64), p)
    for j in range(1, k):
        num = (dd[j:] - dd[j - 1:-1]) % p
        den = xs_np[j:] - xs_np[:-j]
        dd[j:] = num * inv_table[den + span] % p
    coeffs = np.zeros(k, dtype=np.int64)
    for i in range(k - 1, -1, -1):
        shifted = np.zeros(k, dtype=np.int64)
        shifted[1:] = coeffs[:-1]
        coeffs = (shifted + coeffs * ((p - xs_np[i] % p) % p)) % p
        coeffs[0] = (coeffs[0] + dd[i]) % p
    return [int(c) for c in coeffs]


def coefficient_bound(coeff_mats: Sequence[np.ndarray]) -> int:
    """Product of row coefficient masses: bounds every coefficient of the det."""
    total = np.zeros_like(coeff_mats[0])
    for c in coeff_mats:
        total = total + np.abs(c)
    bound = 1
    for row_mass in total.sum(axis=1).tolist():
        bound *= max(int(row_mass), 1)
    return bound


def polymatrix_det(coeff_mats: Sequence[np.ndarray]) -> IntPolynomial:
    """Exact determinant of the matrix polynomial sum_k coeff_mats[k] u^k."""
    mats = [np.asarray(c, dtype=np.int64) for c in coeff_mats]
    size = mats[0].shape[0]
    if size == 0:
        return IntPolynomial.one()
    degree = (len(mats) - 1) * size
    xs = [0]
    step = 1
    while len(xs) < degree + 1:
        xs.append(step)
        if len(xs) < degree + 1:
            xs.append(-step)
        step += 1

    bound = coefficient_bound(mats)
    primes = []
    prod = 1
    gen = _primes_desc(2 ** 29)
    while prod <= 2 * bound + 1:
        p = next(gen)
        primes.append(p)
        prod *= p
    certificate_prime = next(gen)

    def eval_mats_mod(t: int, p: int) -> np.ndarray:
        acc = np.zeros_like(mats[0])
        tk = 1
        for c in mats:
            acc = (acc + c * tk) % p
            tk = tk * t % p
        return acc

    residue_coeffs = []
    for p in primes:
        ys = [det_mod(eval_mats_mod(t, p), p) for t in xs]
        residue_coeffs.append(_interpolate_mod(xs, ys, p))

    # CRT lift to the symmetric range
    coeffs = []
    half = prod // 2
    inv_cache = [pow(prod // p % p, p - 2, p) * (prod // p) for p in primes]
    for k in range(degree + 1):
        x = 0
        for pi, res in enumerate(residue_coeffs):
            x += res[k] * inv_cache[pi]
        x %= prod
        if x > half:
            x -= prod
        coeffs.append(x)
    poly = IntPolynomial(coeffs)

    # certify on a fresh prime at a fresh point
    q = certificate_prime
    t_star = step + 1
    expected = det_mod(eval_mats_mod(t_star % q, q), q)
    if poly(t_star) % q != expected:
        raise ArithmeticError("determinant reconstruction failed certification")
    return poly


def naive_polymatrix_det(coeff_mats: Sequence[np.ndarray]) -> IntPolynomial:
    """Leibniz-formula determinant over the polynomial ring; test oracle for
    small matrices."""
    import itertools

    mats = [np.asarray(c) for c in coeff_mats]
    size = mats[0].shape[0]
    entries = [[IntPolynomial([int(c[i, j]) for c in mats])
                for j in range(size)] for i in range(size)]
    total = IntPolynomial.zero()
    for perm in itertools.permutations(range(size)):
        sign = 1
        seen = [False] * size
        for start in range(size):
            if seen[start]:
                continue
            length = 0
            i = start
            while not seen[i]:
                seen[i] = True
                i = perm[i]
                length += 1
            if length % 2 == 0:
                sign = -sign
        term = IntPolynomial.one()
        for i in range(size):
            term = term * entries[i][perm[i]]
        total = total + sign * term
    return total
