"""Integer matrix helpers modulo p^m. Internal.

Matrices are tuples of tuples of ints, entries reduced mod p^m.
"""
from __future__ import annotations

from itertools import product

from .errors import Singular

Mat = tuple


def reduce_mat(rows, mod: int) -> Mat:
    return tuple(tuple(int(x) % mod for x in row) for row in rows)


def identity_mat(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Mat, b: Mat, mod: int) -> Mat:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % mod for col in bt)
                 for row in a)


def mat_add(a: Mat, b: Mat, mod: int) -> Mat:
    return tuple(tuple((x + y) % mod for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(c: int, a: Mat, mod: int) -> Mat:
    return tuple(tuple(c * x % mod for x in row) for row in a)


def mat_pow(a: Mat, e: int, mod: int) -> Mat:
    if e < 0:
        raise ValueError("negative exponent: invert explicitly with mat_inv")
    out = identity_mat(len(a))
    while e:
        if e & 1:
            out = mat_mul(out, a, mod)
        a = mat_mul(a, a, mod)
        e >>= 1
    return out


def det_mod(a: Mat, p: int) -> int:
    """Determinant mod a prime p by Gaussian elimination over F_p."""
    n = len(a)
    m = [list(r) for r in reduce_mat(a, p)]
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv % p
                for k in range(c, n):
                    m[r][k] = (m[r][k] - f * m[c][k]) % p
    return det % p


def invertible_mod(a: Mat, p: int) -> bool:
    return det_mod(a, p) != 0


def _inv_mod_p(a: Mat, p: int) -> Mat:
    n = len(a)
    m = [list(r) + [1 if i == j else 0 for j in range(n)]
         for i, r in enumerate(reduce_mat(a, p))]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] % p), None)
        if piv is None:
            raise Singular("matrix not invertible mod p")
        m[c], m[piv] = m[piv], m[c]
        inv = pow(m[c][c], -1, p)
        m[c] = [x * inv % p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def mat_inv(a: Mat, p: int, m: int = 1) -> Mat:
    """Inverse mod p^m: invert mod p, then Newton-lift, doubling precision."""
    mod = p ** m
    x = _inv_mod_p(a, p)
    prec = 1
    while prec < m:
        prec = min(2 * prec, m)
        cur = p ** prec
        ax = mat_mul(reduce_mat(a, cur), x, cur)
        two_i = mat_scale(2, identity_mat(len(a)), cur)
        x = mat_mul(x, tuple(tuple((u - v) % cur for u, v in zip(r, s))
                             for r, s in zip(two_i, ax)), cur)
    return reduce_mat(x, mod)


def all_invertible_mats(n: int, p: int, cap: int = 1_000_000):
    """Iterate GL(n, F_p) in lexicographic entry order."""
    if p ** (n * n) > cap:
        raise ValueError(f"GL({n}, F_{p}) enumeration exceeds cap {cap}")
    for entries in product(range(p), repeat=n * n):
        rows = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if det_mod(rows, p) != 0:
            yield rows
