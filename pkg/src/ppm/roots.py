"""Constructive k-th roots: exact on unipotents, residue-level elsewhere.

Roots inside compact p-adic groups are generally irrational, so they are
returned at residue precision; roots of unipotent matrices are exact
rationals. Every Found root is re-verified by powering before it is
returned, exactly or mod p^level.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Union

from . import modmat
from .errors import BadDomain, CapExceeded, InternalInvariantViolation, NotUnipotent, \
    PDividesK, PrecisionExhausted
from .linalg import QMatrix
from .qpcore import PContext, ResidueScalar, as_fraction, reduce_mod

FOUND = "found"
OBSTRUCTED = "obstructed"
NO_ROOT = "no_root"


@dataclass(frozen=True)
class PadicApproxMatrix:
    """n x n integer matrix known mod p^level, invertible mod p."""

    ctx: PContext
    level: int
    entries: tuple

    def __post_init__(self):
        mod = self.ctx.p ** self.level
        ent = modmat.reduce_mat(self.entries, mod)
        object.__setattr__(self, "entries", ent)
        if not modmat.invertible_mod(ent, self.ctx.p):
            raise ValueError("matrix is singular mod p")

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rational(cls, ctx: PContext, mat: QMatrix, level: int) -> "PadicApproxMatrix":
        ent = tuple(tuple(reduce_mod(x, level, ctx).value for x in row) for row in mat.rows)
        return cls(ctx, level, ent)

    def __str__(self):
        return f"{self.entries} (mod {self.ctx.p}^{self.level})"


@dataclass(frozen=True)
class RootResult:
    """Outcome of a root extraction.

    status is one of FOUND / OBSTRUCTED / NO_ROOT. A FOUND root has been
    re-verified by powering before construction. NO_ROOT carries the
    level at which every lifting branch died.
    """

    status: str
    root: Union[QMatrix, PadicApproxMatrix, tuple, None] = None
    reason: Optional[str] = None
    witness_level: Optional[int] = None

    @classmethod
    def found(cls, root) -> "RootResult":
        return cls(FOUND, root=root)

    @classmethod
    def obstructed(cls, reason: str) -> "RootResult":
        return cls(OBSTRUCTED, reason=reason)

    @classmethod
    def no_root(cls, level: int) -> "RootResult":
        return cls(NO_ROOT, witness_level=level)


def nilpotent_log(u: QMatrix) -> QMatrix:
    """Exact logarithm of a unipotent matrix: the alternating series in
    (u - 1), which terminates because (u - 1)^n = 0."""
    n = u.n
    nil = u - QMatrix.identity(n)
    power = nil
    for _ in range(n - 1):
        power = power * nil
    if any(x != 0 for row in power.rows for x in row):
        raise NotUnipotent("(u - 1)^n != 0")
    out = QMatrix.identity(n) * 0
    term = QMatrix.identity(n)
    for j in range(1, n):
        term = term * nil
        out = out + term * Fraction((-1) ** (j + 1), j)
    return out


def _nilpotent_exp(m: QMatrix) -> QMatrix:
    n = m.n
    out = QMatrix.identity(n)
    term = QMatrix.identity(n)
    fact = 1
    for j in range(1, n):
        term = term * m
        fact *= j
        out = out + term * Fraction(1, fact)
    return out


def unipotent_root(u: QMatrix, k: int) -> RootResult:
    """The unique unipotent k-th root exp(log(u)/k), exact."""
    if k < 1:
        raise ValueError("k must be positive")
    root = _nilpotent_exp(nilpotent_log(u) * Fraction(1, k))
    if root ** k != u:
        raise InternalInvariantViolation("unipotent root failed the powering check")
    return RootResult.found(root)


def _as_approx(a, ctx: PContext, level: int) -> PadicApproxMatrix:
    if isinstance(a, PadicApproxMatrix):
        return a
    if isinstance(a, QMatrix):
        return PadicApproxMatrix.from_rational(ctx, a, level)
    return PadicApproxMatrix(ctx, level, a)


def congruence_root(a, k: int, ctx: Optional[PContext] = None,
                    level: Optional[int] = None) -> RootResult:
    """k-th root in the principal congruence subgroup 1 + pM (1 + 4M at
    p = 2), for gcd(k, p) = 1.

    Level-by-level linear lifting: with X^k = A mod p^m and the ansatz
    X' = X(1 + p^m Y), the defect equation reduces to k Y = D over F_p,
    and k is invertible there. One pass per level, no search.
    """
    if isinstance(a, PadicApproxMatrix):
        ctx = a.ctx
        level = a.level if level is None else level
    if ctx is None:
        raise ValueError("need a PContext")
    if level is None:
        level = ctx.precision_n
    a = _as_approx(a, ctx, level)
    p, n = ctx.p, a.n
    if gcd(k, p) != 1:
        raise PDividesK(f"gcd({k}, {p}) != 1")
    base = 2 if p == 2 else 1
    ident = modmat.identity_mat(n)
    start_mod = p ** base
    if modmat.reduce_mat(a.entries, start_mod) != ident:
        raise BadDomain(f"matrix is not congruent to 1 mod {start_mod}")
    if level <= base:
        return RootResult.found(PadicApproxMatrix(ctx, level, ident))
    mod = p ** level
    kinv = pow(k, -1, p)
    x = ident
    for m in range(base, level):
        xk = modmat.mat_pow(x, k, mod)
        step = p ** m
        if any(((ae - xe) % step) for ra, rx in zip(a.entries, xk)
               for ae, xe in zip(ra, rx)):
            raise InternalInvariantViolation("congruence lifting lost a level")
        defect = tuple(tuple(((ae - xe) // step) % p for ae, xe in zip(ra, rx))
                       for ra, rx in zip(a.entries, xk))
        y = modmat.mat_scale(kinv, defect, p)
        bump = modmat.mat_add(ident, modmat.mat_scale(step, y, mod), mod)
        x = modmat.mat_mul(x, bump, mod)
    if modmat.mat_pow(x, k, mod) != a.entries:
        raise InternalInvariantViolation("congruence root failed the powering check")
    return RootResult.found(PadicApproxMatrix(ctx, level, x))


def _ad_sum_operator(x: modmat.Mat, k: int, p: int) -> list:
    """Matrix over F_p of Y -> sum_{i<k} X^{-i} Y X^i on n x n matrices."""
    n = len(x)
    xinv = modmat.mat_inv(x, p, 1)
    powers = [(modmat.identity_mat(n), modmat.identity_mat(n))]
    for _ in range(k - 1):
        prev_inv, prev = powers[-1]
        powers.append((modmat.mat_mul(prev_inv, xinv, p), modmat.mat_mul(prev, x, p)))
    cols = []
    for a in range(n):
        for b in range(n):
            basis = tuple(tuple(1 if (i, j) == (a, b) else 0 for j in range(n))
                          for i in range(n))
            total = tuple(tuple(0 for _ in range(n)) for _ in range(n))
            for xi, xp in powers:
                total = modmat.mat_add(total, modmat.mat_mul(modmat.mat_mul(xi, basis, p), xp, p), p)
            cols.append([total[i][j] for i in range(n) for j in range(n)])
    # columns indexed by the basis matrix E_ab, flattened row-major
    return [[cols[c][r] for c in range(n * n)] for r in range(n * n)]


def _solve_affine_fp(mat: list, rhs: list, p: int):
    """All solutions of mat*y = rhs over F_p: (particular, kernel basis),
    or None when inconsistent."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    m = [list(r) + [b] for r, b in zip(mat, rhs)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if m[i][cols] % p:
            return None
    particular = [0] * cols
    for i, c in enumerate(pivots):
        particular[c] = m[i][cols]
    free = [c for c in range(cols) if c not in pivots]
    kernel = []
    for c in free:
        vec = [0] * cols
        vec[c] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-m[i][c]) % p
        kernel.append(vec)
    return particular, kernel


def _enumerate_solutions(particular, kernel, p):
    if not kernel:
        yield list(particular)
        return
    from itertools import product as iproduct
    for coeffs in iproduct(range(p), repeat=len(kernel)):
        yield [(particular[i] + sum(c * vec[i] for c, vec in zip(coeffs, kernel))) % p
               for i in range(len(particular))]


def finite_root(a, k: int, ctx: Optional[PContext] = None,
                level: Optional[int] = None, node_cap: int = 200_000) -> RootResult:
    """k-th root of an invertible matrix mod p^level by exhaustive mod-p
    search plus level-by-level linear lifting.

    All mod-p roots are explored before declaring NO_ROOT, because a lift
    can die along one branch and survive along another. Branches are
    visited in lexicographic candidate order, so the Found answer is
    deterministic.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if isinstance(a, PadicApproxMatrix):
        ctx = a.ctx
        level = a.level if level is None else level
    if ctx is None:
        raise ValueError("need a PContext")
    if level is None:
        level = ctx.precision_n
    a = _as_approx(a, ctx, level)
    p, n = ctx.p, a.n
    target_p = modmat.reduce_mat(a.entries, p)
    seeds = [x for x in modmat.all_invertible_mats(n, p)
             if modmat.mat_pow(x, k, p) == target_p]
    if not seeds:
        return RootResult.no_root(1)
    deepest_death = 1
    nodes = 0
    stack = [(x, 1) for x in reversed(seeds)]
    while stack:
        x, m = stack.pop()
        nodes += 1
        if nodes > node_cap:
            raise CapExceeded(f"finite_root explored more than {node_cap} branches")
        if m == level:
            mod = p ** level
            if modmat.mat_pow(x, k, mod) != a.entries:
                raise InternalInvariantViolation("finite root failed the powering check")
            return RootResult.found(PadicApproxMatrix(ctx, level, x))
        mod_next = p ** (m + 1)
        xk = modmat.mat_pow(x, k, mod_next)
        step = p ** m
        diff = tuple(tuple((ae - xe) % mod_next for ae, xe in zip(ra, rx))
                     for ra, rx in zip(modmat.reduce_mat(a.entries, mod_next), xk))
        if any(d % step for row in diff for d in row):
            deepest_death = max(deepest_death, m)
            continue
        # solve X^k * T(Y) = D with T the Ad-power sum; fold X^{-k} into D
        xk_inv_p = modmat.mat_inv(modmat.reduce_mat(xk, p), p, 1)
        d_mat = modmat.mat_mul(xk_inv_p,
                               tuple(tuple((d // step) % p for d in row) for row in diff), p)
        op = _ad_sum_operator(x, k, p)
        rhs = [d_mat[i][j] for i in range(n) for j in range(n)]
        sols = _solve_affine_fp(op, rhs, p)
        if sols is None:
            deepest_death = max(deepest_death, m)
            continue
        particular, kernel = sols
        lifts = []
        for yvec in _enumerate_solutions(particular, kernel, p):
            y = tuple(tuple(yvec[i * n + j] for j in range(n)) for i in range(n))
            bump = modmat.mat_add(modmat.identity_mat(n), modmat.mat_scale(step, y, mod_next),
                                  mod_next)
            lifts.append((modmat.mat_mul(modmat.reduce_mat(x, mod_next), bump, mod_next), m + 1))
        for lift in reversed(sorted(lifts)):
            stack.append(lift)
    return RootResult.no_root(deepest_death)


def _geometric_sum(alpha: int, k: int, mod: int) -> int:
    total, power = 0, 1
    for _ in range(k):
        total = (total + power) % mod
        power = power * alpha % mod
    return total


def axb_root(elem, k: int, ctx: PContext, level: Optional[int] = None) -> RootResult:
    """k-th root of (a, b) in the solvable group with product
    (a, b)(a', b') = (aa', b + a b'), a a unit of Z_p, b in Z_p.

    Power formula: (a, b)^k = (a^k, (1 + a + ... + a^{k-1}) b). Every
    k-th root alpha of a is tried; the unipotent coordinate needs the
    geometric sum to be invertible enough to divide b.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if level is None:
        level = ctx.precision_n
    p = ctx.p
    a, b = elem
    a_res = reduce_mod(as_fraction(a), level, ctx).value
    b_res = reduce_mod(as_fraction(b), level, ctx).value
    if a_res % p == 0:
        raise BadDomain("first coordinate must be a unit")
    mod = p ** level
    alphas = _unit_roots(a_res, k, ctx, level)
    if not alphas:
        return RootResult.no_root(level)
    obstructions = []
    saw_undecidable = False
    for alpha in alphas:
        s = _geometric_sum(alpha, k, mod)
        if s == 0:
            saw_undecidable = True
            continue
        sval = 0
        ss = s
        while ss % p == 0:
            ss //= p
            sval += 1
        bval = level if b_res == 0 else _int_val(b_res, p)
        if sval == 0:
            beta = b_res * pow(s, -1, mod) % mod
            return _verified_axb(alpha, beta, k, level, ctx, (a_res, b_res))
        if bval >= sval:
            out_level = level - sval
            out_mod = p ** out_level
            beta = (b_res // p ** sval) * pow(ss % out_mod, -1, out_mod) % out_mod
            return _verified_axb(alpha % out_mod, beta, k, out_level, ctx,
                                 (a_res % out_mod, b_res % out_mod))
        obstructions.append(
            f"root {alpha} of the unit part gives geometric sum of valuation {sval} "
            f"> v({b_res}) = {bval}: the second coordinate has a root in Q_p "
            f"(divide by p^{sval}) but none in Z_p")
    if saw_undecidable:
        raise PrecisionExhausted(
            "a geometric sum vanishes mod p^level; raise precision and retry")
    if obstructions:
        return RootResult.obstructed("; ".join(obstructions))
    return RootResult.no_root(level)


def _int_val(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _unit_roots(a: int, k: int, ctx: PContext, level: int):
    """All k-th roots of a unit mod p^level, ascending."""
    p = ctx.p
    mod = p ** level
    roots = []
    seeds = [x for x in range(1, p) if pow(x, k, p) == a % p]
    for seed in seeds:
        found = _lift_unit_root(a, k, seed, p, level)
        roots.extend(found)
    return sorted(set(r % mod for r in roots))


def _lift_unit_root(a: int, k: int, seed: int, p: int, level: int):
    """Lift x^k = a from a mod-p seed through all levels (branching DFS)."""
    out = []
    stack = [(seed, 1)]
    while stack:
        x, m = stack.pop()
        if m == level:
            out.append(x)
            continue
        mod_next = p ** (m + 1)
        step = p ** m
        diff = (a - pow(x, k, mod_next)) % mod_next
        if diff % step:
            continue
        d = (diff // step) % p
        # derivative k * x^{k-1}; invertible unless p | k
        deriv = k * pow(x, k - 1, p) % p
        if deriv:
            t = d * pow(deriv, -1, p) % p
            stack.append((x + t * step, m + 1))
        else:
            if d == 0:
                for t in range(p):
                    stack.append((x + t * step, m + 1))
            # else: branch dies
    return out


def _verified_axb(alpha: int, beta: int, k: int, level: int, ctx: PContext,
                  target) -> RootResult:
    mod = ctx.p ** level
    ak = pow(alpha, k, mod)
    bk = _geometric_sum(alpha, k, mod) * beta % mod
    if (ak, bk) != (target[0] % mod, target[1] % mod):
        raise InternalInvariantViolation("semidirect root failed the powering check")
    return RootResult.found((ResidueScalar(alpha % mod, level, ctx.p),
                             ResidueScalar(beta % mod, level, ctx.p)))
