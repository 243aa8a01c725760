"""Linear dynamics of finitely generated matrix groups over Q_p.

Three layers: a type-R sampler over short words (a necessary condition
only, flagged as such), a boundedness decision by lattice saturation
with an exactly verified invariant-lattice certificate, and a flag
decomposition splitting the space so that every quotient action is
bounded. Flag certificates are re-verified before they are returned;
negative verdicts are evidence, never proofs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InternalInvariantViolation, NotTypeR, Singular
from .linalg import Lattice, QMatrix, apply, char_poly, elementary_divisors, \
    elementary_divisors_with_directions, lattice_sum, lattice_intersect, newton_polygon
from .qpcore import PContext

_DEFAULT_WORD_LEN = 4
_DEFAULT_ROUNDS = 64
_DEFAULT_DIVISOR_THRESHOLD = 32
_STREAK = 3  # consecutive strictly-monotone rounds demanded as divergence evidence


@dataclass(frozen=True)
class GeneratorSet:
    ctx: PContext
    n: int
    gens: tuple

    def __post_init__(self):
        gens = tuple(self.gens)
        if not gens:
            raise ValueError("need at least one generator")
        if any(g.n != self.n for g in gens):
            raise ValueError("generator dimensions disagree")
        if any(g.det() == 0 for g in gens):
            raise Singular("generators must be invertible")
        object.__setattr__(self, "gens", gens)

    @classmethod
    def of(cls, ctx: PContext, matrices) -> "GeneratorSet":
        matrices = tuple(matrices)
        return cls(ctx, matrices[0].n, matrices)

    def with_inverses(self):
        out = []
        for g in self.gens:
            out.append(g)
            out.append(g.inverse())
        return out


def type_r_matrix(a: QMatrix, ctx: PContext) -> bool:
    """True iff every eigenvalue of a has p-adic absolute value 1,
    i.e. the Newton polygon of the characteristic polynomial is flat."""
    if a.det() == 0:
        raise Singular("type R is only defined for invertible matrices")
    return newton_polygon(char_poly(a), ctx).all_zero()


@dataclass(frozen=True)
class Witness:
    """A word in the generators whose matrix is not type R."""

    word: tuple  # (generator index, +1 | -1) letters
    matrix: QMatrix

    def word_str(self) -> str:
        def letter(idx, sign):
            return f"g{idx + 1}" if sign > 0 else f"g{idx + 1}^-1"
        return "·".join(letter(i, s) for i, s in self.word)


def type_r_witness_search(group: GeneratorSet, word_len: int = _DEFAULT_WORD_LEN
                          ) -> Optional[Witness]:
    """Check all reduced words up to word_len; return the first failure
    in breadth-first order, or None when every sampled word is type R.

    This samples a necessary condition: words beyond the bound are not
    inspected, so None never certifies that the whole group is type R.
    """
    ctx = group.ctx
    alphabet = []
    for i, g in enumerate(group.gens):
        alphabet.append((i, 1, g))
        alphabet.append((i, -1, g.inverse()))
    seen = {QMatrix.identity(group.n)}
    frontier = [(QMatrix.identity(group.n), ())]
    for _ in range(word_len):
        nxt = []
        for mat, word in frontier:
            for i, sign, g in alphabet:
                if word and word[-1] == (i, -sign):
                    continue  # immediate cancellation
                m2 = mat * g
                if m2 in seen:
                    continue
                seen.add(m2)
                w2 = word + ((i, sign),)
                if not type_r_matrix(m2, ctx):
                    return Witness(w2, m2)
                nxt.append((m2, w2))
        frontier = nxt
    return None


BOUNDED = "bounded"
UNBOUNDED = "unbounded"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class BoundednessResult:
    """Verdict on whether the generated group has bounded orbits.

    BOUNDED carries a lattice fixed exactly by every generator (a real
    certificate). UNBOUNDED carries the elementary-divisor trace showing
    monotone growth past the threshold, strict on every recent window of
    three rounds (evidence, not proof). INCONCLUSIVE reports the caps
    that ran out.
    """

    verdict: str
    invariant: Optional[Lattice] = None
    divisor_trace: tuple = ()
    rounds: int = 0
    caps: Optional[dict] = None


def bounded_group(group: GeneratorSet, rounds_cap: int = _DEFAULT_ROUNDS,
                  divisor_threshold: int = _DEFAULT_DIVISOR_THRESHOLD) -> BoundednessResult:
    """Grow the standard lattice by the generator orbit until it stops
    (bounded, with the fixpoint as certificate) or its elementary
    divisors against the start diverge monotonically (unbounded)."""
    ctx = group.ctx
    start = Lattice.standard(ctx, group.n)
    gens_and_invs = group.with_inverses()
    lat = start
    trace = []
    mins = [0]
    for round_no in range(1, rounds_cap + 1):
        grown = lat
        for g in gens_and_invs:
            grown = lattice_sum(grown, apply(g, lat))
        if grown == lat:
            for g in gens_and_invs:
                if apply(g, lat) != lat:
                    raise InternalInvariantViolation(
                        "saturation fixpoint is not generator-invariant")
            return BoundednessResult(BOUNDED, invariant=lat, divisor_trace=tuple(trace),
                                     rounds=round_no)
        divisors = elementary_divisors(start, grown)
        trace.append(divisors)
        mins.append(min(divisors))
        # divergence evidence: the deepest divisor fell past the threshold and
        # kept falling across every recent window of _STREAK rounds
        if mins[-1] <= -divisor_threshold and len(mins) > _STREAK \
                and mins[-1] < mins[-1 - _STREAK]:
            return BoundednessResult(UNBOUNDED, divisor_trace=tuple(trace), rounds=round_no)
        lat = grown
    return BoundednessResult(INCONCLUSIVE, divisor_trace=tuple(trace), rounds=rounds_cap,
                             caps={"rounds": rounds_cap, "divisor_threshold": divisor_threshold})


@dataclass(frozen=True)
class FlagDecomposition:
    """A flag 0 = V_0 < V_1 < ... < V_m = V with bounded quotient actions.

    flag_basis columns list bases of V_1, then lifts of V_2/V_1, etc.
    dims are the cumulative dimensions (0, d_1, ..., n). Conjugating any
    generator by flag_basis is block upper triangular at those cuts, and
    the diagonal block on each quotient fixes the recorded lattice; the
    strictly upper part is the split-unipotent sleeve, the bounded
    diagonal actions are the compact one.
    """

    flag_basis: QMatrix
    dims: tuple
    quotient_lattices: tuple
    conjugated_gens: tuple

    @property
    def steps(self) -> int:
        return len(self.dims) - 1

    def block(self, mat: QMatrix, i: int) -> QMatrix:
        lo, hi = self.dims[i], self.dims[i + 1]
        return QMatrix([row[lo:hi] for row in mat.rows[lo:hi]])


def _verify_flag(group: GeneratorSet, flag: FlagDecomposition):
    basis_inv = flag.flag_basis.inverse()
    for g, conj in zip(group.gens, flag.conjugated_gens):
        if basis_inv * g * flag.flag_basis != conj:
            raise InternalInvariantViolation("conjugated generator mismatch")
        for i in range(flag.steps):
            hi = flag.dims[i + 1]
            for r in range(hi, group.n):
                for c in range(flag.dims[i], hi):
                    if conj.rows[r][c] != 0:
                        raise InternalInvariantViolation(
                            "flag certificate is not block triangular")
        for i in range(flag.steps):
            if apply(flag.block(conj, i), flag.quotient_lattices[i]) \
                    != flag.quotient_lattices[i]:
                raise InternalInvariantViolation(
                    "diagonal block does not fix its quotient lattice")


def _nullspace(rows):
    """Exact rational nullspace; returns a list of basis column vectors."""
    if not rows:
        return []
    ncols = len(rows[0])
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for c in free:
        vec = [Fraction(0)] * ncols
        vec[c] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][c]
        basis.append(tuple(vec))
    return basis


def common_fixed_space(group: GeneratorSet):
    """Basis of the subspace fixed pointwise by every generator."""
    stacked = []
    ident = QMatrix.identity(group.n)
    for g in group.gens:
        stacked.extend((g - ident).rows)
    return _nullspace(stacked)


def _complete_basis(cols, n):
    """Extend independent columns to a basis using standard vectors."""
    chosen = [list(c) for c in cols]
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        trial = chosen + [e]
        if _rank(trial) == len(trial):
            chosen.append(e)
        if len(chosen) == n:
            break
    return QMatrix.from_columns(chosen)


def _rank(cols):
    m = [list(c) for c in cols]
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def _split_action(group: GeneratorSet, subspace_cols):
    """Change basis to [subspace | completion]; return (T, restricted
    generators on the subspace, quotient generators), or None when the
    subspace is not invariant under some generator."""
    n = group.n
    d = len(subspace_cols)
    t = _complete_basis(subspace_cols, n)
    t_inv = t.inverse()
    restricted, quotient = [], []
    for g in group.gens:
        conj = t_inv * g * t
        for r in range(d, n):
            for c in range(d):
                if conj.rows[r][c] != 0:
                    return None
        restricted.append(QMatrix([row[:d] for row in conj.rows[:d]]))
        quotient.append(QMatrix([row[d:] for row in conj.rows[d:]]))
    return t, restricted, quotient


def _stable_directions(history, threshold):
    """Detect positions whose divisor froze while others keep growing.

    history is the list of (divisors, directions) per round, divisors
    ascending. Returns the stable column indices at the last round, or
    None until the split is unambiguous.
    """
    if len(history) < _STREAK + 1:
        return None
    window = history[-(_STREAK + 1):]
    length = len(window[0][0])
    stable, diverging = [], []
    for i in range(length):
        vals = [divs[i] for divs, _ in window]
        if all(v == vals[0] for v in vals):
            stable.append(i)
        elif all(a < b for a, b in zip(vals, vals[1:])) and vals[-1] >= threshold:
            diverging.append(i)
    if stable and diverging and len(stable) + len(diverging) == length:
        return stable
    return None


def _bounded_or_none(group: GeneratorSet, rounds_cap, threshold):
    res = bounded_group(group, rounds_cap, threshold)
    return res if res.verdict == BOUNDED else None


def ku_flag(group: GeneratorSet, word_len: int = _DEFAULT_WORD_LEN,
            rounds_cap: int = _DEFAULT_ROUNDS,
            divisor_threshold: int = _DEFAULT_DIVISOR_THRESHOLD) -> Optional[FlagDecomposition]:
    """Finest certified flag with bounded quotient actions.

    Raises NotTypeR when the word sampler finds a counterexample (the
    decomposition cannot exist then). Returns None (inconclusive) when
    saturation diverges but no invariant bounded subspace can be
    certified within the caps. Any returned decomposition has passed the
    exact certificate checks.

    Bounded actions are refined along the tower of common fixed
    subspaces, which exhibits the largest unipotent sleeve the
    generators share; an irreducible bounded action stays one block.
    """
    witness = type_r_witness_search(group, word_len)
    if witness is not None:
        raise NotTypeR(witness)
    built = _flag_recurse(group, rounds_cap, divisor_threshold)
    if built is None:
        return None
    t, dims, lattices = built
    total = []
    for d in dims:
        total.append(d + (total[-1] if total else 0))
    cumulative = (0,) + tuple(total)
    t_inv = t.inverse()
    conj = tuple(t_inv * g * t for g in group.gens)
    flag = FlagDecomposition(t, cumulative, tuple(lattices), conj)
    _verify_flag(group, flag)
    return flag


def _flag_recurse(group: GeneratorSet, rounds_cap, threshold):
    """Returns (basis change T, step dimensions, quotient lattices) or None."""
    n = group.n
    res = bounded_group(group, rounds_cap, threshold)
    if res.verdict == BOUNDED:
        fixed = common_fixed_space(group)
        if 0 < len(fixed) < n:
            split = _split_action(group, fixed)
            assert split is not None  # fixed spaces are always invariant
            t, restricted, quotient = split
            sub_res = _bounded_or_none(GeneratorSet(group.ctx, len(fixed), tuple(restricted)),
                                       rounds_cap, threshold)
            assert sub_res is not None  # identity action on a fixed space
            tail = _flag_recurse(GeneratorSet(group.ctx, n - len(fixed), tuple(quotient)),
                                 rounds_cap, threshold)
            if tail is None:
                return None
            return _compose(t, len(fixed), sub_res.invariant, tail)
        return QMatrix.identity(n), [n], [res.invariant]
    if res.verdict == INCONCLUSIVE:
        return None
    return _unbounded_recurse(group, rounds_cap, threshold)


def _unbounded_recurse(group: GeneratorSet, rounds_cap, threshold):
    """Decreasing intersection saturation; the directions whose divisors
    stabilize while the rest diverge span the bounded-orbit candidate."""
    ctx = group.ctx
    n = group.n
    start = Lattice.standard(ctx, n)
    gens_and_invs = group.with_inverses()
    lat = start
    history = []
    stable = None
    for _ in range(rounds_cap):
        shrunk = lat
        for g in gens_and_invs:
            shrunk = lattice_intersect(shrunk, apply(g, lat))
        if shrunk == lat:
            break  # cannot happen after an UNBOUNDED verdict, but stay safe
        divisors, directions = elementary_divisors_with_directions(start, shrunk)
        history.append((divisors, directions))
        stable = _stable_directions(history, threshold)
        if stable is not None:
            break
        lat = shrunk
    if stable is None or not 0 < len(stable) < n:
        return None
    directions = history[-1][1]
    candidate = [directions.column(i) for i in stable]
    split = _split_action(group, candidate)
    if split is None:
        return None
    t, restricted, quotient = split
    sub_res = _bounded_or_none(GeneratorSet(ctx, len(candidate), tuple(restricted)),
                               rounds_cap, threshold)
    if sub_res is None:
        return None
    tail = _flag_recurse(GeneratorSet(ctx, n - len(candidate), tuple(quotient)),
                         rounds_cap, threshold)
    if tail is None:
        return None
    return _compose(t, len(candidate), sub_res.invariant, tail)


def _compose(t: QMatrix, head_dim: int, head_lattice: Lattice, tail):
    """Stitch a head step onto the recursive tail's basis change."""
    t_tail, dims_tail, lats_tail = tail
    n = t.n
    ident = QMatrix.identity(n)
    block = [[ident.rows[i][j] for j in range(n)] for i in range(n)]
    for i in range(n - head_dim):
        for j in range(n - head_dim):
            block[head_dim + i][head_dim + j] = t_tail.rows[i][j]
        for j in range(head_dim):
            block[head_dim + i][j] = Fraction(0)
    embedded = QMatrix(block)
    return t * embedded, [head_dim] + dims_tail, [head_lattice] + lats_tail
