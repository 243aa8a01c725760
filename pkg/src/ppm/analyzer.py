"""Density/surjectivity verdicts for power maps on catalog p-adic groups
and user-supplied finitely generated matrix groups.

The catalog carries its structural facts (which quotient is compact and
its pro-order, which radical is a split unipotent group) as data: they
are classical, and computing them from defining equations is out of
scope. For these groups density and surjectivity of x -> x^k coincide,
and the verdict cites that equivalence explicitly. Finitely generated
inputs only ever receive necessary-condition verdicts.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .dynamics import GeneratorSet, ku_flag, type_r_witness_search
from .errors import InputError, InternalInvariantViolation, NotASubgroup, NotTypeR, \
    UnsupportedCharacteristic
from .linalg import QMatrix
from .qpcore import PContext
from .roots import FOUND, axb_root, finite_root, unipotent_root
from .steinitz import ord_catalog, profinite_surjective
from . import modmat

ADDITIVE_QP = "AdditiveQp"
ADDITIVE_ZP = "AdditiveZp"
UNITS_ZP = "UnitsZp"
GL_ZP = "GL_Zp"
GL_QP = "GL_Qp"
UPPER_UNIPOTENT_QP = "UpperUnipotent_Qp"
BOREL_QP = "Borel_Qp"
AXB_ZP_UNITS = "AxB_ZpUnits"
FINITELY_GENERATED = "FinitelyGenerated"

_CATALOG = (ADDITIVE_QP, ADDITIVE_ZP, UNITS_ZP, GL_ZP, GL_QP, UPPER_UNIPOTENT_QP,
            BOREL_QP, AXB_ZP_UNITS, FINITELY_GENERATED)

# structural kinds of the quasi-reductive quotient
_SPLIT_UNIPOTENT = "split_unipotent"          # the whole group is one
_COMPACT = "compact"                          # group itself compact, pro-order known
_COMPACT_EXTENSION = "compact_over_unipotent"  # compact quotient over a split radical
_NONCOMPACT = "noncompact_quasireductive"     # quotient keeps a split torus
_DYNAMIC = "dynamic"


@dataclass(frozen=True)
class GroupSpec:
    """A group from the catalog, or a finitely generated matrix group."""

    variant: str
    ctx: PContext
    n: int = 1
    gens: Optional[GeneratorSet] = None

    def __post_init__(self):
        if self.variant not in _CATALOG:
            raise InputError(f"unknown group variant {self.variant!r}")
        if self.n < 1:
            raise InputError("dimension must be positive")
        if (self.variant == FINITELY_GENERATED) != (self.gens is not None):
            raise InputError("generator sets go with FinitelyGenerated, only")
        if self.gens is not None and self.gens.n != self.n:
            raise InputError("generator dimension disagrees with the group dimension")

    def describe(self) -> str:
        p = self.ctx.p
        names = {
            ADDITIVE_QP: f"(Q_{p}^{self.n}, +)",
            ADDITIVE_ZP: f"(Z_{p}, +)",
            UNITS_ZP: f"Z_{p}^*",
            GL_ZP: f"GL({self.n}, Z_{p})",
            GL_QP: f"GL({self.n}, Q_{p})",
            UPPER_UNIPOTENT_QP: f"upper unitriangular {self.n}x{self.n} over Q_{p}",
            BOREL_QP: f"upper triangular invertible {self.n}x{self.n} over Q_{p}",
            AXB_ZP_UNITS: f"Z_{p}^* acting on the line (ax+b, a unit)",
            FINITELY_GENERATED: f"matrix group on {len(self.gens.gens)} generators"
            if self.gens else "matrix group",
        }
        return names[self.variant]

    def structure(self):
        """(kind, pro-order of the compact part or None)."""
        p = self.ctx.p
        if self.variant in (ADDITIVE_QP, UPPER_UNIPOTENT_QP):
            return _SPLIT_UNIPOTENT, None
        if self.variant == ADDITIVE_ZP:
            return _COMPACT, ord_catalog("AdditiveZp", p)
        if self.variant == UNITS_ZP:
            return _COMPACT, ord_catalog("UnitsZp", p)
        if self.variant == GL_ZP:
            return _COMPACT, ord_catalog("GLn_Zp", p, n=self.n)
        if self.variant == AXB_ZP_UNITS:
            return _COMPACT_EXTENSION, ord_catalog("UnitsZp", p)
        if self.variant in (GL_QP, BOREL_QP):
            return _NONCOMPACT, None
        return _DYNAMIC, None


SURJECTIVE_AND_DENSE = "SurjectiveAndDense"
NOT_DENSE = "NotDense"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class PowerVerdict:
    """Conclusion for (group, k) plus the criteria that produced it.

    justification is an ordered list of (criterion, detail) steps;
    certificate optionally carries computed witnesses (roots, invariant
    lattices, order computations).
    """

    k: int
    conclusion: str
    justification: tuple
    certificate: dict = field(default_factory=dict)

    def citations(self):
        return [name for name, _ in self.justification]


def _verdict(k, conclusion, steps, certificate=None) -> PowerVerdict:
    steps = list(steps)
    if conclusion in (SURJECTIVE_AND_DENSE, NOT_DENSE):
        steps.append(("density-surjectivity-equivalence",
                      "for these groups the k-th power image is dense iff onto"))
    return PowerVerdict(k, conclusion, tuple(steps), certificate or {})


def analyze(spec: GroupSpec, k: int, spot_checks: int = 0,
            rng: Optional[random.Random] = None, characteristic: int = 0) -> PowerVerdict:
    """Decide whether x -> x^k has dense (equivalently surjective) image.

    spot_checks > 0 additionally extracts that many random k-th roots as
    a certificate wherever the verdict promises surjectivity. Only
    characteristic-0 base fields are computed.
    """
    if characteristic != 0:
        raise UnsupportedCharacteristic(
            "verdicts over positive-characteristic local fields are documented "
            "but not computed")
    if k < 1:
        raise InputError("k must be a positive integer")
    if k == 1:
        return _verdict(k, SURJECTIVE_AND_DENSE,
                        [("identity-power", "k = 1 is the identity map")])
    kind, order = spec.structure()
    rng = rng or random.Random(0)
    if kind == _SPLIT_UNIPOTENT:
        cert = _unipotent_spot_roots(spec, k, spot_checks, rng)
        return _verdict(k, SURJECTIVE_AND_DENSE, [
            ("split-unipotent-divisibility",
             f"{spec.describe()} is split unipotent over a characteristic-0 field, "
             "so k-th roots exist and are unique for every k")], cert)
    if kind == _COMPACT:
        return _compact_verdict(spec, k, order, spot_checks, rng)
    if kind == _COMPACT_EXTENSION:
        ok = profinite_surjective(k, order)
        steps = [
            ("split-unipotent-radical",
             "the translation part is a split unipotent normal subgroup; "
             "the quotient by it is compact"),
            ("compact-quotient-order", f"quotient pro-order {order}"),
            ("coprimality", f"gcd-free({k}, {order}) = {ok}"),
        ]
        if ok:
            steps.append(("congruence-lift",
                          "surjectivity on the compact quotient lifts through the "
                          "nilpotent normal subgroup level by level"))
            cert = _axb_spot_roots(spec, k, spot_checks, rng)
            return _verdict(k, SURJECTIVE_AND_DENSE, steps, cert)
        return _verdict(k, NOT_DENSE, steps)
    if kind == _NONCOMPACT:
        return _verdict(k, NOT_DENSE, [
            ("noncompact-quasireductive-quotient",
             f"{spec.describe()} has a noncompact quotient with trivial split "
             "unipotent radical, so the power image cannot be dense for k > 1"),
            ("split-torus-obstruction",
             "a split torus survives in the quotient and its k-th powers are "
             "a proper closed subgroup"),
        ])
    return _finitely_generated_verdict(spec, k)


def _compact_verdict(spec, k, order, spot_checks, rng):
    ok = profinite_surjective(k, order)
    steps = [
        ("compact-group-order", f"{spec.describe()} is compact with pro-order {order}"),
        ("coprimality", f"k = {k} shares a prime with the order: {not ok}"),
    ]
    cert = {"order": str(order)}
    if ok:
        cert.update(_compact_spot_roots(spec, k, spot_checks, rng))
        return _verdict(k, SURJECTIVE_AND_DENSE, steps, cert)
    return _verdict(k, NOT_DENSE, steps, cert)


def _finitely_generated_verdict(spec, k):
    if spec.ctx is None or spec.gens is None:
        raise InputError("finitely generated analysis needs generators")
    witness = type_r_witness_search(spec.gens)
    if witness is not None:
        return _verdict(k, NOT_DENSE, [
            ("eigenvalue-witness",
             f"word {witness.word_str()} has an eigenvalue of absolute value != 1, "
             "which dense power images forbid"),
        ], {"witness_word": witness.word_str()})
    try:
        flag = ku_flag(spec.gens)
    except NotTypeR as exc:
        return _verdict(k, NOT_DENSE, [
            ("eigenvalue-witness",
             f"word {exc.witness.word_str()} has an eigenvalue of absolute value != 1"),
        ], {"witness_word": exc.witness.word_str()})
    steps = [("sampler-necessary-only",
              "all short words are type R; this is a necessary condition, not a proof")]
    cert = {}
    if flag is None:
        steps.append(("flag-unresolved", "no certified flag within the caps"))
    else:
        steps.append(("flag-certified",
                      f"flag dimensions {flag.dims}: the group sits inside "
                      "compact-by-split-unipotent, consistent with dense powers"))
        cert["flag_dims"] = list(flag.dims)
    return PowerVerdict(k, INCONCLUSIVE, tuple(steps), cert)


def _unipotent_spot_roots(spec, k, count, rng):
    if not count:
        return {}
    n = spec.n if spec.variant == UPPER_UNIPOTENT_QP else 2
    witnesses = []
    for _ in range(count):
        u = _random_unipotent(n, rng)
        res = unipotent_root(u, k)
        if res.status != FOUND:
            raise InternalInvariantViolation("verdict promised a unipotent root")
        witnesses.append(res.root)
    return {"spot_roots": len(witnesses)}


def _random_unipotent(n, rng):
    rows = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return QMatrix(rows)


def _compact_spot_roots(spec, k, count, rng):
    if not count:
        return {}
    ctx = spec.ctx
    level = ctx.precision_n
    mod = ctx.p ** level
    found = 0
    for _ in range(count):
        if spec.variant == ADDITIVE_ZP:
            # the k-th "power" is k * x; the witness root must lie in the
            # group itself, so divide by k directly (a unit mod p here)
            b = rng.randrange(mod)
            root = b * pow(k, -1, mod) % mod
            if k * root % mod != b:
                raise InternalInvariantViolation("additive spot root failed to verify")
            found += 1
            continue
        if spec.variant == UNITS_ZP:
            target = ((_random_unit(ctx.p, level, rng),),)
        else:
            target = _random_gl(spec.n, ctx.p, level, rng)
        res = finite_root(target, k, ctx, level)
        if res.status != FOUND:
            raise InternalInvariantViolation(
                f"verdict promised a k-th root of {target} mod {ctx.p}^{level}")
        found += 1
    return {"spot_roots": found, "spot_level": level}


def _random_unit(p, level, rng):
    while True:
        x = rng.randrange(1, p ** level)
        if x % p:
            return x


def _random_gl(n, p, level, rng):
    mod = p ** level
    while True:
        rows = tuple(tuple(rng.randrange(mod) for _ in range(n)) for _ in range(n))
        if modmat.invertible_mod(rows, p):
            return rows


def _axb_spot_roots(spec, k, count, rng):
    if not count:
        return {}
    ctx = spec.ctx
    level = ctx.precision_n
    for _ in range(count):
        a = _random_unit(ctx.p, level, rng)
        b = rng.randrange(ctx.p ** level)
        res = axb_root((a, b), k, ctx, level)
        if res.status != FOUND:
            raise InternalInvariantViolation("verdict promised a semidirect root")
    return {"spot_roots": count}


# containment witnesses between catalog groups: True marks an algebraic
# subgroup (inheritance applies), "profinite" a closed subgroup of a
# compact parent (inheritance via pro-order divisibility), "closed" a
# merely closed subgroup (no inheritance).
def _containment(parent: GroupSpec, sub: GroupSpec):
    pv, sv = parent.variant, sub.variant
    if parent.ctx.p != sub.ctx.p:
        return None
    if pv == sv and parent.n == sub.n:
        return True
    if pv == ADDITIVE_QP and sv == ADDITIVE_QP and sub.n <= parent.n:
        return True
    if pv == ADDITIVE_QP and sv == ADDITIVE_ZP:
        return "closed"
    if pv == GL_ZP and sv == UNITS_ZP:
        return "profinite"
    if pv == GL_QP and sv in (GL_ZP, UNITS_ZP) and (sv != GL_ZP or sub.n == parent.n):
        return "closed"
    if pv == GL_QP and sv in (BOREL_QP, UPPER_UNIPOTENT_QP) and sub.n == parent.n:
        return True
    if pv == BOREL_QP and sv == UPPER_UNIPOTENT_QP and sub.n == parent.n:
        return True
    return None


@dataclass(frozen=True)
class SubgroupVerdict:
    parent: PowerVerdict
    subgroup: PowerVerdict
    relation: str
    note: str = ""


def analyze_subgroup(parent: GroupSpec, sub: GroupSpec, k: int) -> SubgroupVerdict:
    """Verdicts for a catalog pair, applying inheritance when the
    containment supports it and flagging the classic counterexample when
    it does not."""
    how = _containment(parent, sub)
    if how is None:
        raise NotASubgroup(
            f"no containment witness for {sub.describe()} inside {parent.describe()}")
    parent_verdict = analyze(parent, k)
    independent = analyze(sub, k)
    if parent_verdict.conclusion == SURJECTIVE_AND_DENSE and how in (True, "profinite"):
        reason = ("algebraic-subgroup-inheritance" if how is True
                  else "profinite-order-divisibility")
        inherited = _verdict(k, SURJECTIVE_AND_DENSE, [
            (reason, f"surjectivity on {parent.describe()} passes to {sub.describe()}")])
        if independent.conclusion not in (SURJECTIVE_AND_DENSE,):
            raise InternalInvariantViolation(
                "inheritance and the independent analysis disagree")
        return SubgroupVerdict(parent_verdict, inherited, "inherited")
    note = ""
    if parent_verdict.conclusion == SURJECTIVE_AND_DENSE and how == "closed" \
            and independent.conclusion != SURJECTIVE_AND_DENSE:
        note = ("closed non-algebraic subgroups do not inherit surjectivity: "
                f"{sub.describe()} fails at k = {k} although {parent.describe()} does not")
    return SubgroupVerdict(parent_verdict, independent, "independent", note)


def parse_group(text: str, ctx: PContext, gens=None) -> GroupSpec:
    """Parse CLI group syntax: "GL_Zp(2)", "UnitsZp", "AxB", "AdditiveQp(3)"..."""
    text = text.strip()
    aliases = {"AxB": AXB_ZP_UNITS, "Zp": ADDITIVE_ZP, "Qp": ADDITIVE_QP}
    name, arg = text, None
    if "(" in text and text.endswith(")"):
        name, inner = text[:-1].split("(", 1)
        try:
            arg = int(inner)
        except ValueError as exc:
            raise InputError(f"bad dimension in {text!r}") from exc
    name = aliases.get(name, name)
    if gens is not None:
        return GroupSpec(FINITELY_GENERATED, ctx, gens.n, gens)
    if name not in _CATALOG or name == FINITELY_GENERATED:
        raise InputError(f"unknown group {text!r}")
    if name in (ADDITIVE_QP, GL_ZP, GL_QP, UPPER_UNIPOTENT_QP, BOREL_QP):
        if arg is None:
            raise InputError(f"{name} needs a dimension, e.g. {name}(2)")
        return GroupSpec(name, ctx, arg)
    if arg is not None:
        raise InputError(f"{name} does not take a dimension")
    return GroupSpec(name, ctx)
