"""The p-adic continued fraction algorithm, continuants, and exact identities.

The expansion runs entirely over exact rationals: gamma_{n+1} = 1/(gamma_n -
a_n) with a_n the floor of gamma_n, stopping when a complete quotient equals
its floor.  Ruban expansions of rationals may never terminate, so a step cap
is mandatory and truncation is a flagged outcome rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .floors import FloorFunction
from .padic import Rational, format_rational, parse_rational, vp

__all__ = [
    "ContinuantState",
    "ExpansionRecord",
    "IdentityCheck",
    "IdentityReport",
    "MalformedWordError",
    "DegenerateTailError",
    "continuant_matrix",
    "continuants",
    "eval_cf",
    "expand",
    "tail_reconstruct",
    "verify_identities",
]


class MalformedWordError(ValueError):
    """A finite word whose convergent has a vanishing denominator."""


class DegenerateTailError(ValueError):
    """tail_reconstruct hit a zero denominator."""


@dataclass(frozen=True)
class ContinuantState:
    """One step of the three-term recurrences, with the previous pair."""

    index: int
    A_prev: Fraction
    A: Fraction
    B_prev: Fraction
    B: Fraction

    def determinant(self) -> Fraction:
        """A_n B_{n-1} - B_n A_{n-1}; must equal (-1)^(n+1)."""
        return self.A * self.B_prev - self.B * self.A_prev


@dataclass
class ExpansionRecord:
    p: int
    floor: FloorFunction
    alpha: Fraction
    partial_quotients: List[Fraction]
    complete_quotients: List[Fraction]
    terminated: bool
    truncated: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "floor": self.floor.to_json(),
            "alpha": format_rational(self.alpha),
            "a": [format_rational(a) for a in self.partial_quotients],
            "terminated": self.terminated,
            "truncated": self.truncated,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExpansionRecord":
        floor = FloorFunction.from_json(obj["floor"])
        alpha = parse_rational(obj["alpha"])
        rec = expand(alpha, floor, max_terms=max(1, len(obj["a"])))
        if [format_rational(a) for a in rec.partial_quotients] != obj["a"]:
            raise ValueError("stored partial quotients disagree with re-expansion")
        return rec


def expand(alpha: Rational, floor: FloorFunction, max_terms: int) -> ExpansionRecord:
    """Run the expansion of alpha for at most max_terms partial quotients."""
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    alpha = Fraction(alpha)
    a: List[Fraction] = []
    gammas: List[Fraction] = []
    gamma = alpha
    terminated = False
    while len(a) < max_terms:
        gammas.append(gamma)
        an = floor.apply(gamma)
        a.append(an)
        if gamma == an:
            terminated = True
            break
        gamma = 1 / (gamma - an)
    return ExpansionRecord(floor.p, floor, alpha, a, gammas,
                           terminated, not terminated)


def continuants(word: Sequence[Rational]) -> List[ContinuantState]:
    """Continuant states for a_0..a_n with A_{-1}=1, A_0=a_0, B_{-1}=0, B_0=1."""
    out = []
    A_pp, A_p = Fraction(0), Fraction(1)
    B_pp, B_p = Fraction(1), Fraction(0)
    for n, an in enumerate(word):
        an = Fraction(an)
        A_n = an * A_p + A_pp
        B_n = an * B_p + B_pp
        out.append(ContinuantState(n, A_p, A_n, B_p, B_n))
        A_pp, A_p = A_p, A_n
        B_pp, B_p = B_p, B_n
    return out


def continuant_matrix(word: Sequence[Rational]):
    """((A_n, A_{n-1}), (B_n, B_{n-1})), the product of the step matrices."""
    states = continuants(word)
    if not states:
        return ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    last = states[-1]
    return ((last.A, last.A_prev), (last.B, last.B_prev))


def eval_cf(word: Sequence[Rational]) -> Fraction:
    """Exact value A_n/B_n of a finite word, via the forward recurrences."""
    if not word:
        raise MalformedWordError("empty word has no value")
    last = continuants(word)[-1]
    if last.B == 0:
        raise MalformedWordError(
            f"word {[format_rational(Fraction(a)) for a in word]} has B_n = 0")
    return last.A / last.B


def tail_reconstruct(prefix: Sequence[Rational], gamma: Rational) -> Fraction:
    """alpha = (gamma*A_{k-1} + A_{k-2}) / (gamma*B_{k-1} + B_{k-2}).

    k = len(prefix); the k = 0 case uses A_{-1}=1, A_{-2}=0, B_{-1}=0,
    B_{-2}=1, forced by the matrix identity, so the empty prefix returns
    gamma itself.
    """
    gamma = Fraction(gamma)
    states = continuants(prefix)
    if not states:
        A1, A2, B1, B2 = Fraction(1), Fraction(0), Fraction(0), Fraction(1)
    else:
        last = states[-1]
        A1, A2, B1, B2 = last.A, last.A_prev, last.B, last.B_prev
    den = gamma * B1 + B2
    if den == 0:
        raise DegenerateTailError("gamma*B_{k-1} + B_{k-2} = 0")
    return (gamma * A1 + A2) / den


# -- identity battery ---------------------------------------------------------


@dataclass
class IdentityCheck:
    name: str
    passed: bool
    applicable: bool = True
    first_failed_index: Optional[int] = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "applicable": self.applicable,
            "first_failed_index": self.first_failed_index,
            "detail": self.detail,
        }


@dataclass
class IdentityReport:
    checks: List[IdentityCheck]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks if c.applicable)

    def __getitem__(self, name: str) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"all_passed": self.all_passed,
                "checks": [c.to_json() for c in self.checks]}


def _neg_vp_sum(word, p, upto) -> int:
    return sum(-vp(a, p) for a in word[1:upto + 1])


def verify_identities(rec: ExpansionRecord) -> IdentityReport:
    """Exact checks of the determinant, valuation-product, approximation,
    archimedean-growth, and record-consistency identities.

    The valuation products for the A-continuants take their textbook shape
    only when a_0 = 0; for a nonzero a_0 the battery checks the adjusted
    products (every extra factor is |a_0|_p), so tampered records are caught
    either way.
    """
    word = rec.partial_quotients
    if len(word) < 2:
        raise ValueError("need at least 2 partial quotients")
    p = rec.p
    states = continuants(word)
    checks = []

    # determinant: A_n B_{n-1} - B_n A_{n-1} = (-1)^(n+1)
    bad = next((s.index for s in states
                if s.determinant() != Fraction(-1) ** (s.index + 1)), None)
    checks.append(IdentityCheck("determinant", bad is None,
                                first_failed_index=bad))

    a0 = word[0]
    last = len(word) - 1

    # |B_n|_p = prod_{i=1..n} |a_i|_p for n >= 1 (independent of a_0)
    bad = None
    for s in states[1:]:
        if -vp(s.B, p) != _neg_vp_sum(word, p, s.index):
            bad = s.index
            break
    checks.append(IdentityCheck("b-valuation-product", bad is None,
                                first_failed_index=bad))

    # |A_n|_p: prod_{i=2..n} when a_0 = 0 (n >= 2); with a_0 != 0 every
    # product gains the factor |a_0|_p (valid since vp(a_0) <= 0 for floor
    # images; skipped otherwise)
    if a0 == 0:
        bad = None
        for s in states[2:]:
            expected = _neg_vp_sum(word, p, s.index) + vp(word[1], p)
            if -vp(s.A, p) != expected:
                bad = s.index
                break
        checks.append(IdentityCheck("a-valuation-product", bad is None,
                                    first_failed_index=bad))
    elif vp(a0, p) <= 0:
        bad = None
        for s in states[1:]:
            expected = _neg_vp_sum(word, p, s.index) - vp(a0, p)
            if -vp(s.A, p) != expected:
                bad = s.index
                break
        checks.append(IdentityCheck("a-valuation-product", bad is None,
                                    first_failed_index=bad,
                                    detail="adjusted by |a_0|_p"))
    else:
        checks.append(IdentityCheck("a-valuation-product", True,
                                    applicable=False,
                                    detail="vp(a_0) > 0: no product form"))

    # strict p-adic growth, and |A_n|_p <= |B_n|_p when a_0 = 0
    bad = None
    for prev, cur in zip(states, states[1:]):
        growing = (vp(cur.B, p) < vp(prev.B, p)
                   and vp(cur.A, p) < vp(prev.A, p))
        if a0 == 0 and not (vp(cur.A, p) >= vp(cur.B, p)):
            growing = False
        if not growing:
            bad = cur.index
            break
    checks.append(IdentityCheck("valuation-monotonicity", bad is None,
                                first_failed_index=bad))

    # vp(B_n*alpha - A_n) = sum_{j<=n+1} -vp(a_j), below termination
    bad = None
    for s in states[:last]:
        lhs = vp(s.B * rec.alpha - s.A, p)
        if lhs != _neg_vp_sum(word, p, s.index + 1):
            bad = s.index
            break
    if rec.terminated and states[last].B * rec.alpha - states[last].A != 0:
        bad = last
    checks.append(IdentityCheck("approximation-valuation", bad is None,
                                first_failed_index=bad))

    # max(|A_n|, |B_n|) <= max(1, |a_0|) * (M+1)^n with M = max |a_i|
    M = max(abs(a) for a in word)
    scale = max(Fraction(1), abs(a0))
    bad = next((s.index for s in states
                if max(abs(s.A), abs(s.B)) > scale * (M + 1) ** s.index), None)
    checks.append(IdentityCheck("archimedean-growth", bad is None,
                                first_failed_index=bad,
                                detail=f"M = {format_rational(M)}"))

    # the record is self-consistent: floors, the gamma recurrence, and the
    # round trip through every tail
    bad = None
    detail = ""
    gammas = rec.complete_quotients
    for i, (ai, gi) in enumerate(zip(word, gammas)):
        if rec.floor.apply(gi) != ai:
            bad, detail = i, "a_i != s(gamma_i)"
            break
        if i + 1 < len(gammas) and gammas[i + 1] != 1 / (gi - ai):
            bad, detail = i, "gamma recurrence broken"
            break
        if tail_reconstruct(word[:i], gi) != rec.alpha:
            bad, detail = i, "tail reconstruction misses alpha"
            break
    checks.append(IdentityCheck("record-consistency", bad is None,
                                first_failed_index=bad, detail=detail))

    return IdentityReport(checks)
