"""Subword complexity and prefix-repetition/mirror witness detection.

A spade witness (w, u, v) means the prefix decomposes as W U V U with
|W| = w, |U| = u, |V| = v; a club witness has the second U reversed.  The
detector reports, per block length u, the minimum of max(w/u, v/u) over all
admissible pairs, as an exact rational.  Everything found on a finite prefix
is evidence about the infinite word, never proof: unboundedness of u and
non-ultimate-periodicity live beyond any prefix.

Two interchangeable search backends exist: a direct-comparison reference
that walks candidate pairs in tie-break order, and a rolling-hash backend
whose winning candidates are re-verified by direct comparison so collisions
cannot leak into results.  Both return identical profiles.
"""

from __future__ import annotations

import os
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .padic import Rational

__all__ = [
    "CProfileEntry",
    "DetectionResult",
    "PrefixScan",
    "Witness",
    "check_witness",
    "complexity",
    "detect",
    "scan_special_prefixes",
    "spade_constant_from_complexity",
    "zarray",
]


def complexity(prefix: Sequence, n: int) -> int:
    """Number of distinct length-n blocks of the prefix.

    This is a lower bound for the complexity of the infinite word; equality
    needs the prefix to be long enough to exhibit every factor.
    """
    if not (1 <= n <= len(prefix)):
        raise ValueError(f"need 1 <= n <= |prefix|, got n={n}, L={len(prefix)}")
    seq = tuple(prefix)
    return len({seq[i:i + n] for i in range(len(seq) - n + 1)})


def spade_constant_from_complexity(C: Rational) -> Fraction:
    """The repetition constant 3C + 1 guaranteed by linear complexity <= C*n."""
    C = Fraction(C)
    if C <= 0:
        raise ValueError("C must be positive")
    return 3 * C + 1


@dataclass(frozen=True)
class Witness:
    kind: str
    w: int
    u: int
    v: int
    prefix_length_used: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(max(self.w, self.v), self.u)

    def to_json(self) -> dict:
        return {"kind": self.kind, "w": self.w, "u": self.u, "v": self.v,
                "prefix_length_used": self.prefix_length_used}


@dataclass(frozen=True)
class CProfileEntry:
    u: int
    ratio: Optional[Fraction]
    witness: Optional[Witness]

    def to_json(self) -> dict:
        return {"u": self.u,
                "min_ratio": None if self.ratio is None else
                f"{self.ratio.numerator}/{self.ratio.denominator}",
                "witness": None if self.witness is None else self.witness.to_json()}


@dataclass
class DetectionResult:
    kind: str
    c_max: Fraction
    prefix_length: int
    witnesses: List[Witness]
    profile: List[CProfileEntry]
    min_witnesses: int = 1

    @property
    def family_complete(self) -> bool:
        return len(self.witnesses) >= self.min_witnesses

    @property
    def largest_u(self) -> int:
        return self.witnesses[-1].u if self.witnesses else 0

    @property
    def prefix_fraction_used(self) -> Fraction:
        if not self.witnesses:
            return Fraction(0)
        w = self.witnesses[-1]
        return Fraction(w.w + 2 * w.u + w.v, self.prefix_length)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "c_max": f"{self.c_max.numerator}/{self.c_max.denominator}",
            "prefix_length": self.prefix_length,
            "min_witnesses": self.min_witnesses,
            "family_complete": self.family_complete,
            "largest_u": self.largest_u,
            "prefix_fraction_used":
                f"{self.prefix_fraction_used.numerator}/"
                f"{self.prefix_fraction_used.denominator}",
            "witnesses": [w.to_json() for w in self.witnesses],
            "profile": [e.to_json() for e in self.profile],
        }


def check_witness(kind: str, prefix: Sequence, w: int, u: int, v: int) -> bool:
    """Directly verify one candidate decomposition W U V U / W U V ~U."""
    if kind not in ("spade", "club"):
        raise ValueError(f"kind must be spade or club, got {kind!r}")
    if u < 1 or w < 0 or v < 0 or w + 2 * u + v > len(prefix):
        return False
    seq = tuple(prefix)
    left = seq[w:w + u]
    right = seq[w + u + v:w + 2 * u + v]
    return right == left if kind == "spade" else right == left[::-1]


def _wmax(c_max: Fraction, u: int) -> int:
    # the largest admissible w (equally v): w/u <= c_max
    return int(c_max * u)  # Fraction floors toward zero; c_max >= 0


def _tie_break_pairs(m: int):
    # pairs with max(w, v) == m, in lexicographic (w, v) order
    for w in range(m):
        yield w, m
    for v in range(m + 1):
        yield m, v


def _best_pair_naive(kind, seq, u, c_max):
    L = len(seq)
    cap = _wmax(c_max, u)
    for m in range(cap + 1):
        for w, v in _tie_break_pairs(m):
            if w + 2 * u + v > L:
                continue
            if check_witness(kind, seq, w, u, v):
                return w, v
    return None


class _Hashes:
    """Polynomial rolling hashes mod 2^61 - 1 of a sequence and its reversal."""

    MOD = (1 << 61) - 1
    BASE = 131_075_939

    def __init__(self, seq):
        ids = {}
        data = [ids.setdefault(x, len(ids) + 1) for x in seq]
        self.n = len(data)
        self._pw = [1] * (self.n + 1)
        self._fwd = [0] * (self.n + 1)
        self._rev = [0] * (self.n + 1)
        for i in range(self.n):
            self._pw[i + 1] = self._pw[i] * self.BASE % self.MOD
            self._fwd[i + 1] = (self._fwd[i] * self.BASE + data[i]) % self.MOD
            self._rev[i + 1] = (self._rev[i] * self.BASE
                                + data[self.n - 1 - i]) % self.MOD

    def fwd(self, start: int, length: int) -> int:
        # hash of seq[start : start+length], 0-indexed
        return (self._fwd[start + length]
                - self._fwd[start] * self._pw[length]) % self.MOD

    def rev(self, start: int, length: int) -> int:
        # hash of reversed(seq[start : start+length])
        rs = self.n - start - length
        return (self._rev[rs + length]
                - self._rev[rs] * self._pw[length]) % self.MOD


def _best_pair_hashed(kind, seq, u, c_max, hashes: _Hashes):
    L = len(seq)
    cap = _wmax(c_max, u)
    i_hi = min(cap, L - 2 * u)  # i = w, 0-indexed left-block start
    if i_hi < 0:
        return None
    j_hi_all = min(L - u, i_hi + u + cap)
    groups: Dict[int, List[int]] = {}
    for j in range(u, j_hi_all + 1):
        groups.setdefault(hashes.fwd(j, u), []).append(j)
    best = None  # (ratio, w, v)
    for i in range(i_hi + 1):
        if best is not None and best[0] <= Fraction(i, u):
            break  # later i cannot beat the current minimum
        h = hashes.fwd(i, u) if kind == "spade" else hashes.rev(i, u)
        js = groups.get(h)
        if not js:
            continue
        lo, hi = i + u, min(i + u + cap, L - u)
        k = bisect_left(js, lo)
        while k < len(js) and js[k] <= hi:
            j = js[k]
            w, v = i, j - i - u
            if check_witness(kind, seq, w, u, v):  # kill hash collisions
                cand = (Fraction(max(w, v), u), w, v)
                if best is None or cand < best:
                    best = cand
                break
            k += 1
    if best is None:
        return None
    return best[1], best[2]


def detect(kind: str, prefix: Sequence, c_max: Rational,
           min_witnesses: int = 1, method: str = "hashed",
           workers: Optional[int] = None) -> DetectionResult:
    """Find, for every block length u, the best admissible (w, v) pair.

    Returns the full exact profile plus the witness family (one witness per
    u that admits one, so u is strictly increasing).  The family is evidence
    for the prefix only; `min_witnesses` is the caller's bar for treating it
    as meaningful, recorded in the result rather than enforced.
    """
    if kind not in ("spade", "club"):
        raise ValueError(f"kind must be spade or club, got {kind!r}")
    if not prefix:
        raise ValueError("empty prefix")
    c_max = Fraction(c_max)
    if c_max < 0:
        raise ValueError("c_max must be >= 0")
    if method not in ("hashed", "naive"):
        raise ValueError(f"unknown method {method!r}")
    seq = tuple(prefix)
    L = len(seq)
    hashes = _Hashes(seq) if method == "hashed" else None

    def solve(u):
        if method == "hashed":
            return u, _best_pair_hashed(kind, seq, u, c_max, hashes)
        return u, _best_pair_naive(kind, seq, u, c_max)

    us = range(1, L // 2 + 1)
    if workers is None:
        workers = int(os.environ.get("PADIC_CF_THREADS", "1") or "1")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solved = dict(pool.map(solve, us))
    else:
        solved = dict(map(solve, us))

    profile, witnesses = [], []
    for u in us:
        pair = solved[u]
        if pair is None:
            profile.append(CProfileEntry(u, None, None))
            continue
        w, v = pair
        wit = Witness(kind, w, u, v, L)
        profile.append(CProfileEntry(u, wit.ratio, wit))
        witnesses.append(wit)
    return DetectionResult(kind, c_max, L, witnesses, profile, min_witnesses)


# -- prefix scans ---------------------------------------------------------------

def zarray(seq: Sequence) -> List[int]:
    """z[i] = length of the longest common prefix of seq and seq[i:]."""
    seq = tuple(seq)
    n = len(seq)
    z = [0] * n
    if n == 0:
        return z
    z[0] = n
    l = r = 0
    for i in range(1, n):
        if i < r:
            z[i] = min(r - i, z[i - l])
        while i + z[i] < n and seq[z[i]] == seq[i + z[i]]:
            z[i] += 1
        if i + z[i] > r:
            l, r = i, i + z[i]
    return z


@dataclass
class PrefixScan:
    longest_square_u: int
    longest_palindromic_prefix: int
    period_candidates: List[Tuple[int, int]]  # (preperiod, period)

    def to_json(self) -> dict:
        return {
            "longest_square_u": self.longest_square_u,
            "longest_palindromic_prefix": self.longest_palindromic_prefix,
            "period_candidates": [{"preperiod": r, "period": q}
                                  for r, q in self.period_candidates],
        }


def scan_special_prefixes(prefix: Sequence) -> PrefixScan:
    """Longest square prefix, longest palindromic prefix, and all
    (preperiod, period) pairs with period <= |prefix|/3 that describe the
    whole prefix with at least two full periods visible."""
    seq = tuple(prefix)
    L = len(seq)
    z = zarray(seq)
    square_u = max((u for u in range(1, L // 2 + 1) if z[u] >= u), default=0)

    hashes = _Hashes(seq)
    pal = 0
    for m in range(L, 0, -1):
        # hash filter is O(1); the direct check only runs on hits
        if hashes.fwd(0, m) == hashes.rev(0, m) and seq[:m] == seq[m - 1::-1]:
            pal = m
            break

    candidates = []
    for q in range(1, L // 3 + 1):
        r = 0
        for i in range(L - q - 1, -1, -1):  # rightmost mismatch, early exit
            if seq[i] != seq[i + q]:
                r = i + 1
                break
        if r + 2 * q <= L:
            candidates.append((r, q))
    return PrefixScan(square_u, pal, candidates)
