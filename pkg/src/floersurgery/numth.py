"""Exact number-theoretic invariants of lens spaces and surgeries.

Dedekind sums, lens-space correction terms, Casson-Walker values and the
Euler totient, all in exact rational arithmetic.  The three quantities
are tied together by identities that double as self-checks:

    lambda(L(p,q)) = -s(q,p)/2
    tau(L(p,q))    = -4p s(q,p)
    sum_i d(L(p,q), i) = -2p lambda(L(p,q)) = p s(q,p)

All functions are pure; the correction-term table cache is guarded by
functools.lru_cache and therefore safe under concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import NotCoprime


def _require_coprime(p: int, q: int) -> None:
    if p < 1:
        raise NotCoprime(f"p must be positive, got {p}")
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")


def dedekind(q: int, p: int) -> Fraction:
    """Classical Dedekind sum s(q, p) = sum_k ((k/p)) ((kq/p)).

    The sawtooth sum collapses to a single integer sum because k -> kq
    permutes the nonzero residues mod p.
    """
    _require_coprime(p, q)
    if p == 1:
        return Fraction(0)
    total = sum(k * ((k * q) % p) for k in range(1, p))
    return Fraction(total, p * p) - Fraction(p - 1, 4)


@lru_cache(maxsize=None)
def _d_table(p: int, r: int) -> tuple[Fraction, ...]:
    # 0 <= r < p, gcd(p, r) = 1
    if p == 1:
        return (Fraction(0),)
    sub = _d_table(r, p % r)
    return tuple(
        Fraction((2 * i + 1 - p - r) ** 2 - p * r, 4 * p * r) - sub[i % r]
        for i in range(p)
    )


def lens_d(p: int, q: int) -> list[Fraction]:
    """Correction terms d(L(p,q), i) for i = 0..p-1.

    Computed by the standard continued-fraction recursion with d of the
    3-sphere as base case.  q is reduced mod p first; the index labels
    are the surgery-block labels used by the cone module, pinned only up
    to affine relabeling.
    """
    _require_coprime(p, q)
    if p == 1:
        return [Fraction(0)]
    return list(_d_table(p, q % p))


def lens_lambda(p: int, q: int) -> Fraction:
    """Casson-Walker invariant of L(p,q): -s(q,p)/2."""
    return -dedekind(q, p) / 2


def lens_tau(p: int, q: int) -> Fraction:
    """Casson-Gordon invariant of L(p,q): -4p s(q,p)."""
    return -4 * p * dedekind(q, p)


@dataclass(frozen=True)
class LensInvariants:
    """Invariant bundle of L(p,q), cross-checked on construction."""

    p: int
    q: int
    s: Fraction
    lam: Fraction
    tau: Fraction
    d_table: tuple[Fraction, ...]


def lens_invariants(p: int, q: int) -> LensInvariants:
    s = dedekind(q, p)
    lam = lens_lambda(p, q)
    tau = lens_tau(p, q)
    table = tuple(lens_d(p, q))
    if sum(table) != -2 * p * lam:
        raise AssertionError(
            f"lens invariants of ({p},{q}) violate sum d = -2p lambda"
        )
    return LensInvariants(p=p, q=q, s=s, lam=lam, tau=tau, d_table=table)


@dataclass(frozen=True)
class CassonWalkerInput:
    """Data feeding the Casson-Walker surgery formula."""

    lambda_y: Fraction
    h1_order: int
    delta2: int
    p: int
    q: int


def casson_walker_surgery(data: CassonWalkerInput) -> Fraction:
    """lambda of p/q surgery: lambda(Y) + lambda(L(p,q)) + q delta2 / (2p|H1|)."""
    _require_coprime(data.p, data.q)
    if data.h1_order < 1:
        raise ValueError("h1_order must be positive")
    correction = Fraction(data.q * data.delta2, 2 * data.p * data.h1_order)
    return data.lambda_y + lens_lambda(data.p, data.q) + correction


def lambda_from_hf(chi_red: int, d_sum: Fraction, h1_order: int) -> Fraction:
    """Casson-Walker value from Floer data: (chi_red - d_sum/2) / |H1|."""
    if h1_order < 1:
        raise ValueError("h1_order must be positive")
    return (Fraction(chi_red) - Fraction(d_sum) / 2) / h1_order


def totient(n: int) -> int:
    """Euler's totient."""
    if n < 1:
        raise ValueError("totient needs n >= 1")
    result = n
    m = n
    f = 2
    while f * f <= m:
        if m % f == 0:
            while m % f == 0:
                m //= f
            result -= result // f
        f += 1
    if m > 1:
        result -= result // m
    return result
