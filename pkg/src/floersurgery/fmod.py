"""Absolutely Q-graded, relatively Z-graded F_2[U]-modules.

The value type used throughout the package is a finite direct sum of
towers T+_d (U acts surjectively, one-dimensional kernel at the bottom
grading d, U lowers grading by 2) and finite bars tau_d(N) (dimension N,
killed by U^N but not U^{N-1}).  Finite modules are carried concretely by
:class:`FiniteUPresentation` and decomposed into bars by :func:`barcode`.

All values are immutable after construction and all operations are pure
functions, so concurrent evaluation needs no coordination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from . import gf2
from .errors import InfiniteModule, InvalidPresentation

Grading = Fraction


def as_grading(x: Union[int, str, Fraction]) -> Fraction:
    """Parse a grading: int, Fraction or a string like '-3/4'."""
    if isinstance(x, bool):
        raise ValueError(f"not a grading: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ValueError(f"not an exact grading: {x!r}")


def format_grading(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True, order=True)
class Tower:
    """The module F[U,U^-1]/U.F[U] with its generator 1 at grading bottom."""

    bottom: Fraction


@dataclass(frozen=True, order=True)
class Tau:
    """Length-N truncated tower: bottom grading, dimension N, Z_2-parity."""

    bottom: Fraction
    length: int
    parity: int = 0

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("tau length must be positive")
        if self.parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")

    @property
    def top(self) -> Fraction:
        return self.bottom + 2 * (self.length - 1)


@dataclass(frozen=True)
class GradedModule:
    """Finite direct sum of towers and bars, kept in canonical sorted order.

    Towers carry parity 0 by convention; when a tower is present every bar
    parity must equal its bottom-grading offset from the tower mod 2.
    """

    towers: tuple[Tower, ...] = ()
    bars: tuple[Tau, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "towers", tuple(sorted(self.towers)))
        object.__setattr__(self, "bars", tuple(sorted(self.bars)))
        if self.towers:
            anchor = self.towers[0].bottom
            for t in self.towers[1:]:
                diff = t.bottom - anchor
                if diff.denominator != 1 or diff.numerator % 2 != 0:
                    raise ValueError(
                        f"tower bottoms {anchor} and {t.bottom} do not differ "
                        "by an even integer"
                    )
            for b in self.bars:
                diff = b.bottom - anchor
                if diff.denominator != 1:
                    raise ValueError(
                        f"bar at {b.bottom} is not integrally graded against "
                        f"the tower at {anchor}"
                    )
                if diff.numerator % 2 != b.parity:
                    raise ValueError(
                        f"bar at {b.bottom} declares parity {b.parity} but "
                        f"sits at offset {diff} from the tower"
                    )

    @property
    def dim_red(self) -> int:
        return sum(b.length for b in self.bars)

    def dims(self) -> tuple[int, int]:
        """(even, odd) dimensions of the finite part."""
        even = sum(b.length for b in self.bars if b.parity == 0)
        odd = sum(b.length for b in self.bars if b.parity == 1)
        return even, odd


@dataclass(frozen=True)
class FiniteUPresentation:
    """Concrete finite F_2[U]-module: graded basis plus the U matrix.

    ``u_cols[j]`` is the bitmask of U(e_j) over basis indices.  Use
    :meth:`from_rows` to build from a row-major 0/1 matrix where entry
    [i][j] is the coefficient of e_i in U(e_j).
    """

    gradings: tuple[Fraction, ...]
    parities: tuple[int, ...]
    u_cols: tuple[int, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        n = len(self.gradings)
        if len(self.parities) != n or len(self.u_cols) != n:
            raise ValueError("basis fields must have equal lengths")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(n)))
        elif len(self.labels) != n:
            raise ValueError("labels must match basis length")
        for c in self.u_cols:
            if c < 0 or c >> n:
                raise ValueError("U column has bits outside the basis")
        if any(p not in (0, 1) for p in self.parities):
            raise ValueError("parities must be 0 or 1")

    @property
    def dim(self) -> int:
        return len(self.gradings)

    @classmethod
    def from_rows(
        cls,
        gradings: Iterable[Union[int, str, Fraction]],
        parities: Iterable[int],
        rows: list[list[int]],
        labels: Iterable[str] = (),
    ) -> "FiniteUPresentation":
        gs = tuple(as_grading(g) for g in gradings)
        n = len(gs)
        if rows and (len(rows) != n or any(len(r) != n for r in rows)):
            raise ValueError(f"U matrix must be {n}x{n}")
        cols = [0] * n
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                if entry not in (0, 1):
                    raise ValueError("U matrix entries must be 0 or 1")
                if entry:
                    cols[j] |= 1 << i
        return cls(gs, tuple(parities), tuple(cols), tuple(labels))

    def u_power_rank(self, j: int) -> int:
        """rank of U^j, by direct matrix power (used as a test oracle)."""
        cols = list(gf2.identity(self.dim))
        for _ in range(j):
            cols = gf2.mat_mul(list(self.u_cols), cols)
        return gf2.rank(cols)


ZERO_MODULE = FiniteUPresentation((), (), ())


def validate(m: FiniteUPresentation) -> list[str]:
    """Check nilpotency, degree -2 homogeneity of U and parity consistency.

    Returns a list of messages, each prefixed with one of the codes
    NonHomogeneousU, NotNilpotent, ParityMismatch; empty means valid.
    """
    errs: list[str] = []
    n = m.dim
    for j, col in enumerate(m.u_cols):
        for i in gf2.bits(col):
            if m.gradings[i] != m.gradings[j] - 2:
                errs.append(
                    f"NonHomogeneousU: U sends {m.labels[j]} (grading "
                    f"{m.gradings[j]}) to {m.labels[i]} (grading {m.gradings[i]})"
                )
    cols = list(gf2.identity(n))
    u = list(m.u_cols)
    for _ in range(n):
        cols = gf2.mat_mul(u, cols)
    if not gf2.is_zero(cols):
        errs.append(f"NotNilpotent: U^{n} is nonzero")
    for i in range(n):
        for j in range(i + 1, n):
            diff = m.gradings[i] - m.gradings[j]
            if diff.denominator != 1:
                continue
            if (m.parities[i] - m.parities[j]) % 2 != diff.numerator % 2:
                errs.append(
                    f"ParityMismatch: {m.labels[i]} and {m.labels[j]} are "
                    f"{diff} apart but declare parities "
                    f"{m.parities[i]}/{m.parities[j]}"
                )
    return errs


def _require_valid(m: FiniteUPresentation) -> None:
    errs = validate(m)
    if errs:
        raise InvalidPresentation(errs)


def barcode(m: FiniteUPresentation) -> list[Tau]:
    """Decompose a valid presentation into its unique multiset of bars.

    Grading-ordered column reduction: sweep each grading line top-down,
    carrying one vector per live bar.  When the U-images of live vectors
    become dependent the youngest bar dies (elder rule); basis vectors not
    spanned by surviving images are born as new bars.
    """
    _require_valid(m)
    by_grading: dict[Fraction, list[int]] = {}
    for i, g in enumerate(m.gradings):
        by_grading.setdefault(g, []).append(i)
    parity_at = {m.gradings[i]: m.parities[i] for i in range(m.dim)}

    lines: dict[Fraction, list[Fraction]] = {}
    for g in by_grading:
        key = g - 2 * (g / 2).__floor__()
        lines.setdefault(key, []).append(g)

    u = list(m.u_cols)
    bars: list[Tau] = []
    for gradings in lines.values():
        top, bottom = max(gradings), min(gradings)
        active: list[tuple[int, Fraction]] = []  # (vector, birth), elder first
        g = top
        while g >= bottom:
            ech = gf2.Echelon()
            for vec, _ in active:
                ech.insert(vec)
            for b in by_grading.get(g, []):
                added, res, _ = ech.insert(1 << b)
                if added:
                    active.append((res, g))
            survivors: list[tuple[int, Fraction]] = []
            img_ech = gf2.Echelon()
            for vec, birth in active:
                added, res, _ = img_ech.insert(gf2.mat_vec(u, vec))
                if added:
                    survivors.append((res, birth))
                else:
                    length = (birth - g) / 2 + 1
                    bars.append(Tau(g, int(length), parity_at[g]))
            active = survivors
            g -= 2
        assert not active
    return sorted(bars)


def as_graded_module(m: FiniteUPresentation) -> GradedModule:
    return GradedModule(towers=(), bars=tuple(barcode(m)))


def euler_z2(m: Union[GradedModule, FiniteUPresentation]) -> int:
    """Euler characteristic in the Z_2-grading: dim(even) - dim(odd)."""
    if isinstance(m, GradedModule):
        if m.towers:
            raise InfiniteModule("module contains towers")
        even, odd = m.dims()
        return even - odd
    return sum(1 if p == 0 else -1 for p in m.parities)


def iso_check(a: GradedModule, b: GradedModule) -> bool:
    """Graded isomorphism test: identical multisets of towers and bars."""
    return a.towers == b.towers and a.bars == b.bars
