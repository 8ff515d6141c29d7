"""Sparse multi-photon Fock states over spatial modes with internal qudit labels.

A mode is addressed by a :class:`ModeLabel` pair ``(spatial, internal)``.
States are number-homogeneous superpositions: every stored occupation carries
the same total photon count, so distinct photon-number sectors never mix.
Amplitudes with modulus below :data:`PRUNE_EPS` are dropped whenever a state
is built, which lets exact cancellations produce genuinely empty states.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import DegenerateStateError, DimensionMismatch, ModeCollisionError

PRUNE_EPS = 1e-12


class ModeLabel(NamedTuple):
    """One bosonic mode: spatial index plus internal (qudit) level.

    Tuple comparison gives the canonical ordering: by spatial index first,
    then by internal level.
    """

    spatial: int
    internal: int


LabelLike = ModeLabel | tuple[int, int]


def _as_label(label: LabelLike) -> ModeLabel:
    lbl = ModeLabel(int(label[0]), int(label[1]))
    if lbl.spatial < 0 or lbl.internal < 0:
        raise DimensionMismatch(f"mode label {lbl} has a negative index")
    return lbl


class Occupation:
    """Immutable photon-count multiset over mode labels.

    Entries are stored in canonical (sorted) order with all counts >= 1,
    so two equal occupations compare equal and hash alike regardless of
    the order they were assembled in.
    """

    __slots__ = ("_items", "total")

    _items: tuple[tuple[ModeLabel, int], ...]
    total: int

    def __init__(self, counts: Mapping[LabelLike, int] | Iterable[tuple[LabelLike, int]] = ()):
        if isinstance(counts, Occupation):
            self._items = counts._items
            self.total = counts.total
            return
        pairs = counts.items() if isinstance(counts, Mapping) else counts
        acc: dict[ModeLabel, int] = {}
        for label, count in pairs:
            c = int(count)
            if c < 0:
                raise DimensionMismatch(f"negative photon count {c}")
            if c == 0:
                continue
            lbl = _as_label(label)
            acc[lbl] = acc.get(lbl, 0) + c
        self._items = tuple(sorted(acc.items()))
        self.total = sum(acc.values())

    @classmethod
    def from_photons(cls, labels: Iterable[LabelLike]) -> "Occupation":
        """Build an occupation from one label per photon."""
        return cls((label, 1) for label in labels)

    @property
    def items(self) -> tuple[tuple[ModeLabel, int], ...]:
        return self._items

    def counts(self) -> dict[ModeLabel, int]:
        return dict(self._items)

    def count(self, label: LabelLike) -> int:
        lbl = ModeLabel(int(label[0]), int(label[1]))
        for stored, c in self._items:
            if stored == lbl:
                return c
        return 0

    def spatial_modes(self) -> set[int]:
        return {lbl.spatial for lbl, _ in self._items}

    def level_totals(self) -> dict[int, int]:
        """Total photon count per internal level."""
        out: dict[int, int] = {}
        for lbl, c in self._items:
            out[lbl.internal] = out.get(lbl.internal, 0) + c
        return out

    @property
    def max_spatial(self) -> int:
        return max((lbl.spatial for lbl, _ in self._items), default=-1)

    @property
    def max_level(self) -> int:
        return max((lbl.internal for lbl, _ in self._items), default=-1)

    def merge_disjoint(self, other: "Occupation") -> "Occupation":
        """Concatenate with another occupation on disjoint spatial modes."""
        if self.spatial_modes() & other.spatial_modes():
            raise ModeCollisionError("occupations overlap in spatial modes")
        return Occupation(self._items + other._items)

    def __iter__(self) -> Iterator[tuple[ModeLabel, int]]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return hash(self._items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Occupation):
            return NotImplemented
        return self._items == other._items

    def __repr__(self) -> str:
        body = ", ".join(f"({l.spatial}, {l.internal}): {c}" for l, c in self._items)
        return f"Occupation({{{body}}})"


OccupationLike = Occupation | Mapping[LabelLike, int] | Iterable[tuple[LabelLike, int]]


def _as_occupation(occ: OccupationLike) -> Occupation:
    return occ if isinstance(occ, Occupation) else Occupation(occ)


class FockState:
    """Sparse complex superposition of occupations on a declared mode space.

    ``modes`` and ``levels`` fix the enclosing system: every stored label must
    satisfy ``spatial < modes`` and ``internal < levels``. The state is a
    value; all operations return new instances.
    """

    __slots__ = ("modes", "levels", "photon_number", "_terms")

    modes: int
    levels: int
    photon_number: int
    _terms: dict[Occupation, complex]

    def __init__(
        self,
        modes: int,
        levels: int,
        terms: Mapping[OccupationLike, complex] | Iterable[tuple[OccupationLike, complex]] = (),
        photon_number: int | None = None,
    ):
        if modes < 0 or levels < 1:
            raise DimensionMismatch(f"invalid mode space ({modes} modes, {levels} levels)")
        self.modes = int(modes)
        self.levels = int(levels)
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Occupation, complex] = {}
        sector = photon_number
        for occ, amp in pairs:
            occ = _as_occupation(occ)
            if occ.max_spatial >= self.modes or occ.max_level >= self.levels:
                raise DimensionMismatch(
                    f"occupation {occ!r} exceeds ({self.modes} modes, {self.levels} levels)"
                )
            if sector is None:
                sector = occ.total
            elif occ.total != sector:
                raise DimensionMismatch(
                    f"mixed photon sectors: {occ.total} != {sector}"
                )
            acc[occ] = acc.get(occ, 0j) + complex(amp)
        # Pruning: drop amplitudes below PRUNE_EPS after accumulation.
        self._terms = {occ: amp for occ, amp in acc.items() if abs(amp) >= PRUNE_EPS}
        self.photon_number = 0 if sector is None else int(sector)

    @classmethod
    def null(cls, modes: int, levels: int, photon_number: int = 0) -> "FockState":
        """Zero-norm state in the given sector."""
        return cls(modes, levels, (), photon_number=photon_number)

    def items(self) -> Iterable[tuple[Occupation, complex]]:
        return self._terms.items()

    def amplitude(self, occ: OccupationLike) -> complex:
        return self._terms.get(_as_occupation(occ), 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def _check_space(self, other: "FockState") -> None:
        if self.modes != other.modes or self.levels != other.levels:
            raise DimensionMismatch(
                f"mode spaces differ: ({self.modes}, {self.levels}) vs "
                f"({other.modes}, {other.levels})"
            )

    def __add__(self, other: "FockState") -> "FockState":
        if not isinstance(other, FockState):
            return NotImplemented
        self._check_space(other)
        if len(self) == 0:
            return other
        if len(other) == 0:
            return self
        if self.photon_number != other.photon_number:
            raise DimensionMismatch(
                f"cannot add states from different photon sectors "
                f"({self.photon_number} vs {other.photon_number})"
            )
        acc = dict(self._terms)
        for occ, amp in other._terms.items():
            acc[occ] = acc.get(occ, 0j) + amp
        return FockState(self.modes, self.levels, acc, photon_number=self.photon_number)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "FockState":
        c = complex(scalar)
        return FockState(
            self.modes,
            self.levels,
            {occ: amp * c for occ, amp in self._terms.items()},
            photon_number=self.photon_number,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "FockState":
        return self * -1.0

    def norm_sq(self) -> float:
        return sum(abs(amp) ** 2 for amp in self._terms.values())

    def inner(self, other: "FockState") -> complex:
        """Hermitian inner product <self|other>.

        States from different photon-number sectors are orthogonal.
        """
        self._check_space(other)
        if self.photon_number != other.photon_number:
            return 0j
        if len(self) <= len(other):
            return sum(amp.conjugate() * other._terms.get(occ, 0j) for occ, amp in self._terms.items())
        return sum(self._terms.get(occ, 0j).conjugate() * amp for occ, amp in other._terms.items())

    def normalized(self) -> "FockState":
        n2 = self.norm_sq()
        if n2 <= 0.0:
            raise DegenerateStateError("cannot normalize a null state")
        return self * (1.0 / math.sqrt(n2))

    def tensor(self, other: "FockState") -> "FockState":
        """Combine states occupying disjoint spatial mode sets.

        Both factors must share the same level count; the result lives on the
        larger of the two declared mode ranges.
        """
        if self.levels != other.levels:
            raise DimensionMismatch("tensor factors must share the internal dimension")
        mine = set().union(*(occ.spatial_modes() for occ in self._terms)) if self._terms else set()
        theirs = set().union(*(occ.spatial_modes() for occ in other._terms)) if other._terms else set()
        if mine & theirs:
            raise ModeCollisionError(f"tensor factors overlap on modes {sorted(mine & theirs)}")
        out: dict[Occupation, complex] = {}
        for occ_a, amp_a in self._terms.items():
            for occ_b, amp_b in other._terms.items():
                out[occ_a.merge_disjoint(occ_b)] = amp_a * amp_b
        return FockState(
            max(self.modes, other.modes),
            self.levels,
            out,
            photon_number=self.photon_number + other.photon_number,
        )

    def allclose(self, other: "FockState", atol: float = 1e-12) -> bool:
        self._check_space(other)
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) <= atol for k in keys)

    def __repr__(self) -> str:
        return (
            f"<FockState modes={self.modes} levels={self.levels} "
            f"photons={self.photon_number} terms={len(self._terms)}>"
        )


def basis_state(occupation: OccupationLike, modes: int, levels: int) -> FockState:
    """Unit-amplitude basis state for one occupation."""
    occ = _as_occupation(occupation)
    return FockState(modes, levels, {occ: 1.0 + 0j}, photon_number=occ.total)


def vacuum(modes: int, levels: int) -> FockState:
    """The zero-photon basis state (distinct from a null state)."""
    return basis_state(Occupation(), modes, levels)
