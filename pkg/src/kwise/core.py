"""Set families over a small ground set.

Families of subsets of {1..n} with exact predicates: k-wise intersection,
maximality with respect to it, closure operations, complementation and
coordinate restrictions.  Ground sets are capped at n = 26 so a family
fits in one explicit 2^n-bit membership bitmap.
"""

from __future__ import annotations

import enum
from typing import Iterable, Iterator, List, Optional, Tuple

from . import bitops
from .bitops import (
    MAX_FAMILY_GROUND,
    check_ground,
    cube_bits,
    family_full_bitmap,
    full_mask,
    iter_bits,
    mask_complement,
    project_intersect_bits,
    reverse_index_bits,
    supercube_bits,
    up_close_bits,
    down_close_bits,
)


class KwiseMode(enum.Enum):
    """Distinctness convention for k-wise intersection.

    DISTINCT requires every k pairwise distinct members to intersect and is
    vacuously true when the family has fewer than k members.
    WITH_REPETITION requires every j distinct members to intersect for all
    j with 2 <= j <= min(k, family size), which is the reading obtained by
    allowing a member to be repeated in the collection.
    """

    DISTINCT = "distinct"
    WITH_REPETITION = "repetition"

    @classmethod
    def parse(cls, text: str) -> "KwiseMode":
        for mode in cls:
            if mode.value == text:
                return mode
        raise ValueError(f"unknown mode {text!r}; expected 'distinct' or 'repetition'")


class SetFamily:
    """Immutable family of subsets of {1..n} backed by a membership bitmap."""

    __slots__ = ("n", "bitmap")

    def __init__(self, n: int, bitmap: int = 0):
        check_ground(n)
        if not 0 <= bitmap < (1 << (1 << n)):
            raise ValueError(f"bitmap out of range for ground size {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bitmap", bitmap)

    def __setattr__(self, name, value):
        raise AttributeError("SetFamily is immutable")

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "SetFamily":
        check_ground(n)
        bm = 0
        top = full_mask(n)
        for m in masks:
            if not 0 <= m <= top:
                raise ValueError(f"mask {m} out of range for ground size {n}")
            bm |= 1 << m
        return cls(n, bm)

    @classmethod
    def full(cls, n: int) -> "SetFamily":
        return cls(n, family_full_bitmap(n))

    @classmethod
    def from_hex(cls, n: int, text: str) -> "SetFamily":
        check_ground(n)
        digits = hex_digits(n)
        text = text.strip().lower()
        if len(text) != digits:
            raise ValueError(
                f"hex family for n={n} must have exactly {digits} hex digit(s), got {len(text)}"
            )
        return cls(n, int(text, 16))

    def to_hex(self) -> str:
        return format(self.bitmap, f"0{hex_digits(self.n)}x")

    @property
    def size(self) -> int:
        return self.bitmap.bit_count()

    def __len__(self) -> int:
        return self.size

    def __contains__(self, mask: int) -> bool:
        return 0 <= mask < (1 << self.n) and (self.bitmap >> mask) & 1 == 1

    def members(self) -> Iterator[int]:
        """Member masks in ascending order."""
        return iter_bits(self.bitmap)

    def member_list(self) -> List[int]:
        return list(self.members())

    def __iter__(self) -> Iterator[int]:
        return self.members()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SetFamily)
            and self.n == other.n
            and self.bitmap == other.bitmap
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bitmap))

    def __repr__(self) -> str:
        if self.size <= 8:
            body = ",".join(str(m) for m in self.members())
        else:
            body = f"{self.size} members"
        return f"SetFamily(n={self.n}, {{{body}}})"

    def with_masks(self, masks: Iterable[int]) -> "SetFamily":
        extra = SetFamily.from_masks(self.n, masks)
        return SetFamily(self.n, self.bitmap | extra.bitmap)

    def union(self, other: "SetFamily") -> "SetFamily":
        _check_same_ground(self, other)
        return SetFamily(self.n, self.bitmap | other.bitmap)

    def difference(self, other: "SetFamily") -> "SetFamily":
        _check_same_ground(self, other)
        return SetFamily(self.n, self.bitmap & ~other.bitmap)

    def intersection(self, other: "SetFamily") -> "SetFamily":
        _check_same_ground(self, other)
        return SetFamily(self.n, self.bitmap & other.bitmap)


def hex_digits(n: int) -> int:
    """Serialized width: the 2^n-bit bitmap zero-padded to whole hex digits."""
    return ((1 << n) + 3) // 4


def _check_same_ground(a: SetFamily, b: SetFamily) -> None:
    if a.n != b.n:
        raise ValueError(f"ground size mismatch: {a.n} vs {b.n}")


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an int >= 2, got {k!r}")


def complement_family(family: SetFamily) -> SetFamily:
    """The family of member complements {A^c : A in F}."""
    return SetFamily(family.n, reverse_index_bits(family.bitmap, family.n))


def complement_within_powerset(family: SetFamily) -> SetFamily:
    """All masks that are not members."""
    return SetFamily(family.n, family.bitmap ^ family_full_bitmap(family.n))


def symmetric_difference_count(a: SetFamily, b: SetFamily) -> int:
    _check_same_ground(a, b)
    return (a.bitmap ^ b.bitmap).bit_count()


def set_difference_count(a: SetFamily, b: SetFamily) -> int:
    _check_same_ground(a, b)
    return (a.bitmap & ~b.bitmap).bit_count()


def up_closure(family: SetFamily) -> SetFamily:
    """Smallest upward-closed family containing the input."""
    return SetFamily(family.n, up_close_bits(family.bitmap, family.n))


def down_closure(family: SetFamily) -> SetFamily:
    return SetFamily(family.n, down_close_bits(family.bitmap, family.n))


def is_up_closed(family: SetFamily) -> bool:
    return up_close_bits(family.bitmap, family.n) == family.bitmap


def is_down_closed(family: SetFamily) -> bool:
    return down_close_bits(family.bitmap, family.n) == family.bitmap


def restrict_minus(family: SetFamily, i: int) -> SetFamily:
    """Members avoiding element i, on the same ground set."""
    _check_element(family.n, i)
    pat = bitops._clear_bit_pattern(family.n, i - 1)
    return SetFamily(family.n, family.bitmap & pat)


def restrict_plus(family: SetFamily, i: int) -> SetFamily:
    """Members containing element i, with i removed, on the same ground set."""
    _check_element(family.n, i)
    pat = bitops._clear_bit_pattern(family.n, i - 1)
    return SetFamily(family.n, (family.bitmap >> (1 << (i - 1))) & pat)


def _check_element(n: int, i: int) -> None:
    if not isinstance(i, int) or not 1 <= i <= n:
        raise ValueError(f"element {i!r} out of range 1..{n}")


def _reach_layers(family: SetFamily, depth: int) -> List[int]:
    """Bitmaps R_1..R_depth of masks expressible as the intersection of
    exactly j pairwise distinct members.

    Members are folded in one at a time; a new member g contributes
    {t & g : t in R_{j-1}} to R_j, where R_{j-1} was built from earlier
    members only, so every witness collection is automatically distinct.
    """
    layers = [0] * (depth + 1)  # layers[j] = R_j, layers[0] unused
    if depth < 1:
        return layers
    n = family.n
    seen = 0  # members folded in so far, capped at depth
    for g in family.members():
        for j in range(min(depth, seen + 1), 1, -1):
            if layers[j - 1]:
                layers[j] |= project_intersect_bits(layers[j - 1], g, n)
        layers[1] |= 1 << g
        if seen < depth:
            seen += 1
    return layers


def is_k_wise_intersecting(
    family: SetFamily, k: int, mode: KwiseMode = KwiseMode.DISTINCT
) -> bool:
    """Whether every admissible collection of members has common elements.

    DISTINCT mode checks collections of exactly k distinct members and is
    vacuously true when the family has fewer than k.  WITH_REPETITION mode
    checks every collection size j with 2 <= j <= min(k, size).
    """
    _check_k(k)
    size = family.size
    if mode is KwiseMode.DISTINCT:
        if size < k:
            return True
        layers = _reach_layers(family, k)
        # empty intersections at depth j < k extend to depth k when size >= k
        return not any(layers[j] & 1 for j in range(2, k + 1))
    layers = _reach_layers(family, min(k, size))
    return not any(layers[j] & 1 for j in range(2, min(k, size) + 1))


def _blocked_bitmap(family: SetFamily, k: int, mode: KwiseMode) -> int:
    """Bitmap of masks whose addition would break the k-wise property.

    A candidate m is blocked exactly when some reachable intersection of
    j distinct members (j = k-1 in DISTINCT mode, any j <= k-1 otherwise)
    avoids m entirely.
    """
    n = family.n
    if mode is KwiseMode.DISTINCT:
        if family.size < k - 1:
            return 0
        relevant = _reach_layers(family, k - 1)[k - 1]
    else:
        depth = min(k - 1, family.size)
        layers = _reach_layers(family, depth)
        relevant = 0
        for j in range(1, depth + 1):
            relevant |= layers[j]
    if relevant == 0:
        return 0
    # m blocked iff some reachable t is a submask of m's complement
    closed = up_close_bits(relevant, n)
    return reverse_index_bits(closed, n)


def addable_sets(
    family: SetFamily, k: int, mode: KwiseMode = KwiseMode.DISTINCT
) -> SetFamily:
    """Non-members whose addition keeps the family k-wise intersecting.

    The input family must itself be k-wise intersecting.
    """
    _check_k(k)
    if not is_k_wise_intersecting(family, k, mode):
        raise ValueError("family is not k-wise intersecting in the given mode")
    blocked = _blocked_bitmap(family, k, mode)
    addable = ~blocked & ~family.bitmap & family_full_bitmap(family.n)
    return SetFamily(family.n, addable)


def is_maximal_k_wise(
    family: SetFamily, k: int, mode: KwiseMode = KwiseMode.DISTINCT
) -> bool:
    """Whether no mask outside the family can be added without breaking it."""
    return addable_sets(family, k, mode).bitmap == 0


def maximal_closure(
    family: SetFamily, k: int, mode: KwiseMode = KwiseMode.DISTINCT
) -> SetFamily:
    """Greedily extend to a maximal k-wise intersecting family.

    Candidates are scanned in ascending mask order and the scan repeats
    until a pass adds nothing.  Blocked candidates stay blocked as the
    family grows, so adding the lowest addable mask each round reproduces
    the ascending-scan fixpoint exactly.
    """
    _check_k(k)
    if not is_k_wise_intersecting(family, k, mode):
        raise ValueError("family is not k-wise intersecting in the given mode")
    n = family.n
    depth = k - 1
    full = family_full_bitmap(n)
    layers = [0] * (depth + 1)
    seen = 0
    bm = 0

    def fold(g: int) -> None:
        nonlocal bm, seen
        for j in range(min(depth, seen + 1), 1, -1):
            if layers[j - 1]:
                layers[j] |= project_intersect_bits(layers[j - 1], g, n)
        layers[1] |= 1 << g
        bm |= 1 << g
        if seen < depth:
            seen += 1

    for g in family.members():
        fold(g)
    while True:
        if mode is KwiseMode.DISTINCT:
            relevant = layers[depth]
        else:
            relevant = 0
            for j in range(1, depth + 1):
                relevant |= layers[j]
        if relevant:
            blocked = reverse_index_bits(up_close_bits(relevant, n), n)
        else:
            blocked = 0
        addable = ~blocked & ~bm & full
        if addable == 0:
            return SetFamily(n, bm)
        fold((addable & -addable).bit_length() - 1)
