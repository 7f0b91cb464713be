"""Minimum-size search over maximal k-wise intersecting families.

search_min answers, exactly, how small a maximal k-wise intersecting
family on n elements can be.  Families below the distinctness threshold
(fewer than k members) are scanned outright; everything at or above it is
covered by branch and bound over upward-closed families, exhaustive
because a maximal family with at least k members is upward closed.  An
oracle built from first principles re-derives the answer at tiny n.

The second half of the module holds the counting tools used to audit
size bounds around a paired-cube split: minimum-defect decompositions of
a set into two disjoint family members, the three-way partition of a
family against the split, and the exact bound arithmetic.
"""

from __future__ import annotations

import itertools
import operator
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Dict, List, Optional, Tuple

from .bitops import (
    check_ground,
    cube_bits,
    family_full_bitmap,
    full_mask,
    iter_bits,
    mask_complement,
    project_intersect_bits,
    supercube_bits,
)
from .constructions import balanced_block, linked_cubes, pair_of_cubes
from .core import (
    KwiseMode,
    SetFamily,
    complement_family,
    is_k_wise_intersecting,
    is_maximal_k_wise,
    symmetric_difference_count,
)

MAX_SEARCH_GROUND = 7
MAX_ORACLE_GROUND = 5
MAX_UPSET_GROUND = 5
MAX_CANONICAL_GROUND = 10


def canonical_form(family: SetFamily) -> SetFamily:
    """Least relabeling of the family over all coordinate permutations.

    Relabeled copies of a family share one canonical form, so equality of
    canonical forms decides isomorphism.  The scan is factorial in n and
    capped accordingly.
    """
    n = family.n
    if n > MAX_CANONICAL_GROUND:
        raise ValueError(f"canonical form capped at n={MAX_CANONICAL_GROUND}, got {n}")
    if family.bitmap == 0 or n <= 1:
        return family
    members = family.member_list()
    best = family.bitmap
    for perm in itertools.permutations(range(n)):
        bm = 0
        for m in members:
            relabeled = 0
            while m:
                low = m & -m
                relabeled |= 1 << perm[low.bit_length() - 1]
                m ^= low
            bm |= 1 << relabeled
        if bm < best:
            best = bm
    return SetFamily(n, best)


def enumerate_upsets(n: int) -> List[int]:
    """Bitmaps of every upward-closed family on n elements.

    Splitting on the top element writes each up-set as a low half L and a
    high half H, both up-sets one level down with L contained in H, so the
    counts follow the Dedekind numbers and the listing is exact.
    """
    check_ground(n)
    if n > MAX_UPSET_GROUND:
        raise ValueError(f"up-set enumeration capped at n={MAX_UPSET_GROUND}, got {n}")
    ups = [0, 1]
    for level in range(1, n + 1):
        shift = 1 << (level - 1)
        ups = [
            lo | (hi << shift)
            for hi in ups
            for lo in ups
            if lo & ~hi == 0
        ]
    return ups


def enumerate_maximal_families(n: int, k: int, mode: KwiseMode) -> List[SetFamily]:
    """Every maximal k-wise intersecting family on n elements, n small.

    Families with fewer than k members are scanned directly; the rest are
    upward closed, so filtering the up-set listing completes the search.
    """
    if n > MAX_UPSET_GROUND:
        raise ValueError(f"exhaustive enumeration capped at n={MAX_UPSET_GROUND}, got {n}")
    results: List[SetFamily] = []
    count = 1 << n
    for size in range(1, min(k, count + 1)):
        for combo in itertools.combinations(range(count), size):
            fam = SetFamily.from_masks(n, combo)
            if is_k_wise_intersecting(fam, k, mode) and is_maximal_k_wise(fam, k, mode):
                results.append(fam)
    for bm in enumerate_upsets(n):
        if bm.bit_count() < k:
            continue
        fam = SetFamily(n, bm)
        if is_k_wise_intersecting(fam, k, mode) and is_maximal_k_wise(fam, k, mode):
            results.append(fam)
    return results


@dataclass(frozen=True)
class SearchConfig:
    n: int
    k: int
    mode: KwiseMode = KwiseMode.DISTINCT
    budget: float = 60.0
    symmetry: bool = True
    enumerate_all: bool = True

    def __post_init__(self):
        check_ground(self.n)
        if self.n > MAX_SEARCH_GROUND:
            raise ValueError(f"search capped at n={MAX_SEARCH_GROUND}, got {self.n}")
        if not isinstance(self.k, int) or self.k < 2:
            raise ValueError(f"k must be an integer >= 2, got {self.k!r}")
        if not isinstance(self.mode, KwiseMode):
            raise ValueError(f"mode must be a KwiseMode, got {self.mode!r}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")


@dataclass(frozen=True)
class SearchReport:
    """Outcome of a minimum-size search.

    f_value is the smallest maximal-family size found (None if the budget
    ran out before any candidate appeared).  Witnesses are canonical forms,
    pairwise non-isomorphic, sorted by bitmap; matched_linked_cubes aligns
    with them and flags isomorphism to the balanced linked-cubes family.
    When optimal is False the true minimum lies in [lower_bound, f_value].
    """

    config: SearchConfig
    f_value: Optional[int]
    witnesses: Tuple[SetFamily, ...]
    matched_linked_cubes: Tuple[bool, ...]
    nodes_explored: int
    elapsed: float
    optimal: bool
    lower_bound: int

    @property
    def all_witnesses_linked_cubes(self) -> bool:
        return bool(self.witnesses) and all(self.matched_linked_cubes)


class _BudgetExceeded(Exception):
    pass


@lru_cache(maxsize=None)
def _stabilizer_tables(j: int) -> Tuple[Tuple[int, ...], ...]:
    """Mask-relabeling tables for every permutation of the first j coordinates."""
    tables = []
    for perm in itertools.permutations(range(j)):
        table = [0] * (1 << j)
        for m in range(1, 1 << j):
            low = m & -m
            table[m] = table[m ^ low] | (1 << perm[low.bit_length() - 1])
        tables.append(tuple(table))
    return tuple(tables)


@lru_cache(maxsize=None)
def _stage_masks(j: int) -> Tuple[int, ...]:
    return tuple((1 << (1 << i)) - 1 for i in range(1, j + 1))


class _BranchAndBound:
    """Depth-first search over upward-closed families in ascending mask order.

    Masks are decided smallest first, so every subset of a mask is settled
    before the mask itself and upward closure reduces to forcing in any
    mask that has an already-chosen subset.  Pruning: partial families
    whose members already intersect to the empty set somewhere in the
    first k layers, partial families too large to beat the incumbent, and
    (optionally) partial assignments that are not the least relabeling of
    their orbit whenever the decided region is a full power-of-two block.
    Leaves with at least k members get a full maximality check.
    """

    def __init__(
        self,
        n: int,
        k: int,
        mode: KwiseMode,
        deadline: float,
        enumerate_all: bool,
        symmetry: bool,
        best: Optional[int] = None,
        found: Optional[List[int]] = None,
    ):
        self.n = n
        self.k = k
        self.mode = mode
        self.deadline = deadline
        self.enumerate_all = enumerate_all
        self.symmetry = symmetry
        self.count = 1 << n
        self.checkpoints: Dict[int, int] = {1 << j: j for j in range(2, n + 1)}
        self.best = best
        self.found: List[int] = list(found) if found else []
        self.nodes = 0

    def run(self) -> bool:
        try:
            self._branch(0, 0, 0, 0, [0] * (self.k + 1), 0)
        except _BudgetExceeded:
            return False
        return True

    def _too_big(self, size: int) -> bool:
        if self.best is None or size < self.best:
            return False
        if size > self.best:
            return True
        # ties matter only when the incumbent size is itself reachable here
        return (not self.enumerate_all) or self.best < self.k

    def _branch(
        self, d: int, in_bm: int, forced_bm: int, size: int, layers: List[int], seen: int
    ) -> None:
        self.nodes += 1
        if self.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _BudgetExceeded
        if self._too_big(size):
            return
        if self.symmetry and d in self.checkpoints:
            if not self._region_minimal(in_bm, self.checkpoints[d]):
                return
        if d == self.count:
            if size >= self.k:
                fam = SetFamily(self.n, in_bm)
                if is_maximal_k_wise(fam, self.k, self.mode):
                    self._record(in_bm, size)
            return
        if (forced_bm >> d) & 1:
            self._enter(d, in_bm, forced_bm, size, layers, seen)
            return
        self._branch(d + 1, in_bm, forced_bm, size, layers, seen)
        self._enter(d, in_bm, forced_bm, size, layers, seen)

    def _enter(
        self, m: int, in_bm: int, forced_bm: int, size: int, layers: List[int], seen: int
    ) -> None:
        depth = self.k
        new_layers = layers.copy()
        for j in range(min(depth, seen + 1), 1, -1):
            if new_layers[j - 1]:
                new_layers[j] |= project_intersect_bits(new_layers[j - 1], m, self.n)
        new_layers[1] |= 1 << m
        for j in range(2, depth + 1):
            if new_layers[j] & 1:
                return
        self._branch(
            m + 1,
            in_bm | (1 << m),
            forced_bm | supercube_bits(m, self.n),
            size + 1,
            new_layers,
            min(seen + 1, depth),
        )

    def _record(self, in_bm: int, size: int) -> None:
        if self.best is None or size < self.best:
            self.best = size
            self.found = [in_bm]
        elif size == self.best and self.enumerate_all:
            self.found.append(in_bm)

    def _region_minimal(self, in_bm: int, j: int) -> bool:
        stages = _stage_masks(j)
        base = tuple(in_bm & sm for sm in stages)
        members = list(iter_bits(in_bm))
        for table in _stabilizer_tables(j):
            bm = 0
            for m in members:
                bm |= 1 << table[m]
            if bm != in_bm and tuple(bm & sm for sm in stages) < base:
                return False
        return True


def search_min(config: SearchConfig) -> SearchReport:
    """Exact minimum size of a maximal k-wise intersecting family, with witnesses.

    Runs the direct scan below the distinctness threshold, then the
    branch-and-bound stage, and reports canonical witnesses.  A run cut
    short by the budget is flagged non-optimal and carries honest bounds.
    """
    start = time.monotonic()
    deadline = start + config.budget
    n, k, mode = config.n, config.k, config.mode
    count = 1 << n
    nodes = 0
    best: Optional[int] = None
    found: List[int] = []
    interrupted = False
    proven_floor = 1
    try:
        for size in range(1, min(k, count + 1)):
            for combo in itertools.combinations(range(count), size):
                nodes += 1
                if nodes & 255 == 0 and time.monotonic() > deadline:
                    raise _BudgetExceeded
                fam = SetFamily.from_masks(n, combo)
                if not is_k_wise_intersecting(fam, k, mode):
                    continue
                if is_maximal_k_wise(fam, k, mode):
                    if best is None:
                        best = size
                        found.append(fam.bitmap)
                    elif config.enumerate_all:
                        found.append(fam.bitmap)
                    else:
                        break
            if best is not None:
                break
            proven_floor = size + 1
    except _BudgetExceeded:
        interrupted = True

    if not interrupted:
        engine = _BranchAndBound(
            n, k, mode, deadline, config.enumerate_all, config.symmetry, best, found
        )
        completed = engine.run()
        nodes += engine.nodes
        best = engine.best
        found = engine.found
        if not completed:
            interrupted = True

    if best is None:
        lower_bound = proven_floor
    elif interrupted:
        lower_bound = min(proven_floor, best)
    else:
        lower_bound = best

    canon: Dict[int, SetFamily] = {}
    for bm in found:
        cf = canonical_form(SetFamily(n, bm))
        canon[cf.bitmap] = cf
    witnesses = tuple(canon[b] for b in sorted(canon))
    target = None
    if n >= 2:
        target = canonical_form(linked_cubes(n, balanced_block(n))).bitmap
    matched = tuple(w.bitmap == target for w in witnesses)
    return SearchReport(
        config=config,
        f_value=best,
        witnesses=witnesses,
        matched_linked_cubes=matched,
        nodes_explored=nodes,
        elapsed=time.monotonic() - start,
        optimal=not interrupted,
        lower_bound=lower_bound,
    )


def _naive_is_kwise(members: List[int], k: int, mode: KwiseMode) -> bool:
    if mode is KwiseMode.DISTINCT:
        return all(
            reduce(operator.and_, combo) != 0
            for combo in itertools.combinations(members, k)
        )
    top = min(k, len(members))
    return all(
        reduce(operator.and_, combo) != 0
        for j in range(2, top + 1)
        for combo in itertools.combinations(members, j)
    )


def _naive_addable(members: List[int], g: int, k: int, mode: KwiseMode) -> bool:
    """Whether the family stays k-wise intersecting after adding g.

    Assumes the family itself already passes, so only collections through
    g need checking.
    """
    if mode is KwiseMode.DISTINCT:
        return all(
            reduce(operator.and_, combo) & g != 0
            for combo in itertools.combinations(members, k - 1)
        )
    return all(
        reduce(operator.and_, combo) & g != 0
        for j in range(1, min(k - 1, len(members)) + 1)
        for combo in itertools.combinations(members, j)
    )


def _naive_is_maximal(n: int, members: List[int], k: int, mode: KwiseMode) -> bool:
    if not _naive_is_kwise(members, k, mode):
        return False
    member_set = set(members)
    return not any(
        _naive_addable(members, g, k, mode)
        for g in range(1 << n)
        if g not in member_set
    )


def _oracle_small_scan(n: int, k: int, mode: KwiseMode) -> Optional[int]:
    count = 1 << n
    for size in range(1, min(k, count + 1)):
        for combo in itertools.combinations(range(count), size):
            if _naive_is_maximal(n, list(combo), k, mode):
                return size
    return None


def _oracle_min_upsets(n: int, k: int, mode: KwiseMode) -> Optional[int]:
    best: Optional[int] = None
    for bm in enumerate_upsets(n):
        size = bm.bit_count()
        if size < k or (best is not None and size >= best):
            continue
        if _naive_is_maximal(n, list(iter_bits(bm)), k, mode):
            best = size
    return best


def oracle_min(n: int, k: int, mode: KwiseMode = KwiseMode.DISTINCT) -> int:
    """Reference minimum computed from first principles; test use only.

    Ground sizes up to 4 get a full filtration of all families in
    ascending size.  At n = 5 the direct scan stops at the distinctness
    threshold and the remaining candidates come from the up-set listing,
    which is sufficient because larger maximal families are upward closed.
    """
    check_ground(n)
    if n > MAX_ORACLE_GROUND:
        raise ValueError(f"oracle capped at n={MAX_ORACLE_GROUND}, got {n}")
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    count = 1 << n
    if n <= 4:
        for size in range(1, count + 1):
            for combo in itertools.combinations(range(count), size):
                if _naive_is_maximal(n, list(combo), k, mode):
                    return size
        raise RuntimeError("no maximal family found")
    small = _oracle_small_scan(n, k, mode)
    if small is not None:
        return small
    best = _oracle_min_upsets(n, k, mode)
    if best is None:
        raise RuntimeError("no maximal family found")
    return best


def h_value(b: int, c: int, s: int) -> int:
    """Defect of the pair (b, c) against the split (s, complement of s).

    Counts the elements that stick out when b is matched to one side and c
    to the other, taking the better of the two matchings.  Zero exactly
    when one of b, c fits inside s and the other inside its complement.
    """
    straight = (b & ~s).bit_count() + (c & s).bit_count()
    crossed = (b & s).bit_count() + (c & ~s).bit_count()
    return min(straight, crossed)


def decompose_min_h(family: SetFamily, a: int, s: int) -> Optional[Tuple[int, int]]:
    """Split a into two disjoint family members minimizing the split defect.

    Scans every unordered pair (b, c) of members with b | c = a and
    b & c = 0, returns the one with least h_value, ties broken by smaller
    then larger mask.  None when no such pair exists.
    """
    if a < 0 or a > full_mask(family.n):
        raise ValueError(f"mask {a} out of range for n={family.n}")
    bitmap = family.bitmap
    best: Optional[Tuple[int, int, int]] = None
    sub = a
    while True:
        rest = a ^ sub
        if sub <= rest and (bitmap >> sub) & 1 and (bitmap >> rest) & 1:
            cand = (h_value(sub, rest, s), sub, rest)
            if best is None or cand < best:
                best = cand
        if sub == 0:
            break
        sub = (sub - 1) & a
    if best is None:
        return None
    return best[1], best[2]


def partition_relative_to_cubes(
    g: SetFamily, s: int
) -> Tuple[SetFamily, SetFamily, SetFamily]:
    """Split a family into the parts inside, opposite, and outside a cube pair.

    Returns (inside s, inside the complement of s, outside both cubes),
    where the first two parts keep only masks strictly between the empty
    set and the block.  Members equal to s, its complement, or the empty
    set fall in no part.
    """
    n = g.n
    if s < 0 or s > full_mask(n):
        raise ValueError(f"mask {s} out of range for n={n}")
    sc = mask_complement(s, n)
    cube_s = cube_bits(s)
    cube_sc = cube_bits(sc)
    g1 = g.bitmap & cube_s & ~1 & ~(1 << s)
    g2 = g.bitmap & cube_sc & ~1 & ~(1 << sc)
    g3 = g.bitmap & ~(cube_s | cube_sc)
    assert g1 & g2 == 0 and (g1 | g2) & g3 == 0
    if not (g.bitmap >> s) & 1 and not (g.bitmap >> sc) & 1:
        assert g1 | g2 | g3 | (g.bitmap & 1) == g.bitmap
    return SetFamily(n, g1), SetFamily(n, g2), SetFamily(n, g3)


def product_bound_terms(
    g1_size: int, g2_size: int, g3_size: int, ell: int, eps: Fraction
) -> Tuple[Fraction, int]:
    """Both sides of the product bound on the three-way partition counts.

    Left side g1*g2 + g3*eps*2^ell, right side (2^ell - 2)(2^(ell+1) - 2).
    Under the audit hypotheses the bound holds with equality exactly when
    the outside part is empty.
    """
    eps = Fraction(eps)
    lhs = Fraction(g1_size * g2_size) + g3_size * eps * (1 << ell)
    rhs = ((1 << ell) - 2) * ((1 << (ell + 1)) - 2)
    return lhs, rhs


@dataclass(frozen=True)
class ClaimCountsReport:
    """Exact counting audit of a maximal 3-wise family against a cube split.

    The audited chain: the number of masks outside both the family and the
    cube pair is bounded by the pair-decomposition count pair_bound, which
    in turn is bounded by the closed-form product_bound.  Verdicts are
    meaningful only when hypotheses_met is True (the complement family
    sits within eps*2^ell of the cube pair).
    """

    n: int
    ell: int
    s: int
    eps: Fraction
    family_size: int
    cube_pair_size: int
    g1_size: int
    g2_size: int
    g3_size: int
    sym_diff_size: int
    hypotheses_met: bool
    outside_count: int
    chain_lower: int
    pair_bound: Fraction
    pair_bound_holds: bool
    product_bound: int
    product_bound_holds: bool
    product_bound_equality: bool
    g3_empty: bool


def audit_claim_counts(family: SetFamily, s: int, eps) -> ClaimCountsReport:
    """Audit the exact counting chain for a maximal 3-wise family.

    Builds the complement family, partitions it against the cube pair on
    s, and evaluates both counting bounds with exact rational arithmetic.
    Requires odd n and a family that is maximal 3-wise intersecting.
    """
    n = family.n
    if n % 2 == 0:
        raise ValueError("audit requires an odd ground size")
    if s <= 0 or s >= full_mask(n):
        raise ValueError("split block must be a proper nonempty subset")
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if not is_k_wise_intersecting(family, 3, KwiseMode.DISTINCT) or not is_maximal_k_wise(
        family, 3, KwiseMode.DISTINCT
    ):
        raise ValueError("family must be maximal 3-wise intersecting")
    ell = (n - 1) // 2
    g = complement_family(family)
    f0 = pair_of_cubes(n, s)
    g1, g2, g3 = partition_relative_to_cubes(g, s)
    sym_diff = symmetric_difference_count(g, f0)
    hypotheses_met = Fraction(sym_diff) <= eps * (1 << ell)
    outside = (
        family_full_bitmap(n) & ~(family.bitmap | f0.bitmap)
    ).bit_count()
    pair_bound, product_bound = product_bound_terms(
        len(g1), len(g2), len(g3), ell, eps
    )
    chain_lower = (1 << (2 * ell + 1)) - (3 * (1 << ell) - 1) - len(family)
    return ClaimCountsReport(
        n=n,
        ell=ell,
        s=s,
        eps=eps,
        family_size=len(family),
        cube_pair_size=len(f0),
        g1_size=len(g1),
        g2_size=len(g2),
        g3_size=len(g3),
        sym_diff_size=sym_diff,
        hypotheses_met=hypotheses_met,
        outside_count=outside,
        chain_lower=chain_lower,
        pair_bound=pair_bound,
        pair_bound_holds=Fraction(outside) <= pair_bound,
        product_bound=product_bound,
        product_bound_holds=pair_bound <= product_bound,
        product_bound_equality=pair_bound == product_bound,
        g3_empty=len(g3) == 0,
    )
