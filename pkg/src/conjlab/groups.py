"""Finite group engine: permutations, enumerated groups, conjugacy classes.

Conventions, fixed once for the whole toolkit:
  * permutations act on the RIGHT: (a)(fg) = ((a)f)g, so products compose
    left-to-right;
  * element index 0 is always the identity;
  * conjugacy class ids are ordered by the smallest element index they
    contain, so the identity class is always class 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations as _itertools_permutations
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import GroupAxiomError, SizeCapError

PERM_CLOSURE_CAP = 10080
TABLE_ORDER_CAP = 512
SYMMETRIC_DEGREE_CAP = 8


class Perm:
    """A permutation of {1..n}, stored as a 0-based image tuple."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        object.__setattr__(self, "images", tuple(images))
        seen = set(self.images)
        n = len(self.images)
        if seen != set(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {self.images}")
        object.__setattr__(self, "_hash", hash(self.images))

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]]) -> Perm:
        """Build from 1-based cycles, e.g. [(1, 2), (3, 4, 5)]."""
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)((cyc[0],))):
                if not 1 <= a <= n:
                    raise ValueError(f"point {a} out of range for degree {n}")
                if images[a - 1] != a - 1:
                    raise ValueError(f"point {a} appears twice in cycles {cycles}")
                images[a - 1] = b - 1
        return cls(images)

    @classmethod
    def parse(cls, text: str, n: int) -> Perm:
        """Parse cycle notation like "(1 2)(3 4 5)"; "e" or "()" is the identity."""
        text = text.strip()
        if text in ("e", "()", ""):
            return cls.identity(n)
        if not re.fullmatch(r"(\s*\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)+", text):
            raise ValueError(f"cannot parse cycle notation: {text!r}")
        cycles = [
            tuple(int(p) for p in re.split(r"[\s,]+", body.strip()))
            for body in re.findall(r"\(([^()]*)\)", text)
        ]
        return cls.from_cycles(n, cycles)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: Perm) -> Perm:
        # right action: apply self first, then other
        o = other.images
        return Perm(o[i] for i in self.images)

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        return self.images[point - 1] + 1

    def moved(self) -> int:
        return sum(1 for i, j in enumerate(self.images) if i != j)

    def fixed(self) -> int:
        return sum(1 for i, j in enumerate(self.images) if i == j)

    def is_even(self) -> bool:
        images = list(self.images)
        seen = [False] * len(images)
        parity = 0
        for i in range(len(images)):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = images[j]
                length += 1
            parity ^= (length - 1) & 1
        return parity == 0

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles on 1-based points, each starting at its minimum."""
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i] or self.images[i] == i:
                seen[i] = True
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j + 1)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Nontrivial cycle lengths, ascending; () for the identity."""
        return tuple(sorted(len(c) for c in self.cycles()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Perm) -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Perm({self.to_cycle_string()!r}, degree={self.degree})"

    def to_cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "e"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycs)


def square_embed(f: Perm, g: Perm) -> Perm:
    """The image of (f, g) under S_n x S_n -> S_{n^2}, pairing code
    (i-1)*n + j for 1-based (i, j): the code of (i, j) maps to the code of
    ((i)f, (j)g)."""
    n = f.degree
    if g.degree != n:
        raise ValueError(f"degree mismatch: {n} vs {g.degree}")
    fi, gi = f.images, g.images
    images = [0] * (n * n)
    for i in range(n):
        base = i * n
        fbase = fi[i] * n
        for j in range(n):
            images[base + j] = fbase + gi[j]
    return Perm(images)


class FiniteGroup:
    """A finite group with indexed elements; built through the module
    constructors (perm_group, symmetric_group, table_group, ...).

    Permutation-backed groups multiply through the underlying action;
    table-backed groups through a validated Cayley table.
    """

    def __init__(self, label, *, perms=None, table=None, generator_indices=()):
        self.label = label
        self._perms: Optional[tuple[Perm, ...]] = None
        self._table: Optional[list[Sequence[int]]] = None
        self.generator_indices = tuple(generator_indices)
        self._classes: Optional[ClassPartition] = None
        if perms is not None:
            self._perms = tuple(perms)
            self.order = len(self._perms)
            self._index = {p.images: i for i, p in enumerate(self._perms)}
            self._inv = [self._index[p.inverse().images] for p in self._perms]
        else:
            self._table = [tuple(row) for row in table]
            self.order = len(self._table)
            self._inv = [row.index(0) for row in self._table]

    identity = 0

    @property
    def is_perm_backed(self) -> bool:
        return self._perms is not None

    @property
    def degree(self) -> int:
        if self._perms is None:
            raise ValueError(f"{self.label} is not permutation-backed")
        return self._perms[0].degree if self._perms else 0

    def perm(self, i: int) -> Perm:
        if self._perms is None:
            raise ValueError(f"{self.label} is not permutation-backed")
        return self._perms[i]

    def index_of_perm(self, p: Perm) -> int:
        if self._perms is None:
            raise ValueError(f"{self.label} is not permutation-backed")
        try:
            return self._index[p.images]
        except KeyError:
            raise ValueError(f"{p!r} is not an element of {self.label}") from None

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return self._table[i][j]
        a = self._perms[i].images
        b = self._perms[j].images
        return self._index[tuple(b[x] for x in a)]

    def inv(self, i: int) -> int:
        return self._inv[i]

    def conj(self, g: int, h: int) -> int:
        """h^-1 g h."""
        return self.mul(self.mul(self._inv[h], g), h)

    def elements(self) -> range:
        return range(self.order)

    def element_repr(self, i: int) -> str:
        if self._perms is not None:
            return self._perms[i].to_cycle_string()
        return str(i)

    def power(self, i: int, k: int) -> int:
        if k < 0:
            return self.power(self._inv[i], -k)
        acc = 0
        for _ in range(k):
            acc = self.mul(acc, i)
        return acc

    def element_order(self, i: int) -> int:
        k = 1
        acc = i
        while acc != 0:
            acc = self.mul(acc, i)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(
            self.mul(i, j) == self.mul(j, i)
            for i in range(self.order)
            for j in range(i + 1, self.order)
        )

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"


def _close_under_products(seeds: Sequence, mul, identity, cap: int, what: str):
    """BFS closure from the identity; returns elements in discovery order."""
    elements = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for a in frontier:
            for g in seeds:
                c = mul(a, g)
                if c not in index:
                    if len(elements) >= cap:
                        raise SizeCapError(
                            f"{what}: closure exceeds the cap of {cap} elements", cap
                        )
                    index[c] = len(elements)
                    elements.append(c)
                    new_frontier.append(c)
        frontier = new_frontier
    return elements, index


def perm_group(n: int, generators: Sequence[Perm], label=None, cap: int = PERM_CLOSURE_CAP) -> FiniteGroup:
    """The subgroup of S_n generated by the given permutations."""
    for g in generators:
        if g.degree != n:
            raise ValueError(f"generator degree {g.degree} does not match n={n}")
    elements, index = _close_under_products(
        list(generators), lambda a, g: a * g, Perm.identity(n), cap,
        f"perm_group(n={n})",
    )
    if label is None:
        label = f"perm{n}<{len(generators)} gens>"
    gen_indices = [index[g] for g in generators]
    return FiniteGroup(label, perms=elements, generator_indices=gen_indices)


def symmetric_group(n: int) -> FiniteGroup:
    """Full S_n, elements ordered by lexicographic image tuples (identity first)."""
    if not 1 <= n <= SYMMETRIC_DEGREE_CAP:
        raise ValueError(f"symmetric_group needs 1 <= n <= {SYMMETRIC_DEGREE_CAP}, got {n}")
    elements = [Perm(images) for images in _itertools_permutations(range(n))]
    gens = []
    if n >= 2:
        gens.append(Perm.from_cycles(n, [(1, 2)]))
        if n >= 3:
            gens.append(Perm.from_cycles(n, [tuple(range(1, n + 1))]))
    group = FiniteGroup(f"S{n}", perms=elements)
    group.generator_indices = tuple(group.index_of_perm(g) for g in gens)
    return group


def _validate_table(table: list[tuple[int, ...]]):
    m = len(table)
    arr = np.asarray(table, dtype=np.int64)
    if arr.shape != (m, m):
        raise GroupAxiomError(f"table is not square: shape {arr.shape}")
    if arr.min() < 0 or arr.max() >= m:
        bad = np.argwhere((arr < 0) | (arr >= m))[0]
        raise GroupAxiomError(
            f"entry out of range at row {bad[0]}, column {bad[1]}: {arr[bad[0], bad[1]]}"
        )
    full = np.arange(m)
    for i in range(m):
        if not np.array_equal(np.sort(arr[i]), full):
            raise GroupAxiomError(f"row {i} is not a permutation of 0..{m - 1}")
        if not np.array_equal(np.sort(arr[:, i]), full):
            raise GroupAxiomError(f"column {i} is not a permutation of 0..{m - 1}")
    if not np.array_equal(arr[0], full):
        j = int(np.argmax(arr[0] != full))
        raise GroupAxiomError(f"index 0 is not a left identity: 0*{j} = {arr[0, j]}")
    if not np.array_equal(arr[:, 0], full):
        i = int(np.argmax(arr[:, 0] != full))
        raise GroupAxiomError(f"index 0 is not a right identity: {i}*0 = {arr[i, 0]}")
    # Latin square + identity guarantee two-sided inverses exist; associativity
    # still needs the full triple check.
    for c in range(m):
        lhs = arr[arr, c]          # (a*b)*c
        rhs = arr[:, arr[:, c]]    # a*(b*c)
        if not np.array_equal(lhs, rhs):
            a, b = np.argwhere(lhs != rhs)[0]
            raise GroupAxiomError(
                f"associativity fails at ({a}, {b}, {c}):"
                f" ({a}*{b})*{c} = {lhs[a, b]} but {a}*({b}*{c}) = {rhs[a, b]}"
            )


def table_group(table: Sequence[Sequence[int]], label: str, cap: int = TABLE_ORDER_CAP) -> FiniteGroup:
    """A finite group from an explicit multiplication table over 0..m-1.

    All axioms are verified; violations raise GroupAxiomError with a witness.
    """
    rows = [tuple(int(x) for x in row) for row in table]
    if len(rows) > cap:
        raise SizeCapError(
            f"table_group({label}): order {len(rows)} exceeds the cap of {cap}", cap
        )
    _validate_table(rows)
    return FiniteGroup(label, table=rows)


def direct_product(g: FiniteGroup, h: FiniteGroup, label=None, cap: int = TABLE_ORDER_CAP) -> FiniteGroup:
    """Direct product as a table group; element (a, b) has index a*|H| + b."""
    m = g.order * h.order
    if m > cap:
        raise SizeCapError(
            f"direct_product({g.label}, {h.label}): order {m} exceeds the cap of {cap}",
            cap,
        )
    table = [
        [g.mul(a, a2) * h.order + h.mul(b, b2) for a2 in g.elements() for b2 in h.elements()]
        for a in g.elements()
        for b in h.elements()
    ]
    if label is None:
        label = f"{g.label}x{h.label}"
    return FiniteGroup(label, table=table)


@dataclass(frozen=True)
class ClassPartition:
    """Conjugacy classes of a group: ids ordered by smallest member index."""

    group: FiniteGroup
    class_of: tuple[int, ...]
    reps: tuple[int, ...]
    sizes: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]

    @property
    def n_classes(self) -> int:
        return len(self.reps)

    def class_label(self, cid: int) -> str:
        g = self.group
        if g.is_perm_backed and g.label.startswith("S") and g.label[1:].isdigit():
            # cycle type determines the class in a full symmetric group
            ct = g.perm(self.reps[cid]).cycle_type()
            return "C" + (",".join(str(c) for c in ct) if ct else "1")
        return f"K{cid}"

    def class_by_label(self, label: str) -> int:
        for cid in range(self.n_classes):
            if self.class_label(cid) == label:
                return cid
        raise ValueError(f"unknown class label {label!r} for {self.group.label}")


def conjugacy_classes(group: FiniteGroup) -> ClassPartition:
    """Orbit partition under conjugation (cached on the group)."""
    if group._classes is not None:
        return group._classes
    n = group.order
    if group.generator_indices:
        conjugators = list(group.generator_indices)
        conjugators += [group.inv(g) for g in group.generator_indices]
    else:
        conjugators = list(range(n))
    class_of = [-1] * n
    reps, sizes, members = [], [], []
    for start in range(n):
        if class_of[start] != -1:
            continue
        cid = len(reps)
        orbit = [start]
        class_of[start] = cid
        frontier = [start]
        while frontier:
            new_frontier = []
            for x in frontier:
                for h in conjugators:
                    y = group.conj(x, h)
                    if class_of[y] == -1:
                        class_of[y] = cid
                        orbit.append(y)
                        new_frontier.append(y)
            frontier = new_frontier
        orbit.sort()
        reps.append(start)
        sizes.append(len(orbit))
        members.append(tuple(orbit))
    partition = ClassPartition(
        group, tuple(class_of), tuple(reps), tuple(sizes), tuple(members)
    )
    group._classes = partition
    return partition


def class_product(partition: ClassPartition, a_cid: int, b_cid: int) -> frozenset[int]:
    """Class ids meeting [a][b].  Fixing one representative of [a] suffices
    because the class set of the product is conjugation-invariant."""
    g = partition.group
    a = partition.reps[a_cid]
    return frozenset(
        partition.class_of[g.mul(a, b)] for b in partition.members[b_cid]
    )


def iterated_class_product(partition: ClassPartition, cids: Sequence[int]) -> frozenset[int]:
    """Class ids meeting [c1][c2]...[ck]."""
    if not cids:
        raise ValueError("iterated_class_product needs at least one class")
    acc = frozenset((cids[0],))
    for cid in cids[1:]:
        acc = frozenset(
            x for a in acc for x in class_product(partition, a, cid)
        )
    return acc


@dataclass(frozen=True)
class Subgroup:
    """A subgroup re-indexed as its own FiniteGroup plus the inclusion map."""

    group: FiniteGroup
    parent: FiniteGroup
    inclusion: tuple[int, ...]  # subgroup index -> parent index

    def parent_index(self, i: int) -> int:
        return self.inclusion[i]

    def index_in_subgroup(self, parent_idx: int) -> int:
        try:
            return self.inclusion.index(parent_idx)
        except ValueError:
            raise ValueError(
                f"element {parent_idx} of {self.parent.label} is not in the subgroup"
            ) from None


def image_subgroup(parent: FiniteGroup, elements: Sequence[int], label=None,
                   cap: int = PERM_CLOSURE_CAP) -> Subgroup:
    """The subgroup generated by the given parent elements."""
    for e in elements:
        if not 0 <= e < parent.order:
            raise ValueError(f"element index {e} out of range for {parent.label}")
    seeds = list(dict.fromkeys(elements))  # dedupe, keep order
    closure, index = _close_under_products(
        seeds, parent.mul, 0, cap, f"image_subgroup of {parent.label}"
    )
    if label is None:
        label = f"<{len(seeds)} gens in {parent.label}>"
    gen_indices = tuple(index[e] for e in seeds)
    if parent.is_perm_backed:
        sub = FiniteGroup(
            label,
            perms=[parent.perm(e) for e in closure],
            generator_indices=gen_indices,
        )
    else:
        table = [[index[parent.mul(a, b)] for b in closure] for a in closure]
        sub = FiniteGroup(label, table=table, generator_indices=gen_indices)
    return Subgroup(group=sub, parent=parent, inclusion=tuple(closure))
