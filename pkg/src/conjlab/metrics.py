"""Bi-invariant norms on finite groups and the metrics they induce.

A norm assigns every element a nonnegative value with

    1. ||g|| >= 0           2. ||e|| = 0          3. ||g^-1|| = ||g||
    4. ||hgh^-1|| = ||g||   5. ||gh|| <= ||g|| + ||h||

and d(a, b) = ||a b^-1|| is then a bi-invariant (semi)metric.  Hamming and
graph norms are exact rationals; character norms carry square roots and use
floats compared within TOLERANCE.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import InvalidCharacterError, InvalidNormError
from .groups import (
    ClassPartition,
    FiniteGroup,
    Perm,
    Subgroup,
    conjugacy_classes,
    image_subgroup,
)

TOLERANCE = 1e-12

Value = Union[Fraction, int, float]


def is_exact(v: Value) -> bool:
    return isinstance(v, (Fraction, int))


def values_equal(a: Value, b: Value) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= TOLERANCE


def value_leq(a: Value, b: Value) -> bool:
    if is_exact(a) and is_exact(b):
        return a <= b
    return a <= b + TOLERANCE


def format_value(v: Value) -> str:
    """Rationals as p/q, reals with 12 significant digits."""
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return str(v)
    return f"{v:.12g}"


def hamming_norm(f: Perm) -> Fraction:
    """Normalized Hamming norm: moved points over the degree."""
    return Fraction(f.moved(), f.degree)


class Norm:
    """A class-function norm on a finite group, stored per conjugacy class."""

    def __init__(self, group: FiniteGroup, class_values: Sequence[Value], label: str):
        self.group = group
        self.partition = conjugacy_classes(group)
        if len(class_values) != self.partition.n_classes:
            raise ValueError(
                f"{len(class_values)} values for {self.partition.n_classes} classes"
            )
        self.class_values = tuple(class_values)
        self.label = label

    def value(self, i: int) -> Value:
        return self.class_values[self.partition.class_of[i]]

    def dist(self, a: int, b: int) -> Value:
        """Induced metric d(a, b) = ||a b^-1||."""
        return self.value(self.group.mul(a, self.group.inv(b)))

    def values_by_element(self) -> list[Value]:
        return [self.value(i) for i in self.group.elements()]

    def scaled(self, factor: Value, label: Optional[str] = None) -> Norm:
        if factor <= 0:
            raise ValueError(f"scale factor must be positive, got {factor!r}")
        return Norm(
            self.group,
            [factor * v for v in self.class_values],
            label if label is not None else f"{format_value(factor)}*{self.label}",
        )

    def __repr__(self) -> str:
        return f"Norm({self.label!r} on {self.group.label})"


def hamming_norm_on(group: FiniteGroup) -> Norm:
    """The normalized Hamming norm as a Norm object on a permutation group."""
    if not group.is_perm_backed:
        raise ValueError(f"{group.label} is not permutation-backed")
    partition = conjugacy_classes(group)
    values = [hamming_norm(group.perm(rep)) for rep in partition.reps]
    return Norm(group, values, "hamming")


def induced_distance(norm: Norm, a: int, b: int) -> Value:
    return norm.dist(a, b)


@dataclass(frozen=True)
class CharacterData:
    """A character given as data: one complex value per conjugacy class."""

    group: FiniteGroup
    chi: tuple[complex, ...]
    label: str = "char"

    def __post_init__(self):
        partition = conjugacy_classes(self.group)
        if len(self.chi) != partition.n_classes:
            raise InvalidCharacterError(
                f"{len(self.chi)} values for {partition.n_classes} classes"
            )
        e_val = self.chi[partition.class_of[0]]
        if abs(e_val.imag) > TOLERANCE or e_val.real <= 0:
            raise InvalidCharacterError(
                f"character value at the identity must be real positive, got {e_val}"
            )
        for cid, z in enumerate(self.chi):
            if 2 * e_val.real - 2 * z.real < -TOLERANCE * max(1.0, abs(e_val.real)):
                raise InvalidCharacterError(
                    f"negative radicand at class {cid}: chi(e)={e_val.real}, chi={z}"
                )

    @property
    def partition(self) -> ClassPartition:
        return conjugacy_classes(self.group)


def character_norm(cd: CharacterData, g: int) -> float:
    """sqrt((2 chi(e) - (chi(g) + conj(chi(g)))) / chi(e))."""
    partition = cd.partition
    chi_e = cd.chi[partition.class_of[0]].real
    z = cd.chi[partition.class_of[g]]
    radicand = (2 * chi_e - 2 * z.real) / chi_e
    if radicand < 0:
        if radicand < -TOLERANCE:
            raise InvalidCharacterError(f"negative radicand {radicand} at element {g}")
        radicand = 0.0
    return math.sqrt(radicand)


def character_norm_as_norm(cd: CharacterData) -> Norm:
    partition = cd.partition
    return Norm(
        cd.group,
        [character_norm(cd, partition.reps[cid]) for cid in range(partition.n_classes)],
        f"char[{cd.label}]",
    )


def parse_character(text: str, group: FiniteGroup, label: str = "char") -> CharacterData:
    """Character file: `char <group-label> <#classes>` then one `<re> <im>`
    line per class id."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise InvalidCharacterError("empty character file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "char":
        raise InvalidCharacterError(f"bad header {lines[0]!r}")
    if head[1] != group.label:
        raise InvalidCharacterError(
            f"character file is for {head[1]!r}, not {group.label!r}"
        )
    n_classes = int(head[2])
    partition = conjugacy_classes(group)
    if n_classes != partition.n_classes:
        raise InvalidCharacterError(
            f"file declares {n_classes} classes, group has {partition.n_classes}"
        )
    if len(lines) - 1 != n_classes:
        raise InvalidCharacterError(
            f"expected {n_classes} value lines, found {len(lines) - 1}"
        )
    chi = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise InvalidCharacterError(f"bad value line {ln!r}")
        chi.append(complex(float(parts[0]), float(parts[1])))
    return CharacterData(group, tuple(chi), label)


def _normalize_values(group: FiniteGroup, norm) -> list[Value]:
    if isinstance(norm, Norm):
        return norm.values_by_element()
    if callable(norm):
        return [norm(i) for i in group.elements()]
    values = list(norm)
    if len(values) != group.order:
        raise ValueError(f"{len(values)} values for group of order {group.order}")
    return values


@dataclass
class AxiomCheck:
    name: str
    ok: bool
    witness: Optional[str] = None


@dataclass
class NormAxiomReport:
    group_label: str
    norm_label: str
    checks: list[AxiomCheck]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def format(self) -> str:
        lines = [f"norm axioms for {self.norm_label!r} on {self.group_label}:"]
        for c in self.checks:
            status = "pass" if c.ok else f"FAIL ({c.witness})"
            lines.append(f"  {c.name}: {status}")
        lines.append(f"  overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def verify_norm_axioms(group: FiniteGroup, norm, label: str = "norm") -> NormAxiomReport:
    """Exhaustively check the five norm properties; failures become report
    entries with witnesses, never exceptions."""
    if isinstance(norm, Norm):
        label = norm.label
    values = _normalize_values(group, norm)
    n = group.order
    er = group.element_repr

    checks = []

    witness = None
    for i in range(n):
        if not value_leq(0, values[i]):
            witness = f"||{er(i)}|| = {format_value(values[i])} < 0"
            break
    checks.append(AxiomCheck("1: nonnegative", witness is None, witness))

    ok = values_equal(values[0], 0)
    checks.append(
        AxiomCheck("2: zero at identity", ok,
                   None if ok else f"||e|| = {format_value(values[0])}")
    )

    witness = None
    for i in range(n):
        j = group.inv(i)
        if not values_equal(values[i], values[j]):
            witness = (
                f"||{er(i)}|| = {format_value(values[i])}"
                f" but ||{er(j)}|| = {format_value(values[j])}"
            )
            break
    checks.append(AxiomCheck("3: inverse-invariant", witness is None, witness))

    witness = None
    for h in range(n):
        if witness:
            break
        for g in range(n):
            c = group.conj(g, h)
            if not values_equal(values[g], values[c]):
                witness = (
                    f"||{er(g)}|| = {format_value(values[g])} but conjugate"
                    f" ||{er(c)}|| = {format_value(values[c])}"
                )
                break
    checks.append(AxiomCheck("4: class function", witness is None, witness))

    witness = None
    mul = group.mul
    for g in range(n):
        if witness:
            break
        vg = values[g]
        for h in range(n):
            if not value_leq(values[mul(g, h)], vg + values[h]):
                witness = (
                    f"||{er(g)}*{er(h)}|| = {format_value(values[mul(g, h)])}"
                    f" > {format_value(vg)} + {format_value(values[h])}"
                )
                break
    checks.append(AxiomCheck("5: triangle inequality", witness is None, witness))

    return NormAxiomReport(group.label, label, checks)


def norm_kernel(group: FiniteGroup, norm) -> Subgroup:
    """The zero set {g : ||g|| = 0}, verified to be a normal subgroup."""
    values = _normalize_values(group, norm)
    kernel = [i for i in group.elements() if values_equal(values[i], 0)]
    kernel_set = set(kernel)
    if 0 not in kernel_set:
        raise InvalidNormError("||e|| != 0: not a semimetric norm")
    for a in kernel:
        if group.inv(a) not in kernel_set:
            raise InvalidNormError(
                f"zero set not closed under inverse at {group.element_repr(a)}"
            )
        for b in kernel:
            if group.mul(a, b) not in kernel_set:
                raise InvalidNormError(
                    "zero set not closed under product at"
                    f" {group.element_repr(a)} * {group.element_repr(b)};"
                    " the input is not a valid semimetric norm"
                )
    for a in kernel:
        for h in group.elements():
            if group.conj(a, h) not in kernel_set:
                raise InvalidNormError(
                    f"zero set not normal: conjugate of {group.element_repr(a)}"
                    f" by {group.element_repr(h)} leaves it"
                )
    return image_subgroup(group, kernel, label=f"ker||.|| in {group.label}")


class HammingTarget:
    """S_n with the normalized Hamming metric, used without enumerating S_n.

    Elements are Perm values, so this scales to the squared degrees produced
    by amplification.
    """

    def __init__(self, degree: int):
        self.degree = degree
        self.identity = Perm.identity(degree)
        self.label = f"S{degree}:hamming"

    def mul(self, a: Perm, b: Perm) -> Perm:
        return a * b

    def inv(self, a: Perm) -> Perm:
        return a.inverse()

    def norm(self, a: Perm) -> Fraction:
        return Fraction(a.moved(), self.degree)

    def dist(self, a: Perm, b: Perm) -> Fraction:
        return Fraction(sum(1 for x, y in zip(a.images, b.images) if x != y), self.degree)

    def __repr__(self) -> str:
        return f"HammingTarget({self.degree})"


class FiniteNormTarget:
    """An enumerated finite group paired with a norm; elements are indices."""

    def __init__(self, group: FiniteGroup, norm: Norm):
        if norm.group is not group:
            raise ValueError("norm is defined on a different group")
        self.group = group
        self.norm_obj = norm
        self.identity = 0
        self.label = f"{group.label}:{norm.label}"

    def mul(self, a: int, b: int) -> int:
        return self.group.mul(a, b)

    def inv(self, a: int) -> int:
        return self.group.inv(a)

    def norm(self, a: int) -> Value:
        return self.norm_obj.value(a)

    def dist(self, a: int, b: int) -> Value:
        return self.norm_obj.dist(a, b)

    def __repr__(self) -> str:
        return f"FiniteNormTarget({self.label})"
