"""Separation of normal subgroups through finite quotients.

A normal subgroup N of a free group F is handled exclusively through a
finite quotient model (a homomorphism F -> Q with kernel N), which keeps
every membership verdict exact.  On top of that sit: the (r, eps, delta)
separation check for homomorphisms into metric groups, membership of
elements in products of conjugacy classes, the exhaustive/sampled search
for homomorphisms witnessing non-membership in the closure of a class
product, the power-stabilization of symmetrized class products, and
self-contained non-membership certificates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Optional, Sequence

from .errors import (
    CertificateRefusedError,
    CertificateSyntaxError,
    ConjlabError,
    RankMismatchError,
)
from .groups import (
    FiniteGroup,
    Perm,
    conjugacy_classes,
    image_subgroup,
    iterated_class_product,
    perm_group,
    table_group,
)
from .metrics import Value, value_leq
from .words import GenImages, Word, ball, evaluate, parse_word

EXHAUSTIVE_TUPLE_CAP = 20_000_000
BALL_CAP = 200_000


class NOracle:
    """Exact membership in N = ker(F -> Q), via the quotient model."""

    def __init__(self, model: GenImages):
        self.model = model

    @property
    def rank(self) -> int:
        return self.model.rank

    @property
    def quotient(self):
        return self.model.group

    def image(self, w: Word):
        return evaluate(w, self.model)

    def contains(self, w: Word) -> bool:
        return self.image(w) == self.model.group.identity

    def same_coset(self, a: Word, b: Word) -> bool:
        return self.image(a) == self.image(b)

    def __repr__(self) -> str:
        return f"NOracle(rank={self.rank}, quotient={getattr(self.quotient, 'label', self.quotient)!r})"


@dataclass
class SeparationVerdict:
    r: int
    eps: Value
    delta: Value
    violations: list[tuple[Word, Value, str]]
    words_checked: int

    @property
    def passed(self) -> bool:
        return not self.violations

    def format(self) -> str:
        from .metrics import format_value

        head = (
            f"separation check r={self.r} eps={format_value(self.eps)}"
            f" delta={format_value(self.delta)}: "
            f"{'pass' if self.passed else 'FAIL'} ({self.words_checked} words)"
        )
        lines = [head]
        for w, d, side in self.violations:
            lines.append(f"  violation: {w.to_text()} ({side}) at distance {format_value(d)}")
        return "\n".join(lines)


def check_separation(gi: GenImages, oracle: NOracle, r: int, eps: Value,
                     delta: Value, ball_cap: int = BALL_CAP) -> SeparationVerdict:
    """Check the alternative: every word of length <= r lands within eps of
    the identity if it is in N, and beyond delta if it is not."""
    if not eps > 0:
        raise ValueError(f"need eps > 0, got {eps}")
    if not eps < delta:
        raise ValueError(f"need eps < delta, got eps={eps}, delta={delta}")
    target = gi.group
    if not hasattr(target, "norm"):
        raise ValueError(f"target {target!r} carries no metric")
    if gi.rank != oracle.rank:
        raise RankMismatchError(
            f"homomorphism rank {gi.rank} vs oracle rank {oracle.rank}"
        )
    violations = []
    words = ball(gi.rank, r, cap=ball_cap)
    for w in words:
        d = target.norm(evaluate(w, gi))
        if oracle.contains(w):
            if not d < eps:
                violations.append((w, d, "in N"))
        else:
            if not d > delta:
                violations.append((w, d, "outside N"))
    return SeparationVerdict(r, eps, delta, violations, len(words))


def class_product_membership(group: FiniteGroup, h: int, hs: Sequence[int]) -> bool:
    """Is h in the product of the conjugacy classes of the hs?  Exact at the
    class level: the product of classes is a union of classes."""
    if not hs:
        raise ValueError("need at least one class factor")
    partition = conjugacy_classes(group)
    cids = [partition.class_of[x] for x in hs]
    return partition.class_of[h] in iterated_class_product(partition, cids)


def element_set_product_membership(group: FiniteGroup, h: int, hs: Sequence[int]) -> bool:
    """Brute-force oracle for class_product_membership: multiply the full
    element sets of the classes."""
    if not hs:
        raise ValueError("need at least one class factor")
    partition = conjugacy_classes(group)
    acc = set(partition.members[partition.class_of[hs[0]]])
    for x in hs[1:]:
        members = partition.members[partition.class_of[x]]
        acc = {group.mul(a, b) for a in acc for b in members}
    return h in acc


@dataclass
class TriangleReport:
    w_norm: Value
    g_norms: list[Value]
    ok: bool

    def format(self) -> str:
        from .metrics import format_value

        total = sum(self.g_norms)
        return (
            f"||w|| = {format_value(self.w_norm)} vs sum ="
            f" {format_value(total)}: {'pass' if self.ok else 'FAIL'}"
        )


def triangle_bound_check(group: FiniteGroup, norm, w_img: int,
                         g_imgs: Sequence[int]) -> TriangleReport:
    """For w inside the class product of the g's, the norm of w is bounded
    by the sum of the norms of the g's (conjugation-invariance + triangle).
    A failure indicates a broken norm implementation."""
    if not class_product_membership(group, w_img, g_imgs):
        raise ValueError(
            "triangle_bound_check inapplicable: element is not in the class product"
        )
    w_norm = norm.value(w_img)
    g_norms = [norm.value(g) for g in g_imgs]
    return TriangleReport(w_norm, g_norms, value_leq(w_norm, sum(g_norms)))


@dataclass
class ClosureWitness:
    group_label: str
    images: tuple[int, ...]
    image_reprs: tuple[str, ...]
    image_order: int
    w_class: int
    g_classes: tuple[int, ...]
    product_classes: tuple[int, ...]
    brute_force_verified: bool


@dataclass
class GroupRunRecord:
    label: str
    order: int
    mode: str
    tuples: int
    inside: int
    skipped: Optional[str] = None
    witness: Optional[ClosureWitness] = None


@dataclass
class ClosureResult:
    records: list[GroupRunRecord]
    witness: Optional[ClosureWitness]
    total_tuples: int
    total_inside: int


class _SubgroupCache:
    """Image subgroups keyed by their generating set, with class data."""

    def __init__(self, parent: FiniteGroup):
        self.parent = parent
        self._subs: dict[frozenset, tuple] = {}
        self._products: dict[tuple, frozenset] = {}

    def lookup(self, images: tuple[int, ...]):
        key = frozenset(images)
        entry = self._subs.get(key)
        if entry is None:
            sub = image_subgroup(self.parent, sorted(key))
            to_sub = {p: i for i, p in enumerate(sub.inclusion)}
            partition = conjugacy_classes(sub.group)
            entry = (sub, to_sub, partition)
            self._subs[key] = entry
        return entry

    def product(self, key: frozenset, cids: tuple[int, ...], partition) -> frozenset:
        pkey = (key, cids)
        result = self._products.get(pkey)
        if result is None:
            result = iterated_class_product(partition, cids)
            self._products[pkey] = result
        return result


def _membership_in_image(cache: _SubgroupCache, images: tuple[int, ...],
                         g_words: Sequence[Word], w_word: Word):
    """Membership of phi(w) in the product of the classes of the phi(g_i),
    taken inside the image subgroup I = <images>."""
    parent = cache.parent
    gi = GenImages(parent, images)
    sub, to_sub, partition = cache.lookup(images)
    g_sub = [to_sub[evaluate(g, gi)] for g in g_words]
    w_sub = to_sub[evaluate(w_word, gi)]
    cids = tuple(partition.class_of[x] for x in g_sub)
    prod = cache.product(frozenset(images), cids, partition)
    inside = partition.class_of[w_sub] in prod
    return inside, sub, g_sub, w_sub, cids, prod, partition


def closure_search(rank: int, g_words: Sequence[Word], w_word: Word,
                   groups: Sequence[FiniteGroup], mode: str = "exhaustive",
                   seed: Optional[int] = None, count: Optional[int] = None,
                   tuple_cap: int = EXHAUSTIVE_TUPLE_CAP) -> ClosureResult:
    """Search homomorphisms F -> H for one under which phi(w) escapes the
    product of the conjugacy classes of the phi(g_i) in the image subgroup.

    Deterministic: groups in input order, exhaustive tuples in lexicographic
    order, sampled tuples from the seeded generator.  A found witness is
    re-verified by full element-set enumeration before being returned.
    """
    for g in list(g_words) + [w_word]:
        if g.rank != rank:
            raise RankMismatchError(f"word {g.to_text()} has rank {g.rank}, expected {rank}")
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = None
    if mode == "sampled":
        if seed is None:
            raise ValueError("sampled mode requires an explicit seed")
        if not count or count < 1:
            raise ValueError("sampled mode requires a positive tuple count")
        rng = random.Random(seed)

    records: list[GroupRunRecord] = []
    witness: Optional[ClosureWitness] = None
    total_tuples = 0
    total_inside = 0
    for group in groups:
        if mode == "exhaustive" and group.order ** rank > tuple_cap:
            records.append(GroupRunRecord(
                group.label, group.order, mode, 0, 0,
                skipped=f"{group.order}^{rank} tuples exceed the cap of {tuple_cap}",
            ))
            continue
        cache = _SubgroupCache(group)
        if mode == "exhaustive":
            tuples = _cartesian(range(group.order), repeat=rank)
        else:
            tuples = (
                tuple(rng.randrange(group.order) for _ in range(rank))
                for _ in range(count)
            )
        n_tuples = 0
        n_inside = 0
        group_witness = None
        for images in tuples:
            n_tuples += 1
            inside, sub, g_sub, w_sub, cids, prod, partition = _membership_in_image(
                cache, images, g_words, w_word
            )
            if inside:
                n_inside += 1
                continue
            verified = not element_set_product_membership(sub.group, w_sub, g_sub)
            if not verified:
                raise ConjlabError(
                    "internal inconsistency: class-level non-membership"
                    " contradicted by element-level enumeration"
                )
            group_witness = ClosureWitness(
                group_label=group.label,
                images=tuple(images),
                image_reprs=tuple(group.element_repr(i) for i in images),
                image_order=sub.group.order,
                w_class=partition.class_of[w_sub],
                g_classes=cids,
                product_classes=tuple(sorted(prod)),
                brute_force_verified=True,
            )
            break
        records.append(GroupRunRecord(
            group.label, group.order, mode, n_tuples, n_inside, witness=group_witness,
        ))
        total_tuples += n_tuples
        total_inside += n_inside
        if group_witness is not None:
            witness = group_witness
            break
    return ClosureResult(records, witness, total_tuples, total_inside)


@dataclass
class StabilizationResult:
    n_star: int
    stabilized: frozenset[int]
    variant_n_star: int
    variant_stabilized: frozenset[int]
    normal_closure: frozenset[int]
    literal_equals_closure: bool
    variant_equals_closure: bool


def _stabilize_powers(group: FiniteGroup, s: frozenset[int]) -> tuple[int, frozenset[int]]:
    """Least n with S^n = S^(n+1) and that stabilized power.  Monotone as
    soon as the identity lies in S."""
    current = s
    n = 1
    while True:
        nxt = frozenset(group.mul(a, b) for a in current for b in s)
        if nxt == current:
            return n, current
        current = nxt
        n += 1


def stabilization(group: FiniteGroup, g_elements: Sequence[int]) -> StabilizationResult:
    """Stabilize S = [g1][g1^-1][g2][g2^-1]... under powers, together with the
    symmetrized variant S' = {e} u U([g_i] u [g_i^-1]) and the normal closure
    of the g's; the literal formula can stall below the closure (it only
    yields products of an even number of conjugates when all factors pair up),
    so both results are reported."""
    if not g_elements:
        raise ValueError("need at least one element")
    partition = conjugacy_classes(group)
    factors: list[tuple[int, ...]] = []
    for g in g_elements:
        factors.append(partition.members[partition.class_of[g]])
        factors.append(partition.members[partition.class_of[group.inv(g)]])
    s = frozenset(factors[0])
    for f in factors[1:]:
        s = frozenset(group.mul(a, b) for a in s for b in f)
    n_star, stabilized = _stabilize_powers(group, s)

    variant = {0}
    for f in factors:
        variant.update(f)
    variant_n_star, variant_stabilized = _stabilize_powers(group, frozenset(variant))

    closure_seeds = sorted(set().union(*factors))
    closure = frozenset(image_subgroup(group, closure_seeds).inclusion)
    return StabilizationResult(
        n_star=n_star,
        stabilized=stabilized,
        variant_n_star=variant_n_star,
        variant_stabilized=variant_stabilized,
        normal_closure=closure,
        literal_equals_closure=stabilized == closure,
        variant_equals_closure=variant_stabilized == closure,
    )


@dataclass
class ExperimentConfig:
    """A closure experiment: rank, factor words, test word, catalog entries,
    and the search mode."""

    rank: int
    g_words: tuple[Word, ...]
    w_word: Word
    group_refs: tuple[str, ...]
    families: tuple[str, ...]
    mode: str
    count: Optional[int]
    seed: Optional[int]
    raw_text: str


def parse_experiment_config(text: str) -> ExperimentConfig:
    """Line-oriented config: `rank`, repeated `g <word>`, `w <word>`,
    repeated `group <ref>` and/or `family nilpotent16`, optional
    `mode exhaustive|sampled:<count>` and `seed <u64>`."""
    rank: Optional[int] = None
    g_words: list[Word] = []
    w_word: Optional[Word] = None
    group_refs: list[str] = []
    families: list[str] = []
    mode = "exhaustive"
    count: Optional[int] = None
    seed: Optional[int] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            key, _, rest = line.partition(" ")
            rest = rest.strip()
            if key == "rank":
                rank = int(rest)
            elif key == "g":
                if rank is None:
                    raise ValueError("rank must come before words")
                g_words.append(parse_word(rest, rank))
            elif key == "w":
                if rank is None:
                    raise ValueError("rank must come before words")
                w_word = parse_word(rest, rank)
            elif key == "group":
                group_refs.append(rest)
            elif key == "family":
                if rest != "nilpotent16":
                    raise ValueError(f"unknown family {rest!r}")
                families.append(rest)
            elif key == "mode":
                if rest == "exhaustive":
                    mode = "exhaustive"
                elif rest.startswith("sampled:"):
                    mode = "sampled"
                    count = int(rest.split(":", 1)[1])
                else:
                    raise ValueError(f"unknown mode {rest!r}")
            elif key == "seed":
                seed = int(rest)
            else:
                raise ValueError(f"unknown directive {key!r}")
        except ValueError as exc:
            raise ValueError(f"config line {lineno}: {exc}") from None
    if rank is None:
        raise ValueError("config is missing a rank line")
    if not g_words:
        raise ValueError("config needs at least one g line")
    if w_word is None:
        raise ValueError("config is missing the w line")
    if not group_refs and not families:
        raise ValueError("config names no groups")
    if mode == "sampled" and seed is None:
        raise ValueError("sampled mode requires an explicit seed")
    return ExperimentConfig(
        rank=rank,
        g_words=tuple(g_words),
        w_word=w_word,
        group_refs=tuple(group_refs),
        families=tuple(families),
        mode=mode,
        count=count,
        seed=seed,
        raw_text=text,
    )


@dataclass
class Certificate:
    """A replayable record showing phi(w) outside the class product of the
    phi(g_i) in the image subgroup, for one explicit homomorphism."""

    rank: int
    g_words: tuple[Word, ...]
    w_word: Word
    kind: str                       # "perm" or "table"
    degree: int = 0                 # perm kind
    perm_images: tuple[Perm, ...] = ()
    table: tuple[tuple[int, ...], ...] = ()  # table kind
    table_label: str = ""
    table_images: tuple[int, ...] = ()

    def to_text(self) -> str:
        lines = ["certificate v1", f"rank {self.rank}"]
        for g in self.g_words:
            lines.append(f"g {g.to_text()}")
        lines.append(f"w {self.w_word.to_text()}")
        if self.kind == "perm":
            lines.append(f"target perm {self.degree}")
            for p in self.perm_images:
                lines.append(f"img {p.to_cycle_string()}")
        else:
            lines.append(f"target table {len(self.table)} {self.table_label}")
            for row in self.table:
                lines.append(" ".join(str(x) for x in row))
            for i in self.table_images:
                lines.append(f"img {i}")
        lines.append("end")
        return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines or lines[0] != "certificate v1":
        raise CertificateSyntaxError("missing 'certificate v1' header")
    if lines[-1] != "end":
        raise CertificateSyntaxError("missing 'end' terminator")
    body = lines[1:-1]
    if not body or not body[0].startswith("rank "):
        raise CertificateSyntaxError("missing rank line")
    rank = int(body[0].split()[1])
    g_words: list[Word] = []
    w_word: Optional[Word] = None
    i = 1
    while i < len(body) and body[i].startswith("g "):
        g_words.append(parse_word(body[i][2:], rank))
        i += 1
    if i < len(body) and body[i].startswith("w "):
        w_word = parse_word(body[i][2:], rank)
        i += 1
    if not g_words or w_word is None:
        raise CertificateSyntaxError("need at least one 'g' line and a 'w' line")
    if i >= len(body) or not body[i].startswith("target "):
        raise CertificateSyntaxError("missing target line")
    target_parts = body[i].split()
    i += 1
    if target_parts[1] == "perm":
        degree = int(target_parts[2])
        perms = []
        while i < len(body):
            if not body[i].startswith("img "):
                raise CertificateSyntaxError(f"unexpected line {body[i]!r}")
            perms.append(Perm.parse(body[i][4:], degree))
            i += 1
        if len(perms) != rank:
            raise CertificateSyntaxError(
                f"{len(perms)} images for rank {rank}"
            )
        return Certificate(rank, tuple(g_words), w_word, "perm",
                           degree=degree, perm_images=tuple(perms))
    if target_parts[1] == "table":
        m = int(target_parts[2])
        label = target_parts[3] if len(target_parts) > 3 else f"table{m}"
        if i + m > len(body):
            raise CertificateSyntaxError("truncated table")
        table = tuple(
            tuple(int(x) for x in body[i + r].split()) for r in range(m)
        )
        i += m
        images = []
        while i < len(body):
            if not body[i].startswith("img "):
                raise CertificateSyntaxError(f"unexpected line {body[i]!r}")
            images.append(int(body[i][4:]))
            i += 1
        if len(images) != rank:
            raise CertificateSyntaxError(f"{len(images)} images for rank {rank}")
        return Certificate(rank, tuple(g_words), w_word, "table",
                           table=table, table_label=label,
                           table_images=tuple(images))
    raise CertificateSyntaxError(f"unknown target kind {target_parts[1]!r}")


@dataclass
class CertificateVerification:
    valid: bool
    detail: str


def verify_certificate(cert: Certificate) -> CertificateVerification:
    """Recompute the non-membership claim by full element-set enumeration."""
    if cert.kind == "perm":
        # the group generated by the images IS the image subgroup
        group = perm_group(cert.degree, list(cert.perm_images))
        gen_indices = [group.index_of_perm(p) for p in cert.perm_images]
        gi = GenImages(group, gen_indices)
        host = group
        w_elt = evaluate(cert.w_word, gi)
        g_elts = [evaluate(g, gi) for g in cert.g_words]
    else:
        parent = table_group(cert.table, cert.table_label)
        sub = image_subgroup(parent, list(cert.table_images))
        to_sub = {p: i for i, p in enumerate(sub.inclusion)}
        gi = GenImages(parent, cert.table_images)
        host = sub.group
        w_elt = to_sub[evaluate(cert.w_word, gi)]
        g_elts = [to_sub[evaluate(g, gi)] for g in cert.g_words]
    inside = element_set_product_membership(host, w_elt, g_elts)
    if inside:
        return CertificateVerification(
            False, "membership holds: phi(w) lies in the class product"
        )
    return CertificateVerification(
        True,
        f"phi(w) is outside the class product in an image of order {host.order}",
    )


def profinite_nonmember_certificate(g_words: Sequence[Word], w_word: Word,
                                    gi: GenImages) -> Certificate:
    """Package one homomorphism plus the brute-force non-membership check as
    a standalone certificate; refuse if membership actually holds."""
    group = gi.group
    if not isinstance(group, FiniteGroup):
        raise ValueError("certificate targets must be enumerated finite groups")
    rank = gi.rank
    for g in list(g_words) + [w_word]:
        if g.rank != rank:
            raise RankMismatchError(f"word {g.to_text()} has rank {g.rank}, expected {rank}")
    sub = image_subgroup(group, list(gi.images))
    to_sub = {p: i for i, p in enumerate(sub.inclusion)}
    w_elt = to_sub[evaluate(w_word, gi)]
    g_elts = [to_sub[evaluate(g, gi)] for g in g_words]
    if element_set_product_membership(sub.group, w_elt, g_elts):
        raise CertificateRefusedError(
            "phi(w) lies in the class product of the phi(g_i); no certificate"
        )
    if group.is_perm_backed:
        return Certificate(
            rank, tuple(g_words), w_word, "perm",
            degree=group.degree,
            perm_images=tuple(group.perm(i) for i in gi.images),
        )
    table = tuple(
        tuple(group.mul(a, b) for b in group.elements()) for a in group.elements()
    )
    return Certificate(
        rank, tuple(g_words), w_word, "table",
        table=table, table_label=group.label, table_images=tuple(gi.images),
    )
