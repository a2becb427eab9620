"""Almost-homomorphisms into metric groups: measurement and amplification.

A map from a finite partial multiplication set into a group with a
bi-invariant metric has a measured *defect* (worst multiplication error over
recorded products) and *margin* (smallest distance of a non-identity image
from the identity).  Squaring a map into S_n through the S_n x S_n -> S_{n^2}
embedding pushes the margin toward 1 while the defect stays controlled by
the complement-square law, which is what makes the two notions of almost-
homomorphism with fixed or vanishing tolerance interchangeable.

The two bridge constructions connect almost-homomorphisms defined on cosets
of a normal subgroup N (known through a finite quotient model) with
homomorphisms of the free group that separate N at a controlled radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import SeparationGapError, SeparationPreconditionError, UndefinedMarginError
from .groups import FiniteGroup, square_embed
from .metrics import HammingTarget, Value, format_value, value_leq
from .separability import NOracle, check_separation
from .words import GenImages, Word, ball, evaluate


class PartialMulSet:
    """A finite set of labels with a partial multiplication recorded only
    where the product stays inside the set."""

    def __init__(self, labels: Sequence, products: dict[tuple[int, int], int],
                 identity_index: Optional[int] = None):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct")
        n = len(self.labels)
        for (i, j), k in products.items():
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise ValueError(f"product entry ({i},{j})->{k} out of range")
        if identity_index is not None:
            if not 0 <= identity_index < n:
                raise ValueError(f"identity index {identity_index} out of range")
            for (i, j), k in products.items():
                if i == identity_index and k != j:
                    raise ValueError(f"identity inconsistency: e*{j} -> {k}")
                if j == identity_index and k != i:
                    raise ValueError(f"identity inconsistency: {i}*e -> {k}")
        self.products = dict(products)
        self.identity_index = identity_index

    @classmethod
    def from_group(cls, group: FiniteGroup) -> PartialMulSet:
        """The whole group as a (total) multiplication set."""
        products = {
            (i, j): group.mul(i, j)
            for i in group.elements()
            for j in group.elements()
        }
        return cls(tuple(group.elements()), products, identity_index=0)

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return (
            f"PartialMulSet({len(self.labels)} labels,"
            f" {len(self.products)} products)"
        )


class AlmostHom:
    """A map from a PartialMulSet into a metric group (a target exposing
    identity/mul/inv/norm/dist)."""

    def __init__(self, domain: PartialMulSet, target, mapping: Sequence):
        if len(mapping) != len(domain):
            raise ValueError(f"{len(mapping)} images for {len(domain)} labels")
        self.domain = domain
        self.target = target
        self.mapping = tuple(mapping)
        if domain.identity_index is not None:
            if self.mapping[domain.identity_index] != target.identity:
                raise ValueError("the identity label must map to the target identity")

    def __repr__(self) -> str:
        return f"AlmostHom({len(self.domain)} labels -> {self.target.label})"


def defect(ah: AlmostHom) -> Value:
    """max d(phi(a)phi(b), phi(ab)) over recorded products; 0 when none."""
    t = ah.target
    worst: Value = Fraction(0)
    for (i, j), k in ah.domain.products.items():
        d = t.dist(t.mul(ah.mapping[i], ah.mapping[j]), ah.mapping[k])
        if d > worst:
            worst = d
    return worst


def margin(ah: AlmostHom) -> Value:
    """min d(phi(a), e) over non-identity labels."""
    t = ah.target
    best: Optional[Value] = None
    for i in range(len(ah.domain)):
        if i == ah.domain.identity_index:
            continue
        d = t.norm(ah.mapping[i])
        if best is None or d < best:
            best = d
    if best is None:
        raise UndefinedMarginError("no non-identity labels; margin undefined")
    return best


@dataclass
class AhomReport:
    phi_size: int
    target_label: str
    defect: Value
    margin: Optional[Value]
    eps: Value
    alpha: Value
    identity_ok: bool
    passed: bool

    def format(self) -> str:
        margin_text = "n/a (no non-identity labels)" if self.margin is None \
            else format_value(self.margin)
        return "\n".join([
            f"|Phi| = {self.phi_size}",
            f"target = {self.target_label}",
            f"measured defect  = {format_value(self.defect)}",
            f"measured margin  = {margin_text}",
            f"identity condition: {'ok' if self.identity_ok else 'VIOLATED'}",
            f"verdict for (eps={format_value(self.eps)},"
            f" alpha={format_value(self.alpha)}): "
            + ("almost-homomorphism" if self.passed else "NOT an almost-homomorphism"),
        ])


def is_ahom(ah: AlmostHom, eps: Value, alpha: Value) -> tuple[bool, AhomReport]:
    """Strict thresholds as in the defining conditions: defect < eps and
    margin > alpha (vacuous margin when only the identity is labeled)."""
    if eps <= 0 or alpha <= 0:
        raise ValueError("eps and alpha must be positive")
    d = defect(ah)
    try:
        m: Optional[Value] = margin(ah)
    except UndefinedMarginError:
        m = None
    identity_ok = True  # enforced at construction
    passed = d < eps and (m is None or m > alpha) and identity_ok
    report = AhomReport(
        phi_size=len(ah.domain),
        target_label=ah.target.label,
        defect=d,
        margin=m,
        eps=eps,
        alpha=alpha,
        identity_ok=identity_ok,
        passed=passed,
    )
    return passed, report


def amplify(ah: AlmostHom) -> AlmostHom:
    """Square the map through S_n x S_n -> S_{n^2}: each image f becomes the
    block permutation (f, f).  Defined only for Hamming symmetric targets.

    The complement-square law 1 - h(f x f, g x g) = (1 - h(f, g))^2 turns a
    measured defect e and margin a into at most 2e - e^2 and at least
    2a - a^2.
    """
    t = ah.target
    if not isinstance(t, HammingTarget):
        raise ValueError(
            f"amplification needs a Hamming symmetric target, got {t!r}"
        )
    new_target = HammingTarget(t.degree * t.degree)
    new_mapping = tuple(square_embed(p, p) for p in ah.mapping)
    return AlmostHom(ah.domain, new_target, new_mapping)


@dataclass
class AmplifyStep:
    step: int
    degree: int
    defect: Value
    margin: Value


@dataclass
class AmplifyRun:
    result: AlmostHom
    steps: list[AmplifyStep]
    t_required: int
    t_applied: int
    reached_target: bool

    def format(self) -> str:
        lines = [
            f"amplification: {self.t_applied} of {self.t_required} step(s)"
            + ("" if self.reached_target else " (degree cap reached first)")
        ]
        for s in self.steps:
            lines.append(
                f"  step {s.step}: degree {s.degree},"
                f" defect {format_value(s.defect)}, margin {format_value(s.margin)}"
            )
        return "\n".join(lines)


DEFAULT_DEGREE_CAP = 6 ** 4


def iterate_amplify(ah: AlmostHom, target_margin: Value,
                    cap_degree: int = DEFAULT_DEGREE_CAP) -> AmplifyRun:
    """Apply amplify() the minimal number of times t with
    1 - (1 - margin)^(2^t) >= target_margin, stopping early if the squared
    degree would exceed the cap (partial result, no exception)."""
    if not isinstance(ah.target, HammingTarget):
        raise ValueError("iterate_amplify needs a Hamming symmetric target")
    if not target_margin < 1:
        raise ValueError(f"target margin must be < 1, got {target_margin}")
    d0 = defect(ah)
    m0 = margin(ah)
    if not m0 > d0:
        raise SeparationGapError(
            f"measured margin {format_value(m0)} does not exceed"
            f" measured defect {format_value(d0)}"
        )
    t_required = 0
    beta = 1 - Fraction(m0) if isinstance(m0, (Fraction, int)) else 1.0 - m0
    while 1 - beta < target_margin:
        beta = beta * beta
        t_required += 1

    current = ah
    steps = [AmplifyStep(0, ah.target.degree, d0, m0)]
    t_applied = 0
    while t_applied < t_required:
        next_degree = current.target.degree ** 2
        if next_degree > cap_degree:
            break
        current = amplify(current)
        t_applied += 1
        steps.append(AmplifyStep(
            t_applied, current.target.degree, defect(current), margin(current)
        ))
    return AmplifyRun(
        result=current,
        steps=steps,
        t_required=t_required,
        t_applied=t_applied,
        reached_target=t_applied == t_required,
    )


class CosetSystem:
    """The cosets of N meeting a ball of the free group, identified through
    the quotient model: one label per distinct coset, represented by its
    first word in ball order (shortest, then lexicographically least)."""

    def __init__(self, oracle: NOracle, radius: int, ball_cap: int = 200_000):
        self.oracle = oracle
        self.radius = radius
        reps: list[Word] = []
        images: list = []
        image_to_label: dict = {}
        for w in ball(oracle.rank, radius, cap=ball_cap):
            img = oracle.image(w)
            if img not in image_to_label:
                image_to_label[img] = len(reps)
                reps.append(w)
                images.append(img)
        self.reps = tuple(reps)
        self.images = tuple(images)
        self._image_to_label = image_to_label
        q = oracle.quotient
        products: dict[tuple[int, int], int] = {}
        for i in range(len(reps)):
            for j in range(len(reps)):
                k = image_to_label.get(q.mul(images[i], images[j]))
                if k is not None:
                    products[(i, j)] = k
        identity_index = image_to_label[q.identity]
        self.mulset = PartialMulSet(self.reps, products, identity_index)
        gen_labels = []
        for i in range(1, oracle.rank + 1):
            gen_labels.append(
                image_to_label.get(oracle.image(Word.generator(oracle.rank, i)))
            )
        self.gen_labels = tuple(gen_labels)

    @property
    def rank(self) -> int:
        return self.oracle.rank

    def label_of(self, w: Word) -> Optional[int]:
        """Label of the coset of w, or None if that coset misses the ball."""
        return self._image_to_label.get(self.oracle.image(w))

    def __repr__(self) -> str:
        return f"CosetSystem(radius={self.radius}, {len(self.reps)} cosets)"


def exact_coset_ahom(system: CosetSystem, gi: GenImages) -> AlmostHom:
    """The almost-homomorphism sending each coset representative to its image
    under the given homomorphism into a metric target."""
    mapping = tuple(evaluate(rep, gi) for rep in system.reps)
    return AlmostHom(system.mulset, gi.group, mapping)


def separating_to_ahom(gi: GenImages, oracle: NOracle, radius: int,
                       eps: Value, alpha: Value) -> tuple[AlmostHom, CosetSystem]:
    """From a homomorphism that (3r, eps, alpha)-separates N, build the
    almost-homomorphism on the cosets meeting the radius-r ball.

    Works because a product of two representatives equals the third
    representative times an element of N of length at most 3r.
    """
    verdict = check_separation(gi, oracle, 3 * radius, eps, alpha)
    if not verdict.passed:
        w, d, side = verdict.violations[0]
        raise SeparationPreconditionError(
            f"homomorphism does not ({3 * radius},{format_value(eps)},"
            f"{format_value(alpha)})-separate N:"
            f" word {w.to_text()} ({side}) at distance {format_value(d)}",
            word=w,
        )
    system = CosetSystem(oracle, radius)
    return exact_coset_ahom(system, gi), system


@dataclass
class SeparationClaim:
    """Certified thresholds: ball words inside N land within eps_bound of the
    identity, the rest at least delta_bound away (closed bounds, so that any
    strict check with eps > eps_bound and delta < delta_bound passes)."""

    r: int
    eps_bound: Value
    delta_bound: Optional[Value]
    verified: bool
    violations: list[tuple[Word, Value, str]]

    def format(self) -> str:
        delta_text = "n/a" if self.delta_bound is None else format_value(self.delta_bound)
        lines = [
            f"separation claim at r={self.r}:"
            f" eps_bound={format_value(self.eps_bound)}, delta_bound={delta_text},"
            f" re-verification {'pass' if self.verified else 'FAIL'}"
        ]
        for w, d, side in self.violations:
            lines.append(f"  violation: {w.to_text()} ({side}) at {format_value(d)}")
        return "\n".join(lines)


def ahom_to_separating(ah: AlmostHom, system: CosetSystem,
                       oracle: NOracle) -> tuple[GenImages, SeparationClaim]:
    """Extract the homomorphism sending x_i to the image of the coset of x_i,
    and certify that it (r, 2r*defect, margin - 2r*defect)-separates N.

    The certification rests on the word-error bound
    d(extracted(w), phi([w])) <= (2|w| - 1) * defect, and is re-verified by
    direct evaluation over the radius-r ball.
    """
    r = system.radius
    eps_hat = defect(ah)
    try:
        alpha_hat: Optional[Value] = margin(ah)
    except UndefinedMarginError:
        alpha_hat = None
    eps_bound = 2 * r * eps_hat
    delta_bound: Optional[Value] = None
    if alpha_hat is not None:
        if not alpha_hat > eps_bound:
            raise SeparationGapError(
                f"margin {format_value(alpha_hat)} does not exceed"
                f" 2r*defect = {format_value(eps_bound)}; no separation gap"
            )
        delta_bound = alpha_hat - eps_bound
    target = ah.target
    images = [
        ah.mapping[lbl] if lbl is not None else target.identity
        for lbl in system.gen_labels
    ]
    extracted = GenImages(target, images)
    violations = []
    for w in ball(system.rank, r):
        d = target.norm(evaluate(w, extracted))
        if oracle.contains(w):
            if not value_leq(d, eps_bound):
                violations.append((w, d, "in N"))
        else:
            if delta_bound is None or not value_leq(delta_bound, d):
                violations.append((w, d, "outside N"))
    claim = SeparationClaim(r, eps_bound, delta_bound, not violations, violations)
    return extracted, claim


@dataclass
class WordErrorBound:
    word: Word
    distance: Value
    bound: Value
    ok: bool


def word_error_report(ah: AlmostHom, system: CosetSystem,
                      words: Optional[Sequence[Word]] = None) -> list[WordErrorBound]:
    """Check d(extracted(w), phi([w])) <= (2|w| - 1) * defect for every word
    whose coset carries a label (the inductive error-accumulation bound)."""
    target = ah.target
    eps_hat = defect(ah)
    images = [
        ah.mapping[lbl] if lbl is not None else target.identity
        for lbl in system.gen_labels
    ]
    extracted = GenImages(target, images)
    if words is None:
        words = ball(system.rank, system.radius)
    out = []
    for w in words:
        lbl = system.label_of(w)
        if lbl is None:
            continue
        d = target.dist(evaluate(w, extracted), ah.mapping[lbl])
        bound = max(2 * len(w) - 1, 0) * eps_hat
        out.append(WordErrorBound(w, d, bound, value_leq(d, bound)))
    return out
