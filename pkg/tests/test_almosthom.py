import random
from fractions import Fraction

import pytest

from conjlab.almosthom import (
    AlmostHom,
    CosetSystem,
    PartialMulSet,
    ahom_to_separating,
    amplify,
    defect,
    exact_coset_ahom,
    is_ahom,
    iterate_amplify,
    margin,
    separating_to_ahom,
    word_error_report,
)
from conjlab.errors import (
    SeparationGapError,
    SeparationPreconditionError,
    UndefinedMarginError,
)
from conjlab.groups import Perm, square_embed, symmetric_group
from conjlab.metrics import FiniteNormTarget, HammingTarget, hamming_norm, hamming_norm_on
from conjlab.separability import check_separation
from conjlab.words import GenImages, Word, ball, evaluate, parse_word

from helpers import corrupted_coset_ahom, s3_oracle


def cyc(n, *cycles):
    return Perm.from_cycles(n, list(cycles))


def identity_embedding(n):
    """The identity map of S_n as an almost-homomorphism on the full table."""
    group = symmetric_group(n)
    target = FiniteNormTarget(group, hamming_norm_on(group))
    domain = PartialMulSet.from_group(group)
    return AlmostHom(domain, target, tuple(group.elements())), group, target


def corrupted_s3_identity():
    """Identity map of S3 with the image of (1 2) redirected to (1 3)."""
    ah, group, target = identity_embedding(3)
    mapping = list(ah.mapping)
    mapping[group.index_of_perm(cyc(3, (1, 2)))] = group.index_of_perm(cyc(3, (1, 3)))
    return AlmostHom(ah.domain, target, mapping), group, target


class TestPartialMulSet:
    def test_from_group_is_total(self):
        s3 = symmetric_group(3)
        dom = PartialMulSet.from_group(s3)
        assert len(dom) == 6
        assert len(dom.products) == 36
        assert dom.identity_index == 0

    def test_identity_consistency_enforced(self):
        with pytest.raises(ValueError):
            PartialMulSet(["e", "a"], {(0, 1): 0}, identity_index=0)

    def test_distinct_labels_required(self):
        with pytest.raises(ValueError):
            PartialMulSet(["a", "a"], {})

    def test_identity_image_enforced(self):
        s3 = symmetric_group(3)
        dom = PartialMulSet.from_group(s3)
        target = FiniteNormTarget(s3, hamming_norm_on(s3))
        with pytest.raises(ValueError):
            AlmostHom(dom, target, [1] * 6)


class TestDefect:
    def test_true_homomorphism_has_zero_defect(self):
        ah, _, _ = identity_embedding(3)
        assert defect(ah) == 0

    def test_empty_products_give_zero(self):
        s3 = symmetric_group(3)
        target = FiniteNormTarget(s3, hamming_norm_on(s3))
        dom = PartialMulSet(["a", "b"], {})
        ah = AlmostHom(dom, target, [1, 2])
        assert defect(ah) == 0

    def test_corrupted_identity_map_defect_is_one(self):
        ah, group, target = corrupted_s3_identity()
        # independent scan of all 36 triples
        worst = Fraction(0)
        for i in group.elements():
            for j in group.elements():
                k = group.mul(i, j)
                d = target.dist(target.mul(ah.mapping[i], ah.mapping[j]), ah.mapping[k])
                worst = max(worst, d)
        assert worst == 1
        assert defect(ah) == 1


class TestMargin:
    def test_identity_embedding_s3(self):
        ah, _, _ = identity_embedding(3)
        assert margin(ah) == Fraction(2, 3)

    def test_identity_embedding_s5(self):
        ah, _, _ = identity_embedding(5)
        assert margin(ah) == Fraction(2, 5)

    def test_collapsed_label_gives_zero(self):
        s3 = symmetric_group(3)
        target = FiniteNormTarget(s3, hamming_norm_on(s3))
        dom = PartialMulSet(["e", "a"], {}, identity_index=0)
        ah = AlmostHom(dom, target, [0, 0])
        assert margin(ah) == 0

    def test_undefined_margin(self):
        s3 = symmetric_group(3)
        target = FiniteNormTarget(s3, hamming_norm_on(s3))
        dom = PartialMulSet(["e"], {}, identity_index=0)
        ah = AlmostHom(dom, target, [0])
        with pytest.raises(UndefinedMarginError):
            margin(ah)


class TestIsAhom:
    def test_true_homomorphism_passes(self):
        ah, _, _ = identity_embedding(3)
        ok, report = is_ahom(ah, Fraction(1, 100), Fraction(1, 2))
        assert ok
        assert report.defect == 0
        assert report.margin == Fraction(2, 3)

    def test_hamming_margin_fails_strict_sofic_thresholds(self):
        # margin 2/5 cannot beat alpha = 1 - eps = 0.7
        ah, _, _ = identity_embedding(5)
        ok, report = is_ahom(ah, Fraction(3, 10), Fraction(7, 10))
        assert not ok
        assert report.margin == Fraction(2, 5)

    def test_corrupted_map_with_loose_thresholds(self):
        ah, _, _ = corrupted_s3_identity()
        ok, _ = is_ahom(ah, Fraction(3, 2), Fraction(1, 2))
        assert ok
        ok, _ = is_ahom(ah, Fraction(1, 2), Fraction(1, 2))
        assert not ok

    def test_report_text(self):
        ah, _, _ = identity_embedding(3)
        _, report = is_ahom(ah, Fraction(1, 10), Fraction(1, 2))
        text = report.format()
        assert "|Phi| = 6" in text
        assert "measured margin" in text

    def test_thresholds_must_be_positive(self):
        ah, _, _ = identity_embedding(3)
        with pytest.raises(ValueError):
            is_ahom(ah, 0, Fraction(1, 2))


def hamming_coset_ahom(radius):
    oracle, gens = s3_oracle()
    system = CosetSystem(oracle, radius)
    target = HammingTarget(3)
    return exact_coset_ahom(system, GenImages(target, gens)), system, oracle


class TestAmplify:
    def test_exact_homomorphism_stays_exact(self):
        ah, _, _ = hamming_coset_ahom(2)
        assert defect(ah) == 0
        amplified = amplify(ah)
        assert defect(amplified) == 0
        assert amplified.target.degree == 9

    def test_margin_one_half_becomes_three_quarters(self):
        target = HammingTarget(4)
        dom = PartialMulSet(["e", "a"], {}, identity_index=0)
        ah = AlmostHom(dom, target, [Perm.identity(4), cyc(4, (1, 2))])
        assert margin(ah) == Fraction(1, 2)
        assert margin(amplify(ah)) == Fraction(3, 4)

    def test_rejects_non_hamming_targets(self):
        ah, _, _ = identity_embedding(3)
        with pytest.raises(ValueError):
            amplify(ah)

    def test_complement_square_identity_on_seeded_pairs(self):
        rng = random.Random(2024)
        t6, t36 = HammingTarget(6), HammingTarget(36)
        for _ in range(300):
            a = list(range(6)); rng.shuffle(a)
            b = list(range(6)); rng.shuffle(b)
            f, g = Perm(a), Perm(b)
            lhs = 1 - t36.dist(square_embed(f, f), square_embed(g, g))
            base = 1 - t6.dist(f, g)
            assert lhs == base * base

    def test_amplified_defect_and_margin_bounds_on_corrupted_maps(self):
        for seed in range(50):
            ah, _, _ = corrupted_coset_ahom(seed, radius=2, n_corrupt=1)
            eps_hat = defect(ah)
            alpha_hat = margin(ah)
            amplified = amplify(ah)
            assert defect(amplified) <= 2 * eps_hat - eps_hat * eps_hat
            assert margin(amplified) >= 2 * alpha_hat - alpha_hat * alpha_hat


class TestIterateAmplify:
    def test_half_margin_reaches_0_9_in_two_steps(self):
        target = HammingTarget(4)
        dom = PartialMulSet(["e", "a"], {}, identity_index=0)
        ah = AlmostHom(dom, target, [Perm.identity(4), cyc(4, (1, 2))])
        run = iterate_amplify(ah, Fraction(9, 10), cap_degree=4 ** 4)
        assert run.t_required == 2
        assert run.t_applied == 2
        assert run.reached_target
        assert [s.margin for s in run.steps] == [
            Fraction(1, 2), Fraction(3, 4), Fraction(15, 16)
        ]

    def test_target_below_current_margin_is_a_no_op(self):
        ah, _, _ = hamming_coset_ahom(1)
        run = iterate_amplify(ah, Fraction(1, 2))
        assert run.t_required == 0
        assert run.t_applied == 0
        assert run.result is ah

    def test_exact_input_keeps_zero_defect(self):
        ah, _, _ = hamming_coset_ahom(1)
        run = iterate_amplify(ah, Fraction(95, 100), cap_degree=3 ** 8)
        assert all(s.defect == 0 for s in run.steps)
        assert run.reached_target

    def test_degree_cap_gives_partial_result(self):
        ah, _, _ = hamming_coset_ahom(1)
        run = iterate_amplify(ah, Fraction(9999, 10000), cap_degree=81)
        assert not run.reached_target
        assert run.result.target.degree <= 81
        assert run.t_applied < run.t_required

    def test_margin_must_exceed_defect(self):
        target = HammingTarget(4)
        dom = PartialMulSet(["e", "a", "b"], {(1, 1): 2}, identity_index=0)
        # phi(a)^2 = e but phi(b) = (1 2)(3 4): defect 1/2... margin 1/2 too
        ah = AlmostHom(
            dom, target,
            [Perm.identity(4), cyc(4, (1, 2)), cyc(4, (1, 2), (3, 4))],
        )
        # defect: d(phi(a)phi(a), phi(b)) = d(e, (1 2)(3 4)) = 1
        with pytest.raises(SeparationGapError):
            iterate_amplify(ah, Fraction(9, 10))


class TestCosetSystem:
    def test_radius_one_cosets(self):
        oracle, _ = s3_oracle()
        system = CosetSystem(oracle, 1)
        # x and x^-1 share a coset, y and y^-1 do not
        assert [w.to_text() for w in system.reps] == ["e", "x", "y", "Y"]
        assert system.mulset.identity_index == 0
        assert system.gen_labels == (1, 2)

    def test_radius_two_covers_all_six_cosets(self):
        oracle, _ = s3_oracle()
        system = CosetSystem(oracle, 2)
        assert len(system.reps) == 6

    def test_reps_are_first_in_ball_order(self):
        oracle, _ = s3_oracle()
        system = CosetSystem(oracle, 3)
        words = ball(2, 3)
        for rep in system.reps:
            first = next(w for w in words if oracle.same_coset(w, rep))
            assert first == rep

    def test_radius_zero(self):
        oracle, _ = s3_oracle()
        system = CosetSystem(oracle, 0)
        assert len(system.reps) == 1
        assert system.gen_labels == (None, None)

    def test_label_of(self):
        oracle, _ = s3_oracle()
        system = CosetSystem(oracle, 1)
        assert system.label_of(parse_word("X", 2)) == 1
        assert system.label_of(parse_word("xyxy", 2)) in range(4) or \
            system.label_of(parse_word("xyxy", 2)) is None


class TestSeparatingToAhom:
    def test_exact_quotient_round_trip_values(self):
        oracle, gens = s3_oracle()
        quotient = oracle.quotient
        target = FiniteNormTarget(quotient, hamming_norm_on(quotient))
        gi = GenImages(target, oracle.model.images)
        ah, system = separating_to_ahom(gi, oracle, 2, Fraction(1, 10), Fraction(1, 2))
        assert defect(ah) == 0
        assert margin(ah) == Fraction(2, 3)
        assert len(system.reps) == 6

    def test_radius_one_defect_zero(self):
        oracle, _ = s3_oracle()
        quotient = oracle.quotient
        target = FiniteNormTarget(quotient, hamming_norm_on(quotient))
        gi = GenImages(target, oracle.model.images)
        ah, system = separating_to_ahom(gi, oracle, 1, Fraction(1, 10), Fraction(1, 2))
        assert len(system.reps) == 4
        assert defect(ah) == 0

    def test_trivial_quotient_single_label(self):
        from conjlab.groups import perm_group
        from conjlab.separability import NOracle

        quotient = perm_group(1, [Perm.identity(1)], label="Z1-model")
        oracle_triv = NOracle(GenImages(quotient, [0, 0]))
        target = FiniteNormTarget(quotient, hamming_norm_on(quotient))
        gi = GenImages(target, [0, 0])
        ah, system = separating_to_ahom(gi, oracle_triv, 1, Fraction(1, 10), Fraction(1, 2))
        assert len(system.reps) == 1
        ok, _ = is_ahom(ah, Fraction(1, 10), Fraction(1, 2))
        assert ok

    def test_precondition_failure_reports_word(self):
        oracle, _ = s3_oracle()
        quotient = oracle.quotient
        target = FiniteNormTarget(quotient, hamming_norm_on(quotient))
        # collapse x: no longer separates (x is outside N but lands at e)
        gi = GenImages(target, [0, oracle.model.images[1]])
        with pytest.raises(SeparationPreconditionError) as exc:
            separating_to_ahom(gi, oracle, 1, Fraction(1, 10), Fraction(1, 2))
        assert exc.value.word is not None


class TestAhomToSeparating:
    def test_round_trip_reproduces_homomorphism(self):
        oracle, gens = s3_oracle()
        quotient = oracle.quotient
        target = FiniteNormTarget(quotient, hamming_norm_on(quotient))
        gi = GenImages(target, oracle.model.images)
        ah, system = separating_to_ahom(gi, oracle, 2, Fraction(1, 10), Fraction(1, 2))
        extracted, claim = ahom_to_separating(ah, system, oracle)
        assert claim.verified
        assert claim.eps_bound == 0
        assert claim.delta_bound == Fraction(2, 3)
        for w in ball(2, 2):
            assert evaluate(w, extracted) == evaluate(w, gi)

    def test_extracted_hom_passes_separation_check(self):
        oracle, _ = s3_oracle()
        quotient = oracle.quotient
        target = FiniteNormTarget(quotient, hamming_norm_on(quotient))
        gi = GenImages(target, oracle.model.images)
        ah, system = separating_to_ahom(gi, oracle, 2, Fraction(1, 10), Fraction(1, 2))
        extracted, _ = ahom_to_separating(ah, system, oracle)
        verdict = check_separation(extracted, oracle, 2, Fraction(1, 10), Fraction(1, 2))
        assert verdict.passed
        assert verdict.words_checked == 17

    def test_gap_error_when_margin_collapses(self):
        ah, system, oracle = corrupted_coset_ahom(seed=3, radius=2, n_corrupt=30)
        # heavy corruption at radius 2: 2*r*defect reaches past the margin
        if margin(ah) > 4 * defect(ah):
            pytest.skip("corruption too mild for this seed")
        with pytest.raises(SeparationGapError):
            ahom_to_separating(ah, system, oracle)

    def test_radius_zero_vacuous_claim(self):
        oracle, _ = s3_oracle()
        system = CosetSystem(oracle, 0)
        target = HammingTarget(3)
        ah = exact_coset_ahom(
            system, GenImages(target, [cyc(3, (1, 2)), cyc(3, (1, 2, 3))])
        )
        extracted, claim = ahom_to_separating(ah, system, oracle)
        assert claim.verified
        assert claim.delta_bound is None


class TestWordErrorBound:
    def test_exact_map_has_zero_errors(self):
        ah, system, _ = corrupted_coset_ahom(seed=0, radius=3, n_corrupt=0)
        report = word_error_report(ah, system)
        assert all(entry.distance == 0 for entry in report)

    def test_bound_holds_for_50_corrupted_maps(self):
        for seed in range(50):
            ah, system, _ = corrupted_coset_ahom(seed, radius=3, n_corrupt=1)
            report = word_error_report(ah, system)
            assert report, "ball words must be covered"
            for entry in report:
                assert entry.ok, (seed, entry.word.to_text())

    def test_bound_degrades_linearly_in_word_length(self):
        ah, system, _ = corrupted_coset_ahom(seed=9, radius=3, n_corrupt=2)
        eps_hat = defect(ah)
        for entry in word_error_report(ah, system):
            assert entry.bound == max(2 * len(entry.word) - 1, 0) * eps_hat
