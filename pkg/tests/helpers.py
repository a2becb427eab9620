"""Shared brute-force oracles and generators for the test suite.

Everything here is deliberately independent of the library code paths it
checks: plain dict/set computations, no reuse of the optimized routines.
"""

import random

from conjlab.almosthom import AlmostHom, CosetSystem, exact_coset_ahom
from conjlab.groups import Perm, perm_group
from conjlab.metrics import HammingTarget
from conjlab.separability import NOracle
from conjlab.words import GenImages


def compose_right_action(f_images, g_images):
    """Independent right-action composition: apply f, then g."""
    return tuple(g_images[x] for x in f_images)


def brute_conjugacy_classes(group):
    """Conjugate every element by every element; returns frozensets."""
    classes = []
    assigned = set()
    for g in group.elements():
        if g in assigned:
            continue
        orbit = {group.mul(group.mul(group.inv(h), g), h) for h in group.elements()}
        assigned |= orbit
        classes.append(frozenset(orbit))
    return classes


def brute_class_product_classes(group, partition, a_cid, b_cid):
    """Full double loop over both classes, classifying every product."""
    return frozenset(
        partition.class_of[group.mul(a, b)]
        for a in partition.members[a_cid]
        for b in partition.members[b_cid]
    )


def s3_oracle():
    """The quotient model F2 -> S3, x -> (1 2), y -> (1 2 3)."""
    gens = [Perm.from_cycles(3, [(1, 2)]), Perm.from_cycles(3, [(1, 2, 3)])]
    quotient = perm_group(3, gens, label="S3-model")
    return NOracle(
        GenImages(quotient, [quotient.index_of_perm(p) for p in gens])
    ), gens


def s4_oracle():
    """The quotient model F2 -> S4, x -> (1 2), y -> (1 2 3 4)."""
    gens = [Perm.from_cycles(4, [(1, 2)]), Perm.from_cycles(4, [(1, 2, 3, 4)])]
    quotient = perm_group(4, gens, label="S4-model")
    return NOracle(
        GenImages(quotient, [quotient.index_of_perm(p) for p in gens])
    ), gens


def corrupted_coset_ahom(seed, radius=3, n_corrupt=1):
    """A coset almost-homomorphism into S4 with Hamming, with some
    non-identity coset images replaced by seeded random permutations."""
    oracle, gens = s4_oracle()
    system = CosetSystem(oracle, radius)
    target = HammingTarget(4)
    ah = exact_coset_ahom(system, GenImages(target, gens))
    rng = random.Random(seed)
    mapping = list(ah.mapping)
    candidates = [i for i in range(len(system.reps)) if i != system.mulset.identity_index]
    for _ in range(n_corrupt):
        i = rng.choice(candidates)
        images = list(range(4))
        rng.shuffle(images)
        mapping[i] = Perm(images)
    return AlmostHom(system.mulset, target, mapping), system, oracle
