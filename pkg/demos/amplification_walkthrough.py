#!/usr/bin/env python3
"""Squaring a map into S_n through S_n x S_n -> S_{n^2} drives its margin
toward 1 at the cost of squaring the degree: the complement of the
normalized Hamming distance multiplies, so distance d becomes 2d - d^2.

This demo measures that on the coset map of ker(F2 -> S3) and on a
deliberately corrupted map.
"""

from fractions import Fraction

from conjlab.almosthom import (
    CosetSystem,
    defect,
    exact_coset_ahom,
    is_ahom,
    iterate_amplify,
    margin,
)
from conjlab.groups import Perm, perm_group
from conjlab.metrics import HammingTarget, format_value
from conjlab.separability import NOracle
from conjlab.words import GenImages

gens = [Perm.from_cycles(3, [(1, 2)]), Perm.from_cycles(3, [(1, 2, 3)])]
quotient = perm_group(3, gens, label="S3-model")
oracle = NOracle(GenImages(quotient, [quotient.index_of_perm(p) for p in gens]))

system = CosetSystem(oracle, 2)
print(f"Cosets of N = ker(F2 -> S3) meeting the radius-2 ball: {len(system.reps)}")
print("  representatives:", ", ".join(w.to_text() for w in system.reps))

ah = exact_coset_ahom(system, GenImages(HammingTarget(3), gens))
print(f"\nExact quotient map: defect {format_value(defect(ah))},"
      f" margin {format_value(margin(ah))}")

run = iterate_amplify(ah, Fraction(99, 100), cap_degree=3 ** 8)
print("\nDriving the margin past 0.99 by repeated squaring:")
print(run.format())

ok, report = is_ahom(run.result, Fraction(1, 100), Fraction(9, 10))
print("\nThreshold check on the amplified map:")
print(report.format())

print("\nThe same trajectory with one corrupted coset image"
      " (x-coset sent to a random transposition):")
mapping = list(ah.mapping)
mapping[1] = Perm.from_cycles(3, [(2, 3)])
from conjlab.almosthom import AlmostHom

corrupted = AlmostHom(system.mulset, HammingTarget(3), mapping)
d0, m0 = defect(corrupted), margin(corrupted)
print(f"  measured defect {format_value(d0)}, margin {format_value(m0)}")
run2 = iterate_amplify(corrupted, Fraction(9, 10), cap_degree=3 ** 8)
print(run2.format())
print("  (the defect obeys d -> 2d - d^2 as well, so the gap margin - defect"
      " must be positive to begin with)")
