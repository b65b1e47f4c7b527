"""Affine Nijenhuis operators on block matrices and the Lie brackets they induce.

    python3 demos/affine_brackets.py [size] [trials]
"""
import sys
from fractions import Fraction

from trusses.affine import bracket_suite, verify_affine_suite

n = int(sys.argv[1]) if len(sys.argv) > 1 else 2
trials = int(sys.argv[2]) if len(sys.argv) > 2 else 16

for c in verify_affine_suite(n, Fraction(2), Fraction(-1, 2), trials, seed=0):
    print(f"{'ok  ' if c.passed else 'FAIL'} {c.name}")
for c in bracket_suite(n, trials, seed=0):
    print(f"{'ok  ' if c.passed else 'FAIL'} bracket {c.name}")
