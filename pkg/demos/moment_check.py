"""Verify the closed-form moments against exact enumeration.

Prints the verification table for n = 1..6 at p1 = 1/2: reference and
verified expectation polynomials, the shared variance polynomial, the
enumeration oracle, and the discrepancy registry entries explaining why the
two resistance-index reference forms miss the oracle.
"""

from fractions import Fraction

from pentachain import report_text, verification_table

reports = verification_table(6, Fraction(1, 2))
print(report_text(reports), end="")
