"""Export the closed-form moment surface as CSV.

Writes expectation and variance values of the four closed-form indices on a
(n, p1) grid, the same table `pentachain report --expect-only` emits.  Pass
a path to write a file, otherwise the CSV goes to stdout.
"""

import sys
from fractions import Fraction

from pentachain import expectation_grid_csv

text = expectation_grid_csv(
    range(1, 21), [Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)]
)
if len(sys.argv) > 1:
    with open(sys.argv[1], "w", encoding="utf-8") as handle:
        handle.write(text)
    print(f"wrote {text.count(chr(10)) - 1} rows to {sys.argv[1]}")
else:
    print(text, end="")
