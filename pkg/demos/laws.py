"""Algebraic laws that hold, and two that do not.

Run: python3 demos/laws.py
"""

from datesafe.core import RoundingMode
from datesafe.laws import (
    all_dates,
    check_down_le_up,
    check_monotonicity,
    find_nonassociativity,
    find_noncommutativity,
    loose_monotonicity_witnesses,
)

dates = all_dates([2023, 2024])
months = range(-13, 14)

print("monotonicity violations:", len(check_monotonicity(dates, months)))
print("down <= up violations:  ", len(check_down_le_up(dates, months)))

# Monotonicity is only loose: two different days can land on the same result.
mode, d1, d2, n, v = next(loose_monotonicity_witnesses(dates, [1], modes=(RoundingMode.DOWN,)))
print(f"{d1} and {d2} both become {v} after +{n} month ({mode.value})")

for mode in (RoundingMode.DOWN, RoundingMode.UP):
    w = find_noncommutativity(mode, dates)
    print(f"{mode.value}: {w.date} + {w.p1} then + {w.p2} = {w.left}, other order = {w.right}")
    w = find_nonassociativity(mode, dates)
    print(f"{mode.value}: ({w.date} + {w.p1}) + {w.p2} = {w.left}, at once = {w.right}")
