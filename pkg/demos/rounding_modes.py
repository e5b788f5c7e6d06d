"""Adding a period to a date, under each rounding mode.

Run: python3 demos/rounding_modes.py
"""

from datesafe.core import Date, Period, RoundingMode, add_period, is_ambiguous, render

starts = [Date(2004, 2, 29), Date(2023, 1, 31), Date(2023, 3, 31), Date(2023, 6, 15)]
periods = [Period(2, 0, 0), Period(0, 1, 0), Period(1, 1, 0)]

print(f"{'start':<12}{'period':<30}{'down':<12}{'up':<12}{'abort':<12}ambiguous")
for t in starts:
    for p in periods:
        row = [render(add_period(r, t, p)) for r in (RoundingMode.DOWN, RoundingMode.UP, RoundingMode.ABORT)]
        print(f"{render(t):<12}{str(p):<30}{row[0]:<12}{row[1]:<12}{row[2]:<12}{is_ambiguous(t, p)}")

# Rounding happens once, after years and months: Feb 29 + 1y1m never visits Feb 29 2021.
print()
print("2020-02-29 + 1y1m (up):", render(add_period(RoundingMode.UP, Date(2020, 2, 29), Period(1, 1, 0))))
