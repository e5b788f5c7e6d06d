"""Static analysis of the birthday program, then a concrete counter-example.

The program computes the first day of the month two years after a birthday
and compares today's date with it. A birthday on Feb 29 makes the result
depend on the rounding mode.

Run: python3 demos/analyze_birthday.py
"""

from pathlib import Path

from datesafe import lang as L
from datesafe.analyzer import analyze, render_report
from datesafe.interp import run_double
from datesafe.programs import listing_path

rep = analyze(listing_path("listing1"))
print(render_report(rep))

# With birthdays restricted to the 28th or earlier, the assertion is proven.
print(render_report(analyze(listing_path("listing1_constrained"))))

# Turn the hints on program variables into assumptions and sample.
hint_assumes = [
    "assume(month_of(birthday) == 2 && day_of(birthday) == 29);",
    "assume(month_of(current) == 2);",
]
lines = Path(listing_path("listing1")).read_text().splitlines()
prog = L.parse("\n".join(lines[:-1] + hint_assumes + lines[-1:]) + "\n")
for seed in range(5000):
    run = run_double(prog, seed)
    if run.feasible and not run.ok:
        print(f"seed {seed}: birthday {run.env_up['birthday']}, current {run.env_up['current']}")
        print(f"  limit is {run.env_up['limit']} rounding up, {run.env_down['limit']} rounding down")
        break
