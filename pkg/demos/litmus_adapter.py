"""Classifying a date implementation with the litmus cases.

The adapter below does not use datesafe. It normalizes overflowing days
the way C's mktime does; the classifier recognizes that policy.

Run: python3 demos/litmus_adapter.py
"""

import sys
import tempfile
from pathlib import Path

from datesafe import litmus

ADAPTER = """\
import datetime, json, sys
for case in json.load(sys.stdin):
    y, m, d = map(int, case["start"].split("-"))
    p = case["period"]
    k = m - 1 + p["months"] + 12 * p["years"]
    first = datetime.date(y + k // 12, k % 12 + 1, 1)
    result = first + datetime.timedelta(days=d - 1 + p["days"])
    print(json.dumps({"id": case["id"], "result": result.isoformat()}))
"""

with tempfile.TemporaryDirectory() as tmp:
    script = Path(tmp) / "adapter.py"
    script.write_text(ADAPTER)
    results = litmus.run_adapter([sys.executable, str(script)])

print("mktime-style adapter:", litmus.classify(results))
for mode in litmus.MODES:
    print(f"date-core {mode.value}:", litmus.classify(litmus.results_for_mode(mode)))
print()
print(litmus.table_csv().splitlines()[0])
for line in litmus.table_csv().splitlines()[1:5]:
    print(line)
