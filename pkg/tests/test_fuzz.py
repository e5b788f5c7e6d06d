import random
import re

import pytest

from datesafe import lang as L
from datesafe.fuzz import FuzzConfig, covers, random_program
from datesafe.interp import run_double


@pytest.mark.parametrize("seed", range(300))
def test_generator_bounds(seed):
    src = random_program(random.Random(seed))
    prog = L.parse(src)
    decls = [s for s in prog if isinstance(s, L.DateDecl)]
    assert 2 <= len(decls) <= 6
    periods = re.findall(r"\[(-?\d+) years, (-?\d+) months, (-?\d+) days\]", src)
    assert len(periods) <= 3
    assert all(d == "0" for _, _, d in periods)
    asserts = [s for s in prog if isinstance(s, L.Assert)]
    assert 1 <= len(asserts) <= 2 and all(isinstance(a.cond, L.Sync) for a in asserts)


def test_generator_is_deterministic():
    assert random_program(random.Random(4)) == random_program(random.Random(4))


def test_config_limits():
    cfg = FuzzConfig(max_vars=3, max_additions=1)
    for seed in range(100):
        src = random_program(random.Random(seed), cfg)
        assert src.count("date ") <= 3 and src.count(" years,") <= 1


def test_covers_rejects_foreign_environment():
    from datesafe.bidates import BiState

    prog = L.parse("date a = 2023-05-05;\nassert(sync(a == a));\n")
    bi = BiState()
    bi.assign_date("a", prog.stmts[0].expr)
    run = run_double(prog, 0)
    assert covers(bi.partitions, run)
    run.env_up["a"] = run.env_down["a"] = L.Date(2023, 5, 6)
    assert not covers(bi.partitions, run)
