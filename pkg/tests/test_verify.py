import pytest

from oligocat.verify import SUITE_NAMES, run_suites, sym_end_oracle


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suites("no-such-suite")


def test_single_suites_pass():
    for name in ("order-counts", "glq-identities", "rado-demo"):
        rows = run_suites(name)
        assert rows and all(c.ok for c in rows), [r for r in rows if not r.ok]


def test_thread_sharding_deterministic():
    a = [c.as_dict() for c in run_suites("all", threads=1)]
    b = [c.as_dict() for c in run_suites("all", threads=4)]
    assert a == b
    assert all(c["ok"] for c in a)


def test_oracle_shapes():
    alg, mats = sym_end_oracle(1, 4)
    assert alg.dim == 2 and len(mats) == 2
    assert mats[0].shape == (4, 4)
    # the basis matrices partition the all-ones matrix
    assert (sum(mats)).min() == 1 and (sum(mats)).max() == 1


def test_suite_names_cover_everything():
    rows = run_suites("all")
    assert {c.suite for c in rows} == set(SUITE_NAMES)
