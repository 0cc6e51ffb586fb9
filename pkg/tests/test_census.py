import json

import pytest

from frobcensus.census import (
    CensusReport,
    FrobeniusRecord,
    dumps_csv,
    dumps_jsonl,
    field_census,
    frobenius_record,
    load_jsonl,
    max_pi_K,
    pi_F,
    pi_K,
    pigeonhole_bound,
    resolve_threads,
    run_census,
    summary,
    write_report,
)
from frobcensus.curves import LMFDB_3680_A
from frobcensus.errors import CapacityError, InvalidInputError
from frobcensus.frobenius import ReductionClass, psi_bound
from frobcensus.numth import is_perfect_square, primes_up_to, squarefree_part


def test_first_ordinary_simple_records():
    r13 = frobenius_record(LMFDB_3680_A, 13)
    assert (r13.cls, r13.t1, r13.a2, r13.delta, r13.d0, r13.gamma) == (
        ReductionClass.ORDINARY_SIMPLE, 1, 12, 57, 57, 1392)
    r17 = frobenius_record(LMFDB_3680_A, 17)
    assert (r17.t1, r17.a2, r17.d0, r17.gamma, r17.sf_gamma) == (0, -18, 13, 256, 1)
    assert frobenius_record(LMFDB_3680_A, 23).cls is ReductionClass.BAD


def test_partition(census_2000):
    c = census_2000.counts
    assert c["primes"] == len(primes_up_to(2000))
    assert c["bad"] == 3
    assert c["good"] == c["nonordinary"] + c["notsimple"] + c["ordinarysimple"]


def test_record_invariants(census_2000):
    for r in census_2000.ordinary_simple:
        assert 0 < r.delta <= 48 * r.p
        assert is_perfect_square(r.delta * r.d0)
        assert r.gamma > 0 and r.gamma <= psi_bound(2, r.p)
        sf, m = squarefree_part(r.gamma)
        assert sf == r.sf_gamma and sf * m * m == r.gamma
        assert r.cm_key.r.norm() == r.gamma


@pytest.mark.slow
def test_10k_headline(census_10k):
    c = census_10k.counts
    assert (c["primes"], c["bad"], c["nonordinary"], c["notsimple"], c["ordinarysimple"]) == (1229, 3, 5, 63, 1158)
    assert max_pi_K(census_10k) == 1
    s = summary(census_10k)
    assert (s["max_pi_F"], s["num_D0"], s["num_D"]) == (17, 788, 1158)
    assert census_10k.ordinary_density() > 0.99


def test_pi_relations(census_2000):
    rep = census_2000
    for d0, n in list(rep.d0_multiplicities.items())[:40]:
        assert pi_F(rep, d0) == n
        # each CM field over Q(sqrt d0) is counted inside pi_F
        keys = [k for k in rep.field_multiplicities if k.d0 == d0]
        assert sum(pi_K(rep, k) for k in keys) == n
    for k, n in rep.field_multiplicities.items():
        assert 1 <= pi_K(rep, k) == n <= pi_F(rep, k.d0)


def test_pi_F_rejects_nonsquarefree(census_2000):
    with pytest.raises(InvalidInputError):
        pi_F(census_2000, 12)


def test_field_census_and_pigeonhole(census_2000):
    fc = field_census(census_2000)
    assert len(fc.D) >= len(fc.D0)
    assert all(d <= 48 * census_2000.X for d in fc.D0)
    b = pigeonhole_bound(census_2000)
    assert b <= len(fc.D)
    assert b == census_2000.counts["ordinarysimple"] / max_pi_K(census_2000)


def test_jsonl_round_trip(census_2000):
    text = dumps_jsonl(census_2000)
    back = load_jsonl(text)
    assert back == census_2000.records
    assert CensusReport(LMFDB_3680_A, 2000, back).field_multiplicities == census_2000.field_multiplicities
    first = json.loads(text.splitlines()[0])
    assert set(first) == {"p", "class", "N1", "N2", "t1", "a2", "delta", "d0", "gamma", "sf_gamma", "r"}
    assert dumps_csv(census_2000).splitlines()[0] == "p,class,t1,a2,d0,sf_gamma"


def test_thread_determinism(tmp_path):
    one = run_census(LMFDB_3680_A, 2000, threads=1)
    four = run_census(LMFDB_3680_A, 2000, threads=4)
    a = write_report(one, tmp_path / "one")
    b = write_report(four, tmp_path / "four")
    for k in a:
        assert a[k].read_bytes() == b[k].read_bytes()


def test_tiny_census():
    rep = run_census(LMFDB_3680_A, 2)
    assert rep.counts["primes"] == 1 and rep.counts["bad"] == 1
    assert summary(rep)["pigeonhole_bound"] is None
    with pytest.raises(InvalidInputError):
        pigeonhole_bound(rep)


def test_input_errors():
    with pytest.raises(InvalidInputError):
        run_census(LMFDB_3680_A, 1)
    with pytest.raises(CapacityError):
        run_census(LMFDB_3680_A, 20001)


def test_threads_env(monkeypatch):
    assert resolve_threads(None) == 1
    assert resolve_threads(3) == 3
    monkeypatch.setenv("FROBCENSUS_THREADS", "5")
    assert resolve_threads(2) == 5
    monkeypatch.setenv("FROBCENSUS_THREADS", "x")
    with pytest.raises(InvalidInputError):
        resolve_threads()


def test_record_json_nulls():
    r = FrobeniusRecord(2, ReductionClass.BAD)
    assert FrobeniusRecord.from_json(r.to_json()) == r
