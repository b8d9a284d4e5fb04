import os
import tempfile

import pytest

import predjoin

EXAMPLES = os.environ.get("PREDJOIN_EXAMPLES", os.path.join(os.path.dirname(__file__), "..", "..", "examples_sql"))
TWO_HOP = (
    "SELECT P1.name, P2.name, P3.name FROM Person P1, Follows F1, Person P2, Follows F2, Person P3 "
    "WHERE P1.ID = F1.ID1 AND F1.ID2 = P2.ID AND P2.ID = F2.ID1 AND F2.ID2 = P3.ID AND P1.name = 'Karim'"
)


def load(name, **kwargs):
    with open(os.path.join(EXAMPLES, name)) as f:
        script = f.read()
    s = predjoin.Session(base_dir=EXAMPLES, **kwargs)
    return s, s.run_script(script)


def test_running_example():
    s, out = load("running_example.sql", zone_size=2)
    assert s.tables() == ["Person", "Follows"]
    assert s.rid_column("Follows", ["ID1"]) == [0, 2, 0, 1, 0]
    assert s.rid_column("Follows", ["ID2"]) == [1, 3, 2, 2, 3]
    result = out[-1]
    assert len(result["rows"]) == 1
    assert result["rows"][0][:2] == (202, "Karim")


@pytest.mark.parametrize("flags", [{}, {"jm": False}, {"jm": False, "rsj": False},
                                   {"jm": False, "rsj": False, "rid_mat": False}])
def test_ablations_agree(flags):
    s, _ = load("running_example_indexed.sql", **flags)
    assert s.query(TWO_HOP)["rows"] == [("Karim", "Carmen", "Zhang")]


def test_explain_and_merging():
    s, _ = load("running_example_indexed.sql")
    before, after = s.explain(TWO_HOP)
    assert "HashJoin" in before
    assert after.count("SJoinIdxM") == 2
    merged = s.query(TWO_HOP)["tuples_materialized"]
    plain, _ = load("running_example_indexed.sql", rid_mat=False, rsj=False, jm=False)
    assert merged < plain.query(TWO_HOP)["tuples_materialized"]


def test_errors_raise():
    s = predjoin.Session()
    with pytest.raises(predjoin.Error, match="SyntaxError"):
        s.run_script("SELEC 1")
    s.run_script("CREATE TABLE T (a INTEGER)")
    with pytest.raises(predjoin.Error, match="UnsupportedFeature"):
        s.query("SELECT * FROM T t WHERE t.a = 1 OR t.a = 2")
    with pytest.raises(predjoin.Error):
        predjoin.Session(rid_mat=False, rsj=True)


def test_generated_data_and_benchmarks():
    with tempfile.TemporaryDirectory() as d:
        predjoin.gen_data(d, n_person=60, avg_degree=3, seed=3)
        s = predjoin.Session(base_dir=d)
        with open(os.path.join(d, "load.sql")) as f:
            s.run_script(f.read())
        assert s.row_count("Person") == 60
    micro = predjoin.bench_micro("P", n_person=200, avg_degree=4, reps=1, swept=[0.01, 1.0])
    assert micro.startswith("selectivity,")
    assert len(predjoin.bench_ablation(n_person=200, avg_degree=4, comments=2, reps=1).splitlines()) == 41
    assert "plan_id" in predjoin.bench_spectrum(n_person=200, avg_degree=4, cap=4)
