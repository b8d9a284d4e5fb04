"""End-to-end checks of the predjoin command line: outputs and exit codes."""
import json
import os
import subprocess
import sys
import tempfile
import unittest

BINARY = ""
EXAMPLES = ""


def run(*args, cwd=None):
    return subprocess.run([BINARY, *args], capture_output=True, text=True, cwd=cwd)


class CliTest(unittest.TestCase):
    def script(self, name="running_example.sql"):
        return os.path.join(EXAMPLES, name)

    def test_run_running_example(self):
        r = run("run", "--script", self.script(), "--zone-size", "2")
        self.assertEqual(r.returncode, 0, r.stderr)
        lines = r.stdout.strip().splitlines()
        self.assertEqual(lines[0].split(",")[:2], ["P1.ID", "P1.name"])
        self.assertEqual(lines[1], "202,Karim,202,303,2020,303,Carmen,303,404,2019,404,Zhang")

    def test_ablation_flags_do_not_change_results(self):
        outs = set()
        for flags in ([], ["--no-jm"], ["--no-rsj"], ["--no-rid-mat"], ["--cards", "estimate"]):
            r = run("run", "--script", self.script("running_example_indexed.sql"), *flags)
            self.assertEqual(r.returncode, 0, r.stderr)
            outs.add(r.stdout)
        self.assertEqual(outs, {"P1.name,P2.name,P3.name\nKarim,Carmen,Zhang\n"})

    def test_stats_and_json(self):
        with tempfile.TemporaryDirectory() as d:
            stats = os.path.join(d, "stats.json")
            r = run("run", "--script", self.script("running_example_indexed.sql"), "--stats", stats,
                    "--format", "json", "--zone-size", "2")
            self.assertEqual(r.returncode, 0, r.stderr)
            rows = json.loads(r.stdout)
            self.assertTrue(rows)
            with open(stats) as f:
                data = json.load(f)
            kinds = {op["kind"] for op in data[0]["operators"]}
            self.assertIn("SJoinIdxM", kinds)

    def test_explain_shows_both_plans(self):
        r = run("explain", "--script", self.script("running_example_indexed.sql"))
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertIn("-- baseline", r.stdout)
        self.assertIn("-- rewritten", r.stdout)
        self.assertIn("SJoinIdxM", r.stdout)
        r = run("explain", "--script", self.script("running_example_indexed.sql"), "--no-jm")
        self.assertIn("SJoinIdxR", r.stdout)
        self.assertNotIn("SJoinIdxM", r.stdout)

    def test_user_errors_exit_1_without_stdout(self):
        cases = [
            ["run", "--sql", "SELEC 1"],
            ["run", "--sql", "CREATE TABLE T (a INTEGER); SELECT * FROM T t WHERE t.a = 1 OR t.a = 2"],
            ["run", "--sql", "CREATE TABLE T (a INTEGER); SELECT * FROM T t; SELECT * FROM Nope n"],
            ["run", "--script", "/nonexistent/file.sql"],
            ["run", "--sql", "CREATE TABLE T (a INTEGER); COPY T FROM 'missing.csv'"],
            ["run", "--sql", "SELECT 1", "--zone-size", "0"],
            ["bench-micro", "--which", "Q"],
            ["run", "--bogus-flag"],
            ["run", "--sql", "CREATE TABLE T (a INTEGER)", "--cards", "sometimes"],
        ]
        for args in cases:
            with self.subTest(args=args):
                r = run(*args)
                self.assertEqual(r.returncode, 1, r.stderr)
                self.assertEqual(r.stdout, "")
                self.assertTrue(r.stderr.strip())

    def test_syntax_error_is_positioned(self):
        r = run("run", "--sql", "CREATE TABLE T (a INTEGER);\nSELECT * FROM T t WHERE t.a = ")
        self.assertEqual(r.returncode, 1)
        self.assertIn("line 2", r.stderr)

    def test_gen_data_round_trip(self):
        with tempfile.TemporaryDirectory() as d:
            r = run("gen-data", "--out", d, "--n-person", "50", "--avg-degree", "3", "--seed", "4", "--with-indices")
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertIn("Person,50", r.stdout)
            again = os.path.join(d, "again")
            os.mkdir(again)
            run("gen-data", "--out", again, "--n-person", "50", "--avg-degree", "3", "--seed", "4")
            with open(os.path.join(d, "Knows.csv")) as a, open(os.path.join(again, "Knows.csv")) as b:
                self.assertEqual(a.read(), b.read())
            q = run("run", "--script", os.path.join(d, "load.sql"), "--sql",
                    "SELECT COUNT(*) FROM Person p, Knows k WHERE p.id = k.id1")
            self.assertEqual(q.returncode, 0, q.stderr)

    def test_benchmarks_small(self):
        with tempfile.TemporaryDirectory() as d:
            plot = os.path.join(d, "micro.svg")
            r = run("bench-micro", "--n-person", "300", "--avg-degree", "5", "--reps", "1",
                    "--selectivities", "0.01,1", "--plot", plot)
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertEqual(len(r.stdout.strip().splitlines()), 5)
            with open(plot) as f:
                self.assertIn("<svg", f.read())
            r = run("bench-ablation", "--n-person", "300", "--avg-degree", "5", "--comments", "2", "--reps", "1")
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertEqual(len(r.stdout.strip().splitlines()), 41)
            r = run("bench-spectrum", "--n-person", "300", "--avg-degree", "5", "--reps", "1", "--cap", "6",
                    "--format", "json")
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertEqual(len(json.loads(r.stdout)["plans"]), 12)


if __name__ == "__main__":
    BINARY, EXAMPLES = sys.argv[1], sys.argv[2]
    unittest.main(argv=sys.argv[:1])
