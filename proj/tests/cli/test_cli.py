"""Contract tests for the heavytail command line.

usage: test_cli.py CLI SCHEMA WORKDIR
"""

import json
import shutil
import subprocess
import sys
import unittest
from pathlib import Path

import jsonschema

CLI = SCHEMA = WORK = None
PLOTS = ["fig1_cdf.tsv", "fig1_pdf.tsv", "fig2_cdf.tsv",
         "fig2_zipf.tsv", "fig3_cdf.tsv", "fig3_zipf.tsv"]


def run(*args, check=None):
    p = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    if check is not None and p.returncode != check:
        raise AssertionError(f"{args}: exit {p.returncode}, stderr:\n{p.stderr}")
    return p


class Analyze(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.dir = WORK / "analyze"
        cls.dir.mkdir()
        cls.records = cls.dir / "records.csv"
        run("generate", "--seed", 5, "--suppliers", 4000, "--authorities", 2000,
            "-o", cls.records, check=0)

    def analyze(self, name, *extra):
        out = self.dir / name
        run("analyze", "--input", self.records, "--seed", 9, "--replicates", 300,
            "--out-dir", out, *extra, check=0)
        return out

    def test_outputs_validate_and_are_deterministic(self):
        a = self.analyze("a", "--workers", 1)
        b = self.analyze("b", "--workers", 1)
        c = self.analyze("c", "--workers", 4)
        report = json.loads((a / "report.json").read_text())
        jsonschema.validate(report, json.loads(SCHEMA.read_text()),
                            cls=jsonschema.Draft202012Validator)
        for f in ["report.json", *PLOTS]:
            self.assertEqual((a / f).read_bytes(), (b / f).read_bytes(), f)
            self.assertEqual((a / f).read_bytes(), (c / f).read_bytes(), f)
        for f in PLOTS:
            lines = (a / f).read_text().splitlines()
            self.assertGreater(len(lines), 1, f)
            self.assertEqual(len(lines[0].split("\t")), 2)
            for row in lines[1:]:
                self.assertEqual(len([float(v) for v in row.split("\t")]), 2)
        self.assertEqual(sorted(p.name for p in a.iterdir()), sorted(["report.json", *PLOTS]))

    def test_seed_changes_only_bootstrap(self):
        a = json.loads((self.analyze("s1") / "report.json").read_text())
        out = self.dir / "s2"
        run("analyze", "--input", self.records, "--seed", 10, "--replicates", 300,
            "--out-dir", out, check=0)
        b = json.loads((out / "report.json").read_text())
        for name in ["bidders", "revenues", "spendings"]:
            self.assertEqual(a["series"][name]["tested_fit"], b["series"][name]["tested_fit"])
            self.assertEqual(a["series"][name]["bootstrap"]["observed_ks"],
                             b["series"][name]["bootstrap"]["observed_ks"])

    def test_tab_delimited_input(self):
        tsv = self.dir / "records.tsv"
        tsv.write_text(self.records.read_text().replace(",", "\t"))
        out = self.dir / "tsv"
        run("analyze", "--input", tsv, "--delimiter", "tab", "--seed", 9,
            "--replicates", 300, "--out-dir", out, check=0)
        ref = self.analyze("csv_ref")
        a = json.loads((out / "report.json").read_text())
        b = json.loads((ref / "report.json").read_text())
        self.assertEqual(a["series"], b["series"])

    def test_empty_input_writes_nothing(self):
        empty = self.dir / "empty.csv"
        empty.write_text("tender_id,authority_id,winner_id,price,n_bidders,date\n")
        out = self.dir / "empty_out"
        p = run("analyze", "--input", empty, "--seed", 1, "--out-dir", out)
        self.assertEqual(p.returncode, 3, p.stderr)
        self.assertFalse(out.exists() and any(out.iterdir()))

    def test_input_errors(self):
        bad = self.dir / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        self.assertEqual(run("analyze", "--input", bad, "--seed", 1,
                             "--out-dir", self.dir / "bad").returncode, 3)
        self.assertEqual(run("analyze", "--input", self.dir / "missing.csv",
                             "--seed", 1).returncode, 2)

    def test_usage_errors(self):
        self.assertEqual(run("analyze", "--input", self.records).returncode, 2)
        self.assertEqual(run("analyze", "--input", self.records, "--seed", 1,
                             "--replicates", 10, "--out-dir", self.dir / "few").returncode, 2)
        self.assertEqual(run("nonsense").returncode, 2)
        self.assertEqual(run().returncode, 2)


class Simulate(unittest.TestCase):
    def test_same_seed_same_file(self):
        a, b = WORK / "sim_a.txt", WORK / "sim_b.txt"
        for f in (a, b):
            run("simulate", "--family", "pareto", "--alpha", 1.3, "-n", 500,
                "--seed", 4, "-o", f, check=0)
        self.assertEqual(a.read_bytes(), b.read_bytes())
        self.assertEqual(len(a.read_text().split()), 500)
        c = WORK / "sim_c.txt"
        run("simulate", "--family", "pareto", "--alpha", 1.3, "-n", 500,
            "--seed", 5, "-o", c, check=0)
        self.assertNotEqual(a.read_bytes(), c.read_bytes())

    def test_single_draw_respects_support(self):
        p = run("simulate", "--family", "pareto", "--alpha", 1, "--x-min", 3, "-n", 1,
                "--seed", 1, check=0)
        self.assertGreaterEqual(float(p.stdout.strip()), 3.0)

    def test_bad_parameters(self):
        self.assertEqual(run("simulate", "--family", "pareto", "--alpha", -1, "-n", 5,
                             "--seed", 1).returncode, 2)
        self.assertEqual(run("simulate", "--family", "q-exponential", "--q", 2.5, "-n", 5,
                             "--seed", 1).returncode, 2)

    def test_round_trip_through_fit(self):
        f = WORK / "rt.txt"
        run("simulate", "--family", "pareto", "--alpha", 1.236, "-n", 20000,
            "--seed", 3, "-o", f, check=0)
        fit = json.loads(run("fit", "--input", f, "--method", "mle", check=0).stdout)["fit"]
        self.assertAlmostEqual(fit["exponent"], 1.236, delta=0.05)
        g = WORK / "rt_exp.txt"
        run("simulate", "--family", "exponential", "--beta", 0.5, "--x-min", 1, "-n", 20000,
            "--seed", 3, "-o", g, check=0)
        fit = json.loads(run("fit", "--input", g, "--method", "exponential", check=0).stdout)["fit"]
        self.assertAlmostEqual(fit["exponent"], 0.5, delta=0.02)


class MaxEnt(unittest.TestCase):
    def solve(self, *args):
        return json.loads(run("maxent", *args, check=0).stdout)

    def test_symmetric_problem_is_uniform(self):
        s = self.solve("--levels", "1,2,3", "--target", 2)
        for p in s["probabilities"]:
            self.assertAlmostEqual(p, 1 / 3, places=12)

    def test_tsallis_near_one_matches_shannon(self):
        a = self.solve("--levels", "1,2,5,9,14", "--target", 4)
        b = self.solve("--levels", "1,2,5,9,14", "--target", 4, "--entropy", "tsallis",
                       "--q", 1.000001)
        self.assertLessEqual(max(abs(x - y) for x, y in
                                 zip(a["probabilities"], b["probabilities"])), 1e-3)

    def test_plot_and_generated_sample(self):
        sol = WORK / "sol.json"
        plot = WORK / "sol.tsv"
        run("maxent", "--linear-levels", "1,1,60", "--target", 4, "-o", sol,
            "--plot", plot, check=0)
        self.assertEqual(len(plot.read_text().splitlines()), 61)
        p = run("simulate", "--family", "maxent", "--solution", sol, "-n", 1000,
                "--seed", 2, check=0)
        levels = set(json.loads(sol.read_text())["levels"])
        self.assertTrue(all(float(v) in levels for v in p.stdout.split()))

    def test_infeasible_target(self):
        p = run("maxent", "--levels", "1,2,3", "--target", 5)
        self.assertEqual(p.returncode, 4)
        self.assertIn("infeasible", p.stderr)

    def test_usage(self):
        self.assertEqual(run("maxent", "--levels", "1,2,3").returncode, 2)
        self.assertEqual(run("maxent", "--levels", "1,2,3", "--target", 2,
                             "--entropy", "tsallis", "--q", 1).returncode, 2)


def main():
    global CLI, SCHEMA, WORK
    if len(sys.argv) != 4:
        sys.exit(__doc__)
    CLI, SCHEMA, WORK = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    shutil.rmtree(WORK, ignore_errors=True)
    WORK.mkdir(parents=True)
    unittest.main(argv=sys.argv[:1], verbosity=2)


if __name__ == "__main__":
    main()
