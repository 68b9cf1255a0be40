import json
import os
import shutil
import subprocess
import sys
import unittest

import numpy
from numpy.testing import assert_allclose

from mubwit_globals import GROUP_WITNESSES
from mubwit_reference import reference_matrix
from mubwit_store import load_matrix, WitnessArchive

SCRIPT = os.path.join(os.path.dirname(__file__), "../mubwit.py")


def run_cli(args, env=None):
    args = [SCRIPT] + args
    if os.environ.get("MUBWIT_TEST_COVERAGE"):
        args = ["coverage", "run"] + args
    else:
        args = [sys.executable] + args
    return subprocess.run(
        args,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        universal_newlines=True,
        env=dict(os.environ, **(env or {})),
    )


def output_value(stdout, key):
    """Reads 'key : value' from command output."""
    for line in stdout.splitlines():
        name, _, value = line.partition(":")
        if name.strip() == key:
            return value.split()[0]
    raise AssertionError("no '{}' line in output:\n{}".format(key, stdout))


class TestCli(unittest.TestCase):
    def setUp(self):
        self.file_dir = "/tmp/mubwit_cli"
        os.makedirs(self.file_dir)

    def tearDown(self):
        shutil.rmtree(self.file_dir)

    def path(self, name):
        return os.path.join(self.file_dir, name)

    def test_build_three_bases(self):
        out = self.path("w.json")
        result = run_cli(["build", "--d", "3", "--bases", "hw:0,1,2", "--shift", "1", "--gamma", "--out", out])
        self.assertEqual(result.returncode, 0, result.stderr)
        assert_allclose(load_matrix(out), reference_matrix("W_012"), atol=1e-12)
        self.assertIn("W(0,1,2;s=1)^G", result.stdout)
        self.assertAlmostEqual(float(output_value(result.stdout, "trace")), 6.0)

    def test_build_unextendible(self):
        result = run_cli(["build", "--d", "4", "--bases", "fixture:unext", "--shift", "1", "--gamma"])
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("W^G = W", result.stdout)

    def test_build_zero_shift(self):
        result = run_cli(["build", "--d", "3", "--bases", "hw:all", "--shift", "0"])
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertAlmostEqual(float(output_value(result.stdout, "min eigenvalue")), 0.0)
        self.assertAlmostEqual(float(output_value(result.stdout, "max eigenvalue")), 2.0)

    def test_build_unsupported_dimension(self):
        result = run_cli(["build", "--d", "6", "--bases", "hw"])
        self.assertEqual(result.returncode, 1)
        self.assertIn("d=6", result.stderr)

    def test_eval(self):
        complete = self.path("complete.json")
        three = self.path("three.json")
        run_cli(["build", "--d", "3", "--bases", "hw", "--shift", "1", "--gamma", "--out", complete])
        run_cli(["build", "--d", "3", "--bases", "hw:0,1,2", "--shift", "1", "--gamma", "--out", three])

        result = run_cli(["eval", "--witness", complete, "--state", "rho_x", "--params", "d=3,s=1,x=0.5"])
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertAlmostEqual(float(output_value(result.stdout, "value")), -1 / 7, places=10)
        self.assertEqual(output_value(result.stdout, "verdict"), "detects-bound-entanglement")

        # three bases reach rho_x only for x < 1/3
        result = run_cli(
            ["eval", "--witness", three, "--state", "rho_x", "--params", "d=3,s=1,x=0.5", "--json"]
        )
        report = json.loads(result.stdout)
        self.assertAlmostEqual(report["value"], 1 / 21, places=10)
        self.assertEqual(report["verdict"], "no-detection")
        self.assertEqual(report["m"], 3)

    def test_eval_errors(self):
        result = run_cli(["eval", "--witness", self.path("missing.json"), "--state", "rho_b", "--params", "b=1"])
        self.assertEqual(result.returncode, 2)
        bad = self.path("bad.json")
        with open(bad, "w") as outfile:
            outfile.write("{not json")
        result = run_cli(["eval", "--witness", bad, "--state", "rho_b", "--params", "b=1"])
        self.assertEqual(result.returncode, 2)
        result = run_cli(["eval", "--witness", "bell:s=1", "--d", "3", "--state", "rho_x", "--params", "d=3,s=1,x=-1"])
        self.assertEqual(result.returncode, 1)

    def test_scan(self):
        out = self.path("scan.csv")
        result = run_cli(
            ["scan", "--d", "3", "--witness", "hw:0,1,2:s=1", "--state", "rho_x", "--grid", "x=0.1:2.0:0.1", "--out", out]
        )
        self.assertEqual(result.returncode, 0, result.stderr)
        with open(out) as infile:
            rows = infile.read().splitlines()
        self.assertEqual(rows[0], "family,param,witness,s,m,value,ppt,verdict")
        self.assertEqual(len(rows), 21)
        self.assertTrue(rows[1].startswith("rho_x,d=3;s=1;x=0.1,"))
        self.assertTrue(rows[3].endswith("detects-bound-entanglement"))
        self.assertTrue(rows[4].endswith("no-detection"))

    def test_scan_bell_to_stdout(self):
        result = run_cli(["scan", "--d", "3", "--witness", "bell:s=1", "--state", "rho_x", "--grid", "x=0.9,1.0,1.1"])
        self.assertEqual(result.returncode, 0, result.stderr)
        verdicts = [row.split(",")[-1] for row in result.stdout.splitlines()[1:]]
        self.assertEqual(verdicts, ["detects-bound-entanglement", "no-detection", "no-detection"])

    def test_verify(self):
        result = run_cli(["verify", "--recipe", "d4-appendix"])
        self.assertEqual(result.returncode, 0, result.stdout)
        lines = result.stdout.splitlines()
        self.assertTrue(lines)
        self.assertTrue(all(line.startswith("PASS") for line in lines))

        result = run_cli(["verify", "--recipe", "everything"])
        self.assertEqual(result.returncode, 1)
        self.assertIn("s0-collapse", result.stderr)

    def test_bases(self):
        out = self.path("fixture.json")
        result = run_cli(["bases", "--d", "4", "--bases", "fixture:unext", "--out", out])
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertEqual(output_value(result.stdout, "mutually unbiased"), "True")
        result = run_cli(["bases", "--load", out])
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("Bunext", result.stdout)
        result = run_cli(["build", "--bases", "file=" + out + ":0,2", "--shift", "1", "--gamma"])
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("W^G = W", result.stdout)

    def test_seesaw(self):
        result = run_cli(
            ["seesaw", "--d", "3", "--bases", "hw", "--shift", "1", "--restarts", "8", "--iters", "200"],
            env={"MUBWIT_SEED": "5"},
        )
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertEqual(output_value(result.stdout, "bound respected"), "True")
        self.assertAlmostEqual(float(output_value(result.stdout, "separable bound")), 2.0)

        result = run_cli(["seesaw", "--d", "3", "--restarts", "1"], env={"MUBWIT_SEED": "abc"})
        self.assertEqual(result.returncode, 1)
        self.assertIn("MUBWIT_SEED", result.stderr)

        result = run_cli(["seesaw", "--d", "3", "--restarts", "0"])
        self.assertEqual(result.returncode, 1)
        self.assertIn("restarts >= 1", result.stderr)
        self.assertNotIn("Traceback", result.stderr)

    def test_obstruct(self):
        result = run_cli(["obstruct", "--d", "5", "--witness", "hw:0,1,2,3,4:s=1"])
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("non-decomposable", result.stdout)
        result = run_cli(["obstruct", "--d", "5", "--witness", "hw:0,1,2:s=1", "--json"])
        self.assertEqual(json.loads(result.stdout)["verdict"], "inconclusive")
        result = run_cli(["obstruct", "--d", "4", "--witness", "bell:s=2"])
        self.assertEqual(result.returncode, 1)

    def test_witness_file_without_shift(self):
        out = self.path("w.json")
        result = run_cli(["build", "--d", "3", "--bases", "hw:0,1,2", "--shift", "1", "--gamma", "--out", out])
        self.assertEqual(result.returncode, 0, result.stderr)
        with open(out) as infile:
            data = json.load(infile)
        del data["spec"]["s"]
        with open(out, "w") as outfile:
            json.dump(data, outfile)
        result = run_cli(["obstruct", "--witness", out])
        self.assertEqual(result.returncode, 1)
        self.assertIn("missing", result.stderr)
        result = run_cli(["eval", "--witness", out, "--state", "rho_x", "--params", "d=3,s=1,x=0.5"])
        self.assertEqual(result.returncode, 1)

    def test_export(self):
        out = self.path("mubwit.h5")
        result = run_cli(["export", "--out", out])
        self.assertEqual(result.returncode, 0, result.stderr)
        with WitnessArchive(out) as archive:
            self.assertIn("W_012", archive.names(GROUP_WITNESSES))
            assert_allclose(
                archive.get_matrix(GROUP_WITNESSES, "W_unext"), reference_matrix("W_unext"), atol=1e-12
            )

    def test_jacobi_eigensolver(self):
        result = run_cli(["--eigensolver", "jacobi", "build", "--d", "3", "--bases", "hw:all", "--shift", "0"])
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertAlmostEqual(float(output_value(result.stdout, "min eigenvalue")), 0.0)
        self.assertTrue(numpy.isfinite(float(output_value(result.stdout, "max eigenvalue"))))
