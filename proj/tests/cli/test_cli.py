"""End-to-end checks of the xifm command-line tool.

Usage: test_cli.py <path-to-xifm> <configs-dir>
"""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile
import unittest

XIFM = None
CONFIGS = None


def run(*args, cwd=None):
    return subprocess.run([XIFM, *args], capture_output=True, text=True, cwd=cwd)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class SimulateTest(unittest.TestCase):
    def test_symmetric_record(self):
        result = run("--config", os.path.join(CONFIGS, "simulate_symmetric.json"))
        self.assertEqual(result.returncode, 0, result.stderr)
        (record,) = rows(result.stdout)
        self.assertAlmostEqual(float(record["p_det"]), 0.125, places=12)
        self.assertAlmostEqual(float(record["p_abs"]), 0.25, places=12)
        self.assertAlmostEqual(float(record["eta"]), 1 / 3, places=12)
        self.assertEqual(record["dark_port"], "1")

    def test_row_echoes_inputs_before_outputs(self):
        result = run("simulate", "--set", "interferometer.reflectance=0.3",
                     "--set", "interferometer.tau=0.8", "--set", "interferometer.input_port=2")
        self.assertEqual(result.returncode, 0, result.stderr)
        header = result.stdout.splitlines()[0].split(",")
        self.assertEqual(header[:5], ["reflectance", "tau", "phase", "object", "input_port"])
        (record,) = rows(result.stdout)
        self.assertEqual(record["reflectance"], "0.3")
        self.assertEqual(record["tau"], "0.8")
        self.assertEqual(record["input_port"], "2")

    def test_undefined_eta_is_empty_in_csv_and_null_in_json(self):
        args = ["simulate", "--set", "interferometer.reflectance=0.5", "--set", "interferometer.tau=0"]
        (record,) = rows(run(*args).stdout)
        self.assertEqual(record["eta"], "")
        doc = json.loads(run(*args, "--format", "json").stdout)
        self.assertIsNone(doc["records"][0]["eta"])


class SweepTest(unittest.TestCase):
    def test_symmetric_tau_sweep_ends_at_one_third(self):
        result = run("--config", os.path.join(CONFIGS, "sweep_symmetric_tau.json"))
        self.assertEqual(result.returncode, 0, result.stderr)
        table = rows(result.stdout)
        self.assertEqual(len(table), 101)
        self.assertEqual(table[-1]["tau"], "1")
        self.assertAlmostEqual(float(table[-1]["eta"]), 1 / 3, places=12)
        for record in table:
            tau = float(record["tau"])
            self.assertAlmostEqual(float(record["p_det"]), tau ** 3 / 8, places=12)

    def test_asymmetric_reflectance_sweep(self):
        result = run("--config", os.path.join(CONFIGS, "sweep_asymmetric_reflectance.json"))
        self.assertEqual(result.returncode, 0, result.stderr)
        for record in rows(result.stdout):
            r_tilde = float(record["r_tilde"])
            if record["eta"]:
                self.assertAlmostEqual(float(record["eta"]), r_tilde / (1 + r_tilde), places=12)
            self.assertEqual(record["dark_port"], "2")

    def test_laue_sweep_is_even_in_delta(self):
        result = run("--config", os.path.join(CONFIGS, "laue_30kev_200um.json"))
        self.assertEqual(result.returncode, 0, result.stderr)
        table = rows(result.stdout)
        by_delta = {record["delta_urad"]: float(record["reflectance"]) for record in table}
        self.assertAlmostEqual(by_delta["-7.5"], by_delta["7.5"], places=12)
        for record in table:
            total = float(record["reflectance"]) + float(record["transmittance"])
            self.assertAlmostEqual(total, 1.0, places=12)

    def test_identical_seed_gives_identical_bytes(self):
        with tempfile.TemporaryDirectory() as tmp:
            outputs = []
            for name in ("a.csv", "b.csv"):
                path = os.path.join(tmp, name)
                result = run("--config", os.path.join(CONFIGS, "laue_18kev_500um.json"),
                             "--seed", "7", "--output", path)
                self.assertEqual(result.returncode, 0, result.stderr)
                with open(path, "rb") as handle:
                    outputs.append(handle.read())
            self.assertEqual(outputs[0], outputs[1])


class DesignTest(unittest.TestCase):
    def test_half_reflectance(self):
        result = run("--config", os.path.join(CONFIGS, "design_half_reflectance.json"))
        self.assertEqual(result.returncode, 0, result.stderr)
        (record,) = rows(result.stdout)
        self.assertAlmostEqual(float(record["achieved_R"]), 0.5, places=9)
        self.assertTrue(0 <= float(record["delta_urad"]) <= 5)

    def test_unreachable_target_is_reported(self):
        result = run("--config", os.path.join(CONFIGS, "design_half_reflectance.json"),
                     "--set", "design.window_urad=[100,120]")
        self.assertEqual(result.returncode, 2)
        self.assertIn("R spans", result.stderr)


class CharacterizeTest(unittest.TestCase):
    def test_recovers_device(self):
        result = run("--config", os.path.join(CONFIGS, "characterize_example.json"))
        self.assertEqual(result.returncode, 0, result.stderr)
        (record,) = rows(result.stdout)
        self.assertAlmostEqual(float(record["r_tilde"]), 0.36, places=9)
        self.assertAlmostEqual(float(record["t_tilde"]), 0.54, places=9)
        self.assertAlmostEqual(float(record["phase_estimate"]), 1.2, places=9)
        self.assertEqual(record["clamped"], "false")

    def test_malformed_measurement_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "m.csv")
            with open(path, "w") as handle:
                handle.write("port3,port1,port2,port4\n0.1,0.2,oops,0.3\n")
            result = run("characterize", "--set", f"characterize.measurements={json.dumps(path)}")
            self.assertEqual(result.returncode, 2)
            self.assertIn("m.csv:2", result.stderr)


class ValidateTest(unittest.TestCase):
    def test_passes_and_is_deterministic(self):
        with tempfile.TemporaryDirectory() as tmp:
            outputs = []
            for name in ("a.json", "b.json"):
                path = os.path.join(tmp, name)
                result = run("--config", os.path.join(CONFIGS, "validate.json"),
                             "--format", "json", "--output", path)
                self.assertEqual(result.returncode, 0, result.stderr)
                with open(path, "rb") as handle:
                    outputs.append(handle.read())
            self.assertEqual(outputs[0], outputs[1])
            doc = json.loads(outputs[0])
            self.assertTrue(all(record["pass"] for record in doc["records"]))

    def test_seed_changes_the_grid(self):
        small = ["validate", "--set", "validate.cases=20", "--set", "validate.laue_cases=5"]
        first = run(*small, "--seed", "1").stdout
        second = run(*small, "--seed", "2").stdout
        self.assertNotEqual(first, second)


class ErrorTest(unittest.TestCase):
    def test_syntax_error_reports_line_and_column(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "bad.json")
            with open(path, "w") as handle:
                handle.write('{\n  "interferometer": {\n    "tau": 1,,\n  }\n}\n')
            result = run("simulate", "--config", path)
            self.assertEqual(result.returncode, 2)
            self.assertIn("bad.json:3:", result.stderr)

    def test_missing_block(self):
        self.assertEqual(run("simulate").returncode, 2)

    def test_unknown_key(self):
        result = run("--config", os.path.join(CONFIGS, "simulate_symmetric.json"),
                     "--set", "interferometer.taux=1")
        self.assertEqual(result.returncode, 2)
        self.assertIn("interferometer.taux", result.stderr)

    def test_out_of_range_parameter(self):
        result = run("--config", os.path.join(CONFIGS, "simulate_symmetric.json"),
                     "--set", "interferometer.tau=1.5")
        self.assertEqual(result.returncode, 2)

    def test_bad_flag_and_format(self):
        self.assertEqual(run("simulate", "--no-such-flag").returncode, 2)
        self.assertEqual(run("simulate", "--format", "xml").returncode, 2)

    def test_subcommand_contradicting_mode(self):
        result = run("sweep", "--config", os.path.join(CONFIGS, "simulate_symmetric.json"))
        self.assertEqual(result.returncode, 2)

    def test_help_succeeds(self):
        self.assertEqual(run("--help").returncode, 0)


if __name__ == "__main__":
    XIFM, CONFIGS = os.path.abspath(sys.argv[1]), os.path.abspath(sys.argv[2])
    unittest.main(argv=sys.argv[:1], verbosity=2)
