import contextlib
import csv
import io
import json
import os
import tempfile
import unittest

from eigenbound.runner.cases import BUILTIN_CASES, builtin_config, builtin_names
from eigenbound.runner.config import ConfigError, config_to_dict, load_config, parse_config
from eigenbound.runner.main import EXIT_ERROR, EXIT_OK, main
from eigenbound.runner.parser import get_args
from eigenbound.runner.plots import relative_margins
from eigenbound.bounds import make_report
from eigenbound.utils.scenarios import BuiltinCase, SpectrumSource, Suite

SQUARE = {"kind": "rectangle", "widths": [1.0, 1.0]}
SMALL_SQUARE = {"name": "small-square", "domain": SQUARE, "resolution": 8, "k": 5, "suite": ["mode_checks"]}
RIGIDITY = {
    "name": "rigidity",
    "domain": {"kind": "soliton_annulus", "index": 1, "lam": 1.0},
    "drift": {"kind": "gaussian_soliton", "lam": 1.0},
    "spectrum_source": "radial",
    "radial": {"ell_max": 12, "grid_size": 500},
    "k": 6,
    "suite": ["rigidity"],
}


def run_quietly(argv):
    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()) as err:
        status = main(argv)
    return status, err.getvalue()


def write_config(directory, data, name="config.json"):
    path = os.path.join(directory, name)
    with open(path, "w") as f:
        json.dump(data, f, indent=4)
    return path


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


class TestConfig(unittest.TestCase):
    def assertConfigError(self, data, path):
        with self.assertRaises(ConfigError) as ctx:
            parse_config(data)
        self.assertEqual(ctx.exception.path, path)
        self.assertTrue(str(ctx.exception).startswith(path + ":"))

    def test_defaults(self):
        config = parse_config({"domain": SQUARE})
        self.assertEqual(config.k, 10)
        self.assertEqual(config.resolution, 32)
        self.assertEqual(config.solver.tol, 1e-9)
        self.assertEqual(config.solver.seed, 42)
        self.assertEqual(config.suites, [Suite.quadratic])
        self.assertEqual(config.source, SpectrumSource.fem)

    def test_unknown_key(self):
        self.assertConfigError({"domain": SQUARE, "alpah": 1.0}, "alpah")
        self.assertConfigError({"domain": {**SQUARE, "size": 2}}, "domain.size")

    def test_negative_alpha(self):
        self.assertConfigError({"domain": SQUARE, "alpha": -1.0}, "alpha")

    def test_missing_domain(self):
        self.assertConfigError({"k": 4}, "domain")

    def test_nested_paths(self):
        self.assertConfigError({"domain": {"kind": "ball", "radius": "one"}}, "domain.radius")
        self.assertConfigError({"domain": {"kind": "disc"}}, "domain.kind")
        self.assertConfigError({"domain": SQUARE, "solver": {"tol": 0.0}}, "solver.tol")

    def test_wrong_types(self):
        self.assertConfigError({"domain": SQUARE, "k": 2.5}, "k")
        self.assertConfigError({"domain": SQUARE, "crosscheck": {"enabled": 1}}, "crosscheck.enabled")
        self.assertConfigError({"domain": SQUARE, "suite": ["quadratic", "weyl"]}, "suite")

    def test_identity_only_suites(self):
        data = {"domain": SQUARE, "tensor": {"kind": "diagonal", "diag": [2.0, 3.0]}, "suite": ["yang"]}
        self.assertConfigError(data, "suite")
        data["suite"] = ["quadratic", "divfree"]
        self.assertEqual(parse_config(data).suites, [Suite.quadratic, Suite.divfree])

    def test_divfree_needs_divergence_free_tensor(self):
        data = {"domain": SQUARE, "tensor": {"kind": "affine_conformal", "beta": 0.5}, "suite": ["divfree"]}
        self.assertConfigError(data, "suite")

    def test_radial_source_restrictions(self):
        self.assertConfigError({"domain": SQUARE, "spectrum_source": "radial"}, "spectrum_source")
        self.assertConfigError({**RIGIDITY, "suite": ["rigidity", "mode_checks"]}, "suite")
        self.assertConfigError({**RIGIDITY, "alpha": 1.0}, "spectrum_source")

    def test_load_invalid_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "broken.json")
            with open(path, "w") as f:
                f.write("{not json")
            with self.assertRaises(ConfigError) as ctx:
                load_config(path)
            self.assertEqual(ctx.exception.path, "config")

    def test_round_trip_through_dict(self):
        config = parse_config(RIGIDITY)
        self.assertEqual(parse_config(config_to_dict(config)), config)

    def test_builtin_configs_parse(self):
        self.assertEqual(set(builtin_names()), {case.value for case in BuiltinCase})
        self.assertEqual(set(BUILTIN_CASES), set(BuiltinCase))
        for name in builtin_names():
            config = builtin_config(name)
            self.assertEqual(config.name, name)
        self.assertEqual(builtin_config("oracle-crosscheck").resolution, 36)
        self.assertTrue(builtin_config("oracle-crosscheck").crosscheck.enabled)


class TestParser(unittest.TestCase):
    def test_subcommands(self):
        args = get_args(["run", "--config", "c.json", "--plots"])
        self.assertEqual((args.command, args.config, args.plots, args.out), ("run", "c.json", True, None))
        args = get_args(["builtin", "all", "--num_workers", "4", "--out", "results"])
        self.assertEqual((args.case, args.num_workers, args.out), ("all", 4, "results"))

    def test_rejects_bad_usage(self):
        with contextlib.redirect_stderr(io.StringIO()):
            self.assertRaises(SystemExit, get_args, [])
            self.assertRaises(SystemExit, get_args, ["run"])
            self.assertRaises(SystemExit, get_args, ["builtin", "all", "--num_workers", "0"])


class TestPlots(unittest.TestCase):
    def test_relative_margins_are_floored(self):
        reports = [make_report("a", "f", 1, 1.0, 2.0, 0.0), make_report("b", "f", 1, 3.0, 2.0, 0.0)]
        margins = relative_margins(reports)
        self.assertAlmostEqual(margins[0], -0.30102999566398120)
        self.assertAlmostEqual(margins[1], -17.0)


class TestMain(unittest.TestCase):
    def test_run_small_square(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "out")
            status, _ = run_quietly(["run", "--config", write_config(tmp, SMALL_SQUARE), "--out", out])
            self.assertEqual(status, EXIT_OK)
            for name in ("spectrum.csv", "bounds.csv", "bounds.json", "constants.json"):
                self.assertTrue(os.path.exists(os.path.join(out, name)), name)
            self.assertFalse(os.path.exists(os.path.join(out, "margins.svg")))

            rows = read_rows(os.path.join(out, "spectrum.csv"))
            self.assertEqual(len(rows), 5)
            self.assertEqual(list(rows[0]), ["i", "sigma", "divnorm", "t_energy", "residual"])
            sigmas = [float(r["sigma"]) for r in rows]
            self.assertEqual(sigmas, sorted(sigmas))
            self.assertTrue(all(float(r["residual"]) <= 1e-9 for r in rows))

            reports = read_rows(os.path.join(out, "bounds.csv"))
            self.assertEqual(len(reports), 10)
            self.assertTrue(all(r["satisfied"] == "true" for r in reports))

            with open(os.path.join(out, "constants.json")) as f:
                payload = json.load(f)
            self.assertEqual(payload["eps"], 1.0)
            self.assertEqual(payload["C0"], 0.0)
            self.assertEqual(payload["method"], "dense")

    def test_run_is_reproducible(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = write_config(tmp, SMALL_SQUARE)
            outputs = []
            for run in ("first", "second"):
                out = os.path.join(tmp, run)
                self.assertEqual(run_quietly(["run", "--config", config, "--out", out])[0], EXIT_OK)
                with open(os.path.join(out, "spectrum.csv"), "rb") as f:
                    spectrum = f.read()
                with open(os.path.join(out, "bounds.csv"), "rb") as f:
                    outputs.append((spectrum, f.read()))
            self.assertEqual(outputs[0], outputs[1])

    def test_builtin_rerun_is_byte_identical(self):
        with tempfile.TemporaryDirectory() as tmp:
            outputs = []
            for run in ("first", "second"):
                out = os.path.join(tmp, run)
                self.assertEqual(run_quietly(["builtin", "expanding-ball", "--out", out])[0], EXIT_OK)
                contents = []
                for name in ("spectrum.csv", "bounds.csv", "constants.json"):
                    with open(os.path.join(out, name), "rb") as f:
                        contents.append(f.read())
                outputs.append(contents)
            self.assertEqual(outputs[0], outputs[1])

    def test_plots_flag_writes_svg(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "out")
            status, _ = run_quietly(["run", "--config", write_config(tmp, SMALL_SQUARE), "--out", out, "--plots"])
            self.assertEqual(status, EXIT_OK)
            with open(os.path.join(out, "margins.svg")) as f:
                self.assertIn("<svg", f.read())

    def test_config_output_dir_is_default(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "from-config")
            config = write_config(tmp, {**SMALL_SQUARE, "output_dir": out})
            self.assertEqual(run_quietly(["run", "--config", config])[0], EXIT_OK)
            self.assertTrue(os.path.exists(os.path.join(out, "spectrum.csv")))

    def test_invalid_config_exits_with_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = write_config(tmp, {**SMALL_SQUARE, "alpha": -1.0})
            status, err = run_quietly(["run", "--config", config, "--out", os.path.join(tmp, "out")])
            self.assertEqual(status, EXIT_ERROR)
            self.assertIn("alpha", err)
            self.assertFalse(os.path.exists(os.path.join(tmp, "out", "spectrum.csv")))

    def test_missing_config_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            status, _ = run_quietly(["run", "--config", os.path.join(tmp, "absent.json"), "--out", tmp])
            self.assertEqual(status, EXIT_ERROR)

    def test_unknown_builtin(self):
        with tempfile.TemporaryDirectory() as tmp:
            status, err = run_quietly(["builtin", "unknown", "--out", tmp])
            self.assertEqual(status, EXIT_ERROR)
            self.assertIn("square-laplace", err)

    def test_rigidity_constants_are_analytic(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "out")
            status, _ = run_quietly(["run", "--config", write_config(tmp, RIGIDITY), "--out", out])
            self.assertEqual(status, EXIT_OK)
            with open(os.path.join(out, "constants.json")) as f:
                payload = json.load(f)
            self.assertEqual(payload["C0"], 0.0)
            self.assertEqual(payload["provenance"]["C0"], "analytic")
            self.assertEqual(payload["method"], "radial")
            rows = read_rows(os.path.join(out, "spectrum.csv"))
            self.assertEqual(len(rows), 6)
            residuals = [float(r["residual"]) for r in rows]
            self.assertTrue(all(0.0 <= r <= 1e-9 for r in residuals))
            self.assertTrue(any(r > 0.0 for r in residuals))
            self.assertTrue(all(r["t_energy"] == "" for r in rows))
            self.assertTrue(all(float(r["divnorm"]) == 0.0 for r in rows))

    def test_dump_matrices(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "dump")
            config = write_config(tmp, {**SMALL_SQUARE, "problem": "vector", "alpha": 1.0})
            status, _ = run_quietly(["dump-matrices", "--config", config, "--out", out])
            self.assertEqual(status, EXIT_OK)
            for name in ("stiffness", "mass", "A", "M", "coupling", "mesh"):
                self.assertTrue(os.path.exists(os.path.join(out, f"{name}.txt")), name)
            with open(os.path.join(out, "mesh.txt")) as f:
                lines = [line.split() for line in f]
            self.assertEqual(len(lines), 81 + 128)
            self.assertEqual({len(fields) for fields in lines[:81]}, {2})
            self.assertEqual({len(fields) for fields in lines[81:]}, {3})


if __name__ == "__main__":
    unittest.main()
