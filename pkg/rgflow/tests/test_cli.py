import os
import unittest

import numpy as np
import pandas
import yaml

from rgflow import constants
from rgflow.cli import main
from rgflow.coarsegrain.BlockSpin import BlockSpin
from rgflow.coarsegrain.BlockSpinSpec import BlockSpinSpec
from rgflow.dataio.DatasetFile import DatasetFile
from rgflow.rbm.RbmParamsFile import RbmParamsFile
from rgflow.tests.test_rgflow_abstract import TestsRgflowAbstract


class TestsCli(TestsRgflowAbstract):
    def _config(self, **sections):
        values = {"experiment": "tiny", "seed": 3,
                  "dataset": {"source": "ising", "side_length": 8, "sample_count": 200, "burn_in_sweeps": 20,
                              "sweeps_per_sample": 2, "test_fraction": 0.25},
                  "model": {"hidden_sides": [4]},
                  "train": {"learning_rate": 0.01, "batch_size": 50, "epochs": 2},
                  "analysis": {"top_k": 4, "block_size": 2, "block_stride": 2},
                  "compare": {"samples": 3},
                  "solvability": {"trials": 2, "subset_size": 50}}
        for section, content in sections.items():
            if isinstance(content, dict):
                values.setdefault(section, {}).update(content)
            else:
                values[section] = content
        path = os.path.join(self._temp_dir(), "tiny.yaml")
        with open(path, "w") as f:
            yaml.safe_dump(values, f)
        return path

    def _run(self, verb, config, out, *extra):
        return main([verb, "--config", config, "--out", out, *extra])

    @staticmethod
    def _read(path):
        with open(path, "rb") as f:
            return f.read()

    def test_generate_is_deterministic(self):
        config = self._config()
        first, second = self._temp_dir(), self._temp_dir()
        self.assertEqual(constants.EXIT_OK, self._run("generate", config, first))
        self.assertEqual(constants.EXIT_OK, self._run("generate", config, second))
        self.assertEqual(self._read(os.path.join(first, "tiny.rgds")), self._read(os.path.join(second, "tiny.rgds")))
        dataset = DatasetFile.load_dataset(os.path.join(first, "tiny.rgds"))
        self.assertEqual((200, 64), dataset.samples.shape)
        self.assertEqual(constants.VALUE_RANGE_SPIN, dataset.value_range)
        third = self._temp_dir()
        self.assertEqual(constants.EXIT_OK, self._run("generate", config, third, "--seed", "4"))
        self.assertNotEqual(self._read(os.path.join(first, "tiny.rgds")),
                            self._read(os.path.join(third, "tiny.rgds")))

    def test_generate_without_provenance_trailer(self):
        out = self._temp_dir()
        config = self._config(dataset={"provenance_trailer": False})
        self.assertEqual(constants.EXIT_OK, self._run("generate", config, out))
        path = os.path.join(out, "tiny.rgds")
        self.assertEqual(DatasetFile.HEADER_SIZE + 200 * 64 * 8, os.path.getsize(path))
        self.assertEqual("rgds:tiny.rgds", DatasetFile.load_dataset(path).provenance)

    def test_train_is_deterministic(self):
        config = self._config()
        first, second = self._temp_dir(), self._temp_dir()
        self.assertEqual(constants.EXIT_OK, self._run("train", config, first))
        self.assertEqual(constants.EXIT_OK, self._run("train", config, second))
        for name in ("tiny_layer1.rbmw", "tiny_loss.csv", "tiny_loss.svg"):
            self.assertEqual(self._read(os.path.join(first, name)), self._read(os.path.join(second, name)), name)
        params = RbmParamsFile.load_params(os.path.join(first, "tiny_layer1.rbmw"))
        self.assertEqual((64, 16), params.weights.shape)
        loss = pandas.read_csv(os.path.join(first, "tiny_loss.csv"))
        self.assertEqual(["layer", "epoch", "reconstruction_error"], list(loss.columns))
        self.assertEqual(3, len(loss))

    def test_train_stack_from_dataset_file(self):
        out = self._temp_dir()
        config = self._config(model={"hidden_sides": [4, 2]})
        self.assertEqual(constants.EXIT_OK, self._run("generate", config, out))
        self.assertEqual(constants.EXIT_OK, self._run("train", config, out, "--dataset",
                                                      os.path.join(out, "tiny.rgds")))
        self.assertEqual((16, 4), RbmParamsFile.load_params(os.path.join(out, "tiny_layer2.rbmw")).weights.shape)
        loss = pandas.read_csv(os.path.join(out, "tiny_loss.csv"))
        self.assertEqual([1, 2], sorted(loss["layer"].unique()))

    def test_zero_epochs_keep_initialization(self):
        out = self._temp_dir()
        config = self._config(train={"epochs": 0, "init_mode": "block_spin", "init_block_size": 2, "init_gain": 1.0})
        self.assertEqual(constants.EXIT_OK, self._run("train", config, out))
        params = RbmParamsFile.load_params(os.path.join(out, "tiny_layer1.rbmw"))
        np.testing.assert_array_equal(BlockSpin.block_spin_matrix(BlockSpinSpec(8, 2, 2)), params.weights)

    def test_rgm_build_analyze_and_compare(self):
        out = self._temp_dir()
        config = self._config(rgm={"kappa": 3})
        self.assertEqual(constants.EXIT_OK, self._run("generate", config, out))
        dataset_path = os.path.join(out, "tiny.rgds")
        self.assertEqual(constants.EXIT_OK, self._run("train", config, out, "--dataset", dataset_path))
        self.assertEqual(constants.EXIT_OK, self._run("build-rgm", config, out, "--dataset", dataset_path))
        rgm = RbmParamsFile.load_params(os.path.join(out, "tiny_rgm.rbmw"))
        self.assertLessEqual(np.linalg.matrix_rank(rgm.weights, tol=1e-9 * np.max(np.abs(rgm.weights))), 3)
        weights = [os.path.join(out, "tiny_layer1.rbmw"), os.path.join(out, "tiny_rgm.rbmw")]
        self.assertEqual(constants.EXIT_OK, self._run("analyze", config, out, "--dataset", dataset_path,
                                                      "--weights", weights[0], "--weights", weights[1]))
        for stem in ("tiny_layer1", "tiny_rgm"):
            for suffix in ("singular_values.csv", "singular_values.svg", "radial_spectra.csv", "comparison.csv",
                           "effective_parameters.csv", "blockspin_overlay.csv", "alignment.csv", "alignment.svg"):
                self.assertTrue(os.path.isfile(os.path.join(out, f"{stem}_{suffix}")), f"{stem}_{suffix}")
        values = pandas.read_csv(os.path.join(out, "tiny_layer1_singular_values.csv"))
        self.assertEqual(16, len(values))
        self.assertTrue(np.all(np.diff(values["value"]) <= 0))
        alignment = pandas.read_csv(os.path.join(out, "tiny_layer1_alignment.csv"))
        self.assertTrue(np.all((alignment["eigenvalue"] >= -1e-9) & (alignment["eigenvalue"] <= 1 + 1e-9)))
        self.assertEqual(constants.EXIT_OK, self._run("compare", config, out, "--dataset", dataset_path,
                                                      "--weights", weights[0], "--weights", weights[1]))
        errors = pandas.read_csv(os.path.join(out, "tiny_compare_errors.csv"))
        self.assertEqual(["tiny_layer1", "tiny_rgm"], list(errors["model"]))
        self.assertTrue(np.all(errors["mean_reconstruction_error"] >= 0))
        grid = pandas.read_csv(os.path.join(out, "tiny_reconstructions.csv"))
        self.assertEqual(9, len(grid))
        self.assertTrue(os.path.isfile(os.path.join(out, "tiny_reconstructions.png")))

    def test_zero_kappa_rgm_has_nothing_to_compare(self):
        out = self._temp_dir()
        config = self._config(rgm={"kappa": 0})
        with self.assertLogs(level="WARNING"):
            self.assertEqual(constants.EXIT_OK, self._run("build-rgm", config, out))
        path = os.path.join(out, "tiny_rgm.rbmw")
        np.testing.assert_array_equal(np.zeros((64, 16)), RbmParamsFile.load_params(path).weights)
        self.assertEqual(constants.EXIT_OK, self._run("analyze", config, out, "--weights", path))
        self.assertEqual(0, len(pandas.read_csv(os.path.join(out, "tiny_rgm_comparison.csv"))))
        np.testing.assert_array_equal(np.zeros(16),
                                      pandas.read_csv(os.path.join(out, "tiny_rgm_singular_values.csv"))["value"])

    def test_solvable(self):
        out = self._temp_dir()
        config = self._config()
        self.assertEqual(constants.EXIT_OK, self._run("solvable", config, out, "--threads", "2"))
        report = pandas.read_csv(os.path.join(out, "tiny_solvability.csv"))
        self.assertEqual(["trial_a", "trial_b", "mean_top_alignment"], list(report.columns))
        self.assertEqual(1, len(report))

    def test_configuration_errors(self):
        out = self._temp_dir()
        self.assertEqual(constants.EXIT_CONFIG_ERROR, self._run("generate", os.path.join(out, "missing.yaml"), out))
        config = self._config()
        self.assertEqual(constants.EXIT_CONFIG_ERROR, self._run("compare", config, out))
        self.assertEqual(constants.EXIT_CONFIG_ERROR, self._run("analyze", config, out))
        self.assertEqual(constants.EXIT_CONFIG_ERROR, self._run("generate", config, out, "--threads", "0"))
        self.assertEqual(constants.EXIT_CONFIG_ERROR,
                         self._run("solvable", self._config(solvability={"subset_size": 5000}), out))
        with self.assertRaises(SystemExit) as raised:
            main(["fly", "--config", config])
        self.assertEqual(2, raised.exception.code)

    def test_invalid_settings_are_configuration_errors(self):
        out = self._temp_dir()
        self.assertEqual(constants.EXIT_OK, self._run("train", self._config(), out))
        weights = os.path.join(out, "tiny_layer1.rbmw")
        for analysis in ({"relative_floor": 1.5}, {"top_k": -1}, {"block_size": 3, "block_stride": 3}):
            self.assertEqual(constants.EXIT_CONFIG_ERROR,
                             self._run("analyze", self._config(analysis=analysis), out, "--weights", weights),
                             analysis)
        single_sample = self._config(dataset={"sample_count": 1, "test_fraction": 0.0}, rgm={"kappa": 1})
        self.assertEqual(constants.EXIT_CONFIG_ERROR, self._run("build-rgm", single_sample, out))
        self.assertEqual(constants.EXIT_CONFIG_ERROR,
                         self._run("compare", self._config(compare={"samples": 0}), out, "--weights", weights))

    def test_io_errors(self):
        out = self._temp_dir()
        config = self._config()
        self.assertEqual(constants.EXIT_IO_ERROR,
                         self._run("analyze", config, out, "--weights", os.path.join(out, "missing.rbmw")))
        broken = os.path.join(out, "broken.rgds")
        with open(broken, "wb") as f:
            f.write(b"RGDS broken")
        self.assertEqual(constants.EXIT_IO_ERROR, self._run("train", config, out, "--dataset", broken))

    def test_numeric_errors(self):
        out = self._temp_dir()
        config = self._config(train={"learning_rate": 1e308, "batch_size": 1, "epochs": 1})
        self.assertEqual(constants.EXIT_NUMERIC_ERROR, self._run("train", config, out))


if __name__ == '__main__':
    unittest.main()
