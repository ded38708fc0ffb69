import itertools
import os
import struct
import unittest

import numpy as np
import pandas

from rgflow.dataio.DatasetFormatError import DatasetFormatError
from rgflow.lattice.IsingSampler import IsingSampler
from rgflow.lattice.IsingSamplerConfig import IsingSamplerConfig
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError
from rgflow.rbm.NumericalInstabilityError import NumericalInstabilityError
from rgflow.rbm.Rbm import Rbm
from rgflow.rbm.RbmInitializer import RbmInitializer
from rgflow.rbm.RbmParams import RbmParams
from rgflow.rbm.RbmParamsFile import RbmParamsFile
from rgflow.rbm.RbmTrainer import RbmTrainer
from rgflow.rbm.TrainConfig import TrainConfig
from rgflow.tests.test_rgflow_abstract import TestsRgflowAbstract


def loop_energy(v, h, weights, visible_bias, hidden_bias):
    energy = 0.0
    for i in range(len(v)):
        for a in range(len(h)):
            energy -= v[i] * weights[i][a] * h[a]
    for i in range(len(v)):
        energy -= v[i] * visible_bias[i]
    for a in range(len(h)):
        energy -= h[a] * hidden_bias[a]
    return energy


class TestsRbm(TestsRgflowAbstract):
    def _random_params(self, visible_count, hidden_count, seed, scale=0.5):
        rng = np.random.Generator(np.random.PCG64(seed))
        return RbmParams(rng.normal(0, scale, (visible_count, hidden_count)), rng.normal(0, scale, visible_count),
                         rng.normal(0, scale, hidden_count))

    def test_params_validation(self):
        with self.assertRaises(DimensionMismatchError):
            RbmParams(np.zeros((4, 4)), visible_bias=np.zeros(3))
        with self.assertRaises(DimensionMismatchError):
            RbmParams(np.zeros((4, 4)), visible_side=3)
        with self.assertRaises(ValueError):
            RbmParams(np.array([[np.inf]]))
        params = RbmParams(np.zeros((16, 4)))
        self.assertEqual((4, 2), (params.visible_side, params.hidden_side))
        self.assertIsNone(RbmParams(np.zeros((3, 2))).visible_side)

    def test_energy(self):
        params = RbmParams(np.zeros((3, 2)))
        self.assertEqual(0, Rbm.rbm_energy([1, -1, 1], [1, 1], params))
        params = RbmParams([[2.0]], [1.0], [-1.0])
        self.assertEqual(-2, Rbm.rbm_energy([1], [1], params))
        params = self._random_params(4, 2, 1)
        rng = np.random.Generator(np.random.PCG64(2))
        for _ in range(5):
            v = np.where(rng.random(4) < 0.5, -1.0, 1.0)
            h = np.where(rng.random(2) < 0.5, -1.0, 1.0)
            self.assertAlmostEqual(loop_energy(v, h, params.weights, params.visible_bias, params.hidden_bias),
                                   Rbm.rbm_energy(v, h, params))
            weight_term = Rbm.rbm_energy(v, h, RbmParams(params.weights))
            self.assertAlmostEqual(weight_term, Rbm.rbm_energy(-v, -h, RbmParams(params.weights)))
        with self.assertRaises(DimensionMismatchError):
            Rbm.rbm_energy([1, 1, 1], [1, 1], params)

    def test_activation_probabilities(self):
        zero = RbmParams(np.zeros((2, 3)))
        np.testing.assert_array_equal(np.full(3, 0.5), Rbm.hidden_activation_prob([1, -1], zero))
        np.testing.assert_array_equal(np.full(2, 0.5), Rbm.visible_activation_prob([1, -1, 1], zero))
        params = RbmParams([[0.3], [0.1]], hidden_bias=[0.2])
        self.assertAlmostEqual(0.5 * (1 + np.tanh(0.4)), Rbm.hidden_activation_prob([1, -1], params)[0])
        self.assertEqual(1.0, Rbm.hidden_activation_prob([1, 1], RbmParams([[500.0], [500.0]]))[0])
        symmetric = np.array([[0.4, -0.2], [-0.2, 0.7]])
        np.testing.assert_allclose(Rbm.hidden_activation_prob([1, -1], RbmParams(symmetric)),
                                   Rbm.visible_activation_prob([1, -1], RbmParams(symmetric)))
        params = self._random_params(4, 3, 3)
        h = np.array([1.0, -1.0, -1.0])
        expected = [0.5 * (1 + np.tanh(sum(params.weights[i][a] * h[a] for a in range(3)) + params.visible_bias[i]))
                    for i in range(4)]
        np.testing.assert_allclose(expected, Rbm.visible_activation_prob(h, params))
        probabilities = Rbm.hidden_activation_prob(np.ones((5, 4)), params)
        self.assertTrue(np.all((probabilities > 0) & (probabilities < 1)))

    def test_sample_binary(self):
        rng = np.random.Generator(np.random.PCG64(4))
        np.testing.assert_array_equal(np.ones(10), Rbm.sample_binary(np.ones(10), rng))
        np.testing.assert_array_equal(-np.ones(10), Rbm.sample_binary(np.zeros(10), rng))
        draws = Rbm.sample_binary(np.full(100000, 0.5), rng)
        self.assertLess(abs(np.mean(draws)), 3 / np.sqrt(100000))
        with self.assertRaises(ValueError):
            Rbm.sample_binary([1.5], rng)
        first = Rbm.sample_binary(np.full(20, 0.3), np.random.Generator(np.random.PCG64(5)))
        second = Rbm.sample_binary(np.full(20, 0.3), np.random.Generator(np.random.PCG64(5)))
        np.testing.assert_array_equal(first, second)

    def test_cd1_saturated_reconstruction(self):
        params = RbmParams(100.0 * np.eye(2))
        batch = np.array([[1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]])
        gradient = Rbm.cd1_step(batch, params, np.random.Generator(np.random.PCG64(6)))
        for component in gradient.as_tuple():
            np.testing.assert_array_equal(np.zeros_like(component), component)

    def test_cd1_hand_unroll(self):
        params = RbmParams([[0.5]], [0.1], [-0.2])
        gradient = Rbm.cd1_step(np.array([[1.0]]), params, np.random.Generator(np.random.PCG64(7)))
        draws = np.random.Generator(np.random.PCG64(7))
        h = 1.0 if draws.random((1, 1))[0, 0] < 0.5 * (1 + np.tanh(0.5 * 1.0 - 0.2)) else -1.0
        v_model = 1.0 if draws.random((1, 1))[0, 0] < 0.5 * (1 + np.tanh(0.5 * h + 0.1)) else -1.0
        h_model = 1.0 if draws.random((1, 1))[0, 0] < 0.5 * (1 + np.tanh(0.5 * v_model - 0.2)) else -1.0
        self.assertEqual(1.0 * h - v_model * h_model, gradient.weights[0, 0])
        self.assertEqual(1.0 - v_model, gradient.visible_bias[0])
        self.assertEqual(h - h_model, gradient.hidden_bias[0])

    def test_cd1_bias_gradient_is_mean_difference(self):
        params = self._random_params(4, 3, 8)
        batch = np.where(np.random.Generator(np.random.PCG64(9)).random((6, 4)) < 0.5, -1.0, 1.0)
        gradient = Rbm.cd1_step(batch, params, np.random.Generator(np.random.PCG64(10)))
        draws = np.random.Generator(np.random.PCG64(10))
        h_data = np.where(draws.random((6, 3)) < Rbm.hidden_activation_prob(batch, params), 1.0, -1.0)
        v_model = np.where(draws.random((6, 4)) < Rbm.visible_activation_prob(h_data, params), 1.0, -1.0)
        h_model = np.where(draws.random((6, 3)) < Rbm.hidden_activation_prob(v_model, params), 1.0, -1.0)
        np.testing.assert_allclose(batch.mean(axis=0) - v_model.mean(axis=0), gradient.visible_bias)
        np.testing.assert_allclose(h_data.mean(axis=0) - h_model.mean(axis=0), gradient.hidden_bias)
        np.testing.assert_allclose((batch.T @ h_data - v_model.T @ h_model) / 6, gradient.weights)
        with self.assertRaises(ValueError):
            Rbm.cd1_step(np.zeros((0, 4)), params, draws)

    def test_model_expectation_matches_enumeration(self):
        params = self._random_params(3, 2, 11, scale=0.4)
        states = np.array(list(itertools.product((-1.0, 1.0), repeat=5)))
        v_states, h_states = states[:, :3], states[:, 3:]
        weights = np.exp(-Rbm.rbm_energy(v_states, h_states, params))
        partition = np.sum(weights)
        exact = np.einsum("s,si,sa->ia", weights, v_states, h_states) / partition
        marginal = np.exp(-Rbm.free_energy(np.array(list(itertools.product((-1.0, 1.0), repeat=3))), params))
        by_enumeration = [np.sum(weights[np.all(v_states == v, axis=1)]) for v in
                          itertools.product((-1.0, 1.0), repeat=3)]
        np.testing.assert_allclose(marginal / np.sum(marginal), np.array(by_enumeration) / partition)
        rng = np.random.Generator(np.random.PCG64(12))
        v = np.where(rng.random((1000, 3)) < 0.5, -1.0, 1.0)
        v, h = Rbm.gibbs_chain(v, params, 20, rng)
        chain_sums = np.zeros((1000, 3, 2))
        for _ in range(100):
            v, h = Rbm.gibbs_chain(v, params, 1, rng)
            chain_sums += v[:, :, None] * h[:, None, :]
        chain_means = chain_sums / 100
        sigma = np.std(chain_means, axis=0, ddof=1) / np.sqrt(1000)
        # six entries checked jointly: 4 sigma each stays below the false alarm rate of one 3 sigma check
        self.assertTrue(np.all(np.abs(chain_means.mean(axis=0) - exact) < 4 * sigma + 1e-12))

    def test_reconstruct(self):
        np.testing.assert_array_equal(np.full((2, 4), 0.5), Rbm.reconstruct(np.ones((2, 4)), RbmParams(np.zeros((4, 1)))))
        identity = RbmParams([[20.0]])
        self.assertGreater(Rbm.reconstruct([1.0], identity)[0], 0.999)
        self.assertLess(Rbm.reconstruct([-1.0], identity)[0], 0.001)
        params = self._random_params(4, 2, 13)
        np.testing.assert_array_equal(Rbm.reconstruct(np.ones(4), params), Rbm.reconstruct(np.ones(4), params))
        self.assertAlmostEqual(1.0, Rbm.reconstruction_error(np.ones((3, 4)), RbmParams(np.zeros((4, 1)))))

    def test_train_config_validation(self):
        with self.assertRaises(ValueError):
            TrainConfig(learning_rate=0)
        with self.assertRaises(ValueError):
            TrainConfig(batch_size=0)
        with self.assertRaises(ValueError):
            TrainConfig(epochs=-1)
        with self.assertRaises(ValueError):
            TrainConfig(init_mode="explicit")
        with self.assertRaises(ValueError):
            TrainConfig(stacked_feed="mean")

    def test_train_epochs_zero_returns_init(self):
        dataset = self._random_spin_dataset(10, 4)
        init = RbmInitializer.xavier(4, 2, np.random.Generator(np.random.PCG64(1)))
        result = RbmTrainer.train(dataset, TrainConfig(epochs=0), init)
        self.assertEqual(init, result.params)
        self.assertEqual(1, len(result.loss_history))
        with self.assertRaises(DimensionMismatchError):
            RbmTrainer.train(dataset, TrainConfig(epochs=0), RbmParams.zeros(3, 2))

    def test_train_reduces_error_and_is_reproducible(self):
        dataset = IsingSampler.generate_ising_dataset(IsingSamplerConfig(16, 400, burn_in_sweeps=100, rng_seed=3))
        config = TrainConfig(learning_rate=0.01, batch_size=50, epochs=10, rng_seed=4)
        init = RbmInitializer.initialize(config, dataset, 8)
        result = RbmTrainer.train(dataset, config, init)
        self.assertEqual(11, len(result.loss_history))
        self.assertLess(result.loss_history[-1], result.loss_history[0])
        again = RbmTrainer.train(dataset, config, RbmInitializer.initialize(config, dataset, 8))
        self.assertEqual(result.params, again.params)
        np.testing.assert_array_equal(result.loss_history, again.loss_history)

    def test_train_divergence(self):
        dataset = self._random_spin_dataset(20, 2)
        with self.assertRaises(NumericalInstabilityError):
            RbmTrainer.train(dataset, TrainConfig(learning_rate=1e308, batch_size=1, epochs=1),
                             RbmParams.zeros(2, 1))

    def test_train_stacked(self):
        dataset = self._random_spin_dataset(40, 8, seed=2)
        configs = [(4, TrainConfig(batch_size=10, epochs=2, rng_seed=1)),
                   (2, TrainConfig(batch_size=10, epochs=2, rng_seed=2, stacked_feed="sampled"))]
        results = RbmTrainer.train_stacked(dataset, configs)
        self.assertEqual(2, len(results))
        self.assertEqual((64, 16), results[0].params.weights.shape)
        self.assertEqual(16, results[1].params.visible_count)
        self.assertEqual((16, 4), results[1].params.weights.shape)
        single = RbmTrainer.train_stacked(dataset, configs[:1])[0]
        direct = RbmTrainer.train(dataset, configs[0][1], RbmInitializer.initialize(configs[0][1], dataset, 4))
        self.assertEqual(direct.params, single.params)
        with self.assertRaises(DimensionMismatchError):
            RbmTrainer.train_stacked(dataset, [(4, TrainConfig(epochs=0)), (8, TrainConfig(epochs=0))])

    def test_feed_forward(self):
        dataset = self._random_spin_dataset(5, 4)
        params = self._random_params(16, 4, 14)
        expected = RbmTrainer.feed_forward(dataset, params, "expected", None)
        self.assertEqual("real", expected.value_range)
        np.testing.assert_allclose(2 * Rbm.hidden_activation_prob(dataset.samples, params) - 1, expected.samples)
        sampled = RbmTrainer.feed_forward(dataset, params, "sampled", np.random.Generator(np.random.PCG64(1)))
        self.assertEqual("spin", sampled.value_range)

    def test_initializers(self):
        rng = np.random.Generator(np.random.PCG64(15))
        params = RbmInitializer.xavier(4, 2, rng)
        self.assertTrue(np.all(np.abs(params.weights) <= np.sqrt(6 / 20)))
        np.testing.assert_array_equal(np.zeros(16), params.visible_bias)
        block = RbmInitializer.block_spin(4, 2)
        np.testing.assert_allclose(np.sum(block.weights, axis=0), np.ones(4))
        with self.assertRaises(DimensionMismatchError):
            RbmInitializer.block_spin(5, 2)
        path = RbmParamsFile.save_params(block, os.path.join(self._temp_dir(), "init.rbmw"))
        dataset = self._random_spin_dataset(4, 4)
        loaded = RbmInitializer.initialize(TrainConfig(init_mode="explicit", init_path=path), dataset, 2)
        self.assertEqual(block, loaded)
        with self.assertRaises(DimensionMismatchError):
            RbmInitializer.initialize(TrainConfig(init_mode="explicit", init_path=path), dataset, 1)

    def test_params_file(self):
        params = RbmParams(np.arange(16.0).reshape(4, 4) / 10, np.arange(4.0), -np.arange(4.0))
        content = RbmParamsFile.to_bytes(params)
        expected = b"RBMW" + struct.pack("<III", 1, 2, 2) + struct.pack("<24d", *(np.arange(16.0) / 10),
                                                                        *np.arange(4.0), *(-np.arange(4.0)))
        self.assertEqual(expected, content)
        self.assertEqual(params, RbmParamsFile.from_bytes(content))
        with self.assertRaises(DatasetFormatError):
            RbmParamsFile.from_bytes(b"RBMX" + content[4:])
        with self.assertRaises(DatasetFormatError):
            RbmParamsFile.from_bytes(content[:-8])
        with self.assertRaises(ValueError):
            RbmParamsFile.to_bytes(RbmParams(np.zeros((3, 2))))
        df = pandas.read_csv(RbmParamsFile.export_csv(params, os.path.join(self._temp_dir(), "params.csv")))
        self.assertEqual(["parameter", "visible_index", "hidden_index", "value"], list(df.columns))
        self.assertEqual(24, len(df))
        self.assertAlmostEqual(0.7, df[(df["parameter"] == "weight") & (df["visible_index"] == 1)
                                      & (df["hidden_index"] == 3)]["value"].iloc[0])


if __name__ == '__main__':
    unittest.main()
