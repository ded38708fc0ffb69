import logging

import numpy as np

from rgflow import constants
from rgflow.dataio.Dataset import Dataset
from rgflow.helper import RgflowHelper
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError
from rgflow.rbm.NumericalInstabilityError import NumericalInstabilityError
from rgflow.rbm.Rbm import Rbm
from rgflow.rbm.RbmInitializer import RbmInitializer
from rgflow.rbm.RbmParams import RbmParams
from rgflow.rbm.TrainConfig import TrainConfig
from rgflow.rbm.TrainResult import TrainResult


class RbmTrainer:
    @staticmethod
    def train(dataset: Dataset, config: TrainConfig, init: RbmParams):
        """
        CD-1 training: every epoch shuffles the samples and applies param += learning_rate * gradient once per batch.
        @param dataset: the non empty training set
        @param config: the training hyperparameters
        @param init: the initial parameters
        @return: the TrainResult holding the final parameters and the reconstruction error before training and after
        every epoch
        """
        if dataset.sample_count == 0:
            raise ValueError("Cannot train on an empty dataset")
        if dataset.dimension != init.visible_count:
            raise DimensionMismatchError(f"Dataset dimension {dataset.dimension} does not match "
                                         f"{init.visible_count} visible units")
        rng = RgflowHelper.rng_streams(config.rng_seed, 2)[0]
        weights = np.array(init.weights, copy=True)
        visible_bias = np.array(init.visible_bias, copy=True)
        hidden_bias = np.array(init.hidden_bias, copy=True)
        samples = dataset.samples
        loss_history = [Rbm.reconstruction_error(samples, init)]
        logging.info("Training %s -> %s units on %s samples for %s epochs, batch %s, learning rate %s",
                     init.visible_count, init.hidden_count, dataset.sample_count, config.epochs, config.batch_size,
                     config.learning_rate)
        logging.info("Initial reconstruction error %.6f", loss_history[0])
        for epoch in range(config.epochs):
            order = rng.permutation(dataset.sample_count)
            for start in range(0, dataset.sample_count, config.batch_size):
                batch = samples[order[start:start + config.batch_size]]
                weights_delta, visible_delta, hidden_delta = Rbm.cd1_arrays(batch, weights, visible_bias,
                                                                            hidden_bias, rng)
                weights += config.learning_rate * weights_delta
                visible_bias += config.learning_rate * visible_delta
                hidden_bias += config.learning_rate * hidden_delta
            if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(visible_bias))
                    and np.all(np.isfinite(hidden_bias))):
                raise NumericalInstabilityError(f"Parameters diverged at epoch {epoch + 1}")
            params = RbmParams(weights, visible_bias, hidden_bias, init.visible_side, init.hidden_side)
            error = Rbm.reconstruction_error(samples, params)
            if not np.isfinite(error):
                raise NumericalInstabilityError(f"Non finite reconstruction error at epoch {epoch + 1}")
            loss_history.append(error)
            logging.info("Epoch %s/%s reconstruction error %.6f", epoch + 1, config.epochs, error)
        params = init if config.epochs == 0 else \
            RbmParams(weights, visible_bias, hidden_bias, init.visible_side, init.hidden_side)
        return TrainResult(params, np.array(loss_history), config)

    @staticmethod
    def feed_forward(dataset: Dataset, params: RbmParams, feed: str, rng):
        """
        Hidden representation of a dataset used as the training set of the next stacked layer.
        @param feed: 'expected' for 2p - 1 real values or 'sampled' for ±1 draws
        """
        probabilities = Rbm.hidden_activation_prob(dataset.samples, params)
        provenance = f"{dataset.provenance}|hidden={params.hidden_side},feed={feed}"
        if feed == "sampled":
            return Dataset(Rbm.sample_binary(probabilities, rng), params.hidden_side, constants.VALUE_RANGE_SPIN,
                           provenance)
        return Dataset(np.clip(2.0 * probabilities - 1.0, -1.0, 1.0), params.hidden_side,
                       constants.VALUE_RANGE_REAL, provenance)

    @staticmethod
    def train_stacked(dataset: Dataset, layer_configs, rgm_configs=None):
        """
        Greedy layer-wise training: each layer trains on the hidden states its predecessor produces for the data.
        @param dataset: the training set of the first layer
        @param layer_configs: ordered (hidden_side, TrainConfig) pairs, optionally extended with explicit initial
        RbmParams as third item
        @param rgm_configs: optional per layer RgmConfig for the rgm initialization mode
        @return: one TrainResult per layer
        """
        RgflowHelper.banner('STACKED RBM TRAINING')
        results = []
        layer_dataset = dataset
        for index, layer in enumerate(layer_configs):
            hidden_side, config = layer[0], layer[1]
            init = layer[2] if len(layer) > 2 else None
            if init is not None and (init.visible_count != layer_dataset.dimension
                                     or init.hidden_count != hidden_side ** 2):
                raise DimensionMismatchError(f"Layer {index + 1} parameters {init} do not chain with "
                                             f"{layer_dataset.dimension} inputs and hidden side {hidden_side}")
            if hidden_side > layer_dataset.side_length:
                raise DimensionMismatchError(f"Layer {index + 1} hidden side {hidden_side} exceeds its visible "
                                             f"side {layer_dataset.side_length}")
            logging.info("Layer %s: %sx%s -> %sx%s", index + 1, layer_dataset.side_length, layer_dataset.side_length,
                         hidden_side, hidden_side)
            if init is None:
                rgm_config = rgm_configs[index] if rgm_configs is not None else None
                init = RbmInitializer.initialize(config, layer_dataset, hidden_side, rgm_config)
            result = RbmTrainer.train(layer_dataset, config, init)
            results.append(result)
            if index < len(layer_configs) - 1:
                layer_dataset = RbmTrainer.feed_forward(layer_dataset, result.params, config.stacked_feed,
                                                        RgflowHelper.rng_streams(config.rng_seed, 3)[2])
        return results
