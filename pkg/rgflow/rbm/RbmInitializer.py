import logging

import numpy as np

from rgflow.coarsegrain.BlockSpin import BlockSpin
from rgflow.coarsegrain.BlockSpinSpec import BlockSpinSpec
from rgflow.dataio.Dataset import Dataset
from rgflow.helper import RgflowHelper
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError
from rgflow.rbm.RbmParams import RbmParams
from rgflow.rbm.RbmParamsFile import RbmParamsFile
from rgflow.rbm.TrainConfig import TrainConfig
from rgflow.rgm.RgmBuilder import RgmBuilder
from rgflow.rgm.RgmConfig import RgmConfig


class RbmInitializer:
    @staticmethod
    def xavier(visible_side: int, hidden_side: int, rng):
        """
        Weights drawn uniformly within ±sqrt(6 / (N_v + N_h)) and zero biases.
        """
        visible_count, hidden_count = visible_side ** 2, hidden_side ** 2
        limit = np.sqrt(6.0 / (visible_count + hidden_count))
        return RbmParams(rng.uniform(-limit, limit, size=(visible_count, hidden_count)), visible_side=visible_side,
                         hidden_side=hidden_side)

    @staticmethod
    def block_spin(visible_side: int, hidden_side: int, block_size: int = None, gain: float = None):
        if visible_side % hidden_side != 0:
            raise DimensionMismatchError(f"Visible side {visible_side} is not a multiple of hidden side {hidden_side}")
        stride = visible_side // hidden_side
        block_size = stride if block_size is None else block_size
        gain = 1.0 / block_size ** 2 if gain is None else gain
        return BlockSpin.block_spin_init_params(BlockSpinSpec(visible_side, block_size, stride), gain)

    @staticmethod
    def initialize(config: TrainConfig, dataset: Dataset, hidden_side: int, rgm_config=None):
        """
        Produces the initial parameters of a training run according to config.init_mode.
        @param config: the training configuration
        @param dataset: the training data, used by the rgm mode when no init_path is given
        @param hidden_side: the hidden lattice side
        @param rgm_config: the RgmConfig used when building the initial machine from data
        @return: the initial RbmParams
        """
        visible_side = dataset.side_length
        logging.info("Initializing %sx%s -> %sx%s parameters with mode %s", visible_side, visible_side, hidden_side,
                     hidden_side, config.init_mode)
        if config.init_mode == "xavier":
            params = RbmInitializer.xavier(visible_side, hidden_side,
                                           RgflowHelper.rng_streams(config.rng_seed, 2)[1])
        elif config.init_mode == "block_spin":
            params = RbmInitializer.block_spin(visible_side, hidden_side, config.init_block_size, config.init_gain)
        elif config.init_path is not None:
            params = RbmParamsFile.load_params(config.init_path)
        else:
            params = RgmBuilder.build_rgm(dataset, rgm_config if rgm_config is not None
                                          else RgmConfig(visible_side, hidden_side))
        if params.visible_count != dataset.dimension or params.hidden_count != hidden_side ** 2:
            raise DimensionMismatchError(f"Initial parameters {params} do not map {dataset.dimension} visible units "
                                         f"onto {hidden_side ** 2} hidden units")
        return params
