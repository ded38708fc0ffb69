import logging

import numpy as np

from rgflow.coarsegrain.BlockSpinSpec import BlockSpinSpec
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError
from rgflow.rbm.RbmParams import RbmParams
from rgflow.spectral.Spectral import Spectral


class BlockSpin:
    @staticmethod
    def block_matrix_1d(spec: BlockSpinSpec):
        """
        L_v × L_h membership matrix of one lattice axis.
        """
        matrix = np.zeros((spec.visible_side, spec.hidden_side))
        for output in range(spec.hidden_side):
            start = output * spec.stride
            matrix[start:min(start + spec.block_size, spec.visible_side), output] = 1.0
        return matrix

    @staticmethod
    def block_spin_matrix(spec: BlockSpinSpec):
        """
        Builds the L_v² × L_h² block sum matrix. Visible site (x, y) maps to row x * L_v + y and output site (b, c) to
        column b * L_h + c, so the matrix is the Kronecker product of the per axis membership matrices.
        """
        axis = BlockSpin.block_matrix_1d(spec)
        return np.kron(axis, axis)

    @staticmethod
    def apply_block_spin(v, matrix):
        v = np.asarray(v, dtype=np.float64)
        if v.shape[-1] != matrix.shape[0]:
            raise DimensionMismatchError(f"Vector of length {v.shape[-1]} does not match {matrix.shape[0]} rows")
        return v @ matrix

    @staticmethod
    def block_spin_svd_profile(spec: BlockSpinSpec):
        logging.info("Decomposing block spin matrix %s", spec)
        return Spectral.svd(BlockSpin.block_spin_matrix(spec), spec.visible_side, spec.hidden_side)

    @staticmethod
    def block_spin_init_params(spec: BlockSpinSpec, gain: float = 1.0):
        """
        Block spin matrix scaled by gain as RBM weights with zero biases.
        """
        return RbmParams(gain * BlockSpin.block_spin_matrix(spec), visible_side=spec.visible_side,
                         hidden_side=spec.hidden_side)
