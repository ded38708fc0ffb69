import math

import numpy as np

from rgflow.rbm.DimensionMismatchError import DimensionMismatchError


class RbmParams:
    """
    Weights W (N_v × N_h) plus visible and hidden biases of a restricted Boltzmann machine. The arrays are copied and
    frozen on construction so trained parameters can be shared read-only.

    Lattice sides are kept when N_v and N_h are perfect squares; toy models with other sizes carry no geometry.
    """
    def __init__(self, weights, visible_bias=None, hidden_bias=None, visible_side: int = None,
                 hidden_side: int = None):
        weights = np.array(weights, dtype=np.float64, copy=True)
        if weights.ndim != 2:
            raise DimensionMismatchError(f"Weights must be a matrix, got {weights.ndim} dimensions")
        visible_count, hidden_count = weights.shape
        visible_bias = np.zeros(visible_count) if visible_bias is None \
            else np.array(visible_bias, dtype=np.float64, copy=True)
        hidden_bias = np.zeros(hidden_count) if hidden_bias is None \
            else np.array(hidden_bias, dtype=np.float64, copy=True)
        if visible_bias.shape != (visible_count,):
            raise DimensionMismatchError(f"Visible bias shape {visible_bias.shape} does not match {visible_count}")
        if hidden_bias.shape != (hidden_count,):
            raise DimensionMismatchError(f"Hidden bias shape {hidden_bias.shape} does not match {hidden_count}")
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(visible_bias))
                and np.all(np.isfinite(hidden_bias))):
            raise ValueError("RBM parameters must be finite")
        self.visible_side = RbmParams._side(visible_count, visible_side)
        self.hidden_side = RbmParams._side(hidden_count, hidden_side)
        for array in (weights, visible_bias, hidden_bias):
            array.setflags(write=False)
        self.weights = weights
        self.visible_bias = visible_bias
        self.hidden_bias = hidden_bias

    @staticmethod
    def _side(count, side):
        if side is None:
            root = math.isqrt(count)
            return root if root * root == count else None
        if side * side != count:
            raise DimensionMismatchError(f"Side {side} does not match {count} units")
        return int(side)

    @staticmethod
    def zeros(visible_side: int, hidden_side: int):
        return RbmParams(np.zeros((visible_side ** 2, hidden_side ** 2)), visible_side=visible_side,
                         hidden_side=hidden_side)

    @property
    def visible_count(self):
        return self.weights.shape[0]

    @property
    def hidden_count(self):
        return self.weights.shape[1]

    def scaled(self, gain: float):
        return RbmParams(self.weights * gain, self.visible_bias * gain, self.hidden_bias * gain,
                         self.visible_side, self.hidden_side)

    def __eq__(self, other):
        return isinstance(other, RbmParams) and np.array_equal(self.weights, other.weights) \
            and np.array_equal(self.visible_bias, other.visible_bias) \
            and np.array_equal(self.hidden_bias, other.hidden_bias)

    def __repr__(self):
        return f"RbmParams(visible={self.visible_count}, hidden={self.hidden_count})"
