import numpy as np

from rgflow.helper import RgflowHelper
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError


class SpinLattice:
    """
    Square grid of ±1 spins. It is both the unit of Ising data and the geometric view of any flattened vector of a
    perfect-square length.
    """
    def __init__(self, spins):
        """
        @param spins: an L×L array holding only -1 and +1 values, L >= 2
        """
        spins = np.array(spins, copy=True)
        if spins.ndim != 2 or spins.shape[0] != spins.shape[1]:
            raise DimensionMismatchError(f"Spin lattice must be square, got shape {spins.shape}")
        if spins.shape[0] < 2:
            raise ValueError(f"Spin lattice side must be at least 2, got {spins.shape[0]}")
        if not np.all(np.abs(spins) == 1):
            raise ValueError("Spin lattice entries must be exactly -1 or +1")
        self.spins = spins.astype(np.int8)
        self.side_length = self.spins.shape[0]

    @staticmethod
    def from_vector(vector):
        vector = np.asarray(vector)
        side = RgflowHelper.perfect_square_side(len(vector))
        return SpinLattice(vector.reshape(side, side))

    @staticmethod
    def ordered(side_length, sign=1):
        return SpinLattice(np.full((side_length, side_length), 1 if sign >= 0 else -1, dtype=np.int8))

    @staticmethod
    def random(side_length, rng):
        return SpinLattice(rng.choice(np.array([-1, 1], dtype=np.int8), size=(side_length, side_length)))

    def flatten(self):
        return self.spins.astype(np.float64).reshape(-1)

    def flipped(self, row, column):
        spins = self.spins.copy()
        spins[row, column] *= -1
        return SpinLattice(spins)

    def __eq__(self, other):
        return isinstance(other, SpinLattice) and np.array_equal(self.spins, other.spins)

    def __repr__(self):
        return f"SpinLattice(side_length={self.side_length})"
