import numpy as np

from rgflow import constants
from rgflow.helper import RgflowHelper
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError


class Dataset:
    """
    Immutable set of flattened square lattices. Spin datasets hold only ±1 values while real datasets lie within
    [-1, 1], so all downstream math treats both uniformly.
    """
    def __init__(self, samples, side_length: int = None, value_range: str = constants.VALUE_RANGE_REAL,
                 provenance: str = "", labels=None):
        """
        @param samples: an N_s × L² array
        @param side_length: the lattice side L, inferred from the sample length when missing
        @param value_range: 'spin' or 'real'
        @param provenance: free text describing the data origin
        @param labels: optional per-sample labels kept as metadata
        """
        samples = np.array(samples, dtype=np.float64, copy=True)
        if samples.ndim != 2:
            raise DimensionMismatchError(f"Dataset samples must be a 2D array, got {samples.ndim} dimensions")
        if samples.shape[1] == 0:
            raise DimensionMismatchError("Dataset samples must have a positive length")
        try:
            inferred_side = RgflowHelper.perfect_square_side(samples.shape[1])
        except ValueError as e:
            raise DimensionMismatchError(str(e)) from e
        if side_length is not None and side_length != inferred_side:
            raise DimensionMismatchError(f"Side length {side_length} does not match sample length {samples.shape[1]}")
        if value_range not in constants.VALUE_RANGE_TAGS:
            raise ValueError(f"Unknown value range '{value_range}'")
        if not np.all(np.isfinite(samples)):
            raise ValueError("Dataset samples must be finite")
        if value_range == constants.VALUE_RANGE_SPIN and not np.all(np.abs(samples) == 1):
            raise ValueError("Spin datasets can only contain -1 and +1")
        if value_range == constants.VALUE_RANGE_REAL and np.any(np.abs(samples) > 1):
            raise ValueError("Real datasets must lie within [-1, 1]")
        if labels is not None:
            labels = np.array(labels, copy=True)
            if len(labels) != samples.shape[0]:
                raise DimensionMismatchError(f"Got {len(labels)} labels for {samples.shape[0]} samples")
            labels.setflags(write=False)
        samples.setflags(write=False)
        self.samples = samples
        self.side_length = inferred_side
        self.value_range = value_range
        self.provenance = provenance
        self.labels = labels

    @property
    def sample_count(self):
        return self.samples.shape[0]

    @property
    def dimension(self):
        return self.samples.shape[1]

    def __len__(self):
        return self.sample_count

    def subset(self, count: int):
        count = min(int(count), self.sample_count)
        labels = None if self.labels is None else self.labels[:count]
        return Dataset(self.samples[:count], self.side_length, self.value_range,
                       f"{self.provenance}|first={count}", labels)

    def split(self, test_fraction: float, seed: int):
        """
        Deterministic seeded shuffle followed by a split in train and test parts.
        @param test_fraction: share of samples kept for testing, in [0, 1)
        @param seed: the shuffle seed
        @return: the train and test datasets
        """
        if not 0 <= test_fraction < 1:
            raise ValueError(f"test_fraction must be within [0, 1), got {test_fraction}")
        order = np.random.Generator(np.random.PCG64(seed)).permutation(self.sample_count)
        test_count = int(round(self.sample_count * test_fraction))
        test_indexes, train_indexes = order[:test_count], order[test_count:]
        parts = []
        for part, indexes in (("train", train_indexes), ("test", test_indexes)):
            labels = None if self.labels is None else self.labels[indexes]
            parts.append(Dataset(self.samples[indexes], self.side_length, self.value_range,
                                 f"{self.provenance}|split={part},test_fraction={test_fraction},seed={seed}", labels))
        return parts[0], parts[1]

    def __repr__(self):
        return (f"Dataset(samples={self.sample_count}, side_length={self.side_length}, "
                f"value_range={self.value_range}, provenance={self.provenance!r})")
