from abc import ABC, abstractmethod


class DatasetSource(ABC):
    """
    Root class to be extended to describe where a training dataset comes from and how it is trimmed.
    """
    def __init__(self, max_samples: int = None, test_fraction: float = 0.0, split_seed: int = 0):
        """
        @param max_samples: keep only the first max_samples samples after ingest
        @param test_fraction: share of samples held out for testing
        @param split_seed: the seed of the train/test shuffle
        """
        self.max_samples = max_samples
        self.test_fraction = test_fraction
        self.split_seed = split_seed

    @abstractmethod
    def describe(self):
        """
        Returns a short human readable description of the source
        """
        pass
