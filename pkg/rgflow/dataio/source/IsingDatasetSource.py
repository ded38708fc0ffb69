from rgflow.dataio.source.DatasetSource import DatasetSource
from rgflow.lattice.IsingSamplerConfig import IsingSamplerConfig


class IsingDatasetSource(DatasetSource):
    """
    Implementation of DatasetSource generating lattices by Metropolis Monte Carlo.
    """
    def __init__(self, sampler_config: IsingSamplerConfig, max_samples=None, test_fraction=0.0, split_seed=0):
        super().__init__(max_samples, test_fraction, split_seed)
        self.sampler_config = sampler_config

    def describe(self):
        return f"ising {self.sampler_config.side_length}x{self.sampler_config.side_length} " \
               f"T={self.sampler_config.temperature}"
