from rgflow.dataio.builder.DatasetBuilder import DatasetBuilder
from rgflow.dataio.source.IsingDatasetSource import IsingDatasetSource
from rgflow.lattice.IsingSampler import IsingSampler


class IsingDatasetBuilder(DatasetBuilder):
    def build(self, source: IsingDatasetSource):
        return self.trim(IsingSampler.generate_ising_dataset(source.sampler_config), source)
