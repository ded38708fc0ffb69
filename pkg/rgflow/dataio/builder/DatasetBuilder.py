import logging
from abc import ABC, abstractmethod

from rgflow.dataio.Dataset import Dataset
from rgflow.dataio.source.DatasetSource import DatasetSource


class DatasetBuilder(ABC):
    @abstractmethod
    def build(self, source: DatasetSource):
        pass

    @staticmethod
    def trim(dataset: Dataset, source: DatasetSource):
        if source.max_samples is not None and source.max_samples < dataset.sample_count:
            logging.info("Keeping the first %s of %s samples", source.max_samples, dataset.sample_count)
            dataset = dataset.subset(source.max_samples)
        return dataset
