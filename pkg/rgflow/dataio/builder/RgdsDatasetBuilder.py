from rgflow.dataio.DatasetFile import DatasetFile
from rgflow.dataio.builder.DatasetBuilder import DatasetBuilder
from rgflow.dataio.source.RgdsDatasetSource import RgdsDatasetSource


class RgdsDatasetBuilder(DatasetBuilder):
    def build(self, source: RgdsDatasetSource):
        return self.trim(DatasetFile.load_dataset(source.path), source)
