from rgflow.dataio.ImageFolderReader import ImageFolderReader
from rgflow.dataio.builder.DatasetBuilder import DatasetBuilder
from rgflow.dataio.source.ImageFolderDatasetSource import ImageFolderDatasetSource


class ImageFolderDatasetBuilder(DatasetBuilder):
    def build(self, source: ImageFolderDatasetSource):
        dataset = ImageFolderReader.load_image_folder(source.path, source.target_side, source.grayscale, source.tile)
        return self.trim(dataset, source)
