import logging

import numpy as np

from rgflow import constants
from rgflow.dataio.Dataset import Dataset
from rgflow.dataio.IdxReader import IdxReader
from rgflow.dataio.ImageFolderReader import ImageFolderReader
from rgflow.dataio.builder.DatasetBuilder import DatasetBuilder
from rgflow.dataio.source.IdxDatasetSource import IdxDatasetSource


class IdxDatasetBuilder(DatasetBuilder):
    def build(self, source: IdxDatasetSource):
        dataset = self.trim(IdxReader.load_idx(source.images_path, source.labels_path), source)
        if source.target_side is not None and source.target_side != dataset.side_length:
            logging.info("Resizing IDX images from %s to %s", dataset.side_length, source.target_side)
            side = dataset.side_length
            levels = (dataset.samples + 1.0) * constants.PIXEL_MAX / 2.0
            resized = [np.clip(ImageFolderReader.resize(level.reshape(side, side), source.target_side), 0,
                               constants.PIXEL_MAX).reshape(-1) * 2.0 / constants.PIXEL_MAX - 1.0
                       for level in levels]
            dataset = Dataset(np.clip(np.array(resized), -1.0, 1.0), source.target_side, dataset.value_range,
                              f"{dataset.provenance}|side={source.target_side}", dataset.labels)
        return dataset
