from rgflow.dataio.source.DatasetSource import DatasetSource


class ImageFolderDatasetSource(DatasetSource):
    def __init__(self, path: str, target_side: int, grayscale: bool = True, tile: int = None, max_samples=None,
                 test_fraction=0.0, split_seed=0):
        """
        @param path: the images folder
        @param target_side: the side every sample is resized to
        @param grayscale: whether color images are converted to luma
        @param tile: optional number of tiles per image side
        """
        super().__init__(max_samples, test_fraction, split_seed)
        self.path = path
        self.target_side = target_side
        self.grayscale = grayscale
        self.tile = tile

    def describe(self):
        return f"images {self.path}"
