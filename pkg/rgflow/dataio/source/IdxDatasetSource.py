from rgflow.dataio.source.DatasetSource import DatasetSource


class IdxDatasetSource(DatasetSource):
    """
    Implementation of DatasetSource reading MNIST-like IDX files, optionally resized to a smaller lattice.
    """
    def __init__(self, images_path: str, labels_path: str = None, target_side: int = None, max_samples=None,
                 test_fraction=0.0, split_seed=0):
        super().__init__(max_samples, test_fraction, split_seed)
        self.images_path = images_path
        self.labels_path = labels_path
        self.target_side = target_side

    def describe(self):
        return f"idx {self.images_path}"
