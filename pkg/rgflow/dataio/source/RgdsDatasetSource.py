from rgflow.dataio.source.DatasetSource import DatasetSource


class RgdsDatasetSource(DatasetSource):
    """
    Implementation of DatasetSource reading a previously saved RGDS file.
    """
    def __init__(self, path: str, max_samples=None, test_fraction=0.0, split_seed=0):
        super().__init__(max_samples, test_fraction, split_seed)
        self.path = path

    def describe(self):
        return f"rgds {self.path}"
