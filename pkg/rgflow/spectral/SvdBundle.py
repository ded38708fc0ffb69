import numpy as np

from rgflow.rbm.DimensionMismatchError import DimensionMismatchError


class SvdBundle:
    """
    Descending singular values with their paired visible and hidden singular vectors, stored as rows so that
    sum_I S_I * outer(visible_vectors[I], hidden_vectors[I]) rebuilds the decomposed matrix.
    """
    def __init__(self, singular_values, visible_vectors, hidden_vectors, visible_side: int = None,
                 hidden_side: int = None):
        singular_values = np.asarray(singular_values, dtype=np.float64)
        visible_vectors = np.asarray(visible_vectors, dtype=np.float64)
        hidden_vectors = np.asarray(hidden_vectors, dtype=np.float64)
        rank = len(singular_values)
        if visible_vectors.ndim != 2 or hidden_vectors.ndim != 2 or visible_vectors.shape[0] != rank \
                or hidden_vectors.shape[0] != rank:
            raise DimensionMismatchError("Singular vectors must be given as one row per singular value")
        if np.any(singular_values < 0) or np.any(np.diff(singular_values) > 0):
            raise ValueError("Singular values must be non-negative and sorted descending")
        self.singular_values = singular_values
        self.visible_vectors = visible_vectors
        self.hidden_vectors = hidden_vectors
        self.visible_side = visible_side
        self.hidden_side = hidden_side

    @property
    def rank(self):
        return len(self.singular_values)

    def reconstruct(self):
        return (self.visible_vectors.T * self.singular_values) @ self.hidden_vectors

    def select(self, indexes):
        return SvdBundle(self.singular_values[indexes], self.visible_vectors[indexes],
                         self.hidden_vectors[indexes], self.visible_side, self.hidden_side)
