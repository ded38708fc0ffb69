import numpy as np

from rgflow import constants
from rgflow.rbm.NumericalInstabilityError import NumericalInstabilityError


class AlignmentReport:
    """
    Descending eigenvalues of O = P_data P_trained P_data together with the number of them strictly above each
    threshold.
    """
    def __init__(self, eigenvalues, subspace_dims, thresholds=constants.ALIGNMENT_THRESHOLDS):
        eigenvalues = np.sort(np.asarray(eigenvalues, dtype=np.float64))[::-1]
        epsilon = constants.ORTHONORMALITY_TOLERANCE
        if len(eigenvalues) > 0 and (eigenvalues[0] > 1 + epsilon or eigenvalues[-1] < -epsilon):
            raise NumericalInstabilityError("Alignment eigenvalues fall outside [0, 1]")
        self.eigenvalues = eigenvalues
        self.subspace_dims = tuple(subspace_dims)
        self.count_above = {threshold: int(np.count_nonzero(eigenvalues > threshold)) for threshold in thresholds}

    def mean_top(self, count: int = None):
        """
        Mean of the largest count eigenvalues, min(subspace_dims) of them by default.
        """
        count = min(self.subspace_dims) if count is None else count
        if count <= 0:
            return 0.0
        return float(np.mean(self.eigenvalues[:count]))

    def count_unit(self, tolerance: float = 1e-6):
        return int(np.count_nonzero(np.abs(self.eigenvalues - 1.0) <= tolerance))
