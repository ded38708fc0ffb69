import numpy as np

from rgflow.rbm.DimensionMismatchError import DimensionMismatchError


class FourierCoeffs:
    """
    Retained low Fourier coefficients of every mode I. Entry [I, k + alpha, p + alpha] holds C^I(k, p) for signed
    frequencies -alpha <= k, p <= alpha, which satisfy C^I(-k, -p) = conj(C^I(k, p)).
    """
    def __init__(self, coefficients, alpha: int):
        coefficients = np.asarray(coefficients, dtype=np.complex128)
        width = 2 * alpha + 1
        if coefficients.ndim == 2:
            coefficients = coefficients[None, :, :]
        if coefficients.ndim != 3 or coefficients.shape[1:] != (width, width):
            raise DimensionMismatchError(f"Coefficients of shape {coefficients.shape} do not match alpha {alpha}")
        self.coefficients = coefficients
        self.alpha = int(alpha)

    @staticmethod
    def from_entries(entries, alpha: int):
        width = 2 * alpha + 1
        if len(entries) == 0:
            return FourierCoeffs(np.zeros((0, width, width), dtype=np.complex128), alpha)
        return FourierCoeffs(np.stack(entries), alpha)

    @property
    def count(self):
        return self.coefficients.shape[0]

    @property
    def frequencies(self):
        return np.arange(-self.alpha, self.alpha + 1)

    def _phases(self, side: int, sign: float):
        return np.exp(sign * 2j * np.pi * np.outer(np.arange(side), self.frequencies) / side)

    def visible_vectors(self, visible_side: int):
        """
        (1 / L_v²) sum_kp C(k, p) exp(+i2pi(mk + np) / L_v) for every mode, flattened row-major.
        """
        phases = self._phases(visible_side, 1.0)
        lattices = np.einsum("mk,ikp,np->imn", phases, self.coefficients, phases, optimize=True) / visible_side ** 2
        return lattices.reshape(self.count, visible_side ** 2)

    def hidden_vectors(self, hidden_side: int):
        """
        (1 / L_h²) sum_xy C(x, y) / 2 exp(-i2pi(ax + by) / L_h) for every mode, flattened row-major.
        """
        phases = self._phases(hidden_side, -1.0)
        lattices = np.einsum("ax,ixy,by->iab", phases, self.coefficients / 2.0, phases, optimize=True) / hidden_side ** 2
        return lattices.reshape(self.count, hidden_side ** 2)

    def visible_vector(self, index: int, visible_side: int):
        return FourierCoeffs(self.coefficients[index], self.alpha).visible_vectors(visible_side)[0]

    def hidden_vector(self, index: int, hidden_side: int):
        return FourierCoeffs(self.coefficients[index], self.alpha).hidden_vectors(hidden_side)[0]
