import logging

import numpy as np
import scipy.linalg

from rgflow import constants
from rgflow.coarsegrain.BlockSpin import BlockSpin
from rgflow.coarsegrain.BlockSpinSpec import BlockSpinSpec
from rgflow.dataio.Dataset import Dataset
from rgflow.helper import RgflowHelper
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError
from rgflow.rbm.NumericalInstabilityError import NumericalInstabilityError
from rgflow.rbm.RbmParams import RbmParams
from rgflow.rgm.CovarianceModes import CovarianceModes
from rgflow.rgm.FourierCoeffs import FourierCoeffs
from rgflow.rgm.RgmConfig import RgmConfig
from rgflow.spectral.Spectral import Spectral


class RgmBuilder:
    """
    Computes renormalization group machine parameters straight from a training set: covariance eigenvectors,
    low pass Fourier truncation, block spin singular value estimates and spectral biases.
    """
    @staticmethod
    def data_covariance(dataset: Dataset):
        """
        C = (1 / N_s) sum_A (x_A - mean)(x_A - mean)^T
        """
        if dataset.sample_count < 2:
            raise ValueError(f"Covariance needs at least 2 samples, got {dataset.sample_count}")
        centered = dataset.samples - np.mean(dataset.samples, axis=0)
        covariance = centered.T @ centered / dataset.sample_count
        return (covariance + covariance.T) / 2.0

    @staticmethod
    def top_covariance_modes(covariance, kappa: int):
        covariance = np.asarray(covariance, dtype=np.float64)
        if covariance.ndim != 2 or covariance.shape[0] != covariance.shape[1]:
            raise DimensionMismatchError(f"Covariance must be square, got shape {covariance.shape}")
        scale = max(1.0, float(np.max(np.abs(covariance)))) if covariance.size > 0 else 1.0
        if np.max(np.abs(covariance - covariance.T)) > constants.SYMMETRY_TOLERANCE * scale:
            raise ValueError("Covariance matrix is not symmetric")
        dimension = covariance.shape[0]
        if not 0 <= kappa <= dimension:
            raise ValueError(f"kappa must lie within 0..{dimension}, got {kappa}")
        if kappa == 0:
            return CovarianceModes(np.zeros(0), np.zeros((0, dimension)))
        eigenvalues, eigenvectors = scipy.linalg.eigh(covariance, subset_by_index=[dimension - kappa,
                                                                                    dimension - 1])
        eigenvalues = eigenvalues[::-1]
        eigenvectors, _ = Spectral.fix_signs(eigenvectors[:, ::-1].T)
        return CovarianceModes(eigenvalues, eigenvectors)

    @staticmethod
    def default_kappa(covariance, hidden_count: int, eigen_floor: float = constants.DEFAULT_EIGEN_FLOOR):
        """
        Number of covariance eigenvalues at or above eigen_floor times the largest, capped by the hidden units.
        """
        eigenvalues = scipy.linalg.eigvalsh(covariance)
        largest = eigenvalues[-1] if len(eigenvalues) > 0 else 0.0
        if largest <= constants.MODE_COLLAPSE_TOLERANCE:
            return 0
        return int(min(hidden_count, np.count_nonzero(eigenvalues >= eigen_floor * largest)))

    @staticmethod
    def fourier_truncate(eigvec, alpha: int):
        """
        2D DFT of the vector on its lattice keeping only the signed frequencies with |k|, |p| <= alpha.
        @return: the (2 alpha + 1) × (2 alpha + 1) coefficient block
        """
        eigvec = np.asarray(eigvec, dtype=np.float64)
        try:
            side = RgflowHelper.perfect_square_side(len(eigvec))
        except ValueError as e:
            raise DimensionMismatchError(str(e)) from e
        if alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {alpha}")
        transform = np.fft.fft2(eigvec.reshape(side, side))
        frequencies = np.arange(-alpha, alpha + 1) % side
        block = transform[np.ix_(frequencies, frequencies)]
        return (block + np.conj(block[::-1, ::-1])) / 2.0

    @staticmethod
    def estimate_singular_value(eigvec, block_spec: BlockSpinSpec, block_matrix=None):
        """
        Norm of the block spin image of the vector.
        """
        block_matrix = BlockSpin.block_spin_matrix(block_spec) if block_matrix is None else block_matrix
        return float(np.linalg.norm(BlockSpin.apply_block_spin(eigvec, block_matrix)))

    @staticmethod
    def assemble_rgm_weights(coeffs: FourierCoeffs, singular_values, config: RgmConfig):
        """
        W = sum_I S_I * outer(visible_I, hidden_I) where visible_I is the inverse transform of C^I on the visible
        lattice and hidden_I the transform of C^I / 2 with the opposite phase on the hidden lattice.
        """
        singular_values = np.asarray(singular_values, dtype=np.float64)
        if len(singular_values) != coeffs.count:
            raise DimensionMismatchError(f"Got {len(singular_values)} singular values for {coeffs.count} modes")
        if coeffs.alpha != config.alpha:
            raise DimensionMismatchError(f"Coefficients cut at {coeffs.alpha} but config alpha is {config.alpha}")
        weights = np.zeros((config.visible_side ** 2, config.hidden_side ** 2))
        if coeffs.count == 0:
            return weights
        visible = coeffs.visible_vectors(config.visible_side)
        hidden = coeffs.hidden_vectors(config.hidden_side)
        for index in range(coeffs.count):
            weights += singular_values[index] * np.outer(visible[index].real, hidden[index].real)
        imaginary = (visible.real.T * singular_values) @ hidden.imag + (visible.imag.T * singular_values) @ hidden.real
        residual = float(np.max(np.abs(imaginary)))
        if residual > constants.IMAGINARY_TOLERANCE * max(1.0, float(np.max(np.abs(weights)))):
            raise NumericalInstabilityError(f"RGM weights keep an imaginary part of {residual:.3e}")
        return weights

    @staticmethod
    def rgm_biases(top_visible, top_hidden, top_singular_value: float):
        """
        Biases equal to the largest singular value times the normalized top visible and hidden vectors.
        """
        biases = []
        for vector in (top_visible, top_hidden):
            vector = np.asarray(vector, dtype=np.float64)
            norm = np.linalg.norm(vector)
            biases.append(np.zeros_like(vector) if norm == 0 else top_singular_value * vector / norm)
        return biases[0], biases[1]

    @staticmethod
    def build_rgm(dataset: Dataset, config: RgmConfig):
        """
        Composes covariance, eigen decomposition, Fourier truncation, singular value estimation, weight assembly and
        biases into a complete set of RBM parameters.
        @param dataset: the training data on the visible lattice
        @param config: the truncation parameters
        @return: the RbmParams of the renormalization group machine
        """
        if dataset.side_length != config.visible_side:
            raise DimensionMismatchError(f"Dataset side {dataset.side_length} does not match {config.visible_side}")
        RgflowHelper.banner('RGM CONSTRUCTION')
        covariance = RgmBuilder.data_covariance(dataset)
        kappa = config.kappa
        if kappa is None:
            kappa = RgmBuilder.default_kappa(covariance, config.hidden_side ** 2, config.eigen_floor)
            logging.info("Selected kappa=%s modes above %.3f of the largest eigenvalue", kappa, config.eigen_floor)
        modes = RgmBuilder.top_covariance_modes(covariance, kappa)
        largest = modes.eigenvalues[0] if modes.count > 0 else 0.0
        alive = modes.eigenvalues > constants.MODE_COLLAPSE_TOLERANCE * max(1.0, largest)
        if np.count_nonzero(alive) < modes.count:
            logging.warning("Dropping %s collapsed modes with vanishing variance", modes.count - np.count_nonzero(alive))
        eigenvectors = modes.eigenvectors[alive]
        logging.info("Building RGM %sx%s -> %sx%s with %s modes and alpha=%s", config.visible_side,
                     config.visible_side, config.hidden_side, config.hidden_side, len(eigenvectors), config.alpha)
        if len(eigenvectors) == 0:
            logging.warning("No mode carries variance, returning zero parameters")
            return RbmParams.zeros(config.visible_side, config.hidden_side)
        coeffs = FourierCoeffs.from_entries([RgmBuilder.fourier_truncate(vector, config.alpha)
                                             for vector in eigenvectors], config.alpha)
        block_matrix = BlockSpin.block_spin_matrix(config.block_spec)
        singular_values = np.array([RgmBuilder.estimate_singular_value(vector, config.block_spec, block_matrix)
                                    for vector in eigenvectors])
        logging.info("Estimated singular values from %.4f down to %.4f", singular_values[0], singular_values[-1])
        weights = config.gain * RgmBuilder.assemble_rgm_weights(coeffs, singular_values, config)
        visible_bias, hidden_bias = RgmBuilder.rgm_biases(coeffs.visible_vector(0, config.visible_side).real,
                                                          coeffs.hidden_vector(0, config.hidden_side).real,
                                                          singular_values[0])
        return RbmParams(weights, visible_bias, hidden_bias, config.visible_side, config.hidden_side)
