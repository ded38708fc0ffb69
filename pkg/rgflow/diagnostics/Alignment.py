import logging

import numpy as np
import scipy.linalg

from rgflow import constants
from rgflow.diagnostics.AlignmentReport import AlignmentReport
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError
from rgflow.rbm.RbmParams import RbmParams
from rgflow.spectral.SvdBundle import SvdBundle


class Alignment:
    """
    Measures how well two subspaces line up through the operator O = P_data P_trained P_data.
    """
    @staticmethod
    def orthonormal_rows(vectors, reorthonormalize: bool = False):
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
        if vectors.shape[0] == 0:
            return vectors
        deviation = np.max(np.abs(vectors @ vectors.T - np.eye(vectors.shape[0])))
        if deviation > constants.ORTHONORMALITY_TOLERANCE:
            if not reorthonormalize:
                raise ValueError(f"Vectors are not orthonormal, Gram deviation {deviation:.3e}")
            logging.debug("Re-orthonormalizing %s vectors with Gram deviation %.3e", vectors.shape[0], deviation)
            basis, _ = scipy.linalg.qr(vectors.T, mode="economic")
            vectors = basis.T
        return vectors

    @staticmethod
    def projector(vectors, reorthonormalize: bool = False):
        """
        P = sum_u u u^T over an orthonormal set given as rows.
        @param vectors: k × N orthonormal rows
        @param reorthonormalize: when set, non orthonormal input is replaced by a QR basis of its span instead of
        being rejected
        """
        vectors = Alignment.orthonormal_rows(vectors, reorthonormalize)
        return vectors.T @ vectors

    @staticmethod
    def _check_projector(projector, name):
        deviation = max(float(np.max(np.abs(projector - projector.T))),
                        float(np.max(np.abs(projector @ projector - projector))))
        if deviation > constants.ORTHONORMALITY_TOLERANCE:
            raise ValueError(f"{name} is not an orthogonal projector, deviation {deviation:.3e}")
        return int(round(np.trace(projector)))

    @staticmethod
    def alignment_spectrum(data_projector, trained_projector):
        data_projector = np.asarray(data_projector, dtype=np.float64)
        trained_projector = np.asarray(trained_projector, dtype=np.float64)
        if data_projector.shape != trained_projector.shape or data_projector.ndim != 2 \
                or data_projector.shape[0] != data_projector.shape[1]:
            raise DimensionMismatchError(f"Projectors of shapes {data_projector.shape} and "
                                         f"{trained_projector.shape} cannot be compared")
        data_rank = Alignment._check_projector(data_projector, "P_data")
        trained_rank = Alignment._check_projector(trained_projector, "P_trained")
        operator = data_projector @ trained_projector @ data_projector
        eigenvalues = scipy.linalg.eigvalsh((operator + operator.T) / 2.0)
        return AlignmentReport(eigenvalues, (data_rank, trained_rank))

    @staticmethod
    def alignment_spectrum_from_bases(data_vectors, trained_vectors):
        """
        Same spectrum as alignment_spectrum computed from orthonormal bases through their principal angles: the
        non zero eigenvalues of O are the squared singular values of U_data U_trained^T.
        """
        data_vectors = Alignment.orthonormal_rows(data_vectors)
        trained_vectors = Alignment.orthonormal_rows(trained_vectors)
        if data_vectors.shape[1] != trained_vectors.shape[1]:
            raise DimensionMismatchError(f"Bases live in {data_vectors.shape[1]} and {trained_vectors.shape[1]} "
                                         f"dimensions")
        dimension = data_vectors.shape[1]
        eigenvalues = np.zeros(dimension)
        if data_vectors.shape[0] > 0 and trained_vectors.shape[0] > 0:
            cosines = scipy.linalg.svdvals(data_vectors @ trained_vectors.T)
            eigenvalues[:len(cosines)] = np.clip(cosines ** 2, 0.0, 1.0)
        return AlignmentReport(eigenvalues, (data_vectors.shape[0], trained_vectors.shape[0]))

    @staticmethod
    def random_subspace_baseline(data_vectors, count: int, trials: int, rng):
        """
        Mean top-count alignment between the data subspace and random count-dimensional subspaces.
        @return: one value per trial
        """
        data_vectors = np.atleast_2d(np.asarray(data_vectors, dtype=np.float64))
        dimension = data_vectors.shape[1]
        values = []
        for _ in range(trials):
            basis, _ = scipy.linalg.qr(rng.standard_normal((dimension, count)), mode="economic")
            values.append(Alignment.alignment_spectrum_from_bases(data_vectors, basis.T).mean_top(count))
        return np.array(values)

    @staticmethod
    def bias_vector_similarity(params: RbmParams, bundle: SvdBundle):
        """
        Absolute cosine similarity between the visible bias and the top visible singular vector.
        """
        bias_norm = np.linalg.norm(params.visible_bias)
        if bundle.rank == 0 or bias_norm == 0:
            return 0.0
        top = bundle.visible_vectors[0]
        return float(abs(np.dot(params.visible_bias, top)) / (bias_norm * np.linalg.norm(top)))
