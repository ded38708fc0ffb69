import numpy as np
import scipy.linalg
from scipy import stats

from rgflow.helper import RgflowHelper
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError
from rgflow.rbm.NumericalInstabilityError import NumericalInstabilityError
from rgflow.spectral.RadialSpectrum import RadialSpectrum
from rgflow.spectral.SpectralComparison import SpectralComparison
from rgflow.spectral.SvdBundle import SvdBundle


class Spectral:
    """
    Singular value and Fourier machinery used to inspect weight matrices.
    """
    @staticmethod
    def fix_signs(vectors, partners=None):
        """
        Flips every row so that its largest magnitude component is positive, the lowest index winning ties. Partner
        rows are flipped alongside.
        """
        vectors = np.array(vectors, dtype=np.float64, copy=True)
        if vectors.shape[0] == 0:
            return vectors, partners
        pivots = np.argmax(np.abs(vectors), axis=1)
        signs = np.where(vectors[np.arange(vectors.shape[0]), pivots] < 0, -1.0, 1.0)
        vectors = vectors * signs[:, None]
        if partners is not None:
            partners = np.asarray(partners, dtype=np.float64) * signs[:, None]
        return vectors, partners

    @staticmethod
    def svd(matrix, visible_side: int = None, hidden_side: int = None):
        """
        Thin singular value decomposition with deterministic signs.
        @param matrix: the N_v × N_h matrix
        @param visible_side: lattice side of the visible vectors when known
        @param hidden_side: lattice side of the hidden vectors when known
        @return: the SvdBundle with min(N_v, N_h) triples
        """
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise DimensionMismatchError(f"SVD needs a matrix, got {matrix.ndim} dimensions")
        if not np.all(np.isfinite(matrix)):
            raise NumericalInstabilityError("SVD input contains non-finite entries")
        left, singular_values, right = scipy.linalg.svd(matrix, full_matrices=False)
        visible_vectors, hidden_vectors = Spectral.fix_signs(left.T, right)
        return SvdBundle(singular_values, visible_vectors, hidden_vectors, visible_side, hidden_side)

    @staticmethod
    def truncate_svd(bundle: SvdBundle, top_k: int = None, relative_floor: float = None):
        """
        Keeps either the first top_k triples or those with S_I >= relative_floor * S_1.
        """
        if (top_k is None) == (relative_floor is None):
            raise ValueError("Exactly one of top_k and relative_floor must be given")
        if top_k is not None:
            if top_k < 0:
                raise ValueError(f"top_k must be non-negative, got {top_k}")
            return bundle.select(slice(0, min(top_k, bundle.rank)))
        if relative_floor > 1:
            raise ValueError(f"relative_floor {relative_floor} above 1 would discard every singular value")
        if relative_floor < 0:
            raise ValueError(f"relative_floor must be non-negative, got {relative_floor}")
        if bundle.rank == 0:
            return bundle
        kept = int(np.count_nonzero(bundle.singular_values >= relative_floor * bundle.singular_values[0]))
        return bundle.select(slice(0, kept))

    @staticmethod
    def fft2d(lattice_view):
        """
        2D discrete Fourier transform F(u, v) = sum_mn f(m, n) exp(-i2pi(mu + nv) / L) shifted so that the zero
        frequency sits at index (L // 2, L // 2).
        """
        lattice_view = np.asarray(lattice_view)
        if lattice_view.ndim != 2 or lattice_view.shape[0] != lattice_view.shape[1]:
            raise DimensionMismatchError(f"fft2d needs a square array, got shape {lattice_view.shape}")
        return np.fft.fftshift(np.fft.fft2(lattice_view))

    @staticmethod
    def radius_map(side: int):
        center = side // 2
        offsets = np.arange(side) - center
        return np.rint(np.sqrt(offsets[:, None] ** 2 + offsets[None, :] ** 2)).astype(np.int64)

    @staticmethod
    def radial_fft(vector, side: int = None):
        """
        Averages the magnitude of the centered 2D transform over integer radius annuli of width 1.
        @param vector: a flattened L × L lattice
        @param side: the lattice side, inferred when missing
        @return: the RadialSpectrum with modes 0..max radius
        """
        vector = np.asarray(vector, dtype=np.float64)
        try:
            inferred = RgflowHelper.perfect_square_side(len(vector))
        except ValueError as e:
            raise DimensionMismatchError(str(e)) from e
        if side is not None and side != inferred:
            raise DimensionMismatchError(f"Side {side} does not match vector length {len(vector)}")
        transform = Spectral.fft2d(vector.reshape(inferred, inferred))
        radii = Spectral.radius_map(inferred).reshape(-1)
        magnitude = np.abs(transform).reshape(-1)
        counts = np.bincount(radii)
        safe_counts = np.maximum(counts, 1)
        magnitudes = np.bincount(radii, weights=magnitude) / safe_counts
        power = np.bincount(radii, weights=magnitude ** 2) / safe_counts
        return RadialSpectrum(np.arange(len(counts)), magnitudes, counts, power)

    @staticmethod
    def compare_visible_hidden(bundle: SvdBundle, index: int, rescale: float = None):
        """
        Relative L2 difference between the visible radial spectrum and the rescaled hidden one over modes
        0..floor(L_h / 2).
        @param bundle: the decomposition, carrying both lattice sides
        @param index: the singular triple to inspect
        @param rescale: factor applied to the hidden spectrum, fitted by least squares when missing
        @return: the SpectralComparison
        """
        if not 0 <= index < bundle.rank:
            raise IndexError(f"Singular index {index} out of range 0..{bundle.rank - 1}")
        if bundle.visible_side is None or bundle.hidden_side is None:
            raise DimensionMismatchError("Visible and hidden lattice sides are needed to compare spectra")
        visible_spectrum = Spectral.radial_fft(bundle.visible_vectors[index], bundle.visible_side)
        hidden_spectrum = Spectral.radial_fft(bundle.hidden_vectors[index], bundle.hidden_side)
        max_shared = bundle.hidden_side // 2
        visible = visible_spectrum.magnitudes[:max_shared + 1]
        hidden = hidden_spectrum.magnitudes[:max_shared + 1]
        if rescale is None:
            hidden_norm = float(np.dot(hidden, hidden))
            rescale = float(np.dot(visible, hidden)) / hidden_norm if hidden_norm > 0 else 1.0
        difference = float(np.linalg.norm(visible - rescale * hidden))
        reference = float(np.linalg.norm(visible))
        if reference > 0:
            relative = difference / reference
        else:
            relative = 0.0 if difference == 0 else float("inf")
        return SpectralComparison(index, float(bundle.singular_values[index]), rescale, relative, max_shared,
                                  visible_spectrum, hidden_spectrum)

    @staticmethod
    def low_mode_support(spectrum: RadialSpectrum, cutoff_mode: int):
        """
        Share of the total power held by annuli up to cutoff_mode, every annulus weighted by its number of bins.
        """
        energy = spectrum.counts * spectrum.power
        total = float(np.sum(energy))
        if total <= 0:
            return 0.0
        return float(np.sum(energy[:max(cutoff_mode, -1) + 1])) / total

    @staticmethod
    def effective_parameter_chain(visible_count: int, hidden_count: int, kept: int, cutoff_mode: int,
                                  max_mode: int):
        """
        Parameter counting after singular value truncation and Fourier support restriction. Hidden singular vectors
        share the visible Fourier coefficients and add nothing.
        @return: the full, truncated and effective counts
        """
        if min(visible_count, hidden_count, kept, max_mode) <= 0:
            raise ValueError("Unit counts, kept values and maximum mode must be positive")
        if cutoff_mode <= 0:
            raise ValueError("cutoff_mode must be positive")
        if cutoff_mode > max_mode:
            raise ValueError(f"cutoff_mode {cutoff_mode} above max_mode {max_mode}")
        if kept > min(visible_count, hidden_count):
            raise ValueError(f"Cannot keep {kept} singular values of a {visible_count}x{hidden_count} matrix")
        full = visible_count * hidden_count
        truncated = kept * visible_count
        effective = truncated * cutoff_mode ** 2 // max_mode ** 2
        return full, truncated, effective

    @staticmethod
    def effective_parameter_count(visible_count: int, hidden_count: int, kept: int, cutoff_mode: int,
                                  max_mode: int):
        return Spectral.effective_parameter_chain(visible_count, hidden_count, kept, cutoff_mode, max_mode)[2]

    @staticmethod
    def top_share(values, fraction: float):
        """
        Share of sum(values) carried by the largest ceil(fraction * len(values)) entries.
        """
        values = np.sort(np.asarray(values, dtype=np.float64))[::-1]
        total = float(np.sum(values))
        if total <= 0:
            return 0.0
        count = max(1, int(np.ceil(fraction * len(values))))
        return float(np.sum(values[:count])) / total

    @staticmethod
    def spectrum_shape_fit(values, interior_fraction: float = 0.8):
        """
        R² of a straight line fitted to the central interior_fraction of a descending spectrum.
        """
        values = np.asarray(values, dtype=np.float64)
        margin = int(round(len(values) * (1 - interior_fraction) / 2))
        interior = values[margin:len(values) - margin]
        if len(interior) < 3:
            raise ValueError("Not enough values to fit the spectrum shape")
        fit = stats.linregress(np.arange(len(interior)), interior)
        return fit.rvalue ** 2
