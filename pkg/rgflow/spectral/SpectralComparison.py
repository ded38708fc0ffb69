class SpectralComparison:
    """
    Agreement between the radial spectra of a visible singular vector and its rescaled hidden partner over the modes
    both lattices share.
    """
    def __init__(self, index, singular_value, rescale, relative_difference, max_shared_mode, visible_spectrum,
                 hidden_spectrum):
        self.index = index
        self.singular_value = singular_value
        self.rescale = rescale
        self.relative_difference = relative_difference
        self.max_shared_mode = max_shared_mode
        self.visible_spectrum = visible_spectrum
        self.hidden_spectrum = hidden_spectrum
