class RadialSpectrum:
    """
    Angle averaged 2D Fourier transform. For every integer radius it keeps the mean |F| of the annulus, the number of
    frequency bins it holds and their mean |F|².
    """
    def __init__(self, modes, magnitudes, counts, power):
        self.modes = modes
        self.magnitudes = magnitudes
        self.counts = counts
        self.power = power

    @property
    def max_mode(self):
        return int(self.modes[-1])
