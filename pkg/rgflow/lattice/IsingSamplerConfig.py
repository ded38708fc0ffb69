from rgflow import constants


class IsingSamplerConfig:
    """
    Parameters of a Metropolis Ising chain.
    """
    def __init__(self, side_length: int, sample_count: int, temperature: float = constants.DEFAULT_ISING_TEMPERATURE,
                 coupling: float = constants.DEFAULT_ISING_COUPLING,
                 sweeps_per_sample: int = constants.DEFAULT_SWEEPS_PER_SAMPLE,
                 burn_in_sweeps: int = constants.DEFAULT_BURN_IN_SWEEPS, rng_seed: int = 0):
        """
        @param side_length: the lattice side L
        @param sample_count: number of recorded lattices
        @param temperature: the temperature T, beta = 1 / T
        @param coupling: the nearest neighbour coupling J
        @param sweeps_per_sample: sweeps between two recorded lattices
        @param burn_in_sweeps: sweeps discarded before the first record
        @param rng_seed: seed of the PCG64 generator driving the chain
        """
        if side_length < 2:
            raise ValueError(f"side_length must be at least 2, got {side_length}")
        if not temperature > 0:
            raise ValueError(f"temperature must be positive, got {temperature}")
        if sample_count < 1:
            raise ValueError(f"sample_count must be at least 1, got {sample_count}")
        if sweeps_per_sample < 1:
            raise ValueError(f"sweeps_per_sample must be at least 1, got {sweeps_per_sample}")
        if burn_in_sweeps < 0:
            raise ValueError(f"burn_in_sweeps must be non-negative, got {burn_in_sweeps}")
        self.side_length = int(side_length)
        self.sample_count = int(sample_count)
        self.temperature = float(temperature)
        self.coupling = float(coupling)
        self.sweeps_per_sample = int(sweeps_per_sample)
        self.burn_in_sweeps = int(burn_in_sweeps)
        self.rng_seed = int(rng_seed)

    @property
    def beta(self):
        return 1.0 / self.temperature
