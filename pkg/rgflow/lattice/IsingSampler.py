import logging

import numpy as np
from numba import njit

from rgflow import constants
from rgflow.dataio.Dataset import Dataset
from rgflow.helper import RgflowHelper
from rgflow.lattice.IsingSamplerConfig import IsingSamplerConfig
from rgflow.lattice.SpinLattice import SpinLattice


@njit
def _metropolis_kernel(spins, beta, coupling, rand_ij, rand_accept):
    side = spins.shape[0]
    for k in range(rand_ij.shape[0]):
        i = rand_ij[k, 0]
        j = rand_ij[k, 1]
        neighbours = (spins[(i + 1) % side, j] + spins[(i - 1) % side, j] +
                      spins[i, (j + 1) % side] + spins[i, (j - 1) % side])
        delta_energy = 2.0 * coupling * spins[i, j] * neighbours
        if delta_energy <= 0 or rand_accept[k] < np.exp(-beta * delta_energy):
            spins[i, j] = -spins[i, j]


class IsingSampler:
    """
    Metropolis Monte Carlo for the nearest neighbour Ising model on a periodic square lattice.
    """
    @staticmethod
    def create_rng(seed):
        return np.random.Generator(np.random.PCG64(seed))

    @staticmethod
    def ising_energy(lattice: SpinLattice, coupling: float):
        """
        H = -J * sum over unordered nearest neighbour bonds of s_i * s_j with periodic boundaries. Every site owns its
        right and down bonds so each bond is counted once.
        """
        spins = lattice.spins.astype(np.int64)
        bonds = spins * np.roll(spins, -1, axis=0) + spins * np.roll(spins, -1, axis=1)
        return -float(coupling) * float(np.sum(bonds))

    @staticmethod
    def magnetization(lattice: SpinLattice):
        return float(np.mean(lattice.spins))

    @staticmethod
    def nearest_neighbor_correlation(lattice: SpinLattice):
        spins = lattice.spins.astype(np.int64)
        bonds = spins * np.roll(spins, -1, axis=0) + spins * np.roll(spins, -1, axis=1)
        return float(np.sum(bonds)) / (2 * lattice.side_length ** 2)

    @staticmethod
    def _sweep_in_place(spins, config: IsingSamplerConfig, rng):
        side = spins.shape[0]
        updates = side * side
        rand_ij = rng.integers(0, side, size=(updates, 2))
        rand_accept = rng.random(updates)
        _metropolis_kernel(spins, config.beta, config.coupling, rand_ij, rand_accept)

    @staticmethod
    def metropolis_sweep(lattice: SpinLattice, config: IsingSamplerConfig, rng):
        """
        Performs L² single spin Metropolis updates on randomly drawn sites, accepting a flip with probability
        min(1, exp(-dE / T)).
        @param lattice: the input lattice, left untouched
        @param config: the sampler configuration providing temperature and coupling
        @param rng: a numpy Generator, the only source of randomness
        @return: the updated lattice
        """
        spins = lattice.spins.copy()
        IsingSampler._sweep_in_place(spins, config, rng)
        return SpinLattice(spins)

    @staticmethod
    def generate_ising_dataset(config: IsingSamplerConfig):
        if config.sample_count <= 0:
            raise ValueError(f"sample_count must be positive, got {config.sample_count}")
        RgflowHelper.banner('ISING MONTE CARLO')
        logging.info("Lattice %sx%s, T=%.3f, J=%.3f, %s samples every %s sweeps after %s burn-in sweeps",
                     config.side_length, config.side_length, config.temperature, config.coupling,
                     config.sample_count, config.sweeps_per_sample, config.burn_in_sweeps)
        rng = IsingSampler.create_rng(config.rng_seed)
        spins = SpinLattice.random(config.side_length, rng).spins
        for _ in range(config.burn_in_sweeps):
            IsingSampler._sweep_in_place(spins, config, rng)
        logging.info("Burn-in finished")
        samples = np.empty((config.sample_count, config.side_length ** 2), dtype=np.float64)
        magnetizations = np.empty(config.sample_count)
        for index in range(config.sample_count):
            for _ in range(config.sweeps_per_sample):
                IsingSampler._sweep_in_place(spins, config, rng)
            samples[index] = spins.reshape(-1)
            magnetizations[index] = np.abs(np.mean(spins))
        tau = RgflowHelper.integrated_autocorrelation_time(magnetizations)
        logging.info("Mean |magnetization| %.4f, integrated autocorrelation time %.2f samples",
                     np.mean(magnetizations), tau)
        if tau > 1:
            logging.warning("Recorded samples look correlated (tau=%.2f), consider raising sweeps_per_sample", tau)
        provenance = (f"ising:L={config.side_length},T={config.temperature},J={config.coupling},"
                      f"burn_in={config.burn_in_sweeps},spacing={config.sweeps_per_sample},seed={config.rng_seed}")
        return Dataset(samples, config.side_length, constants.VALUE_RANGE_SPIN, provenance)
