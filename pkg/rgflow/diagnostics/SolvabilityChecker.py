import logging
import math
import multiprocessing
from itertools import combinations

import numpy as np
import scipy.linalg

from rgflow import constants
from rgflow.dataio.Dataset import Dataset
from rgflow.diagnostics.Alignment import Alignment
from rgflow.diagnostics.SolvabilityReport import SolvabilityReport
from rgflow.helper import RgflowHelper


class SolvabilityChecker:
    """
    Decides whether a dataset admits a low dimensional effective description: random subsets of growing size must
    produce covariance eigenvectors spanning the same subspace.
    """
    @staticmethod
    def retained_modes(samples, eigen_floor: float):
        centered = samples - np.mean(samples, axis=0)
        covariance = centered.T @ centered / len(samples)
        eigenvalues, eigenvectors = scipy.linalg.eigh((covariance + covariance.T) / 2.0)
        largest = eigenvalues[-1]
        if largest <= constants.MODE_COLLAPSE_TOLERANCE:
            return np.zeros((0, samples.shape[1]))
        keep = eigenvalues >= eigen_floor * largest
        return eigenvectors[:, keep][:, ::-1].T

    @staticmethod
    def run_trial(samples, subset_size: int, eigen_floor: float, growth_fraction: float, seed):
        """
        Grows a random subset by growth_fraction of its size, at least one sample, until the retained eigenvector
        count stays unchanged across two successive growth steps or the whole dataset is used.
        @return: the retained orthonormal basis as rows and the final subset size
        """
        rng = np.random.Generator(np.random.PCG64(seed))
        order = rng.permutation(len(samples))
        size = min(subset_size, len(samples))
        counts = []
        while True:
            basis = SolvabilityChecker.retained_modes(samples[order[:size]], eigen_floor)
            counts.append(basis.shape[0])
            stabilized = len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]
            if stabilized or size >= len(samples):
                return basis, size
            size = min(len(samples), size + max(1, math.ceil(growth_fraction * size)))

    @staticmethod
    def pair_alignment(basis_a, basis_b):
        if basis_a.shape[0] == 0 or basis_b.shape[0] == 0:
            return 1.0 if basis_a.shape[0] == basis_b.shape[0] else 0.0
        report = Alignment.alignment_spectrum_from_bases(basis_a, basis_b)
        return report.mean_top(min(basis_a.shape[0], basis_b.shape[0]))

    @staticmethod
    def solvability_check(dataset: Dataset, trials: int, subset_size: int,
                          eigen_floor: float = constants.DEFAULT_EIGEN_FLOOR,
                          threshold: float = constants.DEFAULT_STABILITY_THRESHOLD,
                          growth_fraction: float = constants.DEFAULT_GROWTH_FRACTION,
                          full_rank_fraction: float = constants.DEFAULT_FULL_RANK_FRACTION,
                          rng_seed: int = 0, cpus: int = 1):
        """
        @param dataset: the data to inspect
        @param trials: number of independent random subsets, at least 2
        @param subset_size: initial subset size, at most the dataset size
        @param eigen_floor: eigenvalues at or above eigen_floor times the largest are retained
        @param threshold: every pairwise mean top-k alignment must reach it for a stable verdict
        @param growth_fraction: relative subset growth between two steps
        @param full_rank_fraction: retained dimension share above which no low dimensional description exists
        @param rng_seed: seed spawning one independent stream per trial
        @param cpus: worker processes running the trials
        @return: the SolvabilityReport
        """
        if trials < 2:
            raise ValueError(f"The solvability check needs at least 2 trials, got {trials}")
        if not 1 <= subset_size <= dataset.sample_count:
            raise ValueError(f"subset_size must lie within 1..{dataset.sample_count}, got {subset_size}")
        RgflowHelper.banner('SOLVABILITY CHECK')
        samples = dataset.samples
        if np.max(np.var(samples, axis=0)) <= constants.MODE_COLLAPSE_TOLERANCE:
            logging.info("Dataset has no variance, the problem is trivially stable")
            return SolvabilityReport(constants.VERDICT_TRIVIALLY_STABLE, False, [], [0] * trials, [], threshold)
        seeds = np.random.SeedSequence(rng_seed).spawn(trials)
        arguments = [(samples, subset_size, eigen_floor, growth_fraction, seed) for seed in seeds]
        if cpus > 1:
            with multiprocessing.Pool(processes=min(cpus, trials)) as pool:
                outcomes = pool.starmap(SolvabilityChecker.run_trial, arguments)
        else:
            outcomes = [SolvabilityChecker.run_trial(*argument) for argument in arguments]
        bases = [basis for basis, _ in outcomes]
        retained_counts = [basis.shape[0] for basis in bases]
        subset_sizes = [size for _, size in outcomes]
        logging.info("Retained modes per trial %s with final subset sizes %s", retained_counts, subset_sizes)
        pairwise = [(a, b, SolvabilityChecker.pair_alignment(bases[a], bases[b]))
                    for a, b in combinations(range(trials), 2)]
        full_rank = float(np.mean(retained_counts)) > full_rank_fraction * dataset.dimension
        if full_rank:
            verdict = constants.VERDICT_UNSTABLE
        else:
            stable = all(value >= threshold for _, _, value in pairwise)
            verdict = constants.VERDICT_STABLE if stable else constants.VERDICT_UNSTABLE
        report = SolvabilityReport(verdict, full_rank, pairwise, retained_counts, subset_sizes, threshold)
        logging.info("Solvability %s", report.summary())
        return report
