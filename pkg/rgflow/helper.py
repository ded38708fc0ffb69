import logging
import math
import os
import tempfile

import numpy as np
from statsmodels.tsa.stattools import acf

from rgflow import constants


class RgflowHelper:
    def __init__(self) -> None:
        super().__init__()

    @staticmethod
    def banner(title):
        logging.info(constants.BANNER)
        logging.info(title)
        logging.info(constants.BANNER)

    @staticmethod
    def perfect_square_side(length):
        """
        Returns the lattice side L such that L * L == length.
        @param length: the flattened vector length
        @return: the integer side
        """
        length = int(length)
        side = math.isqrt(length) if length >= 0 else -1
        if side < 0 or side * side != length:
            raise ValueError(f"Length {length} is not a perfect square")
        return side

    @staticmethod
    def pixels_to_unit(pixels):
        values = 2.0 * (np.asarray(pixels, dtype=np.float64) / constants.PIXEL_MAX) - 1.0
        return np.clip(values, -1.0, 1.0)

    @staticmethod
    def probabilities_to_pixels(probabilities):
        return np.round(constants.PIXEL_MAX * np.clip(probabilities, 0.0, 1.0)).astype(np.uint8)

    @staticmethod
    def atomic_write(path, writer, binary=True):
        """
        Writes a file by first dumping it into a temporary sibling and then renaming it over the target.
        @param path: the destination file
        @param writer: callable receiving the open file handle
        @param binary: whether the handle is opened in binary mode
        """
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix=os.path.basename(path))
        try:
            with os.fdopen(fd, 'wb' if binary else 'w', **({} if binary else {'newline': ''})) as f:
                writer(f)
            os.replace(tmp_path, path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise
        logging.info("Written %s", path)
        return path

    @staticmethod
    def write_csv(df, path):
        return RgflowHelper.atomic_write(path, lambda f: df.to_csv(f, index=False), binary=False)

    @staticmethod
    def integrated_autocorrelation_time(series, max_lag=None):
        """
        Integrated autocorrelation time of a scalar series, summing the autocorrelation function until its first
        non-positive value.
        """
        series = np.asarray(series, dtype=np.float64)
        if len(series) < 3 or np.var(series) == 0:
            return 0.5
        max_lag = len(series) // 2 if max_lag is None else min(max_lag, len(series) - 1)
        autocorrelation = acf(series, nlags=max_lag, fft=True)
        tau = 0.5
        for value in autocorrelation[1:]:
            if value <= 0:
                break
            tau += value
        return tau

    @staticmethod
    def rng_streams(seed, count):
        """
        Independent PCG64 generators spawned from one seed.
        """
        return [np.random.Generator(np.random.PCG64(child))
                for child in np.random.SeedSequence(seed).spawn(count)]
