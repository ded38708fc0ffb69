import logging
import os
import struct

import numpy as np
import pandas

from rgflow import constants
from rgflow.dataio.Dataset import Dataset
from rgflow.dataio.DatasetFormatError import DatasetFormatError
from rgflow.helper import RgflowHelper


class DatasetFile:
    """
    RGDS container: little endian header with magic, version, sample count, side length and range tag, followed by the
    row-major f64 samples and an optional provenance trailer (u32 byte length plus UTF-8 text).
    """
    HEADER_FORMAT = "<4sIIIB"
    HEADER_SIZE = struct.calcsize(HEADER_FORMAT)
    TRAILER_LENGTH_FORMAT = "<I"

    @staticmethod
    def to_bytes(dataset: Dataset, provenance: bool = True):
        """
        @param provenance: appends the provenance trailer, without it the file holds only the header and samples
        """
        if dataset.sample_count == 0:
            raise ValueError("Empty datasets cannot be saved")
        header = struct.pack(DatasetFile.HEADER_FORMAT, constants.RGDS_MAGIC, constants.RGDS_VERSION,
                             dataset.sample_count, dataset.side_length,
                             constants.VALUE_RANGE_TAGS[dataset.value_range])
        content = header + dataset.samples.astype("<f8").tobytes(order="C")
        if not provenance:
            return content
        text = dataset.provenance.encode("utf-8")
        return content + struct.pack(DatasetFile.TRAILER_LENGTH_FORMAT, len(text)) + text

    @staticmethod
    def from_bytes(content: bytes, name: str = "memory"):
        if len(content) < DatasetFile.HEADER_SIZE:
            raise DatasetFormatError(f"{name}: truncated header")
        magic, version, sample_count, side_length, tag = struct.unpack_from(DatasetFile.HEADER_FORMAT, content, 0)
        if magic != constants.RGDS_MAGIC:
            raise DatasetFormatError(f"{name}: bad magic {magic!r}")
        if version != constants.RGDS_VERSION:
            raise DatasetFormatError(f"{name}: unsupported version {version}")
        if sample_count == 0 or side_length == 0:
            raise DatasetFormatError(f"{name}: empty dataset")
        ranges = {value: key for key, value in constants.VALUE_RANGE_TAGS.items()}
        if tag not in ranges:
            raise DatasetFormatError(f"{name}: unknown range tag {tag}")
        data_size = sample_count * side_length * side_length * 8
        data_end = DatasetFile.HEADER_SIZE + data_size
        if len(content) < data_end:
            raise DatasetFormatError(f"{name}: truncated samples, expected {data_size} bytes")
        samples = np.frombuffer(content, dtype="<f8", count=sample_count * side_length * side_length,
                                offset=DatasetFile.HEADER_SIZE).reshape(sample_count, side_length * side_length)
        provenance = f"rgds:{name}"
        trailer = content[data_end:]
        if len(trailer) > 0:
            if len(trailer) < 4:
                raise DatasetFormatError(f"{name}: truncated provenance trailer")
            (length,) = struct.unpack_from(DatasetFile.TRAILER_LENGTH_FORMAT, trailer, 0)
            if len(trailer) != 4 + length:
                raise DatasetFormatError(f"{name}: provenance trailer length mismatch")
            provenance = trailer[4:].decode("utf-8")
        try:
            return Dataset(samples.astype(np.float64), side_length, ranges[tag], provenance)
        except ValueError as e:
            raise DatasetFormatError(f"{name}: {e}") from e

    @staticmethod
    def save_dataset(dataset: Dataset, path: str, provenance: bool = True):
        content = DatasetFile.to_bytes(dataset, provenance)
        RgflowHelper.atomic_write(path, lambda f: f.write(content))
        logging.info("Saved %s samples of side %s (%s)", dataset.sample_count, dataset.side_length,
                     dataset.value_range)
        return path

    @staticmethod
    def load_dataset(path: str):
        with open(path, "rb") as f:
            content = f.read()
        return DatasetFile.from_bytes(content, os.path.basename(path))

    @staticmethod
    def export_csv(dataset: Dataset, path: str):
        df = pandas.DataFrame(dataset.samples, columns=[f"s{index}" for index in range(dataset.dimension)])
        return RgflowHelper.write_csv(df, path)
