import gzip
import logging
import os
import struct

import numpy as np

from rgflow import constants
from rgflow.dataio.Dataset import Dataset
from rgflow.dataio.DatasetFormatError import DatasetFormatError
from rgflow.helper import RgflowHelper


class IdxReader:
    """
    Parser for the big endian IDX containers MNIST and fashion-MNIST are distributed in. Files ending in .gz are
    decompressed on the fly.
    """
    @staticmethod
    def _read_bytes(path):
        opener = gzip.open if path.endswith(".gz") else open
        with opener(path, "rb") as f:
            return f.read()

    @staticmethod
    def parse_images(content: bytes, name: str = "memory"):
        if len(content) < 16:
            raise DatasetFormatError(f"{name}: truncated IDX header")
        magic, count, rows, columns = struct.unpack(">IIII", content[:16])
        if magic != constants.IDX_IMAGES_MAGIC:
            raise DatasetFormatError(f"{name}: magic number mismatch in image file ({magic:#010x})")
        if rows != columns:
            raise DatasetFormatError(f"{name}: images are not square ({rows}x{columns})")
        expected = count * rows * columns
        if len(content) - 16 < expected:
            raise DatasetFormatError(f"{name}: truncated pixel data, expected {expected} bytes")
        return np.frombuffer(content, dtype=np.uint8, count=expected, offset=16).reshape(count, rows * columns), rows

    @staticmethod
    def parse_labels(content: bytes, name: str = "memory"):
        if len(content) < 8:
            raise DatasetFormatError(f"{name}: truncated IDX header")
        magic, count = struct.unpack(">II", content[:8])
        if magic != constants.IDX_LABELS_MAGIC:
            raise DatasetFormatError(f"{name}: magic number mismatch in label file ({magic:#010x})")
        if len(content) - 8 < count:
            raise DatasetFormatError(f"{name}: truncated label data")
        return np.frombuffer(content, dtype=np.uint8, count=count, offset=8)

    @staticmethod
    def load_idx(images_path: str, labels_path: str = None):
        """
        Reads an IDX image file, mapping every pixel p to 2 * (p / 255) - 1.
        @param images_path: the images file, optionally gzip compressed
        @param labels_path: an optional labels file kept as metadata
        @return: the real valued Dataset
        """
        pixels, side = IdxReader.parse_images(IdxReader._read_bytes(images_path), os.path.basename(images_path))
        labels = None
        if labels_path is not None:
            labels = IdxReader.parse_labels(IdxReader._read_bytes(labels_path), os.path.basename(labels_path))
            if len(labels) != len(pixels):
                raise DatasetFormatError(f"Got {len(labels)} labels for {len(pixels)} images")
        logging.info("Read %s IDX images of %sx%s from %s", len(pixels), side, side, images_path)
        return Dataset(RgflowHelper.pixels_to_unit(pixels), side, constants.VALUE_RANGE_REAL,
                       f"idx:{os.path.basename(images_path)}", labels)
