import os
import struct

import numpy as np
import pandas

from rgflow import constants
from rgflow.dataio.DatasetFormatError import DatasetFormatError
from rgflow.helper import RgflowHelper
from rgflow.rbm.RbmParams import RbmParams


class RbmParamsFile:
    """
    RBMW container: little endian magic, version, L_v and L_h followed by the row-major f64 weights, the visible bias
    and the hidden bias.
    """
    HEADER_FORMAT = "<4sIII"
    HEADER_SIZE = struct.calcsize(HEADER_FORMAT)

    @staticmethod
    def to_bytes(params: RbmParams):
        if params.visible_side is None or params.hidden_side is None:
            raise ValueError("Only lattice shaped parameters can be stored as RBMW")
        header = struct.pack(RbmParamsFile.HEADER_FORMAT, constants.RBMW_MAGIC, constants.RBMW_VERSION,
                             params.visible_side, params.hidden_side)
        return header + params.weights.astype("<f8").tobytes(order="C") + \
            params.visible_bias.astype("<f8").tobytes() + params.hidden_bias.astype("<f8").tobytes()

    @staticmethod
    def from_bytes(content: bytes, name: str = "memory"):
        if len(content) < RbmParamsFile.HEADER_SIZE:
            raise DatasetFormatError(f"{name}: truncated header")
        magic, version, visible_side, hidden_side = struct.unpack_from(RbmParamsFile.HEADER_FORMAT, content, 0)
        if magic != constants.RBMW_MAGIC:
            raise DatasetFormatError(f"{name}: bad magic {magic!r}")
        if version != constants.RBMW_VERSION:
            raise DatasetFormatError(f"{name}: unsupported version {version}")
        visible_count, hidden_count = visible_side ** 2, hidden_side ** 2
        values = visible_count * hidden_count + visible_count + hidden_count
        if len(content) != RbmParamsFile.HEADER_SIZE + 8 * values:
            raise DatasetFormatError(f"{name}: expected {values} f64 values after the header")
        data = np.frombuffer(content, dtype="<f8", count=values, offset=RbmParamsFile.HEADER_SIZE)
        weights_end = visible_count * hidden_count
        try:
            return RbmParams(data[:weights_end].reshape(visible_count, hidden_count),
                             data[weights_end:weights_end + visible_count], data[weights_end + visible_count:],
                             visible_side, hidden_side)
        except ValueError as e:
            raise DatasetFormatError(f"{name}: {e}") from e

    @staticmethod
    def save_params(params: RbmParams, path: str):
        content = RbmParamsFile.to_bytes(params)
        return RgflowHelper.atomic_write(path, lambda f: f.write(content))

    @staticmethod
    def load_params(path: str):
        with open(path, "rb") as f:
            content = f.read()
        return RbmParamsFile.from_bytes(content, os.path.basename(path))

    @staticmethod
    def to_dataframe(params: RbmParams):
        visible_index, hidden_index = np.meshgrid(np.arange(params.visible_count), np.arange(params.hidden_count),
                                                  indexing="ij")
        weights = pandas.DataFrame({"parameter": "weight", "visible_index": visible_index.reshape(-1),
                                    "hidden_index": hidden_index.reshape(-1),
                                    "value": params.weights.reshape(-1)})
        visible = pandas.DataFrame({"parameter": "visible_bias", "visible_index": np.arange(params.visible_count),
                                    "hidden_index": -1, "value": params.visible_bias})
        hidden = pandas.DataFrame({"parameter": "hidden_bias", "visible_index": -1,
                                   "hidden_index": np.arange(params.hidden_count), "value": params.hidden_bias})
        return pandas.concat([weights, visible, hidden], ignore_index=True)

    @staticmethod
    def export_csv(params: RbmParams, path: str):
        return RgflowHelper.write_csv(RbmParamsFile.to_dataframe(params), path)
