import logging
import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from rgflow import constants
from rgflow.dataio.Dataset import Dataset
from rgflow.dataio.DatasetFormatError import DatasetFormatError
from rgflow.helper import RgflowHelper


class ImageFolderReader:
    @staticmethod
    def to_gray_levels(image: Image.Image, grayscale: bool = True):
        """
        Returns the image as a float array of 0-255 gray levels using ITU-R 601 luma weights for color input.
        """
        if image.mode in ("L", "I", "F", "I;16"):
            return np.asarray(image, dtype=np.float64)
        if not grayscale:
            raise DatasetFormatError(f"Image mode {image.mode} has several channels and grayscale conversion is off")
        rgb = np.asarray(image.convert("RGB"), dtype=np.float64)
        red, green, blue = constants.LUMA_WEIGHTS
        return red * rgb[..., 0] + green * rgb[..., 1] + blue * rgb[..., 2]

    @staticmethod
    def tiles(levels, tile: int):
        """
        Splits an image in tile × tile equal pieces in row-major order. Remainder rows and columns are dropped.
        """
        height, width = levels.shape[0] // tile, levels.shape[1] // tile
        if height == 0 or width == 0:
            raise DatasetFormatError(f"Image of shape {levels.shape} is too small for {tile}x{tile} tiles")
        return [levels[row * height:(row + 1) * height, column * width:(column + 1) * width]
                for row in range(tile) for column in range(tile)]

    @staticmethod
    def resize(levels, target_side: int):
        if levels.shape == (target_side, target_side):
            return levels
        image = Image.fromarray(levels.astype(np.float32), mode="F")
        return np.asarray(image.resize((target_side, target_side), resample=Image.BILINEAR), dtype=np.float64)

    @staticmethod
    def load_image_folder(path: str, target_side: int, grayscale: bool = True, tile: int = None):
        """
        Ingests every decodable image of a folder: grayscale conversion, optional tiling, bilinear resize and the
        mapping of gray levels to [-1, 1].
        @param path: the images folder
        @param target_side: the side every sample is resized to
        @param grayscale: whether color images are converted to luma
        @param tile: when given, each image is split into tile × tile samples before resizing
        @return: the real valued Dataset, images sorted by file name
        """
        if target_side < 1:
            raise ValueError(f"target_side must be positive, got {target_side}")
        if tile is not None and tile < 1:
            raise ValueError(f"tile must be positive, got {tile}")
        samples = []
        skipped = 0
        for file_name in sorted(os.listdir(path)):
            file_path = os.path.join(path, file_name)
            if not os.path.isfile(file_path):
                continue
            try:
                with Image.open(file_path) as image:
                    image.load()
                    decoded = image.copy()
            except (UnidentifiedImageError, OSError) as e:
                logging.warning("Skipping undecodable file %s: %s", file_path, e)
                skipped = skipped + 1
                continue
            levels = ImageFolderReader.to_gray_levels(decoded, grayscale)
            pieces = [levels] if tile is None else ImageFolderReader.tiles(levels, tile)
            for piece in pieces:
                samples.append(RgflowHelper.pixels_to_unit(ImageFolderReader.resize(piece, target_side)).reshape(-1))
        if skipped > 0:
            logging.warning("%s files could not be decoded in %s", skipped, path)
        if len(samples) == 0:
            raise DatasetFormatError(f"No decodable images found in {path}")
        logging.info("Read %s samples of %sx%s from %s", len(samples), target_side, target_side, path)
        provenance = f"images:{os.path.basename(os.path.normpath(path))},side={target_side},tile={tile}"
        return Dataset(np.array(samples), target_side, constants.VALUE_RANGE_REAL, provenance)
