import gzip
import hashlib
import os
import struct
import unittest

import numpy as np
import pandas
from PIL import Image

from rgflow.dataio.Dataset import Dataset
from rgflow.dataio.DatasetFile import DatasetFile
from rgflow.dataio.DatasetFormatError import DatasetFormatError
from rgflow.dataio.IdxReader import IdxReader
from rgflow.dataio.ImageFolderReader import ImageFolderReader
from rgflow.dataio.source.IdxDatasetSource import IdxDatasetSource
from rgflow.dataio.source.ImageFolderDatasetSource import ImageFolderDatasetSource
from rgflow.dataio.source.RgdsDatasetSource import RgdsDatasetSource
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError
from rgflow.rgflow_class import RgFlow
from rgflow.tests.test_rgflow_abstract import TestsRgflowAbstract


class TestsDataio(TestsRgflowAbstract):
    IDX_PIXELS = [0, 255, 51, 204, 255, 255, 0, 0]

    def _write_idx(self, directory, compressed=False, magic=0x00000803, rows=2, columns=2, pixels=None):
        pixels = self.IDX_PIXELS if pixels is None else pixels
        content = struct.pack(">IIII", magic, len(pixels) // (rows * columns), rows, columns) + bytes(pixels)
        path = os.path.join(directory, "images-idx3-ubyte" + (".gz" if compressed else ""))
        with (gzip.open(path, "wb") if compressed else open(path, "wb")) as f:
            f.write(content)
        return path

    def _write_labels(self, directory, labels):
        path = os.path.join(directory, "labels-idx1-ubyte")
        with open(path, "wb") as f:
            f.write(struct.pack(">II", 0x00000801, len(labels)) + bytes(labels))
        return path

    def test_dataset_invariants(self):
        with self.assertRaises(DimensionMismatchError):
            Dataset(np.zeros((2, 5)))
        with self.assertRaises(ValueError):
            Dataset(np.array([[1.0, -1.0, 0.5, 1.0]]), value_range="spin")
        with self.assertRaises(ValueError):
            Dataset(np.array([[1.5, -1.0, 0.5, 1.0]]))
        with self.assertRaises(ValueError):
            Dataset(np.array([[np.nan, -1.0, 0.5, 1.0]]))
        dataset = Dataset(np.array([[1.0, -1.0, 0.5, 1.0]]))
        self.assertEqual(2, dataset.side_length)
        self.assertEqual(4, dataset.dimension)
        with self.assertRaises(ValueError):
            dataset.samples[0, 0] = 0.0

    def test_split_and_subset(self):
        dataset = self._random_spin_dataset(20, 3, seed=1)
        train, test = dataset.split(0.25, 4)
        self.assertEqual(15, train.sample_count)
        self.assertEqual(5, test.sample_count)
        again_train, again_test = dataset.split(0.25, 4)
        np.testing.assert_array_equal(train.samples, again_train.samples)
        np.testing.assert_array_equal(test.samples, again_test.samples)
        rows = {tuple(row) for row in dataset.samples}
        self.assertTrue(all(tuple(row) in rows for row in test.samples))
        self.assertIn("split=test", test.provenance)
        self.assertEqual(7, dataset.subset(7).sample_count)
        np.testing.assert_array_equal(dataset.samples[:7], dataset.subset(7).samples)
        with self.assertRaises(ValueError):
            dataset.split(1.0, 0)

    def test_idx_fixture(self):
        directory = self._temp_dir()
        for compressed in (False, True):
            dataset = IdxReader.load_idx(self._write_idx(directory, compressed))
            self.assertEqual((2, 4), dataset.samples.shape)
            self.assertEqual(2, dataset.side_length)
            np.testing.assert_allclose(dataset.samples, [[-1.0, 1.0, -0.6, 0.6], [1.0, 1.0, -1.0, -1.0]],
                                       atol=1e-12)
            self.assertEqual("real", dataset.value_range)

    def test_idx_labels(self):
        directory = self._temp_dir()
        dataset = IdxReader.load_idx(self._write_idx(directory), self._write_labels(directory, [3, 7]))
        np.testing.assert_array_equal([3, 7], dataset.labels)
        with self.assertRaises(DatasetFormatError):
            IdxReader.load_idx(self._write_idx(directory), self._write_labels(directory, [3]))

    def test_idx_errors(self):
        directory = self._temp_dir()
        with self.assertRaises(DatasetFormatError):
            IdxReader.load_idx(self._write_idx(directory, magic=0x00000801))
        with self.assertRaises(DatasetFormatError):
            IdxReader.load_idx(self._write_idx(directory, rows=1, columns=4))
        with self.assertRaises(DatasetFormatError):
            IdxReader.parse_images(struct.pack(">IIII", 0x00000803, 3, 2, 2) + bytes(self.IDX_PIXELS))
        with self.assertRaises(DatasetFormatError):
            IdxReader.parse_images(b"\x00\x00\x08")

    def test_idx_builder_resizes_and_trims(self):
        directory = self._temp_dir()
        pixels = [128] * 16 * 3
        source = IdxDatasetSource(self._write_idx(directory, rows=4, columns=4, pixels=pixels), target_side=2,
                                  max_samples=2)
        dataset = RgFlow().load_dataset(source)
        self.assertEqual((2, 4), dataset.samples.shape)
        np.testing.assert_allclose(dataset.samples, 2 * 128 / 255 - 1, atol=1e-6)

    def test_image_folder_gray_passthrough(self):
        directory = self._temp_dir()
        levels = np.arange(16, dtype=np.uint8).reshape(4, 4) * 17
        Image.fromarray(levels, mode="L").save(os.path.join(directory, "a.png"))
        dataset = ImageFolderReader.load_image_folder(directory, 4)
        np.testing.assert_allclose(dataset.samples[0], 2.0 * levels.reshape(-1) / 255.0 - 1.0, atol=1e-12)

    def test_image_folder_mid_gray_and_luma(self):
        directory = self._temp_dir()
        Image.new("L", (8, 8), 128).save(os.path.join(directory, "a_gray.png"))
        Image.new("RGB", (8, 8), (255, 0, 0)).save(os.path.join(directory, "b_red.png"))
        dataset = ImageFolderReader.load_image_folder(directory, 4)
        self.assertEqual((2, 16), dataset.samples.shape)
        np.testing.assert_allclose(dataset.samples[0], 2 * 128 / 255 - 1, atol=1e-6)
        self.assertAlmostEqual(0.004, dataset.samples[0][0], 3)
        np.testing.assert_allclose(dataset.samples[1], 2 * 0.299 - 1, atol=1e-5)

    def test_image_folder_tiles(self):
        directory = self._temp_dir()
        levels = np.zeros((600, 600), dtype=np.uint8)
        levels[:100, :100] = 255
        Image.fromarray(levels, mode="L").convert("RGB").save(os.path.join(directory, "sky.png"))
        dataset = RgFlow().load_dataset(ImageFolderDatasetSource(directory, 100, tile=6))
        self.assertEqual(36, dataset.sample_count)
        self.assertEqual(100, dataset.side_length)
        np.testing.assert_allclose(dataset.samples[0], 1.0, atol=1e-6)
        np.testing.assert_allclose(dataset.samples[1:], -1.0, atol=1e-6)

    def test_image_folder_skips_and_rejects(self):
        directory = self._temp_dir()
        with self.assertRaises(DatasetFormatError):
            ImageFolderReader.load_image_folder(directory, 4)
        with open(os.path.join(directory, "broken.png"), "wb") as f:
            f.write(b"not an image")
        with self.assertRaises(DatasetFormatError):
            ImageFolderReader.load_image_folder(directory, 4)
        Image.new("L", (4, 4), 0).save(os.path.join(directory, "ok.png"))
        with self.assertLogs(level="WARNING"):
            dataset = ImageFolderReader.load_image_folder(directory, 4)
        self.assertEqual(1, dataset.sample_count)
        Image.new("RGB", (4, 4), (1, 2, 3)).save(os.path.join(directory, "rgb.png"))
        with self.assertRaises(DatasetFormatError):
            ImageFolderReader.load_image_folder(directory, 4, grayscale=False)

    def test_rgds_round_trip(self):
        directory = self._temp_dir()
        dataset = Dataset(np.linspace(-1, 1, 18).reshape(2, 9), 3, "real", "fixture:linspace")
        path = DatasetFile.save_dataset(dataset, os.path.join(directory, "nested", "data.rgds"))
        loaded = RgFlow().load_dataset(RgdsDatasetSource(path))
        np.testing.assert_array_equal(dataset.samples, loaded.samples)
        self.assertEqual(3, loaded.side_length)
        self.assertEqual("real", loaded.value_range)
        self.assertEqual("fixture:linspace", loaded.provenance)

    def test_rgds_golden_bytes(self):
        samples = np.array([[1, -1, -1, 1], [1, 1, 1, 1], [-1, -1, 1, -1]], dtype=np.float64)
        dataset = Dataset(samples, 2, "spin", "golden")
        expected = (b"RGDS" + struct.pack("<III", 1, 3, 2) + b"\x00" + struct.pack("<12d", *samples.reshape(-1)) +
                    struct.pack("<I", 6) + b"golden")
        content = DatasetFile.to_bytes(dataset)
        self.assertEqual(expected, content)
        directory = self._temp_dir()
        first = DatasetFile.save_dataset(dataset, os.path.join(directory, "first.rgds"))
        second = DatasetFile.save_dataset(DatasetFile.from_bytes(content), os.path.join(directory, "second.rgds"))
        with open(first, "rb") as f1, open(second, "rb") as f2:
            self.assertEqual(hashlib.sha256(f1.read()).hexdigest(), hashlib.sha256(f2.read()).hexdigest())

    def test_rgds_without_provenance(self):
        samples = np.array([[1, -1, -1, 1], [1, 1, 1, 1]], dtype=np.float64)
        dataset = Dataset(samples, 2, "spin", "golden")
        content = DatasetFile.to_bytes(dataset, provenance=False)
        self.assertEqual(b"RGDS" + struct.pack("<III", 1, 2, 2) + b"\x00" + struct.pack("<8d", *samples.reshape(-1)),
                         content)
        path = DatasetFile.save_dataset(dataset, os.path.join(self._temp_dir(), "plain.rgds"), provenance=False)
        loaded = DatasetFile.load_dataset(path)
        np.testing.assert_array_equal(samples, loaded.samples)
        self.assertEqual("rgds:plain.rgds", loaded.provenance)

    def test_rgds_errors(self):
        dataset = Dataset(np.ones((1, 4)), 2, "spin", "x")
        content = DatasetFile.to_bytes(dataset)
        without_trailer = content[:DatasetFile.HEADER_SIZE + 32]
        self.assertEqual("rgds:plain.rgds", DatasetFile.from_bytes(without_trailer, "plain.rgds").provenance)
        with self.assertRaises(DatasetFormatError):
            DatasetFile.from_bytes(b"XXXX" + content[4:])
        with self.assertRaises(DatasetFormatError):
            DatasetFile.from_bytes(content[:4] + struct.pack("<I", 9) + content[8:])
        with self.assertRaises(DatasetFormatError):
            DatasetFile.from_bytes(content[:DatasetFile.HEADER_SIZE + 16])
        with self.assertRaises(DatasetFormatError):
            DatasetFile.from_bytes(content[:5])
        with self.assertRaises(DatasetFormatError):
            DatasetFile.from_bytes(content + b"extra")
        with self.assertRaises(ValueError):
            DatasetFile.to_bytes(Dataset(np.zeros((0, 4)), 2))

    def test_export_csv(self):
        directory = self._temp_dir()
        dataset = self._random_spin_dataset(3, 2)
        df = pandas.read_csv(DatasetFile.export_csv(dataset, os.path.join(directory, "data.csv")))
        self.assertEqual(["s0", "s1", "s2", "s3"], list(df.columns))
        np.testing.assert_array_equal(dataset.samples, df.to_numpy())


if __name__ == '__main__':
    unittest.main()
