import os

import yaml

from rgflow.coarsegrain.BlockSpinSpec import BlockSpinSpec
from rgflow.config.ConfigurationError import ConfigurationError
from rgflow.dataio.source.IdxDatasetSource import IdxDatasetSource
from rgflow.dataio.source.ImageFolderDatasetSource import ImageFolderDatasetSource
from rgflow.dataio.source.IsingDatasetSource import IsingDatasetSource
from rgflow.dataio.source.RgdsDatasetSource import RgdsDatasetSource
from rgflow.lattice.IsingSamplerConfig import IsingSamplerConfig
from rgflow.rbm.TrainConfig import TrainConfig
from rgflow.rgm.RgmConfig import RgmConfig


class ExperimentConfig:
    """
    Experiment recipe read from a YAML file. Top level keys are experiment, seed and output_dir plus the dataset,
    model, train, rgm, analysis, compare and solvability sections.
    """
    TOP_LEVEL_KEYS = {"experiment", "seed", "output_dir", "dataset", "model", "train", "rgm", "analysis", "compare",
                      "solvability"}
    SECTION_KEYS = {
        "dataset": {"source", "side_length", "temperature", "coupling", "sample_count", "burn_in_sweeps",
                    "sweeps_per_sample", "images_path", "labels_path", "path", "target_side", "grayscale", "tile",
                    "max_samples", "test_fraction", "provenance_trailer"},
        "model": {"hidden_sides"},
        "train": {"learning_rate", "batch_size", "epochs", "init_mode", "init_gain", "init_block_size", "init_path",
                  "stacked_feed"},
        "rgm": {"kappa", "alpha", "block_size", "stride", "gain", "eigen_floor"},
        "analysis": {"relative_floor", "top_k", "cutoff_mode", "max_mode", "comparison_indices", "bottom_count",
                     "rescale", "block_size", "block_stride"},
        "compare": {"samples", "labels"},
        "solvability": {"trials", "subset_size", "eigen_floor", "threshold", "growth_fraction",
                        "full_rank_fraction"},
    }
    DATASET_SOURCES = ("ising", "idx", "images", "rgds")

    def __init__(self, values: dict, base_name: str = "experiment"):
        if not isinstance(values, dict):
            raise ConfigurationError("The configuration must be a mapping")
        unknown = set(values) - self.TOP_LEVEL_KEYS
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys {sorted(unknown)}")
        for section, allowed in self.SECTION_KEYS.items():
            content = values.get(section) or {}
            if not isinstance(content, dict):
                raise ConfigurationError(f"Section '{section}' must be a mapping")
            unknown = set(content) - allowed
            if unknown:
                raise ConfigurationError(f"Unknown keys {sorted(unknown)} in section '{section}'")
            setattr(self, section, dict(content))
        self.experiment = str(values.get("experiment", base_name))
        self.seed = int(values.get("seed", 0))
        self.output_dir = str(values.get("output_dir", os.path.join("output", self.experiment)))
        hidden_sides = self.model.get("hidden_sides", [])
        if isinstance(hidden_sides, int):
            hidden_sides = [hidden_sides]
        if any(not isinstance(side, int) or side < 1 for side in hidden_sides):
            raise ConfigurationError(f"model.hidden_sides must be positive integers, got {hidden_sides}")
        if any(later > earlier for earlier, later in zip(hidden_sides, hidden_sides[1:])):
            raise ConfigurationError(f"model.hidden_sides must not grow along the stack, got {hidden_sides}")
        self.hidden_sides = list(hidden_sides)
        self._validate_analysis()
        samples = self.compare.get("samples", 8)
        if not isinstance(samples, int) or samples < 1:
            raise ConfigurationError(f"compare.samples must be a positive integer, got {samples}")

    def _validate_analysis(self):
        for key in ("cutoff_mode", "max_mode", "block_size", "block_stride"):
            value = self.analysis.get(key)
            if value is not None and (not isinstance(value, int) or value < 1):
                raise ConfigurationError(f"analysis.{key} must be a positive integer, got {value}")
        for key in ("top_k", "bottom_count"):
            value = self.analysis.get(key)
            if value is not None and (not isinstance(value, int) or value < 0):
                raise ConfigurationError(f"analysis.{key} must be a non-negative integer, got {value}")
        relative_floor = self.analysis.get("relative_floor")
        if relative_floor is not None and (not isinstance(relative_floor, (int, float))
                                           or not 0 <= relative_floor <= 1):
            raise ConfigurationError(f"analysis.relative_floor must lie within [0, 1], got {relative_floor}")
        rescale = self.analysis.get("rescale")
        if rescale is not None and not isinstance(rescale, (int, float)):
            raise ConfigurationError(f"analysis.rescale must be a number, got {rescale}")
        indexes = self.analysis.get("comparison_indices")
        if indexes is not None and (not isinstance(indexes, list)
                                    or any(not isinstance(index, int) or index < 0 for index in indexes)):
            raise ConfigurationError(f"analysis.comparison_indices must be non-negative integers, got {indexes}")

    @staticmethod
    def load(path: str, seed: int = None, output_dir: str = None):
        """
        Reads a YAML experiment file, applying the command line overrides.
        """
        if not os.path.isfile(path):
            raise ConfigurationError(f"Configuration file {path} does not exist")
        with open(path, "r") as f:
            try:
                values = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigurationError(f"Invalid YAML in {path}: {e}") from e
        config = ExperimentConfig(values or {}, os.path.splitext(os.path.basename(path))[0])
        if seed is not None:
            config.seed = int(seed)
        if output_dir is not None:
            config.output_dir = output_dir
        return config

    def _require(self, section: str, key: str):
        content = getattr(self, section)
        if content.get(key) is None:
            raise ConfigurationError(f"Missing '{key}' in section '{section}'")
        return content[key]

    def dataset_source(self):
        source = self._require("dataset", "source")
        common = {"max_samples": self.dataset.get("max_samples"),
                  "test_fraction": self.dataset.get("test_fraction", 0.0), "split_seed": self.seed}
        try:
            if source == "ising":
                sampler = IsingSamplerConfig(
                    side_length=self._require("dataset", "side_length"),
                    sample_count=self._require("dataset", "sample_count"),
                    temperature=self.dataset.get("temperature", 4.0), coupling=self.dataset.get("coupling", 1.0),
                    sweeps_per_sample=self.dataset.get("sweeps_per_sample", 10),
                    burn_in_sweeps=self.dataset.get("burn_in_sweeps", 1000), rng_seed=self.seed)
                return IsingDatasetSource(sampler, **common)
            if source == "idx":
                return IdxDatasetSource(self._require("dataset", "images_path"), self.dataset.get("labels_path"),
                                        self.dataset.get("target_side"), **common)
            if source == "images":
                return ImageFolderDatasetSource(self._require("dataset", "path"),
                                                self._require("dataset", "target_side"),
                                                self.dataset.get("grayscale", True), self.dataset.get("tile"),
                                                **common)
            if source == "rgds":
                return RgdsDatasetSource(self._require("dataset", "path"), **common)
        except (ValueError, TypeError) as e:
            raise ConfigurationError(f"Invalid dataset section: {e}") from e
        raise ConfigurationError(f"dataset.source must be one of {self.DATASET_SOURCES}, got {source}")

    def train_config(self, layer: int = 0):
        try:
            return TrainConfig(learning_rate=self.train.get("learning_rate", 1e-3),
                               batch_size=self.train.get("batch_size", 1000), epochs=self.train.get("epochs", 1),
                               rng_seed=self.seed + layer, init_mode=self.train.get("init_mode", "xavier"),
                               init_gain=self.train.get("init_gain"),
                               init_block_size=self.train.get("init_block_size"),
                               init_path=self.train.get("init_path") if layer == 0 else None,
                               stacked_feed=self.train.get("stacked_feed", "expected"))
        except (ValueError, TypeError) as e:
            raise ConfigurationError(f"Invalid train section: {e}") from e

    def layer_configs(self):
        if len(self.hidden_sides) == 0:
            raise ConfigurationError("model.hidden_sides must name at least one hidden side")
        if len(self.hidden_sides) > 1 and self.train.get("init_mode") == "explicit":
            raise ConfigurationError("Explicit initialization only applies to single layer models")
        return [(side, self.train_config(layer)) for layer, side in enumerate(self.hidden_sides)]

    def rgm_config(self, visible_side: int, hidden_side: int):
        try:
            block_spec = None
            if self.rgm.get("block_size") is not None:
                block_spec = BlockSpinSpec(visible_side, self.rgm["block_size"],
                                           self.rgm.get("stride", visible_side // hidden_side))
            return RgmConfig(visible_side, hidden_side, kappa=self.rgm.get("kappa"), alpha=self.rgm.get("alpha"),
                             block_spec=block_spec, gain=self.rgm.get("gain", 1.0),
                             eigen_floor=self.rgm.get("eigen_floor", 0.01))
        except (ValueError, TypeError) as e:
            raise ConfigurationError(f"Invalid rgm section: {e}") from e

    def truncation_rule(self):
        if self.analysis.get("top_k") is not None:
            return {"top_k": int(self.analysis["top_k"])}
        return {"relative_floor": float(self.analysis.get("relative_floor", 0.2))}

    def analysis_block_spec(self, visible_side: int, hidden_side: int):
        """
        Block spin rule overlaid on the analyzed singular values, None when analysis.block_size is not set.
        """
        if self.analysis.get("block_size") is None:
            return None
        stride = self.analysis.get("block_stride", max(1, visible_side // hidden_side))
        try:
            return BlockSpinSpec(visible_side, self.analysis["block_size"], stride)
        except ValueError as e:
            raise ConfigurationError(f"Invalid analysis block spin: {e}") from e
