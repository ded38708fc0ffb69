import logging
import os

import numpy as np

from rgflow.coarsegrain.BlockSpin import BlockSpin
from rgflow.config.ConfigurationError import ConfigurationError
from rgflow.config.ExperimentConfig import ExperimentConfig
from rgflow.dataio.Dataset import Dataset
from rgflow.dataio.DatasetFile import DatasetFile
from rgflow.dataio.builder.IdxDatasetBuilder import IdxDatasetBuilder
from rgflow.dataio.builder.ImageFolderDatasetBuilder import ImageFolderDatasetBuilder
from rgflow.dataio.builder.IsingDatasetBuilder import IsingDatasetBuilder
from rgflow.dataio.builder.RgdsDatasetBuilder import RgdsDatasetBuilder
from rgflow.dataio.source.DatasetSource import DatasetSource
from rgflow.dataio.source.IdxDatasetSource import IdxDatasetSource
from rgflow.dataio.source.ImageFolderDatasetSource import ImageFolderDatasetSource
from rgflow.dataio.source.IsingDatasetSource import IsingDatasetSource
from rgflow.dataio.source.RgdsDatasetSource import RgdsDatasetSource
from rgflow.diagnostics.Alignment import Alignment
from rgflow.diagnostics.SolvabilityChecker import SolvabilityChecker
from rgflow.helper import RgflowHelper
from rgflow.rbm.Rbm import Rbm
from rgflow.rbm.RbmParamsFile import RbmParamsFile
from rgflow.rbm.RbmTrainer import RbmTrainer
from rgflow.reporting.ReportWriter import ReportWriter
from rgflow.rgm.RgmBuilder import RgmBuilder
from rgflow.rgm.RgmConfig import RgmConfig
from rgflow.spectral.Spectral import Spectral


class RgFlow:
    """
    Runs the experiment steps (dataset generation, training, RGM construction, analysis, comparison and the
    solvability check) wiring configuration, persistence and reports together.
    """
    DEFAULT_COMPARED = 5
    BASELINE_TRIALS = 20

    def __init__(self) -> None:
        self.dataset_builders = {IsingDatasetSource: IsingDatasetBuilder(),
                                 IdxDatasetSource: IdxDatasetBuilder(),
                                 ImageFolderDatasetSource: ImageFolderDatasetBuilder(),
                                 RgdsDatasetSource: RgdsDatasetBuilder()}

    def load_dataset(self, source: DatasetSource):
        logging.info("Loading dataset from %s", source.describe())
        return self.dataset_builders[type(source)].build(source)

    def _dataset(self, config: ExperimentConfig, dataset_path: str = None):
        source = config.dataset_source() if dataset_path is None else \
            RgdsDatasetSource(dataset_path, config.dataset.get("max_samples"),
                              config.dataset.get("test_fraction", 0.0), config.seed)
        return self.load_dataset(source), source

    @staticmethod
    def _split(dataset: Dataset, source: DatasetSource):
        if source.test_fraction > 0:
            return dataset.split(source.test_fraction, source.split_seed)
        return dataset, dataset

    @staticmethod
    def _output(config: ExperimentConfig, file_name: str):
        os.makedirs(config.output_dir, exist_ok=True)
        return os.path.join(config.output_dir, file_name)

    def generate(self, config: ExperimentConfig):
        """
        Builds the configured dataset and stores it as <experiment>.rgds.
        @return: the written path and the dataset
        """
        RgflowHelper.banner('DATASET GENERATION')
        dataset, _ = self._dataset(config)
        path = DatasetFile.save_dataset(dataset, self._output(config, f"{config.experiment}.rgds"),
                                        bool(config.dataset.get("provenance_trailer", True)))
        return path, dataset

    def train(self, config: ExperimentConfig, dataset_path: str = None):
        """
        Trains the configured RBM or stack and stores <experiment>_layer<k>.rbmw files plus the loss history.
        @return: the written parameter paths and the TrainResult list
        """
        RgflowHelper.banner('RBM TRAINING')
        dataset, source = self._dataset(config, dataset_path)
        train_dataset, _ = self._split(dataset, source)
        layer_configs = config.layer_configs()
        visible_sides = [train_dataset.side_length] + config.hidden_sides[:-1]
        rgm_configs = [config.rgm_config(visible, hidden) if layer_config.init_mode == "rgm" else None
                       for visible, (hidden, layer_config) in zip(visible_sides, layer_configs)]
        try:
            results = RbmTrainer.train_stacked(train_dataset, layer_configs, rgm_configs)
        except ValueError as e:
            raise ConfigurationError(f"Cannot train: {e}") from e
        paths = [RbmParamsFile.save_params(result.params,
                                           self._output(config, f"{config.experiment}_layer{index + 1}.rbmw"))
                 for index, result in enumerate(results)]
        loss_csv = ReportWriter.write_loss(results, self._output(config, f"{config.experiment}_loss.csv"))
        ReportWriter.plot_lines(loss_csv, self._output(config, f"{config.experiment}_loss.svg"), "epoch",
                                "reconstruction_error", group_column="layer", title="Reconstruction error")
        return paths, results

    def build_rgm(self, config: ExperimentConfig, dataset_path: str = None):
        RgflowHelper.banner('RGM BUILD')
        dataset, source = self._dataset(config, dataset_path)
        train_dataset, _ = self._split(dataset, source)
        if len(config.hidden_sides) == 0:
            raise ConfigurationError("model.hidden_sides must name the hidden side of the RGM")
        rgm_config = config.rgm_config(train_dataset.side_length, config.hidden_sides[0])
        if rgm_config.kappa == 0:
            logging.warning("kappa is 0, the RGM will have zero weights")
        try:
            params = RgmBuilder.build_rgm(train_dataset, rgm_config)
        except ValueError as e:
            raise ConfigurationError(f"Cannot build the RGM: {e}") from e
        path = RbmParamsFile.save_params(params, self._output(config, f"{config.experiment}_rgm.rbmw"))
        return path, params

    def analyze(self, config: ExperimentConfig, weights_paths, dataset_path: str = None):
        """
        Spectral report of every weights file: singular values, radial spectra and visible/hidden comparison of
        the leading and trailing singular vectors, effective parameter count, optional block spin overlay and, when a
        dataset file is given, the alignment with the data covariance subspace.
        @return: the list of written files
        """
        RgflowHelper.banner('WEIGHTS ANALYSIS')
        dataset = None
        if dataset_path is not None:
            dataset, source = self._dataset(config, dataset_path)
            dataset, _ = self._split(dataset, source)
        written = []
        for weights_path in weights_paths:
            written.extend(self._analyze_one(config, weights_path, dataset))
        return written

    def _analyze_one(self, config: ExperimentConfig, weights_path: str, dataset: Dataset = None):
        params = RbmParamsFile.load_params(weights_path)
        stem = os.path.splitext(os.path.basename(weights_path))[0]
        logging.info("Analyzing %s (%s)", weights_path, params)
        bundle = Spectral.svd(params.weights, params.visible_side, params.hidden_side)
        written = []
        values_csv = ReportWriter.write_singular_values(bundle.singular_values,
                                                        self._output(config, f"{stem}_singular_values.csv"))
        written.append(values_csv)
        written.append(ReportWriter.plot_lines(values_csv, self._output(config, f"{stem}_singular_values.svg"),
                                               "index", "value", title="Singular values", y_label="S"))
        truncated = Spectral.truncate_svd(bundle, **config.truncation_rule())
        logging.info("Kept %s of %s singular values", truncated.rank, bundle.rank)
        cutoff = int(config.analysis.get("cutoff_mode", RgmConfig.default_alpha(params.visible_side)))
        positive = np.flatnonzero(bundle.singular_values > 0)
        indexes = config.analysis.get("comparison_indices")
        if indexes is None:
            bottom_count = int(config.analysis.get("bottom_count", self.DEFAULT_COMPARED))
            indexes = list(positive[:self.DEFAULT_COMPARED]) + list(positive[-bottom_count:] if bottom_count else [])
        available = set(positive.tolist())
        indexes = sorted({int(index) for index in indexes if int(index) in available})
        comparisons = [Spectral.compare_visible_hidden(bundle, index, config.analysis.get("rescale"))
                       for index in indexes]
        supports = [(Spectral.low_mode_support(comparison.visible_spectrum, cutoff),
                     Spectral.low_mode_support(comparison.hidden_spectrum, cutoff)) for comparison in comparisons]
        for comparison, (visible_support, hidden_support) in zip(comparisons, supports):
            logging.info("I=%s S=%.4f rescale=%.4f difference=%.4f support=%.4f/%.4f", comparison.index,
                         comparison.singular_value, comparison.rescale, comparison.relative_difference,
                         visible_support, hidden_support)
        spectra_csv = ReportWriter.write_radial_spectra(comparisons, self._output(config, f"{stem}_radial_spectra.csv"))
        written.append(spectra_csv)
        written.append(ReportWriter.plot_radial_spectra(spectra_csv, self._output(config, f"{stem}_radial_spectra.svg"),
                                                        title=stem))
        written.append(ReportWriter.write_comparisons(comparisons, supports,
                                                      self._output(config, f"{stem}_comparison.csv")))
        max_mode = int(config.analysis.get("max_mode", max(cutoff, round(0.75 * params.visible_side))))
        try:
            chain = Spectral.effective_parameter_chain(params.visible_count, params.hidden_count, truncated.rank,
                                                       cutoff, max_mode)
            logging.info("Effective parameters %s -> %s -> %s", *chain)
            written.append(ReportWriter.write_effective_parameters(
                chain, self._output(config, f"{stem}_effective_parameters.csv")))
        except ValueError as e:
            logging.warning("Effective parameters not counted: %s", e)
        spec = config.analysis_block_spec(params.visible_side, params.hidden_side)
        if spec is not None:
            block_values = BlockSpin.block_spin_svd_profile(spec).singular_values
            overlay_csv = ReportWriter.write_overlay(bundle.singular_values, block_values,
                                                     self._output(config, f"{stem}_blockspin_overlay.csv"))
            written.append(overlay_csv)
            written.append(ReportWriter.plot_columns(overlay_csv, self._output(config, f"{stem}_blockspin_overlay.svg"),
                                                     "index", ["trained", "block_spin"],
                                                     title="Trained and block spin singular values"))
        if bundle.rank > 0:
            logging.info("Visible bias similarity with the top singular vector %.4f",
                         Alignment.bias_vector_similarity(params, bundle))
        if dataset is not None:
            written.extend(self._alignment(config, stem, dataset, params, truncated))
        return written

    def _alignment(self, config, stem, dataset, params, truncated):
        if dataset.dimension != params.visible_count:
            logging.warning("Skipping alignment: dataset dimension %s does not match %s visible units",
                            dataset.dimension, params.visible_count)
            return []
        if dataset.sample_count < 2:
            logging.warning("Skipping alignment: the data covariance needs at least 2 samples")
            return []
        kept = min(truncated.rank, dataset.dimension)
        modes = RgmBuilder.top_covariance_modes(RgmBuilder.data_covariance(dataset), kept)
        report = Alignment.alignment_spectrum_from_bases(modes.eigenvectors, truncated.visible_vectors)
        logging.info("Alignment eigenvalues above thresholds %s, mean top %.4f", report.count_above,
                     report.mean_top())
        if kept > 0:
            baseline = Alignment.random_subspace_baseline(modes.eigenvectors, kept, self.BASELINE_TRIALS,
                                                          RgflowHelper.rng_streams(config.seed, 1)[0])
            logging.info("Random subspace baseline %.4f +- %.4f", np.mean(baseline), np.std(baseline))
        alignment_csv = ReportWriter.write_alignment(report, self._output(config, f"{stem}_alignment.csv"))
        return [alignment_csv, ReportWriter.plot_lines(alignment_csv, self._output(config, f"{stem}_alignment.svg"),
                                                       "index", "eigenvalue", title="Alignment spectrum")]

    def compare(self, config: ExperimentConfig, weights_paths, dataset_path: str = None):
        """
        Reconstruction error table and image grid of several models on the held out samples.
        @return: the written error CSV, reconstructions CSV and PNG grid
        """
        if len(weights_paths) == 0:
            raise ConfigurationError("At least one weights file is needed to compare models")
        RgflowHelper.banner('MODEL COMPARISON')
        dataset, source = self._dataset(config, dataset_path)
        _, held_out = self._split(dataset, source)
        shown = held_out.samples[:int(config.compare.get("samples", 8))]
        labels = config.compare.get("labels") or \
            [os.path.splitext(os.path.basename(path))[0] for path in weights_paths]
        if len(labels) != len(weights_paths):
            raise ConfigurationError(f"Got {len(labels)} labels for {len(weights_paths)} weights files")
        errors = []
        reconstructions = []
        seen = set()
        for index, (label, path) in enumerate(zip(labels, weights_paths)):
            label = f"{label}_{index}" if label in seen else label
            seen.add(label)
            params = RbmParamsFile.load_params(path)
            error = Rbm.reconstruction_error(held_out.samples, params)
            logging.info("Model %s mean reconstruction error %.6f", label, error)
            errors.append((label, error))
            reconstructions.append((label, Rbm.reconstruct(shown, params)))
        errors_csv = ReportWriter.write_compare_errors(errors,
                                                       self._output(config, f"{config.experiment}_compare_errors.csv"))
        grid_csv = ReportWriter.write_reconstructions(shown, reconstructions,
                                                      self._output(config, f"{config.experiment}_reconstructions.csv"))
        grid_png = ReportWriter.plot_reconstruction_grid(grid_csv,
                                                         self._output(config, f"{config.experiment}_reconstructions.png"))
        return [errors_csv, grid_csv, grid_png], errors

    def solvable(self, config: ExperimentConfig, dataset_path: str = None, cpus: int = 1):
        dataset, _ = self._dataset(config, dataset_path)
        section = config.solvability
        try:
            report = SolvabilityChecker.solvability_check(
                dataset, trials=int(section.get("trials", 5)),
                subset_size=int(section.get("subset_size", max(1, dataset.sample_count // 10))),
                eigen_floor=float(section.get("eigen_floor", 0.01)), threshold=float(section.get("threshold", 0.8)),
                growth_fraction=float(section.get("growth_fraction", 0.1)),
                full_rank_fraction=float(section.get("full_rank_fraction", 0.5)), rng_seed=config.seed, cpus=cpus)
        except ValueError as e:
            raise ConfigurationError(f"Invalid solvability section: {e}") from e
        path = RgflowHelper.write_csv(report.to_dataframe(),
                                      self._output(config, f"{config.experiment}_solvability.csv"))
        return path, report
