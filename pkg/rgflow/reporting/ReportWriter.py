import logging
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas

from rgflow.helper import RgflowHelper

plt.rcParams["svg.hashsalt"] = "rgflow"
SVG_METADATA = {"Date": None}


class ReportWriter:
    """
    Writes every report as a CSV with a header row. Plots are rendered afterwards from those CSV files only.
    """
    @staticmethod
    def write_singular_values(values, path):
        df = pandas.DataFrame({"index": np.arange(len(values)), "value": np.asarray(values)})
        return RgflowHelper.write_csv(df, path)

    @staticmethod
    def write_radial_spectra(comparisons, path):
        rows = []
        for comparison in comparisons:
            for side, spectrum in (("visible", comparison.visible_spectrum), ("hidden", comparison.hidden_spectrum)):
                for mode, magnitude in zip(spectrum.modes, spectrum.magnitudes):
                    rows.append((comparison.index, side, int(mode), float(magnitude)))
        df = pandas.DataFrame(rows, columns=["index", "side", "mode", "magnitude"])
        return RgflowHelper.write_csv(df, path)

    @staticmethod
    def write_comparisons(comparisons, low_mode_supports, path):
        rows = [(comparison.index, comparison.singular_value, comparison.rescale, comparison.relative_difference,
                 visible_support, hidden_support)
                for comparison, (visible_support, hidden_support) in zip(comparisons, low_mode_supports)]
        df = pandas.DataFrame(rows, columns=["index", "singular_value", "rescale", "relative_difference",
                                             "visible_low_mode_support", "hidden_low_mode_support"])
        return RgflowHelper.write_csv(df, path)

    @staticmethod
    def write_effective_parameters(chain, path):
        df = pandas.DataFrame({"stage": ["full", "truncated", "effective"], "count": list(chain)})
        return RgflowHelper.write_csv(df, path)

    @staticmethod
    def write_overlay(trained, block_spin, path):
        length = max(len(trained), len(block_spin))
        df = pandas.DataFrame({"index": np.arange(length),
                               "trained": np.pad(np.asarray(trained, dtype=float), (0, length - len(trained)),
                                                 constant_values=np.nan),
                               "block_spin": np.pad(np.asarray(block_spin, dtype=float),
                                                    (0, length - len(block_spin)), constant_values=np.nan)})
        return RgflowHelper.write_csv(df, path)

    @staticmethod
    def write_alignment(report, path):
        df = pandas.DataFrame({"index": np.arange(len(report.eigenvalues)), "eigenvalue": report.eigenvalues})
        return RgflowHelper.write_csv(df, path)

    @staticmethod
    def write_loss(results, path):
        rows = [(layer + 1, epoch, float(error)) for layer, result in enumerate(results)
                for epoch, error in enumerate(result.loss_history)]
        df = pandas.DataFrame(rows, columns=["layer", "epoch", "reconstruction_error"])
        return RgflowHelper.write_csv(df, path)

    @staticmethod
    def write_compare_errors(errors, path):
        df = pandas.DataFrame(list(errors), columns=["model", "mean_reconstruction_error"])
        return RgflowHelper.write_csv(df, path)

    @staticmethod
    def write_reconstructions(originals, reconstructions, path):
        """
        @param originals: samples × N values within [-1, 1]
        @param reconstructions: ordered (model name, samples × N visible probabilities) pairs
        """
        columns = [f"p{index}" for index in range(originals.shape[1])]
        frames = []
        for model, probabilities in [("original", (originals + 1.0) / 2.0)] + list(reconstructions):
            frame = pandas.DataFrame(probabilities, columns=columns)
            frame.insert(0, "model", model)
            frame.insert(0, "sample", np.arange(len(probabilities)))
            frames.append(frame)
        return RgflowHelper.write_csv(pandas.concat(frames, ignore_index=True), path)

    @staticmethod
    def plot_lines(csv_path, image_path, x_column, y_column, group_column=None, title=None, y_label=None,
                   log_y=False):
        """
        Renders one line per group of a CSV file.
        """
        df = pandas.read_csv(csv_path)
        fig, axs = plt.subplots(1, 1, figsize=(8, 4), constrained_layout=True)
        groups = [(None, df)] if group_column is None else list(df.groupby(group_column, sort=True))
        for name, group in groups:
            axs.plot(group[x_column], group[y_column], marker=".", label=None if name is None else str(name))
        if group_column is not None:
            axs.legend(title=group_column)
        if log_y:
            axs.set_yscale("log")
        axs.set_xlabel(x_column)
        axs.set_ylabel(y_label if y_label is not None else y_column)
        if title is not None:
            axs.set_title(title)
        ReportWriter._save(fig, image_path)
        return image_path

    @staticmethod
    def plot_columns(csv_path, image_path, x_column, y_columns, title=None):
        df = pandas.read_csv(csv_path)
        fig, axs = plt.subplots(1, 1, figsize=(8, 4), constrained_layout=True)
        for column in y_columns:
            axs.plot(df[x_column], df[column], marker=".", label=column)
        axs.legend()
        axs.set_xlabel(x_column)
        if title is not None:
            axs.set_title(title)
        ReportWriter._save(fig, image_path)
        return image_path

    @staticmethod
    def plot_radial_spectra(csv_path, image_path, title=None):
        df = pandas.read_csv(csv_path)
        fig, axs = plt.subplots(1, 2, figsize=(12, 4), constrained_layout=True)
        for axis, side in zip(axs, ("visible", "hidden")):
            for index, group in df[df["side"] == side].groupby("index", sort=True):
                axis.plot(group["mode"], group["magnitude"], marker=".", label=f"I={index}")
            axis.set_title(f"{side} singular vectors")
            axis.set_xlabel("mode")
            axis.set_ylabel("mean |F|")
            axis.legend(fontsize="small")
        if title is not None:
            fig.suptitle(title)
        ReportWriter._save(fig, image_path)
        return image_path

    @staticmethod
    def plot_reconstruction_grid(csv_path, image_path):
        """
        Image grid with one row per sample and one column per model, the originals first.
        """
        df = pandas.read_csv(csv_path)
        pixel_columns = [column for column in df.columns if column.startswith("p")]
        side = RgflowHelper.perfect_square_side(len(pixel_columns))
        models = list(dict.fromkeys(df["model"]))
        samples = sorted(df["sample"].unique())
        fig, axs = plt.subplots(len(samples), len(models), figsize=(1.6 * len(models), 1.6 * len(samples)),
                                squeeze=False)
        for row, sample in enumerate(samples):
            for column, model in enumerate(models):
                values = df[(df["sample"] == sample) & (df["model"] == model)][pixel_columns].to_numpy()[0]
                axs[row][column].imshow(RgflowHelper.probabilities_to_pixels(values).reshape(side, side),
                                        cmap="gray", vmin=0, vmax=255)
                axs[row][column].set_xticks([])
                axs[row][column].set_yticks([])
                if row == 0:
                    axs[row][column].set_title(model, fontsize="small")
        ReportWriter._save(fig, image_path)
        return image_path

    @staticmethod
    def _save(fig, image_path):
        os.makedirs(os.path.dirname(os.path.abspath(image_path)), exist_ok=True)
        tmp_path = os.path.join(os.path.dirname(os.path.abspath(image_path)), ".tmp_" + os.path.basename(image_path))
        image_format = os.path.splitext(image_path)[1][1:]
        metadata = SVG_METADATA if image_format == "svg" else {"Software": None}
        plt.savefig(tmp_path, format=image_format, metadata=metadata)
        plt.close(fig)
        os.replace(tmp_path, image_path)
        logging.info("Written %s", image_path)
