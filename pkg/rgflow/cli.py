import argparse
import logging
import sys

from rgflow import constants
from rgflow.config.ConfigurationError import ConfigurationError
from rgflow.config.ExperimentConfig import ExperimentConfig
from rgflow.dataio.DatasetFormatError import DatasetFormatError
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError
from rgflow.rbm.NumericalInstabilityError import NumericalInstabilityError
from rgflow.rgflow_class import RgFlow

VERBS = ("generate", "train", "build-rgm", "analyze", "compare", "solvable")


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="rgflow", description="Restricted Boltzmann machines, block spin "
                                                                "coarse graining and renormalization group machines.")
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("--config", required=True, help="YAML experiment file")
    parser.add_argument("--seed", type=int, default=None, help="overrides the configured seed")
    parser.add_argument("--out", default=None, help="overrides the configured output directory")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for the solvability trials")
    parser.add_argument("--weights", action="append", default=[], help="RBMW file, repeatable")
    parser.add_argument("--dataset", default=None, help="RGDS file used instead of the configured dataset")
    parser.add_argument("--verbose", action="store_true")
    return parser.parse_args(argv)


def run(args: argparse.Namespace):
    config = ExperimentConfig.load(args.config, seed=args.seed, output_dir=args.out)
    if args.threads < 1:
        raise ConfigurationError(f"--threads must be positive, got {args.threads}")
    rgflow = RgFlow()
    if args.verb == "generate":
        path, dataset = rgflow.generate(config)
        print(f"{path}: samples={dataset.sample_count} side={dataset.side_length} range={dataset.value_range}")
    elif args.verb == "train":
        paths, results = rgflow.train(config, args.dataset)
        for path, result in zip(paths, results):
            print(f"{path}: {result.params} final_error={result.loss_history[-1]:.6f}")
    elif args.verb == "build-rgm":
        path, params = rgflow.build_rgm(config, args.dataset)
        print(f"{path}: {params}")
    elif args.verb == "analyze":
        if len(args.weights) == 0:
            raise ConfigurationError("analyze needs at least one --weights file")
        for path in rgflow.analyze(config, args.weights, args.dataset):
            print(path)
    elif args.verb == "compare":
        paths, errors = rgflow.compare(config, args.weights, args.dataset)
        for model, error in errors:
            print(f"{model}: mean_reconstruction_error={error:.6f}")
        print(paths[0])
    elif args.verb == "solvable":
        path, report = rgflow.solvable(config, args.dataset, args.threads)
        print(f"{path}: {report.summary()}")


def main(argv=None):
    args = parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(levelname)s %(message)s")
    try:
        run(args)
    except (ConfigurationError, DimensionMismatchError) as e:
        logging.error("%s", e)
        return constants.EXIT_CONFIG_ERROR
    except NumericalInstabilityError as e:
        logging.error("Numerical failure: %s", e)
        return constants.EXIT_NUMERIC_ERROR
    except (DatasetFormatError, OSError) as e:
        logging.error("I/O failure: %s", e)
        return constants.EXIT_IO_ERROR
    return constants.EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
