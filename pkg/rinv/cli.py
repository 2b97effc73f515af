import argparse
import json
import logging
import os
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import ExperimentConfig, load_config
from .corruptions import ForwardOperator, ImageBatch, apply
from .encoders import Classifier, EncoderModel, LinearHead, teacher_from_supervised
from .errors import ConfigError, RinvError
from .evaluation import (
    EvalReport,
    clean_probe_transfer,
    evaluate_metrics,
    label_efficiency_sweep,
    label_shift_eval,
    plot_reports,
    severity_sweep,
    transfer_eval,
)
from .io import (
    load_checkpoint,
    load_head,
    load_idx,
    save_checkpoint,
    save_head,
    save_idx,
    save_idx_dataset,
    write_csv,
    write_json,
)
from .losses import GRADCHECK_STEP, gradcheck_suite, gradcheck_tolerance
from .numerics import RngStream, set_precision
from .theory import (
    EmbeddingSet,
    antipodal_pair,
    find_uniformity_minimizer,
    regular_simplex,
    verify_prop1,
)
from .training import BaselineTrainer, ProbeTrainer, StudentTrainer, TeacherTrainer
from .transform import DEFAULT_MEAN, DEFAULT_STD, channel_statistics
from .utils.dataset import Dataset, synth_dataset, synth_shifted_split

__all__ = ["build_parser", "main", "cli_dispatch"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

log_format = "%(asctime)s %(name)s %(levelname)s: %(message)s"


class _Context:
    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args

        if args.config is not None:
            config = load_config(args.config)
        else:
            config = ExperimentConfig()

        if args.seed is not None:
            config = config.with_seed(args.seed)

        if args.precision is not None:
            config = config.with_precision(args.precision)

        self.config = config
        self.out_dir = args.out if args.out is not None else config.out_dir
        self._data = None

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def checkpoint(self, role: str) -> str:
        return self.path(self.config.checkpoints[role])

    def data(self) -> Tuple[Dataset, Optional[Dataset]]:
        if self._data is None:
            self._data = load_data(self.config)

        return self._data

    def test_data(self) -> Dataset:
        _, test = self.data()

        if test is None:
            raise ConfigError("No test split is configured.")

        return test

    def statistics(self):
        if self.config.data.normalization == "dataset":
            train, _ = self.data()
            return channel_statistics(train.images)

        return DEFAULT_MEAN, DEFAULT_STD


def load_data(config: ExperimentConfig) -> Tuple[Dataset, Optional[Dataset]]:
    r"""Training and test splits of an experiment."""
    data = config.data

    if data.train_images is None:
        synth = data.synth
        rng = RngStream(config.seed, "data")
        shape = (synth.channels, synth.height, synth.width)
        train = synth_dataset(
            synth.n_classes, synth.per_class, *shape, rng, noise_std=synth.noise_std, split="train"
        )
        test = synth_dataset(
            synth.n_classes,
            synth.test_per_class,
            *shape,
            rng,
            noise_std=synth.noise_std,
            split="test",
        )

        return train, test

    train = load_idx(data.train_images, data.train_labels, split="train")
    test = None

    if data.test_images is not None:
        test = load_idx(
            data.test_images, data.test_labels, class_count=train.class_count, split="test"
        )

    return train, test


def _parse_operator(value: Optional[str], default: ForwardOperator) -> ForwardOperator:
    if value is None:
        return default

    try:
        spec = json.loads(value)
    except json.JSONDecodeError as e:
        raise ConfigError("Operator should be given in JSON, but given {}.".format(value)) from e

    return ForwardOperator.from_dict(spec)


def _load_teacher(path: str) -> EncoderModel:
    encoder = load_checkpoint(path, frozen=True)
    head = load_head(path)

    if head is None:
        return encoder

    return teacher_from_supervised(Classifier(encoder, head))


def _load_probe(ctx: _Context, encoder_path: str) -> LinearHead:
    if ctx.args.head is not None:
        head = load_head(ctx.args.head)
    else:
        head = load_head(encoder_path)

        if head is None:
            head = load_head(ctx.checkpoint("probe"))

    if head is None:
        raise ConfigError("No linear head is found for {}.".format(encoder_path))

    return head


def _write_reports(ctx: _Context, name: str, reports: Sequence[EvalReport]) -> None:
    write_csv(ctx.path(name + ".csv"), [report.to_row() for report in reports])
    write_json(ctx.path(name + ".json"), [report.to_dict() for report in reports])
    print(ctx.path(name + ".csv"))


def cmd_synth_data(ctx: _Context) -> int:
    args = ctx.args

    if ctx.config.data.train_images is not None:
        raise ConfigError("synth-data needs a synth data block.")

    train, test = ctx.data()

    save_idx_dataset(train, ctx.path("train-images.idx"), ctx.path("train-labels.idx"), args.dtype)
    save_idx_dataset(test, ctx.path("test-images.idx"), ctx.path("test-labels.idx"), args.dtype)

    print(ctx.out_dir)

    return EXIT_OK


def cmd_train_teacher(ctx: _Context) -> int:
    train, _ = ctx.data()
    mean, std = ctx.statistics()
    trainer = TeacherTrainer(ctx.config.teacher, mean=mean, std=std)
    classifier = trainer(train, ctx.config.encoder)

    path = ctx.checkpoint("teacher")
    save_checkpoint(path, classifier.encoder, head=classifier.head)
    record = trainer.run_record(checkpoint=path, encoder=ctx.config.encoder.to_dict())
    write_json(ctx.path("teacher.run.json"), record)
    print(path)

    return EXIT_OK


def cmd_train_student(ctx: _Context) -> int:
    args = ctx.args
    train, _ = ctx.data()
    mean, std = ctx.statistics()
    teacher_path = args.teacher if args.teacher is not None else ctx.checkpoint("teacher")
    teacher = _load_teacher(teacher_path)

    config = ctx.config.student
    config = config.replace(operator=_parse_operator(args.operator, config.operator))

    trainer = StudentTrainer(config, mean=mean, std=std)
    student = trainer(teacher, train)

    path = ctx.checkpoint("student")
    save_checkpoint(path, student)
    record = trainer.run_record(checkpoint=path, teacher=teacher_path)
    write_json(ctx.path("student.run.json"), record)
    print(path)

    return EXIT_OK


def cmd_train_probe(ctx: _Context) -> int:
    args = ctx.args
    train, _ = ctx.data()
    mean, std = ctx.statistics()
    encoder_path = args.encoder if args.encoder is not None else ctx.checkpoint("student")
    encoder = load_checkpoint(encoder_path, frozen=True)

    config = ctx.config.probe
    config = config.replace(operator=_parse_operator(args.operator, config.operator))

    if args.label_fraction is not None:
        config = config.replace(label_fraction=args.label_fraction)

    trainer = ProbeTrainer(config, mean=mean, std=std)
    head = trainer(encoder, train)

    path = ctx.checkpoint("probe")
    save_head(path, head)
    record = trainer.run_record(checkpoint=path, encoder=encoder_path)
    write_json(ctx.path("probe.run.json"), record)
    print(path)

    return EXIT_OK


def cmd_train_baseline(ctx: _Context) -> int:
    args = ctx.args
    train, _ = ctx.data()
    mean, std = ctx.statistics()
    init_path = args.init if args.init is not None else ctx.checkpoint("teacher")
    head = load_head(init_path, requires_grad=True)

    if head is None:
        raise ConfigError("Checkpoint {} has no linear head.".format(init_path))

    init = Classifier(load_checkpoint(init_path), head)

    config = ctx.config.baseline
    config = config.replace(operator=_parse_operator(args.operator, config.operator))

    trainer = BaselineTrainer(config, mean=mean, std=std)
    classifier = trainer(init, train)

    path = ctx.checkpoint("baseline")
    save_checkpoint(path, classifier.encoder, head=classifier.head)
    record = trainer.run_record(checkpoint=path, init=init_path)
    write_json(ctx.path("baseline.run.json"), record)
    print(path)

    return EXIT_OK


def _eval_kwargs(ctx: _Context, model: str):
    mean, std = ctx.statistics()

    return {
        "n_instantiations": ctx.config.eval.n_instantiations,
        "rng": RngStream(ctx.config.seed, "evaluate"),
        "model": model,
        "batch_size": ctx.config.eval.batch_size,
        "mean": mean,
        "std": std,
    }


def cmd_evaluate(ctx: _Context) -> int:
    args = ctx.args
    encoder_path = args.encoder if args.encoder is not None else ctx.checkpoint("student")
    encoder = load_checkpoint(encoder_path, frozen=True)
    head = _load_probe(ctx, encoder_path)
    operator = _parse_operator(args.operator, ctx.config.probe.operator)
    model = args.model if args.model is not None else os.path.basename(encoder_path)

    reports = evaluate_metrics(
        encoder,
        head,
        ctx.test_data(),
        operator,
        metric_names=ctx.config.eval.metrics,
        **_eval_kwargs(ctx, model)
    )
    _write_reports(ctx, args.name, reports)

    return EXIT_OK


def _synth_transfer_splits(ctx: _Context) -> Tuple[Dataset, Dataset]:
    synth = ctx.config.data.synth

    if synth is None or ctx.config.data.train_images is not None:
        raise ConfigError("Transfer sweeps need a synth data block.")

    rng = RngStream(ctx.config.seed, "data")
    shape = (synth.channels, synth.height, synth.width)
    kwargs = {"noise_std": synth.noise_std, "class_offset": synth.n_classes}
    train = synth_dataset(
        synth.n_classes, synth.per_class, *shape, rng, split="train", name="transfer", **kwargs
    )
    test = synth_dataset(
        synth.n_classes, synth.test_per_class, *shape, rng, split="test", name="transfer", **kwargs
    )

    return train, test


def cmd_sweep(ctx: _Context) -> int:
    args = ctx.args
    config = ctx.config
    kind = args.kind if args.kind is not None else config.eval.sweep
    encoder_path = args.encoder if args.encoder is not None else ctx.checkpoint("student")
    encoder = load_checkpoint(encoder_path, frozen=True)
    operator = _parse_operator(args.operator, config.probe.operator)
    model = args.model if args.model is not None else os.path.basename(encoder_path)
    kwargs = _eval_kwargs(ctx, model)
    reports: List[EvalReport] = []

    if kind == "severity":
        head = _load_probe(ctx, encoder_path)

        for metric in config.eval.metrics:
            reports += severity_sweep(
                encoder,
                head,
                ctx.test_data(),
                operator,
                config.eval.severities,
                metric=metric,
                **kwargs
            )
    elif kind == "label_efficiency":
        train, test = ctx.data()
        probe = config.probe.replace(operator=operator)
        reports = label_efficiency_sweep(
            encoder, train, test, config.eval.fractions, probe, **kwargs
        )
    elif kind == "label_shift":
        synth = config.data.synth

        if synth is None or config.data.train_images is not None:
            raise ConfigError("Label-shift sweeps need a synth data block.")

        external, label_map = synth_shifted_split(
            synth.n_classes,
            synth.test_per_class,
            synth.channels,
            synth.height,
            synth.width,
            RngStream(config.seed, "data"),
            noise_std=synth.noise_std,
        )
        head = _load_probe(ctx, encoder_path)
        reports = [label_shift_eval(encoder, head, external, label_map, operator, **kwargs)]
    elif kind == "transfer":
        train, test = _synth_transfer_splits(ctx)
        reports = transfer_eval(encoder, train, test, operator, config.probe, **kwargs)
    elif kind == "clean_probe":
        train, test = ctx.data()
        teacher_path = args.teacher if args.teacher is not None else ctx.checkpoint("teacher")
        teacher = _load_teacher(teacher_path)
        reports = [
            clean_probe_transfer(
                teacher, encoder, train, test, operator, probe_config=config.probe, **kwargs
            )
        ]
    else:
        raise NotImplementedError("Not support {}.".format(kind))

    name = args.name if args.name is not None else "sweep-{}".format(kind)
    _write_reports(ctx, name, reports)

    if (args.plot or config.eval.plot) and kind in ["severity", "label_efficiency"]:
        x = "severity" if kind == "severity" else "label_fraction"
        plot_reports(reports, ctx.path(name + ".svg"), x=x)

    return EXIT_OK


def cmd_corrupt(ctx: _Context) -> int:
    args = ctx.args
    dataset = load_idx(args.images, args.labels)
    operator = _parse_operator(args.operator, ctx.config.student.operator)
    rng = RngStream(ctx.config.seed, "corrupt")
    output = ctx.path("corrupted-images.idx")

    if os.path.abspath(output) == os.path.abspath(args.images):
        raise ConfigError("Input files are never overwritten.")

    corrupted = []

    for batch_idx, indices in enumerate(dataset.batch_indices(256)):
        batch = apply(
            operator, ImageBatch(dataset.images[indices]), rng.split("batch{}".format(batch_idx))
        )
        corrupted.append(batch.values)

    images = np.concatenate(corrupted, axis=0)

    if images.shape[1] == 1:
        images = images[:, 0]

    save_idx(output, images, dtype="float32")
    print(output)

    return EXIT_OK


def cmd_verify_recovery(ctx: _Context) -> int:
    args = ctx.args
    rng = RngStream(ctx.config.seed, "verify-recovery")
    kind = args.set

    if kind == "auto":
        if args.n == 2:
            kind = "antipodal"
        elif args.d >= args.n - 1:
            kind = "simplex"
        else:
            kind = "minimizer"

    if kind == "antipodal":
        if args.n != 2:
            raise ConfigError("Antipodal sets have 2 rows, but given {}.".format(args.n))

        embedding_set = EmbeddingSet(antipodal_pair(args.d), args.tau)
    elif kind == "simplex":
        embedding_set = EmbeddingSet(regular_simplex(args.n, args.d), args.tau)
    else:
        embedding_set = find_uniformity_minimizer(
            args.n, args.d, args.tau, rng.split("minimizer"), n_restarts=args.restarts
        )

    report = verify_prop1(
        embedding_set, rng.split("verify"), n_samples=args.samples, n_restarts=args.restarts
    )
    output = {"set": kind, **report.to_dict()}
    print(json.dumps(output, indent=2, sort_keys=True))

    if args.out is not None:
        write_json(ctx.path("verify-recovery.json"), output)

    return EXIT_ERROR if report.passed is False else EXIT_OK


def cmd_gradcheck(ctx: _Context) -> int:
    args = ctx.args
    seed = args.seed if args.seed is not None else 0
    errors = gradcheck_suite(seed=seed)
    failures = sorted(
        name for name, error in errors.items() if not error < gradcheck_tolerance(name)
    )
    output = {
        "seed": seed,
        "step": GRADCHECK_STEP,
        "tolerances": {name: gradcheck_tolerance(name) for name in errors},
        "errors": errors,
        "failures": failures,
        "passed": len(failures) == 0,
    }
    print(json.dumps(output, indent=2, sort_keys=True))

    if args.out is not None:
        write_json(ctx.path("gradcheck.json"), output)

    return EXIT_OK if len(failures) == 0 else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="JSON experiment config.")
    common.add_argument("--seed", type=int, default=None, help="Seed of every pipeline.")
    common.add_argument("--out", type=str, default=None, help="Output directory.")
    common.add_argument("--precision", choices=["f32", "f64"], default=None)
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG."
    )

    parser = argparse.ArgumentParser(
        prog="rinv",
        description="Recover clean image representations from corrupted inputs.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command")

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        subparser = subparsers.add_parser(name, parents=[common], help=help)
        subparser.set_defaults(func=func)

        return subparser

    operator_help = 'Forward operator in JSON, e.g. \'{"kind": "mask", "p": 0.9}\'.'

    subparser = add("synth-data", cmd_synth_data, "Write synthetic train/test splits as IDX.")
    subparser.add_argument("--dtype", choices=["ubyte", "float32"], default="ubyte")

    add("train-teacher", cmd_train_teacher, "Pretrain the teacher on clean images.")

    subparser = add("train-student", cmd_train_student, "Train a robust student.")
    subparser.add_argument("--teacher", type=str, default=None, help="Teacher checkpoint.")
    subparser.add_argument("--operator", type=str, default=None, help=operator_help)

    subparser = add("train-probe", cmd_train_probe, "Train a linear probe on a frozen encoder.")
    subparser.add_argument("--encoder", type=str, default=None, help="Encoder checkpoint.")
    subparser.add_argument("--operator", type=str, default=None, help=operator_help)
    subparser.add_argument("--label-fraction", type=float, default=None)

    subparser = add("train-baseline", cmd_train_baseline, "Fine-tune end to end on corruptions.")
    subparser.add_argument("--init", type=str, default=None, help="Classifier checkpoint.")
    subparser.add_argument("--operator", type=str, default=None, help=operator_help)

    for name, func, help in [
        ("evaluate", cmd_evaluate, "Evaluate an encoder and a head under an operator."),
        ("sweep", cmd_sweep, "Run an evaluation protocol."),
    ]:
        subparser = add(name, func, help)
        subparser.add_argument("--encoder", type=str, default=None, help="Encoder checkpoint.")
        subparser.add_argument("--head", type=str, default=None, help="Head checkpoint.")
        subparser.add_argument("--operator", type=str, default=None, help=operator_help)
        subparser.add_argument("--model", type=str, default=None, help="Model id in reports.")

        if name == "evaluate":
            subparser.add_argument("--name", type=str, default="evaluate")
        else:
            subparser.add_argument("--name", type=str, default=None)
            subparser.add_argument(
                "--kind",
                choices=["severity", "label_efficiency", "label_shift", "transfer", "clean_probe"],
                default=None,
            )
            subparser.add_argument("--teacher", type=str, default=None, help="Teacher checkpoint.")
            subparser.add_argument("--plot", action="store_true", help="Also write an SVG chart.")

    subparser = add("corrupt", cmd_corrupt, "Corrupt IDX images with a forward operator.")
    subparser.add_argument("--images", type=str, required=True)
    subparser.add_argument("--labels", type=str, default=None)
    subparser.add_argument("--operator", type=str, default=None, help=operator_help)

    subparser = add("verify-recovery", cmd_verify_recovery, "Verify exact recovery numerically.")
    subparser.add_argument("--n", type=int, required=True, help="Number of embeddings.")
    subparser.add_argument("--d", type=int, required=True, help="Embedding dimension.")
    subparser.add_argument("--tau", type=float, default=0.1)
    subparser.add_argument("--samples", type=int, default=100000)
    subparser.add_argument("--restarts", type=int, default=8)
    subparser.add_argument(
        "--set", choices=["auto", "simplex", "antipodal", "minimizer"], default="auto"
    )

    add("gradcheck", cmd_gradcheck, "Compare analytic and numerical gradients.")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    r"""Run the command line.

    Returns:
        ``0`` on success, ``1`` on a domain error (or a failed check),
        and ``2`` on a usage error.
    """
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)

    if len(argv) == 0:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format=log_format)

    try:
        if args.precision is not None:
            set_precision(args.precision)

        return args.func(_Context(args))
    except (RinvError, ValueError, RuntimeError, FloatingPointError, OSError) as e:
        logger.debug("%s failed.", args.command, exc_info=True)
        print("error: {}".format(e), file=sys.stderr)

        return EXIT_ERROR


cli_dispatch = main
