"""Command-line interface.

Option values resolve as command-line flag, then ``--config`` JSON file,
then built-in default. Training defaults are the benchmark hyperparameters
(300 epochs, batch 20, Adam with lr 0.01, betas 0.9/0.999, eps 1e-8).

Exit codes: 0 success, 2 usage or configuration error, 3 I/O error,
4 training divergence, 5 malformed input data.
"""

import argparse
import json
import sys

from . import encoders, formats, plotting
from .experiments import DEFAULT_SWEEP_SIZES, Scenario, hidden_sweep, single_run, table1
from .geometry import GeometryParams
from .rng import Xoshiro256
from .sampler import DEFAULT_SEEDS, DEFAULT_SIZES, default_splits, features, generate
from .tinynet import TrainConfig, TrainingDiverged

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DIVERGED = 4
EXIT_DATA = 5


class UsageError(Exception):
    pass


def _int_list(text):
    if isinstance(text, list):
        return [int(v) for v in text]
    return [int(v) for v in str(text).split(",") if v.strip()]


def _flag(default, help):
    return {"action": "store_true", "default": default, "help": help}


def _opt(type, default, help):
    return {"type": type, "default": default, "help": help}


COMMON = {
    "seed": _opt(int, None, "random seed (meaning depends on the command)"),
    "out": _opt(str, None, "output path"),
}

TRAINING = {
    "epochs": _opt(int, 300, "training epochs"),
    "batch_size": _opt(int, 20, "mini-batch size"),
    "lr": _opt(float, 0.01, "Adam learning rate"),
    "beta1": _opt(float, 0.9, "Adam beta1"),
    "beta2": _opt(float, 0.999, "Adam beta2"),
    "eps": _opt(float, 1e-8, "Adam epsilon"),
}

# per-command options: name -> argparse spec; "default" is the built-in value
OPTIONS = {
    "generate": {
        "seed": _opt(int, DEFAULT_SEEDS["train"], "dataset seed"),
        "size": _opt(int, DEFAULT_SIZES["train"], "number of samples"),
        "out": _opt(str, "dataset.csv", "output CSV"),
        "r_big": _opt(float, 0.5, "big-circle radius"),
        "r_small": _opt(float, 0.1, "dot radius"),
    },
    "encode": {
        "input": _opt(str, None, "dataset CSV to encode"),
        "scheme": _opt(str, "latency", "latency, lif, poisson, regular or continuous"),
        "out": _opt(str, "events.csv", "output CSV"),
        "seed": _opt(int, 0, "seed for the poisson scheme"),
        "t_early": _opt(float, 0.0, "earliest spike time (ms)"),
        "t_late": _opt(float, 1.0, "latest spike time (ms)"),
        "tau_m": _opt(float, 10.0, "membrane time constant (ms)"),
        "theta_i": _opt(float, 1.0, "rheobase current"),
        "i_scale": _opt(float, 2.0, "feature-to-current factor"),
        "r_max": _opt(float, 100.0, "peak rate (Hz)"),
        "window": _opt(float, 100.0, "encoding window (ms)"),
        "population": _opt(int, 1, "neurons per input channel"),
    },
    "train": {
        "hidden": _opt(int, 30, "hidden layer size"),
        "shallow": _flag(False, "train a network without hidden layer"),
        "freeze_lower": _flag(False, "freeze the input-to-hidden weights"),
        "seed": _opt(int, 0, "weight initialisation seed"),
        "shuffle_seed": _opt(int, None, "mini-batch shuffle seed (default: seed + 1000000)"),
        **TRAINING,
        "out": _opt(str, "run.json", "result JSON"),
        "checkpoint": _opt(str, None, "also write the trained network here"),
        "train_data": _opt(str, None, "training CSV (default: seed-42 split)"),
        "val_data": _opt(str, None, "validation CSV (default: seed-41 split)"),
        "test_data": _opt(str, None, "test CSV (default: seed-40 split)"),
    },
    "experiment": {
        "which": _opt(str, None, "table1 or sweep"),
        "runs": _opt(int, 20, "runs per table cell"),
        "reps": _opt(int, 10, "repetitions per sweep size"),
        "sizes": _opt(_int_list, list(DEFAULT_SWEEP_SIZES), "comma-separated hidden sizes for the sweep"),
        "seed": _opt(int, 0, "base seed; run i uses seed + i"),
        **TRAINING,
        "workers": _opt(int, 1, "parallel training processes"),
        "out": _opt(str, None, "output prefix (default: the experiment name)"),
        "no_figures": _flag(False, "skip the SVG figures"),
    },
    "plot": {
        "kind": _opt(str, None, "scatter, curves, sweep, test_overlay or confusion"),
        "data": _opt(str, None, "dataset CSV (scatter, test_overlay)"),
        "result": _opt(str, None, "result JSON (curves, sweep, test_overlay, confusion)"),
        "seed": _opt(int, DEFAULT_SEEDS["test"], "seed of the dataset regenerated when --data is absent"),
        "size": _opt(int, DEFAULT_SIZES["test"], "size of the dataset regenerated when --data is absent"),
        "out": _opt(str, "figure.svg", "output SVG"),
    },
}

POSITIONAL = {"experiment": "which", "plot": "kind"}


def _add_option(parser, name, spec):
    flag = "--" + name.replace("_", "-")
    kwargs = {k: v for k, v in spec.items() if k != "default"}
    parser.add_argument(flag, dest=name, default=argparse.SUPPRESS, **kwargs)


def build_parser():
    parser = argparse.ArgumentParser(prog="yinyang", description="Yin-Yang dataset toolkit")
    parser.add_argument("--config", default=argparse.SUPPRESS, help="JSON file with option values")
    for name, spec in COMMON.items():
        _add_option(parser, name, spec)
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, options in OPTIONS.items():
        p = sub.add_parser(cmd, help=f"{cmd} subcommand")
        p.add_argument("--config", default=argparse.SUPPRESS, help="JSON file with option values")
        if cmd in POSITIONAL:
            pos = POSITIONAL[cmd]
            p.add_argument(pos, nargs="?", default=argparse.SUPPRESS, help=options[pos]["help"])
        for name, spec in options.items():
            if name != POSITIONAL.get(cmd):
                _add_option(p, name, spec)
    return parser


def resolve_options(command, given, config_path=None):
    """Merge built-in defaults, config file values and explicit flags."""
    options = OPTIONS[command]
    merged = {name: spec["default"] for name, spec in options.items()}
    if config_path is not None:
        try:
            with open(config_path) as fh:
                file_values = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {config_path}: {exc}") from exc
        if not isinstance(file_values, dict):
            raise UsageError(f"config {config_path}: expected a JSON object")
        unknown = sorted(set(file_values) - set(options))
        if unknown:
            raise UsageError(f"config {config_path}: unknown option(s) for {command}: {', '.join(unknown)}")
        for name, value in file_values.items():
            conv = options[name].get("type")
            try:
                merged[name] = conv(value) if conv is not None and value is not None else value
            except (TypeError, ValueError) as exc:
                raise UsageError(f"config {config_path}: bad value for {name}: {value!r}") from exc
    for name, value in given.items():
        if name not in options:
            raise UsageError(f"option --{name.replace('_', '-')} does not apply to {command}")
        merged[name] = value
    return merged


def _load_dataset(path, label="dataset"):
    if path is None:
        raise UsageError(f"missing {label} path")
    return formats.read_dataset_csv(path)


def cmd_generate(o):
    if o["size"] < 1:
        raise UsageError(f"--size must be >= 1, got {o['size']}")
    try:
        g = GeometryParams(o["r_big"], o["r_small"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ds = generate(o["seed"], o["size"], g)
    formats.write_dataset_csv(ds, o["out"])
    yin, yang, dot = ds.class_counts()
    print(f"wrote {len(ds)} samples to {o['out']}; class counts yin/yang/dot: {yin}/{yang}/{dot}")


ENCODE_SCHEMES = ("latency", "lif", "poisson", "regular", "continuous")


def cmd_encode(o):
    scheme = o["scheme"]
    if scheme not in ENCODE_SCHEMES:
        raise UsageError(f"unknown scheme {scheme!r}; choose from {', '.join(ENCODE_SCHEMES)}")
    ds = _load_dataset(o["input"], "--input")
    feats = [features(s, ds.geometry) for s in ds.samples]
    try:
        if scheme == "latency":
            c = encoders.LatencyConfig(o["t_early"], o["t_late"])
            blocks = [(i, encoders.encode_latency(f, c)) for i, f in enumerate(feats)]
        elif scheme == "lif":
            c = encoders.LifEncoderConfig(o["tau_m"], o["theta_i"], o["i_scale"])
            blocks = [(i, encoders.encode_lif_current(f, c)) for i, f in enumerate(feats)]
        else:
            c = encoders.RateConfig(o["r_max"], o["window"], o["population"], scheme)
            rng = Xoshiro256(o["seed"])
            blocks = [(i, encoders.encode_rate(f, c, rng)) for i, f in enumerate(feats)]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = formats.rates_csv(blocks) if scheme == "continuous" else formats.events_csv(blocks)
    formats.atomic_write_text(o["out"], text)
    print(f"encoded {len(feats)} samples with {scheme} scheme to {o['out']}")


def _train_config(o, seed, shuffle_seed):
    try:
        return TrainConfig(epochs=o["epochs"], batch_size=o["batch_size"], lr=o["lr"], beta1=o["beta1"],
                           beta2=o["beta2"], eps=o["eps"], shuffle_seed=shuffle_seed, init_seed=seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_train(o):
    if o["shallow"]:
        if o["freeze_lower"]:
            raise UsageError("--freeze-lower needs a hidden layer")
        scenario = Scenario.shallow()
    elif o["hidden"] < 1:
        raise UsageError("--hidden must be >= 1")
    else:
        scenario = Scenario("frozen" if o["freeze_lower"] else "deep", o["hidden"])
    seed = o["seed"]
    shuffle_seed = o["shuffle_seed"] if o["shuffle_seed"] is not None else seed + 10**6
    cfg = _train_config(o, seed, shuffle_seed)
    defaults = default_splits()
    splits = tuple(
        formats.read_dataset_csv(path) if path else ds
        for path, ds in zip((o["train_data"], o["val_data"], o["test_data"]), defaults)
    )
    result, net = single_run(scenario, seed, shuffle_seed, cfg, splits)
    formats.write_json(result.to_dict(), o["out"])
    if o["checkpoint"]:
        formats.write_json(net.to_dict(), o["checkpoint"])
    print(f"{scenario.name}: final test accuracy {result.final_test_accuracy:.4f} -> {o['out']}")


def _prefix(o):
    return o["out"] if o["out"] else o["which"]


def _write_figure(fig, path):
    formats.atomic_write_bytes(path, plotting.render_svg(fig))
    return path


def cmd_experiment(o):
    which = o["which"]
    if which not in ("table1", "sweep"):
        raise UsageError("experiment must be 'table1' or 'sweep'")
    cfg = _train_config(o, 0, 10**6)
    prefix = _prefix(o)
    written = []
    if which == "table1":
        if o["runs"] < 1:
            raise UsageError("--runs must be >= 1")
        tab = table1(o["runs"], o["seed"], cfg, o["workers"])
        formats.write_json(tab.to_dict(), prefix + ".json")
        formats.atomic_write_text(prefix + ".csv", formats.table1_csv(tab))
        written += [prefix + ".json", prefix + ".csv"]
        if not o["no_figures"]:
            test_ds = default_splits()[2]
            for s, runs in tab.runs.items():
                first = runs[0]
                written.append(_write_figure(plotting.curves_figure(first.curves), f"{prefix}_{s.name}_curves.svg"))
                written.append(_write_figure(plotting.test_overlay_figure(test_ds, first.test_predictions),
                                             f"{prefix}_{s.name}_test.svg"))
        for s, summ in tab.summaries.items():
            std = "NA" if summ.n < 2 else f"{summ.std:.4f}"
            print(f"{s.name:>10}: {summ.mean:.4f} +- {std} (n={summ.n})")
    else:
        if o["reps"] < 2:
            raise UsageError("--reps must be >= 2")
        if not o["sizes"]:
            raise UsageError("--sizes must list at least one hidden size")
        sweep = hidden_sweep(o["sizes"], o["reps"], o["seed"], cfg, o["workers"])
        doc = sweep.to_dict()
        formats.write_json(doc, prefix + ".json")
        formats.atomic_write_text(prefix + ".csv", formats.sweep_csv(sweep))
        written += [prefix + ".json", prefix + ".csv"]
        if not o["no_figures"]:
            written.append(_write_figure(plotting.sweep_figure(doc), prefix + "_sweep.svg"))
        for h in sorted(sweep.errors):
            print(f"hidden {h:>4}: error {sweep.mean(h):.4f} +- {sweep.std(h):.4f}")
    print("wrote " + ", ".join(written))


def _plot_dataset(o):
    if o["data"]:
        return formats.read_dataset_csv(o["data"])
    return generate(o["seed"], o["size"])


def _need_result(o):
    if not o["result"]:
        raise UsageError(f"plot {o['kind']} needs --result")
    return formats.read_json(o["result"])


def cmd_plot(o):
    kind = o["kind"]
    if kind not in plotting.FIGURE_KINDS:
        raise UsageError(f"unknown figure kind {kind!r}; choose from {', '.join(plotting.FIGURE_KINDS)}")
    try:
        if kind == "scatter":
            fig = plotting.scatter_figure(_plot_dataset(o))
        elif kind == "curves":
            fig = plotting.curves_figure(_need_result(o)["curves"])
        elif kind == "sweep":
            fig = plotting.sweep_figure(_need_result(o))
        elif kind == "test_overlay":
            doc = _need_result(o)
            fig = plotting.test_overlay_figure(_plot_dataset(o), doc["test_predictions"])
        else:
            fig = plotting.confusion_figure(_need_result(o)["confusion"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, formats.FormatError):
            raise
        raise formats.FormatError(f"malformed input for {kind} figure: {exc!r}") from exc
    _write_figure(fig, o["out"])
    print(f"wrote {o['out']}")


COMMANDS = {
    "generate": cmd_generate,
    "encode": cmd_encode,
    "train": cmd_train,
    "experiment": cmd_experiment,
    "plot": cmd_plot,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = vars(parser.parse_args(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    command = args.pop("command")
    config = args.pop("config", None)
    try:
        o = resolve_options(command, args, config)
        pos = POSITIONAL.get(command)
        if pos and o[pos] is None:
            raise UsageError(f"{command} needs a {pos} argument")
        COMMANDS[command](o)
    except UsageError as exc:
        print(f"yinyang {command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TrainingDiverged as exc:
        print(f"yinyang {command}: training diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except formats.FormatError as exc:
        print(f"yinyang {command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"yinyang {command}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
