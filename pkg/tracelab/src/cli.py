"""
Command line of the side-channel lab.

    python -m tracelab synth --cipher aes -n 500 --seed 7 -o traces.scat
    python -m tracelab attack traces.scat --true-key "67 76 89 ..."
    python -m tracelab cipher --alg speck --key <hex> --pt <hex>

Exit statuses: 0 success, 2 usage or configuration error, 3 data or file
format error, 4 degenerate data or an outcome that was never reached.
"""
import argparse
import logging
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np

from attacks.src.aes_attack import attack_aes
from attacks.src.constants import EXPERIMENT_BUDGET, EXPERIMENT_LANE, EXPERIMENT_PROFILE, EXPERIMENT_SIGMA
from attacks.src.diagnostics import LOAD_PAIRS, synthesize_zero_key_pair, zero_key_diagnostic
from attacks.src.experiments import ExperimentAxis, countermeasure_experiment
from attacks.src.report import AttackReport
from attacks.src.speck_attack import attack_speck_full, speck_phase_report
from cipher.src.aes import aes128_encrypt
from cipher.src.codec import block_to_words, format_hex, parse_hex, words_to_block
from cipher.src.speck import speck128_encrypt, speck_key_schedule
from cpa.src.engine import correlation_vs_time, sweep_traces, trace_grid
from cpa.src.selection import SelectionKind, SelectionModel
from leakage.src.constants import DEFAULT_AES_KEY, DEFAULT_SEED, DEFAULT_TRACE_COUNT
from leakage.src.events import CipherId, EventTag, ScheduleProfile
from leakage.src.settings import CountermeasureSettings, NoiseConfig, SimulationSettings
from leakage.src.synth import random_plaintexts, synthesize_trace_set
from leakage.src.traces import TraceSet
from randomness.src.constants import ADC_BITS, ADC_SOURCE_FOLDS, BIT_SOURCE_FOLDS, HISTOGRAM_BINS, SEED_BITS, \
    SEED_COUNT
from randomness.src.quality import chi_square_uniformity, histogram, spectral_flatness, spectrum_table
from randomness.src.seed import SeedSource, collect_seeds
from tracelab.src import logging_util
from tracelab.src.constants import EXIT_DATA, EXIT_DEGENERATE, EXIT_OK, EXIT_USAGE
from tracelab.src.errors import ConfigurationError, DegenerateDataError, InsufficientDataError, \
    InvalidOperandError, TraceFileCorruptionError, TraceFileFormatError
from tracelab.src.export import export_correlation_csv, export_histogram_csv, export_report_csv, \
    export_sweep_csv, export_table_csv
from tracelab.src.trace_file import read_trace_set, write_sidecar, write_trace_set
from tracelab.src.visualizer import plot_correlation_vs_time, plot_histogram, plot_sweep

# --cipher value -> (cipher, default profile)
CIPHERS = {
    "aes": (CipherId.AES128, "aes_full"),
    "speck-phase1": (CipherId.SPECK_PHASE1, "speck_phase1"),
    "speck-phase2": (CipherId.SPECK_PHASE2, "speck_phase2"),
}

DEFAULT_SELECTION = {
    CipherId.AES128: "aes_sbox",
    CipherId.SPECK_PHASE1: "speck_r1",
    CipherId.SPECK_PHASE2: "speck_r2",
}


class NotReached(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def _word(text: str) -> int:
    return int.from_bytes(parse_hex(text, 8), "big")


def _flags(args: argparse.Namespace) -> dict[str, Any]:
    return {name: value for name, value in vars(args).items() if name != "handler" and value is not None}


def _polarity(args: argparse.Namespace) -> int:
    return -1 if args.inverted else 1


def _add_noise_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("leakage")
    group.add_argument("--sigma", type=float, default=None, help="measurement noise in volts")
    group.add_argument("--alpha", type=float, default=None, help="volts per unit of Hamming weight")
    group.add_argument("--baseline", type=float, default=None)
    group.add_argument("--samples-per-event", type=int, default=None)
    group.add_argument("--filler-gap", type=int, default=None)
    group.add_argument("--load-gain", type=float, default=None)
    group.add_argument("--invert", action="store_true", help="inverted probe")
    group.add_argument("--averaging", type=int, default=None, help="acquisitions averaged per plaintext")


def _add_countermeasure_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("countermeasures")
    group.add_argument("--injection", type=int, default=0, help="up to this many random instructions")
    group.add_argument("--injection-tag", choices=[tag.value for tag in EventTag], default=None)
    group.add_argument("--shuffle", action="store_true", help="shuffle the byte-wise operations")
    group.add_argument("--lowpass", type=float, default=0.0, help="power-line filter lambda in [0, 1)")
    group.add_argument("--parallel", type=int, default=0, help="random bytes leaked by a parallel device")


def noise_from_args(args: argparse.Namespace, sigma: Optional[float] = None) -> NoiseConfig:
    values: dict[str, Any] = {}
    for name in ("sigma", "alpha", "baseline", "samples_per_event", "filler_gap", "load_gain", "averaging"):
        if getattr(args, name, None) is not None:
            values[name] = getattr(args, name)
    if sigma is not None and "sigma" not in values:
        values["sigma"] = sigma
    return NoiseConfig(invert=getattr(args, "invert", False), **values)


def countermeasures_from_args(args: argparse.Namespace) -> CountermeasureSettings:
    tag = EventTag(args.injection_tag) if args.injection_tag is not None else None
    return CountermeasureSettings(args.injection, tag, args.shuffle, args.lowpass, args.parallel)


def _emit_report(report: AttackReport, args: argparse.Namespace) -> None:
    text = report.render_table(args.rows)
    print(text)
    if args.report is not None:
        Path(args.report).parent.mkdir(parents=True, exist_ok=True)
        Path(args.report).write_text(text + "\n")
    if args.csv is not None:
        export_report_csv(report, args.csv)


def run_synth(args: argparse.Namespace) -> int:
    cipher_id, default_profile = CIPHERS[args.cipher]
    profile = ScheduleProfile.by_name(args.profile or default_profile, args.limb_width)
    if profile.cipher_id != cipher_id:
        raise ConfigurationError(f"profile {profile.name} does not belong to {args.cipher}")
    settings = SimulationSettings(profile, parse_hex(args.key), noise_from_args(args),
                                  countermeasures_from_args(args))
    plaintexts = random_plaintexts(args.first_index + args.traces, args.seed)[args.first_index:]
    traceset = synthesize_trace_set(settings, plaintexts, args.seed, args.first_index, progress=args.progress)
    write_trace_set(traceset, args.output)
    write_sidecar(args.output, {**_flags(args), **traceset.meta})
    print(f"{traceset.num_traces} traces x {traceset.samples_per_trace} samples -> {args.output}")
    return EXIT_OK


def run_attack(args: argparse.Namespace) -> int:
    traceset = read_trace_set(args.input)
    true_key = parse_hex(args.true_key) if args.true_key is not None else None
    if traceset.cipher_id == CipherId.AES128:
        report = attack_aes(traceset, args.selection or DEFAULT_SELECTION[traceset.cipher_id], _polarity(args),
                            true_key, _flags(args))
    else:
        if args.selection is not None and args.selection != DEFAULT_SELECTION[traceset.cipher_id]:
            raise ConfigurationError(f"{traceset.cipher_id.name} sets are attacked with "
                                     f"{DEFAULT_SELECTION[traceset.cipher_id]}")
        k2 = _word(args.k2) if args.k2 is not None else None
        report = speck_phase_report(traceset, k2, _polarity(args), true_key, _flags(args))
    _emit_report(report, args)
    return EXIT_OK


def run_speck_attack(args: argparse.Namespace) -> int:
    true_key = parse_hex(args.true_key) if args.true_key is not None else None
    report = attack_speck_full(read_trace_set(args.phase1), read_trace_set(args.phase2), _polarity(args),
                               true_key, _flags(args))
    _emit_report(report, args)
    return EXIT_OK


def _sweep_model(traceset: TraceSet, args: argparse.Namespace) -> SelectionModel:
    name = args.selection or DEFAULT_SELECTION[traceset.cipher_id]
    return SelectionModel.by_name(name, _word(args.k2) if args.k2 is not None else None)


def run_sweep(args: argparse.Namespace) -> int:
    traceset = read_trace_set(args.input)
    grid = args.grid if args.grid is not None else trace_grid(traceset.num_traces)
    trajectory = sweep_traces(traceset, _sweep_model(traceset, args), args.byte, grid, _polarity(args))
    if args.csv is not None:
        export_sweep_csv(trajectory, args.csv)
    if args.plot is not None:
        plot_sweep(trajectory, args.plot, args.true_byte)
    for count, leader in zip(trajectory.counts, trajectory.leaders()):
        print(f"{count:>8} {'--' if leader is None else format(leader, '02X')}")
    if args.true_byte is not None:
        stable = trajectory.stable_count(args.true_byte)
        if stable is None:
            raise NotReached(f"byte {args.byte} never stabilised on {args.true_byte:02X} within {grid[-1]} traces")
        print(f"stable from {stable} traces")
    return EXIT_OK


def run_zero_key_demo(args: argparse.Namespace) -> int:
    key = parse_hex(args.key)
    with_loads, without_loads = synthesize_zero_key_pair(key, args.traces, args.seed, noise_from_args(args),
                                                         args.profile)
    diagnosis = zero_key_diagnostic(with_loads, without_loads, key, _polarity(args))
    print(diagnosis.summary())
    if args.csv is not None:
        export_table_csv(diagnosis.to_dataframe(), args.csv)
    if args.plot is not None or args.curves is not None:
        table = correlation_vs_time(with_loads, SelectionModel(SelectionKind.AES_XOR), 0, [key[0], 0])
        if args.curves is not None:
            export_correlation_csv(table, args.curves)
        if args.plot is not None:
            plot_correlation_vs_time(table, args.plot)
    return EXIT_OK


def run_counter_experiment(args: argparse.Namespace) -> int:
    axis = ExperimentAxis.by_name(args.axis)
    settings = SimulationSettings(ScheduleProfile.by_name(args.profile), parse_hex(args.key),
                                  noise_from_args(args, sigma=EXPERIMENT_SIGMA))
    result = countermeasure_experiment(settings, axis, args.levels, args.seeds, args.budget, lane=args.lane,
                                       progress=args.progress)
    print(result.runs.to_string(index=False))
    print()
    print(result.medians.to_string(index=False))
    if args.csv is not None:
        export_table_csv(result.runs, args.csv)
    if not result.all_reached:
        raise NotReached(f"some cells did not stabilise within {args.budget} traces")
    return EXIT_OK


def run_randtest(args: argparse.Namespace) -> int:
    match args.source:
        case "bits":
            source = SeedSource.biased_bits(args.p, args.seed, args.count)
            folds = args.folds or BIT_SOURCE_FOLDS
        case _:
            source = SeedSource.adc_words(args.k, args.seed, args.count)
            folds = args.folds or ADC_SOURCE_FOLDS
    seeds = collect_seeds(source, args.bits, folds).astype(np.float64)
    value_range = (0.0, float(1 << args.bits))
    statistic, uniform = chi_square_uniformity(seeds, args.bins, value_range=value_range)
    flatness, white = spectral_flatness(seeds)
    print(f"source: {args.source}, {args.count} seeds of {args.bits} bits, {folds} folds")
    print(f"chi-square: {statistic:.2f} ({'pass' if uniform else 'fail'})")
    print(f"spectral flatness: {flatness:.2f} ({'pass' if white else 'fail'})")
    table = histogram(seeds, args.bins, value_range)
    if args.csv is not None:
        export_histogram_csv(table, args.csv)
    if args.spectrum is not None:
        export_table_csv(spectrum_table(seeds), args.spectrum)
    if args.plot is not None:
        plot_histogram(table, args.plot, f"{args.source}, m = {folds}")
    return EXIT_OK


def run_cipher(args: argparse.Namespace) -> int:
    key, plaintext = parse_hex(args.key), parse_hex(args.pt)
    match args.alg:
        case "aes":
            ciphertext = aes128_encrypt(plaintext, key)
        case _:
            c1, c2 = speck128_encrypt(*block_to_words(plaintext), speck_key_schedule(*block_to_words(key)))
            ciphertext = words_to_block(c1, c2)
    print(format_hex(ciphertext))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracelab", description="Simulated power-analysis lab for AES and Speck.")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    def report_arguments(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--true-key", default=None, help="grade the result against this key")
        sub.add_argument("--inverted", action="store_true", help="traces come from an inverted probe")
        sub.add_argument("--report", default=None, help="also write the text report here")
        sub.add_argument("--csv", default=None, help="ranked guesses of every lane as CSV")
        sub.add_argument("--rows", type=int, default=5, help="ranked guesses shown per lane")

    synth = command("synth", run_synth, "synthesise a trace-set file")
    synth.add_argument("--cipher", choices=list(CIPHERS), default="aes")
    synth.add_argument("--profile", choices=list(ScheduleProfile.PROFILES), default=None)
    synth.add_argument("--limb-width", type=int, choices=[8, 16], default=8)
    synth.add_argument("--key", default=DEFAULT_AES_KEY)
    synth.add_argument("-n", "--traces", type=int, default=DEFAULT_TRACE_COUNT)
    synth.add_argument("--seed", type=int, default=DEFAULT_SEED)
    synth.add_argument("--first-index", type=int, default=0)
    synth.add_argument("-o", "--output", required=True)
    synth.add_argument("--progress", action="store_true")
    _add_noise_arguments(synth)
    _add_countermeasure_arguments(synth)

    attack = command("attack", run_attack, "attack one trace-set file")
    attack.add_argument("input")
    attack.add_argument("--selection", choices=list(DEFAULT_SELECTION.values()) + ["aes_xor"], default=None)
    attack.add_argument("--k2", default=None, help="K2 in hex, needed for phase 2 sets")
    report_arguments(attack)

    speck = command("speck-attack", run_speck_attack, "two-phase Speck attack")
    speck.add_argument("phase1")
    speck.add_argument("phase2")
    report_arguments(speck)

    sweep = command("sweep", run_sweep, "rank one key byte over growing trace counts")
    sweep.add_argument("input")
    sweep.add_argument("--selection", default=None)
    sweep.add_argument("--k2", default=None)
    sweep.add_argument("--byte", type=int, default=0)
    sweep.add_argument("--grid", type=_int_list, default=None, help="ascending trace counts, e.g. 10,20,50")
    sweep.add_argument("--true-byte", type=lambda text: int(text, 16), default=None, help="hex key byte")
    sweep.add_argument("--inverted", action="store_true")
    sweep.add_argument("--csv", default=None)
    sweep.add_argument("--plot", default=None)

    zero = command("zero-key-demo", run_zero_key_demo, "reproduce the zero-key anomaly")
    zero.add_argument("--key", default=DEFAULT_AES_KEY)
    zero.add_argument("-n", "--traces", type=int, default=DEFAULT_TRACE_COUNT)
    zero.add_argument("--seed", type=int, default=DEFAULT_SEED)
    zero.add_argument("--profile", choices=list(LOAD_PAIRS), default="aes_xor_with_load")
    zero.add_argument("--inverted", action="store_true")
    zero.add_argument("--csv", default=None)
    zero.add_argument("--curves", default=None, help="lane 0 correlation-vs-time CSV")
    zero.add_argument("--plot", default=None)
    _add_noise_arguments(zero)

    experiment = command("counter-experiment", run_counter_experiment, "minimal trace counts per countermeasure level")
    experiment.add_argument("--axis", choices=[axis.value for axis in ExperimentAxis], required=True)
    experiment.add_argument("--levels", type=_float_list, required=True)
    experiment.add_argument("--seeds", type=_int_list, default=[1, 2, 3, 4, 5])
    experiment.add_argument("--budget", type=int, default=EXPERIMENT_BUDGET)
    experiment.add_argument("--profile", choices=list(ScheduleProfile.PROFILES), default=EXPERIMENT_PROFILE)
    experiment.add_argument("--key", default=DEFAULT_AES_KEY)
    experiment.add_argument("--lane", type=int, default=EXPERIMENT_LANE)
    experiment.add_argument("--csv", default=None)
    experiment.add_argument("--progress", action="store_true")
    _add_noise_arguments(experiment)

    randtest = command("randtest", run_randtest, "assemble hardware seeds and test them")
    randtest.add_argument("--source", choices=["bits", "adc"], default="bits")
    randtest.add_argument("--p", type=float, default=0.3, help="probability of a 1 for the bit source")
    randtest.add_argument("--k", type=int, default=ADC_BITS, help="ADC word width")
    randtest.add_argument("-n", "--bits", type=int, default=SEED_BITS)
    randtest.add_argument("-m", "--folds", type=int, default=None,
                          help=f"folds per seed (default {BIT_SOURCE_FOLDS} bits, {ADC_SOURCE_FOLDS} ADC)")
    randtest.add_argument("--count", type=int, default=SEED_COUNT)
    randtest.add_argument("--seed", type=int, default=DEFAULT_SEED)
    randtest.add_argument("--bins", type=int, default=HISTOGRAM_BINS)
    randtest.add_argument("--csv", default=None)
    randtest.add_argument("--spectrum", default=None)
    randtest.add_argument("--plot", default=None)

    cipher = command("cipher", run_cipher, "encrypt one block")
    cipher.add_argument("--alg", choices=["aes", "speck"], required=True)
    cipher.add_argument("--key", required=True)
    cipher.add_argument("--pt", required=True)
    return parser


def cli_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return EXIT_OK if exit_request.code == 0 else EXIT_USAGE

    logging_util.set_logging(logging.DEBUG if args.verbose else logging.INFO)
    try:
        return int(args.handler(args))
    except ConfigurationError as error:
        parser.print_usage()
        logging.error(str(error))
        return EXIT_USAGE
    except DegenerateDataError as error:
        logging.error(str(error))
        return EXIT_DEGENERATE
    except NotReached as outcome:
        logging.warning(str(outcome))
        return EXIT_DEGENERATE
    except (InvalidOperandError, InsufficientDataError, TraceFileFormatError, TraceFileCorruptionError,
            OSError) as error:
        logging.error(str(error))
        return EXIT_DATA
