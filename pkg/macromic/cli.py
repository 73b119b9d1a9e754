#!/usr/bin/env python3
"""Evaluate the measures from the command line and write the results as CSV or JSON."""
import argparse
import collections
import concurrent.futures
import csv
import io
import json
import logging
import os
import pathlib
import sys
from typing import (  # pylint: disable=unused-import
    Any, Callable, List, Mapping, MutableMapping, Optional, Sequence, TextIO, Tuple)

import icontract
import numpy as np
import temppathlib

import macromic
from macromic import discord
from macromic import fragility
from macromic import mutual_info
from macromic import numerics
from macromic import peaks
from macromic import pointers
from macromic import roof
from macromic import spectra
from macromic import verify

LOGGER = logging.getLogger(__name__)

#: Peak count standing in for k → ∞ in the reproduction of the peak-family curves.
INF_PROXY_K = 512

#: Bits at which the mixed-state sizes are tabulated by default.
FIG3_BITS = (0.082, 1.0 / 3.0)

#: Value of ``--suite`` that runs every verification suite.
ALL_SUITES = 'all'

Row = List[Any]


class Table:
    """
    Represent the result of a sub-command.

    :ivar header: column names
    :ivar rows: rows in deterministic order
    :ivar formats: CSV formatters of individual columns; other numbers get 12 significant digits
    """

    def __init__(self,
                 header: Sequence[str],
                 rows: Sequence[Row],
                 formats: Optional[Mapping[str, Callable[[Any], str]]] = None) -> None:
        """Initialize with the given values."""
        self.header = list(header)
        self.rows = list(rows)
        self.formats = dict(formats) if formats is not None else {}

    def __repr__(self) -> str:
        """Represent the table for debugging."""
        return "Table(header={}, rows={})".format(self.header, len(self.rows))


class RunManifest:
    """
    Record how an output file was produced.

    :ivar command: name of the sub-command
    :ivar parameters: the parsed command-line parameters
    :ivar seed: seed of the random generators
    :ivar output_path: path to the output file
    :ivar format: output format, ``csv`` or ``json``
    """

    def __init__(self, command: str, parameters: Mapping[str, Any], seed: int, output_path: str,
                 format: str) -> None:  # pylint: disable=redefined-builtin
        """Initialize with the given values."""
        # pylint: disable=too-many-arguments
        self.command = command
        self.parameters = parameters
        self.seed = seed
        self.output_path = output_path
        self.format = format

    def to_json(self) -> str:
        """Serialize the manifest deterministically."""
        return json.dumps(
            collections.OrderedDict([('command', self.command), ('format', self.format), ('macromic',
                                                                                           macromic.__version__),
                                     ('output_path', self.output_path), ('parameters', self.parameters),
                                     ('seed', self.seed)]),
            indent=2,
            sort_keys=True) + '\n'

    def __repr__(self) -> str:
        """Represent the manifest for debugging."""
        return "RunManifest(command={!r}, seed={}, output_path={!r}, format={!r})".format(
            self.command, self.seed, self.output_path, self.format)


##
# Formatting
##


def format_float(value: float) -> str:
    """
    Format a number with 12 significant digits independent of the locale.

    Integral values keep a trailing ``.0`` so that a column reads uniformly.

    >>> format_float(1.0)
    '1.0'
    >>> format_float(1.0 / 3.0)
    '0.333333333333'
    """
    text = '{:.12g}'.format(float(value))
    if all(char not in text for char in '.enai'):
        text += '.0'
    return text


def format_error(value: float) -> str:
    """Format an error estimate with 3 significant digits."""
    return '{:.3g}'.format(float(value))


def _format_cell(cell: Any) -> str:
    """Format a cell of a CSV table."""
    if isinstance(cell, str):
        return cell

    if isinstance(cell, (bool, int, np.integer)):
        return str(int(cell))

    return format_float(cell)


def render_csv(table: Table) -> str:
    """Render the table as CSV with LF line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(table.header)
    formatters = [table.formats.get(name, _format_cell) for name in table.header]
    for row in table.rows:
        writer.writerow([formatter(cell) for formatter, cell in zip(formatters, row)])
    return buffer.getvalue()


def _json_cell(cell: Any) -> Any:
    """Convert a cell to a JSON-able value."""
    if isinstance(cell, str):
        return cell

    if isinstance(cell, (bool, int, np.integer)):
        return int(cell)

    return float(cell)


def render_json(table: Table) -> str:
    """Render the table as a JSON list of objects."""
    records = [collections.OrderedDict(zip(table.header, [_json_cell(cell) for cell in row])) for row in table.rows]
    return json.dumps(records, indent=2) + '\n'


def write_atomically(path: pathlib.Path, text: str) -> None:
    """
    Write the text to a temporary file next to ``path`` and rename it into place.

    :param path: to the output file
    :param text: content, encoded as UTF-8
    """
    path.parent.mkdir(parents=True, exist_ok=True)

    tmp = temppathlib.NamedTemporaryFile(dir=path.parent, prefix='.' + path.name + '.', delete=False)
    tmp.close()
    try:
        tmp.path.write_bytes(text.encode('utf-8'))
        os.replace(str(tmp.path), str(path))
    finally:
        if tmp.path.exists():
            tmp.path.unlink()


##
# Parsing
##


def parse_floats(text: str, flag: str) -> List[float]:
    """
    Parse a comma-separated list of numbers.

    :param text: to be parsed
    :param flag: name of the flag, used in the error message
    :return: the numbers
    :raise ValueError: if the text is not a non-empty list of numbers
    """
    try:
        values = [float(part) for part in text.split(',') if part.strip() != '']
    except ValueError as err:
        raise ValueError("Expected {} to be a comma-separated list of numbers, but got: {!r}".format(flag,
                                                                                                    text)) from err

    if not values:
        raise ValueError("Expected {} to list at least one number, but got: {!r}".format(flag, text))

    return values


def parse_peaks(tokens: Sequence[str]) -> Tuple[int, float]:
    """
    Parse the description of the peak family, either ``k=<int> N=<float>`` or ``<int>,<float>``.

    >>> parse_peaks(['k=3', 'N=2'])
    (3, 2.0)
    >>> parse_peaks(['1,1'])
    (1, 1.0)
    """
    values = {}  # type: MutableMapping[str, str]
    if len(tokens) == 1 and '=' not in tokens[0]:
        parts = tokens[0].split(',')
        if len(parts) != 2:
            raise ValueError("Expected --peaks as 'k,N' or 'k=<int> N=<span>', but got: {!r}".format(tokens[0]))
        values['k'], values['N'] = parts
    else:
        for token in tokens:
            key, sep, value = token.partition('=')
            if sep != '=' or key not in ('k', 'N'):
                raise ValueError(
                    "Expected --peaks entries of the form k=<int> or N=<span>, but got: {!r}".format(token))
            values[key] = value

    if 'k' not in values or 'N' not in values:
        raise ValueError("Expected --peaks to give both k and N, but got: {}".format(' '.join(tokens)))

    try:
        k = int(values['k'])
        span = float(values['N'])
    except ValueError as err:
        raise ValueError("Expected --peaks with an integer k and a numeric N, but got: {}".format(
            ' '.join(tokens))) from err

    if k < 0 or not span > 0.0:
        raise ValueError("Expected --peaks with k >= 0 and N > 0, but got k={} and N={!r}".format(k, span))

    return k, span


def parse_ensemble(args: argparse.Namespace) -> spectra.BranchEnsemble:
    """
    Build the branch ensemble from ``--peaks`` or from ``--weights`` and ``--levels``.

    :raise ValueError: if the flags are missing, inconsistent or malformed
    """
    if args.peaks is not None:
        if args.weights is not None or args.levels is not None:
            raise ValueError("Expected either --peaks or --weights with --levels, but got both")

        k, span = parse_peaks(args.peaks)
        return peaks.peaks_ensemble(k=k, span=span)

    if args.weights is None or args.levels is None:
        raise ValueError("Expected the ensemble as --peaks or as --weights with --levels")

    weights = parse_floats(args.weights, '--weights')
    levels = parse_floats(args.levels, '--levels')
    if len(weights) != len(levels):
        raise ValueError("Expected as many --weights as --levels, but got {} and {}".format(len(weights), len(levels)))

    return spectra.BranchEnsemble(weights=weights, spectrum=spectra.ObservableSpectrum(levels))


def parse_density_matrix(text: str) -> spectra.DensityMatrix:
    """
    Parse a density matrix given as JSON, inline or as a path to a file.

    The JSON is a list of rows, each a list of [real, imaginary] pairs.

    >>> parse_density_matrix('[[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]').dimension
    2
    """
    source = text if text.lstrip().startswith('[') else pathlib.Path(text).read_text(encoding='utf-8')

    try:
        rows = json.loads(source)
    except json.JSONDecodeError as err:
        raise ValueError("Expected --rho to be JSON of row-major complex pairs: {}".format(err)) from err

    try:
        matrix = [[complex(float(pair[0]), float(pair[1])) for pair in row] for row in rows]
    except (TypeError, IndexError, ValueError) as err:
        raise ValueError("Expected --rho as a list of rows of [real, imaginary] pairs: {}".format(err)) from err

    return spectra.DensityMatrix(matrix)


def _pointer_kind(args: argparse.Namespace) -> pointers.PointerKind:
    """Select the pointer kind from ``--square`` or ``--gauss``."""
    return pointers.PointerKind.SQUARE if args.square else pointers.PointerKind.GAUSSIAN


def _rho_and_spectrum(args: argparse.Namespace) -> Tuple[spectra.DensityMatrix, spectra.ObservableSpectrum]:
    """Parse ``--rho`` and ``--levels``; the levels default to 0, 1, ..., d − 1."""
    if args.rho is None:
        raise ValueError("Expected the state as --rho")

    rho = parse_density_matrix(args.rho)
    if args.levels is None:
        spectrum = spectra.ObservableSpectrum(list(range(rho.dimension)))
    else:
        spectrum = spectra.ObservableSpectrum(parse_floats(args.levels, '--levels'))

    if len(spectrum) != rho.dimension:
        raise ValueError("Expected --levels to list {} eigenvalues, but got: {}".format(rho.dimension, len(spectrum)))

    return rho, spectrum


def _exactly_one_sweep(args: argparse.Namespace) -> None:
    """Raise a ValueError unless exactly one of ``--delta`` and ``--b`` is given."""
    if (args.delta is None) == (args.b is None):
        raise ValueError("Expected exactly one of --delta and --b")


def _sweep(function: Callable[[Any], Row], items: Sequence[Any]) -> List[Row]:
    """Evaluate the rows in worker threads; the rows keep the order of ``items``."""
    workers = min(numerics.worker_count(), max(1, len(items)))
    if workers == 1:
        return [function(item) for item in items]

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))


def search_workers(items: Sequence[Any]) -> int:
    """Split the worker threads between the rows of a sweep and the numerical search within each row."""
    return max(1, numerics.worker_count() // max(1, len(items)))


##
# Sub-commands
##


def cmd_mi(args: argparse.Namespace) -> Table:
    """Tabulate the mutual information of an ensemble over the pointer widths."""
    ens = parse_ensemble(args)
    kind = _pointer_kind(args)

    if args.delta is None:
        raise ValueError("Expected at least one --delta")

    def row(delta: float) -> Row:
        info = mutual_info.mutual_information(ens=ens, model=pointers.PointerModel(kind=kind, delta=delta))
        return [delta, info.bits, info.method.value, info.est_abs_error]

    return Table(
        header=['param', 'mi_bits', 'method', 'abs_err'],
        rows=_sweep(row, args.delta),
        formats={'abs_err': format_error})


def cmd_mic(args: argparse.Namespace) -> Table:
    """Tabulate the size MIC of an ensemble over the bits."""
    ens = parse_ensemble(args)
    kind = _pointer_kind(args)

    if args.b is None:
        raise ValueError("Expected at least one --b")

    def row(b: float) -> Row:
        return [b, mutual_info.mic(ens=ens, kind=kind, b=b)]

    return Table(header=['b', 'mic'], rows=_sweep(row, args.b))


def cmd_roof(args: argparse.Namespace) -> Table:
    """Tabulate the convex roof of the mutual information over the widths, or the size MIC' over the bits."""
    rho, spectrum = _rho_and_spectrum(args)
    kind = _pointer_kind(args)
    _exactly_one_sweep(args)

    workers = search_workers(args.delta if args.delta is not None else args.b)

    if args.delta is not None:

        def roof_row(delta: float) -> Row:
            return [
                delta,
                roof.direct_roof_mi(
                    rho=rho,
                    spectrum=spectrum,
                    model=pointers.PointerModel(kind=kind, delta=delta),
                    multistarts=args.multistarts,
                    seed=args.seed,
                    workers=workers)
            ]

        return Table(header=['delta', 'roof_mi_bits'], rows=_sweep(roof_row, args.delta))

    def size_row(b: float) -> Row:
        return [
            b,
            roof.mic_prime(
                rho=rho,
                spectrum=spectrum,
                kind=kind,
                b=b,
                multistarts=args.multistarts,
                seed=args.seed,
                workers=workers),
            roof.qfi_size_bound(rho=rho, spectrum=spectrum, b=b)
        ]

    return Table(header=['b', 'mic_prime', 'qfi_bound'], rows=_sweep(size_row, args.b))


def cmd_discord(args: argparse.Namespace) -> Table:
    """Tabulate C_Δ over the widths, or the size MIC~ over the bits."""
    rho, spectrum = _rho_and_spectrum(args)
    _exactly_one_sweep(args)

    if args.delta is not None:

        def gain_row(delta: float) -> Row:
            return [
                delta,
                discord.c_delta(rho=rho, spectrum=spectrum, delta=delta),
                discord.relative_entropy_lower_bound(rho=rho, spectrum=spectrum, delta=delta)
            ]

        return Table(header=['delta', 'c_delta_bits', 'relative_entropy_bound'], rows=_sweep(gain_row, args.delta))

    def size_row(b: float) -> Row:
        return [b, discord.mic_tilde(rho=rho, spectrum=spectrum, b=b)]

    return Table(header=['b', 'mic_tilde'], rows=_sweep(size_row, args.b))


def cmd_fragility(args: argparse.Namespace) -> Table:
    """Tabulate the entanglement bounds of a micro-macro state read out by a Gaussian pointer."""
    ens = parse_ensemble(args)
    state = spectra.MicroMacroState(weights=ens.weights, spectrum=ens.spectrum)

    if args.delta is None:
        raise ValueError("Expected at least one --delta")

    def row(delta: float) -> Row:
        channel = fragility.gaussian_pointer_channel(spectrum=state.spectrum, delta=delta, nodes=args.nodes)
        check = fragility.ef_decay_bound_check(state=state, channel=channel)
        return [
            delta,
            fragility.ef_micro_macro(state),
            fragility.environment_mi(state=state, channel=channel), check.avg_branch_entropy, check.bound,
            int(check.holds),
            fragility.distillable_after_dephasing(state=state, delta=delta)
        ]

    return Table(
        header=['delta', 'ef_bits', 'environment_mi_bits', 'avg_branch_entropy', 'bound', 'holds', 'distillable_bits'],
        rows=_sweep(row, args.delta))


def default_ratios() -> List[float]:
    """Return the ratios 0.05, 0.10, ..., 2.0 of the default peak-family grid."""
    return [round(0.05 * index, 12) for index in range(1, 41)]


def cmd_fig2(args: argparse.Namespace) -> Table:
    """Tabulate the square-pointer information of the peak family against the ratio r = Δ/(2N)."""
    ks = args.k if args.k is not None else [1, 3, 7]
    ratios = args.r if args.r is not None else default_ratios()

    if not ks or not ratios:
        raise ValueError("Expected non-empty --k and --r grids")

    if any(k < 1 for k in ks):
        raise ValueError("Expected every --k to be at least 1, but got: {}".format(ks))

    if any(not ratio > 0.0 for ratio in ratios):
        raise ValueError("Expected every --r to be positive, but got: {}".format(ratios))

    labelled = [(str(k), k) for k in ks]  # type: List[Tuple[str, int]]
    if not args.no_inf_proxy:
        labelled.append(('inf_proxy', INF_PROXY_K))

    items = [(label, k, ratio) for label, k in labelled for ratio in ratios]

    def row(item: Tuple[str, int, float]) -> Row:
        label, k, ratio = item
        return [label, ratio, peaks.peaks_mi(delta=2.0 * ratio, span=1.0, k=k)]

    return Table(header=['k', 'r', 'mi_bits'], rows=_sweep(row, items))


def cmd_fig3(args: argparse.Namespace) -> Table:
    """Tabulate the rescaled roof size of two-peak qubit states over the XZ half disk."""
    bits = args.b if args.b is not None else list(FIG3_BITS)
    xs = args.x if args.x is not None else list(np.linspace(0.0, 1.0, args.grid))
    zs = args.z if args.z is not None else list(np.linspace(-1.0, 1.0, 2 * args.grid - 1))

    if not bits or not xs or not zs:
        raise ValueError("Expected non-empty --b, --x and --z grids")

    items = []  # type: List[Tuple[float, float, float]]
    skipped = 0
    for b in bits:
        for x_rho in xs:
            for z_rho in zs:
                if x_rho < 0.0 or x_rho * x_rho + z_rho * z_rho > 1.0 + 1e-12:
                    skipped += 1
                    continue
                items.append((float(b), float(x_rho), float(z_rho)))

    if skipped > 0:
        LOGGER.warning("Skipped %d grid points outside the XZ half disk.", skipped)

    def row(item: Tuple[float, float, float]) -> Row:
        b, x_rho, z_rho = item
        return [b, x_rho, z_rho, roof.roof_mic_2peak(state=roof.BlochStateXZ(x_rho=x_rho, z_rho=z_rho), b=b)]

    return Table(header=['b', 'x_rho', 'z_rho', 'mic'], rows=_sweep(row, items))


def cmd_verify(args: argparse.Namespace) -> List[verify.Report]:
    """Run a named verification suite, or all of them in parallel with ``--suite all``."""
    names = list(verify.SUITES.keys()) if args.suite == ALL_SUITES else [args.suite]
    reports = verify.run_suites(names=names, trials=args.trials, seed=args.seed, workers=numerics.worker_count())
    for report in reports:
        if not report.passed():
            LOGGER.warning("The suite %s failed in %d of %d trials.", report.suite, report.failures, report.trials)

    return reports


##
# Entry point
##


def _add_ensemble_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--peaks', nargs='+', help="peak family as 'k=<int> N=<span>' or 'k,N'")
    parser.add_argument('--weights', help="comma-separated branch weights")
    parser.add_argument('--levels', help="comma-separated eigenvalues")


def _add_pointer_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument('--square', action='store_true', help="square pointer")
    group.add_argument('--gauss', action='store_true', help="Gaussian pointer (default)")


def _add_state_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--rho', help="density matrix as JSON (inline or a path) of rows of [real, imaginary] pairs")
    parser.add_argument('--levels', help="comma-separated eigenvalues (default: 0, 1, ..., d-1)")


def build_parser() -> argparse.ArgumentParser:
    """Build the parser of the command line."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--output', help="path to the output file (default: stdout)")
    common.add_argument('--format', choices=['csv', 'json'], default='csv', help="output format")
    common.add_argument('--verbose', action='store_true', help="log debug messages to stderr")
    common.add_argument('--seed', type=int, default=0, help="seed of the random generators")

    parser = argparse.ArgumentParser(prog='macromic', description=__doc__)
    parser.add_argument('--version', action='version', version='%(prog)s ' + macromic.__version__)
    subparsers = parser.add_subparsers(dest='command')

    mi_parser = subparsers.add_parser('mi', parents=[common], help="mutual information over pointer widths")
    _add_ensemble_flags(mi_parser)
    _add_pointer_flags(mi_parser)
    mi_parser.add_argument('--delta', type=float, nargs='+', help="pointer widths")
    mi_parser.set_defaults(func=cmd_mi)

    mic_parser = subparsers.add_parser('mic', parents=[common], help="size MIC over bits")
    _add_ensemble_flags(mic_parser)
    _add_pointer_flags(mic_parser)
    mic_parser.add_argument('--b', type=float, nargs='+', help="bits")
    mic_parser.set_defaults(func=cmd_mic)

    roof_parser = subparsers.add_parser('roof', parents=[common], help="convex roof of the mutual information")
    _add_state_flags(roof_parser)
    _add_pointer_flags(roof_parser)
    roof_parser.add_argument('--delta', type=float, nargs='+', help="pointer widths")
    roof_parser.add_argument('--b', type=float, nargs='+', help="bits (tabulates MIC' instead)")
    roof_parser.add_argument('--multistarts', type=int, default=32, help="starts of the numerical roof search")
    roof_parser.set_defaults(func=cmd_roof)

    discord_parser = subparsers.add_parser('discord', parents=[common], help="entropy gain C_Delta of the dephasing")
    _add_state_flags(discord_parser)
    discord_parser.add_argument('--delta', type=float, nargs='+', help="pointer widths")
    discord_parser.add_argument('--b', type=float, nargs='+', help="bits (tabulates MIC~ instead)")
    discord_parser.set_defaults(func=cmd_discord)

    fragility_parser = subparsers.add_parser('fragility', parents=[common], help="entanglement decay bounds")
    _add_ensemble_flags(fragility_parser)
    fragility_parser.add_argument('--delta', type=float, nargs='+', help="pointer widths")
    fragility_parser.add_argument('--nodes', type=int, default=64, help="quadrature nodes of the pointer channel")
    fragility_parser.set_defaults(func=cmd_fragility)

    fig2_parser = subparsers.add_parser('fig2', parents=[common], help="peak-family information against r")
    fig2_parser.add_argument('--k', type=int, nargs='+', help="peak counts minus one (default: 1 3 7)")
    fig2_parser.add_argument('--r', type=float, nargs='+', help="ratios (default: 0.05, 0.10, ..., 2.0)")
    fig2_parser.add_argument('--no-inf-proxy', action='store_true', help="omit the k={} rows".format(INF_PROXY_K))
    fig2_parser.set_defaults(func=cmd_fig2)

    fig3_parser = subparsers.add_parser('fig3', parents=[common], help="roof size over the XZ half disk")
    fig3_parser.add_argument('--b', type=float, nargs='+', help="bits (default: 0.082 and 1/3)")
    fig3_parser.add_argument('--x', type=float, nargs='+', help="x components (default: a regular grid)")
    fig3_parser.add_argument('--z', type=float, nargs='+', help="z components (default: a regular grid)")
    fig3_parser.add_argument('--grid', type=int, default=21, help="points of the default x grid")
    fig3_parser.set_defaults(func=cmd_fig3)

    verify_parser = subparsers.add_parser('verify', parents=[common], help="check the identities and inequalities")
    verify_parser.add_argument(
        '--suite',
        required=True,
        help="one of: {}; {} runs every suite".format(", ".join(verify.SUITES.keys()), ALL_SUITES))
    verify_parser.add_argument('--trials', type=int, default=0, help="random trials (default: per suite)")
    verify_parser.set_defaults(func=cmd_verify)

    return parser


def _parameters(args: argparse.Namespace) -> MutableMapping[str, Any]:
    """Collect the parameters of the run for the manifest."""
    excluded = {'func', 'output', 'format', 'verbose', 'seed', 'command'}
    return collections.OrderedDict(sorted((key, value) for key, value in vars(args).items() if key not in excluded))


def _emit(text: str, args: argparse.Namespace, stdout: TextIO) -> None:
    """Write the result and, for files, the manifest next to it."""
    if args.output is None:
        stdout.write(text)
        return

    path = pathlib.Path(args.output)
    write_atomically(path=path, text=text)

    manifest = RunManifest(
        command=args.command, parameters=_parameters(args), seed=args.seed, output_path=str(path),
        format=args.format)
    write_atomically(path=path.parent / (path.name + '.manifest.json'), text=manifest.to_json())


def run(args: argparse.Namespace, stdout: TextIO) -> int:
    """
    Execute the parsed sub-command.

    :return: exit code
    """
    if args.command == 'verify':
        reports = cmd_verify(args)
        mappings = [report.to_mapping() for report in reports]
        payload = mappings if args.suite == ALL_SUITES else mappings[0]  # type: Any
        _emit(text=json.dumps(payload, indent=2) + '\n', args=args, stdout=stdout)
        return 0 if all(report.passed() for report in reports) else 1

    table = args.func(args)
    text = render_csv(table) if args.format == 'csv' else render_json(table)
    _emit(text=text, args=args, stdout=stdout)
    return 0


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Parse the command line and execute the sub-command.

    :param argv: command-line arguments without the program name; ``sys.argv[1:]`` if not given
    :param stdout: stream receiving the output when no ``--output`` is given; ``sys.stdout`` if not given
    :return: 0 on success, 1 on a numerical failure or a failed verification, 2 on a usage error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code) if isinstance(err.code, int) else 2

    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING, format='%(levelname)s %(name)s: %(message)s')

    out = stdout if stdout is not None else sys.stdout
    try:
        return run(args=args, stdout=out)
    except numerics.ConvergenceError as err:
        print("{}: numerical failure: {}".format(args.command, err), file=sys.stderr)
        return 1
    except (ValueError, icontract.ViolationError, NotImplementedError, OSError) as err:
        print("{}: {}".format(args.command, err), file=sys.stderr)
        return 2


def entry_point() -> int:
    """Wrap the main routine so that it can be used as a console script."""
    return main()


if __name__ == '__main__':
    sys.exit(main())
