"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 infinite homeostatic factor,
3 oracle divergence. Data outputs are byte-deterministic; run metadata goes
to the stderr log only.
"""

import argparse
import csv
import logging
import os
import sys
from contextlib import contextmanager

from . import reports, sweeps
from .classifier import compute_metrics, evaluate_exhaustive, hamming
from .homeostasis import InfiniteHomeostasisError, network_factor
from .sweeps import OracleDivergenceError
from .trainer import CodeWord, load_weights, save_weights, train_set

log = logging.getLogger("spikeword")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFINITE = 2
EXIT_DIVERGENCE = 3


def _parse_patterns(text):
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise ValueError(f"bad pattern list {text!r}") from exc


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fp:
            yield fp


def cmd_train(args) -> int:
    words = [CodeWord(v, args.bits) for v in _parse_patterns(args.patterns)]
    weights = train_set(words)
    try:
        result = network_factor(weights)
    except InfiniteHomeostasisError:
        save_weights(args.out, weights, factor=None,
                     dropped=weights.trained_codewords)
        log.error("infinite homeostatic factor: no trained pattern can fire")
        return EXIT_INFINITE
    save_weights(args.out, weights, factor=result.network_factor,
                 dropped=result.dropped)
    log.info("factor %.5f, dropped %s", result.network_factor,
             sorted(w.value for w in result.dropped))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    weights, stored_factor, _dropped = load_weights(args.weights)
    factor = args.factor if args.factor is not None else stored_factor
    if factor is None:
        raise ValueError(
            "weight file has no homeostatic factor; pass --factor"
        )
    if factor <= 0:
        raise ValueError("factor must be positive")
    counts = evaluate_exhaustive(weights, factor)
    metrics = compute_metrics(counts)
    if args.check:
        sweeps.check_weights_against_oracle(weights, factor)
        if args.factor is None and stored_factor is not None:
            result = network_factor(weights)
            sweeps.check_search_against_oracle(weights, result)
            if result.network_factor != stored_factor:
                raise OracleDivergenceError(
                    f"stored factor {stored_factor} is not the searched"
                    f" value {result.network_factor}"
                )
    with _open_out(args.out) as fp:
        if args.format == "json":
            reports.write_report_json(fp, weights, factor, counts, metrics)
        else:
            reports.write_report_csv(fp, factor, counts, metrics)
    return EXIT_OK


def cmd_sweep_dual(args) -> int:
    if args.paper_set:
        partners = list(sweeps.REFERENCE_DUAL_PARTNERS)
    elif args.partners:
        partners = _parse_patterns(args.partners)
    else:
        raise ValueError("need --partners or --paper-set")
    rows = sweeps.dual_sweep(args.base, partners, n_bits=args.bits,
                             check=args.check)
    with _open_out(args.out) as fp:
        reports.write_dual_table(fp, rows)
    return EXIT_OK


def cmd_sweep_triple(args) -> int:
    if args.enumerate:
        triples = sweeps.enumerate_triples(args.bits)
    elif args.triples:
        triples = sweeps.read_triples_file(args.triples)
    else:
        triples = sweeps.load_reference_triples()
    rows = sweeps.triple_sweep(triples, n_bits=args.bits, check=args.check)
    with _open_out(args.units_out) as fp:
        reports.write_triple_units_table(fp, rows)
    with _open_out(args.metrics_out) as fp:
        reports.write_triple_metrics_table(fp, rows)
    return EXIT_OK


def _read_table(path):
    with open(path, newline="") as fp:
        reader = csv.DictReader(fp)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty file")
        if not {"cw1", "cw2", "cw3"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: missing code-word columns")
        return list(reader), reader.fieldnames


def cmd_plotdata(args) -> int:
    joined = {}
    for path in args.tables:
        rows, _fields = _read_table(path)
        for raw in rows:
            key = (int(raw["cw1"]), int(raw["cw2"]), int(raw["cw3"]))
            cols = joined.setdefault(key, {})
            words = [CodeWord(v, args.bits) for v in key]
            cols["hds"] = (
                hamming(words[0], words[1]),
                hamming(words[0], words[2]),
                hamming(words[1], words[2]),
            )
            for name in ("tp", "tn", "fp", "fn"):
                if raw.get(name) not in (None, ""):
                    cols[name] = int(raw[name])
            for name in ("factor",) + reports.METRIC_FIELDS:
                value = raw.get(name)
                if value not in (None, "", "undefined", "infinite factor"):
                    cols[name] = float(value)
    grids = reports.grid_rows(joined)
    if joined and not grids:
        raise ValueError("input tables carry no plottable columns")
    os.makedirs(args.out_dir, exist_ok=True)
    emitted = grids if joined else {q: [] for q in reports.GRID_QUANTITIES}
    for quantity, rows in emitted.items():
        path = os.path.join(args.out_dir, f"{quantity}.csv")
        with open(path, "w", newline="") as fp:
            reports.write_grid_csv(fp, quantity, rows)
    log.info("wrote %d grids to %s", len(emitted), args.out_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spikeword",
        description="Train, rescale and exhaustively evaluate spatial"
        " code-word detectors on a deterministic spiking network.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train code words and search the factor")
    p.add_argument("--bits", type=int, default=10)
    p.add_argument("--patterns", required=True,
                   help="comma-separated code words, e.g. 992,960")
    p.add_argument("--out", required=True, help="weight file to write")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="exhaustive evaluation of a weight file")
    p.add_argument("--weights", required=True)
    p.add_argument("--factor", type=float, default=None,
                   help="override the stored homeostatic factor")
    p.add_argument("--check", action="store_true",
                   help="cross-validate against the closed-form oracle")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep-dual", help="two-pattern sweep against a base word")
    p.add_argument("--bits", type=int, default=10)
    p.add_argument("--base", type=int, default=992)
    p.add_argument("--partners", default=None)
    p.add_argument("--paper-set", action="store_true",
                   help="use the bundled 14-partner list")
    p.add_argument("--check", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep_dual)

    p = sub.add_parser("sweep-triple", help="three-pattern sweep")
    p.add_argument("--bits", type=int, default=10)
    p.add_argument("--triples", default=None,
                   help="CSV of three code words per row (default: bundled set)")
    p.add_argument("--enumerate", action="store_true",
                   help="enumerate first-per-HD-signature triples instead")
    p.add_argument("--check", action="store_true")
    p.add_argument("--units-out", default=None)
    p.add_argument("--metrics-out", default=None)
    p.set_defaults(func=cmd_sweep_triple)

    p = sub.add_parser("plotdata", help="per-metric scatter grids from sweep tables")
    p.add_argument("--from", dest="tables", action="append", required=True,
                   help="triple-sweep table (repeatable; tables are joined)")
    p.add_argument("--bits", type=int, default=10)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_plotdata)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except OracleDivergenceError as exc:
        log.error("oracle divergence: %s", exc)
        return EXIT_DIVERGENCE
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
