"""Delimited report emitters.

Table outputs round metrics to three decimals and print factors at the
search-grid resolution (five decimals); machine-readable JSON reports keep
full precision. Undefined metrics (zero denominator) are written verbatim as
"undefined" in tables and null in JSON. Nothing time-dependent goes into a
data file, so outputs are byte-deterministic.
"""

import csv
import json

DUAL_HEADER = [
    "pattern2", "hd", "factor", "positives", "negatives",
    "tp", "tn", "fp", "fn",
    "accuracy", "precision", "negative_prediction", "sensitivity", "specificity",
]
TRIPLE_UNITS_HEADER = [
    "cw1", "cw2", "cw3", "hd12", "hd13", "hd23",
    "units1", "units2", "units3", "factor",
]
TRIPLE_METRICS_HEADER = [
    "cw1", "cw2", "cw3", "tp", "tn", "fp", "fn",
    "accuracy", "precision", "negative_prediction", "sensitivity", "specificity",
]

METRIC_FIELDS = (
    "accuracy", "precision", "negative_prediction", "sensitivity", "specificity",
)


def fmt_factor(f) -> str:
    return "" if f is None else f"{f:.5f}"


def fmt_metric(m) -> str:
    return "undefined" if m is None else f"{m:.3f}"


def _metric_cells(metrics):
    if metrics is None:
        return [""] * len(METRIC_FIELDS)
    return [fmt_metric(getattr(metrics, name)) for name in METRIC_FIELDS]


def write_dual_table(fp, rows) -> None:
    writer = csv.writer(fp)
    writer.writerow(DUAL_HEADER)
    for row in rows:
        if row.error is not None:
            writer.writerow(
                [row.partner, row.hd if row.hd is not None else "", row.error]
                + [""] * (len(DUAL_HEADER) - 3)
            )
            continue
        c = row.counts
        writer.writerow(
            [row.partner, row.hd, fmt_factor(row.factor),
             c.positives, c.negatives, c.tp, c.tn, c.fp, c.fn]
            + _metric_cells(row.metrics)
        )


def write_triple_units_table(fp, rows) -> None:
    writer = csv.writer(fp)
    writer.writerow(TRIPLE_UNITS_HEADER)
    for row in rows:
        writer.writerow(
            [row.words[0].value, row.words[1].value, row.words[2].value,
             *row.hds, *row.units,
             row.error if row.error is not None else fmt_factor(row.factor)]
        )


def write_triple_metrics_table(fp, rows) -> None:
    writer = csv.writer(fp)
    writer.writerow(TRIPLE_METRICS_HEADER)
    for row in rows:
        cells = [row.words[0].value, row.words[1].value, row.words[2].value]
        if row.counts is None:
            cells += [""] * 4
        else:
            cells += [row.counts.tp, row.counts.tn, row.counts.fp, row.counts.fn]
        writer.writerow(cells + _metric_cells(row.metrics))


def write_report_csv(fp, factor, counts, metrics) -> None:
    writer = csv.writer(fp)
    writer.writerow(
        ["factor", "positives", "negatives", "tp", "tn", "fp", "fn"]
        + list(METRIC_FIELDS)
    )
    writer.writerow(
        [fmt_factor(factor), counts.positives, counts.negatives,
         counts.tp, counts.tn, counts.fp, counts.fn]
        + _metric_cells(metrics)
    )


def write_report_json(fp, weights, factor, counts, metrics) -> None:
    doc = {
        "n_bits": weights.n_bits,
        "trained_codewords": [w.value for w in weights.trained_codewords],
        "factor": factor,
        "counts": {
            "tp": counts.tp, "tn": counts.tn,
            "fp": counts.fp, "fn": counts.fn,
            "positives": counts.positives, "negatives": counts.negatives,
        },
        "metrics": {name: getattr(metrics, name) for name in METRIC_FIELDS},
    }
    json.dump(doc, fp, indent=2)
    fp.write("\n")


# Quantities Fig-style scatter grids are emitted for, keyed by output name.
GRID_QUANTITIES = (
    "positives", "false_negatives", "true_negatives", "factor",
) + METRIC_FIELDS


def grid_rows(table_rows):
    """Join triple-sweep tables into per-quantity (hd12, hd13, hd23, value) grids.

    table_rows: mapping (cw1, cw2, cw3) -> dict of available column values.
    Returns {quantity: [(hd12, hd13, hd23, value), ...]} for the quantities
    whose inputs are present in every row.
    """
    grids = {}
    for quantity in GRID_QUANTITIES:
        rows = []
        ok = True
        for key in table_rows:
            cols = table_rows[key]
            hd = cols.get("hds")
            if hd is None:
                ok = False
                break
            if quantity == "positives":
                if "tp" not in cols or "fp" not in cols:
                    ok = False
                    break
                value = cols["tp"] + cols["fp"]
            elif quantity == "false_negatives":
                if "fn" not in cols:
                    ok = False
                    break
                value = cols["fn"]
            elif quantity == "true_negatives":
                if "tn" not in cols:
                    ok = False
                    break
                value = cols["tn"]
            else:
                if quantity not in cols:
                    ok = False
                    break
                value = cols[quantity]
            rows.append((*hd, value))
        if ok:
            grids[quantity] = rows
    return grids


def write_grid_csv(fp, quantity, rows) -> None:
    writer = csv.writer(fp)
    writer.writerow(["hd12", "hd13", "hd23", quantity])
    for hd12, hd13, hd23, value in rows:
        writer.writerow([hd12, hd13, hd23, value])
