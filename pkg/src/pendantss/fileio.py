"""CSV and JSON round-trip helpers for signals, decompositions and benchmarks.

Numbers are written with 17 significant digits in scientific notation,
locale independent, so every file round-trips bit-exactly.
"""

import csv
import json

import numpy as np

FLOAT_FORMAT = "{:.17e}"


def format_float(value):
    return FLOAT_FORMAT.format(float(value))


def write_signal_csv(path, values):
    """Write one sample per row with an ``index,value`` header."""
    values = np.asarray(values, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        fh.write("index,value\n")
        for index, value in enumerate(values):
            fh.write(f"{index},{format_float(value)}\n")


def read_signal_csv(path):
    """Read a signal CSV; the header line and the index column are optional."""
    samples = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            cell = row[-1].strip()
            try:
                samples.append(float(cell))
            except ValueError:
                if samples:
                    raise ValueError(f"malformed row {row!r} in {path}") from None
                # header line
                continue
    if not samples:
        raise ValueError(f"no samples found in {path}")
    return np.asarray(samples)


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def benchmark_rows_to_csv(path, rows):
    """Per-realization benchmark table."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "realization",
                "seed",
                "snr_s",
                "tsnr_s",
                "snr_t",
                "snr_pi",
                "iterations",
                "stop_reason",
            ]
        )
        for row in rows:
            writer.writerow(
                [
                    row.realization,
                    row.seed,
                    format_float(row.snr_s),
                    format_float(row.tsnr_s),
                    format_float(row.snr_t),
                    format_float(row.snr_pi),
                    row.iterations,
                    row.stop_reason,
                ]
            )


def read_benchmark_csv(path):
    """Benchmark CSV back as a list of dicts with parsed numerics."""
    out = []
    with open(path, newline="") as fh:
        for record in csv.DictReader(fh):
            out.append(
                {
                    "realization": int(record["realization"]),
                    "seed": int(record["seed"]),
                    "snr_s": float(record["snr_s"]),
                    "tsnr_s": float(record["tsnr_s"]),
                    "snr_t": float(record["snr_t"]),
                    "snr_pi": float(record["snr_pi"]),
                    "iterations": int(record["iterations"]),
                    "stop_reason": record["stop_reason"],
                }
            )
    return out
