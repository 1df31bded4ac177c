"""On-disk formats: dataset, event and summary CSVs, JSON documents.

Floats in CSV files are written with 17 significant digits so that a
write/read/write cycle is byte-identical. All writes go through a temporary
file in the target directory followed by an atomic rename.
"""

import csv
import io
import json
import math
import os
import tempfile

import numpy as np

from .geometry import DEFAULT_GEOMETRY, ClassLabel, inside_big_circle, which_class
from .sampler import Dataset, Sample

DATASET_HEADER = ("x", "y", "class")
EVENT_HEADER = ("sample_id", "neuron_id", "time_ms")
RATE_HEADER = ("sample_id", "neuron_id", "rate_hz")
TABLE1_HEADER = ("scenario", "hidden", "n", "mean_accuracy", "std_accuracy", "min_accuracy", "max_accuracy")
SWEEP_HEADER = ("hidden", "n", "mean_error", "std_error", "min_error", "max_error")
NA = "NA"


class FormatError(ValueError):
    pass


def fmt(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return NA
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def atomic_write_bytes(path, data):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text):
    atomic_write_bytes(path, text.encode("utf-8"))


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _read_rows(path, header):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            got = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if tuple(got) != tuple(header):
            raise FormatError(f"{path}: expected header {','.join(header)}, got {','.join(got)}")
        return [row for row in reader if row]


def dataset_csv(ds):
    return _csv_text(DATASET_HEADER, ((s.x, s.y, int(s.label)) for s in ds.samples))


def write_dataset_csv(ds, path):
    atomic_write_text(path, dataset_csv(ds))


def read_dataset_csv(path, g=DEFAULT_GEOMETRY, seed=None, validate=True):
    samples = []
    for i, row in enumerate(_read_rows(path, DATASET_HEADER), start=2):
        try:
            x, y, label = float(row[0]), float(row[1]), ClassLabel(int(row[2]))
        except (ValueError, IndexError) as exc:
            raise FormatError(f"{path}:{i}: bad row {row!r}") from exc
        if validate and not (inside_big_circle((x, y), g) and which_class((x, y), g) is label):
            raise FormatError(f"{path}:{i}: label {label.name} inconsistent with geometry")
        samples.append(Sample(x, y, label))
    return Dataset(samples=samples, seed=seed, size=len(samples), geometry=g)


def events_csv(blocks):
    """``blocks`` is an iterable of ``(sample_id, events)``."""
    return _csv_text(EVENT_HEADER, ((sid, e.neuron_id, e.time) for sid, events in blocks for e in events))


def rates_csv(blocks):
    """``blocks`` is an iterable of ``(sample_id, rates)``."""
    return _csv_text(RATE_HEADER, ((sid, nid, r) for sid, rs in blocks for nid, r in enumerate(rs)))


def read_events_csv(path):
    """Rows as ``(sample_id, neuron_id, time_ms)`` tuples."""
    try:
        return [(int(a), int(b), float(c)) for a, b, c in _read_rows(path, EVENT_HEADER)]
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def read_rates_csv(path):
    try:
        return [(int(a), int(b), float(c)) for a, b, c in _read_rows(path, RATE_HEADER)]
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def table1_csv(table):
    rows = []
    for s, summ in table.summaries.items():
        rows.append((s.name, s.hidden if s.hidden is not None else NA, summ.n,
                     summ.mean, summ.std, summ.min, summ.max))
    return _csv_text(TABLE1_HEADER, rows)


def sweep_csv(sweep):
    from .experiments import summarize

    rows = []
    for h in sorted(sweep.errors):
        summ = summarize(sweep.errors[h], require_std=False)
        rows.append((h, summ.n, summ.mean, summ.std, summ.min, summ.max))
    return _csv_text(SWEEP_HEADER, rows)


def _parse_cell(v):
    if v == NA:
        return None
    for conv in (int, float):
        try:
            return conv(v)
        except ValueError:
            pass
    return v


def read_summary_csv(path):
    """Read a table1 or sweep CSV into ``(header, rows)`` with parsed cells."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header not in (TABLE1_HEADER, SWEEP_HEADER):
            raise FormatError(f"{path}: unrecognised summary header")
        return header, [[_parse_cell(v) for v in row] for row in reader if row]


def summary_csv(header, rows):
    return _csv_text(header, rows)


def dumps_json(obj):
    return json.dumps(obj, indent=1, allow_nan=False) + "\n"


def write_json(obj, path):
    atomic_write_text(path, dumps_json(obj))


def read_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
