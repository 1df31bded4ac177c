"""Builders for the frozen reference files in tests/golden.

Run this file as a script to rewrite the references after an intended format change.
"""
import hashlib
import sys
import tempfile
from pathlib import Path

from yinyang import cli

GOLDEN = Path(__file__).parent / "golden"

COMMANDS = {
    "dataset.csv": ["generate", "--seed", "42", "--size", "60"],
    "events_latency.csv": ["encode", "--input", "{dataset.csv}", "--scheme", "latency"],
    "events_poisson.csv": ["encode", "--input", "{dataset.csv}", "--scheme", "poisson", "--seed", "7",
                           "--r-max", "100", "--window", "100"],
    "run.json": ["train", "--hidden", "5", "--epochs", "3", "--seed", "0"],
    "checkpoint.json": None,
}


def build_all(workdir):
    """Regenerate every golden file through the CLI; returns name -> bytes."""
    workdir = Path(workdir)
    out = {}
    for name, argv in COMMANDS.items():
        if argv is None:
            continue
        argv = [str(workdir / a[1:-1]) if a.startswith("{") else a for a in argv]
        argv += ["--out", str(workdir / name)]
        if name == "run.json":
            argv += ["--checkpoint", str(workdir / "checkpoint.json")]
        code = cli.main(argv)
        if code != 0:
            raise RuntimeError(f"{name}: exit code {code}")
    for name in COMMANDS:
        out[name] = (workdir / name).read_bytes()
    return out


def sha256(data):
    return hashlib.sha256(data).hexdigest()


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as tmp:
        files = build_all(tmp)
    GOLDEN.mkdir(exist_ok=True)
    for name, data in files.items():
        (GOLDEN / name).write_bytes(data)
        print(name, sha256(data), file=sys.stderr)
