"""Command-line front end.

    zeeman-pair <experiment> [--config PATH] [--seed N] [--out DIR]

Writes ``<experiment>.csv`` and ``<experiment>.manifest.json`` (plus a PNG
for experiments with a time or angle series) into the output directory.
Exit status is 0 only if every tolerance check of the experiment passes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, SimulationConfig, load_config, parse_config
from .experiments import DEFAULT_SEED, EXPERIMENTS, ExperimentResult, run

log = logging.getLogger("zeeman_pair")

OUT_ENV = "ZEEMAN_PAIR_OUT"

# Weak-drive leakage set-up (pair along y, R = 0.3), used when no config file is given
DEFAULT_CONFIG = """
[geometry]
R = 0.3
theta = 1.5707963267948966
phi = 1.5707963267948966

[params]
delta = 0
omega_L = 2
detuning = 0.58
laser_on = true
"""


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def atomic_write(path: Path, data: bytes) -> None:
    """Write to a temp file in the target directory, then rename over ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def table_to_csv(header, rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue().encode("utf-8")


def _plot(result: ExperimentResult, path: Path) -> bool:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:  # plots are optional
        return False
    series = result.plot
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in series["series"].items():
        ax.plot(series["x"], y, label=label)
    ax.set_xlabel(series["xlabel"])
    ax.set_ylabel(series["ylabel"])
    ax.legend()
    fig.tight_layout()
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=120, metadata={"Software": None})
    plt.close(fig)
    atomic_write(path, buf.getvalue())
    return True


def resolve_output_dir(cli_out, cfg: SimulationConfig) -> Path:
    """--out beats the config file, which beats the environment variable."""
    env = os.environ.get(OUT_ENV)
    if cli_out:
        return Path(cli_out)
    if cfg.run.output:
        if env and Path(env) != Path(cfg.run.output):
            log.warning("config output %r overrides %s=%r", cfg.run.output, OUT_ENV, env)
        return Path(cfg.run.output)
    if env:
        return Path(env)
    return Path("out")


def write_result(result: ExperimentResult, cfg: SimulationConfig, seed: int, out_dir: Path, wall: float) -> dict:
    stem = result.name
    csv_path = out_dir / f"{stem}.csv"
    atomic_write(csv_path, table_to_csv(result.header, result.rows))
    files = [csv_path.name]
    if result.plot is not None and _plot(result, out_dir / f"{stem}.png"):
        files.append(f"{stem}.png")
    manifest = {
        "experiment": stem,
        "library_version": __version__,
        "config": cfg.as_dict(),
        "seed": seed,
        "wall_time_s": wall,
        "files": files,
        "diagnostics": {k: _jsonable(v) for k, v in result.diagnostics.items()},
        "checks": [c.as_dict() for c in result.checks],
        "passed": result.passed,
    }
    atomic_write(out_dir / f"{stem}.manifest.json",
                 (json.dumps(manifest, indent=2, default=_jsonable) + "\n").encode("utf-8"))
    return manifest


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zeeman-pair", description=__doc__.splitlines()[0])
    p.add_argument("experiment", choices=sorted(EXPERIMENTS))
    p.add_argument("--config", help="INI config file (default: weak-drive set-up, R=0.3 along y)")
    p.add_argument("--seed", type=int, default=None, help="seed for random geometries/rotations")
    p.add_argument("--out", default=None, help=f"output directory (overrides config and ${OUT_ENV})")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config) if args.config else parse_config(DEFAULT_CONFIG)
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2
    if cfg.run.experiment and cfg.run.experiment != args.experiment:
        log.warning("config names experiment %r; running %r", cfg.run.experiment, args.experiment)
    seed = args.seed if args.seed is not None else (cfg.run.seed if cfg.run.seed is not None else DEFAULT_SEED)

    start = time.perf_counter()
    result = run(args.experiment, cfg, seed)
    wall = time.perf_counter() - start
    out_dir = resolve_output_dir(args.out, cfg)
    try:
        write_result(result, cfg, seed, out_dir, wall)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 3
    for c in result.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name}: {c.value:.3e} ({c.kind} {c.tolerance:g})")
    print(f"wrote {out_dir / (result.name + '.csv')}")
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
