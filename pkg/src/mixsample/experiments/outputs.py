"""CSV tables, run manifest and plot scripts for a finished sweep."""

import csv
import os

from .. import __version__
from .config import SweepConfig, dump_config

__all__ = ["CSV_HEADER", "format_float", "write_csv", "emit_outputs", "read_manifest_command"]

CSV_HEADER = ("purity", "estimator", "k", "mean_err", "p10", "p90", "bound")

_PLOT_TEMPLATE = """\
# Plot script for {csv_name}; written by mixsample, not executed by it.
import csv

import matplotlib.pyplot as plt

with open({csv_name!r}, newline="") as fh:
    rows = list(csv.DictReader(fh))

fig, ax = plt.subplots()
for key in sorted({{(r["estimator"], r["k"]) for r in rows}}):
    sel = [r for r in rows if (r["estimator"], r["k"]) == key]
    x = [float(r["purity"]) for r in sel]
    ax.plot(x, [float(r["mean_err"]) for r in sel], label="%s, K=%s" % key)
    ax.fill_between(x, [float(r["p10"]) for r in sel], [float(r["p90"]) for r in sel], alpha=0.2)
    if key[0].startswith("eigen"):
        ax.plot(x, [float(r["bound"]) for r in sel], ls="-.", color="gray")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("purity")
ax.set_ylabel("mean absolute error")
ax.legend()
fig.savefig({png_name!r})
"""

_XY_TEMPLATE = """\
# Plot script for {csv_name}; written by mixsample, not executed by it.
import csv

import matplotlib.pyplot as plt

with open({csv_name!r}, newline="") as fh:
    rows = list(csv.DictReader(fh))

cols = list(rows[0]) if rows else []
fig, ax = plt.subplots()
if len(cols) >= 2:
    ax.plot([float(r[cols[-2]]) for r in rows], [float(r[cols[-1]]) for r in rows], ".")
    ax.set_xlabel(cols[-2])
    ax.set_ylabel(cols[-1])
fig.savefig({png_name!r})
"""


def format_float(x) -> str:
    """17 significant digits: reading the text back gives the same double."""
    return format(float(x), ".17g")


def _cell(value):
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def emit_outputs(result, output_dir, config: SweepConfig | None = None, command: str = "") -> list:
    """Write every table of ``result`` into ``output_dir``.

    Aggregate tables use the fixed ``CSV_HEADER``; extra tables keep their
    own headers. Returns the written paths.
    """
    os.makedirs(output_dir, exist_ok=True)
    written = []
    for name, rows in result.tables.items():
        path = os.path.join(output_dir, f"{name}.csv")
        write_csv(
            path,
            CSV_HEADER,
            [(r.purity, r.estimator, r.k, r.mean_err, r.p10, r.p90, r.bound) for r in rows],
        )
        written.append(path)
        written.append(_write_plot(output_dir, name, _PLOT_TEMPLATE))
    for name, (header, rows) in result.extra.items():
        path = os.path.join(output_dir, f"{name}.csv")
        write_csv(path, header, rows)
        written.append(path)
        written.append(_write_plot(output_dir, name, _XY_TEMPLATE))
    if config is not None:
        header = f"mixsample {__version__}\ncommand: {command}\nfailed trials: {result.failures}"
        path = os.path.join(output_dir, "manifest.cfg")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dump_config(config, header))
        written.append(path)
    return written


def _write_plot(output_dir, name, template):
    path = os.path.join(output_dir, f"plot_{name}.py")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(template.format(csv_name=f"{name}.csv", png_name=f"{name}.png"))
    return path


def read_manifest_command(path) -> str:
    """The subcommand recorded in a manifest's header, or ``""``."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("# command:"):
                return line.split(":", 1)[1].strip()
    return ""
