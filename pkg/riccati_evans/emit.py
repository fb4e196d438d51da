"""
Result files: CSV tables, JSON reports and SVG figures.

Files depend only on their inputs. Floats are written with 17 significant
digits, every CSV starts with a comment line carrying the package version and
the configuration digest, and SVGs are rendered with a fixed hash salt and no
date stamp.
"""

import csv
import json
import math
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from riccati_evans import __version__

matplotlib.rcParams["svg.hashsalt"] = "riccati-evans"


def format_value(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def comment_line(digest=""):
    return f"# riccati-evans {__version__} config-sha256={digest or 'none'}"


def write_csv(path, columns, rows, digest=""):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        handle.write(comment_line(digest) + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    return path


def _plain(value):
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_plain(item) for item in value.tolist()]
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": _plain(value.real), "im": _plain(value.imag)}
    if isinstance(value, (np.integer, np.bool_)):
        return value.item()
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    return value


def write_json(path, payload, digest=""):
    path = Path(path)
    document = {"tool": f"riccati-evans {__version__}", "config_sha256": digest}
    document.update(_plain(payload))
    path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
    return path


def _save(figure, path):
    path = Path(path)
    figure.savefig(path, format="svg", metadata={"Date": None})
    return path


def plot_dispersion(curves, edge, path):
    figure = Figure(figsize=(6, 5))
    axes = figure.add_subplot()
    for curve in curves:
        if curve.label == "absolute_edge":
            continue
        axes.plot(curve.lam.real, curve.lam.imag, label=curve.label, linewidth=1)
    axes.axvline(0.0, color="grey", linewidth=0.5)
    axes.set_xlabel("Re lambda")
    axes.set_ylabel("Im lambda")
    axes.set_title(f"absolute spectrum edge {edge:.6g}")
    axes.legend(fontsize="small")
    return _save(figure, path)


def plot_sweep(lams, values, path, brackets=()):
    figure = Figure(figsize=(6, 4))
    axes = figure.add_subplot()
    lams = np.asarray(lams).real
    values = np.asarray(values, dtype=complex)
    axes.plot(lams, values.real, label="Re E")
    axes.plot(lams, values.imag, label="Im E", linestyle="--")
    for lo, hi in brackets:
        axes.axvspan(lo, hi, color="red", alpha=0.2)
    axes.axhline(0.0, color="grey", linewidth=0.5)
    axes.set_xlabel("lambda")
    axes.legend()
    return _save(figure, path)


def plot_argument_field(re_axis, im_axis, phase, path):
    figure = Figure(figsize=(6, 5))
    axes = figure.add_subplot()
    masked = np.ma.masked_invalid(np.asarray(phase, dtype=float))
    if masked.shape[0] > 1 and masked.shape[1] > 1:
        axes.contour(re_axis, im_axis, masked.T, levels=24, linewidths=0.6)
    else:
        axes.scatter(np.ravel(re_axis), np.ravel(im_axis))
    axes.set_xlabel("Re lambda")
    axes.set_ylabel("Im lambda")
    return _save(figure, path)


def plot_winding(lams, values, path):
    figure = Figure(figsize=(10, 4.5))
    contour, image = figure.subplots(1, 2)
    lams = np.asarray(lams, dtype=complex)
    values = np.asarray(values, dtype=complex)
    contour.plot(lams.real, lams.imag)
    contour.set_title("contour")
    image.plot(values.real, values.imag)
    image.plot([0.0], [0.0], marker="+", color="red")
    image.set_title("image under E")
    return _save(figure, path)


def plot_profile(wave, path):
    figure = Figure(figsize=(6, 4))
    axes = figure.add_subplot()
    axes.plot(wave.grid, wave.u, label="u")
    axes.plot(wave.grid, wave.w, label="w")
    axes.set_xlabel("z")
    axes.set_title(f"type {wave.wave_type.value}, c = {wave.params.c:.6g}")
    axes.legend()
    return _save(figure, path)


def plot_root_path(speeds, roots, path):
    figure = Figure(figsize=(6, 4))
    axes = figure.add_subplot()
    axes.plot(speeds, np.asarray(roots, dtype=complex).real, marker="o")
    axes.axhline(0.0, color="grey", linewidth=0.5)
    axes.set_xlabel("c")
    axes.set_ylabel("Re lambda*")
    return _save(figure, path)
