"""Deterministic result writers: delimited text, sidecars, images.

All delimited output is UTF-8 with bare newline endings and a header
row, floats printed with shortest round-trip repr, so identical inputs
produce identical bytes.  PNG rendering is kept separate and optional;
the delimited files alone carry every number.
"""

from __future__ import annotations

import json

import numpy as np

PGM_FLOOR_DB = -80.0
PGM_CEIL_DB = 0.0
# PGM text lines stay below 70 characters for strict readers
_PGM_VALUES_PER_LINE = 16


def fmt(value) -> str:
    """Shortest decimal string that round-trips the float exactly."""
    return repr(float(value))


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def write_json(path, payload) -> None:
    write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def sweep_csv(grid) -> str:
    """Long-format grid: one line per admittance, slow axis Im[y]."""
    lines = ["re_y,im_y,enhancement"]
    re_axis = grid.spec.re_axis
    im_axis = grid.spec.im_axis
    for row, im in enumerate(im_axis):
        for col, re in enumerate(re_axis):
            lines.append(
                f"{fmt(re)},{fmt(im)},{fmt(grid.values[row, col])}")
    return "\n".join(lines) + "\n"


def matrix_csv(x_axis, y_axis, values) -> str:
    """One line per y-row; header row carries the x coordinates."""
    header = "y\\x," + ",".join(fmt(x) for x in x_axis)
    lines = [header]
    for row, y in enumerate(y_axis):
        lines.append(fmt(y) + "," + ",".join(fmt(v) for v in values[row]))
    return "\n".join(lines) + "\n"


def resonances_csv(resonances) -> str:
    lines = ["re_y,im_y,enhancement,dominant_order,loss_class,reactive_class"]
    for res in resonances:
        lines.append(
            f"{fmt(res.admittance.real)},{fmt(res.admittance.imag)},"
            f"{fmt(res.enhancement)},{res.dominant_order},"
            f"{res.kind.loss.value},{res.kind.reactive.value}")
    return "\n".join(lines) + "\n"


def pattern_csv(pattern) -> str:
    lines = ["angle_rad,gain"]
    for angle, gain in zip(pattern.angles, pattern.gains):
        lines.append(f"{fmt(angle)},{fmt(gain)}")
    return "\n".join(lines) + "\n"


def curve_csv(gains_db, ratios) -> str:
    lines = ["gain_ratio_db,max_distance_ratio"]
    for g, rho in zip(gains_db, ratios):
        lines.append(f"{fmt(g)},{fmt(rho)}")
    return "\n".join(lines) + "\n"


def pgm_text(values_db, floor: float = PGM_FLOOR_DB,
             ceil: float = PGM_CEIL_DB) -> str:
    """Plain (P2) 8-bit greyscale of a dB matrix, top row = largest y."""
    if ceil <= floor:
        raise ValueError("PGM ceiling must exceed the floor")
    data = np.asarray(values_db, dtype=float)
    if data.ndim != 2:
        raise ValueError("PGM input must be a 2-D matrix")
    scaled = (data - floor) / (ceil - floor) * 255.0
    scaled = np.where(np.isfinite(scaled), scaled, 0.0)
    pixels = np.clip(np.rint(scaled), 0, 255).astype(int)[::-1]
    lines = ["P2", f"{pixels.shape[1]} {pixels.shape[0]}", "255"]
    for row in pixels:
        for start in range(0, row.size, _PGM_VALUES_PER_LINE):
            lines.append(" ".join(
                str(v) for v in row[start:start + _PGM_VALUES_PER_LINE]))
    return "\n".join(lines) + "\n"


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_heatmap(path, x_axis, y_axis, values, xlabel: str, ylabel: str,
                   value_label: str) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    mesh = ax.pcolormesh(x_axis, y_axis, values, shading="nearest",
                         cmap="inferno")
    fig.colorbar(mesh, ax=ax, label=value_label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_aspect("auto")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_curve(path, x, y, xlabel: str, ylabel: str, logy: bool = False) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if logy:
        ax.semilogy(x, y)
    else:
        ax.plot(x, y)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.4)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_polar(path, angles, gains) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.0, 5.0),
                           subplot_kw={"projection": "polar"})
    wrapped_angles = np.append(angles, angles[0] + 2.0 * np.pi)
    wrapped = np.append(gains, gains[0])
    ax.plot(wrapped_angles, wrapped)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bars(path, labels, values, ylabel: str) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar([str(label) for label in labels], values)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
