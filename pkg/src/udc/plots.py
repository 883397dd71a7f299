"""Figure rendering for the report-style commands.

Each renderer takes the same row objects the CSV writers consume and writes
a PNG next to the delimited output.  Import is kept inside functions so the
library works headless and without matplotlib when figures are not wanted.
"""

from __future__ import annotations

import math


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    plt.rcParams["figure.figsize"] = (6.4, 4.0)
    plt.rcParams["font.size"] = 9
    return plt


def render_growth_figure(rows, path):
    """Mean growth ratios m(r, p(F))/log(N/(1-r)) against N, one line per
    radius, for the plain power choice of p."""
    plt = _plt()
    fig, ax = plt.subplots()
    radii = sorted({str(row.r) for row in rows})
    for rs in radii:
        pts = [(row.N, float(row.ratio)) for row in rows
               if str(row.r) == rs and row.p_choice == "x^N" and row.ratio is not None]
        pts.sort()
        if pts:
            ax.plot([p[0] for p in pts], [p[1] for p in pts],
                    marker="o", label="r = %s" % rs)
    ax.set_xlabel("N")
    ax.set_ylabel("m(r, F^N) / log(N/(1-r))")
    ax.set_title("mean growth of the covering map")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_gap_figure(rows, path):
    """Dimension bound against the exact congruence dimension."""
    plt = _plt()
    fig, ax = plt.subplots()
    ns = [row.N for row in rows]
    ax.plot(ns, [float(row.rhs) for row in rows], marker="o",
            label="holonomy bound")
    ax.plot(ns, [row.exact_dim for row in rows], marker="s",
            label="congruence dimension")
    ax.plot(ns, [n ** 3 * math.log(max(n, 2)) for n in ns], linestyle=":",
            label="N^3 log N")
    ax.set_xlabel("N")
    ax.set_yscale("log")
    ax.set_ylabel("dimension")
    ax.set_title("dimension bound vs congruence supply")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_profile_figure(profile, path, title="denominator growth"):
    """Cumulative LCM of coefficient denominators on a log scale."""
    plt = _plt()
    fig, ax = plt.subplots()
    xs = [float(e) for e in profile.exponents]
    ys = [l.bit_length() for l in profile.lcms]
    ax.step(xs, ys, where="post")
    ax.set_xlabel("exponent")
    ax.set_ylabel("bits of cumulative denominator LCM")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
