"""Run reports: delimited summaries plus rendered figures.

The build report is a tab-separated table of per-level dimensions and stage
timings with a stacked timing figure next to it; the stats path writes the
quadratic-Hecke-field histogram as CSV and as a bar figure.  Figures use
the Agg backend so everything works headless.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

STAGES = ("module", "operators", "oldnew", "decompose")


def write_build_report(path, levels):
    """Tab-separated per-level table; timings in seconds."""
    cols = ["norm", "level", "dim", "eis", "cusp", "old", "new",
            "constituents"] + ["t_%s" % s for s in STAGES]
    lines = ["\t".join(cols)]
    for d in levels:
        row = [str(d.level.norm()), d.label, str(d.dim), str(d.eis_dim),
               str(d.cusp_dim), str(d.old_dim), str(d.new_dim),
               str(len(d.constituents))]
        row += ["%.3f" % d.timings.get(s, 0.0) for s in STAGES]
        lines.append("\t".join(row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def render_timing_figure(path, levels):
    """Stacked bars of per-stage runtime against level norm."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    xs = range(len(levels))
    bottom = [0.0] * len(levels)
    for stage in STAGES:
        heights = [d.timings.get(stage, 0.0) for d in levels]
        ax.bar(xs, heights, bottom=bottom, label=stage)
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xticks(list(xs))
    ax.set_xticklabels([d.label for d in levels], rotation=90, fontsize=6)
    ax.set_xlabel("level")
    ax.set_ylabel("seconds")
    ax.set_title("per-level runtime by stage")
    if levels:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_histogram_csv(path, rows):
    """Quadratic Hecke field histogram, one row per (field, discriminant)."""
    lines = ["field_label,disc_E,count"]
    for field_label, disc_e, count in rows:
        lines.append("%s,%d,%d" % (field_label, disc_e, count))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def render_histogram_figure(path, rows):
    """Bar chart of Hecke field discriminant counts, grouped by base field."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    labels = ["%s: %d" % (f, d) for f, d, _ in rows]
    counts = [c for _, _, c in rows]
    xs = range(len(rows))
    ax.bar(xs, counts)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=90, fontsize=6)
    ax.set_xlabel("base field: Hecke field discriminant")
    ax.set_ylabel("count")
    ax.set_title("quadratic Hecke fields by discriminant")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
