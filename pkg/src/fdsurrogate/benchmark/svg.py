"""Tiny SVG writers for data profiles and gain box plots (no plotting dependency)."""

from __future__ import annotations

from xml.sax.saxutils import escape

COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"]
W, H, PAD = 640, 420, 60


def _frame(title: str, xlabel: str, ylabel: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>',
        f'<text x="{W / 2}" y="{PAD / 2}" text-anchor="middle" font-size="14">'
        f'{escape(title)}</text>',
        f'<text x="{W / 2}" y="{H - 15}" text-anchor="middle" font-size="12">'
        f'{escape(xlabel)}</text>',
        f'<text x="15" y="{H / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {H / 2})">{escape(ylabel)}</text>',
    ]


def _y(frac: float) -> float:
    return H - PAD - frac * (H - 2 * PAD)


def profile_svg(curves: dict[str, list[tuple[float, float]]], budget: float,
                title: str = "Data profile") -> str:
    """``curves`` maps a solver name to its ``(alpha, fraction)`` breakpoints."""
    def x(a):
        return PAD + a / budget * (W - 2 * PAD)

    out = _frame(title, "simplex gradients", "fraction of problems solved")
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        out.append(f'<text x="{PAD - 8}" y="{_y(tick) + 4:.1f}" text-anchor="end" '
                   f'font-size="10">{tick:g}</text>')
    for tick in range(0, int(budget) + 1, max(1, int(budget) // 5)):
        out.append(f'<text x="{x(tick):.1f}" y="{H - PAD + 15}" text-anchor="middle" '
                   f'font-size="10">{tick}</text>')
    for idx, (name, pts) in enumerate(curves.items()):
        color = COLORS[idx % len(COLORS)]
        path, prev = [], 0.0
        for a, frac in pts:
            path.append(f"{x(a):.2f},{_y(prev):.2f}")
            path.append(f"{x(a):.2f},{_y(frac):.2f}")
            prev = frac
        path.append(f"{x(budget):.2f},{_y(prev):.2f}")
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" '
                   f'points="{" ".join(path)}"/>')
        ly = PAD + 15 + 16 * idx
        out.append(f'<line x1="{W - PAD - 150}" y1="{ly}" x2="{W - PAD - 130}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{W - PAD - 125}" y="{ly + 4}" font-size="11">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def boxplot_svg(summaries: dict[str, tuple[float, ...]], title: str = "Surrogate gain") -> str:
    """``summaries`` maps a solver name to ``(min, whisker_lo, q1, median, q3, whisker_hi, max)``."""
    out = _frame(title, "solver", "surrogate gain")
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        out.append(f'<text x="{PAD - 8}" y="{_y(tick) + 4:.1f}" text-anchor="end" '
                   f'font-size="10">{tick:g}</text>')
    k = max(1, len(summaries))
    slot = (W - 2 * PAD) / k
    for idx, (name, (_, wlo, q1, med, q3, whi, _)) in enumerate(summaries.items()):
        cx = PAD + slot * (idx + 0.5)
        half = slot * 0.25
        color = COLORS[idx % len(COLORS)]
        out.append(f'<line x1="{cx:.1f}" y1="{_y(wlo):.1f}" x2="{cx:.1f}" y2="{_y(whi):.1f}" '
                   f'stroke="black"/>')
        out.append(f'<rect x="{cx - half:.1f}" y="{_y(q3):.1f}" width="{2 * half:.1f}" '
                   f'height="{_y(q1) - _y(q3):.1f}" fill="{color}" fill-opacity="0.4" '
                   f'stroke="black"/>')
        out.append(f'<line x1="{cx - half:.1f}" y1="{_y(med):.1f}" x2="{cx + half:.1f}" '
                   f'y2="{_y(med):.1f}" stroke="black" stroke-width="2"/>')
        out.append(f'<text x="{cx:.1f}" y="{H - PAD + 15}" text-anchor="middle" '
                   f'font-size="10">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
