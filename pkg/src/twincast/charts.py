"""Deterministic SVG charts rendered straight from a comparison report.

Every chart is a pure function of the report dictionary: fixed canvas,
fixed palette, fixed float formatting.  Regenerating a chart from the same
JSON therefore yields byte-identical SVG.  Four charts mirror the
evaluation views: MAE/RMSE bars, mean over-provisioning bars, a normalized
radar across all metrics, and a per-policy efficiency box plot.
"""

from __future__ import annotations

import math
from pathlib import Path

WIDTH = 640
HEIGHT = 400
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 50
MARGIN_BOTTOM = 60

POLICY_ORDER = ("ai_dt", "baseline1_mean2sigma", "baseline2_p95")
POLICY_LABELS = {
    "ai_dt": "AI digital twin",
    "baseline1_mean2sigma": "Static mean+2sigma",
    "baseline2_p95": "Static P95",
}
POLICY_COLORS = {
    "ai_dt": "#2b6cb0",
    "baseline1_mean2sigma": "#c05621",
    "baseline2_p95": "#6b46c1",
}
RADAR_AXES = (
    ("mae", "MAE"),
    ("rmse", "RMSE"),
    ("mean_efficiency", "Efficiency"),
    ("mean_wastage", "Wastage"),
    ("mean_utilization", "Utilization"),
    ("mean_over_provisioning", "Over-prov."),
)

CHART_FILES = ("errors.svg", "overprovisioning.svg", "radar.svg", "efficiency_box.svg")


def _f(value: float) -> str:
    """Fixed two-decimal coordinate formatting."""
    return f"{value:.2f}"


def _mbps(value_bps: float) -> float:
    return value_bps / 1e6


def _svg_open(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="28" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16" font-weight="bold">{title}</text>',
    ]


def _legend(parts: list[str], x: float, y: float) -> None:
    for policy in POLICY_ORDER:
        parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="12" height="12" '
            f'fill="{POLICY_COLORS[policy]}"/>'
        )
        parts.append(
            f'<text x="{_f(x + 16)}" y="{_f(y + 10)}" font-family="sans-serif" '
            f'font-size="11">{POLICY_LABELS[policy]}</text>'
        )
        y += 18


def _axis_and_scale(parts: list[str], max_value: float, unit: str) -> float:
    """Draw the y axis with 5 gridlines; returns pixels per value unit."""
    plot_height = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    top = max_value if max_value > 0 else 1.0
    scale = plot_height / top
    for tick in range(6):
        value = top * tick / 5
        y = HEIGHT - MARGIN_BOTTOM - value * scale
        parts.append(
            f'<line x1="{MARGIN_LEFT}" y1="{_f(y)}" x2="{WIDTH - MARGIN_RIGHT}" '
            f'y2="{_f(y)}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 6}" y="{_f(y + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_f(value)}</text>'
        )
    parts.append(
        f'<text x="16" y="{HEIGHT // 2}" font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 16 {HEIGHT // 2})" text-anchor="middle">{unit}</text>'
    )
    return scale


def errors_chart(report: dict) -> str:
    """Grouped MAE/RMSE bars per policy, in Mbit/s."""
    policies = report["policies"]
    values = {
        p: (_mbps(policies[p]["mae"]), _mbps(policies[p]["rmse"])) for p in POLICY_ORDER
    }
    parts = _svg_open("Forecast error by policy")
    peak = max(max(v) for v in values.values())
    scale = _axis_and_scale(parts, peak, "Error (Mbit/s)")

    plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    group_width = plot_width / 2
    bar_width = group_width / (len(POLICY_ORDER) + 1) / 1.4
    for group_index, metric_label in enumerate(("MAE", "RMSE")):
        group_left = MARGIN_LEFT + group_index * group_width
        center = group_left + group_width / 2
        parts.append(
            f'<text x="{_f(center)}" y="{HEIGHT - MARGIN_BOTTOM + 24}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="12">{metric_label}</text>'
        )
        for bar_index, policy in enumerate(POLICY_ORDER):
            value = values[policy][group_index]
            height = value * scale
            x = center + (bar_index - 1) * bar_width * 1.2 - bar_width / 2
            y = HEIGHT - MARGIN_BOTTOM - height
            parts.append(
                f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(bar_width)}" '
                f'height="{_f(height)}" fill="{POLICY_COLORS[policy]}"/>'
            )
            parts.append(
                f'<text x="{_f(x + bar_width / 2)}" y="{_f(y - 4)}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="9">{_f(value)}</text>'
            )
    _legend(parts, MARGIN_LEFT + 8, MARGIN_TOP - 6)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def overprovisioning_chart(report: dict) -> str:
    """Mean over-provisioned bandwidth per policy, in Mbit/s."""
    policies = report["policies"]
    values = {p: _mbps(policies[p]["mean_over_provisioning"]) for p in POLICY_ORDER}
    parts = _svg_open("Mean over-provisioning by policy")
    scale = _axis_and_scale(parts, max(values.values()), "Over-provisioning (Mbit/s)")

    plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    slot = plot_width / len(POLICY_ORDER)
    bar_width = slot * 0.5
    for index, policy in enumerate(POLICY_ORDER):
        value = values[policy]
        height = value * scale
        x = MARGIN_LEFT + index * slot + (slot - bar_width) / 2
        y = HEIGHT - MARGIN_BOTTOM - height
        parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(bar_width)}" '
            f'height="{_f(height)}" fill="{POLICY_COLORS[policy]}"/>'
        )
        parts.append(
            f'<text x="{_f(x + bar_width / 2)}" y="{_f(y - 4)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{_f(value)}</text>'
        )
        parts.append(
            f'<text x="{_f(x + bar_width / 2)}" y="{HEIGHT - MARGIN_BOTTOM + 24}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">'
            f"{POLICY_LABELS[policy]}</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def radar_chart(report: dict) -> str:
    """Normalized radar: one polygon per policy over six metric axes."""
    radar = report["radar"]
    cx, cy = WIDTH / 2, HEIGHT / 2 + 14
    radius = 130.0
    parts = _svg_open("Normalized metric radar (1.0 = best)")

    def point(axis_index: int, score: float) -> tuple[float, float]:
        angle = math.pi / 2 - axis_index * 2 * math.pi / len(RADAR_AXES)
        return cx + radius * score * math.cos(angle), cy - radius * score * math.sin(angle)

    for ring in (0.25, 0.5, 0.75, 1.0):
        ring_points = " ".join(
            f"{_f(px)},{_f(py)}" for px, py in (point(i, ring) for i in range(len(RADAR_AXES)))
        )
        parts.append(
            f'<polygon points="{ring_points}" fill="none" stroke="#dddddd" stroke-width="1"/>'
        )
    for index, (_, label) in enumerate(RADAR_AXES):
        end_x, end_y = point(index, 1.0)
        label_x, label_y = point(index, 1.22)
        parts.append(
            f'<line x1="{_f(cx)}" y1="{_f(cy)}" x2="{_f(end_x)}" y2="{_f(end_y)}" '
            f'stroke="#bbbbbb" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_f(label_x)}" y="{_f(label_y + 4)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    for policy in POLICY_ORDER:
        scores = radar[policy]
        poly = " ".join(
            f"{_f(px)},{_f(py)}"
            for px, py in (point(i, scores[key]) for i, (key, _) in enumerate(RADAR_AXES))
        )
        parts.append(
            f'<polygon points="{poly}" fill="{POLICY_COLORS[policy]}" fill-opacity="0.25" '
            f'stroke="{POLICY_COLORS[policy]}" stroke-width="2"/>'
        )
    _legend(parts, 12, HEIGHT - 64)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def efficiency_box_chart(report: dict) -> str:
    """Per-policy efficiency distribution: min/Q1/median/Q3/max boxes."""
    policies = report["policies"]
    parts = _svg_open("Allocation efficiency distribution")
    plot_height = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def y_of(value: float) -> float:
        return HEIGHT - MARGIN_BOTTOM - value * plot_height

    for tick in range(6):
        value = tick / 5
        parts.append(
            f'<line x1="{MARGIN_LEFT}" y1="{_f(y_of(value))}" x2="{WIDTH - MARGIN_RIGHT}" '
            f'y2="{_f(y_of(value))}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 6}" y="{_f(y_of(value) + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_f(value)}</text>'
        )

    plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    slot = plot_width / len(POLICY_ORDER)
    box_width = slot * 0.34
    for index, policy in enumerate(POLICY_ORDER):
        stats = policies[policy]
        center = MARGIN_LEFT + index * slot + slot / 2
        lo, hi = stats["efficiency_min"], stats["efficiency_max"]
        q1, q3 = stats["efficiency_q1"], stats["efficiency_q3"]
        median = stats["efficiency_median"]
        color = POLICY_COLORS[policy]
        parts.append(
            f'<line x1="{_f(center)}" y1="{_f(y_of(lo))}" x2="{_f(center)}" '
            f'y2="{_f(y_of(hi))}" stroke="{color}" stroke-width="1"/>'
        )
        for whisker in (lo, hi):
            parts.append(
                f'<line x1="{_f(center - box_width / 4)}" y1="{_f(y_of(whisker))}" '
                f'x2="{_f(center + box_width / 4)}" y2="{_f(y_of(whisker))}" '
                f'stroke="{color}" stroke-width="1"/>'
            )
        parts.append(
            f'<rect x="{_f(center - box_width / 2)}" y="{_f(y_of(q3))}" '
            f'width="{_f(box_width)}" height="{_f(y_of(q1) - y_of(q3))}" '
            f'fill="{color}" fill-opacity="0.35" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<line x1="{_f(center - box_width / 2)}" y1="{_f(y_of(median))}" '
            f'x2="{_f(center + box_width / 2)}" y2="{_f(y_of(median))}" '
            f'stroke="{color}" stroke-width="2.5"/>'
        )
        parts.append(
            f'<text x="{_f(center)}" y="{HEIGHT - MARGIN_BOTTOM + 24}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{POLICY_LABELS[policy]}</text>'
        )
    parts.append(
        f'<text x="16" y="{HEIGHT // 2}" font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 16 {HEIGHT // 2})" text-anchor="middle">Efficiency</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_charts(report: dict, out_dir) -> list[Path]:
    """Render all four charts into ``out_dir``; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    renderers = (
        errors_chart,
        overprovisioning_chart,
        radar_chart,
        efficiency_box_chart,
    )
    written = []
    for filename, render in zip(CHART_FILES, renderers):
        path = out_dir / filename
        path.write_text(render(report), encoding="utf-8")
        written.append(path)
    return written
