"""Deterministic SVG rendering of labeled scenes."""

from __future__ import annotations

from .reasoner import Labeling
from .scene import GroundTruth, Scene

LABEL_COLORS = {
    "Shelf": "#1f77b4",
    "Product": "#2ca02c",
    "Other": "#7f7f7f",
}


def render(scene: Scene, labeling: Labeling,
           gt: GroundTruth | None = None) -> bytes:
    """One outline per rect, color-coded by label; dashed when pred != gt."""
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {scene.width:.2f} {scene.height:.2f}">',
        f'<rect x="0" y="0" width="{scene.width:.2f}" '
        f'height="{scene.height:.2f}" fill="#ffffff"/>',
    ]
    for rect in sorted(scene.rects, key=lambda r: r.id):
        label = labeling.labels.get(rect.id, ("Other", None))[0]
        color = LABEL_COLORS[label]
        dashed = (gt is not None and gt.labels.get(rect.id) is not None
                  and gt.labels[rect.id] != label)
        dash = ' stroke-dasharray="4 3"' if dashed else ""
        lines.append(
            f'<rect x="{rect.x:.2f}" y="{rect.y:.2f}" width="{rect.w:.2f}" '
            f'height="{rect.h:.2f}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"{dash}><title>{rect.id}: {label}</title></rect>'
        )
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")
