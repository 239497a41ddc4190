"""SVG rendering of a report document (the JSON emitted by ``curvepair approx``)."""

from __future__ import annotations

from xml.sax.saxutils import escape

SIZE = 640
MARGIN = 16

COLORS = {
    "box": "#cccccc",
    "f": "#1f5fbf",
    "g": "#d2461e",
    "hull": "#2a9d3a",
}


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def render_svg(doc: dict) -> str:
    x0, y0, x1, y1 = doc["region"]
    span = max(x1 - x0, y1 - y0)
    scale = (SIZE - 2 * MARGIN) / span

    def pt(x, y):
        # y axis points up in the plane, down in SVG
        return _fmt(MARGIN + (x - x0) * scale), _fmt(SIZE - MARGIN - (y - y0) * scale)

    def rect(b, **attrs):
        ax, ay = pt(b[0], b[3])
        w, h = _fmt((b[2] - b[0]) * scale), _fmt((b[3] - b[1]) * scale)
        extra = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        return f'<rect x="{ax}" y="{ay}" width="{w}" height="{h}" {extra}/>'

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(doc.get('f', 'f'))} / {escape(doc.get('g', 'g'))}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    out.append(f'<g id="partition" fill="none" stroke="{COLORS["box"]}" stroke-width="0.6">')
    out.append(rect(doc["region"]))
    for b in doc.get("boxes", []):
        out.append(rect(b["bounds"]))
    out.append("</g>")

    for name in ("f", "g"):
        out.append(f'<g id="curve-{name}" fill="none" stroke="{COLORS[name]}" stroke-width="3" stroke-linejoin="round" stroke-linecap="round">')
        for line in doc["curves"][name]:
            pts = " ".join(",".join(pt(x, y)) for x, y in line)
            out.append(f'<polyline points="{pts}"/>')
        out.append("</g>")

    out.append(f'<g id="crossings" fill="none" stroke="{COLORS["hull"]}" stroke-width="1.5" stroke-dasharray="5,3">')
    for c in doc["crossings"]:
        out.append(rect(c["hull"]))
        cx, cy = pt(*c["point"])
        out.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="{COLORS["hull"]}" stroke="none"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
