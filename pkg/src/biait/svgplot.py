"""Deterministic SVG rendering of 2-D trial traces.

Legend: obstacles black, lazy trees red (start side) and blue (goal side),
valid trees green, samples grey, solution violet.
"""

from __future__ import annotations

SCALE = 60.0
MARGIN = 10.0

COLORS = {
    "lazy_a": "#d62728",   # red
    "lazy_b": "#1f77b4",   # blue
    "valid": "#2ca02c",    # green
    "path": "#9467bd",     # violet
    "sample": "#9a9a9a",   # grey
    "obstacle": "#000000",
}


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render_trace_svg(trace: dict) -> str:
    scenario = trace["scenario"]
    if scenario["dim"] != 2:
        raise ValueError("SVG rendering supports 2-D scenarios only")
    lo = scenario["bounds"]["lo"]
    hi = scenario["bounds"]["hi"]
    w = (hi[0] - lo[0]) * SCALE + 2 * MARGIN
    h = (hi[1] - lo[1]) * SCALE + 2 * MARGIN

    def px(pt):
        return ((pt[0] - lo[0]) * SCALE + MARGIN, (hi[1] - pt[1]) * SCALE + MARGIN)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        f'<rect x="0" y="0" width="{_fmt(w)}" height="{_fmt(h)}" fill="#ffffff"/>',
    ]

    for ob in scenario.get("obstacles", []):
        if ob["type"] == "aabb":
            x0, y0 = px((ob["min"][0], ob["max"][1]))
            x1, y1 = px((ob["max"][0], ob["min"][1]))
            out.append(
                f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(x1 - x0)}" '
                f'height="{_fmt(y1 - y0)}" fill="{COLORS["obstacle"]}"/>')
        else:
            cx, cy = px(ob["center"])
            out.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(ob["radius"] * SCALE)}" '
                f'fill="{COLORS["obstacle"]}"/>')

    final = trace.get("final", {})
    samples = final.get("samples", {})

    def line(a, b, color, width, opacity="1"):
        xa, ya = px(a)
        xb, yb = px(b)
        out.append(
            f'<line x1="{_fmt(xa)}" y1="{_fmt(ya)}" x2="{_fmt(xb)}" y2="{_fmt(yb)}" '
            f'stroke="{color}" stroke-width="{width}" stroke-opacity="{opacity}"/>')

    for p, c, role in final.get("lazy_edges", []):
        a, b = samples.get(str(p)), samples.get(str(c))
        if a and b:
            line(a, b, COLORS["lazy_a" if role == 0 else "lazy_b"], "1", "0.6")
    for p, c, role in final.get("valid_edges", []):
        a, b = samples.get(str(p)), samples.get(str(c))
        if a and b:
            line(a, b, COLORS["valid"], "1.5")

    for vid in sorted(samples, key=int):
        cx, cy = px(samples[vid])
        out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="1.5" fill="{COLORS["sample"]}"/>')

    path = final.get("path", [])
    if path:
        pts = " ".join(f"{_fmt(px(p)[0])},{_fmt(px(p)[1])}" for p in path)
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{COLORS["path"]}" stroke-width="3"/>')

    sx, sy = px(scenario["start"])
    out.append(f'<circle cx="{_fmt(sx)}" cy="{_fmt(sy)}" r="5" fill="{COLORS["lazy_a"]}"/>')
    for g in scenario["goals"]:
        gx, gy = px(g)
        out.append(f'<circle cx="{_fmt(gx)}" cy="{_fmt(gy)}" r="5" fill="{COLORS["lazy_b"]}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(trace: dict, out_path: str) -> None:
    svg = render_trace_svg(trace)
    with open(out_path, "w", encoding="utf-8") as f:
        f.write(svg)
