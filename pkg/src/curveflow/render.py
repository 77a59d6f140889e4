"""Minimal SVG rendering: the projected polyline with its hull outline."""

from .convexity import DegenerateHullError, hull_2d


def projection_svg(points2, size=480, margin=20):
    """SVG document showing the closed 2D polyline and its convex hull."""
    xs = points2[:, 0]
    ys = points2[:, 1]
    lo_x, hi_x = xs.min(), xs.max()
    lo_y, hi_y = ys.min(), ys.max()
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-12)
    scale = (size - 2 * margin) / span

    def to_px(p):
        x = margin + (p[0] - lo_x) * scale
        y = size - margin - (p[1] - lo_y) * scale
        return f"{x:.2f},{y:.2f}"

    curve_pts = " ".join(to_px(p) for p in points2)
    try:
        hull_pts = " ".join(to_px(p) for p in hull_2d(points2).vertices)
        hull_el = (f'  <polygon points="{hull_pts}" fill="none" '
                   'stroke="#c0392b" stroke-width="1" stroke-dasharray="4 3"/>\n')
    except DegenerateHullError:
        hull_el = ""
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n'
        f'  <rect width="{size}" height="{size}" fill="white"/>\n'
        f'{hull_el}'
        f'  <polygon points="{curve_pts}" fill="none" stroke="#2c3e50" '
        'stroke-width="1.5"/>\n'
        "</svg>\n"
    )
