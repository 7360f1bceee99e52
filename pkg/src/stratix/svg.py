"""Minimal deterministic SVG renderings of the served view payloads.

Each renderer is a pure function of the JSON-ready payload dict, so exports
are reproducible byte-for-byte. Layout is fixed-size with .4f coordinate
formatting; no fonts or external resources.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

_W = 800.0
_H = 600.0
_PAD = 40.0

# curve colors for survival groups, keyed by position
CURVE_COLORS = ("#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
                "#ff7f00", "#a65628", "#f781bf", "#999999")


def _fmt(x: float) -> str:
    out = f"{x:.4f}"
    return "0.0000" if out == "-0.0000" else out


def _doc(body: list[str]) -> str:
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {_fmt(_W)} {_fmt(_H)}">'
    )
    return head + "".join(body) + "</svg>"


def _rect(x, y, w, h, fill, extra: str = "") -> str:
    return (
        f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" '
        f'height="{_fmt(h)}" fill="{fill}"{extra}/>'
    )


def _line(x1, y1, x2, y2, stroke, width=1.0) -> str:
    return (
        f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" '
        f'y2="{_fmt(y2)}" stroke="{stroke}" stroke-width="{_fmt(width)}"/>'
    )


def _text(x, y, content, size=12.0) -> str:
    return (
        f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{_fmt(size)}">'
        f"{escape(content)}</text>"
    )


def _heat_color(t: float) -> str:
    # blue (0) -> white (0.5) -> red (1), linear
    t = min(1.0, max(0.0, t))
    if t < 0.5:
        frac = t / 0.5
        r = int(round(255 * frac))
        g = int(round(255 * frac))
        b = 255
    else:
        frac = (t - 0.5) / 0.5
        r = 255
        g = int(round(255 * (1 - frac)))
        b = int(round(255 * (1 - frac)))
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap_svg(payload: dict) -> str:
    values = payload["values"]
    n_rows = len(values)
    n_cols = len(values[0]) if n_rows else 0
    body: list[str] = []
    if n_rows and n_cols:
        lo = min(min(row) for row in values)
        hi = max(max(row) for row in values)
        span = hi - lo
        cw = (_W - 2 * _PAD) / n_cols
        ch = (_H - 3 * _PAD) / n_rows
        for r, row in enumerate(values):
            for c, v in enumerate(row):
                t = 0.5 if span == 0 else (v - lo) / span
                body.append(_rect(_PAD + c * cw, _PAD + r * ch, cw, ch,
                                  _heat_color(t)))
        for block in payload["blocks"]:
            x = _PAD + block["start"] * cw
            w = block["size"] * cw
            body.append(_rect(x, _H - 2 * _PAD + 6, w, 14, block["color"]))
            if block["start"] > 0:
                body.append(_line(x, _PAD, x, _H - 2 * _PAD, "#000000", 1.5))
    body.append(_text(_PAD, _H - _PAD + 14,
                      f'heatmap {payload["modality"]}'))
    return _doc(body)


def silhouette_svg(payload: dict) -> str:
    rows = [(cl["cluster"], cl["color"], m["id"], m["s"])
            for cl in payload["clusters"] for m in cl["members"]]
    body: list[str] = []
    n = len(rows)
    if n:
        mid = _W / 2
        scale = (_W / 2 - _PAD)
        bh = (_H - 3 * _PAD) / n
        body.append(_line(mid, _PAD, mid, _H - 2 * _PAD, "#888888"))
        for i, (_, color, _, s) in enumerate(rows):
            w = abs(s) * scale
            x = mid if s >= 0 else mid - w
            body.append(_rect(x, _PAD + i * bh, w, max(bh - 1.0, 0.5), color))
    body.append(_text(_PAD, _H - _PAD + 14,
                      f'silhouette {payload["modality"]} '
                      f'mean={payload["mean"]:.4f}'))
    return _doc(body)


def graph_svg(payload: dict) -> str:
    nodes = payload["nodes"]
    n = len(nodes)
    body: list[str] = []
    pos: dict[str, tuple[float, float]] = {}
    radius = min(_W, _H) / 2 - _PAD
    for i, node in enumerate(nodes):
        angle = 2 * math.pi * i / max(n, 1)
        pos[node["id"]] = (_W / 2 + radius * math.cos(angle),
                           _H / 2 + radius * math.sin(angle))
    for link in payload["links"]:
        x1, y1 = pos[link["source"]]
        x2, y2 = pos[link["target"]]
        body.append(_line(x1, y1, x2, y2, "#cccccc",
                          max(0.5, 2.0 * link["weight"])))
    for node in nodes:
        x, y = pos[node["id"]]
        fill = node.get("color") or "#555555"
        body.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="6.0000" '
            f'fill="{fill}"/>'
        )
    body.append(_text(_PAD, _H - _PAD + 14,
                      f'graph metric={payload["metric"]} '
                      f'threshold={payload["threshold"]}'))
    return _doc(body)


def parallel_sets_svg(payload: dict) -> str:
    n = payload["n"]
    body: list[str] = []
    col_w = 60.0
    x_a = _PAD
    x_b = _W - _PAD - col_w
    usable = _H - 3 * _PAD
    gap = 4.0

    def spans(blocks):
        out = {}
        y = _PAD
        for blk in blocks:
            h = usable * blk["size"] / n - gap if n else 0.0
            h = max(h, 1.0)
            out[blk["cluster"]] = (y, h, blk["color"])
            y += h + gap
        return out

    spans_a = spans(payload["blocks_a"])
    spans_b = spans(payload["blocks_b"])
    # ribbon offsets accumulate within each block in display order
    used_a = {c: 0.0 for c in spans_a}
    used_b = {c: 0.0 for c in spans_b}
    for ribbon in payload["ribbons"]:
        a, b, size = ribbon["a"], ribbon["b"], ribbon["size"]
        ya, ha, color = spans_a[a]
        yb, hb, _ = spans_b[b]
        wa = ha * size / _block_size(payload["blocks_a"], a)
        wb = hb * size / _block_size(payload["blocks_b"], b)
        y1 = ya + used_a[a]
        y2 = yb + used_b[b]
        used_a[a] += wa
        used_b[b] += wb
        body.append(
            f'<polygon points="{_fmt(x_a + col_w)},{_fmt(y1)} '
            f'{_fmt(x_b)},{_fmt(y2)} {_fmt(x_b)},{_fmt(y2 + wb)} '
            f'{_fmt(x_a + col_w)},{_fmt(y1 + wa)}" '
            f'fill="{color}" fill-opacity="0.45"/>'
        )
    for y, h, color in spans_a.values():
        body.append(_rect(x_a, y, col_w, h, color))
    for y, h, color in spans_b.values():
        body.append(_rect(x_b, y, col_w, h, color))
    body.append(_text(_PAD, _H - _PAD + 14, f"parallel sets n={n}"))
    return _doc(body)


def _block_size(blocks, cluster: int) -> int:
    for blk in blocks:
        if blk["cluster"] == cluster:
            return max(blk["size"], 1)
    return 1


def survival_svg(payload: dict) -> str:
    curves = payload["curves"]
    body: list[str] = []
    t_max = 0.0
    for curve in curves:
        if curve["times"]:
            t_max = max(t_max, curve["times"][-1])
        if curve["censor_times"]:
            t_max = max(t_max, curve["censor_times"][-1])
    t_max = t_max or 1.0
    x0, y0 = _PAD, _H - 2 * _PAD
    x_span = _W - 2 * _PAD
    y_span = _H - 3 * _PAD

    def sx(t):
        return x0 + x_span * t / t_max

    def sy(s):
        return y0 - y_span * s

    body.append(_line(x0, y0, x0 + x_span, y0, "#000000"))
    body.append(_line(x0, y0, x0, y0 - y_span, "#000000"))
    for idx, curve in enumerate(curves):
        color = CURVE_COLORS[idx % len(CURVE_COLORS)]
        pts = [(0.0, 1.0)]
        s_prev = 1.0
        for t, s in zip(curve["times"], curve["survival"]):
            pts.append((t, s_prev))  # right-continuous step
            pts.append((t, s))
            s_prev = s
        pts.append((t_max, s_prev))
        path = " ".join(f"{_fmt(sx(t))},{_fmt(sy(s))}" for t, s in pts)
        body.append(
            f'<polyline points="{path}" fill="none" stroke="{color}" '
            'stroke-width="2.0000"/>'
        )
        step_times = list(curve["times"])
        step_survival = list(curve["survival"])
        for ct in curve["censor_times"]:
            s_at = 1.0
            for t, s in zip(step_times, step_survival):
                if t <= ct:
                    s_at = s
                else:
                    break
            body.append(_line(sx(ct), sy(s_at) - 5, sx(ct), sy(s_at) + 5,
                              color, 1.5))
        body.append(_text(x0 + 8, _PAD + 14 * (idx + 1),
                          curve["label"] or f"group {idx}", 12.0))
    result = payload.get("logrank")
    caption = "survival"
    if result is not None:
        caption += f' logrank p={result["p_value"]:.6g}'
    body.append(_text(_PAD, _H - _PAD + 14, caption))
    return _doc(body)
