"""Hierarchical size accounting for serialized structures.

Every persistent structure exposes size_tree(); the root total of an
index's tree equals the on-disk file size byte for byte, which the tests
check. Reports render as JSON or as a self-contained zoomable HTML
sunburst with no external assets.
"""

import io
import json


class _CountingSink(io.RawIOBase):
    """File-like sink that counts written bytes and discards them."""

    def __init__(self):
        self.count = 0

    def writable(self):
        return True

    def write(self, b):
        self.count += len(b)
        return len(b)


def measure_serialized(obj):
    """Byte count obj.serialize(f) produces, without buffering the data."""
    sink = _CountingSink()
    obj.serialize(sink)
    return sink.count


class SizeTree:
    """Tree of byte counts; a node's total is its own bytes plus children."""

    def __init__(self, name, own_bytes=0, children=None):
        self.name = str(name)
        self.own_bytes = int(own_bytes)
        self.children = list(children or [])

    @property
    def total_bytes(self):
        return self.own_bytes + sum(c.total_bytes for c in self.children)

    def add(self, child):
        self.children.append(child)
        return child

    def child(self, name):
        for c in self.children:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        d = {
            "name": self.name,
            "bytes": self.total_bytes,
            "own_bytes": self.own_bytes,
        }
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            d["name"],
            d.get("own_bytes", 0),
            [cls.from_dict(c) for c in d.get("children", ())],
        )

    def format(self, max_depth=None):
        """Indented text rendering with percentages of the root."""
        root_total = max(self.total_bytes, 1)
        lines = []

        def walk(node, depth):
            if max_depth is not None and depth > max_depth:
                return
            pct = 100.0 * node.total_bytes / root_total
            lines.append(
                f"{'  ' * depth}{node.name}: {node.total_bytes} B ({pct:.1f}%)"
            )
            for c in node.children:
                walk(c, depth + 1)

        walk(self, 0)
        return "\n".join(lines)

    def write_json(self, path):
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write("\n")

    def write_html(self, path, title="Index size report"):
        payload = json.dumps(self.to_dict())
        with open(path, "w") as f:
            f.write(_HTML_TEMPLATE.replace("__TITLE__", title).replace(
                "__DATA__", payload
            ))


_HTML_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<meta name="viewport" content="width=device-width, initial-scale=1">
<title>__TITLE__</title>
<style>
  body { font-family: system-ui, sans-serif; margin: 0; background: #fafafa;
         color: #222; }
  #wrap { max-width: 760px; margin: 0 auto; padding: 16px; }
  h1 { font-size: 1.2rem; }
  #crumbs { min-height: 1.4em; font-size: 0.9rem; color: #555;
            margin-bottom: 8px; }
  #crumbs span { cursor: pointer; color: #06c; }
  svg { display: block; width: 100%; height: auto; }
  path { stroke: #fafafa; stroke-width: 1; cursor: pointer; }
  path:hover { opacity: 0.8; }
  #center-label { font-size: 13px; }
  #legend { font-size: 0.85rem; margin-top: 10px; }
  #legend div { margin: 2px 0; }
  .swatch { display: inline-block; width: 10px; height: 10px;
            margin-right: 6px; border-radius: 2px; }
</style>
</head>
<body>
<div id="wrap">
<h1>__TITLE__</h1>
<div id="crumbs"></div>
<svg id="chart" viewBox="0 0 640 640"></svg>
<div id="legend"></div>
</div>
<script>
const DATA = __DATA__;
const svg = document.getElementById('chart');
const NS = 'http://www.w3.org/2000/svg';
const CX = 320, CY = 320, R0 = 70, RING = 58, MAXDEPTH = 6;

function annotate(node, parent) {
  node.parent = parent;
  (node.children || []).forEach(c => annotate(c, node));
}
annotate(DATA, null);

function hue(name) {
  let h = 0;
  for (const ch of name) h = (h * 31 + ch.charCodeAt(0)) % 360;
  return h;
}
function fmt(b) {
  if (b >= 1 << 20) return (b / (1 << 20)).toFixed(2) + ' MiB';
  if (b >= 1024) return (b / 1024).toFixed(1) + ' KiB';
  return b + ' B';
}
function arcPath(a0, a1, r0, r1) {
  if (a1 - a0 >= 2 * Math.PI - 1e-6) a1 = a0 + 2 * Math.PI - 1e-4;
  const p = (a, r) => [CX + r * Math.sin(a), CY - r * Math.cos(a)];
  const [x0, y0] = p(a0, r0), [x1, y1] = p(a1, r0);
  const [x2, y2] = p(a1, r1), [x3, y3] = p(a0, r1);
  const big = (a1 - a0) > Math.PI ? 1 : 0;
  return `M${x0},${y0} A${r0},${r0} 0 ${big} 1 ${x1},${y1}` +
         ` L${x2},${y2} A${r1},${r1} 0 ${big} 0 ${x3},${y3} Z`;
}

let root = DATA;
function render() {
  svg.textContent = '';
  const total = Math.max(root.bytes, 1);
  function ring(node, a0, a1, depth) {
    if (depth > MAXDEPTH || (a1 - a0) < 0.004) return;
    if (depth > 0) {
      const el = document.createElementNS(NS, 'path');
      el.setAttribute('d', arcPath(a0, a1, R0 + (depth - 1) * RING,
                                   R0 + depth * RING - 2));
      el.setAttribute('fill',
        `hsl(${hue(node.name)},55%,${72 - depth * 6}%)`);
      const t = document.createElementNS(NS, 'title');
      t.textContent = `${node.name}: ${fmt(node.bytes)}` +
        ` (${(100 * node.bytes / total).toFixed(1)}%)`;
      el.appendChild(t);
      el.addEventListener('click', () => { root = node; render(); });
      svg.appendChild(el);
    }
    let a = a0;
    const kids = node.children || [];
    const own = node.bytes - kids.reduce((s, c) => s + c.bytes, 0);
    for (const c of kids) {
      const span = (a1 - a0) * c.bytes / Math.max(node.bytes, 1);
      ring(c, a, a + span, depth + 1);
      a += span;
    }
    if (own > 0 && kids.length && depth < MAXDEPTH) {
      const span = (a1 - a0) * own / Math.max(node.bytes, 1);
      const el = document.createElementNS(NS, 'path');
      el.setAttribute('d', arcPath(a, a + span, R0 + depth * RING,
                                   R0 + (depth + 1) * RING - 2));
      el.setAttribute('fill', '#ddd');
      const t = document.createElementNS(NS, 'title');
      t.textContent = `${node.name} (headers/own): ${fmt(own)}`;
      el.appendChild(t);
      svg.appendChild(el);
    }
  }
  ring(root, 0, 2 * Math.PI, 0);
  const hub = document.createElementNS(NS, 'circle');
  hub.setAttribute('cx', CX); hub.setAttribute('cy', CY);
  hub.setAttribute('r', R0 - 4);
  hub.setAttribute('fill', '#fff');
  hub.style.cursor = 'pointer';
  hub.addEventListener('click', () => {
    if (root.parent) { root = root.parent; render(); }
  });
  svg.appendChild(hub);
  const lbl = document.createElementNS(NS, 'text');
  lbl.setAttribute('x', CX); lbl.setAttribute('y', CY - 4);
  lbl.setAttribute('text-anchor', 'middle');
  lbl.setAttribute('id', 'center-label');
  lbl.textContent = root.name;
  const sub = document.createElementNS(NS, 'text');
  sub.setAttribute('x', CX); sub.setAttribute('y', CY + 14);
  sub.setAttribute('text-anchor', 'middle');
  sub.setAttribute('font-size', '12');
  sub.setAttribute('fill', '#666');
  sub.textContent = fmt(root.bytes);
  svg.appendChild(lbl); svg.appendChild(sub);
  const crumbs = [];
  for (let n = root; n; n = n.parent) crumbs.unshift(n);
  const cdiv = document.getElementById('crumbs');
  cdiv.textContent = '';
  crumbs.forEach((n, i) => {
    const s = document.createElement('span');
    s.textContent = n.name;
    s.addEventListener('click', () => { root = n; render(); });
    cdiv.appendChild(s);
    if (i < crumbs.length - 1) cdiv.appendChild(
      document.createTextNode(' \\u203a '));
  });
  const leg = document.getElementById('legend');
  leg.textContent = '';
  for (const c of (root.children || [])) {
    const d = document.createElement('div');
    const sw = document.createElement('span');
    sw.className = 'swatch';
    sw.style.background = `hsl(${hue(c.name)},55%,66%)`;
    d.appendChild(sw);
    d.appendChild(document.createTextNode(
      `${c.name}: ${fmt(c.bytes)} (${(100 * c.bytes / Math.max(root.bytes, 1)).toFixed(1)}%)`));
    leg.appendChild(d);
  }
}
render();
</script>
</body>
</html>
"""
