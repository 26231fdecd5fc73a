import type { SceneGraph, SceneNode } from './types';

const SVG_NS = 'http://www.w3.org/2000/svg';
const SPIRAL_STEP = 0.03;

const ICON_GLYPHS: Record<string, string> = {
  handshake: '\u{1f91d}',
  eye: '\u{1f441}',
  gears: '⚙',
  document: '\u{1f4c4}',
  question: '❓',
  frame: '\u{1f504}',
};
const ICON_FALLBACK = '◆';

/** Side encodings for chord runs; clash color keys resolve via the palette. */
const COLOR_VALUES: Record<string, string> = {
  white: '#f5f5f5',
  black: '#1a1a1a',
};

const ANCHORS: Record<number, string> = { 0: 'start', 1: 'middle', 2: 'end' };

export const VIEW_STYLESHEET = `
text { font-family: 'DejaVu Sans', sans-serif; }
.circle-outline { fill: none; stroke: #555; stroke-width: 1; }
.side-affirmative { fill: #fafafa; stroke: #777; stroke-width: 0.5; }
.side-negative { fill: #1a1a1a; stroke: #1a1a1a; stroke-width: 0.5; }
.stroke-affirmative { fill: none; stroke: #bdbdbd; stroke-width: 2.4; }
.stroke-negative { fill: none; stroke: #1a1a1a; stroke-width: 2.4; }
.session-arc { fill: #8a8a8a; }
.chord-backdrop { fill: #e9e9e9; }
.chord { fill: none; stroke-width: 1.2; stroke-opacity: 0.85; }
.ring-section { stroke: #fff; stroke-width: 0.4; }
.sector-block { fill: #f7f7f7; stroke: #aaa; stroke-width: 0.5; }
.strategy-row { fill: none; stroke: #ddd; stroke-width: 0.8; }
.strategy-column { fill: #f2f2f2; }
.unit { stroke: #666; stroke-width: 0.4; }
.co-link { fill: none; stroke: #e45756; stroke-width: 1; }
.dashed-link { stroke: #999; stroke-width: 0.8; }
.connector { stroke: #555; stroke-width: 0.8; }
.icon-box { fill: #fff; stroke: #888; }
.card { fill: #fff; stroke: #ccc; }
.highlighted { stroke: #ff6d00 !important; stroke-width: 2.6 !important; }
`;

function fmt(value: number): string {
  const out = value.toFixed(4);
  return out === '-0.0000' ? '0.0000' : out;
}

function pt(cx: number, cy: number, r: number, theta: number): [number, number] {
  return [cx + r * Math.sin(theta), cy - r * Math.cos(theta)];
}

/** Split points so no single SVG arc command spans more than half a turn. */
function arcPoints(
  cx: number,
  cy: number,
  r: number,
  a0: number,
  a1: number,
): [number, number][] {
  const sweep = a1 - a0;
  const pieces = Math.max(1, Math.ceil(Math.abs(sweep) / Math.PI - 1e-12));
  const out: [number, number][] = [];
  for (let i = 0; i <= pieces; i++) {
    out.push(pt(cx, cy, r, a0 + (sweep * i) / pieces));
  }
  return out;
}

function arcBandPath(g: Record<string, number>): string {
  const { cx, cy, r0, r1, a0, a1 } = g;
  const full = a1 - a0 >= 2 * Math.PI - 1e-9;
  const outer = arcPoints(cx, cy, r1, a0, a1);
  const parts = [`M ${fmt(outer[0][0])} ${fmt(outer[0][1])}`];
  for (const [x, y] of outer.slice(1)) {
    parts.push(`A ${fmt(r1)} ${fmt(r1)} 0 0 1 ${fmt(x)} ${fmt(y)}`);
  }
  if (full) {
    parts.push('Z');
    if (r0 > 1e-9) {
      const inner = arcPoints(cx, cy, r0, a0, a1).reverse();
      parts.push(`M ${fmt(inner[0][0])} ${fmt(inner[0][1])}`);
      for (const [x, y] of inner.slice(1)) {
        parts.push(`A ${fmt(r0)} ${fmt(r0)} 0 0 0 ${fmt(x)} ${fmt(y)}`);
      }
      parts.push('Z');
    }
  } else if (r0 > 1e-9) {
    const inner = arcPoints(cx, cy, r0, a0, a1).reverse();
    parts.push(`L ${fmt(inner[0][0])} ${fmt(inner[0][1])}`);
    for (const [x, y] of inner.slice(1)) {
      parts.push(`A ${fmt(r0)} ${fmt(r0)} 0 0 0 ${fmt(x)} ${fmt(y)}`);
    }
    parts.push('Z');
  } else {
    parts.push(`L ${fmt(cx)} ${fmt(cy)}`, 'Z');
  }
  return parts.join(' ');
}

function spiralPath(g: Record<string, number>): string {
  const { cx, cy, a, b, t0, t1 } = g;
  const parts: string[] = [];
  const thetas: number[] = [];
  for (let t = t0; t < t1; t += SPIRAL_STEP) thetas.push(t);
  thetas.push(t1);
  thetas.forEach((theta, i) => {
    const [x, y] = pt(cx, cy, a + b * theta, theta);
    parts.push(`${i === 0 ? 'M' : 'L'} ${fmt(x)} ${fmt(y)}`);
  });
  return parts.join(' ');
}

export class SceneRenderer {
  constructor(
    private readonly doc: Document,
    private palette: Record<string, string> = {},
  ) {}

  /** Render a whole scene into `host`, one labelled region per view child. */
  renderScene(scene: SceneGraph, host: Element): void {
    this.palette = scene.meta.palette;
    host.textContent = '';
    for (const view of scene.root.children ?? []) {
      const region = this.doc.createElement('section');
      region.className = 'view-region';
      region.id = `region-${view.id}`;
      const svg = this.doc.createElementNS(SVG_NS, 'svg');
      svg.setAttribute('data-view', view.id);
      const style = this.doc.createElementNS(SVG_NS, 'style');
      style.textContent = VIEW_STYLESHEET + this.paletteCss();
      svg.appendChild(style);
      svg.appendChild(this.renderNode(view));
      region.appendChild(svg);
      host.appendChild(region);
    }
  }

  private paletteCss(): string {
    return Object.entries(this.palette)
      .map(([key, color]) => `.clash-${key} { fill: ${color}; }`)
      .join('\n');
  }

  renderNode(node: SceneNode): Element {
    const el = this.createElement(node);
    el.setAttribute('id', node.id);
    el.setAttribute('data-kind', node.kind);
    if (node.style) el.setAttribute('class', node.style);
    if (node.handle) {
      el.setAttribute('data-target-kind', node.handle.targetKind);
      el.setAttribute('data-target-id', node.handle.targetId);
    }
    for (const key of Object.keys(node.data ?? {}).sort()) {
      el.setAttribute(`data-${key.toLowerCase()}`, node.data![key]);
    }
    return el;
  }

  private createElement(node: SceneNode): Element {
    const g = node.geometry ?? {};
    switch (node.kind) {
      case 'group': {
        const el = this.doc.createElementNS(SVG_NS, 'g');
        for (const child of node.children ?? []) {
          el.appendChild(this.renderNode(child));
        }
        return el;
      }
      case 'circle': {
        const el = this.doc.createElementNS(SVG_NS, 'circle');
        el.setAttribute('cx', fmt(g.cx));
        el.setAttribute('cy', fmt(g.cy));
        el.setAttribute('r', fmt(g.r));
        return el;
      }
      case 'rect': {
        const el = this.doc.createElementNS(SVG_NS, 'rect');
        el.setAttribute('x', fmt(g.x));
        el.setAttribute('y', fmt(g.y));
        el.setAttribute('width', fmt(g.width));
        el.setAttribute('height', fmt(g.height));
        return el;
      }
      case 'arcBand': {
        const el = this.doc.createElementNS(SVG_NS, 'path');
        el.setAttribute('d', arcBandPath(g));
        return el;
      }
      case 'spiralStroke': {
        const el = this.doc.createElementNS(SVG_NS, 'path');
        el.setAttribute('d', spiralPath(g));
        return el;
      }
      case 'chord':
        return this.chordElement(node);
      case 'polyline': {
        const el = this.doc.createElementNS(SVG_NS, 'polyline');
        const count = parseInt(node.data?.pointCount ?? '0', 10);
        const pts: string[] = [];
        for (let i = 0; i < count; i++) {
          pts.push(`${fmt(g[`p${i}x`])},${fmt(g[`p${i}y`])}`);
        }
        el.setAttribute('points', pts.join(' '));
        return el;
      }
      case 'dashedLine': {
        const el = this.doc.createElementNS(SVG_NS, 'line');
        el.setAttribute('x1', fmt(g.x1));
        el.setAttribute('y1', fmt(g.y1));
        el.setAttribute('x2', fmt(g.x2));
        el.setAttribute('y2', fmt(g.y2));
        el.setAttribute('stroke-dasharray', '4 3');
        return el;
      }
      case 'text': {
        const el = this.doc.createElementNS(SVG_NS, 'text');
        el.setAttribute('x', fmt(g.x));
        el.setAttribute('y', fmt(g.y));
        el.setAttribute('font-size', fmt(g.fontSize));
        el.setAttribute('text-anchor', ANCHORS[g.anchor ?? 0] ?? 'start');
        el.textContent = node.text ?? '';
        return el;
      }
      case 'icon': {
        const el = this.doc.createElementNS(SVG_NS, 'text');
        el.setAttribute('x', fmt(g.x));
        el.setAttribute('y', fmt(g.y));
        el.setAttribute('font-size', fmt(g.size));
        el.setAttribute('text-anchor', 'middle');
        el.textContent = ICON_GLYPHS[node.text ?? ''] ?? ICON_FALLBACK;
        return el;
      }
      default:
        throw new Error(`unknown scene node kind ${node.kind}`);
    }
  }

  private chordColor(name: string): string {
    return COLOR_VALUES[name] ?? this.palette[name] ?? '#888888';
  }

  private chordElement(node: SceneNode): Element {
    const g = node.geometry ?? {};
    const colors = (node.data?.colors ?? '')
      .split('|')
      .filter((c) => c.length > 0)
      .map((c) => this.chordColor(c));
    if (colors.length === 0) colors.push('#888888');
    const mkPath = (d: string, stroke: string) => {
      const p = this.doc.createElementNS(SVG_NS, 'path');
      p.setAttribute('d', d);
      p.setAttribute('stroke', stroke);
      return p;
    };
    if (colors.length === 1) {
      return mkPath(
        `M ${fmt(g.x1)} ${fmt(g.y1)} Q ${fmt(g.cx)} ${fmt(g.cy)} ${fmt(g.x2)} ${fmt(g.y2)}`,
        colors[0],
      );
    }
    // bicolor: split the quadratic at its midpoint, one run per side
    const c1: [number, number] = [0.5 * (g.x1 + g.cx), 0.5 * (g.y1 + g.cy)];
    const c2: [number, number] = [0.5 * (g.cx + g.x2), 0.5 * (g.cy + g.y2)];
    const mid: [number, number] = [
      0.25 * (g.x1 + 2 * g.cx + g.x2),
      0.25 * (g.y1 + 2 * g.cy + g.y2),
    ];
    const wrap = this.doc.createElementNS(SVG_NS, 'g');
    wrap.appendChild(
      mkPath(
        `M ${fmt(g.x1)} ${fmt(g.y1)} Q ${fmt(c1[0])} ${fmt(c1[1])} ${fmt(mid[0])} ${fmt(mid[1])}`,
        colors[0],
      ),
    );
    wrap.appendChild(
      mkPath(
        `M ${fmt(mid[0])} ${fmt(mid[1])} Q ${fmt(c2[0])} ${fmt(c2[1])} ${fmt(g.x2)} ${fmt(g.y2)}`,
        colors[1],
      ),
    );
    return wrap;
  }
}
