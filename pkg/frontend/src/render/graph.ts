// Patient similarity graph: force-laid-out nodes colored by cluster (the
// served node colors, which match the parallel-sets blocks).

import type { GraphPayload } from '../types.js';
import { forceLayout } from '../layout.js';
import { svgEl, svgRoot, svgText } from './svg.js';

const WIDTH = 460;
const HEIGHT = 360;

export function renderGraph(payload: GraphPayload, seed = 42): SVGSVGElement {
  if (!Array.isArray(payload.nodes)) {
    throw new Error('graph payload has no nodes');
  }
  const svg = svgRoot(WIDTH, HEIGHT);
  const positions = forceLayout(payload, WIDTH, HEIGHT, seed);
  const at = new Map(positions.map(p => [p.id, p]));

  for (const link of payload.links) {
    const source = at.get(link.source);
    const target = at.get(link.target);
    if (!source || !target) {
      throw new Error(`link references unknown node ${link.source}->${link.target}`);
    }
    svg.appendChild(svgEl('line', {
      x1: source.x, y1: source.y, x2: target.x, y2: target.y,
      stroke: '#bbb', 'stroke-width': Math.max(0.3, Math.min(2, link.weight * 2)),
      'stroke-opacity': 0.6,
    }));
  }

  for (const node of payload.nodes) {
    const pos = at.get(node.id)!;
    svg.appendChild(svgEl('circle', {
      cx: pos.x, cy: pos.y, r: 4.5,
      fill: node.color ?? '#555555',
      stroke: '#333', 'stroke-width': 0.5,
      'data-node': node.id,
      'data-cluster': node.cluster ?? '',
    }));
  }

  svg.appendChild(svgText(
    `${payload.nodes.length} patients, ${payload.links.length} edges ` +
    `(${payload.metric} > ${payload.threshold})`,
    { x: 10, y: 16 }));
  return svg;
}
