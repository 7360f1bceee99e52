// Silhouette view: one horizontal bar per sample, grouped by cluster in the
// served order (each cluster's members arrive sorted descending by width).

import type { SilhouettePayload } from '../types.js';
import { linearScale } from '../scales.js';
import { svgEl, svgRoot, svgText } from './svg.js';

const WIDTH = 420;
const PAD = 30;
const BAR = 4;
const GAP = 10;

export function renderSilhouette(payload: SilhouettePayload): SVGSVGElement {
  if (!Array.isArray(payload.clusters) || payload.clusters.length === 0) {
    throw new Error('silhouette payload has no clusters');
  }
  const nBars = payload.clusters.reduce((s, c) => s + c.members.length, 0);
  const height = 2 * PAD + nBars * BAR + (payload.clusters.length - 1) * GAP;
  const svg = svgRoot(WIDTH, height);
  const x = linearScale([-1, 1], [PAD, WIDTH - PAD]);
  const zero = x(0);

  svg.appendChild(svgEl('line', {
    x1: zero, y1: PAD - 6, x2: zero, y2: height - PAD + 6,
    stroke: '#888', 'stroke-width': 0.7,
  }));

  let y = PAD;
  for (const cluster of payload.clusters) {
    for (const member of cluster.members) {
      const w = Math.abs(x(member.s) - zero);
      svg.appendChild(svgEl('rect', {
        x: member.s < 0 ? zero - w : zero,
        y, width: Math.max(w, 0.25), height: BAR - 1,
        fill: cluster.color,
        'data-sample': member.id,
      }));
      y += BAR;
    }
    svg.appendChild(svgText(
      `c${cluster.cluster} mean ${cluster.mean.toFixed(3)}`,
      { x: WIDTH - PAD + 2, y: y - 2, 'font-size': 9, fill: cluster.color }));
    y += GAP;
  }

  svg.appendChild(svgText(
    `modality ${payload.modality}: mean silhouette ${payload.mean.toFixed(3)}`,
    { x: PAD, y: PAD - 12 }));
  return svg;
}
