// Expression heatmap: one column per sample in served order, columns
// grouped into cluster blocks whose pixel widths stay proportional to
// cluster sizes; a colored block strip underlines the column groups.

import type { HeatmapPayload } from '../types.js';
import { allocatePixels, stackOffsets } from '../scales.js';
import { svgEl, svgRoot, svgText } from './svg.js';

const WIDTH = 460;
const HEIGHT = 300;
const PAD = 30;
const STRIP = 12;

function heatColor(t: number): string {
  // blue -> white -> red, t in [0, 1]
  const clamped = Math.max(0, Math.min(1, t));
  const red = Math.round(255 * Math.min(1, 2 * clamped));
  const blue = Math.round(255 * Math.min(1, 2 * (1 - clamped)));
  const green = Math.round(255 * (1 - Math.abs(2 * clamped - 1)));
  return `rgb(${red},${green},${blue})`;
}

export function renderHeatmap(payload: HeatmapPayload): SVGSVGElement {
  const { blocks, values, feature_ids: featureIds } = payload;
  if (!Array.isArray(values) || values.length === 0) {
    throw new Error('heatmap payload has no values');
  }
  const nSamples = payload.sample_order.length;
  if (values.some(row => row.length !== nSamples)) {
    throw new Error('heatmap rows do not match sample order');
  }
  const svg = svgRoot(WIDTH, HEIGHT);
  const plotW = WIDTH - 2 * PAD;
  const plotH = HEIGHT - 2 * PAD - STRIP;
  const rowH = plotH / featureIds.length;

  const blockWidths = allocatePixels(blocks.map(b => b.size), plotW);
  const blockX = stackOffsets(blockWidths);

  let flatMin = Infinity;
  let flatMax = -Infinity;
  for (const row of values) {
    for (const v of row) {
      if (v < flatMin) flatMin = v;
      if (v > flatMax) flatMax = v;
    }
  }
  const spread = flatMax > flatMin ? flatMax - flatMin : 1;

  blocks.forEach((block, bi) => {
    const x0 = PAD + blockX[bi];
    const colW = block.size > 0 ? blockWidths[bi] / block.size : 0;
    for (let col = 0; col < block.size; col++) {
      const sample = block.start + col;
      for (let row = 0; row < featureIds.length; row++) {
        const t = (values[row][sample] - flatMin) / spread;
        svg.appendChild(svgEl('rect', {
          x: x0 + col * colW,
          y: PAD + row * rowH,
          width: Math.max(colW, 0.1),
          height: Math.max(rowH, 0.1),
          fill: heatColor(t),
        }));
      }
    }
    svg.appendChild(svgEl('rect', {
      x: x0, y: PAD + plotH + 4,
      width: blockWidths[bi], height: STRIP,
      fill: block.color,
      'data-cluster': block.cluster,
    }));
  });

  svg.appendChild(svgText(
    `modality ${payload.modality}: ${featureIds.length} features x ${nSamples} samples`,
    { x: PAD, y: PAD - 10 }));
  return svg;
}
