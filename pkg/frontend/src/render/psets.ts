// Parallel-sets view: two block columns (modality a left, b right) joined
// by ribbons. Ribbon thicknesses are allocated once over all ribbons, so
// every ribbon is proportional to its count within 1 px and has the same
// thickness at both ends; block spans are the sums of their ribbons.
// Blocks and ribbons are clickable selection atoms.

import type { ParallelSetsPayload, PsetsRibbon, SelectionAtom } from '../types.js';
import { allocatePixels } from '../scales.js';
import { svgEl, svgRoot, svgText } from './svg.js';

const WIDTH = 420;
const HEIGHT = 340;
const PAD = 24;
const COL_W = 34;

export interface PsetsHandlers {
  onAtom?: (atom: SelectionAtom) => void;
}

export function renderParallelSets(payload: ParallelSetsPayload,
                                   handlers: PsetsHandlers = {}): SVGSVGElement {
  const { blocks_a: blocksA, blocks_b: blocksB, ribbons } = payload;
  if (!Array.isArray(blocksA) || !Array.isArray(blocksB) || !Array.isArray(ribbons)) {
    throw new Error('parallel-sets payload is missing blocks or ribbons');
  }
  const svg = svgRoot(WIDTH, HEIGHT);
  const spanH = HEIGHT - 2 * PAD;
  const xA = PAD;
  const xB = WIDTH - PAD - COL_W;

  // one global allocation: ribbons stay within 1 px of proportional
  const thickness = new Map<PsetsRibbon, number>();
  allocatePixels(ribbons.map(r => r.size), spanH)
    .forEach((px, i) => thickness.set(ribbons[i], px));

  // a side: payload order is already a display order, then b position
  const yAt = new Map<PsetsRibbon, { yA: number; yB: number }>();
  const colorOfA = new Map(blocksA.map(b => [b.cluster, b.color]));
  const spansA = new Map<number, { y: number; h: number }>();
  let cursor = PAD;
  for (const block of blocksA) {
    const mine = ribbons.filter(r => r.a === block.cluster);
    const top = cursor;
    for (const ribbon of mine) {
      yAt.set(ribbon, { yA: cursor, yB: 0 });
      cursor += thickness.get(ribbon)!;
    }
    spansA.set(block.cluster, { y: top, h: cursor - top });
  }

  // b side: blocks in display order, ribbons within a block keep a order
  const spansB = new Map<number, { y: number; h: number }>();
  cursor = PAD;
  for (const block of blocksB) {
    const mine = ribbons.filter(r => r.b === block.cluster);
    const top = cursor;
    for (const ribbon of mine) {
      yAt.get(ribbon)!.yB = cursor;
      cursor += thickness.get(ribbon)!;
    }
    spansB.set(block.cluster, { y: top, h: cursor - top });
  }

  for (const ribbon of ribbons) {
    const px = thickness.get(ribbon)!;
    const { yA, yB } = yAt.get(ribbon)!;
    const path = svgEl('path', {
      d: `M ${xA + COL_W} ${yA} L ${xB} ${yB} ` +
         `L ${xB} ${yB + px} L ${xA + COL_W} ${yA + px} Z`,
      fill: colorOfA.get(ribbon.a) ?? '#999999', 'fill-opacity': 0.45,
      'data-ribbon': `${ribbon.a}:${ribbon.b}`,
      'data-size': ribbon.size,
      'data-px': px,
    });
    path.addEventListener('click', () => handlers.onAtom?.({
      kind: 'ribbon', a: ribbon.a, b: ribbon.b,
    }));
    svg.appendChild(path);
  }

  for (const block of blocksA) {
    const span = spansA.get(block.cluster)!;
    const rect = svgEl('rect', {
      x: xA, y: span.y, width: COL_W, height: span.h, fill: block.color,
      'data-block': `a:${block.cluster}`, 'data-size': block.size,
    });
    rect.addEventListener('click', () => handlers.onAtom?.({
      kind: 'block', modality: 'a', cluster: block.cluster,
    }));
    svg.appendChild(rect);
  }
  for (const block of blocksB) {
    const span = spansB.get(block.cluster)!;
    const rect = svgEl('rect', {
      x: xB, y: span.y, width: COL_W, height: span.h, fill: block.color,
      'data-block': `b:${block.cluster}`, 'data-size': block.size,
    });
    rect.addEventListener('click', () => handlers.onAtom?.({
      kind: 'block', modality: 'b', cluster: block.cluster,
    }));
    svg.appendChild(rect);
  }

  svg.appendChild(svgText(`n = ${payload.n}`, { x: PAD, y: PAD - 8 }));
  return svg;
}
