// @vitest-environment jsdom
import { describe, expect, it } from 'vitest';
import { renderParallelSets } from '../src/render/psets.js';
import type { ParallelSetsPayload, SelectionAtom } from '../src/types.js';
import { COLOR_A0, COLOR_A1, COLOR_B0, psetsPayload } from './fixtures.js';

const SPAN_H = 340 - 2 * 24;

function ribbonPaths(svg: SVGSVGElement): SVGPathElement[] {
  return [...svg.querySelectorAll<SVGPathElement>('path[data-ribbon]')];
}

describe('renderParallelSets', () => {
  it('allocates ribbon pixels proportional to counts within 1 px', () => {
    const payload = psetsPayload();
    const svg = renderParallelSets(payload);
    const paths = ribbonPaths(svg);
    expect(paths).toHaveLength(payload.ribbons.length);

    const total = payload.ribbons.reduce((s, r) => s + r.size, 0);
    let pxSum = 0;
    for (const path of paths) {
      const px = Number(path.getAttribute('data-px'));
      const size = Number(path.getAttribute('data-size'));
      pxSum += px;
      expect(Math.abs(px - (size / total) * SPAN_H)).toBeLessThan(1);
    }
    expect(pxSum).toBe(SPAN_H);
  });

  it('draws each ribbon with the same thickness at both ends', () => {
    const svg = renderParallelSets(psetsPayload());
    for (const path of ribbonPaths(svg)) {
      const d = path.getAttribute('d')!;
      const nums = d.match(/-?\d+(\.\d+)?/g)!.map(Number);
      // M x1 yA L x2 yB L x2 yB2 L x1 yA2 Z
      const [, yA, , yB, , yB2, , yA2] = nums;
      const px = Number(path.getAttribute('data-px'));
      expect(yA2 - yA).toBe(px);
      expect(yB2 - yB).toBe(px);
    }
  });

  it('draws exactly k ribbons for a diagonal contingency', () => {
    const payload: ParallelSetsPayload = {
      n: 9,
      blocks_a: [0, 1, 2].map(c => ({ cluster: c, size: 3, color: COLOR_A0 })),
      blocks_b: [0, 1, 2].map(c => ({ cluster: c, size: 3, color: COLOR_B0 })),
      ribbons: [
        { a: 0, b: 0, size: 3 },
        { a: 1, b: 1, size: 3 },
        { a: 2, b: 2, size: 3 },
      ],
    };
    const svg = renderParallelSets(payload);
    expect(ribbonPaths(svg)).toHaveLength(3);
  });

  it('sizes each block span as the sum of its ribbons and keeps its color', () => {
    const svg = renderParallelSets(psetsPayload());
    const blockA0 = svg.querySelector<SVGRectElement>('rect[data-block="a:0"]')!;
    expect(blockA0.getAttribute('fill')).toBe(COLOR_A0);
    expect(blockA0.getAttribute('data-size')).toBe('4');

    const mine = ribbonPaths(svg)
      .filter(p => p.getAttribute('data-ribbon')!.startsWith('0:'))
      .reduce((s, p) => s + Number(p.getAttribute('data-px')), 0);
    expect(Number(blockA0.getAttribute('height'))).toBe(mine);

    const blockA1 = svg.querySelector<SVGRectElement>('rect[data-block="a:1"]')!;
    expect(blockA1.getAttribute('fill')).toBe(COLOR_A1);
  });

  it('ribbons inherit the left-hand block color, translucent', () => {
    const svg = renderParallelSets(psetsPayload());
    const ribbon = svg.querySelector<SVGPathElement>('path[data-ribbon="1:0"]')!;
    expect(ribbon.getAttribute('fill')).toBe(COLOR_A1);
    expect(Number(ribbon.getAttribute('fill-opacity'))).toBeLessThan(1);
  });

  it('reports clicks as block and ribbon atoms', () => {
    const atoms: SelectionAtom[] = [];
    const svg = renderParallelSets(psetsPayload(),
      { onAtom: atom => atoms.push(atom) });
    document.body.appendChild(svg);

    svg.querySelector<SVGRectElement>('rect[data-block="b:1"]')!
      .dispatchEvent(new MouseEvent('click', { bubbles: true }));
    svg.querySelector<SVGPathElement>('path[data-ribbon="0:1"]')!
      .dispatchEvent(new MouseEvent('click', { bubbles: true }));

    expect(atoms).toEqual([
      { kind: 'block', modality: 'b', cluster: 1 },
      { kind: 'ribbon', a: 0, b: 1 },
    ]);
    svg.remove();
  });

  it('rejects a payload with missing ribbons', () => {
    const broken = { n: 3, blocks_a: [], blocks_b: [] } as unknown as ParallelSetsPayload;
    expect(() => renderParallelSets(broken)).toThrow(/ribbons/);
  });
});
