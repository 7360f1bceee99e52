// @vitest-environment jsdom
import { describe, expect, it } from 'vitest';
import { renderSurvival } from '../src/render/km.js';
import { linearScale } from '../src/scales.js';
import type { SurvivalPayload } from '../src/types.js';
import { COLOR_A0, COLOR_A1, survivalPayload } from './fixtures.js';

const WIDTH = 460;
const HEIGHT = 320;
const PAD = 38;

function polylinePoints(svg: SVGSVGElement, label: string): [number, number][] {
  const el = svg.querySelector(`polyline[data-curve="${label}"]`)!;
  return el.getAttribute('points')!.split(' ')
    .map(pair => pair.split(',').map(Number) as [number, number]);
}

describe('renderSurvival', () => {
  it('draws a right-continuous staircase from S(0)=1', () => {
    const payload = survivalPayload();
    const svg = renderSurvival(payload);
    const maxTime = 7;  // largest censor time in the fixture
    const x = linearScale([0, maxTime], [PAD, WIDTH - PAD]);
    const y = linearScale([0, 1], [HEIGHT - PAD, PAD]);

    const pts = polylinePoints(svg, 'sel_1');
    // (0,1), arrive at t=2 on the old level, drop, hold to t=4, drop, run out
    expect(pts).toEqual([
      [x(0), y(1)],
      [x(2), y(1)], [x(2), y(0.75)],
      [x(4), y(0.75)], [x(4), y(0.375)],
      [x(maxTime), y(0.375)],
    ]);
  });

  it('renders a curve with no steps as a flat line at 1', () => {
    const payload: SurvivalPayload = {
      curves: [{
        label: 'flat', n_total: 3,
        times: [], n_at_risk: [], events: [], survival: [], variance: [],
        censor_times: [1, 2, 3], variance_saturated: false,
      }],
      logrank: null,
      revision: 1,
      phase: 'integrated',
    };
    const svg = renderSurvival(payload);
    const y = linearScale([0, 1], [HEIGHT - PAD, PAD]);
    const pts = polylinePoints(svg, 'flat');
    expect(pts.length).toBeGreaterThanOrEqual(2);
    for (const [, py] of pts) expect(py).toBe(y(1));
  });

  it('marks censor times with ticks at the current level', () => {
    const svg = renderSurvival(survivalPayload());
    const maxTime = 7;
    const x = linearScale([0, maxTime], [PAD, WIDTH - PAD]);
    const y = linearScale([0, 1], [HEIGHT - PAD, PAD]);
    const tick = svg.querySelector('line[data-censor="sel_1"]')!;
    // censored at t=3, after the t=2 step: level 0.75
    expect(Number(tick.getAttribute('x1'))).toBeCloseTo(x(3), 9);
    expect(Number(tick.getAttribute('y1'))).toBeCloseTo(y(0.75) - 4, 9);
    expect(svg.querySelectorAll('line[data-censor="sel_2"]')).toHaveLength(2);
  });

  it('shows the p-value literal verbatim, never reformatted', () => {
    const svg = renderSurvival(survivalPayload(), { pValueLiteral: '1e-05' });
    const caption = svg.querySelector('[data-pvalue]')!;
    expect(caption.getAttribute('data-pvalue')).toBe('1e-05');
    expect(caption.textContent).toBe('logrank p = 1e-05');

    const plain = renderSurvival(survivalPayload(), { pValueLiteral: '0.03125' });
    expect(plain.querySelector('[data-pvalue]')!.textContent)
      .toBe('logrank p = 0.03125');
  });

  it('omits the p-value caption when no test was run', () => {
    const payload = survivalPayload();
    payload.logrank = null;
    const svg = renderSurvival(payload);
    expect(svg.querySelector('[data-pvalue]')).toBeNull();
  });

  it('colors curves from the selection color map', () => {
    const svg = renderSurvival(survivalPayload(), {
      colors: { sel_1: COLOR_A0, sel_2: COLOR_A1 },
    });
    expect(svg.querySelector('polyline[data-curve="sel_1"]')!
      .getAttribute('stroke')).toBe(COLOR_A0);
    expect(svg.querySelector('polyline[data-curve="sel_2"]')!
      .getAttribute('stroke')).toBe(COLOR_A1);
  });

  it('rejects mismatched step arrays and empty payloads', () => {
    const payload = survivalPayload();
    payload.curves[0].survival = [0.75];
    expect(() => renderSurvival(payload)).toThrow(/mismatched/);
    expect(() => renderSurvival({
      curves: [], logrank: null, revision: 0, phase: 'integrated',
    })).toThrow(/no curves/);
  });
});
