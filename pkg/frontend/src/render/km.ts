// Kaplan-Meier comparison: right-continuous step curves starting at
// S(0)=1, censor tick marks, and the log-rank p-value caption shown
// whenever two or more groups were compared. The p-value text comes from
// the service response literal, never reformatted client-side.

import type { SurvivalPayload } from '../types.js';
import { linearScale } from '../scales.js';
import { svgEl, svgRoot, svgText } from './svg.js';

const WIDTH = 460;
const HEIGHT = 320;
const PAD = 38;

export interface KmOptions {
  colors?: Record<string, string>;
  pValueLiteral?: string | null;
}

export function renderSurvival(payload: SurvivalPayload,
                               options: KmOptions = {}): SVGSVGElement {
  if (!Array.isArray(payload.curves) || payload.curves.length === 0) {
    throw new Error('survival payload has no curves');
  }
  const svg = svgRoot(WIDTH, HEIGHT);
  const maxTime = Math.max(
    1e-9,
    ...payload.curves.map(c => Math.max(...c.times, ...c.censor_times, 0)));
  const x = linearScale([0, maxTime], [PAD, WIDTH - PAD]);
  const y = linearScale([0, 1], [HEIGHT - PAD, PAD]);

  svg.appendChild(svgEl('line', {
    x1: PAD, y1: y(0), x2: WIDTH - PAD, y2: y(0), stroke: '#444',
  }));
  svg.appendChild(svgEl('line', {
    x1: PAD, y1: y(0), x2: PAD, y2: y(1), stroke: '#444',
  }));
  for (const tick of [0, 0.5, 1]) {
    svg.appendChild(svgText(tick.toString(),
      { x: PAD - 22, y: y(tick) + 4, 'font-size': 9 }));
  }

  payload.curves.forEach((curve, idx) => {
    const color = options.colors?.[curve.label] ?? '#555555';
    if (curve.times.length !== curve.survival.length) {
      throw new Error(`curve ${curve.label} has mismatched steps`);
    }
    // right-continuous staircase from (0, 1)
    const points: string[] = [`${x(0)},${y(1)}`];
    let level = 1;
    for (let i = 0; i < curve.times.length; i++) {
      points.push(`${x(curve.times[i])},${y(level)}`);
      level = curve.survival[i];
      points.push(`${x(curve.times[i])},${y(level)}`);
    }
    points.push(`${x(maxTime)},${y(level)}`);
    svg.appendChild(svgEl('polyline', {
      points: points.join(' '),
      fill: 'none', stroke: color, 'stroke-width': 1.6,
      'data-curve': curve.label,
    }));

    for (const t of curve.censor_times) {
      let lvl = 1;
      for (let i = 0; i < curve.times.length && curve.times[i] <= t; i++) {
        lvl = curve.survival[i];
      }
      svg.appendChild(svgEl('line', {
        x1: x(t), y1: y(lvl) - 4, x2: x(t), y2: y(lvl) + 4,
        stroke: color, 'stroke-width': 1.2,
        'data-censor': curve.label,
      }));
    }

    svg.appendChild(svgText(`${curve.label} (n=${curve.n_total})`, {
      x: WIDTH - PAD - 120, y: PAD + 14 * idx, fill: color, 'font-size': 10,
    }));
  });

  if (payload.logrank !== null) {
    const literal = options.pValueLiteral ?? String(payload.logrank.p_value);
    const caption = svgText(`logrank p = ${literal}`, {
      x: PAD, y: HEIGHT - PAD + 24, 'font-size': 12,
    });
    caption.setAttribute('data-pvalue', literal);
    svg.appendChild(caption);
  }
  return svg;
}
